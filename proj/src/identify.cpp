#include "mpdag/identify.hpp"

#include <algorithm>
#include <iterator>
#include <optional>

#include "mpdag/error.hpp"
#include "mpdag/meek.hpp"
#include "mpdag/ordering.hpp"

namespace mpdag {

namespace {

void require_mpdag(const Pdag& g) {
  if (g.graph_class() == GraphClass::pdag && !is_mpdag(g))
    throw GraphError("identification requires a maximally oriented graph");
}

NameSet names_of(const Pdag& g, const NodeSet& s) {
  NameSet out;
  for (Node v : s) out.insert(g.name(v));
  return out;
}

}  // namespace

IdFormula causal_identification_formula(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  require_mpdag(g);
  const NodeSet anc = ancestors_avoiding(g, ys, xs);
  IdFormula f;
  for (const auto& bucket : pco(g, anc).buckets)
    f.factors.push_back({names_of(g, bucket), names_of(g, relatives(g, bucket, Relation::parents))});
  NodeSet rest;
  std::set_difference(anc.begin(), anc.end(), ys.begin(), ys.end(),
                      std::inserter(rest, rest.end()));
  f.integrate_over = names_of(g, rest);
  f.intervened = names_of(g, xs);
  f.response = names_of(g, ys);
  return f;
}

IdentifyResult identify(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  require_mpdag(g);
  if (ys.empty()) throw ArgumentError("response set must be nonempty");
  require_nodes(g, ys, "Y");
  require_nodes(g, xs, "X");
  for (Node x : xs)
    if (ys.count(x)) throw ArgumentError("X and Y overlap at '" + g.name(x) + "'");

  if (!xs.empty()) {
    if (auto w = shortest_amenability_witness(g, xs, ys)) return IdentifyResult::not_identified(*w);
    if (!exists_possibly_causal(g, xs, ys)) {
      IdFormula f;
      f.factors.push_back({names_of(g, ys), {}});
      f.intervened = names_of(g, xs);
      f.response = names_of(g, ys);
      return IdentifyResult::identified(std::move(f));
    }
  }
  return IdentifyResult::identified(causal_identification_formula(g, xs, ys));
}

IdFormula truncated_factorization(const Pdag& g, const NodeSet& xs) {
  require_mpdag(g);
  require_nodes(g, xs, "X");
  for (Node x : xs)
    for (Node v : g.neighbors(x))
      if (!xs.count(v))
        throw NotTruncatable("undirected edge " + g.name(x) + " -- " + g.name(v) +
                             " leaves the intervention set");
  IdFormula f;
  NodeSet rest;
  for (const auto& bucket : pco(g, g.all_nodes()).buckets) {
    if (std::any_of(bucket.begin(), bucket.end(), [&](Node v) { return xs.count(v) > 0; }))
      continue;
    f.factors.push_back({names_of(g, bucket), names_of(g, relatives(g, bucket, Relation::parents))});
    rest.insert(bucket.begin(), bucket.end());
  }
  f.intervened = names_of(g, xs);
  f.response = names_of(g, rest);
  return f;
}

bool check_adjustment(const Pdag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs) {
  require_mpdag(g);
  require_disjoint(g, xs, ys);
  require_nodes(g, zs, "Z");
  for (Node z : zs)
    if (xs.count(z) || ys.count(z)) throw ArgumentError("Z must be disjoint from X and Y");

  if (exists_proper_pcp_starting_undirected(g, xs, ys)) return false;
  const NodeSet forb = forbidden_set(g, xs, ys);
  for (Node z : zs)
    if (forb.count(z)) return false;
  bool blocked = true;
  for_each_open_noncausal_path(g, xs, ys, zs, [&](const Path&) {
    blocked = false;
    return false;
  });
  return blocked;
}

const char* to_string(AdjustmentOutcome o) {
  switch (o) {
    case AdjustmentOutcome::set_found: return "set_found";
    case AdjustmentOutcome::none_exists: return "none_exists";
    case AdjustmentOutcome::zero_effect: return "zero_effect";
  }
  return "?";
}

const char* to_string(NoAdjustmentReason r) {
  switch (r) {
    case NoAdjustmentReason::not_amenable: return "not_amenable";
    case NoAdjustmentReason::blocked_path_unachievable: return "blocked_path_unachievable";
  }
  return "?";
}

namespace {

AdjustmentResult none(NoAdjustmentReason reason) {
  return AdjustmentResult{AdjustmentOutcome::none_exists, {}, reason};
}

// Subsets of `universe` by increasing size, then lexicographic position.
std::optional<NodeSet> search_subsets(const Pdag& g, const NodeSet& xs, const NodeSet& ys,
                                      const std::vector<Node>& universe) {
  const std::size_t n = universe.size();
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      NodeSet z;
      for (auto i : pick) z.insert(universe[i]);
      if (check_adjustment(g, xs, ys, z)) return z;
      // next k-combination
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace

AdjustmentResult find_adjustment_set(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  require_mpdag(g);
  require_disjoint(g, xs, ys);

  if (xs.size() == 1 && ys.size() == 1) {
    const NodeSet pa = relatives(g, xs, Relation::parents);
    if (pa.count(*ys.begin())) return AdjustmentResult{AdjustmentOutcome::zero_effect, {}, {}};
    if (exists_proper_pcp_starting_undirected(g, xs, ys))
      return none(NoAdjustmentReason::not_amenable);
    if (check_adjustment(g, xs, ys, pa)) return AdjustmentResult{AdjustmentOutcome::set_found, pa, {}};
  } else if (exists_proper_pcp_starting_undirected(g, xs, ys)) {
    return none(NoAdjustmentReason::not_amenable);
  }

  const NodeSet forb = forbidden_set(g, xs, ys);
  std::vector<Node> universe;
  for (Node v = 0; v < g.size(); ++v)
    if (!xs.count(v) && !ys.count(v) && !forb.count(v)) universe.push_back(v);
  if (universe.size() > kMaxAdjustmentUniverse)
    throw ArgumentError("adjustment search universe of " + std::to_string(universe.size()) +
                        " nodes exceeds the exhaustive-search limit");
  if (auto z = search_subsets(g, xs, ys, universe))
    return AdjustmentResult{AdjustmentOutcome::set_found, *z, {}};
  return none(NoAdjustmentReason::blocked_path_unachievable);
}

}  // namespace mpdag
