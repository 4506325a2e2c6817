#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mpdag/meek.hpp"

#ifndef MPDAG_DATA_DIR
#error "MPDAG_DATA_DIR must point at the data directory"
#endif

namespace testsupport {

std::string data_path(const std::string& file) { return std::string(MPDAG_DATA_DIR) + "/" + file; }

Pdag load(const std::string& file) {
  std::ifstream in(data_path(file));
  std::ostringstream ss;
  ss << in.rdbuf();
  return mpdag::parse_graph(ss.str());
}

Pdag random_dag(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("V" + std::to_string(i + 1));
  std::vector<Node> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(p);
  mpdag::EdgeMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) m.set_directed(order[i], order[j]);
  return Pdag(names, std::move(m), mpdag::GraphClass::dag);
}

Pdag random_mpdag(std::size_t n, double p, double knowledge, std::mt19937_64& rng) {
  const Pdag dag = random_dag(n, p, rng);
  const Pdag cpdag = mpdag::cpdag_of(dag);
  std::bernoulli_distribution coin(knowledge);
  mpdag::BackgroundKnowledge bk;
  for (auto [a, b] : dag.directed_edges())
    if (cpdag.undirected(a, b) && coin(rng)) bk.required_directed.emplace_back(dag.name(a), dag.name(b));
  return mpdag::close(cpdag, bk);
}

std::vector<Pdag> mpdag_corpus(std::size_t count, std::size_t max_nodes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(2, max_nodes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::set<std::string> seen;
  std::vector<Pdag> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < 200 * count; ++attempt) {
    Pdag g = random_mpdag(size(rng), 0.3 + 0.6 * unit(rng), unit(rng), rng);
    if (seen.insert(mpdag::write_graph(g)).second) out.push_back(std::move(g));
  }
  return out;
}

namespace {

void extend_paths(const Pdag& g, Node b, std::vector<Node>& cur, std::vector<bool>& used,
                  std::vector<mpdag::Path>& out) {
  const Node last = cur.back();
  if (last == b) {
    out.push_back({cur});
    return;
  }
  for (Node w = 0; w < g.size(); ++w) {
    if (used[w] || !g.adjacent(last, w)) continue;
    used[w] = true;
    cur.push_back(w);
    extend_paths(g, b, cur, used, out);
    cur.pop_back();
    used[w] = false;
  }
}

}  // namespace

std::vector<mpdag::Path> simple_paths(const Pdag& g, Node a, Node b) {
  std::vector<mpdag::Path> out;
  std::vector<Node> cur{a};
  std::vector<bool> used(g.size(), false);
  used[a] = true;
  extend_paths(g, b, cur, used, out);
  return out;
}

bool brute_possibly_causal(const Pdag& g, const mpdag::Path& p) {
  for (std::size_t i = 0; i < p.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < p.nodes.size(); ++j)
      if (g.directed(p.nodes[j], p.nodes[i])) return false;
  return true;
}

bool brute_not_amenable(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  for (Node x : xs)
    for (Node y : ys)
      for (const auto& p : simple_paths(g, x, y)) {
        bool proper = true;
        for (std::size_t i = 1; i < p.nodes.size(); ++i) proper = proper && !xs.count(p.nodes[i]);
        if (proper && g.undirected(p.nodes[0], p.nodes[1]) && brute_possibly_causal(g, p)) return true;
      }
  return false;
}

NodeSet brute_possible_descendants(const Pdag& g, Node a) {
  NodeSet out{a};
  for (Node b = 0; b < g.size(); ++b) {
    if (b == a) continue;
    for (const auto& p : simple_paths(g, a, b))
      if (brute_possibly_causal(g, p)) {
        out.insert(b);
        break;
      }
  }
  return out;
}

std::vector<NodeSet> subsets(const std::vector<Node>& universe) {
  std::vector<NodeSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << universe.size()); ++mask) {
    NodeSet s;
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (mask >> i & 1) s.insert(universe[i]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::pair<NodeSet, NodeSet>> small_query_pairs(std::size_t n) {
  std::vector<NodeSet> small;
  for (Node a = 0; a < n; ++a) {
    small.push_back({a});
    for (Node b = a + 1; b < n; ++b) small.push_back({a, b});
  }
  std::vector<std::pair<NodeSet, NodeSet>> out;
  for (const auto& x : small)
    for (const auto& y : small) {
      bool disjoint = true;
      for (Node v : y) disjoint = disjoint && !x.count(v);
      if (disjoint) out.emplace_back(x, y);
    }
  return out;
}

bool refines_bucket_order(const Pdag& dag, const std::vector<NodeSet>& buckets) {
  // Impossible exactly when a directed path leads from a later bucket back to
  // an earlier one.
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    const NodeSet reach = mpdag::relatives(dag, buckets[j], mpdag::Relation::descendants);
    for (std::size_t i = 0; i < j; ++i)
      for (Node v : buckets[i])
        if (reach.count(v)) return false;
  }
  return true;
}

}  // namespace testsupport
