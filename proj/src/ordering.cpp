#include "mpdag/ordering.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>

#include "mpdag/error.hpp"
#include "mpdag/meek.hpp"

namespace mpdag {

namespace {

// Connected components of the undirected part of g, ordered by smallest member.
std::vector<NodeSet> undirected_components(const Pdag& g) {
  std::vector<NodeSet> comps;
  std::vector<char> seen(g.size(), 0);
  for (Node s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    NodeSet comp;
    std::deque<Node> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      Node v = queue.front();
      queue.pop_front();
      comp.insert(v);
      for (Node w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

NodeSet intersect(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

const std::string& smallest_name(const Pdag& g, const NodeSet& s) {
  const std::string* best = nullptr;
  for (Node v : s)
    if (!best || g.name(v) < *best) best = &g.name(v);
  return *best;
}

}  // namespace

std::vector<NodeSet> bucket_decomposition(const Pdag& g, const NodeSet& d) {
  require_nodes(g, d, "node set");
  std::vector<NodeSet> out;
  for (const auto& comp : undirected_components(g)) {
    NodeSet b = intersect(comp, d);
    if (!b.empty()) out.push_back(std::move(b));
  }
  return out;
}

OrderedBuckets pco(const Pdag& g, const NodeSet& d) {
  require_nodes(g, d, "node set");
  if (g.graph_class() == GraphClass::pdag && !is_mpdag(g))
    throw GraphError("partial causal ordering requires a maximally oriented graph");

  std::vector<NodeSet> remaining = undirected_components(g);
  std::vector<Node> owner(g.size());
  for (std::size_t i = 0; i < remaining.size(); ++i)
    for (Node v : remaining[i]) owner[v] = i;
  std::vector<char> removed(remaining.size(), 0);

  // Bucket c is removable when every edge to a remaining bucket points into c.
  auto removable = [&](std::size_t c) {
    for (Node v : remaining[c])
      for (Node w : g.adjacents(v)) {
        std::size_t o = owner[w];
        if (o == c || removed[o]) continue;
        if (!g.directed(w, v)) return false;
      }
    return true;
  };

  std::deque<NodeSet> order;
  for (std::size_t left = remaining.size(); left > 0; --left) {
    std::optional<std::size_t> pick;
    for (std::size_t c = 0; c < remaining.size(); ++c) {
      if (removed[c] || !removable(c)) continue;
      if (!pick || smallest_name(g, remaining[c]) > smallest_name(g, remaining[*pick])) pick = c;
    }
    if (!pick) throw GraphError("no removable bucket; graph has a partially directed cycle");
    removed[*pick] = 1;
    NodeSet b = intersect(remaining[*pick], d);
    if (!b.empty()) order.push_front(std::move(b));
  }
  return OrderedBuckets{{order.begin(), order.end()}};
}

}  // namespace mpdag
