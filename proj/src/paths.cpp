#include "mpdag/paths.hpp"

#include <algorithm>

#include "mpdag/error.hpp"

namespace mpdag {

void require_path(const Pdag& g, const Path& p) {
  if (p.nodes.size() < 2) throw ArgumentError("a path needs at least two nodes");
  std::vector<char> seen(g.size(), 0);
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    Node v = p.nodes[i];
    if (v >= g.size()) throw ArgumentError("path node outside the graph");
    if (seen[v]) throw ArgumentError("path repeats node '" + g.name(v) + "'");
    seen[v] = 1;
    if (i > 0 && !g.adjacent(p.nodes[i - 1], v))
      throw ArgumentError("'" + g.name(p.nodes[i - 1]) + "' and '" + g.name(v) +
                          "' are not adjacent");
  }
}

bool is_collider(const Pdag& g, Node prev, Node mid, Node next) {
  return g.directed(prev, mid) && g.directed(next, mid);
}

bool is_definite_noncollider(const Pdag& g, Node prev, Node mid, Node next) {
  return g.directed(mid, prev) || g.directed(mid, next) ||
         (g.undirected(prev, mid) && g.undirected(mid, next) && !g.adjacent(prev, next));
}

PathStatus classify_path(const Pdag& g, const Path& p, const NodeSet& sources) {
  require_path(g, p);
  PathStatus s;
  const auto& v = p.nodes;
  s.possibly_causal = true;
  for (std::size_t i = 0; i < v.size() && s.possibly_causal; ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (g.directed(v[j], v[i])) {
        s.possibly_causal = false;
        break;
      }
  s.definite_status = true;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (!is_collider(g, v[i - 1], v[i], v[i + 1]) &&
        !is_definite_noncollider(g, v[i - 1], v[i], v[i + 1]))
      s.definite_status = false;
  s.proper = sources.count(v.front()) > 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (sources.count(v[i])) s.proper = false;
  return s;
}

std::string format_path(const Pdag& g, const Path& p) {
  std::string out;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    if (i > 0) {
      switch (g.edges().link(p.nodes[i - 1], p.nodes[i])) {
        case Link::to: out += " -> "; break;
        case Link::from: out += " <- "; break;
        case Link::undirected: out += " -- "; break;
        case Link::none: out += " ?? "; break;
      }
    }
    out += g.name(p.nodes[i]);
  }
  return out;
}

void require_disjoint(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  if (xs.empty() || ys.empty()) throw ArgumentError("node sets must be nonempty");
  require_nodes(g, xs, "X");
  require_nodes(g, ys, "Y");
  for (Node x : xs)
    if (ys.count(x)) throw ArgumentError("X and Y overlap at '" + g.name(x) + "'");
}

namespace {

struct PcpSearch {
  const Pdag& g;
  const NodeSet& xs;
  const NodeSet& ys;
  const std::function<bool(const Path&)>& visit;
  Path path;
  std::vector<char> on_path;
  bool stopped = false;

  // Extends the current path; every node appended must not point into any
  // node already on the path, which is the possibly-causal condition.
  void extend() {
    const Node cur = path.nodes.back();
    for (Node w = 0; w < g.size() && !stopped; ++w) {
      if (on_path[w] || xs.count(w) || !g.adjacent(cur, w)) continue;
      bool ok = true;
      for (Node p : path.nodes)
        if (g.directed(w, p)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      path.nodes.push_back(w);
      on_path[w] = 1;
      if (ys.count(w) && !visit(path)) stopped = true;
      if (!stopped) extend();
      on_path[w] = 0;
      path.nodes.pop_back();
    }
  }
};

}  // namespace

void for_each_proper_possibly_causal_path(const Pdag& g, const NodeSet& xs, const NodeSet& ys,
                                          bool first_edge_undirected,
                                          const std::function<bool(const Path&)>& visit) {
  PcpSearch s{g, xs, ys, visit, {}, std::vector<char>(g.size(), 0)};
  for (Node x : xs) {
    for (Node w = 0; w < g.size() && !s.stopped; ++w) {
      if (xs.count(w)) continue;
      Link l = g.edges().link(x, w);
      if (first_edge_undirected ? l != Link::undirected : (l != Link::to && l != Link::undirected))
        continue;
      s.path.nodes = {x, w};
      s.on_path[x] = s.on_path[w] = 1;
      if (ys.count(w) && !visit(s.path)) s.stopped = true;
      if (!s.stopped) s.extend();
      s.on_path[x] = s.on_path[w] = 0;
    }
    if (s.stopped) break;
  }
}

bool exists_proper_pcp_starting_undirected(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  require_disjoint(g, xs, ys);
  bool found = false;
  for_each_proper_possibly_causal_path(g, xs, ys, true, [&](const Path&) {
    found = true;
    return false;
  });
  return found;
}

namespace {

bool witness_less(const Pdag& g, const Path& a, const Path& b) {
  if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
  return std::lexicographical_compare(
      a.nodes.begin(), a.nodes.end(), b.nodes.begin(), b.nodes.end(),
      [&](Node u, Node v) { return g.name(u) < g.name(v); });
}

}  // namespace

std::vector<Path> amenability_witnesses(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  require_disjoint(g, xs, ys);
  std::vector<Path> out;
  for_each_proper_possibly_causal_path(g, xs, ys, true, [&](const Path& p) {
    out.push_back(p);
    return true;
  });
  std::sort(out.begin(), out.end(),
            [&](const Path& a, const Path& b) { return witness_less(g, a, b); });
  return out;
}

std::optional<Path> shortest_amenability_witness(const Pdag& g, const NodeSet& xs,
                                                 const NodeSet& ys) {
  require_disjoint(g, xs, ys);
  std::optional<Path> best;
  for_each_proper_possibly_causal_path(g, xs, ys, true, [&](const Path& p) {
    if (!best || witness_less(g, p, *best)) best = p;
    return true;
  });
  return best;
}

bool exists_possibly_causal(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  require_disjoint(g, xs, ys);
  NodeSet reach = relatives(g, xs, Relation::possible_descendants);
  return std::any_of(ys.begin(), ys.end(), [&](Node y) { return reach.count(y) > 0; });
}

namespace {

// Depth-first search over simple definite status paths that stay d-connecting
// given Z. `on_complete` is called for every path ending in Y.
struct ConnectingSearch {
  const Pdag& g;
  const NodeSet& ys;
  const NodeSet& zs;
  const NodeSet& banned;  // nodes that may not appear after the first node
  NodeSet ancestors_of_z;
  const std::function<bool(const Path&)>& on_complete;
  Path path;
  std::vector<char> on_path;
  bool stopped = false;

  bool interior_open(Node prev, Node mid, Node next) const {
    if (is_collider(g, prev, mid, next)) return ancestors_of_z.count(mid) > 0;
    if (is_definite_noncollider(g, prev, mid, next)) return zs.count(mid) == 0;
    return false;  // not of definite status
  }

  void extend() {
    const Node cur = path.nodes.back();
    for (Node w = 0; w < g.size() && !stopped; ++w) {
      if (on_path[w] || banned.count(w) || !g.adjacent(cur, w)) continue;
      if (path.nodes.size() >= 2 && !interior_open(path.nodes[path.nodes.size() - 2], cur, w))
        continue;
      path.nodes.push_back(w);
      on_path[w] = 1;
      if (ys.count(w) && !on_complete(path)) stopped = true;
      if (!stopped) extend();
      on_path[w] = 0;
      path.nodes.pop_back();
    }
  }

  void run(const NodeSet& xs) {
    for (Node x : xs) {
      if (stopped) break;
      path.nodes = {x};
      on_path[x] = 1;
      extend();
      on_path[x] = 0;
    }
  }
};

}  // namespace

bool d_separated(const Pdag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs) {
  require_disjoint(g, xs, ys);
  require_nodes(g, zs, "Z");
  for (Node z : zs)
    if (xs.count(z) || ys.count(z)) throw ArgumentError("Z must be disjoint from X and Y");
  bool connected = false;
  const NodeSet none;
  const std::function<bool(const Path&)> found = [&](const Path&) {
    connected = true;
    return false;
  };
  ConnectingSearch s{g, ys, zs, none, relatives(g, zs, Relation::ancestors), found,
                     {}, std::vector<char>(g.size(), 0)};
  s.run(xs);
  return !connected;
}

void for_each_open_noncausal_path(const Pdag& g, const NodeSet& xs, const NodeSet& ys,
                                  const NodeSet& zs,
                                  const std::function<bool(const Path&)>& visit) {
  require_disjoint(g, xs, ys);
  require_nodes(g, zs, "Z");
  const std::function<bool(const Path&)> filter = [&](const Path& p) {
    if (classify_path(g, p, xs).possibly_causal) return true;
    return visit(p);
  };
  ConnectingSearch s{g, ys, zs, xs, relatives(g, zs, Relation::ancestors), filter,
                     {}, std::vector<char>(g.size(), 0)};
  s.run(xs);
}

NodeSet forbidden_set(const Pdag& g, const NodeSet& xs, const NodeSet& ys) {
  require_disjoint(g, xs, ys);
  NodeSet on_paths;
  for_each_proper_possibly_causal_path(g, xs, ys, false, [&](const Path& p) {
    for (std::size_t i = 1; i < p.nodes.size(); ++i) on_paths.insert(p.nodes[i]);
    return true;
  });
  NodeSet out;
  if (on_paths.empty()) return out;
  for (Node w : relatives(g, on_paths, Relation::possible_descendants))
    if (!xs.count(w)) out.insert(w);
  return out;
}

}  // namespace mpdag
