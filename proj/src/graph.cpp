#include "mpdag/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "mpdag/error.hpp"
#include "mpdag/meek.hpp"

namespace mpdag {

const char* to_string(GraphClass cls) {
  switch (cls) {
    case GraphClass::pdag: return "pdag";
    case GraphClass::dag: return "dag";
    case GraphClass::cpdag: return "cpdag";
    case GraphClass::mpdag: return "mpdag";
  }
  return "?";
}

void EdgeMatrix::set_directed(Node tail, Node head) {
  links_[tail * n_ + head] = Link::to;
  links_[head * n_ + tail] = Link::from;
}

void EdgeMatrix::set_undirected(Node a, Node b) {
  links_[a * n_ + b] = Link::undirected;
  links_[b * n_ + a] = Link::undirected;
}

void EdgeMatrix::clear(Node a, Node b) {
  links_[a * n_ + b] = Link::none;
  links_[b * n_ + a] = Link::none;
}

bool valid_node_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.';
  });
}

bool directed_acyclic(const EdgeMatrix& edges) {
  const std::size_t n = edges.size();
  std::vector<std::size_t> indegree(n, 0);
  for (Node i = 0; i < n; ++i)
    for (Node j = 0; j < n; ++j)
      if (edges.directed(i, j)) ++indegree[j];
  std::vector<Node> ready;
  for (Node i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    Node v = ready.back();
    ready.pop_back();
    ++seen;
    for (Node w = 0; w < n; ++w)
      if (edges.directed(v, w) && --indegree[w] == 0) ready.push_back(w);
  }
  return seen == n;
}

Pdag::Pdag(std::vector<std::string> names, EdgeMatrix edges, GraphClass cls)
    : names_(std::move(names)), edges_(std::move(edges)), class_(GraphClass::pdag) {
  if (edges_.size() != names_.size())
    throw GraphError("edge matrix size does not match node count");
  for (Node v = 0; v < names_.size(); ++v) {
    if (!valid_node_name(names_[v])) throw GraphError("invalid node name '" + names_[v] + "'");
    if (!index_.emplace(names_[v], v).second)
      throw GraphError("duplicate node name '" + names_[v] + "'");
    if (edges_.adjacent(v, v)) throw GraphError("self-loop at '" + names_[v] + "'");
  }
  if (!directed_acyclic(edges_)) throw GraphError("graph contains a directed cycle");
  if (cls != GraphClass::pdag) *this = retagged(cls);
}

Pdag Pdag::from_edges(std::vector<std::string> names, const std::vector<NamedEdge>& edges,
                      GraphClass cls) {
  std::unordered_map<std::string, Node> index;
  for (Node v = 0; v < names.size(); ++v) index.emplace(names[v], v);
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = index.emplace(s, names.size());
    if (inserted) names.push_back(s);
    return it->second;
  };
  std::vector<std::tuple<Node, Node, EdgeKind>> resolved;
  for (const auto& e : edges) resolved.emplace_back(intern(e.a), intern(e.b), e.kind);
  EdgeMatrix m(names.size());
  for (auto [a, b, kind] : resolved) {
    if (a == b) throw GraphError("self-loop at '" + names[a] + "'");
    if (m.adjacent(a, b))
      throw GraphError("more than one edge between '" + names[a] + "' and '" + names[b] + "'");
    if (kind == EdgeKind::directed)
      m.set_directed(a, b);
    else
      m.set_undirected(a, b);
  }
  return Pdag(std::move(names), std::move(m), cls);
}

std::optional<Node> Pdag::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Node Pdag::id(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw ArgumentError("unknown node '" + std::string(name) + "'");
}

NodeSet Pdag::ids(std::span<const std::string> names) const {
  NodeSet out;
  for (const auto& n : names) out.insert(id(n));
  return out;
}

NodeSet Pdag::ids(std::initializer_list<std::string_view> names) const {
  NodeSet out;
  for (auto n : names) out.insert(id(n));
  return out;
}

NodeSet Pdag::all_nodes() const {
  NodeSet out;
  for (Node v = 0; v < size(); ++v) out.insert(out.end(), v);
  return out;
}

std::vector<Node> Pdag::parents(Node v) const {
  std::vector<Node> out;
  for (Node u = 0; u < size(); ++u)
    if (edges_.directed(u, v)) out.push_back(u);
  return out;
}

std::vector<Node> Pdag::children(Node v) const {
  std::vector<Node> out;
  for (Node u = 0; u < size(); ++u)
    if (edges_.directed(v, u)) out.push_back(u);
  return out;
}

std::vector<Node> Pdag::neighbors(Node v) const {
  std::vector<Node> out;
  for (Node u = 0; u < size(); ++u)
    if (edges_.undirected(v, u)) out.push_back(u);
  return out;
}

std::vector<Node> Pdag::adjacents(Node v) const {
  std::vector<Node> out;
  for (Node u = 0; u < size(); ++u)
    if (edges_.adjacent(v, u)) out.push_back(u);
  return out;
}

std::vector<std::pair<Node, Node>> Pdag::directed_edges() const {
  std::vector<std::pair<Node, Node>> out;
  for (Node a = 0; a < size(); ++a)
    for (Node b = 0; b < size(); ++b)
      if (edges_.directed(a, b)) out.emplace_back(a, b);
  return out;
}

std::vector<std::pair<Node, Node>> Pdag::undirected_edges() const {
  std::vector<std::pair<Node, Node>> out;
  for (Node a = 0; a < size(); ++a)
    for (Node b = a + 1; b < size(); ++b)
      if (edges_.undirected(a, b)) out.emplace_back(a, b);
  return out;
}

std::size_t Pdag::edge_count() const {
  std::size_t count = 0;
  for (Node a = 0; a < size(); ++a)
    for (Node b = a + 1; b < size(); ++b)
      if (edges_.adjacent(a, b)) ++count;
  return count;
}

std::vector<NamedEdge> Pdag::named_edges() const {
  std::vector<NamedEdge> out;
  for (Node a = 0; a < size(); ++a) {
    for (Node b = a + 1; b < size(); ++b) {
      switch (edges_.link(a, b)) {
        case Link::none: break;
        case Link::to: out.push_back({names_[a], names_[b], EdgeKind::directed}); break;
        case Link::from: out.push_back({names_[b], names_[a], EdgeKind::directed}); break;
        case Link::undirected: out.push_back({names_[a], names_[b], EdgeKind::undirected}); break;
      }
    }
  }
  return out;
}

Pdag Pdag::retagged(GraphClass cls) const {
  Pdag out = *this;
  switch (cls) {
    case GraphClass::pdag: break;
    case GraphClass::dag:
      if (!undirected_edges().empty()) throw GraphError("a DAG cannot contain undirected edges");
      break;
    case GraphClass::mpdag:
      if (!is_mpdag(*this)) throw GraphError("graph is not maximally oriented");
      break;
    case GraphClass::cpdag:
      if (!is_cpdag(*this)) throw GraphError("graph is not a CPDAG");
      break;
  }
  out.class_ = cls;
  return out;
}

bool Pdag::operator==(const Pdag& other) const {
  if (size() != other.size()) return false;
  // Compare by name so that graphs with permuted node orders are equal.
  for (Node a = 0; a < size(); ++a) {
    auto oa = other.find(names_[a]);
    if (!oa) return false;
    for (Node b = 0; b < size(); ++b) {
      if (a == b) continue;
      auto ob = other.find(names_[b]);
      if (!ob) return false;
      if (edges_.link(a, b) != other.edges_.link(*oa, *ob)) return false;
    }
  }
  return true;
}

std::string Pdag::set_to_string(const NodeSet& s) const {
  std::vector<std::string> sorted;
  for (Node v : s) sorted.push_back(name(v));
  std::sort(sorted.begin(), sorted.end());
  std::string out = "{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) out += ",";
    out += sorted[i];
  }
  return out + "}";
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Pdag parse_graph(std::string_view text) {
  std::vector<std::string> names;
  std::unordered_map<std::string, Node> index;
  std::vector<std::tuple<Node, Node, EdgeKind, std::size_t>> edges;
  auto intern = [&](std::string_view s, std::size_t line_no) {
    if (!valid_node_name(s))
      throw ParseError(line_no, "invalid node name '" + std::string(s) + "'");
    auto [it, inserted] = index.emplace(std::string(s), names.size());
    if (inserted) names.emplace_back(s);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tokens.size() == 2 && tokens[0] == "node") {
      intern(tokens[1], line_no);
    } else if (tokens.size() == 3 && (tokens[1] == "->" || tokens[1] == "--")) {
      Node a = intern(tokens[0], line_no);
      Node b = intern(tokens[2], line_no);
      if (a == b) throw ParseError(line_no, "self-loop at '" + std::string(tokens[0]) + "'");
      edges.emplace_back(a, b, tokens[1] == "->" ? EdgeKind::directed : EdgeKind::undirected,
                         line_no);
    } else {
      throw ParseError(line_no, "expected 'A -> B', 'A -- B' or 'node A'");
    }
    if (end == text.size()) break;
  }

  EdgeMatrix m(names.size());
  for (auto [a, b, kind, ln] : edges) {
    if (m.adjacent(a, b))
      throw ParseError(ln, "duplicate edge between '" + names[a] + "' and '" + names[b] + "'");
    if (kind == EdgeKind::directed)
      m.set_directed(a, b);
    else
      m.set_undirected(a, b);
  }
  return Pdag(std::move(names), std::move(m));
}

std::string write_graph(const Pdag& g) {
  std::ostringstream out;
  for (const auto& n : g.names()) out << "node " << n << '\n';
  for (const auto& e : g.named_edges())
    out << e.a << (e.kind == EdgeKind::directed ? " -> " : " -- ") << e.b << '\n';
  return out.str();
}

void require_nodes(const Pdag& g, const NodeSet& s, std::string_view what) {
  for (Node v : s)
    if (v >= g.size())
      throw ArgumentError(std::string(what) + " contains a node outside the graph");
}

Pdag induced_subgraph(const Pdag& g, const NodeSet& keep) {
  require_nodes(g, keep, "keep set");
  std::vector<Node> order(keep.begin(), keep.end());
  std::vector<std::string> names;
  for (Node v : order) names.push_back(g.name(v));
  EdgeMatrix m(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      switch (g.edges().link(order[i], order[j])) {
        case Link::none: break;
        case Link::to: m.set_directed(i, j); break;
        case Link::from: m.set_directed(j, i); break;
        case Link::undirected: m.set_undirected(i, j); break;
      }
    }
  }
  return Pdag(std::move(names), std::move(m));
}

Pdag undirected_subgraph(const Pdag& g) {
  EdgeMatrix m(g.size());
  for (auto [a, b] : g.undirected_edges()) m.set_undirected(a, b);
  return Pdag(g.names(), std::move(m));
}

namespace {

// Directed reachability; `forward` follows tail -> head.
NodeSet directed_closure(const Pdag& g, const NodeSet& xs, const NodeSet& excluded, bool forward) {
  NodeSet seen;
  std::deque<Node> queue;
  for (Node x : xs) {
    if (excluded.count(x)) continue;
    if (seen.insert(x).second) queue.push_back(x);
  }
  while (!queue.empty()) {
    Node v = queue.front();
    queue.pop_front();
    for (Node w = 0; w < g.size(); ++w) {
      if (excluded.count(w)) continue;
      bool step = forward ? g.directed(v, w) : g.directed(w, v);
      if (step && seen.insert(w).second) queue.push_back(w);
    }
  }
  return seen;
}

// True when an edge between a and b does not point back into a.
bool not_into(const EdgeMatrix& m, Node a, Node b) {
  Link l = m.link(a, b);
  return l == Link::to || l == Link::undirected;
}

// Possible descendants in a maximally oriented graph. Every possibly causal
// path has an unshielded possibly causal subsequence, and on unshielded paths
// the property reduces to "no consecutive edge points back". The search runs
// over (previous, current) pairs; any such walk is a directed path in some
// represented DAG, so it never reports a node that is not reachable.
NodeSet possible_reach_unshielded(const Pdag& g, const NodeSet& xs, bool forward) {
  const auto& m = g.edges();
  const std::size_t n = g.size();
  NodeSet reached(xs.begin(), xs.end());
  std::vector<char> visited(n * n, 0);
  std::deque<std::pair<Node, Node>> queue;
  // For the backward search the roles of a and b in not_into() swap.
  auto step_ok = [&](Node cur, Node next) {
    return forward ? not_into(m, cur, next) : not_into(m, next, cur);
  };
  for (Node x : xs) {
    for (Node w = 0; w < n; ++w) {
      if (w == x || !m.adjacent(x, w) || !step_ok(x, w)) continue;
      reached.insert(w);
      if (!visited[x * n + w]) {
        visited[x * n + w] = 1;
        queue.emplace_back(x, w);
      }
    }
  }
  while (!queue.empty()) {
    auto [prev, cur] = queue.front();
    queue.pop_front();
    for (Node w = 0; w < n; ++w) {
      if (w == prev || w == cur || !m.adjacent(cur, w) || m.adjacent(prev, w)) continue;
      if (!step_ok(cur, w)) continue;
      reached.insert(w);
      if (!visited[cur * n + w]) {
        visited[cur * n + w] = 1;
        queue.emplace_back(cur, w);
      }
    }
  }
  return reached;
}

// Exact search straight from the definition: simple paths on which no node
// points into an earlier node. Used for graphs that are not maximally oriented.
void possible_reach_dfs(const EdgeMatrix& m, std::vector<Node>& path, std::vector<char>& on_path,
                        NodeSet& reached, bool forward) {
  const Node cur = path.back();
  for (Node w = 0; w < m.size(); ++w) {
    if (on_path[w] || !m.adjacent(cur, w)) continue;
    bool ok = true;
    for (Node p : path) {
      // forward: w is appended after p, so w -> p is forbidden.
      // backward: w is prepended before p, so p -> w is forbidden.
      if (forward ? m.directed(w, p) : m.directed(p, w)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    reached.insert(w);
    path.push_back(w);
    on_path[w] = 1;
    possible_reach_dfs(m, path, on_path, reached, forward);
    on_path[w] = 0;
    path.pop_back();
  }
}

NodeSet possible_reach(const Pdag& g, const NodeSet& xs, bool forward) {
  const bool maximal = g.graph_class() != GraphClass::pdag || is_mpdag(g);
  if (maximal) return possible_reach_unshielded(g, xs, forward);
  NodeSet reached(xs.begin(), xs.end());
  std::vector<char> on_path(g.size(), 0);
  for (Node x : xs) {
    std::vector<Node> path{x};
    on_path[x] = 1;
    possible_reach_dfs(g.edges(), path, on_path, reached, forward);
    on_path[x] = 0;
  }
  return reached;
}

}  // namespace

NodeSet relatives(const Pdag& g, const NodeSet& xs, Relation relation) {
  require_nodes(g, xs, "node set");
  switch (relation) {
    case Relation::parents: {
      NodeSet out;
      for (Node x : xs)
        for (Node p : g.parents(x))
          if (!xs.count(p)) out.insert(p);
      return out;
    }
    case Relation::children: {
      NodeSet out;
      for (Node x : xs)
        for (Node c : g.children(x))
          if (!xs.count(c)) out.insert(c);
      return out;
    }
    case Relation::ancestors: return directed_closure(g, xs, {}, false);
    case Relation::descendants: return directed_closure(g, xs, {}, true);
    case Relation::possible_ancestors: return possible_reach(g, xs, false);
    case Relation::possible_descendants: return possible_reach(g, xs, true);
  }
  return {};
}

NodeSet ancestors_avoiding(const Pdag& g, const NodeSet& xs, const NodeSet& excluded) {
  require_nodes(g, xs, "node set");
  return directed_closure(g, xs, excluded, false);
}

}  // namespace mpdag
