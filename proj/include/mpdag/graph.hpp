#pragma once

// Partially directed graphs over named nodes.
//
// A Pdag owns an ordered list of node names and a dense n x n matrix of edge
// marks. Node identity inside one graph is the position in `names()`; sets of
// nodes are ordered sets of those positions. Graphs are values: every
// algorithm in the library returns a new graph instead of editing one in place.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mpdag {

using Node = std::size_t;
using NodeSet = std::set<Node>;

/// Relation of the ordered pair (i, j) in an EdgeMatrix.
enum class Link : std::uint8_t {
  none,
  to,          // i -> j
  from,        // i <- j
  undirected,  // i -- j
};

enum class EdgeKind : std::uint8_t { directed, undirected };

/// Claimed validity class of a graph. Checked whenever a graph is tagged.
enum class GraphClass : std::uint8_t { pdag, dag, cpdag, mpdag };

const char* to_string(GraphClass cls);

/// Mutable adjacency storage used by graph algorithms as scratch space.
/// Keeps link(i, j) and link(j, i) mirrored.
class EdgeMatrix {
 public:
  EdgeMatrix() = default;
  explicit EdgeMatrix(std::size_t n) : n_(n), links_(n * n, Link::none) {}

  std::size_t size() const noexcept { return n_; }

  Link link(Node i, Node j) const noexcept { return links_[i * n_ + j]; }
  bool adjacent(Node i, Node j) const noexcept { return link(i, j) != Link::none; }
  bool directed(Node i, Node j) const noexcept { return link(i, j) == Link::to; }
  bool undirected(Node i, Node j) const noexcept { return link(i, j) == Link::undirected; }

  void set_directed(Node tail, Node head);
  void set_undirected(Node a, Node b);
  void clear(Node a, Node b);

  bool operator==(const EdgeMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Link> links_;
};

/// Edge given by node names, as read from or written to the edge-list format.
struct NamedEdge {
  std::string a;
  std::string b;
  EdgeKind kind = EdgeKind::directed;

  bool operator==(const NamedEdge&) const = default;
};

class Pdag {
 public:
  Pdag() = default;

  /// Builds a graph and validates it against `cls`. Throws GraphError when the
  /// names are not unique/valid, when the matrix has a directed cycle, or when
  /// the graph is not a member of the claimed class.
  Pdag(std::vector<std::string> names, EdgeMatrix edges, GraphClass cls = GraphClass::pdag);

  /// Builds a graph from named edges; nodes appear in `names` order, followed
  /// by any edge endpoint not listed there, in first-appearance order.
  static Pdag from_edges(std::vector<std::string> names, const std::vector<NamedEdge>& edges,
                         GraphClass cls = GraphClass::pdag);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Node v) const { return names_.at(v); }
  const EdgeMatrix& edges() const noexcept { return edges_; }
  GraphClass graph_class() const noexcept { return class_; }

  std::optional<Node> find(std::string_view name) const;
  /// Index of `name`; throws ArgumentError for unknown names.
  Node id(std::string_view name) const;
  NodeSet ids(std::span<const std::string> names) const;
  NodeSet ids(std::initializer_list<std::string_view> names) const;
  NodeSet all_nodes() const;

  bool adjacent(Node a, Node b) const noexcept { return edges_.adjacent(a, b); }
  bool directed(Node tail, Node head) const noexcept { return edges_.directed(tail, head); }
  bool undirected(Node a, Node b) const noexcept { return edges_.undirected(a, b); }

  std::vector<Node> parents(Node v) const;
  std::vector<Node> children(Node v) const;
  std::vector<Node> neighbors(Node v) const;  // undirected only
  std::vector<Node> adjacents(Node v) const;

  std::vector<std::pair<Node, Node>> directed_edges() const;
  /// Undirected edges as (a, b) with a < b.
  std::vector<std::pair<Node, Node>> undirected_edges() const;
  std::size_t edge_count() const;
  std::vector<NamedEdge> named_edges() const;

  /// Same graph claimed as `cls`; validates.
  Pdag retagged(GraphClass cls) const;

  /// Edge-for-edge equality over names; ignores the class tag.
  bool operator==(const Pdag& other) const;

  std::string set_to_string(const NodeSet& s) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Node> index_;
  EdgeMatrix edges_;
  GraphClass class_ = GraphClass::pdag;
};

bool valid_node_name(std::string_view name);

/// True when the directed part of `edges` has no cycle.
bool directed_acyclic(const EdgeMatrix& edges);

/// Parses the edge-list format:
///   A -> B     directed edge
///   A -- B     undirected edge
///   node A     isolated node declaration
///   # ...      comment; blank lines are ignored
Pdag parse_graph(std::string_view text);

/// Writes `g` in the edge-list format: every node declared in order, then
/// edges ordered by endpoint position.
std::string write_graph(const Pdag& g);

Pdag induced_subgraph(const Pdag& g, const NodeSet& keep);
Pdag undirected_subgraph(const Pdag& g);

enum class Relation { parents, children, ancestors, descendants, possible_ancestors,
                      possible_descendants };

/// Ancestral relations of a node set. Parents of a set exclude the set itself;
/// the other relations are reflexive unions over the members.
NodeSet relatives(const Pdag& g, const NodeSet& xs, Relation relation);

/// Ancestors of `xs` in the subgraph induced by V \ `excluded`, expressed in
/// the node numbering of `g`.
NodeSet ancestors_avoiding(const Pdag& g, const NodeSet& xs, const NodeSet& excluded);

/// Throws ArgumentError if any member of `s` is not a node of `g`.
void require_nodes(const Pdag& g, const NodeSet& s, std::string_view what);

}  // namespace mpdag
