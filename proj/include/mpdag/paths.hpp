#pragma once

// Path classification and path-based queries on partially directed graphs.
//
// Searches enumerate simple paths explicitly. They are exponential in the
// worst case and intended for graphs of a few dozen nodes at most.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpdag/graph.hpp"

namespace mpdag {

struct Path {
  std::vector<Node> nodes;

  std::size_t length() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
  bool operator==(const Path&) const = default;
};

struct PathStatus {
  bool possibly_causal = false;
  bool definite_status = false;
  bool proper = false;
};

/// Throws ArgumentError unless `p` is a path of `g` (distinct nodes, at least
/// two, successive nodes adjacent).
void require_path(const Pdag& g, const Path& p);

/// Classifies `p`; `proper` is relative to `sources`.
PathStatus classify_path(const Pdag& g, const Path& p, const NodeSet& sources);

/// Node status on a path at interior position i.
bool is_collider(const Pdag& g, Node prev, Node mid, Node next);
bool is_definite_noncollider(const Pdag& g, Node prev, Node mid, Node next);

/// Renders a path with its edge marks, e.g. "X -- V1 -> Y".
std::string format_path(const Pdag& g, const Path& p);

/// Calls `visit` for every proper possibly causal path from `xs` to `ys`
/// (paths may pass through other members of `ys`). When
/// `first_edge_undirected` is set, only paths whose first edge is undirected
/// are reported. Returning false from `visit` stops the search.
void for_each_proper_possibly_causal_path(const Pdag& g, const NodeSet& xs, const NodeSet& ys,
                                          bool first_edge_undirected,
                                          const std::function<bool(const Path&)>& visit);

/// Some proper possibly causal path from X to Y starts with an undirected edge.
bool exists_proper_pcp_starting_undirected(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

/// All such paths ordered by (length, node names).
std::vector<Path> amenability_witnesses(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

/// Shortest such path, ties broken by node names.
std::optional<Path> shortest_amenability_witness(const Pdag& g, const NodeSet& xs,
                                                 const NodeSet& ys);

bool exists_possibly_causal(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

/// Z blocks every definite status path between X and Y.
bool d_separated(const Pdag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs);

/// Possible descendants of every non-X node lying on a proper possibly causal
/// path from X to Y, with X itself removed.
NodeSet forbidden_set(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

/// Calls `visit` for every proper definite status path from X to Y that is
/// not possibly causal and is d-connecting given Z. Stops when `visit`
/// returns false.
void for_each_open_noncausal_path(const Pdag& g, const NodeSet& xs, const NodeSet& ys,
                                  const NodeSet& zs,
                                  const std::function<bool(const Path&)>& visit);

/// Throws ArgumentError unless both sets are nonempty, inside `g` and disjoint.
void require_disjoint(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

}  // namespace mpdag
