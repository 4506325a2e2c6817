#pragma once

// Meek's orientation rules and maximal orientation of PDAGs.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpdag/graph.hpp"

namespace mpdag {

/// Pairwise causal orientations (tail, head) known a priori.
struct BackgroundKnowledge {
  std::vector<std::pair<std::string, std::string>> required_directed;
};

/// Parses a background-knowledge file: edge-list format, directed lines only.
BackgroundKnowledge parse_background_knowledge(std::string_view text);

/// Which forbidden pattern, if any, orients tail -> head for the undirected
/// edge tail -- head. Rules are numbered 1..4; 0 means none applies.
///   1: a -> tail -- head, a and head nonadjacent
///   2: tail -> a -> head, tail -- head
///   3: tail -- c -> head, tail -- d -> head, c and d nonadjacent, tail -- head
///   4: tail -- j -> l -> head, tail -- l, tail -- head, j and head nonadjacent
int orienting_rule(const EdgeMatrix& edges, Node tail, Node head);
bool rule_fires(const EdgeMatrix& edges, int rule, Node tail, Node head);

/// True iff none of the four forbidden induced subgraphs occurs in `g`
/// (equivalently: no orientation rule fires).
bool is_mpdag(const Pdag& g);
bool is_mpdag(const EdgeMatrix& edges);

/// True iff `g` is the CPDAG of a Markov equivalence class: its skeleton and
/// unshielded colliders, closed under the orientation rules, reproduce `g`.
bool is_cpdag(const Pdag& g);

/// Orients every background-knowledge pair and applies the orientation rules
/// to a fixpoint. The result is tagged mpdag.
/// Throws InconsistentKnowledge when a pair contradicts an existing
/// orientation, two rules demand opposite orientations, or a directed cycle
/// appears. Throws ArgumentError when a pair is not an adjacency of `g`.
Pdag close(const Pdag& g, const BackgroundKnowledge& bk = {});

/// Closure with the rule applications visited in a shuffled order (for
/// confluence checks). `seed` drives the shuffle.
Pdag close_in_random_order(const Pdag& g, const BackgroundKnowledge& bk, std::uint64_t seed);

/// In-place fixpoint on raw edges; returns false on a conflict or a cycle.
bool close_edges(EdgeMatrix& edges);

/// CPDAG of the Markov equivalence class of a DAG.
Pdag cpdag_of(const Pdag& dag);

}  // namespace mpdag
