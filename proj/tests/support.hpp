#pragma once

// Shared helpers for the test programs: graph generators and brute-force
// reference implementations written directly from the definitions, without
// calling the library's path searches.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mpdag/graph.hpp"
#include "mpdag/paths.hpp"

namespace testsupport {

using mpdag::Node;
using mpdag::NodeSet;
using mpdag::Pdag;

std::string data_path(const std::string& file);
Pdag load(const std::string& file);

/// Random DAG on nodes V1..Vn with a random topological order; each pair is
/// joined with probability p.
Pdag random_dag(std::size_t n, double p, std::mt19937_64& rng);

/// Random DAG -> its CPDAG -> a random subset of the DAG's orientations as
/// background knowledge -> closure. Always a valid MPDAG.
Pdag random_mpdag(std::size_t n, double p, double knowledge, std::mt19937_64& rng);

/// Distinct MPDAGs on 2..max_nodes nodes built by random_mpdag, deduplicated
/// by edge list; stops at `count` graphs.
std::vector<Pdag> mpdag_corpus(std::size_t count, std::size_t max_nodes, std::uint64_t seed);

/// Every simple path between a and b.
std::vector<mpdag::Path> simple_paths(const Pdag& g, Node a, Node b);

/// No edge points from a later path node to an earlier one.
bool brute_possibly_causal(const Pdag& g, const mpdag::Path& p);

/// A proper possibly causal path from X to Y starting with an undirected edge.
bool brute_not_amenable(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

/// Nodes reachable from a by a possibly causal path, plus a.
NodeSet brute_possible_descendants(const Pdag& g, Node a);

/// Every subset of `universe`.
std::vector<NodeSet> subsets(const std::vector<Node>& universe);

/// Disjoint (X, Y) pairs with |X|, |Y| in {1, 2}.
std::vector<std::pair<NodeSet, NodeSet>> small_query_pairs(std::size_t n);

/// A topological order of `dag` placing bucket i entirely before bucket j
/// for i < j exists.
bool refines_bucket_order(const Pdag& dag, const std::vector<NodeSet>& buckets);

}  // namespace testsupport
