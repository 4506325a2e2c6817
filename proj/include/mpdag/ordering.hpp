#pragma once

// Buckets and the partial causal ordering of node sets in MPDAGs.

#include <vector>

#include "mpdag/graph.hpp"

namespace mpdag {

/// Ordered list of pairwise disjoint node sets.
struct OrderedBuckets {
  std::vector<NodeSet> buckets;

  bool operator==(const OrderedBuckets&) const = default;
};

/// Partition of `d` into buckets: two members share a bucket when an
/// undirected path of `g` (through any nodes) joins them. Buckets are ordered
/// by their smallest node position.
std::vector<NodeSet> bucket_decomposition(const Pdag& g, const NodeSet& d);

/// Orders the buckets of `d` so that every edge between two buckets points
/// from the earlier to the later one. Requires `g` to be maximally oriented.
///
/// Repeatedly removes a bucket of V whose edges to the remaining buckets all
/// point into it and prepends its intersection with `d`. When several buckets
/// qualify, the one whose lexicographically smallest member name is largest
/// goes first.
OrderedBuckets pco(const Pdag& g, const NodeSet& d);

}  // namespace mpdag
