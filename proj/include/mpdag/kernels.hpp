#pragma once

// Dense table kernels used by the brute-force oracles.
//
// A Table holds nonnegative values over the joint configurations of its
// scope; the first scope variable varies fastest. The product kernel exists
// twice: an OpenMP version used by default and a plain serial reference kept
// for testing and benchmarking. Both write one output slot per configuration,
// so results are bit-identical regardless of thread count.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "mpdag/graph.hpp"

namespace mpdag {

using Assignment = std::map<Node, int>;

struct Table {
  std::vector<Node> scope;
  std::vector<int> cards;
  std::vector<double> values;

  std::size_t configurations() const;
  /// Value at the configuration given per scope position.
  double at(std::span<const int> config) const;
  /// Value at the configuration read from `full`, indexed by node.
  double at_assignment(const Assignment& full) const;
};

/// Upper bound on the number of configurations any kernel will enumerate.
inline constexpr std::size_t kMaxConfigurations = std::size_t{1} << 20;

enum class Execution { serial, parallel };

namespace kernels {

/// out[c] = product over tables of table(c), for every configuration c of
/// the space (vars, cards). Each table scope must be a subset of vars.
std::vector<double> product_serial(std::span<const Node> vars, std::span<const int> cards,
                                   std::span<const Table> tables);
std::vector<double> product_parallel(std::span<const Node> vars, std::span<const int> cards,
                                     std::span<const Table> tables);

}  // namespace kernels

/// Product table over (vars, cards) using the chosen kernel.
Table product(std::span<const Node> vars, std::span<const int> cards,
              std::span<const Table> tables, Execution exec = Execution::parallel);

/// Sums out every variable not in `keep`; the result has scope `keep` in the
/// given order.
Table marginalize(const Table& t, std::span<const Node> keep);

/// Fixes the variables of `fixed` that appear in the scope and drops them.
Table slice(const Table& t, const Assignment& fixed);

/// 0.5 * sum |p - q| over tables with the same scope.
double total_variation(const Table& p, const Table& q);
double max_abs_difference(const Table& p, const Table& q);

/// Throws Error when the configuration count exceeds kMaxConfigurations.
std::size_t checked_configurations(std::span<const int> cards);

}  // namespace mpdag
