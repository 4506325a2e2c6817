#pragma once

// Plug-in estimation of linear-Gaussian total effects from an identification
// formula: each factor's conditional mean is fitted by least squares and the
// fitted linear maps are composed in factor order.

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mpdag/formula.hpp"

namespace mpdag {

struct Dataset {
  std::vector<std::string> columns;
  Eigen::MatrixXd rows;  // n x p

  /// Column index by name; throws EstimationError when absent.
  Eigen::Index column(std::string_view name) const;
};

/// Comma-separated values with a header row of node names.
Dataset read_csv(std::istream& in);
Dataset read_csv(std::string_view text);

struct EffectVector {
  std::vector<std::string> nodes;  // X in the requested order
  Eigen::VectorXd values;          // d E[y | do(x)] / d x_k
};

/// Requires a singleton response equal to `y` and X equal to the formula's
/// intervened set. Throws EstimationError on a singular regression design,
/// too few rows, or nodes missing from the data.
EffectVector gaussian_effect(const IdFormula& f, const Dataset& data,
                             const std::vector<std::string>& xs, const std::string& y);

}  // namespace mpdag
