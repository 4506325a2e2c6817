#pragma once

// Symbolic identification formulas: a product of conditional densities,
// integrated over some variables, for a fixed intervention.

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mpdag {

using NameSet = std::set<std::string>;

/// Conditional density f(targets | given).
struct Factor {
  NameSet targets;
  NameSet given;

  bool operator==(const Factor&) const = default;
};

struct IdFormula {
  std::vector<Factor> factors;
  NameSet integrate_over;
  NameSet intervened;
  NameSet response;
};

enum class RenderStyle { text, latex, json };

/// Checks the structural invariants; throws ArgumentError on violation.
///  - integrate_over equals the union of targets minus response
///  - response and intervened are disjoint
///  - each response node is the target of exactly one factor
///  - every conditioner is intervened or a target of a factor at the same or
///    an earlier position
void validate(const IdFormula& f);

/// Deterministic rendering. Text looks like
///   f(y|do(x)) = ∫ f(v1,v2) f(y|x,v1,v2) d(v1,v2)
/// Names are lowercased; conditioners list intervened nodes first.
std::string render(const IdFormula& f, RenderStyle style);

/// Inverse of render(f, RenderStyle::json).
IdFormula parse_formula_json(std::string_view text);

/// Equal up to the order of factors.
bool structurally_equal(const IdFormula& a, const IdFormula& b);

}  // namespace mpdag
