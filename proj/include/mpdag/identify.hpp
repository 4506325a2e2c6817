#pragma once

// Identification of total causal effects f(y | do(x)) in MPDAGs.

#include <optional>
#include <string>

#include "mpdag/formula.hpp"
#include "mpdag/graph.hpp"
#include "mpdag/paths.hpp"

namespace mpdag {

class IdentifyResult {
 public:
  static IdentifyResult identified(IdFormula f) { return IdentifyResult(std::move(f), {}); }
  static IdentifyResult not_identified(Path witness) { return IdentifyResult({}, std::move(witness)); }

  bool identifiable() const noexcept { return formula_.has_value(); }
  /// Throws std::bad_optional_access when not identifiable.
  const IdFormula& formula() const { return formula_.value(); }
  /// Proper possibly causal path from X to Y starting with an undirected edge.
  const Path& witness() const { return witness_.value(); }

 private:
  IdentifyResult(std::optional<IdFormula> f, std::optional<Path> w)
      : formula_(std::move(f)), witness_(std::move(w)) {}
  std::optional<IdFormula> formula_;
  std::optional<Path> witness_;
};

/// Decides identifiability of the effect of X on Y and returns either the
/// identifying formula or a shortest witness path. When X has no possibly
/// causal path to Y the formula is reduced to f(y). X may be empty, in which
/// case the result is the observational marginal of Y.
IdentifyResult identify(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

/// The product formula over the ordered buckets of An(Y, G[V \ X]), without
/// the zero-effect reduction. Assumes the effect is identifiable.
IdFormula causal_identification_formula(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

/// f(v' | do(x)) for V' = V \ X as a product over the ordered buckets of V
/// that avoid X. Throws NotTruncatable if some X -- V edge exists with V
/// outside X. With X empty this is the observational factorization.
IdFormula truncated_factorization(const Pdag& g, const NodeSet& xs);

/// Generalized adjustment criterion.
bool check_adjustment(const Pdag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs);

enum class AdjustmentOutcome { set_found, none_exists, zero_effect };
enum class NoAdjustmentReason { not_amenable, blocked_path_unachievable };

struct AdjustmentResult {
  AdjustmentOutcome outcome = AdjustmentOutcome::none_exists;
  NodeSet set;                                // set_found only
  std::optional<NoAdjustmentReason> reason;  // none_exists only
};

const char* to_string(AdjustmentOutcome o);
const char* to_string(NoAdjustmentReason r);

/// Largest candidate universe searched exhaustively for set-valued X or Y.
inline constexpr std::size_t kMaxAdjustmentUniverse = 20;

/// Returns Pa(X) for singleton X, Y whenever an adjustment set exists, and
/// searches subsets of V \ (X ∪ Y ∪ forbidden) otherwise.
AdjustmentResult find_adjustment_set(const Pdag& g, const NodeSet& xs, const NodeSet& ys);

}  // namespace mpdag
