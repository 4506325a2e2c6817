#pragma once

// Brute-force verification machinery: the DAGs represented by an MPDAG,
// random discrete models with exact g-formula evaluation, and linear-Gaussian
// models with path-tracing covariances.
//
// Everything here favours obvious correctness over speed. Discrete
// computations enumerate the full joint and refuse spaces larger than
// kMaxConfigurations.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mpdag/formula.hpp"
#include "mpdag/graph.hpp"
#include "mpdag/kernels.hpp"
#include "mpdag/paths.hpp"

namespace mpdag {

/// All DAGs in [g], sorted by the orientation bitstring of g's undirected
/// edges (in undirected_edges() order, 0 meaning low id -> high id).
std::vector<Pdag> enumerate_dags(const Pdag& g);

/// Standard d-separation in a DAG via the moralized ancestral graph.
bool dag_d_separated(const Pdag& dag, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs);

// ---------------------------------------------------------------------------
// Discrete models

struct DiscreteModel {
  Pdag dag;
  std::vector<int> cardinalities;  // by node id
  /// cpts[v] has scope [v, parents in increasing id order].
  std::vector<Table> cpts;
};

/// Uniform double in (0, 1] from the top 53 bits of one mt19937_64 draw.
double unit_uniform(std::mt19937_64& rng);

/// Each CPT column is an independent symmetric Dirichlet(1) draw.
DiscreteModel random_model(const Pdag& dag, const std::vector<int>& cardinalities,
                           std::uint64_t seed);

/// Joint over all nodes, scope in id order.
Table observational_joint(const DiscreteModel& m, Execution exec = Execution::parallel);

/// The model on `dag` that reproduces `joint`, with each CPT computed as a
/// conditional of the joint. Zero-probability parent configurations get a
/// uniform column.
DiscreteModel model_from_joint(const Pdag& dag, const std::vector<int>& cardinalities,
                               const Table& joint);

/// Truncated factorization followed by marginalization to Y (scope in id
/// order). Nodes of x_assign not in the graph are rejected.
Table gformula_eval(const DiscreteModel& m, const Assignment& x_assign, const NodeSet& ys,
                    Execution exec = Execution::parallel);

/// Evaluates an identification formula with factors taken from the
/// observational joint of m. Throws DegenerateConditioning when a needed
/// conditioning event has probability zero.
Table eval_id_formula(const IdFormula& f, const DiscreteModel& m, const Assignment& x_assign);

/// Every assignment of the nodes in xs, first node varying fastest.
std::vector<Assignment> all_assignments(const NodeSet& xs, const std::vector<int>& cardinalities);

struct AgreementReport {
  std::size_t dags = 0;
  std::size_t models = 0;
  double max_cross_dag_tv = 0.0;      // between g-formula results of different DAGs
  double max_formula_deviation = 0.0;  // formula vs g-formula, max abs entry
};

/// Random binary models over the DAGs of [g], reusable across (X, Y) queries.
/// Model k lives on dags()[k % dags().size()]; its observational joint is
/// re-expressed on every DAG of the class.
class ClassOracle {
 public:
  ClassOracle(const Pdag& g, std::size_t models, std::uint64_t seed, int cardinality = 2);

  const std::vector<Pdag>& dags() const noexcept { return dags_; }
  std::size_t models() const noexcept { return per_model_.size(); }

  /// Compares g-formula results across the class for every assignment of X,
  /// and the formula against the generating DAG. Models run in parallel.
  AgreementReport agreement(const NodeSet& xs, const NodeSet& ys, const IdFormula& f) const;

 private:
  Pdag g_;
  std::vector<Pdag> dags_;
  std::vector<int> cards_;
  // per_model_[k][d]: model k re-expressed on DAG d; index k % D is the source.
  std::vector<std::vector<DiscreteModel>> per_model_;
};

// ---------------------------------------------------------------------------
// Linear-Gaussian models: V_j = sum_i coeffs(i, j) V_i + e_j, e_j ~ N(0, noise_vars(j)).

struct GaussianModel {
  Pdag dag;
  Eigen::MatrixXd coeffs;  // coeffs(i, j) for the edge i -> j, zero elsewhere
  Eigen::VectorXd noise_vars;
};

/// Rejects coefficients on non-edges and nonpositive noise variances.
void validate(const GaussianModel& m);

/// Residual variances that make every variable's variance 1. Throws
/// ArgumentError if the coefficients make that impossible.
Eigen::VectorXd unit_variance_noise(const Pdag& dag, const Eigen::MatrixXd& coeffs);

/// Covariance from the sum over collider-free paths of coefficient products.
/// Only meaningful for unit-variance models.
Eigen::MatrixXd wright_cov(const GaussianModel& m);

/// (I - B^T)^{-1} diag(noise) (I - B^T)^{-T}.
Eigen::MatrixXd implied_covariance(const GaussianModel& m);

/// E[V | do(x)] for zero-mean noise.
Eigen::VectorXd interventional_mean(const GaussianModel& m, const std::map<Node, double>& x);

/// Partial derivatives of E[y | do(x)] with respect to each node of xs.
Eigen::VectorXd effect_gradient(const GaussianModel& m, const std::vector<Node>& xs, Node y);

/// n draws, one row per draw, columns in node id order.
Eigen::MatrixXd simulate(const GaussianModel& m, std::size_t n, std::uint64_t seed);

struct NonIdWitness {
  GaussianModel first;   // on a DAG orienting the path X -> V1 -> ... -> Y
  GaussianModel second;  // on a DAG orienting it X <- V1 -> ... -> Y
  Path path;
  double delta = 0.0;  // |E1[y | do(X = 1)] - E2[y | do(X = 1)]|
};

/// Builds two unit-variance models from [g] with equal covariance and
/// different interventional means. Nonzero coefficients sit only on the
/// shortest witness path; `path_coefficients` is empty (0.5 everywhere), a
/// single value, or one value per path edge. Throws ArgumentError when the
/// effect is identifiable.
NonIdWitness nonid_witness(const Pdag& g, const NodeSet& xs, const NodeSet& ys,
                           const std::vector<double>& path_coefficients = {});

}  // namespace mpdag
