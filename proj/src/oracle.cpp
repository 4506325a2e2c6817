#include "mpdag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <queue>
#include <string>

#include "mpdag/error.hpp"
#include "mpdag/meek.hpp"

namespace mpdag {

namespace {

std::string orientation_key(const Pdag& g, const EdgeMatrix& dag) {
  std::string key;
  for (auto [a, b] : g.undirected_edges()) key += dag.directed(b, a) ? '1' : '0';
  return key;
}

void extend(const EdgeMatrix& m, std::vector<EdgeMatrix>& out) {
  const std::size_t n = m.size();
  for (Node a = 0; a < n; ++a)
    for (Node b = a + 1; b < n; ++b) {
      if (!m.undirected(a, b)) continue;
      for (int flip = 0; flip < 2; ++flip) {
        EdgeMatrix next = m;
        if (flip) next.set_directed(b, a); else next.set_directed(a, b);
        if (close_edges(next)) extend(next, out);
      }
      return;
    }
  out.push_back(m);
}

std::vector<Node> topological_order(const Pdag& dag) {
  const std::size_t n = dag.size();
  std::vector<std::size_t> indeg(n, 0);
  for (auto [a, b] : dag.directed_edges()) ++indeg[b];
  std::priority_queue<Node, std::vector<Node>, std::greater<>> ready;
  for (Node v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<Node> order;
  while (!ready.empty()) {
    Node v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Node c : dag.children(v))
      if (--indeg[c] == 0) ready.push(c);
  }
  if (order.size() != n) throw GraphError("graph has a directed cycle");
  return order;
}

void require_dag(const Pdag& g) {
  if (!g.undirected_edges().empty()) throw ArgumentError("model graph must be a DAG");
}

std::vector<Node> as_vector(const NodeSet& s) { return {s.begin(), s.end()}; }

std::vector<int> cards_of(const std::vector<Node>& vars, const std::vector<int>& cards) {
  std::vector<int> out;
  for (Node v : vars) out.push_back(cards.at(v));
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t k) {
  // splitmix64 finalizer, so neighbouring streams are unrelated
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<Pdag> enumerate_dags(const Pdag& g) {
  if (!is_mpdag(g)) throw GraphError("enumeration requires a maximally oriented graph");
  std::vector<EdgeMatrix> found;
  extend(g.edges(), found);
  std::vector<std::pair<std::string, EdgeMatrix>> keyed;
  for (auto& m : found) keyed.emplace_back(orientation_key(g, m), std::move(m));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<Pdag> out;
  for (auto& [key, m] : keyed) out.emplace_back(g.names(), std::move(m), GraphClass::dag);
  return out;
}

bool dag_d_separated(const Pdag& dag, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs) {
  require_dag(dag);
  NodeSet seeds = xs;
  seeds.insert(ys.begin(), ys.end());
  seeds.insert(zs.begin(), zs.end());
  const NodeSet anc = relatives(dag, seeds, Relation::ancestors);
  const std::size_t n = dag.size();
  std::vector<std::vector<bool>> moral(n, std::vector<bool>(n, false));
  for (Node v : anc) {
    const auto pa = dag.parents(v);
    for (Node p : pa) moral[p][v] = moral[v][p] = true;
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = i + 1; j < pa.size(); ++j) moral[pa[i]][pa[j]] = moral[pa[j]][pa[i]] = true;
  }
  std::vector<bool> seen(n, false);
  std::vector<Node> stack;
  for (Node x : xs) {
    seen[x] = true;
    stack.push_back(x);
  }
  while (!stack.empty()) {
    Node v = stack.back();
    stack.pop_back();
    if (ys.count(v)) return false;
    for (Node w : anc)
      if (moral[v][w] && !seen[w] && !zs.count(w)) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return true;
}

// ---------------------------------------------------------------------------

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

DiscreteModel random_model(const Pdag& dag, const std::vector<int>& cardinalities,
                           std::uint64_t seed) {
  require_dag(dag);
  if (cardinalities.size() != dag.size()) throw ArgumentError("one cardinality per node required");
  for (int c : cardinalities)
    if (c < 2) throw ArgumentError("cardinalities must be at least 2");
  std::mt19937_64 rng(seed);
  DiscreteModel m{dag, cardinalities, {}};
  for (Node v = 0; v < dag.size(); ++v) {
    Table t;
    t.scope.push_back(v);
    for (Node p : dag.parents(v)) t.scope.push_back(p);
    t.cards = cards_of(t.scope, cardinalities);
    t.values.resize(checked_configurations(t.cards));
    const auto card = static_cast<std::size_t>(cardinalities[v]);
    for (std::size_t col = 0; col < t.values.size(); col += card) {
      double sum = 0.0;
      for (std::size_t i = 0; i < card; ++i) sum += t.values[col + i] = -std::log(unit_uniform(rng));
      for (std::size_t i = 0; i < card; ++i) t.values[col + i] /= sum;
    }
    m.cpts.push_back(std::move(t));
  }
  return m;
}

Table observational_joint(const DiscreteModel& m, Execution exec) {
  const std::vector<Node> vars = as_vector(m.dag.all_nodes());
  return product(vars, m.cardinalities, m.cpts, exec);
}

DiscreteModel model_from_joint(const Pdag& dag, const std::vector<int>& cardinalities,
                               const Table& joint) {
  require_dag(dag);
  DiscreteModel m{dag, cardinalities, {}};
  for (Node v = 0; v < dag.size(); ++v) {
    std::vector<Node> keep{v};
    const auto pa = dag.parents(v);
    keep.insert(keep.end(), pa.begin(), pa.end());
    Table t = marginalize(joint, keep);
    const Table denom = marginalize(joint, pa);
    const auto card = static_cast<std::size_t>(cardinalities.at(v));
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double d = denom.values[i / card];
      t.values[i] = d > 0.0 ? t.values[i] / d : 1.0 / static_cast<double>(card);
    }
    m.cpts.push_back(std::move(t));
  }
  return m;
}

Table gformula_eval(const DiscreteModel& m, const Assignment& x_assign, const NodeSet& ys,
                    Execution exec) {
  for (const auto& [x, value] : x_assign) {
    if (x >= m.dag.size()) throw ArgumentError("intervention on an unknown node");
    if (ys.count(x)) throw ArgumentError("intervened node '" + m.dag.name(x) + "' is in Y");
  }
  require_nodes(m.dag, ys, "Y");
  std::vector<Node> vars;
  std::vector<Table> tables;
  for (Node v = 0; v < m.dag.size(); ++v) {
    if (x_assign.count(v)) continue;
    vars.push_back(v);
    tables.push_back(slice(m.cpts[v], x_assign));
  }
  const Table joint = product(vars, cards_of(vars, m.cardinalities), tables, exec);
  return marginalize(joint, as_vector(ys));
}

Table eval_id_formula(const IdFormula& f, const DiscreteModel& m, const Assignment& x_assign) {
  validate(f);
  const Pdag& g = m.dag;
  auto ids = [&](const NameSet& names) {
    std::vector<Node> out;
    for (const auto& s : names) out.push_back(g.id(s));
    std::sort(out.begin(), out.end());
    return out;
  };
  const Table joint = observational_joint(m, Execution::serial);

  std::vector<Table> tables;
  for (const auto& factor : f.factors) {
    const std::vector<Node> targets = ids(factor.targets);
    const std::vector<Node> given = ids(factor.given);
    for (Node c : given)
      if (f.intervened.count(g.name(c)) && !x_assign.count(c))
        throw ArgumentError("no value assigned to intervened node '" + g.name(c) + "'");
    std::vector<Node> keep = targets;
    keep.insert(keep.end(), given.begin(), given.end());
    Table t = marginalize(joint, keep);
    const Table denom = marginalize(joint, given);
    const std::size_t block = checked_configurations(cards_of(targets, m.cardinalities));
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double d = denom.values[i / block];
      if (d <= 0.0)
        throw DegenerateConditioning("factor conditions on a zero-probability event");
      t.values[i] /= d;
    }
    tables.push_back(slice(t, x_assign));
  }

  NameSet space_names = f.integrate_over;
  space_names.insert(f.response.begin(), f.response.end());
  const std::vector<Node> vars = ids(space_names);
  const Table prod = product(vars, cards_of(vars, m.cardinalities), tables, Execution::serial);
  return marginalize(prod, ids(f.response));
}

std::vector<Assignment> all_assignments(const NodeSet& xs, const std::vector<int>& cardinalities) {
  const std::vector<Node> vars = as_vector(xs);
  const std::size_t total = checked_configurations(cards_of(vars, cardinalities));
  std::vector<Assignment> out;
  for (std::size_t c = 0; c < total; ++c) {
    Assignment a;
    std::size_t rest = c;
    for (Node v : vars) {
      const auto card = static_cast<std::size_t>(cardinalities[v]);
      a[v] = static_cast<int>(rest % card);
      rest /= card;
    }
    out.push_back(std::move(a));
  }
  return out;
}

ClassOracle::ClassOracle(const Pdag& g, std::size_t models, std::uint64_t seed, int cardinality)
    : g_(g), dags_(enumerate_dags(g)), cards_(g.size(), cardinality), per_model_(models) {
  const std::size_t D = dags_.size();
  std::exception_ptr failure;
  const long long count = static_cast<long long>(models);
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < count; ++k) {
    try {
      const auto ku = static_cast<std::size_t>(k);
      const std::size_t src = ku % D;
      DiscreteModel base = random_model(dags_[src], cards_, stream_seed(seed, ku));
      const Table joint = observational_joint(base, Execution::serial);
      auto& row = per_model_[ku];
      for (std::size_t d = 0; d < D; ++d)
        row.push_back(d == src ? base : model_from_joint(dags_[d], cards_, joint));
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

AgreementReport ClassOracle::agreement(const NodeSet& xs, const NodeSet& ys,
                                       const IdFormula& f) const {
  const std::size_t D = dags_.size();
  const std::vector<Assignment> assignments = all_assignments(xs, cards_);
  std::vector<double> tv(per_model_.size(), 0.0), dev(per_model_.size(), 0.0);
  std::exception_ptr failure;
  const long long count = static_cast<long long>(per_model_.size());
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < count; ++k) {
    try {
      const auto ku = static_cast<std::size_t>(k);
      const std::size_t src = ku % D;
      const auto& row = per_model_[ku];
      for (const auto& a : assignments) {
        const Table ref = gformula_eval(row[src], a, ys, Execution::serial);
        for (std::size_t d = 0; d < D; ++d)
          if (d != src)
            tv[ku] = std::max(tv[ku], total_variation(ref, gformula_eval(row[d], a, ys, Execution::serial)));
        dev[ku] = std::max(dev[ku], max_abs_difference(ref, eval_id_formula(f, row[src], a)));
      }
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  AgreementReport r;
  r.dags = D;
  r.models = per_model_.size();
  for (std::size_t k = 0; k < per_model_.size(); ++k) {
    r.max_cross_dag_tv = std::max(r.max_cross_dag_tv, tv[k]);
    r.max_formula_deviation = std::max(r.max_formula_deviation, dev[k]);
  }
  return r;
}

// ---------------------------------------------------------------------------

void validate(const GaussianModel& m) {
  require_dag(m.dag);
  const auto n = static_cast<Eigen::Index>(m.dag.size());
  if (m.coeffs.rows() != n || m.coeffs.cols() != n || m.noise_vars.size() != n)
    throw ArgumentError("model dimensions do not match the graph");
  for (Node i = 0; i < m.dag.size(); ++i) {
    if (!(m.noise_vars(static_cast<Eigen::Index>(i)) > 0.0))
      throw ArgumentError("noise variance of '" + m.dag.name(i) + "' must be positive");
    for (Node j = 0; j < m.dag.size(); ++j)
      if (m.coeffs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0 &&
          !m.dag.directed(i, j))
        throw ArgumentError("coefficient on a non-edge " + m.dag.name(i) + " -> " + m.dag.name(j));
  }
}

Eigen::VectorXd unit_variance_noise(const Pdag& dag, const Eigen::MatrixXd& coeffs) {
  require_dag(dag);
  const auto n = static_cast<Eigen::Index>(dag.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd noise(n);
  std::vector<Node> done;
  for (Node j : topological_order(dag)) {
    const auto J = static_cast<Eigen::Index>(j);
    double explained = 0.0;
    for (Node a : dag.parents(j))
      for (Node b : dag.parents(j))
        explained += coeffs(static_cast<Eigen::Index>(a), J) * coeffs(static_cast<Eigen::Index>(b), J) *
                     cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    noise(J) = 1.0 - explained;
    if (!(noise(J) > 0.0))
      throw ArgumentError("coefficients into '" + dag.name(j) + "' leave no room for unit variance");
    cov(J, J) = 1.0;
    for (Node k : done) {
      double c = 0.0;
      for (Node a : dag.parents(j))
        c += coeffs(static_cast<Eigen::Index>(a), J) * cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k));
      cov(J, static_cast<Eigen::Index>(k)) = cov(static_cast<Eigen::Index>(k), J) = c;
    }
    done.push_back(j);
  }
  return noise;
}

namespace {

// Sums coefficient products over collider-free simple paths (treks) from the
// current node to `target`. While `up` the walk may still move against edges.
double trek_sum(const GaussianModel& m, Node cur, Node target, bool up, double weight,
                std::vector<bool>& on_path) {
  if (cur == target) return weight;
  double total = 0.0;
  on_path[cur] = true;
  const auto C = static_cast<Eigen::Index>(cur);
  if (up)
    for (Node p : m.dag.parents(cur)) {
      const double c = m.coeffs(static_cast<Eigen::Index>(p), C);
      if (c != 0.0 && !on_path[p]) total += trek_sum(m, p, target, true, weight * c, on_path);
    }
  for (Node ch : m.dag.children(cur)) {
    const double c = m.coeffs(C, static_cast<Eigen::Index>(ch));
    if (c != 0.0 && !on_path[ch]) total += trek_sum(m, ch, target, false, weight * c, on_path);
  }
  on_path[cur] = false;
  return total;
}

}  // namespace

Eigen::MatrixXd wright_cov(const GaussianModel& m) {
  validate(m);
  const std::size_t n = m.dag.size();
  Eigen::MatrixXd cov(n, n);
  std::vector<bool> on_path(n, false);
  for (Node i = 0; i < n; ++i) {
    cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    for (Node j = i + 1; j < n; ++j) {
      const double c = trek_sum(m, i, j, true, 1.0, on_path);
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }
  }
  return cov;
}

Eigen::MatrixXd implied_covariance(const GaussianModel& m) {
  validate(m);
  const auto n = static_cast<Eigen::Index>(m.dag.size());
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - m.coeffs.transpose();
  const Eigen::MatrixXd inv = lhs.inverse();
  return inv * m.noise_vars.asDiagonal() * inv.transpose();
}

Eigen::VectorXd interventional_mean(const GaussianModel& m, const std::map<Node, double>& x) {
  validate(m);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.dag.size()));
  for (Node j : topological_order(m.dag)) {
    const auto J = static_cast<Eigen::Index>(j);
    if (auto it = x.find(j); it != x.end()) {
      mean(J) = it->second;
      continue;
    }
    for (Node p : m.dag.parents(j)) mean(J) += m.coeffs(static_cast<Eigen::Index>(p), J) * mean(static_cast<Eigen::Index>(p));
  }
  return mean;
}

Eigen::VectorXd effect_gradient(const GaussianModel& m, const std::vector<Node>& xs, Node y) {
  Eigen::VectorXd grad(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) {
    std::map<Node, double> x;
    for (Node v : xs) x[v] = 0.0;
    x[xs[k]] = 1.0;
    grad(static_cast<Eigen::Index>(k)) = interventional_mean(m, x)(static_cast<Eigen::Index>(y));
  }
  return grad;
}

Eigen::MatrixXd simulate(const GaussianModel& m, std::size_t n, std::uint64_t seed) {
  validate(m);
  const std::vector<Node> order = topological_order(m.dag);
  const auto p = static_cast<Eigen::Index>(m.dag.size());
  Eigen::MatrixXd data(static_cast<Eigen::Index>(n), p);
  std::mt19937_64 rng(seed);
  bool have_spare = false;
  double spare = 0.0;
  auto normal = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double r = std::sqrt(-2.0 * std::log(unit_uniform(rng)));
    const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
    spare = r * std::sin(theta);
    have_spare = true;
    return r * std::cos(theta);
  };
  for (std::size_t row = 0; row < n; ++row) {
    const auto R = static_cast<Eigen::Index>(row);
    for (Node j : order) {
      const auto J = static_cast<Eigen::Index>(j);
      double v = std::sqrt(m.noise_vars(J)) * normal();
      for (Node pa : m.dag.parents(j)) v += m.coeffs(static_cast<Eigen::Index>(pa), J) * data(R, static_cast<Eigen::Index>(pa));
      data(R, J) = v;
    }
  }
  return data;
}

namespace {

GaussianModel path_model(const Pdag& dag, const Path& path, const std::vector<double>& coeffs) {
  const auto n = static_cast<Eigen::Index>(dag.size());
  GaussianModel m{dag, Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Ones(n)};
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    Node a = path.nodes[i], b = path.nodes[i + 1];
    if (dag.directed(b, a)) std::swap(a, b);
    m.coeffs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = coeffs[i];
  }
  m.noise_vars = unit_variance_noise(dag, m.coeffs);
  return m;
}

}  // namespace

NonIdWitness nonid_witness(const Pdag& g, const NodeSet& xs, const NodeSet& ys,
                           const std::vector<double>& path_coefficients) {
  const auto witness = shortest_amenability_witness(g, xs, ys);
  if (!witness) throw ArgumentError("the effect is identifiable; there is no witness path");
  const auto& p = witness->nodes;
  const std::size_t k = witness->length();

  std::vector<double> coeffs;
  if (path_coefficients.empty()) coeffs.assign(k, 0.5);
  else if (path_coefficients.size() == 1) coeffs.assign(k, path_coefficients[0]);
  else if (path_coefficients.size() == k) coeffs = path_coefficients;
  else throw ArgumentError("expected " + std::to_string(k) + " path coefficients");

  const Pdag* forward = nullptr;
  const Pdag* backward = nullptr;
  const auto dags = enumerate_dags(g);
  for (const auto& d : dags) {
    bool tail_forward = true;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) tail_forward = tail_forward && d.directed(p[i], p[i + 1]);
    if (!tail_forward) continue;
    if (!forward && d.directed(p[0], p[1])) forward = &d;
    if (!backward && d.directed(p[1], p[0])) backward = &d;
  }
  if (!forward || !backward)
    throw Error("no pair of DAGs in the class orients the witness path " + format_path(g, *witness) +
                " both ways");

  NonIdWitness w{path_model(*forward, *witness, coeffs), path_model(*backward, *witness, coeffs),
                 *witness, 0.0};
  std::map<Node, double> unit;
  for (Node x : xs) unit[x] = 1.0;
  const auto Y = static_cast<Eigen::Index>(p.back());
  w.delta = std::abs(interventional_mean(w.first, unit)(Y) - interventional_mean(w.second, unit)(Y));
  return w;
}

}  // namespace mpdag
