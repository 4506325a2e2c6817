#include <doctest.h>

#include "mpdag/error.hpp"
#include "mpdag/identify.hpp"
#include "mpdag/meek.hpp"
#include "mpdag/oracle.hpp"
#include "support.hpp"

using namespace mpdag;
using testsupport::load;

namespace {

IdFormula formula(std::vector<Factor> factors, NameSet integrate, NameSet intervened, NameSet response) {
  return IdFormula{std::move(factors), std::move(integrate), std::move(intervened), std::move(response)};
}

// f(y | do(x)) = sum_z f(y | x, z) f(z)
IdFormula adjustment_formula(const Pdag& g, const NodeSet& xs, const NodeSet& ys, const NodeSet& zs) {
  auto names = [&](const NodeSet& s) {
    NameSet out;
    for (Node v : s) out.insert(g.name(v));
    return out;
  };
  IdFormula f;
  if (!zs.empty()) f.factors.push_back({names(zs), {}});
  NameSet given = names(xs);
  for (const auto& z : names(zs)) given.insert(z);
  f.factors.push_back({names(ys), given});
  f.integrate_over = names(zs);
  f.intervened = names(xs);
  f.response = names(ys);
  return f;
}

}  // namespace

TEST_CASE("identification formulas of the worked examples") {
  const Pdag g4 = load("fig4a.g");
  const auto r1 = identify(g4, g4.ids({"X"}), g4.ids({"Y1", "Y2"}));
  REQUIRE(r1.identifiable());
  CHECK(structurally_equal(r1.formula(), formula({{{"Y1"}, {}}, {{"Y2"}, {"X", "Y1"}}}, {}, {"X"}, {"Y1", "Y2"})));
  CHECK(r1.formula().factors.front().targets == NameSet{"Y1"});

  const Pdag g5 = load("fig5a.g");
  const auto r2 = identify(g5, g5.ids({"X"}), g5.ids({"Y"}));
  REQUIRE(r2.identifiable());
  CHECK(structurally_equal(r2.formula(), formula({{{"V1", "V2"}, {}}, {{"Y"}, {"X", "V1", "V2"}}},
                                                 {"V1", "V2"}, {"X"}, {"Y"})));

  const Pdag g6 = load("fig6b.g");
  const auto r3 = identify(g6, g6.ids({"X1", "X2"}), g6.ids({"Y"}));
  REQUIRE(r3.identifiable());
  CHECK(structurally_equal(r3.formula(), formula({{{"V4"}, {"X1"}}, {{"Y"}, {"X1", "X2", "V4"}}},
                                                 {"V4"}, {"X1", "X2"}, {"Y"})));

  const Pdag g3a = load("fig3a.g");
  const auto r4 = identify(g3a, g3a.ids({"X"}), g3a.ids({"Y"}));
  REQUIRE_FALSE(r4.identifiable());
  CHECK(format_path(g3a, r4.witness()) == "X -- Y");
  CHECK_THROWS_AS(r4.formula(), std::bad_optional_access);

  const Pdag g3b = load("fig3b.g");
  const auto r5 = identify(g3b, g3b.ids({"X1", "X2"}), g3b.ids({"Y"}));
  REQUIRE(r5.identifiable());
  CHECK(structurally_equal(r5.formula(), formula({{{"Y"}, {"X2"}}}, {}, {"X1", "X2"}, {"Y"})));
}

TEST_CASE("identify argument handling and degenerate cases") {
  const Pdag g = load("fig4a.g");
  CHECK_THROWS_AS(identify(g, g.ids({"X"}), g.ids({"X"})), ArgumentError);
  CHECK_THROWS_AS(identify(g, g.ids({"X"}), {}), ArgumentError);
  CHECK_THROWS_AS(identify(parse_graph("A -> B\nB -- C"), {0}, {2}), GraphError);
  // zero-effect shortcut: Y2 is a sink
  const auto z = identify(g, g.ids({"Y2"}), g.ids({"X"}));
  REQUIRE(z.identifiable());
  CHECK(render(z.formula(), RenderStyle::text) == "f(x|do(y2)) = f(x)");
  // empty X gives the observational marginal
  const auto m = identify(g, {}, g.ids({"Y2"}));
  REQUIRE(m.identifiable());
  CHECK(m.formula().intervened.empty());
  CHECK(m.formula().response == NameSet{"Y2"});
}

TEST_CASE("truncated factorization") {
  const Pdag g5 = load("fig5a.g");
  const IdFormula t = truncated_factorization(g5, g5.ids({"X"}));
  CHECK(structurally_equal(t, formula({{{"V1", "V2", "V3"}, {}}, {{"Y"}, {"X", "V1", "V2"}}}, {},
                                      {"X"}, {"V1", "V2", "V3", "Y"})));
  CHECK_THROWS_AS(truncated_factorization(load("fig4a.g"), load("fig4a.g").ids({"X"})), NotTruncatable);
  const IdFormula obs = truncated_factorization(g5, {});
  CHECK(obs.factors.size() == 3);
  CHECK(obs.response == NameSet{"V1", "V2", "V3", "X", "Y"});
  CHECK_NOTHROW(validate(obs));
}

TEST_CASE("check_adjustment on the examples") {
  const Pdag g6 = load("fig6b.g");
  CHECK_FALSE(check_adjustment(g6, g6.ids({"X1", "X2"}), g6.ids({"Y"}), {}));
  const Pdag g4 = load("fig4a.g");
  std::vector<Node> rest{g4.id("V1")};
  for (const auto& z : testsupport::subsets(rest))
    CHECK_FALSE(check_adjustment(g4, g4.ids({"X"}), g4.ids({"Y1", "Y2"}), z));
  const Pdag xy = parse_graph("X -> Y");
  CHECK(check_adjustment(xy, xy.ids({"X"}), xy.ids({"Y"}), {}));
  CHECK_THROWS_AS(check_adjustment(xy, xy.ids({"X"}), xy.ids({"Y"}), xy.ids({"Y"})), ArgumentError);
}

TEST_CASE("find_adjustment_set on the examples") {
  const Pdag g5 = load("fig5a.g");
  const auto a = find_adjustment_set(g5, g5.ids({"X"}), g5.ids({"Y"}));
  CHECK(a.outcome == AdjustmentOutcome::set_found);
  CHECK(a.set == g5.ids({"V1", "V2", "V3"}));
  const Pdag g4 = load("fig4a.g");
  const auto b = find_adjustment_set(g4, g4.ids({"X"}), g4.ids({"Y1", "Y2"}));
  CHECK(b.outcome == AdjustmentOutcome::none_exists);
  CHECK(b.reason == NoAdjustmentReason::blocked_path_unachievable);
  const auto c = find_adjustment_set(g4, g4.ids({"X"}), g4.ids({"Y1"}));
  CHECK(c.outcome == AdjustmentOutcome::zero_effect);
  const Pdag g3 = load("fig3a.g");
  const auto d = find_adjustment_set(g3, g3.ids({"X"}), g3.ids({"Y"}));
  CHECK(d.outcome == AdjustmentOutcome::none_exists);
  CHECK(d.reason == NoAdjustmentReason::not_amenable);
  CHECK(std::string(to_string(AdjustmentOutcome::set_found)) == "set_found");
}

TEST_CASE("identify is complete: identifiable exactly when amenable, checked against the oracle") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 60; ++round) {
    const Pdag g = testsupport::random_mpdag(2 + round % 4, 0.6, 0.3, rng);
    const ClassOracle oracle(g, 4, 1000 + static_cast<std::uint64_t>(round));
    for (const auto& [xs, ys] : testsupport::small_query_pairs(g.size())) {
      const auto r = identify(g, xs, ys);
      CHECK(r.identifiable() == !testsupport::brute_not_amenable(g, xs, ys));
      if (r.identifiable()) {
        CHECK_NOTHROW(validate(r.formula()));
        const auto rep = oracle.agreement(xs, ys, r.formula());
        CHECK(rep.max_cross_dag_tv < 1e-9);
        CHECK(rep.max_formula_deviation < 1e-9);
        // the long form agrees with the shortcut
        const auto full = causal_identification_formula(g, xs, ys);
        CHECK(oracle.agreement(xs, ys, full).max_formula_deviation < 1e-9);
        // conditioners come from X or earlier buckets
        NameSet seen(r.formula().intervened);
        for (const auto& f : r.formula().factors) {
          for (const auto& c : f.given) CHECK(seen.count(c));
          seen.insert(f.targets.begin(), f.targets.end());
        }
      } else {
        const auto w = nonid_witness(g, xs, ys);
        CHECK((wright_cov(w.first) - wright_cov(w.second)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(w.delta > 0.0);
      }
    }
  }
}

TEST_CASE("adjustment sets reproduce the identified effect") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 40; ++round) {
    const Pdag g = testsupport::random_mpdag(3 + round % 3, 0.6, 0.4, rng);
    const ClassOracle oracle(g, 3, 77 + static_cast<std::uint64_t>(round));
    for (Node x = 0; x < g.size(); ++x)
      for (Node y = 0; y < g.size(); ++y) {
        if (x == y) continue;
        std::vector<Node> rest;
        for (Node v = 0; v < g.size(); ++v)
          if (v != x && v != y) rest.push_back(v);
        for (const auto& z : testsupport::subsets(rest)) {
          if (!check_adjustment(g, {x}, {y}, z)) continue;
          CHECK(identify(g, {x}, {y}).identifiable());
          const auto rep = oracle.agreement({x}, {y}, adjustment_formula(g, {x}, {y}, z));
          CHECK(rep.max_formula_deviation < 1e-9);
        }
        const auto found = find_adjustment_set(g, {x}, {y});
        if (found.outcome == AdjustmentOutcome::set_found) CHECK(check_adjustment(g, {x}, {y}, found.set));
      }
  }
}

TEST_CASE("parents are an adjustment set whenever the effect is identifiable") {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 300; ++round) {
    const Pdag g = testsupport::random_mpdag(2 + round % 5, 0.6, 0.4, rng);
    for (Node x = 0; x < g.size(); ++x)
      for (Node y = 0; y < g.size(); ++y) {
        if (x == y) continue;
        const NodeSet pa = relatives(g, {x}, Relation::parents);
        if (pa.count(y)) continue;
        CHECK(identify(g, {x}, {y}).identifiable() == check_adjustment(g, {x}, {y}, pa));
      }
  }
}
