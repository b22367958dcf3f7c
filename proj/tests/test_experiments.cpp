#include <doctest.h>

#include <cmath>
#include <set>

#include "gselab/errors.hpp"
#include "gselab/experiments.hpp"

using namespace gselab;

namespace {

double complete_maxcut(std::size_t k) {
  const double kk = static_cast<double>(k);
  return -2.0 * std::floor(kk * kk / 4.0) / (kk * kk);
}

ParameterSpec maxcut_spec() {
  GraphSolveOptions solver;
  solver.mode = GraphMode::heuristic;
  solver.restarts = 20;
  return {InteractionMatrix::maxcut(2), ThresholdSpec::homogeneous(2, 0.0), solver, "maxcut2"};
}

}  // namespace

TEST_CASE("sample_induced keeps complete graphs complete") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(sample_induced(WeightedGraph::complete(5), 3, seed) == WeightedGraph::complete(3));
}

TEST_CASE("sample_induced edge frequency on a star") {
  const std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  const WeightedGraph star = WeightedGraph::simple(5, edges);
  constexpr std::size_t kTrials = 100000;
  std::size_t hits = 0;
  for (std::size_t seed = 0; seed < kTrials; ++seed) hits += sample_induced(star, 2, seed).edge_weight(0, 1) > 0.0;
  CHECK(std::abs(static_cast<double>(hits) / kTrials - 0.4) <= 0.01);
}

TEST_CASE("sample_induced is deterministic and validates its input") {
  const WeightedGraph g = WeightedGraph::simple(6, std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}, {4, 5}, {1, 4}});
  CHECK(sample_induced(g, 4, 17) == sample_induced(g, 4, 17));
  std::set<std::vector<double>> seen;
  for (std::uint64_t seed = 0; seed < 50; ++seed) seen.insert(sample_induced(g, 3, seed).edge_weights().data());
  CHECK(seen.size() > 1);
  CHECK_THROWS_AS(sample_induced(g, 7, 0), DomainError);
  CHECK_THROWS_AS(sample_induced(WeightedGraph({1.0, 2.0}, Matrix(2, 2)), 1, 0), DomainError);
}

TEST_CASE("quantiles") {
  const Quantiles s = quantiles({4.0, 1.0, 3.0, 2.0, 5.0});
  CHECK(s.min == 1.0);
  CHECK(s.q25 == 2.0);
  CHECK(s.median == 3.0);
  CHECK(s.q75 == 4.0);
  CHECK(s.q90 == doctest::Approx(4.6));
  CHECK(s.max == 5.0);
  CHECK(s.mean == 3.0);
}

TEST_CASE("testability on a complete graph matches the closed form") {
  const ParameterSpec spec = maxcut_spec();
  const TestabilityReport report = testability_experiment(WeightedGraph::complete(60), spec, {7, 20}, 10, 0.1, 5);
  CHECK(report.full_value == complete_maxcut(60));
  REQUIRE(report.levels.size() == 2);
  for (const auto& level : report.levels) {
    REQUIRE(level.samples.size() == 10);
    for (const auto& s : level.samples) {
      CHECK(*s.value == complete_maxcut(level.k));
      CHECK(*s.deviation == std::abs(complete_maxcut(level.k) - complete_maxcut(60)));
    }
  }
  CHECK(report.levels[0].exceedance == 0.0);
  CHECK(report.rows.size() == 20);
}

TEST_CASE("testability with no samples is empty") {
  const TestabilityReport report = testability_experiment(WeightedGraph::complete(10), maxcut_spec(), {3, 5}, 0, 0.1, 1);
  for (const auto& level : report.levels) {
    CHECK(level.samples.empty());
    CHECK_FALSE(level.deviation.has_value());
  }
  CHECK(report.rows.empty());
}

TEST_CASE("testability is reproducible") {
  const WeightedGraph g = sample_induced(WeightedGraph::complete(12), 12, 0);
  const auto a = testability_experiment(g, maxcut_spec(), {4, 6}, 5, 0.05, 9);
  const auto b = testability_experiment(g, maxcut_spec(), {4, 6}, 5, 0.05, 9);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].value == b.rows[i].value);
    CHECK(a.rows[i].seed == b.rows[i].seed);
  }
}

TEST_CASE("extrapolate_limit") {
  SUBCASE("exact 1/k sequence") {
    const auto e = extrapolate_limit({16, 32, 64}, {3.0 + 1.0 / 16, 3.0 + 1.0 / 32, 3.0 + 1.0 / 64});
    REQUIRE(e.limit);
    CHECK(*e.limit == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.residual == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(e.diverging);
  }
  SUBCASE("linear decrease is flagged") {
    const auto e = extrapolate_limit({16, 32, 64}, {-16.0, -32.0, -64.0});
    CHECK(e.diverging);
  }
}

TEST_CASE("blockdiag report closed forms") {
  BlockdiagOptions o;
  o.k_schedule = {16, 32, 64};
  o.n_schedule = {2};
  SUBCASE("single-entry value") {
    const auto r = blockdiag_report(o);
    CHECK(r.single_entry_valid);
    CHECK(r.single_entry_closed_form == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(std::abs(r.single_entry_value - 0.005) <= 1e-5);
  }
  SUBCASE("maxcut value") {
    o.beta1 = 2.0;
    o.beta2 = 2.0;
    const auto r = blockdiag_report(o);
    CHECK(r.maxcut_closed_form == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(r.maxcut_value + 0.5) <= 1e-5);
  }
  SUBCASE("J_k limit separates alpha and 1 - alpha") {
    for (double alpha : {0.3, 0.5}) {
      o.alpha = alpha;
      o.beta1 = 1.0 / alpha;
      o.beta2 = 1.0 / (1.0 - alpha);
      const auto r = blockdiag_report(o);
      CHECK(std::abs(r.maxcut_value + 0.5) <= 1e-5);
      REQUIRE(r.jk.limit);
      CHECK(r.jk_target == doctest::Approx(1.0 + std::max(alpha, 1.0 - alpha)).epsilon(1e-12));
      CHECK(std::abs(*r.jk.limit - r.jk_target) <= 0.02 * r.jk_target);
    }
  }
  SUBCASE("domain") {
    o.alpha = 1.0;
    CHECK_THROWS_AS(blockdiag_report(o), DomainError);
  }
}

TEST_CASE("hierarchy experiment on the alternating schedule") {
  HierarchyOptions o;
  o.menu = mincut_menu({2, 3, 4, 5, 6});
  o.oracle_resolution = 0;
  const auto r = hierarchy_experiment(o);
  CHECK(r.all_lower_pass);
  REQUIRE(r.entries.size() == 5);
  for (const auto& e : r.entries) {
    CHECK(e.lower.gaps.front() < 1e-6);
    CHECK(e.flagged == (e.q >= 5));
  }
  // E^{0.08}(W(0.7), J_5) is positive, E^{0.08}(W(0.5), J_5) vanishes.
  const auto& q5 = r.entries[3].upper.values;
  CHECK(std::abs(q5[0]) <= 1e-9);
  CHECK(q5[1] == doctest::Approx(68.0 / 1225.0).epsilon(1e-6));

  SUBCASE("raising h2 never shrinks a gap") {
    HierarchyOptions lower_h2 = o;
    lower_h2.h2 = 0.3;
    const auto s = hierarchy_experiment(lower_h2);
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      CHECK(s.entries[i].upper.persistent_gap <= r.entries[i].upper.persistent_gap + 1e-9);
      CHECK((!s.entries[i].flagged || r.entries[i].flagged));
    }
  }
}

TEST_CASE("constant schedule raises no flags") {
  HierarchyOptions o;
  o.alpha_schedule = {0.7, 0.7, 0.7, 0.7};
  o.menu = mincut_menu({2, 5});
  o.oracle_resolution = 0;
  const auto r = hierarchy_experiment(o);
  for (const auto& e : r.entries) {
    CHECK_FALSE(e.flagged);
    CHECK(e.upper.passes);
  }
}
