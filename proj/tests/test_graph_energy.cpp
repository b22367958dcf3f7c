#include <doctest.h>

#include <algorithm>

#include "gselab/errors.hpp"
#include "gselab/graph_energy.hpp"
#include "gselab/graphon.hpp"
#include "gselab/graphon_energy.hpp"
#include "gselab/rng.hpp"

using namespace gselab;

namespace {

InteractionMatrix random_j(Rng& rng, std::size_t q) {
  Matrix m(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i; j < q; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
  return InteractionMatrix(m);
}

WeightedGraph random_graph(Rng& rng, std::size_t n, double p) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.emplace_back(u, v);
  return WeightedGraph::simple(n, edges);
}

}  // namespace

TEST_CASE("configuration energy examples") {
  const auto k3 = WeightedGraph::complete(3);
  CHECK(energy_of_configuration(k3, InteractionMatrix::maxcut(2), SpinConfiguration({0, 0, 1}, 2)) ==
        doctest::Approx(-4.0 / 9.0).epsilon(1e-15));
  CHECK(energy_of_configuration(k3, InteractionMatrix::zero(2), SpinConfiguration({0, 0, 1}, 2)) == 0.0);
  CHECK(energy_of_configuration(k3, InteractionMatrix::mincut(2), SpinConfiguration({0, 0, 0}, 2)) == 0.0);
}

TEST_CASE("exhaustive GSE") {
  const auto r = gse_exhaustive(WeightedGraph::complete(3), InteractionMatrix::maxcut(2));
  CHECK(r.value == doctest::Approx(-4.0 / 9.0));
  auto sizes = class_sizes(*r.configuration());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 2});
  CHECK(r.configuration()->states() == std::vector<int>{0, 0, 1});
  CHECK(gse_exhaustive(WeightedGraph::edgeless(4), InteractionMatrix::maxcut(3)).value == 0.0);
  CHECK(gse_exhaustive(WeightedGraph::edgeless(1), InteractionMatrix(Matrix(1, 1, 2.0))).value == 0.0);
  CHECK_THROWS_AS(gse_exhaustive(WeightedGraph::complete(12), InteractionMatrix::maxcut(3), 1e3), BudgetExceeded);
}

TEST_CASE("local search matches exhaustive and is deterministic") {
  const auto k3 = WeightedGraph::complete(3);
  CHECK(gse_local_search(k3, InteractionMatrix::maxcut(2), 8, 1).value == doctest::Approx(-4.0 / 9.0));
  CHECK(gse_local_search(k3, InteractionMatrix::zero(2), 1, 1).value == 0.0);
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_graph(rng, 7, 0.5);
    const auto j = random_j(rng, 3);
    const auto exact = gse_exhaustive(g, j);
    const auto a = gse_local_search(g, j, 50, trial);
    const auto b = gse_local_search(g, j, 50, trial);
    CHECK(a.value >= exact.value);
    CHECK(a.value == b.value);
    CHECK(*a.configuration() == *b.configuration());
    CHECK(energy_of_configuration(g, j, *a.configuration()) == a.value);
  }
}

TEST_CASE("MGSE examples") {
  const auto k3 = WeightedGraph::complete(3);
  const auto r = mgse(k3, InteractionMatrix::mincut(2), ProbabilityDistribution({1.0 / 3.0, 2.0 / 3.0}));
  CHECK(r.value == 0.0);
  CHECK(class_sizes(*r.configuration()) == std::vector<std::size_t>{0, 3});
  const auto k4 = WeightedGraph::complete(4);
  CHECK(mgse(k4, InteractionMatrix::maxcut(2), ProbabilityDistribution({0.5, 0.5})).value == doctest::Approx(-0.5));
  const InteractionMatrix j1(Matrix(1, 1, 1.0));
  CHECK(mgse(k3, j1, ProbabilityDistribution({1.0})).value == doctest::Approx(-6.0 / 9.0));
}

TEST_CASE("feasible size vectors") {
  CHECK(feasible_size_vectors(3, 2, 0.0).size() == 4);
  CHECK(feasible_size_vectors(4, 2, 0.5) == std::vector<SizeVector>{{1, 3}, {2, 2}, {3, 1}});
  const auto v = feasible_size_vectors(3, 3, 1.0 / 3.0);
  CHECK(v.size() == 7);
  CHECK(std::find(v.begin(), v.end(), SizeVector{1, 1, 1}) != v.end());
  CHECK(std::find(v.begin(), v.end(), SizeVector{0, 1, 2}) != v.end());
  CHECK(std::find(v.begin(), v.end(), SizeVector{0, 0, 3}) == v.end());
}

TEST_CASE("LTGSE examples") {
  const auto k3 = WeightedGraph::complete(3);
  const auto k4 = WeightedGraph::complete(4);
  CHECK(ltgse_graph(k3, InteractionMatrix::maxcut(2), ThresholdSpec::homogeneous(2, 0.0)).value ==
        doctest::Approx(-4.0 / 9.0));
  CHECK(ltgse_graph(k4, InteractionMatrix::maxcut(2), ThresholdSpec::homogeneous(2, 0.5)).value ==
        doctest::Approx(-0.5));
  const auto r = ltgse_graph(k4, InteractionMatrix::mincut(2), ThresholdSpec::homogeneous(2, 0.5));
  CHECK(r.value == doctest::Approx(3.0 / 8.0));
  auto sizes = class_sizes(*r.configuration());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 3});
}

TEST_CASE("threshold endpoints and monotonicity on graphs") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_graph(rng, 6, 0.6);
    const std::size_t q = 2 + trial % 2;
    const auto j = random_j(rng, q);
    const double gse = gse_exhaustive(g, j).value;
    double prev = -1e300;
    for (int step = 0; step <= 4; ++step) {
      const double c = step / (4.0 * q);
      const double e = ltgse_graph(g, j, ThresholdSpec::homogeneous(q, c)).value;
      if (step == 0) CHECK(e == gse);
      if (step == 4) CHECK(e == mgse(g, j, ProbabilityDistribution::uniform(q)).value);
      CHECK(e >= prev);
      prev = e;
    }
  }
}

TEST_CASE("heuristic constrained search never beats exhaustive") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_graph(rng, 7, 0.5);
    const auto j = random_j(rng, 2);
    const auto spec = ThresholdSpec::homogeneous(2, 0.4);
    GraphSolveOptions heuristic;
    heuristic.mode = GraphMode::heuristic;
    heuristic.seed = trial;
    const double exact = ltgse_graph(g, j, spec).value;
    const double approx = ltgse_graph(g, j, spec, heuristic).value;
    CHECK(approx >= exact);
    CHECK(approx == doctest::Approx(exact));
  }
}

TEST_CASE("graph and embedded graphon energies agree on indicator profiles") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_graph(rng, 6, 0.5);
    const auto j = random_j(rng, 3);
    std::vector<int> states(6);
    for (int& s : states) s = static_cast<int>(rng.below(3));
    const SpinConfiguration phi(states, 3);
    const double graph_side = energy_of_configuration(g, j, phi);
    const double graphon_side = energy_of_profile(graphon_from_graph(g), j, FractionalProfile::indicator(phi));
    CHECK(graph_side == doctest::Approx(graphon_side).epsilon(1e-14));
  }
}
