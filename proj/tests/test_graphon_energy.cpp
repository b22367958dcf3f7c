#include <doctest.h>

#include <chrono>

#include "gselab/errors.hpp"
#include "gselab/graphon.hpp"
#include "gselab/graphon_energy.hpp"
#include "gselab/rng.hpp"

using namespace gselab;

namespace {

StepGraphon random_graphon(Rng& rng, std::size_t k) {
  std::vector<double> lambda(k);
  rng.dirichlet(lambda);
  Matrix b(k, k);
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t t = s; t < k; ++t) b(s, t) = b(t, s) = rng.uniform(0.0, 1.0);
  return StepGraphon(lambda, b);
}

InteractionMatrix random_j(Rng& rng, std::size_t q) {
  Matrix m(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i; j < q; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
  return InteractionMatrix(m);
}

}  // namespace

TEST_CASE("profile energy examples") {
  const auto one = constant_graphon(1.0);
  const InteractionMatrix j1(Matrix(1, 1, 1.0));
  CHECK(energy_of_profile(one, j1, FractionalProfile::pure(1, 1, 0)) == -1.0);
  const std::vector<double> half{0.5, 0.5};
  CHECK(energy_of_profile(one, InteractionMatrix::maxcut(2), FractionalProfile::constant(1, half)) == -0.5);
  CHECK(energy_of_profile(block_diagonal(0.5, 2, 2), j1, FractionalProfile::pure(2, 1, 0)) == -1.0);
  CHECK_THROWS_AS(energy_of_profile(one, j1, FractionalProfile::pure(2, 1, 0)), ValidationError);
}

TEST_CASE("refinement leaves the energy unchanged") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random_graphon(rng, 2);
    const auto j = random_j(rng, 3);
    Matrix r(2, 3);
    for (std::size_t t = 0; t < 2; ++t) rng.dirichlet(r.row(t));
    const FractionalProfile p(r);
    const std::vector<std::vector<double>> parts{{0.5, 0.5}, {0.2, 0.3, 0.5}};
    const double before = energy_of_profile(w, j, p);
    const double after = energy_of_profile(w.refined(parts), j, refine_profile(w, p, parts));
    CHECK(after == doctest::Approx(before).epsilon(1e-13));
  }
}

TEST_CASE("projection lands on the feasible set") {
  Rng rng(9);
  const std::vector<double> lambda{0.2, 0.3, 0.5};
  const auto c = ProfileConstraint::equality(ProbabilityDistribution({0.1, 0.6, 0.3}));
  for (int trial = 0; trial < 10; ++trial) {
    Matrix y(3, 3);
    for (double& v : y.data()) v = rng.uniform(-1.0, 2.0);
    const Matrix x = project_feasible(y, lambda, c);
    const FractionalProfile p(x);
    const auto a = p.induced_distribution(lambda);
    CHECK(c.satisfied_by(a, 1e-10));
  }
}

TEST_CASE("projection stays on the simplex for far-away equality targets") {
  // More states than blocks leaves the multipliers free up to a common shift.
  const std::vector<double> lambda{0.5, 0.5};
  const auto c = ProfileConstraint::equality(ProbabilityDistribution::uniform(3));
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(derive_seed(0, seed));
    Matrix y(2, 3);
    for (std::size_t t = 0; t < 2; ++t) rng.dirichlet(y.row(t));
    for (double scale : {1.0, 100.0, 1e4}) {
      Matrix z = y;
      for (double& v : z.data()) v *= scale;
      const Matrix x = project_feasible(z, lambda, c);
      REQUIRE_NOTHROW(FractionalProfile{x});
      CHECK(c.satisfied_by(FractionalProfile(x).induced_distribution(lambda), 1e-10));
    }
  }
  const Matrix j = Matrix::from_rows({{0, 1, 1}, {1, 0, 0}, {1, 0, 0}});
  CHECK(minimize_energy(block_diagonal(0.5, 1, 1), InteractionMatrix(j), c).value ==
        doctest::Approx(-2.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("minimize energy examples") {
  const auto one = constant_graphon(1.0);
  for (std::size_t q = 2; q <= 6; ++q)
    CHECK(std::abs(minimize_energy(one, InteractionMatrix::mincut(q), ProfileConstraint::none()).value) <= 1e-9);
  const auto half = ProfileConstraint::equality(ProbabilityDistribution({0.5, 0.5}));
  CHECK(minimize_energy(one, InteractionMatrix::mincut(2), half).value == doctest::Approx(0.5).epsilon(1e-9));
  const auto ex2 = minimize_energy(block_diagonal(0.5, 1, 1), InteractionMatrix::single_entry(2),
                                   ProfileConstraint::lower({0.1, 0.1}));
  CHECK(ex2.value == doctest::Approx(0.005).epsilon(1e-7));
  CHECK_THROWS_AS(minimize_energy(one, InteractionMatrix::mincut(2), ProfileConstraint::lower({0.6, 0.6})),
                  DomainError);
}

TEST_CASE("grid oracle examples") {
  const auto one = constant_graphon(1.0);
  CHECK(grid_oracle(one, InteractionMatrix::maxcut(2), ProfileConstraint::none(), 4).value == -0.5);
  Rng rng(1);
  CHECK(grid_oracle(random_graphon(rng, 3), InteractionMatrix::zero(3), ProfileConstraint::none(), 7).value == 0.0);
  const auto ex2 = grid_oracle(block_diagonal(0.5, 1, 1), InteractionMatrix::single_entry(2),
                               ProfileConstraint::lower({0.1, 0.1}), 50);
  CHECK(std::abs(ex2.value - 0.005) <= 0.0004);
  CHECK_THROWS_AS(grid_oracle(one, InteractionMatrix::maxcut(3), ProfileConstraint::none(), 1000, 10.0),
                  BudgetExceeded);
}

TEST_CASE("block permutation leaves energies unchanged") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = random_graphon(rng, 3);
    const auto j = random_j(rng, 2);
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto c = ProfileConstraint::lower({0.2, 0.3});
    const double a = grid_oracle(w, j, c, 12).value;
    const double b = grid_oracle(w.permuted(perm), j, c, 12).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(minimize_energy(w, j, c).value == doctest::Approx(minimize_energy(w.permuted(perm), j, c).value).epsilon(1e-7));
  }
}

TEST_CASE("set monotonicity: equality is above the lower threshold") {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = random_graphon(rng, 2);
    const auto j = random_j(rng, 3);
    const double eq = minimize_energy(w, j, ProfileConstraint::equality(ProbabilityDistribution({0.3, 0.3, 0.4}))).value;
    const double lo = minimize_energy(w, j, ProfileConstraint::lower({0.2, 0.2, 0.2})).value;
    CHECK(eq >= lo - 1e-9);
  }
}
