#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gselab/core.hpp"
#include "gselab/graphon.hpp"

namespace gselab {

enum class ConstraintKind { none, equality, lower, upper };

/// Linear constraint on the distribution a_i = sum_t lambda_t r_ti induced by
/// a profile: a = target, a >= target, or a <= target componentwise.
struct ProfileConstraint {
  ConstraintKind kind = ConstraintKind::none;
  std::vector<double> target;

  static ProfileConstraint none() { return {}; }
  static ProfileConstraint equality(const ProbabilityDistribution& a);
  static ProfileConstraint lower(std::vector<double> x);
  static ProfileConstraint upper(std::vector<double> x);
  static ProfileConstraint from_threshold(const ThresholdSpec& spec);

  /// Throws DomainError for infeasible targets, ValidationError on a q mismatch.
  void validate(std::size_t q) const;
  bool satisfied_by(std::span<const double> a, double tolerance) const;
};

std::string to_string(ConstraintKind kind);

/// E_r(W,J) = -sum_{i,j} J_ij sum_{s,t} lambda_s lambda_t B_st r_si r_tj.
double energy_of_profile(const StepGraphon& w, const InteractionMatrix& j, const FractionalProfile& r);

/// Profile on w.refined(parts) that repeats each block's row on its pieces.
FractionalProfile refine_profile(const StepGraphon& w, const FractionalProfile& r,
                                 const std::vector<std::vector<double>>& parts);

struct MinimizeOptions {
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  /// Stationarity tolerance on the projected-gradient norm.
  double tol = 1e-9;
  std::size_t max_iterations = 20000;
};

/// Upper-bounding estimate of the constrained minimum of E_r(W,J) over
/// fractional profiles: multi-start projected gradient with Armijo
/// backtracking in the lambda-weighted metric.
EnergyResult minimize_energy(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& constraint,
                             const MinimizeOptions& options = {});

/// Euclidean projection of `r` (k x q) onto {rows on the simplex} intersected
/// with the column constraints. Solves the dual by damped Newton steps and
/// falls back to Dykstra's alternating projections.
Matrix project_feasible(const Matrix& r, std::span<const double> lambda, const ProfileConstraint& constraint);

inline constexpr double kDefaultOracleBudget = 2e9;

/// Exact minimum over profiles whose entries are multiples of 1/m, with the
/// constraint enforced exactly (up to `slack` on the induced masses).
EnergyResult grid_oracle(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& constraint,
                         std::size_t resolution, double budget = kDefaultOracleBudget, double slack = 1e-9);

/// Number of grid evaluations grid_oracle would perform.
double grid_oracle_cost(const StepGraphon& w, std::size_t q, std::size_t resolution, ConstraintKind kind);

}  // namespace gselab
