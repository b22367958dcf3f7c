#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gselab/core.hpp"
#include "gselab/cut_metrics.hpp"
#include "gselab/graph_energy.hpp"
#include "gselab/graphon.hpp"
#include "gselab/graphon_energy.hpp"

namespace gselab {

/// Interaction matrix on q' states obtained by repeating row and column i of
/// J q' * a_i times, with zero-mass states erased.
struct BlowUp {
  InteractionMatrix j;
  ProbabilityDistribution b;
  /// Original state of each new state (0-based).
  std::vector<std::size_t> source_state;
  /// Number of original states q.
  std::size_t q = 0;
};

/// Requires every a_i to be a multiple of 1/q' (within 1e-12); DomainError otherwise.
BlowUp blow_up(const ProbabilityDistribution& a, std::size_t q_prime, const InteractionMatrix& j);

/// Splits each state's column evenly across its copies; maps a profile
/// inducing a to one inducing the uniform b, at equal energy.
FractionalProfile lift_profile(const BlowUp& up, const ProbabilityDistribution& a, const FractionalProfile& r);

/// Merges the copies of each original state back into one column.
FractionalProfile project_profile(const BlowUp& up, const FractionalProfile& r);

/// b_i = floor(a_i q') / q' for i < q and b_q = 1 - sum of the others.
ProbabilityDistribution rationalize(const ProbabilityDistribution& a, std::size_t q_prime);

/// Lower threshold with the same total h whose components are positive
/// multiples of h / q' (largest-remainder apportionment, one unit minimum).
ThresholdSpec round_threshold(const ThresholdSpec& x, std::size_t q_prime);

enum class InterpolationFormula { corrected, printed };

/// (x_a)_i = h1/q + (a_i - h1/q)(h2 - h1)/(1 - h1). The printed formula uses
/// (a_i - h1) in the numerator and does not sum to h2 for q > 1.
std::vector<double> interpolate_threshold(std::span<const double> a, double h1, double h2,
                                          InterpolationFormula formula = InterpolationFormula::corrected);

double continuity_rhs(std::span<const double> a, std::span<const double> b, double w_inf, double j_inf);
double graph_graphon_rhs(const WeightedGraph& g, std::size_t q, const InteractionMatrix& j);
double cut_lipschitz_rhs(std::size_t q, const InteractionMatrix& j, double delta);

struct CheckOptions {
  MinimizeOptions solver;
  /// Grid resolution for the oracle; 0 disables it.
  std::size_t oracle_resolution = 20;
  /// Largest oracle evaluation count attempted.
  double oracle_budget = 2e7;
  double tolerance = 1e-6;
  CutDistanceOptions distance;
  GraphSolveOptions graph;
};

/// Best available estimate of a constrained graphon energy: the smaller of
/// the solver value and the grid oracle value (both are attained values).
struct EnergyEstimate {
  double value = 0.0;
  double solver = 0.0;
  std::optional<double> oracle;
  /// Profile attaining `value`.
  std::optional<ProfileCertificate> certificate;
};

EnergyEstimate estimate_energy(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& constraint,
                               const CheckOptions& options);

struct BoundReport {
  std::string bound;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Every energy in the report was confirmed by the grid oracle or exact
  /// enumeration; otherwise the check ran at solver precision.
  bool oracle_certified = false;
  /// Named intermediate values, in a fixed order.
  std::vector<std::pair<std::string, double>> terms;
  std::vector<BoundReport> parts;
};

/// |E_a(W,J) - E_b(W,J)| <= 2 |a-b|_1 |W|_inf |J|_inf.
BoundReport check_continuity(const StepGraphon& w, const InteractionMatrix& j, const ProbabilityDistribution& a,
                             const ProbabilityDistribution& b, const CheckOptions& options = {});

/// |MGSE_a(G,J) - E_a(W_G,J)| <= rhs, and the same for the lower threshold c
/// when supplied.
BoundReport check_graph_graphon(const WeightedGraph& g, const InteractionMatrix& j, const ProbabilityDistribution& a,
                                std::optional<double> c, const CheckOptions& options = {});

/// |E_a(U,J) - E_a(W,J)| <= q^2 |J|_inf delta(U,W) with delta from cut_distance_step.
BoundReport check_cut_lipschitz(const StepGraphon& u, const StepGraphon& w, const InteractionMatrix& j,
                                const ProbabilityDistribution& a, const CheckOptions& options = {});

/// |E_a(W,J) - E_b(W,J')| <= tolerance for the blow-up (J', b) of (a, J).
/// Certificates are mapped both ways with lift_profile / project_profile.
BoundReport check_blow_up(const StepGraphon& w, const InteractionMatrix& j, const ProbabilityDistribution& a,
                          std::size_t q_prime, const CheckOptions& options = {});

}  // namespace gselab
