#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gselab/core.hpp"

namespace gselab {

/// Default cap on the number of configurations an exact enumeration may visit.
inline constexpr double kDefaultEnumerationBudget = 1e7;

enum class GraphMode { exhaustive, heuristic };

struct GraphSolveOptions {
  GraphMode mode = GraphMode::exhaustive;
  std::size_t restarts = 50;
  std::uint64_t seed = 0;
  double budget = kDefaultEnumerationBudget;
};

using SizeVector = std::vector<std::size_t>;

/// Energy density -(1/alpha_G^2) sum_{u != v} alpha_u alpha_v beta_uv J_{phi(u) phi(v)}.
/// On simple graphs this is -(2/n^2) sum_{uv in E} J_{phi(u) phi(v)}.
double energy_of_configuration(const WeightedGraph& g, const InteractionMatrix& j, const SpinConfiguration& phi);

/// Exact ground state energy by enumerating all q^n configurations. Ties
/// resolve to the lexicographically smallest assignment.
EnergyResult gse_exhaustive(const WeightedGraph& g, const InteractionMatrix& j,
                            double budget = kDefaultEnumerationBudget);

/// Multi-start steepest descent over single-node moves. Never below the
/// exact GSE; deterministic given the seed.
EnergyResult gse_local_search(const WeightedGraph& g, const InteractionMatrix& j, std::size_t restarts,
                              std::uint64_t seed);

/// Class-size vectors of Omega_a: | n_i - a_i n | <= 1 and sum n_i = n.
std::vector<SizeVector> admissible_size_vectors(std::size_t n, const ProbabilityDistribution& a);

/// Microcanonical ground state energy over Omega_a(G).
EnergyResult mgse(const WeightedGraph& g, const InteractionMatrix& j, const ProbabilityDistribution& a,
                  const GraphSolveOptions& options = {});

/// Size vectors realizable inside Omega_a for some a in A_c:
/// sum n_i = n, n_i >= ceil(c n) - 1, and sum_i max(c, (n_i - 1)/n) <= 1.
std::vector<SizeVector> feasible_size_vectors(std::size_t n, std::size_t q, double c);

/// Same for an arbitrary threshold spec (general bounds, either direction).
std::vector<SizeVector> feasible_size_vectors(std::size_t n, const ThresholdSpec& spec);

/// Lower (or upper) threshold ground state energy of a graph.
EnergyResult ltgse_graph(const WeightedGraph& g, const InteractionMatrix& j, const ThresholdSpec& spec,
                         const GraphSolveOptions& options = {});

/// Minimum energy over configurations whose class sizes lie in `allowed`.
/// Exhaustive enumeration, or local search when options.mode is heuristic.
EnergyResult minimize_over_sizes(const WeightedGraph& g, const InteractionMatrix& j,
                                 const std::vector<SizeVector>& allowed, const GraphSolveOptions& options);

}  // namespace gselab
