#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gselab/core.hpp"
#include "gselab/graphon.hpp"

namespace gselab {

/// Largest block count for which cut_norm_step enumerates all subsets.
inline constexpr std::size_t kMaxExactCutNormBlocks = 20;

struct CutNormResult {
  double value = 0.0;
  /// Maximizing block subsets (0-based, ascending).
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  /// False when the coordinate-ascent fallback ran; value is then a lower bound.
  bool exact = true;
};

/// ||W||_cut = max over block subsets S, T of |sum_{s in S, t in T} lambda_s lambda_t B_st|.
CutNormResult cut_norm_step(const StepGraphon& w, std::size_t max_exact_blocks = kMaxExactCutNormBlocks,
                            std::uint64_t seed = 0);

/// Same quantity for blocks of measure `mu` (zero allowed) and values `d`.
CutNormResult cut_norm_blocks(std::span<const double> mu, const Matrix& d,
                              std::size_t max_exact_blocks = kMaxExactCutNormBlocks, std::uint64_t seed = 0);

enum class CutDistanceMode { exact, alternating };

std::string to_string(CutDistanceMode mode);

struct CutDistanceOptions {
  CutDistanceMode mode = CutDistanceMode::alternating;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 200;
  /// Budget on inner cut-norm work (subset evaluations) for the exact mode's grid.
  double budget = 1e7;
};

struct CutDistanceResult {
  /// Upper bound on the coupling cut distance.
  double value = 0.0;
  /// k_U x k_W coupling achieving `value`.
  Matrix coupling;
  CutDistanceMode mode = CutDistanceMode::alternating;
  std::size_t iterations = 0;
  /// Every inner cut norm was computed exactly.
  bool inner_exact = true;
  /// Non-empty when the requested mode was degraded.
  std::string warning;
};

/// Minimum over block couplings X of ||coupled_difference(U, W, X)||_cut,
/// as an upper bound. Symmetric: distance(U, W) == distance(W, U).
CutDistanceResult cut_distance_step(const StepGraphon& u, const StepGraphon& w, const CutDistanceOptions& options = {});

/// Fractional-overlay cut distance of two weighted graphs, via their graphons.
CutDistanceResult cut_distance_graphs(const WeightedGraph& g, const WeightedGraph& h,
                                      const CutDistanceOptions& options = {});

/// Euclidean projection onto couplings of `left` and `right`.
Matrix project_to_couplings(const Matrix& y, std::span<const double> left, std::span<const double> right);

/// Maximum block-product count n * n' allowed in exact mode.
inline constexpr std::size_t kMaxExactCouplingCells = 16;

}  // namespace gselab
