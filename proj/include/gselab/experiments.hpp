#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gselab/core.hpp"
#include "gselab/graph_energy.hpp"
#include "gselab/graphon.hpp"
#include "gselab/graphon_energy.hpp"

namespace gselab {

/// Induced subgraph on a uniformly random k-subset (seeded Fisher-Yates
/// prefix); nodes keep their original relative order.
WeightedGraph sample_induced(const WeightedGraph& g, std::size_t k, std::uint64_t seed);

/// Graph parameter f(G) = threshold ground state energy for fixed (J, threshold).
struct ParameterSpec {
  InteractionMatrix j;
  ThresholdSpec threshold;
  GraphSolveOptions solver;
  std::string j_id = "J";

  std::size_t q() const { return j.q(); }
  EnergyResult evaluate(const WeightedGraph& g) const;
};

/// Short description such as "lower c=0.1" or "upper x=(0.2,0.9)".
std::string describe(const ThresholdSpec& spec);

/// One CSV line of an experiment: (index, q, J-id, threshold, value, method, seed).
struct ReportRow {
  std::size_t index = 0;
  std::size_t q = 0;
  std::string j_id;
  std::string threshold;
  double value = 0.0;
  std::string method;
  std::uint64_t seed = 0;
};

struct Quantiles {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Linear-interpolation quantiles of a nonempty sample.
Quantiles quantiles(std::vector<double> values);

struct SampleRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  /// Absent when the solver budget was exceeded.
  std::optional<double> value;
  std::optional<double> deviation;
  std::string method;
};

struct TestabilityLevel {
  std::size_t k = 0;
  std::vector<SampleRecord> samples;
  std::optional<Quantiles> deviation;
  /// Fraction of completed samples with deviation > epsilon.
  double exceedance = 0.0;
  bool partial = false;
};

struct TestabilityReport {
  double full_value = 0.0;
  std::string full_method;
  std::size_t n = 0;
  std::size_t m = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<TestabilityLevel> levels;
  bool partial = false;
  std::vector<ReportRow> rows;
};

/// Draws m induced subgraphs per k and compares f on each with f(G).
/// Sample i at level k uses seed derive_seed(derive_seed(seed, k), i).
TestabilityReport testability_experiment(const WeightedGraph& g, const ParameterSpec& spec,
                                         const std::vector<std::size_t>& k_list, std::size_t m, double epsilon,
                                         std::uint64_t seed);

/// Values of a sequence in k with a 1/k extrapolation of its limit.
struct LimitEstimate {
  std::vector<double> ks;
  std::vector<double> values;
  /// (k2 f2 - k1 f1) / (k2 - k1) on the last two points.
  std::optional<double> limit;
  /// Distance to the same extrapolation on the previous pair.
  double residual = 0.0;
  /// Values keep falling at a non-decaying rate per unit k.
  bool diverging = false;
};

LimitEstimate extrapolate_limit(const std::vector<double>& ks, const std::vector<double>& values);

struct BlockdiagOptions {
  double alpha = 0.5;
  double beta1 = 1.0;
  double beta2 = 1.0;
  /// Total threshold mass h; c(q) = h / q.
  double h = 0.2;
  std::size_t q0 = 2;
  std::vector<double> k_schedule{16, 32, 64, 128, 256};
  std::vector<std::size_t> n_schedule{1, 2, 3, 4, 6, 8};
  MinimizeOptions solver;
};

struct ThresholdScan {
  std::size_t n = 0;
  std::vector<double> x;
  LimitEstimate direct;
  LimitEstimate swapped;
  /// max of the two limits, absent when both sequences diverge.
  std::optional<double> best_limit;
};

struct BlockdiagReport {
  BlockdiagOptions options;
  /// (i) E(W, maxcut) and -(alpha^2 beta1 + (1-alpha)^2 beta2) / 2.
  double maxcut_value = 0.0;
  double maxcut_closed_form = 0.0;
  /// (ii) E^{h/q0}(W, -e1 e1^T) and beta1 beta2 c^2 / (beta1 + beta2).
  double single_entry_value = 0.0;
  double single_entry_closed_form = 0.0;
  bool single_entry_valid = false;
  /// (iii) -E^{c(2)}(W, J_k) along k_schedule.
  LimitEstimate jk;
  double jk_target = 0.0;
  bool jk_valid = false;
  /// (iv) general thresholds x_n = (c1(n), c2(n)) and their swaps.
  std::vector<ThresholdScan> scans;
  std::vector<ReportRow> rows;
};

BlockdiagReport blockdiag_report(const BlockdiagOptions& options);

struct MenuEntry {
  std::string id;
  InteractionMatrix j;
};

/// Mincut matrices J_q for each q, with ids "mincut<q>".
std::vector<MenuEntry> mincut_menu(const std::vector<std::size_t>& q_menu);

struct HierarchyOptions {
  std::vector<double> alpha_schedule{0.5, 0.7, 0.5, 0.7, 0.5, 0.7};
  double h1 = 0.2;
  double h2 = 0.4;
  std::vector<MenuEntry> menu;
  /// A sequence passes when its Cauchy gap stays below this.
  double gap_threshold = 1e-6;
  MinimizeOptions solver;
  /// Grid resolution used to cross-check flagged values; 0 disables it.
  std::size_t oracle_resolution = 40;
  double oracle_budget = 2e8;
  /// Flagged values count as certified when value >= oracle - margin.
  double oracle_margin = 0.02;
};

struct SequenceReport {
  double c = 0.0;
  std::vector<double> values;
  /// gaps[N] = max_{m,n >= N} |E_m - E_n|.
  std::vector<double> gaps;
  /// Gap of the last two terms; positive means the alternation persists.
  double persistent_gap = 0.0;
  bool passes = true;
};

struct HierarchyEntry {
  std::string id;
  std::size_t q = 0;
  SequenceReport lower;
  SequenceReport upper;
  bool flagged = false;
  /// Largest h2 value along the schedule and its grid oracle estimates,
  /// with constraints enforced within 1/(2m) and exactly.
  double peak_value = 0.0;
  std::optional<double> peak_oracle;
  std::optional<double> peak_oracle_exact;
  bool certified = false;
};

struct HierarchyReport {
  HierarchyOptions options;
  std::vector<HierarchyEntry> entries;
  bool all_lower_pass = true;
  std::vector<ReportRow> rows;
};

/// W_n = block_diagonal(alpha_n, 1/alpha_n^2, 0); compares E^{h1/q} and
/// E^{h2/q} sequences for every menu entry.
HierarchyReport hierarchy_experiment(const HierarchyOptions& options);

}  // namespace gselab
