#pragma once

// Foundational value types shared by every module: dense matrices, weighted
// graphs, interaction matrices, distributions, thresholds, spin
// configurations and solver results. All types validate on construction and
// are immutable afterwards.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gselab {

/// Tolerance for "sums to one" checks on distributions and block measures.
inline constexpr double kDistributionTolerance = 1e-12;

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool is_symmetric() const;
  double max_abs() const;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Node- and edge-weighted undirected graph with a dense symmetric edge-weight
/// matrix and zero diagonal.
class WeightedGraph {
 public:
  WeightedGraph(std::vector<double> node_weights, Matrix edge_weights);

  /// Unit node weights, edges of weight 1. Edges are 0-based pairs.
  static WeightedGraph simple(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);
  static WeightedGraph complete(std::size_t n);
  static WeightedGraph edgeless(std::size_t n);

  std::size_t n() const noexcept { return node_weights_.size(); }
  double node_weight(std::size_t i) const { return node_weights_[i]; }
  const std::vector<double>& node_weights() const noexcept { return node_weights_; }
  double edge_weight(std::size_t i, std::size_t j) const { return edge_weights_(i, j); }
  const Matrix& edge_weights() const noexcept { return edge_weights_; }

  /// All node weights 1 and all edge weights in {0,1}. Derived, never declared.
  bool is_simple() const noexcept { return simple_; }
  double total_node_weight() const noexcept { return total_node_weight_; }
  double max_node_weight() const noexcept { return max_node_weight_; }
  double max_edge_weight() const noexcept { return max_edge_weight_; }

  /// Induced subgraph on the given nodes, in the given order.
  WeightedGraph induced(std::span<const std::size_t> nodes) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.node_weights_ == b.node_weights_ && a.edge_weights_ == b.edge_weights_;
  }

 private:
  std::vector<double> node_weights_;
  Matrix edge_weights_;
  bool simple_ = true;
  double total_node_weight_ = 0.0;
  double max_node_weight_ = 0.0;
  double max_edge_weight_ = 0.0;
};

/// Symmetric q x q interaction matrix J.
class InteractionMatrix {
 public:
  explicit InteractionMatrix(Matrix entries);

  /// J_ij = 1 - delta_ij.
  static InteractionMatrix maxcut(std::size_t q);
  /// J_ij = -(1 - delta_ij); zero diagonal, -1 elsewhere.
  static InteractionMatrix mincut(std::size_t q);
  /// J_ij = -delta_i1 delta_j1.
  static InteractionMatrix single_entry(std::size_t q);
  /// [[1, -k], [-k, 2]].
  static InteractionMatrix penalized_pair(double k);
  static InteractionMatrix zero(std::size_t q);

  std::size_t q() const noexcept { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  const Matrix& entries() const noexcept { return entries_; }
  double inf_norm() const noexcept { return inf_norm_; }

  friend bool operator==(const InteractionMatrix& a, const InteractionMatrix& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
  double inf_norm_ = 0.0;
};

/// Probability distribution on q states. Never renormalized implicitly.
class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<double> a);

  static ProbabilityDistribution uniform(std::size_t q);
  /// Divides by the sum; the only way a distribution is ever renormalized.
  static ProbabilityDistribution normalized(std::vector<double> weights);

  std::size_t q() const noexcept { return a_.size(); }
  double operator[](std::size_t i) const { return a_[i]; }
  const std::vector<double>& values() const noexcept { return a_; }

  friend bool operator==(const ProbabilityDistribution&, const ProbabilityDistribution&) = default;

 private:
  std::vector<double> a_;
};

double l1_distance(std::span<const double> a, std::span<const double> b);

enum class ThresholdDirection { lower, upper };

/// Per-state bounds on the class distribution: a_i >= x_i (lower) or
/// a_i <= x_i (upper), either homogeneous (x_i = c) or general.
class ThresholdSpec {
 public:
  static ThresholdSpec homogeneous(std::size_t q, double c, ThresholdDirection direction = ThresholdDirection::lower);
  static ThresholdSpec general(std::vector<double> x, ThresholdDirection direction = ThresholdDirection::lower);

  std::size_t q() const noexcept { return bounds_.size(); }
  ThresholdDirection direction() const noexcept { return direction_; }
  bool is_lower() const noexcept { return direction_ == ThresholdDirection::lower; }
  bool is_homogeneous() const noexcept { return homogeneous_; }
  /// Homogeneous bound c; for general specs, the first component.
  double c() const { return bounds_.front(); }
  const std::vector<double>& bounds() const noexcept { return bounds_; }
  /// Total threshold mass h = sum_i x_i.
  double total() const;

  /// True when every distribution satisfies the spec (lower bounds all zero,
  /// or upper bounds all at least one).
  bool is_vacuous() const;

 private:
  ThresholdSpec(std::vector<double> bounds, ThresholdDirection direction, bool homogeneous);

  std::vector<double> bounds_;
  ThresholdDirection direction_;
  bool homogeneous_;
};

/// Assignment of one of q states to each node. States are stored 0-based;
/// documents and JSON use 1-based states.
class SpinConfiguration {
 public:
  SpinConfiguration(std::vector<int> states, std::size_t q);

  std::size_t q() const noexcept { return q_; }
  std::size_t size() const noexcept { return states_.size(); }
  int operator[](std::size_t u) const { return states_[u]; }
  const std::vector<int>& states() const noexcept { return states_; }

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;
  friend auto operator<=>(const SpinConfiguration& a, const SpinConfiguration& b) { return a.states_ <=> b.states_; }

 private:
  std::vector<int> states_;
  std::size_t q_;
};

/// |phi^{-1}(i)| for every state i.
std::vector<std::size_t> class_sizes(const SpinConfiguration& phi);

/// k x q matrix of block-averaged fractional partition values; rows lie on
/// the probability simplex (within 1e-10).
class FractionalProfile {
 public:
  explicit FractionalProfile(Matrix r);

  /// Every block puts all of its mass on state `state`.
  static FractionalProfile pure(std::size_t k, std::size_t q, std::size_t state);
  /// Every block uses the same row.
  static FractionalProfile constant(std::size_t k, std::span<const double> row);
  /// Indicator profile of a spin configuration, one block per node.
  static FractionalProfile indicator(const SpinConfiguration& phi);

  std::size_t k() const noexcept { return r_.rows(); }
  std::size_t q() const noexcept { return r_.cols(); }
  double operator()(std::size_t t, std::size_t i) const { return r_(t, i); }
  const Matrix& values() const noexcept { return r_; }

  /// a_i = sum_t lambda_t r_ti.
  std::vector<double> induced_distribution(std::span<const double> lambda) const;

 private:
  Matrix r_;
};

enum class Method { exhaustive, local_search, projected_gradient, grid_oracle };

std::string to_string(Method m);

struct SolverStats {
  std::size_t restarts = 0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double wall_time_ms = 0.0;
};

/// Profile certificate together with the distribution it induces.
struct ProfileCertificate {
  FractionalProfile profile;
  std::vector<double> distribution;
};

using Certificate = std::variant<std::monostate, SpinConfiguration, ProfileCertificate>;

struct EnergyResult {
  double value = 0.0;
  Certificate certificate;
  Method method = Method::exhaustive;
  SolverStats stats;

  const SpinConfiguration* configuration() const { return std::get_if<SpinConfiguration>(&certificate); }
  const ProfileCertificate* profile() const { return std::get_if<ProfileCertificate>(&certificate); }
};

}  // namespace gselab
