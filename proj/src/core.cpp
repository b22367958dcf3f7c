#include "gselab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gselab/errors.hpp"

namespace gselab {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw ValidationError("matrix data size does not match its shape");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw ValidationError("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

bool Matrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

WeightedGraph::WeightedGraph(std::vector<double> node_weights, Matrix edge_weights)
    : node_weights_(std::move(node_weights)), edge_weights_(std::move(edge_weights)) {
  const std::size_t n = node_weights_.size();
  if (n == 0) throw ValidationError("graph must have at least one node");
  if (edge_weights_.rows() != n || edge_weights_.cols() != n)
    throw ValidationError("edge weight matrix must be n x n");
  for (double a : node_weights_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("node weights must be positive and finite");
    total_node_weight_ += a;
    max_node_weight_ = std::max(max_node_weight_, a);
    if (a != 1.0) simple_ = false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (edge_weights_(i, i) != 0.0) throw ValidationError("self-loop weights must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double b = edge_weights_(i, j);
      if (!std::isfinite(b)) throw ValidationError("edge weights must be finite");
      if (b != edge_weights_(j, i)) throw ValidationError("edge weight matrix must be symmetric");
      max_edge_weight_ = std::max(max_edge_weight_, std::abs(b));
      if (b != 0.0 && b != 1.0) simple_ = false;
    }
  }
}

WeightedGraph WeightedGraph::simple(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) {
  Matrix beta(n, n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n || u == v) throw ValidationError("invalid edge");
    beta(u, v) = beta(v, u) = 1.0;
  }
  return WeightedGraph(std::vector<double>(n, 1.0), std::move(beta));
}

WeightedGraph WeightedGraph::complete(std::size_t n) {
  Matrix beta(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) beta(i, i) = 0.0;
  return WeightedGraph(std::vector<double>(n, 1.0), std::move(beta));
}

WeightedGraph WeightedGraph::edgeless(std::size_t n) {
  return WeightedGraph(std::vector<double>(n, 1.0), Matrix(n, n));
}

WeightedGraph WeightedGraph::induced(std::span<const std::size_t> nodes) const {
  const std::size_t k = nodes.size();
  std::vector<double> alpha(k);
  Matrix beta(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    alpha[a] = node_weights_.at(nodes[a]);
    for (std::size_t b = 0; b < k; ++b) beta(a, b) = edge_weights_(nodes[a], nodes[b]);
  }
  return WeightedGraph(std::move(alpha), std::move(beta));
}

InteractionMatrix::InteractionMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0) throw ValidationError("interaction matrix needs q >= 1");
  if (!entries_.is_square()) throw ValidationError("interaction matrix must be square");
  for (double v : entries_.data())
    if (!std::isfinite(v)) throw ValidationError("interaction entries must be finite");
  if (!entries_.is_symmetric()) throw ValidationError("interaction matrix must be symmetric");
  inf_norm_ = entries_.max_abs();
}

InteractionMatrix InteractionMatrix::maxcut(std::size_t q) {
  Matrix j(q, q, 1.0);
  for (std::size_t i = 0; i < q; ++i) j(i, i) = 0.0;
  return InteractionMatrix(std::move(j));
}

InteractionMatrix InteractionMatrix::mincut(std::size_t q) {
  Matrix j(q, q, -1.0);
  for (std::size_t i = 0; i < q; ++i) j(i, i) = 0.0;
  return InteractionMatrix(std::move(j));
}

InteractionMatrix InteractionMatrix::single_entry(std::size_t q) {
  Matrix j(q, q);
  j(0, 0) = -1.0;
  return InteractionMatrix(std::move(j));
}

InteractionMatrix InteractionMatrix::penalized_pair(double k) {
  return InteractionMatrix(Matrix::from_rows({{1.0, -k}, {-k, 2.0}}));
}

InteractionMatrix InteractionMatrix::zero(std::size_t q) { return InteractionMatrix(Matrix(q, q)); }

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> a) : a_(std::move(a)) {
  if (a_.empty()) throw ValidationError("distribution needs at least one component");
  double sum = 0.0;
  for (double v : a_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("distribution components must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance)
    throw ValidationError("distribution components must sum to 1 (got " + std::to_string(sum) + ")");
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t q) {
  return ProbabilityDistribution(std::vector<double>(q, 1.0 / static_cast<double>(q)));
}

ProbabilityDistribution ProbabilityDistribution::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("weights must be nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw ValidationError("weights must have positive sum");
  for (double& w : weights) w /= sum;
  return ProbabilityDistribution(std::move(weights));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("l1_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

ThresholdSpec::ThresholdSpec(std::vector<double> bounds, ThresholdDirection direction, bool homogeneous)
    : bounds_(std::move(bounds)), direction_(direction), homogeneous_(homogeneous) {}

ThresholdSpec ThresholdSpec::homogeneous(std::size_t q, double c, ThresholdDirection direction) {
  if (q == 0) throw ValidationError("threshold needs q >= 1");
  if (!std::isfinite(c) || c < 0.0) throw DomainError("threshold c must be nonnegative");
  const double qd = static_cast<double>(q);
  if (direction == ThresholdDirection::lower && c * qd > 1.0 + kDistributionTolerance)
    throw DomainError("lower threshold requires 0 <= c <= 1/q");
  if (direction == ThresholdDirection::upper && c * qd < 1.0 - kDistributionTolerance)
    throw DomainError("upper threshold requires c * q >= 1");
  return ThresholdSpec(std::vector<double>(q, c), direction, true);
}

ThresholdSpec ThresholdSpec::general(std::vector<double> x, ThresholdDirection direction) {
  if (x.empty()) throw ValidationError("threshold needs q >= 1");
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("threshold components must be nonnegative");
    sum += v;
  }
  if (direction == ThresholdDirection::lower && sum > 1.0 + kDistributionTolerance)
    throw DomainError("lower threshold vector must satisfy sum x_i <= 1");
  if (direction == ThresholdDirection::upper && sum < 1.0 - kDistributionTolerance)
    throw DomainError("upper threshold vector must satisfy sum x_i >= 1");
  return ThresholdSpec(std::move(x), direction, false);
}

double ThresholdSpec::total() const { return std::accumulate(bounds_.begin(), bounds_.end(), 0.0); }

bool ThresholdSpec::is_vacuous() const {
  if (is_lower()) return std::all_of(bounds_.begin(), bounds_.end(), [](double x) { return x <= 0.0; });
  return std::all_of(bounds_.begin(), bounds_.end(), [](double x) { return x >= 1.0; });
}

SpinConfiguration::SpinConfiguration(std::vector<int> states, std::size_t q) : states_(std::move(states)), q_(q) {
  if (q_ == 0) throw ValidationError("configuration needs q >= 1");
  for (int s : states_)
    if (s < 0 || static_cast<std::size_t>(s) >= q_) throw ValidationError("configuration state out of range");
}

std::vector<std::size_t> class_sizes(const SpinConfiguration& phi) {
  std::vector<std::size_t> sizes(phi.q(), 0);
  for (int s : phi.states()) ++sizes[static_cast<std::size_t>(s)];
  return sizes;
}

FractionalProfile::FractionalProfile(Matrix r) : r_(std::move(r)) {
  if (r_.rows() == 0 || r_.cols() == 0) throw ValidationError("profile must be at least 1 x 1");
  for (std::size_t t = 0; t < r_.rows(); ++t) {
    double sum = 0.0;
    for (double v : r_.row(t)) {
      if (!(v >= -1e-12) || !std::isfinite(v)) throw ValidationError("profile entries must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10) throw ValidationError("profile rows must sum to 1");
  }
  for (double& v : r_.data()) v = std::max(v, 0.0);
}

FractionalProfile FractionalProfile::pure(std::size_t k, std::size_t q, std::size_t state) {
  Matrix r(k, q);
  for (std::size_t t = 0; t < k; ++t) r(t, state) = 1.0;
  return FractionalProfile(std::move(r));
}

FractionalProfile FractionalProfile::constant(std::size_t k, std::span<const double> row) {
  Matrix r(k, row.size());
  for (std::size_t t = 0; t < k; ++t) std::copy(row.begin(), row.end(), r.row(t).begin());
  return FractionalProfile(std::move(r));
}

FractionalProfile FractionalProfile::indicator(const SpinConfiguration& phi) {
  Matrix r(phi.size(), phi.q());
  for (std::size_t u = 0; u < phi.size(); ++u) r(u, static_cast<std::size_t>(phi[u])) = 1.0;
  return FractionalProfile(std::move(r));
}

std::vector<double> FractionalProfile::induced_distribution(std::span<const double> lambda) const {
  if (lambda.size() != k()) throw ValidationError("profile block count does not match the measure");
  std::vector<double> a(q(), 0.0);
  for (std::size_t t = 0; t < k(); ++t)
    for (std::size_t i = 0; i < q(); ++i) a[i] += lambda[t] * r_(t, i);
  return a;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::exhaustive: return "exhaustive";
    case Method::local_search: return "local_search";
    case Method::projected_gradient: return "projected_gradient";
    case Method::grid_oracle: return "grid_oracle";
  }
  return "unknown";
}

}  // namespace gselab
