#include "gselab/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gselab/errors.hpp"

namespace gselab {

StepGraphon::StepGraphon(std::vector<double> lambda, Matrix values) {
  const std::size_t k = lambda.size();
  if (k == 0) throw ValidationError("graphon needs at least one block");
  if (values.rows() != k || values.cols() != k) throw ValidationError("block-value matrix must be k x k");
  if (!values.is_symmetric()) throw ValidationError("block-value matrix must be symmetric");
  double sum = 0.0;
  for (double l : lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ValidationError("block measures must be nonnegative");
    sum += l;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance) throw ValidationError("block measures must sum to 1");

  std::vector<std::size_t> kept;
  for (std::size_t t = 0; t < k; ++t)
    if (lambda[t] > 0.0) kept.push_back(t);
  lambda_.reserve(kept.size());
  values_ = Matrix(kept.size(), kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a) {
    lambda_.push_back(lambda[kept[a]]);
    for (std::size_t b = 0; b < kept.size(); ++b) {
      const double v = values(kept[a], kept[b]);
      if (!std::isfinite(v)) throw ValidationError("block values must be finite");
      values_(a, b) = v;
    }
  }
  inf_norm_ = values_.max_abs();
}

StepGraphon StepGraphon::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != k()) throw ValidationError("permutation size mismatch");
  std::vector<bool> seen(k(), false);
  for (std::size_t p : perm) {
    if (p >= k() || seen[p]) throw ValidationError("not a permutation");
    seen[p] = true;
  }
  std::vector<double> lambda(k());
  Matrix b(k(), k());
  for (std::size_t s = 0; s < k(); ++s) {
    lambda[s] = lambda_[perm[s]];
    for (std::size_t t = 0; t < k(); ++t) b(s, t) = values_(perm[s], perm[t]);
  }
  return StepGraphon(std::move(lambda), std::move(b));
}

StepGraphon StepGraphon::refined(const std::vector<std::vector<double>>& parts) const {
  if (parts.size() != k()) throw ValidationError("refinement must list parts for every block");
  std::vector<std::size_t> parent;
  std::vector<double> lambda;
  for (std::size_t t = 0; t < k(); ++t) {
    if (parts[t].empty()) {
      parent.push_back(t);
      lambda.push_back(lambda_[t]);
      continue;
    }
    double sum = 0.0;
    for (double w : parts[t]) {
      if (!(w > 0.0)) throw ValidationError("refinement pieces must have positive measure");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("refinement weights must sum to 1");
    for (double w : parts[t]) {
      parent.push_back(t);
      lambda.push_back(lambda_[t] * w);
    }
  }
  Matrix b(parent.size(), parent.size());
  for (std::size_t s = 0; s < parent.size(); ++s)
    for (std::size_t t = 0; t < parent.size(); ++t) b(s, t) = values_(parent[s], parent[t]);
  // Rescale so the measures sum to one exactly as far as rounding allows.
  const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  if (std::abs(total - 1.0) > kDistributionTolerance)
    for (double& l : lambda) l /= total;
  return StepGraphon(std::move(lambda), std::move(b));
}

StepGraphon graphon_from_graph(const WeightedGraph& g) {
  std::vector<double> lambda(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) lambda[i] = g.node_weight(i) / g.total_node_weight();
  return StepGraphon(std::move(lambda), g.edge_weights());
}

StepGraphon block_diagonal(double alpha, double beta1, double beta2) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("block_diagonal requires 0 < alpha <= 1");
  if (!std::isfinite(beta1) || !std::isfinite(beta2)) throw DomainError("block values must be finite");
  if (alpha == 1.0) return constant_graphon(beta1);
  return StepGraphon({alpha, 1.0 - alpha}, Matrix::from_rows({{beta1, 0.0}, {0.0, beta2}}));
}

StepGraphon constant_graphon(double c) { return StepGraphon({1.0}, Matrix(1, 1, c)); }

void check_coupling(std::span<const double> left, std::span<const double> right, const Matrix& coupling) {
  if (coupling.rows() != left.size() || coupling.cols() != right.size())
    throw CouplingError("coupling shape does not match the block counts");
  constexpr double tol = 1e-10;
  for (double x : coupling.data())
    if (!(x >= 0.0)) throw CouplingError("coupling entries must be nonnegative");
  for (std::size_t s = 0; s < left.size(); ++s) {
    double row = 0.0;
    for (std::size_t t = 0; t < right.size(); ++t) row += coupling(s, t);
    if (std::abs(row - left[s]) > tol) throw CouplingError("coupling row sums do not match the left measure");
  }
  for (std::size_t t = 0; t < right.size(); ++t) {
    double col = 0.0;
    for (std::size_t s = 0; s < left.size(); ++s) col += coupling(s, t);
    if (std::abs(col - right[t]) > tol) throw CouplingError("coupling column sums do not match the right measure");
  }
}

StepGraphon coupled_difference(const StepGraphon& u, const StepGraphon& w, const Matrix& coupling) {
  check_coupling(u.lambda(), w.lambda(), coupling);
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::vector<double> lambda;
  for (std::size_t s = 0; s < u.k(); ++s)
    for (std::size_t t = 0; t < w.k(); ++t)
      if (coupling(s, t) > 0.0) {
        blocks.emplace_back(s, t);
        lambda.push_back(coupling(s, t));
      }
  const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  if (std::abs(total - 1.0) > kDistributionTolerance)
    for (double& l : lambda) l /= total;
  Matrix b(blocks.size(), blocks.size());
  for (std::size_t p = 0; p < blocks.size(); ++p)
    for (std::size_t r = 0; r < blocks.size(); ++r)
      b(p, r) = u.value(blocks[p].first, blocks[r].first) - w.value(blocks[p].second, blocks[r].second);
  return StepGraphon(std::move(lambda), std::move(b));
}

}  // namespace gselab
