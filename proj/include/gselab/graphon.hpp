#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gselab/core.hpp"

namespace gselab {

/// Piecewise-constant graphon: blocks of measure lambda_t (positive, summing
/// to one) with value B_st on block pair (s, t). Zero-measure blocks are
/// dropped on construction.
class StepGraphon {
 public:
  StepGraphon(std::vector<double> lambda, Matrix values);

  std::size_t k() const noexcept { return lambda_.size(); }
  const std::vector<double>& lambda() const noexcept { return lambda_; }
  double measure(std::size_t t) const { return lambda_[t]; }
  double value(std::size_t s, std::size_t t) const { return values_(s, t); }
  const Matrix& values() const noexcept { return values_; }
  /// ||W||_inf = max |B_st|.
  double inf_norm() const noexcept { return inf_norm_; }

  /// Relabels blocks: block t of the result is block perm[t] of this graphon.
  StepGraphon permuted(std::span<const std::size_t> perm) const;

  /// Splits block t into pieces with the given relative weights (summing to
  /// one). `parts[t]` lists the weights for block t; empty means no split.
  StepGraphon refined(const std::vector<std::vector<double>>& parts) const;

  friend bool operator==(const StepGraphon& a, const StepGraphon& b) {
    return a.lambda_ == b.lambda_ && a.values_ == b.values_;
  }

 private:
  std::vector<double> lambda_;
  Matrix values_;
  double inf_norm_ = 0.0;
};

/// W_G: blocks of measure alpha_i / alpha_G with values beta_ij.
StepGraphon graphon_from_graph(const WeightedGraph& g);

/// Value beta1 on [0,alpha]^2, beta2 on (alpha,1]^2, zero elsewhere.
/// A single block when alpha == 1.
StepGraphon block_diagonal(double alpha, double beta1, double beta2);

StepGraphon constant_graphon(double c);

/// Coupled difference of U and W along the coupling X (k_U x k_W, marginals
/// lambda_U and lambda_W within 1e-10). Blocks are the pairs (s,t) with
/// X_st > 0, in row-major order; the value on ((s,t),(s',t')) is
/// B_U[s,s'] - B_W[t,t'].
StepGraphon coupled_difference(const StepGraphon& u, const StepGraphon& w, const Matrix& coupling);

/// Throws CouplingError if `coupling` is not a coupling of the two measures.
void check_coupling(std::span<const double> left, std::span<const double> right, const Matrix& coupling);

}  // namespace gselab
