#include "gselab/cut_metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "gselab/errors.hpp"
#include "gselab/rng.hpp"

namespace gselab {
namespace {

// |sum_{s in S, t in T} mu_s mu_t d_st| in a fixed summation order.
double rectangle_value(std::span<const double> mu, const Matrix& d, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols) {
  double total = 0.0;
  for (std::size_t s : rows) {
    double row = 0.0;
    for (std::size_t t : cols) row += mu[t] * d(s, t);
    total += mu[s] * row;
  }
  return std::abs(total);
}

// Best column set for the row-sum vector v and sign: T = {t : sign * v_t > 0}.
std::vector<std::size_t> best_cols(std::span<const double> mu, std::span<const double> v, double sign) {
  std::vector<std::size_t> cols;
  for (std::size_t t = 0; t < v.size(); ++t)
    if (sign * v[t] > 0.0 && mu[t] > 0.0) cols.push_back(t);
  return cols;
}

CutNormResult enumerate_subsets(std::span<const double> mu, const Matrix& d) {
  const std::size_t k = mu.size();
  std::vector<double> v(k, 0.0);
  std::vector<bool> in(k, false);
  double best = -1.0;
  std::uint64_t best_mask = 0;
  double best_sign = 1.0;
  std::uint64_t mask = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    const std::size_t flip = static_cast<std::size_t>(std::countr_zero(i));
    const double dir = in[flip] ? -1.0 : 1.0;
    in[flip] = !in[flip];
    mask ^= std::uint64_t{1} << flip;
    const double m = mu[flip] * dir;
    for (std::size_t t = 0; t < k; ++t) v[t] += m * d(flip, t);
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      const double c = mu[t] * v[t];
      if (c > 0.0)
        pos += c;
      else
        neg -= c;
    }
    if (pos > best) {
      best = pos;
      best_mask = mask;
      best_sign = 1.0;
    }
    if (neg > best) {
      best = neg;
      best_mask = mask;
      best_sign = -1.0;
    }
  }
  CutNormResult out;
  for (std::size_t s = 0; s < k; ++s)
    if (best_mask >> s & 1U) out.rows.push_back(s);
  std::vector<double> row_sum(k, 0.0);
  for (std::size_t s : out.rows)
    for (std::size_t t = 0; t < k; ++t) row_sum[t] += mu[s] * d(s, t);
  out.cols = best_cols(mu, row_sum, best_sign);
  out.value = rectangle_value(mu, d, out.rows, out.cols);
  return out;
}

// Alternating best responses from random starts; a lower bound on the cut norm.
CutNormResult coordinate_ascent(std::span<const double> mu, const Matrix& d, std::uint64_t seed) {
  const std::size_t k = mu.size();
  CutNormResult best;
  best.exact = false;
  constexpr std::size_t kRestarts = 64;
  for (std::size_t r = 0; r < kRestarts; ++r) {
    Rng rng(derive_seed(seed, r));
    const double sign = r % 2 == 0 ? 1.0 : -1.0;
    std::vector<std::size_t> rows;
    for (std::size_t s = 0; s < k; ++s)
      if (r == 0 || rng.uniform() < 0.5) rows.push_back(s);
    std::vector<std::size_t> cols;
    for (std::size_t sweep = 0; sweep < 100; ++sweep) {
      std::vector<double> v(k, 0.0);
      for (std::size_t s : rows)
        for (std::size_t t = 0; t < k; ++t) v[t] += mu[s] * d(s, t);
      auto next_cols = best_cols(mu, v, sign);
      std::vector<double> u(k, 0.0);
      for (std::size_t t : next_cols)
        for (std::size_t s = 0; s < k; ++s) u[s] += mu[t] * d(s, t);
      auto next_rows = best_cols(mu, u, sign);
      const bool stable = next_rows == rows && next_cols == cols;
      rows = std::move(next_rows);
      cols = std::move(next_cols);
      if (stable) break;
    }
    const double value = rectangle_value(mu, d, rows, cols);
    if (value > best.value) {
      best.value = value;
      best.rows = rows;
      best.cols = cols;
    }
  }
  return best;
}

}  // namespace

CutNormResult cut_norm_blocks(std::span<const double> mu, const Matrix& d, std::size_t max_exact_blocks,
                              std::uint64_t seed) {
  if (d.rows() != mu.size() || d.cols() != mu.size()) throw ValidationError("cut norm: shape mismatch");
  if (mu.size() <= std::min<std::size_t>(max_exact_blocks, 62)) return enumerate_subsets(mu, d);
  return coordinate_ascent(mu, d, seed);
}

CutNormResult cut_norm_step(const StepGraphon& w, std::size_t max_exact_blocks, std::uint64_t seed) {
  return cut_norm_blocks(w.lambda(), w.values(), max_exact_blocks, seed);
}

std::string to_string(CutDistanceMode mode) {
  return mode == CutDistanceMode::exact ? "exact" : "alternating";
}

Matrix project_to_couplings(const Matrix& y, std::span<const double> left, std::span<const double> right) {
  const std::size_t n = left.size();
  const std::size_t m = right.size();
  if (y.rows() != n || y.cols() != m) throw ValidationError("coupling shape mismatch");
  // Dykstra between the affine marginal constraints and the orthant; the
  // affine projection has a closed form.
  auto affine = [&](Matrix& x) {
    std::vector<double> row_gap(n);
    std::vector<double> col_gap(m);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += x(i, j);
      row_gap[i] = left[i] - s;
    }
    double total = 0.0;
    for (double g : row_gap) total += g;
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += x(i, j);
      col_gap[j] = right[j] - s;
    }
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) x(i, j) += row_gap[i] / md + (col_gap[j] - total / md) / nd;
  };
  Matrix x = y;
  Matrix correction(n, m);
  Matrix z;
  for (std::size_t sweep = 0; sweep < 20000; ++sweep) {
    z = x;
    affine(z);
    Matrix next = z;
    for (std::size_t i = 0; i < next.data().size(); ++i) next.data()[i] = std::max(z.data()[i] + correction.data()[i], 0.0);
    for (std::size_t i = 0; i < next.data().size(); ++i)
      correction.data()[i] = z.data()[i] + correction.data()[i] - next.data()[i];
    double moved = 0.0;
    for (std::size_t i = 0; i < next.data().size(); ++i) moved = std::max(moved, std::abs(next.data()[i] - x.data()[i]));
    x = std::move(next);
    if (moved < 1e-15) break;
  }
  return x;
}

namespace {

struct Evaluation {
  double value = 0.0;
  bool exact = true;
  std::vector<std::size_t> rows;  // pair indices p = s * kw + t
  std::vector<std::size_t> cols;
  double sign = 1.0;
};

class CouplingObjective {
 public:
  CouplingObjective(const StepGraphon& u, const StepGraphon& w, std::uint64_t seed)
      : u_(u), w_(w), ku_(u.k()), kw_(w.k()), seed_(seed) {}

  std::size_t cells() const { return ku_ * kw_; }

  double diff(std::size_t p, std::size_t r) const {
    return u_.value(p / kw_, r / kw_) - w_.value(p % kw_, r % kw_);
  }

  // Exact inner max over the blocks with positive mass; zero-mass pairs join
  // S or T when that would help once mass moves onto them.
  Evaluation evaluate(const Matrix& x) {
    std::vector<std::size_t> support;
    for (std::size_t p = 0; p < cells(); ++p)
      if (x.data()[p] > 0.0) support.push_back(p);
    std::vector<double> mu(support.size());
    Matrix d(support.size(), support.size());
    for (std::size_t a = 0; a < support.size(); ++a) {
      mu[a] = x.data()[support[a]];
      for (std::size_t b = 0; b < support.size(); ++b) d(a, b) = diff(support[a], support[b]);
    }
    const CutNormResult inner = cut_norm_blocks(mu, d, kMaxExactCutNormBlocks, seed_);
    Evaluation e;
    e.value = inner.value;
    e.exact = inner.exact;
    for (std::size_t a : inner.rows) e.rows.push_back(support[a]);
    for (std::size_t a : inner.cols) e.cols.push_back(support[a]);
    double signed_total = 0.0;
    for (std::size_t p : e.rows)
      for (std::size_t r : e.cols) signed_total += x.data()[p] * x.data()[r] * diff(p, r);
    e.sign = signed_total >= 0.0 ? 1.0 : -1.0;
    return e;
  }

  // Gradient of sign * sum_{p in S, r in T} X_p X_r D_pr.
  Matrix gradient(const Matrix& x, const Evaluation& e) const {
    std::vector<bool> in_rows(cells(), false);
    std::vector<bool> in_cols(cells(), false);
    for (std::size_t p : e.rows) in_rows[p] = true;
    for (std::size_t r : e.cols) in_cols[r] = true;
    std::vector<double> to_cols(cells(), 0.0);
    std::vector<double> to_rows(cells(), 0.0);
    for (std::size_t p = 0; p < cells(); ++p) {
      for (std::size_t r : e.cols) to_cols[p] += x.data()[r] * diff(p, r);
      for (std::size_t s : e.rows) to_rows[p] += x.data()[s] * diff(s, p);
    }
    for (std::size_t p = 0; p < cells(); ++p) {
      if (x.data()[p] > 0.0) continue;
      in_rows[p] = e.sign * to_cols[p] > 0.0;
      in_cols[p] = e.sign * to_rows[p] > 0.0;
    }
    Matrix g(ku_, kw_);
    for (std::size_t p = 0; p < cells(); ++p) {
      double v = 0.0;
      if (in_rows[p]) v += to_cols[p];
      if (in_cols[p]) v += to_rows[p];
      g.data()[p] = e.sign * v;
    }
    return g;
  }

 private:
  const StepGraphon& u_;
  const StepGraphon& w_;
  std::size_t ku_;
  std::size_t kw_;
  std::uint64_t seed_;
};

Matrix independent_coupling(std::span<const double> a, std::span<const double> b) {
  Matrix x(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) x(i, j) = a[i] * b[j];
  return x;
}

// North-west corner rule with rows and columns visited in the given orders.
Matrix northwest_corner(std::span<const double> a, std::span<const double> b, const std::vector<std::size_t>& row_order,
                        const std::vector<std::size_t>& col_order) {
  Matrix x(a.size(), b.size());
  std::vector<double> ra(a.begin(), a.end());
  std::vector<double> rb(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < row_order.size() && j < col_order.size()) {
    const std::size_t r = row_order[i];
    const std::size_t c = col_order[j];
    const double m = std::min(ra[r], rb[c]);
    x(r, c) += m;
    ra[r] -= m;
    rb[c] -= m;
    const bool row_done = ra[r] <= 1e-15;
    const bool col_done = rb[c] <= 1e-15;
    if (row_done) ++i;
    if (col_done) ++j;
  }
  return x;
}

std::vector<std::size_t> order_by_degree(const StepGraphon& g) {
  std::vector<double> degree(g.k(), 0.0);
  for (std::size_t s = 0; s < g.k(); ++s)
    for (std::size_t t = 0; t < g.k(); ++t) degree[s] += g.measure(t) * g.value(s, t);
  std::vector<std::size_t> order(g.k());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });
  return order;
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Canonical order of two graphons so the distance is symmetric bit-for-bit.
bool canonical_less(const StepGraphon& a, const StepGraphon& b) {
  if (a.k() != b.k()) return a.k() < b.k();
  if (a.lambda() != b.lambda()) return a.lambda() < b.lambda();
  return a.values().data() < b.values().data();
}

std::vector<Matrix> starting_couplings(const StepGraphon& u, const StepGraphon& w, bool exhaustive) {
  const auto& a = u.lambda();
  const auto& b = w.lambda();
  std::vector<Matrix> out;
  out.push_back(independent_coupling(a, b));
  out.push_back(northwest_corner(a, b, identity_order(u.k()), identity_order(w.k())));
  out.push_back(northwest_corner(a, b, order_by_degree(u), order_by_degree(w)));
  if (u.k() == w.k() && u.k() <= 7) {
    // Permutation couplings between blocks of equal measure.
    std::vector<std::size_t> perm = identity_order(u.k());
    do {
      bool ok = true;
      for (std::size_t s = 0; s < u.k() && ok; ++s) ok = a[s] == b[perm[s]];
      if (!ok) continue;
      Matrix x(u.k(), w.k());
      for (std::size_t s = 0; s < u.k(); ++s) x(s, perm[s]) = a[s];
      out.push_back(std::move(x));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (exhaustive) {
    // Vertices of the transportation polytope via north-west corners over
    // all row and column orders.
    std::vector<std::size_t> rows = identity_order(u.k());
    do {
      std::vector<std::size_t> cols = identity_order(w.k());
      do {
        out.push_back(northwest_corner(a, b, rows, cols));
      } while (std::next_permutation(cols.begin(), cols.end()));
    } while (std::next_permutation(rows.begin(), rows.end()));
  }
  return out;
}

// Dense grid over the free entries X_ij (i < n-1, j < m-1); the last row and
// column are determined by the marginals.
void grid_search(const StepGraphon& u, const StepGraphon& w, CouplingObjective& objective, std::size_t per_axis,
                 double& best_value, Matrix& best, bool& exact) {
  const auto& a = u.lambda();
  const auto& b = w.lambda();
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n < 2 || m < 2 || per_axis < 2) return;
  Matrix x(n, m);
  auto complete = [&]() -> bool {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j + 1 < m; ++j) s += x(i, j);
      x(i, m - 1) = a[i] - s;
      if (x(i, m - 1) < -1e-15) return false;
      x(i, m - 1) = std::max(x(i, m - 1), 0.0);
    }
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) s += x(i, j);
      x(n - 1, j) = b[j] - s;
      if (x(n - 1, j) < -1e-15) return false;
      x(n - 1, j) = std::max(x(n - 1, j), 0.0);
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t cell) -> void {
    const std::size_t free_cols = m - 1;
    if (cell == (n - 1) * free_cols) {
      if (!complete()) return;
      const Evaluation e = objective.evaluate(x);
      exact = exact && e.exact;
      if (e.value < best_value) {
        best_value = e.value;
        best = x;
      }
      return;
    }
    const std::size_t i = cell / free_cols;
    const std::size_t j = cell % free_cols;
    const double hi = std::min(a[i], b[j]);
    for (std::size_t g = 0; g < per_axis; ++g) {
      x(i, j) = hi * static_cast<double>(g) / static_cast<double>(per_axis - 1);
      self(self, cell + 1);
    }
  };
  rec(rec, 0);
}

CutDistanceResult ordered_distance(const StepGraphon& u, const StepGraphon& w, const CutDistanceOptions& options) {
  CutDistanceResult result;
  result.mode = options.mode;
  const std::size_t cells = u.k() * w.k();
  bool exhaustive = options.mode == CutDistanceMode::exact;
  if (exhaustive && cells > kMaxExactCouplingCells) {
    exhaustive = false;
    result.mode = CutDistanceMode::alternating;
    result.warning = "exact mode needs at most 16 coupling cells; ran alternating mode instead";
  }
  CouplingObjective objective(u, w, options.seed);
  double best_value = std::numeric_limits<double>::infinity();
  Matrix best;
  bool exact = true;

  std::vector<Matrix> starts = starting_couplings(u, w, exhaustive);
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Evaluation e = objective.evaluate(starts[i]);
    exact = exact && e.exact;
    ranked.emplace_back(e.value, i);
    if (e.value < best_value) {
      best_value = e.value;
      best = starts[i];
    }
  }
  std::stable_sort(ranked.begin(), ranked.end());

  const std::size_t descents = exhaustive ? std::min<std::size_t>(ranked.size(), 8) : std::min<std::size_t>(ranked.size(), 3);
  double scale = std::max(u.inf_norm(), w.inf_norm());
  if (scale == 0.0) scale = 1.0;
  for (std::size_t d = 0; d < descents && best_value > 0.0; ++d) {
    Matrix x = starts[ranked[d].second];
    double local_best = ranked[d].first;
    std::size_t stale = 0;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      ++result.iterations;
      const Evaluation e = objective.evaluate(x);
      exact = exact && e.exact;
      const Matrix g = objective.gradient(x, e);
      double gnorm = 0.0;
      for (double v : g.data()) gnorm += v * v;
      gnorm = std::sqrt(gnorm);
      if (gnorm == 0.0) break;
      const double step = 0.5 / (scale * std::sqrt(static_cast<double>(it + 1)));
      Matrix y = x;
      for (std::size_t i = 0; i < y.data().size(); ++i) y.data()[i] -= step * g.data()[i] / gnorm;
      x = project_to_couplings(y, u.lambda(), w.lambda());
      const Evaluation next = objective.evaluate(x);
      exact = exact && next.exact;
      if (next.value < best_value) {
        best_value = next.value;
        best = x;
      }
      if (next.value < local_best * (1.0 - 1e-8)) {
        local_best = next.value;
        stale = 0;
      } else if (++stale >= 20) {
        break;
      }
    }
  }

  if (exhaustive) {
    const double per_eval = std::ldexp(1.0, static_cast<int>(cells)) * static_cast<double>(cells);
    const double evaluations = std::max(1.0, options.budget / per_eval);
    const std::size_t free_cells = (u.k() - 1) * (w.k() - 1);
    if (free_cells > 0) {
      const auto per_axis =
          static_cast<std::size_t>(std::floor(std::pow(evaluations, 1.0 / static_cast<double>(free_cells))));
      grid_search(u, w, objective, std::min<std::size_t>(per_axis, 100000), best_value, best, exact);
    }
  }

  result.value = best_value;
  result.coupling = std::move(best);
  result.inner_exact = exact;
  return result;
}

}  // namespace

CutDistanceResult cut_distance_step(const StepGraphon& u, const StepGraphon& w, const CutDistanceOptions& options) {
  if (canonical_less(w, u)) {
    CutDistanceResult r = ordered_distance(w, u, options);
    r.coupling = r.coupling.transposed();
    return r;
  }
  return ordered_distance(u, w, options);
}

CutDistanceResult cut_distance_graphs(const WeightedGraph& g, const WeightedGraph& h, const CutDistanceOptions& options) {
  return cut_distance_step(graphon_from_graph(g), graphon_from_graph(h), options);
}

}  // namespace gselab
