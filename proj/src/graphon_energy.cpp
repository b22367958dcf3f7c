#include "gselab/graphon_energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "gselab/errors.hpp"
#include "gselab/rng.hpp"

namespace gselab {
namespace {

constexpr double kMassTolerance = 1e-12;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void check_shapes(const StepGraphon& w, const InteractionMatrix& j, std::size_t k, std::size_t q) {
  if (k != w.k()) throw ValidationError("profile block count does not match the graphon");
  if (q != j.q()) throw ValidationError("profile state count does not match the interaction matrix");
}

// Energy and gradient of E(r) = -<J, P^T B P> with P = diag(lambda) r.
class Objective {
 public:
  Objective(const StepGraphon& w, const InteractionMatrix& j) : w_(w), j_(j), k_(w.k()), q_(j.q()) {}

  double value(const Matrix& r) const {
    Matrix y = weighted_product(r);
    double e = 0.0;
    for (std::size_t i = 0; i < q_; ++i)
      for (std::size_t jj = 0; jj < q_; ++jj) {
        double m = 0.0;
        for (std::size_t s = 0; s < k_; ++s) m += w_.measure(s) * r(s, i) * y(s, jj);
        e -= j_(i, jj) * m;
      }
    return e;
  }

  double value_and_gradient(const Matrix& r, Matrix& grad) const {
    Matrix y = weighted_product(r);
    grad = Matrix(k_, q_);
    for (std::size_t s = 0; s < k_; ++s)
      for (std::size_t i = 0; i < q_; ++i) {
        double yj = 0.0;
        for (std::size_t jj = 0; jj < q_; ++jj) yj += y(s, jj) * j_(jj, i);
        grad(s, i) = -2.0 * w_.measure(s) * yj;
      }
    return value(r);
  }

 private:
  // Y = B diag(lambda) r.
  Matrix weighted_product(const Matrix& r) const {
    Matrix y(k_, q_);
    for (std::size_t s = 0; s < k_; ++s)
      for (std::size_t t = 0; t < k_; ++t) {
        const double c = w_.value(s, t) * w_.measure(t);
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < q_; ++i) y(s, i) += c * r(t, i);
      }
    return y;
  }

  const StepGraphon& w_;
  const InteractionMatrix& j_;
  std::size_t k_;
  std::size_t q_;
};

void project_row_to_simplex(std::span<double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) theta = candidate;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
}

void project_rows(Matrix& r) {
  for (std::size_t t = 0; t < r.rows(); ++t) project_row_to_simplex(r.row(t));
}

// Column constraints are projected in the metric where moving multiplier
// mu_i shifts row t by shift[t] * mu_i.
void project_columns(Matrix& r, std::span<const double> lambda, std::span<const double> shift,
                     const ProfileConstraint& c) {
  double norm2 = 0.0;
  for (std::size_t t = 0; t < lambda.size(); ++t) norm2 += lambda[t] * shift[t];
  for (std::size_t i = 0; i < r.cols(); ++i) {
    double mass = 0.0;
    for (std::size_t t = 0; t < r.rows(); ++t) mass += lambda[t] * r(t, i);
    const double gap = c.target[i] - mass;
    const bool act = c.kind == ConstraintKind::equality || (c.kind == ConstraintKind::lower && gap > 0.0) ||
                     (c.kind == ConstraintKind::upper && gap < 0.0);
    if (!act) continue;
    const double step = gap / norm2;
    for (std::size_t t = 0; t < r.rows(); ++t) r(t, i) += step * shift[t];
  }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

// Lower-threshold specs whose bounds sum to one pin the distribution exactly;
// the same holds for upper bounds summing to one.
ProfileConstraint normalize_constraint(const ProfileConstraint& c) {
  if (c.kind != ConstraintKind::lower && c.kind != ConstraintKind::upper) return c;
  const double sum = std::accumulate(c.target.begin(), c.target.end(), 0.0);
  if (std::abs(sum - 1.0) <= kMassTolerance) return ProfileConstraint{ConstraintKind::equality, c.target};
  if (c.kind == ConstraintKind::lower && std::all_of(c.target.begin(), c.target.end(), [](double x) { return x <= 0.0; }))
    return ProfileConstraint::none();
  if (c.kind == ConstraintKind::upper && std::all_of(c.target.begin(), c.target.end(), [](double x) { return x >= 1.0; }))
    return ProfileConstraint::none();
  return c;
}

// A feasible distribution for the constraint, used as the deterministic start.
std::vector<double> feasible_distribution(const ProfileConstraint& c, std::size_t q) {
  const double qd = static_cast<double>(q);
  switch (c.kind) {
    case ConstraintKind::none: return std::vector<double>(q, 1.0 / qd);
    case ConstraintKind::equality: return c.target;
    case ConstraintKind::lower: {
      const double slack = 1.0 - std::accumulate(c.target.begin(), c.target.end(), 0.0);
      std::vector<double> a(c.target);
      for (double& v : a) v += slack / qd;
      return a;
    }
    case ConstraintKind::upper: {
      const double sum = std::accumulate(c.target.begin(), c.target.end(), 0.0);
      std::vector<double> a(c.target);
      for (double& v : a) v /= sum;
      return a;
    }
  }
  return {};
}

}  // namespace

ProfileConstraint ProfileConstraint::equality(const ProbabilityDistribution& a) {
  return {ConstraintKind::equality, a.values()};
}

ProfileConstraint ProfileConstraint::lower(std::vector<double> x) { return {ConstraintKind::lower, std::move(x)}; }

ProfileConstraint ProfileConstraint::upper(std::vector<double> x) { return {ConstraintKind::upper, std::move(x)}; }

ProfileConstraint ProfileConstraint::from_threshold(const ThresholdSpec& spec) {
  return spec.is_lower() ? lower(spec.bounds()) : upper(spec.bounds());
}

void ProfileConstraint::validate(std::size_t q) const {
  if (kind == ConstraintKind::none) return;
  if (target.size() != q) throw ValidationError("constraint dimension does not match q");
  double sum = 0.0;
  for (double v : target) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("constraint targets must be nonnegative");
    sum += v;
  }
  switch (kind) {
    case ConstraintKind::equality:
      if (std::abs(sum - 1.0) > kMassTolerance) throw DomainError("equality target must be a distribution");
      break;
    case ConstraintKind::lower:
      if (sum > 1.0 + kMassTolerance) throw DomainError("lower bounds must satisfy sum x_i <= 1");
      break;
    case ConstraintKind::upper:
      if (sum < 1.0 - kMassTolerance) throw DomainError("upper bounds must satisfy sum x_i >= 1");
      break;
    case ConstraintKind::none: break;
  }
}

bool ProfileConstraint::satisfied_by(std::span<const double> a, double tolerance) const {
  for (std::size_t i = 0; i < target.size(); ++i) {
    switch (kind) {
      case ConstraintKind::none: return true;
      case ConstraintKind::equality:
        if (std::abs(a[i] - target[i]) > tolerance) return false;
        break;
      case ConstraintKind::lower:
        if (a[i] < target[i] - tolerance) return false;
        break;
      case ConstraintKind::upper:
        if (a[i] > target[i] + tolerance) return false;
        break;
    }
  }
  return true;
}

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::none: return "none";
    case ConstraintKind::equality: return "equality";
    case ConstraintKind::lower: return "lower";
    case ConstraintKind::upper: return "upper";
  }
  return "unknown";
}

double energy_of_profile(const StepGraphon& w, const InteractionMatrix& j, const FractionalProfile& r) {
  check_shapes(w, j, r.k(), r.q());
  return Objective(w, j).value(r.values());
}

FractionalProfile refine_profile(const StepGraphon& w, const FractionalProfile& r,
                                 const std::vector<std::vector<double>>& parts) {
  if (r.k() != w.k() || parts.size() != w.k()) throw ValidationError("refinement does not match the graphon");
  std::vector<std::size_t> parent;
  for (std::size_t t = 0; t < w.k(); ++t) {
    for (double p : parts[t])
      if (!(p > 0.0)) throw ValidationError("refinement pieces must have positive measure");
    const std::size_t pieces = parts[t].empty() ? 1 : parts[t].size();
    parent.insert(parent.end(), pieces, t);
  }
  Matrix out(parent.size(), r.q());
  for (std::size_t s = 0; s < parent.size(); ++s)
    for (std::size_t i = 0; i < r.q(); ++i) out(s, i) = r(parent[s], i);
  return FractionalProfile(std::move(out));
}

namespace {

struct DualPoint {
  Matrix r;
  std::vector<double> mass;
  double value = 0.0;
};

// Rows r_t = P_simplex(y_t + lambda_t mu) minimize the Lagrangian for fixed
// column multipliers mu; the dual function is concave in mu.
DualPoint dual_point(const Matrix& y, std::span<const double> lambda, std::span<const double> shift,
                     const ProfileConstraint& c, const std::vector<double>& mu) {
  DualPoint d{Matrix(y.rows(), y.cols()), std::vector<double>(y.cols(), 0.0), 0.0};
  for (std::size_t t = 0; t < y.rows(); ++t) {
    auto row = d.r.row(t);
    for (std::size_t i = 0; i < y.cols(); ++i) row[i] = y(t, i) + shift[t] * mu[i];
    project_row_to_simplex(row);
    // Row weight lambda_t / shift_t makes r_t the minimizer of the Lagrangian.
    const double weight = lambda[t] / shift[t];
    for (std::size_t i = 0; i < y.cols(); ++i) {
      const double diff = row[i] - y(t, i);
      d.value += 0.5 * weight * diff * diff;
      d.mass[i] += lambda[t] * row[i];
    }
  }
  for (std::size_t i = 0; i < y.cols(); ++i) d.value -= mu[i] * (d.mass[i] - c.target[i]);
  return d;
}

bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) return false;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    for (std::size_t k = r + 1; k < n; ++k) b[r] -= a[r * n + k] * b[k];
    b[r] /= a[r * n + r];
  }
  return true;
}

// Projected Levenberg-Marquardt ascent on the dual; nothing if it stalls.
std::optional<Matrix> dual_projection(const Matrix& y, std::span<const double> lambda, std::span<const double> shift,
                                      const ProfileConstraint& c) {
  const std::size_t q = y.cols();
  const std::size_t k = y.rows();
  double lambda_sq = 0.0;
  for (std::size_t t = 0; t < k; ++t) lambda_sq += lambda[t] * shift[t];
  auto pinned = [&](double mu, double g) {
    return mu == 0.0 && ((c.kind == ConstraintKind::lower && g <= 0.0) || (c.kind == ConstraintKind::upper && g >= 0.0));
  };
  // Largest violated stationarity condition among unpinned multipliers.
  auto residual = [&](const DualPoint& d, const std::vector<double>& m) {
    double out = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      const double g = c.target[i] - d.mass[i];
      if (!pinned(m[i], g)) out = std::max(out, std::abs(g));
    }
    return out;
  };
  double y_scale = 1.0;
  for (double v : y.data()) y_scale = std::max(y_scale, std::abs(v));

  std::vector<double> mu(q, 0.0);
  DualPoint cur = dual_point(y, lambda, shift, c, mu);
  double damping = 1e-4 * lambda_sq;
  const double min_damping = 1e-14 * lambda_sq;
  for (std::size_t iter = 0; iter < 500; ++iter) {
    std::vector<double> grad(q);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < q; ++i) {
      grad[i] = c.target[i] - cur.mass[i];
      if (!pinned(mu[i], grad[i])) free.push_back(i);
    }
    const double err = residual(cur, mu);
    const double scale = y_scale;
    if (err <= 1e-14 * scale) return std::move(cur.r);

    const std::size_t nf = free.size();
    std::vector<double> h(nf * nf, 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      std::size_t support = 0;
      for (std::size_t i = 0; i < q; ++i) support += cur.r(t, i) > 0.0;
      const double w = lambda[t] * shift[t];
      for (std::size_t a = 0; a < nf; ++a) {
        if (!(cur.r(t, free[a]) > 0.0)) continue;
        h[a * nf + a] += w;
        for (std::size_t b = 0; b < nf; ++b)
          if (cur.r(t, free[b]) > 0.0) h[a * nf + b] -= w / static_cast<double>(support);
      }
    }

    bool moved = false;
    for (std::size_t attempt = 0; attempt < 60 && !moved; ++attempt) {
      std::vector<double> system = h;
      for (std::size_t a = 0; a < nf; ++a) system[a * nf + a] += damping;
      std::vector<double> step(nf);
      for (std::size_t a = 0; a < nf; ++a) step[a] = grad[free[a]];
      if (solve_dense(system, step, nf)) {
        std::vector<double> cand = mu;
        for (std::size_t a = 0; a < nf; ++a) cand[free[a]] += step[a];
        for (double& m : cand) {
          if (c.kind == ConstraintKind::lower) m = std::max(m, 0.0);
          if (c.kind == ConstraintKind::upper) m = std::min(m, 0.0);
        }
        // Row projection ignores a common shift of all multipliers; pin it
        // so they cannot drift into cancellation.
        if (c.kind == ConstraintKind::equality) {
          const double mean = std::accumulate(cand.begin(), cand.end(), 0.0) / static_cast<double>(q);
          for (double& m : cand) m -= mean;
        }
        double predicted = 0.0;
        for (std::size_t i = 0; i < q; ++i) predicted += grad[i] * (cand[i] - mu[i]);
        if (predicted > 0.0) {
          DualPoint next = dual_point(y, lambda, shift, c, cand);
          if (next.value >= cur.value + 1e-4 * predicted || residual(next, cand) < 0.5 * err) {
            mu = std::move(cand);
            cur = std::move(next);
            moved = true;
            damping = std::max(damping * 0.1, min_damping);
            break;
          }
        }
      }
      damping *= 10.0;
    }
    if (!moved) {
      if (err <= 1e-11 * scale) return std::move(cur.r);
      break;
    }
  }
  return std::nullopt;
}

Matrix project_in_metric(const Matrix& r, std::span<const double> lambda, std::span<const double> shift,
                         const ProfileConstraint& constraint) {
  Matrix x = r;
  if (constraint.kind == ConstraintKind::none) {
    project_rows(x);
    return x;
  }
  if (auto exact = dual_projection(r, lambda, shift, constraint)) {
    bool ok = true;
    for (std::size_t t = 0; t < exact->rows(); ++t) {
      const auto row = exact->row(t);
      ok = ok && std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-12;
    }
    std::vector<double> mass(exact->cols(), 0.0);
    for (std::size_t t = 0; t < exact->rows(); ++t)
      for (std::size_t i = 0; i < exact->cols(); ++i) mass[i] += lambda[t] * (*exact)(t, i);
    if (ok && constraint.satisfied_by(mass, 1e-11)) return std::move(*exact);
  }
  // Dykstra's alternating projections as the slow but unconditional fallback.
  Matrix p(r.rows(), r.cols());
  Matrix corr(r.rows(), r.cols());
  Matrix z = x;
  constexpr std::size_t kMaxSweeps = 200000;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t i = 0; i < z.data().size(); ++i) z.data()[i] = x.data()[i] + p.data()[i];
    project_rows(z);
    for (std::size_t i = 0; i < z.data().size(); ++i) p.data()[i] = x.data()[i] + p.data()[i] - z.data()[i];
    Matrix next = z;
    for (std::size_t i = 0; i < next.data().size(); ++i) next.data()[i] += corr.data()[i];
    project_columns(next, lambda, shift, constraint);
    for (std::size_t i = 0; i < next.data().size(); ++i)
      corr.data()[i] = z.data()[i] + corr.data()[i] - next.data()[i];
    const double moved = max_abs_diff(next, x);
    x = std::move(next);
    if (moved < 1e-15 && max_abs_diff(x, z) < 1e-14) break;
  }
  return z;
}

}  // namespace

Matrix project_feasible(const Matrix& r, std::span<const double> lambda, const ProfileConstraint& constraint) {
  return project_in_metric(r, lambda, lambda, constraint);
}

EnergyResult minimize_energy(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& constraint,
                             const MinimizeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t k = w.k();
  const std::size_t q = j.q();
  constraint.validate(q);
  if (options.restarts == 0) throw DomainError("restarts must be at least 1");
  const ProfileConstraint c = normalize_constraint(constraint);
  const Objective objective(w, j);
  const auto& lambda = w.lambda();
  // Descent runs in the lambda-weighted metric <r, r'> = sum_t lambda_t r_t . r'_t,
  // which removes the lambda_t scaling of each block's gradient. In that
  // metric a multiplier shifts every row equally.
  const std::vector<double> unit_shift(k, 1.0);
  auto project = [&](const Matrix& y) { return project_in_metric(y, lambda, unit_shift, c); };

  const double lipschitz = 2.0 * static_cast<double>(q) * j.inf_norm() * w.inf_norm();
  const double t_initial = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  constexpr double kArmijo = 1e-4;

  std::optional<Matrix> best;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;

  for (std::size_t restart = 0; restart < options.restarts; ++restart) {
    Matrix x(k, q);
    if (restart == 0) {
      const std::vector<double> a = feasible_distribution(c, q);
      for (std::size_t t = 0; t < k; ++t) std::copy(a.begin(), a.end(), x.row(t).begin());
    } else {
      Rng rng(derive_seed(options.seed, restart));
      for (std::size_t t = 0; t < k; ++t) rng.dirichlet(x.row(t));
    }
    x = project(x);

    Matrix grad;
    double e = objective.value_and_gradient(x, grad);
    double step = t_initial;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      ++iterations;
      step = std::min(step * 2.0, 1e6 * t_initial);
      Matrix candidate;
      double e_candidate = 0.0;
      double moved = 0.0;
      bool accepted = false;
      while (step > 1e-18 * t_initial) {
        candidate = x;
        for (std::size_t t = 0; t < k; ++t)
          for (std::size_t i = 0; i < q; ++i) candidate(t, i) -= step * grad(t, i) / lambda[t];
        candidate = project(candidate);
        double directional = 0.0;
        moved = 0.0;
        for (std::size_t t = 0; t < k; ++t)
          for (std::size_t i = 0; i < q; ++i) {
            const double d = candidate(t, i) - x(t, i);
            directional += grad(t, i) * d;
            moved += lambda[t] * d * d;
          }
        e_candidate = objective.value(candidate);
        if (e_candidate <= e + kArmijo * directional) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      const double pg_norm = std::sqrt(moved) / step;
      x = std::move(candidate);
      e = objective.value_and_gradient(x, grad);
      if (pg_norm < options.tol) break;
    }
    if (e < best_value) {
      best_value = e;
      best = x;
    }
  }

  FractionalProfile profile(std::move(*best));
  EnergyResult result;
  result.value = energy_of_profile(w, j, profile);
  std::vector<double> a = profile.induced_distribution(lambda);
  result.certificate = ProfileCertificate{std::move(profile), std::move(a)};
  result.method = Method::projected_gradient;
  result.stats.restarts = options.restarts;
  result.stats.iterations = iterations;
  result.stats.seed = options.seed;
  result.stats.tolerance = options.tol;
  result.stats.wall_time_ms = elapsed_ms(start);
  return result;
}

// ---------------------------------------------------------------------------
// Grid oracle

namespace {

double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  double out = 1.0;
  for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(out);
}

// Integer compositions of m into q parts, in lexicographic order.
std::vector<std::vector<int>> compositions(std::size_t m, std::size_t q) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(q, 0);
  auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (i + 1 == q) {
      cur[i] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[i] = v;
      self(self, i + 1, remaining - v);
    }
  };
  rec(rec, 0, static_cast<int>(m));
  return out;
}

// Integer box [lo, hi] for the units u of one row with mass `mass` so that
// mass * u / m meets the residual target under the constraint kind.
struct UnitBox {
  int lo = 0;
  int hi = 0;
};

UnitBox unit_box(ConstraintKind kind, double residual, double mass, int m, double slack) {
  UnitBox box{0, m};
  if (kind == ConstraintKind::none) return box;
  const double scale = static_cast<double>(m) / mass;
  if (kind == ConstraintKind::lower || kind == ConstraintKind::equality) {
    const double need = std::ceil((residual - slack) * scale);
    box.lo = static_cast<int>(std::clamp(need, 0.0, static_cast<double>(m) + 1.0));
  }
  if (kind == ConstraintKind::upper || kind == ConstraintKind::equality) {
    const double cap = std::floor((residual + slack) * scale);
    box.hi = static_cast<int>(std::clamp(cap, -1.0, static_cast<double>(m)));
  }
  return box;
}

class GridSearch {
 public:
  GridSearch(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& c, std::size_t m, double slack)
      : w_(w), j_(j), c_(c), m_(static_cast<int>(m)), q_(j.q()), slack_(slack) {
    for (std::size_t t = 0; t < w.k(); ++t) {
      bool inert = true;
      for (std::size_t s = 0; s < w.k() && inert; ++s) inert = w.value(t, s) == 0.0;
      (inert ? inert_ : active_).push_back(t);
    }
    for (std::size_t t : inert_) inert_mass_ = inert_mass_ + w.measure(t);
    if (c_.kind == ConstraintKind::none) {
      // Inert blocks never matter without a constraint.
      inert_mass_ = 0.0;
    }
    points_ = compositions(m, q_);
    const double md = static_cast<double>(m);
    for (const auto& pt : points_) {
      std::vector<double> p(q_);
      for (std::size_t i = 0; i < q_; ++i) p[i] = pt[i] / md;
      std::vector<double> jp(q_, 0.0);
      double pjp = 0.0;
      for (std::size_t a = 0; a < q_; ++a) {
        for (std::size_t b = 0; b < q_; ++b) jp[a] += j(a, b) * p[b];
        pjp += p[a] * jp[a];
      }
      coords_.push_back(std::move(p));
      jcoords_.push_back(std::move(jp));
      quad_.push_back(pjp);
    }
    const std::size_t ka = active_.size();
    coupling_ = Matrix(ka, ka);
    for (std::size_t a = 0; a < ka; ++a)
      for (std::size_t b = 0; b < ka; ++b)
        coupling_(a, b) = -w.measure(active_[a]) * w.measure(active_[b]) * w.value(active_[a], active_[b]);
    chosen_.assign(ka, 0);
    column_mass_.assign(q_, 0.0);
  }

  bool use_line_search() const { return inert_mass_ == 0.0 && !active_.empty() && q_ >= 2; }

  std::optional<Matrix> run() {
    remaining_mass_ = inert_mass_;
    for (std::size_t t : active_) remaining_mass_ += w_.measure(t);
    descend(0, 0.0);
    if (!found_) return std::nullopt;
    return assemble();
  }

 private:
  bool prune() const {
    if (c_.kind == ConstraintKind::none) return false;
    for (std::size_t i = 0; i < q_; ++i) {
      if ((c_.kind == ConstraintKind::lower || c_.kind == ConstraintKind::equality) &&
          column_mass_[i] + remaining_mass_ < c_.target[i] - slack_)
        return true;
      if ((c_.kind == ConstraintKind::upper || c_.kind == ConstraintKind::equality) &&
          column_mass_[i] > c_.target[i] + slack_)
        return true;
    }
    return false;
  }

  // Units for the inert row, or nothing when the residual is unreachable.
  std::optional<std::vector<int>> inert_row() const {
    std::vector<int> units(q_, 0);
    if (inert_mass_ == 0.0) {
      if (!c_.satisfied_by(column_mass_, slack_)) return std::nullopt;
      return units;
    }
    std::vector<UnitBox> boxes(q_);
    int lo_sum = 0;
    int hi_sum = 0;
    for (std::size_t i = 0; i < q_; ++i) {
      boxes[i] = unit_box(c_.kind, c_.target.empty() ? 0.0 : c_.target[i] - column_mass_[i], inert_mass_, m_, slack_);
      if (boxes[i].lo > boxes[i].hi) return std::nullopt;
      lo_sum += boxes[i].lo;
      hi_sum += boxes[i].hi;
    }
    if (lo_sum > m_ || hi_sum < m_) return std::nullopt;
    int left = m_ - lo_sum;
    for (std::size_t i = 0; i < q_; ++i) {
      const int extra = std::min(left, boxes[i].hi - boxes[i].lo);
      units[i] = boxes[i].lo + extra;
      left -= extra;
    }
    return units;
  }

  void record(double value, std::optional<std::vector<int>> inert_units) {
    if (found_ && !(value < best_value_)) return;
    found_ = true;
    best_value_ = value;
    best_chosen_ = chosen_;
    best_inert_ = std::move(inert_units);
    best_line_ = line_point_;
  }

  void descend(std::size_t level, double partial) {
    ++evaluations_;
    const std::size_t ka = active_.size();
    if (level == ka) {
      if (found_ && !(partial < best_value_)) return;
      auto units = inert_row();
      if (units) record(partial, std::move(units));
      return;
    }
    if (level + 1 == ka && use_line_search()) {
      line_search(level, partial);
      return;
    }
    const double mass = w_.measure(active_[level]);
    for (std::size_t g = 0; g < points_.size(); ++g) {
      chosen_[level] = g;
      double delta = coupling_(level, level) * quad_[g];
      for (std::size_t s = 0; s < level; ++s) {
        double dot = 0.0;
        for (std::size_t i = 0; i < q_; ++i) dot += coords_[chosen_[s]][i] * jcoords_[g][i];
        delta += 2.0 * coupling_(s, level) * dot;
      }
      for (std::size_t i = 0; i < q_; ++i) column_mass_[i] += mass * coords_[g][i];
      remaining_mass_ -= mass;
      if (!prune()) descend(level + 1, partial + delta);
      remaining_mass_ += mass;
      for (std::size_t i = 0; i < q_; ++i) column_mass_[i] -= mass * coords_[g][i];
    }
  }

  // Last active block: enumerate the first q-2 units and minimize the
  // remaining one-dimensional integer quadratic exactly.
  void line_search(std::size_t level, double partial) {
    const double mass = w_.measure(active_[level]);
    const double md = static_cast<double>(m_);
    auto& h = scratch_h_;
    auto& jh = scratch_jh_;
    auto& boxes = scratch_boxes_;
    auto& units = scratch_units_;
    h.assign(q_, 0.0);
    for (std::size_t s = 0; s < level; ++s)
      for (std::size_t i = 0; i < q_; ++i) h[i] += coupling_(s, level) * coords_[chosen_[s]][i];
    jh.assign(q_, 0.0);
    for (std::size_t a = 0; a < q_; ++a)
      for (std::size_t b = 0; b < q_; ++b) jh[a] += j_(a, b) * h[b];
    const double ckk = coupling_(level, level);
    const std::size_t last = q_ - 1;
    const std::size_t pivot = q_ - 2;
    // Along d = (e_pivot - e_last) / m the energy is quadratic in the pivot units.
    const double dJd = (j_(pivot, pivot) - 2.0 * j_(pivot, last) + j_(last, last)) / (md * md);
    const double quad = ckk * dJd;
    const double h_d = (jh[pivot] - jh[last]) / md;

    boxes.resize(q_);
    for (std::size_t i = 0; i < q_; ++i)
      boxes[i] = unit_box(c_.kind, c_.target.empty() ? 0.0 : c_.target[i] - column_mass_[i], mass, m_, slack_);
    units.assign(q_, 0);

    auto finish = [&](int used) {
      // units[pivot] = jv, units[last] = m - used - jv.
      const int rest = m_ - used;
      const int jlo = std::max({boxes[pivot].lo, rest - boxes[last].hi, 0});
      const int jhi = std::min({boxes[pivot].hi, rest - boxes[last].lo, rest});
      if (jlo > jhi) return;
      ++evaluations_;
      // p0 has units[0..pivot) on the leading states and `rest` on the last.
      double jp0_d = 0.0;
      double p0jp0 = 0.0;
      double h_p0 = 0.0;
      for (std::size_t a = 0; a < q_; ++a) {
        const double pa = a < pivot ? units[a] / md : (a == last ? rest / md : 0.0);
        if (pa == 0.0) continue;
        double row = 0.0;
        for (std::size_t b = 0; b < pivot; ++b) row += j_(a, b) * units[b];
        row = (row + j_(a, last) * rest) / md;
        p0jp0 += pa * row;
        h_p0 += jh[a] * pa;
        jp0_d += (j_(pivot, a) - j_(last, a)) * pa / md;
      }
      const double lin = 2.0 * ckk * jp0_d + 2.0 * h_d;
      const double f0 = partial + ckk * p0jp0 + 2.0 * h_p0;
      auto f = [&](int jv) { return f0 + lin * jv + quad * static_cast<double>(jv) * jv; };
      int best_j = jlo;
      double best_f = f(jlo);
      auto consider = [&](int jv) {
        const double fv = f(jv);
        if (fv < best_f || (fv == best_f && jv < best_j)) {
          best_f = fv;
          best_j = jv;
        }
      };
      consider(jhi);
      if (quad > 0.0) {
        const double vertex = std::floor(-lin / (2.0 * quad));
        for (double v : {vertex, vertex + 1.0})
          consider(static_cast<int>(std::clamp(v, static_cast<double>(jlo), static_cast<double>(jhi))));
      }
      if (found_ && !(best_f < best_value_)) return;
      units[pivot] = best_j;
      units[last] = rest - best_j;
      line_point_ = units;
      record(best_f, std::vector<int>(q_, 0));
    };

    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
      if (i == pivot) {
        finish(used);
        return;
      }
      const int hi = std::min(boxes[i].hi, m_ - used);
      for (int v = boxes[i].lo; v <= hi; ++v) {
        units[i] = v;
        self(self, i + 1, used + v);
      }
    };
    rec(rec, 0, 0);
  }

  Matrix assemble() const {
    Matrix r(w_.k(), q_);
    const double md = static_cast<double>(m_);
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const bool from_line = use_line_search() && a + 1 == active_.size();
      for (std::size_t i = 0; i < q_; ++i)
        r(active_[a], i) = from_line ? best_line_[i] / md : coords_[best_chosen_[a]][i];
    }
    std::vector<int> inert_units = best_inert_.value_or(std::vector<int>(q_, 0));
    if (inert_mass_ == 0.0) {
      inert_units.assign(q_, 0);
      inert_units[0] = m_;
    }
    for (std::size_t t : inert_)
      for (std::size_t i = 0; i < q_; ++i) r(t, i) = inert_units[i] / md;
    return r;
  }

  const StepGraphon& w_;
  const InteractionMatrix& j_;
  const ProfileConstraint& c_;
  int m_;
  std::size_t q_;
  double slack_;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> inert_;
  double inert_mass_ = 0.0;
  double remaining_mass_ = 0.0;
  std::vector<std::vector<int>> points_;
  std::vector<std::vector<double>> coords_;
  std::vector<std::vector<double>> jcoords_;
  std::vector<double> quad_;
  Matrix coupling_;
  std::vector<std::size_t> chosen_;
  std::vector<double> column_mass_;
  std::vector<int> line_point_;
  std::vector<double> scratch_h_;
  std::vector<double> scratch_jh_;
  std::vector<UnitBox> scratch_boxes_;
  std::vector<int> scratch_units_;

  bool found_ = false;
  double best_value_ = 0.0;
  std::vector<std::size_t> best_chosen_;
  std::optional<std::vector<int>> best_inert_;
  std::vector<int> best_line_;

 public:
  std::size_t evaluations_ = 0;
};

}  // namespace

double grid_oracle_cost(const StepGraphon& w, std::size_t q, std::size_t resolution, ConstraintKind kind) {
  std::size_t active = 0;
  bool has_inert = false;
  for (std::size_t t = 0; t < w.k(); ++t) {
    bool inert = true;
    for (std::size_t s = 0; s < w.k() && inert; ++s) inert = w.value(t, s) == 0.0;
    if (inert)
      has_inert = true;
    else
      ++active;
  }
  if (kind == ConstraintKind::none) has_inert = false;
  const double points = binomial(resolution + q - 1, q - 1);
  if (active == 0) return 1.0;
  if (has_inert || q < 2) return std::pow(points, static_cast<double>(active));
  const double line = binomial(resolution + q - 2, q - 2);
  return std::pow(points, static_cast<double>(active - 1)) * line;
}

EnergyResult grid_oracle(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& constraint,
                         std::size_t resolution, double budget, double slack) {
  const auto start = std::chrono::steady_clock::now();
  if (resolution == 0) throw DomainError("grid resolution must be positive");
  constraint.validate(j.q());
  const double cost = grid_oracle_cost(w, j.q(), resolution, constraint.kind);
  if (cost > budget) throw BudgetExceeded(cost, budget);
  GridSearch search(w, j, constraint, resolution, slack);
  std::optional<Matrix> best = search.run();
  if (!best) throw DomainError("no grid profile at this resolution satisfies the constraint");
  FractionalProfile profile(std::move(*best));
  EnergyResult result;
  result.value = energy_of_profile(w, j, profile);
  std::vector<double> a = profile.induced_distribution(w.lambda());
  result.certificate = ProfileCertificate{std::move(profile), std::move(a)};
  result.method = Method::grid_oracle;
  result.stats.iterations = search.evaluations_;
  result.stats.tolerance = 1.0 / static_cast<double>(resolution);
  result.stats.wall_time_ms = elapsed_ms(start);
  return result;
}

}  // namespace gselab
