#include "gselab/graph_energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "gselab/errors.hpp"
#include "gselab/rng.hpp"

namespace gselab {
namespace {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void check_dimensions(const WeightedGraph& g, const InteractionMatrix& j, const SpinConfiguration& phi) {
  if (phi.size() != g.n()) throw ValidationError("configuration length does not match the node count");
  if (phi.q() != j.q()) throw ValidationError("configuration q does not match the interaction matrix");
}

// w_uv = alpha_u alpha_v beta_uv, the pair weight of the ordered-pair energy.
Matrix pair_weights(const WeightedGraph& g) {
  const std::size_t n = g.n();
  Matrix w(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) w(u, v) = g.node_weight(u) * g.node_weight(v) * g.edge_weight(u, v);
  return w;
}

double multinomial(std::size_t n, const SizeVector& sizes) {
  double log_count = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::size_t s : sizes) log_count -= std::lgamma(static_cast<double>(s) + 1.0);
  return std::exp(log_count);
}

// Gain threshold below which moves are treated as non-improving.
double move_tolerance(const Matrix& w, const InteractionMatrix& j) {
  double total = 0.0;
  for (double v : w.data()) total += std::abs(v);
  return 1e-12 * (1.0 + total * j.inf_norm());
}

std::vector<SizeVector> all_compositions(std::size_t n, std::size_t q) {
  std::vector<SizeVector> out;
  SizeVector cur(q, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t remaining) -> void {
    if (i + 1 == q) {
      cur[i] = remaining;
      out.push_back(cur);
      return;
    }
    for (std::size_t v = 0; v <= remaining; ++v) {
      cur[i] = v;
      self(self, i + 1, remaining - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

// Depth-first enumeration in lexicographic order of all configurations whose
// class sizes are dominated by some allowed size vector at every prefix and
// equal to one at the leaves.
class ConstrainedEnumerator {
 public:
  ConstrainedEnumerator(const WeightedGraph& g, const InteractionMatrix& j, const std::vector<SizeVector>* allowed)
      : j_(j), w_(pair_weights(g)), allowed_(allowed), n_(g.n()), q_(j.q()), phi_(n_, 0), counts_(q_, 0) {
    tolerance_ = move_tolerance(w_, j);
  }

  SpinConfiguration run() {
    descend(0, 0.0);
    if (best_.empty()) throw DomainError("no configuration satisfies the size constraints");
    return SpinConfiguration(best_, q_);
  }

  std::size_t visited() const { return visited_; }

 private:
  bool admissible_prefix() const {
    if (allowed_ == nullptr) return true;
    for (const SizeVector& s : *allowed_) {
      bool ok = true;
      for (std::size_t i = 0; i < q_ && ok; ++i) ok = counts_[i] <= s[i];
      if (ok) return true;
    }
    return false;
  }

  void descend(std::size_t u, double raw) {
    if (u == n_) {
      ++visited_;
      if (best_.empty() || raw > best_raw_ + tolerance_) {
        best_raw_ = raw;
        best_ = phi_;
      }
      return;
    }
    for (std::size_t s = 0; s < q_; ++s) {
      ++counts_[s];
      if (admissible_prefix()) {
        double delta = 0.0;
        for (std::size_t v = 0; v < u; ++v) delta += w_(u, v) * j_(s, static_cast<std::size_t>(phi_[v]));
        phi_[u] = static_cast<int>(s);
        descend(u + 1, raw + 2.0 * delta);
      }
      --counts_[s];
    }
  }

  const InteractionMatrix& j_;
  Matrix w_;
  const std::vector<SizeVector>* allowed_;
  std::size_t n_;
  std::size_t q_;
  std::vector<int> phi_;
  std::vector<std::size_t> counts_;
  std::vector<int> best_;
  double best_raw_ = -std::numeric_limits<double>::infinity();
  double tolerance_ = 0.0;
  std::size_t visited_ = 0;
};

// Steepest-descent state over single-node moves and pairwise swaps. The raw
// objective R = sum_{u != v} w_uv J_{phi(u) phi(v)} is maximized.
class Descent {
 public:
  Descent(const Matrix& w, const InteractionMatrix& j, std::vector<int> phi)
      : w_(w), j_(j), n_(w.rows()), q_(j.q()), phi_(std::move(phi)), field_(n_, q_) {
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t t = 0; t < q_; ++t) {
        double f = 0.0;
        for (std::size_t v = 0; v < n_; ++v)
          if (v != u) f += w_(u, v) * j_(t, static_cast<std::size_t>(phi_[v]));
        field_(u, t) = f;
      }
  }

  double move_gain(std::size_t u, std::size_t t) const {
    const auto s = static_cast<std::size_t>(phi_[u]);
    return 2.0 * (field_(u, t) - field_(u, s));
  }

  double swap_gain(std::size_t u, std::size_t v) const {
    const auto s = static_cast<std::size_t>(phi_[u]);
    const auto t = static_cast<std::size_t>(phi_[v]);
    return 2.0 * (field_(u, t) - field_(u, s)) + 2.0 * (field_(v, s) - field_(v, t)) +
           2.0 * w_(u, v) * (j_(s, t) + j_(t, s) - j_(s, s) - j_(t, t));
  }

  void apply_move(std::size_t u, std::size_t t) {
    const auto s = static_cast<std::size_t>(phi_[u]);
    for (std::size_t v = 0; v < n_; ++v) {
      if (v == u || w_(v, u) == 0.0) continue;
      for (std::size_t x = 0; x < q_; ++x) field_(v, x) += w_(v, u) * (j_(x, t) - j_(x, s));
    }
    phi_[u] = static_cast<int>(t);
  }

  const std::vector<int>& phi() const { return phi_; }
  int state(std::size_t u) const { return phi_[u]; }

 private:
  const Matrix& w_;
  const InteractionMatrix& j_;
  std::size_t n_;
  std::size_t q_;
  std::vector<int> phi_;
  Matrix field_;
};

struct Candidate {
  double value;
  SpinConfiguration phi;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.phi < b.phi;
}

}  // namespace

double energy_of_configuration(const WeightedGraph& g, const InteractionMatrix& j, const SpinConfiguration& phi) {
  check_dimensions(g, j, phi);
  const std::size_t n = g.n();
  const std::size_t q = j.q();
  // Aggregate pair weights per state pair first so that equal aggregates give
  // bit-identical energies regardless of which configuration produced them.
  Matrix m(q, q);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      const double w = g.node_weight(u) * g.node_weight(v) * g.edge_weight(u, v);
      if (w != 0.0) m(static_cast<std::size_t>(phi[u]), static_cast<std::size_t>(phi[v])) += w;
    }
  double sum = 0.0;
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) sum += j(a, b) * m(a, b);
  const double total = g.total_node_weight();
  return -(sum / (total * total));
}

EnergyResult minimize_over_sizes(const WeightedGraph& g, const InteractionMatrix& j,
                                 const std::vector<SizeVector>& allowed, const GraphSolveOptions& options) {
  if (allowed.empty()) throw DomainError("no feasible class-size vector");
  for (const SizeVector& s : allowed)
    if (s.size() != j.q()) throw ValidationError("size vector dimension does not match q");
  Stopwatch clock;
  const std::size_t n = g.n();
  EnergyResult result;
  result.stats.seed = options.seed;

  if (options.mode == GraphMode::exhaustive) {
    double required = 0.0;
    for (const SizeVector& s : allowed) required += multinomial(n, s);
    if (required > options.budget) throw BudgetExceeded(required, options.budget);
    ConstrainedEnumerator enumerator(g, j, &allowed);
    SpinConfiguration best = enumerator.run();
    result.value = energy_of_configuration(g, j, best);
    result.certificate = std::move(best);
    result.method = Method::exhaustive;
    result.stats.iterations = enumerator.visited();
    result.stats.wall_time_ms = clock.elapsed_ms();
    return result;
  }

  if (options.restarts == 0) throw DomainError("restarts must be at least 1");
  const std::set<SizeVector> allowed_set(allowed.begin(), allowed.end());
  const Matrix w = pair_weights(g);
  const double tolerance = move_tolerance(w, j);
  const std::size_t q = j.q();
  std::optional<Candidate> best;
  std::size_t iterations = 0;

  for (std::size_t r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(options.seed, r));
    SizeVector sizes = allowed[r % allowed.size()];
    std::vector<int> phi;
    phi.reserve(n);
    for (std::size_t i = 0; i < q; ++i) phi.insert(phi.end(), sizes[i], static_cast<int>(i));
    rng.shuffle(std::span<int>(phi));
    Descent descent(w, j, std::move(phi));

    while (true) {
      double best_gain = tolerance;
      std::size_t bu = n, bv = n, bt = q;
      for (std::size_t u = 0; u < n; ++u) {
        const auto s = static_cast<std::size_t>(descent.state(u));
        for (std::size_t t = 0; t < q; ++t) {
          if (t == s) continue;
          --sizes[s];
          ++sizes[t];
          const bool feasible = allowed_set.count(sizes) > 0;
          ++sizes[s];
          --sizes[t];
          if (!feasible) continue;
          const double gain = descent.move_gain(u, t);
          if (gain > best_gain) {
            best_gain = gain;
            bu = u;
            bt = t;
            bv = n;
          }
        }
        for (std::size_t v = u + 1; v < n; ++v) {
          if (descent.state(v) == descent.state(u)) continue;
          const double gain = descent.swap_gain(u, v);
          if (gain > best_gain) {
            best_gain = gain;
            bu = u;
            bv = v;
            bt = q;
          }
        }
      }
      if (bu == n) break;
      ++iterations;
      if (bv == n) {
        const auto s = static_cast<std::size_t>(descent.state(bu));
        --sizes[s];
        ++sizes[bt];
        descent.apply_move(bu, bt);
      } else {
        const auto s = static_cast<std::size_t>(descent.state(bu));
        const auto t = static_cast<std::size_t>(descent.state(bv));
        descent.apply_move(bu, t);
        descent.apply_move(bv, s);
      }
    }
    SpinConfiguration phi_final(descent.phi(), q);
    Candidate cand{energy_of_configuration(g, j, phi_final), std::move(phi_final)};
    if (!best || better(cand, *best)) best = std::move(cand);
  }

  result.value = best->value;
  result.certificate = std::move(best->phi);
  result.method = Method::local_search;
  result.stats.restarts = options.restarts;
  result.stats.iterations = iterations;
  result.stats.wall_time_ms = clock.elapsed_ms();
  return result;
}

EnergyResult gse_exhaustive(const WeightedGraph& g, const InteractionMatrix& j, double budget) {
  Stopwatch clock;
  const double required = std::pow(static_cast<double>(j.q()), static_cast<double>(g.n()));
  if (required > budget) throw BudgetExceeded(required, budget);
  ConstrainedEnumerator enumerator(g, j, nullptr);
  SpinConfiguration best = enumerator.run();
  EnergyResult result;
  result.value = energy_of_configuration(g, j, best);
  result.certificate = std::move(best);
  result.method = Method::exhaustive;
  result.stats.iterations = enumerator.visited();
  result.stats.wall_time_ms = clock.elapsed_ms();
  return result;
}

EnergyResult gse_local_search(const WeightedGraph& g, const InteractionMatrix& j, std::size_t restarts,
                              std::uint64_t seed) {
  if (restarts == 0) throw DomainError("restarts must be at least 1");
  Stopwatch clock;
  const std::size_t n = g.n();
  const std::size_t q = j.q();
  const Matrix w = pair_weights(g);
  const double tolerance = move_tolerance(w, j);
  std::optional<Candidate> best;
  std::size_t iterations = 0;

  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, r));
    std::vector<int> phi(n);
    for (int& s : phi) s = static_cast<int>(rng.below(q));
    Descent descent(w, j, std::move(phi));
    while (true) {
      double best_gain = tolerance;
      std::size_t bu = n, bt = q;
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t t = 0; t < q; ++t) {
          if (static_cast<int>(t) == descent.state(u)) continue;
          const double gain = descent.move_gain(u, t);
          if (gain > best_gain) {
            best_gain = gain;
            bu = u;
            bt = t;
          }
        }
      if (bu == n) break;
      descent.apply_move(bu, bt);
      ++iterations;
    }
    SpinConfiguration phi_final(descent.phi(), q);
    Candidate cand{energy_of_configuration(g, j, phi_final), std::move(phi_final)};
    if (!best || better(cand, *best)) best = std::move(cand);
  }

  EnergyResult result;
  result.value = best->value;
  result.certificate = std::move(best->phi);
  result.method = Method::local_search;
  result.stats.restarts = restarts;
  result.stats.iterations = iterations;
  result.stats.seed = seed;
  result.stats.wall_time_ms = clock.elapsed_ms();
  return result;
}

std::vector<SizeVector> admissible_size_vectors(std::size_t n, const ProbabilityDistribution& a) {
  const std::size_t q = a.q();
  const double nd = static_cast<double>(n);
  constexpr double slack = 1e-9;
  std::vector<std::size_t> lo(q), hi(q);
  for (std::size_t i = 0; i < q; ++i) {
    const double target = a[i] * nd;
    lo[i] = static_cast<std::size_t>(std::max(0.0, std::ceil(target - 1.0 - slack)));
    hi[i] = static_cast<std::size_t>(std::min(nd, std::floor(target + 1.0 + slack)));
  }
  std::vector<SizeVector> out;
  SizeVector cur(q, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (i == q) {
      if (used == n) out.push_back(cur);
      return;
    }
    for (std::size_t v = lo[i]; v <= hi[i] && used + v <= n; ++v) {
      cur[i] = v;
      self(self, i + 1, used + v);
    }
  };
  rec(rec, 0, 0);
  return out;
}

EnergyResult mgse(const WeightedGraph& g, const InteractionMatrix& j, const ProbabilityDistribution& a,
                  const GraphSolveOptions& options) {
  if (a.q() != j.q()) throw ValidationError("distribution dimension does not match q");
  return minimize_over_sizes(g, j, admissible_size_vectors(g.n(), a), options);
}

std::vector<SizeVector> feasible_size_vectors(std::size_t n, std::size_t q, double c) {
  return feasible_size_vectors(n, ThresholdSpec::homogeneous(q, c));
}

std::vector<SizeVector> feasible_size_vectors(std::size_t n, const ThresholdSpec& spec) {
  const std::size_t q = spec.q();
  const double nd = static_cast<double>(n);
  constexpr double eps = 1e-12;
  const auto& x = spec.bounds();
  std::vector<SizeVector> out;
  for (SizeVector& sizes : all_compositions(n, q)) {
    // A size vector is feasible iff some a with a_i in [lo_i, hi_i] sums to 1.
    double lo_sum = 0.0;
    double hi_sum = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < q && ok; ++i) {
      const double ni = static_cast<double>(sizes[i]);
      double lo = std::max(0.0, (ni - 1.0) / nd);
      double hi = std::min(1.0, (ni + 1.0) / nd);
      if (spec.is_lower())
        lo = std::max(lo, x[i]);
      else
        hi = std::min(hi, x[i]);
      if (lo > hi + eps) ok = false;
      lo_sum += lo;
      hi_sum += hi;
    }
    if (ok && lo_sum <= 1.0 + eps && hi_sum >= 1.0 - eps) out.push_back(std::move(sizes));
  }
  return out;
}

EnergyResult ltgse_graph(const WeightedGraph& g, const InteractionMatrix& j, const ThresholdSpec& spec,
                         const GraphSolveOptions& options) {
  if (spec.q() != j.q()) throw ValidationError("threshold dimension does not match q");
  if (spec.is_vacuous()) {
    if (options.mode == GraphMode::exhaustive) return gse_exhaustive(g, j, options.budget);
    return gse_local_search(g, j, options.restarts, options.seed);
  }
  const std::vector<SizeVector> allowed = feasible_size_vectors(g.n(), spec);
  if (allowed.empty()) throw DomainError("threshold admits no class-size vector");
  return minimize_over_sizes(g, j, allowed, options);
}

}  // namespace gselab
