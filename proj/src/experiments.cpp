#include "gselab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gselab/errors.hpp"
#include "gselab/rng.hpp"

namespace gselab {

WeightedGraph sample_induced(const WeightedGraph& g, std::size_t k, std::uint64_t seed) {
  if (!g.is_simple()) throw DomainError("sample_induced requires a simple graph");
  if (k > g.n()) throw DomainError("sample size k exceeds the number of nodes");
  std::vector<std::size_t> nodes(g.n());
  std::iota(nodes.begin(), nodes.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) std::swap(nodes[i], nodes[i + rng.below(g.n() - i)]);
  nodes.resize(k);
  std::sort(nodes.begin(), nodes.end());
  return g.induced(nodes);
}

EnergyResult ParameterSpec::evaluate(const WeightedGraph& g) const { return ltgse_graph(g, j, threshold, solver); }

std::string describe(const ThresholdSpec& spec) {
  std::ostringstream out;
  out << (spec.is_lower() ? "lower " : "upper ");
  if (spec.is_homogeneous()) {
    out << "c=" << spec.c();
  } else {
    out << "x=(";
    for (std::size_t i = 0; i < spec.q(); ++i) out << (i ? "," : "") << spec.bounds()[i];
    out << ")";
  }
  return out.str();
}

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) throw ValidationError("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  Quantiles q;
  q.min = values.front();
  q.q25 = at(0.25);
  q.median = at(0.5);
  q.q75 = at(0.75);
  q.q90 = at(0.9);
  q.max = values.back();
  q.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return q;
}

TestabilityReport testability_experiment(const WeightedGraph& g, const ParameterSpec& spec,
                                         const std::vector<std::size_t>& k_list, std::size_t m, double epsilon,
                                         std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  for (std::size_t k : k_list)
    if (k > g.n()) throw DomainError("sample size k exceeds the number of nodes");
  TestabilityReport report;
  report.n = g.n();
  report.m = m;
  report.epsilon = epsilon;
  report.seed = seed;
  const std::string threshold = describe(spec.threshold);
  if (m == 0) return report;

  const EnergyResult full = spec.evaluate(g);
  report.full_value = full.value;
  report.full_method = to_string(full.method);

  std::size_t row = 0;
  for (std::size_t k : k_list) {
    TestabilityLevel level;
    level.k = k;
    const std::uint64_t level_seed = derive_seed(seed, k);
    std::vector<double> deviations;
    std::size_t exceed = 0;
    for (std::size_t i = 0; i < m; ++i) {
      SampleRecord record;
      record.index = i;
      record.seed = derive_seed(level_seed, i);
      const WeightedGraph sub = sample_induced(g, k, record.seed);
      try {
        const EnergyResult r = spec.evaluate(sub);
        record.value = r.value;
        record.deviation = std::abs(r.value - full.value);
        record.method = to_string(r.method);
        deviations.push_back(*record.deviation);
        if (*record.deviation > epsilon) ++exceed;
        report.rows.push_back({row++, spec.q(), spec.j_id, threshold + " k=" + std::to_string(k), r.value,
                               record.method, record.seed});
      } catch (const BudgetExceeded&) {
        record.method = "budget-exceeded";
        level.partial = true;
      }
      level.samples.push_back(std::move(record));
    }
    if (!deviations.empty()) {
      level.exceedance = static_cast<double>(exceed) / static_cast<double>(deviations.size());
      level.deviation = quantiles(deviations);
    }
    report.partial = report.partial || level.partial;
    report.levels.push_back(std::move(level));
  }
  return report;
}

LimitEstimate extrapolate_limit(const std::vector<double>& ks, const std::vector<double>& values) {
  if (ks.size() != values.size()) throw ValidationError("extrapolate_limit: size mismatch");
  LimitEstimate e;
  e.ks = ks;
  e.values = values;
  const std::size_t n = ks.size();
  auto richardson = [&](std::size_t i) {
    return (ks[i + 1] * values[i + 1] - ks[i] * values[i]) / (ks[i + 1] - ks[i]);
  };
  if (n >= 3) {
    // Slopes per unit k; a convergent 1/k tail has slopes shrinking like 1/k^2.
    const double s1 = (values[n - 2] - values[n - 3]) / (ks[n - 2] - ks[n - 3]);
    const double s2 = (values[n - 1] - values[n - 2]) / (ks[n - 1] - ks[n - 2]);
    e.diverging = s2 < 0.0 && std::abs(s2) > 1e-9 && s1 < 0.0 && s2 / s1 > 0.5;
  }
  if (n >= 2 && !e.diverging) e.limit = richardson(n - 2);
  if (n >= 3 && e.limit) e.residual = std::abs(*e.limit - richardson(n - 3));
  return e;
}

namespace {

double solve(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& c,
             const MinimizeOptions& options) {
  return minimize_energy(w, j, c, options).value;
}

LimitEstimate penalized_scan(const StepGraphon& w, const ProfileConstraint& c, const std::vector<double>& ks,
                             const MinimizeOptions& options, std::vector<ReportRow>& rows, const std::string& label) {
  std::vector<double> values;
  for (double k : ks) {
    const double v = -solve(w, InteractionMatrix::penalized_pair(k), c, options);
    values.push_back(v);
    std::ostringstream id;
    id << "J_k k=" << k;
    rows.push_back({rows.size(), 2, id.str(), label, v, "projected_gradient", options.seed});
  }
  return extrapolate_limit(ks, values);
}

}  // namespace

BlockdiagReport blockdiag_report(const BlockdiagOptions& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw DomainError("blockdiag requires 0 < alpha < 1");
  if (!(o.beta1 > 0.0 && o.beta2 > 0.0)) throw DomainError("blockdiag requires beta1, beta2 > 0");
  if (!(o.h >= 0.0 && o.h <= 1.0)) throw DomainError("blockdiag requires 0 <= h <= 1");
  if (o.q0 < 1) throw DomainError("blockdiag requires q0 >= 1");
  BlockdiagReport r;
  r.options = o;
  const StepGraphon w = block_diagonal(o.alpha, o.beta1, o.beta2);
  const double w1 = o.alpha * o.alpha * o.beta1;
  const double w2 = (1.0 - o.alpha) * (1.0 - o.alpha) * o.beta2;
  const double min_side = std::min(o.alpha, 1.0 - o.alpha);

  r.maxcut_value = solve(w, InteractionMatrix::maxcut(2), ProfileConstraint::none(), o.solver);
  r.maxcut_closed_form = -(w1 + w2) / 2.0;
  r.rows.push_back({r.rows.size(), 2, "maxcut2", "none", r.maxcut_value, "projected_gradient", o.solver.seed});

  const double c0 = o.h / static_cast<double>(o.q0);
  const ThresholdSpec single_spec = ThresholdSpec::homogeneous(o.q0, c0);
  r.single_entry_value = solve(w, InteractionMatrix::single_entry(o.q0), ProfileConstraint::from_threshold(single_spec),
                               o.solver);
  r.single_entry_closed_form = o.beta1 * o.beta2 * c0 * c0 / (o.beta1 + o.beta2);
  r.single_entry_valid = c0 < min_side;
  r.rows.push_back({r.rows.size(), o.q0, "single_entry" + std::to_string(o.q0), describe(single_spec),
                    r.single_entry_value, "projected_gradient", o.solver.seed});

  const double c2 = o.h / 2.0;
  const ThresholdSpec jk_spec = ThresholdSpec::homogeneous(2, c2);
  r.jk = penalized_scan(w, ProfileConstraint::from_threshold(jk_spec), o.k_schedule, o.solver, r.rows,
                        describe(jk_spec));
  r.jk_target = w1 + w2 + std::max(w1, w2);
  r.jk_valid = min_side >= c2;

  for (std::size_t n : o.n_schedule) {
    if (n == 0) throw DomainError("n_schedule entries must be positive");
    ThresholdScan scan;
    scan.n = n;
    const double nd = static_cast<double>(n);
    const double c1n = 2.0 * c2 / nd;
    const double c2n = 2.0 * c2 * (nd - 1.0) / nd;
    scan.x = {c1n, c2n};
    const ThresholdSpec direct = ThresholdSpec::general({c1n, c2n});
    const ThresholdSpec swapped = ThresholdSpec::general({c2n, c1n});
    scan.direct = penalized_scan(w, ProfileConstraint::from_threshold(direct), o.k_schedule, o.solver, r.rows,
                                 describe(direct));
    scan.swapped = penalized_scan(w, ProfileConstraint::from_threshold(swapped), o.k_schedule, o.solver, r.rows,
                                  describe(swapped));
    if (scan.direct.limit && scan.swapped.limit)
      scan.best_limit = std::max(*scan.direct.limit, *scan.swapped.limit);
    else if (scan.direct.limit)
      scan.best_limit = scan.direct.limit;
    else if (scan.swapped.limit)
      scan.best_limit = scan.swapped.limit;
    r.scans.push_back(std::move(scan));
  }
  return r;
}

std::vector<MenuEntry> mincut_menu(const std::vector<std::size_t>& q_menu) {
  std::vector<MenuEntry> menu;
  for (std::size_t q : q_menu) {
    if (q < 1) throw ValidationError("menu q must be positive");
    menu.push_back({"mincut" + std::to_string(q), InteractionMatrix::mincut(q)});
  }
  return menu;
}

namespace {

SequenceReport sequence(const std::vector<StepGraphon>& ws, const InteractionMatrix& j, double c,
                        const HierarchyOptions& o) {
  SequenceReport s;
  s.c = c;
  const ProfileConstraint constraint = ProfileConstraint::from_threshold(ThresholdSpec::homogeneous(j.q(), c));
  for (const auto& w : ws) s.values.push_back(solve(w, j, constraint, o.solver));
  s.gaps.assign(s.values.size(), 0.0);
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = s.values.size(); i-- > 0;) {
    if (i + 1 == s.values.size()) {
      lo = hi = s.values[i];
    } else {
      lo = std::min(lo, s.values[i]);
      hi = std::max(hi, s.values[i]);
    }
    s.gaps[i] = hi - lo;
  }
  if (s.values.size() >= 2) s.persistent_gap = s.gaps[s.values.size() - 2];
  s.passes = s.gaps.empty() || s.gaps.front() < o.gap_threshold;
  return s;
}

}  // namespace

HierarchyReport hierarchy_experiment(const HierarchyOptions& o) {
  if (!(o.h1 >= 0.0 && o.h1 < o.h2 && o.h2 <= 1.0)) throw DomainError("hierarchy requires 0 <= h1 < h2 <= 1");
  std::vector<StepGraphon> ws;
  for (double alpha : o.alpha_schedule) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha_schedule entries must lie in (0,1)");
    ws.push_back(block_diagonal(alpha, 1.0 / (alpha * alpha), 0.0));
  }
  HierarchyReport report;
  report.options = o;
  for (const auto& item : o.menu) {
    if (!item.j.entries().is_square() || item.j.q() == 0) throw ValidationError("menu entry " + item.id + " is empty");
    HierarchyEntry e;
    e.id = item.id;
    e.q = item.j.q();
    const double qd = static_cast<double>(e.q);
    e.lower = sequence(ws, item.j, o.h1 / qd, o);
    e.upper = sequence(ws, item.j, o.h2 / qd, o);
    report.all_lower_pass = report.all_lower_pass && e.lower.passes;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      for (const SequenceReport* seq : {&e.lower, &e.upper}) {
        std::ostringstream label;
        label << describe(ThresholdSpec::homogeneous(e.q, seq->c)) << " alpha=" << o.alpha_schedule[i];
        report.rows.push_back(
            {report.rows.size(), e.q, e.id, label.str(), seq->values[i], "projected_gradient", o.solver.seed});
      }
    }
    report.entries.push_back(std::move(e));
  }
  for (auto& e : report.entries) {
    e.flagged = !e.upper.passes && report.all_lower_pass;
    if (!e.flagged || e.upper.values.empty()) continue;
    const auto peak = std::max_element(e.upper.values.begin(), e.upper.values.end());
    e.peak_value = *peak;
    const StepGraphon& w = ws[static_cast<std::size_t>(peak - e.upper.values.begin())];
    const auto& j = std::find_if(o.menu.begin(), o.menu.end(), [&](const MenuEntry& m) { return m.id == e.id; })->j;
    const ProfileConstraint constraint =
        ProfileConstraint::from_threshold(ThresholdSpec::homogeneous(e.q, e.upper.c));
    if (o.oracle_resolution > 0 &&
        grid_oracle_cost(w, e.q, o.oracle_resolution, constraint.kind) <= o.oracle_budget) {
      const double m = static_cast<double>(o.oracle_resolution);
      try {
        e.peak_oracle = grid_oracle(w, j, constraint, o.oracle_resolution, o.oracle_budget, 0.5 / m).value;
      } catch (const DomainError&) {
      }
      try {
        e.peak_oracle_exact = grid_oracle(w, j, constraint, o.oracle_resolution, o.oracle_budget).value;
      } catch (const DomainError&) {
      }
    }
    e.certified = e.peak_oracle && e.peak_value > o.gap_threshold && e.peak_value >= *e.peak_oracle - o.oracle_margin;
  }
  return report;
}

}  // namespace gselab
