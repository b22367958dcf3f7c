#include "gselab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gselab/errors.hpp"
#include "gselab/graph_energy.hpp"

namespace gselab {
namespace {

constexpr double kRationalTolerance = 1e-12;

std::size_t units_of(double a, std::size_t q_prime) {
  const double scaled = a * static_cast<double>(q_prime);
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > kRationalTolerance * static_cast<double>(q_prime))
    throw DomainError("blow_up: distribution component " + std::to_string(a) + " is not a multiple of 1/" +
                      std::to_string(q_prime));
  return static_cast<std::size_t>(rounded);
}

}  // namespace

BlowUp blow_up(const ProbabilityDistribution& a, std::size_t q_prime, const InteractionMatrix& j) {
  if (q_prime == 0) throw DomainError("blow_up: q' must be positive");
  if (a.q() != j.q()) throw ValidationError("blow_up: distribution and interaction matrix disagree on q");
  BlowUp up{InteractionMatrix::zero(1), ProbabilityDistribution::uniform(q_prime), {}, a.q()};
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.q(); ++i) {
    const std::size_t units = units_of(a[i], q_prime);
    total += units;
    for (std::size_t u = 0; u < units; ++u) up.source_state.push_back(i);
  }
  if (total != q_prime) throw DomainError("blow_up: units do not add up to q'");
  Matrix entries(q_prime, q_prime);
  for (std::size_t u = 0; u < q_prime; ++u)
    for (std::size_t v = 0; v < q_prime; ++v) entries(u, v) = j(up.source_state[u], up.source_state[v]);
  up.j = InteractionMatrix(std::move(entries));
  return up;
}

FractionalProfile lift_profile(const BlowUp& up, const ProbabilityDistribution& a, const FractionalProfile& r) {
  if (r.q() != up.q || a.q() != up.q) throw ValidationError("lift_profile: q mismatch");
  const std::size_t q_prime = up.source_state.size();
  Matrix out(r.k(), q_prime);
  for (std::size_t t = 0; t < r.k(); ++t)
    for (std::size_t u = 0; u < q_prime; ++u) {
      const std::size_t i = up.source_state[u];
      out(t, u) = r(t, i) / (static_cast<double>(q_prime) * a[i]);
    }
  // Columns of erased states carry no mass when r induces a; renormalize
  // rows so stray round-off there does not leave the simplex.
  for (std::size_t t = 0; t < r.k(); ++t) {
    double s = 0.0;
    for (std::size_t u = 0; u < q_prime; ++u) s += out(t, u);
    if (s > 0.0)
      for (std::size_t u = 0; u < q_prime; ++u) out(t, u) /= s;
  }
  return FractionalProfile(std::move(out));
}

FractionalProfile project_profile(const BlowUp& up, const FractionalProfile& r) {
  if (r.q() != up.source_state.size()) throw ValidationError("project_profile: q' mismatch");
  Matrix out(r.k(), up.q);
  for (std::size_t t = 0; t < r.k(); ++t)
    for (std::size_t u = 0; u < r.q(); ++u) out(t, up.source_state[u]) += r(t, u);
  return FractionalProfile(std::move(out));
}

ProbabilityDistribution rationalize(const ProbabilityDistribution& a, std::size_t q_prime) {
  if (q_prime < a.q()) throw DomainError("rationalize requires q' >= q");
  const double qp = static_cast<double>(q_prime);
  std::vector<std::size_t> units(a.q(), 0);
  std::size_t used = 0;
  for (std::size_t i = 0; i + 1 < a.q(); ++i) {
    units[i] = static_cast<std::size_t>(std::floor(a[i] * qp + kRationalTolerance));
    used += units[i];
  }
  units.back() = q_prime - std::min(used, q_prime);
  std::vector<double> b(a.q());
  for (std::size_t i = 0; i < a.q(); ++i) b[i] = static_cast<double>(units[i]) / qp;
  return ProbabilityDistribution(std::move(b));
}

ThresholdSpec round_threshold(const ThresholdSpec& x, std::size_t q_prime) {
  if (!x.is_lower()) throw DomainError("round_threshold needs a lower threshold");
  const std::size_t q = x.q();
  if (q_prime < q) throw DomainError("round_threshold requires q' >= q");
  const double h = x.total();
  if (!(h > 0.0)) throw DomainError("round_threshold requires positive total threshold mass");
  const double qp = static_cast<double>(q_prime);
  std::vector<double> quota(q);
  std::vector<std::size_t> units(q);
  std::size_t used = 0;
  for (std::size_t i = 0; i < q; ++i) {
    quota[i] = x.bounds()[i] * qp / h;
    units[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(quota[i] + kRationalTolerance)));
    used += units[i];
  }
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  if (used < q_prime) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return quota[a] - static_cast<double>(units[a]) > quota[b] - static_cast<double>(units[b]);
    });
    for (std::size_t n = 0; used < q_prime; ++n, ++used) ++units[order[n % q]];
  }
  while (used > q_prime) {
    // Take a unit back from the most over-allocated component above the floor.
    std::size_t pick = q;
    for (std::size_t i = 0; i < q; ++i) {
      if (units[i] <= 1) continue;
      if (pick == q || static_cast<double>(units[i]) - quota[i] > static_cast<double>(units[pick]) - quota[pick])
        pick = i;
    }
    --units[pick];
    --used;
  }
  std::vector<double> out(q);
  for (std::size_t i = 0; i < q; ++i) out[i] = static_cast<double>(units[i]) * h / qp;
  return ThresholdSpec::general(std::move(out), ThresholdDirection::lower);
}

std::vector<double> interpolate_threshold(std::span<const double> a, double h1, double h2,
                                          InterpolationFormula formula) {
  if (a.empty()) throw ValidationError("interpolate_threshold: empty distribution");
  if (!(0.0 <= h1 && h1 < h2 && h2 <= 1.0)) throw DomainError("interpolate_threshold requires 0 <= h1 < h2 <= 1");
  const double q = static_cast<double>(a.size());
  const double floor_value = h1 / q;
  for (double v : a)
    if (v < floor_value - kRationalTolerance) throw DomainError("interpolate_threshold requires a_i >= h1/q");
  const double ratio = (h2 - h1) / (1.0 - h1);
  const double shift = formula == InterpolationFormula::corrected ? floor_value : h1;
  std::vector<double> x(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) x[i] = floor_value + (a[i] - shift) * ratio;
  return x;
}

double continuity_rhs(std::span<const double> a, std::span<const double> b, double w_inf, double j_inf) {
  return 2.0 * l1_distance(a, b) * w_inf * j_inf;
}

double graph_graphon_rhs(const WeightedGraph& g, std::size_t q, const InteractionMatrix& j) {
  const double qd = static_cast<double>(q);
  return 6.0 * qd * qd * qd * (g.max_node_weight() / g.total_node_weight()) * g.max_edge_weight() * j.inf_norm();
}

double cut_lipschitz_rhs(std::size_t q, const InteractionMatrix& j, double delta) {
  if (delta < 0.0) throw DomainError("cut distance must be nonnegative");
  const double qd = static_cast<double>(q);
  return qd * qd * j.inf_norm() * delta;
}

EnergyEstimate estimate_energy(const StepGraphon& w, const InteractionMatrix& j, const ProfileConstraint& constraint,
                               const CheckOptions& options) {
  EnergyEstimate e;
  const EnergyResult solved = minimize_energy(w, j, constraint, options.solver);
  e.solver = solved.value;
  e.value = solved.value;
  if (const auto* p = solved.profile()) e.certificate = *p;
  if (options.oracle_resolution > 0 &&
      grid_oracle_cost(w, j.q(), options.oracle_resolution, constraint.kind) <= options.oracle_budget) {
    try {
      const EnergyResult grid = grid_oracle(w, j, constraint, options.oracle_resolution, options.oracle_budget);
      e.oracle = grid.value;
      if (grid.value < e.value) {
        e.value = grid.value;
        if (const auto* p = grid.profile()) e.certificate = *p;
      }
    } catch (const DomainError&) {
      // No grid point satisfies the constraint exactly.
    }
  }
  return e;
}

namespace {

void add_estimate(BoundReport& report, const std::string& name, const EnergyEstimate& e) {
  report.terms.emplace_back(name, e.value);
  report.terms.emplace_back(name + ".solver", e.solver);
  if (e.oracle) report.terms.emplace_back(name + ".oracle", *e.oracle);
}

void finish(BoundReport& report) { report.pass = report.lhs <= report.rhs + report.tolerance; }

}  // namespace

BoundReport check_continuity(const StepGraphon& w, const InteractionMatrix& j, const ProbabilityDistribution& a,
                             const ProbabilityDistribution& b, const CheckOptions& options) {
  BoundReport report;
  report.bound = "continuity";
  const EnergyEstimate ea = estimate_energy(w, j, ProfileConstraint::equality(a), options);
  const EnergyEstimate eb = estimate_energy(w, j, ProfileConstraint::equality(b), options);
  add_estimate(report, "E_a", ea);
  add_estimate(report, "E_b", eb);
  report.lhs = std::abs(ea.value - eb.value);
  report.rhs = continuity_rhs(a.values(), b.values(), w.inf_norm(), j.inf_norm());
  report.tolerance = options.tolerance;
  report.oracle_certified = ea.oracle.has_value() && eb.oracle.has_value();
  finish(report);
  return report;
}

BoundReport check_graph_graphon(const WeightedGraph& g, const InteractionMatrix& j, const ProbabilityDistribution& a,
                                std::optional<double> c, const CheckOptions& options) {
  BoundReport report;
  report.bound = "graph-graphon";
  report.tolerance = options.tolerance;
  const double rhs = graph_graphon_rhs(g, j.q(), j);
  const StepGraphon w = graphon_from_graph(g);
  const bool exact_graph = options.graph.mode == GraphMode::exhaustive;

  BoundReport micro;
  micro.bound = "graph-graphon-mgse";
  micro.tolerance = options.tolerance;
  const EnergyResult graph_side = mgse(g, j, a, options.graph);
  const EnergyEstimate graphon_side = estimate_energy(w, j, ProfileConstraint::equality(a), options);
  micro.terms.emplace_back("graph", graph_side.value);
  add_estimate(micro, "graphon", graphon_side);
  micro.lhs = std::abs(graph_side.value - graphon_side.value);
  micro.rhs = rhs;
  micro.oracle_certified = exact_graph && graphon_side.oracle.has_value();
  finish(micro);
  report.parts.push_back(std::move(micro));

  if (c) {
    BoundReport threshold;
    threshold.bound = "graph-graphon-ltgse";
    threshold.tolerance = options.tolerance;
    const ThresholdSpec spec = ThresholdSpec::homogeneous(j.q(), *c);
    const EnergyResult graph_lt = ltgse_graph(g, j, spec, options.graph);
    const EnergyEstimate graphon_lt = estimate_energy(w, j, ProfileConstraint::from_threshold(spec), options);
    threshold.terms.emplace_back("c", *c);
    threshold.terms.emplace_back("graph", graph_lt.value);
    add_estimate(threshold, "graphon", graphon_lt);
    threshold.lhs = std::abs(graph_lt.value - graphon_lt.value);
    threshold.rhs = rhs;
    threshold.oracle_certified = exact_graph && graphon_lt.oracle.has_value();
    finish(threshold);
    report.parts.push_back(std::move(threshold));
  }

  report.rhs = rhs;
  report.pass = true;
  report.oracle_certified = true;
  for (const auto& part : report.parts) {
    report.lhs = std::max(report.lhs, part.lhs);
    report.pass = report.pass && part.pass;
    report.oracle_certified = report.oracle_certified && part.oracle_certified;
  }
  return report;
}

BoundReport check_cut_lipschitz(const StepGraphon& u, const StepGraphon& w, const InteractionMatrix& j,
                                const ProbabilityDistribution& a, const CheckOptions& options) {
  BoundReport report;
  report.bound = "cut-lipschitz";
  const CutDistanceResult delta = cut_distance_step(u, w, options.distance);
  const EnergyEstimate eu = estimate_energy(u, j, ProfileConstraint::equality(a), options);
  const EnergyEstimate ew = estimate_energy(w, j, ProfileConstraint::equality(a), options);
  report.terms.emplace_back("delta", delta.value);
  report.terms.emplace_back("delta.exact", delta.mode == CutDistanceMode::exact && delta.inner_exact ? 1.0 : 0.0);
  add_estimate(report, "E_U", eu);
  add_estimate(report, "E_W", ew);
  report.lhs = std::abs(eu.value - ew.value);
  report.rhs = cut_lipschitz_rhs(j.q(), j, delta.value);
  report.tolerance = options.tolerance;
  report.oracle_certified = eu.oracle.has_value() && ew.oracle.has_value();
  finish(report);
  return report;
}

BoundReport check_blow_up(const StepGraphon& w, const InteractionMatrix& j, const ProbabilityDistribution& a,
                          std::size_t q_prime, const CheckOptions& options) {
  BoundReport report;
  report.bound = "blow-up";
  const BlowUp up = blow_up(a, q_prime, j);
  EnergyEstimate ea = estimate_energy(w, j, ProfileConstraint::equality(a), options);
  EnergyEstimate eb = estimate_energy(w, up.j, ProfileConstraint::equality(up.b), options);
  // Each side's certificate maps to a feasible profile of the other side at
  // the same energy, so both sides can use the better of the two.
  double mapping_error = 0.0;
  if (ea.certificate) {
    const FractionalProfile lifted = lift_profile(up, a, ea.certificate->profile);
    const double v = energy_of_profile(w, up.j, lifted);
    mapping_error = std::max(mapping_error, l1_distance(lifted.induced_distribution(w.lambda()), up.b.values()));
    report.terms.emplace_back("E_b.lifted", v);
    if (v < eb.value) eb.value = v;
  }
  if (eb.certificate) {
    const FractionalProfile projected = project_profile(up, eb.certificate->profile);
    const double v = energy_of_profile(w, j, projected);
    mapping_error = std::max(mapping_error, l1_distance(projected.induced_distribution(w.lambda()), a.values()));
    report.terms.emplace_back("E_a.projected", v);
    if (v < ea.value) ea.value = v;
  }
  report.terms.emplace_back("mapping_error", mapping_error);
  add_estimate(report, "E_a", ea);
  add_estimate(report, "E_b", eb);
  report.lhs = std::abs(ea.value - eb.value);
  report.rhs = 0.0;
  report.tolerance = options.tolerance;
  report.oracle_certified = ea.oracle.has_value() && eb.oracle.has_value();
  finish(report);
  report.pass = report.pass && mapping_error <= 1e-8;
  return report;
}

}  // namespace gselab
