// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "../cli_support.hpp"
#include "gselab/bounds.hpp"
#include "gselab/cut_metrics.hpp"
#include "gselab/experiments.hpp"
#include "gselab/graph_energy.hpp"
#include "gselab/graphon.hpp"
#include "gselab/graphon_energy.hpp"
#include "gselab/rng.hpp"

using namespace gselab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

InteractionMatrix random_j(Rng& rng, std::size_t q) {
  Matrix m(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i; j < q; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
  return InteractionMatrix(m);
}

Matrix random_symmetric(Rng& rng, std::size_t k, double lo, double hi) {
  Matrix b(k, k);
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t t = s; t < k; ++t) b(s, t) = b(t, s) = rng.uniform(lo, hi);
  return b;
}

// Block measures in multiples of 1/12 so that grid profiles can meet rational targets.
StepGraphon random_graphon(Rng& rng, std::size_t k) {
  std::vector<int> units(k, 1);
  for (std::size_t u = k; u < 12; ++u) ++units[rng.below(k)];
  std::vector<double> lambda(k);
  for (std::size_t t = 0; t < k; ++t) lambda[t] = units[t] / 12.0;
  return StepGraphon(lambda, random_symmetric(rng, k, -1.0, 1.0));
}

StepGraphon uniform_graphon(Rng& rng, std::size_t k) {
  return StepGraphon(std::vector<double>(k, 1.0 / static_cast<double>(k)), random_symmetric(rng, k, -1.0, 1.0));
}

ProbabilityDistribution random_distribution(Rng& rng, std::size_t q) {
  std::vector<double> a(q);
  rng.dirichlet(a);
  return ProbabilityDistribution::normalized(a);
}

WeightedGraph random_simple_graph(Rng& rng, std::size_t n, double p) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.uniform() < p) edges.emplace_back(u, v);
  return WeightedGraph::simple(n, edges);
}

// One representative per isomorphism class of simple graphs on n nodes.
std::vector<WeightedGraph> nonisomorphic_graphs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<std::array<std::size_t, 6>> perms;
  std::array<std::size_t, 6> p{0, 1, 2, 3, 4, 5};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n)));
  std::vector<std::vector<std::size_t>> index(n, std::vector<std::size_t>(n));
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    index[pairs[e].first][pairs[e].second] = e;
    index[pairs[e].second][pairs[e].first] = e;
  }
  std::set<std::uint32_t> seen;
  std::vector<WeightedGraph> out;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::uint32_t canon = mask;
    for (const auto& perm : perms) {
      std::uint32_t image = 0;
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask >> e & 1u) image |= 1u << index[perm[pairs[e].first]][perm[pairs[e].second]];
      canon = std::min(canon, image);
    }
    if (!seen.insert(canon).second) continue;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (mask >> e & 1u) edges.push_back(pairs[e]);
    out.push_back(WeightedGraph::simple(n, edges));
  }
  return out;
}

Outcome graph_oracle_equivalence() {
  std::vector<WeightedGraph> graphs;
  for (std::size_t n = 1; n <= 6; ++n) {
    auto level = nonisomorphic_graphs(n);
    graphs.insert(graphs.end(), level.begin(), level.end());
  }
  std::size_t runs = 0;
  std::size_t mismatches = 0;
  for (std::size_t q : {2, 3}) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      Rng rng(derive_seed(100 + q, i));
      const InteractionMatrix j = random_j(rng, q);
      for (std::size_t g = 0; g < graphs.size(); ++g) {
        const double exact = gse_exhaustive(graphs[g], j).value;
        const double local = gse_local_search(graphs[g], j, 50, derive_seed(i, g)).value;
        ++runs;
        mismatches += local != exact;
      }
    }
  }
  return {mismatches == 0 && graphs.size() == 208,
          fmt("%zu graphs, %zu runs, %zu mismatches", graphs.size(), runs, mismatches)};
}

Outcome graphon_oracle_equivalence() {
  const char* names[] = {"none", "equality", "lower", "upper"};
  std::size_t failures = 0;
  double worst_upper = -1e300;
  double worst_lower = 1e300;
  for (int kind = 0; kind < 4; ++kind) {
    for (std::uint64_t inst = 0; inst < 50; ++inst) {
      Rng rng(derive_seed(1000 + kind, inst));
      const std::size_t k = 1 + rng.below(3);
      const std::size_t q = 1 + rng.below(3);
      const StepGraphon w = random_graphon(rng, k);
      const InteractionMatrix j = random_j(rng, q);
      // Targets come from a random grid profile, so each constraint has grid points.
      std::vector<double> a(q, 0.0);
      for (std::size_t t = 0; t < k; ++t) {
        std::vector<int> counts(q, 0);
        for (int u = 0; u < 20; ++u) ++counts[rng.below(q)];
        for (std::size_t i = 0; i < q; ++i) a[i] += w.measure(t) * counts[i] / 20.0;
      }
      ProfileConstraint c = ProfileConstraint::none();
      if (kind == 1) c = ProfileConstraint::equality(ProbabilityDistribution::normalized(a));
      if (kind == 2) {
        std::vector<double> x(q);
        for (std::size_t i = 0; i < q; ++i) x[i] = std::max(0.0, a[i] - rng.uniform(0.0, 0.1));
        c = ProfileConstraint::lower(x);
      }
      if (kind == 3) {
        std::vector<double> x(q);
        for (std::size_t i = 0; i < q; ++i) x[i] = a[i] + rng.uniform(0.0, 0.1);
        c = ProfileConstraint::upper(x);
      }
      const double solver = minimize_energy(w, j, c).value;
      const double coarse = grid_oracle(w, j, c, 20).value;
      const double fine = grid_oracle(w, j, c, 60, 2e9, 1.0 / 120.0).value;
      worst_upper = std::max(worst_upper, solver - coarse);
      worst_lower = std::min(worst_lower, solver - fine);
      if (!(solver <= coarse + 1e-9 && solver >= fine - 0.02)) {
        ++failures;
        std::printf("  graphon oracle mismatch: %s instance %llu\n", names[kind],
                    static_cast<unsigned long long>(inst));
      }
    }
  }
  return {failures == 0, fmt("200 instances, %zu failures, max(solver - oracle20) %.2e, min(solver - oracle60) %.2e",
                             failures, worst_upper, worst_lower)};
}

Outcome blow_up_identity() {
  std::size_t violations = 0;
  std::size_t certified = 0;
  double worst = 0.0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    Rng rng(derive_seed(3000, inst));
    const std::size_t k = 1 + rng.below(3);
    const std::size_t q = 1 + rng.below(3);
    const std::size_t q_prime = q + rng.below(7 - q);
    std::vector<double> units(q, 1.0);
    for (std::size_t u = q; u < q_prime; ++u) units[rng.below(q)] += 1.0;
    std::vector<double> a(q);
    for (std::size_t i = 0; i < q; ++i) a[i] = units[i] / static_cast<double>(q_prime);
    CheckOptions options;
    options.oracle_resolution = 12;
    const BoundReport r =
        check_blow_up(uniform_graphon(rng, k), random_j(rng, q), ProbabilityDistribution(a), q_prime, options);
    worst = std::max(worst, r.lhs);
    violations += !r.pass;
    certified += r.oracle_certified;
  }
  return {violations == 0, fmt("20 instances, %zu violations, %zu oracle-certified, max |E_a - E_b| %.2e", violations,
                               certified, worst)};
}

Outcome continuity_bound() {
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t inst = 0; inst < 200; ++inst) {
    Rng rng(derive_seed(4000, inst));
    const std::size_t k = 1 + rng.below(3);
    const std::size_t q = 2 + rng.below(2);
    const StepGraphon w = random_graphon(rng, k);
    const InteractionMatrix j = random_j(rng, q);
    const ProbabilityDistribution a = random_distribution(rng, q);
    // Half of the pairs are close, where the bound is tight.
    ProbabilityDistribution b = random_distribution(rng, q);
    if (inst % 2 == 0) {
      std::vector<double> mix(q);
      for (std::size_t i = 0; i < q; ++i) mix[i] = 0.9 * a[i] + 0.1 * b[i];
      b = ProbabilityDistribution::normalized(mix);
    }
    const BoundReport r = check_continuity(w, j, a, b);
    violations += !r.pass;
    if (r.rhs > 0.0) worst_ratio = std::max(worst_ratio, r.lhs / r.rhs);
  }
  return {violations == 0, fmt("200 instances, %zu violations, max lhs/rhs %.3f", violations, worst_ratio)};
}

Outcome graph_graphon_bound() {
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    Rng rng(derive_seed(5000, inst));
    const std::size_t n = 2 + rng.below(9);
    const std::size_t q = 2 + rng.below(2);
    std::vector<double> alpha(n);
    for (double& x : alpha) x = rng.uniform(0.5, 2.0);
    Matrix beta = random_symmetric(rng, n, 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) beta(i, i) = 0.0;
    const WeightedGraph g = inst % 2 == 0 ? WeightedGraph(alpha, beta) : random_simple_graph(rng, n, 0.5);
    const InteractionMatrix j = random_j(rng, q);
    const ProbabilityDistribution a = random_distribution(rng, q);
    const double c = rng.uniform(0.0, 1.0 / static_cast<double>(q));
    const BoundReport r = check_graph_graphon(g, j, a, c);
    violations += !r.pass;
    for (const auto& part : r.parts) worst_ratio = std::max(worst_ratio, part.lhs / part.rhs);
  }
  return {violations == 0, fmt("100 instances (MGSE and LTGSE), %zu violations, max lhs/rhs %.4f", violations,
                               worst_ratio)};
}

Outcome lipschitz_bound() {
  std::size_t heuristic_violations = 0;
  std::size_t exact_violations = 0;
  double worst = 0.0;
  for (std::uint64_t inst = 0; inst < 60; ++inst) {
    Rng rng(derive_seed(6000, inst));
    const bool exact = inst >= 50;
    const std::size_t q = 2 + rng.below(2);
    std::vector<double> lu(2);
    std::vector<double> lw(2);
    rng.dirichlet(lu);
    rng.dirichlet(lw);
    const Matrix b = random_symmetric(rng, 2, 0.0, 1.0);
    Matrix b2 = b;
    for (double& v : b2.data()) v = std::clamp(v + rng.uniform(-0.2, 0.2), 0.0, 1.0);
    b2(1, 0) = b2(0, 1);
    const StepGraphon u(lu, b);
    const StepGraphon w(exact ? lu : lw, b2);
    CheckOptions options;
    options.distance.mode = exact ? CutDistanceMode::exact : CutDistanceMode::alternating;
    options.distance.seed = inst;
    const BoundReport r = check_cut_lipschitz(u, w, random_j(rng, q), random_distribution(rng, q), options);
    (exact ? exact_violations : heuristic_violations) += !r.pass;
    if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
  }
  return {heuristic_violations + exact_violations == 0,
          fmt("50 heuristic-delta instances with %zu violations, 10 exact-delta instances with %zu violations, max "
              "lhs/rhs %.3f",
              heuristic_violations, exact_violations, worst)};
}

Outcome endpoints_and_monotonicity() {
  std::size_t graph_violations = 0;
  for (std::uint64_t inst = 0; inst < 30; ++inst) {
    Rng rng(derive_seed(7000, inst));
    const std::size_t n = 3 + rng.below(5);
    const std::size_t q = 2 + rng.below(2);
    const WeightedGraph g = random_simple_graph(rng, n, 0.6);
    const InteractionMatrix j = random_j(rng, q);
    const double gse = gse_exhaustive(g, j).value;
    const double uniform = mgse(g, j, ProbabilityDistribution::uniform(q)).value;
    double prev = -1e300;
    for (int step = 0; step <= 4; ++step) {
      const double e = ltgse_graph(g, j, ThresholdSpec::homogeneous(q, step / (4.0 * q))).value;
      if (step == 0 && std::abs(e - gse) > 1e-6) ++graph_violations;
      if (step == 4 && std::abs(e - uniform) > 1e-6) ++graph_violations;
      if (e < prev - 1e-12) ++graph_violations;
      prev = e;
    }
  }
  std::size_t graphon_violations = 0;
  std::size_t certified = 0;
  CheckOptions options;
  options.oracle_resolution = 12;
  for (std::uint64_t inst = 0; inst < 30; ++inst) {
    Rng rng(derive_seed(7100, inst));
    const std::size_t k = 1 + rng.below(3);
    const std::size_t q = 2 + rng.below(2);
    const StepGraphon w = uniform_graphon(rng, k);
    const InteractionMatrix j = random_j(rng, q);
    const EnergyEstimate free = estimate_energy(w, j, ProfileConstraint::none(), options);
    const EnergyEstimate uniform =
        estimate_energy(w, j, ProfileConstraint::equality(ProbabilityDistribution::uniform(q)), options);
    bool all_oracle = free.oracle.has_value() && uniform.oracle.has_value();
    double prev = -1e300;
    for (int step = 0; step <= 4; ++step) {
      const auto spec = ThresholdSpec::homogeneous(q, step / (4.0 * q));
      const EnergyEstimate e = estimate_energy(w, j, ProfileConstraint::from_threshold(spec), options);
      all_oracle = all_oracle && e.oracle.has_value();
      if (step == 0 && std::abs(e.value - free.value) > 1e-6) ++graphon_violations;
      if (step == 4 && std::abs(e.value - uniform.value) > 1e-6) ++graphon_violations;
      if (e.value < prev - 1e-6) ++graphon_violations;
      prev = e.value;
    }
    certified += all_oracle;
  }
  return {graph_violations + graphon_violations == 0 && certified == 30,
          fmt("30 graphs with %zu violations, 30 graphons with %zu violations (%zu oracle-certified)", graph_violations,
              graphon_violations, certified)};
}

Outcome single_entry_closed_form() {
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    Rng rng(derive_seed(8000, inst));
    const double alpha = rng.uniform(0.2, 0.8);
    const double beta1 = rng.uniform(0.5, 2.0);
    const double beta2 = rng.uniform(0.5, 2.0);
    const double c = rng.uniform(0.02, 0.95) * std::min(alpha, 1.0 - alpha);
    const double value = minimize_energy(block_diagonal(alpha, beta1, beta2), InteractionMatrix::single_entry(2),
                                         ProfileConstraint::lower({c, c}))
                             .value;
    const double closed = beta1 * beta2 * c * c / (beta1 + beta2);
    worst = std::max(worst, std::abs(value - closed));
    violations += std::abs(value - closed) > 1e-5;
  }
  return {violations == 0, fmt("10 parameter sets, %zu violations, max error %.2e", violations, worst)};
}

Outcome mincut_family() {
  std::size_t violations = 0;
  for (std::size_t q = 2; q <= 6; ++q)
    violations += std::abs(minimize_energy(constant_graphon(1.0), InteractionMatrix::mincut(q),
                                           ProfileConstraint::none())
                               .value) > 1e-9;
  const double h = 0.2;
  std::size_t menu_violations = 0;
  for (double alpha : {0.5, 0.7}) {
    for (std::size_t q = 2; q <= 6; ++q) {
      const InteractionMatrix j = InteractionMatrix::mincut(q);
      const double base = minimize_energy(constant_graphon(1.0), j, ProfileConstraint::none()).value;
      const auto spec = ThresholdSpec::homogeneous(q, h / static_cast<double>(q));
      const double e = minimize_energy(block_diagonal(alpha, 1.0 / (alpha * alpha), 0.0), j,
                                       ProfileConstraint::from_threshold(spec))
                           .value;
      menu_violations += std::abs(e - base) > 1e-5;
    }
  }
  HierarchyOptions options;
  options.alpha_schedule = {0.5, 0.7, 0.5, 0.7, 0.5, 0.7};
  options.menu = mincut_menu({2, 3, 4, 5, 6});
  const HierarchyReport report = hierarchy_experiment(options);
  double lower_gap = 0.0;
  for (const auto& entry : report.entries) lower_gap = std::max(lower_gap, entry.lower.gaps.front());
  std::string flagged;
  bool certified = false;
  for (const auto& entry : report.entries) {
    if (!entry.flagged) continue;
    certified = certified || (entry.certified && entry.upper.persistent_gap > 0.0);
    flagged += fmt(" %s(gap %.4f, oracle40 %.4f, exact-grid %.4f)", entry.id.c_str(), entry.upper.persistent_gap,
                   entry.peak_oracle.value_or(NAN), entry.peak_oracle_exact.value_or(NAN));
  }
  const bool pass = violations == 0 && menu_violations == 0 && report.all_lower_pass && lower_gap < 1e-6 && certified;
  return {pass, fmt("mincut E(I) violations %zu, menu violations %zu/10, max h1 gap %.1e, flagged:%s", violations,
                    menu_violations, lower_gap, flagged.empty() ? " none" : flagged.c_str())};
}

Outcome jk_limit() {
  const std::array<std::array<double, 3>, 5> sets{{{0.5, 1.0, 1.0}, {0.3, 1.0, 2.0}, {0.4, 2.0, 0.5}, {0.6, 1.5, 1.0},
                                                    {0.7, 1.0, 3.0}}};
  std::size_t violations = 0;
  double worst = 0.0;
  for (const auto& [alpha, beta1, beta2] : sets) {
    BlockdiagOptions options;
    options.alpha = alpha;
    options.beta1 = beta1;
    options.beta2 = beta2;
    options.n_schedule = {};
    const BlockdiagReport r = blockdiag_report(options);
    const double rel = r.jk.limit ? std::abs(*r.jk.limit - r.jk_target) / r.jk_target : INFINITY;
    worst = std::max(worst, rel);
    violations += !(rel <= 0.02) || !r.jk_valid;
  }
  return {violations == 0, fmt("5 parameter sets, %zu violations, max relative error %.2e", violations, worst)};
}

Outcome testability() {
  GraphSolveOptions solver;
  solver.mode = GraphMode::heuristic;
  solver.restarts = 50;
  const ParameterSpec spec{InteractionMatrix::maxcut(2), ThresholdSpec::homogeneous(2, 0.0), solver, "maxcut2"};
  std::size_t mismatches = 0;
  for (std::size_t n : {31, 60}) {
    const auto report = testability_experiment(WeightedGraph::complete(n), spec, {5, 10, 20}, 10, 0.1, n);
    for (const auto& level : report.levels) {
      const double kk = static_cast<double>(level.k);
      const double closed = -2.0 * std::floor(kk * kk / 4.0) / (kk * kk);
      for (const auto& s : level.samples) mismatches += !s.value || *s.value != closed;
    }
  }
  Rng rng(2024);
  const WeightedGraph g = random_simple_graph(rng, 200, 0.5);
  const auto report = testability_experiment(g, spec, {20, 40, 60}, 100, 0.1, 7);
  const double exceed = report.levels.back().exceedance;
  const bool pass = mismatches == 0 && !report.partial && exceed <= 0.2;
  return {pass, fmt("complete-graph mismatches %zu; half-density n=200 exceedance at k=20,40,60: %.2f %.2f %.2f",
                    mismatches, report.levels[0].exceedance, report.levels[1].exceedance, exceed)};
}

Outcome cli_reproducibility() {
  std::size_t differing = 0;
  std::size_t errors = 0;
  const auto invocations = gselab::testing::reproducibility_invocations();
  for (const auto& args : invocations) {
    const auto a = gselab::testing::run(args);
    const auto b = gselab::testing::run(args);
    if (a.code != 0 || b.code != 0) {
      ++errors;
      continue;
    }
    differing += gselab::testing::strip_timing(a.json()).dump() != gselab::testing::strip_timing(b.json()).dump();
  }
  return {differing == 0 && errors == 0,
          fmt("%zu invocations, %zu differing, %zu failed", invocations.size(), differing, errors)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"graph oracle equivalence", graph_oracle_equivalence},
      {"graphon oracle equivalence", graphon_oracle_equivalence},
      {"blow-up identity", blow_up_identity},
      {"continuity bound", continuity_bound},
      {"graph-graphon bound", graph_graphon_bound},
      {"cut-distance Lipschitz bound", lipschitz_bound},
      {"threshold endpoints and monotonicity", endpoints_and_monotonicity},
      {"single-entry closed form", single_entry_closed_form},
      {"mincut family and hierarchy", mincut_family},
      {"J_k limit", jk_limit},
      {"testability experiment", testability},
      {"CLI reproducibility", cli_reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
