#include "gselab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "gselab/bounds.hpp"
#include "gselab/cut_metrics.hpp"
#include "gselab/errors.hpp"
#include "gselab/experiments.hpp"
#include "gselab/graph_energy.hpp"
#include "gselab/graphon_energy.hpp"
#include "gselab/io.hpp"

namespace gselab {
namespace {

using nlohmann::json;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> restarts;
  std::optional<double> tol;
  std::optional<double> budget;
};

struct ConstraintArgs {
  std::string a;
  std::optional<double> c;
  std::string x;
  bool upper = false;
};

void add_constraint_options(CLI::App* cmd, ConstraintArgs& args) {
  auto* a = cmd->add_option("--a", args.a, "Target distribution (microcanonical)");
  auto* c = cmd->add_option("--c", args.c, "Homogeneous threshold c");
  auto* x = cmd->add_option("--x", args.x, "General threshold vector");
  a->excludes(c)->excludes(x);
  c->excludes(x);
  cmd->add_flag("--upper", args.upper, "Treat --c/--x as upper thresholds");
}

ThresholdDirection direction(const ConstraintArgs& args) {
  return args.upper ? ThresholdDirection::upper : ThresholdDirection::lower;
}

std::optional<ThresholdSpec> threshold_of(const ConstraintArgs& args, std::size_t q) {
  if (args.c) return ThresholdSpec::homogeneous(q, *args.c, direction(args));
  if (!args.x.empty()) {
    auto x = parse_reals(args.x);
    if (x.size() != q) throw ValidationError("--x must have q = " + std::to_string(q) + " components");
    return ThresholdSpec::general(std::move(x), direction(args));
  }
  return std::nullopt;
}

ProbabilityDistribution distribution_of(const std::string& text, std::size_t q, const char* flag) {
  auto a = parse_reals(text);
  if (a.size() != q) throw ValidationError(std::string(flag) + " must have q = " + std::to_string(q) + " components");
  return ProbabilityDistribution(std::move(a));
}

ProfileConstraint constraint_of(const ConstraintArgs& args, std::size_t q) {
  if (!args.a.empty()) {
    if (args.upper) throw ValidationError("--upper applies to --c or --x only");
    return ProfileConstraint::equality(distribution_of(args.a, q, "--a"));
  }
  if (auto spec = threshold_of(args, q)) return ProfileConstraint::from_threshold(*spec);
  if (args.upper) throw ValidationError("--upper needs --c or --x");
  return ProfileConstraint::none();
}

std::vector<std::size_t> counts_of(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  for (double v : parse_reals(text)) {
    if (!(v >= 0.0) || v != std::floor(v)) throw ValidationError(std::string(flag) + " must list nonnegative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

WeightedGraph load_graph(const std::string& path) { return parse_graph(read_text_file(path)); }
InteractionMatrix load_interaction(const std::string& path) { return parse_interaction(read_text_file(path)); }
StepGraphon load_graphon(const std::string& path) { return parse_graphon(read_text_file(path)); }

struct GraphonSource {
  std::string graphon;
  std::string graph;
};

void add_graphon_source(CLI::App* cmd, GraphonSource& src) {
  auto* w = cmd->add_option("--graphon", src.graphon, "Step graphon JSON document");
  auto* g = cmd->add_option("--graph", src.graph, "Graph edge list, embedded as W_G");
  w->excludes(g);
}

StepGraphon load_source(const GraphonSource& src) {
  if (!src.graphon.empty()) return load_graphon(src.graphon);
  if (!src.graph.empty()) return graphon_from_graph(load_graph(src.graph));
  throw ValidationError("one of --graphon or --graph is required");
}

MinimizeOptions minimize_options(const Globals& g) {
  MinimizeOptions o;
  if (g.seed) o.seed = *g.seed;
  if (g.restarts) o.restarts = *g.restarts;
  if (g.tol) o.tol = *g.tol;
  return o;
}

GraphSolveOptions graph_options(const Globals& g, const std::string& mode) {
  GraphSolveOptions o;
  o.mode = mode == "heuristic" ? GraphMode::heuristic : GraphMode::exhaustive;
  if (g.seed) o.seed = *g.seed;
  if (g.restarts) o.restarts = *g.restarts;
  if (g.budget) o.budget = *g.budget;
  return o;
}

CutDistanceOptions distance_options(const Globals& g, const std::string& mode) {
  CutDistanceOptions o;
  o.mode = mode == "exact" ? CutDistanceMode::exact : CutDistanceMode::alternating;
  if (g.seed) o.seed = *g.seed;
  if (g.budget) o.budget = *g.budget;
  return o;
}

void write_csv(const std::string& path, const std::vector<ReportRow>& rows) {
  if (path.empty()) return;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write " + path);
  file << to_csv(rows);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground state energies of graphs and step graphons", "gse-lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed");
  app.add_option("--restarts", globals.restarts, "Number of solver restarts");
  app.add_option("--tol", globals.tol, "Solver stationarity tolerance");
  app.add_option("--budget", globals.budget, "Enumeration budget");

  std::function<json()> action;
  std::string csv_path;

  // energy gse|mgse|ltgse
  auto* energy = app.add_subcommand("energy", "Ground state energies of a graph");
  std::string energy_kind;
  std::string graph_path;
  std::string j_path;
  std::string mode = "exhaustive";
  ConstraintArgs energy_args;
  energy->add_option("kind", energy_kind, "gse, mgse or ltgse")
      ->required()
      ->check(CLI::IsMember({"gse", "mgse", "ltgse"}));
  energy->add_option("--graph", graph_path, "Graph edge list")->required();
  energy->add_option("--J", j_path, "Interaction matrix")->required();
  energy->add_option("--mode", mode, "exhaustive or heuristic")->check(CLI::IsMember({"exhaustive", "heuristic"}));
  add_constraint_options(energy, energy_args);
  energy->callback([&] {
    action = [&]() -> json {
      const WeightedGraph g = load_graph(graph_path);
      const InteractionMatrix j = load_interaction(j_path);
      const GraphSolveOptions options = graph_options(globals, mode);
      if (energy_kind == "gse") {
        if (!energy_args.a.empty() || energy_args.c || !energy_args.x.empty())
          throw ValidationError("gse takes no distribution or threshold");
        if (options.mode == GraphMode::heuristic) return to_json(gse_local_search(g, j, options.restarts, options.seed));
        return to_json(gse_exhaustive(g, j, options.budget));
      }
      if (energy_kind == "mgse") {
        if (energy_args.a.empty()) throw ValidationError("mgse needs --a");
        return to_json(mgse(g, j, distribution_of(energy_args.a, j.q(), "--a"), options));
      }
      const auto spec = threshold_of(energy_args, j.q());
      if (!spec) throw ValidationError("ltgse needs --c or --x");
      return to_json(ltgse_graph(g, j, *spec, options));
    };
  });

  // graphon-energy
  auto* genergy = app.add_subcommand("graphon-energy", "Constrained ground state energy of a step graphon");
  GraphonSource genergy_src;
  ConstraintArgs genergy_args;
  std::optional<std::size_t> genergy_oracle;
  add_graphon_source(genergy, genergy_src);
  genergy->add_option("--J", j_path, "Interaction matrix")->required();
  add_constraint_options(genergy, genergy_args);
  genergy->add_option("--oracle", genergy_oracle, "Also run the grid oracle at resolution m");
  genergy->callback([&] {
    action = [&]() -> json {
      const StepGraphon w = load_source(genergy_src);
      const InteractionMatrix j = load_interaction(j_path);
      const ProfileConstraint c = constraint_of(genergy_args, j.q());
      json doc = to_json(minimize_energy(w, j, c, minimize_options(globals)));
      doc["constraint"] = to_string(c.kind);
      if (genergy_oracle) {
        json oracle = to_json(grid_oracle(w, j, c, *genergy_oracle, globals.budget.value_or(kDefaultOracleBudget)));
        oracle.erase("schema");
        doc["oracle"] = oracle;
      }
      return doc;
    };
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Grid brute-force minimum over profiles with entries in (1/m)Z");
  GraphonSource oracle_src;
  ConstraintArgs oracle_args;
  std::size_t oracle_m = 10;
  std::optional<double> oracle_slack;
  add_graphon_source(oracle, oracle_src);
  oracle->add_option("--J", j_path, "Interaction matrix")->required();
  add_constraint_options(oracle, oracle_args);
  oracle->add_option("--m", oracle_m, "Grid resolution")->check(CLI::PositiveNumber);
  oracle->add_option("--slack", oracle_slack, "Constraint slack (default exact)");
  oracle->callback([&] {
    action = [&]() -> json {
      const StepGraphon w = load_source(oracle_src);
      const InteractionMatrix j = load_interaction(j_path);
      const ProfileConstraint c = constraint_of(oracle_args, j.q());
      json doc = to_json(grid_oracle(w, j, c, oracle_m, globals.budget.value_or(kDefaultOracleBudget),
                                     oracle_slack.value_or(1e-9)));
      doc["constraint"] = to_string(c.kind);
      doc["resolution"] = oracle_m;
      return doc;
    };
  });

  // cutnorm
  auto* cutnorm = app.add_subcommand("cutnorm", "Cut norm of a step graphon");
  GraphonSource cutnorm_src;
  add_graphon_source(cutnorm, cutnorm_src);
  cutnorm->callback([&] {
    action = [&]() -> json {
      return to_json(cut_norm_step(load_source(cutnorm_src), kMaxExactCutNormBlocks, globals.seed.value_or(0)));
    };
  });

  // cutdist
  auto* cutdist = app.add_subcommand("cutdist", "Coupling cut distance (upper bound)");
  std::string left_path;
  std::string right_path;
  std::string dist_mode = "alt";
  bool dist_graphs = false;
  cutdist->add_option("--left", left_path, "Left graphon (or graph with --graphs)")->required();
  cutdist->add_option("--right", right_path, "Right graphon (or graph with --graphs)")->required();
  cutdist->add_option("--mode", dist_mode, "exact or alt")->check(CLI::IsMember({"exact", "alt"}));
  cutdist->add_flag("--graphs", dist_graphs, "Read --left/--right as graph edge lists");
  cutdist->callback([&] {
    action = [&]() -> json {
      const CutDistanceOptions options = distance_options(globals, dist_mode);
      if (dist_graphs) return to_json(cut_distance_graphs(load_graph(left_path), load_graph(right_path), options));
      return to_json(cut_distance_step(load_graphon(left_path), load_graphon(right_path), options));
    };
  });

  // blowup
  auto* blowup = app.add_subcommand("blowup", "Blow J up to q' states with uniform distribution");
  std::string blowup_a;
  std::size_t q_prime = 0;
  blowup->add_option("--a", blowup_a, "q'-rational distribution")->required();
  blowup->add_option("--qprime", q_prime, "Number of new states q'")->required();
  blowup->add_option("--J", j_path, "Interaction matrix")->required();
  blowup->callback([&] {
    action = [&]() -> json {
      const InteractionMatrix j = load_interaction(j_path);
      const ProbabilityDistribution a = distribution_of(blowup_a, j.q(), "--a");
      const BlowUp up = blow_up(a, q_prime, j);
      json source = json::array();
      for (auto s : up.source_state) source.push_back(s + 1);
      return {{"schema", kSchema},
              {"J", to_json(up.j.entries())},
              {"b", up.b.values()},
              {"source_state", source},
              {"qprime", q_prime}};
    };
  });

  // transform rationalize|round|interpolate
  auto* transform = app.add_subcommand("transform", "Distribution and threshold transforms");
  std::string transform_kind;
  std::string transform_list;
  std::size_t transform_qprime = 0;
  double h1 = 0.0;
  double h2 = 0.0;
  bool printed = false;
  transform->add_option("kind", transform_kind, "rationalize, round or interpolate")
      ->required()
      ->check(CLI::IsMember({"rationalize", "round", "interpolate"}));
  transform->add_option("--a,--x", transform_list, "Distribution (rationalize, interpolate) or threshold (round)")
      ->required();
  transform->add_option("--qprime", transform_qprime, "Denominator q'");
  transform->add_option("--h1", h1, "Lower threshold mass");
  transform->add_option("--h2", h2, "Upper threshold mass");
  transform->add_flag("--printed", printed, "Also evaluate the printed interpolation formula");
  transform->callback([&] {
    action = [&]() -> json {
      const auto v = parse_reals(transform_list);
      json doc = {{"schema", kSchema}, {"transform", transform_kind}, {"input", v}};
      if (transform_kind == "rationalize") {
        const ProbabilityDistribution a(v);
        const auto b = rationalize(a, transform_qprime);
        doc["value"] = b.values();
        doc["l1"] = l1_distance(a.values(), b.values());
        doc["bound"] = 2.0 * static_cast<double>(a.q()) / static_cast<double>(transform_qprime);
      } else if (transform_kind == "round") {
        const auto spec = ThresholdSpec::general(v);
        const auto out = round_threshold(spec, transform_qprime);
        doc["value"] = out.bounds();
        doc["l1"] = l1_distance(v, out.bounds());
        doc["bound"] = 2.0 * spec.total() * static_cast<double>(v.size()) / static_cast<double>(transform_qprime);
      } else {
        const auto x = interpolate_threshold(v, h1, h2);
        doc["value"] = x;
        doc["sum"] = std::accumulate(x.begin(), x.end(), 0.0);
        if (printed) {
          const auto p = interpolate_threshold(v, h1, h2, InterpolationFormula::printed);
          const double sum = std::accumulate(p.begin(), p.end(), 0.0);
          doc["printed"] = {{"value", p}, {"sum", sum}, {"sum_error", sum - h2}};
        }
      }
      return doc;
    };
  });

  // bounds continuity|graphgraphon|lipschitz
  auto* bounds = app.add_subcommand("bounds", "Check a quantitative bound on one instance");
  bounds->require_subcommand(1);
  CheckOptions check;
  std::optional<std::size_t> check_oracle;
  auto setup_check = [&] {
    check.solver = minimize_options(globals);
    if (check_oracle) check.oracle_resolution = *check_oracle;
    if (globals.budget) check.oracle_budget = *globals.budget;
  };

  auto* continuity = bounds->add_subcommand("continuity", "|E_a - E_b| <= 2|a-b|_1 |W| |J|");
  GraphonSource cont_src;
  std::string cont_a;
  std::string cont_b;
  add_graphon_source(continuity, cont_src);
  continuity->add_option("--J", j_path, "Interaction matrix")->required();
  continuity->add_option("--a", cont_a, "First distribution")->required();
  continuity->add_option("--b", cont_b, "Second distribution")->required();
  continuity->add_option("--oracle", check_oracle, "Grid oracle resolution (0 disables)");
  continuity->callback([&] {
    action = [&]() -> json {
      setup_check();
      const InteractionMatrix j = load_interaction(j_path);
      return to_json(check_continuity(load_source(cont_src), j, distribution_of(cont_a, j.q(), "--a"),
                                      distribution_of(cont_b, j.q(), "--b"), check));
    };
  });

  auto* gg = bounds->add_subcommand("graphgraphon", "|MGSE(G) - E(W_G)| <= 6 q^3 (a_max/a_G) b_max |J|");
  std::string gg_graph;
  std::string gg_a;
  std::optional<double> gg_c;
  std::string gg_mode = "exhaustive";
  gg->add_option("--graph", gg_graph, "Graph edge list")->required();
  gg->add_option("--J", j_path, "Interaction matrix")->required();
  gg->add_option("--a", gg_a, "Distribution")->required();
  gg->add_option("--c", gg_c, "Also check the lower threshold c");
  gg->add_option("--mode", gg_mode, "exhaustive or heuristic")->check(CLI::IsMember({"exhaustive", "heuristic"}));
  gg->add_option("--oracle", check_oracle, "Grid oracle resolution (0 disables)");
  gg->callback([&] {
    action = [&]() -> json {
      setup_check();
      check.graph = graph_options(globals, gg_mode);
      const InteractionMatrix j = load_interaction(j_path);
      return to_json(check_graph_graphon(load_graph(gg_graph), j, distribution_of(gg_a, j.q(), "--a"), gg_c, check));
    };
  });

  auto* lip = bounds->add_subcommand("lipschitz", "|E_a(U) - E_a(W)| <= q^2 |J| delta(U,W)");
  std::string lip_a;
  std::string lip_mode = "alt";
  lip->add_option("--left", left_path, "Left graphon")->required();
  lip->add_option("--right", right_path, "Right graphon")->required();
  lip->add_option("--J", j_path, "Interaction matrix")->required();
  lip->add_option("--a", lip_a, "Distribution")->required();
  lip->add_option("--mode", lip_mode, "exact or alt")->check(CLI::IsMember({"exact", "alt"}));
  lip->add_option("--oracle", check_oracle, "Grid oracle resolution (0 disables)");
  lip->callback([&] {
    action = [&]() -> json {
      setup_check();
      check.distance = distance_options(globals, lip_mode);
      const InteractionMatrix j = load_interaction(j_path);
      return to_json(check_cut_lipschitz(load_graphon(left_path), load_graphon(right_path), j,
                                         distribution_of(lip_a, j.q(), "--a"), check));
    };
  });

  auto* bu = bounds->add_subcommand("blowup", "E_a(W,J) = E_b(W,J') for the blow-up of (a, J)");
  GraphonSource bu_src;
  std::string bu_a;
  std::size_t bu_qprime = 0;
  add_graphon_source(bu, bu_src);
  bu->add_option("--J", j_path, "Interaction matrix")->required();
  bu->add_option("--a", bu_a, "q'-rational distribution")->required();
  bu->add_option("--qprime", bu_qprime, "Number of new states q'")->required();
  bu->add_option("--oracle", check_oracle, "Grid oracle resolution (0 disables)");
  bu->callback([&] {
    action = [&]() -> json {
      setup_check();
      const InteractionMatrix j = load_interaction(j_path);
      return to_json(
          check_blow_up(load_source(bu_src), j, distribution_of(bu_a, j.q(), "--a"), bu_qprime, check));
    };
  });

  // sample
  auto* sample = app.add_subcommand("sample", "Random induced subgraph");
  std::size_t sample_k = 0;
  sample->add_option("--graph", graph_path, "Graph edge list")->required();
  sample->add_option("--k", sample_k, "Number of nodes")->required();
  sample->callback([&] {
    action = [&]() -> json {
      const WeightedGraph g = sample_induced(load_graph(graph_path), sample_k, globals.seed.value_or(0));
      return {{"schema", kSchema}, {"n", g.n()}, {"graph", serialize_graph(g)}, {"seed", globals.seed.value_or(0)}};
    };
  });

  // test
  auto* test = app.add_subcommand("test", "Empirical testability experiment");
  ConstraintArgs test_args;
  std::string test_k;
  std::size_t test_m = 10;
  double epsilon = 0.1;
  std::string test_mode = "heuristic";
  test->add_option("--graph", graph_path, "Graph edge list")->required();
  test->add_option("--J", j_path, "Interaction matrix")->required();
  auto* test_c = test->add_option("--c", test_args.c, "Homogeneous threshold c (default 0)");
  test->add_option("--x", test_args.x, "General threshold vector")->excludes(test_c);
  test->add_flag("--upper", test_args.upper, "Upper thresholds");
  test->add_option("--k", test_k, "Sample sizes")->required();
  test->add_option("--m", test_m, "Samples per size");
  test->add_option("--epsilon", epsilon, "Deviation threshold");
  test->add_option("--mode", test_mode, "exhaustive or heuristic")->check(CLI::IsMember({"exhaustive", "heuristic"}));
  test->add_option("--csv", csv_path, "Write per-sample rows as CSV");
  test->callback([&] {
    action = [&]() -> json {
      const WeightedGraph g = load_graph(graph_path);
      const InteractionMatrix j = load_interaction(j_path);
      if (!test_args.c && test_args.x.empty()) test_args.c = 0.0;
      ParameterSpec spec{j, *threshold_of(test_args, j.q()), graph_options(globals, test_mode), j_path};
      const auto report =
          testability_experiment(g, spec, counts_of(test_k, "--k"), test_m, epsilon, globals.seed.value_or(0));
      write_csv(csv_path, report.rows);
      return to_json(report);
    };
  });

  // experiment hierarchy|blockdiag
  auto* experiment = app.add_subcommand("experiment", "Counterexample experiments");
  experiment->require_subcommand(1);
  auto* hierarchy = experiment->add_subcommand("hierarchy", "Threshold hierarchy on W(alpha, 1/alpha^2, 0)");
  std::string alphas = "0.5,0.7,0.5,0.7,0.5,0.7";
  std::string q_menu = "2,3,4,5,6";
  std::vector<std::string> j_files;
  HierarchyOptions hopts;
  hierarchy->add_option("--alphas", alphas, "Alpha schedule");
  hierarchy->add_option("--h1", hopts.h1, "Lower threshold mass");
  hierarchy->add_option("--h2", hopts.h2, "Upper threshold mass");
  hierarchy->add_option("--q", q_menu, "Mincut sizes in the menu");
  hierarchy->add_option("--J", j_files, "Extra interaction matrices for the menu");
  hierarchy->add_option("--gap", hopts.gap_threshold, "Gap threshold");
  hierarchy->add_option("--oracle", hopts.oracle_resolution, "Grid resolution for flagged values (0 disables)");
  hierarchy->add_option("--csv", csv_path, "Write sequence values as CSV");
  hierarchy->callback([&] {
    action = [&]() -> json {
      hopts.alpha_schedule = parse_reals(alphas);
      hopts.menu = mincut_menu(counts_of(q_menu, "--q"));
      for (const auto& f : j_files) hopts.menu.push_back({f, load_interaction(f)});
      hopts.solver = minimize_options(globals);
      if (globals.budget) hopts.oracle_budget = *globals.budget;
      const auto report = hierarchy_experiment(hopts);
      write_csv(csv_path, report.rows);
      return to_json(report);
    };
  });

  auto* blockdiag = experiment->add_subcommand("blockdiag", "Threshold energies of W(alpha, beta1, beta2)");
  BlockdiagOptions bopts;
  std::string k_schedule = "16,32,64,128,256";
  std::string n_schedule = "1,2,3,4,6,8";
  blockdiag->add_option("--alpha", bopts.alpha, "Block measure");
  blockdiag->add_option("--beta1", bopts.beta1, "First block value");
  blockdiag->add_option("--beta2", bopts.beta2, "Second block value");
  blockdiag->add_option("--mass", bopts.h, "Total threshold mass h");
  blockdiag->add_option("--q0", bopts.q0, "States for the single-entry matrix");
  blockdiag->add_option("--k", k_schedule, "Penalty schedule for J_k");
  blockdiag->add_option("--n", n_schedule, "Schedule for general thresholds");
  blockdiag->add_option("--csv", csv_path, "Write values as CSV");
  blockdiag->callback([&] {
    action = [&]() -> json {
      bopts.k_schedule = parse_reals(k_schedule);
      bopts.n_schedule = counts_of(n_schedule, "--n");
      bopts.solver = minimize_options(globals);
      const auto report = blockdiag_report(bopts);
      write_csv(csv_path, report.rows);
      return to_json(report);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (!action) throw std::logic_error("no action selected");
    out << action().dump(2) << "\n";
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CouplingError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace gselab
