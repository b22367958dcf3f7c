#include "gselab/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gselab/errors.hpp"

namespace gselab {
namespace {

using nlohmann::json;

struct Line {
  std::size_t number;
  std::string text;
};

// Non-blank, non-comment lines with their 1-based numbers.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++number;
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] != '#') out.push_back({number, line});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

bool parse_number(std::string_view s, double& out) {
  const auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    double num = 0.0;
    double den = 0.0;
    if (!parse_number(s.substr(0, slash), num) || !parse_number(s.substr(slash + 1), den) || den == 0.0) return false;
    out = num / den;
    return true;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

double real_token(const std::string& token, std::size_t line) {
  double v = 0.0;
  if (!parse_number(token, v)) throw ParseError(line, "expected a real number, got '" + token + "'");
  return v;
}

std::size_t count_token(const std::string& token, std::size_t line, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, std::string("expected ") + what + ", got '" + token + "'");
  return v;
}

double json_real(const json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    double out = 0.0;
    if (parse_number(v.get<std::string>(), out)) return out;
  }
  throw ParseError(1, std::string("field '") + field + "' must contain numbers");
}

json real(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json reals(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(real(x));
  return out;
}

json terms(const std::vector<std::pair<std::string, double>>& items) {
  json out = json::object();
  for (const auto& [name, value] : items) out[name] = real(value);
  return out;
}

json optional_real(const std::optional<double>& x) { return x ? real(*x) : json(nullptr); }

json quantiles_json(const Quantiles& q) {
  return {{"min", real(q.min)},       {"q25", real(q.q25)}, {"median", real(q.median)}, {"q75", real(q.q75)},
          {"q90", real(q.q90)},       {"max", real(q.max)}, {"mean", real(q.mean)}};
}

json limit_json(const LimitEstimate& e) {
  return {{"k", reals(e.ks)},
          {"values", reals(e.values)},
          {"limit", optional_real(e.limit)},
          {"residual", real(e.residual)},
          {"diverging", e.diverging}};
}

}  // namespace

std::string format_real(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw ValidationError("cannot format number");
  return std::string(buf.data(), ptr);
}

WeightedGraph parse_graph(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "missing node count");
  const auto head = tokens(lines.front().text);
  if (head.size() != 1) throw ParseError(lines.front().number, "first line must hold the node count");
  const std::size_t n = count_token(head.front(), lines.front().number, "a node count");
  if (n == 0) throw ValidationError("graph must have at least one node");

  std::vector<double> alpha(n, 1.0);
  Matrix beta(n, n);
  Matrix seen(n, n);
  std::size_t i = 1;
  if (i < lines.size() && lines[i].text.find("w:") != std::string::npos) {
    auto t = tokens(lines[i].text);
    if (t.empty() || t.front().rfind("w:", 0) != 0) throw ParseError(lines[i].number, "malformed weight line");
    if (t.front() == "w:") {
      t.erase(t.begin());
    } else {
      t.front() = t.front().substr(2);
    }
    if (t.size() != n) throw ParseError(lines[i].number, "weight line must list " + std::to_string(n) + " weights");
    for (std::size_t v = 0; v < n; ++v) alpha[v] = real_token(t[v], lines[i].number);
    ++i;
  }
  for (; i < lines.size(); ++i) {
    const auto t = tokens(lines[i].text);
    const std::size_t ln = lines[i].number;
    if (t.size() != 3) throw ParseError(ln, "edge line must be 'u v beta'");
    const std::size_t u = count_token(t[0], ln, "a node index");
    const std::size_t v = count_token(t[1], ln, "a node index");
    if (u < 1 || u > n || v < 1 || v > n) throw ParseError(ln, "node index out of range 1.." + std::to_string(n));
    if (u == v) throw ParseError(ln, "self-loops are not allowed");
    const double b = real_token(t[2], ln);
    if (seen(u - 1, v - 1) != 0.0 && beta(u - 1, v - 1) != b)
      throw ConsistencyError("line " + std::to_string(ln) + ": edge " + std::to_string(u) + "-" + std::to_string(v) +
                             " listed with conflicting weights");
    beta(u - 1, v - 1) = beta(v - 1, u - 1) = b;
    seen(u - 1, v - 1) = seen(v - 1, u - 1) = 1.0;
  }
  return WeightedGraph(std::move(alpha), std::move(beta));
}

std::string serialize_graph(const WeightedGraph& g) {
  std::ostringstream out;
  out << g.n() << "\n";
  bool unit = true;
  for (double a : g.node_weights()) unit = unit && a == 1.0;
  if (!unit) {
    out << "w:";
    for (double a : g.node_weights()) out << " " << format_real(a);
    out << "\n";
  }
  for (std::size_t u = 0; u < g.n(); ++u)
    for (std::size_t v = u + 1; v < g.n(); ++v)
      if (g.edge_weight(u, v) != 0.0) out << u + 1 << " " << v + 1 << " " << format_real(g.edge_weight(u, v)) << "\n";
  return out.str();
}

InteractionMatrix parse_interaction(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "missing state count");
  const auto head = tokens(lines.front().text);
  if (head.size() != 1) throw ParseError(lines.front().number, "first line must hold q");
  const std::size_t q = count_token(head.front(), lines.front().number, "q");
  if (q == 0) throw ValidationError("interaction matrix needs q >= 1");
  if (lines.size() != q + 1)
    throw ParseError(lines.back().number, "expected " + std::to_string(q) + " matrix rows, got " +
                                              std::to_string(lines.size() - 1));
  Matrix j(q, q);
  for (std::size_t r = 0; r < q; ++r) {
    const auto t = tokens(lines[r + 1].text);
    if (t.size() != q) throw ParseError(lines[r + 1].number, "row must have " + std::to_string(q) + " entries");
    for (std::size_t c = 0; c < q; ++c) j(r, c) = real_token(t[c], lines[r + 1].number);
  }
  return InteractionMatrix(std::move(j));
}

std::string serialize_interaction(const InteractionMatrix& j) {
  std::ostringstream out;
  out << j.q() << "\n";
  for (std::size_t r = 0; r < j.q(); ++r) {
    for (std::size_t c = 0; c < j.q(); ++c) out << (c ? " " : "") << format_real(j(r, c));
    out << "\n";
  }
  return out.str();
}

std::vector<double> parse_reals(std::string_view text) {
  std::string normalized(text);
  for (char& ch : normalized)
    if (ch == ',') ch = ' ';
  std::vector<double> out;
  for (const auto& line : content_lines(normalized))
    for (const auto& t : tokens(line.text)) out.push_back(real_token(t, line.number));
  return out;
}

StepGraphon parse_graphon(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("invalid graphon JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("lambda") || !doc.contains("B"))
    throw ParseError(1, "graphon document needs fields 'lambda' and 'B'");
  const json& lambda = doc["lambda"];
  const json& b = doc["B"];
  if (!lambda.is_array() || !b.is_array()) throw ParseError(1, "'lambda' and 'B' must be arrays");
  std::vector<double> measures;
  for (const auto& v : lambda) measures.push_back(json_real(v, "lambda"));
  const std::size_t k = measures.size();
  if (b.size() != k) throw ValidationError("'B' must have one row per block");
  Matrix values(k, k);
  for (std::size_t s = 0; s < k; ++s) {
    if (!b[s].is_array() || b[s].size() != k) throw ValidationError("'B' must be a k x k matrix");
    for (std::size_t t = 0; t < k; ++t) values(s, t) = json_real(b[s][t], "B");
  }
  return StepGraphon(std::move(measures), std::move(values));
}

std::string serialize_graphon(const StepGraphon& w) {
  json doc = {{"lambda", reals(w.lambda())}, {"B", to_json(w.values())}};
  return doc.dump() + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

nlohmann::json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(reals(m.row(r)));
  return out;
}

nlohmann::json to_json(const EnergyResult& r) {
  json certificate = nullptr;
  if (const auto* phi = r.configuration()) {
    json states = json::array();
    for (int s : phi->states()) states.push_back(s + 1);
    certificate = {{"type", "configuration"}, {"states", states}};
  } else if (const auto* p = r.profile()) {
    certificate = {{"type", "profile"}, {"profile", to_json(p->profile.values())}, {"distribution", reals(p->distribution)}};
  }
  return {{"schema", kSchema},
          {"value", real(r.value)},
          {"certificate", certificate},
          {"method", to_string(r.method)},
          {"stats",
           {{"restarts", r.stats.restarts},
            {"iterations", r.stats.iterations},
            {"seed", r.stats.seed},
            {"tolerance", real(r.stats.tolerance)},
            {"wall_time_ms", real(r.stats.wall_time_ms)}}}};
}

nlohmann::json to_json(const CutNormResult& r) {
  json rows = json::array();
  json cols = json::array();
  for (auto s : r.rows) rows.push_back(s + 1);
  for (auto t : r.cols) cols.push_back(t + 1);
  return {{"schema", kSchema},
          {"value", real(r.value)},
          {"certificate", {{"type", "blocks"}, {"S", rows}, {"T", cols}}},
          {"method", r.exact ? "exhaustive" : "coordinate_ascent"},
          {"exact", r.exact}};
}

nlohmann::json to_json(const CutDistanceResult& r) {
  json out = {{"schema", kSchema},
              {"value", real(r.value)},
              {"certificate", {{"type", "coupling"}, {"coupling", to_json(r.coupling)}}},
              {"method", to_string(r.mode)},
              {"upper_bound", true},
              {"inner_exact", r.inner_exact},
              {"stats", {{"iterations", r.iterations}}}};
  if (!r.warning.empty()) out["warning"] = r.warning;
  return out;
}

nlohmann::json to_json(const BoundReport& r) {
  json out = {{"schema", kSchema},
              {"bound", r.bound},
              {"lhs", real(r.lhs)},
              {"rhs", real(r.rhs)},
              {"tolerance", real(r.tolerance)},
              {"pass", r.pass},
              {"precision", r.oracle_certified ? "oracle-certified" : "checked at solver precision"},
              {"terms", terms(r.terms)}};
  if (!r.parts.empty()) {
    json parts = json::array();
    for (const auto& p : r.parts) {
      json part = to_json(p);
      part.erase("schema");
      parts.push_back(part);
    }
    out["parts"] = parts;
  }
  return out;
}

nlohmann::json to_json(const TestabilityReport& r) {
  json levels = json::array();
  for (const auto& level : r.levels) {
    json samples = json::array();
    for (const auto& s : level.samples)
      samples.push_back({{"index", s.index},
                         {"seed", s.seed},
                         {"value", optional_real(s.value)},
                         {"deviation", optional_real(s.deviation)},
                         {"method", s.method}});
    levels.push_back({{"k", level.k},
                      {"exceedance", real(level.exceedance)},
                      {"deviation", level.deviation ? quantiles_json(*level.deviation) : json(nullptr)},
                      {"partial", level.partial},
                      {"samples", samples}});
  }
  return {{"schema", kSchema},
          {"experiment", "testability"},
          {"label", "empirical evidence"},
          {"n", r.n},
          {"m", r.m},
          {"epsilon", real(r.epsilon)},
          {"seed", r.seed},
          {"value", real(r.full_value)},
          {"method", r.full_method},
          {"partial", r.partial},
          {"levels", levels}};
}

nlohmann::json to_json(const BlockdiagReport& r) {
  const auto& o = r.options;
  json scans = json::array();
  for (const auto& s : r.scans)
    scans.push_back({{"n", s.n},
                     {"x", reals(s.x)},
                     {"direct", limit_json(s.direct)},
                     {"swapped", limit_json(s.swapped)},
                     {"best_limit", optional_real(s.best_limit)},
                     {"diverging", !s.best_limit.has_value()}});
  return {{"schema", kSchema},
          {"experiment", "blockdiag"},
          {"inputs",
           {{"alpha", real(o.alpha)},
            {"beta1", real(o.beta1)},
            {"beta2", real(o.beta2)},
            {"h", real(o.h)},
            {"q0", o.q0},
            {"k_schedule", reals(o.k_schedule)},
            {"n_schedule", o.n_schedule},
            {"seed", o.solver.seed},
            {"restarts", o.solver.restarts}}},
          {"maxcut", {{"value", real(r.maxcut_value)}, {"closed_form", real(r.maxcut_closed_form)}}},
          {"single_entry",
           {{"value", real(r.single_entry_value)},
            {"closed_form", real(r.single_entry_closed_form)},
            {"valid", r.single_entry_valid}}},
          {"penalized", {{"scan", limit_json(r.jk)}, {"target", real(r.jk_target)}, {"valid", r.jk_valid}}},
          {"general_thresholds", scans}};
}

nlohmann::json to_json(const HierarchyReport& r) {
  const auto& o = r.options;
  auto sequence = [](const SequenceReport& s) {
    return json{{"c", real(s.c)},
                {"values", reals(s.values)},
                {"gaps", reals(s.gaps)},
                {"persistent_gap", real(s.persistent_gap)},
                {"passes", s.passes}};
  };
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"id", e.id},
                       {"q", e.q},
                       {"lower", sequence(e.lower)},
                       {"upper", sequence(e.upper)},
                       {"flagged", e.flagged},
                       {"peak_value", real(e.peak_value)},
                       {"peak_oracle", optional_real(e.peak_oracle)},
                       {"peak_oracle_exact", optional_real(e.peak_oracle_exact)},
                       {"certified", e.certified}});
  json menu = json::array();
  for (const auto& m : o.menu) menu.push_back(m.id);
  return {{"schema", kSchema},
          {"experiment", "hierarchy"},
          {"inputs",
           {{"alpha_schedule", reals(o.alpha_schedule)},
            {"h1", real(o.h1)},
            {"h2", real(o.h2)},
            {"menu", menu},
            {"gap_threshold", real(o.gap_threshold)},
            {"oracle_resolution", o.oracle_resolution},
            {"seed", o.solver.seed},
            {"restarts", o.solver.restarts}}},
          {"all_lower_pass", r.all_lower_pass},
          {"entries", entries}};
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "index,q,J-id,threshold,value,method,seed\n";
  for (const auto& r : rows)
    out << r.index << "," << r.q << "," << quote(r.j_id) << "," << quote(r.threshold) << "," << format_real(r.value)
        << "," << quote(r.method) << "," << r.seed << "\n";
  return out.str();
}

}  // namespace gselab
