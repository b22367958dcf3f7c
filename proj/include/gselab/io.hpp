#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gselab/bounds.hpp"
#include "gselab/core.hpp"
#include "gselab/cut_metrics.hpp"
#include "gselab/experiments.hpp"
#include "gselab/graphon.hpp"

namespace gselab {

inline constexpr const char* kSchema = "gse-lab/1";

/// Edge-list document: first line n; optional "w: a_1 ... a_n"; then "u v beta"
/// lines with 1-based u != v. Blank lines and lines starting with '#' are skipped.
WeightedGraph parse_graph(std::string_view text);
std::string serialize_graph(const WeightedGraph& g);

/// First line q, then q whitespace-separated rows.
InteractionMatrix parse_interaction(std::string_view text);
std::string serialize_interaction(const InteractionMatrix& j);

/// Reals separated by whitespace or commas; "p/q" fractions are accepted.
std::vector<double> parse_reals(std::string_view text);

/// JSON document {"lambda": [...], "B": [[...]]}.
StepGraphon parse_graphon(std::string_view text);
std::string serialize_graphon(const StepGraphon& w);

/// Shortest decimal string that reads back to the same double.
std::string format_real(double x);

std::string read_text_file(const std::filesystem::path& path);

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const EnergyResult& r);
nlohmann::json to_json(const CutNormResult& r);
nlohmann::json to_json(const CutDistanceResult& r);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const TestabilityReport& r);
nlohmann::json to_json(const BlockdiagReport& r);
nlohmann::json to_json(const HierarchyReport& r);

/// Header (index, q, J-id, threshold, value, method, seed) followed by one line per row.
std::string to_csv(const std::vector<ReportRow>& rows);

}  // namespace gselab
