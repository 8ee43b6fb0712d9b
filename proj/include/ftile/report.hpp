#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "ftile/graph.hpp"

namespace ftile {

struct AnalyzeOptions {
  FTOptions ft;
  TypeOptions types;
  bool compute_types = true;
  bool universe_fallback = true; // retry with overlap-only types on TypeExplosion
};

struct Analysis {
  PisotClass pisot;
  FTOutcome ft;
  std::optional<NeighborGraph> graph;
  std::optional<OverlapInfo> overlap;
  std::optional<TypeGraph> types;
  std::optional<DimensionReport> dim;
  std::string type_universe = "none"; // "all", "overlap" or "none"
  std::string type_error;
  double runtime_ms = 0.0;
};

/// load -> run_ft -> reduce_to_proper -> detect_overlap -> neighborhood_types
/// -> dimension.
Analysis analyze(const IFSystem &sys, const AnalyzeOptions &options = {});

/// The analysis report. With timing = false the runtime fields are omitted so
/// reruns are byte-identical.
nlohmann::json report_json(const IFSystem &sys, const Analysis &a, bool timing = true);

/// Compares the fields present in `expected` against `report`; numbers match
/// within 1e-6. Returns a list of mismatch descriptions.
std::vector<std::string> check_report(const nlohmann::json &report, const nlohmann::json &expected);

/// Edge list "src_key TAB j TAB k TAB dst_key" and vertex table
/// "key TAB S TAB w" of the reduced neighbor graph, keys in hex.
void write_graph_export(std::ostream &edges, std::ostream &vertices, const FTOutcome &ft, const NeighborGraph &g);

nlohmann::json error_json(const Error &e);

/// Integers that do not fit in 64 bits are written as decimal strings.
nlohmann::json vector_json(const IntVector &v);
nlohmann::json matrix_json(const IntMatrix &m);

} // namespace ftile
