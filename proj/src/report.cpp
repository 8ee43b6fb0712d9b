#include "ftile/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace ftile {

using nlohmann::json;

Analysis analyze(const IFSystem &sys, const AnalyzeOptions &options) {
  const auto t0 = std::chrono::steady_clock::now();
  Analysis a;
  a.pisot = pisot_classify(sys.field(), sys.minimal_poly());
  a.ft = run_ft(sys, options.ft);
  if (a.ft.status == FTStatus::FiniteType) {
    a.graph = reduce_to_proper(a.ft);
    a.overlap = detect_overlap(*a.graph);
    if (options.compute_types) {
      TypeOptions topt = options.types;
      try {
        a.types = neighborhood_types(*a.graph, a.ft, *a.overlap, topt);
        a.type_universe = topt.overlap_universe ? "overlap" : "all";
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::TypeExplosion) throw;
        a.type_error = e.what();
        if (options.universe_fallback && !topt.overlap_universe) {
          topt.overlap_universe = true;
          try {
            a.types = neighborhood_types(*a.graph, a.ft, *a.overlap, topt);
            a.type_universe = "overlap";
          } catch (const Error &e2) {
            if (e2.kind() != ErrorKind::TypeExplosion) throw;
            a.type_error = e2.what();
          }
        }
      }
      if (a.types) a.dim = dimension(sys, *a.overlap, *a.types);
    }
  }
  a.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return a;
}

namespace {

double round_to(double x, double scale) { return std::round(x * scale) / scale; }

} // namespace

json vector_json(const IntVector &v) {
  json out = json::array();
  for (const auto &x : v.entries()) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
      out.push_back(x.convert_to<std::int64_t>());
    else
      out.push_back(x.str());
  }
  return out;
}

json matrix_json(const IntMatrix &m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    IntVector row(m.dim());
    for (std::size_t c = 0; c < m.dim(); ++c) row[c] = m(r, c);
    out.push_back(vector_json(row));
  }
  return out;
}

json report_json(const IFSystem &sys, const Analysis &a, bool timing) {
  json r;
  r["label"] = sys.label();
  r["m"] = sys.size();
  r["dim"] = sys.dim();
  r["lambda"] = {sys.field().lambda().real(), sys.field().lambda().imag()};
  r["modulus"] = sys.field().modulus();
  r["pisot_class"] = std::string(to_string(a.pisot.kind));
  r["pisot_source"] = a.pisot.from_characteristic_polynomial ? "characteristic_polynomial" : "minimal_polynomial";
  r["root_moduli"] = a.pisot.root_moduli;
  r["R"] = sys.R();
  r["C"] = sys.C();
  r["ft_status"] = std::string(to_string(a.ft.status));
  r["levels"] = a.ft.levels;
  r["candidate_count"] = a.ft.size();
  const bool finite = a.graph.has_value();
  r["proper_count"] = finite ? json(a.graph->proper_count()) : json(nullptr);
  r["neighbor_count"] = finite ? json(a.graph->proper_count() - 1) : json(nullptr);
  r["overlap_count"] = finite ? json(a.overlap->overlap_count()) : json(nullptr);
  r["osc"] = finite ? json(a.overlap->osc) : json(nullptr);
  r["type_universe"] = a.type_universe;
  r["type_count"] = a.types ? json(a.types->size()) : json(nullptr);
  r["alpha"] = round_to(std::log(static_cast<double>(sys.size())) / std::log(sys.field().modulus()), 1e6);
  r["sigma"] = a.dim ? json(a.dim->sigma) : json(nullptr);
  r["beta"] = a.dim ? json(round_to(a.dim->beta, 1e6)) : json(nullptr);
  if (!a.type_error.empty()) r["type_error"] = a.type_error;
  r["warnings"] = sys.warnings();
  json stats;
  stats["examined"] = a.ft.stats.examined;
  stats["pruned"] = a.ft.stats.pruned;
  stats["duplicates"] = a.ft.stats.duplicates;
  stats["rotation_group_order"] = a.ft.stats.rotation_group_order;
  stats["bigint_fallback"] = a.ft.stats.bigint_fallback;
  r["ft_stats"] = stats;
  if (timing) r["runtime_ms"] = round_to(a.runtime_ms, 1e3);
  return r;
}

std::vector<std::string> check_report(const json &report, const json &expected) {
  std::vector<std::string> problems;
  for (auto it = expected.begin(); it != expected.end(); ++it) {
    const auto found = report.find(it.key());
    if (found == report.end()) {
      problems.push_back(it.key() + ": missing from report");
      continue;
    }
    const bool both_float = it->is_number_float() || found->is_number_float();
    const bool ok = (it->is_number() && found->is_number() && both_float)
                        ? std::abs(it->get<double>() - found->get<double>()) <= 1e-6
                        : *it == *found;
    if (!ok) problems.push_back(it.key() + ": expected " + it->dump() + ", got " + found->dump());
  }
  return problems;
}

void write_graph_export(std::ostream &edges, std::ostream &vertices, const FTOutcome &ft, const NeighborGraph &g) {
  std::vector<std::string> keys;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const NeighborMap h = ft.candidate(g.candidate[v]);
    keys.push_back(hex(h.key()));
    vertices << keys.back() << '\t' << matrix_json(h.S).dump() << '\t' << vector_json(h.w).dump() << '\n';
  }
  const std::size_t m = g.edges.m;
  for (std::size_t v = 0; v < g.size(); ++v)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        const std::int32_t t = g.edges.at(v, j, k);
        if (t >= 0) edges << keys[v] << '\t' << j << '\t' << k << '\t' << keys[static_cast<std::size_t>(t)] << '\n';
      }
}

json error_json(const Error &e) {
  return json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

} // namespace ftile
