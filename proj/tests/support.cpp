#include "support.hpp"

#include <json.hpp>

namespace ftile::testing {

std::string fixture_path(const std::string &name) { return std::string(FTILE_FIXTURE_DIR) + "/" + name + ".json"; }

IFSystem fixture(const std::string &name) { return load_config_file(fixture_path(name)); }

const std::vector<std::string> &fixture_names() {
  static const std::vector<std::string> names = {
      "golden_bc",     "fig2_hexagonal", "fig3_sevenfold",  "fig5_top",       "fig5_bottom",    "fig6",
      "fig7_robinson", "fig7_kite",      "fig7_doublekite", "fig7_fourmaps", "fig9_pentagonal"};
  return names;
}

IFSystem power_system(const std::vector<long> &poly, const std::vector<long> &lambda,
                      const std::vector<std::pair<std::vector<long>, std::vector<long>>> &digits) {
  nlohmann::json doc{{"mode", "power"}, {"poly", poly}, {"lambda", lambda}};
  doc["digits"] = nlohmann::json::array();
  for (const auto &[s, v] : digits) {
    nlohmann::json d{{"v", v}};
    if (!s.empty()) d["s"] = s;
    doc["digits"].push_back(d);
  }
  return load_config(doc.dump(), "test");
}

IntVector ivec(const std::vector<long> &v) {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

IntMatrix imat(const std::vector<std::vector<long>> &rows) {
  IntMatrix m(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = rows[r][c];
  return m;
}

} // namespace ftile::testing
