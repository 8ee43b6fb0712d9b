#include "ftile/search.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace ftile {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

} // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ trial));
}

std::int64_t uniform_int(std::mt19937_64 &rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1u;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % span + 1u) % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % span);
}

SearchRunner::SearchRunner(SearchSpec spec) : spec_(std::move(spec)) {
  if (spec_.coord_bound < 1) throw Error(ErrorKind::ConfigError, "coordinate bound must be at least 1");
  if (spec_.trials < 1) throw Error(ErrorKind::ConfigError, "trials must be at least 1");
  if (spec_.m < 2) throw Error(ErrorKind::ConfigError, "a search needs at least two maps");
  if (!spec_.base.is_object() || !spec_.base.contains("mode"))
    throw Error(ErrorKind::ConfigError, "search base must be a configuration object");
  mode_ = spec_.base["mode"].get<std::string>();

  // Load the field once with two placeholder digits to obtain its matrices.
  json probe = spec_.base;
  const bool power = mode_ == "power";
  if (!power && mode_ != "raw") throw Error(ErrorKind::ConfigError, "mode: expected \"power\" or \"raw\"");
  dim_ = power ? spec_.base.at("poly").size() - 1 : spec_.base.at("dim").get<std::size_t>();
  json zero = json::array(), unit = json::array();
  for (std::size_t i = 0; i < dim_; ++i) {
    zero.push_back(0);
    unit.push_back(i == 0 ? 1 : 0);
  }
  probe["digits"] = json::array({json{{"v", zero}}, json{{"v", unit}}});
  const IFSystem field_sys = load_config(probe.dump());
  const FieldContext &field = field_sys.field();

  std::vector<IntMatrix> gens;
  auto to_matrix = [&](const json &g) {
    json p = probe;
    p["digits"][1] = power ? json{{"s", g}, {"v", unit}} : json{{"S", g}, {"v", unit}};
    return load_config(p.dump()).digits()[1].S;
  };
  for (const auto &g : spec_.generators) gens.push_back(to_matrix(g));
  if (spec_.negation) gens.push_back(-IntMatrix::identity(dim_));

  auto serialize = [&](const IntMatrix &S) {
    return power ? vector_json(S * field.one()) : matrix_json(S);
  };
  std::vector<IntMatrix> elements{IntMatrix::identity(dim_)};
  std::set<std::string> seen{canonical_key(elements[0], IntVector(dim_))};
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (const auto &g : gens) {
      IntMatrix p = elements[i] * g;
      if (seen.insert(canonical_key(p, IntVector(dim_))).second) {
        if (elements.size() > 100000) throw Error(ErrorKind::NotRootOfUnity, "rotation group is too large");
        elements.push_back(std::move(p));
      }
    }
  for (const auto &e : elements) rotations_.push_back(serialize(e));
}

json SearchRunner::sample(std::uint64_t trial) const {
  auto rng = trial_rng(spec_.seed, trial);
  const bool power = mode_ == "power";
  json digits = json::array();
  std::set<std::string> drawn;
  json zero = json::array();
  for (std::size_t i = 0; i < dim_; ++i) zero.push_back(0);
  digits.push_back(json{{"v", zero}});
  drawn.insert(json{{"r", rotations_[0]}, {"v", zero}}.dump());
  std::size_t attempts = 0;
  while (digits.size() < spec_.m) {
    if (++attempts > 1000 * spec_.m)
      throw Error(ErrorKind::DegenerateSystem, "cannot draw enough distinct digits");
    const auto r = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(rotations_.size()) - 1));
    json v = json::array();
    for (std::size_t i = 0; i < dim_; ++i) v.push_back(uniform_int(rng, -spec_.coord_bound, spec_.coord_bound));
    if (!drawn.insert(json{{"r", rotations_[r]}, {"v", v}}.dump()).second) continue;
    json d;
    if (r != 0) d[power ? "s" : "S"] = rotations_[r];
    d["v"] = v;
    digits.push_back(std::move(d));
  }
  json cfg = spec_.base;
  cfg["digits"] = digits;
  cfg["label"] = "search-" + std::to_string(spec_.seed) + "-" + std::to_string(trial);
  return cfg;
}

json SearchRunner::run_trial(std::uint64_t trial) const {
  const auto t0 = std::chrono::steady_clock::now();
  json rec;
  rec["seed"] = spec_.seed;
  rec["trial"] = trial;
  const json cfg = sample(trial);
  rec["digits"] = cfg["digits"];
  try {
    const IFSystem sys = load_config(cfg.dump());
    AnalyzeOptions opt;
    opt.ft.budget = std::max(spec_.budget, sys.size() * sys.size());
    opt.ft.max_level = spec_.max_level;
    opt.ft.threads = 1;
    opt.compute_types = spec_.compute_beta;
    opt.types.cap = 200000;
    const Analysis a = analyze(sys, opt);
    rec["ft_status"] = std::string(to_string(a.ft.status));
    rec["candidates"] = a.ft.size();
    rec["proper_count"] = a.graph ? json(a.graph->proper_count()) : json(nullptr);
    rec["overlap_count"] = a.overlap ? json(a.overlap->overlap_count()) : json(nullptr);
    rec["osc"] = a.overlap ? json(a.overlap->osc) : json(nullptr);
    rec["beta"] = a.dim ? json(std::round(a.dim->beta * 1e6) / 1e6) : json(nullptr);
    rec["interesting"] = a.graph && a.graph->proper_count() <= spec_.neighbor_cap;
  } catch (const Error &e) {
    rec["ft_status"] = "Error";
    rec["error"] = std::string(to_string(e.kind()));
    rec["candidates"] = nullptr;
    rec["proper_count"] = nullptr;
    rec["overlap_count"] = nullptr;
    rec["osc"] = nullptr;
    rec["beta"] = nullptr;
    rec["interesting"] = false;
  }
  if (spec_.timing)
    rec["runtime_ms"] =
        std::round(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() * 1e3) /
        1e3;
  return rec;
}

std::vector<json> SearchRunner::run(std::ostream &log, const std::function<void(const json &)> &progress) const {
  std::vector<json> records;
  for (std::uint64_t t = 0; t < spec_.trials; ++t) {
    json rec = run_trial(t);
    log << rec.dump() << '\n';
    log.flush();
    if (!log) throw Error(ErrorKind::IoError, "cannot append to the search log");
    if (progress) progress(rec);
    records.push_back(std::move(rec));
  }
  return records;
}

} // namespace ftile
