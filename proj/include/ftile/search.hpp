#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include <json.hpp>

#include "ftile/report.hpp"

namespace ftile {

/// Randomized search over digit sets in a fixed field. Digit 0 is always the
/// identity (fixing the origin); the other m-1 digits get a rotation drawn
/// uniformly from the allowed group and translation coordinates drawn
/// uniformly from [-B, B].
struct SearchSpec {
  nlohmann::json base;   // power- or raw-mode config; its digits are ignored
  std::size_t m = 3;
  long coord_bound = 3;
  std::vector<nlohmann::json> generators; // rotation generators ("s" vectors or "S" matrices)
  bool negation = true;                    // include -1 among the generators
  std::size_t trials = 100;
  std::size_t neighbor_cap = 100;
  std::size_t budget = 20000;
  std::size_t max_level = 200;
  std::uint64_t seed = 1;
  bool compute_beta = false;
  bool timing = true; // false omits runtime_ms from records
};

/// Per-trial generator: mt19937_64 seeded with splitmix64(seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Uniform integer in [lo, hi] by rejection sampling on raw 64-bit output.
std::int64_t uniform_int(std::mt19937_64 &rng, std::int64_t lo, std::int64_t hi);

class SearchRunner {
public:
  explicit SearchRunner(SearchSpec spec);

  std::size_t rotation_count() const { return rotations_.size(); }

  /// The config document of trial t.
  nlohmann::json sample(std::uint64_t trial) const;

  /// Runs one trial and returns its JSONL record.
  nlohmann::json run_trial(std::uint64_t trial) const;

  /// Runs all trials, writing one line per record; returns the records.
  std::vector<nlohmann::json> run(std::ostream &log,
                                  const std::function<void(const nlohmann::json &)> &progress = {}) const;

private:
  SearchSpec spec_;
  std::string mode_;
  std::size_t dim_ = 0;
  std::vector<nlohmann::json> rotations_; // serialized group elements, identity first
};

} // namespace ftile
