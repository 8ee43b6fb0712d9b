#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftile/ifs.hpp"

namespace ftile {

/// Isometry h(z) = s z + v lifted to x -> S x + w.
struct NeighborMap {
  IntMatrix S;
  IntVector w;

  std::string key() const;
  friend bool operator==(const NeighborMap &, const NeighborMap &) = default;
};

/// Dimension header (4-byte big-endian d), then the entries of S row by row,
/// then the entries of w, each in sign-magnitude form.
std::string canonical_key(const IntMatrix &S, const IntVector &w);
std::string hex(const std::string &bytes);

NeighborMap identity_map(std::size_t d);

/// h' = (S_j^-1 S S_k, S_j^-1 (L w + S w_k - w_j)).
NeighborMap successor(const NeighborMap &h, std::size_t j, std::size_t k, const IFSystem &sys);

/// h^-1 = (S^-1, -S^-1 w).
NeighborMap inverse(const NeighborMap &h);

enum class FTStatus { FiniteType, Inconclusive };

std::string_view to_string(FTStatus s);

struct FTOptions {
  std::size_t budget = 20000;
  std::size_t max_level = 200;
  std::optional<double> margin;  // default C*1e-9 + 1e-9
  unsigned threads = 0;          // 0: FTILE_THREADS or hardware concurrency
  bool force_bigint = false;
};

/// Successor table: next[(v*m + j)*m + k] is the index of successor(v, j, k),
/// kPruned when it fails the C-bound, kUnknown when v was never expanded.
struct EdgeTable {
  static constexpr std::int32_t kPruned = -1;
  static constexpr std::int32_t kUnknown = -2;

  std::size_t m = 0;
  std::vector<std::int32_t> next;

  std::size_t vertex_count() const { return m ? next.size() / (m * m) : 0; }
  std::int32_t at(std::size_t v, std::size_t j, std::size_t k) const { return next[(v * m + j) * m + k]; }
  std::int32_t &at(std::size_t v, std::size_t j, std::size_t k) { return next[(v * m + j) * m + k]; }
};

struct FTStats {
  std::size_t examined = 0;
  std::size_t pruned = 0;
  std::size_t duplicates = 0;
  std::size_t rotation_group_order = 0;
  unsigned threads = 1;
  bool bigint_fallback = false;
  double wall_ms = 0.0;
};

struct FTOutcome {
  FTStatus status = FTStatus::Inconclusive;
  std::vector<std::size_t> levels; // |H_1|, |H_2|, ...; ends with 0 when FiniteType
  std::vector<IntMatrix> rotations;
  std::vector<std::uint32_t> rotation_of;
  std::vector<IntVector> translations; // candidate 0 is the identity
  std::vector<Complex> embedded;
  EdgeTable edges;
  FTStats stats;

  std::size_t size() const { return translations.size(); }
  NeighborMap candidate(std::size_t i) const { return {rotations[rotation_of[i]], translations[i]}; }
};

FTOutcome run_ft(const IFSystem &sys, const FTOptions &options = {});

unsigned default_thread_count();

} // namespace ftile
