#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ftile/ft.hpp"

namespace ftile {

/// Vertices of the reduced neighbor graph. Vertex 0 is always the identity.
struct NeighborGraph {
  std::vector<std::size_t> candidate; // vertex -> index in the source table
  EdgeTable edges;                    // between vertices; kPruned when absent

  std::size_t size() const { return candidate.size(); }
  std::size_t proper_count() const { return candidate.size(); } // includes the identity
  EdgeTable as_table() const { return edges; }
};

/// Repeated sink deletion on a candidate table whose entry 0 is the identity.
NeighborGraph reduce_to_proper(const EdgeTable &candidates);
NeighborGraph reduce_to_proper(const FTOutcome &outcome);

struct OverlapInfo {
  bool osc = true;
  std::vector<std::size_t> overlap_set;          // non-identity vertices with a path to id
  std::vector<std::uint8_t> reaches_identity;    // per vertex, identity included
  std::vector<std::pair<std::uint32_t, std::uint32_t>> next_hop; // (j,k) one step closer to id

  std::size_t overlap_count() const { return overlap_set.size(); }
};

OverlapInfo detect_overlap(const NeighborGraph &g);

/// Digit pairs leading from vertex v to the identity along shortest paths.
std::vector<std::pair<std::size_t, std::size_t>> witness_path(const NeighborGraph &g, const OverlapInfo &info,
                                                               std::size_t v);

/// Nonnegative integer matrix stored by columns.
struct SparseMatrix {
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };
  std::size_t n = 0;
  std::vector<Entry> entries;

  static SparseMatrix from_dense(const std::vector<std::vector<double>> &rows);
  std::vector<double> column_sums() const;
};

struct TypeOptions {
  std::size_t cap = 1'000'000;
  bool overlap_universe = false; // keep only overlap neighbors inside types
};

struct TypeGraph {
  std::size_t m = 0;
  bool overlap_universe = false;
  std::vector<std::uint32_t> arena;   // members of all types, sorted per type
  std::vector<std::size_t> offsets;   // type t occupies [offsets[t], offsets[t+1])
  std::vector<std::uint32_t> child;   // child[t*m + k]
  std::vector<std::uint8_t> owned;    // owned[t*m + k]

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const std::uint32_t> members(std::size_t t) const {
    return {arena.data() + offsets[t], arena.data() + offsets[t + 1]};
  }
  SparseMatrix incidence() const;
};

/// Breadth-first closure of neighborhood types from the empty root type.
TypeGraph neighborhood_types(const NeighborGraph &g, const FTOutcome &outcome, const OverlapInfo &info,
                             const TypeOptions &options = {});

/// Types of interior pieces: members of the strongly connected components
/// of the transition graph that no edge leaves.
std::vector<std::size_t> recurrent_types(const TypeGraph &tg);

struct SpectralResult {
  double sigma = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t iterations = 0;
};

SpectralResult spectral_bounds(const SparseMatrix &M, double tolerance = 1e-10);
double spectral_radius(const SparseMatrix &M, double tolerance = 1e-10);
double spectral_radius(const std::vector<std::vector<double>> &rows, double tolerance = 1e-10);

struct DimensionReport {
  double alpha = 0.0;
  double sigma = 0.0;
  double beta = 0.0;
  bool osc = true;
  std::size_t overlap_count = 0;
  std::size_t type_count = 0;
};

DimensionReport dimension(const IFSystem &sys, const OverlapInfo &info, const TypeGraph &tg);

} // namespace ftile
