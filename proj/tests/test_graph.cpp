#include <doctest.h>

#include <cmath>
#include <set>

#include "ftile/graph.hpp"
#include "ftile/report.hpp"
#include "support.hpp"

using namespace ftile;
using namespace ftile::testing;

namespace {

EdgeTable table(std::size_t m, std::vector<std::int32_t> next) {
  EdgeTable t;
  t.m = m;
  t.next = std::move(next);
  return t;
}

double rho(const std::vector<std::vector<double>> &rows) { return spectral_radius(rows); }

struct Pipeline {
  IFSystem sys;
  FTOutcome ft;
  NeighborGraph g;
  OverlapInfo info;
  explicit Pipeline(const std::string &name)
      : sys(fixture(name)), ft(run_ft(sys)), g(reduce_to_proper(ft)), info(detect_overlap(g)) {}
};

} // namespace

TEST_SUITE("graph") {

TEST_CASE("sink deletion on a hand-made table") {
  constexpr auto X = EdgeTable::kPruned;
  // 1 <-> 2 cycle, 3 is a sink, 4 -> 3, 5 -> identity
  const NeighborGraph g = reduce_to_proper(table(1, {0, 2, 1, X, 3, 0}));
  CHECK(g.candidate == std::vector<std::size_t>{0, 1, 2, 5});
  CHECK(g.proper_count() == 4);
  CHECK(g.edges.at(1, 0, 0) == 2);
  CHECK(g.edges.at(3, 0, 0) == 0);
  const OverlapInfo info = detect_overlap(g);
  CHECK_FALSE(info.osc);
  CHECK(info.overlap_set == std::vector<std::size_t>{3});
  CHECK(witness_path(g, info, 3) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}});

  const NeighborGraph only_id = reduce_to_proper(table(1, {0, X, 1}));
  CHECK(only_id.proper_count() == 1);
  CHECK(detect_overlap(only_id).osc);
}

TEST_CASE("two-digit table keeps vertices with any surviving edge") {
  constexpr auto X = EdgeTable::kPruned;
  // m = 2: next[(v*2 + j)*2 + k]
  const NeighborGraph g = reduce_to_proper(table(2, {0, 1, 2, 0, /**/ X, X, X, 2, /**/ X, 1, X, X, /**/ X, X, X, X}));
  CHECK(g.candidate == std::vector<std::size_t>{0, 1, 2});
  const OverlapInfo info = detect_overlap(g);
  CHECK(info.osc);
  CHECK(info.overlap_count() == 0);
}

TEST_CASE("proper neighbor counts") {
  CHECK(Pipeline("golden_bc").g.proper_count() == 7);
  CHECK(Pipeline("fig5_top").g.proper_count() == 19);
  CHECK(Pipeline("fig5_bottom").g.proper_count() == 24);
  CHECK(Pipeline("fig2_hexagonal").g.proper_count() == 12);
}

TEST_CASE("overlap detection") {
  const Pipeline fig2("fig2_hexagonal");
  CHECK(fig2.info.osc);
  CHECK(fig2.info.overlap_count() == 0);
  const Pipeline fig3("fig3_sevenfold");
  CHECK_FALSE(fig3.info.osc);
  CHECK(fig3.info.overlap_count() == 12);
  CHECK(Pipeline("fig5_bottom").info.overlap_count() == 4);
  CHECK(Pipeline("golden_bc").info.overlap_count() == 4);
}

TEST_CASE("witness paths replay to the identity") {
  for (const char *name : {"golden_bc", "fig3_sevenfold", "fig5_top", "fig7_fourmaps"}) {
    const Pipeline p(name);
    for (std::size_t v : p.info.overlap_set) {
      NeighborMap h = p.ft.candidate(p.g.candidate[v]);
      const auto path = witness_path(p.g, p.info, v);
      CHECK_FALSE(path.empty());
      for (const auto &[j, k] : path) h = successor(h, j, k, p.sys);
      CHECK(h == identity_map(p.sys.dim()));
    }
    const std::set<std::size_t> overlap(p.info.overlap_set.begin(), p.info.overlap_set.end());
    for (std::size_t v = 1; v < p.g.size(); ++v) CHECK(bool(p.info.reaches_identity[v]) == (overlap.count(v) == 1));
  }
}

TEST_CASE("reduction is idempotent") {
  for (const char *name : {"golden_bc", "fig2_hexagonal", "fig5_bottom", "fig7_kite"}) {
    const Pipeline p(name);
    const NeighborGraph again = reduce_to_proper(p.g.edges);
    CHECK(again.proper_count() == p.g.proper_count());
    for (std::size_t v = 0; v < again.size(); ++v) CHECK(again.candidate[v] == v);
    CHECK(again.edges.next == p.g.edges.next);
  }
}

TEST_CASE("spectral radius examples") {
  CHECK(rho({{3}}) == doctest::Approx(3).epsilon(1e-10));
  CHECK(rho({{1, 1}, {1, 0}}) == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-10));
  CHECK(rho({{0, 1}, {0, 0}}) == doctest::Approx(0).epsilon(1e-10));
  CHECK(rho({{2, 1}, {0, 3}}) == doctest::Approx(3).epsilon(1e-10));
  CHECK(rho({{0, 1}, {1, 0}}) == doctest::Approx(1).epsilon(1e-10));
  CHECK(rho({{0, 2}, {8, 0}}) == doctest::Approx(4).epsilon(1e-10));
  CHECK(rho({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}) == doctest::Approx(1).epsilon(1e-10));
  const SpectralResult r = spectral_bounds(SparseMatrix::from_dense({{1, 1}, {1, 0}}));
  CHECK(r.lower <= r.sigma);
  CHECK(r.sigma <= r.upper);
  CHECK(r.upper - r.lower <= 1e-9);
  CHECK(SparseMatrix::from_dense({{1, 0}, {2, 3}}).column_sums() == std::vector<double>{3, 3});
}

TEST_CASE("types of an OSC system have spectral radius m") {
  const Pipeline p("fig2_hexagonal");
  const TypeGraph tg = neighborhood_types(p.g, p.ft, p.info);
  CHECK(tg.size() == 25);
  CHECK(spectral_radius(tg.incidence()) == doctest::Approx(3).epsilon(1e-9));
  const DimensionReport d = dimension(p.sys, p.info, tg);
  CHECK(d.sigma == 3);
  CHECK(d.beta == doctest::Approx(2).epsilon(1e-12));
  CHECK(d.alpha == d.beta);
  std::set<std::size_t> sizes;
  for (std::size_t t : recurrent_types(tg)) sizes.insert(tg.members(t).size());
  CHECK(sizes == std::set<std::size_t>{5, 7, 8});
}

TEST_CASE("dimension of the cut-and-project example") {
  const Pipeline p("fig5_bottom");
  const TypeGraph tg = neighborhood_types(p.g, p.ft, p.info);
  const DimensionReport d = dimension(p.sys, p.info, tg);
  CHECK(d.sigma == doctest::Approx(1 + std::sqrt(3.0)).epsilon(1e-9));
  CHECK(d.beta == doctest::Approx(std::log(1 + std::sqrt(3.0)) / std::log(p.sys.field().modulus())).epsilon(1e-9));
  CHECK(d.beta == doctest::Approx(1.894).epsilon(1e-3));
  CHECK(d.beta < d.alpha);
  CHECK(d.type_count == tg.size());
}

TEST_CASE("golden system is an interval") {
  const Pipeline p("golden_bc");
  const TypeGraph tg = neighborhood_types(p.g, p.ft, p.info);
  const DimensionReport d = dimension(p.sys, p.info, tg);
  CHECK(d.sigma == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-9));
  CHECK(d.beta == doctest::Approx(1).epsilon(1e-9));
  CHECK(d.alpha == doctest::Approx(std::log(2.0) / std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
}

TEST_CASE("deleting a digit cannot raise the dimension") {
  const IFSystem full = fixture("fig7_fourmaps");
  const Analysis whole = analyze(full);
  REQUIRE(whole.dim);
  for (std::size_t drop = 0; drop < full.size(); ++drop) {
    std::vector<DigitInput> rest;
    for (std::size_t k = 0; k < full.size(); ++k)
      if (k != drop) rest.push_back({full.digits()[k].S, full.digits()[k].w});
    const Analysis part = analyze(IFSystem(full.field(), rest));
    if (!part.dim) continue;
    CHECK(part.dim->beta <= whole.dim->beta + 1e-9);
  }
}

TEST_CASE("type enumeration honours its cap") {
  const Pipeline p("fig3_sevenfold");
  TypeOptions small;
  small.cap = 5;
  try {
    neighborhood_types(p.g, p.ft, p.info, small);
    FAIL("expected TypeExplosion");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::TypeExplosion);
  }
  TypeOptions overlap;
  overlap.overlap_universe = true;
  const TypeGraph a = neighborhood_types(p.g, p.ft, p.info);
  const TypeGraph b = neighborhood_types(p.g, p.ft, p.info, overlap);
  CHECK(b.size() <= a.size());
  CHECK(dimension(p.sys, p.info, a).beta == doctest::Approx(dimension(p.sys, p.info, b).beta).epsilon(1e-9));
}

}
