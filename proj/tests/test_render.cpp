#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "ftile/render.hpp"
#include "support.hpp"

using namespace ftile;
using namespace ftile::testing;

namespace {

using Piece = std::pair<std::vector<std::uint8_t>, Complex>;

std::vector<Piece> collect(const IFSystem &sys, const Window &w, unsigned n, bool prune) {
  std::vector<Piece> out;
  enumerate_pieces(
      sys, w, n, [&](std::span<const std::uint8_t> word, Complex c) { out.emplace_back(std::vector(word.begin(), word.end()), c); },
      prune);
  return out;
}

Complex compose(const IFSystem &sys, const std::vector<std::uint8_t> &word) {
  Complex z = 0.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) z = sys.apply(*it, z);
  return z;
}

std::filesystem::path temp_file(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("ftile_test_" + name);
}

} // namespace

TEST_SUITE("render") {

TEST_CASE("PPM golden bytes") {
  const Image white(1, 1);
  CHECK(encode_ppm(white) == std::string("P6\n1 1\n255\n\xff\xff\xff", 14));
  Image bw(2, 1);
  bw.set(0, 0, {0, 0, 0});
  const std::string two = encode_ppm(bw);
  CHECK(two.size() == 17);
  CHECK(two == std::string("P6\n2 1\n255\n\x00\x00\x00\xff\xff\xff", 17));

  const auto path = temp_file("white.ppm");
  write_image(white, path, ImageFormat::PPM);
  std::ifstream in(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes == encode_ppm(white));
  std::filesystem::remove(path);
}

TEST_CASE("PPM round trip") {
  Image img(7, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x)
      img.set(x, y, {static_cast<std::uint8_t>(x * 30), static_cast<std::uint8_t>(y * 50), static_cast<std::uint8_t>(x + y)});
  CHECK(decode_ppm(encode_ppm(img)) == img);
  const auto path = temp_file("roundtrip.ppm");
  write_image(img, path, ImageFormat::PPM);
  CHECK(read_ppm(path) == img);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(decode_ppm("P3\n1 1\n255\n"), Error);
  CHECK_THROWS_AS(decode_ppm(std::string("P6\n2 2\n255\n\0\0\0", 14)), Error);
}

TEST_CASE("PNG output") {
  Image img(20, 10, {10, 20, 30});
  const auto path = temp_file("out.png");
  CHECK(format_for(path) == ImageFormat::PNG);
  CHECK(format_for("a.ppm") == ImageFormat::PPM);
  write_image(img, path, ImageFormat::PNG);
  std::ifstream in(path, std::ios::binary);
  std::string sig(8, '\0');
  in.read(sig.data(), 8);
  CHECK(sig == std::string("\x89PNG\r\n\x1a\n", 8));
  std::filesystem::remove(path);
  try {
    write_image(img, "/nonexistent/dir/x.ppm", ImageFormat::PPM);
    FAIL("expected IoError");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
}

TEST_CASE("trivial enumerations") {
  const IFSystem sys = fixture("golden_bc");
  const Window full = Window::around_attractor(sys);
  const auto root = collect(sys, full, 0, true);
  REQUIRE(root.size() == 1);
  CHECK(root[0].first.empty());
  CHECK(root[0].second == Complex(0.0, 0.0));
  const Window far{{100.0, 100.0}, 1.0, 1.0};
  CHECK(collect(sys, far, 5, true).empty());
  CHECK(collect(sys, far, 5, false).empty());
}

TEST_CASE("golden words at depth three") {
  const IFSystem sys = fixture("golden_bc");
  const double lambda = sys.field().lambda().real();
  const auto pieces = collect(sys, Window::around_attractor(sys), 3, true);
  REQUIRE(pieces.size() == 8);
  std::set<std::vector<std::uint8_t>> words;
  for (const auto &[w, c] : pieces) {
    words.insert(w);
    const double expected = w[0] / lambda + w[1] / (lambda * lambda) + w[2] / (lambda * lambda * lambda);
    CHECK(std::abs(c - Complex(expected, 0.0)) < 1e-12);
    CHECK(std::abs(c - compose(sys, w)) < 1e-12);
  }
  CHECK(words.size() == 8);
}

TEST_CASE("pruned enumeration equals filtered full enumeration") {
  for (const char *name : {"golden_bc", "fig2_hexagonal"}) {
    const IFSystem sys = fixture(name);
    const Window full = Window::around_attractor(sys);
    const Window corner{{0.3 * sys.R(), -0.2 * sys.R()}, 0.4 * sys.R(), 0.25 * sys.R()};
    for (const Window &w : {full, corner})
      for (unsigned n = 0; n <= 6; ++n) {
        auto a = collect(sys, w, n, true);
        auto b = collect(sys, w, n, false);
        CHECK(a.size() == b.size());
        CHECK(a == b);
        for (const auto &[word, c] : a) CHECK(std::abs(c - compose(sys, word)) < 1e-12);
      }
  }
}

TEST_CASE("golden pieces cover the attractor interval") {
  const IFSystem sys = fixture("golden_bc");
  const auto pieces = collect(sys, Window::around_attractor(sys), 12, true);
  CHECK(pieces.size() == 4096);
  const double radius = std::pow(sys.r(), 12) * sys.R();
  std::vector<std::pair<double, double>> spans;
  for (const auto &[w, c] : pieces) spans.emplace_back(c.real() - radius, c.real() + radius);
  std::sort(spans.begin(), spans.end());
  double reach = 0.0;
  for (const auto &[lo, hi] : spans) {
    CHECK(lo <= reach + 1e-12);
    reach = std::max(reach, hi);
  }
  CHECK(reach >= sys.R() - 1e-12);
}

TEST_CASE("fig2 global view has three piece colors") {
  const IFSystem sys = fixture("fig2_hexagonal");
  RenderJob job;
  job.window = Window::around_attractor(sys);
  job.px = 256;
  job.depth = 6;
  const RenderResult res = rasterize(sys, job);
  CHECK(res.depth == 6);
  std::set<Rgb> colors;
  for (int y = 0; y < res.image.height; ++y)
    for (int x = 0; x < res.image.width; ++x) colors.insert(res.image.pixel(x, y));
  colors.erase(Rgb{255, 255, 255});
  CHECK(colors.size() == 3);
}

TEST_CASE("fig3 local view shows overlaps") {
  const IFSystem sys = fixture("fig3_sevenfold");
  RenderJob job;
  job.window = Window::around_attractor(sys);
  job.px = 64;
  job.depth = 3;
  job.mode = RenderMode::Local;
  const RenderResult res = rasterize(sys, job);
  CHECK(res.max_hits >= 2);
  CHECK(res.hits.size() == static_cast<std::size_t>(res.image.width * res.image.height));
  CHECK(*std::max_element(res.hits.begin(), res.hits.end()) == res.max_hits);
  // unhit pixels stay white, the busiest pixel gets the base color
  for (std::size_t i = 0; i < res.hits.size(); ++i) {
    const int x = static_cast<int>(i % res.image.width), y = static_cast<int>(i / res.image.width);
    if (res.hits[i] == 0) CHECK(res.image.pixel(x, y) == Rgb{255, 255, 255});
    if (res.hits[i] == res.max_hits) CHECK(res.image.pixel(x, y) == Rgb{0, 40, 110});
  }
}

TEST_CASE("rendering is deterministic") {
  const IFSystem sys = fixture("fig5_top");
  RenderJob job;
  job.window = {{0.0, 0.0}, 0.5, 0.5};
  job.px = 96;
  job.mode = RenderMode::Local;
  const RenderResult a = rasterize(sys, job), b = rasterize(sys, job);
  CHECK(encode_ppm(a.image) == encode_ppm(b.image));
  CHECK(a.depth == auto_depth(sys, job.window, job.px));
  CHECK(2 * sys.R() * std::pow(sys.r(), a.depth) <= job.window.width / job.px);
  CHECK(2 * sys.R() * std::pow(sys.r(), a.depth - 1) > job.window.width / job.px);
  job.mode = RenderMode::Global;
  CHECK(rasterize(sys, job).image == rasterize(sys, job).image);
}

TEST_CASE("deeper renders refine shallower ones") {
  const IFSystem sys = fixture("fig2_hexagonal");
  RenderJob job;
  job.window = Window::around_attractor(sys);
  job.px = 128;
  for (unsigned n = 2; n <= 5; ++n) {
    job.depth = n;
    const RenderResult coarse = rasterize(sys, job);
    job.depth = n + 1;
    const RenderResult fine = rasterize(sys, job);
    const double ps = job.window.width / job.px;
    const int reach = static_cast<int>(std::ceil(std::pow(sys.r(), n) * sys.R() * (1 + 1e-6) / ps)) + 1;
    const int w = fine.image.width, h = fine.image.height;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (fine.hits[y * w + x] == 0) continue;
        bool near = false;
        for (int dy = -reach; dy <= reach && !near; ++dy)
          for (int dx = -reach; dx <= reach && !near; ++dx) {
            const int xx = x + dx, yy = y + dy;
            near = xx >= 0 && yy >= 0 && xx < w && yy < h && coarse.hits[yy * w + xx] > 0;
          }
        CHECK(near);
      }
  }
}

TEST_CASE("render errors") {
  const IFSystem sys = fixture("fig7_fourmaps");
  RenderJob job;
  job.window = Window::around_attractor(sys);
  job.px = 8;
  CHECK_THROWS_AS(rasterize(sys, job), Error);
  job.px = 64;
  job.window.width = 0;
  CHECK_THROWS_AS(rasterize(sys, job), Error);
  job.window = Window::around_attractor(sys);
  job.depth = 30;
  job.piece_cap = 1000;
  try {
    rasterize(sys, job);
    FAIL("expected DepthTooLarge");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::DepthTooLarge);
  }
}

TEST_CASE("all-zero system renders a dot") {
  const IFSystem sys = power_system({1, -1, 1}, {1, 1}, {{{}, {0, 0}}, {{-1, 0}, {0, 0}}});
  RenderJob job;
  job.window = {{0.0, 0.0}, 1.0, 1.0};
  job.px = 32;
  job.depth = 4;
  const RenderResult res = rasterize(sys, job);
  int lit = 0;
  for (auto h : res.hits) lit += h > 0;
  CHECK(lit >= 1);
  CHECK(lit <= 4);
}

}
