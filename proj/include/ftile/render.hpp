#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ftile/ifs.hpp"

namespace ftile {

struct Window {
  Complex center{0.0, 0.0};
  double width = 1.0;
  double height = 1.0;

  /// A square window containing the attractor ball with a small border.
  static Window around_attractor(const IFSystem &sys);
  bool intersects_disk(Complex c, double radius) const;
};

enum class RenderMode { Global, Local };

using Rgb = std::array<std::uint8_t, 3>;

struct RenderJob {
  Window window;
  int px = 512;
  RenderMode mode = RenderMode::Global;
  std::optional<unsigned> depth; // empty: automatic
  std::vector<Rgb> palette;      // empty: built-in palette
  double gamma = 1.0;
  std::size_t piece_cap = 100'000'000;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h, Rgb fill = {255, 255, 255});
  Rgb pixel(int x, int y) const;
  void set(int x, int y, Rgb c);
  friend bool operator==(const Image &, const Image &) = default;
};

using PieceVisitor = std::function<void(std::span<const std::uint8_t> word, Complex center)>;

/// Visits every word of length n whose piece disk meets the window. With
/// prune = false every word is generated and filtered only at full depth.
/// Returns the number of pieces visited.
std::size_t enumerate_pieces(const IFSystem &sys, const Window &window, unsigned n, const PieceVisitor &visit,
                             bool prune = true, std::size_t cap = SIZE_MAX);

unsigned auto_depth(const IFSystem &sys, const Window &window, int px);

struct RenderResult {
  Image image;
  unsigned depth = 0;
  std::size_t pieces = 0;
  std::uint32_t max_hits = 0;
  std::vector<std::uint32_t> hits; // per pixel, row-major
};

RenderResult rasterize(const IFSystem &sys, const RenderJob &job);

enum class ImageFormat { PPM, PNG };

std::string encode_ppm(const Image &img);
Image decode_ppm(std::string_view bytes);
void write_image(const Image &img, const std::filesystem::path &path, ImageFormat format);
Image read_ppm(const std::filesystem::path &path);
ImageFormat format_for(const std::filesystem::path &path);

} // namespace ftile
