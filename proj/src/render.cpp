#include "ftile/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <png.h>

namespace ftile {

Window Window::around_attractor(const IFSystem &sys) {
  const double side = sys.R() > 0 ? 2.1 * sys.R() : 1.0;
  return {Complex(0.0, 0.0), side, side};
}

bool Window::intersects_disk(Complex c, double radius) const {
  const double dx = std::max(0.0, std::abs(c.real() - center.real()) - 0.5 * width);
  const double dy = std::max(0.0, std::abs(c.imag() - center.imag()) - 0.5 * height);
  return dx * dx + dy * dy <= radius * radius;
}

Image::Image(int w, int h, Rgb fill) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
  for (std::size_t i = 0; i < rgb.size(); i += 3) std::copy(fill.begin(), fill.end(), rgb.begin() + static_cast<long>(i));
}

Rgb Image::pixel(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  rgb[i] = c[0];
  rgb[i + 1] = c[1];
  rgb[i + 2] = c[2];
}

namespace {

struct Walker {
  const IFSystem &sys;
  const Window &window;
  unsigned n;
  const PieceVisitor &visit;
  bool prune;
  std::size_t cap;
  std::vector<double> radius; // radius[i] = r^i R (1 + 1e-6)
  std::vector<Complex> s_over_lambda, v_over_lambda;
  std::vector<std::uint8_t> word;
  std::size_t count = 0;

  void descend(unsigned level, Complex center, Complex coeff) {
    if (prune && !window.intersects_disk(center, radius[level])) return;
    if (level == n) {
      if (!prune && !window.intersects_disk(center, radius[level])) return;
      if (++count > cap)
        throw Error(ErrorKind::DepthTooLarge, "more than " + std::to_string(cap) + " visible pieces");
      visit(word, center);
      return;
    }
    for (std::size_t k = 0; k < sys.size(); ++k) {
      word[level] = static_cast<std::uint8_t>(k);
      descend(level + 1, center + coeff * v_over_lambda[k], coeff * s_over_lambda[k]);
    }
  }
};

} // namespace

std::size_t enumerate_pieces(const IFSystem &sys, const Window &window, unsigned n, const PieceVisitor &visit,
                             bool prune, std::size_t cap) {
  if (sys.size() > 256) throw Error(ErrorKind::ConfigError, "rendering supports at most 256 digits");
  Walker w{sys, window, n, visit, prune, cap, {}, {}, {}, std::vector<std::uint8_t>(n), 0};
  double rad = sys.R() * (1.0 + 1e-6);
  for (unsigned i = 0; i <= n; ++i, rad *= sys.r()) w.radius.push_back(rad);
  for (const auto &d : sys.digits()) {
    w.s_over_lambda.push_back(d.s / sys.field().lambda());
    w.v_over_lambda.push_back(d.v / sys.field().lambda());
  }
  w.descend(0, Complex(0.0, 0.0), Complex(1.0, 0.0));
  return w.count;
}

unsigned auto_depth(const IFSystem &sys, const Window &window, int px) {
  const double target = window.width / px;
  double size = 2.0 * sys.R();
  unsigned n = 0;
  while (size > target && n < 10000) {
    size *= sys.r();
    ++n;
  }
  return n;
}

namespace {

const std::vector<Rgb> &default_palette() {
  static const std::vector<Rgb> p = {{230, 25, 75},  {60, 180, 75},  {0, 130, 200},  {245, 130, 48},
                                     {145, 30, 180}, {70, 200, 200}, {240, 50, 230}, {160, 190, 40},
                                     {0, 128, 128},  {170, 110, 40}};
  return p;
}

constexpr Rgb kLocalBase = {0, 40, 110};

} // namespace

RenderResult rasterize(const IFSystem &sys, const RenderJob &job) {
  if (job.px < 16) throw Error(ErrorKind::ConfigError, "image width must be at least 16 pixels");
  if (!(job.window.width > 0) || !(job.window.height > 0))
    throw Error(ErrorKind::ConfigError, "window width and height must be positive");

  RenderResult res;
  const int w = job.px;
  const int h = std::max(1, static_cast<int>(std::lround(job.px * job.window.height / job.window.width)));
  const double ps = job.window.width / w;
  const double left = job.window.center.real() - 0.5 * job.window.width;
  const double top = job.window.center.imag() + 0.5 * (ps * h);
  res.depth = job.depth ? *job.depth : auto_depth(sys, job.window, job.px);
  res.hits.assign(static_cast<std::size_t>(w) * h, 0);

  std::vector<double> best(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> owner(static_cast<std::size_t>(w) * h, 0);
  double radius = sys.R() * (1.0 + 1e-6);
  for (unsigned i = 0; i < res.depth; ++i) radius *= sys.r();

  auto mark = [&](int x, int y, double dist2, std::uint8_t digit) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    ++res.hits[i];
    if (dist2 < best[i] || (dist2 == best[i] && digit < owner[i])) {
      best[i] = dist2;
      owner[i] = digit;
    }
  };

  auto visit = [&](std::span<const std::uint8_t> word, Complex c) {
    const std::uint8_t digit = word.empty() ? 0 : word[0];
    const double fx = (c.real() - left) / ps, fy = (top - c.imag()) / ps;
    const double rp = radius / ps;
    const int x0 = std::max(0, static_cast<int>(std::floor(fx - rp - 0.5)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(fx + rp - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::floor(fy - rp - 0.5)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(fy + rp - 0.5)));
    const int cx = static_cast<int>(std::floor(fx)), cy = static_cast<int>(std::floor(fy));
    bool home_marked = false;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double dx = x + 0.5 - fx, dy = y + 0.5 - fy;
        const double d2 = dx * dx + dy * dy;
        if (d2 <= rp * rp) {
          mark(x, y, d2, digit);
          if (x == cx && y == cy) home_marked = true;
        }
      }
    if (!home_marked && cx >= 0 && cx < w && cy >= 0 && cy < h) {
      const double dx = cx + 0.5 - fx, dy = cy + 0.5 - fy;
      mark(cx, cy, dx * dx + dy * dy, digit);
    }
  };
  res.pieces = enumerate_pieces(sys, job.window, res.depth, visit, true, job.piece_cap);

  res.image = Image(w, h);
  for (auto c : res.hits) res.max_hits = std::max(res.max_hits, c);
  const auto &palette = job.palette.empty() ? default_palette() : job.palette;
  const double log_max = std::log1p(static_cast<double>(res.max_hits));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (res.hits[i] == 0) continue;
      if (job.mode == RenderMode::Global) {
        res.image.set(x, y, palette[owner[i] % palette.size()]);
        continue;
      }
      const double t = log_max > 0 ? std::log1p(static_cast<double>(res.hits[i])) / log_max : 0.0;
      const double shade = 255.0 * (1.0 - std::pow(t, job.gamma));
      Rgb c;
      for (int ch = 0; ch < 3; ++ch)
        c[ch] = static_cast<std::uint8_t>(std::lround(kLocalBase[ch] + (255.0 - kLocalBase[ch]) * shade / 255.0));
      res.image.set(x, y, c);
    }
  return res;
}

std::string encode_ppm(const Image &img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(img.rgb.begin(), img.rgb.end());
  return out;
}

Image decode_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  auto fail = [] { throw Error(ErrorKind::IoError, "not a binary PPM image"); };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&] {
    skip_space();
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) fail();
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1'000'000) fail();
    }
    return static_cast<int>(v);
  };
  if (bytes.substr(0, 2) != "P6") fail();
  pos = 2;
  const int w = number(), h = number(), maxval = number();
  if (maxval != 255 || pos >= bytes.size()) fail();
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * h * 3;
  if (bytes.size() - pos != n) fail();
  Image img(w, h);
  std::copy(bytes.begin() + static_cast<long>(pos), bytes.end(), img.rgb.begin());
  return img;
}

namespace {

void write_png(const Image &img, const std::filesystem::path &path) {
  FILE *fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error(ErrorKind::IoError, "cannot initialise the PNG encoder");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error(ErrorKind::IoError, "PNG encoding failed for " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    png_write_row(png, img.rgb.data() + static_cast<std::size_t>(y) * img.width * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

} // namespace

void write_image(const Image &img, const std::filesystem::path &path, ImageFormat format) {
  if (format == ImageFormat::PNG) {
    write_png(img, path);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  const std::string bytes = encode_ppm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

Image read_ppm(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_ppm(buf.str());
}

ImageFormat format_for(const std::filesystem::path &path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" ? ImageFormat::PNG : ImageFormat::PPM;
}

} // namespace ftile
