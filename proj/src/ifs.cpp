#include "ftile/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ftile {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string &msg) { throw Error(ErrorKind::ConfigError, msg); }

BigInt parse_int(const json &j, const std::string &where) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_string()) {
    const auto &s = j.get_ref<const std::string &>();
    std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (start < s.size() && std::all_of(s.begin() + static_cast<long>(start), s.end(),
                                        [](char c) { return c >= '0' && c <= '9'; }))
      return BigInt(s);
  }
  config_error(where + ": expected an integer");
}

IntVector parse_vector(const json &j, std::size_t d, const std::string &where) {
  if (!j.is_array()) config_error(where + ": expected an array");
  if (j.size() != d)
    throw Error(ErrorKind::DimensionError,
                where + ": expected " + std::to_string(d) + " entries, got " + std::to_string(j.size()));
  IntVector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = parse_int(j[i], where);
  return v;
}

IntMatrix parse_matrix(const json &j, std::size_t d, const std::string &where) {
  if (!j.is_array()) config_error(where + ": expected an array of rows");
  if (j.size() != d) throw Error(ErrorKind::DimensionError, where + ": expected " + std::to_string(d) + " rows");
  IntMatrix m(d);
  for (std::size_t r = 0; r < d; ++r) {
    IntVector row = parse_vector(j[r], d, where + " row " + std::to_string(r));
    for (std::size_t c = 0; c < d; ++c) m(r, c) = row[c];
  }
  return m;
}

const json &require(const json &doc, const char *key) {
  auto it = doc.find(key);
  if (it == doc.end()) config_error(std::string("missing field '") + key + "'");
  return *it;
}

std::optional<Complex> parse_hint(const json &doc, const char *key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
    config_error(std::string(key) + ": expected [re, im]");
  return Complex((*it)[0].get<double>(), (*it)[1].get<double>());
}

const json &digit_list(const json &doc) {
  const json &digits = require(doc, "digits");
  if (!digits.is_array()) config_error("digits: expected an array");
  return digits;
}

IFSystem load_power(const json &doc, std::string label) {
  const json &pj = require(doc, "poly");
  if (!pj.is_array() || pj.size() < 2) config_error("poly: expected at least two coefficients");
  IntPolynomial poly;
  for (const auto &c : pj) poly.coeffs.push_back(parse_int(c, "poly"));
  if (!poly.is_monic()) throw Error(ErrorKind::InvalidPolynomial, "poly: leading coefficient must be 1");
  const std::size_t d = poly.degree();
  const IntMatrix theta = companion_matrix(poly);

  const IntVector lambda = parse_vector(require(doc, "lambda"), d, "lambda");
  IntVector one(d);
  one[0] = 1;
  FieldContext field(mul_matrix(lambda, theta), one, parse_hint(doc, "lambda_hint"));

  std::vector<DigitInput> digits;
  const json &dl = digit_list(doc);
  for (std::size_t k = 0; k < dl.size(); ++k) {
    const std::string where = "digits[" + std::to_string(k) + "]";
    if (!dl[k].is_object()) config_error(where + ": expected an object");
    IntMatrix s = IntMatrix::identity(d);
    if (auto it = dl[k].find("s"); it != dl[k].end()) s = mul_matrix(parse_vector(*it, d, where + ".s"), theta);
    digits.push_back({std::move(s), parse_vector(require(dl[k], "v"), d, where + ".v")});
  }
  IFSystem sys(std::move(field), digits, std::move(label));

  IntVector theta_coords(d);
  if (d > 1) theta_coords[1] = 1;
  else theta_coords[0] = -poly.coeffs[0];
  if (lambda == theta_coords) sys.set_minimal_poly(poly);
  return sys;
}

IFSystem load_raw(const json &doc, std::string label) {
  const json &dj = require(doc, "dim");
  if (!dj.is_number_integer() || dj.get<std::int64_t>() < 1) config_error("dim: expected a positive integer");
  const auto d = static_cast<std::size_t>(dj.get<std::int64_t>());
  IntMatrix l = parse_matrix(require(doc, "L"), d, "L");
  IntVector one = parse_vector(require(doc, "one"), d, "one");
  FieldContext field(std::move(l), std::move(one), parse_hint(doc, "lambda_hint"));

  std::vector<DigitInput> digits;
  const json &dl = digit_list(doc);
  for (std::size_t k = 0; k < dl.size(); ++k) {
    const std::string where = "digits[" + std::to_string(k) + "]";
    if (!dl[k].is_object()) config_error(where + ": expected an object");
    IntMatrix s = IntMatrix::identity(d);
    if (auto it = dl[k].find("S"); it != dl[k].end()) s = parse_matrix(*it, d, where + ".S");
    digits.push_back({std::move(s), parse_vector(require(dl[k], "v"), d, where + ".v")});
  }
  return IFSystem(std::move(field), digits, std::move(label));
}

} // namespace

IFSystem::IFSystem(FieldContext field, const std::vector<DigitInput> &digits, std::string label)
    : label_(std::move(label)), field_(std::move(field)) {
  const std::size_t d = field_.dim();
  if (digits.size() < 2) config_error("an IFS needs at least two digits");
  const IntMatrix &l = field_.L();
  const Complex lambda = field_.lambda();

  for (std::size_t k = 0; k < digits.size(); ++k) {
    const auto &in = digits[k];
    if (in.S.dim() != d || in.w.size() != d)
      throw Error(ErrorKind::DimensionError, "digit " + std::to_string(k) + " has the wrong dimension");
    if (!(in.S * l == l * in.S))
      throw Error(ErrorKind::NotCommutative, "digit " + std::to_string(k) + " does not commute with L");
    auto order = matrix_order(in.S);
    if (!order)
      throw Error(ErrorKind::NotRootOfUnity, "digit " + std::to_string(k) + " rotation has no finite order");
    Digit dg;
    dg.S = in.S;
    dg.w = in.w;
    dg.order = *order;
    dg.S_inv = power(in.S, *order - 1);
    dg.s = field_.embed(in.S * field_.one());
    dg.v = field_.embed(in.w);
    digits_.push_back(std::move(dg));
  }
  for (std::size_t j = 0; j < digits_.size(); ++j)
    for (std::size_t k = j + 1; k < digits_.size(); ++k) {
      if (!(digits_[j].S * digits_[k].S == digits_[k].S * digits_[j].S))
        throw Error(ErrorKind::NotCommutative,
                    "digits " + std::to_string(j) + " and " + std::to_string(k) + " do not commute");
      if (digits_[j].S == digits_[k].S && digits_[j].w == digits_[k].w)
        throw Error(ErrorKind::DegenerateSystem,
                    "digits " + std::to_string(j) + " and " + std::to_string(k) + " coincide");
    }

  for (std::size_t k = 0; k < digits_.size(); ++k)
    if (digits_[k].S.is_identity() && digits_[k].w.is_zero()) {
      identity_digit_ = k;
      break;
    }

  r_ = 1.0 / std::abs(lambda);
  double vmax = 0.0;
  for (const auto &dg : digits_) vmax = std::max(vmax, std::abs(dg.v));
  R_ = r_ * vmax / (1.0 - r_);
  if (std::all_of(digits_.begin(), digits_.end(), [](const Digit &dg) { return dg.w.is_zero(); }))
    warnings_.push_back("all translations are zero; the attractor is the single point 0");
}

IFSystem load_config(std::string_view text, std::string default_label) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("configuration must be a JSON object");
  std::string label = std::move(default_label);
  if (auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) config_error("label: expected a string");
    label = it->get<std::string>();
  }
  const json &mode = require(doc, "mode");
  if (mode == "power") return load_power(doc, std::move(label));
  if (mode == "raw") return load_raw(doc, std::move(label));
  config_error("mode: expected \"power\" or \"raw\"");
}

IFSystem load_config_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str(), path.stem().string());
}

double attractor_radius(const IFSystem &sys) { return sys.R(); }

double c_bound(const IFSystem &sys) { return sys.C(); }

} // namespace ftile
