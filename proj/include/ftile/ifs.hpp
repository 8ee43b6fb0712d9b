#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftile/numberfield.hpp"

namespace ftile {

/// One map h_k(z) = s_k z + v_k in lifted form x -> S x + w.
struct Digit {
  IntMatrix S;
  IntVector w;
  unsigned order = 1;
  IntMatrix S_inv; // S^(order-1)
  Complex s;       // numerical rotation factor
  Complex v;       // numerical translation
};

struct DigitInput {
  IntMatrix S;
  IntVector w;
};

class IFSystem {
public:
  IFSystem(FieldContext field, const std::vector<DigitInput> &digits, std::string label = {});

  const std::string &label() const noexcept { return label_; }
  const FieldContext &field() const noexcept { return field_; }
  const std::vector<Digit> &digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  std::size_t dim() const noexcept { return field_.dim(); }
  double r() const noexcept { return r_; }
  double R() const noexcept { return R_; }
  double C() const noexcept { return 2.0 * R_; }
  std::optional<std::size_t> identity_digit() const noexcept { return identity_digit_; }
  const std::vector<std::string> &warnings() const noexcept { return warnings_; }

  /// Minimal polynomial of lambda when it is known exactly (power mode with
  /// lambda equal to the primitive element).
  const std::optional<IntPolynomial> &minimal_poly() const noexcept { return minimal_poly_; }
  void set_minimal_poly(IntPolynomial p) { minimal_poly_ = std::move(p); }

  /// f_k(z) = (s_k z + v_k) / lambda, evaluated numerically.
  Complex apply(std::size_t k, Complex z) const {
    return (digits_[k].s * z + digits_[k].v) / field_.lambda();
  }

private:
  std::string label_;
  FieldContext field_;
  std::vector<Digit> digits_;
  double r_ = 0.0;
  double R_ = 0.0;
  std::optional<std::size_t> identity_digit_;
  std::optional<IntPolynomial> minimal_poly_;
  std::vector<std::string> warnings_;
};

IFSystem load_config(std::string_view text, std::string default_label = {});
IFSystem load_config_file(const std::filesystem::path &path);

double attractor_radius(const IFSystem &sys);
double c_bound(const IFSystem &sys);

} // namespace ftile
