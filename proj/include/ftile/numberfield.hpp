#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftile/matrix.hpp"

namespace ftile {

using Complex = std::complex<double>;

/// Integer polynomial with ascending coefficients (constant term first).
struct IntPolynomial {
  std::vector<BigInt> coeffs;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }

  /// Parses "c0,c1,...,cd".
  static IntPolynomial parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const IntPolynomial &, const IntPolynomial &) = default;
};

/// Columns e_2, ..., e_d and finally (-m_0, ..., -m_{d-1}).
IntMatrix companion_matrix(const IntPolynomial &p);

/// Matrix of multiplication by the element with coordinates x in the power
/// basis of the primitive element whose companion matrix is theta.
IntMatrix mul_matrix(const IntVector &x, const IntMatrix &theta);

/// Smallest n <= n_max with S^n = I.
std::optional<unsigned> matrix_order(const IntMatrix &s, unsigned n_max = 1000);

/// Exact characteristic polynomial det(zI - m) (Faddeev-LeVerrier; all
/// divisions are exact over the integers).
IntPolynomial characteristic_polynomial(const IntMatrix &m);

/// p(m) by Horner's rule.
IntMatrix evaluate(const IntPolynomial &p, const IntMatrix &m);

/// Numerical roots of p (companion eigenvalues).
std::vector<Complex> polynomial_roots(const IntPolynomial &p);

struct Embedding {
  Complex lambda;
  std::vector<Complex> b; // row with b*L = lambda*b and b*one = 1
};

/// Chooses the expanding eigenvalue of L (nearest to the hint, or of maximum
/// modulus with nonnegative imaginary part) and its left eigenvector.
Embedding embedding_from_matrix(const IntMatrix &l, const IntVector &one,
                                std::optional<Complex> lambda_hint = std::nullopt);

/// An algebraic number field presented by the integer matrix L of
/// multiplication by lambda on a coordinate lattice, together with the complex
/// embedding that sends the lattice into the plane.
class FieldContext {
public:
  FieldContext(IntMatrix l, IntVector one, std::optional<Complex> lambda_hint = std::nullopt);

  std::size_t dim() const noexcept { return l_.dim(); }
  const IntMatrix &L() const noexcept { return l_; }
  const IntVector &one() const noexcept { return one_; }
  Complex lambda() const noexcept { return lambda_; }
  const std::vector<Complex> &basis_embedding() const noexcept { return b_; }
  const std::vector<Complex> &eigenvalues() const noexcept { return eigenvalues_; }
  double modulus() const noexcept { return std::abs(lambda_); }
  double contraction() const noexcept { return 1.0 / std::abs(lambda_); }

  /// Left eigenvector for eigenvalues()[q], scaled so that it maps one() to 1.
  /// It is the projection onto that eigenspace along all the others.
  const std::vector<Complex> &projection(std::size_t q) const { return projections_.at(q); }

  template <class T> Complex embed(const Vector<T> &x) const {
    return apply(b_, x);
  }

  template <class T> static Complex apply(const std::vector<Complex> &row, const Vector<T> &x) {
    if (x.size() != row.size())
      throw Error(ErrorKind::DimensionError, "vector length differs from field degree");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * to_double(x[i]);
    return acc;
  }

private:
  IntMatrix l_;
  IntVector one_;
  Complex lambda_;
  std::vector<Complex> b_;
  std::vector<Complex> eigenvalues_;
  std::vector<std::vector<Complex>> projections_;
};

inline Complex embed(const IntVector &x, const FieldContext &ctx) { return ctx.embed(x); }

enum class PisotKind { ComplexPisot, RealPisot, NotPisot, Borderline };

std::string_view to_string(PisotKind kind);

struct PisotClass {
  PisotKind kind = PisotKind::NotPisot;
  std::vector<double> root_moduli; // all roots, lambda's included
  bool from_characteristic_polynomial = false;
};

/// Classifies lambda from the roots of the minimal polynomial when given,
/// otherwise from the characteristic polynomial of L.
PisotClass pisot_classify(const FieldContext &ctx,
                          const std::optional<IntPolynomial> &minimal_poly = std::nullopt);

} // namespace ftile
