#include "ftile/numberfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace ftile {

namespace {

using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;

LMatrix to_long_double(const IntMatrix &m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  LMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = LComplex(m(i, j).convert_to<long double>(), 0.0L);
  return out;
}

std::vector<Complex> to_double(const LVector &v) {
  std::vector<Complex> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[static_cast<std::size_t>(i)] =
        Complex(static_cast<double>(v(i).real()), static_cast<double>(v(i).imag()));
  return out;
}

struct Spectrum {
  std::vector<LComplex> values;
  LMatrix left; // column q is a left eigenvector for values[q]
};

Spectrum left_spectrum(const IntMatrix &l) {
  LMatrix lt = to_long_double(l).transpose();
  Eigen::ComplexEigenSolver<LMatrix> solver(lt, true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::EmbeddingFailure, "eigenvalue iteration did not converge");
  Spectrum s;
  s.values.assign(solver.eigenvalues().data(),
                  solver.eigenvalues().data() + solver.eigenvalues().size());
  s.left = solver.eigenvectors();
  return s;
}

long double frobenius(const LMatrix &m) { return m.norm(); }

long double residual(const LMatrix &lt, const LVector &b, LComplex mu) {
  return (lt * b - mu * b).norm();
}

/// A few steps of inverse iteration polish the eigenpair delivered by the QR
/// sweep.
void refine(const LMatrix &lt, LVector &b, LComplex &mu) {
  const auto n = lt.rows();
  const long double scale = std::max(1.0L, std::abs(mu));
  for (int iter = 0; iter < 3; ++iter) {
    LComplex shift = mu + LComplex(1e-14L * scale, 1e-14L * scale);
    LMatrix a = lt - shift * LMatrix::Identity(n, n);
    Eigen::FullPivLU<LMatrix> lu(a);
    LVector x = lu.solve(b);
    const long double nx = x.norm();
    if (!std::isfinite(static_cast<double>(nx)) || nx == 0.0L) break;
    x /= nx;
    LComplex num = x.dot(lt * x); // conjugate-linear in the first argument
    LComplex den = x.dot(x);
    b = x;
    mu = num / den;
  }
}

bool is_real(Complex z) { return std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z)); }

} // namespace

IntPolynomial IntPolynomial::parse(std::string_view text) {
  IntPolynomial p;
  std::string token;
  auto flush = [&] {
    std::size_t a = token.find_first_not_of(" \t");
    std::size_t b = token.find_last_not_of(" \t");
    if (a == std::string::npos)
      throw Error(ErrorKind::InvalidPolynomial, "empty coefficient in polynomial");
    std::string t = token.substr(a, b - a + 1);
    std::size_t start = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (start == t.size() ||
        !std::all_of(t.begin() + static_cast<long>(start), t.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      throw Error(ErrorKind::InvalidPolynomial, "bad coefficient '" + t + "'");
    if (t[0] == '+') t.erase(0, 1);
    p.coeffs.emplace_back(t);
    token.clear();
  };
  for (char c : text) {
    if (c == ',') flush();
    else token.push_back(c);
  }
  flush();
  return p;
}

std::string IntPolynomial::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
  return os.str();
}

IntMatrix companion_matrix(const IntPolynomial &p) {
  if (p.coeffs.size() < 2)
    throw Error(ErrorKind::InvalidPolynomial, "polynomial degree must be at least 1");
  if (!p.is_monic()) throw Error(ErrorKind::InvalidPolynomial, "polynomial is not monic");
  const std::size_t d = p.degree();
  IntMatrix m(d);
  for (std::size_t k = 0; k + 1 < d; ++k) m(k + 1, k) = 1;
  for (std::size_t i = 0; i < d; ++i) m(i, d - 1) = -p.coeffs[i];
  return m;
}

IntMatrix mul_matrix(const IntVector &x, const IntMatrix &theta) {
  if (x.size() != theta.dim())
    throw Error(ErrorKind::DimensionError, "coordinate vector length differs from field degree");
  const std::size_t d = theta.dim();
  IntMatrix result(d);
  IntMatrix pw = IntMatrix::identity(d);
  for (std::size_t k = 0; k < d; ++k) {
    if (x[k] != 0) result = result + x[k] * pw;
    if (k + 1 < d) pw = pw * theta;
  }
  return result;
}

std::optional<unsigned> matrix_order(const IntMatrix &s, unsigned n_max) {
  IntMatrix p = s;
  for (unsigned n = 1; n <= n_max; ++n) {
    if (p.is_identity()) return n;
    p = p * s;
  }
  return std::nullopt;
}

IntPolynomial characteristic_polynomial(const IntMatrix &m) {
  const std::size_t n = m.dim();
  IntPolynomial p;
  p.coeffs.assign(n + 1, BigInt(0));
  p.coeffs[n] = 1;
  IntMatrix mk(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += p.coeffs[n - k + 1];
    IntMatrix amk = m * mk;
    BigInt trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += amk(i, i);
    p.coeffs[n - k] = -trace / static_cast<long>(k);
  }
  return p;
}

IntMatrix evaluate(const IntPolynomial &p, const IntMatrix &m) {
  IntMatrix acc(m.dim());
  const IntMatrix id = IntMatrix::identity(m.dim());
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * m + *it * id;
  return acc;
}

std::vector<Complex> polynomial_roots(const IntPolynomial &p) {
  LMatrix c = to_long_double(companion_matrix(p));
  Eigen::ComplexEigenSolver<LMatrix> solver(c, false);
  std::vector<Complex> roots;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    auto z = solver.eigenvalues()(i);
    roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return roots;
}

namespace {

std::size_t select_lambda(const std::vector<LComplex> &values, std::optional<Complex> hint) {
  std::size_t best = 0;
  if (hint) {
    const LComplex h(hint->real(), hint->imag());
    for (std::size_t i = 1; i < values.size(); ++i)
      if (std::abs(values[i] - h) < std::abs(values[best] - h)) best = i;
    return best;
  }
  auto better = [](LComplex a, LComplex b) {
    const long double tol = 1e-9L * std::max(1.0L, std::abs(b));
    if (std::abs(a) > std::abs(b) + tol) return true;
    if (std::abs(a) < std::abs(b) - tol) return false;
    const bool a_up = a.imag() >= -tol, b_up = b.imag() >= -tol;
    if (a_up != b_up) return a_up;
    if (std::abs(a.imag() - b.imag()) > tol) return a.imag() > b.imag();
    return a.real() > b.real() + tol;
  };
  for (std::size_t i = 1; i < values.size(); ++i)
    if (better(values[i], values[best])) best = i;
  return best;
}

struct Eigenpair {
  LComplex value;
  LVector left;
};

Eigenpair normalized_pair(const LMatrix &lt, const Spectrum &spec, std::size_t q,
                          const LVector &one, bool required) {
  Eigenpair e{spec.values[q], spec.left.col(static_cast<Eigen::Index>(q))};
  const long double lnorm = std::max(frobenius(lt), 1e-300L);
  if (residual(lt, e.left, e.value) > 1e-12L * lnorm * e.left.norm()) refine(lt, e.left, e.value);
  const long double res = residual(lt, e.left, e.value) / (lnorm * e.left.norm());
  if (required && res > 1e-6L)
    throw Error(ErrorKind::EmbeddingFailure, "left eigenvector residual too large");
  LComplex scale = e.left.transpose() * one;
  if (std::abs(scale) <= 1e-12L * e.left.norm()) {
    if (required)
      throw Error(ErrorKind::EmbeddingFailure, "eigenvector annihilates the identity element");
    e.left.setZero();
    return e;
  }
  e.left /= scale;
  return e;
}

LVector to_long_double(const IntVector &v) {
  LVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = LComplex(v[i].convert_to<long double>(), 0.0L);
  return out;
}

} // namespace

Embedding embedding_from_matrix(const IntMatrix &l, const IntVector &one,
                                std::optional<Complex> lambda_hint) {
  if (l.dim() == 0 || one.size() != l.dim())
    throw Error(ErrorKind::DimensionError, "identity vector length differs from matrix size");
  const Spectrum spec = left_spectrum(l);
  const bool expanding = std::any_of(spec.values.begin(), spec.values.end(),
                                     [](LComplex z) { return std::abs(z) > 1.0L + 1e-12L; });
  if (!expanding) throw Error(ErrorKind::NotExpanding, "all eigenvalues lie in the closed unit disk");
  const std::size_t q = select_lambda(spec.values, lambda_hint);
  if (std::abs(spec.values[q]) <= 1.0L + 1e-12L)
    throw Error(ErrorKind::NotExpanding, "selected eigenvalue has modulus at most 1");
  for (std::size_t i = 0; i < spec.values.size(); ++i)
    if (i != q && std::abs(spec.values[i] - spec.values[q]) <=
                      1e-7L * std::max(1.0L, std::abs(spec.values[q])))
      throw Error(ErrorKind::EmbeddingFailure, "selected eigenvalue is repeated");
  const LMatrix lt = to_long_double(l).transpose();
  const Eigenpair e = normalized_pair(lt, spec, q, to_long_double(one), true);
  return {Complex(static_cast<double>(e.value.real()), static_cast<double>(e.value.imag())),
          to_double(e.left)};
}

FieldContext::FieldContext(IntMatrix l, IntVector one, std::optional<Complex> lambda_hint)
    : l_(std::move(l)), one_(std::move(one)) {
  Embedding e = embedding_from_matrix(l_, one_, lambda_hint);
  lambda_ = e.lambda;
  b_ = std::move(e.b);

  const Spectrum spec = left_spectrum(l_);
  const LMatrix lt = to_long_double(l_).transpose();
  const LVector one_ld = to_long_double(one_);
  for (std::size_t q = 0; q < spec.values.size(); ++q) {
    Eigenpair p = normalized_pair(lt, spec, q, one_ld, false);
    eigenvalues_.emplace_back(static_cast<double>(p.value.real()),
                              static_cast<double>(p.value.imag()));
    projections_.push_back(to_double(p.left));
  }
}

std::string_view to_string(PisotKind kind) {
  switch (kind) {
  case PisotKind::ComplexPisot: return "ComplexPisot";
  case PisotKind::RealPisot: return "RealPisot";
  case PisotKind::NotPisot: return "NotPisot";
  case PisotKind::Borderline: return "Borderline";
  }
  return "NotPisot";
}

PisotClass pisot_classify(const FieldContext &ctx, const std::optional<IntPolynomial> &minimal_poly) {
  PisotClass out;
  std::vector<Complex> roots;
  if (minimal_poly) {
    roots = polynomial_roots(*minimal_poly);
  } else {
    roots = ctx.eigenvalues();
    out.from_characteristic_polynomial = true;
  }
  const Complex lambda = ctx.lambda();
  for (Complex z : roots) out.root_moduli.push_back(std::abs(z));

  auto nearest = [&](Complex target) {
    std::size_t best = roots.size();
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (best == roots.size() || std::abs(roots[i] - target) < std::abs(roots[best] - target))
        best = i;
    return best;
  };
  std::size_t self = nearest(lambda);
  if (minimal_poly && std::abs(roots[self] - lambda) > 1e-6 * std::max(1.0, std::abs(lambda)))
    throw Error(ErrorKind::ConfigError, "lambda is not a root of the given minimal polynomial");
  roots.erase(roots.begin() + static_cast<long>(self));
  const bool real = is_real(lambda);
  if (!real && !roots.empty()) roots.erase(roots.begin() + static_cast<long>(nearest(std::conj(lambda))));

  bool borderline = false, inside = true;
  for (Complex z : roots) {
    const double mod = std::abs(z);
    if (mod >= 1.0 - 1e-9 && mod <= 1.0 + 1e-9) borderline = true;
    if (mod >= 1.0 - 1e-9) inside = false;
  }
  if (borderline) out.kind = PisotKind::Borderline;
  else if (!inside) out.kind = PisotKind::NotPisot;
  else out.kind = real ? PisotKind::RealPisot : PisotKind::ComplexPisot;
  return out;
}

} // namespace ftile
