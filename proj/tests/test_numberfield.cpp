#include <doctest.h>

#include <cmath>
#include <random>

#include "ftile/numberfield.hpp"
#include "support.hpp"

using namespace ftile;
using namespace ftile::testing;

TEST_SUITE("numberfield") {

TEST_CASE("companion matrix follows the column convention") {
  CHECK(companion_matrix(IntPolynomial::parse("-1,-1,1")) == imat({{0, 1}, {1, 1}}));
  const IntMatrix l = companion_matrix(IntPolynomial::parse("1,2,4,2,1"));
  CHECK(l == imat({{0, 0, 0, -1}, {1, 0, 0, -2}, {0, 1, 0, -4}, {0, 0, 1, -2}}));
  CHECK(companion_matrix(IntPolynomial::parse("-5,1")) == imat({{5}}));
  CHECK_THROWS_AS(companion_matrix(IntPolynomial::parse("1,2")), Error);
  try {
    companion_matrix(IntPolynomial::parse("1,1,2"));
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::InvalidPolynomial);
  }
  CHECK(characteristic_polynomial(l) == IntPolynomial::parse("1,2,4,2,1"));
}

TEST_CASE("polynomial text round-trips") {
  const auto p = IntPolynomial::parse(" -1, -1 ,+1");
  CHECK(p.to_string() == "-1,-1,1");
  CHECK(p.degree() == 2);
  CHECK(p.is_monic());
  CHECK_THROWS_AS(IntPolynomial::parse("1,,2"), Error);
  CHECK_THROWS_AS(IntPolynomial::parse("1,x"), Error);
}

TEST_CASE("mul_matrix") {
  const IntMatrix theta = companion_matrix(IntPolynomial::parse("-1,-1,1"));
  CHECK(mul_matrix(ivec({1, 0}), theta).is_identity());
  CHECK(mul_matrix(ivec({0, 1}), theta) == theta);
  CHECK(mul_matrix(ivec({1, 1}), theta) == imat({{1, 1}, {1, 2}}));
  CHECK(mul_matrix(ivec({1, 1}), theta) == theta * theta);
  CHECK_THROWS_AS(mul_matrix(ivec({1, 1, 1}), theta), Error);
}

TEST_CASE("embedding of the golden field") {
  const double tau = (1 + std::sqrt(5.0)) / 2;
  const Embedding e = embedding_from_matrix(companion_matrix(IntPolynomial::parse("-1,-1,1")), ivec({1, 0}));
  CHECK(e.lambda.real() == doctest::Approx(tau).epsilon(1e-14));
  CHECK(std::abs(e.lambda.imag()) < 1e-14);
  CHECK(std::abs(e.b[0] - 1.0) < 1e-14);
  CHECK(std::abs(e.b[1] - tau) < 1e-14);
}

TEST_CASE("embedding of the palindromic quartic") {
  const FieldContext f(companion_matrix(IntPolynomial::parse("1,2,4,2,1")), ivec({1, 0, 0, 0}));
  CHECK(f.lambda().real() == doctest::Approx(-0.7429).epsilon(1e-4));
  CHECK(f.lambda().imag() == doctest::Approx(1.5291).epsilon(1e-4));
  CHECK(f.modulus() == doctest::Approx(1.700).epsilon(1e-3));
  CHECK(std::abs(f.embed(ivec({0, 1, 0, 0})) - f.lambda()) < 1e-12);
  CHECK(std::abs(f.embed(ivec({1, 0, 0, 0})) - 1.0) < 1e-12);
  CHECK(std::abs(f.embed(ivec({0, 0, 0, 0}))) == 0.0);
  CHECK_THROWS_AS(f.embed(ivec({1, 0})), Error);
}

TEST_CASE("one-dimensional field and failures") {
  const Embedding e = embedding_from_matrix(imat({{2}}), ivec({1}));
  CHECK(e.lambda == Complex(2.0, 0.0));
  CHECK(std::abs(e.b[0] - 1.0) < 1e-15);
  try {
    embedding_from_matrix(companion_matrix(IntPolynomial::parse("1,0,1")), ivec({1, 0}));
    FAIL("expected NotExpanding");
  } catch (const Error &err) {
    CHECK(err.kind() == ErrorKind::NotExpanding);
  }
  try {
    embedding_from_matrix(imat({{2, 0}, {0, 2}}), ivec({1, 0}));
    FAIL("expected EmbeddingFailure");
  } catch (const Error &err) {
    CHECK(err.kind() == ErrorKind::EmbeddingFailure);
  }
}

TEST_CASE("lambda hint and tie-breaking") {
  const IntMatrix l = companion_matrix(IntPolynomial::parse("3,-3,1"));
  const FieldContext up(l, ivec({1, 0}));
  CHECK(up.lambda().imag() > 0);
  const FieldContext down(l, ivec({1, 0}), Complex(1.5, -0.8));
  CHECK(down.lambda().imag() < 0);
  // z^2 - 2: two real roots of equal modulus, the positive one wins
  const FieldContext root2(companion_matrix(IntPolynomial::parse("-2,0,1")), ivec({1, 0}));
  CHECK(root2.lambda().real() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("pisot classification") {
  auto classify = [](const char *poly) {
    const IntPolynomial p = IntPolynomial::parse(poly);
    IntVector one(p.degree());
    one[0] = 1;
    return pisot_classify(FieldContext(companion_matrix(p), one), p).kind;
  };
  CHECK(classify("-1,-1,1") == PisotKind::RealPisot);
  CHECK(classify("1,2,4,2,1") == PisotKind::ComplexPisot);
  CHECK(classify("3,-3,1") == PisotKind::ComplexPisot);
  CHECK(classify("-2,0,1") == PisotKind::NotPisot);
  CHECK(classify("-2,1,-2,1") == PisotKind::Borderline); // (z - 2)(z^2 + 1)
  CHECK(classify("-3,0,0,1") == PisotKind::NotPisot);

  const FieldContext f(companion_matrix(IntPolynomial::parse("-1,-1,1")), ivec({1, 0}));
  const PisotClass from_char = pisot_classify(f);
  CHECK(from_char.from_characteristic_polynomial);
  CHECK(from_char.kind == PisotKind::RealPisot);
  CHECK(from_char.root_moduli.size() == 2);
  CHECK_THROWS_AS(pisot_classify(f, IntPolynomial::parse("3,-3,1")), Error);
}

TEST_CASE("matrix order") {
  CHECK(matrix_order(IntMatrix::identity(3)) == 1u);
  CHECK(matrix_order(-IntMatrix::identity(3)) == 2u);
  CHECK(matrix_order(companion_matrix(IntPolynomial::parse("1,-1,1,-1,1"))) == 10u);
  CHECK_FALSE(matrix_order(imat({{2}})).has_value());
  CHECK_FALSE(matrix_order(imat({{1, 1}, {0, 1}}), 50).has_value());
}

TEST_CASE("exact closure: large powers stay exact") {
  const IntMatrix l = companion_matrix(IntPolynomial::parse("-1,-1,1"));
  const IntMatrix p = power(l, 300);
  BigInt a = 0, b = 1; // Fibonacci
  for (int i = 0; i < 300; ++i) {
    BigInt c = a + b;
    a = b;
    b = c;
  }
  // L^n = [[F(n-1), F(n)], [F(n), F(n+1)]]
  CHECK(p(0, 1) == a);
  CHECK(p(1, 1) == b);
  CHECK(p(0, 0) == b - a);
}

TEST_CASE("random fields: Cayley-Hamilton, commutativity, embedding homomorphism") {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> deg(2, 6), coef(-4, 4), small(-3, 3);
  int embedded = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = deg(rng);
    IntPolynomial p;
    for (int i = 0; i < d; ++i) p.coeffs.push_back(coef(rng));
    if (p.coeffs[0] == 0) p.coeffs[0] = 1;
    p.coeffs.push_back(1);
    const IntMatrix theta = companion_matrix(p);
    CHECK(characteristic_polynomial(theta) == p);

    IntVector x(d), y(d), z(d);
    for (int i = 0; i < d; ++i) {
      x[i] = small(rng);
      y[i] = small(rng);
      z[i] = small(rng);
    }
    const IntMatrix mx = mul_matrix(x, theta), my = mul_matrix(y, theta);
    CHECK(mx * my == my * mx);
    CHECK(mx * theta == theta * mx);
    const IntMatrix l = mx + theta * theta * theta;
    CHECK(evaluate(characteristic_polynomial(l), l) == IntMatrix(d));

    IntVector one(d);
    one[0] = 1;
    try {
      const FieldContext f(theta, one);
      ++embedded;
      const Complex ex = f.embed(x), ey = f.embed(y);
      const Complex prod = f.embed(mx * y);
      CHECK(std::abs(prod - ex * ey) <= 1e-9 * std::max(1.0, std::abs(ex) * std::abs(ey)));
      CHECK(std::abs(f.embed(x + z) - (ex + f.embed(z))) <= 1e-9 * (1 + std::abs(ex) + std::abs(f.embed(z))));
      CHECK(std::abs(f.embed(theta * x) - f.lambda() * ex) <= 1e-9 * std::max(1.0, std::abs(f.lambda() * ex)));
      // eigenvalues are roots of the characteristic polynomial
      for (Complex ev : f.eigenvalues()) {
        Complex acc = 0.0, scale = 0.0;
        for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
          acc = acc * ev + to_double(*it);
          scale = scale * std::abs(ev) + std::abs(to_double(*it));
        }
        CHECK(std::abs(acc) <= 1e-9 * std::abs(scale));
      }
      // b L = lambda b
      const auto &b = f.basis_embedding();
      double res = 0, bn = 0, ln = 0;
      for (int c = 0; c < d; ++c) {
        Complex s = 0.0;
        for (int r = 0; r < d; ++r) s += b[r] * to_double(theta(r, c));
        res += std::norm(s - f.lambda() * b[c]);
        bn += std::norm(b[c]);
      }
      for (const auto &e : theta.entries()) ln += to_double(e) * to_double(e);
      CHECK(std::sqrt(res) <= 1e-9 * std::sqrt(bn) * std::sqrt(ln));
      CHECK(std::abs(f.embed(one) - 1.0) <= 1e-12);
    } catch (const Error &e) {
      CHECK((e.kind() == ErrorKind::NotExpanding || e.kind() == ErrorKind::EmbeddingFailure));
    }
  }
  CHECK(embedded >= 50);
}

TEST_CASE("every non-real quadratic integer outside the unit disk is complex Pisot") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> bdist(-12, 12), cdist(2, 60);
  int tested = 0;
  while (tested < 100) {
    const int b = bdist(rng), c = cdist(rng);
    if (b * b >= 4 * c) continue;
    IntPolynomial p{{BigInt(c), BigInt(b), BigInt(1)}};
    const FieldContext f(companion_matrix(p), ivec({1, 0}));
    CHECK(pisot_classify(f, p).kind == PisotKind::ComplexPisot);
    CHECK(pisot_classify(f).kind == PisotKind::ComplexPisot);
    ++tested;
  }
}

TEST_CASE("sign-magnitude encoding") {
  std::string s;
  append_sign_magnitude(s, BigInt(0));
  CHECK(s == std::string("\0\0\0\0\0", 5));
  s.clear();
  append_sign_magnitude(s, BigInt(-258));
  CHECK(s == std::string("\2\0\0\0\2\1\2", 7));
  std::string t;
  append_sign_magnitude(t, std::int64_t{-258});
  CHECK(s == t);
  s.clear();
  t.clear();
  append_sign_magnitude(s, BigInt(std::numeric_limits<std::int64_t>::min()));
  append_sign_magnitude(t, std::numeric_limits<std::int64_t>::min());
  CHECK(s == t);
  CHECK_THROWS_AS(Checked64(std::numeric_limits<std::int64_t>::max()) + Checked64(1), Error);
  CHECK_THROWS_AS(from_bigint<Checked64>(BigInt(1) << 70), Error);
}

}
