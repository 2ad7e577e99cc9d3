#include <doctest.h>

#include <functional>
#include <random>

#include "ainf/matrix.hpp"

using namespace ainf;

namespace {

// Determinant by cofactor expansion; only for tiny matrices.
mpz_class det(const std::vector<std::vector<mpz_class>>& a) {
  size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  mpz_class out = 0;
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<mpz_class>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    mpz_class term = a[0][j] * det(minor);
    out += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return out;
}

// gcd of all k x k minors (determinantal divisor).
mpz_class minor_gcd(const std::vector<std::vector<long>>& m, int k) {
  int r = static_cast<int>(m.size()), c = static_cast<int>(m[0].size());
  mpz_class g = 0;
  std::vector<int> rs, cs;
  std::function<void(int)> pick_cols;
  std::function<void(int)> pick_rows = [&](int start) {
    if (static_cast<int>(rs.size()) == k) {
      pick_cols(0);
      return;
    }
    for (int i = start; i < r; ++i) {
      rs.push_back(i);
      pick_rows(i + 1);
      rs.pop_back();
    }
  };
  pick_cols = [&](int start) {
    if (static_cast<int>(cs.size()) == k) {
      std::vector<std::vector<mpz_class>> sub;
      for (int i : rs) {
        std::vector<mpz_class> row;
        for (int j : cs) row.emplace_back(m[i][j]);
        sub.push_back(row);
      }
      mpz_class d = det(sub);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (int j = start; j < c; ++j) {
      cs.push_back(j);
      pick_cols(j + 1);
      cs.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

std::vector<std::vector<long>> random_ints(std::mt19937& rng, int r, int c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<std::vector<long>> m(r, std::vector<long>(c));
  for (auto& row : m)
    for (auto& x : row) x = dist(rng);
  return m;
}

}  // namespace

TEST_CASE("smith form of a small integer matrix") {
  auto z = RingSpec::integers();
  auto s = smith_normal_form(Matrix::from_ints(z, {{2, 4}, {6, 8}}));
  CHECK(s.rank == 2);
  CHECK(s.diagonal == std::vector<Scalar>{2, 4});
  CHECK(torsion_factors(Matrix::from_ints(z, {{2, 4}, {6, 8}})) == std::vector<Scalar>{2, 4});
}

TEST_CASE("rank over Q and over F_2") {
  auto m = Matrix::from_ints(RingSpec::rationals(), {{1, 2}, {2, 4}});
  CHECK(rank(m) == 1);
  auto f2 = Matrix::from_ints(RingSpec::prime_field(2), {{1, 1}, {1, 3}});
  CHECK(rank(f2) == 1);
  CHECK(rank(m.over(RingSpec::prime_field(3))) == 1);
  CHECK_THROWS_AS(rank(Matrix::from_ints(RingSpec::integers(), {{1}})), AlgebraError);
}

TEST_CASE("integer solve respects divisibility") {
  auto z = RingSpec::integers();
  CHECK_FALSE(solve(Matrix::from_ints(z, {{2}}), {Scalar(1)}).has_value());
  auto x = solve(Matrix::from_ints(z, {{2}}), {Scalar(4)});
  REQUIRE(x);
  CHECK((*x)[0] == 2);
  // Rational solution (1/2, 1/2) is not integral but (1, 0) is.
  auto m = Matrix::from_ints(z, {{1, 1}, {3, 1}, {1, -1}});
  auto y = solve(m, {Scalar(1), Scalar(3), Scalar(1)});
  REQUIRE(y);
  CHECK(m.apply(*y) == Vector{1, 3, 1});
  auto m2 = Matrix::from_ints(z, {{2, 4}});
  auto w = solve(m2, {Scalar(2)});
  REQUIRE(w);
  CHECK(m2.apply(*w) == Vector{2});
  CHECK_FALSE(solve(m2, {Scalar(1)}).has_value());
}

TEST_CASE("ring errors") {
  CHECK_THROWS_AS(RingSpec::prime_field(4), AlgebraError);
  CHECK_THROWS_AS(RingSpec::integers().div(1, 2), AlgebraError);
  CHECK_THROWS_AS(RingSpec::parse("fp:x"), AlgebraError);
  auto f5 = RingSpec::prime_field(5);
  CHECK(f5.normalize(Scalar(1, 2)) == 3);
  CHECK(f5.normalize(-1) == 4);
  CHECK_THROWS_AS(f5.normalize(Scalar(1, 5)), AlgebraError);
}

TEST_CASE("random integer smith forms match determinantal divisors") {
  std::mt19937 rng(7);
  auto z = RingSpec::integers();
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    auto ints = random_ints(rng, r, c, -6, 6);
    auto m = Matrix::from_ints(z, ints);
    auto s = smith_normal_form(m);
    CHECK(s.u * m * s.v == s.d);
    CHECK(s.u * s.u_inv == Matrix::identity(z, r));
    CHECK(s.v * s.v_inv == Matrix::identity(z, c));
    mpz_class prev = 1;
    for (int k = 1; k <= std::min(r, c); ++k) {
      mpz_class g = minor_gcd(ints, k);
      if (g == 0) {
        CHECK(s.rank < k);
        break;
      }
      REQUIRE(k <= s.rank);
      CHECK(s.diagonal[k - 1] == Scalar(g / prev));
      prev = g;
    }
    std::vector<Scalar> expect;
    for (auto& d : s.diagonal)
      if (d != 1) expect.push_back(d);
    CHECK(torsion_factors(m) == expect);
    for (const auto& k : kernel_basis(m)) CHECK(is_zero(m.apply(k)));
    CHECK(static_cast<int>(kernel_basis(m).size()) == c - s.rank);
  }
}

TEST_CASE("F_p rank matches kernel size by enumeration") {
  std::mt19937 rng(11);
  const long p = 3;
  auto fp = RingSpec::prime_field(p);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 1 + trial % 4, c = 1 + (trial / 3) % 5;
    auto m = Matrix::from_ints(fp, random_ints(rng, r, c, 0, 2));
    long count = 0, total = 1;
    for (int i = 0; i < c; ++i) total *= p;
    for (long code = 0; code < total; ++code) {
      Vector x(c);
      long t = code;
      for (int i = 0; i < c; ++i) {
        x[i] = t % p;
        t /= p;
      }
      if (is_zero(m.apply(x))) ++count;
    }
    long expect = 1;
    for (int i = 0; i < c - rank(m); ++i) expect *= p;
    CHECK(count == expect);
    auto b = m.apply(Vector(c, Scalar(1)));
    auto x = solve(m, b);
    REQUIRE(x);
    CHECK(m.apply(*x) == b);
  }
}

TEST_CASE("integer solve agrees with smith route on random systems") {
  std::mt19937 rng(5);
  auto z = RingSpec::integers();
  for (int trial = 0; trial < 40; ++trial) {
    auto ints = random_ints(rng, 3, 3, -4, 4);
    auto m = Matrix::from_ints(z, ints);
    Vector b = {Scalar(static_cast<int>(rng() % 7) - 3), Scalar(static_cast<int>(rng() % 7) - 3),
                Scalar(static_cast<int>(rng() % 7) - 3)};
    auto x = solve(m, b);
    // Independent check: brute force over a box of integer vectors.
    bool found = false;
    for (int a0 = -12; a0 <= 12 && !found; ++a0)
      for (int a1 = -12; a1 <= 12 && !found; ++a1)
        for (int a2 = -12; a2 <= 12 && !found; ++a2)
          if (m.apply({Scalar(a0), Scalar(a1), Scalar(a2)}) == b) found = true;
    if (found) REQUIRE(x);
    if (x) CHECK(m.apply(*x) == b);
  }
}
