#include <doctest.h>

#include <random>

#include "ccm/lattice.hpp"

using namespace ccm;

TEST_CASE("rational arithmetic is exact and canonical") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
  CHECK((Rational(1, 2) * Rational(2, 3)) == Rational(1, 3));
  CHECK((Rational(1, 2) - Rational(1, 2)).is_zero());
  CHECK((Rational(3, 4) / Rational(3, 2)) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7).str() == "7/1");
  CHECK(Rational(-1, 3).str() == "-1/3");
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("rational overflow throws instead of wrapping") {
  Rational huge(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(huge * huge, OverflowError);
}

TEST_CASE("extended index reciprocal") {
  CHECK(ExtendedIndex::of(4).reciprocal() == Rational(1, 4));
  CHECK(ExtendedIndex::infinite().reciprocal() == Rational(0));
  CHECK_THROWS_AS(ExtendedIndex::of(0), Error);
}

TEST_CASE("hnf canonical form") {
  // span{(2,0),(0,3)} built from messy generators
  Mat m = {{2, 3}, {4, 3}, {2, 0}};
  Mat h = lat::hnf(m);
  CHECK(h == Mat{{2, 0}, {0, 3}});
  // canonical: same span, different generators
  Mat m2 = {{2, 3}, {2, 0}};
  CHECK(lat::hnf(m2) == h);
  // rank-deficient
  Mat line = lat::hnf({{2, 4}, {1, 2}});
  CHECK(line == Mat{{1, 2}});
}

TEST_CASE("hnf transform reproduces the basis") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    int rows = 1 + (int)(rng() % 4), cols = 1 + (int)(rng() % 4);
    Mat m(rows, Vec(cols));
    for (auto& r : m)
      for (auto& x : r) x = (i64)(rng() % 11) - 5;
    auto tr = lat::hnf_transform(m);
    for (int i = 0; i < (int)tr.u.size(); ++i) {
      Vec prod(cols, 0);
      for (int k = 0; k < rows; ++k)
        for (int c = 0; c < cols; ++c) prod[c] += tr.u[i][k] * m[k][c];
      if (i < tr.rank)
        CHECK(prod == tr.h[i]);
      else
        CHECK(lat::is_zero(prod));
    }
  }
}

TEST_CASE("solve and kernel") {
  Mat m = {{2, 0}, {0, 3}};
  auto s = lat::solve(m, {4, -3});
  REQUIRE(s.has_value());
  CHECK((*s)[0] * 2 == 4);
  CHECK((*s)[1] * 3 == -3);
  CHECK(!lat::solve(m, {1, 0}).has_value());

  Mat k = lat::kernel(Mat{{1, 2}, {2, 4}});
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] * 1 + k[0][1] * 2 == 0);
}

TEST_CASE("lattice intersection and index") {
  Mat a = {{2, 0}, {0, 1}};
  Mat b = {{1, 0}, {0, 3}};
  CHECK(lat::intersect(a, b) == Mat{{2, 0}, {0, 3}});
  CHECK(*lat::index_in_zn(Mat{{2, 0}, {0, 3}}, 2) == 6);
  CHECK(!lat::index_in_zn(Mat{{1, 2}}, 2).has_value());
}

TEST_CASE("residues and reduction") {
  Mat l = {{2, 1}, {0, 3}};
  auto rs = lat::residues(l, 2);
  CHECK(rs.size() == 6);
  for (size_t i = 0; i < rs.size(); ++i)
    for (size_t j = i + 1; j < rs.size(); ++j)
      CHECK(!lat::in_span(l, lat::sub(rs[i], rs[j])));
  // reduction is idempotent and respects the lattice
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    Vec v = {(i64)(rng() % 21) - 10, (i64)(rng() % 21) - 10};
    Vec r = lat::reduce_mod(l, v);
    CHECK(lat::reduce_mod(l, r) == r);
    CHECK(lat::in_span(l, lat::sub(v, r)));
  }
}

TEST_CASE("affine intersection") {
  // (1,0) + 2Z x Z  meets  (0,0) + Z x 3Z  at odd x, y = 0 mod 3
  auto p = lat::affine_intersect_point({1, 0}, {{2, 0}, {0, 1}}, {0, 0}, {{1, 0}, {0, 3}});
  REQUIRE(p.has_value());
  CHECK(((*p)[0] % 2 + 2) % 2 == 1);
  CHECK(((*p)[1] % 3 + 3) % 3 == 0);
  // parallel lines never meet
  CHECK(!lat::affine_intersect_point({0, 0}, {{1, 0}}, {0, 1}, {{1, 0}}).has_value());
}
