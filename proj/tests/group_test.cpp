#include <doctest.h>

#include <random>

#include "ccm/builders.hpp"

using namespace ccm;

TEST_CASE("builders produce the advertised orders") {
  CHECK(*builders::dihedral(4)->order() == 8);
  CHECK(*builders::heisenberg_f2(2)->order() == 32);
  CHECK(*builders::heisenberg_f2(1)->order() == 8);
  CHECK(!builders::infinite_dihedral()->order().has_value());
  CHECK(!builders::z(2)->order().has_value());
  CHECK(!builders::int_heisenberg()->order().has_value());
  CHECK(*builders::symmetric(4)->order() == 24);
  CHECK(*builders::quaternion8()->order() == 8);
}

TEST_CASE("invalid tables are rejected") {
  // not a Latin square
  CHECK_THROWS_AS(Group::make_finite_cayley({"a", "b"}, {0, 0, 0, 0}), InvalidTable);
  // Latin square without an identity element
  CHECK_THROWS_AS(Group::make_finite_cayley({"a", "b", "c"}, {1, 0, 2, 0, 2, 1, 2, 1, 0}),
                  InvalidTable);
  // wrong size
  CHECK_THROWS_AS(Group::make_finite_cayley({"a", "b"}, {0, 1, 1}), InvalidTable);
}

TEST_CASE("user tables above order 256 are refused") {
  size_t n = 257;
  std::vector<std::string> labels(n);
  std::vector<uint16_t> table(n * n);
  for (size_t i = 0; i < n; ++i) {
    labels[i] = "g" + std::to_string(i);
    for (size_t j = 0; j < n; ++j) table[i * n + j] = (uint16_t)((i + j) % n);
  }
  CHECK_THROWS_AS(Group::make_finite_cayley(labels, table, /*trusted=*/false), InvalidTable);
  CHECK(*Group::make_finite_cayley(labels, table, /*trusted=*/true)->order() == 257);
}

TEST_CASE("invalid actions and pairings are rejected") {
  // determinant 2 action
  CHECK_THROWS_AS(
      Group::make_virtually_abelian(1, builders::trivial(), {Mat{{2}}}), InvalidAction);
  // not a homomorphism: C2 acting by a matrix of order != 2
  CHECK_THROWS_AS(Group::make_virtually_abelian(
                      2, builders::cyclic(2),
                      {lat::identity(2), Mat{{0, 1}, {-1, 0}}}),
                  InvalidAction);
  // non-alternating pairing: beta(1,1) != 0
  AbelianCoords base{1, {}};
  AbelianCoords central{1, {}};
  CHECK_THROWS_AS(Group::make_central_pairing(base, central, {Vec{1}}), InvalidPairing);
  // torsion annihilation: Z/2 x Z base paired into Z with beta(e1,e2) = 1
  AbelianCoords base2{1, {2}};
  std::vector<Vec> beta2 = {Vec{0}, Vec{1}, Vec{-1}, Vec{0}};
  CHECK_THROWS_AS(Group::make_central_pairing(base2, central, beta2), InvalidPairing);
}

TEST_CASE("heisenberg multiplication carries the pairing into the centre") {
  auto h = builders::heisenberg_f2(2);
  auto a = h->make_cp({0}, {1, 0, 0, 0});
  auto b = h->make_cp({0}, {0, 0, 1, 0});
  CHECK(h->multiply(a, b).nu[0] == 1);  // <x, y'> = 1
  CHECK(h->multiply(b, a).nu[0] == 0);
  auto h1 = builders::heisenberg_f2(1);
  auto x = h1->make_cp({0}, {1, 0});
  auto y = h1->make_cp({0}, {0, 1});
  CHECK(h1->multiply(x, y).nu[0] == 1);
  CHECK(h1->commutator(x, y).nu[0] == 1);
}

TEST_CASE("commutator identities") {
  auto d = builders::infinite_dihedral();
  auto t = d->make_va({1}, 0);
  auto s = d->make_va({0}, 1);
  // stated orientation: commutator(g, h) = g^-1 h^-1 g h
  CHECK(d->commutator(t, s) == d->make_va({-2}, 0));
  CHECK(d->commutator(s, t) == d->make_va({2}, 0));
  CHECK(d->commutator(t, d->identity()) == d->identity());
  auto g = builders::symmetric(3);
  for (uint32_t i = 0; i < 6; ++i)
    CHECK(g->commutator(g->make_fc(i), g->identity()) == g->identity());
}

TEST_CASE("mixed-handle arithmetic is refused") {
  auto a = builders::z(1);
  auto b = builders::z(1);
  CHECK_THROWS_AS(a->multiply(a->make_va({1}, 0), b->make_va({1}, 0)), MixedGroups);
}

TEST_CASE("group axioms hold on random elements") {
  std::mt19937_64 rng(99);
  auto sample = [&](const GroupPtr& g) {
    std::uniform_int_distribution<i64> coord(-4, 4);
    if (g->cls() == GroupClass::VirtuallyAbelian) {
      Vec v(g->rank());
      for (i64& x : v) x = coord(rng);
      return g->make_va(std::move(v), (uint32_t)(rng() % g->point_group()->fc_order()));
    }
    Vec a(g->base().ngens()), nu(g->central().ngens());
    for (i64& x : a) x = coord(rng);
    for (i64& x : nu) x = coord(rng);
    return g->make_cp(std::move(nu), std::move(a));
  };
  for (const auto& g : {builders::infinite_dihedral(), builders::z2_rot4(),
                        builders::int_heisenberg(), builders::sympl_z2(),
                        builders::heisenberg_f2(2)}) {
    for (int t = 0; t < 200; ++t) {
      Element x = sample(g), y = sample(g), z = sample(g);
      CHECK(g->multiply(g->multiply(x, y), z) == g->multiply(x, g->multiply(y, z)));
      CHECK(g->multiply(x, g->invert(x)) == g->identity());
      CHECK(g->multiply(g->identity(), x) == x);
      CHECK(g->power(x, 3) == g->multiply(x, g->multiply(x, x)));
      CHECK(g->power(x, -2) == g->invert(g->multiply(x, x)));
    }
  }
}

TEST_CASE("enumeration is a prefix-monotone exhaustion in the fixed order") {
  auto z = builders::z(1);
  auto b2 = z->ball(2);
  std::vector<i64> got;
  for (auto& e : b2) got.push_back(e.v[0]);
  CHECK(got == std::vector<i64>{0, -1, 1, -2, 2});
  auto b4 = z->ball(4);
  for (size_t i = 0; i < b2.size(); ++i) CHECK(b4[i] == b2[i]);

  CHECK(builders::symmetric(3)->ball(0).size() == 6);
  CHECK(builders::symmetric(3)->ball(5).size() == 6);
  CHECK(builders::infinite_dihedral()->ball(1).size() == 6);  // {(v,q) : |v| <= 1}

  auto z2 = builders::z(2);
  auto ball1 = z2->ball(1);
  CHECK(ball1.size() == 9);
  auto ball3 = z2->ball(3);
  for (size_t i = 0; i < ball1.size(); ++i) CHECK(ball3[i] == ball1[i]);
}

TEST_CASE("element stream honours its horizon") {
  ElementStream s(builders::z(1), 10);
  for (int i = 0; i < 10; ++i) s.next();
  CHECK_THROWS_AS(s.next(), EnumerationExhausted);
  ElementStream f(builders::symmetric(3));
  for (int i = 0; i < 6; ++i) f.next();
  CHECK_THROWS_AS(f.next(), EnumerationExhausted);
}
