#include <doctest.h>

#include <map>
#include <random>

#include "ccm/builders.hpp"
#include "ccm/dc.hpp"
#include "ccm/run.hpp"

using namespace ccm;

TEST_CASE("commuting-degree anchors for finite groups") {
  CHECK(dc_finite(builders::cyclic(6)) == Rational(1));
  CHECK(dc_finite(builders::symmetric(3)) == Rational(1, 2));
  CHECK(dc_finite(builders::dihedral(4)) == Rational(5, 8));
  CHECK(dc_finite(builders::quaternion8()) == Rational(5, 8));
  CHECK(dc_finite(builders::symmetric(4)) == Rational(5, 24));
}

TEST_CASE("product means on explicit pair sets") {
  auto s3 = builders::symmetric(3);
  std::vector<std::pair<uint32_t, uint32_t>> all;
  for (uint32_t a = 0; a < 6; ++a)
    for (uint32_t b = 0; b < 6; ++b) all.emplace_back(a, b);
  CHECK(product_mean_finite(s3, all) == Rational(1));
  CHECK(product_mean_finite(s3, [&](uint32_t a, uint32_t b) {
          return s3->fc_mul(a, b) == s3->fc_mul(b, a);
        }) == dc_finite(s3));
  // a coset of the diagonal subgroup has measure 1/6 = 1/[G^2 : D]
  auto sq = builders::direct_product(s3, s3);
  std::vector<Element> dgens;
  for (uint32_t i = 0; i < 6; ++i) dgens.push_back(sq->make_fc(i * 6 + i));
  auto diag = subgroup_from_generators(sq, dgens);
  CHECK(diag.index().value() == 6);
  std::vector<std::pair<uint32_t, uint32_t>> coset;
  Coset dcoset = coset_of(diag, sq->make_fc(7));
  for (uint16_t x : dcoset.sub.fc_elements()) {
    uint32_t idx = sq->fc_mul(dcoset.rep.idx, x);
    coset.emplace_back(idx / 6, idx % 6);
  }
  CHECK(product_mean_finite(s3, coset) == Rational(1, 6));
}

TEST_CASE("dc is one exactly on the abelian groups") {
  for (auto& [name, g] : builders::finite_library(48)) {
    bool abelian = true;
    for (uint32_t a = 0; a < g->fc_order() && abelian; ++a)
      for (uint32_t b = a + 1; b < g->fc_order() && abelian; ++b)
        abelian = g->fc_mul(a, b) == g->fc_mul(b, a);
    CHECK(abelian == (dc_finite(g) == Rational(1)));
  }
}

TEST_CASE("strata equal the brute-force histogram on finite groups") {
  for (auto& [name, g] : builders::finite_library(16)) {
    auto t = centralizer_strata(g);
    t.validate();
    CHECK(dc_strata(t) == dc_finite(g));
    // abelian groups: a single stratum (1, G)
    if (dc_finite(g) == Rational(1)) {
      REQUIRE(t.strata.size() == 1);
      CHECK(t.strata[0].first == 1);
      CHECK(t.measures[0] == Rational(1));
    }
  }
}

TEST_CASE("infinite strata anchors") {
  auto d = centralizer_strata(builders::infinite_dihedral());
  d.validate();
  CHECK(dc_strata(d) == Rational(1, 4));
  // U_2 = translations minus the identity has measure 1/2
  bool found_u2 = false;
  for (size_t i = 0; i < d.strata.size(); ++i)
    if (d.strata[i].first == 2) {
      found_u2 = true;
      CHECK(d.measures[i] == Rational(1, 2));
    }
  CHECK(found_u2);
  CHECK(d.infinity_measure == Rational(1, 2));

  auto s = centralizer_strata(builders::sympl_z2());
  s.validate();
  CHECK(dc_strata(s) == Rational(5, 8));
  REQUIRE(s.strata.size() == 2);
  CHECK(s.strata[0].first == 1);
  CHECK(s.measures[0] == Rational(1, 4));
  CHECK(s.strata[1].first == 2);
  CHECK(s.measures[1] == Rational(3, 4));

  auto h = centralizer_strata(builders::int_heisenberg());
  h.validate();
  CHECK(dc_strata(h) == Rational(0));
  CHECK(h.infinity_measure == Rational(1));

  auto r = centralizer_strata(builders::z2_rot4());
  r.validate();
  CHECK(dc_strata(r) == Rational(1, 16));
}

TEST_CASE("strata are conjugation-invariant sets") {
  std::mt19937_64 rng(21);
  for (const auto& g : {builders::infinite_dihedral(), builders::sympl_z2(),
                        builders::z2_rot4()}) {
    auto t = centralizer_strata(g);
    auto random_el = [&]() {
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
    for (int i = 0; i < 100; ++i) {
      Element x = random_el(), c = random_el();
      Element conj = g->multiply(g->multiply(g->invert(c), x), c);
      for (auto& [m, u] : t.strata) CHECK(u.contains(x) == u.contains(conj));
      CHECK(t.u_infinity.contains(x) == t.u_infinity.contains(conj));
    }
  }
}

TEST_CASE("strata dominate no finite quotient") {
  // dc_strata(G) <= dc(G/N) for every computed quotient
  for (const auto& g : {builders::infinite_dihedral(), builders::sympl_z2(),
                        builders::z2_rot4()}) {
    Rational base = dc_strata(g);
    for (const Subgroup& n : mod_chain(g, {2, 3, 4}))
      CHECK(!(dc_finite(quotient_group(n)) < base));
  }
}

TEST_CASE("quotient chains") {
  auto d = builders::infinite_dihedral();
  auto rf = dc_rf_chain(d, mod_chain(d, {3, 5, 7}));
  CHECK(rf.quotient_orders == std::vector<i64>{6, 10, 14});
  CHECK(rf.values == std::vector<Rational>{{1, 2}, {2, 5}, {5, 14}});
  CHECK(!rf.nested);
  CHECK(rf.non_increasing);

  // nested chain: 2Z > 4Z > 8Z
  auto nested = dc_rf_chain(d, mod_chain(d, {2, 4, 8}));
  CHECK(nested.nested);
  CHECK(nested.non_increasing);

  // abelian: constant 1
  auto z = builders::z(1);
  auto za = dc_rf_chain(z, mod_chain(z, {2, 3, 4}));
  for (const Rational& v : za.values) CHECK(v == Rational(1));

  auto h = builders::int_heisenberg();
  auto hf = dc_rf_chain(h, mod_chain(h, {2, 3, 5}));
  CHECK(hf.values == std::vector<Rational>{{5, 8}, {11, 27}, {29, 125}});

  CHECK_THROWS_AS(dc_rf_chain(d, mod_chain(d, {5000}), 100), QuotientTooLarge);
}

TEST_CASE("multiplicative quotient bound") {
  auto d4 = builders::dihedral(4);
  auto z = center(d4);
  auto rep = gallagher_check(d4, z);
  CHECK(rep.holds);
  CHECK(rep.lhs == Rational(5, 8));
  CHECK(rep.rhs == Rational(1));

  auto s3 = builders::symmetric(3);
  for (const auto& sub : all_subgroups(s3))
    if (sub.fc_elements().size() == 3) {
      auto r = gallagher_check(s3, sub);
      CHECK(r.holds);
      CHECK(r.lhs == Rational(1, 2));
      CHECK(r.rhs == Rational(1));
    }

  auto s4 = builders::symmetric(4);
  for (const auto& sub : all_subgroups(s4))
    if (sub.fc_elements().size() == 4 && is_normal(sub)) {
      auto r = gallagher_check(s4, sub);
      CHECK(r.holds);
      CHECK(r.rhs == Rational(1, 2));
    }

  // non-normal subgroups are refused
  for (const auto& sub : all_subgroups(s3))
    if (sub.fc_elements().size() == 2)
      CHECK_THROWS_AS(gallagher_check(s3, sub), NotNormal);
}

TEST_CASE("small-centraliser density bound") {
  auto s3 = builders::symmetric(3);
  auto r = xn_check(s3, 2);
  CHECK(r.bound_holds);
  CHECK(r.dc == Rational(1, 2));
  CHECK(r.xn_measure == Rational(3, 6));

  auto d4 = builders::dihedral(4);
  auto r1 = xn_check(d4, 1);
  CHECK(r1.bound_holds);
  CHECK(r1.xn_measure == Rational(2, 8));

  for (auto& [name, g] : builders::finite_library(12))
    for (i64 n = 1; n <= *g->order(); ++n) CHECK(xn_check(g, n).bound_holds);
}

TEST_CASE("faf witnesses across the classes") {
  auto s = faf_witness(builders::sympl_z2());
  REQUIRE(s.is_faf);
  CHECK(*s.n0->subgroup_order() == 2);
  CHECK(s.h0->index().value() == 1);

  auto v = faf_witness(builders::infinite_dihedral());
  REQUIRE(v.is_faf);
  CHECK(*v.n0->subgroup_order() == 1);
  CHECK(v.h0->index().value() == 2);

  auto h = faf_witness(builders::int_heisenberg());
  CHECK(!h.is_faf);

  auto f = faf_witness(builders::heisenberg_f2(2));
  REQUIRE(f.is_faf);
  CHECK(*f.n0->subgroup_order() == 2);

  for (auto& [name, g] : builders::finite_library(24)) CHECK(faf_witness(g).is_faf);
}

TEST_CASE("pairwise small-centraliser families") {
  auto h = builders::int_heisenberg();
  Rational sum;
  auto three = small_commuting_sum(h, 3, Rational(1, 10), &sum);
  CHECK(three.size() == 3);
  CHECK(sum == Rational(0));
  for (size_t i = 0; i < three.size(); ++i)
    for (size_t j = i + 1; j < three.size(); ++j) {
      Element q = h->multiply(h->invert(three[i]), three[j]);
      CHECK(!centralizer(h, q).index().is_finite());
    }
  auto one = small_commuting_sum(h, 1, Rational(1, 2));
  CHECK(one.size() == 1);

  CHECK_THROWS_AS(small_commuting_sum(builders::sympl_z2(), 2, Rational(1, 2)), HypothesisFails);
  CHECK_THROWS_AS(small_commuting_sum(builders::infinite_dihedral(), 2, Rational(1, 2)),
                  HypothesisFails);
}

TEST_CASE("commuting pairs in cosets of L x L") {
  // abelian: the canonical representative itself commutes
  auto c6 = builders::cyclic(6);
  auto sq = builders::direct_product(c6, c6);
  auto k = subgroup_from_generators(sq, {sq->make_fc(1 * 6 + 0), sq->make_fc(0 * 6 + 1)});
  auto found = commuting_transversal(c6, sq, k, sq->make_fc(2 * 6 + 3));
  REQUIRE(found.has_value());

  // order-8 truncation: centre-squared cosets of non-commuting pairs fail
  auto h1g = builders::heisenberg_f2(1);
  auto elems = h1g->ball(0);
  std::vector<uint16_t> centre;
  for (size_t i = 0; i < elems.size(); ++i)
    if (elems[i].v[0] == 0 && elems[i].v[1] == 0) centre.push_back((uint16_t)i);
  // convert to a finite Cayley handle indexed the same way
  std::vector<std::string> labels;
  std::vector<uint16_t> table(64);
  std::map<Element, uint16_t, ElementLess> idx;
  for (size_t i = 0; i < 8; ++i) idx[elems[i]] = (uint16_t)i;
  for (size_t i = 0; i < 8; ++i) labels.push_back(h1g->describe_element(elems[i]));
  for (size_t i = 0; i < 8; ++i)
    for (size_t j = 0; j < 8; ++j)
      table[i * 8 + j] = idx.at(h1g->multiply(elems[i], elems[j]));
  auto h1 = Group::make_finite_cayley(labels, table, true);
  auto sq8 = builders::direct_product(h1, h1);
  std::vector<Element> zgens;
  for (uint16_t z : centre) {
    zgens.push_back(sq8->make_fc((uint32_t)z * 8 + h1->fc_id()));
    zgens.push_back(sq8->make_fc((uint32_t)h1->fc_id() * 8 + z));
  }
  auto zz = subgroup_from_generators(sq8, zgens);
  // find non-commuting x, y in h1
  uint32_t xi = 0, yi = 0;
  for (uint32_t a = 0; a < 8 && !xi; ++a)
    for (uint32_t b = 0; b < 8; ++b)
      if (h1->fc_mul(a, b) != h1->fc_mul(b, a)) {
        xi = a;
        yi = b;
        break;
      }
  REQUIRE(h1->fc_mul(xi, yi) != h1->fc_mul(yi, xi));
  auto res = commuting_transversal(h1, sq8, zz, sq8->make_fc(xi * 8 + yi));
  CHECK(!res.has_value());
}

TEST_CASE("strata on a mixed free-and-torsion central pairing") {
  // base Z^2 + Z/2, centre Z/4, pairing image of order 2 inside the centre
  AbelianCoords base{2, {2}};
  AbelianCoords central{0, {4}};
  std::vector<Vec> beta(9, Vec{0});
  beta[0 * 3 + 1] = {2};
  beta[1 * 3 + 0] = {2};  // -2 = 2 mod 4
  beta[0 * 3 + 2] = {2};
  beta[2 * 3 + 0] = {2};
  auto g = Group::make_central_pairing(base, central, beta);
  auto t = centralizer_strata(g);
  t.validate();
  CHECK(dc_strata(t) == Rational(5, 8));
  REQUIRE(t.strata.size() == 2);
  CHECK(t.measures[0] == Rational(1, 4));  // annihilator-of-everything stratum
  CHECK(t.measures[1] == Rational(3, 4));

  // all-torsion variant of the same pairing: strata must equal the exhaustive
  // pair count through the Cayley-table conversion
  AbelianCoords base_t{0, {4, 4, 2}};
  auto gt = Group::make_central_pairing(base_t, central, beta);
  REQUIRE(*gt->order() == 128);
  auto tt = centralizer_strata(gt);
  tt.validate();
  CHECK(dc_strata(tt) == dc_finite(to_finite_cayley(gt)));
}

TEST_CASE("strata with a point group acting with a kernel") {
  // Q = C2 x C2 where only the first factor acts (by negation)
  auto q = builders::abelian({2, 2});
  Mat neg = {{-1, 0}, {0, -1}};
  std::vector<Mat> action(4);
  for (uint32_t i = 0; i < 4; ++i) {
    // abelian({2,2}) coordinates: index = 2*c1 + c2
    bool negate = (i / 2) % 2 == 1;
    action[i] = negate ? neg : lat::identity(2);
  }
  auto g = Group::make_virtually_abelian(2, q, action);
  auto t = centralizer_strata(g);
  t.validate();
  CHECK(dc_strata(t) == Rational(1, 4));
  CHECK(t.infinity_measure == Rational(1, 2));
  // quotient values dominate
  for (const Subgroup& n : mod_chain(g, {2, 3}))
    CHECK(!(dc_finite(quotient_group(n)) < Rational(1, 4)));
}

TEST_CASE("strata over a non-abelian point group") {
  // S3 permuting coordinates of Z^3, restricted to the sum-zero plane with
  // basis (1,-1,0), (0,1,-1)
  auto q = builders::symmetric(3);
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p = {0, 1, 2};
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  auto act = [&](const std::vector<int>& p, const Vec& x) {
    Vec v = {x[0], x[1] - x[0], -x[1]};  // e-coordinates
    Vec w(3);
    for (int k = 0; k < 3; ++k) w[p[k]] = v[k];
    return Vec{w[0], -w[2]};
  };
  std::vector<Mat> action;
  for (const auto& p : perms) {
    Vec c1 = act(p, {1, 0}), c2 = act(p, {0, 1});
    action.push_back(Mat{{c1[0], c2[0]}, {c1[1], c2[1]}});
  }
  auto g = Group::make_virtually_abelian(2, q, action);  // validates the homomorphism

  auto t = centralizer_strata(g);
  t.validate();
  CHECK(dc_strata(t) == Rational(1, 36));
  // the off-reflection-line translations form the only positive stratum
  bool found = false;
  for (size_t i = 0; i < t.strata.size(); ++i)
    if (t.strata[i].first == 6) {
      CHECK(t.measures[i] == Rational(1, 6));
      found = true;
    }
  CHECK(found);

  // independently derived quotient values: mod 5 gives 13/150, mod 7 gives 10/147
  auto rf = dc_rf_chain(g, mod_chain(g, {5, 7}));
  CHECK(rf.quotient_orders == std::vector<i64>{150, 294});
  CHECK(rf.values[0] == Rational(13, 150));
  CHECK(rf.values[1] == Rational(10, 147));
  for (const Rational& v : rf.values) CHECK(!(v < Rational(1, 36)));
}
