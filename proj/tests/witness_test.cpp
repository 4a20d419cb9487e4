#include <doctest.h>

#include <set>

#include "ccm/builders.hpp"
#include "ccm/witness.hpp"

using namespace ccm;

namespace {

RingElem coset_elem(const Subgroup& h, const Element& g) {
  return RingElem::from_coset(coset_of(h, g));
}

std::vector<WitnessAtom> coset_atoms(const GroupPtr&, const Subgroup& d) {
  std::vector<WitnessAtom> atoms;
  for (const Element& rep : transversal(d)) {
    RingElem c = coset_elem(d, rep);
    Rational m = c.measure();
    atoms.push_back({std::move(c), m});
  }
  return atoms;
}

}  // namespace

TEST_CASE("exact multi-transversal for a single finite-index constraint") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto w = build_witness(z, {{two, Rational(1, 2)}});
  CHECK(w.elements.size() == 2);
  CHECK(w.certificate.constraint_exact[0]);
  // one element in each coset: recompute independently
  std::set<i64> residues;
  for (const Element& e : w.elements) residues.insert(((e.v[0] % 2) + 2) % 2);
  CHECK(residues.size() == 2);
}

TEST_CASE("proof-driven sizing with an infinite-index constraint") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto triv = trivial_subgroup(z);
  // r = 2, so |F| = r [G:D] = 4; singleton proportions 1/4 < 1/3
  auto w = build_witness(z, {{two, Rational(1, 2)}, {triv, Rational(1, 3)}});
  CHECK(w.elements.size() == 4);
  CHECK(w.certificate.constraint_exact[0]);
  CHECK(w.certificate.constraint_deviations[1] == Rational(1, 4));
  // exactly two elements in each parity class
  int even = 0;
  for (const Element& e : w.elements) even += (((e.v[0] % 2) + 2) % 2) == 0;
  CHECK(even == 2);
}

TEST_CASE("five points on five distinct lines") {
  auto z2 = builders::z(2);
  auto hline = subgroup_from_generators(z2, {z2->make_va({1, 0}, 0)});
  auto w = build_witness(z2, {{hline, Rational(1, 4)}});
  CHECK(w.elements.size() == 5);
  CHECK(w.certificate.constraint_deviations[0] == Rational(1, 5));
  std::set<i64> ys;
  for (const Element& e : w.elements) ys.insert(e.v[1]);
  CHECK(ys.size() == 5);
}

TEST_CASE("enumeration horizon failures are reported") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto triv = trivial_subgroup(z);
  CHECK_THROWS_AS(
      build_witness(z, {{two, Rational(1, 2)}, {triv, Rational(1, 1000)}}, /*max_scan=*/50),
      EnumerationExhausted);
}

TEST_CASE("mean approximation sizing") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto w = approximate_mean(z, coset_atoms(z, two), 4);
  CHECK(w.elements.size() == 4);
  CHECK(w.certificate.atom_deviations[0] == Rational(0));
  CHECK(w.certificate.atom_deviations[1] == Rational(0));

  auto three = subgroup_from_generators(z, {z->make_va({3}, 0)});
  auto w3 = approximate_mean(z, coset_atoms(z, three), 3);
  CHECK(w3.elements.size() == 3);
  for (const Rational& d : w3.certificate.atom_deviations) CHECK(d == Rational(0));

  // degenerate targets: everything lands in the first atom
  auto even = coset_elem(two, z->identity());
  auto odd = coset_elem(two, z->make_va({1}, 0));
  auto w4 = approximate_mean(z, {{even, Rational(1)}, {odd, Rational(0)}}, 5);
  for (const Element& e : w4.elements) CHECK((((e.v[0] % 2) + 2) % 2) == 0);
}

TEST_CASE("partition validation") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto even = coset_elem(two, z->identity());
  auto odd = coset_elem(two, z->make_va({1}, 0));
  // overlap
  CHECK_THROWS_AS(approximate_mean(z, {{even, Rational(1, 2)}, {even, Rational(1, 2)}}, 4),
                  NotAPartition);
  // targets do not sum to one
  CHECK_THROWS_AS(approximate_mean(z, {{even, Rational(1, 2)}, {odd, Rational(1, 3)}}, 4),
                  NotAPartition);
  // not exhaustive
  auto four = subgroup_from_generators(z, {z->make_va({4}, 0)});
  CHECK_THROWS_AS(approximate_mean(z, {{coset_elem(four, z->identity()), Rational(1, 2)},
                                       {odd, Rational(1, 2)}}, 4),
                  NotAPartition);
  // a measure-zero infinite atom (a line) with positive target is legitimate
  auto z2 = builders::z(2);
  auto hline = subgroup_from_generators(z2, {z2->make_va({1, 0}, 0)});
  auto line0 = coset_elem(hline, z2->identity());
  auto rest = ring_xor(RingElem::whole(z2), line0);
  auto wline = approximate_mean(z2, {{line0, Rational(1, 2)}, {rest, Rational(1, 2)}}, 4);
  CHECK(wline.certificate.atom_deviations[0] == Rational(0));
  // but a singleton atom cannot absorb a positive target
  auto point = coset_elem(trivial_subgroup(z2), z2->identity());
  auto others = ring_xor(RingElem::whole(z2), point);
  CHECK_THROWS_AS(approximate_mean(z2, {{point, Rational(1, 2)}, {others, Rational(1, 2)}}, 4),
                  AtomTooSmall);
}

TEST_CASE("translate-disjoint witnesses") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto w = disjoint_translates_witness(z, coset_atoms(z, two), 4, {z->make_va({1}, 0)});
  CHECK(w.elements.size() == 4);
  CHECK(w.certificate.translate_disjoint[0]);
  // F and F+1 are disjoint, so |F xor sF| = 2|F| exactly
  std::set<i64> f;
  for (const Element& e : w.elements) f.insert(e.v[0]);
  for (i64 x : f) CHECK(!f.count(x + 1));

  // empty disjointness set reduces to the plain mean
  auto w0 = disjoint_translates_witness(z, coset_atoms(z, two), 4, {});
  auto plain = approximate_mean(z, coset_atoms(z, two), 4);
  REQUIRE(w0.elements.size() == plain.elements.size());
  for (size_t i = 0; i < w0.elements.size(); ++i) CHECK(w0.elements[i] == plain.elements[i]);

  // z^2 with horizontal adjacency forbidden
  auto z2 = builders::z(2);
  auto w2 = disjoint_translates_witness(z2, {{RingElem::whole(z2), Rational(1)}}, 3,
                                        {z2->make_va({1, 0}, 0)});
  CHECK(w2.elements.size() == 3);
  CHECK(w2.certificate.translate_disjoint[0]);

  // identity is rejected in the disjointness set
  CHECK_THROWS_AS(
      disjoint_translates_witness(z, coset_atoms(z, two), 4, {z->identity()}), SchemaError);
}

TEST_CASE("folner boxes") {
  auto z = builders::z(1);
  auto s = folner_set(z, {z->make_va({1}, 0)}, Rational(1, 2));
  CHECK(s.size() == 5);

  auto z2 = builders::z(2);
  auto s2 = folner_set(z2, {z2->make_va({1, 0}, 0), z2->make_va({0, 1}, 0)}, Rational(1, 4));
  CHECK(s2.size() == 81);  // 9 x 9 box, ratio 2/9 < 1/4

  auto sym3 = builders::symmetric(3);
  auto s3 = folner_set(sym3, {sym3->make_fc(2)}, Rational(1, 10));
  CHECK(s3.size() == 6);  // whole finite group, all ratios zero

  // rotation-invariant box in the quarter-turn crystal group
  auto r4 = builders::z2_rot4();
  auto sr = folner_set(r4, {r4->make_va({1, 0}, 0), r4->make_va({0, 0}, 1)}, Rational(1, 2));
  WitnessRequest req;
  req.g = r4;
  req.folner_k = {r4->make_va({1, 0}, 0), r4->make_va({0, 0}, 1)};
  for (const Rational& r : compute_certificate(req, sr).folner_ratios)
    CHECK(r < Rational(1, 2));

  // the integral Heisenberg group needs the asymmetric central extent
  auto h = builders::int_heisenberg();
  auto sh = folner_set(h, {h->make_cp({0}, {1, 0}), h->make_cp({1}, {0, 0})}, Rational(1, 2));
  WitnessRequest reqh;
  reqh.g = h;
  reqh.folner_k = {h->make_cp({0}, {1, 0}), h->make_cp({1}, {0, 0})};
  for (const Rational& r : compute_certificate(reqh, sh).folner_ratios)
    CHECK(r < Rational(1, 2));
}

TEST_CASE("two-scale amplification satisfies all three bounds at once") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto w = folner_amplify(z, coset_atoms(z, two), {z->make_va({1}, 0)}, Rational(1, 2));
  // size product
  CHECK(w.elements.size() == (size_t)w.request.size);
  for (const Rational& r : w.certificate.folner_ratios) CHECK(r < Rational(1, 2));
  for (const Rational& d : w.certificate.atom_deviations) CHECK(d < Rational(1, 2));
  assert_certificate(w);

  // finite group: the whole group with zero ratios
  auto s3 = builders::symmetric(3);
  auto wf = folner_amplify(s3, {{RingElem::whole(s3), Rational(1)}}, {s3->make_fc(3)},
                           Rational(1, 4));
  CHECK(wf.elements.size() == 6);
  CHECK(wf.certificate.folner_ratios[0] == Rational(0));

  // targets must be the exact measures
  auto even = coset_elem(two, z->identity());
  auto odd = coset_elem(two, z->make_va({1}, 0));
  CHECK_THROWS_AS(folner_amplify(z, {{even, Rational(1, 3)}, {odd, Rational(2, 3)}},
                                 {z->make_va({1}, 0)}, Rational(1, 2)),
                  SchemaError);
}

TEST_CASE("witness builds are deterministic") {
  auto z2 = builders::z(2);
  auto d = subgroup_from_generators(z2, {z2->make_va({2, 0}, 0), z2->make_va({0, 2}, 0)});
  auto a = disjoint_translates_witness(z2, coset_atoms(z2, d), 8, {z2->make_va({1, 1}, 0)});
  auto b = disjoint_translates_witness(z2, coset_atoms(z2, d), 8, {z2->make_va({1, 1}, 0)});
  REQUIRE(a.elements.size() == b.elements.size());
  for (size_t i = 0; i < a.elements.size(); ++i) CHECK(a.elements[i] == b.elements[i]);
}

TEST_CASE("certificate tampering is detected") {
  auto z = builders::z(1);
  auto two = subgroup_from_generators(z, {z->make_va({2}, 0)});
  auto w = build_witness(z, {{two, Rational(1, 2)}});
  w.certificate.constraint_deviations[0] = Rational(1, 7);
  CHECK_THROWS_AS(assert_certificate(w), Error);
}
