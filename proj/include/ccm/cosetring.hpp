#pragma once

#include <utility>
#include <vector>

#include "ccm/subgroup.hpp"

namespace ccm {

// An element of the Boolean ring generated by cosets, stored as
//
//   X  =  (disjoint union of cosets of one finite-index denominator D)
//        XOR (symmetric difference of cosets of infinite-index subgroups)
//
// The finite part is canonical up to the choice of D (measure and equality
// are refinement-invariant); the infinite part is canonicalized
// syntactically only: XOR-reduced and sorted. Semantic equality of infinite
// parts presented differently is not decided; measure and membership never
// need it.
class RingElem {
 public:
  RingElem() = default;  // empty handle; use the factories below

  static RingElem empty(const GroupPtr& g);
  static RingElem whole(const GroupPtr& g);
  static RingElem from_coset(const Coset& c);
  // finite Cayley groups: an explicit element set as a ring element
  static RingElem from_fc_set(const GroupPtr& g, const std::vector<uint16_t>& elems);

  const GroupPtr& group() const { return g_; }
  const Subgroup& denominator() const { return d_; }
  const std::vector<Element>& finite_reps() const { return freps_; }
  const std::vector<Coset>& infinite_part() const { return inf_; }

  bool syntactically_empty() const { return freps_.empty() && inf_.empty(); }
  bool finite_part_full() const;  // finite part equals the whole group

  // The unique coset-correct mean on the ring: number of finite-part cosets
  // over the index of the denominator. Infinite-index cosets carry measure 0.
  Rational measure() const;

  bool contains(const Element& e) const;

  // (finite part, infinite part) as ring elements
  std::pair<RingElem, RingElem> decompose() const;

  RingElem translate(const Element& g) const;  // g·X
  RingElem complement() const;                 // G ⊕ X

  // common-refinement equality of finite parts, syntactic infinite parts
  bool equals(const RingElem& o) const;

  friend RingElem ring_xor(const RingElem& x, const RingElem& y);
  friend RingElem ring_meet(const RingElem& x, const RingElem& y);

 private:
  void canonicalize();
  std::vector<Element> reps_refined_to(const Subgroup& finer) const;

  GroupPtr g_;
  Subgroup d_;
  std::vector<Element> freps_;
  std::vector<Coset> inf_;
};

RingElem ring_difference(const RingElem& x, const RingElem& y);  // x − y = x ⊕ (x ∧ y)

struct NeumannReport {
  bool covers = false;
  Rational reciprocal_sum;
};

// Decides whether the listed cosets cover the group, and sums the
// reciprocals of their indices. Infinite-index cosets contribute 0 to the
// sum and are discarded for the cover decision: a residual uncovered region
// would be a non-empty element of the finite-coset ring, hence would contain
// a coset of a finite-index subgroup, and no such coset can be covered by
// finitely many infinite-index cosets.
NeumannReport neumann_check(const std::vector<Coset>& cosets);

}  // namespace ccm
