#include "ccm/cosetring.hpp"

#include <algorithm>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

void xor_reduce_cosets(std::vector<Coset>& v) {
  std::sort(v.begin(), v.end(), [](const Coset& a, const Coset& b) {
    return coset_compare(a, b) < 0;
  });
  std::vector<Coset> out;
  size_t i = 0;
  while (i < v.size()) {
    size_t j = i;
    while (j < v.size() && coset_compare(v[i], v[j]) == 0) ++j;
    if ((j - i) % 2 == 1) out.push_back(v[i]);
    i = j;
  }
  v = std::move(out);
}

void sort_reps(std::vector<Element>& reps) {
  std::sort(reps.begin(), reps.end(), ElementLess{});
}

std::vector<Element> rep_symmetric_difference(const std::vector<Element>& a,
                                              const std::vector<Element>& b) {
  std::vector<Element> out;
  size_t i = 0, j = 0;
  ElementLess less;
  while (i < a.size() || j < b.size()) {
    if (i == a.size()) {
      out.push_back(b[j++]);
    } else if (j == b.size()) {
      out.push_back(a[i++]);
    } else if (less(a[i], b[j])) {
      out.push_back(a[i++]);
    } else if (less(b[j], a[i])) {
      out.push_back(b[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

void RingElem::canonicalize() {
  sort_reps(freps_);
  xor_reduce_cosets(inf_);
  if (freps_.empty() && !d_.is_whole_group()) d_ = whole_group(g_);
}

RingElem RingElem::empty(const GroupPtr& g) {
  RingElem x;
  x.g_ = g;
  x.d_ = whole_group(g);
  return x;
}

RingElem RingElem::whole(const GroupPtr& g) {
  RingElem x;
  x.g_ = g;
  x.d_ = whole_group(g);
  x.freps_.push_back(coset_of(x.d_, g->identity()).rep);
  return x;
}

RingElem RingElem::from_coset(const Coset& c) {
  RingElem x;
  x.g_ = c.sub.group();
  if (c.sub.index().is_finite()) {
    x.d_ = c.sub;
    x.freps_.push_back(c.rep);
  } else {
    x.d_ = whole_group(x.g_);
    x.inf_.push_back(c);
  }
  return x;
}

RingElem RingElem::from_fc_set(const GroupPtr& g, const std::vector<uint16_t>& elems) {
  if (g->cls() != GroupClass::FiniteCayley)
    throw UnsupportedForClass("explicit element sets require a finite Cayley group");
  RingElem x;
  x.g_ = g;
  x.d_ = trivial_subgroup(g);
  for (uint16_t e : elems) x.freps_.push_back(g->make_fc(e));
  x.canonicalize();
  return x;
}

bool RingElem::finite_part_full() const {
  auto ix = d_.index();
  return ix.is_finite() && (i64)freps_.size() == ix.value();
}

Rational RingElem::measure() const {
  auto ix = d_.index();
  if (!ix.is_finite()) throw Error("denominator subgroup has infinite index");
  return Rational((i64)freps_.size(), ix.value());
}

bool RingElem::contains(const Element& e) const {
  if (e.owner != g_.get()) throw MixedGroups("membership across group handles");
  int parity = 0;
  for (const Element& r : freps_) {
    if (d_.contains(g_->multiply(g_->invert(r), e))) {
      parity ^= 1;
      break;  // finite-part cosets are disjoint
    }
  }
  for (const Coset& c : inf_)
    if (c.contains(e)) parity ^= 1;
  return parity == 1;
}

std::pair<RingElem, RingElem> RingElem::decompose() const {
  RingElem fin = empty(g_);
  fin.d_ = d_;
  fin.freps_ = freps_;
  fin.canonicalize();
  RingElem inf = empty(g_);
  inf.inf_ = inf_;
  inf.canonicalize();
  return {fin, inf};
}

RingElem RingElem::translate(const Element& t) const {
  if (t.owner != g_.get()) throw MixedGroups("translating by element of another handle");
  RingElem x = empty(g_);
  x.d_ = d_;
  for (const Element& r : freps_)
    x.freps_.push_back(coset_of(d_, g_->multiply(t, r)).rep);
  for (const Coset& c : inf_)
    x.inf_.push_back(coset_of(c.sub, g_->multiply(t, c.rep)));
  x.canonicalize();
  return x;
}

RingElem RingElem::complement() const { return ring_xor(whole(g_), *this); }

std::vector<Element> RingElem::reps_refined_to(const Subgroup& finer) const {
  if (finer.equals(d_)) return freps_;
  std::vector<Element> out;
  auto t = relative_transversal(d_, finer);
  for (const Element& r : freps_)
    for (const Element& ti : t)
      out.push_back(coset_of(finer, g_->multiply(r, ti)).rep);
  sort_reps(out);
  return out;
}

bool RingElem::equals(const RingElem& o) const {
  if (g_.get() != o.g_.get()) throw MixedGroups("comparing ring elements of distinct handles");
  if (inf_.size() != o.inf_.size()) return false;
  for (size_t i = 0; i < inf_.size(); ++i)
    if (coset_compare(inf_[i], o.inf_[i]) != 0) return false;
  Subgroup common = intersect(d_, o.d_);
  auto a = reps_refined_to(common);
  auto b = o.reps_refined_to(common);
  return a == b;
}

RingElem ring_xor(const RingElem& x, const RingElem& y) {
  if (x.g_.get() != y.g_.get()) throw MixedGroups("xor across group handles");
  RingElem out = RingElem::empty(x.g_);
  Subgroup common = intersect(x.d_, y.d_);
  out.d_ = common;
  out.freps_ = rep_symmetric_difference(x.reps_refined_to(common), y.reps_refined_to(common));
  out.inf_ = x.inf_;
  out.inf_.insert(out.inf_.end(), y.inf_.begin(), y.inf_.end());
  out.canonicalize();
  return out;
}

RingElem ring_meet(const RingElem& x, const RingElem& y) {
  if (x.g_.get() != y.g_.get()) throw MixedGroups("meet across group handles");
  const GroupPtr& g = x.g_;
  RingElem out = RingElem::empty(g);
  Subgroup common = intersect(x.d_, y.d_);
  out.d_ = common;

  // finite ∧ finite: cosets of the common refinement
  for (const Element& r : x.freps_)
    for (const Element& s : y.freps_) {
      auto c = coset_intersection(Coset{x.d_, r}, Coset{y.d_, s});
      if (c) out.freps_.push_back(c->rep);
    }

  // finite ∧ infinite and infinite ∧ infinite: infinite-index pieces
  auto cross = [&](const Subgroup& dsub, const std::vector<Element>& reps,
                   const std::vector<Coset>& cosets) {
    for (const Element& r : reps)
      for (const Coset& c : cosets) {
        auto piece = coset_intersection(Coset{dsub, r}, c);
        if (piece) out.inf_.push_back(*piece);
      }
  };
  cross(x.d_, x.freps_, y.inf_);
  cross(y.d_, y.freps_, x.inf_);
  for (const Coset& a : x.inf_)
    for (const Coset& b : y.inf_) {
      auto piece = coset_intersection(a, b);
      if (piece) out.inf_.push_back(*piece);
    }

  out.canonicalize();
  return out;
}

RingElem ring_difference(const RingElem& x, const RingElem& y) {
  return ring_xor(x, ring_meet(x, y));
}

NeumannReport neumann_check(const std::vector<Coset>& cosets) {
  if (cosets.empty()) throw Error("neumann_check needs at least one coset");
  const GroupPtr& g = cosets[0].sub.group();
  for (const Coset& c : cosets)
    if (c.sub.group().get() != g.get())
      throw MixedGroups("cover cosets from distinct group handles");

  NeumannReport rep;
  rep.reciprocal_sum = Rational(0);
  std::vector<const Coset*> finite;
  for (const Coset& c : cosets) {
    rep.reciprocal_sum += c.index().reciprocal();
    if (c.index().is_finite()) finite.push_back(&c);
  }

  if (finite.empty()) {
    rep.covers = false;
    return rep;
  }

  Subgroup d = finite[0]->sub;
  for (size_t i = 1; i < finite.size(); ++i) d = intersect(d, finite[i]->sub);
  bool covers = true;
  for (const Element& t : transversal(d)) {
    bool hit = false;
    for (const Coset* c : finite)
      if (c->contains(t)) {
        hit = true;
        break;
      }
    if (!hit) {
      covers = false;
      break;
    }
  }
  rep.covers = covers;
  if (covers && rep.reciprocal_sum < Rational(1))
    throw Error("cover with reciprocal index sum below one");
  return rep;
}

}  // namespace ccm
