#include "ccm/witness.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

using ElementSet = std::set<Element, ElementLess>;

void sort_elements(std::vector<Element>& v) { std::sort(v.begin(), v.end(), ElementLess{}); }

Rational max_coset_deviation(const Subgroup& h, const std::vector<Element>& f) {
  i64 n = (i64)f.size();
  if (n == 0) throw Error("empty witness set");
  std::map<Element, i64, ElementLess> counts;
  for (const Element& e : f) counts[coset_of(h, e).rep] += 1;
  auto ix = h.index();
  Rational share = ix.reciprocal();
  Rational worst(0);
  if (ix.is_finite()) {
    // every coset participates in the supremum, hit or not
    i64 seen = 0;
    for (auto& [rep, c] : counts) {
      worst = std::max(worst, abs(Rational(c, n) - share));
      ++seen;
    }
    if (seen < ix.value()) worst = std::max(worst, share);
  } else {
    for (auto& [rep, c] : counts) worst = std::max(worst, Rational(c, n));
  }
  return worst;
}

bool translates_disjoint(const GroupPtr& g, const ElementSet& f, const Element& s) {
  for (const Element& e : f)
    if (f.count(g->multiply(s, e))) return false;
  return true;
}

Rational folner_ratio(const GroupPtr& g, const std::vector<Element>& f, const Element& t) {
  ElementSet fs(f.begin(), f.end());
  i64 diff = 0;
  for (const Element& e : f)
    if (!fs.count(g->multiply(t, e))) ++diff;  // in gF \ F counted symmetrically below
  // |F ⊕ gF| = |F \ gF| + |gF \ F| and the two parts have equal size
  return Rational(2 * diff, (i64)f.size());
}

}  // namespace

WitnessCertificate compute_certificate(const WitnessRequest& req,
                                       const std::vector<Element>& elements) {
  WitnessCertificate cert;
  i64 n = (i64)elements.size();
  for (const WitnessConstraint& c : req.constraints) {
    Rational dev = max_coset_deviation(c.subgroup, elements);
    cert.constraint_deviations.push_back(dev);
    cert.constraint_exact.push_back(dev == Rational(0));
  }
  for (const WitnessAtom& a : req.atoms) {
    i64 cnt = 0;
    for (const Element& e : elements)
      if (a.set.contains(e)) ++cnt;
    Rational prop(cnt, n);
    cert.atom_proportions.push_back(prop);
    cert.atom_deviations.push_back(abs(prop - a.target));
  }
  ElementSet fs(elements.begin(), elements.end());
  for (const Element& s : req.disjointness)
    cert.translate_disjoint.push_back(translates_disjoint(req.g, fs, s));
  for (const Element& t : req.folner_k)
    cert.folner_ratios.push_back(folner_ratio(req.g, elements, t));
  return cert;
}

void assert_certificate(const WitnessSet& w) {
  WitnessCertificate fresh = compute_certificate(w.request, w.elements);
  auto fail = [](const char* msg) { throw Error(std::string("witness certificate: ") + msg); };
  if (fresh.constraint_deviations != w.certificate.constraint_deviations ||
      fresh.constraint_exact != w.certificate.constraint_exact ||
      fresh.atom_proportions != w.certificate.atom_proportions ||
      fresh.atom_deviations != w.certificate.atom_deviations ||
      fresh.translate_disjoint != w.certificate.translate_disjoint ||
      fresh.folner_ratios != w.certificate.folner_ratios)
    fail("recomputation mismatch");

  const WitnessRequest& req = w.request;
  for (size_t i = 0; i < req.constraints.size(); ++i) {
    if (req.constraints[i].subgroup.index().is_finite()) {
      if (!fresh.constraint_exact[i]) fail("finite-index proportion is not exact");
    } else if (!(fresh.constraint_deviations[i] < req.constraints[i].eps)) {
      fail("infinite-index deviation reached the tolerance");
    }
  }
  if (req.kind == WitnessKind::Mean || req.kind == WitnessKind::DisjointMean) {
    if ((i64)w.elements.size() != req.size) fail("wrong witness size");
    for (size_t i = 0; i < req.atoms.size(); ++i)
      if (fresh.atom_deviations[i] > Rational(1, req.size)) fail("atom deviation above 1/N");
  }
  if (req.kind == WitnessKind::FolnerAmplified) {
    for (const Rational& d : fresh.atom_deviations)
      if (!(d < req.folner_eps)) fail("amplified atom deviation reached the tolerance");
    for (const Rational& r : fresh.folner_ratios)
      if (!(r < req.folner_eps)) fail("boundary ratio reached the tolerance");
  }
  for (bool ok : fresh.translate_disjoint)
    if (!ok) fail("translate disjointness fails");
}

// ---------------------------------------------------------------------------
// basic builder

WitnessSet build_witness(const GroupPtr& g, std::vector<WitnessConstraint> constraints,
                         size_t max_scan) {
  std::vector<const WitnessConstraint*> finite, infinite;
  for (const WitnessConstraint& c : constraints) {
    if (c.subgroup.group().get() != g.get())
      throw MixedGroups("constraint subgroup of a different handle");
    if (!(c.eps > Rational(0))) throw SchemaError("tolerances must be positive");
    (c.subgroup.index().is_finite() ? finite : infinite).push_back(&c);
  }
  if (!infinite.empty() && g->order().has_value())
    throw SchemaError("infinite-index constraints require an infinite group");

  Subgroup d = whole_group(g);
  for (const WitnessConstraint* c : finite) d = intersect(d, c->subgroup);
  i64 nd = d.index().value();

  i64 r = 1;
  if (!infinite.empty()) {
    Rational min_eps = infinite[0]->eps;
    for (const WitnessConstraint* c : infinite) min_eps = std::min(min_eps, c->eps);
    while (!(Rational(1, intops::mul(r, nd)) < min_eps)) ++r;
  }

  std::vector<Element> reps = transversal(d);
  std::vector<Element> f;
  ElementSet fset;
  std::vector<ElementSet> used(infinite.size());
  for (const Element& rep : reps) {
    Coset target = coset_of(d, rep);
    for (i64 j = 0; j < r; ++j) {
      ElementStream stream(g, max_scan);
      for (;;) {
        Element cand = stream.next();
        if (fset.count(cand) || !target.contains(cand)) continue;
        bool ok = true;
        for (size_t k = 0; k < infinite.size() && ok; ++k)
          ok = !used[k].count(coset_of(infinite[k]->subgroup, cand).rep);
        if (!ok) continue;
        for (size_t k = 0; k < infinite.size(); ++k)
          used[k].insert(coset_of(infinite[k]->subgroup, cand).rep);
        f.push_back(cand);
        fset.insert(cand);
        break;
      }
    }
  }
  sort_elements(f);

  WitnessSet w;
  w.request.g = g;
  w.request.kind = WitnessKind::Basic;
  w.request.constraints = std::move(constraints);
  w.request.max_scan = max_scan;
  w.elements = std::move(f);
  w.certificate = compute_certificate(w.request, w.elements);
  assert_certificate(w);
  return w;
}

// ---------------------------------------------------------------------------
// partition approximants

namespace {

void validate_partition(const GroupPtr& g, const std::vector<WitnessAtom>& atoms) {
  if (atoms.empty()) throw NotAPartition("no atoms given");
  Rational total(0);
  RingElem all = RingElem::empty(g);
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].set.group().get() != g.get())
      throw MixedGroups("atom over a different handle");
    if (atoms[i].target < Rational(0)) throw SchemaError("negative target");
    total += atoms[i].target;
    for (size_t j = i + 1; j < atoms.size(); ++j)
      if (!ring_meet(atoms[i].set, atoms[j].set).syntactically_empty())
        throw NotAPartition("atoms are not pairwise disjoint");
    all = ring_xor(all, atoms[i].set);
  }
  if (!(total == Rational(1))) throw NotAPartition("targets do not sum to one");
  if (!all.infinite_part().empty() || !all.finite_part_full())
    throw NotAPartition("atoms do not exhaust the group");
}

// sound (not complete) infinitude check for a positive-target atom
bool atom_certified_infinite(const RingElem& x) {
  if (!x.finite_reps().empty()) return true;  // contains most of a finite-index coset
  if (x.infinite_part().size() == 1)
    return !x.infinite_part()[0].sub.subgroup_order().has_value();
  return false;
}

WitnessSet mean_witness(const GroupPtr& g, std::vector<WitnessAtom> atoms, i64 n,
                        std::vector<Element> s, WitnessKind kind, size_t max_scan) {
  if (n < 1) throw SchemaError("witness size must be positive");
  validate_partition(g, atoms);
  for (const Element& e : s) {
    if (e.owner != g.get()) throw MixedGroups("disjointness element of a different handle");
    if (e == g->identity()) throw SchemaError("disjointness set must exclude the identity");
  }

  bool finite_group = g->order().has_value();
  std::vector<i64> want(atoms.size(), 0);
  std::vector<i64> atom_sizes(atoms.size(), -1);
  if (finite_group) {
    for (size_t i = 0; i < atoms.size(); ++i) {
      i64 cnt = 0;
      for (const Element& e : g->ball(0))
        if (atoms[i].set.contains(e)) ++cnt;
      atom_sizes[i] = cnt;
    }
  }
  i64 assigned = 0;
  for (size_t i = 0; i < atoms.size(); ++i) {
    const Rational& t = atoms[i].target;
    want[i] = intops::fdiv(intops::mul(t.num(), n), t.den());
    if (t > Rational(0)) {
      if (!finite_group && !atom_certified_infinite(atoms[i].set))
        throw AtomTooSmall("positive-target atom is not certifiably infinite");
      if (finite_group && atom_sizes[i] < want[i])
        throw AtomTooSmall("atom has fewer elements than its share");
    }
    assigned += want[i];
  }
  while (assigned < n) {
    i64 before = assigned;
    for (size_t i = 0; i < atoms.size() && assigned < n; ++i) {
      if (!(atoms[i].target > Rational(0))) continue;
      if (finite_group && atom_sizes[i] <= want[i]) continue;
      ++want[i];
      ++assigned;
    }
    if (assigned == before) throw AtomTooSmall("atoms cannot absorb the requested size");
  }

  ElementSet chosen;
  std::vector<Element> f;
  for (size_t i = 0; i < atoms.size(); ++i) {
    ElementStream stream(g, max_scan);
    i64 taken = 0;
    while (taken < want[i]) {
      Element cand = stream.next();
      if (chosen.count(cand) || !atoms[i].set.contains(cand)) continue;
      bool ok = true;
      for (const Element& si : s) {
        if (chosen.count(g->multiply(si, cand)) ||
            chosen.count(g->multiply(g->invert(si), cand))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.insert(cand);
      f.push_back(cand);
      ++taken;
    }
  }
  sort_elements(f);

  WitnessSet w;
  w.request.g = g;
  w.request.kind = kind;
  w.request.atoms = std::move(atoms);
  w.request.size = n;
  w.request.disjointness = std::move(s);
  w.request.max_scan = max_scan;
  w.elements = std::move(f);
  w.certificate = compute_certificate(w.request, w.elements);
  assert_certificate(w);
  return w;
}

}  // namespace

WitnessSet approximate_mean(const GroupPtr& g, std::vector<WitnessAtom> atoms, i64 n,
                            size_t max_scan) {
  return mean_witness(g, std::move(atoms), n, {}, WitnessKind::Mean, max_scan);
}

WitnessSet disjoint_translates_witness(const GroupPtr& g, std::vector<WitnessAtom> atoms,
                                       i64 n, std::vector<Element> s, size_t max_scan) {
  return mean_witness(g, std::move(atoms), n, std::move(s), WitnessKind::DisjointMean,
                      max_scan);
}

// ---------------------------------------------------------------------------
// Følner sets

namespace {

std::vector<Element> folner_box(const GroupPtr& g, i64 side) {
  std::vector<Element> out;
  switch (g->cls()) {
    case GroupClass::FiniteCayley:
      return g->ball(0);
    case GroupClass::VirtuallyAbelian: {
      const GroupPtr& q = g->point_group();
      for (const Element& e : g->ball(side)) {
        if (e.q != q->fc_id()) continue;
        bool inside = true;
        for (uint32_t r = 0; r < q->fc_order() && inside; ++r) {
          Vec im = lat::mat_apply(g->action(r), e.v);
          for (i64 x : im) inside = inside && std::abs(x) <= side;
        }
        if (!inside) continue;
        for (uint32_t r = 0; r < q->fc_order(); ++r) out.push_back(g->make_va(e.v, r));
      }
      return out;
    }
    case GroupClass::CentralPairing: {
      // base free coordinates in [-side, side], central free coordinates in
      // [-side^2, side^2]: commuting corrections grow linearly in the base
      // box, so the central extent must outgrow them
      int fb = g->base().free_rank, fc = g->central().free_rank;
      i64 central_side = intops::mul(side, side);
      std::vector<Vec> bases, centrals;
      {
        Vec cur(fb, -side);
        for (;;) {
          bases.push_back(cur);
          int i = fb - 1;
          while (i >= 0) {
            if (++cur[i] <= side) break;
            cur[i] = -side;
            --i;
          }
          if (i < 0 || fb == 0) break;
        }
        if (fb == 0) bases.assign(1, Vec{});
      }
      {
        Vec cur(fc, -central_side);
        for (;;) {
          centrals.push_back(cur);
          int i = fc - 1;
          while (i >= 0) {
            if (++cur[i] <= central_side) break;
            cur[i] = -central_side;
            --i;
          }
          if (i < 0 || fc == 0) break;
        }
        if (fc == 0) centrals.assign(1, Vec{});
      }
      auto torsion_combos = [&](const AbelianCoords& c) {
        std::vector<Vec> combos;
        Vec cur(c.torsion.size(), 0);
        for (;;) {
          combos.push_back(cur);
          int i = (int)c.torsion.size() - 1;
          while (i >= 0) {
            if (++cur[i] < c.torsion[i]) break;
            cur[i] = 0;
            --i;
          }
          if (i < 0) break;
        }
        return combos;
      };
      auto bt = torsion_combos(g->base());
      auto nt = torsion_combos(g->central());
      for (const Vec& bfree : bases)
        for (const Vec& btor : bt)
          for (const Vec& nfree : centrals)
            for (const Vec& ntor : nt) {
              Vec a(g->base().ngens());
              for (int i = 0; i < fb; ++i) a[i] = bfree[i];
              for (size_t i = 0; i < btor.size(); ++i) a[fb + i] = btor[i];
              Vec nu(g->central().ngens());
              for (int i = 0; i < fc; ++i) nu[i] = nfree[i];
              for (size_t i = 0; i < ntor.size(); ++i) nu[fc + i] = ntor[i];
              out.push_back(g->make_cp(std::move(nu), std::move(a)));
            }
      return out;
    }
  }
  return out;
}

}  // namespace

std::vector<Element> folner_set(const GroupPtr& g, const std::vector<Element>& k,
                                const Rational& eps) {
  if (!(eps > Rational(0))) throw SchemaError("tolerance must be positive");
  for (const Element& e : k)
    if (e.owner != g.get()) throw MixedGroups("set element of a different handle");
  if (g->order().has_value()) {
    auto all = g->ball(0);
    sort_elements(all);
    return all;
  }
  for (i64 side = 1; side <= (i64(1) << 20); side *= 2) {
    std::vector<Element> s = folner_box(g, side);
    bool ok = true;
    for (const Element& t : k)
      if (!(folner_ratio(g, s, t) < eps)) {
        ok = false;
        break;
      }
    if (ok) {
      sort_elements(s);
      return s;
    }
  }
  throw Error("boundary ratio did not drop below the tolerance");
}

// ---------------------------------------------------------------------------
// two-scale amplification

WitnessSet folner_amplify(const GroupPtr& g, std::vector<WitnessAtom> atoms,
                          std::vector<Element> k, const Rational& eps, size_t max_scan) {
  if (!(eps > Rational(0))) throw SchemaError("tolerance must be positive");
  validate_partition(g, atoms);
  for (const WitnessAtom& a : atoms)
    if (!(a.target == a.set.measure()))
      throw SchemaError("amplified atoms must target their exact measures");

  if (g->order().has_value()) {
    WitnessSet w;
    w.request.g = g;
    w.request.kind = WitnessKind::FolnerAmplified;
    w.request.atoms = std::move(atoms);
    w.request.folner_k = std::move(k);
    w.request.folner_eps = eps;
    w.request.max_scan = max_scan;
    w.elements = g->ball(0);
    sort_elements(w.elements);
    w.request.size = (i64)w.elements.size();
    w.certificate = compute_certificate(w.request, w.elements);
    assert_certificate(w);
    return w;
  }

  Rational half = eps / Rational(2);
  std::vector<Element> s =
      k.empty() ? std::vector<Element>{g->identity()} : folner_set(g, k, half);

  // refine the translated family into Boolean atoms
  std::vector<RingElem> family;
  auto push_unique = [&](const RingElem& x) {
    for (const RingElem& f : family)
      if (f.equals(x)) return;
    family.push_back(x);
  };
  for (const WitnessAtom& a : atoms) {
    push_unique(a.set);
    for (const Element& si : s) push_unique(a.set.translate(g->invert(si)));
  }
  std::vector<RingElem> parts = {RingElem::whole(g)};
  for (const RingElem& c : family) {
    std::vector<RingElem> next;
    for (const RingElem& p : parts) {
      RingElem in = ring_meet(p, c);
      RingElem out = ring_xor(p, in);
      if (!in.syntactically_empty()) next.push_back(std::move(in));
      if (!out.syntactically_empty()) next.push_back(std::move(out));
      if (next.size() > 512) throw Error("atom refinement grew too large");
    }
    parts = std::move(next);
  }
  std::vector<WitnessAtom> refined;
  for (RingElem& p : parts) {
    Rational m = p.measure();
    refined.push_back(WitnessAtom{std::move(p), m});
  }

  // core size: per-translate deviation at most (#parts)/n0 <= eps/2
  i64 n0 = intops::mul((i64)refined.size(), intops::add(intops::fdiv(2 * half.den(), half.num()), 1));

  // disjointness over S^-1 S
  std::vector<Element> sdiff;
  {
    ElementSet seen;
    for (const Element& a : s)
      for (const Element& b : s) {
        Element d = g->multiply(g->invert(a), b);
        if (d == g->identity()) continue;
        if (seen.insert(d).second) sdiff.push_back(d);
      }
  }

  WitnessSet core = disjoint_translates_witness(g, refined, n0, sdiff, max_scan);

  ElementSet big;
  for (const Element& si : s)
    for (const Element& e : core.elements) {
      if (!big.insert(g->multiply(si, e)).second)
        throw Error("amplified translates are not disjoint");
    }

  WitnessSet w;
  w.request.g = g;
  w.request.kind = WitnessKind::FolnerAmplified;
  w.request.atoms = std::move(atoms);
  w.request.folner_k = std::move(k);
  w.request.folner_eps = eps;
  w.request.max_scan = max_scan;
  w.request.size = (i64)big.size();
  w.elements.assign(big.begin(), big.end());
  w.certificate = compute_certificate(w.request, w.elements);
  assert_certificate(w);
  return w;
}

}  // namespace ccm
