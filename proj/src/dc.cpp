#include "ccm/dc.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

void require_fc(const GroupPtr& g, const char* what) {
  if (g->cls() != GroupClass::FiniteCayley)
    throw UnsupportedForClass(std::string(what) + " requires a finite Cayley group");
}

}  // namespace

void StratumTable::validate() const {
  for (size_t i = 0; i < strata.size(); ++i)
    for (size_t j = i + 1; j < strata.size(); ++j)
      if (!ring_meet(strata[i].second, strata[j].second).syntactically_empty())
        throw Error("strata are not pairwise disjoint");
  for (const auto& [m, u] : strata)
    if (!ring_meet(u, u_infinity).syntactically_empty())
      throw Error("finite stratum meets the infinite stratum");
  Rational total = infinity_measure;
  for (const Rational& r : measures) total += r;
  if (!(total == Rational(1))) throw Error("stratum measures do not sum to one");
}

Rational dc_finite(const GroupPtr& g) {
  require_fc(g, "dc_finite");
  i64 n = (i64)g->fc_order();
  i64 commuting = 0;
  for (uint32_t a = 0; a < (uint32_t)n; ++a)
    for (uint32_t b = 0; b < (uint32_t)n; ++b)
      if (g->fc_mul(a, b) == g->fc_mul(b, a)) ++commuting;
  return Rational(commuting, intops::mul(n, n));
}

Rational product_mean_finite(const GroupPtr& g,
                             const std::vector<std::pair<uint32_t, uint32_t>>& pairs) {
  require_fc(g, "product_mean_finite");
  std::set<std::pair<uint32_t, uint32_t>> dedup(pairs.begin(), pairs.end());
  i64 n = (i64)g->fc_order();
  return Rational((i64)dedup.size(), intops::mul(n, n));
}

Rational product_mean_finite(const GroupPtr& g,
                             const std::function<bool(uint32_t, uint32_t)>& pred) {
  require_fc(g, "product_mean_finite");
  i64 n = (i64)g->fc_order();
  i64 count = 0;
  for (uint32_t a = 0; a < (uint32_t)n; ++a)
    for (uint32_t b = 0; b < (uint32_t)n; ++b)
      if (pred(a, b)) ++count;
  return Rational(count, intops::mul(n, n));
}

// ---------------------------------------------------------------------------
// centraliser strata

namespace {

StratumTable strata_fc(const GroupPtr& g) {
  i64 n = (i64)g->fc_order();
  std::map<i64, std::vector<uint16_t>> by_index;
  for (uint32_t x = 0; x < (uint32_t)n; ++x) {
    i64 c = 0;
    for (uint32_t y = 0; y < (uint32_t)n; ++y)
      if (g->fc_mul(x, y) == g->fc_mul(y, x)) ++c;
    by_index[n / c].push_back((uint16_t)x);
  }
  StratumTable t;
  t.g = g;
  for (auto& [m, elems] : by_index)
    t.strata.emplace_back(m, RingElem::from_fc_set(g, elems));
  t.u_infinity = RingElem::empty(g);
  for (auto& [m, u] : t.strata) t.measures.push_back(u.measure());
  t.infinity_measure = Rational(0);
  return t;
}

// subgroups of the point group contained in `inside`, as sorted index sets
std::vector<std::vector<uint16_t>> fc_subgroups_inside(const GroupPtr& q,
                                                       const std::vector<uint16_t>& inside) {
  std::vector<std::vector<uint16_t>> out;
  for (const Subgroup& s : all_subgroups(q)) {
    const auto& el = s.fc_elements();
    if (std::includes(inside.begin(), inside.end(), el.begin(), el.end())) out.push_back(el);
  }
  return out;
}

StratumTable strata_va(const GroupPtr& g) {
  const GroupPtr& q = g->point_group();
  int n = g->rank();

  // fixed-vector lattice of a set of point-group elements
  auto fix_lattice = [&](const std::vector<uint16_t>& elems) {
    Mat cur = lat::identity(n);
    for (uint16_t r : elems) {
      Mat m = g->action(r);
      for (int i = 0; i < n; ++i) m[i][i] = intops::sub(m[i][i], 1);
      cur = lat::intersect(cur, lat::kernel(lat::transpose(m)));
      if (cur.empty()) break;
    }
    return cur;
  };

  // q-slice subset {(w, q0) : w in lattice} as a ring element
  auto slice = [&](uint32_t q0, const Mat& lattice) {
    std::vector<Element> gens;
    for (const Vec& r : lattice) gens.push_back(g->make_va(r, q->fc_id()));
    Subgroup s = subgroup_from_generators(g, std::move(gens));
    return RingElem::from_coset(coset_of(s, g->make_va(Vec(n, 0), q0)));
  };

  std::map<i64, RingElem> by_m;
  for (uint32_t q0 = 0; q0 < q->fc_order(); ++q0) {
    if (!(g->action(q0) == lat::identity(n))) continue;  // infinite centraliser index
    std::vector<uint16_t> cq;
    for (uint32_t r = 0; r < q->fc_order(); ++r)
      if (q->fc_mul(q0, r) == q->fc_mul(r, q0)) cq.push_back((uint16_t)r);
    for (const auto& rset : fc_subgroups_inside(q, cq)) {
      if (!std::binary_search(rset.begin(), rset.end(), (uint16_t)q0)) continue;
      RingElem piece = slice(q0, fix_lattice(rset));
      for (uint16_t r : cq) {
        if (std::binary_search(rset.begin(), rset.end(), r)) continue;
        std::vector<Element> bigger_gens;
        for (uint16_t x : rset) bigger_gens.push_back(q->make_fc(x));
        bigger_gens.push_back(q->make_fc(r));
        Subgroup bigger = subgroup_from_generators(q, std::move(bigger_gens));
        piece = ring_difference(piece, slice(q0, fix_lattice(bigger.fc_elements())));
        if (piece.syntactically_empty()) break;
      }
      if (piece.syntactically_empty()) continue;
      i64 m = (i64)q->fc_order() / (i64)rset.size();
      auto it = by_m.find(m);
      if (it == by_m.end())
        by_m.emplace(m, piece);
      else
        it->second = ring_xor(it->second, piece);
    }
  }

  StratumTable t;
  t.g = g;
  RingElem all = RingElem::empty(g);
  for (auto& [m, u] : by_m) {
    if (u.syntactically_empty()) continue;
    t.strata.emplace_back(m, u);
    t.measures.push_back(u.measure());
    all = ring_xor(all, u);
  }
  t.u_infinity = ring_xor(RingElem::whole(g), all);
  t.infinity_measure = Rational(1);
  for (const Rational& r : t.measures) t.infinity_measure -= r;
  return t;
}

// torsion elements of the central group, as full central-coordinate vectors
std::vector<Vec> cp_torsion_elements(const Group& g) {
  const AbelianCoords& nc = g.central();
  std::vector<Vec> out;
  Vec cur(nc.ngens(), 0);
  size_t count = 1;
  for (i64 d : nc.torsion) count *= (size_t)d;
  out.reserve(count);
  for (;;) {
    out.push_back(cur);
    int i = (int)nc.torsion.size() - 1;
    while (i >= 0) {
      if (++cur[nc.free_rank + i] < nc.torsion[i]) break;
      cur[nc.free_rank + i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

// all subgroups of the torsion part of the central group, each as a sorted
// vector of element vectors (containing zero)
std::vector<std::vector<Vec>> cp_torsion_subgroups(const Group& g) {
  const AbelianCoords& nc = g.central();
  auto add = [&](const Vec& a, const Vec& b) { return nc.reduce(lat::add(a, b)); };
  auto closure = [&](std::vector<Vec> seed) {
    std::set<Vec> have(seed.begin(), seed.end());
    have.insert(Vec(nc.ngens(), 0));
    std::deque<Vec> work(have.begin(), have.end());
    while (!work.empty()) {
      Vec x = work.front();
      work.pop_front();
      for (const Vec& s : seed) {
        Vec y = add(x, s);
        if (have.insert(y).second) work.push_back(y);
      }
    }
    return std::vector<Vec>(have.begin(), have.end());
  };
  auto elements = cp_torsion_elements(g);
  std::set<std::vector<Vec>> known;
  std::deque<std::vector<Vec>> work;
  auto triv = closure({});
  known.insert(triv);
  work.push_back(triv);
  while (!work.empty()) {
    auto h = work.front();
    work.pop_front();
    std::set<Vec> hset(h.begin(), h.end());
    for (const Vec& x : elements) {
      if (hset.count(x)) continue;
      auto seed = h;
      seed.push_back(x);
      auto closed = closure(std::move(seed));
      if (known.insert(closed).second) work.push_back(closed);
    }
  }
  return std::vector<std::vector<Vec>>(known.begin(), known.end());
}

// base sublattice L_M = { b : beta(b, e_j) in M for all j }, for an
// M-lattice given in central coordinates (relation rows included)
Mat cp_level_lattice(const Group& g, const Mat& mlat) {
  const AbelianCoords& ac = g.base();
  const AbelianCoords& nc = g.central();
  int na = ac.ngens(), nn = nc.ngens();
  Mat cond;  // row per base generator i, blocks over j of beta(i, j)
  for (int i = 0; i < na; ++i) {
    Vec row;
    row.reserve((size_t)na * nn);
    for (int j = 0; j < na; ++j) {
      const Vec& bij = g.beta(i, j);
      row.insert(row.end(), bij.begin(), bij.end());
    }
    cond.push_back(std::move(row));
  }
  Mat blockrel;
  for (int j = 0; j < na; ++j)
    for (const Vec& r : mlat) {
      Vec row((size_t)na * nn, 0);
      for (int k = 0; k < nn; ++k) row[(size_t)j * nn + k] = r[k];
      blockrel.push_back(std::move(row));
    }
  Mat ker = lat::kernel(lat::stack(cond, blockrel));
  Mat lm;
  for (const Vec& k : ker) {
    Vec b(na, 0);
    bool nz = false;
    for (int i = 0; i < na; ++i) {
      b[i] = k[i];
      nz = nz || b[i] != 0;
    }
    if (nz) lm.push_back(std::move(b));
  }
  return lat::sum(lat::hnf(std::move(lm)), ac.relation_rows());
}

// the subgroup N x L for a base sublattice L
Subgroup cp_central_times(const GroupPtr& g, const Mat& l) {
  int na = g->base().ngens(), nn = g->central().ngens();
  std::vector<Element> gens;
  for (int k = 0; k < nn; ++k) {
    Vec nu(nn, 0);
    nu[k] = 1;
    gens.push_back(g->make_cp(std::move(nu), Vec(na, 0)));
  }
  for (const Vec& r : l) gens.push_back(g->make_cp(Vec(nn, 0), r));
  return subgroup_from_generators(g, std::move(gens));
}

// elements with finite-index centraliser form this subgroup
Subgroup finite_centralizer_subgroup(const GroupPtr& g) {
  switch (g->cls()) {
    case GroupClass::FiniteCayley:
      return whole_group(g);
    case GroupClass::VirtuallyAbelian: {
      std::vector<Element> gens;
      for (int i = 0; i < g->rank(); ++i) {
        Vec v(g->rank(), 0);
        v[i] = 1;
        gens.push_back(g->make_va(std::move(v), g->point_group()->fc_id()));
      }
      for (uint32_t q = 0; q < g->point_group()->fc_order(); ++q)
        if (g->action(q) == lat::identity(g->rank()))
          gens.push_back(g->make_va(Vec(g->rank(), 0), q));
      return subgroup_from_generators(g, std::move(gens));
    }
    case GroupClass::CentralPairing: {
      Mat torsion_full;  // the whole torsion part of the central group
      const AbelianCoords& nc = g->central();
      for (size_t j = 0; j < nc.torsion.size(); ++j) {
        Vec r(nc.ngens(), 0);
        r[nc.free_rank + j] = 1;
        torsion_full.push_back(std::move(r));
      }
      torsion_full = lat::hnf(lat::stack(torsion_full, nc.relation_rows()));
      return cp_central_times(g, cp_level_lattice(*g, torsion_full));
    }
  }
  throw Error("unreachable");
}

StratumTable strata_cp(const GroupPtr& g) {
  const AbelianCoords& nc = g->central();

  auto level_lattice = [&](const std::vector<Vec>& msubgroup) {
    Mat mlat = lat::hnf(lat::stack(Mat(msubgroup.begin(), msubgroup.end()),
                                   nc.relation_rows()));
    return cp_level_lattice(*g, mlat);
  };
  auto level_set = [&](const Mat& l) {
    return RingElem::from_coset(coset_of(cp_central_times(g, l), g->identity()));
  };

  auto subgroups = cp_torsion_subgroups(*g);
  std::map<i64, RingElem> by_m;
  for (const auto& m : subgroups) {
    RingElem piece = level_set(level_lattice(m));
    std::set<Vec> mset(m.begin(), m.end());
    for (const auto& sub : subgroups) {
      if (sub.size() >= m.size()) continue;
      bool proper = true;
      for (const Vec& x : sub) proper = proper && mset.count(x);
      if (!proper) continue;
      piece = ring_difference(piece, level_set(level_lattice(sub)));
      if (piece.syntactically_empty()) break;
    }
    if (piece.syntactically_empty()) continue;
    i64 order = (i64)m.size();
    auto it = by_m.find(order);
    if (it == by_m.end())
      by_m.emplace(order, piece);
    else
      it->second = ring_xor(it->second, piece);
  }

  StratumTable t;
  t.g = g;
  RingElem all = RingElem::empty(g);
  for (auto& [m, u] : by_m) {
    if (u.syntactically_empty()) continue;
    t.strata.emplace_back(m, u);
    t.measures.push_back(u.measure());
    all = ring_xor(all, u);
  }
  t.u_infinity = ring_xor(RingElem::whole(g), all);
  t.infinity_measure = Rational(1);
  for (const Rational& r : t.measures) t.infinity_measure -= r;
  return t;
}

}  // namespace

StratumTable centralizer_strata(const GroupPtr& g) {
  switch (g->cls()) {
    case GroupClass::FiniteCayley:
      return strata_fc(g);
    case GroupClass::VirtuallyAbelian:
      return strata_va(g);
    case GroupClass::CentralPairing:
      return strata_cp(g);
  }
  throw Error("unreachable");
}

Rational dc_strata(const StratumTable& table) {
  Rational sum(0);
  for (size_t i = 0; i < table.strata.size(); ++i)
    sum += table.measures[i] / Rational(table.strata[i].first);
  return sum;
}

Rational dc_strata(const GroupPtr& g) { return dc_strata(centralizer_strata(g)); }

// ---------------------------------------------------------------------------
// finite quotients

RfChainResult dc_rf_chain(const GroupPtr& g, const std::vector<Subgroup>& chain, i64 cap) {
  RfChainResult res;
  res.nested = true;
  for (size_t i = 0; i < chain.size(); ++i) {
    if (chain[i].group().get() != g.get())
      throw MixedGroups("chain subgroup of a different handle");
    GroupPtr q = quotient_group(chain[i], cap);
    res.quotient_orders.push_back(*q->order());
    res.values.push_back(dc_finite(q));
    if (i > 0 && !chain[i].subgroup_of(chain[i - 1])) res.nested = false;
  }
  res.non_increasing = true;
  for (size_t i = 1; i < res.values.size(); ++i)
    if (res.values[i] > res.values[i - 1]) res.non_increasing = false;
  return res;
}

std::vector<Subgroup> mod_chain(const GroupPtr& g, const std::vector<i64>& moduli) {
  std::vector<Subgroup> out;
  for (i64 m : moduli) {
    if (m < 1) throw SchemaError("modulus must be positive");
    std::vector<Element> gens;
    switch (g->cls()) {
      case GroupClass::FiniteCayley:
        throw UnsupportedForClass("mod_chain applies to the infinite classes");
      case GroupClass::VirtuallyAbelian: {
        for (int i = 0; i < g->rank(); ++i) {
          Vec v(g->rank(), 0);
          v[i] = m;
          gens.push_back(g->make_va(std::move(v), g->point_group()->fc_id()));
        }
        break;
      }
      case GroupClass::CentralPairing: {
        for (int j = 0; j < g->base().ngens(); ++j) {
          Vec a(g->base().ngens(), 0);
          a[j] = m;
          gens.push_back(g->make_cp(Vec(g->central().ngens(), 0), std::move(a)));
        }
        for (int k = 0; k < g->central().ngens(); ++k) {
          Vec nu(g->central().ngens(), 0);
          nu[k] = m;
          gens.push_back(g->make_cp(std::move(nu), Vec(g->base().ngens(), 0)));
        }
        break;
      }
    }
    out.push_back(subgroup_from_generators(g, std::move(gens)));
  }
  return out;
}

GallagherReport gallagher_check(const GroupPtr& g, const Subgroup& n) {
  require_fc(g, "gallagher_check");
  if (!is_normal(n)) throw NotNormal("gallagher_check needs a normal subgroup");
  GallagherReport rep;
  rep.lhs = dc_finite(g);
  rep.rhs = dc_finite(quotient_group(n, (i64)g->fc_order())) * dc_finite(subgroup_as_group(n));
  rep.holds = !(rep.lhs > rep.rhs);
  return rep;
}

XnReport xn_check(const GroupPtr& g, i64 n) {
  require_fc(g, "xn_check");
  if (n < 1) throw SchemaError("xn_check needs n >= 1");
  i64 size = (i64)g->fc_order();
  i64 in_xn = 0;
  for (uint32_t x = 0; x < (uint32_t)size; ++x) {
    i64 c = 0;
    for (uint32_t y = 0; y < (uint32_t)size; ++y)
      if (g->fc_mul(x, y) == g->fc_mul(y, x)) ++c;
    if (size / c <= n) ++in_xn;
  }
  XnReport rep;
  rep.dc = dc_finite(g);
  rep.xn_measure = Rational(in_xn, size);
  rep.bound_holds = !(rep.dc > rep.xn_measure + Rational(1, n));
  return rep;
}

// ---------------------------------------------------------------------------
// FAF witnesses

namespace {

void verify_witness(const GroupPtr& g, const Subgroup& n0, const Subgroup& h0) {
  auto n0_order = n0.subgroup_order();
  if (!n0_order) throw Error("witness normal part is infinite");
  if (!h0.index().is_finite()) throw Error("witness carrier has infinite index");
  if (!is_normal(n0) || !is_normal(h0)) throw Error("witness subgroups are not normal");
  if (!n0.subgroup_of(h0)) throw Error("witness containment fails");
  auto h0gens = h0.canonical_generators();
  for (const Element& a : n0.canonical_generators())
    for (const Element& b : h0gens)
      if (!(g->commutator(a, b) == g->identity()))
        throw Error("witness normal part is not central in the carrier");
  for (size_t i = 0; i < h0gens.size(); ++i)
    for (size_t j = i + 1; j < h0gens.size(); ++j)
      if (!n0.contains(g->commutator(h0gens[i], h0gens[j])))
        throw Error("carrier is not abelian modulo the normal part");
}

}  // namespace

FafWitness faf_witness(const GroupPtr& g) {
  FafWitness w;
  switch (g->cls()) {
    case GroupClass::FiniteCayley: {
      Subgroup der = derived_subgroup(g);
      Subgroup n0 = center(subgroup_as_group(der));
      // lift the centre of the derived subgroup back into g
      std::vector<uint16_t> lifted;
      for (uint16_t idx : n0.fc_elements()) lifted.push_back(der.fc_elements()[idx]);
      Subgroup n0g = fc_subgroup_from_elements(g, lifted);
      Subgroup h0 = centralizer_of_subgroup(g, der);
      verify_witness(g, n0g, h0);
      w.is_faf = true;
      w.n0 = n0g;
      w.h0 = h0;
      w.certificate = "centre of the derived subgroup inside its centraliser";
      return w;
    }
    case GroupClass::VirtuallyAbelian: {
      std::vector<Element> gens;
      for (int i = 0; i < g->rank(); ++i) {
        Vec v(g->rank(), 0);
        v[i] = 1;
        gens.push_back(g->make_va(std::move(v), g->point_group()->fc_id()));
      }
      Subgroup h0 = subgroup_from_generators(g, std::move(gens));
      Subgroup n0 = trivial_subgroup(g);
      verify_witness(g, n0, h0);
      w.is_faf = true;
      w.n0 = n0;
      w.h0 = h0;
      w.certificate = "translation lattice is a finite-index abelian normal subgroup";
      return w;
    }
    case GroupClass::CentralPairing: {
      Subgroup der = derived_subgroup(g);
      if (!der.subgroup_order()) {
        w.is_faf = false;
        w.certificate = "derived subgroup is infinite (pairing image has free rank)";
        return w;
      }
      Subgroup h0 = whole_group(g);
      verify_witness(g, der, h0);
      w.is_faf = true;
      w.n0 = der;
      w.h0 = h0;
      w.certificate = "finite pairing image is central with abelian quotient";
      return w;
    }
  }
  throw Error("unreachable");
}

std::vector<Element> small_commuting_sum(const GroupPtr& g, int n, const Rational& eps,
                                         Rational* sum_out) {
  if (n < 1) throw SchemaError("small_commuting_sum needs n >= 1");
  if (!(eps > Rational(0))) throw SchemaError("tolerance must be positive");

  Subgroup gfin = finite_centralizer_subgroup(g);
  if (gfin.index().is_finite())
    throw HypothesisFails("finite-centraliser part has finite index");

  std::vector<Element> chosen;
  std::set<Element, ElementLess> seen_cosets;
  ElementStream stream(g);
  while ((int)chosen.size() < n) {
    Element e = stream.next();
    Element rep = coset_of(gfin, e).rep;
    if (seen_cosets.insert(rep).second) chosen.push_back(e);
  }

  Rational sum(0);
  for (size_t i = 0; i < chosen.size(); ++i)
    for (size_t j = i + 1; j < chosen.size(); ++j) {
      Element quot = g->multiply(g->invert(chosen[i]), chosen[j]);
      sum += centralizer(g, quot).index().reciprocal();
    }
  if (!(sum < eps)) throw Error("pairwise centraliser sum is not below the tolerance");
  if (sum_out) *sum_out = sum;
  return chosen;
}

std::optional<Element> commuting_transversal(const GroupPtr& h, const GroupPtr& square,
                                             const Subgroup& k, const Element& g) {
  require_fc(h, "commuting_transversal");
  require_fc(square, "commuting_transversal");
  if (k.group().get() != square.get() || g.owner != square.get())
    throw MixedGroups("coset data must live in the square group");
  uint32_t nh = h->fc_order();
  if (square->fc_order() != nh * nh) throw SchemaError("square group has wrong order");
  std::vector<uint32_t> coset;
  for (uint16_t x : k.fc_elements()) coset.push_back(square->fc_mul(g.idx, x));
  std::sort(coset.begin(), coset.end());
  for (uint32_t idx : coset) {
    uint32_t a = idx / nh, b = idx % nh;
    if (h->fc_mul(a, b) == h->fc_mul(b, a)) return square->make_fc(idx);
  }
  return std::nullopt;
}

}  // namespace ccm
