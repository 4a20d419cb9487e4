#include "ccm/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

std::vector<Element> with_inverses(const GroupPtr& g, const std::vector<Element>& gens) {
  std::vector<Element> out = gens;
  for (const Element& e : gens) out.push_back(g->invert(e));
  return out;
}

// ---- FiniteCayley helpers ----

std::vector<uint16_t> fc_closure(const Group& g, std::vector<uint16_t> seed) {
  std::set<uint16_t> have(seed.begin(), seed.end());
  have.insert((uint16_t)g.fc_id());
  std::deque<uint16_t> work(have.begin(), have.end());
  std::vector<uint16_t> gens(seed.begin(), seed.end());
  while (!work.empty()) {
    uint16_t x = work.front();
    work.pop_front();
    for (uint16_t s : gens) {
      uint16_t y = (uint16_t)g.fc_mul(x, s);
      if (have.insert(y).second) work.push_back(y);
    }
  }
  return std::vector<uint16_t>(have.begin(), have.end());
}

// ---- CentralPairing canonicalization ----

struct CpPair {
  Vec blift;  // base-coordinate lift
  Vec nu;     // central coordinates of a subgroup element over blift
};

Element cp_combo(const Group& g, const std::vector<CpPair>& pairs, const Vec& coeff) {
  Element acc = g.identity();
  for (size_t k = 0; k < pairs.size(); ++k) {
    if (coeff[k] == 0) continue;
    Element e = g.make_cp(pairs[k].nu, pairs[k].blift);
    acc = g.multiply(acc, g.power(e, coeff[k]));
  }
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// construction / canonicalization

namespace {

void canonicalize_fc(const GroupPtr& g, const std::vector<Element>& gens,
                     std::vector<uint16_t>& out) {
  std::vector<uint16_t> seed;
  for (const Element& e : gens) seed.push_back((uint16_t)e.idx);
  out = fc_closure(*g, std::move(seed));
}

void canonicalize_va(const GroupPtr& g, const std::vector<Element>& in_gens,
                     std::vector<uint32_t>& out_image, Mat& out_lattice,
                     std::vector<Vec>& out_corr) {
  const Group& q = *g->point_group();
  auto sgens = with_inverses(g, in_gens);

  std::map<uint32_t, Element> rep;
  rep[q.fc_id()] = g->identity();
  std::deque<uint32_t> work = {q.fc_id()};
  while (!work.empty()) {
    uint32_t cur = work.front();
    work.pop_front();
    for (const Element& se : sgens) {
      Element u = g->multiply(rep[cur], se);
      if (!rep.count(u.q)) {
        rep[u.q] = u;
        work.push_back(u.q);
      }
    }
  }

  Mat vectors;
  for (auto& [qi, t] : rep)
    for (const Element& se : sgens) {
      Element u = g->multiply(t, se);
      Element k = g->multiply(u, g->invert(rep[u.q]));
      if (k.q != q.fc_id()) throw Error("schreier element outside the kernel");
      if (!lat::is_zero(k.v)) vectors.push_back(k.v);
    }
  Mat lattice = lat::hnf(std::move(vectors));

  out_image.clear();
  out_corr.clear();
  for (auto& [qi, t] : rep) {
    out_image.push_back(qi);
    out_corr.push_back(lat::reduce_mod(lattice, t.v));
  }
  out_lattice = std::move(lattice);
}

void canonicalize_cp(const GroupPtr& gp, const std::vector<Element>& in_gens, Mat& out_ln,
                     Mat& out_lb, std::vector<Vec>& out_sigma) {
  const Group& g = *gp;
  const AbelianCoords& a = g.base();
  const AbelianCoords& n = g.central();

  Mat ln = lat::hnf(n.relation_rows());
  std::vector<CpPair> pairs;
  for (const Element& e : in_gens) pairs.push_back({e.v, e.nu});

  Mat lb_prev;
  for (;;) {
    std::vector<CpPair> stack = pairs;
    for (const Vec& r : a.relation_rows()) stack.push_back({r, Vec(n.ngens(), 0)});
    Mat rows;
    for (const CpPair& p : stack) rows.push_back(p.blift);
    auto t = lat::hnf_transform(std::move(rows));

    std::vector<CpPair> basis;
    Mat ncand;
    for (size_t j = 0; j < t.u.size(); ++j) {
      Element prod = cp_combo(g, stack, t.u[j]);
      if ((int)j < t.rank)
        basis.push_back({t.h[j], prod.nu});
      else if (!n.is_zero(prod.nu))
        ncand.push_back(prod.nu);
    }
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = i + 1; j < basis.size(); ++j) {
        Vec c = g.pairing(a.reduce(basis[i].blift), a.reduce(basis[j].blift));
        if (!n.is_zero(c)) ncand.push_back(std::move(c));
      }

    Mat ln2 = lat::sum(ln, lat::hnf(std::move(ncand)));
    Mat lb_now;
    for (const CpPair& p : basis) lb_now.push_back(p.blift);

    bool stable = (ln2 == ln) && (lb_now == lb_prev);
    ln = std::move(ln2);
    lb_prev = lb_now;
    pairs = std::move(basis);
    if (stable) break;
  }

  out_sigma.clear();
  for (CpPair& p : pairs) out_sigma.push_back(lat::reduce_mod(ln, p.nu));
  out_ln = std::move(ln);
  out_lb = std::move(lb_prev);
}

}  // namespace

Subgroup subgroup_from_generators(const GroupPtr& g, std::vector<Element> gens) {
  for (const Element& e : gens)
    if (e.owner != g.get()) throw MixedGroups("generator from a different group handle");
  Subgroup s;
  s.g_ = g;
  s.gens_ = std::move(gens);
  switch (g->cls()) {
    case GroupClass::FiniteCayley:
      canonicalize_fc(g, s.gens_, s.fc_elems_);
      break;
    case GroupClass::VirtuallyAbelian:
      canonicalize_va(g, s.gens_, s.va_image_, s.va_lattice_, s.va_corr_);
      break;
    case GroupClass::CentralPairing:
      canonicalize_cp(g, s.gens_, s.cp_ln_, s.cp_lb_, s.cp_sigma_);
      for (const Element& e : s.gens_)
        if (!s.contains(e)) throw Error("central-pairing canonicalization lost a generator");
      break;
  }
  return s;
}

Subgroup fc_subgroup_from_elements(const GroupPtr& g, std::vector<uint16_t> elems) {
  if (g->cls() != GroupClass::FiniteCayley)
    throw UnsupportedForClass("element-set subgroups require a finite Cayley group");
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  Subgroup s;
  s.g_ = g;
  for (uint16_t e : elems) s.gens_.push_back(g->make_fc(e));
  s.fc_elems_ = std::move(elems);
  return s;
}

Subgroup whole_group(const GroupPtr& g) { return subgroup_from_generators(g, g->generators()); }

Subgroup trivial_subgroup(const GroupPtr& g) { return subgroup_from_generators(g, {}); }

std::vector<Element> Subgroup::canonical_generators() const {
  std::vector<Element> out;
  switch (g_->cls()) {
    case GroupClass::FiniteCayley:
      for (uint16_t e : fc_elems_) out.push_back(g_->make_fc(e));
      break;
    case GroupClass::VirtuallyAbelian: {
      for (const Vec& r : va_lattice_) out.push_back(g_->make_va(r, g_->point_group()->fc_id()));
      for (size_t i = 0; i < va_image_.size(); ++i)
        if (va_image_[i] != g_->point_group()->fc_id() || !lat::is_zero(va_corr_[i]))
          out.push_back(g_->make_va(va_corr_[i], va_image_[i]));
      break;
    }
    case GroupClass::CentralPairing: {
      for (const Vec& r : cp_ln_) out.push_back(g_->make_cp(r, Vec(g_->base().ngens(), 0)));
      for (size_t k = 0; k < cp_lb_.size(); ++k) out.push_back(g_->make_cp(cp_sigma_[k], cp_lb_[k]));
      break;
    }
  }
  // drop identities
  std::vector<Element> filtered;
  Element id = g_->identity();
  for (Element& e : out)
    if (!(e == id)) filtered.push_back(std::move(e));
  return filtered;
}

bool Subgroup::contains(const Element& e) const {
  if (e.owner != g_.get()) throw MixedGroups("membership test across group handles");
  switch (g_->cls()) {
    case GroupClass::FiniteCayley:
      return std::binary_search(fc_elems_.begin(), fc_elems_.end(), (uint16_t)e.idx);
    case GroupClass::VirtuallyAbelian: {
      auto it = std::lower_bound(va_image_.begin(), va_image_.end(), e.q);
      if (it == va_image_.end() || *it != e.q) return false;
      size_t i = (size_t)(it - va_image_.begin());
      return lat::is_zero(lat::reduce_mod(va_lattice_, lat::sub(e.v, va_corr_[i])));
    }
    case GroupClass::CentralPairing: {
      auto c = lat::solve_hnf(cp_lb_, e.v);
      if (!c) return false;
      std::vector<CpPair> basis;
      for (size_t k = 0; k < cp_lb_.size(); ++k) basis.push_back({cp_lb_[k], cp_sigma_[k]});
      Element h = cp_combo(*g_, basis, *c);
      Element d = g_->multiply(e, g_->invert(h));
      if (!g_->base().is_zero(d.v)) throw Error("base part did not cancel");
      return lat::is_zero(lat::reduce_mod(cp_ln_, d.nu));
    }
  }
  return false;
}

Vec Subgroup::cp_correction_for(const Vec& base_lift) const {
  auto c = lat::solve_hnf(cp_lb_, base_lift);
  if (!c) throw Error("base lift outside the subgroup's base lattice");
  std::vector<CpPair> basis;
  for (size_t k = 0; k < cp_lb_.size(); ++k) basis.push_back({cp_lb_[k], cp_sigma_[k]});
  return cp_combo(*g_, basis, *c).nu;
}

ExtendedIndex Subgroup::index() const {
  switch (g_->cls()) {
    case GroupClass::FiniteCayley:
      return ExtendedIndex::of((i64)g_->fc_order() / (i64)fc_elems_.size());
    case GroupClass::VirtuallyAbelian: {
      i64 qpart = (i64)g_->point_group()->fc_order() / (i64)va_image_.size();
      auto li = lat::index_in_zn(va_lattice_, g_->rank());
      if (!li) return ExtendedIndex::infinite();
      return ExtendedIndex::of(intops::mul(qpart, *li));
    }
    case GroupClass::CentralPairing: {
      auto ni = lat::index_in_zn(cp_ln_, g_->central().ngens());
      auto bi = lat::index_in_zn(cp_lb_, g_->base().ngens());
      if (!ni || !bi) return ExtendedIndex::infinite();
      return ExtendedIndex::of(intops::mul(*ni, *bi));
    }
  }
  throw Error("unreachable");
}

namespace {

// [span(a) : span(b)] for b ⊆ a with equal rank; nullopt when infinite.
std::optional<i64> relative_lattice_index(const Mat& a, const Mat& b) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.empty()) return 1;
  Mat coords;
  for (const Vec& row : b) {
    auto c = lat::solve_hnf(a, row);
    if (!c) throw Error("relative index of non-nested lattices");
    coords.push_back(*c);
  }
  return lat::index_in_zn(lat::hnf(coords), (int)a.size());
}

}  // namespace

std::optional<i64> Subgroup::subgroup_order() const {
  switch (g_->cls()) {
    case GroupClass::FiniteCayley:
      return (i64)fc_elems_.size();
    case GroupClass::VirtuallyAbelian: {
      if (!va_lattice_.empty()) return std::nullopt;
      return (i64)va_image_.size();
    }
    case GroupClass::CentralPairing: {
      auto np = relative_lattice_index(cp_ln_, lat::hnf(g_->central().relation_rows()));
      auto bp = relative_lattice_index(cp_lb_, lat::hnf(g_->base().relation_rows()));
      if (!np || !bp) return std::nullopt;
      return intops::mul(*np, *bp);
    }
  }
  return std::nullopt;
}

bool Subgroup::subgroup_of(const Subgroup& other) const {
  for (const Element& e : canonical_generators())
    if (!other.contains(e)) return false;
  return true;
}

bool Subgroup::equals(const Subgroup& other) const { return compare(*this, other) == 0; }

bool Subgroup::is_whole_group() const {
  auto ix = index();
  return ix.is_finite() && ix.value() == 1;
}

namespace {

int cmp_i64(i64 a, i64 b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_vec(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return cmp_i64((i64)a.size(), (i64)b.size());
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

int cmp_mat(const Mat& a, const Mat& b) {
  if (a.size() != b.size()) return cmp_i64((i64)a.size(), (i64)b.size());
  for (size_t i = 0; i < a.size(); ++i)
    if (int c = cmp_vec(a[i], b[i])) return c;
  return 0;
}

}  // namespace

int Subgroup::compare(const Subgroup& a, const Subgroup& b) {
  if (a.g_.get() != b.g_.get()) throw MixedGroups("comparing subgroups of distinct handles");
  switch (a.g_->cls()) {
    case GroupClass::FiniteCayley: {
      if (a.fc_elems_.size() != b.fc_elems_.size())
        return cmp_i64((i64)a.fc_elems_.size(), (i64)b.fc_elems_.size());
      for (size_t i = 0; i < a.fc_elems_.size(); ++i)
        if (a.fc_elems_[i] != b.fc_elems_[i]) return a.fc_elems_[i] < b.fc_elems_[i] ? -1 : 1;
      return 0;
    }
    case GroupClass::VirtuallyAbelian: {
      if (a.va_image_ != b.va_image_)
        return a.va_image_ < b.va_image_ ? -1 : 1;
      if (int c = cmp_mat(a.va_lattice_, b.va_lattice_)) return c;
      for (size_t i = 0; i < a.va_corr_.size(); ++i)
        if (int c = cmp_vec(a.va_corr_[i], b.va_corr_[i])) return c;
      return 0;
    }
    case GroupClass::CentralPairing: {
      if (int c = cmp_mat(a.cp_ln_, b.cp_ln_)) return c;
      if (int c = cmp_mat(a.cp_lb_, b.cp_lb_)) return c;
      for (size_t i = 0; i < a.cp_sigma_.size(); ++i)
        if (int c = cmp_vec(a.cp_sigma_[i], b.cp_sigma_[i])) return c;
      return 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cosets

bool Coset::contains(const Element& e) const {
  return sub.contains(sub.group()->multiply(sub.group()->invert(rep), e));
}

Coset coset_of(const Subgroup& h, const Element& g) {
  const GroupPtr& gp = h.group();
  if (g.owner != gp.get()) throw MixedGroups("coset of element from a different handle");
  Element rep;
  switch (gp->cls()) {
    case GroupClass::FiniteCayley: {
      uint16_t best = 65535;
      for (uint16_t x : h.fc_elements())
        best = std::min(best, (uint16_t)gp->fc_mul(g.idx, x));
      rep = gp->make_fc(best);
      break;
    }
    case GroupClass::VirtuallyAbelian: {
      const Group& q = *gp->point_group();
      uint32_t qstar = 0;
      bool first = true;
      for (uint32_t qi : h.va_image()) {
        uint32_t cand = q.fc_mul(g.q, qi);
        if (first || cand < qstar) {
          qstar = cand;
          first = false;
        }
      }
      uint32_t qi = q.fc_mul(q.fc_inv(g.q), qstar);
      auto it = std::lower_bound(h.va_image().begin(), h.va_image().end(), qi);
      size_t pos = (size_t)(it - h.va_image().begin());
      Mat m;
      for (const Vec& r : h.va_lattice()) m.push_back(lat::mat_apply(gp->action(g.q), r));
      m = lat::hnf(std::move(m));
      Vec base = lat::add(g.v, lat::mat_apply(gp->action(g.q), h.va_corrections()[pos]));
      rep = gp->make_va(lat::reduce_mod(m, base), qstar);
      break;
    }
    case GroupClass::CentralPairing: {
      Vec astar = lat::reduce_mod(h.cp_base_lattice(), g.v);
      Vec blift = lat::sub(astar, g.v);
      Vec sigma = h.cp_correction_for(blift);
      Element hh = gp->make_cp(sigma, blift);
      Element cand = gp->multiply(g, hh);
      rep = gp->make_cp(lat::reduce_mod(h.cp_central_lattice(), cand.nu), cand.v);
      break;
    }
  }
  return Coset{h, rep};
}

namespace {

// One common element of the two cosets, if any.
std::optional<Element> coset_common_element(const Coset& a, const Coset& b) {
  const GroupPtr& g = a.sub.group();
  switch (g->cls()) {
    case GroupClass::FiniteCayley: {
      for (uint16_t h : a.sub.fc_elements()) {
        Element x = g->make_fc(g->fc_mul(a.rep.idx, h));
        if (b.contains(x)) return x;
      }
      return std::nullopt;
    }
    case GroupClass::VirtuallyAbelian: {
      const Group& q = *g->point_group();
      auto fiber = [&](const Coset& c, uint32_t qq) -> std::optional<std::pair<Vec, Mat>> {
        uint32_t qi = q.fc_mul(q.fc_inv(c.rep.q), qq);
        auto it = std::lower_bound(c.sub.va_image().begin(), c.sub.va_image().end(), qi);
        if (it == c.sub.va_image().end() || *it != qi) return std::nullopt;
        size_t pos = (size_t)(it - c.sub.va_image().begin());
        Mat m;
        for (const Vec& r : c.sub.va_lattice())
          m.push_back(lat::mat_apply(g->action(c.rep.q), r));
        Vec base = lat::add(c.rep.v,
                            lat::mat_apply(g->action(c.rep.q), c.sub.va_corrections()[pos]));
        return std::make_pair(std::move(base), lat::hnf(std::move(m)));
      };
      for (uint32_t qq = 0; qq < q.fc_order(); ++qq) {
        auto fa = fiber(a, qq);
        if (!fa) continue;
        auto fb = fiber(b, qq);
        if (!fb) continue;
        auto pt = lat::affine_intersect_point(fa->first, fa->second, fb->first, fb->second);
        if (pt) return g->make_va(*pt, qq);
      }
      return std::nullopt;
    }
    case GroupClass::CentralPairing: {
      // base parts must meet
      auto a0 = lat::affine_intersect_point(a.rep.v, a.sub.cp_base_lattice(), b.rep.v,
                                            b.sub.cp_base_lattice());
      if (!a0) return std::nullopt;
      // central coordinates of the coset element over base lift x
      auto nu_over = [&](const Coset& c, const Vec& x) {
        Vec blift = lat::sub(x, c.rep.v);
        Element h = g->make_cp(c.sub.cp_correction_for(blift), blift);
        return g->multiply(c.rep, h).nu;
      };
      Mat w = lat::intersect(a.sub.cp_base_lattice(), b.sub.cp_base_lattice());
      Mat l12 = lat::sum(a.sub.cp_central_lattice(), b.sub.cp_central_lattice());
      Vec delta0 = lat::sub(nu_over(a, *a0), nu_over(b, *a0));
      // adjust the base point inside a0 + span(w) so the central fibers meet
      Mat deltaw;
      for (const Vec& row : w)
        deltaw.push_back(lat::sub(a.sub.cp_correction_for(row), b.sub.cp_correction_for(row)));
      Mat stacked = lat::stack(deltaw, l12);
      auto sol = lat::solve(stacked, lat::neg(delta0));
      if (!sol) return std::nullopt;
      Vec x = *a0;
      for (size_t t = 0; t < w.size(); ++t)
        if ((*sol)[t] != 0)
          for (size_t cidx = 0; cidx < x.size(); ++cidx)
            x[cidx] = intops::add(x[cidx], intops::mul((*sol)[t], w[t][cidx]));
      auto nu = lat::affine_intersect_point(nu_over(a, x), a.sub.cp_central_lattice(),
                                            nu_over(b, x), b.sub.cp_central_lattice());
      if (!nu) throw Error("central fibers failed to meet after adjustment");
      return g->make_cp(*nu, x);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Coset> coset_intersection(const Coset& a, const Coset& b) {
  if (a.sub.group().get() != b.sub.group().get())
    throw MixedGroups("intersecting cosets of distinct handles");
  auto common = coset_common_element(a, b);
  if (!common) return std::nullopt;
  return coset_of(intersect(a.sub, b.sub), *common);
}

int coset_compare(const Coset& a, const Coset& b) {
  if (int c = Subgroup::compare(a.sub, b.sub)) return c;
  if (element_less(a.rep, b.rep)) return -1;
  if (element_less(b.rep, a.rep)) return 1;
  return 0;
}

ExtendedIndex index(const GroupPtr& g, const Subgroup& h) {
  if (h.group().get() != g.get()) throw MixedGroups("index of subgroup of a different handle");
  return h.index();
}

// ---------------------------------------------------------------------------
// subgroup algebra

namespace {

Subgroup intersect_fc(const Subgroup& a, const Subgroup& b) {
  std::vector<uint16_t> both;
  std::set_intersection(a.fc_elements().begin(), a.fc_elements().end(),
                        b.fc_elements().begin(), b.fc_elements().end(),
                        std::back_inserter(both));
  return fc_subgroup_from_elements(a.group(), std::move(both));
}

Subgroup intersect_va(const Subgroup& a, const Subgroup& b) {
  const GroupPtr& g = a.group();
  Mat lcap = lat::intersect(a.va_lattice(), b.va_lattice());
  std::vector<Element> gens;
  for (const Vec& r : lcap) gens.push_back(g->make_va(r, g->point_group()->fc_id()));
  for (size_t i = 0; i < a.va_image().size(); ++i) {
    uint32_t qi = a.va_image()[i];
    auto it = std::lower_bound(b.va_image().begin(), b.va_image().end(), qi);
    if (it == b.va_image().end() || *it != qi) continue;
    size_t j = (size_t)(it - b.va_image().begin());
    auto pt = lat::affine_intersect_point(a.va_corrections()[i], a.va_lattice(),
                                          b.va_corrections()[j], b.va_lattice());
    if (pt) gens.push_back(g->make_va(*pt, qi));
  }
  return subgroup_from_generators(g, std::move(gens));
}

Subgroup intersect_cp(const Subgroup& a, const Subgroup& b) {
  const GroupPtr& g = a.group();
  const AbelianCoords& n = g->central();
  Mat lncap = lat::intersect(a.cp_central_lattice(), b.cp_central_lattice());
  Mat w = lat::intersect(a.cp_base_lattice(), b.cp_base_lattice());
  Mat l12 = lat::sum(a.cp_central_lattice(), b.cp_central_lattice());

  // base rows whose corrections are compatible: kernel of the difference map
  Mat delta;
  for (const Vec& row : w)
    delta.push_back(lat::sub(a.cp_correction_for(row), b.cp_correction_for(row)));
  Mat stacked = lat::stack(delta, l12);
  Mat ker = lat::kernel(stacked);
  Mat bcap;
  for (const Vec& k : ker) {
    Vec lift(g->base().ngens(), 0);
    for (size_t t = 0; t < w.size(); ++t)
      if (k[t] != 0)
        for (size_t c = 0; c < lift.size(); ++c)
          lift[c] = intops::add(lift[c], intops::mul(k[t], w[t][c]));
    if (!lat::is_zero(lift)) bcap.push_back(lift);
  }
  bcap = lat::hnf(std::move(bcap));

  std::vector<Element> gens;
  for (const Vec& r : lncap) gens.push_back(g->make_cp(r, Vec(g->base().ngens(), 0)));
  for (const Vec& row : bcap) {
    Vec nu1 = a.cp_correction_for(row);
    Vec nu2 = b.cp_correction_for(row);
    auto nu = lat::affine_intersect_point(nu1, a.cp_central_lattice(), nu2,
                                          b.cp_central_lattice());
    if (!nu) throw Error("correction compatibility lost in intersection");
    gens.push_back(g->make_cp(n.reduce(*nu), row));
  }
  return subgroup_from_generators(g, std::move(gens));
}

}  // namespace

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  if (a.group().get() != b.group().get())
    throw MixedGroups("intersecting subgroups of distinct handles");
  switch (a.group()->cls()) {
    case GroupClass::FiniteCayley:
      return intersect_fc(a, b);
    case GroupClass::VirtuallyAbelian:
      return intersect_va(a, b);
    case GroupClass::CentralPairing:
      return intersect_cp(a, b);
  }
  throw Error("unreachable");
}

Subgroup conjugate(const Subgroup& h, const Element& g) {
  const GroupPtr& gp = h.group();
  if (g.owner != gp.get()) throw MixedGroups("conjugating by element of a different handle");
  std::vector<Element> gens;
  Element gi = gp->invert(g);
  for (const Element& e : h.canonical_generators())
    gens.push_back(gp->multiply(gp->multiply(gi, e), g));
  return subgroup_from_generators(gp, std::move(gens));
}

std::vector<Element> transversal(const Subgroup& k) {
  const GroupPtr& g = k.group();
  auto ix = k.index();
  if (!ix.is_finite()) throw UnsupportedForClass("transversal of an infinite-index subgroup");
  size_t want = (size_t)ix.value();

  auto gens = with_inverses(g, g->generators());
  std::map<Element, char, ElementLess> seen;
  std::deque<Element> work;
  Element start = coset_of(k, g->identity()).rep;
  seen[start] = 1;
  work.push_back(start);
  while (!work.empty() && seen.size() < want) {
    Element cur = work.front();
    work.pop_front();
    for (const Element& s : gens) {
      Element nxt = coset_of(k, g->multiply(cur, s)).rep;
      if (seen.emplace(nxt, 1).second) work.push_back(nxt);
    }
  }
  if (seen.size() != want) throw Error("transversal enumeration did not reach the full index");
  std::vector<Element> out;
  for (auto& [e, _] : seen) out.push_back(e);
  return out;
}

std::vector<Element> relative_transversal(const Subgroup& h, const Subgroup& k) {
  auto ik = k.index();
  auto ih = h.index();
  if (!ik.is_finite() || !ih.is_finite())
    throw UnsupportedForClass("relative transversal needs finite indices");
  size_t want = (size_t)(ik.value() / ih.value());
  const GroupPtr& g = h.group();
  auto gens = with_inverses(g, h.canonical_generators());
  std::map<Element, char, ElementLess> seen;
  std::deque<Element> work;
  Element start = coset_of(k, g->identity()).rep;
  seen[start] = 1;
  work.push_back(start);
  while (!work.empty() && seen.size() < want) {
    Element cur = work.front();
    work.pop_front();
    for (const Element& s : gens) {
      Element nxt = coset_of(k, g->multiply(cur, s)).rep;
      if (seen.emplace(nxt, 1).second) work.push_back(nxt);
    }
  }
  if (seen.size() != want) throw Error("relative transversal did not reach the full index");
  std::vector<Element> out;
  for (auto& [e, _] : seen) out.push_back(e);
  return out;
}

Subgroup normal_core(const Subgroup& h) {
  auto ix = h.index();
  if (!ix.is_finite())
    throw UnsupportedForClass("normal core computed for finite-index subgroups only");
  Subgroup core = h;
  for (const Element& t : transversal(h))
    core = intersect(core, conjugate(h, h.group()->invert(t)));
  return core;
}

bool is_normal(const Subgroup& h) {
  const GroupPtr& g = h.group();
  for (const Element& s : with_inverses(g, g->generators()))
    for (const Element& e : h.canonical_generators())
      if (!h.contains(g->multiply(g->multiply(g->invert(s), e), s))) return false;
  return true;
}

Subgroup center(const GroupPtr& g) {
  switch (g->cls()) {
    case GroupClass::FiniteCayley: {
      std::vector<uint16_t> z;
      uint32_t n = g->fc_order();
      for (uint32_t x = 0; x < n; ++x) {
        bool ok = true;
        for (uint32_t y = 0; y < n && ok; ++y) ok = g->fc_mul(x, y) == g->fc_mul(y, x);
        if (ok) z.push_back((uint16_t)x);
      }
      return fc_subgroup_from_elements(g, std::move(z));
    }
    case GroupClass::VirtuallyAbelian: {
      const Group& q = *g->point_group();
      int n = g->rank();
      Mat fix_all;
      {
        // common kernel of (action(q) - I) over all q: intersect kernels
        Mat cur = lat::identity(n);
        for (uint32_t qi = 0; qi < q.fc_order(); ++qi) {
          Mat m = g->action(qi);
          for (int i = 0; i < n; ++i) m[i][i] = intops::sub(m[i][i], 1);
          Mat kern = lat::kernel(lat::transpose(m));
          cur = lat::intersect(cur, kern.empty() ? Mat{} : kern);
          if (cur.empty()) break;
        }
        fix_all = cur;
      }
      std::vector<Element> gens;
      for (const Vec& r : fix_all) gens.push_back(g->make_va(r, q.fc_id()));
      for (uint32_t qi = 0; qi < q.fc_order(); ++qi) {
        bool central_q = true;
        for (uint32_t r = 0; r < q.fc_order() && central_q; ++r)
          central_q = q.fc_mul(qi, r) == q.fc_mul(r, qi);
        if (central_q && g->action(qi) == lat::identity(n))
          gens.push_back(g->make_va(Vec(n, 0), qi));
      }
      return subgroup_from_generators(g, std::move(gens));
    }
    case GroupClass::CentralPairing: {
      int na = g->base().ngens(), nn = g->central().ngens();
      // radical of the pairing: b with beta(e_i, b) = 0 in N for all i
      Mat cond;  // rows indexed by base gens j, columns = (i, central-coordinate)
      for (int j = 0; j < na; ++j) {
        Vec row;
        for (int i = 0; i < na; ++i) {
          const Vec& bij = g->beta(i, j);
          row.insert(row.end(), bij.begin(), bij.end());
        }
        cond.push_back(std::move(row));
      }
      Mat rel;
      for (int i = 0; i < na; ++i) {
        for (const Vec& r : g->central().relation_rows()) {
          Vec row(na * nn, 0);
          for (int k = 0; k < nn; ++k) row[(size_t)i * nn + k] = r[k];
          rel.push_back(std::move(row));
        }
      }
      Mat stacked = lat::stack(cond, rel);
      Mat ker = lat::kernel(stacked);
      Mat rad;
      for (const Vec& k : ker) {
        Vec b(na, 0);
        bool nonzero = false;
        for (int j = 0; j < na; ++j) {
          b[j] = k[j];
          nonzero = nonzero || b[j] != 0;
        }
        if (nonzero) rad.push_back(std::move(b));
      }
      rad = lat::sum(lat::hnf(std::move(rad)), g->base().relation_rows());
      std::vector<Element> gens;
      for (int k = 0; k < nn; ++k) {
        Vec nu(nn, 0);
        nu[k] = 1;
        gens.push_back(g->make_cp(std::move(nu), Vec(na, 0)));
      }
      for (const Vec& r : rad) gens.push_back(g->make_cp(Vec(nn, 0), r));
      return subgroup_from_generators(g, std::move(gens));
    }
  }
  throw Error("unreachable");
}

Subgroup derived_subgroup(const GroupPtr& g) {
  auto gens = g->generators();
  std::vector<Element> comms;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < gens.size(); ++j) {
      Element c = g->commutator(gens[i], gens[j]);
      if (!(c == g->identity())) comms.push_back(c);
    }
  Subgroup h = subgroup_from_generators(g, std::move(comms));
  // normal closure
  for (;;) {
    std::vector<Element> extra;
    for (const Element& s : with_inverses(g, g->generators()))
      for (const Element& e : h.canonical_generators()) {
        Element c = g->multiply(g->multiply(g->invert(s), e), s);
        if (!h.contains(c)) extra.push_back(c);
      }
    if (extra.empty()) break;
    auto cur = h.canonical_generators();
    cur.insert(cur.end(), extra.begin(), extra.end());
    h = subgroup_from_generators(g, std::move(cur));
  }
  return h;
}

Subgroup centralizer(const GroupPtr& g, const Element& e) {
  if (e.owner != g.get()) throw MixedGroups("centralizer of element from a different handle");
  switch (g->cls()) {
    case GroupClass::FiniteCayley: {
      std::vector<uint16_t> c;
      for (uint32_t y = 0; y < g->fc_order(); ++y)
        if (g->fc_mul(e.idx, y) == g->fc_mul(y, e.idx)) c.push_back((uint16_t)y);
      return fc_subgroup_from_elements(g, std::move(c));
    }
    case GroupClass::VirtuallyAbelian: {
      const Group& q = *g->point_group();
      int n = g->rank();
      Mat mq = g->action(e.q);
      for (int i = 0; i < n; ++i) mq[i][i] = intops::sub(mq[i][i], 1);  // action(q) - I
      Mat mq_neg;                                                      // I - action(q), rows for solve
      for (const Vec& r : mq) mq_neg.push_back(lat::neg(r));
      Mat solve_rows = lat::transpose(mq_neg);
      Mat hom = lat::kernel(solve_rows);  // v with (I - action(q)) v = 0

      std::vector<Element> gens;
      for (const Vec& r : hom) gens.push_back(g->make_va(r, q.fc_id()));
      for (uint32_t r = 0; r < q.fc_order(); ++r) {
        if (q.fc_mul(r, e.q) != q.fc_mul(e.q, r)) continue;
        // (I - action(q)) v = (I - action(r)) w
        Mat mr = g->action(r);
        Vec rhs(n, 0);
        for (int i = 0; i < n; ++i) {
          rhs[i] = e.v[i];
          for (int j = 0; j < n; ++j)
            rhs[i] = intops::sub(rhs[i], intops::mul(mr[i][j], e.v[j]));
        }
        auto v = lat::solve(solve_rows, rhs);
        if (v) gens.push_back(g->make_va(*v, r));
      }
      return subgroup_from_generators(g, std::move(gens));
    }
    case GroupClass::CentralPairing: {
      int na = g->base().ngens(), nn = g->central().ngens();
      // annihilator of e.v: b with beta(e.v, b) = 0 in N
      Mat cond;
      for (int j = 0; j < na; ++j) {
        Vec gj(nn, 0);
        for (int i = 0; i < na; ++i)
          if (e.v[i] != 0)
            for (int k = 0; k < nn; ++k)
              gj[k] = intops::add(gj[k], intops::mul(e.v[i], g->beta(i, j)[k]));
        cond.push_back(std::move(gj));
      }
      Mat stacked = lat::stack(cond, lat::hnf(g->central().relation_rows()));
      Mat ker = lat::kernel(stacked);
      Mat ann;
      for (const Vec& k : ker) {
        Vec b(na, 0);
        bool nz = false;
        for (int j = 0; j < na; ++j) {
          b[j] = k[j];
          nz = nz || b[j] != 0;
        }
        if (nz) ann.push_back(std::move(b));
      }
      ann = lat::sum(lat::hnf(std::move(ann)), g->base().relation_rows());
      std::vector<Element> gens;
      for (int k = 0; k < nn; ++k) {
        Vec nu(nn, 0);
        nu[k] = 1;
        gens.push_back(g->make_cp(std::move(nu), Vec(na, 0)));
      }
      for (const Vec& r : ann) gens.push_back(g->make_cp(Vec(nn, 0), r));
      return subgroup_from_generators(g, std::move(gens));
    }
  }
  throw Error("unreachable");
}

Subgroup centralizer_of_subgroup(const GroupPtr& g, const Subgroup& k) {
  Subgroup c = whole_group(g);
  for (const Element& e : k.canonical_generators()) c = intersect(c, centralizer(g, e));
  return c;
}

GroupPtr quotient_group(const Subgroup& n, i64 cap) {
  auto ix = n.index();
  if (!ix.is_finite() || ix.value() > cap)
    throw QuotientTooLarge("quotient order exceeds the configured cap");
  if (!is_normal(n)) throw NotNormal("quotient by a non-normal subgroup");
  const GroupPtr& g = n.group();
  auto reps = transversal(n);
  std::map<Element, uint16_t, ElementLess> idx;
  for (size_t i = 0; i < reps.size(); ++i) idx[reps[i]] = (uint16_t)i;
  size_t m = reps.size();
  std::vector<std::string> labels(m);
  for (size_t i = 0; i < m; ++i) labels[i] = g->describe_element(reps[i]);
  std::vector<uint16_t> table(m * m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      Element p = coset_of(n, g->multiply(reps[i], reps[j])).rep;
      auto it = idx.find(p);
      if (it == idx.end()) throw Error("product left the transversal");
      table[i * m + j] = it->second;
    }
  return Group::make_finite_cayley(std::move(labels), std::move(table), /*trusted=*/true);
}

GroupPtr subgroup_as_group(const Subgroup& h) {
  const GroupPtr& g = h.group();
  if (g->cls() != GroupClass::FiniteCayley)
    throw UnsupportedForClass("standalone subgroup groups require finite Cayley input");
  const auto& el = h.fc_elements();
  std::map<uint16_t, uint16_t> pos;
  for (size_t i = 0; i < el.size(); ++i) pos[el[i]] = (uint16_t)i;
  std::vector<std::string> labels(el.size());
  for (size_t i = 0; i < el.size(); ++i) labels[i] = g->labels()[el[i]];
  std::vector<uint16_t> table(el.size() * el.size());
  for (size_t i = 0; i < el.size(); ++i)
    for (size_t j = 0; j < el.size(); ++j) {
      auto it = pos.find((uint16_t)g->fc_mul(el[i], el[j]));
      if (it == pos.end()) throw Error("element set is not closed");
      table[i * el.size() + j] = it->second;
    }
  return Group::make_finite_cayley(std::move(labels), std::move(table), /*trusted=*/true);
}

std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
  if (g->cls() != GroupClass::FiniteCayley)
    throw UnsupportedForClass("exhaustive subgroup search requires a finite Cayley group");
  std::set<std::vector<uint16_t>> known;
  std::deque<std::vector<uint16_t>> work;
  std::vector<uint16_t> triv = {(uint16_t)g->fc_id()};
  known.insert(triv);
  work.push_back(triv);
  while (!work.empty()) {
    auto h = work.front();
    work.pop_front();
    std::set<uint16_t> hset(h.begin(), h.end());
    for (uint32_t x = 0; x < g->fc_order(); ++x) {
      if (hset.count((uint16_t)x)) continue;
      auto seed = h;
      seed.push_back((uint16_t)x);
      auto closed = fc_closure(*g, std::move(seed));
      if (known.insert(closed).second) work.push_back(closed);
    }
  }
  std::vector<Subgroup> out;
  for (const auto& el : known) out.push_back(fc_subgroup_from_elements(g, el));
  return out;
}

}  // namespace ccm
