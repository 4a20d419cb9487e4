#include "ccm/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "ccm/errors.hpp"

namespace ccm {

namespace {

i64 zigzag(i64 x) {
  if (x == 0) return 0;
  return x < 0 ? intops::sub(intops::mul(-2, x), 1) : intops::mul(2, x);
}

int lex_cmp_zigzag(const Vec& a, const Vec& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    i64 ra = zigzag(a[i]), rb = zigzag(b[i]);
    if (ra != rb) return ra < rb ? -1 : 1;
  }
  return 0;
}

i64 max_abs(const Vec& v, int count) {
  i64 m = 0;
  for (int i = 0; i < count; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

// All vectors of length `dims` with coordinates in [-bound, bound].
void iterate_box(int dims, i64 bound, const std::function<void(const Vec&)>& fn) {
  Vec cur(dims, -bound);
  if (dims == 0) {
    fn(cur);
    return;
  }
  for (;;) {
    fn(cur);
    int i = dims - 1;
    while (i >= 0) {
      if (++cur[i] <= bound) break;
      cur[i] = -bound;
      --i;
    }
    if (i < 0) break;
  }
}

void iterate_torsion(const std::vector<i64>& factors, const std::function<void(const Vec&)>& fn) {
  int n = (int)factors.size();
  Vec cur(n, 0);
  for (;;) {
    fn(cur);
    int i = n - 1;
    while (i >= 0) {
      if (++cur[i] < factors[i]) break;
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

}  // namespace

std::optional<i64> AbelianCoords::order() const {
  if (free_rank > 0) return std::nullopt;
  i64 o = 1;
  for (i64 d : torsion) o = intops::mul(o, d);
  return o;
}

Mat AbelianCoords::relation_rows() const {
  Mat rows;
  for (size_t j = 0; j < torsion.size(); ++j) {
    Vec r(ngens(), 0);
    r[free_rank + j] = torsion[j];
    rows.push_back(std::move(r));
  }
  return rows;
}

Vec AbelianCoords::reduce(Vec v) const {
  for (size_t j = 0; j < torsion.size(); ++j) {
    i64 d = torsion[j];
    i64& x = v[free_rank + j];
    x %= d;
    if (x < 0) x += d;
  }
  return v;
}

bool AbelianCoords::is_zero(const Vec& v) const {
  for (i64 x : v)
    if (x != 0) return false;
  return true;
}

bool element_less(const Element& a, const Element& b) {
  switch (a.owner->cls()) {
    case GroupClass::FiniteCayley:
      return a.idx < b.idx;
    case GroupClass::VirtuallyAbelian: {
      i64 na = max_abs(a.v, (int)a.v.size());
      i64 nb = max_abs(b.v, (int)b.v.size());
      if (na != nb) return na < nb;
      int c = lex_cmp_zigzag(a.v, b.v);
      if (c != 0) return c < 0;
      return a.q < b.q;
    }
    case GroupClass::CentralPairing: {
      const Group* g = a.owner;
      i64 na = std::max(max_abs(a.v, g->base().free_rank), max_abs(a.nu, g->central().free_rank));
      i64 nb = std::max(max_abs(b.v, g->base().free_rank), max_abs(b.nu, g->central().free_rank));
      if (na != nb) return na < nb;
      int c = lex_cmp_zigzag(a.v, b.v);
      if (c != 0) return c < 0;
      c = lex_cmp_zigzag(a.nu, b.nu);
      return c < 0;
    }
  }
  return false;
}

Vec Group::pairing(const Vec& a, const Vec& b) const {
  int n = base_.ngens();
  Vec acc(central_.ngens(), 0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      const Vec& bij = beta(i, j);
      for (size_t k = 0; k < acc.size(); ++k)
        acc[k] = intops::add(acc[k], intops::mul(intops::mul(a[i], b[j]), bij[k]));
    }
  }
  return central_.reduce(std::move(acc));
}

Vec Group::cocycle(const Vec& a, const Vec& b) const {
  int n = base_.ngens();
  Vec acc(central_.ngens(), 0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = i + 1; j < n; ++j) {
      if (b[j] == 0) continue;
      const Vec& bij = beta(i, j);
      for (size_t k = 0; k < acc.size(); ++k)
        acc[k] = intops::add(acc[k], intops::mul(intops::mul(a[i], b[j]), bij[k]));
    }
  }
  return central_.reduce(std::move(acc));
}

Element Group::identity() const {
  switch (cls_) {
    case GroupClass::FiniteCayley:
      return make_fc(id_);
    case GroupClass::VirtuallyAbelian:
      return make_va(Vec(rank_, 0), point_->fc_id());
    case GroupClass::CentralPairing:
      return make_cp(Vec(central_.ngens(), 0), Vec(base_.ngens(), 0));
  }
  throw Error("unreachable");
}

void Group::check_same(const Element& a, const Element& b) const {
  if (a.owner != this || b.owner != this)
    throw MixedGroups("operands belong to distinct group handles");
}

Element Group::multiply(const Element& a, const Element& b) const {
  check_same(a, b);
  switch (cls_) {
    case GroupClass::FiniteCayley:
      return make_fc(fc_mul(a.idx, b.idx));
    case GroupClass::VirtuallyAbelian:
      return make_va(lat::add(a.v, lat::mat_apply(action_[a.q], b.v)),
                     point_->fc_mul(a.q, b.q));
    case GroupClass::CentralPairing: {
      Vec nu = lat::add(lat::add(a.nu, b.nu), cocycle(a.v, b.v));
      return make_cp(std::move(nu), lat::add(a.v, b.v));
    }
  }
  throw Error("unreachable");
}

Element Group::invert(const Element& a) const {
  check_same(a, a);
  switch (cls_) {
    case GroupClass::FiniteCayley:
      return make_fc(fc_inv(a.idx));
    case GroupClass::VirtuallyAbelian: {
      uint32_t qi = point_->fc_inv(a.q);
      return make_va(lat::neg(lat::mat_apply(action_[qi], a.v)), qi);
    }
    case GroupClass::CentralPairing: {
      Vec nu = lat::add(lat::neg(a.nu), cocycle(a.v, a.v));
      return make_cp(std::move(nu), lat::neg(a.v));
    }
  }
  throw Error("unreachable");
}

Element Group::commutator(const Element& a, const Element& b) const {
  // a^-1 b^-1 a b
  if (cls_ == GroupClass::CentralPairing) {
    check_same(a, b);
    return make_cp(pairing(a.v, b.v), Vec(base_.ngens(), 0));
  }
  return multiply(multiply(invert(a), invert(b)), multiply(a, b));
}

Element Group::power(const Element& a, i64 k) const {
  if (cls_ == GroupClass::CentralPairing) {
    // (nu, v)^k = (k nu + C(k,2) c(v,v), k v); C(k,2) = k(k-1)/2 for any integer k.
    i64 c2 = intops::mul(k, intops::sub(k, 1)) / 2;
    Vec nu = lat::scale(k, a.nu);
    Vec cc = cocycle(a.v, a.v);
    nu = lat::add(nu, lat::scale(c2, cc));
    return make_cp(std::move(nu), lat::scale(k, a.v));
  }
  Element acc = identity();
  Element base = k < 0 ? invert(a) : a;
  i64 n = std::abs(k);
  while (n > 0) {
    if (n & 1) acc = multiply(acc, base);
    base = (n >>= 1) ? multiply(base, base) : base;
  }
  return acc;
}

Element Group::make_fc(uint32_t idx) const {
  Element e;
  e.owner = this;
  e.idx = idx;
  return e;
}

Element Group::make_va(Vec v, uint32_t q) const {
  Element e;
  e.owner = this;
  e.v = std::move(v);
  e.q = q;
  return e;
}

Element Group::make_cp(Vec nu, Vec a) const {
  Element e;
  e.owner = this;
  e.nu = central_.reduce(std::move(nu));
  e.v = base_.reduce(std::move(a));
  return e;
}

std::optional<i64> Group::order() const {
  switch (cls_) {
    case GroupClass::FiniteCayley:
      return (i64)fc_order();
    case GroupClass::VirtuallyAbelian:
      if (rank_ > 0) return std::nullopt;
      return (i64)point_->fc_order();
    case GroupClass::CentralPairing: {
      auto ob = base_.order();
      auto oc = central_.order();
      if (!ob || !oc) return std::nullopt;
      return intops::mul(*ob, *oc);
    }
  }
  return std::nullopt;
}

std::vector<Element> Group::generators() const {
  std::vector<Element> out;
  switch (cls_) {
    case GroupClass::FiniteCayley:
      for (uint32_t i = 0; i < fc_order(); ++i) out.push_back(make_fc(i));
      break;
    case GroupClass::VirtuallyAbelian: {
      for (int i = 0; i < rank_; ++i) {
        Vec v(rank_, 0);
        v[i] = 1;
        out.push_back(make_va(std::move(v), point_->fc_id()));
      }
      for (uint32_t q = 0; q < point_->fc_order(); ++q)
        if (q != point_->fc_id()) out.push_back(make_va(Vec(rank_, 0), q));
      break;
    }
    case GroupClass::CentralPairing: {
      for (int j = 0; j < base_.ngens(); ++j) {
        Vec a(base_.ngens(), 0);
        a[j] = 1;
        out.push_back(make_cp(Vec(central_.ngens(), 0), std::move(a)));
      }
      for (int k = 0; k < central_.ngens(); ++k) {
        Vec nu(central_.ngens(), 0);
        nu[k] = 1;
        out.push_back(make_cp(std::move(nu), Vec(base_.ngens(), 0)));
      }
      break;
    }
  }
  return out;
}

std::string Group::describe_element(const Element& e) const {
  auto join = [](const Vec& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(v[i]);
    }
    return s;
  };
  switch (cls_) {
    case GroupClass::FiniteCayley:
      return labels_[e.idx];
    case GroupClass::VirtuallyAbelian:
      return "(" + join(e.v) + "|" + point_->labels()[e.q] + ")";
    case GroupClass::CentralPairing:
      return "(" + join(e.nu) + "|" + join(e.v) + ")";
  }
  return "?";
}

std::vector<Element> Group::shell(i64 shell_norm) const {
  std::vector<Element> out;
  switch (cls_) {
    case GroupClass::FiniteCayley:
      if (shell_norm == 0)
        for (uint32_t i = 0; i < fc_order(); ++i) out.push_back(make_fc(i));
      break;
    case GroupClass::VirtuallyAbelian: {
      if (rank_ == 0 && shell_norm > 0) break;
      iterate_box(rank_, shell_norm, [&](const Vec& v) {
        if (max_abs(v, rank_) != shell_norm) return;
        for (uint32_t q = 0; q < point_->fc_order(); ++q) out.push_back(make_va(v, q));
      });
      break;
    }
    case GroupClass::CentralPairing: {
      int fb = base_.free_rank, fc = central_.free_rank;
      if (fb + fc == 0 && shell_norm > 0) break;
      iterate_box(fb + fc, shell_norm, [&](const Vec& freev) {
        if (max_abs(freev, fb + fc) != shell_norm) return;
        iterate_torsion(base_.torsion, [&](const Vec& bt) {
          iterate_torsion(central_.torsion, [&](const Vec& ct) {
            Vec a(base_.ngens());
            for (int i = 0; i < fb; ++i) a[i] = freev[i];
            for (size_t i = 0; i < bt.size(); ++i) a[fb + i] = bt[i];
            Vec nu(central_.ngens());
            for (int i = 0; i < fc; ++i) nu[i] = freev[fb + i];
            for (size_t i = 0; i < ct.size(); ++i) nu[fc + i] = ct[i];
            out.push_back(make_cp(std::move(nu), std::move(a)));
          });
        });
      });
      break;
    }
  }
  std::sort(out.begin(), out.end(), ElementLess{});
  return out;
}

std::vector<Element> Group::ball(i64 bound) const {
  std::vector<Element> out;
  for (i64 s = 0; s <= bound; ++s) {
    auto sh = shell(s);
    out.insert(out.end(), sh.begin(), sh.end());
    if (s == 0 && cls_ == GroupClass::FiniteCayley) break;
  }
  return out;
}

GroupPtr Group::make_finite_cayley(std::vector<std::string> labels,
                                   std::vector<uint16_t> table, bool trusted) {
  size_t n = labels.size();
  if (n == 0 || table.size() != n * n) throw InvalidTable("table is not |G| x |G|");
  if (n > 65535) throw InvalidTable("finite group too large");
  if (!trusted && n > 256)
    throw InvalidTable("user-supplied Cayley tables above order 256 are refused");

  for (uint16_t x : table)
    if (x >= n) throw InvalidTable("table entry out of range");

  // Latin square
  for (size_t i = 0; i < n; ++i) {
    std::vector<char> row(n, 0), col(n, 0);
    for (size_t j = 0; j < n; ++j) {
      if (row[table[i * n + j]]++) throw InvalidTable("row is not a permutation");
      if (col[table[j * n + i]]++) throw InvalidTable("column is not a permutation");
    }
  }

  // two-sided identity
  int id = -1;
  for (size_t e = 0; e < n; ++e) {
    bool ok = true;
    for (size_t x = 0; x < n && ok; ++x)
      ok = table[e * n + x] == x && table[x * n + e] == x;
    if (ok) {
      id = (int)e;
      break;
    }
  }
  if (id < 0) throw InvalidTable("no identity element");

  std::vector<uint16_t> inv(n, 0);
  for (size_t x = 0; x < n; ++x) {
    int ix = -1;
    for (size_t y = 0; y < n; ++y)
      if (table[x * n + y] == (size_t)id && table[y * n + x] == (size_t)id) {
        ix = (int)y;
        break;
      }
    if (ix < 0) throw InvalidTable("element without a two-sided inverse");
    inv[x] = (uint16_t)ix;
  }

  if (!trusted) {
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        for (size_t c = 0; c < n; ++c)
          if (table[table[a * n + b] * n + c] != table[a * n + table[b * n + c]])
            throw InvalidTable("table is not associative");
  }

  auto g = std::shared_ptr<Group>(new Group());
  g->cls_ = GroupClass::FiniteCayley;
  g->labels_ = std::move(labels);
  g->table_ = std::move(table);
  g->inv_ = std::move(inv);
  g->id_ = (uint32_t)id;
  return g;
}

GroupPtr Group::make_virtually_abelian(int rank, GroupPtr point_group,
                                       std::vector<Mat> action) {
  if (rank < 0) throw InvalidAction("negative rank");
  if (!point_group || point_group->cls() != GroupClass::FiniteCayley)
    throw InvalidAction("point group must be a finite Cayley group");
  uint32_t nq = point_group->fc_order();
  if (action.size() != nq) throw InvalidAction("one action matrix per point-group element required");
  for (const Mat& m : action) {
    if ((int)m.size() != rank) throw InvalidAction("action matrix has wrong shape");
    for (const Vec& r : m)
      if ((int)r.size() != rank) throw InvalidAction("action matrix has wrong shape");
    if (rank > 0) {
      Mat h = lat::hnf(m);
      if (!(h == lat::identity(rank))) throw InvalidAction("action matrix is not unimodular");
    }
  }
  // homomorphism: action[q1 q2] = action[q1] * action[q2]
  for (uint32_t q1 = 0; q1 < nq; ++q1)
    for (uint32_t q2 = 0; q2 < nq; ++q2)
      if (!(lat::mat_mul(action[q1], action[q2]) == action[point_group->fc_mul(q1, q2)]))
        throw InvalidAction("action is not a homomorphism");

  auto g = std::shared_ptr<Group>(new Group());
  g->cls_ = GroupClass::VirtuallyAbelian;
  g->rank_ = rank;
  g->point_ = std::move(point_group);
  g->action_inv_.resize(nq);
  for (uint32_t q = 0; q < nq; ++q) g->action_inv_[q] = action[g->point_->fc_inv(q)];
  g->action_ = std::move(action);
  return g;
}

GroupPtr Group::make_central_pairing(AbelianCoords base, AbelianCoords central,
                                     std::vector<Vec> beta) {
  int n = base.ngens();
  if ((int)beta.size() != n * n) throw InvalidPairing("pairing matrix has wrong shape");
  for (Vec& b : beta) {
    if ((int)b.size() != central.ngens()) throw InvalidPairing("pairing value has wrong shape");
    b = central.reduce(std::move(b));
  }
  for (i64 d : base.torsion)
    if (d < 1) throw InvalidPairing("invalid torsion factor");
  for (i64 d : central.torsion)
    if (d < 1) throw InvalidPairing("invalid torsion factor");

  auto at = [&](int i, int j) -> const Vec& { return beta[(size_t)i * n + j]; };
  for (int i = 0; i < n; ++i) {
    if (!central.is_zero(at(i, i))) throw InvalidPairing("pairing is not alternating (diagonal)");
    for (int j = 0; j < n; ++j) {
      Vec s = central.reduce(lat::add(at(i, j), at(j, i)));
      if (!central.is_zero(s)) throw InvalidPairing("pairing is not antisymmetric");
      // torsion annihilation: ord(e_i) * beta(i,j) = 0 in N
      if (i >= base.free_rank) {
        i64 d = base.torsion[i - base.free_rank];
        Vec t = central.reduce(lat::scale(d, at(i, j)));
        if (!central.is_zero(t))
          throw InvalidPairing("pairing is not annihilated by base torsion");
      }
    }
  }

  auto g = std::shared_ptr<Group>(new Group());
  g->cls_ = GroupClass::CentralPairing;
  g->base_ = std::move(base);
  g->central_ = std::move(central);
  g->beta_ = std::move(beta);
  return g;
}

ElementStream::ElementStream(GroupPtr g, size_t max_scanned)
    : g_(std::move(g)), max_scanned_(max_scanned) {
  shell_ = g_->shell(0);
}

Element ElementStream::next() {
  for (;;) {
    if (pos_ < shell_.size()) {
      if (++produced_ > max_scanned_)
        throw EnumerationExhausted("element enumeration horizon exceeded");
      return shell_[pos_++];
    }
    bool finite = g_->order().has_value();
    if (finite) throw EnumerationExhausted("finite group exhausted");
    ++norm_;
    pos_ = 0;
    shell_ = g_->shell(norm_);
  }
}

}  // namespace ccm
