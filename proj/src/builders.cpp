#include "ccm/builders.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ccm/errors.hpp"

namespace ccm {
namespace builders {

namespace {

GroupPtr from_table(std::vector<std::string> labels, std::vector<uint16_t> table) {
  return Group::make_finite_cayley(std::move(labels), std::move(table), /*trusted=*/true);
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

int perm_sign(const std::vector<int>& p) {
  int inv = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

GroupPtr perm_group(const std::vector<std::vector<int>>& perms, const std::string& prefix) {
  size_t m = perms.size();
  std::map<std::vector<int>, uint16_t> index;
  std::vector<std::string> labels(m);
  for (size_t i = 0; i < m; ++i) {
    index[perms[i]] = (uint16_t)i;
    std::string l = prefix;
    for (int x : perms[i]) l += std::to_string(x);
    labels[i] = l;
  }
  std::vector<uint16_t> table(m * m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      std::vector<int> c(perms[i].size());
      for (size_t x = 0; x < c.size(); ++x) c[x] = perms[i][perms[j][x]];
      auto it = index.find(c);
      if (it == index.end()) throw Error("permutation set is not closed");
      table[i * m + j] = it->second;
    }
  return from_table(std::move(labels), std::move(table));
}

}  // namespace

GroupPtr trivial() { return cyclic(1); }

GroupPtr cyclic(i64 n) { return abelian({n}); }

GroupPtr abelian(const std::vector<i64>& factors) {
  if (factors.empty()) return abelian({1});
  i64 order = 1;
  for (i64 f : factors) {
    if (f < 1) throw InvalidTable("abelian factor must be positive");
    order = intops::mul(order, f);
  }
  if (order > 65535) throw InvalidTable("finite group too large");
  size_t n = (size_t)order;
  auto coords = [&](size_t idx) {
    std::vector<i64> c(factors.size());
    for (size_t k = factors.size(); k-- > 0;) {
      c[k] = idx % factors[k];
      idx /= factors[k];
    }
    return c;
  };
  auto index_of = [&](const std::vector<i64>& c) {
    size_t idx = 0;
    for (size_t k = 0; k < factors.size(); ++k) idx = idx * factors[k] + (size_t)c[k];
    return idx;
  };
  std::vector<std::string> labels(n);
  for (size_t i = 0; i < n; ++i) {
    auto c = coords(i);
    std::string l = "a";
    for (size_t k = 0; k < c.size(); ++k) l += (k ? "_" : "") + std::to_string(c[k]);
    labels[i] = l;
  }
  std::vector<uint16_t> table(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      auto a = coords(i), b = coords(j);
      for (size_t k = 0; k < factors.size(); ++k) a[k] = (a[k] + b[k]) % factors[k];
      table[i * n + j] = (uint16_t)index_of(a);
    }
  return from_table(std::move(labels), std::move(table));
}

GroupPtr dihedral(i64 n) {
  if (n < 1 || 2 * n > 65535) throw InvalidTable("bad dihedral parameter");
  size_t m = (size_t)(2 * n);
  // element (a, b) = r^a s^b, with s r s = r^-1; index = a + n*b
  std::vector<std::string> labels(m);
  for (i64 a = 0; a < n; ++a) {
    labels[(size_t)a] = "r" + std::to_string(a);
    labels[(size_t)(a + n)] = "s" + std::to_string(a);
  }
  std::vector<uint16_t> table(m * m);
  auto idx = [&](i64 a, i64 b) { return (size_t)(((a % n + n) % n) + n * b); };
  for (i64 a = 0; a < n; ++a)
    for (i64 b = 0; b < 2; ++b)
      for (i64 c = 0; c < n; ++c)
        for (i64 d = 0; d < 2; ++d) {
          // (r^a s^b)(r^c s^d) = r^(a + c*(-1)^b) s^(b+d)
          i64 aa = a + (b ? -c : c);
          table[idx(a, b) * m + idx(c, d)] = (uint16_t)idx(aa, (b + d) % 2);
        }
  return from_table(std::move(labels), std::move(table));
}

GroupPtr symmetric(int n) {
  if (n < 1 || n > 6) throw InvalidTable("symmetric(n) supported for n <= 6");
  return perm_group(permutations(n), "p");
}

GroupPtr alternating(int n) {
  if (n < 1 || n > 6) throw InvalidTable("alternating(n) supported for n <= 6");
  std::vector<std::vector<int>> even;
  for (auto& p : permutations(n))
    if (perm_sign(p) == 1) even.push_back(p);
  return perm_group(even, "p");
}

GroupPtr quaternion8() {
  // 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
  std::vector<std::string> labels = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  auto mul = [](int a, int b) {
    int sa = a & 1, sb = b & 1;
    int ua = a >> 1, ub = b >> 1;  // 0:1 1:i 2:j 3:k
    static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    int u = unit[ua][ub];
    int s = sign[ua][ub] * (sa ? -1 : 1) * (sb ? -1 : 1);
    return (u << 1) | (s < 0 ? 1 : 0);
  };
  std::vector<uint16_t> table(64);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) table[a * 8 + b] = (uint16_t)mul(a, b);
  return from_table(std::move(labels), std::move(table));
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  if (a->cls() != GroupClass::FiniteCayley || b->cls() != GroupClass::FiniteCayley)
    throw UnsupportedForClass("direct_product builder requires finite Cayley groups");
  size_t na = a->fc_order(), nb = b->fc_order(), n = na * nb;
  if (n > 65535) throw InvalidTable("finite group too large");
  std::vector<std::string> labels(n);
  for (size_t i = 0; i < na; ++i)
    for (size_t j = 0; j < nb; ++j)
      labels[i * nb + j] = "(" + a->labels()[i] + "," + b->labels()[j] + ")";
  std::vector<uint16_t> table(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      uint32_t x = a->fc_mul((uint32_t)(i / nb), (uint32_t)(j / nb));
      uint32_t y = b->fc_mul((uint32_t)(i % nb), (uint32_t)(j % nb));
      table[i * n + j] = (uint16_t)(x * nb + y);
    }
  return from_table(std::move(labels), std::move(table));
}

GroupPtr z(int n) {
  std::vector<Mat> action = {lat::identity(n)};
  return Group::make_virtually_abelian(n, trivial(), std::move(action));
}

GroupPtr infinite_dihedral() {
  std::vector<Mat> action = {{{1}}, {{-1}}};
  return Group::make_virtually_abelian(1, cyclic(2), std::move(action));
}

GroupPtr z2_rot4() {
  Mat r = {{0, 1}, {-1, 0}};
  std::vector<Mat> action = {lat::identity(2), r, lat::mat_mul(r, r),
                             lat::mat_mul(r, lat::mat_mul(r, r))};
  return Group::make_virtually_abelian(2, cyclic(4), std::move(action));
}

GroupPtr sympl_z2() {
  AbelianCoords base{2, {}};
  AbelianCoords central{0, {2}};
  std::vector<Vec> beta(4, Vec{0});
  beta[0 * 2 + 1] = {1};
  beta[1 * 2 + 0] = {1};  // -1 = 1 mod 2
  return Group::make_central_pairing(base, central, std::move(beta));
}

GroupPtr int_heisenberg() {
  AbelianCoords base{2, {}};
  AbelianCoords central{1, {}};
  std::vector<Vec> beta(4, Vec{0});
  beta[0 * 2 + 1] = {1};
  beta[1 * 2 + 0] = {-1};
  return Group::make_central_pairing(base, central, std::move(beta));
}

GroupPtr heisenberg_f2(int n) {
  if (n < 1 || n > 6) throw InvalidPairing("heisenberg_f2(n) supported for 1 <= n <= 6");
  AbelianCoords base{0, std::vector<i64>(2 * n, 2)};
  AbelianCoords central{0, {2}};
  std::vector<Vec> beta((size_t)(4 * n * n), Vec{0});
  for (int i = 0; i < n; ++i) {
    beta[(size_t)i * 2 * n + (n + i)] = {1};
    beta[(size_t)(n + i) * 2 * n + i] = {1};
  }
  return Group::make_central_pairing(base, central, std::move(beta));
}

GroupPtr by_name(const std::string& name) {
  std::string head = name;
  std::vector<i64> args;
  auto lp = name.find('(');
  if (lp != std::string::npos) {
    if (name.back() != ')') throw SchemaError("malformed builder name: " + name);
    head = name.substr(0, lp);
    std::string inner = name.substr(lp + 1, name.size() - lp - 2);
    size_t pos = 0;
    while (pos < inner.size()) {
      size_t comma = inner.find(',', pos);
      std::string tok = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        args.push_back(std::stoll(tok));
      } catch (...) {
        throw SchemaError("bad builder argument in: " + name);
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  auto want = [&](size_t k) {
    if (args.size() != k) throw SchemaError("builder " + head + " expects " + std::to_string(k) + " argument(s)");
  };
  if (head == "trivial") { want(0); return trivial(); }
  if (head == "cyclic") { want(1); return cyclic(args[0]); }
  if (head == "abelian") { if (args.empty()) throw SchemaError("abelian needs factors"); return abelian(args); }
  if (head == "dihedral") { want(1); return dihedral(args[0]); }
  if (head == "symmetric") { want(1); return symmetric((int)args[0]); }
  if (head == "alternating") { want(1); return alternating((int)args[0]); }
  if (head == "quaternion8") { want(0); return quaternion8(); }
  if (head == "z") { want(1); return z((int)args[0]); }
  if (head == "infinite_dihedral") { want(0); return infinite_dihedral(); }
  if (head == "z2_rot4") { want(0); return z2_rot4(); }
  if (head == "sympl_z2") { want(0); return sympl_z2(); }
  if (head == "int_heisenberg") { want(0); return int_heisenberg(); }
  if (head == "heisenberg_f2") { want(1); return heisenberg_f2((int)args[0]); }
  throw SchemaError("unknown builtin group: " + name);
}

std::vector<std::pair<std::string, GroupPtr>> finite_library(i64 max_order) {
  std::vector<std::pair<std::string, GroupPtr>> all = {
      {"trivial", trivial()},
      {"cyclic(2)", cyclic(2)},
      {"cyclic(3)", cyclic(3)},
      {"cyclic(4)", cyclic(4)},
      {"cyclic(5)", cyclic(5)},
      {"cyclic(6)", cyclic(6)},
      {"cyclic(8)", cyclic(8)},
      {"cyclic(9)", cyclic(9)},
      {"cyclic(12)", cyclic(12)},
      {"abelian(2,2)", abelian({2, 2})},
      {"abelian(2,4)", abelian({2, 4})},
      {"abelian(2,2,2)", abelian({2, 2, 2})},
      {"abelian(3,3)", abelian({3, 3})},
      {"symmetric(3)", symmetric(3)},
      {"dihedral(4)", dihedral(4)},
      {"quaternion8", quaternion8()},
      {"dihedral(5)", dihedral(5)},
      {"dihedral(6)", dihedral(6)},
      {"alternating(4)", alternating(4)},
      {"dihedral(7)", dihedral(7)},
      {"cyclic(16)", cyclic(16)},
      {"dihedral(8)", dihedral(8)},
      {"dihedral(9)", dihedral(9)},
      {"dihedral(10)", dihedral(10)},
      {"symmetric(4)", symmetric(4)},
      {"dihedral(12)", dihedral(12)},
      {"s3xc2", direct_product(symmetric(3), cyclic(2))},
      {"q8xc2", direct_product(quaternion8(), cyclic(2))},
      {"a4xc2", direct_product(alternating(4), cyclic(2))},
      {"s3xs3", direct_product(symmetric(3), symmetric(3))},
      {"d4xc2", direct_product(dihedral(4), cyclic(2))},
      {"dihedral(24)", dihedral(24)},
      {"s4xc2", direct_product(symmetric(4), cyclic(2))},
  };
  std::vector<std::pair<std::string, GroupPtr>> out;
  for (auto& [n, g] : all)
    if (g->order() && *g->order() <= max_order) out.emplace_back(n, g);
  return out;
}

std::vector<std::pair<std::string, GroupPtr>> infinite_library() {
  return {
      {"z(1)", z(1)},
      {"z(2)", z(2)},
      {"infinite_dihedral", infinite_dihedral()},
      {"z2_rot4", z2_rot4()},
      {"sympl_z2", sympl_z2()},
      {"int_heisenberg", int_heisenberg()},
  };
}

}  // namespace builders
}  // namespace ccm
