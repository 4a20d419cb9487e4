#include "ccm/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace ccm {
namespace lat {

Mat identity(int n) {
  Mat m(n, Vec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Vec zero_vec(int n) { return Vec(n, 0); }

Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = intops::add(a[i], b[i]);
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = intops::sub(a[i], b[i]);
  return r;
}

Vec neg(const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = intops::neg(a[i]);
  return r;
}

Vec scale(i64 k, const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = intops::mul(k, a[i]);
  return r;
}

bool is_zero(const Vec& a) {
  for (i64 x : a)
    if (x != 0) return false;
  return true;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.empty() || b.empty()) return {};
  size_t n = a.size(), k = b.size(), m = b[0].size();
  Mat r(n, Vec(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) {
      if (a[i][j] == 0) continue;
      for (size_t c = 0; c < m; ++c)
        r[i][c] = intops::add(r[i][c], intops::mul(a[i][j], b[j][c]));
    }
  return r;
}

Vec mat_apply(const Mat& m, const Vec& v) {
  Vec r(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      if (m[i][j] != 0) r[i] = intops::add(r[i], intops::mul(m[i][j], v[j]));
  return r;
}

Mat transpose(const Mat& m) {
  if (m.empty()) return {};
  Mat r(m[0].size(), Vec(m.size()));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[0].size(); ++j) r[j][i] = m[i][j];
  return r;
}

Mat stack(const Mat& a, const Mat& b) {
  Mat r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

namespace {

void row_sub(Vec& target, const Vec& src, i64 q) {
  if (q == 0) return;
  for (size_t i = 0; i < target.size(); ++i)
    target[i] = intops::sub(target[i], intops::mul(q, src[i]));
}

// Shared driver: row-HNF with optional transform tracking.
HnfTransform hnf_impl(Mat a, bool track) {
  int rows = (int)a.size();
  int cols = rows ? (int)a[0].size() : 0;
  Mat u = track ? identity(rows) : Mat{};
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    // Euclidean elimination below the working row.
    for (;;) {
      int piv = -1;
      for (int i = rank; i < rows; ++i) {
        if (a[i][col] == 0) continue;
        if (piv < 0 || std::abs(a[i][col]) < std::abs(a[piv][col])) piv = i;
      }
      if (piv < 0) break;
      std::swap(a[piv], a[rank]);
      if (track) std::swap(u[piv], u[rank]);
      bool clean = true;
      for (int j = rank + 1; j < rows; ++j) {
        if (a[j][col] == 0) continue;
        i64 q = a[j][col] / a[rank][col];
        row_sub(a[j], a[rank], q);
        if (track) row_sub(u[j], u[rank], q);
        if (a[j][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (a[rank][col] == 0) continue;
    if (a[rank][col] < 0) {
      a[rank] = neg(a[rank]);
      if (track) u[rank] = neg(u[rank]);
    }
    for (int j = 0; j < rank; ++j) {
      i64 q = intops::fdiv(a[j][col], a[rank][col]);
      row_sub(a[j], a[rank], q);
      if (track) row_sub(u[j], u[rank], q);
    }
    ++rank;
  }
  HnfTransform res;
  res.rank = rank;
  res.h.assign(a.begin(), a.begin() + rank);
  res.u = std::move(u);
  return res;
}

int pivot_col(const Vec& row) {
  for (size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0) return (int)i;
  return -1;
}

}  // namespace

Mat hnf(Mat rows) { return hnf_impl(std::move(rows), false).h; }

HnfTransform hnf_transform(Mat rows) { return hnf_impl(std::move(rows), true); }

std::optional<Vec> solve_hnf(const Mat& hnf_basis, Vec target) {
  Vec coeff(hnf_basis.size(), 0);
  for (size_t r = 0; r < hnf_basis.size(); ++r) {
    int pc = pivot_col(hnf_basis[r]);
    if (pc < 0) continue;
    i64 p = hnf_basis[r][pc];
    if (target[pc] % p != 0) return std::nullopt;
    i64 q = target[pc] / p;
    coeff[r] = q;
    row_sub(target, hnf_basis[r], q);
  }
  if (!is_zero(target)) return std::nullopt;
  return coeff;
}

std::optional<Vec> solve(const Mat& rows, const Vec& target) {
  if (rows.empty()) return is_zero(target) ? std::optional<Vec>(Vec{}) : std::nullopt;
  HnfTransform t = hnf_transform(rows);
  auto c = solve_hnf(t.h, target);
  if (!c) return std::nullopt;
  Vec x(rows.size(), 0);
  for (int r = 0; r < t.rank; ++r)
    if ((*c)[r] != 0)
      for (size_t j = 0; j < x.size(); ++j)
        x[j] = intops::add(x[j], intops::mul((*c)[r], t.u[r][j]));
  return x;
}

bool in_span(const Mat& hnf_basis, const Vec& v) { return solve_hnf(hnf_basis, v).has_value(); }

Mat kernel(const Mat& rows) {
  if (rows.empty()) return {};
  HnfTransform t = hnf_transform(rows);
  Mat basis(t.u.begin() + t.rank, t.u.end());
  return hnf(std::move(basis));
}

Mat sum(const Mat& a, const Mat& b) { return hnf(stack(a, b)); }

Mat intersect(const Mat& a, const Mat& b) {
  if (a.empty() || b.empty()) return {};
  Mat st = stack(a, b);
  Mat ker = kernel(st);
  Mat basis;
  for (const Vec& k : ker) {
    Vec v(a[0].size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
      if (k[i] != 0)
        for (size_t j = 0; j < v.size(); ++j)
          v[j] = intops::add(v[j], intops::mul(k[i], a[i][j]));
    if (!is_zero(v)) basis.push_back(v);
  }
  return hnf(std::move(basis));
}

std::optional<i64> index_in_zn(const Mat& hnf_basis, int n) {
  if ((int)hnf_basis.size() < n) return std::nullopt;
  i64 prod = 1;
  for (int i = 0; i < n; ++i) {
    int pc = pivot_col(hnf_basis[i]);
    if (pc != i) return std::nullopt;  // defensive; full-rank HNF has pc == i
    prod = intops::mul(prod, hnf_basis[i][pc]);
  }
  return prod;
}

Vec reduce_mod(const Mat& hnf_basis, Vec v) {
  for (const Vec& row : hnf_basis) {
    int pc = pivot_col(row);
    if (pc < 0) continue;
    i64 q = intops::fdiv(v[pc], row[pc]);
    row_sub(v, row, q);
  }
  return v;
}

std::vector<Vec> residues(const Mat& hnf_basis, int n) {
  auto idx = index_in_zn(hnf_basis, n);
  if (!idx) throw Error("residues of a rank-deficient lattice");
  std::vector<Vec> out;
  out.reserve((size_t)*idx);
  Vec cur(n, 0);
  // mixed-radix counter over pivot ranges
  for (;;) {
    out.push_back(reduce_mod(hnf_basis, cur));
    int i = n - 1;
    while (i >= 0) {
      if (++cur[i] < hnf_basis[i][i]) break;
      cur[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::optional<Vec> affine_intersect_point(const Vec& a, const Mat& A, const Vec& b,
                                          const Mat& B) {
  Vec diff = sub(b, a);
  if (A.empty() && B.empty()) return is_zero(diff) ? std::optional<Vec>(a) : std::nullopt;
  Mat st = stack(A, B);
  auto y = solve(st, diff);
  if (!y) return std::nullopt;
  Vec x = a;
  for (size_t i = 0; i < A.size(); ++i)
    if ((*y)[i] != 0)
      for (size_t j = 0; j < x.size(); ++j)
        x[j] = intops::add(x[j], intops::mul((*y)[i], A[i][j]));
  return x;
}

}  // namespace lat
}  // namespace ccm
