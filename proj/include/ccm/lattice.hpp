#pragma once

#include <optional>
#include <vector>

#include "ccm/rational.hpp"

namespace ccm {

using Vec = std::vector<i64>;
using Mat = std::vector<Vec>;

// Integer-lattice toolkit. Lattices are row spans of integer matrices; the
// canonical basis is the row-style Hermite normal form: pivots positive,
// entries above each pivot reduced into [0, pivot), zero rows dropped,
// rows ordered by pivot column.
namespace lat {

Mat identity(int n);
Vec zero_vec(int n);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec neg(const Vec& a);
Vec scale(i64 k, const Vec& a);
bool is_zero(const Vec& a);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_apply(const Mat& m, const Vec& v);  // column action: (m v)
Mat transpose(const Mat& m);
Mat stack(const Mat& a, const Mat& b);

// Canonical Hermite normal form of the row span.
Mat hnf(Mat rows);

struct HnfTransform {
  Mat h;    // HNF rows (nonzero only), h = (first rank rows of u) * input
  Mat u;    // unimodular row-operation record, u * input = [h; 0...]
  int rank; // number of nonzero rows in h
};
HnfTransform hnf_transform(Mat rows);

// Coefficients x with x * basis = target, where basis is in HNF. nullopt if
// target is outside the row span.
std::optional<Vec> solve_hnf(const Mat& hnf_basis, Vec target);

// x with x * rows = target for an arbitrary row matrix.
std::optional<Vec> solve(const Mat& rows, const Vec& target);

bool in_span(const Mat& hnf_basis, const Vec& v);

// Basis of { x : x * rows = 0 }.
Mat kernel(const Mat& rows);

Mat sum(const Mat& a, const Mat& b);        // lattice sum
Mat intersect(const Mat& a, const Mat& b);  // lattice intersection

// Index of the row span inside Z^n: product of pivots when full rank,
// nullopt (infinite) otherwise.
std::optional<i64> index_in_zn(const Mat& hnf_basis, int n);

// Canonical coset representative: reduce v modulo the row span. Two vectors
// reduce to the same representative exactly when they differ by a lattice
// element.
Vec reduce_mod(const Mat& hnf_basis, Vec v);

// All canonical residues of Z^n modulo a full-rank HNF lattice.
std::vector<Vec> residues(const Mat& hnf_basis, int n);

// One point of (a + span A) ∩ (b + span B), if the intersection is non-empty.
std::optional<Vec> affine_intersect_point(const Vec& a, const Mat& A, const Vec& b, const Mat& B);

}  // namespace lat

}  // namespace ccm
