#pragma once

#include <vector>

#include "ccm/group.hpp"

namespace ccm {

// A finitely additive probability mean on a finite Cayley group: exact
// non-negative rational weights summing to one.
class MeanVector {
 public:
  MeanVector(GroupPtr g, std::vector<Rational> weights);
  static MeanVector uniform(const GroupPtr& g);
  static MeanVector point_mass(const GroupPtr& g, uint32_t at);

  const GroupPtr& group() const { return g_; }
  const std::vector<Rational>& weights() const { return w_; }
  const Rational& weight(uint32_t idx) const { return w_[idx]; }

 private:
  GroupPtr g_;
  std::vector<Rational> w_;
};

// Worst failure of left invariance: sup over g, A of |mean(gA) - mean(A)|,
// realized exactly by the positive-part sum max_g sum_x max(w(gx) - w(x), 0).
Rational defect_left(const MeanVector& mu);
Rational defect_right(const MeanVector& mu);

// One smoothing step: the new weight of {x} is sum_h w(h) w(hx). Never
// increases the right defect, and contracts the left defect by the factor
// (1 + defect_right)/2; both facts are asserted.
MeanVector smooth_mean(const MeanVector& mu);

struct ConjugacyPartition {
  std::vector<std::vector<uint16_t>> classes;  // each sorted; list sorted by least member
  size_t class_count() const { return classes.size(); }
};
ConjugacyPartition conjugacy_partition(const GroupPtr& g);

Rational k_uniform(const GroupPtr& g);  // class count over group order

// Infimum of mean over sets of conjugacy-class representatives; on a finite
// group this is the sum over classes of the least single-element weight.
Rational k_mu(const GroupPtr& g, const MeanVector& mu);

struct KmuStrataReport {
  Rational lhs;  // (n+1) k_mu
  Rational rhs;  // 1 + n * mu(X_n)
  bool holds = false;
};
KmuStrataReport kmu_strata_inequality(const GroupPtr& g, const MeanVector& mu, i64 n);

}  // namespace ccm
