#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccm/cosetring.hpp"

namespace ccm {

// The finite list of centraliser-index strata: U_m is the set of elements
// whose centraliser has index exactly m, as a coset-ring element; the
// remainder U_infinity collects the elements with infinite-index
// centralisers.
struct StratumTable {
  GroupPtr g;
  std::vector<std::pair<i64, RingElem>> strata;  // (m, U_m), sorted by m, non-empty parts only
  RingElem u_infinity;
  std::vector<Rational> measures;  // aligned with strata
  Rational infinity_measure;

  // pairwise-disjointness and total-measure checks; throws on violation
  void validate() const;
};

Rational dc_finite(const GroupPtr& g);

Rational product_mean_finite(const GroupPtr& g,
                             const std::vector<std::pair<uint32_t, uint32_t>>& pairs);
Rational product_mean_finite(const GroupPtr& g,
                             const std::function<bool(uint32_t, uint32_t)>& pred);

StratumTable centralizer_strata(const GroupPtr& g);
Rational dc_strata(const StratumTable& table);
Rational dc_strata(const GroupPtr& g);

struct RfChainResult {
  std::vector<i64> quotient_orders;
  std::vector<Rational> values;  // dc(G/N_i)
  bool nested = false;           // every step contained in the previous
  bool non_increasing = false;   // value sequence non-increasing
};
RfChainResult dc_rf_chain(const GroupPtr& g, const std::vector<Subgroup>& chain,
                          i64 cap = 10000);

// mod-m congruence subgroups, the canonical chains for the infinite classes
std::vector<Subgroup> mod_chain(const GroupPtr& g, const std::vector<i64>& moduli);

struct GallagherReport {
  Rational lhs;  // dc(G)
  Rational rhs;  // dc(G/N) * dc(N)
  bool holds = false;
};
GallagherReport gallagher_check(const GroupPtr& g, const Subgroup& n);

struct XnReport {
  Rational dc;
  Rational xn_measure;
  bool bound_holds = false;  // dc <= xn_measure + 1/n
};
XnReport xn_check(const GroupPtr& g, i64 n);

struct FafWitness {
  bool is_faf = false;
  std::optional<Subgroup> n0;  // finite normal subgroup
  std::optional<Subgroup> h0;  // finite-index normal subgroup containing n0
  std::string certificate;
};
FafWitness faf_witness(const GroupPtr& g);

// n elements whose pairwise quotients all have infinite-index centralisers
// (so the reciprocal-index sum is exactly 0 < eps); refuses with
// HypothesisFails when the finite-centraliser-index subgroup has finite
// index.
std::vector<Element> small_commuting_sum(const GroupPtr& g, int n, const Rational& eps,
                                         Rational* sum_out = nullptr);

// Searches the coset g·K of K <= H×H for a commuting pair. `square` must be
// the direct-product group of `h` with itself.
std::optional<Element> commuting_transversal(const GroupPtr& h, const GroupPtr& square,
                                             const Subgroup& k, const Element& g);

}  // namespace ccm
