#pragma once

#include <vector>

#include "ccm/cosetring.hpp"

namespace ccm {

struct WitnessConstraint {
  Subgroup subgroup;
  Rational eps;  // only binding for infinite-index subgroups
};

struct WitnessAtom {
  RingElem set;
  Rational target;
};

enum class WitnessKind { Basic, Mean, DisjointMean, FolnerAmplified };

struct WitnessRequest {
  GroupPtr g;
  WitnessKind kind = WitnessKind::Basic;
  std::vector<WitnessConstraint> constraints;  // Basic
  std::vector<WitnessAtom> atoms;              // Mean / DisjointMean / FolnerAmplified
  i64 size = 0;                                // requested |F| for Mean / DisjointMean
  std::vector<Element> disjointness;           // S: F ∩ sF = ∅ required
  std::vector<Element> folner_k;               // K for the amplified variant
  Rational folner_eps;
  size_t max_scan = 1000000;
};

// Everything below is recomputable from (request, elements) alone.
struct WitnessCertificate {
  // per constraint: worst coset deviation |#(gH ∩ F)/|F| - 1/[G:H]|
  std::vector<Rational> constraint_deviations;
  std::vector<bool> constraint_exact;  // deviation is exactly zero
  // per atom: achieved proportion and |proportion - target|
  std::vector<Rational> atom_proportions;
  std::vector<Rational> atom_deviations;
  // per element of the disjointness set: F ∩ sF = ∅
  std::vector<bool> translate_disjoint;
  // per element of K: |F ⊕ gF| / |F|
  std::vector<Rational> folner_ratios;
};

struct WitnessSet {
  WitnessRequest request;
  std::vector<Element> elements;  // distinct, sorted by the fixed element order
  WitnessCertificate certificate;
};

// Recomputes the certificate from scratch (membership counting only).
WitnessCertificate compute_certificate(const WitnessRequest& req,
                                       const std::vector<Element>& elements);

// Checks that the stored certificate matches a fresh recomputation and that
// every bound the request promises holds exactly. Throws on violation.
void assert_certificate(const WitnessSet& w);

// A finite set with exact coset proportions: deviation 0 for every
// finite-index constraint, deviation < eps for every infinite-index one.
WitnessSet build_witness(const GroupPtr& g, std::vector<WitnessConstraint> constraints,
                         size_t max_scan = 1000000);

// |F| = n with | |F ∩ A_i|/n - target_i | <= 1/n for a partition of atoms.
WitnessSet approximate_mean(const GroupPtr& g, std::vector<WitnessAtom> atoms, i64 n,
                            size_t max_scan = 1000000);

// approximate_mean plus F ∩ sF = ∅ for every s in the identity-free set S.
WitnessSet disjoint_translates_witness(const GroupPtr& g, std::vector<WitnessAtom> atoms,
                                       i64 n, std::vector<Element> s,
                                       size_t max_scan = 1000000);

// A finite set S with |S ⊕ gS|/|S| < eps for every g in K, verified exactly.
std::vector<Element> folner_set(const GroupPtr& g, const std::vector<Element>& k,
                                const Rational& eps);

// Two-scale construction: a disjoint-translates core amplified by a Følner
// set, giving simultaneously |F ⊕ gF|/|F| < eps for g in K and atom
// deviations < eps. Atom targets must equal the atoms' exact measures.
WitnessSet folner_amplify(const GroupPtr& g, std::vector<WitnessAtom> atoms,
                          std::vector<Element> k, const Rational& eps,
                          size_t max_scan = 1000000);

}  // namespace ccm
