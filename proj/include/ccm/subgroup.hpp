#pragma once

#include <optional>
#include <vector>

#include "ccm/group.hpp"

namespace ccm {

// Canonical subgroup data. Construction always canonicalizes, so two
// Subgroup values compare equal exactly when they describe the same set.
//
//   FiniteCayley:      sorted element-index set
//   VirtuallyAbelian:  image in Q + HNF kernel lattice + one canonical
//                      translation correction per image element
//   CentralPairing:    HNF lattice for the central part (relation rows
//                      included), HNF lattice for the base part, and one
//                      canonical central correction per base basis row
class Subgroup {
 public:
  Subgroup() = default;  // empty handle; filled by the construction functions

  const GroupPtr& group() const { return g_; }
  const std::vector<Element>& generator_list() const { return gens_; }
  std::vector<Element> canonical_generators() const;

  bool contains(const Element& e) const;
  ExtendedIndex index() const;               // [G : H]
  std::optional<i64> subgroup_order() const; // |H| when finite
  bool subgroup_of(const Subgroup& other) const;
  bool equals(const Subgroup& other) const;
  bool is_whole_group() const;

  // Deterministic total order (for sorting cosets and ring parts).
  static int compare(const Subgroup& a, const Subgroup& b);

  // class-specific canonical data
  const std::vector<uint16_t>& fc_elements() const { return fc_elems_; }
  const std::vector<uint32_t>& va_image() const { return va_image_; }
  const Mat& va_lattice() const { return va_lattice_; }
  const std::vector<Vec>& va_corrections() const { return va_corr_; }
  const Mat& cp_central_lattice() const { return cp_ln_; }
  const Mat& cp_base_lattice() const { return cp_lb_; }
  const std::vector<Vec>& cp_corrections() const { return cp_sigma_; }

  // central coordinates of some subgroup element over the given base lift
  // (which must lie in the base lattice span)
  Vec cp_correction_for(const Vec& base_lift) const;

 private:
  friend Subgroup subgroup_from_generators(const GroupPtr&, std::vector<Element>);
  friend Subgroup fc_subgroup_from_elements(const GroupPtr&, std::vector<uint16_t>);

  GroupPtr g_;
  std::vector<Element> gens_;

  std::vector<uint16_t> fc_elems_;

  std::vector<uint32_t> va_image_;
  Mat va_lattice_;
  std::vector<Vec> va_corr_;

  Mat cp_ln_;
  Mat cp_lb_;
  std::vector<Vec> cp_sigma_;
};

// A left coset rep·H with canonical representative.
struct Coset {
  Subgroup sub;
  Element rep;

  bool contains(const Element& e) const;
  ExtendedIndex index() const { return sub.index(); }
  friend bool operator==(const Coset& a, const Coset& b) {
    return a.rep == b.rep && a.sub.equals(b.sub);
  }
};

int coset_compare(const Coset& a, const Coset& b);

Subgroup subgroup_from_generators(const GroupPtr& g, std::vector<Element> gens);
Subgroup fc_subgroup_from_elements(const GroupPtr& g, std::vector<uint16_t> elems);
Subgroup whole_group(const GroupPtr& g);
Subgroup trivial_subgroup(const GroupPtr& g);

Coset coset_of(const Subgroup& h, const Element& g);

// The intersection of two cosets is either empty or a coset of the
// intersection subgroup.
std::optional<Coset> coset_intersection(const Coset& a, const Coset& b);

ExtendedIndex index(const GroupPtr& g, const Subgroup& h);

Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup conjugate(const Subgroup& h, const Element& g);  // g^-1 H g
Subgroup normal_core(const Subgroup& h);                  // finite index only
Subgroup center(const GroupPtr& g);
Subgroup derived_subgroup(const GroupPtr& g);
Subgroup centralizer(const GroupPtr& g, const Element& e);
Subgroup centralizer_of_subgroup(const GroupPtr& g, const Subgroup& k);
bool is_normal(const Subgroup& h);

// Canonical representatives of the left cosets of K in G ([G:K] finite),
// sorted by the fixed element order.
std::vector<Element> transversal(const Subgroup& k);

// Representatives of cosets of K inside the subgroup H (K <= H, finite
// relative index).
std::vector<Element> relative_transversal(const Subgroup& h, const Subgroup& k);

// G/N as a finite Cayley group; N must be normal of finite index <= cap.
GroupPtr quotient_group(const Subgroup& n, i64 cap = 10000);

// A finite Cayley subgroup as a standalone group.
GroupPtr subgroup_as_group(const Subgroup& h);

// Every subgroup of a finite Cayley group (exhaustive).
std::vector<Subgroup> all_subgroups(const GroupPtr& g);

}  // namespace ccm
