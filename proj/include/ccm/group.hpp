#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ccm/lattice.hpp"
#include "ccm/rational.hpp"

namespace ccm {

class Group;
using GroupPtr = std::shared_ptr<const Group>;

enum class GroupClass { FiniteCayley, VirtuallyAbelian, CentralPairing };

// Finitely generated abelian coordinate system: free generators first, then
// torsion generators with the given invariant factors. Values are coordinate
// vectors over all generators, torsion coordinates kept in [0, factor).
struct AbelianCoords {
  int free_rank = 0;
  std::vector<i64> torsion;  // invariant factors, each >= 2 (or 1 for trivial)

  int ngens() const { return free_rank + (int)torsion.size(); }
  bool is_finite() const { return free_rank == 0; }
  std::optional<i64> order() const;
  Mat relation_rows() const;  // torsion relations d_j * e_j as lattice rows
  Vec reduce(Vec v) const;    // canonical coordinate ranges
  bool is_zero(const Vec& v) const;
};

// A group element. Field use depends on the owning group's class:
//   FiniteCayley:      idx
//   VirtuallyAbelian:  v (length = rank), q (point-group element index)
//   CentralPairing:    nu (central coordinates), v (base coordinates)
// Coordinates are always reduced to canonical ranges; equality is
// coordinate equality.
struct Element {
  const Group* owner = nullptr;
  uint32_t idx = 0;
  uint32_t q = 0;
  Vec v;
  Vec nu;

  friend bool operator==(const Element& a, const Element& b) {
    return a.owner == b.owner && a.idx == b.idx && a.q == b.q && a.v == b.v && a.nu == b.nu;
  }
};

// Deterministic total order on elements of one group: graded by max-norm of
// the free coordinates, then zigzag-lexicographic (0 < -1 < 1 < -2 < 2 < ...)
// across coordinates, point-group index last.
bool element_less(const Element& a, const Element& b);

struct ElementLess {
  bool operator()(const Element& a, const Element& b) const { return element_less(a, b); }
};

class Group : public std::enable_shared_from_this<Group> {
 public:
  GroupClass cls() const { return cls_; }

  // ---- FiniteCayley data ----
  const std::vector<std::string>& labels() const { return labels_; }
  uint32_t fc_order() const { return (uint32_t)labels_.size(); }
  uint32_t fc_mul(uint32_t a, uint32_t b) const { return table_[(size_t)a * labels_.size() + b]; }
  uint32_t fc_inv(uint32_t a) const { return inv_[a]; }
  uint32_t fc_id() const { return id_; }

  // ---- VirtuallyAbelian data ----
  int rank() const { return rank_; }
  const GroupPtr& point_group() const { return point_; }
  const Mat& action(uint32_t q) const { return action_[q]; }
  const Mat& action_inv(uint32_t q) const { return action_inv_[q]; }

  // ---- CentralPairing data ----
  const AbelianCoords& base() const { return base_; }
  const AbelianCoords& central() const { return central_; }
  // beta(i, j) as central coordinates; the stored matrix is alternating.
  const Vec& beta(int i, int j) const { return beta_[(size_t)i * base_.ngens() + j]; }
  Vec pairing(const Vec& a, const Vec& b) const;  // beta(a, b)
  Vec cocycle(const Vec& a, const Vec& b) const;  // upper-triangular half of beta

  // ---- element arithmetic ----
  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element invert(const Element& a) const;
  Element commutator(const Element& a, const Element& b) const;  // a^-1 b^-1 a b
  Element power(const Element& a, i64 k) const;
  Element make_fc(uint32_t idx) const;
  Element make_va(Vec v, uint32_t q) const;
  Element make_cp(Vec nu, Vec a) const;

  std::optional<i64> order() const;  // group order; nullopt = infinite
  std::vector<Element> generators() const;
  std::string describe_element(const Element& e) const;

  // All elements whose free coordinates have max-norm exactly `shell`
  // (FiniteCayley: everything at shell 0), sorted by element_less. Shells
  // concatenated in order form a prefix-monotone exhaustion of the group.
  std::vector<Element> shell(i64 shell_norm) const;
  std::vector<Element> ball(i64 bound) const;  // shells 0..bound concatenated

  static GroupPtr make_finite_cayley(std::vector<std::string> labels,
                                     std::vector<uint16_t> table, bool trusted = false);
  static GroupPtr make_virtually_abelian(int rank, GroupPtr point_group,
                                         std::vector<Mat> action);
  static GroupPtr make_central_pairing(AbelianCoords base, AbelianCoords central,
                                       std::vector<Vec> beta);

 private:
  Group() = default;
  void check_same(const Element& a, const Element& b) const;

  GroupClass cls_ = GroupClass::FiniteCayley;

  // FiniteCayley
  std::vector<std::string> labels_;
  std::vector<uint16_t> table_;
  std::vector<uint16_t> inv_;
  uint32_t id_ = 0;

  // VirtuallyAbelian
  int rank_ = 0;
  GroupPtr point_;
  std::vector<Mat> action_;
  std::vector<Mat> action_inv_;

  // CentralPairing
  AbelianCoords base_;
  AbelianCoords central_;
  std::vector<Vec> beta_;
};

// Deterministic sequence of all elements, growing shell by shell; throws
// EnumerationExhausted after `max_scanned` elements have been produced.
class ElementStream {
 public:
  explicit ElementStream(GroupPtr g, size_t max_scanned = 1000000);
  Element next();

 private:
  GroupPtr g_;
  std::vector<Element> shell_;
  size_t pos_ = 0;
  i64 norm_ = 0;
  size_t produced_ = 0;
  size_t max_scanned_;
  bool finite_done_ = false;
};

}  // namespace ccm
