#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ccm/group.hpp"

namespace ccm {
namespace builders {

GroupPtr trivial();
GroupPtr cyclic(i64 n);
GroupPtr abelian(const std::vector<i64>& factors);
GroupPtr dihedral(i64 n);       // order 2n
GroupPtr symmetric(int n);      // n <= 6
GroupPtr alternating(int n);    // n <= 6
GroupPtr quaternion8();
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);  // FiniteCayley only

GroupPtr z(int n);                  // free abelian of rank n
GroupPtr infinite_dihedral();       // Z ⋊ Z/2 by negation
GroupPtr z2_rot4();                 // Z^2 ⋊ Z/4 by quarter rotation
GroupPtr sympl_z2();                // base Z^2, centre Z/2, mod-2 symplectic pairing
GroupPtr int_heisenberg();          // base Z^2, centre Z, determinant pairing
GroupPtr heisenberg_f2(int n);      // truncated F_2 Heisenberg, order 2^(2n+1)

// Parses names like "dihedral(4)", "abelian(2,4)", "int_heisenberg".
GroupPtr by_name(const std::string& name);

// Named corpus used by tests and the acceptance suite.
std::vector<std::pair<std::string, GroupPtr>> finite_library(i64 max_order = 48);
std::vector<std::pair<std::string, GroupPtr>> infinite_library();

}  // namespace builders
}  // namespace ccm
