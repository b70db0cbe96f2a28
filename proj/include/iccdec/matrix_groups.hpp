#ifndef ICCDEC_MATRIX_GROUPS_HPP_
#define ICCDEC_MATRIX_GROUPS_HPP_

#include "iccdec/eisenstein.hpp"
#include "iccdec/group_core.hpp"

namespace iccdec {

// The parabolic pair A = [[1,1],[0,1]], B = [[1,0],[-w,1]] generating the
// figure-eight knot group inside SL(2, Z[w]). The group is flagged as a
// finite-covolume lattice (a declared fact, not verified here).
inline StructuredGroup figure8_group() {
  const Mat2E a(1, 1, 0, 1);
  const Mat2E b(1, 0, -EisensteinInt::omega(), 1);
  return StructuredGroup::matrix_sl2_eisenstein({a, b}, {"A", "B"}, true);
}

inline const Mat2E& matrix_of(const GroupElement& g) {
  const auto* m = std::get_if<MatrixForm>(&g.payload());
  if (!m) throw UsageError("element is not a matrix");
  return *m->m;
}

}  // namespace iccdec

#endif  // ICCDEC_MATRIX_GROUPS_HPP_
