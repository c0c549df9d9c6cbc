#ifndef DGSEM_TENSOR_HPP
#define DGSEM_TENSOR_HPP

#include <array>

#include "dgsem/types.hpp"

namespace dgsem {

// Tensor-product helpers for node-major nodal arrays with ncomp values per
// node. Volume arrays use extents (n0, n1, n2) with node = i + n0*(j + n1*k);
// face arrays use (n0, n1) with node = a + n0*b.

/// out = A applied along `axis` of `in`; out extent along that axis is
/// A.rows(). in and out must not alias.
inline void apply_along_axis(const Matrix& A, int axis,
                             const std::array<int, 3>& ext_in, int ncomp,
                             const double* in, double* out) {
  const int nin = ext_in[axis];
  const int nout = static_cast<int>(A.rows());
  const int b = (axis == 0) ? 1 : 0;
  const int c = (axis == 2) ? 1 : 2;
  std::array<int, 3> ext_out = ext_in;
  ext_out[axis] = nout;
  const std::array<int, 3> sin = {1, ext_in[0], ext_in[0] * ext_in[1]};
  const std::array<int, 3> sout = {1, ext_out[0], ext_out[0] * ext_out[1]};
  for (int ic = 0; ic < ext_in[c]; ++ic) {
    for (int ib = 0; ib < ext_in[b]; ++ib) {
      const int base_in = ib * sin[b] + ic * sin[c];
      const int base_out = ib * sout[b] + ic * sout[c];
      for (int r = 0; r < nout; ++r) {
        double* o = out + static_cast<std::size_t>(base_out + r * sout[axis]) * ncomp;
        for (int v = 0; v < ncomp; ++v) o[v] = 0.0;
        for (int m = 0; m < nin; ++m) {
          const double a = A(r, m);
          if (a == 0.0) continue;
          const double* p =
              in + static_cast<std::size_t>(base_in + m * sin[axis]) * ncomp;
          for (int v = 0; v < ncomp; ++v) o[v] += a * p[v];
        }
      }
    }
  }
}

/// Contracts `in` along `axis` with the vector t (e.g. a boundary trace),
/// producing a face array over the remaining two axes in increasing order.
inline void contract_axis(const Vector& t, int axis,
                          const std::array<int, 3>& ext, int ncomp,
                          const double* in, double* out) {
  const int b = (axis == 0) ? 1 : 0;
  const int c = (axis == 2) ? 1 : 2;
  const std::array<int, 3> s = {1, ext[0], ext[0] * ext[1]};
  for (int ic = 0; ic < ext[c]; ++ic) {
    for (int ib = 0; ib < ext[b]; ++ib) {
      double* o = out + static_cast<std::size_t>(ib + ext[b] * ic) * ncomp;
      for (int v = 0; v < ncomp; ++v) o[v] = 0.0;
      const int base = ib * s[b] + ic * s[c];
      for (int m = 0; m < ext[axis]; ++m) {
        const double a = t[m];
        if (a == 0.0) continue;
        const double* p = in + static_cast<std::size_t>(base + m * s[axis]) * ncomp;
        for (int v = 0; v < ncomp; ++v) o[v] += a * p[v];
      }
    }
  }
}

/// 2D variant for face data: applies A along axis 0 or 1 of an (n0, n1) array.
inline void apply_along_face_axis(const Matrix& A, int axis,
                                  const std::array<int, 2>& ext_in, int ncomp,
                                  const double* in, double* out) {
  const int nin = ext_in[axis];
  const int nout = static_cast<int>(A.rows());
  const int other = 1 - axis;
  std::array<int, 2> ext_out = ext_in;
  ext_out[axis] = nout;
  const std::array<int, 2> sin = {1, ext_in[0]};
  const std::array<int, 2> sout = {1, ext_out[0]};
  for (int io = 0; io < ext_in[other]; ++io) {
    for (int r = 0; r < nout; ++r) {
      double* o = out + static_cast<std::size_t>(io * sout[other] + r * sout[axis]) * ncomp;
      for (int v = 0; v < ncomp; ++v) o[v] = 0.0;
      for (int m = 0; m < nin; ++m) {
        const double a = A(r, m);
        if (a == 0.0) continue;
        const double* p =
            in + static_cast<std::size_t>(io * sin[other] + m * sin[axis]) * ncomp;
        for (int v = 0; v < ncomp; ++v) o[v] += a * p[v];
      }
    }
  }
}

}  // namespace dgsem

#endif
