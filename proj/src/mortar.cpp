#include "dgsem/mortar.hpp"

#include <vector>

#include "dgsem/tensor.hpp"

namespace dgsem {

namespace {

Matrix prolongation_1d(int from_order, int to_order, NodeKind kind) {
  const NodalBasis& src = cached_basis(from_order, kind);
  if (from_order == to_order)
    return Matrix::Identity(src.n(), src.n());
  const NodalBasis& dst = cached_basis(to_order, kind);
  std::vector<double> targets(dst.nodes.data(), dst.nodes.data() + dst.n());
  return interpolation_matrix(src, targets);
}

// Adjoint of prolongation in the face quadrature inner products:
// R = M_side^{-1} P^T M_mortar.
Matrix restriction_1d(const Matrix& prolong, int side_order, int mortar_order,
                      NodeKind kind) {
  if (side_order == mortar_order)
    return Matrix::Identity(prolong.rows(), prolong.cols());
  const NodalBasis& side = cached_basis(side_order, kind);
  const NodalBasis& mortar = cached_basis(mortar_order, kind);
  Matrix r = prolong.transpose();
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j)
      r(i, j) *= mortar.weights[j] / side.weights[i];
  return r;
}

}  // namespace

Mortar build_mortar(std::array<int, 2> left_orders,
                    std::array<int, 2> right_orders, int orientation,
                    NodeKind kind) {
  Mortar m;
  m.orientation = orientation;
  m.left_orders = left_orders;
  m.right_orders = orientation_swaps_axes(orientation)
                       ? std::array<int, 2>{right_orders[1], right_orders[0]}
                       : right_orders;
  for (int a = 0; a < 2; ++a)
    m.orders[a] = std::max(m.left_orders[a], m.right_orders[a]);
  for (int a = 0; a < 2; ++a) {
    m.prolong_left[a] = prolongation_1d(m.left_orders[a], m.orders[a], kind);
    m.restrict_left[a] =
        restriction_1d(m.prolong_left[a], m.left_orders[a], m.orders[a], kind);
    m.prolong_right[a] = prolongation_1d(m.right_orders[a], m.orders[a], kind);
    m.restrict_right[a] =
        restriction_1d(m.prolong_right[a], m.right_orders[a], m.orders[a], kind);
  }
  m.conforming_left = m.left_orders == m.orders;
  m.conforming_right = m.right_orders == m.orders;
  return m;
}

void permute_right_to_left(const Mortar& m, int ncomp, const double* right_own,
                           double* left_frame) {
  const int n0 = m.right_orders[0] + 1;
  const int n1 = m.right_orders[1] + 1;
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i0 = 0; i0 < n0; ++i0) {
      const auto r = orient_indices(m.orientation, i0, i1, n0, n1);
      const int nr0 = orientation_swaps_axes(m.orientation) ? n1 : n0;
      const double* src =
          right_own + static_cast<std::size_t>(r[0] + nr0 * r[1]) * ncomp;
      double* dst = left_frame + static_cast<std::size_t>(i0 + n0 * i1) * ncomp;
      for (int v = 0; v < ncomp; ++v) dst[v] = src[v];
    }
}

void permute_left_to_right(const Mortar& m, int ncomp, const double* left_frame,
                           double* right_own) {
  const int n0 = m.right_orders[0] + 1;
  const int n1 = m.right_orders[1] + 1;
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i0 = 0; i0 < n0; ++i0) {
      const auto r = orient_indices(m.orientation, i0, i1, n0, n1);
      const int nr0 = orientation_swaps_axes(m.orientation) ? n1 : n0;
      const double* src =
          left_frame + static_cast<std::size_t>(i0 + n0 * i1) * ncomp;
      double* dst = right_own + static_cast<std::size_t>(r[0] + nr0 * r[1]) * ncomp;
      for (int v = 0; v < ncomp; ++v) dst[v] = src[v];
    }
}

void mortar_prolong(const Mortar& m, bool left_side, int ncomp,
                    const double* side, double* mortar) {
  const auto& p = left_side ? m.prolong_left : m.prolong_right;
  const auto& so = left_side ? m.left_orders : m.right_orders;
  const std::array<int, 2> ext = {so[0] + 1, so[1] + 1};
  if ((left_side && m.conforming_left) || (!left_side && m.conforming_right)) {
    const std::size_t count = static_cast<std::size_t>(ext[0]) * ext[1] * ncomp;
    for (std::size_t i = 0; i < count; ++i) mortar[i] = side[i];
    return;
  }
  std::vector<double> tmp(static_cast<std::size_t>(m.orders[0] + 1) * ext[1] *
                          ncomp);
  apply_along_face_axis(p[0], 0, ext, ncomp, side, tmp.data());
  apply_along_face_axis(p[1], 1, {m.orders[0] + 1, ext[1]}, ncomp, tmp.data(),
                        mortar);
}

void mortar_restrict(const Mortar& m, bool left_side, int ncomp,
                     const double* mortar, double* side) {
  const auto& r = left_side ? m.restrict_left : m.restrict_right;
  const auto& so = left_side ? m.left_orders : m.right_orders;
  const std::array<int, 2> mext = m.mortar_extents();
  if ((left_side && m.conforming_left) || (!left_side && m.conforming_right)) {
    const std::size_t count = static_cast<std::size_t>(mext[0]) * mext[1] * ncomp;
    for (std::size_t i = 0; i < count; ++i) side[i] = mortar[i];
    return;
  }
  std::vector<double> tmp(static_cast<std::size_t>(so[0] + 1) * mext[1] * ncomp);
  apply_along_face_axis(r[0], 0, mext, ncomp, mortar, tmp.data());
  apply_along_face_axis(r[1], 1, {so[0] + 1, mext[1]}, ncomp, tmp.data(), side);
}

}  // namespace dgsem
