#ifndef DGSEM_MORTAR_HPP
#define DGSEM_MORTAR_HPP

#include <array>

#include "dgsem/basis.hpp"
#include "dgsem/mesh.hpp"

namespace dgsem {

/// Coupling operators for one face. The mortar space lives in the LEFT
/// face's coordinate frame and carries the pointwise maximum of the two
/// sides' tangential orders. Prolongation (side -> mortar) is polynomial
/// interpolation, exact for each side's own degree; restriction is its
/// adjoint with respect to the face quadrature, which preserves the face
/// integral of the flux and hence conservation.
struct Mortar {
  std::array<int, 2> orders{0, 0};        // mortar orders, left frame
  std::array<int, 2> left_orders{0, 0};   // left face orders
  std::array<int, 2> right_orders{0, 0};  // right face orders in the LEFT frame
  int orientation = 0;
  bool conforming_left = true;   // prolong/restrict are identities
  bool conforming_right = true;

  std::array<Matrix, 2> prolong_left;
  std::array<Matrix, 2> restrict_left;
  std::array<Matrix, 2> prolong_right;
  std::array<Matrix, 2> restrict_right;

  std::array<int, 2> mortar_extents() const {
    return {orders[0] + 1, orders[1] + 1};
  }
  int mortar_nodes() const { return (orders[0] + 1) * (orders[1] + 1); }
};

/// left_orders: tangential orders of the left face. right_orders: tangential
/// orders of the right face in its OWN frame; the orientation code maps
/// between the frames. Boundary faces pass right_orders = left_orders.
Mortar build_mortar(std::array<int, 2> left_orders,
                    std::array<int, 2> right_orders, int orientation,
                    NodeKind kind);

/// Reindexes right-side face data from the right face's own frame into the
/// left frame (out extents = mortar.right_orders + 1).
void permute_right_to_left(const Mortar& m, int ncomp, const double* right_own,
                           double* left_frame);
/// Inverse reindexing, left frame -> right face's own frame.
void permute_left_to_right(const Mortar& m, int ncomp, const double* left_frame,
                           double* right_own);

/// side data (own orders, left frame) -> mortar nodes.
void mortar_prolong(const Mortar& m, bool left_side, int ncomp,
                    const double* side, double* mortar);
/// mortar nodes -> side data (own orders, left frame).
void mortar_restrict(const Mortar& m, bool left_side, int ncomp,
                     const double* mortar, double* side);

}  // namespace dgsem

#endif
