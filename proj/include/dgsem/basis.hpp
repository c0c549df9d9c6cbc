#ifndef DGSEM_BASIS_HPP
#define DGSEM_BASIS_HPP

#include <span>
#include <string>

#include "dgsem/types.hpp"

namespace dgsem {

enum class NodeKind { Gauss, GaussLobatto };

std::string to_string(NodeKind kind);

/// One-dimensional nodal spectral basis of degree P: quadrature nodes and
/// weights, the Lagrange differentiation matrix, barycentric weights, the
/// Legendre modal transform pair, and the end-point trace/lift data the DG
/// operators need. Immutable after construction.
struct NodalBasis {
  int order = 0;
  NodeKind kind = NodeKind::Gauss;

  Vector nodes;         // P+1, strictly increasing, symmetric about 0
  Vector weights;       // positive, sum to 2
  Vector bary_weights;  // barycentric weights for the node set

  Matrix diff;            // D: derivative of the interpolant at the nodes
  Matrix weak_diff;       // M^{-1} D^T M, the weak-form volume operator
  Matrix modal_forward;   // nodal values -> Legendre coefficients
  Matrix modal_backward;  // Legendre coefficients -> nodal values

  Vector trace_left;   // l_j(-1)
  Vector trace_right;  // l_j(+1)
  Vector lift_left;    // l_j(-1) / w_j
  Vector lift_right;   // l_j(+1) / w_j

  int n() const { return order + 1; }
};

/// Highest supported polynomial order; conditioning is untested beyond it.
inline constexpr int max_order = 20;

/// Builds the basis of degree P. GaussLobatto requires P >= 1.
NodalBasis build_basis(int order, NodeKind kind);

/// Process-wide cache keyed by (order, kind). Returned references stay valid
/// for the lifetime of the program; concurrent reads are safe.
const NodalBasis& cached_basis(int order, NodeKind kind);

/// Rows evaluate the Lagrange interpolant at the targets; targets must lie
/// in [-1, 1] (extrapolation is refused).
Matrix interpolation_matrix(const NodalBasis& basis, std::span<const double> targets);

/// D * values: derivative of the interpolant at the nodes.
Vector apply_diff(const NodalBasis& basis, std::span<const double> values);

/// Nodal values -> Legendre coefficients and back.
Vector modal_transform(const NodalBasis& basis, std::span<const double> nodal);
Vector nodal_from_modal(const NodalBasis& basis, std::span<const double> coeffs);

/// Legendre polynomial L_k and its derivative at x (recurrence evaluation).
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int k, double x);

}  // namespace dgsem

#endif
