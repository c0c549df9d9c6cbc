#ifndef DGSEM_FIELD_HPP
#define DGSEM_FIELD_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "dgsem/basis.hpp"

namespace dgsem {

/// Per-element anisotropic polynomial orders plus the global bounds the
/// adaptation logic may move between.
struct OrderMap {
  std::vector<std::array<int, 3>> orders;
  int p_min = 0;
  int p_max = max_order;

  static OrderMap uniform(int n_elements, std::array<int, 3> p);
  int n_elements() const { return static_cast<int>(orders.size()); }
  bool operator==(const OrderMap& other) const { return orders == other.orders; }
};

/// Nodal data of one element: ncomp values per tensor-product node,
/// node-major so one node's components are contiguous.
struct ElementData {
  std::array<int, 3> orders{0, 0, 0};
  std::vector<double> values;

  std::array<int, 3> extents() const {
    return {orders[0] + 1, orders[1] + 1, orders[2] + 1};
  }
  int node_count() const {
    return (orders[0] + 1) * (orders[1] + 1) * (orders[2] + 1);
  }
  int node_index(int i, int j, int k) const {
    return i + (orders[0] + 1) * (j + (orders[1] + 1) * k);
  }
  double* at(int node, int ncomp) { return values.data() + node * ncomp; }
  const double* at(int node, int ncomp) const {
    return values.data() + node * ncomp;
  }
};

/// A nodal field over the whole mesh (conservative state, gradients, ...).
struct Field {
  int ncomp = 0;
  double time = 0.0;
  std::vector<ElementData> elements;

  static Field zeros(const OrderMap& orders, int ncomp);
  int n_elements() const { return static_cast<int>(elements.size()); }
  std::size_t dof_count() const;
  bool same_shape(const Field& other) const;
};

/// Conservative variables (rho, rho v, rho e): ncomp = 5.
using SolutionField = Field;

inline constexpr int n_cons = 5;

// Element-parallel BLAS-1 style helpers for the time integrator.
void field_fill(Field& f, double value);
void field_copy(const Field& src, Field& dst);
void field_scale(Field& f, double a);
void field_axpy(double a, const Field& x, Field& y);  // y += a*x
double field_max_abs(const Field& f);
double field_max_abs_diff(const Field& a, const Field& b);

}  // namespace dgsem

#endif
