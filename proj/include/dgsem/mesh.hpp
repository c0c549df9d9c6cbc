#ifndef DGSEM_MESH_HPP
#define DGSEM_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "dgsem/basis.hpp"
#include "dgsem/field.hpp"
#include "dgsem/types.hpp"

namespace dgsem {

struct CurvatureSpec {
  enum class Kind { None, Sinusoidal };
  Kind kind = Kind::None;
  double amplitude = 0.0;  // relative displacement in unit coordinates
  int wavenumber = 1;
};

/// Structured box mesh description, carried inline by the control file.
struct MeshSpec {
  std::array<int, 3> counts{1, 1, 1};
  Vec3 lower{0.0, 0.0, 0.0};
  Vec3 upper{1.0, 1.0, 1.0};
  std::array<bool, 3> periodic{false, false, false};
  CurvatureSpec curvature;
  // Polynomial degree of the geometry representation. 0 samples the analytic
  // mapping isoparametrically at each element's own nodes; d >= 1 represents
  // the mapping as a shared degree-d polynomial per element, which keeps
  // p-nonconforming faces watertight whenever min(face orders) >= 2d.
  int mapping_degree = 1;
  // Boundary-condition tag per box face, indexed like face_names().
  std::array<std::string, 6> boundary_tags{"xmin", "xmax", "ymin",
                                           "ymax", "zmin", "zmax"};
};

const std::array<std::string, 6>& face_names();

/// Local faces 0..5 = (-x, +x, -y, +y, -z, +z).
inline int face_axis(int f) { return f / 2; }
inline int face_sign(int f) { return (f % 2 == 0) ? -1 : +1; }
/// Tangential axes of a local face, in increasing axis order.
inline std::array<int, 2> face_tangents(int f) {
  switch (face_axis(f)) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

struct Face {
  int left = -1;
  int right = -1;  // -1 for boundary faces
  int left_face = 0;
  int right_face = 0;
  int orientation = 0;   // index into the 8 quad symmetries; 0 = identity
  int boundary_tag = -1; // index into MeshSpec::boundary_tags, -1 interior
  bool boundary() const { return right < 0; }
};

// The 8 symmetries of a quadrilateral face: left-face coordinates (i0, i1)
// on extents (n0, n1) map to right-face indices. Codes 4..7 swap the axes.
std::array<int, 2> orient_indices(int code, int i0, int i1, int n0, int n1);
bool orientation_swaps_axes(int code);
int inverse_orientation(int code);

class Mesh {
public:
  Mesh() = default;

  const MeshSpec& spec() const { return spec_; }
  int n_elements() const { return n_elements_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::array<int, 6>& element_faces(int e) const {
    return element_faces_[e];
  }
  std::array<int, 3> element_cell(int e) const;
  int n_interior_faces() const { return n_interior_; }
  int n_boundary_faces() const { return n_boundary_; }

  /// Physical coordinates of reference point xi in element e.
  Vec3 map_point(int e, const Vec3& xi) const;
  /// Analytic box volume, for quadrature checks.
  double box_volume() const;

  friend Mesh build_box_mesh(const MeshSpec& spec);

private:
  Vec3 analytic_map(int e, const Vec3& xi) const;
  void build_geometry_lattice();

  MeshSpec spec_;
  int n_elements_ = 0;
  int n_interior_ = 0;
  int n_boundary_ = 0;
  std::vector<Face> faces_;
  std::vector<std::array<int, 6>> element_faces_;
  // Degree-d geometry representation: per element, (d+1)^3 lattice values.
  std::vector<double> lattice_;  // [e][node][comp]
  Vector lattice_nodes_;
  Vector lattice_bary_;
};

Mesh build_box_mesh(const MeshSpec& spec);

/// Volume metric terms of one element at its tensor-product nodes.
struct ElementGeometry {
  std::array<int, 3> orders;
  std::vector<double> x;         // node * 3, physical coordinates
  std::vector<double> jacobian;  // node
  std::vector<double> ja;        // node * 9: [dir i][phys comp n] = ja[node*9 + 3*i + n]
  // Outward normal metric trace (sign * Ja^axis) at the element's own face
  // nodes, per local face: facenode * 3.
  std::array<std::vector<double>, 6> face_ja;
  double volume = 0.0;  // sum of w * J

  const double* ja_at(int node) const { return ja.data() + 9 * node; }
  Vec3 contravariant(int node, int dir) const {
    const double* p = ja.data() + 9 * node + 3 * dir;
    return {p[0], p[1], p[2]};
  }
};

struct MeshGeometry {
  NodeKind kind = NodeKind::Gauss;
  std::vector<ElementGeometry> elements;
};

/// Curl-form metric terms at the nodes given by (orders, kind). The discrete
/// metric identity sum_i D_i Ja^i = 0 holds by construction; J must be
/// positive everywhere or a GeometryError names the element.
MeshGeometry compute_metrics(const Mesh& mesh, const OrderMap& orders,
                             NodeKind kind);

/// Max-norm of sum_i D_i Ja^i over the nodes of element e (test hook).
double metric_identity_residual(const ElementGeometry& g, NodeKind kind);

}  // namespace dgsem

#endif
