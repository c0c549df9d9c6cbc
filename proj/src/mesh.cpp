#include "dgsem/mesh.hpp"

#include <cmath>

#include "dgsem/errors.hpp"
#include "dgsem/parallel.hpp"
#include "dgsem/tensor.hpp"

namespace dgsem {

const std::array<std::string, 6>& face_names() {
  static const std::array<std::string, 6> names = {"xmin", "xmax", "ymin",
                                                   "ymax", "zmin", "zmax"};
  return names;
}

std::array<int, 2> orient_indices(int code, int i0, int i1, int n0, int n1) {
  // code = 4*swap + 2*flip1 + flip0
  const bool swap = code & 4;
  const bool flip0 = code & 1;
  const bool flip1 = code & 2;
  int a = i0, b = i1, na = n0, nb = n1;
  if (swap) {
    std::swap(a, b);
    std::swap(na, nb);
  }
  if (flip0) a = na - 1 - a;
  if (flip1) b = nb - 1 - b;
  return {a, b};
}

bool orientation_swaps_axes(int code) { return code & 4; }

int inverse_orientation(int code) {
  // Flips commute without a swap; with a swap the flip roles exchange.
  static constexpr std::array<int, 8> inv = {0, 1, 2, 3, 4, 6, 5, 7};
  return inv[code];
}

std::array<int, 3> Mesh::element_cell(int e) const {
  const auto& c = spec_.counts;
  return {e % c[0], (e / c[0]) % c[1], e / (c[0] * c[1])};
}

Vec3 Mesh::analytic_map(int e, const Vec3& xi) const {
  const auto cell = element_cell(e);
  Vec3 u;  // unit coordinates of the whole box
  for (int d = 0; d < 3; ++d)
    u[d] = (cell[d] + 0.5 * (xi[d] + 1.0)) / spec_.counts[d];

  Vec3 x;
  for (int d = 0; d < 3; ++d)
    x[d] = spec_.lower[d] + (spec_.upper[d] - spec_.lower[d]) * u[d];

  if (spec_.curvature.kind == CurvatureSpec::Kind::Sinusoidal) {
    const double a = spec_.curvature.amplitude;
    const double w = 2.0 * M_PI * spec_.curvature.wavenumber;
    // Displacement along each axis driven by the other two coordinates, so
    // the Jacobian diagonal stays untouched; periodic in the unit cube.
    for (int d = 0; d < 3; ++d) {
      const double s = std::sin(w * u[(d + 1) % 3]) * std::sin(w * u[(d + 2) % 3]);
      x[d] += a * (spec_.upper[d] - spec_.lower[d]) * s;
    }
  }
  return x;
}

void Mesh::build_geometry_lattice() {
  const int d = spec_.mapping_degree;
  if (d <= 0) return;
  const NodalBasis& lb = cached_basis(d, NodeKind::GaussLobatto);
  lattice_nodes_ = lb.nodes;
  lattice_bary_ = lb.bary_weights;
  const int n = d + 1;
  lattice_.resize(static_cast<std::size_t>(n_elements_) * n * n * n * 3);
  for (int e = 0; e < n_elements_; ++e) {
    double* out = lattice_.data() + static_cast<std::size_t>(e) * n * n * n * 3;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const Vec3 x = analytic_map(
              e, {lattice_nodes_[i], lattice_nodes_[j], lattice_nodes_[k]});
          double* p = out + static_cast<std::size_t>(i + n * (j + n * k)) * 3;
          p[0] = x[0];
          p[1] = x[1];
          p[2] = x[2];
        }
  }
}

namespace {
// Lagrange basis row at x for a small node set; exact at node hits.
void lagrange_row(const Vector& nodes, const Vector& bary, double x,
                  double* row) {
  const int n = static_cast<int>(nodes.size());
  for (int j = 0; j < n; ++j) {
    if (x == nodes[j]) {
      for (int k = 0; k < n; ++k) row[k] = (k == j) ? 1.0 : 0.0;
      return;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    row[j] = bary[j] / (x - nodes[j]);
    denom += row[j];
  }
  for (int j = 0; j < n; ++j) row[j] /= denom;
}
}  // namespace

Vec3 Mesh::map_point(int e, const Vec3& xi) const {
  if (spec_.mapping_degree <= 0) return analytic_map(e, xi);
  const int n = spec_.mapping_degree + 1;
  double lx[max_order + 1], ly[max_order + 1], lz[max_order + 1];
  lagrange_row(lattice_nodes_, lattice_bary_, xi[0], lx);
  lagrange_row(lattice_nodes_, lattice_bary_, xi[1], ly);
  lagrange_row(lattice_nodes_, lattice_bary_, xi[2], lz);
  const double* vals =
      lattice_.data() + static_cast<std::size_t>(e) * n * n * n * 3;
  Vec3 x{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const double lyz = ly[j] * lz[k];
      for (int i = 0; i < n; ++i) {
        const double w = lx[i] * lyz;
        const double* p = vals + static_cast<std::size_t>(i + n * (j + n * k)) * 3;
        x[0] += w * p[0];
        x[1] += w * p[1];
        x[2] += w * p[2];
      }
    }
  return x;
}

double Mesh::box_volume() const {
  return (spec_.upper[0] - spec_.lower[0]) * (spec_.upper[1] - spec_.lower[1]) *
         (spec_.upper[2] - spec_.lower[2]);
}

Mesh build_box_mesh(const MeshSpec& spec) {
  for (int d = 0; d < 3; ++d) {
    if (spec.counts[d] < 1)
      throw GeometryError("mesh counts must be positive");
    if (!(spec.upper[d] > spec.lower[d]))
      throw GeometryError("degenerate mesh bounds along axis " +
                          std::to_string(d));
  }
  if (spec.mapping_degree < 0 || spec.mapping_degree > max_order)
    throw GeometryError("mapping degree out of range");

  Mesh mesh;
  mesh.spec_ = spec;
  const auto& c = spec.counts;
  mesh.n_elements_ = c[0] * c[1] * c[2];
  mesh.element_faces_.assign(mesh.n_elements_, {-1, -1, -1, -1, -1, -1});

  auto element_id = [&](int i, int j, int k) {
    return i + c[0] * (j + c[1] * k);
  };

  // Interior faces: owner is the -side neighbour along each axis (wrapping
  // periodically); boundary faces close the non-periodic ends. The loop
  // order fixes a deterministic face numbering.
  for (int k = 0; k < c[2]; ++k)
    for (int j = 0; j < c[1]; ++j)
      for (int i = 0; i < c[0]; ++i) {
        const int e = element_id(i, j, k);
        const std::array<int, 3> cell = {i, j, k};
        for (int axis = 0; axis < 3; ++axis) {
          const int plus_face = 2 * axis + 1;
          const int minus_face = 2 * axis;
          const bool last = cell[axis] == c[axis] - 1;
          if (!last || spec.periodic[axis]) {
            std::array<int, 3> ncell = cell;
            ncell[axis] = (cell[axis] + 1) % c[axis];
            const int ne = element_id(ncell[0], ncell[1], ncell[2]);
            Face f;
            f.left = e;
            f.left_face = plus_face;
            f.right = ne;
            f.right_face = minus_face;
            f.orientation = 0;  // structured grid: identical face frames
            const int id = static_cast<int>(mesh.faces_.size());
            mesh.faces_.push_back(f);
            mesh.element_faces_[e][plus_face] = id;
            mesh.element_faces_[ne][minus_face] = id;
            ++mesh.n_interior_;
          } else {
            Face f;
            f.left = e;
            f.left_face = plus_face;
            f.boundary_tag = plus_face;
            const int id = static_cast<int>(mesh.faces_.size());
            mesh.faces_.push_back(f);
            mesh.element_faces_[e][plus_face] = id;
            ++mesh.n_boundary_;
          }
          if (cell[axis] == 0 && !spec.periodic[axis]) {
            Face f;
            f.left = e;
            f.left_face = minus_face;
            f.boundary_tag = minus_face;
            const int id = static_cast<int>(mesh.faces_.size());
            mesh.faces_.push_back(f);
            mesh.element_faces_[e][minus_face] = id;
            ++mesh.n_boundary_;
          }
        }
      }

  mesh.build_geometry_lattice();
  return mesh;
}

namespace {

void element_metrics(const Mesh& mesh, int e, const std::array<int, 3>& orders,
                     NodeKind kind, ElementGeometry& g) {
  g.orders = orders;
  const std::array<const NodalBasis*, 3> basis = {
      &cached_basis(orders[0], kind), &cached_basis(orders[1], kind),
      &cached_basis(orders[2], kind)};
  const std::array<int, 3> ext = {orders[0] + 1, orders[1] + 1, orders[2] + 1};
  const int n = ext[0] * ext[1] * ext[2];

  g.x.resize(static_cast<std::size_t>(n) * 3);
  for (int k = 0; k < ext[2]; ++k)
    for (int j = 0; j < ext[1]; ++j)
      for (int i = 0; i < ext[0]; ++i) {
        const Vec3 x = mesh.map_point(e, {basis[0]->nodes[i], basis[1]->nodes[j],
                                          basis[2]->nodes[k]});
        double* p = g.x.data() +
                    static_cast<std::size_t>(i + ext[0] * (j + ext[1] * k)) * 3;
        p[0] = x[0];
        p[1] = x[1];
        p[2] = x[2];
      }

  // Covariant basis from the interpolant: a_m = D_m X.
  std::array<std::vector<double>, 3> dx;
  for (int m = 0; m < 3; ++m) {
    dx[m].resize(static_cast<std::size_t>(n) * 3);
    apply_along_axis(basis[m]->diff, m, ext, 3, g.x.data(), dx[m].data());
  }

  g.jacobian.resize(n);
  for (int q = 0; q < n; ++q) {
    const Vec3 a1 = {dx[0][3 * q], dx[0][3 * q + 1], dx[0][3 * q + 2]};
    const Vec3 a2 = {dx[1][3 * q], dx[1][3 * q + 1], dx[1][3 * q + 2]};
    const Vec3 a3 = {dx[2][3 * q], dx[2][3 * q + 1], dx[2][3 * q + 2]};
    g.jacobian[q] = dot(a1, cross(a2, a3));
    if (!(g.jacobian[q] > 0.0))
      throw GeometryError("non-positive mapping Jacobian in element " +
                          std::to_string(e));
  }

  // Curl form (Kopriva 2006): Ja^i_n = -[curl_xi(X_l grad_xi X_m)]_i with
  // (n, m, l) cyclic, evaluated through the interpolant so that the discrete
  // metric identity holds to round-off.
  g.ja.assign(static_cast<std::size_t>(n) * 9, 0.0);
  std::vector<double> w(static_cast<std::size_t>(n) * 3);
  std::vector<double> dw(static_cast<std::size_t>(n) * 3);
  for (int comp = 0; comp < 3; ++comp) {
    const int m = (comp + 1) % 3;
    const int l = (comp + 2) % 3;
    for (int q = 0; q < n; ++q)
      for (int d = 0; d < 3; ++d)
        w[3 * q + d] = g.x[3 * q + l] * dx[d][3 * q + m];
    // curl components: i, using derivatives of w along the other two axes.
    for (int i = 0; i < 3; ++i) {
      const int p1 = (i + 1) % 3;
      const int p2 = (i + 2) % 3;
      apply_along_axis(basis[p1]->diff, p1, ext, 3, w.data(), dw.data());
      for (int q = 0; q < n; ++q) g.ja[9 * q + 3 * i + comp] -= dw[3 * q + p2];
      apply_along_axis(basis[p2]->diff, p2, ext, 3, w.data(), dw.data());
      for (int q = 0; q < n; ++q) g.ja[9 * q + 3 * i + comp] += dw[3 * q + p1];
    }
  }

  // Outward normal metric traces per local face.
  for (int f = 0; f < 6; ++f) {
    const int axis = face_axis(f);
    const auto t = face_tangents(f);
    const int fn = ext[t[0]] * ext[t[1]];
    std::vector<double> trace(static_cast<std::size_t>(fn) * 9);
    const Vector& tv = (face_sign(f) > 0) ? basis[axis]->trace_right
                                          : basis[axis]->trace_left;
    contract_axis(tv, axis, ext, 9, g.ja.data(), trace.data());
    g.face_ja[f].resize(static_cast<std::size_t>(fn) * 3);
    const double sign = face_sign(f);
    for (int q = 0; q < fn; ++q)
      for (int c = 0; c < 3; ++c)
        g.face_ja[f][3 * q + c] = sign * trace[9 * q + 3 * axis + c];
  }

  g.volume = 0.0;
  for (int k = 0; k < ext[2]; ++k)
    for (int j = 0; j < ext[1]; ++j)
      for (int i = 0; i < ext[0]; ++i)
        g.volume += basis[0]->weights[i] * basis[1]->weights[j] *
                    basis[2]->weights[k] *
                    g.jacobian[i + ext[0] * (j + ext[1] * k)];
}

}  // namespace

MeshGeometry compute_metrics(const Mesh& mesh, const OrderMap& orders,
                             NodeKind kind) {
  if (orders.n_elements() != mesh.n_elements())
    throw DimensionError("compute_metrics: order map does not match mesh");
  // Warm the basis cache single-threaded before the parallel sweep.
  for (const auto& p : orders.orders)
    for (int d = 0; d < 3; ++d) cached_basis(p[d], kind);

  MeshGeometry geom;
  geom.kind = kind;
  geom.elements.resize(mesh.n_elements());
  parallel_for(mesh.n_elements(), [&](std::size_t e) {
    element_metrics(mesh, static_cast<int>(e), orders.orders[e], kind,
                    geom.elements[e]);
  });
  return geom;
}

double metric_identity_residual(const ElementGeometry& g, NodeKind kind) {
  const std::array<int, 3> ext = {g.orders[0] + 1, g.orders[1] + 1,
                                  g.orders[2] + 1};
  const int n = ext[0] * ext[1] * ext[2];
  std::vector<double> div(static_cast<std::size_t>(n) * 3, 0.0);
  std::vector<double> ji(static_cast<std::size_t>(n) * 3);
  std::vector<double> dji(static_cast<std::size_t>(n) * 3);
  for (int i = 0; i < 3; ++i) {
    for (int q = 0; q < n; ++q)
      for (int c = 0; c < 3; ++c) ji[3 * q + c] = g.ja[9 * q + 3 * i + c];
    apply_along_axis(cached_basis(g.orders[i], kind).diff, i, ext, 3, ji.data(),
                     dji.data());
    for (std::size_t q = 0; q < div.size(); ++q) div[q] += dji[q];
  }
  double m = 0.0;
  for (double v : div) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace dgsem
