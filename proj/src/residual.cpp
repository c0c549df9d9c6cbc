#include "dgsem/residual.hpp"

#include <cmath>

#include "dgsem/errors.hpp"
#include "dgsem/parallel.hpp"
#include "dgsem/tensor.hpp"

namespace dgsem {

BoundaryCondition::Kind to_bc_kind(const std::string& name) {
  if (name == "periodic") return BoundaryCondition::Kind::Periodic;
  if (name == "free-stream" || name == "freestream")
    return BoundaryCondition::Kind::FreeStream;
  if (name == "no-slip-adiabatic-wall" || name == "no-slip-wall")
    return BoundaryCondition::Kind::NoSlipAdiabaticWall;
  if (name == "inviscid-wall" || name == "slip-wall")
    return BoundaryCondition::Kind::InviscidWall;
  throw ConfigError("unknown boundary condition type '" + name + "'");
}

std::string to_string(BoundaryCondition::Kind kind) {
  switch (kind) {
    case BoundaryCondition::Kind::Periodic: return "periodic";
    case BoundaryCondition::Kind::FreeStream: return "free-stream";
    case BoundaryCondition::Kind::NoSlipAdiabaticWall:
      return "no-slip-adiabatic-wall";
    case BoundaryCondition::Kind::InviscidWall: return "inviscid-wall";
  }
  return {};
}

State boundary_state(const BoundaryCondition& bc, const State& interior,
                     const Vec3& n, const GasProperties& gas) {
  primitive_from_conservative(interior, gas);  // admissibility check
  switch (bc.kind) {
    case BoundaryCondition::Kind::Periodic:
      throw ConfigError("periodic boundaries are paired in the mesh, not evaluated");
    case BoundaryCondition::Kind::FreeStream:
      return bc.state;
    case BoundaryCondition::Kind::InviscidWall: {
      const double mn = interior[1] * n[0] + interior[2] * n[1] + interior[3] * n[2];
      State g = interior;
      for (int i = 0; i < 3; ++i) g[1 + i] -= 2.0 * mn * n[i];
      return g;  // |v| unchanged, rho and p preserved
    }
    case BoundaryCondition::Kind::NoSlipAdiabaticWall: {
      State g = interior;
      for (int i = 0; i < 3; ++i) g[1 + i] = -g[1 + i];
      return g;
    }
  }
  return interior;
}

namespace {

int worker_index() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

struct Workspace {
  std::vector<double> r;      // element residual, n*5
  std::vector<double> fe;     // euler flux, n*15 direction-major
  std::vector<double> fvisc;  // viscous + artificial flux, n*15
  std::vector<double> ct;     // contravariant flux, n*5
  std::vector<double> tmp;    // apply_along_axis target
  std::vector<double> q;      // gradient variables, n*ngrad
  std::vector<double> prod;   // q * Ja products, n*ngrad*3
  std::vector<double> g;      // element gradient accumulator
  std::vector<double> a, b, c, d, e, f;  // face-phase staging
  std::vector<double> out;               // per-element result for axpy sinks
};

std::vector<Workspace>& workspace_pool() {
  static std::vector<Workspace> pool;
  return pool;
}

// Gradient-variable set at a state: (rho, v1, v2, v3, T)
// plus the entropy variables when SVV is active.
void gradient_vars_of(const State& u, const GasProperties& gas, int ngrad,
                      double* out) {
  const Primitive prim = primitive_from_conservative(u, gas);
  out[0] = prim.rho;
  out[1] = prim.v[0];
  out[2] = prim.v[1];
  out[3] = prim.v[2];
  out[4] = prim.T;
  if (ngrad > 5) {
    const EntropyVars w = entropy_variables(u, gas);
    for (int i = 0; i < 5; ++i) out[5 + i] = w[i];
  }
}

}  // namespace

DgOperator::DgOperator(const Mesh& mesh, OrderMap orders,
                       NumericsOptions options,
                       std::map<std::string, BoundaryCondition> bcs)
    : mesh_(&mesh),
      orders_(std::move(orders)),
      options_(options),
      bcs_(std::move(bcs)) {
  if (orders_.n_elements() != mesh.n_elements())
    throw DimensionError("order map does not match the mesh");
  options_.gas.validate();
  options_.svv.validate();
  if (options_.volume == VolumeScheme::Split &&
      options_.nodes != NodeKind::GaussLobatto)
    throw ConfigError("split forms require Gauss-Lobatto nodes");
  if (options_.svv.enabled && options_.nodes != NodeKind::GaussLobatto)
    throw ConfigError("svv shock capturing requires Gauss-Lobatto nodes");

  geometry_ = compute_metrics(mesh, orders_, options_.nodes);
  n_gradvars_ = options_.svv.enabled ? 10 : 5;

  filter_width_.resize(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& p = orders_.orders[e];
    const double mean_n = (p[0] + p[1] + p[2]) / 3.0 + 1.0;
    filter_width_[e] = std::cbrt(geometry_.elements[e].volume) / mean_n;
  }

  // Resolve boundary tags against the supplied table.
  std::vector<int> tag_to_bc(6, -1);
  for (const auto& face : mesh.faces()) {
    if (!face.boundary()) continue;
    const int t = face.boundary_tag;
    if (tag_to_bc[t] >= 0) continue;
    const std::string& name = mesh.spec().boundary_tags[t];
    auto it = bcs_.find(name);
    if (it == bcs_.end())
      throw ConfigError("no boundary condition defined for tag '" + name + "'");
    if (it->second.kind == BoundaryCondition::Kind::Periodic)
      throw ConfigError("tag '" + name +
                        "' is periodic but the mesh face is not paired; set "
                        "the mesh periodic flag instead");
    tag_to_bc[t] = static_cast<int>(bc_table_.size());
    bc_table_.push_back(it->second);
  }

  faces_.resize(mesh.faces().size());
  for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
    build_face(static_cast<int>(f));
    if (mesh.faces()[f].boundary())
      faces_[f].bc = tag_to_bc[mesh.faces()[f].boundary_tag];
  }

  gradients_ = Field::zeros(orders_, n_gradvars_ * 3);
  if (options_.svv.enabled) {
    svv_flux_ = Field::zeros(orders_, 15);
    svv_mu_.resize(mesh.n_elements());
    svv_theta_.resize(mesh.n_elements());
  }
}

void DgOperator::build_face(int f) {
  const Face& face = mesh_->faces()[f];
  FaceCoupling& fc = faces_[f];
  const auto& pl = orders_.orders[face.left];
  const auto tl = face_tangents(face.left_face);
  const std::array<int, 2> left_orders = {pl[tl[0]], pl[tl[1]]};
  std::array<int, 2> right_orders = left_orders;
  if (!face.boundary()) {
    const auto& pr = orders_.orders[face.right];
    const auto tr = face_tangents(face.right_face);
    right_orders = {pr[tr[0]], pr[tr[1]]};
  }
  fc.mortar = build_mortar(left_orders, right_orders, face.orientation,
                           options_.nodes);
  fc.ext = fc.mortar.mortar_extents();
  const int mn = fc.mortar.mortar_nodes();

  const NodalBasis& b0 = cached_basis(fc.mortar.orders[0], options_.nodes);
  const NodalBasis& b1 = cached_basis(fc.mortar.orders[1], options_.nodes);
  fc.wq.resize(mn);
  for (int j = 0; j < fc.ext[1]; ++j)
    for (int i = 0; i < fc.ext[0]; ++i)
      fc.wq[i + fc.ext[0] * j] = b0.weights[i] * b1.weights[j];

  // Face geometry prolonged from the higher-order side's metric trace; for
  // conforming faces both traces coincide, for compliant p-nonconforming
  // geometry as well.
  const int suml = left_orders[0] + left_orders[1];
  const int sumr = fc.mortar.right_orders[0] + fc.mortar.right_orders[1];
  const bool from_right = !face.boundary() && sumr > suml;
  std::vector<double> trace;
  if (from_right) {
    const auto& src = geometry_.elements[face.right].face_ja[face.right_face];
    std::vector<double> permuted(src.size());
    permute_right_to_left(fc.mortar, 3, src.data(), permuted.data());
    trace.resize(static_cast<std::size_t>(mn) * 3);
    mortar_prolong(fc.mortar, false, 3, permuted.data(), trace.data());
    for (double& v : trace) v = -v;  // right outward -> left outward
  } else {
    const auto& src = geometry_.elements[face.left].face_ja[face.left_face];
    trace.resize(static_cast<std::size_t>(mn) * 3);
    mortar_prolong(fc.mortar, true, 3, src.data(), trace.data());
  }
  fc.normal.resize(static_cast<std::size_t>(mn) * 3);
  fc.surfj.resize(mn);
  for (int q = 0; q < mn; ++q) {
    const Vec3 v = {trace[3 * q], trace[3 * q + 1], trace[3 * q + 2]};
    const double s = norm(v);
    if (!(s > 0.0))
      throw GeometryError("degenerate face normal on face " + std::to_string(f));
    fc.surfj[q] = s;
    for (int c = 0; c < 3; ++c) fc.normal[3 * q + c] = v[c] / s;
  }

  fc.flux.assign(static_cast<std::size_t>(mn) * 5, 0.0);
  fc.qmean.assign(static_cast<std::size_t>(mn) * n_gradvars_, 0.0);
}

void DgOperator::side_trace(const ElementData& el, int ncomp, int local_face,
                            double* out) const {
  const int axis = face_axis(local_face);
  const NodalBasis& basis = cached_basis(el.orders[axis], options_.nodes);
  const Vector& t =
      face_sign(local_face) > 0 ? basis.trace_right : basis.trace_left;
  contract_axis(t, axis, el.extents(), ncomp, el.values.data(), out);
}

void DgOperator::gradient_state_at(const double* gnode,
                                   GradientState& grad) const {
  for (int g = 0; g < 5; ++g)
    for (int dir = 0; dir < 3; ++dir) grad[dir][g] = gnode[g * 3 + dir];
}

double DgOperator::eddy_viscosity(int e, const State& u,
                                  const GradientState& grad) const {
  if (options_.gas.smagorinsky_cs <= 0.0) return 0.0;
  return smagorinsky_viscosity(u[0], grad, filter_width_[e],
                               options_.gas.smagorinsky_cs);
}

void DgOperator::face_gradient_means(int f, const SolutionField& u) const {
  const Face& face = mesh_->faces()[f];
  FaceCoupling& fc = faces_[f];
  Workspace& ws = workspace_pool()[worker_index()];
  const int mn = fc.mortar.mortar_nodes();
  const int ng = n_gradvars_;
  const GasProperties& gas = options_.gas;

  const ElementData& ell = u.elements[face.left];
  const auto lext = fc.mortar.left_orders;
  ws.a.resize(static_cast<std::size_t>((lext[0] + 1) * (lext[1] + 1)) * 5);
  side_trace(ell, 5, face.left_face, ws.a.data());
  ws.b.resize(static_cast<std::size_t>(mn) * 5);
  mortar_prolong(fc.mortar, true, 5, ws.a.data(), ws.b.data());

  try {
    if (face.boundary()) {
      const BoundaryCondition& bc = bc_table_[fc.bc];
      for (int q = 0; q < mn; ++q) {
        State ul, ug;
        for (int v = 0; v < 5; ++v) ul[v] = ws.b[q * 5 + v];
        const Vec3 n = {fc.normal[3 * q], fc.normal[3 * q + 1],
                        fc.normal[3 * q + 2]};
        ug = boundary_state(bc, ul, n, gas);
        double ql[10], qg[10];
        gradient_vars_of(ul, gas, ng, ql);
        gradient_vars_of(ug, gas, ng, qg);
        for (int g = 0; g < ng; ++g)
          fc.qmean[q * ng + g] = 0.5 * (ql[g] + qg[g]);
      }
      return;
    }

    const ElementData& elr = u.elements[face.right];
    const auto rext = fc.mortar.right_orders;
    ws.c.resize(static_cast<std::size_t>((rext[0] + 1) * (rext[1] + 1)) * 5);
    ws.d.resize(ws.c.size());
    side_trace(elr, 5, face.right_face, ws.c.data());
    permute_right_to_left(fc.mortar, 5, ws.c.data(), ws.d.data());
    ws.e.resize(static_cast<std::size_t>(mn) * 5);
    mortar_prolong(fc.mortar, false, 5, ws.d.data(), ws.e.data());

    for (int q = 0; q < mn; ++q) {
      State ul, ur;
      for (int v = 0; v < 5; ++v) {
        ul[v] = ws.b[q * 5 + v];
        ur[v] = ws.e[q * 5 + v];
      }
      double ql[10], qr[10];
      gradient_vars_of(ul, gas, ng, ql);
      gradient_vars_of(ur, gas, ng, qr);
      for (int g = 0; g < ng; ++g)
        fc.qmean[q * ng + g] = 0.5 * (ql[g] + qr[g]);
    }
  } catch (const AdmissibilityError& err) {
    throw AdmissibilityError(std::string(err.what()) + " (face " +
                                 std::to_string(f) + ")",
                             err.rho(), err.pressure());
  }
}

void DgOperator::element_gradient(int e, const SolutionField& u) const {
  const ElementData& el = u.elements[e];
  const ElementGeometry& geo = geometry_.elements[e];
  ElementData& gel = gradients_.elements[e];
  Workspace& ws = workspace_pool()[worker_index()];
  const auto ext = el.extents();
  const int n = el.node_count();
  const int ng = n_gradvars_;
  const int gc = ng * 3;
  const GasProperties& gas = options_.gas;

  ws.q.resize(static_cast<std::size_t>(n) * ng);
  try {
    for (int q = 0; q < n; ++q) {
      State uq;
      for (int v = 0; v < 5; ++v) uq[v] = el.at(q, 5)[v];
      gradient_vars_of(uq, gas, ng, ws.q.data() + q * ng);
    }
  } catch (const AdmissibilityError& err) {
    throw AdmissibilityError(std::string(err.what()) + " (element " +
                                 std::to_string(e) + ")",
                             err.rho(), err.pressure());
  }

  ws.g.assign(static_cast<std::size_t>(n) * gc, 0.0);
  ws.prod.resize(static_cast<std::size_t>(n) * gc);
  ws.tmp.resize(static_cast<std::size_t>(n) * gc);

  // Volume: J G_c = -sum_a weakD_a (Ja^a_c q) + lifts.
  for (int a = 0; a < 3; ++a) {
    for (int q = 0; q < n; ++q) {
      const double* ja = geo.ja.data() + 9 * q + 3 * a;
      for (int g = 0; g < ng; ++g) {
        const double qv = ws.q[q * ng + g];
        double* p = ws.prod.data() + (static_cast<std::size_t>(q) * ng + g) * 3;
        p[0] = qv * ja[0];
        p[1] = qv * ja[1];
        p[2] = qv * ja[2];
      }
    }
    apply_along_axis(cached_basis(el.orders[a], options_.nodes).weak_diff, a,
                     ext, gc, ws.prod.data(), ws.tmp.data());
    for (std::size_t i = 0; i < ws.g.size(); ++i) ws.g[i] -= ws.tmp[i];
  }

  // Surface lifts with the interface means q*.
  for (int lf = 0; lf < 6; ++lf) {
    const int fi = mesh_->element_faces(e)[lf];
    const FaceCoupling& fc = faces_[fi];
    const Face& face = mesh_->faces()[fi];
    const bool is_left = face.left == e && face.left_face == lf;
    const auto so = is_left ? fc.mortar.left_orders : fc.mortar.right_orders;
    const int fn = (so[0] + 1) * (so[1] + 1);
    ws.a.resize(static_cast<std::size_t>(fn) * ng);
    if (is_left) {
      mortar_restrict(fc.mortar, true, ng, fc.qmean.data(), ws.a.data());
    } else {
      ws.b.resize(static_cast<std::size_t>(fn) * ng);
      mortar_restrict(fc.mortar, false, ng, fc.qmean.data(), ws.b.data());
      permute_left_to_right(fc.mortar, ng, ws.b.data(), ws.a.data());
    }

    const int axis = face_axis(lf);
    const auto t = face_tangents(lf);
    const NodalBasis& ab = cached_basis(el.orders[axis], options_.nodes);
    const Vector& lift = face_sign(lf) > 0 ? ab.lift_right : ab.lift_left;
    const auto& fja = geo.face_ja[lf];
    const int nt0 = ext[t[0]];
    for (int b1 = 0; b1 < ext[t[1]]; ++b1)
      for (int b0 = 0; b0 < nt0; ++b0) {
        const int fq = b0 + nt0 * b1;
        const double* qs = ws.a.data() + static_cast<std::size_t>(fq) * ng;
        const double* jn = fja.data() + 3 * fq;
        std::array<int, 3> idx;
        idx[t[0]] = b0;
        idx[t[1]] = b1;
        for (int m = 0; m < ext[axis]; ++m) {
          if (lift[m] == 0.0) continue;
          idx[axis] = m;
          double* gq =
              ws.g.data() +
              static_cast<std::size_t>(el.node_index(idx[0], idx[1], idx[2])) * gc;
          for (int g = 0; g < ng; ++g)
            for (int dir = 0; dir < 3; ++dir)
              gq[g * 3 + dir] += lift[m] * qs[g] * jn[dir];
        }
      }
  }

  for (int q = 0; q < n; ++q) {
    const double inv = 1.0 / geo.jacobian[q];
    for (int c = 0; c < gc; ++c) gel.values[q * gc + c] = inv * ws.g[q * gc + c];
  }
}

void DgOperator::face_flux(int f, const SolutionField& u,
                           double* production) const {
  const Face& face = mesh_->faces()[f];
  FaceCoupling& fc = faces_[f];
  Workspace& ws = workspace_pool()[worker_index()];
  const int mn = fc.mortar.mortar_nodes();
  const GasProperties& gas = options_.gas;
  const bool viscous = options_.viscous();
  const bool svv = options_.svv.enabled;
  const int gc = n_gradvars_ * 3;
  if (production) *production = 0.0;

  // Left traces at the mortar: state, gradients, artificial flux.
  const ElementData& ell = u.elements[face.left];
  const auto lo = fc.mortar.left_orders;
  const int lfn = (lo[0] + 1) * (lo[1] + 1);
  ws.a.resize(static_cast<std::size_t>(lfn) * 5);
  side_trace(ell, 5, face.left_face, ws.a.data());
  ws.b.resize(static_cast<std::size_t>(mn) * 5);
  mortar_prolong(fc.mortar, true, 5, ws.a.data(), ws.b.data());
  const double* ulm = ws.b.data();

  double* glm = nullptr;
  double* falm = nullptr;
  if (viscous) {
    ws.c.resize(static_cast<std::size_t>(lfn) * gc);
    side_trace(gradients_.elements[face.left], gc, face.left_face, ws.c.data());
    ws.d.resize(static_cast<std::size_t>(mn) * gc);
    mortar_prolong(fc.mortar, true, gc, ws.c.data(), ws.d.data());
    glm = ws.d.data();
    if (svv) {
      ws.e.resize(static_cast<std::size_t>(lfn) * 15);
      side_trace(svv_flux_.elements[face.left], 15, face.left_face, ws.e.data());
      ws.f.resize(static_cast<std::size_t>(mn) * 15);
      mortar_prolong(fc.mortar, true, 15, ws.e.data(), ws.f.data());
      falm = ws.f.data();
    }
  }

  // Right traces (interior) in the left frame.
  std::vector<double>& urm_buf = ws.q;
  std::vector<double>& grm_buf = ws.prod;
  std::vector<double>& farm_buf = ws.g;
  const double* urm = nullptr;
  const double* grm = nullptr;
  const double* farm = nullptr;
  if (!face.boundary()) {
    const ElementData& elr = u.elements[face.right];
    const auto ro = fc.mortar.right_orders;
    const int rfn = (ro[0] + 1) * (ro[1] + 1);
    ws.tmp.resize(static_cast<std::size_t>(rfn) * std::max(gc, 15));
    ws.ct.resize(ws.tmp.size());

    side_trace(elr, 5, face.right_face, ws.tmp.data());
    ws.ct.resize(static_cast<std::size_t>(rfn) * 5);
    permute_right_to_left(fc.mortar, 5, ws.tmp.data(), ws.ct.data());
    urm_buf.resize(static_cast<std::size_t>(mn) * 5);
    mortar_prolong(fc.mortar, false, 5, ws.ct.data(), urm_buf.data());
    urm = urm_buf.data();

    if (viscous) {
      ws.tmp.resize(static_cast<std::size_t>(rfn) * gc);
      ws.ct.resize(ws.tmp.size());
      side_trace(gradients_.elements[face.right], gc, face.right_face,
                 ws.tmp.data());
      permute_right_to_left(fc.mortar, gc, ws.tmp.data(), ws.ct.data());
      grm_buf.resize(static_cast<std::size_t>(mn) * gc);
      mortar_prolong(fc.mortar, false, gc, ws.ct.data(), grm_buf.data());
      grm = grm_buf.data();
      if (svv) {
        ws.tmp.resize(static_cast<std::size_t>(rfn) * 15);
        ws.ct.resize(ws.tmp.size());
        side_trace(svv_flux_.elements[face.right], 15, face.right_face,
                   ws.tmp.data());
        permute_right_to_left(fc.mortar, 15, ws.tmp.data(), ws.ct.data());
        farm_buf.resize(static_cast<std::size_t>(mn) * 15);
        mortar_prolong(fc.mortar, false, 15, ws.ct.data(), farm_buf.data());
        farm = farm_buf.data();
      }
    }
  }

  const bool split = options_.volume == VolumeScheme::Split;
  const BoundaryCondition* bc = face.boundary() ? &bc_table_[fc.bc] : nullptr;

  try {
    for (int q = 0; q < mn; ++q) {
      const Vec3 n = {fc.normal[3 * q], fc.normal[3 * q + 1],
                      fc.normal[3 * q + 2]};
      State ul, ur;
      for (int v = 0; v < 5; ++v) ul[v] = ulm[q * 5 + v];
      if (face.boundary()) {
        ur = boundary_state(*bc, ul, n, gas);
      } else {
        for (int v = 0; v < 5; ++v) ur[v] = urm[q * 5 + v];
      }

      // Inviscid flux: the split-form two-point flux across the face plus
      // the selected dissipation; weak form uses the arithmetic flux mean.
      State fstar{};
      if (split) {
        const FluxArray ftp = two_point_flux(options_.split_variant, ul, ur, gas);
        for (int v = 0; v < 5; ++v)
          for (int d = 0; d < 3; ++d) fstar[v] += n[d] * ftp[d][v];
      } else {
        const FluxArray fl = euler_flux(ul, gas);
        const FluxArray fr = euler_flux(ur, gas);
        for (int v = 0; v < 5; ++v)
          for (int d = 0; d < 3; ++d)
            fstar[v] += 0.5 * n[d] * (fl[d][v] + fr[d][v]);
      }
      const State diss = riemann_dissipation(options_.riemann, ul, ur, n, gas);
      for (int v = 0; v < 5; ++v) fstar[v] -= 0.5 * diss[v];

      if (production && !face.boundary()) {
        const EntropyVars wl = entropy_variables(ul, gas);
        const EntropyVars wr = entropy_variables(ur, gas);
        const Vec3 psil = entropy_potential(ul, gas);
        const Vec3 psir = entropy_potential(ur, gas);
        double contrib = 0.0;
        for (int v = 0; v < 5; ++v) contrib += (wl[v] - wr[v]) * fstar[v];
        contrib -= dot(psil, n) - dot(psir, n);
        *production += fc.wq[q] * fc.surfj[q] * contrib;
      }

      // Viscous and artificial fluxes: arithmetic mean of the two sides.
      if (viscous && (!bc || bc->kind != BoundaryCondition::Kind::InviscidWall)) {
        GradientState gl;
        gradient_state_at(glm + q * gc, gl);
        const double mul = eddy_viscosity(face.left, ul, gl);
        const FluxArray fvl = viscous_flux(ul, gl, gas, mul);
        State fv{};
        for (int v = 0; v < 5; ++v)
          for (int d = 0; d < 3; ++d) fv[v] += 0.5 * n[d] * fvl[d][v];
        if (face.boundary()) {
          // Ghost side: ghost state with the interior gradients.
          const FluxArray fvr = viscous_flux(ur, gl, gas, mul);
          for (int v = 0; v < 5; ++v)
            for (int d = 0; d < 3; ++d) fv[v] += 0.5 * n[d] * fvr[d][v];
          if (bc->kind == BoundaryCondition::Kind::NoSlipAdiabaticWall) {
            // Adiabatic: drop kappa grad(T) . n from the energy row.
            double dtn = 0.0;
            for (int d = 0; d < 3; ++d) dtn += gl[d][4] * n[d];
            fv[4] -= gas.kappa() * dtn;
          }
        } else {
          GradientState gr;
          gradient_state_at(grm + q * gc, gr);
          const double mur = eddy_viscosity(face.right, ur, gr);
          const FluxArray fvr = viscous_flux(ur, gr, gas, mur);
          for (int v = 0; v < 5; ++v)
            for (int d = 0; d < 3; ++d) fv[v] += 0.5 * n[d] * fvr[d][v];
        }
        if (svv) {
          for (int v = 0; v < 5; ++v)
            for (int d = 0; d < 3; ++d) {
              double fa = falm[q * 15 + d * 5 + v];
              if (farm) fa = 0.5 * (fa + farm[q * 15 + d * 5 + v]);
              fv[v] += n[d] * fa;
            }
        }
        for (int v = 0; v < 5; ++v) fstar[v] -= fv[v];
      }

      for (int v = 0; v < 5; ++v) fc.flux[q * 5 + v] = fstar[v] * fc.surfj[q];
    }
  } catch (const AdmissibilityError& err) {
    throw AdmissibilityError(std::string(err.what()) + " (face " +
                                 std::to_string(f) + ")",
                             err.rho(), err.pressure());
  }
}

void DgOperator::element_residual(int e, const SolutionField& u, double* out,
                                  bool volume_terms, bool surface_terms) const {
  const ElementData& el = u.elements[e];
  const ElementGeometry& geo = geometry_.elements[e];
  Workspace& ws = workspace_pool()[worker_index()];
  const auto ext = el.extents();
  const int n = el.node_count();
  const GasProperties& gas = options_.gas;
  const bool viscous = options_.viscous();
  const bool svv = options_.svv.enabled;
  const bool split = options_.volume == VolumeScheme::Split;
  const int gc = n_gradvars_ * 3;

  ws.r.assign(static_cast<std::size_t>(n) * 5, 0.0);
  ws.fe.resize(static_cast<std::size_t>(n) * 15);
  if (viscous) ws.fvisc.resize(static_cast<std::size_t>(n) * 15);

  try {
    for (int q = 0; q < n; ++q) {
      State uq;
      for (int v = 0; v < 5; ++v) uq[v] = el.at(q, 5)[v];
      const FluxArray fe = euler_flux(uq, gas);
      for (int d = 0; d < 3; ++d)
        for (int v = 0; v < 5; ++v) ws.fe[q * 15 + d * 5 + v] = fe[d][v];
      if (viscous) {
        GradientState grad;
        gradient_state_at(gradients_.elements[e].values.data() + q * gc, grad);
        const double mut = eddy_viscosity(e, uq, grad);
        const FluxArray fv = viscous_flux(uq, grad, gas, mut);
        for (int d = 0; d < 3; ++d)
          for (int v = 0; v < 5; ++v) {
            double val = fv[d][v];
            if (svv) val += svv_flux_.elements[e].values[q * 15 + d * 5 + v];
            ws.fvisc[q * 15 + d * 5 + v] = val;
          }
      }
    }
  } catch (const AdmissibilityError& err) {
    throw AdmissibilityError(std::string(err.what()) + " (element " +
                                 std::to_string(e) + ")",
                             err.rho(), err.pressure());
  }

  ws.ct.resize(static_cast<std::size_t>(n) * 5);
  ws.tmp.resize(static_cast<std::size_t>(n) * 5);

  if (volume_terms && !split) {
    // Weak form: r += sum_a weakD_a (Ja^a . (Fe - Fv)).
    for (int a = 0; a < 3; ++a) {
      for (int q = 0; q < n; ++q) {
        const double* ja = geo.ja.data() + 9 * q + 3 * a;
        for (int v = 0; v < 5; ++v) {
          double acc = 0.0;
          for (int d = 0; d < 3; ++d) {
            double fl = ws.fe[q * 15 + d * 5 + v];
            if (viscous) fl -= ws.fvisc[q * 15 + d * 5 + v];
            acc += ja[d] * fl;
          }
          ws.ct[q * 5 + v] = acc;
        }
      }
      apply_along_axis(cached_basis(el.orders[a], options_.nodes).weak_diff, a,
                       ext, 5, ws.ct.data(), ws.tmp.data());
      for (std::size_t i = 0; i < ws.r.size(); ++i) ws.r[i] += ws.tmp[i];
    }
  }

  if (volume_terms && split) {
    // Flux differencing: r -= 2 sum_j D_ij f#(u_i, u_j) . avg(Ja_i, Ja_j)
    // line by line along each axis.
    for (int a = 0; a < 3; ++a) {
      const Matrix& dmat = cached_basis(el.orders[a], options_.nodes).diff;
      const int b = (a == 0) ? 1 : 0;
      const int c = (a == 2) ? 1 : 2;
      const std::array<int, 3> stride = {1, ext[0], ext[0] * ext[1]};
      for (int ic = 0; ic < ext[c]; ++ic)
        for (int ib = 0; ib < ext[b]; ++ib) {
          const int base = ib * stride[b] + ic * stride[c];
          const int sa = stride[a];
          for (int i = 0; i < ext[a]; ++i) {
            const int qi = base + i * sa;
            const double* jai = geo.ja.data() + 9 * qi + 3 * a;
            // diagonal: f#(u,u) = Fe(u)
            {
              const double dii = 2.0 * dmat(i, i);
              for (int v = 0; v < 5; ++v) {
                double ftilde = 0.0;
                for (int d = 0; d < 3; ++d)
                  ftilde += jai[d] * ws.fe[qi * 15 + d * 5 + v];
                ws.r[qi * 5 + v] -= dii * ftilde;
              }
            }
            State ui;
            for (int v = 0; v < 5; ++v) ui[v] = el.at(qi, 5)[v];
            for (int j = i + 1; j < ext[a]; ++j) {
              const int qj = base + j * sa;
              const double* jaj = geo.ja.data() + 9 * qj + 3 * a;
              State uj;
              for (int v = 0; v < 5; ++v) uj[v] = el.at(qj, 5)[v];
              const FluxArray f2 = two_point_flux(options_.split_variant, ui, uj, gas);
              const Vec3 ja_avg = {0.5 * (jai[0] + jaj[0]),
                                   0.5 * (jai[1] + jaj[1]),
                                   0.5 * (jai[2] + jaj[2])};
              const double dij = 2.0 * dmat(i, j);
              const double dji = 2.0 * dmat(j, i);
              for (int v = 0; v < 5; ++v) {
                const double ftilde = ja_avg[0] * f2[0][v] +
                                      ja_avg[1] * f2[1][v] +
                                      ja_avg[2] * f2[2][v];
                ws.r[qi * 5 + v] -= dij * ftilde;
                ws.r[qj * 5 + v] -= dji * ftilde;
              }
            }
          }
        }
    }
    if (viscous) {
      // Viscous part in strong divergence form: r += sum_a D_a (Ja^a . Fv).
      for (int a = 0; a < 3; ++a) {
        for (int q = 0; q < n; ++q) {
          const double* ja = geo.ja.data() + 9 * q + 3 * a;
          for (int v = 0; v < 5; ++v)
            ws.ct[q * 5 + v] = ja[0] * ws.fvisc[q * 15 + v] +
                               ja[1] * ws.fvisc[q * 15 + 5 + v] +
                               ja[2] * ws.fvisc[q * 15 + 10 + v];
        }
        apply_along_axis(cached_basis(el.orders[a], options_.nodes).diff, a,
                         ext, 5, ws.ct.data(), ws.tmp.data());
        for (std::size_t i = 0; i < ws.r.size(); ++i) ws.r[i] += ws.tmp[i];
      }
    }
  }

  if (surface_terms) {
    for (int lf = 0; lf < 6; ++lf) {
      const int fi = mesh_->element_faces(e)[lf];
      const FaceCoupling& fc = faces_[fi];
      const Face& face = mesh_->faces()[fi];
      const bool is_left = face.left == e && face.left_face == lf;
      const auto so = is_left ? fc.mortar.left_orders : fc.mortar.right_orders;
      const int fn = (so[0] + 1) * (so[1] + 1);

      // Face flux restricted to this side, in this element's face frame.
      ws.a.resize(static_cast<std::size_t>(fn) * 5);
      if (is_left) {
        mortar_restrict(fc.mortar, true, 5, fc.flux.data(), ws.a.data());
      } else {
        ws.b.resize(static_cast<std::size_t>(fn) * 5);
        mortar_restrict(fc.mortar, false, 5, fc.flux.data(), ws.b.data());
        permute_left_to_right(fc.mortar, 5, ws.b.data(), ws.a.data());
        for (double& v : ws.a) v = -v;  // left-outward -> this side's outward
      }

      if (split) {
        // Strong form: lift (Bf - Bf_own) with the element's own trace flux.
        const int axis = face_axis(lf);
        const auto t = face_tangents(lf);
        ws.b.resize(static_cast<std::size_t>(fn) * 5);
        side_trace(el, 5, lf, ws.b.data());
        ws.c.resize(static_cast<std::size_t>(fn) * 15);
        {
          const NodalBasis& ab = cached_basis(el.orders[axis], options_.nodes);
          const Vector& tv =
              face_sign(lf) > 0 ? ab.trace_right : ab.trace_left;
          contract_axis(tv, axis, ext, 15, ws.fe.data(), ws.c.data());
          if (viscous) {
            ws.d.resize(static_cast<std::size_t>(fn) * 15);
            contract_axis(tv, axis, ext, 15, ws.fvisc.data(), ws.d.data());
            for (std::size_t i = 0; i < ws.c.size(); ++i) ws.c[i] -= ws.d[i];
          }
        }
        const auto& fja = geo.face_ja[lf];
        for (int fq = 0; fq < fn; ++fq) {
          const double* jn = fja.data() + 3 * fq;
          for (int v = 0; v < 5; ++v) {
            double own = 0.0;
            for (int d = 0; d < 3; ++d) own += jn[d] * ws.c[fq * 15 + d * 5 + v];
            ws.a[fq * 5 + v] -= own;
          }
        }
        (void)t;
      }

      const int axis = face_axis(lf);
      const auto t = face_tangents(lf);
      const NodalBasis& ab = cached_basis(el.orders[axis], options_.nodes);
      const Vector& lift = face_sign(lf) > 0 ? ab.lift_right : ab.lift_left;
      const int nt0 = ext[t[0]];
      for (int b1 = 0; b1 < ext[t[1]]; ++b1)
        for (int b0 = 0; b0 < nt0; ++b0) {
          const double* bf = ws.a.data() + static_cast<std::size_t>(b0 + nt0 * b1) * 5;
          std::array<int, 3> idx;
          idx[t[0]] = b0;
          idx[t[1]] = b1;
          for (int m = 0; m < ext[axis]; ++m) {
            if (lift[m] == 0.0) continue;
            idx[axis] = m;
            double* rq =
                ws.r.data() +
                static_cast<std::size_t>(el.node_index(idx[0], idx[1], idx[2])) * 5;
            for (int v = 0; v < 5; ++v) rq[v] -= lift[m] * bf[v];
          }
        }
    }
  }

  for (int q = 0; q < n; ++q) {
    const double inv = 1.0 / geo.jacobian[q];
    for (int v = 0; v < 5; ++v) out[q * 5 + v] = inv * ws.r[q * 5 + v];
  }
}

template <class Loop>
void DgOperator::evaluate(const SolutionField& u, double scale,
                          SolutionField* dudt, SolutionField* acc,
                          std::vector<double>* face_production,
                          bool volume_terms, bool surface_terms,
                          const Loop& loop) const {
  if (u.n_elements() != mesh_->n_elements() || u.ncomp != 5)
    throw DimensionError("solution field does not match the operator");
  auto& pool = workspace_pool();
  if (static_cast<int>(pool.size()) < std::max(max_threads(), 1))
    pool.resize(std::max(max_threads(), 1));

  if (options_.svv.enabled) {
    const std::vector<double> sensor = shock_sensor(u, geometry_);
    for (int e = 0; e < mesh_->n_elements(); ++e) {
      const SvvBlend blend = blend_artificial_viscosity(sensor[e], options_.svv);
      svv_mu_[e] = blend.mu;
      svv_theta_[e] = blend.toward_identity;
    }
  }

  if (options_.gradients()) {
    loop(faces_.size(), [&](std::size_t f) {
      face_gradient_means(static_cast<int>(f), u);
    });
    loop(u.elements.size(), [&](std::size_t e) {
      element_gradient(static_cast<int>(e), u);
    });
    if (options_.svv.enabled) {
      loop(u.elements.size(), [&](std::size_t e) {
        const ElementData& el = u.elements[e];
        const int n = el.node_count();
        Workspace& ws = workspace_pool()[worker_index()];
        ws.q.resize(static_cast<std::size_t>(n) * 15);
        const int gc = n_gradvars_ * 3;
        const double* g = gradients_.elements[e].values.data();
        for (int q = 0; q < n; ++q)
          for (int j = 0; j < 5; ++j)
            for (int dir = 0; dir < 3; ++dir)
              ws.q[q * 15 + dir * 5 + j] = g[q * gc + (5 + j) * 3 + dir];
        svv_filtered_flux(el.orders, options_.nodes, el.values.data(),
                          ws.q.data(), geometry_.elements[e].jacobian.data(),
                          svv_mu_[e], svv_theta_[e], options_.svv.kernel,
                          options_.gas, svv_flux_.elements[e].values.data());
      });
    }
  }

  if (surface_terms) {
    if (face_production) face_production->assign(faces_.size(), 0.0);
    loop(faces_.size(), [&](std::size_t f) {
      face_flux(static_cast<int>(f), u,
                face_production ? &(*face_production)[f] : nullptr);
    });
  }

  if (dudt) {
    loop(u.elements.size(), [&](std::size_t e) {
      element_residual(static_cast<int>(e), u,
                       dudt->elements[e].values.data(), volume_terms,
                       surface_terms);
    });
  } else {
    loop(u.elements.size(), [&](std::size_t e) {
      Workspace& ws = workspace_pool()[worker_index()];
      ws.out.resize(u.elements[e].values.size());
      element_residual(static_cast<int>(e), u, ws.out.data(), volume_terms,
                       surface_terms);
      auto& target = acc->elements[e].values;
      for (std::size_t i = 0; i < target.size(); ++i)
        target[i] += scale * ws.out[i];
    });
  }
}

void DgOperator::spatial_residual(const SolutionField& u, SolutionField& dudt,
                                  std::vector<double>* face_production) const {
  if (!dudt.same_shape(u)) dudt = Field::zeros(orders_, 5);
  dudt.time = u.time;
  auto loop = [](std::size_t n, auto&& fn) { parallel_for(n, fn); };
  evaluate(u, 1.0, &dudt, nullptr, face_production, true, true, loop);
}

void DgOperator::add_scaled_residual(const SolutionField& u, double scale,
                                     SolutionField& acc) const {
  auto loop = [](std::size_t n, auto&& fn) { parallel_for(n, fn); };
  evaluate(u, scale, nullptr, &acc, nullptr, true, true, loop);
}

void DgOperator::spatial_residual_serial(const SolutionField& u,
                                         SolutionField& dudt) const {
  if (!dudt.same_shape(u)) dudt = Field::zeros(orders_, 5);
  dudt.time = u.time;
  auto loop = [](std::size_t n, auto&& fn) { serial_for(n, fn); };
  evaluate(u, 1.0, &dudt, nullptr, nullptr, true, true, loop);
}

void DgOperator::residual_terms(const SolutionField& u, SolutionField& dudt,
                                bool volume, bool surface) const {
  if (!dudt.same_shape(u)) dudt = Field::zeros(orders_, 5);
  auto loop = [](std::size_t n, auto&& fn) { parallel_for(n, fn); };
  evaluate(u, 1.0, &dudt, nullptr, nullptr, volume, surface, loop);
}

Field DgOperator::compute_gradients(const SolutionField& u) const {
  auto loop = [](std::size_t n, auto&& fn) { parallel_for(n, fn); };
  auto& pool = workspace_pool();
  if (static_cast<int>(pool.size()) < std::max(max_threads(), 1))
    pool.resize(std::max(max_threads(), 1));
  loop(faces_.size(), [&](std::size_t f) {
    face_gradient_means(static_cast<int>(f), u);
  });
  loop(u.elements.size(), [&](std::size_t e) {
    element_gradient(static_cast<int>(e), u);
  });
  return gradients_;
}

}  // namespace dgsem
