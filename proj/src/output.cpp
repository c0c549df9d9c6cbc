#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "dgsem/errors.hpp"
#include "dgsem/run.hpp"
#include "dgsem/tensor.hpp"

namespace dgsem {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  out += buf;
}

struct ResampledElement {
  int m;                        // points per axis
  std::vector<double> x;       // m^3 * 3
  std::vector<double> prim;    // m^3 * 5: rho, v, p  (T derived)
  std::vector<double> vort;    // m^3 * 4: vorticity + Q, when gradients on
};

ResampledElement resample_element(const SolutionField& field,
                                  const Field* gradients, const DgOperator& op,
                                  int e, int viz_order) {
  const ElementData& el = field.elements[e];
  const ElementGeometry& geo = op.geometry().elements[e];
  const NodeKind kind = op.options().nodes;
  const auto ext = el.extents();

  ResampledElement out;
  const int m = viz_order >= 0
                    ? viz_order + 1
                    : std::max({ext[0], ext[1], ext[2]});
  out.m = m;
  std::vector<double> targets(m);
  for (int i = 0; i < m; ++i)
    targets[i] = (m == 1) ? 0.0 : -1.0 + 2.0 * i / (m - 1);

  std::array<Matrix, 3> interp;
  for (int a = 0; a < 3; ++a)
    interp[a] = interpolation_matrix(cached_basis(el.orders[a], kind),
                                     std::span<const double>(targets));

  auto resample = [&](const double* data, int ncomp, std::vector<double>& dst) {
    std::array<int, 3> cur = ext;
    std::vector<double> a(data, data + static_cast<std::size_t>(ext[0]) *
                                          ext[1] * ext[2] * ncomp);
    std::vector<double> b;
    for (int axis = 0; axis < 3; ++axis) {
      std::array<int, 3> next = cur;
      next[axis] = m;
      b.resize(static_cast<std::size_t>(next[0]) * next[1] * next[2] * ncomp);
      apply_along_axis(interp[axis], axis, cur, ncomp, a.data(), b.data());
      a.swap(b);
      cur = next;
    }
    dst = std::move(a);
  };

  resample(geo.x.data(), 3, out.x);
  std::vector<double> cons;
  resample(el.values.data(), 5, cons);

  const int n = m * m * m;
  out.prim.resize(static_cast<std::size_t>(n) * 5);
  for (int q = 0; q < n; ++q) {
    State u;
    for (int v = 0; v < 5; ++v) u[v] = cons[q * 5 + v];
    const Primitive prim = primitive_from_conservative(u, op.options().gas);
    out.prim[q * 5 + 0] = prim.rho;
    out.prim[q * 5 + 1] = prim.v[0];
    out.prim[q * 5 + 2] = prim.v[1];
    out.prim[q * 5 + 3] = prim.v[2];
    out.prim[q * 5 + 4] = prim.p;
  }

  if (gradients) {
    const int gc = gradients->ncomp;
    std::vector<double> g;
    resample(gradients->elements[e].values.data(), gc, g);
    out.vort.resize(static_cast<std::size_t>(n) * 4);
    for (int q = 0; q < n; ++q) {
      // velocity gradient: dv[i][d] = d v_i / d x_d
      double dv[3][3];
      for (int i = 0; i < 3; ++i)
        for (int d = 0; d < 3; ++d) dv[i][d] = g[q * gc + (1 + i) * 3 + d];
      out.vort[q * 4 + 0] = dv[2][1] - dv[1][2];
      out.vort[q * 4 + 1] = dv[0][2] - dv[2][0];
      out.vort[q * 4 + 2] = dv[1][0] - dv[0][1];
      double qcrit = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int d = 0; d < 3; ++d) {
          const double s = 0.5 * (dv[i][d] + dv[d][i]);
          const double o = 0.5 * (dv[i][d] - dv[d][i]);
          qcrit += 0.5 * (o * o - s * s);
        }
      out.vort[q * 4 + 3] = qcrit;
    }
  }
  return out;
}

}  // namespace

MonitorRecord compute_monitors(const SolutionField& field, const DgOperator& op,
                               long step, const std::optional<Vec3>& probe) {
  MonitorRecord rec;
  rec.time = field.time;
  rec.step = step;

  SolutionField dudt;
  op.spatial_residual(field, dudt);

  const GasProperties& gas = op.options().gas;
  const NodeKind kind = op.options().nodes;
  double ke = 0.0, entropy = 0.0, production = 0.0, max_res = 0.0;
  double min_rho = std::numeric_limits<double>::max();
  double min_p = std::numeric_limits<double>::max();
  for (int e = 0; e < field.n_elements(); ++e) {
    const ElementData& el = field.elements[e];
    const ElementGeometry& geo = op.geometry().elements[e];
    const auto ext = el.extents();
    const auto& b0 = cached_basis(el.orders[0], kind);
    const auto& b1 = cached_basis(el.orders[1], kind);
    const auto& b2 = cached_basis(el.orders[2], kind);
    for (int k = 0; k < ext[2]; ++k)
      for (int j = 0; j < ext[1]; ++j)
        for (int i = 0; i < ext[0]; ++i) {
          const int q = el.node_index(i, j, k);
          const double wj =
              b0.weights[i] * b1.weights[j] * b2.weights[k] * geo.jacobian[q];
          State u;
          for (int v = 0; v < 5; ++v) u[v] = el.at(q, 5)[v];
          const Primitive prim = primitive_from_conservative(u, gas);
          ke += wj * 0.5 * prim.rho * dot(prim.v, prim.v);
          entropy += wj * entropy_function(u, gas);
          const EntropyVars w = entropy_variables(u, gas);
          const double* r = dudt.elements[e].at(q, 5);
          double wr = 0.0;
          for (int v = 0; v < 5; ++v) {
            wr += w[v] * r[v];
            max_res = std::max(max_res, std::abs(r[v]));
          }
          production += wj * wr;
          min_rho = std::min(min_rho, prim.rho);
          min_p = std::min(min_p, prim.p);
        }
  }
  rec.kinetic_energy = ke;
  rec.total_entropy = entropy;
  rec.entropy_production = production;
  rec.max_residual = max_res;
  rec.min_density = min_rho;
  rec.min_pressure = min_p;

  if (probe) {
    const Mesh& mesh = op.mesh();
    if (mesh.spec().curvature.kind != CurvatureSpec::Kind::None)
      throw ConfigError("pressure probes require an uncurved mesh");
    const auto& spec = mesh.spec();
    std::array<int, 3> cell;
    Vec3 xi;
    for (int d = 0; d < 3; ++d) {
      const double u =
          ((*probe)[d] - spec.lower[d]) / (spec.upper[d] - spec.lower[d]);
      const double scaled = u * spec.counts[d];
      cell[d] = std::clamp(static_cast<int>(scaled), 0, spec.counts[d] - 1);
      xi[d] = std::clamp(2.0 * (scaled - cell[d]) - 1.0, -1.0, 1.0);
    }
    const int e = cell[0] + spec.counts[0] * (cell[1] + spec.counts[1] * cell[2]);
    const ElementData& el = field.elements[e];
    double lrow[3][max_order + 1];
    for (int a = 0; a < 3; ++a) {
      const NodalBasis& b = cached_basis(el.orders[a], kind);
      const Matrix row = interpolation_matrix(b, std::span<const double>(&xi[a], 1));
      for (int i = 0; i < b.n(); ++i) lrow[a][i] = row(0, i);
    }
    const auto ext = el.extents();
    State u{};
    for (int k = 0; k < ext[2]; ++k)
      for (int j = 0; j < ext[1]; ++j)
        for (int i = 0; i < ext[0]; ++i) {
          const double wl = lrow[0][i] * lrow[1][j] * lrow[2][k];
          const double* p = el.at(el.node_index(i, j, k), 5);
          for (int v = 0; v < 5; ++v) u[v] += wl * p[v];
        }
    rec.probe_pressure = primitive_from_conservative(u, gas).p;
  }
  return rec;
}

void write_monitors(const std::vector<MonitorRecord>& records,
                    const std::string& path) {
  std::string out =
      "time step kinetic_energy total_entropy entropy_production "
      "max_residual min_density min_pressure";
  const bool probe = !records.empty() && records.front().probe_pressure.has_value();
  if (probe) out += " probe_pressure";
  out += "\n";
  for (const auto& r : records) {
    append_number(out, r.time);
    out += " ";
    out += std::to_string(r.step);
    for (double v : {r.kinetic_energy, r.total_entropy, r.entropy_production,
                     r.max_residual, r.min_density, r.min_pressure}) {
      out += " ";
      append_number(out, v);
    }
    if (probe) {
      out += " ";
      append_number(out, r.probe_pressure.value_or(0.0));
    }
    out += "\n";
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write monitor file '" + path + "'");
  f << out;
}

void write_snapshot(const SolutionField& field, const DgOperator& op,
                    const std::string& prefix, const std::string& format,
                    int viz_order) {
  const bool with_gradients = op.options().gradients();
  Field gradients;
  if (with_gradients) gradients = op.compute_gradients(field);

  if (format == "point-cloud") {
    std::string out = "# x y z rho vx vy vz p T";
    if (with_gradients) out += " vort_x vort_y vort_z q_criterion";
    out += "\n";
    for (int e = 0; e < field.n_elements(); ++e) {
      const ResampledElement r = resample_element(
          field, with_gradients ? &gradients : nullptr, op, e, viz_order);
      const int n = r.m * r.m * r.m;
      for (int q = 0; q < n; ++q) {
        for (int c = 0; c < 3; ++c) {
          if (c) out += " ";
          append_number(out, r.x[q * 3 + c]);
        }
        const double rho = r.prim[q * 5 + 0];
        const double p = r.prim[q * 5 + 4];
        for (int c = 0; c < 5; ++c) {
          out += " ";
          append_number(out, r.prim[q * 5 + c]);
        }
        out += " ";
        append_number(out, p / (rho * op.options().gas.R));
        if (with_gradients)
          for (int c = 0; c < 4; ++c) {
            out += " ";
            append_number(out, r.vort[q * 4 + c]);
          }
        out += "\n";
      }
    }
    std::ofstream f(prefix + ".dat", std::ios::binary);
    if (!f) throw Error("cannot write snapshot '" + prefix + ".dat'");
    f << out;
    return;
  }

  if (format != "vtk") throw ConfigError("unknown snapshot format '" + format + "'");
  // Legacy VTK structured points, one file per element on the reference cube;
  // physical coordinates ride along as a vector field.
  for (int e = 0; e < field.n_elements(); ++e) {
    const ResampledElement r = resample_element(
        field, with_gradients ? &gradients : nullptr, op, e, viz_order);
    const int m = r.m;
    const int n = m * m * m;
    const double spacing = (m == 1) ? 2.0 : 2.0 / (m - 1);
    std::string out = "# vtk DataFile Version 3.0\nelement " +
                      std::to_string(e) + "\nASCII\nDATASET STRUCTURED_POINTS\n";
    out += "DIMENSIONS " + std::to_string(m) + " " + std::to_string(m) + " " +
           std::to_string(m) + "\n";
    out += "ORIGIN -1 -1 -1\n";
    out += "SPACING ";
    append_number(out, spacing);
    out += " ";
    append_number(out, spacing);
    out += " ";
    append_number(out, spacing);
    out += "\nPOINT_DATA " + std::to_string(n) + "\n";

    auto vectors = [&](const std::string& name, const double* data, int stride,
                       int offset) {
      out += "VECTORS " + name + " double\n";
      for (int q = 0; q < n; ++q) {
        for (int c = 0; c < 3; ++c) {
          if (c) out += " ";
          append_number(out, data[q * stride + offset + c]);
        }
        out += "\n";
      }
    };
    auto scalars = [&](const std::string& name, const double* data, int stride,
                       int offset) {
      out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
      for (int q = 0; q < n; ++q) {
        append_number(out, data[q * stride + offset]);
        out += "\n";
      }
    };
    vectors("coordinates", r.x.data(), 3, 0);
    scalars("rho", r.prim.data(), 5, 0);
    vectors("velocity", r.prim.data(), 5, 1);
    scalars("pressure", r.prim.data(), 5, 4);
    if (with_gradients) {
      vectors("vorticity", r.vort.data(), 4, 0);
      scalars("q_criterion", r.vort.data(), 4, 3);
    }
    std::ofstream f(prefix + "_el" + std::to_string(e) + ".vtk",
                    std::ios::binary);
    if (!f) throw Error("cannot write snapshot element file");
    f << out;
  }
}

void save_restart(const SolutionField& field, long step,
                  const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write restart file '" + path + "'");
  f.write("DGSM", 4);
  const std::uint32_t version = 1;
  f.write(reinterpret_cast<const char*>(&version), 4);
  const std::int64_t s = step;
  f.write(reinterpret_cast<const char*>(&s), 8);
  f.write(reinterpret_cast<const char*>(&field.time), 8);
  const std::int32_t ne = field.n_elements();
  f.write(reinterpret_cast<const char*>(&ne), 4);
  for (const auto& el : field.elements) {
    const std::int32_t p[3] = {el.orders[0], el.orders[1], el.orders[2]};
    f.write(reinterpret_cast<const char*>(p), 12);
    f.write(reinterpret_cast<const char*>(el.values.data()),
            static_cast<std::streamsize>(el.values.size() * 8));
  }
}

RestartData load_restart(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open restart file '" + path + "'");
  char magic[4];
  f.read(magic, 4);
  if (std::memcmp(magic, "DGSM", 4) != 0)
    throw ConfigError("'" + path + "' is not a restart file (bad magic)");
  std::uint32_t version = 0;
  f.read(reinterpret_cast<char*>(&version), 4);
  if (version != 1)
    throw ConfigError("unsupported restart version " + std::to_string(version));
  RestartData data;
  std::int64_t step = 0;
  f.read(reinterpret_cast<char*>(&step), 8);
  data.step = step;
  f.read(reinterpret_cast<char*>(&data.field.time), 8);
  std::int32_t ne = 0;
  f.read(reinterpret_cast<char*>(&ne), 4);
  if (ne <= 0) throw ConfigError("restart file has no elements");
  data.field.ncomp = 5;
  data.field.elements.resize(ne);
  for (auto& el : data.field.elements) {
    std::int32_t p[3];
    f.read(reinterpret_cast<char*>(p), 12);
    el.orders = {p[0], p[1], p[2]};
    el.values.resize(static_cast<std::size_t>(el.node_count()) * 5);
    f.read(reinterpret_cast<char*>(el.values.data()),
           static_cast<std::streamsize>(el.values.size() * 8));
  }
  if (!f) throw ConfigError("truncated restart file '" + path + "'");
  return data;
}

}  // namespace dgsem
