#include "dgsem/svv.hpp"

#include <cmath>

#include "dgsem/errors.hpp"
#include "dgsem/tensor.hpp"

namespace dgsem {

Vector FilterKernel::attenuation(int order) const {
  Vector f = Vector::Ones(order + 1);
  if (kind == Kind::Identity || cutoff >= order) return f;
  const int m = std::max(0, cutoff);
  if (kind == Kind::Exponential) {
    const double alpha = -std::log(1e-14);
    for (int k = m + 1; k <= order; ++k) {
      const double t = static_cast<double>(k - m) / (order - m);
      f[k] = std::exp(-alpha * std::pow(t, 2.0 * power));
    }
  } else {  // Tadmor kernel, filter form
    for (int k = m + 1; k <= order; ++k) {
      const double num = static_cast<double>(k - order);
      const double den = static_cast<double>(k - m);
      f[k] = 1.0 - std::exp(-(num * num) / (den * den));
    }
  }
  return f;
}

FilterKernel::Kind to_kernel_kind(const std::string& name) {
  if (name == "identity") return FilterKernel::Kind::Identity;
  if (name == "tadmor") return FilterKernel::Kind::Tadmor;
  if (name == "exponential") return FilterKernel::Kind::Exponential;
  throw ConfigError("unknown svv kernel '" + name + "'");
}

std::string to_string(FilterKernel::Kind kind) {
  switch (kind) {
    case FilterKernel::Kind::Identity: return "identity";
    case FilterKernel::Kind::Tadmor: return "tadmor";
    case FilterKernel::Kind::Exponential: return "exponential";
  }
  return {};
}

void SvvConfig::validate() const {
  if (mu_a < 0.0) throw ConfigError("artificial viscosity must be non-negative");
  if (!(sensor_low < sensor_high))
    throw ConfigError("sensor low must be below sensor high");
  if (kernel.cutoff < 0) throw ConfigError("svv cutoff must be non-negative");
}

SvvBlend blend_artificial_viscosity(double sensor, const SvvConfig& config) {
  double t = (sensor - config.sensor_low) /
             (config.sensor_high - config.sensor_low);
  t = std::clamp(t, 0.0, 1.0);
  const double s = t * t * (3.0 - 2.0 * t);  // smoothstep
  return {s * config.mu_a, s};
}

std::vector<double> shock_sensor(const SolutionField& field,
                                 const MeshGeometry& geometry) {
  std::vector<double> sensor(field.n_elements(), 0.0);
  for (int e = 0; e < field.n_elements(); ++e) {
    const ElementData& el = field.elements[e];
    const ElementGeometry& g = geometry.elements[e];
    const auto ext = el.extents();
    const int n = el.node_count();
    std::vector<double> rho(n);
    for (int q = 0; q < n; ++q) rho[q] = el.at(q, field.ncomp)[0];
    std::vector<double> grad2(n, 0.0);
    std::vector<double> d(n);
    for (int a = 0; a < 3; ++a) {
      apply_along_axis(cached_basis(el.orders[a], geometry.kind).diff, a, ext, 1,
                       rho.data(), d.data());
      for (int q = 0; q < n; ++q) grad2[q] += d[q] * d[q];
    }
    const auto& b0 = cached_basis(el.orders[0], geometry.kind);
    const auto& b1 = cached_basis(el.orders[1], geometry.kind);
    const auto& b2 = cached_basis(el.orders[2], geometry.kind);
    double s = 0.0;
    for (int k = 0; k < ext[2]; ++k)
      for (int j = 0; j < ext[1]; ++j)
        for (int i = 0; i < ext[0]; ++i) {
          const int q = el.node_index(i, j, k);
          s += b0.weights[i] * b1.weights[j] * b2.weights[k] * g.jacobian[q] *
               grad2[q];
        }
    sensor[e] = s;
  }
  return sensor;
}

void ldlt_semidefinite(const Matrix& b, Matrix& l, Vector& d, double tol) {
  const int n = static_cast<int>(b.rows());
  l = Matrix::Identity(n, n);
  d = Vector::Zero(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(b(i, i)));
  const double clamp = tol * std::max(scale, 1.0);
  // Column-wise factorization; a clamped pivot zeroes its column, which is
  // exact for semidefinite matrices.
  std::vector<double> work(n);
  for (int j = 0; j < n; ++j) {
    double dj = b(j, j);
    for (int k = 0; k < j; ++k) dj -= l(j, k) * l(j, k) * d[k];
    if (dj < -clamp)
      throw NumericalValidityError(
          "indefinite flux matrix: pivot " + std::to_string(dj) + " at index " +
          std::to_string(j));
    if (dj <= clamp) {
      d[j] = 0.0;
      for (int i = j + 1; i < n; ++i) l(i, j) = 0.0;
      continue;
    }
    d[j] = dj;
    for (int i = j + 1; i < n; ++i) {
      double v = b(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k) * d[k];
      l(i, j) = v / dj;
    }
  }
}

Matrix entropy_flux_matrix(const State& u, double mu, const GasProperties& gas) {
  const Primitive prim = primitive_from_conservative(u, gas);
  const double g1 = gas.gamma - 1.0;
  const double rt = gas.R * prim.T;

  // dw/dq for q = (rho, v1, v2, v3, T), then invert for dq/dw.
  Eigen::Matrix<double, 5, 5> dw_dq = Eigen::Matrix<double, 5, 5>::Zero();
  dw_dq(0, 0) = g1 / prim.rho;
  for (int i = 0; i < 3; ++i) {
    dw_dq(0, 1 + i) = -g1 * prim.v[i] / rt;
    dw_dq(1 + i, 1 + i) = g1 / rt;
    dw_dq(1 + i, 4) = -g1 * prim.v[i] / (rt * prim.T);
  }
  dw_dq(0, 4) = -1.0 / prim.T + g1 * dot(prim.v, prim.v) / (2.0 * rt * prim.T);
  dw_dq(4, 4) = g1 / (rt * prim.T);
  const Eigen::Matrix<double, 5, 5> dq_dw = dw_dq.partialPivLu().inverse();

  GasProperties artificial = gas;
  artificial.mu = mu;
  artificial.smagorinsky_cs = 0.0;

  Matrix b = Matrix::Zero(15, 15);
  for (int d2 = 0; d2 < 3; ++d2)
    for (int m = 0; m < 5; ++m) {
      GradientState grad{};
      for (int q = 0; q < 5; ++q) grad[d2][q] = dq_dw(q, m);
      const FluxArray f = viscous_flux(u, grad, artificial, 0.0);
      for (int d1 = 0; d1 < 3; ++d1)
        for (int i = 0; i < 5; ++i) b(d1 * 5 + i, d2 * 5 + m) = f[d1][i];
    }
  // Symmetric by the entropy symmetrization; enforce against round-off.
  Matrix bs = 0.5 * (b + Matrix(b.transpose()));
  return bs;
}

void svv_filtered_flux(const std::array<int, 3>& orders, NodeKind kind,
                       const double* u, const double* gw, const double* jac,
                       double mu, double toward_identity,
                       const FilterKernel& kernel, const GasProperties& gas,
                       double* fa) {
  const std::array<int, 3> ext = {orders[0] + 1, orders[1] + 1, orders[2] + 1};
  const int n = ext[0] * ext[1] * ext[2];
  if (mu <= 0.0) {
    for (int i = 0; i < n * 15; ++i) fa[i] = 0.0;
    return;
  }

  // Per-node factors B = L' D L'^T and the half-factored gradient
  // y = sqrt(J D) L'^T G, stored for the second half after filtering.
  std::vector<double> lfac(static_cast<std::size_t>(n) * 15 * 15);
  std::vector<double> dfac(static_cast<std::size_t>(n) * 15);
  std::vector<double> y(static_cast<std::size_t>(n) * 15);
  Matrix l;
  Vector d;
  for (int q = 0; q < n; ++q) {
    State uq;
    for (int v = 0; v < 5; ++v) uq[v] = u[q * 5 + v];
    const Matrix b = entropy_flux_matrix(uq, mu, gas);
    ldlt_semidefinite(b, l, d);
    for (int i = 0; i < 15; ++i) {
      dfac[q * 15 + i] = d[i];
      for (int j = 0; j < 15; ++j) lfac[(q * 15 + i) * 15 + j] = l(i, j);
    }
    // y_k = sqrt(J d_k) * sum_{i >= k} L(i,k) G_i
    for (int k = 0; k < 15; ++k) {
      double acc = gw[q * 15 + k];
      for (int i = k + 1; i < 15; ++i) acc += l(i, k) * gw[q * 15 + i];
      y[q * 15 + k] = std::sqrt(jac[q] * d[k]) * acc;
    }
  }

  // Mode-wise filter, tensor product of the per-axis 1D filters blended
  // toward the identity in troubled elements.
  std::vector<double> tmp(y.size());
  for (int a = 0; a < 3; ++a) {
    const NodalBasis& basis = cached_basis(orders[a], kind);
    Vector f = kernel.attenuation(orders[a]);
    for (int k = 0; k <= orders[a]; ++k)
      f[k] = (1.0 - toward_identity) * f[k] + toward_identity;
    const Matrix filter1d =
        basis.modal_backward * f.asDiagonal() * basis.modal_forward;
    apply_along_axis(filter1d, a, ext, 15, y.data(), tmp.data());
    y.swap(tmp);
  }

  // Second half: F_a = (1/sqrt(J)) L' sqrt(D) y.
  for (int q = 0; q < n; ++q) {
    const double invsj = 1.0 / std::sqrt(jac[q]);
    for (int i = 0; i < 15; ++i) {
      double acc = 0.0;
      for (int k = 0; k <= i; ++k) {
        const double dk = dfac[q * 15 + k];
        if (dk == 0.0) continue;
        acc += lfac[(q * 15 + i) * 15 + k] * std::sqrt(dk) * y[q * 15 + k];
      }
      fa[q * 15 + i] = invsj * acc;
    }
  }
}

}  // namespace dgsem
