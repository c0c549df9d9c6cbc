#include "dgsem/time_integration.hpp"

#include <cmath>

#include "dgsem/errors.hpp"

namespace dgsem {

RkMethod to_rk_method(const std::string& name) {
  if (name == "rk3") return RkMethod::RK3LowStorage;
  if (name == "rk45" || name == "rk4") return RkMethod::RK45LowStorage;
  throw ConfigError("unknown explicit method '" + name + "' (use rk3 or rk45)");
}

std::string to_string(RkMethod method) {
  return method == RkMethod::RK3LowStorage ? "rk3" : "rk45";
}

const RkCoefficients& rk_coefficients(RkMethod method) {
  // Williamson (1980) third-order 2N scheme.
  static const RkCoefficients rk3 = {
      {0.0, -5.0 / 9.0, -153.0 / 128.0},
      {1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0},
      {0.0, 1.0 / 3.0, 3.0 / 4.0}};
  // Carpenter & Kennedy (1994) five-stage fourth-order 2N scheme.
  static const RkCoefficients rk45 = {
      {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
       -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0},
      {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0,
       1720146321549.0 / 2090206949498.0, 3134564353537.0 / 4481467310338.0,
       2277821191437.0 / 14882151754819.0},
      {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
       2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0}};
  return method == RkMethod::RK3LowStorage ? rk3 : rk45;
}

void LowStorageRK::step(SolutionField& u, double dt, const ResidualFn& residual) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const RkCoefficients& coef = rk_coefficients(method_);
  if (!register_.same_shape(u)) {
    register_ = u;
    field_fill(register_, 0.0);
  }
  const double t0 = u.time;
  for (int s = 0; s < coef.stages(); ++s) {
    field_scale(register_, coef.a[s]);
    u.time = t0 + coef.c[s] * dt;
    try {
      residual(u, dt, register_);
    } catch (const Error& err) {
      throw Error(std::string(err.what()) + " (Runge-Kutta stage " +
                  std::to_string(s) + ")");
    }
    field_axpy(coef.b[s], register_, u);
  }
  u.time = t0 + dt;
}

double compute_dt_cfl(const SolutionField& field, const MeshGeometry& geometry,
                      const GasProperties& gas, double cfl, double dfl) {
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (dfl < 0.0) throw ConfigError("dfl must be non-negative");
  double conv = 0.0;
  double visc = 0.0;
  for (int e = 0; e < field.n_elements(); ++e) {
    const ElementData& el = field.elements[e];
    const ElementGeometry& geo = geometry.elements[e];
    const int n = el.node_count();
    const std::array<double, 3> pfac = {2.0 * el.orders[0] + 1.0,
                                        2.0 * el.orders[1] + 1.0,
                                        2.0 * el.orders[2] + 1.0};
    for (int q = 0; q < n; ++q) {
      State uq;
      for (int v = 0; v < 5; ++v) uq[v] = el.at(q, 5)[v];
      const std::array<Vec3, 3> ja = {geo.contravariant(q, 0),
                                      geo.contravariant(q, 1),
                                      geo.contravariant(q, 2)};
      const Vec3 lambda = directional_wave_speeds(uq, ja, gas);
      const double inv_j = 1.0 / geo.jacobian[q];
      double c = 0.0;
      for (int i = 0; i < 3; ++i) c += lambda[i] * pfac[i] * inv_j;
      conv = std::max(conv, c);
      if (dfl > 0.0 && gas.mu > 0.0) {
        const double nu = gas.mu / uq[0];
        double w = 0.0;
        for (int i = 0; i < 3; ++i) {
          const double t = pfac[i] * norm(ja[i]) * inv_j;
          w += t * t;
        }
        visc = std::max(visc, nu * w);
      }
    }
  }
  double inv_dt = conv / cfl;
  if (visc > 0.0) inv_dt += visc / dfl;
  if (!(inv_dt > 0.0)) throw ConfigError("degenerate time-step estimate");
  return 1.0 / inv_dt;
}

}  // namespace dgsem
