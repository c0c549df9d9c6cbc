#include <cmath>

#include "dgsem/errors.hpp"
#include "dgsem/run.hpp"

namespace dgsem {

namespace {

State uniform_state(const InitialConditionSettings& ic, const GasProperties& gas) {
  return conservative_from_primitive(ic.density, ic.velocity, ic.pressure, gas);
}

// Advecting isentropic vortex: perturbation of a uniform stream that
// translates unchanged, the classic smooth accuracy benchmark.
State vortex_state(const InitialConditionSettings& ic, const GasProperties& gas,
                   const Vec3& x) {
  const double beta = ic.vortex_strength;
  const double rc = ic.vortex_radius;
  const double dx = (x[0] - ic.vortex_center[0]) / rc;
  const double dy = (x[1] - ic.vortex_center[1]) / rc;
  const double r2 = dx * dx + dy * dy;
  const double g = gas.gamma;
  const double envelope = std::exp(0.5 * (1.0 - r2));
  Vec3 v = ic.velocity;
  v[0] -= beta / (2.0 * M_PI) * envelope * dy;
  v[1] += beta / (2.0 * M_PI) * envelope * dx;
  // theta = p/rho; background value 1, isentropic perturbation.
  const double theta =
      1.0 - (g - 1.0) * beta * beta / (8.0 * g * M_PI * M_PI) * envelope * envelope;
  const double rho = std::pow(theta, 1.0 / (g - 1.0));
  return conservative_from_primitive(rho, v, rho * theta, gas);
}

// Taylor-Green vortex on [0, 2 pi]^3: V0 = 1, rho0 = 1, isothermal density,
// p0 set by the Mach number.
State taylor_green_state(const InitialConditionSettings& ic,
                         const GasProperties& gas, const Vec3& x) {
  const double p0 = 1.0 / (gas.gamma * ic.mach * ic.mach);
  const Vec3 v = {std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]),
                  -std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]), 0.0};
  const double p =
      p0 + (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1])) *
               (std::cos(2.0 * x[2]) + 2.0) / 16.0;
  const double rho = p / p0;  // isothermal: T = T0 everywhere
  return conservative_from_primitive(rho, v, p, gas);
}

}  // namespace

SolutionField initial_condition(const InitialConditionSettings& ic,
                                const GasProperties& gas, const Mesh& mesh,
                                const MeshGeometry& geometry,
                                const OrderMap& orders) {
  InitialConditionSettings settings = ic;
  if (ic.name == "isentropic-vortex" && !ic.vortex_center_set) {
    settings.vortex_center = {
        0.5 * (mesh.spec().lower[0] + mesh.spec().upper[0]),
        0.5 * (mesh.spec().lower[1] + mesh.spec().upper[1])};
  }

  SolutionField field = Field::zeros(orders, n_cons);
  for (int e = 0; e < field.n_elements(); ++e) {
    ElementData& el = field.elements[e];
    const ElementGeometry& geo = geometry.elements[e];
    for (int q = 0; q < el.node_count(); ++q) {
      const Vec3 x = {geo.x[3 * q], geo.x[3 * q + 1], geo.x[3 * q + 2]};
      State u;
      if (settings.name == "uniform") {
        u = uniform_state(settings, gas);
      } else if (settings.name == "isentropic-vortex") {
        u = vortex_state(settings, gas, x);
      } else if (settings.name == "taylor-green") {
        u = taylor_green_state(settings, gas, x);
      } else {
        throw ConfigError("unknown initial condition '" + settings.name + "'");
      }
      for (int v = 0; v < 5; ++v) el.at(q, 5)[v] = u[v];
    }
  }
  return field;
}

}  // namespace dgsem
