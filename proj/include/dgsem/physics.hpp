#ifndef DGSEM_PHYSICS_HPP
#define DGSEM_PHYSICS_HPP

#include <array>
#include <string>

#include "dgsem/types.hpp"

namespace dgsem {

struct GasProperties {
  double gamma = 1.4;
  double R = 1.0;
  double Pr = 0.72;
  double mu = 0.0;             // constant dynamic viscosity
  double smagorinsky_cs = 0.0; // 0 disables the eddy-viscosity model

  /// kappa = gamma R mu / ((gamma - 1) Pr)
  double kappa() const { return gamma * R * mu / ((gamma - 1.0) * Pr); }
  void validate() const;  // throws ConfigError on out-of-range values
};

/// Conservative variables (rho, rho v1, rho v2, rho v3, rho e).
using State = std::array<double, 5>;
using EntropyVars = std::array<double, 5>;

/// Flux array: one 5-vector per Cartesian direction.
using FluxArray = std::array<std::array<double, 5>, 3>;

/// Spatial derivatives of the gradient-variable set (rho, v1, v2, v3, T):
/// grad[d][q] = d q / d x_d.
using GradientState = std::array<std::array<double, 5>, 3>;

struct Primitive {
  double rho;
  Vec3 v;
  double p;
  double T;
  double H;  // total specific enthalpy
};

/// Decomposes an admissible state; throws AdmissibilityError otherwise.
Primitive primitive_from_conservative(const State& u, const GasProperties& gas);

double sound_speed(const Primitive& prim, const GasProperties& gas);

State conservative_from_primitive(double rho, const Vec3& v, double p,
                                  const GasProperties& gas);

FluxArray euler_flux(const State& u, const GasProperties& gas);

/// Navier-Stokes viscous fluxes; eddy_mu adds to the stress viscosity, the
/// heat flux keeps the molecular conductivity.
FluxArray viscous_flux(const State& u, const GradientState& grad,
                       const GasProperties& gas, double eddy_mu);

/// Mathematical entropy S = -rho s with s = ln p - gamma ln rho.
double entropy_function(const State& u, const GasProperties& gas);
/// w = dS/du for the entropy above.
EntropyVars entropy_variables(const State& u, const GasProperties& gas);
/// Inverse of the entropy-variable map on admissible states.
State conservative_from_entropy(const EntropyVars& w, const GasProperties& gas);
/// Entropy flux potential psi_i = (gamma - 1) rho v_i (satisfies
/// psi_i = w . F_i - S v_i).
Vec3 entropy_potential(const State& u, const GasProperties& gas);

enum class TwoPointVariant {
  Central,
  Ducros,
  KennedyGruber,
  Pirozzoli,
  EntropyConserving,  // Ismail-Roe
  Chandrashekar,
};

enum class RiemannVariant {
  Central,
  LaxFriedrichs,
  Rusanov,  // identical dissipation to local Lax-Friedrichs
  Roe,
};

TwoPointVariant to_two_point_variant(const std::string& name);
RiemannVariant to_riemann_variant(const std::string& name);
std::string to_string(TwoPointVariant v);
std::string to_string(RiemannVariant v);

/// Symmetric, consistent two-point volume flux of the selected split form.
FluxArray two_point_flux(TwoPointVariant variant, const State& ul,
                         const State& ur, const GasProperties& gas);

/// Interface flux through a unit normal.
State riemann_flux(RiemannVariant variant, const State& ul, const State& ur,
                   const Vec3& normal, const GasProperties& gas);

/// Dissipation operator D of the solver: F* = 1/2 (F_L + F_R) . n - 1/2 D.
/// Central returns zero; Roe applies a Harten entropy fix on the acoustic
/// waves only, so stationary contacts stay undamped.
State riemann_dissipation(RiemannVariant variant, const State& ul,
                          const State& ur, const Vec3& normal,
                          const GasProperties& gas);

/// mu_t = rho (Cs delta)^2 |S|, |S| = sqrt(2 S:S).
double smagorinsky_viscosity(double rho, const GradientState& grad,
                             double delta, double cs);

/// Per reference direction: |v . Ja^i| + c |Ja^i|.
Vec3 directional_wave_speeds(const State& u, const std::array<Vec3, 3>& ja,
                             const GasProperties& gas);
double max_wave_speed(const State& u, const std::array<Vec3, 3>& ja,
                      const GasProperties& gas);

/// Stable logarithmic mean (a - b) / (ln a - ln b), series expansion when the
/// ratio is within 1e-4 of one.
double logarithmic_mean(double a, double b);

}  // namespace dgsem

#endif
