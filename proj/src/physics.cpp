#include "dgsem/physics.hpp"

#include <cmath>

#include "dgsem/errors.hpp"

namespace dgsem {

void GasProperties::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(R > 0.0)) throw ConfigError("gas constant must be positive");
  if (!(Pr > 0.0)) throw ConfigError("Prandtl number must be positive");
  if (mu < 0.0) throw ConfigError("viscosity must be non-negative");
  if (smagorinsky_cs < 0.0) throw ConfigError("smagorinsky cs must be non-negative");
}

Primitive primitive_from_conservative(const State& u, const GasProperties& gas) {
  const double rho = u[0];
  if (!(rho > 0.0))
    throw AdmissibilityError("non-positive density", rho, 0.0);
  const Vec3 v = {u[1] / rho, u[2] / rho, u[3] / rho};
  const double kinetic = 0.5 * rho * dot(v, v);
  const double p = (gas.gamma - 1.0) * (u[4] - kinetic);
  if (!(p > 0.0)) throw AdmissibilityError("non-positive pressure", rho, p);
  Primitive prim;
  prim.rho = rho;
  prim.v = v;
  prim.p = p;
  prim.T = p / (rho * gas.R);
  prim.H = (u[4] + p) / rho;
  return prim;
}

double sound_speed(const Primitive& prim, const GasProperties& gas) {
  return std::sqrt(gas.gamma * prim.p / prim.rho);
}

State conservative_from_primitive(double rho, const Vec3& v, double p,
                                  const GasProperties& gas) {
  return {rho, rho * v[0], rho * v[1], rho * v[2],
          p / (gas.gamma - 1.0) + 0.5 * rho * dot(v, v)};
}

FluxArray euler_flux(const State& u, const GasProperties& gas) {
  const Primitive prim = primitive_from_conservative(u, gas);
  FluxArray f;
  for (int d = 0; d < 3; ++d) {
    const double mass = u[0] * prim.v[d];
    f[d][0] = mass;
    f[d][1] = mass * prim.v[0];
    f[d][2] = mass * prim.v[1];
    f[d][3] = mass * prim.v[2];
    f[d][1 + d] += prim.p;
    f[d][4] = mass * prim.H;
  }
  return f;
}

FluxArray viscous_flux(const State& u, const GradientState& grad,
                       const GasProperties& gas, double eddy_mu) {
  if (eddy_mu < 0.0) throw ConfigError("eddy viscosity must be non-negative");
  const Primitive prim = primitive_from_conservative(u, gas);
  const double mu_eff = gas.mu + eddy_mu;
  const double div_v = grad[0][1] + grad[1][2] + grad[2][3];
  double tau[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      tau[i][j] = mu_eff * (grad[j][1 + i] + grad[i][1 + j]);
      if (i == j) tau[i][j] -= (2.0 / 3.0) * mu_eff * div_v;
    }
  const double kappa = gas.kappa();
  FluxArray f;
  for (int d = 0; d < 3; ++d) {
    f[d][0] = 0.0;
    f[d][1] = tau[0][d];
    f[d][2] = tau[1][d];
    f[d][3] = tau[2][d];
    f[d][4] = prim.v[0] * tau[0][d] + prim.v[1] * tau[1][d] +
              prim.v[2] * tau[2][d] + kappa * grad[d][4];
  }
  return f;
}

double entropy_function(const State& u, const GasProperties& gas) {
  const Primitive prim = primitive_from_conservative(u, gas);
  const double s = std::log(prim.p) - gas.gamma * std::log(prim.rho);
  return -prim.rho * s;
}

EntropyVars entropy_variables(const State& u, const GasProperties& gas) {
  const Primitive prim = primitive_from_conservative(u, gas);
  const double g1 = gas.gamma - 1.0;
  const double s = std::log(prim.p) - gas.gamma * std::log(prim.rho);
  const double rho_p = prim.rho / prim.p;
  EntropyVars w;
  w[0] = gas.gamma - s - 0.5 * g1 * rho_p * dot(prim.v, prim.v);
  for (int i = 0; i < 3; ++i) w[1 + i] = g1 * rho_p * prim.v[i];
  w[4] = -g1 * rho_p;
  return w;
}

State conservative_from_entropy(const EntropyVars& w, const GasProperties& gas) {
  const double g1 = gas.gamma - 1.0;
  const double w5 = w[4] / g1;
  if (!(w5 < 0.0))
    throw AdmissibilityError("entropy variables outside the admissible cone",
                             0.0, 0.0);
  const double r = -1.0 / w5;  // p / rho
  const Vec3 v = {r * w[1] / g1, r * w[2] / g1, r * w[3] / g1};
  const double beta = 1.0 / (2.0 * r);
  const double s = gas.gamma - g1 * (w[0] / g1 + beta * dot(v, v));
  const double rho = std::exp((std::log(r) - s) / g1);
  return conservative_from_primitive(rho, v, rho * r, gas);
}

Vec3 entropy_potential(const State& u, const GasProperties& gas) {
  const double g1 = gas.gamma - 1.0;
  return {g1 * u[1], g1 * u[2], g1 * u[3]};
}

double logarithmic_mean(double a, double b) {
  const double zeta = a / b;
  const double f = (zeta - 1.0) / (zeta + 1.0);
  const double u = f * f;
  // |zeta - 1| < 1e-4: series of 2f / ln(zeta).
  if (std::abs(zeta - 1.0) < 1e-4) {
    const double series = 1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0;
    return 0.5 * (a + b) / series;
  }
  return 0.5 * (a + b) * (2.0 * f) / std::log1p(zeta - 1.0);
}

namespace {
inline double avg(double a, double b) { return 0.5 * (a + b); }
}  // namespace

FluxArray two_point_flux(TwoPointVariant variant, const State& ul,
                         const State& ur, const GasProperties& gas) {
  const Primitive l = primitive_from_conservative(ul, gas);
  const Primitive r = primitive_from_conservative(ur, gas);
  FluxArray f{};
  switch (variant) {
    case TwoPointVariant::Central: {
      const FluxArray fl = euler_flux(ul, gas);
      const FluxArray fr = euler_flux(ur, gas);
      for (int d = 0; d < 3; ++d)
        for (int v = 0; v < 5; ++v) f[d][v] = avg(fl[d][v], fr[d][v]);
      break;
    }
    case TwoPointVariant::Ducros: {
      // Products of averaged conservative and velocity quantities.
      const double p_avg = avg(l.p, r.p);
      const double e_avg = avg(ul[4], ur[4]);
      for (int d = 0; d < 3; ++d) {
        const double mass = avg(ul[1 + d], ur[1 + d]);
        f[d][0] = mass;
        for (int j = 0; j < 3; ++j) f[d][1 + j] = mass * avg(l.v[j], r.v[j]);
        f[d][1 + d] += p_avg;
        f[d][4] = (e_avg + p_avg) * avg(l.v[d], r.v[d]);
      }
      break;
    }
    case TwoPointVariant::KennedyGruber: {
      const double rho_avg = avg(l.rho, r.rho);
      const double p_avg = avg(l.p, r.p);
      const double e_avg = avg(ul[4] / l.rho, ur[4] / r.rho);
      for (int d = 0; d < 3; ++d) {
        const double vd = avg(l.v[d], r.v[d]);
        f[d][0] = rho_avg * vd;
        for (int j = 0; j < 3; ++j)
          f[d][1 + j] = rho_avg * vd * avg(l.v[j], r.v[j]);
        f[d][1 + d] += p_avg;
        f[d][4] = rho_avg * vd * e_avg + p_avg * vd;
      }
      break;
    }
    case TwoPointVariant::Pirozzoli: {
      const double rho_avg = avg(l.rho, r.rho);
      const double p_avg = avg(l.p, r.p);
      const double h_avg = avg(l.H, r.H);
      for (int d = 0; d < 3; ++d) {
        const double vd = avg(l.v[d], r.v[d]);
        f[d][0] = rho_avg * vd;
        for (int j = 0; j < 3; ++j)
          f[d][1 + j] = rho_avg * vd * avg(l.v[j], r.v[j]);
        f[d][1 + d] += p_avg;
        f[d][4] = rho_avg * vd * h_avg;
      }
      break;
    }
    case TwoPointVariant::EntropyConserving: {
      // Ismail & Roe (2009) entropy-conserving flux via parameter vector z.
      const double z1l = std::sqrt(l.rho / l.p), z1r = std::sqrt(r.rho / r.p);
      const double z5l = std::sqrt(l.rho * l.p), z5r = std::sqrt(r.rho * r.p);
      const double z1a = avg(z1l, z1r);
      const double z5ln = logarithmic_mean(z5l, z5r);
      const double z1ln = logarithmic_mean(z1l, z1r);
      const double rho_hat = z1a * z5ln;
      const Vec3 v_hat = {avg(z1l * l.v[0], z1r * r.v[0]) / z1a,
                          avg(z1l * l.v[1], z1r * r.v[1]) / z1a,
                          avg(z1l * l.v[2], z1r * r.v[2]) / z1a};
      const double p1_hat = avg(z5l, z5r) / z1a;
      const double g = gas.gamma;
      const double p2_hat =
          ((g + 1.0) / (2.0 * g)) * z5ln / z1ln + ((g - 1.0) / (2.0 * g)) * avg(z5l, z5r) / z1a;
      const double h_hat = g / (g - 1.0) * p2_hat / rho_hat + 0.5 * dot(v_hat, v_hat);
      for (int d = 0; d < 3; ++d) {
        const double mass = rho_hat * v_hat[d];
        f[d][0] = mass;
        for (int j = 0; j < 3; ++j) f[d][1 + j] = mass * v_hat[j];
        f[d][1 + d] += p1_hat;
        f[d][4] = mass * h_hat;
      }
      break;
    }
    case TwoPointVariant::Chandrashekar: {
      // Kinetic-energy and entropy consistent flux with logarithmic means.
      const double beta_l = 0.5 * l.rho / l.p;
      const double beta_r = 0.5 * r.rho / r.p;
      const double rho_ln = logarithmic_mean(l.rho, r.rho);
      const double beta_ln = logarithmic_mean(beta_l, beta_r);
      const double p_tilde = avg(l.rho, r.rho) / (2.0 * avg(beta_l, beta_r));
      const double vsq_avg = avg(dot(l.v, l.v), dot(r.v, r.v));
      const Vec3 v_avg = {avg(l.v[0], r.v[0]), avg(l.v[1], r.v[1]),
                          avg(l.v[2], r.v[2])};
      for (int d = 0; d < 3; ++d) {
        const double mass = rho_ln * v_avg[d];
        f[d][0] = mass;
        for (int j = 0; j < 3; ++j) f[d][1 + j] = mass * v_avg[j];
        f[d][1 + d] += p_tilde;
        f[d][4] = mass * 0.5 *
                      (1.0 / ((gas.gamma - 1.0) * beta_ln) - vsq_avg) +
                  f[d][1] * v_avg[0] + f[d][2] * v_avg[1] + f[d][3] * v_avg[2];
      }
      break;
    }
  }
  return f;
}

namespace {

void check_unit_normal(const Vec3& n) {
  if (std::abs(norm(n) - 1.0) > 1e-10)
    throw GeometryError("riemann flux requires a unit normal");
}

State central_normal_flux(const State& ul, const State& ur, const Vec3& n,
                          const GasProperties& gas) {
  const FluxArray fl = euler_flux(ul, gas);
  const FluxArray fr = euler_flux(ur, gas);
  State f{};
  for (int v = 0; v < 5; ++v)
    for (int d = 0; d < 3; ++d)
      f[v] += 0.5 * n[d] * (fl[d][v] + fr[d][v]);
  return f;
}

// Roe-average dissipation |A|(uR - uL) assembled wave by wave
// (Blazek, Computational Fluid Dynamics, ch. 4.3.3), with a Harten fix on
// the acoustic eigenvalues only.
State roe_dissipation(const State& ul, const State& ur, const Vec3& n,
                      const GasProperties& gas) {
  const Primitive l = primitive_from_conservative(ul, gas);
  const Primitive r = primitive_from_conservative(ur, gas);
  const double sl = std::sqrt(l.rho), sr = std::sqrt(r.rho);
  const double inv = 1.0 / (sl + sr);
  const Vec3 v = {(sl * l.v[0] + sr * r.v[0]) * inv,
                  (sl * l.v[1] + sr * r.v[1]) * inv,
                  (sl * l.v[2] + sr * r.v[2]) * inv};
  const double h = (sl * l.H + sr * r.H) * inv;
  const double vsq = dot(v, v);
  const double c2 = (gas.gamma - 1.0) * (h - 0.5 * vsq);
  const double c = std::sqrt(std::max(c2, 1e-300));
  const double rho = sl * sr;
  const double vn = dot(v, n);

  const double drho = r.rho - l.rho;
  const double dp = r.p - l.p;
  const Vec3 dv = {r.v[0] - l.v[0], r.v[1] - l.v[1], r.v[2] - l.v[2]};
  const double dvn = dot(dv, n);

  const double delta = 0.05 * (std::abs(vn) + c);
  auto fix = [&](double lambda) {
    const double a = std::abs(lambda);
    return (a < delta) ? (lambda * lambda + delta * delta) / (2.0 * delta) : a;
  };
  const double l1 = fix(vn - c);
  const double l5 = fix(vn + c);
  const double lm = std::abs(vn);  // contact and shear waves, unfixed

  State d{};
  // vn - c acoustic wave
  {
    const double a = l1 * (dp - rho * c * dvn) / (2.0 * c2);
    d[0] += a;
    for (int i = 0; i < 3; ++i) d[1 + i] += a * (v[i] - c * n[i]);
    d[4] += a * (h - c * vn);
  }
  // entropy + shear waves
  {
    const double a = lm * (drho - dp / c2);
    d[0] += a;
    for (int i = 0; i < 3; ++i) d[1 + i] += a * v[i] + lm * rho * (dv[i] - dvn * n[i]);
    d[4] += a * 0.5 * vsq + lm * rho * (dot(v, dv) - vn * dvn);
  }
  // vn + c acoustic wave
  {
    const double a = l5 * (dp + rho * c * dvn) / (2.0 * c2);
    d[0] += a;
    for (int i = 0; i < 3; ++i) d[1 + i] += a * (v[i] + c * n[i]);
    d[4] += a * (h + c * vn);
  }
  return d;
}

}  // namespace

State riemann_dissipation(RiemannVariant variant, const State& ul,
                          const State& ur, const Vec3& normal,
                          const GasProperties& gas) {
  check_unit_normal(normal);
  switch (variant) {
    case RiemannVariant::Central:
      return State{};
    case RiemannVariant::LaxFriedrichs:
    case RiemannVariant::Rusanov: {
      const Primitive l = primitive_from_conservative(ul, gas);
      const Primitive r = primitive_from_conservative(ur, gas);
      const double lmax =
          std::max(std::abs(dot(l.v, normal)) + sound_speed(l, gas),
                   std::abs(dot(r.v, normal)) + sound_speed(r, gas));
      State d;
      for (int v = 0; v < 5; ++v) d[v] = lmax * (ur[v] - ul[v]);
      return d;
    }
    case RiemannVariant::Roe:
      return roe_dissipation(ul, ur, normal, gas);
  }
  return State{};
}

State riemann_flux(RiemannVariant variant, const State& ul, const State& ur,
                   const Vec3& normal, const GasProperties& gas) {
  check_unit_normal(normal);
  State f = central_normal_flux(ul, ur, normal, gas);
  if (variant == RiemannVariant::Central) return f;
  const State d = riemann_dissipation(variant, ul, ur, normal, gas);
  for (int v = 0; v < 5; ++v) f[v] -= 0.5 * d[v];
  return f;
}

double smagorinsky_viscosity(double rho, const GradientState& grad,
                             double delta, double cs) {
  if (!(delta > 0.0)) throw ConfigError("filter width must be positive");
  if (cs < 0.0) throw ConfigError("smagorinsky cs must be non-negative");
  double ss = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double sij = 0.5 * (grad[j][1 + i] + grad[i][1 + j]);
      ss += sij * sij;
    }
  return rho * (cs * delta) * (cs * delta) * std::sqrt(2.0 * ss);
}

Vec3 directional_wave_speeds(const State& u, const std::array<Vec3, 3>& ja,
                             const GasProperties& gas) {
  const Primitive prim = primitive_from_conservative(u, gas);
  const double c = sound_speed(prim, gas);
  Vec3 lambda;
  for (int i = 0; i < 3; ++i)
    lambda[i] = std::abs(dot(prim.v, ja[i])) + c * norm(ja[i]);
  return lambda;
}

double max_wave_speed(const State& u, const std::array<Vec3, 3>& ja,
                      const GasProperties& gas) {
  const Vec3 lambda = directional_wave_speeds(u, ja, gas);
  return std::max({lambda[0], lambda[1], lambda[2]});
}

TwoPointVariant to_two_point_variant(const std::string& name) {
  if (name == "standard" || name == "central") return TwoPointVariant::Central;
  if (name == "ducros") return TwoPointVariant::Ducros;
  if (name == "kennedy-gruber") return TwoPointVariant::KennedyGruber;
  if (name == "pirozzoli") return TwoPointVariant::Pirozzoli;
  if (name == "entropy-conserving") return TwoPointVariant::EntropyConserving;
  if (name == "chandrashekar") return TwoPointVariant::Chandrashekar;
  throw ConfigError("unknown split-form variant '" + name + "'");
}

RiemannVariant to_riemann_variant(const std::string& name) {
  if (name == "central") return RiemannVariant::Central;
  if (name == "lax-friedrichs") return RiemannVariant::LaxFriedrichs;
  if (name == "rusanov") return RiemannVariant::Rusanov;
  if (name == "roe") return RiemannVariant::Roe;
  throw ConfigError("unknown riemann solver '" + name + "'");
}

std::string to_string(TwoPointVariant v) {
  switch (v) {
    case TwoPointVariant::Central: return "standard";
    case TwoPointVariant::Ducros: return "ducros";
    case TwoPointVariant::KennedyGruber: return "kennedy-gruber";
    case TwoPointVariant::Pirozzoli: return "pirozzoli";
    case TwoPointVariant::EntropyConserving: return "entropy-conserving";
    case TwoPointVariant::Chandrashekar: return "chandrashekar";
  }
  return {};
}

std::string to_string(RiemannVariant v) {
  switch (v) {
    case RiemannVariant::Central: return "central";
    case RiemannVariant::LaxFriedrichs: return "lax-friedrichs";
    case RiemannVariant::Rusanov: return "rusanov";
    case RiemannVariant::Roe: return "roe";
  }
  return {};
}

}  // namespace dgsem
