#ifndef DGSEM_ADAPTATION_HPP
#define DGSEM_ADAPTATION_HPP

#include <vector>

#include "dgsem/residual.hpp"
#include "dgsem/svv.hpp"

namespace dgsem {

/// Integral of J |grad_xi rho|^2 per element; shared with the shock sensor.
inline std::vector<double> feature_sensor(const SolutionField& field,
                                          const MeshGeometry& geometry) {
  return shock_sensor(field, geometry);
}

/// Truncation-error estimates from injecting the solution into coarser
/// discretizations: one residual evaluation per candidate order pattern,
/// per-element quadrature- and J-weighted L2 norms recorded wherever the
/// candidate actually coarsens the element. Missing entries are NaN.
struct TauEstimate {
  std::vector<std::array<int, 3>> candidates;
  // realized[e][c]: the injected orders min(current, candidate)
  std::vector<std::vector<std::array<int, 3>>> realized;
  std::vector<std::vector<double>> tau;  // tau[e][c]
};

/// Isotropic ladder from p_min to max(current)-1 plus single-axis decrements
/// of each rung.
std::vector<std::array<int, 3>> default_tau_candidates(const OrderMap& current);

TauEstimate tau_estimate(const SolutionField& field, const DgOperator& op,
                         const std::vector<std::array<int, 3>>& candidates);

/// Per element the smallest realized candidate with tau <= threshold; when
/// none qualifies, a least-squares fit of log tau vs isotropic order picks
/// the extrapolated order, clamped to [current, p_max].
OrderMap select_orders(const TauEstimate& estimate, double threshold,
                       const OrderMap& current);

/// Per-axis transfer: interpolation on order increase, exact Legendre-modal
/// truncation (the L2 projection) on decrease. Constants survive exactly;
/// reference-measure integrals are preserved on decrease.
SolutionField project_solution(const SolutionField& field,
                               const OrderMap& new_orders, NodeKind kind);

struct AdaptationParams {
  enum class Mode { None, Feature, Tau };
  Mode mode = Mode::None;
  int interval = 0;
  double threshold = 1e-4;   // tau mode
  double sensor_low = 1e-6;  // feature mode ramp
  double sensor_high = 1e-2;
  int p_min = 1;
  int p_max = 6;
};

AdaptationParams::Mode to_adaptation_mode(const std::string& name);

/// Sensor/tau evaluation, order selection and conservative transfer. The
/// caller rebuilds the DgOperator from the returned order map.
std::pair<SolutionField, OrderMap> adapt(const SolutionField& field,
                                         const DgOperator& op,
                                         const AdaptationParams& params);

}  // namespace dgsem

#endif
