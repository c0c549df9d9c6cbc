#ifndef DGSEM_SVV_HPP
#define DGSEM_SVV_HPP

#include <array>
#include <vector>

#include "dgsem/field.hpp"
#include "dgsem/mesh.hpp"
#include "dgsem/physics.hpp"

namespace dgsem {

/// Frequency-dependent attenuation applied to the dissipation flux in
/// Legendre modal space. F_0 = 1 (the mean passes), F_k non-increasing.
struct FilterKernel {
  enum class Kind { Identity, Tadmor, Exponential };
  Kind kind = Kind::Identity;
  int cutoff = 1;      // first attenuated mode index m
  double power = 2.0;  // exponential kernel shape parameter

  /// Per-mode factors F_k for k = 0..order.
  Vector attenuation(int order) const;
};

FilterKernel::Kind to_kernel_kind(const std::string& name);
std::string to_string(FilterKernel::Kind kind);

struct SvvConfig {
  bool enabled = false;
  double mu_a = 0.0;         // artificial viscosity scale
  double sensor_low = 1e-4;  // ramp start
  double sensor_high = 1e-2; // full dissipation above this
  FilterKernel kernel;

  void validate() const;
};

/// Smoothstep blend of a sensor value: `mu` ramps 0 -> mu_a, and
/// `toward_identity` in [0,1] interpolates the kernel to the identity
/// (non-filtered dissipation) in troubled elements.
struct SvvBlend {
  double mu = 0.0;
  double toward_identity = 0.0;
};
SvvBlend blend_artificial_viscosity(double sensor, const SvvConfig& config);

/// Integral of J |grad_xi rho|^2 per element (element quadrature; the
/// reference-space density gradient of the nodal interpolant).
std::vector<double> shock_sensor(const SolutionField& field,
                                 const MeshGeometry& geometry);

/// No-pivot LDL^T of a symmetric positive semidefinite matrix with
/// zero-clamped tiny pivots. Throws NumericalValidityError when a pivot is
/// negative beyond the tolerance. b = l * diag(d) * l^T with l unit lower.
void ldlt_semidefinite(const Matrix& b, Matrix& l, Vector& d,
                       double tol = 1e-12);

/// The Navier-Stokes viscous flux operator expressed in entropy-variable
/// gradients, scaled by mu: flux(dir*5+i) = sum_j B(dir*5+i, d2*5+j) G(d2*5+j)
/// with G = grad w in direction-major layout. Symmetric positive
/// semidefinite on admissible states.
Matrix entropy_flux_matrix(const State& u, double mu, const GasProperties& gas);

/// Filtered artificial flux of one element:
///   F_a = (1/sqrt(J)) L' sqrt(D) Filter( sqrt(J D) L'^T G )
/// with B = L' D L'^T per node and the filter acting mode-wise per axis.
/// gw: entropy gradients, direction-major 15 per node. fa out: direction-major
/// 15 per node. mu <= 0 yields zeros.
void svv_filtered_flux(const std::array<int, 3>& orders, NodeKind kind,
                       const double* u, const double* gw, const double* jac,
                       double mu, double toward_identity,
                       const FilterKernel& kernel, const GasProperties& gas,
                       double* fa);

}  // namespace dgsem

#endif
