#ifndef DGSEM_TIME_INTEGRATION_HPP
#define DGSEM_TIME_INTEGRATION_HPP

#include <functional>
#include <string>

#include "dgsem/field.hpp"
#include "dgsem/mesh.hpp"
#include "dgsem/physics.hpp"

namespace dgsem {

enum class RkMethod { RK3LowStorage, RK45LowStorage };

RkMethod to_rk_method(const std::string& name);
std::string to_string(RkMethod method);

struct RkCoefficients {
  std::vector<double> a;  // register recurrence
  std::vector<double> b;  // solution update
  std::vector<double> c;  // stage times
  int stages() const { return static_cast<int>(a.size()); }
};

/// Williamson RK3 and Carpenter-Kennedy RK4(5) 2N-storage coefficients.
const RkCoefficients& rk_coefficients(RkMethod method);

/// Two-register low-storage Runge-Kutta stepper. The evaluator must perform
/// acc += scale * R(u) without allocating solution-sized temporaries; the
/// stepper itself holds exactly one solution-sized register.
class LowStorageRK {
public:
  explicit LowStorageRK(RkMethod method) : method_(method) {}

  using ResidualFn =
      std::function<void(const SolutionField& u, double scale, SolutionField& acc)>;

  /// Advances u in place by dt; u.time moves to t + dt. Evaluator failures
  /// propagate annotated with the stage index.
  void step(SolutionField& u, double dt, const ResidualFn& residual);

  RkMethod method() const { return method_; }
  /// The single scratch register (structural audit hook for tests).
  const SolutionField& scratch() const { return register_; }

private:
  RkMethod method_;
  SolutionField register_;
};

/// dt = cfl / max over nodes of sum_i lambda_i (2 P_i + 1) / J, combined
/// harmonically with the viscous limit dfl / max of nu sum_i ((2 P_i + 1)
/// |Ja^i| / J)^2 when dfl > 0.
double compute_dt_cfl(const SolutionField& field, const MeshGeometry& geometry,
                      const GasProperties& gas, double cfl, double dfl);

}  // namespace dgsem

#endif
