#ifndef DGSEM_CONFIG_HPP
#define DGSEM_CONFIG_HPP

#include <map>
#include <optional>
#include <string>

#include "dgsem/adaptation.hpp"
#include "dgsem/mesh.hpp"
#include "dgsem/residual.hpp"
#include "dgsem/time_integration.hpp"

namespace dgsem {

struct TimeSettings {
  RkMethod method = RkMethod::RK3LowStorage;
  double cfl = 0.0;  // 0 means fixed dt
  double dt = 0.0;
  double dfl = 0.0;
  double final_time = -1.0;    // < 0: not set
  long max_iterations = -1;    // < 0: not set
};

struct OutputSettings {
  std::string directory = "output";
  int snapshot_interval = 0;  // 0: only initial/final snapshots
  std::string format = "point-cloud";  // or "vtk"
  int viz_order = -1;  // -1: element order
  int monitor_interval = 1;
  int restart_interval = 0;  // 0: no restart dumps
};

struct InitialConditionSettings {
  std::string name = "uniform";
  double density = 1.0;
  Vec3 velocity{0.0, 0.0, 0.0};
  double pressure = 1.0;
  double mach = 0.1;            // taylor-green
  double vortex_strength = 1.0; // isentropic vortex
  double vortex_radius = 1.0;
  std::array<double, 2> vortex_center{0.0, 0.0};
  bool vortex_center_set = false;
};

/// Parsed control file.
struct RunConfig {
  MeshSpec mesh;
  std::array<int, 3> polynomial_order{3, 3, 3};
  NumericsOptions numerics;
  TimeSettings time;
  AdaptationParams adaptation;
  OutputSettings output;
  InitialConditionSettings initial;
  std::map<std::string, BoundaryCondition> boundary_conditions;
  std::optional<Vec3> pressure_probe;
};

/// Grammar: one `key = value` per line, `!` starts a comment, keys are
/// case-insensitive with internal spaces, `#define boundary <name>` ...
/// `#end` blocks declare boundary conditions. Unknown keys are hard errors
/// carrying the nearest known key; missing mandatory keys are itemized.
RunConfig parse_control_file(const std::string& text);

/// The ordered list of keys the parser accepts (documentation helper).
const std::vector<std::string>& known_control_keys();

}  // namespace dgsem

#endif
