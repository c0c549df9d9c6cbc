#ifndef DGSEM_RUN_HPP
#define DGSEM_RUN_HPP

#include <optional>
#include <string>
#include <vector>

#include "dgsem/config.hpp"

namespace dgsem {

SolutionField initial_condition(const InitialConditionSettings& ic,
                                const GasProperties& gas, const Mesh& mesh,
                                const MeshGeometry& geometry,
                                const OrderMap& orders);

struct MonitorRecord {
  double time = 0.0;
  long step = 0;
  double kinetic_energy = 0.0;
  double total_entropy = 0.0;
  double entropy_production = 0.0;
  double max_residual = 0.0;
  double min_density = 0.0;
  double min_pressure = 0.0;
  std::optional<double> probe_pressure;
};

/// Quadrature monitors; entropy production and max residual come from a
/// fresh residual evaluation.
MonitorRecord compute_monitors(const SolutionField& field, const DgOperator& op,
                               long step, const std::optional<Vec3>& probe);

/// Deterministic 17-significant-digit table, one header row.
void write_monitors(const std::vector<MonitorRecord>& records,
                    const std::string& path);

/// Resamples every element to equispaced points of the visualization order.
/// format: "point-cloud" (one text table) or "vtk" (one legacy
/// structured-points file per element, prefix_el<id>.vtk).
void write_snapshot(const SolutionField& field, const DgOperator& op,
                    const std::string& prefix, const std::string& format,
                    int viz_order);

/// Flat little-endian binary state dump ("DGSM" magic, 64-bit floats).
void save_restart(const SolutionField& field, long step,
                  const std::string& path);
struct RestartData {
  SolutionField field;
  long step = 0;
};
RestartData load_restart(const std::string& path);

struct RunOptions {
  int threads = 0;  // 0: keep the environment's default
  std::string output_dir;  // overrides the control file when non-empty
  std::string restart_file;
};

struct RunReport {
  long steps = 0;
  double final_time = 0.0;
  double wall_seconds = 0.0;
  MonitorRecord final_monitors;
  int exit_code = 0;  // 0 ok, 1 config error, 2 admissibility failure
  std::string message;
};

/// Main loop: step, monitors, adaptation, snapshots and restart dumps until
/// final time or the iteration cap. Admissibility failures stop the run
/// gracefully, dumping the last state.
RunReport run(const RunConfig& config, const RunOptions& options = {});

}  // namespace dgsem

#endif
