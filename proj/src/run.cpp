#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "dgsem/errors.hpp"
#include "dgsem/parallel.hpp"
#include "dgsem/run.hpp"

namespace dgsem {

namespace {

std::string snapshot_prefix(const std::string& dir, long step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%08ld", step);
  return dir + "/" + buf;
}

std::string restart_name(const std::string& dir, long step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "restart_%08ld.dgsm", step);
  return dir + "/" + buf;
}

}  // namespace

RunReport run(const RunConfig& config, const RunOptions& options) {
  RunReport report;
  const auto wall_start = std::chrono::steady_clock::now();

  if (options.threads > 0) set_max_threads(options.threads);
  const std::string dir =
      options.output_dir.empty() ? config.output.directory : options.output_dir;

  try {
    std::filesystem::create_directories(dir);

    const Mesh mesh = build_box_mesh(config.mesh);
    OrderMap orders =
        OrderMap::uniform(mesh.n_elements(), config.polynomial_order);
    orders.p_min = config.adaptation.p_min;
    orders.p_max = config.adaptation.p_max;

    auto op = std::make_unique<DgOperator>(mesh, orders, config.numerics,
                                           config.boundary_conditions);

    SolutionField field;
    long step = 0;
    if (!options.restart_file.empty()) {
      RestartData data = load_restart(options.restart_file);
      if (data.field.n_elements() != mesh.n_elements())
        throw ConfigError("restart file does not match the mesh");
      step = data.step;
      OrderMap restored = orders;
      for (int e = 0; e < data.field.n_elements(); ++e)
        restored.orders[e] = data.field.elements[e].orders;
      if (!(restored == orders))
        op = std::make_unique<DgOperator>(mesh, restored, config.numerics,
                                          config.boundary_conditions);
      field = std::move(data.field);
    } else {
      field = initial_condition(config.initial, config.numerics.gas, mesh,
                                op->geometry(), orders);
    }

    LowStorageRK stepper(config.time.method);
    auto residual_fn = [&](const SolutionField& u, double scale,
                           SolutionField& acc) {
      op->add_scaled_residual(u, scale, acc);
    };

    std::vector<MonitorRecord> monitors;
    auto record_monitors = [&]() {
      monitors.push_back(
          compute_monitors(field, *op, step, config.pressure_probe));
    };
    record_monitors();
    write_snapshot(field, *op, snapshot_prefix(dir, step),
                   config.output.format, config.output.viz_order);

    const double final_time = config.time.final_time;
    const long max_iter = config.time.max_iterations;
    const double t_eps = 1e-12;

    try {
      while (true) {
        if (max_iter >= 0 && step >= max_iter) break;
        if (final_time >= 0.0 && field.time >= final_time - t_eps) break;

        double dt = config.time.cfl > 0.0
                        ? compute_dt_cfl(field, op->geometry(),
                                         config.numerics.gas, config.time.cfl,
                                         config.time.dfl)
                        : config.time.dt;
        if (final_time >= 0.0 && field.time + dt > final_time)
          dt = final_time - field.time;
        if (!(dt > 0.0)) break;

        stepper.step(field, dt, residual_fn);
        ++step;

        if (config.adaptation.mode != AdaptationParams::Mode::None &&
            config.adaptation.interval > 0 &&
            step % config.adaptation.interval == 0) {
          auto [projected, new_orders] = adapt(field, *op, config.adaptation);
          if (!(new_orders == op->order_map())) {
            op = std::make_unique<DgOperator>(mesh, new_orders, config.numerics,
                                              config.boundary_conditions);
            field = std::move(projected);
          }
        }

        if (config.output.monitor_interval > 0 &&
            step % config.output.monitor_interval == 0)
          record_monitors();
        if (config.output.snapshot_interval > 0 &&
            step % config.output.snapshot_interval == 0)
          write_snapshot(field, *op, snapshot_prefix(dir, step),
                         config.output.format, config.output.viz_order);
        if (config.output.restart_interval > 0 &&
            step % config.output.restart_interval == 0)
          save_restart(field, step, restart_name(dir, step));
      }
    } catch (const AdmissibilityError& err) {
      // Graceful stop: dump the last state with a diagnostic.
      save_restart(field, step, dir + "/failure_state.dgsm");
      write_monitors(monitors, dir + "/monitors.dat");
      report.steps = step;
      report.final_time = field.time;
      report.final_monitors = monitors.back();
      report.exit_code = 2;
      report.message = std::string("admissibility failure at step ") +
                       std::to_string(step) + ": " + err.what() +
                       " (state dumped to " + dir + "/failure_state.dgsm)";
      report.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        wall_start)
              .count();
      return report;
    }

    if (monitors.back().step != step) record_monitors();
    write_monitors(monitors, dir + "/monitors.dat");
    write_snapshot(field, *op, snapshot_prefix(dir, step),
                   config.output.format, config.output.viz_order);
    save_restart(field, step, dir + "/final_state.dgsm");

    report.steps = step;
    report.final_time = field.time;
    report.final_monitors = monitors.back();
    report.exit_code = 0;
    report.message = "completed " + std::to_string(step) + " steps to t = " +
                     std::to_string(field.time);
  } catch (const AdmissibilityError& err) {
    report.exit_code = 2;
    report.message = std::string("admissibility failure: ") + err.what();
  } catch (const ConfigError& err) {
    report.exit_code = 1;
    report.message = std::string("configuration error: ") + err.what();
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();
  return report;
}

}  // namespace dgsem
