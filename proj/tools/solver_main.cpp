#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "dgsem/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"High-order discontinuous Galerkin spectral element solver"};
  std::string control_path;
  int threads = 0;
  std::string output_dir;
  std::string restart_file;
  app.add_option("control", control_path, "control file (*.control)")
      ->required();
  app.add_option("--threads", threads, "worker count (default: OMP_NUM_THREADS)");
  app.add_option("--output-dir", output_dir, "override the output directory");
  app.add_option("--restart", restart_file, "resume from a restart file");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(control_path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open control file '%s'\n",
                 control_path.c_str());
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  dgsem::RunConfig config;
  try {
    config = dgsem::parse_control_file(buffer.str());
  } catch (const dgsem::ConfigError& err) {
    std::fprintf(stderr, "%s\n", err.what());
    return 1;
  }

  dgsem::RunOptions options;
  options.threads = threads;
  options.output_dir = output_dir;
  options.restart_file = restart_file;

  const dgsem::RunReport report = dgsem::run(config, options);
  std::printf("%s\n", report.message.c_str());
  if (report.exit_code == 0) {
    std::printf("steps: %ld  final time: %.6f  wall: %.2fs\n", report.steps,
                report.final_time, report.wall_seconds);
    std::printf("kinetic energy: %.12e  entropy: %.12e  max residual: %.3e\n",
                report.final_monitors.kinetic_energy,
                report.final_monitors.total_entropy,
                report.final_monitors.max_residual);
  }
  return report.exit_code;
}
