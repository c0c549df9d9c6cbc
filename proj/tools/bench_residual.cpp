// Times the OpenMP two-phase residual evaluation against the serial
// reference orchestration on a Taylor-Green setup, and checks they agree
// to the bit.

#include <chrono>
#include <cstdio>

#include <CLI11.hpp>

#include "dgsem/parallel.hpp"
#include "dgsem/residual.hpp"
#include "dgsem/run.hpp"

using namespace dgsem;

namespace {

double time_evals(int repeats, const std::function<void()>& fn) {
  fn();  // warm up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
             .count() /
         repeats;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"residual kernel benchmark: serial reference vs OpenMP"};
  int cells = 6;
  int order = 4;
  int repeats = 20;
  int threads = max_threads();
  bool viscous = false;
  app.add_option("--cells", cells, "elements per direction");
  app.add_option("--order", order, "polynomial order");
  app.add_option("--repeats", repeats, "evaluations per timing");
  app.add_option("--threads", threads, "OpenMP worker count");
  app.add_flag("--viscous", viscous, "include BR1 gradients and viscous fluxes");
  CLI11_PARSE(app, argc, argv);

  MeshSpec spec;
  spec.counts = {cells, cells, cells};
  spec.lower = {0.0, 0.0, 0.0};
  spec.upper = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI};
  spec.periodic = {true, true, true};
  const Mesh mesh = build_box_mesh(spec);
  const OrderMap orders = OrderMap::uniform(mesh.n_elements(), {order, order, order});

  NumericsOptions options;
  options.nodes = NodeKind::GaussLobatto;
  options.volume = VolumeScheme::Split;
  options.split_variant = TwoPointVariant::Pirozzoli;
  options.riemann = RiemannVariant::Roe;
  if (viscous) options.gas.mu = 1e-2;

  DgOperator op(mesh, orders, options, {});

  InitialConditionSettings ic;
  ic.name = "taylor-green";
  ic.mach = 0.1;
  SolutionField u = initial_condition(ic, options.gas, mesh, op.geometry(), orders);
  SolutionField dudt_serial, dudt_parallel;

  const double t_serial = time_evals(
      repeats, [&] { op.spatial_residual_serial(u, dudt_serial); });

  set_max_threads(threads);
  const double t_parallel =
      time_evals(repeats, [&] { op.spatial_residual(u, dudt_parallel); });

  const double diff = field_max_abs_diff(dudt_serial, dudt_parallel);
  const std::size_t dofs = u.dof_count();
  std::printf("elements %d^3, order %d, %zu dofs%s\n", cells, order, dofs,
              viscous ? ", viscous" : "");
  std::printf("serial reference : %9.3f ms  (%7.1f Mdof/s)\n", 1e3 * t_serial,
              dofs / t_serial / 1e6);
  std::printf("openmp x%-2d       : %9.3f ms  (%7.1f Mdof/s)\n", threads,
              1e3 * t_parallel, dofs / t_parallel / 1e6);
  std::printf("speedup          : %6.2fx\n", t_serial / t_parallel);
  std::printf("max |serial - parallel| = %.3e (%s)\n", diff,
              diff == 0.0 ? "bitwise identical" : "MISMATCH");
  return diff == 0.0 ? 0 : 1;
}
