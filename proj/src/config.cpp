#include "dgsem/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dgsem/errors.hpp"

namespace dgsem {

namespace {

std::string normalize_key(const std::string& raw) {
  std::string out;
  bool space = false;
  for (char ch : raw) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

struct Parser {
  std::vector<std::string> errors;

  void error(const std::string& msg) { errors.push_back(msg); }

  double to_real(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (...) {
      error("key '" + key + "': expected a real number, got '" + v + "'");
      return 0.0;
    }
  }

  long to_int(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (...) {
      error("key '" + key + "': expected an integer, got '" + v + "'");
      return 0;
    }
  }

  std::vector<double> to_reals(const std::string& key, const std::string& v,
                               std::size_t count) {
    std::istringstream in(v);
    std::vector<double> xs;
    double x;
    while (in >> x) xs.push_back(x);
    if (xs.size() != count) {
      error("key '" + key + "': expected " + std::to_string(count) +
            " numbers, got '" + v + "'");
      xs.assign(count, 0.0);
    }
    return xs;
  }
};

const std::vector<std::string>& block_keys() {
  static const std::vector<std::string> keys = {"type", "density", "velocity",
                                                "pressure"};
  return keys;
}

std::string nearest_key(const std::string& key,
                        const std::vector<std::string>& known) {
  int best = std::numeric_limits<int>::max();
  std::string suggestion;
  for (const auto& k : known) {
    const int d = levenshtein(key, k);
    if (d < best) {
      best = d;
      suggestion = k;
    }
  }
  return suggestion;
}

}  // namespace

const std::vector<std::string>& known_control_keys() {
  static const std::vector<std::string> keys = {
      "mesh elements", "mesh lower", "mesh upper", "mesh periodic",
      "mesh curvature", "curvature amplitude", "curvature wavenumber",
      "mapping degree", "boundary xmin", "boundary xmax", "boundary ymin",
      "boundary ymax", "boundary zmin", "boundary zmax", "polynomial order",
      "nodes", "split form", "riemann solver", "gamma", "gas constant",
      "prandtl", "viscosity", "smagorinsky cs", "enable gradients",
      "shock capturing", "svv kernel", "svv cutoff", "svv power",
      "artificial viscosity", "sensor low", "sensor high", "time integration",
      "explicit method", "cfl", "dfl", "dt", "final time", "max iterations",
      "padaptation mode", "padaptation interval", "truncation error threshold",
      "minimum order", "maximum order", "adaptation sensor low",
      "adaptation sensor high", "initial condition", "mach", "ic density",
      "ic velocity", "ic pressure", "vortex strength", "vortex radius",
      "vortex center", "output directory", "snapshot interval",
      "snapshot format", "visualization order", "monitor interval",
      "restart interval", "pressure probe",
  };
  return keys;
}

RunConfig parse_control_file(const std::string& text) {
  RunConfig cfg;
  Parser p;

  bool have_mesh = false, have_order = false, have_stop = false;
  bool split_set = false;
  // Boundary blocks hold primitives; the conservative state is materialized
  // after parsing, once gamma is known.
  struct BlockData {
    BoundaryCondition::Kind kind = BoundaryCondition::Kind::FreeStream;
    double density = 1.0, pressure = 1.0;
    Vec3 velocity{0.0, 0.0, 0.0};
  };
  std::map<std::string, BlockData> blocks;
  std::string block_name;  // inside a #define boundary block
  BlockData block;
  bool block_type_set = false;

  auto finish_block = [&]() {
    if (!block_type_set)
      p.error("boundary block '" + block_name + "' has no 'type' key");
    blocks[block_name] = block;
    block_name.clear();
    block_type_set = false;
    block = BlockData{};
  };

  std::istringstream stream(text);
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    const std::size_t bang = line.find('!');
    if (bang != std::string::npos) line.erase(bang);
    line = trim(line);
    if (line.empty()) continue;

    if (line[0] == '#') {
      std::istringstream in(line);
      std::string directive;
      in >> directive;
      directive = lower(directive);
      if (directive == "#define") {
        std::string what, name;
        in >> what >> name;
        if (lower(what) != "boundary" || name.empty()) {
          p.error("line " + std::to_string(lineno) +
                  ": expected '#define boundary <name>'");
          continue;
        }
        if (!block_name.empty())
          p.error("line " + std::to_string(lineno) +
                  ": nested boundary blocks are not allowed");
        block_name = lower(name);
      } else if (directive == "#end") {
        if (block_name.empty())
          p.error("line " + std::to_string(lineno) + ": '#end' outside a block");
        else
          finish_block();
      } else {
        p.error("line " + std::to_string(lineno) + ": unknown directive '" +
                directive + "'");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      p.error("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = normalize_key(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string value_l = lower(value);
    if (key.empty() || value.empty()) {
      p.error("line " + std::to_string(lineno) + ": empty key or value");
      continue;
    }

    if (!block_name.empty()) {
      if (key == "type") {
        try {
          block.kind = to_bc_kind(value_l);
          block_type_set = true;
        } catch (const ConfigError& e) {
          p.error(e.what());
        }
      } else if (key == "density") {
        block.density = p.to_real(key, value);
      } else if (key == "pressure") {
        block.pressure = p.to_real(key, value);
      } else if (key == "velocity") {
        const auto v = p.to_reals(key, value, 3);
        block.velocity = {v[0], v[1], v[2]};
      } else {
        p.error("unknown key '" + key + "' in boundary block; did you mean '" +
                nearest_key(key, block_keys()) + "'?");
      }
      continue;
    }

    try {
      if (key == "mesh elements") {
        const auto v = p.to_reals(key, value, 3);
        cfg.mesh.counts = {static_cast<int>(v[0]), static_cast<int>(v[1]),
                           static_cast<int>(v[2])};
        have_mesh = true;
      } else if (key == "mesh lower") {
        const auto v = p.to_reals(key, value, 3);
        cfg.mesh.lower = {v[0], v[1], v[2]};
      } else if (key == "mesh upper") {
        const auto v = p.to_reals(key, value, 3);
        cfg.mesh.upper = {v[0], v[1], v[2]};
      } else if (key == "mesh periodic") {
        cfg.mesh.periodic = {false, false, false};
        if (value_l == "all") {
          cfg.mesh.periodic = {true, true, true};
        } else if (value_l != "none") {
          std::istringstream in(value_l);
          std::string ax;
          while (in >> ax) {
            if (ax == "x") cfg.mesh.periodic[0] = true;
            else if (ax == "y") cfg.mesh.periodic[1] = true;
            else if (ax == "z") cfg.mesh.periodic[2] = true;
            else p.error("key 'mesh periodic': unknown axis '" + ax + "'");
          }
        }
      } else if (key == "mesh curvature") {
        if (value_l == "none") {
          cfg.mesh.curvature.kind = CurvatureSpec::Kind::None;
        } else if (value_l == "sinusoidal") {
          cfg.mesh.curvature.kind = CurvatureSpec::Kind::Sinusoidal;
        } else {
          p.error("key 'mesh curvature': unknown mapping '" + value_l + "'");
        }
      } else if (key == "curvature amplitude") {
        cfg.mesh.curvature.amplitude = p.to_real(key, value);
      } else if (key == "curvature wavenumber") {
        cfg.mesh.curvature.wavenumber = static_cast<int>(p.to_int(key, value));
      } else if (key == "mapping degree") {
        cfg.mesh.mapping_degree = static_cast<int>(p.to_int(key, value));
      } else if (key.rfind("boundary ", 0) == 0) {
        const std::string face = key.substr(9);
        const auto& names = face_names();
        auto it = std::find(names.begin(), names.end(), face);
        if (it == names.end()) {
          p.error("unknown key '" + key + "'; did you mean '" +
                  nearest_key(key, known_control_keys()) + "'?");
        } else {
          cfg.mesh.boundary_tags[it - names.begin()] = value_l;
        }
      } else if (key == "polynomial order") {
        std::istringstream in(value);
        std::vector<long> ps;
        long x;
        while (in >> x) ps.push_back(x);
        if (ps.size() == 1) {
          cfg.polynomial_order = {static_cast<int>(ps[0]),
                                  static_cast<int>(ps[0]),
                                  static_cast<int>(ps[0])};
          have_order = true;
        } else if (ps.size() == 3) {
          cfg.polynomial_order = {static_cast<int>(ps[0]),
                                  static_cast<int>(ps[1]),
                                  static_cast<int>(ps[2])};
          have_order = true;
        } else {
          p.error("key 'polynomial order': expected 1 or 3 integers");
        }
      } else if (key == "nodes") {
        if (value_l == "gauss") cfg.numerics.nodes = NodeKind::Gauss;
        else if (value_l == "gauss-lobatto")
          cfg.numerics.nodes = NodeKind::GaussLobatto;
        else p.error("key 'nodes': expected gauss or gauss-lobatto");
      } else if (key == "split form") {
        cfg.numerics.split_variant = to_two_point_variant(value_l);
        cfg.numerics.volume = VolumeScheme::Split;
        split_set = true;
      } else if (key == "riemann solver") {
        cfg.numerics.riemann = to_riemann_variant(value_l);
      } else if (key == "gamma") {
        cfg.numerics.gas.gamma = p.to_real(key, value);
      } else if (key == "gas constant") {
        cfg.numerics.gas.R = p.to_real(key, value);
      } else if (key == "prandtl") {
        cfg.numerics.gas.Pr = p.to_real(key, value);
      } else if (key == "viscosity") {
        cfg.numerics.gas.mu = p.to_real(key, value);
      } else if (key == "smagorinsky cs") {
        cfg.numerics.gas.smagorinsky_cs = p.to_real(key, value);
      } else if (key == "enable gradients") {
        cfg.numerics.need_gradients = (value_l == "true" || value_l == "yes");
      } else if (key == "shock capturing") {
        if (value_l == "svv") cfg.numerics.svv.enabled = true;
        else if (value_l == "none") cfg.numerics.svv.enabled = false;
        else p.error("key 'shock capturing': expected svv or none");
      } else if (key == "svv kernel") {
        cfg.numerics.svv.kernel.kind = to_kernel_kind(value_l);
      } else if (key == "svv cutoff") {
        cfg.numerics.svv.kernel.cutoff = static_cast<int>(p.to_int(key, value));
      } else if (key == "svv power") {
        cfg.numerics.svv.kernel.power = p.to_real(key, value);
      } else if (key == "artificial viscosity") {
        cfg.numerics.svv.mu_a = p.to_real(key, value);
      } else if (key == "sensor low") {
        cfg.numerics.svv.sensor_low = p.to_real(key, value);
      } else if (key == "sensor high") {
        cfg.numerics.svv.sensor_high = p.to_real(key, value);
      } else if (key == "time integration") {
        if (value_l != "explicit") {
          p.error("key 'time integration': '" + value_l +
                  "' is not available; only 'explicit' is supported "
                  "(implicit, bdf, rosenbrock and multigrid are out of scope)");
        }
      } else if (key == "explicit method") {
        cfg.time.method = to_rk_method(value_l);
      } else if (key == "cfl") {
        cfg.time.cfl = p.to_real(key, value);
      } else if (key == "dfl") {
        cfg.time.dfl = p.to_real(key, value);
      } else if (key == "dt") {
        cfg.time.dt = p.to_real(key, value);
      } else if (key == "final time") {
        cfg.time.final_time = p.to_real(key, value);
        have_stop = true;
      } else if (key == "max iterations") {
        cfg.time.max_iterations = p.to_int(key, value);
        have_stop = true;
      } else if (key == "padaptation mode") {
        cfg.adaptation.mode = to_adaptation_mode(value_l);
      } else if (key == "padaptation interval") {
        cfg.adaptation.interval = static_cast<int>(p.to_int(key, value));
      } else if (key == "truncation error threshold") {
        cfg.adaptation.threshold = p.to_real(key, value);
      } else if (key == "minimum order") {
        cfg.adaptation.p_min = static_cast<int>(p.to_int(key, value));
      } else if (key == "maximum order") {
        cfg.adaptation.p_max = static_cast<int>(p.to_int(key, value));
      } else if (key == "adaptation sensor low") {
        cfg.adaptation.sensor_low = p.to_real(key, value);
      } else if (key == "adaptation sensor high") {
        cfg.adaptation.sensor_high = p.to_real(key, value);
      } else if (key == "initial condition") {
        if (value_l != "uniform" && value_l != "isentropic-vortex" &&
            value_l != "taylor-green") {
          p.error("key 'initial condition': unknown name '" + value_l + "'");
        } else {
          cfg.initial.name = value_l;
        }
      } else if (key == "mach") {
        cfg.initial.mach = p.to_real(key, value);
      } else if (key == "ic density") {
        cfg.initial.density = p.to_real(key, value);
      } else if (key == "ic pressure") {
        cfg.initial.pressure = p.to_real(key, value);
      } else if (key == "ic velocity") {
        const auto v = p.to_reals(key, value, 3);
        cfg.initial.velocity = {v[0], v[1], v[2]};
      } else if (key == "vortex strength") {
        cfg.initial.vortex_strength = p.to_real(key, value);
      } else if (key == "vortex radius") {
        cfg.initial.vortex_radius = p.to_real(key, value);
      } else if (key == "vortex center") {
        const auto v = p.to_reals(key, value, 2);
        cfg.initial.vortex_center = {v[0], v[1]};
        cfg.initial.vortex_center_set = true;
      } else if (key == "output directory") {
        cfg.output.directory = value;
      } else if (key == "snapshot interval") {
        cfg.output.snapshot_interval = static_cast<int>(p.to_int(key, value));
      } else if (key == "snapshot format") {
        if (value_l != "point-cloud" && value_l != "vtk")
          p.error("key 'snapshot format': expected point-cloud or vtk");
        else
          cfg.output.format = value_l;
      } else if (key == "visualization order") {
        cfg.output.viz_order = static_cast<int>(p.to_int(key, value));
      } else if (key == "monitor interval") {
        cfg.output.monitor_interval = static_cast<int>(p.to_int(key, value));
      } else if (key == "restart interval") {
        cfg.output.restart_interval = static_cast<int>(p.to_int(key, value));
      } else if (key == "pressure probe") {
        const auto v = p.to_reals(key, value, 3);
        cfg.pressure_probe = Vec3{v[0], v[1], v[2]};
      } else {
        p.error("unknown key '" + key + "'; did you mean '" +
                nearest_key(key, known_control_keys()) + "'?");
      }
    } catch (const ConfigError& e) {
      p.error(e.what());
    }
  }
  if (!block_name.empty())
    p.error("boundary block '" + block_name + "' is missing '#end'");

  for (const auto& [name, data] : blocks) {
    BoundaryCondition bc;
    bc.kind = data.kind;
    if (data.kind == BoundaryCondition::Kind::FreeStream) {
      if (data.density <= 0.0 || data.pressure <= 0.0) {
        p.error("boundary '" + name + "': free-stream state is inadmissible");
        continue;
      }
      bc.state = conservative_from_primitive(data.density, data.velocity,
                                             data.pressure, cfg.numerics.gas);
    }
    cfg.boundary_conditions[name] = bc;
  }

  // Mandatory keys, itemized.
  if (!have_mesh) p.error("missing mandatory key 'mesh elements'");
  if (!have_order) p.error("missing mandatory key 'polynomial order'");
  if (!have_stop)
    p.error("missing mandatory key 'final time' or 'max iterations'");
  if (cfg.time.cfl <= 0.0 && cfg.time.dt <= 0.0)
    p.error("either 'cfl' or 'dt' must be positive");

  // Range validation.
  for (int d = 0; d < 3; ++d) {
    if (have_mesh && cfg.mesh.counts[d] < 1)
      p.error("mesh elements must be positive");
    if (have_order &&
        (cfg.polynomial_order[d] < 0 || cfg.polynomial_order[d] > max_order))
      p.error("polynomial order out of range [0, " +
              std::to_string(max_order) + "]");
  }
  if (cfg.adaptation.mode != AdaptationParams::Mode::None) {
    if (cfg.adaptation.interval <= 0)
      p.error("'padaptation interval' must be positive when adaptation is on");
    if (cfg.adaptation.p_min > cfg.adaptation.p_max)
      p.error("'minimum order' exceeds 'maximum order'");
  }
  try {
    cfg.numerics.gas.validate();
    cfg.numerics.svv.validate();
  } catch (const ConfigError& e) {
    p.error(e.what());
  }
  if (cfg.numerics.volume == VolumeScheme::Split &&
      cfg.numerics.nodes != NodeKind::GaussLobatto)
    p.error("split forms require Gauss-Lobatto: set 'nodes = gauss-lobatto'");
  (void)split_set;

  // Non-periodic faces need a resolvable boundary condition.
  for (int f = 0; f < 6; ++f) {
    const int axis = f / 2;
    if (cfg.mesh.periodic[axis]) continue;
    const std::string& tag = cfg.mesh.boundary_tags[f];
    if (!cfg.boundary_conditions.count(tag))
      p.error("face '" + face_names()[f] + "' carries tag '" + tag +
              "' but no '#define boundary " + tag + "' block exists");
  }

  if (!p.errors.empty()) {
    std::string msg = "control file errors:";
    for (const auto& e : p.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

}  // namespace dgsem
