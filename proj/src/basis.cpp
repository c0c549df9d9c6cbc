#include "dgsem/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "dgsem/errors.hpp"

namespace dgsem {

std::string to_string(NodeKind kind) {
  return kind == NodeKind::Gauss ? "gauss" : "gauss-lobatto";
}

LegendreValue legendre(int k, double x) {
  // Three-term recurrence for L_k together with the derivative recurrence
  // L'_k = L'_{k-2} + (2k-1) L_{k-1}.
  double lm2 = 1.0, lm1 = x;
  double dm2 = 0.0, dm1 = 1.0;
  if (k == 0) return {1.0, 0.0};
  if (k == 1) return {x, 1.0};
  double l = 0.0, d = 0.0;
  for (int n = 2; n <= k; ++n) {
    l = ((2.0 * n - 1.0) * x * lm1 - (n - 1.0) * lm2) / n;
    d = dm2 + (2.0 * n - 1.0) * lm1;
    lm2 = lm1;
    lm1 = l;
    dm2 = dm1;
    dm1 = d;
  }
  return {l, d};
}

namespace {

// Newton iteration with Chebyshev initial guesses; falls back to bisection
// on the Chebyshev bracket if Newton wanders out of it.
double refine_root(double guess, double lo, double hi, auto&& f) {
  constexpr double tol = 1e-15;
  double x = guess;
  for (int it = 0; it < 60; ++it) {
    auto [value, slope] = f(x);
    if (slope == 0.0) break;
    const double step = value / slope;
    x -= step;
    if (x < lo || x > hi) break;  // leave Newton, bisect instead
    if (std::abs(step) <= tol) return x;
  }
  // Bisection fallback.
  double a = lo, b = hi;
  double fa = f(a).value;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid).value;
    if (fm == 0.0 || 0.5 * (b - a) < tol) return mid;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Enforce exact bit symmetry so reversed node sets map onto themselves.
void symmetrize(Vector& nodes, Vector& weights) {
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void gauss_nodes(int order, Vector& nodes, Vector& weights) {
  const int n = order + 1;  // roots of L_n
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double guess = -std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * n));
    const double lo = -std::cos(M_PI * (2.0 * i) / (2.0 * n));
    const double hi = -std::cos(M_PI * (2.0 * i + 2.0) / (2.0 * n));
    const double x =
        refine_root(guess, lo, hi, [&](double t) { return legendre(n, t); });
    const auto [value, slope] = legendre(n, x);
    (void)value;
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * slope * slope);
  }
  symmetrize(nodes, weights);
}

void gauss_lobatto_nodes(int order, Vector& nodes, Vector& weights) {
  const int n = order + 1;  // endpoints plus roots of L'_order
  nodes.resize(n);
  weights.resize(n);
  nodes[0] = -1.0;
  nodes[n - 1] = 1.0;
  // q(x) = L'_P; q'(x) from the Legendre ODE:
  // (1-x^2) L''_P = 2x L'_P - P(P+1) L_P.
  auto q = [&](double x) -> LegendreValue {
    const auto lp = legendre(order, x);
    const double second =
        (2.0 * x * lp.derivative - order * (order + 1.0) * lp.value) /
        (1.0 - x * x);
    return {lp.derivative, second};
  };
  for (int i = 1; i < n - 1; ++i) {
    const double guess = -std::cos(M_PI * i / order);
    const double lo = -std::cos(M_PI * (i - 0.5) / order);
    const double hi = -std::cos(M_PI * (i + 0.5) / order);
    nodes[i] = refine_root(guess, lo, hi, q);
  }
  for (int i = 0; i < n; ++i) {
    const double l = legendre(order, nodes[i]).value;
    weights[i] = 2.0 / (order * (order + 1.0) * l * l);
  }
  symmetrize(nodes, weights);
}

Vector barycentric_weights(const Vector& nodes) {
  const int n = static_cast<int>(nodes.size());
  Vector w = Vector::Ones(n);
  for (int j = 1; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      w[k] *= nodes[k] - nodes[j];
      w[j] *= nodes[j] - nodes[k];
    }
  }
  for (int j = 0; j < n; ++j) w[j] = 1.0 / w[j];
  return w;
}

// Lagrange differentiation matrix from barycentric weights
// (Kopriva, Alg. 37). The diagonal uses negative-sum for exact row sums.
Matrix differentiation_matrix(const Vector& nodes, const Vector& bary) {
  const int n = static_cast<int>(nodes.size());
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

Vector lagrange_at(const Vector& nodes, const Vector& bary, double x) {
  const int n = static_cast<int>(nodes.size());
  Vector row = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (x == nodes[j]) {  // exact hit keeps interpolation at own nodes exact
      row[j] = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = bary[j] / (x - nodes[j]);
    row[j] = t;
    denom += t;
  }
  row /= denom;
  return row;
}

}  // namespace

NodalBasis build_basis(int order, NodeKind kind) {
  if (order < 0) throw OrderError("polynomial order must be non-negative");
  if (order > max_order)
    throw OrderError("polynomial order " + std::to_string(order) +
                     " exceeds the supported maximum of " +
                     std::to_string(max_order));
  if (kind == NodeKind::GaussLobatto && order < 1)
    throw OrderError("Gauss-Lobatto bases require order >= 1");

  NodalBasis b;
  b.order = order;
  b.kind = kind;
  if (kind == NodeKind::Gauss) {
    gauss_nodes(order, b.nodes, b.weights);
  } else {
    gauss_lobatto_nodes(order, b.nodes, b.weights);
  }
  b.bary_weights = barycentric_weights(b.nodes);
  b.diff = differentiation_matrix(b.nodes, b.bary_weights);

  const int n = b.n();
  Matrix m = b.weights.asDiagonal();
  Matrix minv = (1.0 / b.weights.array()).matrix().asDiagonal();
  b.weak_diff = minv * b.diff.transpose() * m;

  // Legendre Vandermonde: nodal values of a pure mode per column.
  Matrix vand(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) vand(i, k) = legendre(k, b.nodes[i]).value;
  b.modal_backward = vand;
  b.modal_forward = vand.partialPivLu().inverse();

  b.trace_left = lagrange_at(b.nodes, b.bary_weights, -1.0);
  b.trace_right = lagrange_at(b.nodes, b.bary_weights, 1.0);
  b.lift_left = (b.trace_left.array() / b.weights.array()).matrix();
  b.lift_right = (b.trace_right.array() / b.weights.array()).matrix();
  return b;
}

const NodalBasis& cached_basis(int order, NodeKind kind) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, NodalBasis> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(order, static_cast<int>(kind));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_basis(order, kind)).first;
  return it->second;
}

Matrix interpolation_matrix(const NodalBasis& basis, std::span<const double> targets) {
  Matrix m(static_cast<int>(targets.size()), basis.n());
  for (int i = 0; i < static_cast<int>(targets.size()); ++i) {
    const double x = targets[i];
    if (x < -1.0 || x > 1.0)
      throw RangeError("interpolation target " + std::to_string(x) +
                       " outside [-1, 1]; extrapolation refused");
    m.row(i) = lagrange_at(basis.nodes, basis.bary_weights, x).transpose();
  }
  return m;
}

Vector apply_diff(const NodalBasis& basis, std::span<const double> values) {
  if (static_cast<int>(values.size()) != basis.n())
    throw DimensionError("apply_diff: expected " + std::to_string(basis.n()) +
                         " values, got " + std::to_string(values.size()));
  Eigen::Map<const Vector> v(values.data(), basis.n());
  return basis.diff * v;
}

Vector modal_transform(const NodalBasis& basis, std::span<const double> nodal) {
  if (static_cast<int>(nodal.size()) != basis.n())
    throw DimensionError("modal_transform: length mismatch");
  Eigen::Map<const Vector> v(nodal.data(), basis.n());
  return basis.modal_forward * v;
}

Vector nodal_from_modal(const NodalBasis& basis, std::span<const double> coeffs) {
  if (static_cast<int>(coeffs.size()) != basis.n())
    throw DimensionError("nodal_from_modal: length mismatch");
  Eigen::Map<const Vector> v(coeffs.data(), basis.n());
  return basis.modal_backward * v;
}

}  // namespace dgsem
