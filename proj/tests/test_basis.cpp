#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dgsem/basis.hpp"
#include "dgsem/errors.hpp"

using namespace dgsem;

namespace {

// Exact integral of x^k over [-1, 1].
double monomial_integral(int k) { return (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0; }

double quadrature_of_monomial(const NodalBasis& b, int k) {
  double acc = 0.0;
  for (int i = 0; i < b.n(); ++i)
    acc += b.weights[i] * std::pow(b.nodes[i], k);
  return acc;
}

// Independent bisection root finder for Legendre polynomials.
double legendre_root_by_bisection(int n, double lo, double hi) {
  double flo = legendre(n, lo).value;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = legendre(n, mid).value;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("pinned low-order node values") {
  // P=0 Gauss: midpoint rule.
  const NodalBasis g0 = build_basis(0, NodeKind::Gauss);
  CHECK(g0.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g0.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

  // P=1 Gauss: roots of L_2 found independently by bisection.
  const NodalBasis g1 = build_basis(1, NodeKind::Gauss);
  const double root = legendre_root_by_bisection(2, 0.1, 0.9);
  CHECK(g1.nodes[0] == doctest::Approx(-root).epsilon(1e-14));
  CHECK(g1.nodes[1] == doctest::Approx(root).epsilon(1e-14));
  CHECK(g1.nodes[1] == doctest::Approx(0.5773502692).epsilon(1e-9));
  // Weights from exactness on {1, x^2}: w0 + w1 = 2, symmetric.
  CHECK(g1.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g1.weights[1] == doctest::Approx(1.0).epsilon(1e-14));

  // P=2 Gauss-Lobatto: endpoints plus the center; weights from
  // moment matching (w0 = w2, 2 w0 + w1 = 2, 2 w0 = 2/3).
  const NodalBasis gl2 = build_basis(2, NodeKind::GaussLobatto);
  CHECK(gl2.nodes[0] == doctest::Approx(-1.0));
  CHECK(gl2.nodes[1] == doctest::Approx(0.0));
  CHECK(gl2.nodes[2] == doctest::Approx(1.0));
  CHECK(gl2.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(gl2.weights[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(gl2.weights[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("order validation") {
  CHECK_THROWS_AS(build_basis(0, NodeKind::GaussLobatto), OrderError);
  CHECK_THROWS_AS(build_basis(-1, NodeKind::Gauss), OrderError);
  CHECK_THROWS_AS(build_basis(max_order + 1, NodeKind::Gauss), OrderError);
}

TEST_CASE("weights sum to the interval measure and nodes are symmetric") {
  for (int p = 0; p <= 12; ++p) {
    for (NodeKind kind : {NodeKind::Gauss, NodeKind::GaussLobatto}) {
      if (kind == NodeKind::GaussLobatto && p < 1) continue;
      const NodalBasis b = build_basis(p, kind);
      CHECK(b.weights.sum() == doctest::Approx(2.0).epsilon(1e-13));
      for (int i = 0; i <= p; ++i) {
        CHECK(b.nodes[i] == doctest::Approx(-b.nodes[p - i]).epsilon(1e-13));
        CHECK(b.weights[i] > 0.0);
        if (i > 0) CHECK(b.nodes[i] > b.nodes[i - 1]);
      }
    }
  }
}

TEST_CASE("quadrature exactness degrees against analytic moments") {
  for (int p = 0; p <= 10; ++p) {
    const NodalBasis g = build_basis(p, NodeKind::Gauss);
    for (int k = 0; k <= 2 * p + 1; ++k)
      CHECK(quadrature_of_monomial(g, k) ==
            doctest::Approx(monomial_integral(k)).epsilon(1e-12));
    if (p >= 1) {
      const NodalBasis gl = build_basis(p, NodeKind::GaussLobatto);
      for (int k = 0; k <= 2 * p - 1; ++k)
        CHECK(quadrature_of_monomial(gl, k) ==
              doctest::Approx(monomial_integral(k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("differentiation matrix reproduces monomial derivatives") {
  for (NodeKind kind : {NodeKind::Gauss, NodeKind::GaussLobatto}) {
    for (int p = (kind == NodeKind::Gauss ? 0 : 1); p <= 10; ++p) {
      const NodalBasis b = build_basis(p, kind);
      for (int k = 0; k <= p; ++k) {
        std::vector<double> f(b.n());
        for (int i = 0; i < b.n(); ++i) f[i] = std::pow(b.nodes[i], k);
        const Vector df = apply_diff(b, f);
        for (int i = 0; i < b.n(); ++i) {
          const double exact = k == 0 ? 0.0 : k * std::pow(b.nodes[i], k - 1);
          CHECK(df[i] == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
        }
      }
      // Row sums vanish: constants are annihilated.
      for (int i = 0; i < b.n(); ++i)
        CHECK(b.diff.row(i).sum() == doctest::Approx(0.0).scale(1e12));
    }
  }
}

TEST_CASE("apply_diff pinned examples and dimension error") {
  const NodalBasis b = build_basis(1, NodeKind::GaussLobatto);
  const Vector d = apply_diff(b, std::vector<double>{0.0, 2.0});
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(apply_diff(b, std::vector<double>{1.0, 2.0, 3.0}),
                  DimensionError);
}

TEST_CASE("SBP property on Gauss-Lobatto: Q + Q^T = B") {
  for (int p = 1; p <= 10; ++p) {
    const NodalBasis b = build_basis(p, NodeKind::GaussLobatto);
    Matrix q = b.weights.asDiagonal() * b.diff;
    Matrix s = q + Matrix(q.transpose());
    Matrix expected = Matrix::Zero(b.n(), b.n());
    expected(0, 0) = -1.0;
    expected(b.n() - 1, b.n() - 1) = 1.0;
    CHECK((s - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("generalized SBP for Gauss nodes with boundary interpolants") {
  // M D + (M D)^T = l(1) l(1)^T - l(-1) l(-1)^T holds for Gauss nodes too.
  for (int p = 1; p <= 8; ++p) {
    const NodalBasis b = build_basis(p, NodeKind::Gauss);
    Matrix q = b.weights.asDiagonal() * b.diff;
    Matrix s = q + Matrix(q.transpose());
    Matrix expected = b.trace_right * b.trace_right.transpose() -
                      b.trace_left * b.trace_left.transpose();
    CHECK((s - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("modal transform round trip and pure modes") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (NodeKind kind : {NodeKind::Gauss, NodeKind::GaussLobatto}) {
    for (int p = (kind == NodeKind::Gauss ? 0 : 1); p <= 10; ++p) {
      const NodalBasis b = build_basis(p, kind);

      // Constant -> only L_0.
      std::vector<double> ones(b.n(), 1.0);
      const Vector c0 = modal_transform(b, ones);
      CHECK(c0[0] == doctest::Approx(1.0).epsilon(1e-12));
      for (int k = 1; k <= p; ++k)
        CHECK(c0[k] == doctest::Approx(0.0).scale(1e12));

      // Sampled L_k -> unit coefficient vector.
      for (int k = 0; k <= p; ++k) {
        std::vector<double> lk(b.n());
        for (int i = 0; i < b.n(); ++i) lk[i] = legendre(k, b.nodes[i]).value;
        const Vector ck = modal_transform(b, lk);
        for (int m = 0; m <= p; ++m)
          CHECK(ck[m] == doctest::Approx(m == k ? 1.0 : 0.0).scale(1e12));
      }

      // Random round trip.
      std::vector<double> f(b.n());
      for (double& x : f) x = dist(rng);
      const Vector coef = modal_transform(b, f);
      const Vector back =
          nodal_from_modal(b, std::span<const double>(coef.data(), coef.size()));
      for (int i = 0; i < b.n(); ++i)
        CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(modal_transform(build_basis(2, NodeKind::Gauss),
                                  std::vector<double>{1.0, 2.0}),
                  DimensionError);
}

TEST_CASE("interpolation matrix: identity at own nodes, partition of unity") {
  const NodalBasis b = build_basis(4, NodeKind::Gauss);
  std::vector<double> own(b.nodes.data(), b.nodes.data() + b.n());
  const Matrix id = interpolation_matrix(b, own);
  CHECK((id - Matrix::Identity(b.n(), b.n())).cwiseAbs().maxCoeff() == 0.0);

  std::vector<double> targets = {-1.0, -0.3,  0.123, 0.77, 1.0};
  const Matrix m = interpolation_matrix(b, targets);
  for (int i = 0; i < m.rows(); ++i)
    CHECK(m.row(i).sum() == doctest::Approx(1.0).epsilon(1e-13));

  // P=1 Gauss at the center: linear Lagrange gives {1/2, 1/2}.
  const NodalBasis g1 = build_basis(1, NodeKind::Gauss);
  const Matrix half = interpolation_matrix(g1, std::vector<double>{0.0});
  CHECK(half(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half(0, 1) == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(interpolation_matrix(b, std::vector<double>{1.5}), RangeError);
}

TEST_CASE("interpolation commutes with differentiation on polynomials") {
  const NodalBasis src = build_basis(5, NodeKind::GaussLobatto);
  const NodalBasis dst = build_basis(8, NodeKind::GaussLobatto);
  std::vector<double> targets(dst.nodes.data(), dst.nodes.data() + dst.n());
  const Matrix interp = interpolation_matrix(src, targets);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  // Random polynomial of degree <= 5 sampled at source nodes.
  std::array<double, 6> coef;
  for (double& c : coef) c = dist(rng);
  Vector f(src.n());
  for (int i = 0; i < src.n(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < 6; ++k) acc += coef[k] * std::pow(src.nodes[i], k);
    f[i] = acc;
  }
  const Vector a = dst.diff * (interp * f);
  const Vector b = interp * (src.diff * f);
  for (int i = 0; i < dst.n(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-11).scale(1.0));
}

TEST_CASE("basis cache returns stable references") {
  const NodalBasis& a = cached_basis(6, NodeKind::GaussLobatto);
  const NodalBasis& b = cached_basis(6, NodeKind::GaussLobatto);
  CHECK(&a == &b);
  CHECK(a.order == 6);
}
