#include "dgsem/field.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>

#include "dgsem/errors.hpp"
#include "dgsem/parallel.hpp"

namespace dgsem {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = not set yet
}

int max_threads() {
  int n = g_max_threads.load();
  if (n > 0) return n;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_max_threads(int n) { g_max_threads.store(std::max(1, n)); }

OrderMap OrderMap::uniform(int n_elements, std::array<int, 3> p) {
  OrderMap m;
  m.orders.assign(n_elements, p);
  return m;
}

Field Field::zeros(const OrderMap& orders, int ncomp) {
  Field f;
  f.ncomp = ncomp;
  f.elements.resize(orders.orders.size());
  for (std::size_t e = 0; e < orders.orders.size(); ++e) {
    f.elements[e].orders = orders.orders[e];
    f.elements[e].values.assign(
        static_cast<std::size_t>(f.elements[e].node_count()) * ncomp, 0.0);
  }
  return f;
}

std::size_t Field::dof_count() const {
  std::size_t n = 0;
  for (const auto& e : elements) n += e.values.size();
  return n;
}

bool Field::same_shape(const Field& other) const {
  if (ncomp != other.ncomp || elements.size() != other.elements.size())
    return false;
  for (std::size_t e = 0; e < elements.size(); ++e)
    if (elements[e].orders != other.elements[e].orders) return false;
  return true;
}

void field_fill(Field& f, double value) {
  parallel_for(f.elements.size(), [&](std::size_t e) {
    std::fill(f.elements[e].values.begin(), f.elements[e].values.end(), value);
  });
}

void field_copy(const Field& src, Field& dst) {
  if (!src.same_shape(dst)) {
    dst = src;
    return;
  }
  dst.time = src.time;
  parallel_for(src.elements.size(), [&](std::size_t e) {
    dst.elements[e].values = src.elements[e].values;
  });
}

void field_scale(Field& f, double a) {
  parallel_for(f.elements.size(), [&](std::size_t e) {
    for (double& v : f.elements[e].values) v *= a;
  });
}

void field_axpy(double a, const Field& x, Field& y) {
  if (!x.same_shape(y)) throw DimensionError("field_axpy: shape mismatch");
  parallel_for(x.elements.size(), [&](std::size_t e) {
    const auto& xs = x.elements[e].values;
    auto& ys = y.elements[e].values;
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] += a * xs[i];
  });
}

double field_max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& e : f.elements)
    for (double v : e.values) m = std::max(m, std::abs(v));
  return m;
}

double field_max_abs_diff(const Field& a, const Field& b) {
  assert(a.same_shape(b));
  double m = 0.0;
  for (std::size_t e = 0; e < a.elements.size(); ++e)
    for (std::size_t i = 0; i < a.elements[e].values.size(); ++i)
      m = std::max(m, std::abs(a.elements[e].values[i] - b.elements[e].values[i]));
  return m;
}

}  // namespace dgsem
