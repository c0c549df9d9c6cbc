#include "dgsem/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgsem/errors.hpp"
#include "dgsem/parallel.hpp"
#include "dgsem/tensor.hpp"

namespace dgsem {

namespace {

// Per-axis transfer matrix; exact modal truncation going down.
Matrix transfer_1d(int from_order, int to_order, NodeKind kind) {
  const NodalBasis& src = cached_basis(from_order, kind);
  if (to_order == from_order) return Matrix::Identity(src.n(), src.n());
  const NodalBasis& dst = cached_basis(to_order, kind);
  if (to_order > from_order) {
    std::vector<double> targets(dst.nodes.data(), dst.nodes.data() + dst.n());
    return interpolation_matrix(src, targets);
  }
  return dst.modal_backward * src.modal_forward.topRows(dst.n());
}

double element_norm(const ElementData& r, const ElementGeometry& geo,
                    NodeKind kind) {
  const auto ext = r.extents();
  const auto& b0 = cached_basis(r.orders[0], kind);
  const auto& b1 = cached_basis(r.orders[1], kind);
  const auto& b2 = cached_basis(r.orders[2], kind);
  double acc = 0.0;
  for (int k = 0; k < ext[2]; ++k)
    for (int j = 0; j < ext[1]; ++j)
      for (int i = 0; i < ext[0]; ++i) {
        const int q = r.node_index(i, j, k);
        const double w =
            b0.weights[i] * b1.weights[j] * b2.weights[k] * geo.jacobian[q];
        for (int v = 0; v < 5; ++v) {
          const double x = r.at(q, 5)[v];
          acc += w * x * x;
        }
      }
  return std::sqrt(acc);
}

int dof_count(const std::array<int, 3>& p) {
  return (p[0] + 1) * (p[1] + 1) * (p[2] + 1);
}

}  // namespace

std::vector<std::array<int, 3>> default_tau_candidates(const OrderMap& current) {
  int top = 0;
  for (const auto& p : current.orders)
    top = std::max({top, p[0], p[1], p[2]});
  std::vector<std::array<int, 3>> cands;
  for (int k = std::max(current.p_min, 0); k < top; ++k) {
    cands.push_back({k, k, k});
    if (k > current.p_min) {
      cands.push_back({k - 1, k, k});
      cands.push_back({k, k - 1, k});
      cands.push_back({k, k, k - 1});
    }
  }
  if (cands.empty())
    throw ConfigError("no coarser candidate orders available for tau estimation");
  return cands;
}

SolutionField project_solution(const SolutionField& field,
                               const OrderMap& new_orders, NodeKind kind) {
  if (new_orders.n_elements() != field.n_elements())
    throw DimensionError("project_solution: order map mismatch");
  SolutionField out = Field::zeros(new_orders, field.ncomp);
  out.time = field.time;
  parallel_for(field.elements.size(), [&](std::size_t e) {
    const ElementData& src = field.elements[e];
    ElementData& dst = out.elements[e];
    if (src.orders == dst.orders) {
      dst.values = src.values;
      return;
    }
    std::array<int, 3> ext = src.extents();
    std::vector<double> a = src.values, b;
    for (int axis = 0; axis < 3; ++axis) {
      if (dst.orders[axis] == src.orders[axis]) continue;
      const Matrix t = transfer_1d(src.orders[axis], dst.orders[axis], kind);
      std::array<int, 3> next = ext;
      next[axis] = dst.orders[axis] + 1;
      b.resize(static_cast<std::size_t>(next[0]) * next[1] * next[2] *
               field.ncomp);
      apply_along_axis(t, axis, ext, field.ncomp, a.data(), b.data());
      a.swap(b);
      ext = next;
    }
    dst.values = std::move(a);
  });
  return out;
}

TauEstimate tau_estimate(const SolutionField& field, const DgOperator& op,
                         const std::vector<std::array<int, 3>>& candidates) {
  const OrderMap& current = op.order_map();
  const int ne = field.n_elements();
  TauEstimate est;
  est.candidates = candidates;
  est.realized.assign(ne, {});
  est.tau.assign(ne, {});
  for (int e = 0; e < ne; ++e) {
    est.realized[e].assign(candidates.size(), current.orders[e]);
    est.tau[e].assign(candidates.size(),
                      std::numeric_limits<double>::quiet_NaN());
  }

  for (std::size_t c = 0; c < candidates.size(); ++c) {
    OrderMap injected = current;
    bool any = false;
    for (int e = 0; e < ne; ++e) {
      for (int d = 0; d < 3; ++d) {
        const int v = std::min(current.orders[e][d],
                               std::max(candidates[c][d], current.p_min));
        if (v != injected.orders[e][d]) any = true;
        injected.orders[e][d] = v;
      }
      if (candidates[c][0] > current.orders[e][0] &&
          candidates[c][1] > current.orders[e][1] &&
          candidates[c][2] > current.orders[e][2])
        throw OrderError("tau candidate exceeds the current order");
    }
    if (!any) continue;

    const SolutionField coarse =
        project_solution(field, injected, op.options().nodes);
    DgOperator coarse_op(op.mesh(), injected, op.options(),
                         op.boundary_conditions());
    SolutionField residual;
    coarse_op.spatial_residual(coarse, residual);
    for (int e = 0; e < ne; ++e) {
      if (injected.orders[e] == current.orders[e]) continue;  // not coarsened
      est.realized[e][c] = injected.orders[e];
      est.tau[e][c] = element_norm(residual.elements[e],
                                   coarse_op.geometry().elements[e],
                                   op.options().nodes);
    }
  }
  return est;
}

OrderMap select_orders(const TauEstimate& estimate, double threshold,
                       const OrderMap& current) {
  if (!(threshold > 0.0)) throw ConfigError("truncation error threshold must be positive");
  if (estimate.candidates.empty())
    throw ConfigError("empty candidate set in order selection");
  OrderMap result = current;
  const int ne = current.n_elements();
  for (int e = 0; e < ne; ++e) {
    // Smallest realized candidate meeting the threshold.
    bool found = false;
    std::array<int, 3> best = current.orders[e];
    for (std::size_t c = 0; c < estimate.candidates.size(); ++c) {
      const double tau = estimate.tau[e][c];
      if (std::isnan(tau) || tau > threshold) continue;
      const auto& cand = estimate.realized[e][c];
      if (!found || dof_count(cand) < dof_count(best) ||
          (dof_count(cand) == dof_count(best) && cand < best)) {
        best = cand;
        found = true;
      }
    }
    if (found) {
      result.orders[e] = best;
      continue;
    }
    // Extrapolate log tau vs the isotropic ladder.
    std::vector<double> xs, ys;
    for (std::size_t c = 0; c < estimate.candidates.size(); ++c) {
      const auto& cand = estimate.candidates[c];
      if (cand[0] != cand[1] || cand[1] != cand[2]) continue;
      const double tau = estimate.tau[e][c];
      if (std::isnan(tau) || tau <= 0.0) continue;
      xs.push_back(cand[0]);
      ys.push_back(std::log(tau));
    }
    int target = current.p_max;
    if (xs.size() >= 2) {
      const double n = static_cast<double>(xs.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double intercept = (sy - slope * sx) / n;
      if (slope < 0.0) {
        const double crossing = (std::log(threshold) - intercept) / slope;
        target = static_cast<int>(std::ceil(crossing - 1e-9));
      }
    }
    for (int d = 0; d < 3; ++d) {
      const int lo = current.orders[e][d];
      result.orders[e][d] = std::clamp(std::max(target, lo), current.p_min,
                                       current.p_max);
    }
  }
  return result;
}

AdaptationParams::Mode to_adaptation_mode(const std::string& name) {
  if (name == "none") return AdaptationParams::Mode::None;
  if (name == "feature") return AdaptationParams::Mode::Feature;
  if (name == "tau") return AdaptationParams::Mode::Tau;
  throw ConfigError("unknown adaptation mode '" + name + "'");
}

std::pair<SolutionField, OrderMap> adapt(const SolutionField& field,
                                         const DgOperator& op,
                                         const AdaptationParams& params) {
  const OrderMap& current = op.order_map();
  OrderMap next = current;
  next.p_min = params.p_min;
  next.p_max = params.p_max;

  if (params.mode == AdaptationParams::Mode::Feature) {
    const std::vector<double> sensor = feature_sensor(field, op.geometry());
    const double lo = std::log(params.sensor_low);
    const double hi = std::log(params.sensor_high);
    for (int e = 0; e < field.n_elements(); ++e) {
      int p = params.p_min;
      if (sensor[e] >= params.sensor_high) {
        p = params.p_max;
      } else if (sensor[e] > params.sensor_low) {
        const double t = (std::log(sensor[e]) - lo) / (hi - lo);
        p = params.p_min +
            static_cast<int>(std::lround(t * (params.p_max - params.p_min)));
      }
      next.orders[e] = {p, p, p};
    }
  } else if (params.mode == AdaptationParams::Mode::Tau) {
    OrderMap bounded = current;
    bounded.p_min = params.p_min;
    bounded.p_max = params.p_max;
    const auto candidates = default_tau_candidates(bounded);
    const TauEstimate est = tau_estimate(field, op, candidates);
    next = select_orders(est, params.threshold, bounded);
  } else {
    return {field, next};
  }

  return {project_solution(field, next, op.options().nodes), next};
}

}  // namespace dgsem
