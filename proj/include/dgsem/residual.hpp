#ifndef DGSEM_RESIDUAL_HPP
#define DGSEM_RESIDUAL_HPP

#include <map>
#include <string>
#include <vector>

#include "dgsem/field.hpp"
#include "dgsem/mesh.hpp"
#include "dgsem/mortar.hpp"
#include "dgsem/physics.hpp"
#include "dgsem/svv.hpp"

namespace dgsem {

struct BoundaryCondition {
  enum class Kind { Periodic, FreeStream, NoSlipAdiabaticWall, InviscidWall };
  Kind kind = Kind::FreeStream;
  State state{1.0, 0.0, 0.0, 0.0, 2.5};  // FreeStream exterior state
};

BoundaryCondition::Kind to_bc_kind(const std::string& name);
std::string to_string(BoundaryCondition::Kind kind);

/// Exterior ghost state seen through a boundary face with outward normal n.
State boundary_state(const BoundaryCondition& bc, const State& interior,
                     const Vec3& n, const GasProperties& gas);

enum class VolumeScheme { Weak, Split };

struct NumericsOptions {
  NodeKind nodes = NodeKind::Gauss;
  VolumeScheme volume = VolumeScheme::Weak;
  TwoPointVariant split_variant = TwoPointVariant::Central;
  RiemannVariant riemann = RiemannVariant::LaxFriedrichs;
  GasProperties gas;
  bool need_gradients = false;  // forced on by viscosity, Smagorinsky or SVV
  SvvConfig svv;

  bool viscous() const {
    return gas.mu > 0.0 || gas.smagorinsky_cs > 0.0 || svv.enabled;
  }
  bool gradients() const { return need_gradients || viscous(); }
};

/// Semi-discrete DGSEM operator bound to one (mesh, order map, numerics)
/// triple: BR1 gradients, weak- or split-form volume integrals, mortar
/// interface fluxes and boundary conditions. Metrics and mortars are built
/// once in the constructor; evaluations reuse internal buffers, so a given
/// instance runs one evaluation at a time (the element/face loops inside an
/// evaluation are OpenMP-parallel with a fixed per-element accumulation
/// order, making results independent of the worker count).
class DgOperator {
public:
  DgOperator(const Mesh& mesh, OrderMap orders, NumericsOptions options,
             std::map<std::string, BoundaryCondition> bcs);

  /// dudt = M^{-1} (surface + volume) / J; two-phase OpenMP evaluation.
  /// face_production, when given, receives the per-interior-face entropy
  /// production of the interface flux (the Tadmor jump contribution).
  void spatial_residual(const SolutionField& u, SolutionField& dudt,
                        std::vector<double>* face_production = nullptr) const;

  /// acc += scale * dudt(u): the low-storage Runge-Kutta path. Allocates no
  /// solution-sized temporaries.
  void add_scaled_residual(const SolutionField& u, double scale,
                           SolutionField& acc) const;

  /// Reference implementation: identical per-face/per-element kernels run
  /// by plain sequential loops. Bitwise-equal to spatial_residual.
  void spatial_residual_serial(const SolutionField& u,
                               SolutionField& dudt) const;

  /// Evaluates only parts of the operator (test hook).
  void residual_terms(const SolutionField& u, SolutionField& dudt, bool volume,
                      bool surface) const;

  /// BR1 gradients of the gradient-variable set (rho, v, T) and, with SVV
  /// enabled, of the entropy variables: component layout g*3 + direction.
  Field compute_gradients(const SolutionField& u) const;

  const Mesh& mesh() const { return *mesh_; }
  const OrderMap& order_map() const { return orders_; }
  const MeshGeometry& geometry() const { return geometry_; }
  const NumericsOptions& options() const { return options_; }
  const std::map<std::string, BoundaryCondition>& boundary_conditions() const {
    return bcs_;
  }
  const Mortar& face_mortar(int face) const { return faces_[face].mortar; }
  /// Outward unit normal and surface Jacobian at the mortar nodes (test hook).
  const std::vector<double>& face_normals(int face) const {
    return faces_[face].normal;
  }
  const std::vector<double>& face_surface_jacobian(int face) const {
    return faces_[face].surfj;
  }
  double filter_width(int e) const { return filter_width_[e]; }
  int gradient_vars() const { return n_gradvars_; }

private:
  struct FaceCoupling {
    Mortar mortar;
    std::array<int, 2> ext{1, 1};  // mortar extents
    std::vector<double> normal;    // 3 per mortar node, outward from left
    std::vector<double> surfj;     // per mortar node
    std::vector<double> wq;        // face quadrature weight per mortar node
    int bc = -1;                   // index into bc_table_, -1 interior
    // evaluation buffers
    std::vector<double> flux;   // 5 per mortar node, left-outward F* . n Js
    std::vector<double> qmean;  // n_gradvars per mortar node
  };

  template <class Loop>
  void evaluate(const SolutionField& u, double scale, SolutionField* dudt,
                SolutionField* acc, std::vector<double>* face_production,
                bool volume_terms, bool surface_terms, const Loop& loop) const;

  void build_face(int f);
  void face_gradient_means(int f, const SolutionField& u) const;
  void element_gradient(int e, const SolutionField& u) const;
  void face_flux(int f, const SolutionField& u, double* production) const;
  void element_residual(int e, const SolutionField& u, double* out,
                        bool volume_terms, bool surface_terms) const;
  void side_trace(const ElementData& el, int ncomp, int local_face,
                  double* out) const;
  void gradient_state_at(const double* gnode, GradientState& grad) const;
  double eddy_viscosity(int e, const State& u, const GradientState& grad) const;

  const Mesh* mesh_;
  OrderMap orders_;
  NumericsOptions options_;
  std::map<std::string, BoundaryCondition> bcs_;
  std::vector<BoundaryCondition> bc_table_;
  MeshGeometry geometry_;
  // Face geometry is immutable after construction; the flux/qmean buffers
  // inside are per-evaluation scratch.
  mutable std::vector<FaceCoupling> faces_;
  std::vector<double> filter_width_;
  int n_gradvars_ = 0;

  // Evaluation workspaces (one evaluation at a time).
  mutable Field gradients_;
  mutable Field svv_flux_;
  mutable std::vector<double> svv_mu_;
  mutable std::vector<double> svv_theta_;
};

}  // namespace dgsem

#endif
