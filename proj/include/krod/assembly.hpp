#pragma once

#include <krod/forces.hpp>
#include <krod/kinematics.hpp>
#include <krod/quadrature.hpp>
#include <krod/spline.hpp>
#include <krod/types.hpp>

#include <vector>

namespace krod {

/// End conditions of a rod; removal adds the outlier rows at both ends.
struct BoundarySpec {
    BoundaryKind start = BoundaryKind::Clamped;
    BoundaryKind end = BoundaryKind::Free;
    bool outlier_removal = false;
};

/// All constraint rows (essential + optional outlier rows) for a rod whose
/// reference tangent is `director`.
[[nodiscard]] ConstraintSet rod_constraints(const SplineSpace& space, const BoundarySpec& bc,
                                            const Vec3& director);

/// Coefficients of the straight rod phi(s) = origin + s director (Greville interpolation).
[[nodiscard]] Vector straight_configuration(const SplineSpace& space, const Vec3& origin,
                                            const Vec3& director);

/// Field values of the axis at one point.
struct AxisFields {
    Vec3 phi = Vec3::Zero();
    Vec3 phi_p = Vec3::Zero();
    Vec3 phi_pp = Vec3::Zero();
};

[[nodiscard]] AxisFields evaluate_fields(const BasisEval& basis, const Vector& q);

/// Discretized rod: space, constraints, material, loads and the cached quadrature data.
///
/// Full coefficients q (3m) relate to reduced ones by q = q_offset + C q_red,
/// where q_offset carries the prescribed (non-homogeneous) boundary values.
class RodModel {
public:
    struct QuadPoint {
        int element = 0;
        double s = 0.0;
        double weight = 0.0;  ///< Gauss weight times the element Jacobian
        BasisEval basis;
        Vec3 eps0 = Vec3::Zero();    ///< reference strain
        Vec3 kappa0 = Vec3::Zero();  ///< reference curvature
        double e0 = 0.0;             ///< reference axial strain |phi'_ref| - 1
    };

    RodModel(SplineSpace space, MaterialParams material, const BoundarySpec& bc,
             const Vec3& director, const Vector& reference, std::vector<LoadCase> loads,
             int n_quad = 0);

    [[nodiscard]] const SplineSpace& space() const noexcept { return space_; }
    [[nodiscard]] const MaterialParams& material() const noexcept { return material_; }
    [[nodiscard]] MaterialParams& material() noexcept { return material_; }
    [[nodiscard]] const BoundarySpec& boundary() const noexcept { return bc_; }
    [[nodiscard]] const ConstraintSet& constraints() const noexcept { return constraints_; }
    [[nodiscard]] const ExtractionMatrix& extraction() const noexcept { return extraction_; }
    [[nodiscard]] const std::vector<LoadCase>& loads() const noexcept { return loads_; }
    [[nodiscard]] const Vector& reference() const noexcept { return reference_; }
    [[nodiscard]] const Vector& offset() const noexcept { return offset_; }
    [[nodiscard]] const std::vector<QuadPoint>& quad_points() const noexcept { return qps_; }
    [[nodiscard]] int n_quad() const noexcept { return n_quad_; }
    [[nodiscard]] double jac_floor() const noexcept { return jac_floor_; }
    [[nodiscard]] int full_dim() const noexcept { return 3 * space_.basis_count(); }
    [[nodiscard]] int reduced_dim() const { return extraction_.reduced_dim(); }

    /// q = q_offset + C q_red.
    [[nodiscard]] Vector expand(const Vector& q_red) const;
    /// Velocities carry no offset: qdot = C qdot_red.
    [[nodiscard]] Vector expand_velocity(const Vector& qdot_red) const;
    [[nodiscard]] Vector reduce(const Vector& q_full) const { return extraction_.reduce(q_full); }
    [[nodiscard]] bool has_flow() const;

    /// Kinematics at a point; throws DegenerateConfiguration carrying s.
    [[nodiscard]] PointKinematics kinematics(const AxisFields& f, double s) const;
    /// Kinematics at a quadrature point, carrying its reference strains.
    [[nodiscard]] PointKinematics kinematics(const AxisFields& f, const QuadPoint& qp) const;
    [[nodiscard]] BasisEval basis_at(double s) const { return evaluate_basis(space_, s); }

private:
    SplineSpace space_;
    MaterialParams material_;
    BoundarySpec bc_;
    ConstraintSet constraints_;
    ExtractionMatrix extraction_;
    std::vector<LoadCase> loads_;
    Vector reference_;
    Vector offset_;
    std::vector<QuadPoint> qps_;
    int n_quad_ = 0;
    double jac_floor_ = 0.0;
};

/// Residual and (optionally) tangent d residual / d q, in full or reduced coordinates.
struct AssembledSystem {
    Vector residual;
    SparseMatrix tangent;
    bool has_tangent = false;
};

/// r_red = C^T r, K_red = C^T K C.
[[nodiscard]] AssembledSystem reduce_system(const ExtractionMatrix& extraction,
                                            const AssembledSystem& full);

/// Switches for individual contributions (used to verify tangents term by term).
struct StaticTerms {
    bool internal = true;
    bool loads = true;
};

/// Equilibrium residual int B^T sigma ds - lambda f_ext(q) and its tangent.
/// Flow loads are not admissible in statics.
[[nodiscard]] AssembledSystem assemble_static(const RodModel& model, const Vector& q,
                                              double lambda, bool with_tangent,
                                              const StaticTerms& terms = {});

/// Where the velocity-dependent inertia correction is evaluated.
enum class CorrectionEvaluation {
    Midpoint,         ///< at (q_n + q_{n+1})/2 with velocity (q_{n+1} - q_n)/dt
    EndpointAverage,  ///< average of the evaluations at both ends of the step
};

[[nodiscard]] std::string to_string(CorrectionEvaluation c);
[[nodiscard]] CorrectionEvaluation correction_evaluation_from_string(const std::string& text);

/// How the internal force enters the step equation.
enum class InternalForceEvaluation {
    Trapezoidal,  ///< (f(q_n) + f(q_{n+1}))/2
    Midpoint,     ///< f((q_n + q_{n+1})/2): objective, conserves angular momentum exactly
    /// Average-vector-field discrete gradient in the strain invariants: conserves
    /// angular momentum and (for I_rho alpha = 0) the total energy exactly.
    DiscreteGradient,
};

[[nodiscard]] std::string to_string(InternalForceEvaluation e);
[[nodiscard]] InternalForceEvaluation internal_force_evaluation_from_string(const std::string& text);

struct DynamicTerms {
    bool inertia = true;
    bool correction = true;
    bool internal = true;
    bool loads = true;
    bool flow = true;
    CorrectionEvaluation correction_eval = CorrectionEvaluation::Midpoint;
    InternalForceEvaluation internal_eval = InternalForceEvaluation::Trapezoidal;
};

/// Data describing one time step from t_n to t_n + dt (dt may be negative to step backwards).
struct StepContext {
    const Vector* q_n = nullptr;
    const Vector* qdot_n = nullptr;
    double t_n = 0.0;
    double dt = 0.0;
};

/// Residual part that depends only on the start of the step; reusing it across
/// Newton iterations avoids recomputing it.
[[nodiscard]] Vector dynamic_step_constant_part(const RodModel& model, const StepContext& ctx,
                                                const DynamicTerms& terms = {});

/// g(q_{n+1}) of the hybrid midpoint/trapezoidal scheme in full coordinates and
/// its tangent with respect to q_{n+1}. `constant_part` may be null.
[[nodiscard]] AssembledSystem assemble_dynamic_step(const RodModel& model, const StepContext& ctx,
                                                    const Vector& q_next, bool with_tangent,
                                                    const DynamicTerms& terms = {},
                                                    const Vector* constant_part = nullptr);

/// Velocity update qdot_{n+1} = 2 (q_{n+1} - q_n)/dt - qdot_n.
[[nodiscard]] Vector velocity_update(const Vector& q_n, const Vector& qdot_n,
                                     const Vector& q_next, double dt);

/// Configuration-dependent mass matrix M(q) (full coordinates).
[[nodiscard]] SparseMatrix assemble_mass(const RodModel& model, const Vector& q);

/// Static internal force vector f_int(q) (full coordinates).
[[nodiscard]] Vector assemble_internal_force(const RodModel& model, const Vector& q);

/// Raised when the linearized system cannot be factorized.
class LinearSolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Direct sparse LU solve of K x = rhs.
[[nodiscard]] Vector solve_linear(const SparseMatrix& K, const Vector& rhs);

}  // namespace krod
