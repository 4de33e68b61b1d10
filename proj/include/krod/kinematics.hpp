#pragma once

#include <krod/spline.hpp>
#include <krod/types.hpp>

#include <array>
#include <string>

namespace krod {

/// Cross-section and inertia properties of the rod.
struct MaterialParams {
    double EA = 1.0;     ///< axial stiffness [N]
    double EI = 1.0;     ///< bending stiffness [N m^2]
    double A_rho = 1.0;  ///< mass per unit length [kg/m]
    double I_rho = 0.0;  ///< rotary inertia per unit length [kg m]
    double alpha = 1.0;  ///< scaling of the configuration-dependent mass part

    /// Throws std::invalid_argument if a bound is violated.
    void validate() const;

    /// Solid circular section of the given diameter.
    [[nodiscard]] static MaterialParams circular(double youngs_modulus, double density,
                                                 double diameter, double alpha = 1.0);
};

/// Raised when |phi'| drops below the degeneracy floor.
class DegenerateConfiguration : public std::runtime_error {
public:
    DegenerateConfiguration(const std::string& what, double s)
        : std::runtime_error(what), location(s) {}
    double location;
};

/// Director frame at a point of the rod axis.
struct PointKinematics {
    Vec3 phi_p = Vec3::Zero();
    Vec3 phi_pp = Vec3::Zero();
    Vec3 d = Vec3::UnitX();
    Mat3 P = Mat3::Zero();  ///< I - d (x) d
    Mat3 H = Mat3::Zero();  ///< I - 2 d (x) d
    double jac = 1.0;       ///< |phi'|
    /// Strains of the stress-free reference at this point (rounding-level for a
    /// straight reference); subtracted so the reference carries no stress.
    Vec3 eps0 = Vec3::Zero();
    Vec3 kappa0 = Vec3::Zero();
};

/// d = phi'/|phi'|, P = I - d(x)d, H = I - 2 d(x)d.
/// Throws DegenerateConfiguration if |phi'| <= jac_floor.
[[nodiscard]] PointKinematics director_ops(const Vec3& phi_p, double jac_floor = 0.0);

/// director_ops plus the second derivative of the axis.
[[nodiscard]] PointKinematics point_kinematics(const Vec3& phi_p, const Vec3& phi_pp,
                                               double jac_floor = 0.0);

struct StrainStress {
    Vec3 eps;    ///< phi' - d - eps0
    Vec3 kappa;  ///< d x d' - kappa0
    Vec3 n;      ///< EA eps
    Vec3 m;      ///< EI kappa
};

[[nodiscard]] StrainStress strain_stress(const PointKinematics& kin, const MaterialParams& mat);

/// Linearized strain operator at a point: (d eps, d kappa) = B dq_local.
/// Returns a 6 x 3(p+1) matrix; column 3a+c belongs to local function a, component c.
[[nodiscard]] Matrix b_matrix_point(const PointKinematics& kin, const BasisEval& basis);

/// Local mass density A_rho N^T N + alpha I_rho / |phi'|^2 N'^T P N'.
[[nodiscard]] Matrix mass_density_point(const PointKinematics& kin, const BasisEval& basis,
                                        const MaterialParams& mat);

/// Velocity-dependent part of the covariant inertia term (everything except M qddot):
/// dM/dt qdot - dT/dq, as a local 3(p+1) vector. `qdot_local` stacks the
/// velocities of the p+1 supported control points.
[[nodiscard]] Vector inertia_residual_point(const PointKinematics& kin, const BasisEval& basis,
                                            const Vector& qdot_local, const MaterialParams& mat);

/// Geometric stiffness blocks: derivatives of B^T sigma with sigma frozen.
/// A1 = d(B11^T n)/dphi', A2 = d(B21^T m)/dphi', A3 = d(B21^T m)/dphi'', A4 = d(B22^T m)/dphi'.
struct GeometricBlocks {
    Mat3 A1, A2, A3, A4;
};

[[nodiscard]] GeometricBlocks geometric_blocks(const PointKinematics& kin, const StrainStress& ss);

/// Pointwise contribution expressed against (phi, phi', phi''):
///   residual_a = sum_i D_i(a) r[i],   tangent_ab = sum_ij D_i(a) D_j(b) K[i][j]
/// where D_0 = N, D_1 = N', D_2 = N''. Assembly maps it onto control points.
struct PointDensity {
    std::array<Vec3, 3> r;
    std::array<std::array<Mat3, 3>, 3> K;

    void clear() {
        for (auto& v : r) v.setZero();
        for (auto& row : K)
            for (auto& k : row) k.setZero();
    }
};

/// Internal force B^T sigma and its tangent (geometric + elastic parts).
void add_internal_density(const PointKinematics& kin, const MaterialParams& mat, double scale,
                          PointDensity& out, bool with_tangent);

/// As above with separate scales for the value and the tangent (the tangent of a
/// term evaluated at the step midpoint carries the chain-rule factor 1/2).
void add_internal_density(const PointKinematics& kin, const MaterialParams& mat,
                          double scale_value, double scale, PointDensity& out, bool with_tangent);

/// Stored energy density in the quadratic invariants a = |phi'|^2, b = phi'.phi'',
/// c = |phi''|^2: W = EA/2 (sqrt(a) - 1 - e0)^2 + EI/2 (a c - b^2)/a^2, where e0 is
/// the axial strain of the reference.
struct InvariantEnergy {
    double value = 0.0;
    Eigen::Vector3d gradient = Eigen::Vector3d::Zero();  ///< dW/d(a, b, c)
    Mat3 hessian = Mat3::Zero();
};

[[nodiscard]] InvariantEnergy invariant_energy(double a, double b, double c,
                                               const MaterialParams& mat, double e0);

/// Internal force of the step as the average-vector-field discrete gradient of W over
/// the invariants, applied through their midpoint gradients:
///   r = sum_i Wbar_i grad pi_i(q_mid),  Wbar_i = int_0^1 dW/dpi_i(pi_n + xi (pi_{n+1} - pi_n)) dxi.
/// Because every invariant is quadratic, W(q_{n+1}) - W(q_n) = r . (q_{n+1} - q_n) holds
/// up to the xi-quadrature error, and each grad pi_i(q_mid) is objective, so the
/// force is energy- and angular-momentum-consistent. Tangent w.r.t. (phi'_{n+1}, phi''_{n+1}).
void add_internal_discrete_gradient_density(const Vec3& phi_p0, const Vec3& phi_pp0,
                                            const Vec3& phi_p1, const Vec3& phi_pp1,
                                            const MaterialParams& mat, double e0,
                                            PointDensity& out, bool with_tangent);

/// Generalized momentum density M(q) qdot; tangent w.r.t. q (`wrt_q`) and qdot (`wrt_qdot`).
/// `phi_dot` and `phi_dot_p` are the axis velocity and its arc-length derivative.
void add_momentum_density(const PointKinematics& kin, const Vec3& phi_dot, const Vec3& phi_dot_p,
                          const MaterialParams& mat, double scale_value, double scale_wrt_q,
                          double scale_wrt_qdot, PointDensity& out, bool with_tangent);

/// The configuration derivative of the kinetic energy with flipped sign,
/// I_rho/|phi'|^3 [(d.a) P a + |P a|^2 d] with a = phi_dot', and its tangents
/// w.r.t. phi' (scaled by `scale_wrt_q`) and a (scaled by `scale_wrt_qdot`).
void add_inertia_correction_density(const PointKinematics& kin, const Vec3& phi_dot_p,
                                    const MaterialParams& mat, double scale_value,
                                    double scale_wrt_q, double scale_wrt_qdot,
                                    PointDensity& out, bool with_tangent);

/// 0.5 (EA |eps|^2 + EI |kappa|^2).
[[nodiscard]] double potential_density(const PointKinematics& kin, const MaterialParams& mat);
/// 0.5 (A_rho |phi_dot|^2 + alpha I_rho |d_dot|^2), d_dot = P phi_dot' / |phi'|.
[[nodiscard]] double kinetic_density(const PointKinematics& kin, const Vec3& phi_dot,
                                     const Vec3& phi_dot_p, const MaterialParams& mat);
/// Director rate P phi_dot' / |phi'|.
[[nodiscard]] Vec3 director_rate(const PointKinematics& kin, const Vec3& phi_dot_p);

}  // namespace krod
