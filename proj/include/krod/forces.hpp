#pragma once

#include <krod/kinematics.hpp>
#include <krod/types.hpp>

#include <string>
#include <variant>
#include <vector>

namespace krod {

/// Ambient flow velocity V_inf(z, t), with z = phi . E_axis the "height" coordinate.
struct FreestreamProfile {
    enum class Kind { Still, RotatingWind, ParabolicWind, Table };

    Kind kind = Kind::Still;
    double v0 = 0.0;                 ///< speed scale [m/s]
    double beta0 = 0.0;              ///< rotating wind: angle at z = 0 [rad]
    double length = 1.0;             ///< reference length for z [m]
    int axis = 2;                    ///< coordinate used as z (2 = E3)
    Vec3 direction = Vec3::UnitX();  ///< parabolic / table profiles: flow direction
    double modulation_amplitude = 0.0;  ///< parabolic: relative amplitude of the time modulation
    double modulation_omega = 0.0;      ///< parabolic: argument rate of the modulation [1/s]
    std::vector<double> table_z;        ///< table: sorted heights
    std::vector<double> table_speed;    ///< table: speeds at table_z

    [[nodiscard]] static FreestreamProfile still() { return {}; }
    [[nodiscard]] static FreestreamProfile rotating(double v0, double beta0, double length);
    /// v0 (z/length)^2 (1 + a sin(omega t)) direction.
    [[nodiscard]] static FreestreamProfile parabolic(double v0, double length, const Vec3& direction,
                                                     int axis, double modulation_amplitude,
                                                     double modulation_omega);
    /// Piecewise-linear speed table along `direction`, clamped outside the samples.
    [[nodiscard]] static FreestreamProfile table(std::vector<double> z, std::vector<double> speed,
                                                 const Vec3& direction, int axis = 2);
    /// Parse a two-column "z speed" text table; lines starting with '#' are ignored.
    [[nodiscard]] static FreestreamProfile table_from_text(const std::string& text,
                                                           const Vec3& direction, int axis = 2);

    void validate() const;

    [[nodiscard]] double height(const Vec3& x) const { return x[axis]; }
    [[nodiscard]] Vec3 velocity(double z, double t) const;
    /// a_inf = dV_inf/dt.
    [[nodiscard]] Vec3 acceleration(double z, double t) const;
    [[nodiscard]] Vec3 velocity_dz(double z, double t) const;
    [[nodiscard]] Vec3 acceleration_dz(double z, double t) const;
    [[nodiscard]] bool is_still() const noexcept { return kind == Kind::Still; }
    [[nodiscard]] Vec3 axis_vector() const { return Vec3::Unit(axis); }
};

[[nodiscard]] std::string to_string(FreestreamProfile::Kind kind);

/// v0 [E1 cos(beta0 - 2 beta0 z/L) + E2 sin(beta0 - 2 beta0 z/L)].
[[nodiscard]] Vec3 rotating_wind_profile(double z, double v0, double beta0, double length);

/// Added-mass, normal and tangential drag coefficients of a cylinder in a flow.
struct FlowCoefficients {
    double C_M = 0.0;
    double C_N = 0.0;
    double C_T = 0.0;
    double rho_f = 0.0;     ///< fluid density [kg/m^3]
    double diameter = 0.0;  ///< [m]

    [[nodiscard]] double C1() const;  ///< pi/4 C_M rho_f D^2
    [[nodiscard]] double C2() const;  ///< 1/2 C_N rho_f D
    [[nodiscard]] double C3() const;  ///< 1/2 C_T rho_f D
    void validate() const;
};

/// Concentrated force at s. With t_c > 0 it follows the triangular
/// vanishing history (peak at t_c/2, zero from t_c on); otherwise it is constant.
struct PointLoad {
    double s = 0.0;
    Vec3 force = Vec3::Zero();
    double t_c = 0.0;
};

/// Distributed weight A_rho g.
struct Gravity {
    Vec3 g = Vec3::Zero();
};

/// Concentrated follower force f0 (normal x d) at s, for motions in the plane orthogonal to `normal`.
struct Follower2D {
    double s = 0.0;
    double f0 = 0.0;
    Vec3 normal = Vec3::UnitY();
};

/// Bending moment applied at the end s = L through the director variation.
struct TipMoment {
    Vec3 moment = Vec3::Zero();
};

enum class FrequencyConvention {
    Printed,  ///< sin((omega_F / 2 pi) t)
    Angular,  ///< sin(omega_F t)
};

[[nodiscard]] std::string to_string(FrequencyConvention c);
[[nodiscard]] FrequencyConvention frequency_convention_from_string(const std::string& text);

/// A_F sin(.) direction at s, argument per `convention`.
struct Pulsating {
    double s = 0.0;
    double amplitude = 0.0;
    double omega = 0.0;  ///< omega_F [rad/s]
    Vec3 direction = Vec3::UnitX();
    FrequencyConvention convention = FrequencyConvention::Printed;
};

/// Added mass + normal drag + tangential drag of the ambient flow.
struct FlowLoad {
    FlowCoefficients coeffs;
    FreestreamProfile profile;
};

using LoadCase = std::variant<PointLoad, Gravity, Follower2D, TipMoment, Pulsating, FlowLoad>;

[[nodiscard]] std::string load_name(const LoadCase& load);
/// Throws std::invalid_argument for out-of-range parameters; `length` bounds s.
void validate_load(const LoadCase& load, double length);

/// Triangular vanishing load: rises to F_c at t_c/2 and returns to zero at t_c.
[[nodiscard]] Vec3 vanishing_point_load(double t, double t_c, const Vec3& F_c);

[[nodiscard]] double pulsating_argument(double t, double omega, FrequencyConvention convention);
/// A_F sin(arg) E1 (or `direction`).
[[nodiscard]] Vec3 pulsating_force(double t, double amplitude, double omega,
                                   FrequencyConvention convention = FrequencyConvention::Printed,
                                   const Vec3& direction = Vec3::UnitX());

/// Follower force and its derivative with respect to phi'.
struct FollowerForce {
    Vec3 force;
    Mat3 d_phi_p;  ///< (f0/|phi'|) [normal]x P
};

[[nodiscard]] FollowerForce follower_force_2d(const PointKinematics& kin, double f0,
                                              const Vec3& normal = Vec3::UnitY());

/// Generalized tip-moment force acts on N'. `value` is (m x d)/|phi'| and
/// `d_phi_p` its derivative with respect to phi'.
struct TipMomentForce {
    Vec3 value;
    Mat3 d_phi_p;
};

[[nodiscard]] TipMomentForce tip_moment_load(const PointKinematics& kin, const Vec3& moment);

/// Drag part of the flow force, C2 |P V| P V + C3 |(d d) V| (d d) V with
/// V = V_inf(z, t) - phi_dot, and its derivatives with respect to phi, phi', phi_dot.
/// The zero-velocity limit of each derivative is zero.
struct FlowDrag {
    Vec3 force = Vec3::Zero();
    Vec3 normal = Vec3::Zero();
    Vec3 tangential = Vec3::Zero();
    Mat3 d_phi = Mat3::Zero();
    Mat3 d_phi_p = Mat3::Zero();
    Mat3 d_phi_dot = Mat3::Zero();
};

[[nodiscard]] FlowDrag flow_drag_point(const PointKinematics& kin, const Vec3& phi,
                                       const Vec3& phi_dot, const FreestreamProfile& profile,
                                       double t, const FlowCoefficients& coeffs);

/// Projected ambient acceleration P a_inf(z, t) and its derivatives with respect to phi, phi'.
struct ProjectedAcceleration {
    Vec3 value = Vec3::Zero();
    Mat3 d_phi = Mat3::Zero();
    Mat3 d_phi_p = Mat3::Zero();
};

[[nodiscard]] ProjectedAcceleration projected_ambient_acceleration(const PointKinematics& kin,
                                                                   const Vec3& phi,
                                                                   const FreestreamProfile& profile,
                                                                   double t);

/// Projected rod velocity P phi_dot and its derivatives with respect to phi', phi_dot.
struct ProjectedVelocity {
    Vec3 value;
    Mat3 d_phi_p;
    Mat3 d_phi_dot;
};

[[nodiscard]] ProjectedVelocity projected_velocity(const PointKinematics& kin, const Vec3& phi_dot);

/// Continuous flow force density C1 P (a_inf - phi_ddot) + drag at one instant.
struct FlowForce {
    Vec3 force;
    Vec3 added_mass;
    FlowDrag drag;
};

[[nodiscard]] FlowForce flow_force_point(const PointKinematics& kin, const Vec3& phi,
                                         const Vec3& phi_dot, const Vec3& phi_ddot,
                                         const FreestreamProfile& profile, double t,
                                         const FlowCoefficients& coeffs);

}  // namespace krod
