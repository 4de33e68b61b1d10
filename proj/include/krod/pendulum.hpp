#pragma once

#include <krod/dynamic_solver.hpp>
#include <krod/forces.hpp>
#include <krod/static_solver.hpp>

#include <optional>
#include <string>
#include <vector>

namespace krod {

/// Planar elastic pendulum: a point mass on a linear spring of natural length L0
/// hinged at the origin. Coordinates (theta, eta): angle from the downward
/// vertical and spring elongation; position x = (L0 + eta)(sin theta, -cos theta).
struct PendulumParams {
    double L0 = 1.0;      ///< natural length [m]
    double k = 5328.5;    ///< spring stiffness [N/m]
    double m = 1.0;       ///< mass [kg]
    double g = 0.0;       ///< gravitational acceleration along -E2 [m/s^2]
    double dt = 0.005;
    double t_end = 30.0;
    double theta0 = 0.0;
    double eta0 = 0.1;
    double theta_dot0 = -0.5;
    double eta_dot0 = 0.25;
    NewtonOptions newton;

    void validate() const;
    bool operator==(const PendulumParams&) const = default;
};

/// Linear drag F = c (v_wind(x, t) - x_dot) of the mass in an ambient flow.
struct PendulumWind {
    FreestreamProfile profile;
    double drag_coefficient = 2.0;  ///< c [kg/s]
};

/// x1^2 (1 + 0.1 sin((1/50) sqrt(k/m)/(2 pi) t)) E2: parabolic in the horizontal coordinate.
[[nodiscard]] FreestreamProfile pendulum_parabolic_wind(const PendulumParams& p);

struct PendulumState {
    double theta = 0.0;
    double eta = 0.0;
    double theta_dot = 0.0;
    double eta_dot = 0.0;
};

struct PendulumRecord {
    double t = 0.0;
    PendulumState state;
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
    double j3 = 0.0;  ///< m r^2 theta_dot
    int iterations = 0;
};

struct PendulumTrajectory {
    std::vector<PendulumRecord> records;
    Termination status = Termination::Completed;
    double failure_time = 0.0;
    std::string message;
};

[[nodiscard]] double pendulum_kinetic(const PendulumParams& p, const PendulumState& s);
[[nodiscard]] double pendulum_potential(const PendulumParams& p, const PendulumState& s);
[[nodiscard]] double pendulum_j3(const PendulumParams& p, const PendulumState& s);
[[nodiscard]] Vec3 pendulum_position(const PendulumParams& p, const PendulumState& s);

/// Integrates with the hybrid scheme: momentum difference quotient, midpoint
/// evaluation of -dT/dq and of the wind force, trapezoidal potential forces.
[[nodiscard]] PendulumTrajectory pendulum_run(const PendulumParams& params,
                                              const std::optional<PendulumWind>& wind = {});

/// Classical RK4 on the continuous equations of motion, sampled every `sample_dt`.
[[nodiscard]] std::vector<PendulumState> pendulum_reference(const PendulumParams& params,
                                                            const std::optional<PendulumWind>& wind,
                                                            double step, double sample_dt);

/// Q_II of (theta, eta) from runs at dt, dt/2, dt/4 sampled on the coarse grid.
[[nodiscard]] std::vector<double> pendulum_precision_quotient(
    const PendulumParams& params, const std::optional<PendulumWind>& wind = {});

}  // namespace krod
