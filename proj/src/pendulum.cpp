#include <krod/pendulum.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace krod {

void PendulumParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(L0 > 0.0 && std::isfinite(L0), "pendulum: L0 must be positive");
    require(k > 0.0 && std::isfinite(k), "pendulum: k must be positive");
    require(m > 0.0 && std::isfinite(m), "pendulum: m must be positive");
    require(std::isfinite(g), "pendulum: g must be finite");
    require(dt > 0.0 && std::isfinite(dt), "pendulum: dt must be positive");
    require(t_end >= dt, "pendulum: t_end must be >= dt");
    require(std::isfinite(theta0) && std::isfinite(eta0) && std::isfinite(theta_dot0) &&
                std::isfinite(eta_dot0),
            "pendulum: non-finite initial state");
    require(L0 + eta0 > 0.0, "pendulum: initial length must be positive");
}

FreestreamProfile pendulum_parabolic_wind(const PendulumParams& p) {
    const double omega = (1.0 / 50.0) * std::sqrt(p.k / p.m) / (2.0 * std::numbers::pi);
    return FreestreamProfile::parabolic(1.0, 1.0, Vec3::UnitY(), 0, 0.1, omega);
}

double pendulum_kinetic(const PendulumParams& p, const PendulumState& s) {
    const double r = p.L0 + s.eta;
    return 0.5 * p.m * (s.eta_dot * s.eta_dot + r * r * s.theta_dot * s.theta_dot);
}

double pendulum_potential(const PendulumParams& p, const PendulumState& s) {
    const double r = p.L0 + s.eta;
    return 0.5 * p.k * s.eta * s.eta - p.m * p.g * r * std::cos(s.theta);
}

double pendulum_j3(const PendulumParams& p, const PendulumState& s) {
    const double r = p.L0 + s.eta;
    return p.m * r * r * s.theta_dot;
}

Vec3 pendulum_position(const PendulumParams& p, const PendulumState& s) {
    const double r = p.L0 + s.eta;
    return Vec3(r * std::sin(s.theta), -r * std::cos(s.theta), 0.0);
}

namespace {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Columns dx/dtheta, dx/deta of the in-plane position.
Eigen::Matrix<double, 2, 2> position_jacobian(double L0, const Vec2& q) {
    const double r = L0 + q[1];
    Eigen::Matrix<double, 2, 2> J;
    J << r * std::cos(q[0]), std::sin(q[0]),
         r * std::sin(q[0]), -std::cos(q[0]);
    return J;
}

/// Generalized wind force J^T c (v_wind(x, t) - x_dot).
Vec2 wind_force(const PendulumParams& p, const PendulumWind& wind, const Vec2& q, const Vec2& v,
                double t) {
    const double r = p.L0 + q[1];
    const Vec2 x(r * std::sin(q[0]), -r * std::cos(q[0]));
    const auto J = position_jacobian(p.L0, q);
    const Vec2 xdot = J * v;
    const Vec3 x3(x[0], x[1], 0.0);
    const Vec3 vw = wind.profile.velocity(wind.profile.height(x3), t);
    const Vec2 F = wind.drag_coefficient * (Vec2(vw[0], vw[1]) - xdot);
    return J.transpose() * F;
}

/// dU/dq for U = k eta^2 / 2 - m g r cos(theta).
Vec2 potential_gradient(const PendulumParams& p, const Vec2& q) {
    const double r = p.L0 + q[1];
    return Vec2(p.m * p.g * r * std::sin(q[0]), p.k * q[1] - p.m * p.g * std::cos(q[0]));
}

Mat2 potential_hessian(const PendulumParams& p, const Vec2& q) {
    const double r = p.L0 + q[1];
    Mat2 H;
    H << p.m * p.g * r * std::cos(q[0]), p.m * p.g * std::sin(q[0]),
         p.m * p.g * std::sin(q[0]), p.k;
    return H;
}

struct StepSystem {
    Vec2 g;
    Mat2 K;
};

/// Residual in terms of the step increment dq = q1 - q0: velocities are formed from
/// dq directly, which avoids the cancellation in q1 - q0 once |theta| has grown.
StepSystem step_residual(const PendulumParams& p, const std::optional<PendulumWind>& wind,
                         const Vec2& q0, const Vec2& v0, const Vec2& dq, double t_n, double dt) {
    const Vec2 q1 = q0 + dq;
    const Vec2 v1 = 2.0 / dt * dq - v0;
    const Vec2 qm = q0 + 0.5 * dq;
    const Vec2 vm = dq / dt;
    const double r0 = p.L0 + q0[1];
    const double r1 = p.L0 + q1[1];
    const double rm = p.L0 + qm[1];

    // Momentum p = M(q) qdot = (m r^2 theta_dot, m eta_dot).
    const Vec2 p0(p.m * r0 * r0 * v0[0], p.m * v0[1]);
    const Vec2 p1(p.m * r1 * r1 * v1[0], p.m * v1[1]);
    // -dT/dq at the midpoint.
    const Vec2 corr(0.0, -p.m * rm * vm[0] * vm[0]);

    StepSystem s;
    s.g = (p1 - p0) / dt + corr +
          0.5 * (potential_gradient(p, q1) + potential_gradient(p, q0));

    Mat2 dp1;
    dp1 << p.m * r1 * r1 * 2.0 / dt, 2.0 * p.m * r1 * v1[0],
           0.0, p.m * 2.0 / dt;
    Mat2 dcorr;
    dcorr << 0.0, 0.0,
             -2.0 * p.m * rm * vm[0] / dt, -0.5 * p.m * vm[0] * vm[0];
    s.K = dp1 / dt + dcorr + 0.5 * potential_hessian(p, q1);

    if (wind) {
        const double t_mid = t_n + 0.5 * dt;
        s.g -= wind_force(p, *wind, qm, vm, t_mid);
        // The 2x2 wind Jacobian is formed by central differences.
        for (int j = 0; j < 2; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(q1[j]));
            Vec2 dp = dq, dm = dq;
            dp[j] += h;
            dm[j] -= h;
            const Vec2 fp = wind_force(p, *wind, q0 + 0.5 * dp, dp / dt, t_mid);
            const Vec2 fm = wind_force(p, *wind, q0 + 0.5 * dm, dm / dt, t_mid);
            s.K.col(j) -= (fp - fm) / (2.0 * h);
        }
    }
    return s;
}

PendulumRecord make_pendulum_record(const PendulumParams& p, double t, const PendulumState& st,
                                    int iterations) {
    PendulumRecord r;
    r.t = t;
    r.state = st;
    r.kinetic = pendulum_kinetic(p, st);
    r.potential = pendulum_potential(p, st);
    r.total = r.kinetic + r.potential;
    r.j3 = pendulum_j3(p, st);
    r.iterations = iterations;
    return r;
}

}  // namespace

PendulumTrajectory pendulum_run(const PendulumParams& params,
                                const std::optional<PendulumWind>& wind) {
    params.validate();
    if (wind) wind->profile.validate();
    PendulumTrajectory traj;
    PendulumState st{params.theta0, params.eta0, params.theta_dot0, params.eta_dot0};
    traj.records.push_back(make_pendulum_record(params, 0.0, st, 0));

    const int n_steps = step_count(params.t_end, params.dt);
    Vec2 q(st.theta, st.eta);
    Vec2 v(st.theta_dot, st.eta_dot);
    for (int n = 0; n < n_steps; ++n) {
        const double t_n = n * params.dt;
        Vec2 step = Vec2::Zero();
        bool converged = false;
        int iters = 0;
        for (int it = 0; it < params.newton.max_iters; ++it) {
            const auto sys = step_residual(params, wind, q, v, step, t_n, params.dt);
            const Vec2 delta = sys.K.partialPivLu().solve(-sys.g);
            step += delta;
            iters = it + 1;
            if (!delta.allFinite()) break;
            if (delta.lpNorm<Eigen::Infinity>() < params.newton.tol) {
                converged = true;
                break;
            }
        }
        if (!converged || params.L0 + q[1] + step[1] <= 0.0) {
            traj.status = converged ? Termination::Degenerate : Termination::NewtonFailure;
            traj.failure_time = (n + 1) * params.dt;
            std::ostringstream msg;
            msg << "pendulum step failed at t = " << traj.failure_time;
            traj.message = msg.str();
            return traj;
        }
        v = 2.0 / params.dt * step - v;
        q += step;
        st = {q[0], q[1], v[0], v[1]};
        traj.records.push_back(make_pendulum_record(params, (n + 1) * params.dt, st, iters));
    }
    return traj;
}

namespace {

/// Right-hand side of the continuous equations of motion, state (theta, eta, theta_dot, eta_dot).
Eigen::Vector4d pendulum_rhs(const PendulumParams& p, const std::optional<PendulumWind>& wind,
                             const Eigen::Vector4d& y, double t) {
    const Vec2 q(y[0], y[1]);
    const Vec2 v(y[2], y[3]);
    const double r = p.L0 + q[1];
    Vec2 Q = Vec2::Zero();
    if (wind) Q = wind_force(p, *wind, q, v, t);
    const Vec2 dU = potential_gradient(p, q);
    // m r^2 theta_dd + 2 m r eta_dot theta_dot + dU/dtheta = Q_theta
    // m eta_dd - m r theta_dot^2 + dU/deta = Q_eta
    const double theta_dd = (Q[0] - dU[0] - 2.0 * p.m * r * v[1] * v[0]) / (p.m * r * r);
    const double eta_dd = (Q[1] - dU[1] + p.m * r * v[0] * v[0]) / p.m;
    return Eigen::Vector4d(v[0], v[1], theta_dd, eta_dd);
}

}  // namespace

std::vector<PendulumState> pendulum_reference(const PendulumParams& params,
                                              const std::optional<PendulumWind>& wind,
                                              double step, double sample_dt) {
    params.validate();
    const int per_sample = static_cast<int>(std::llround(sample_dt / step));
    if (per_sample < 1) throw std::invalid_argument("pendulum reference: step exceeds sample_dt");
    const double h = sample_dt / per_sample;
    const int n_samples = step_count(params.t_end, sample_dt);
    Eigen::Vector4d y(params.theta0, params.eta0, params.theta_dot0, params.eta_dot0);
    std::vector<PendulumState> out;
    out.push_back({y[0], y[1], y[2], y[3]});
    double t = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        for (int i = 0; i < per_sample; ++i) {
            const auto k1 = pendulum_rhs(params, wind, y, t);
            const auto k2 = pendulum_rhs(params, wind, y + 0.5 * h * k1, t + 0.5 * h);
            const auto k3 = pendulum_rhs(params, wind, y + 0.5 * h * k2, t + 0.5 * h);
            const auto k4 = pendulum_rhs(params, wind, y + h * k3, t + h);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = (s * per_sample + i + 1) * h;
        }
        out.push_back({y[0], y[1], y[2], y[3]});
    }
    return out;
}

std::vector<double> pendulum_precision_quotient(const PendulumParams& params,
                                                const std::optional<PendulumWind>& wind) {
    std::vector<std::vector<Vector>> series(3);
    for (int level = 0; level < 3; ++level) {
        PendulumParams p = params;
        const int factor = 1 << level;
        p.dt = params.dt / factor;
        const auto traj = pendulum_run(p, wind);
        if (traj.status != Termination::Completed)
            throw std::runtime_error("pendulum precision quotient: run failed: " + traj.message);
        for (std::size_t i = 0; i < traj.records.size(); i += static_cast<std::size_t>(factor)) {
            Vector u(2);
            u << traj.records[i].state.theta, traj.records[i].state.eta;
            series[static_cast<std::size_t>(level)].push_back(u);
        }
    }
    return precision_quotient(series[0], series[1], series[2]);
}

}  // namespace krod
