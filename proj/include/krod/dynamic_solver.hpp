#pragma once

#include <krod/assembly.hpp>
#include <krod/diagnostics.hpp>
#include <krod/static_solver.hpp>

#include <functional>
#include <string>
#include <vector>

namespace krod {

struct DynamicOptions {
    double dt = 0.01;
    double t_end = 1.0;
    NewtonOptions newton;
    DynamicTerms terms;
    int store_every = 1;             ///< keep every k-th state (diagnostics are kept for all)
    bool record_diagnostics = true;
};

/// Outcome of one time step.
struct StepResult {
    Vector q_next;     ///< full coefficients
    Vector qdot_next;  ///< full velocities
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;
    std::vector<double> increments;  ///< ||dq_red||_inf per Newton iteration
    std::vector<double> residuals;   ///< ||g_red||_inf before each solve
    std::string message;
};

/// One step of the hybrid scheme from (q_n, qdot_n) at t_n. The Newton iteration
/// works on the reduced coordinates and starts from q_n.
[[nodiscard]] StepResult dynamic_step(const RodModel& model, const DynamicOptions& options,
                                      const Vector& q_n, const Vector& qdot_n, double t_n);

enum class Termination { Completed, NewtonFailure, Degenerate };

[[nodiscard]] std::string to_string(Termination t);

struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;   ///< stored states
    std::vector<Vector> q;
    std::vector<Vector> qdot;
    std::vector<int> newton_iters;               ///< per step (index 0 = initial state: 0)
    std::vector<DiagnosticsRecord> diagnostics;  ///< per step, including the initial state
    Termination status = Termination::Completed;
    double failure_time = 0.0;
    std::string message;
    std::vector<double> failure_residuals;
};

/// Called after every accepted step with (step index, t, q, qdot); return false to stop.
using StepObserver = std::function<bool(int, double, const Vector&, const Vector&)>;

/// Integrates from t = 0 to t_end. A failing step ends the run and the partial
/// trajectory is returned with the failure recorded.
[[nodiscard]] Trajectory run_dynamic(const RodModel& model, const DynamicOptions& options,
                                     const Vector& q0, const Vector& qdot0,
                                     const StepObserver& observer = {});

/// Number of steps to reach t_end with step dt (rounded to the nearest integer).
[[nodiscard]] int step_count(double t_end, double dt);

}  // namespace krod
