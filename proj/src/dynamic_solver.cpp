#include <krod/dynamic_solver.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace krod {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::NewtonFailure: return "newton_failure";
        case Termination::Degenerate: return "degenerate";
    }
    return "unknown";
}

int step_count(double t_end, double dt) {
    return static_cast<int>(std::llround(t_end / dt));
}

StepResult dynamic_step(const RodModel& model, const DynamicOptions& options, const Vector& q_n,
                        const Vector& qdot_n, double t_n) {
    StepResult out;
    StepContext ctx{&q_n, &qdot_n, t_n, options.dt};
    Vector trial = model.reduce(q_n);
    Vector q_next = q_n;
    try {
        const Vector constant = dynamic_step_constant_part(model, ctx, options.terms);
        double scale = 1.0;
        for (int it = 0; it < options.newton.max_iters; ++it) {
            q_next = model.expand(trial);
            const auto sys = reduce_system(
                model.extraction(),
                assemble_dynamic_step(model, ctx, q_next, true, options.terms, &constant));
            double rnorm = sys.residual.lpNorm<Eigen::Infinity>();
            if (options.newton.normalize_residual) {
                if (it == 0 && rnorm > 0.0) scale = rnorm;
                rnorm /= scale;
            }
            out.residuals.push_back(rnorm);
            if (!std::isfinite(rnorm)) throw std::runtime_error("non-finite residual");
            const Vector dq = solve_linear(sys.tangent, -sys.residual);
            trial += dq;
            const double inc = dq.lpNorm<Eigen::Infinity>();
            out.increments.push_back(inc);
            out.iterations = it + 1;
            if (!std::isfinite(inc)) throw std::runtime_error("non-finite Newton increment");
            if (inc < options.newton.tol) {
                out.converged = true;
                break;
            }
        }
        if (!out.converged) {
            std::ostringstream msg;
            msg << "Newton did not converge in " << options.newton.max_iters
                << " iterations (last increment "
                << (out.increments.empty() ? 0.0 : out.increments.back()) << ")";
            out.message = msg.str();
        }
    } catch (const DegenerateConfiguration& e) {
        out.degenerate = true;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.message = e.what();
    }
    out.q_next = model.expand(trial);
    out.qdot_next = velocity_update(q_n, qdot_n, out.q_next, options.dt);
    return out;
}

Trajectory run_dynamic(const RodModel& model, const DynamicOptions& options, const Vector& q0,
                       const Vector& qdot0, const StepObserver& observer) {
    if (!(options.dt > 0.0)) throw std::invalid_argument("dynamic: dt must be positive");
    if (!(options.t_end >= options.dt)) throw std::invalid_argument("dynamic: t_end must be >= dt");
    if (options.store_every < 1) throw std::invalid_argument("dynamic: store_every must be >= 1");
    if (q0.size() != model.full_dim() || qdot0.size() != model.full_dim())
        throw std::invalid_argument("dynamic: initial state has wrong size");

    Trajectory traj;
    traj.dt = options.dt;
    const int n_steps = step_count(options.t_end, options.dt);
    traj.times.push_back(0.0);
    traj.q.push_back(q0);
    traj.qdot.push_back(qdot0);
    traj.newton_iters.push_back(0);
    if (options.record_diagnostics) traj.diagnostics.push_back(make_record(model, 0.0, q0, qdot0));

    Vector q = q0;
    Vector qdot = qdot0;
    for (int n = 0; n < n_steps; ++n) {
        const double t_n = n * options.dt;
        const double t_next = (n + 1) * options.dt;
        auto step = dynamic_step(model, options, q, qdot, t_n);
        if (!step.converged) {
            traj.status = step.degenerate ? Termination::Degenerate : Termination::NewtonFailure;
            traj.failure_time = t_next;
            traj.message = step.message;
            traj.failure_residuals = std::move(step.residuals);
            return traj;
        }
        q = std::move(step.q_next);
        qdot = std::move(step.qdot_next);
        traj.newton_iters.push_back(step.iterations);
        if (options.record_diagnostics) {
            try {
                traj.diagnostics.push_back(make_record(model, t_next, q, qdot));
            } catch (const DegenerateConfiguration& e) {
                traj.status = Termination::Degenerate;
                traj.failure_time = t_next;
                traj.message = e.what();
                return traj;
            }
        }
        if ((n + 1) % options.store_every == 0 || n + 1 == n_steps) {
            traj.times.push_back(t_next);
            traj.q.push_back(q);
            traj.qdot.push_back(qdot);
        }
        if (observer && !observer(n + 1, t_next, q, qdot)) break;
    }
    return traj;
}

}  // namespace krod
