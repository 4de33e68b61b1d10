#include <krod/static_solver.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace krod {

StaticResult solve_static(const RodModel& model, const StaticOptions& options, const Vector& q0) {
    if (options.n_load_steps < 1) throw std::invalid_argument("static: n_load_steps must be >= 1");
    if (!(options.newton.tol > 0.0)) throw std::invalid_argument("static: newton tol must be > 0");
    if (options.newton.max_iters < 1)
        throw std::invalid_argument("static: max Newton iterations must be >= 1");
    if (q0.size() != model.full_dim()) throw std::invalid_argument("static: q0 has wrong size");

    StaticResult result;
    Vector q_red = model.reduce(q0);
    for (int k = 1; k <= options.n_load_steps; ++k) {
        StaticStep step;
        step.lambda = static_cast<double>(k) / options.n_load_steps;
        Vector trial = q_red;
        bool done = false;
        double scale = 1.0;
        try {
            for (int it = 0; it < options.newton.max_iters; ++it) {
                const auto sys = reduce_system(
                    model.extraction(), assemble_static(model, model.expand(trial), step.lambda, true));
                double rnorm = sys.residual.lpNorm<Eigen::Infinity>();
                if (options.newton.normalize_residual) {
                    if (it == 0 && rnorm > 0.0) scale = rnorm;
                    rnorm /= scale;
                }
                step.residuals.push_back(rnorm);
                if (!std::isfinite(rnorm)) throw std::runtime_error("non-finite residual");
                const Vector dq = solve_linear(sys.tangent, -sys.residual);
                trial += dq;
                const double inc = dq.lpNorm<Eigen::Infinity>();
                step.increments.push_back(inc);
                step.iterations = it + 1;
                if (inc < options.newton.tol) {
                    done = true;
                    break;
                }
            }
        } catch (const std::exception& e) {
            result.message = e.what();
        }
        if (!done) {
            if (result.message.empty()) {
                std::ostringstream msg;
                msg << "Newton did not converge in " << options.newton.max_iters
                    << " iterations at load step " << k;
                result.message = msg.str();
            }
            result.failed_step = k;
            step.q = model.expand(trial);
            result.failed_attempt = std::move(step);
            return result;
        }
        q_red = trial;
        step.q = model.expand(q_red);
        result.steps.push_back(std::move(step));
    }
    result.converged = true;
    return result;
}

}  // namespace krod
