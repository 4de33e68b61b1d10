#pragma once

#include <krod/assembly.hpp>

#include <string>
#include <vector>

namespace krod {

/// Stopping rule of the Newton-Raphson iteration.
struct NewtonOptions {
    double tol = 1e-10;  ///< on the infinity norm of the reduced increment
    int max_iters = 25;
    /// Scale the residual by its norm at the first iterate (does not change the
    /// iterates, only the reported residual history).
    bool normalize_residual = false;

    bool operator==(const NewtonOptions&) const = default;
};

struct StaticOptions {
    int n_load_steps = 6;
    NewtonOptions newton;
};

struct StaticStep {
    double lambda = 0.0;
    Vector q;  ///< full coefficients
    int iterations = 0;
    std::vector<double> increments;  ///< ||dq_red||_inf per iteration
    std::vector<double> residuals;   ///< ||r_red||_inf before each solve
};

struct StaticResult {
    std::vector<StaticStep> steps;  ///< converged load steps
    bool converged = false;
    int failed_step = -1;       ///< 1-based load step that failed, if any
    std::string message;        ///< failure description
    StaticStep failed_attempt;  ///< iterate history of the failing step
};

/// Incremental loading lambda_k = k / n_load_steps with Newton at each step;
/// each step starts from the previous solution. `q0` is the full start vector.
[[nodiscard]] StaticResult solve_static(const RodModel& model, const StaticOptions& options,
                                        const Vector& q0);

}  // namespace krod
