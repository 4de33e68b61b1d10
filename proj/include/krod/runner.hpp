#pragma once

#include <krod/assembly.hpp>
#include <krod/dynamic_solver.hpp>
#include <krod/scenario.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace krod {

inline constexpr std::string_view kVersion = "1.0.0";

/// Exit codes of the command-line front end.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolverFailure = 3;

/// Rod model of the scenario (its own discretization).
[[nodiscard]] RodModel build_model(const Scenario& scenario);
/// Rod model of the scenario on another discretization.
[[nodiscard]] RodModel build_model(const Scenario& scenario, int degree, int continuity,
                                   int n_elements);

/// Straight rod along the scenario director, plus the optional seeded random
/// perturbation projected onto the admissible set.
[[nodiscard]] Vector initial_configuration(const Scenario& scenario, const RodModel& model);

/// phi_h(s) of the coefficient vector q.
[[nodiscard]] Vec3 axis_point(const SplineSpace& space, const Vector& q, double s);

struct RunSettings {
    int workers = 1;             ///< parallel runs for sweep jobs (output order is fixed)
    bool write_timestamp = true; ///< the only non-deterministic metadata field
};

struct RunOutcome {
    int exit_code = kExitSuccess;
    Termination status = Termination::Completed;
    std::string message;
    std::vector<std::filesystem::path> files;  ///< artifacts written, in creation order
};

/// Runs the job and writes its artifacts into `out_dir` (created if needed):
/// metadata.json always, a time-series CSV for static/dynamic/pendulum jobs and a
/// job-specific table for the sweeps. A solver failure keeps the partial outputs,
/// adds failure.json and returns kExitSolverFailure.
[[nodiscard]] RunOutcome run_scenario(const Scenario& scenario,
                                      const std::filesystem::path& out_dir,
                                      const RunSettings& settings = {});

/// Worker count from KROD_WORKERS (default: hardware concurrency, at least 1).
[[nodiscard]] int workers_from_environment();

}  // namespace krod
