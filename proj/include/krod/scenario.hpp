#pragma once

#include <krod/assembly.hpp>
#include <krod/diagnostics.hpp>
#include <krod/dynamic_solver.hpp>
#include <krod/forces.hpp>
#include <krod/pendulum.hpp>
#include <krod/static_solver.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace krod {

/// Syntax or semantic problem in a scenario. `line` is 1-based (0 when the
/// problem is not tied to a line), `key` names the offending key if any.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& what, std::string key_name = {}, int line_number = 0)
        : std::runtime_error(what), key(std::move(key_name)), line(line_number) {}
    std::string key;
    int line;
};

enum class JobKind { Static, Dynamic, Pendulum, DetProbe, ConvergenceSweep, FrequencySweep };

[[nodiscard]] std::string to_string(JobKind job);
[[nodiscard]] JobKind job_kind_from_string(const std::string& text);

/// Cross-section either given by its stiffness/mass resultants or derived from
/// a solid circular section.
struct MaterialSpec {
    enum class Mode { Direct, Circular };
    Mode mode = Mode::Direct;
    double youngs_modulus = 0.0;  ///< circular: E [N/m^2]
    double density = 0.0;         ///< circular: rho [kg/m^3]
    double diameter = 0.0;        ///< circular: [m]
    double EA = 1.0;              ///< direct
    double EI = 1.0;              ///< direct
    double A_rho = 1.0;           ///< direct
    double I_rho = 0.0;           ///< direct
    double alpha = 1.0;

    [[nodiscard]] MaterialParams params() const;
    bool operator==(const MaterialSpec&) const = default;
};

/// One load entry of a scenario; only the fields of its kind are meaningful.
struct LoadSpec {
    enum class Kind { Point, Gravity, Follower, TipMoment, Pulsating, Flow };
    Kind kind = Kind::Point;
    double s = 0.0;
    Vec3 vector = Vec3::Zero();  ///< point: force, gravity: g, tip_moment: moment, pulsating: direction
    double t_c = 0.0;            ///< point: vanishing-load duration (0 = constant)
    double f0 = 0.0;             ///< follower magnitude
    Vec3 normal = Vec3::UnitY(); ///< follower plane normal
    double amplitude = 0.0;      ///< pulsating A_F
    double frequency_hz = 0.0;   ///< pulsating omega_F / (2 pi)
    FrequencyConvention convention = FrequencyConvention::Printed;
    // Flow
    double C_M = 0.0;
    double C_N = 0.0;
    double C_T = 0.0;
    double rho_f = 0.0;
    double diameter = 0.0;
    FreestreamProfile::Kind profile = FreestreamProfile::Kind::Still;
    double v0 = 0.0;
    double beta0_deg = 0.0;
    double profile_length = 1.0;
    int axis = 2;
    Vec3 flow_direction = Vec3::UnitX();
    double modulation_amplitude = 0.0;
    double modulation_omega = 0.0;
    std::string table_file;

    bool operator==(const LoadSpec&) const = default;
};

[[nodiscard]] std::string to_string(LoadSpec::Kind kind);

/// Converts to the library load; table profiles are read from `table_file`.
[[nodiscard]] LoadCase make_load(const LoadSpec& spec);

/// A fully materialized, validated job description.
struct Scenario {
    std::string preset;  ///< name of the preset the scenario was derived from ("" if none)
    std::string name = "scenario";
    JobKind job = JobKind::Dynamic;
    std::uint64_t seed = 1;

    // Geometry and discretization
    double length = 1.0;
    Vec3 origin = Vec3::Zero();
    Vec3 director = Vec3::UnitX();
    int degree = 3;
    int continuity = 1;
    int n_elements = 20;
    int n_quad = 0;  ///< 0 = p + 1 Gauss points per element
    BoundaryKind bc_start = BoundaryKind::Clamped;
    BoundaryKind bc_end = BoundaryKind::Free;
    bool outlier_removal = true;

    MaterialSpec material;
    std::vector<LoadSpec> loads;

    // Solvers
    int load_steps = 6;
    double newton_tol = 1e-10;
    int newton_max_iters = 25;
    bool newton_normalize = false;
    double dt = 0.01;
    double t_end = 1.0;
    bool long_run = false;
    double long_run_t_end = 2000.0;
    InternalForceEvaluation internal_force = InternalForceEvaluation::Trapezoidal;
    CorrectionEvaluation correction = CorrectionEvaluation::Midpoint;
    double initial_perturbation = 0.0;  ///< random control-point offset, times the element size

    // Output and diagnostics
    std::vector<double> probes;  ///< arc-length positions written to the time series
    bool write_dofs = false;
    int output_every = 1;
    bool fft = false;
    double fft_threshold = 0.0;
    bool fft_hann = false;
    double band_lo = 0.0;
    double band_hi = 0.0;  ///< 0 = Nyquist frequency
    double steady_window = 100.0;
    double steady_probe = 0.0;  ///< arc length whose displacement is analyzed
    int steady_component = 0;

    // Pendulum
    PendulumParams pendulum;
    bool pendulum_wind = false;
    double pendulum_drag = 2.0;
    bool pendulum_quotient = false;

    // det probe
    std::vector<double> det_time_steps;
    std::vector<int> det_elements;
    std::vector<DetProbeBasis> det_bases;

    // Mass-perturbation sweep: one dynamic run per alpha, compared with the reference alpha
    std::vector<double> sweep_alphas;
    double sweep_reference_alpha = 1.0;

    // Convergence sweep against the roll-up circle
    int convergence_load_steps = 24;
    std::vector<int> convergence_elements;
    std::vector<std::pair<int, int>> convergence_spaces;  ///< (degree, continuity)

    // Frequency sweep of the first pulsating load
    std::vector<double> sweep_frequencies_hz;

    [[nodiscard]] double effective_t_end() const { return long_run ? long_run_t_end : t_end; }
    [[nodiscard]] MaterialParams material_params() const { return material.params(); }
    [[nodiscard]] std::vector<LoadCase> load_cases() const;
    [[nodiscard]] BoundarySpec boundary() const { return {bc_start, bc_end, outlier_removal}; }
    [[nodiscard]] NewtonOptions newton() const;
    [[nodiscard]] DynamicOptions dynamic_options() const;
    [[nodiscard]] PendulumParams pendulum_params() const;
    [[nodiscard]] std::optional<PendulumWind> pendulum_wind_model() const;

    bool operator==(const Scenario&) const = default;
};

/// Names of all built-in presets, in listing order.
[[nodiscard]] const std::vector<std::string>& preset_names();
/// One-line description of a preset.
[[nodiscard]] std::string preset_description(const std::string& name);
/// Key-value text of a preset; throws ScenarioError for unknown names.
[[nodiscard]] const std::string& preset_text(const std::string& name);

/// Parses the key-value format: one `key = value` per line, '#' starts a
/// comment. A `preset` key seeds every other value; the remaining keys, then
/// the `overrides` ("key=value"), are applied on top. Throws ScenarioError.
[[nodiscard]] Scenario parse_scenario(const std::string& text,
                                      const std::vector<std::string>& overrides = {});

/// Semantic checks; throws ScenarioError naming the offending key.
void validate_scenario(const Scenario& scenario);

/// Every value written out explicitly; parse_scenario(serialize_scenario(s)) == s.
[[nodiscard]] std::string serialize_scenario(const Scenario& scenario);

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double value);

}  // namespace krod
