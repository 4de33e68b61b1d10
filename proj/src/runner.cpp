#include <krod/runner.hpp>

#include <krod/diagnostics.hpp>
#include <krod/pendulum.hpp>
#include <krod/static_solver.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace krod {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

std::string probe_label(double s) { return "s" + format_double(s); }

/// Runs job(i) for i in [0, n) on `workers` threads; results are indexed, so
/// the output order does not depend on scheduling.
void parallel_for(int n, int workers, const std::function<void(int)>& job) {
    workers = std::clamp(workers, 1, std::max(n, 1));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

/// Shared state of one run: output directory, metadata under construction, files.
struct JobContext {
    const Scenario& sc;
    std::filesystem::path dir;
    RunSettings settings;
    RunOutcome outcome;
    json results = json::object();
    json failure = nullptr;

    std::filesystem::path file(const std::string& name) {
        auto p = dir / name;
        outcome.files.push_back(p);
        return p;
    }

    void fail(Termination status, double t, const std::string& message,
              const std::vector<double>& residuals = {}) {
        outcome.exit_code = kExitSolverFailure;
        outcome.status = status;
        outcome.message = message;
        failure = {{"status", to_string(status)},
                   {"time", t},
                   {"message", message},
                   {"residual_norms", residuals}};
    }
};

// ---------------------------------------------------------------------------
// Static
// ---------------------------------------------------------------------------

void run_static_job(JobContext& ctx) {
    const Scenario& sc = ctx.sc;
    const RodModel model = build_model(sc);
    StaticOptions opts;
    opts.n_load_steps = sc.load_steps;
    opts.newton = sc.newton();
    const Vector q0 = initial_configuration(sc, model);
    const StaticResult res = solve_static(model, opts, q0);

    std::vector<std::string> header = {"step", "lambda", "newton_iters"};
    for (double s : sc.probes)
        for (const char* c : {"x", "y", "z"}) header.push_back("phi_" + std::string(c) + "_" + probe_label(s));
    header.push_back("strain_energy");
    CsvWriter csv(ctx.file("static_steps.csv"), header);
    const Vector zero = Vector::Zero(model.full_dim());
    auto write = [&](int step, double lambda, int iters, const Vector& q) {
        std::vector<std::string> row = {std::to_string(step), csv_number(lambda), std::to_string(iters)};
        for (double s : sc.probes) {
            const Vec3 p = axis_point(model.space(), q, s);
            for (int c = 0; c < 3; ++c) row.push_back(csv_number(p[c]));
        }
        row.push_back(csv_number(energies(model, q, zero).potential));
        csv.row(row);
    };
    write(0, 0.0, 0, q0);
    int max_iters = 0;
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
        write(static_cast<int>(k) + 1, res.steps[k].lambda, res.steps[k].iterations, res.steps[k].q);
        max_iters = std::max(max_iters, res.steps[k].iterations);
    }

    const Vector& q_final = res.steps.empty() ? q0 : res.steps.back().q;
    CsvWriter cfg(ctx.file("configuration.csv"), {"s", "x", "y", "z"});
    const int n_samples = 4 * sc.n_elements;
    for (int i = 0; i <= n_samples; ++i) {
        const double s = sc.length * i / n_samples;
        const Vec3 p = axis_point(model.space(), q_final, s);
        cfg.row({csv_number(s), csv_number(p.x()), csv_number(p.y()), csv_number(p.z())});
    }

    ctx.results["converged_steps"] = res.steps.size();
    ctx.results["max_newton_iterations"] = max_iters;
    ctx.results["end_gap"] =
        (axis_point(model.space(), q_final, sc.length) - axis_point(model.space(), q_final, 0.0)).norm();
    if (!res.converged)
        ctx.fail(Termination::NewtonFailure, static_cast<double>(res.failed_step), res.message,
                 res.failed_attempt.residuals);
}

// ---------------------------------------------------------------------------
// Dynamic
// ---------------------------------------------------------------------------

void run_single_dynamic(JobContext& ctx) {
    const Scenario& sc = ctx.sc;
    const RodModel model = build_model(sc);
    DynamicOptions opts = sc.dynamic_options();
    const int n_steps = step_count(opts.t_end, opts.dt);
    opts.store_every = std::max(1, n_steps);  // states are sampled by the observer instead

    struct Sample {
        int step;
        double t;
        std::vector<double> values;  // probe coordinates, then optional dofs
    };
    std::vector<Sample> samples;
    auto sample = [&](int step, double t, const Vector& q) {
        Sample smp{step, t, {}};
        for (double s : sc.probes) {
            const Vec3 p = axis_point(model.space(), q, s);
            smp.values.insert(smp.values.end(), {p.x(), p.y(), p.z()});
        }
        if (sc.write_dofs) smp.values.insert(smp.values.end(), q.data(), q.data() + q.size());
        samples.push_back(std::move(smp));
    };
    const Vector q0 = initial_configuration(sc, model);
    const Vector v0 = Vector::Zero(model.full_dim());
    sample(0, 0.0, q0);
    const Trajectory traj = run_dynamic(model, opts, q0, v0,
                                        [&](int step, double t, const Vector& q, const Vector&) {
                                            if (step % sc.output_every == 0) sample(step, t, q);
                                            return true;
                                        });

    std::vector<std::string> header = {"step", "t"};
    for (double s : sc.probes)
        for (const char* c : {"x", "y", "z"}) header.push_back("phi_" + std::string(c) + "_" + probe_label(s));
    if (sc.write_dofs)
        for (int i = 0; i < model.full_dim(); ++i) header.push_back("q" + std::to_string(i));
    for (const char* h : {"kinetic", "potential", "total", "linear_x", "linear_y", "linear_z",
                          "angular_x", "angular_y", "angular_z", "newton_iters"})
        header.emplace_back(h);
    CsvWriter csv(ctx.file("timeseries.csv"), header);
    for (const auto& smp : samples) {
        const auto idx = static_cast<std::size_t>(smp.step);
        if (idx >= traj.diagnostics.size()) break;
        const auto& d = traj.diagnostics[idx];
        std::vector<std::string> row = {std::to_string(smp.step), csv_number(smp.t)};
        for (double v : smp.values) row.push_back(csv_number(v));
        for (double v : {d.kinetic, d.potential, d.total, d.linear.x(), d.linear.y(), d.linear.z(),
                         d.angular.x(), d.angular.y(), d.angular.z()})
            row.push_back(csv_number(v));
        row.push_back(std::to_string(traj.newton_iters[idx]));
        csv.row(row);
    }

    double e_max = 0.0, k_max = 0.0;
    int it_max = 0;
    for (const auto& d : traj.diagnostics) {
        e_max = std::max(e_max, d.total);
        k_max = std::max(k_max, d.kinetic);
    }
    for (int it : traj.newton_iters) it_max = std::max(it_max, it);
    ctx.results["steps_completed"] = traj.newton_iters.size() - 1;
    ctx.results["max_total_energy"] = e_max;
    ctx.results["max_kinetic_energy"] = k_max;
    ctx.results["max_newton_iterations"] = it_max;
    if (!traj.diagnostics.empty()) {
        const auto& last = traj.diagnostics.back();
        ctx.results["final"] = {{"t", last.t},
                                {"kinetic", last.kinetic},
                                {"potential", last.potential},
                                {"total", last.total},
                                {"linear", vec_json(last.linear)},
                                {"angular", vec_json(last.angular)}};
    }

    if (sc.fft && traj.diagnostics.size() > 2) {
        const Spectrum spec = fft_kinetic(traj, sc.fft_threshold, sc.fft_hann);
        CsvWriter sp(ctx.file("spectrum.csv"), {"frequency", "magnitude"});
        for (std::size_t k = 0; k < spec.frequency.size(); ++k)
            sp.row({csv_number(spec.frequency[k]), csv_number(spec.magnitude[k])});
        const double nyquist = 0.5 / sc.dt;
        const double hi = sc.band_hi > 0.0 ? sc.band_hi : nyquist;
        ctx.results["fft"] = {{"samples_used", spec.samples_used},
                              {"threshold", sc.fft_threshold},
                              {"window", sc.fft_hann ? "hann" : "rectangular"},
                              {"band", json::array({sc.band_lo, hi})},
                              {"band_integral", band_integral(spec, sc.band_lo, hi)}};
    }
    if (traj.status != Termination::Completed)
        ctx.fail(traj.status, traj.failure_time, traj.message, traj.failure_residuals);
}

void run_alpha_sweep(JobContext& ctx) {
    const Scenario& sc = ctx.sc;
    const auto& alphas = sc.sweep_alphas;
    const int n = static_cast<int>(alphas.size());
    std::vector<Trajectory> runs(static_cast<std::size_t>(n));
    std::vector<std::unique_ptr<RodModel>> models(static_cast<std::size_t>(n));
    parallel_for(n, ctx.settings.workers, [&](int i) {
        Scenario s = sc;
        s.material.alpha = alphas[static_cast<std::size_t>(i)];
        models[static_cast<std::size_t>(i)] = std::make_unique<RodModel>(build_model(s));
        DynamicOptions opts = s.dynamic_options();
        opts.store_every = s.output_every;
        opts.record_diagnostics = false;
        const auto& model = *models[static_cast<std::size_t>(i)];
        runs[static_cast<std::size_t>(i)] =
            run_dynamic(model, opts, initial_configuration(s, model), Vector::Zero(model.full_dim()));
    });

    const auto ref_it = std::find(alphas.begin(), alphas.end(), sc.sweep_reference_alpha);
    const auto& ref = runs[static_cast<std::size_t>(ref_it - alphas.begin())];
    std::size_t rows = ref.times.size();
    for (const auto& r : runs) rows = std::min(rows, r.times.size());

    std::vector<std::string> header = {"t"};
    for (double a : alphas) header.push_back("change_alpha_" + format_double(a));
    CsvWriter csv(ctx.file("alpha_sweep.csv"), header);
    const SplineSpace& space = models.front()->space();
    std::vector<double> final_change(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < rows; ++k) {
        std::vector<std::string> row = {csv_number(ref.times[k])};
        for (int i = 0; i < n; ++i) {
            const auto& r = runs[static_cast<std::size_t>(i)];
            const double c = k == 0 ? 0.0 : relative_l2_change(space, r.q[k], ref.q[k]);
            final_change[static_cast<std::size_t>(i)] = c;
            row.push_back(csv_number(c));
        }
        csv.row(row);
    }
    json per_alpha = json::array();
    for (int i = 0; i < n; ++i) {
        const auto& r = runs[static_cast<std::size_t>(i)];
        per_alpha.push_back({{"alpha", alphas[static_cast<std::size_t>(i)]},
                             {"status", to_string(r.status)},
                             {"final_time", r.times.empty() ? 0.0 : r.times.back()},
                             {"final_relative_change", final_change[static_cast<std::size_t>(i)]}});
        if (r.status != Termination::Completed && ctx.outcome.exit_code == kExitSuccess)
            ctx.fail(r.status, r.failure_time,
                     "alpha = " + format_double(alphas[static_cast<std::size_t>(i)]) + ": " + r.message,
                     r.failure_residuals);
    }
    ctx.results["reference_alpha"] = sc.sweep_reference_alpha;
    ctx.results["runs"] = per_alpha;
}

// ---------------------------------------------------------------------------
// Pendulum
// ---------------------------------------------------------------------------

void run_pendulum_job(JobContext& ctx) {
    const Scenario& sc = ctx.sc;
    const PendulumParams p = sc.pendulum_params();
    const auto wind = sc.pendulum_wind_model();
    const PendulumTrajectory traj = pendulum_run(p, wind);

    CsvWriter csv(ctx.file("timeseries.csv"),
                  {"step", "t", "theta", "eta", "theta_dot", "eta_dot", "x", "y", "kinetic",
                   "potential", "total", "j3", "newton_iters"});
    for (std::size_t i = 0; i < traj.records.size(); i += static_cast<std::size_t>(sc.output_every)) {
        const auto& r = traj.records[i];
        const Vec3 x = pendulum_position(p, r.state);
        csv.row({std::to_string(i), csv_number(r.t), csv_number(r.state.theta), csv_number(r.state.eta),
                 csv_number(r.state.theta_dot), csv_number(r.state.eta_dot), csv_number(x.x()),
                 csv_number(x.y()), csv_number(r.kinetic), csv_number(r.potential),
                 csv_number(r.total), csv_number(r.j3), std::to_string(r.iterations)});
    }

    const auto& first = traj.records.front();
    double e_dev = 0.0, j_dev = 0.0, k_late = 0.0;
    for (const auto& r : traj.records) {
        e_dev = std::max(e_dev, std::abs(r.total - first.total));
        j_dev = std::max(j_dev, std::abs(r.j3 - first.j3));
    }
    const double t_late = 17.0;
    for (const auto& r : traj.records)
        if (r.t > t_late) k_late = std::max(k_late, r.kinetic);
    ctx.results["initial_energy"] = first.total;
    ctx.results["initial_j3"] = first.j3;
    ctx.results["max_energy_deviation"] = e_dev;
    ctx.results["max_relative_energy_deviation"] =
        first.total != 0.0 ? e_dev / std::abs(first.total) : e_dev;
    ctx.results["max_j3_deviation"] = j_dev;
    ctx.results["max_kinetic_after_17s"] = k_late;

    if (traj.status != Termination::Completed) {
        ctx.fail(traj.status, traj.failure_time, traj.message);
        return;
    }
    if (sc.pendulum_quotient) {
        const auto q = pendulum_precision_quotient(p, wind);
        CsvWriter qc(ctx.file("precision_quotient.csv"), {"t", "Q_II"});
        for (std::size_t i = 0; i < q.size(); ++i)
            qc.row({csv_number(i * p.dt), csv_number(q[i])});
        const auto summary = summarize_quotient(q, 3.5, 4.5);
        ctx.results["precision_quotient"] = {{"band", json::array({3.5, 4.5})},
                                             {"fraction_in_band", summary.fraction_in_band},
                                             {"valid_samples", summary.valid}};
    }
}

// ---------------------------------------------------------------------------
// det probe
// ---------------------------------------------------------------------------

void run_det_probe_job(JobContext& ctx) {
    const Scenario& sc = ctx.sc;
    const MaterialParams mat = sc.material_params();
    struct Cell {
        double dt;
        int elements;
        DetProbeBasis basis;
        double det = 0.0;
    };
    std::vector<Cell> cells;
    for (double dt : sc.det_time_steps)
        for (int ne : sc.det_elements)
            for (auto b : sc.det_bases) cells.push_back({dt, ne, b, 0.0});
    parallel_for(static_cast<int>(cells.size()), ctx.settings.workers, [&](int i) {
        auto& c = cells[static_cast<std::size_t>(i)];
        c.det = linear_beam_det_probe(c.basis, c.elements, sc.length, c.dt, mat.EI, mat.A_rho);
    });
    CsvWriter csv(ctx.file("det_probe.csv"), {"dt", "elements", "basis", "det", "det_minus_one"});
    double worst = 0.0;
    for (const auto& c : cells) {
        csv.row({csv_number(c.dt), std::to_string(c.elements), to_string(c.basis), csv_number(c.det),
                 csv_number(c.det - 1.0)});
        worst = std::max(worst, std::abs(c.det - 1.0));
    }
    ctx.results["cells"] = cells.size();
    ctx.results["max_abs_det_minus_one"] = worst;
}

// ---------------------------------------------------------------------------
// Convergence sweep
// ---------------------------------------------------------------------------

void run_convergence_job(JobContext& ctx) {
    const Scenario& sc = ctx.sc;
    auto spaces = sc.convergence_spaces;
    if (spaces.empty()) spaces.emplace_back(sc.degree, sc.continuity);
    const MaterialParams mat = sc.material_params();
    const double lambda =
        sc.loads.front().vector.z() * sc.length / (2.0 * std::numbers::pi * mat.EI);
    const ReferenceCurve reference = roll_up_reference(sc.length, lambda);

    struct Cell {
        int degree, continuity, elements;
        bool converged = false;
        int max_iters = 0;
        ErrorNorms err;
        std::string message;
    };
    std::vector<Cell> cells;
    for (const auto& [p, r] : spaces)
        for (int ne : sc.convergence_elements) cells.push_back({p, r, ne, false, 0, {}, {}});
    parallel_for(static_cast<int>(cells.size()), ctx.settings.workers, [&](int i) {
        auto& c = cells[static_cast<std::size_t>(i)];
        const RodModel model = build_model(sc, c.degree, c.continuity, c.elements);
        StaticOptions opts;
        opts.n_load_steps = sc.convergence_load_steps;
        opts.newton = sc.newton();
        const auto res = solve_static(model, opts, initial_configuration(sc, model));
        c.converged = res.converged;
        c.message = res.message;
        for (const auto& st : res.steps) c.max_iters = std::max(c.max_iters, st.iterations);
        if (res.converged) c.err = error_norms(model.space(), res.steps.back().q, reference);
    });

    CsvWriter csv(ctx.file("convergence.csv"),
                  {"degree", "continuity", "elements", "converged", "max_newton_iters", "L2",
                   "H1_semi", "H2_semi", "rate_L2", "rate_H1", "rate_H2"});
    json table = json::array();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        double rates[3] = {nan, nan, nan};
        if (i > 0 && cells[i - 1].degree == c.degree && cells[i - 1].continuity == c.continuity &&
            c.converged && cells[i - 1].converged) {
            const auto& prev = cells[i - 1];
            const double ratio = std::log(static_cast<double>(c.elements) / prev.elements);
            rates[0] = std::log(prev.err.L2 / c.err.L2) / ratio;
            rates[1] = std::log(prev.err.H1_semi / c.err.H1_semi) / ratio;
            rates[2] = std::log(prev.err.H2_semi / c.err.H2_semi) / ratio;
        }
        const double e0 = c.converged ? c.err.L2 : nan;
        const double e1 = c.converged ? c.err.H1_semi : nan;
        const double e2 = c.converged ? c.err.H2_semi : nan;
        csv.row({std::to_string(c.degree), std::to_string(c.continuity), std::to_string(c.elements),
                 c.converged ? "true" : "false", std::to_string(c.max_iters), csv_number(e0),
                 csv_number(e1), csv_number(e2), csv_number(rates[0]), csv_number(rates[1]),
                 csv_number(rates[2])});
        table.push_back({{"degree", c.degree},
                         {"continuity", c.continuity},
                         {"elements", c.elements},
                         {"converged", c.converged}});
        if (!c.converged && ctx.outcome.exit_code == kExitSuccess)
            ctx.fail(Termination::NewtonFailure, 0.0,
                     "p = " + std::to_string(c.degree) + ", r = " + std::to_string(c.continuity) +
                         ", elements = " + std::to_string(c.elements) + ": " + c.message);
    }
    ctx.results["load_steps"] = sc.convergence_load_steps;
    ctx.results["cells"] = table;
}

// ---------------------------------------------------------------------------
// Frequency sweep
// ---------------------------------------------------------------------------

void run_frequency_job(JobContext& ctx) {
    const Scenario& sc = ctx.sc;
    const auto pulsating = std::find_if(sc.loads.begin(), sc.loads.end(), [](const LoadSpec& l) {
        return l.kind == LoadSpec::Kind::Pulsating;
    });
    const auto load_index = static_cast<std::size_t>(pulsating - sc.loads.begin());
    const auto& freqs = sc.sweep_frequencies_hz;
    struct Cell {
        Termination status = Termination::Completed;
        double failure_time = 0.0;
        std::string message;
        SteadyStateStats stats;
    };
    std::vector<Cell> cells(freqs.size());
    parallel_for(static_cast<int>(freqs.size()), ctx.settings.workers, [&](int i) {
        Scenario s = sc;
        s.loads[load_index].frequency_hz = freqs[static_cast<std::size_t>(i)];
        const RodModel model = build_model(s);
        DynamicOptions opts = s.dynamic_options();
        const int n_steps = step_count(opts.t_end, opts.dt);
        opts.store_every = std::max(1, n_steps);
        opts.record_diagnostics = false;
        const Vector q0 = initial_configuration(s, model);
        const Vec3 x0 = axis_point(model.space(), q0, s.steady_probe);
        std::vector<double> times = {0.0};
        std::vector<double> series = {0.0};
        const auto traj = run_dynamic(model, opts, q0, Vector::Zero(model.full_dim()),
                                      [&](int, double t, const Vector& q, const Vector&) {
                                          const Vec3 x = axis_point(model.space(), q, s.steady_probe);
                                          times.push_back(t);
                                          series.push_back(x[s.steady_component] - x0[s.steady_component]);
                                          return true;
                                      });
        auto& c = cells[static_cast<std::size_t>(i)];
        c.status = traj.status;
        c.failure_time = traj.failure_time;
        c.message = traj.message;
        if (traj.status == Termination::Completed)
            c.stats = steady_state_stats(times, series, s.steady_window);
    });

    CsvWriter csv(ctx.file("frequency_sweep.csv"),
                  {"frequency_hz", "status", "mean", "amplitude", "periodic", "cycles"});
    json table = json::array();
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const auto& c = cells[i];
        const bool ok = c.status == Termination::Completed;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        csv.row({csv_number(freqs[i]), to_string(c.status), csv_number(ok ? c.stats.mean : nan),
                 csv_number(ok ? c.stats.amplitude : nan), ok && c.stats.periodic ? "true" : "false",
                 std::to_string(ok ? c.stats.cycles : 0)});
        table.push_back({{"frequency_hz", freqs[i]},
                         {"status", to_string(c.status)},
                         {"periodic", ok && c.stats.periodic}});
        if (!ok && ctx.outcome.exit_code == kExitSuccess)
            ctx.fail(c.status, c.failure_time,
                     "frequency " + format_double(freqs[i]) + " Hz: " + c.message);
    }
    ctx.results["horizon"] = sc.effective_t_end();
    ctx.results["steady_window"] = sc.steady_window;
    ctx.results["frequencies"] = table;
}

json frequency_conventions(const Scenario& sc) {
    json out = json::array();
    for (std::size_t i = 0; i < sc.loads.size(); ++i) {
        const auto& l = sc.loads[i];
        if (l.kind != LoadSpec::Kind::Pulsating) continue;
        out.push_back({{"load", i + 1},
                       {"convention", to_string(l.convention)},
                       {"argument", l.convention == FrequencyConvention::Printed
                                        ? "sin((omega_F / 2 pi) t), omega_F = 2 pi frequency_hz"
                                        : "sin(omega_F t), omega_F = 2 pi frequency_hz"}});
    }
    return out;
}

}  // namespace

Vec3 axis_point(const SplineSpace& space, const Vector& q, double s) {
    return evaluate_fields(evaluate_basis(space, s), q).phi;
}

RodModel build_model(const Scenario& sc, int degree, int continuity, int n_elements) {
    SplineSpace space = make_space(degree, continuity, n_elements, sc.length);
    const Vector reference = straight_configuration(space, sc.origin, sc.director);
    return RodModel(std::move(space), sc.material_params(), sc.boundary(), sc.director, reference,
                    sc.load_cases(), sc.n_quad);
}

RodModel build_model(const Scenario& sc) {
    return build_model(sc, sc.degree, sc.continuity, sc.n_elements);
}

Vector initial_configuration(const Scenario& sc, const RodModel& model) {
    Vector q = model.reference();
    if (sc.initial_perturbation > 0.0) {
        std::mt19937_64 rng(sc.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double h = model.space().element_size();
        for (int i = 0; i < q.size(); ++i) q[i] += sc.initial_perturbation * h * u(rng);
        q = model.expand(model.reduce(q));
    }
    return q;
}

int workers_from_environment() {
    if (const char* env = std::getenv("KROD_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("KROD_WORKERS must be a positive integer");
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

RunOutcome run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                        const RunSettings& settings) {
    validate_scenario(scenario);
    std::filesystem::create_directories(out_dir);
    std::filesystem::remove(out_dir / "failure.json");  // a record left by an earlier run
    JobContext ctx{scenario, out_dir, settings, {}};

    try {
        switch (scenario.job) {
            case JobKind::Static: run_static_job(ctx); break;
            case JobKind::Dynamic:
                if (scenario.sweep_alphas.empty())
                    run_single_dynamic(ctx);
                else
                    run_alpha_sweep(ctx);
                break;
            case JobKind::Pendulum: run_pendulum_job(ctx); break;
            case JobKind::DetProbe: run_det_probe_job(ctx); break;
            case JobKind::ConvergenceSweep: run_convergence_job(ctx); break;
            case JobKind::FrequencySweep: run_frequency_job(ctx); break;
        }
    } catch (const DegenerateConfiguration& e) {
        ctx.fail(Termination::Degenerate, 0.0,
                 std::string(e.what()) + " (s = " + format_double(e.location) + ")");
    } catch (const LinearSolveError& e) {
        ctx.fail(Termination::NewtonFailure, 0.0, e.what());
    }

    if (ctx.outcome.exit_code == kExitSolverFailure) {
        std::ofstream f(ctx.file("failure.json"));
        f << ctx.failure.dump(2) << '\n';
    }

    json meta;
    meta["software"] = {{"name", "krod"}, {"version", std::string(kVersion)}};
    meta["job"] = to_string(scenario.job);
    meta["preset"] = scenario.preset;
    meta["name"] = scenario.name;
    meta["status"] = to_string(ctx.outcome.status);
    meta["exit_code"] = ctx.outcome.exit_code;
    meta["failure"] = ctx.failure;
    meta["results"] = ctx.results;
    meta["frequency_conventions"] = frequency_conventions(scenario);
    json files = json::array();
    for (const auto& p : ctx.outcome.files) files.push_back(p.filename().string());
    files.push_back("metadata.json");
    meta["files"] = files;
    meta["scenario"] = serialize_scenario(scenario);
    if (settings.write_timestamp) meta["timestamp"] = utc_timestamp();
    {
        std::ofstream f(ctx.file("metadata.json"));
        if (!f) throw std::runtime_error("cannot write metadata.json");
        f << meta.dump(2) << '\n';
    }
    return ctx.outcome;
}

}  // namespace krod
