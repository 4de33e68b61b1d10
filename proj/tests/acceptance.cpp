// Acceptance run: one PASS/FAIL line per criterion, computed from the built-in
// presets. Criteria run concurrently; the report order is fixed.

#include "test_support.hpp"

#include <krod/diagnostics.hpp>
#include <krod/dynamic_solver.hpp>
#include <krod/pendulum.hpp>
#include <krod/runner.hpp>
#include <krod/scenario.hpp>
#include <krod/static_solver.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace krod;
using krod::testing::fd_jacobian;
using krod::testing::perturbed_state;
using krod::testing::random_vector;
using krod::testing::relative_difference;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Scenario preset(const std::string& name, const std::vector<std::string>& overrides = {}) {
    return parse_scenario("preset = " + name + "\n", overrides);
}

Trajectory run_preset(const Scenario& sc, const StepObserver& observer = {}) {
    const RodModel model = build_model(sc);
    const Vector q0 = initial_configuration(sc, model);
    DynamicOptions opts = sc.dynamic_options();
    return run_dynamic(model, opts, q0, Vector::Zero(model.full_dim()), observer);
}

int first_index_after(const Trajectory& tr, double t) {
    for (std::size_t i = 0; i < tr.diagnostics.size(); ++i)
        if (tr.diagnostics[i].t >= t - 1e-12) return static_cast<int>(i);
    return static_cast<int>(tr.diagnostics.size());
}

// ---------------------------------------------------------------------------
// 1. Tangent consistency
// ---------------------------------------------------------------------------

Outcome tangents() {
    MaterialParams mat;
    mat.EA = 100.0;
    mat.EI = 10.0;
    mat.A_rho = 1.0;
    mat.I_rho = 0.1;
    FlowLoad wind;
    wind.coeffs = {1.0, 1.2, 0.3, 1.2, 0.05};
    wind.profile = FreestreamProfile::rotating(3.0, kPi / 4.0, 2.0);
    FlowLoad current;
    current.coeffs = {0.8, 1.0, 0.5, 1000.0, 0.02};
    current.profile = FreestreamProfile::parabolic(2.0, 2.0, Vec3(0.0, 0.6, 0.8), 2, 0.3, 5.0);
    const std::vector<LoadCase> static_loads = {Gravity{Vec3(0.0, -3.0, 0.5)},
                                                PointLoad{1.3, Vec3(0.2, 1.0, -0.4), 0.0},
                                                Follower2D{2.0, 1.5, Vec3::UnitY()},
                                                TipMoment{Vec3(0.3, -0.2, 2.0)}};
    std::vector<LoadCase> dynamic_loads = static_loads;
    dynamic_loads.push_back(PointLoad{0.4, Vec3(1.0, 2.0, 3.0), 0.5});
    dynamic_loads.push_back(Pulsating{2.0, 3.0, 2.0 * kPi, Vec3::UnitX(), FrequencyConvention::Printed});
    dynamic_loads.push_back(wind);
    dynamic_loads.push_back(current);

    auto make = [&](int p, std::vector<LoadCase> loads) {
        auto space = make_space(p, p - 1, 4, 2.0);
        const Vector ref = straight_configuration(space, Vec3::Zero(), Vec3::UnitX());
        return RodModel(space, mat, {BoundaryKind::Free, BoundaryKind::Free, false}, Vec3::UnitX(), ref,
                        std::move(loads));
    };
    auto only = [](bool inertia, bool correction, bool internal, bool loads, bool flow) {
        DynamicTerms t;
        t.inertia = inertia;
        t.correction = correction;
        t.internal = internal;
        t.loads = loads;
        t.flow = flow;
        return t;
    };
    struct Part {
        const char* name;
        DynamicTerms terms;
    };
    std::vector<Part> parts = {{"all", DynamicTerms{}},
                               {"inertia", only(true, false, false, false, false)},
                               {"correction", only(false, true, false, false, false)},
                               {"internal", only(false, false, true, false, false)},
                               {"loads", only(false, false, false, true, false)},
                               {"flow", only(false, false, false, false, true)}};
    for (auto eval : {InternalForceEvaluation::Midpoint, InternalForceEvaluation::DiscreteGradient}) {
        DynamicTerms t;
        t.internal_eval = eval;
        parts.push_back({eval == InternalForceEvaluation::Midpoint ? "all/midpoint" : "all/discrete_gradient", t});
    }

    std::mt19937 rng(2024);
    double worst = 0.0;
    std::string worst_case = "-";
    int checks = 0;
    auto record = [&](double e, const std::string& what) {
        ++checks;
        if (e > worst) {
            worst = e;
            worst_case = what;
        }
    };
    for (int p : {2, 3}) {
        const auto sm = make(p, static_loads);
        const auto dm = make(p, dynamic_loads);
        for (int trial = 0; trial < 20; ++trial) {
            const Vector q = perturbed_state(sm, rng, 0.1);
            for (bool internal : {true, false}) {
                StaticTerms terms;
                terms.internal = internal;
                const auto sys = assemble_static(sm, q, 0.7, true, terms);
                const double h = 1e-6 * std::max(1.0, q.lpNorm<Eigen::Infinity>());
                const Matrix fd = fd_jacobian(
                    [&](const Vector& x) { return assemble_static(sm, x, 0.7, false, terms).residual; }, q, h);
                record(relative_difference(Matrix(sys.tangent), fd),
                       fmt("static%s p=%d", internal ? "" : "/loads", p));
            }
            const Vector q0 = perturbed_state(dm, rng, 0.1);
            const Vector v0 = random_vector(dm.full_dim(), rng, 0.8);
            const Vector q1 = q0 + 0.05 * v0 + random_vector(dm.full_dim(), rng, 0.01);
            const StepContext ctx{&q0, &v0, 0.13, 0.05};
            for (const auto& part : parts) {
                const auto sys = assemble_dynamic_step(dm, ctx, q1, true, part.terms);
                const double h = 1e-6 * std::max(1.0, q1.lpNorm<Eigen::Infinity>());
                const Matrix fd = fd_jacobian(
                    [&](const Vector& x) { return assemble_dynamic_step(dm, ctx, x, false, part.terms).residual; },
                    q1, h);
                record(relative_difference(Matrix(sys.tangent), fd), fmt("dynamic/%s p=%d", part.name, p));
            }
        }
    }
    return {worst < 1e-4, fmt("%d tangent checks, worst relative difference %.2e (%s), limit 1e-4", checks,
                              worst, worst_case.c_str())};
}

// ---------------------------------------------------------------------------
// 2. Roll-up closure
// ---------------------------------------------------------------------------

Outcome roll_up_closure() {
    const auto sc = preset("roll_up");
    const RodModel model = build_model(sc);
    StaticOptions opts;
    opts.n_load_steps = sc.load_steps;
    opts.newton = sc.newton();
    const auto res = solve_static(model, opts, model.reference());
    if (!res.converged) return {false, "static solve failed: " + res.message};
    const Vector& q = res.steps.back().q;
    const double gap = (axis_point(model.space(), q, sc.length) - axis_point(model.space(), q, 0.0)).norm();
    int max_iters = 0;
    std::string iters;
    for (const auto& s : res.steps) {
        max_iters = std::max(max_iters, s.iterations);
        iters += (iters.empty() ? "" : ",") + std::to_string(s.iterations);
    }
    const bool closed = gap < 1e-2 * sc.length;
    const bool fast = max_iters <= 6;
    return {closed && fast,
            fmt("|phi(L)-phi(0)| = %.3e (limit %.1e) %s; Newton iterations per step [%s], max %d (limit 6) %s", gap,
                1e-2 * sc.length, closed ? "ok" : "FAIL", iters.c_str(), max_iters, fast ? "ok" : "FAIL")};
}

// ---------------------------------------------------------------------------
// 3. Roll-up convergence rates
// ---------------------------------------------------------------------------

Outcome roll_up_rates() {
    const auto sc = preset("roll_up");
    const std::vector<std::pair<int, int>> spaces = {{2, 1}, {3, 2}};
    const auto& meshes = sc.convergence_elements;
    std::vector<std::future<ErrorNorms>> jobs;
    for (const auto& [p, r] : spaces)
        for (int ne : meshes)
            jobs.push_back(std::async(std::launch::async, [&sc, p = p, r = r, ne] {
                const RodModel model = build_model(sc, p, r, ne);
                StaticOptions opts;
                opts.n_load_steps = sc.convergence_load_steps;
                opts.newton = sc.newton();
                const auto res = solve_static(model, opts, model.reference());
                if (!res.converged)
                    return ErrorNorms{std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::quiet_NaN()};
                return error_norms(model.space(), res.steps.back().q, roll_up_reference(sc.length));
            }));
    std::vector<std::vector<ErrorNorms>> errors(spaces.size());
    for (std::size_t k = 0; k < jobs.size(); ++k) errors[k / meshes.size()].push_back(jobs[k].get());

    bool pass = true;
    std::ostringstream out;
    std::vector<std::vector<double>> l2_rates(spaces.size());
    for (std::size_t s = 0; s < spaces.size(); ++s) {
        const int p = spaces[s].first;
        out << "p=" << p << " r=" << spaces[s].second << " H2 rates";
        for (std::size_t i = 1; i < meshes.size(); ++i) {
            const double ratio = static_cast<double>(meshes[i]) / meshes[i - 1];
            const double h2 = std::log(errors[s][i - 1].H2_semi / errors[s][i].H2_semi) / std::log(ratio);
            const double l2 = std::log(errors[s][i - 1].L2 / errors[s][i].L2) / std::log(ratio);
            l2_rates[s].push_back(l2);
            out << fmt(" %.2f", h2);
            if (!(std::abs(h2 - (p - 1)) <= 0.3)) pass = false;
        }
        out << " (expected " << p - 1 << " +-0.3); ";
    }
    double gap = 0.0;
    out << "L2 rates p=2/p=3:";
    for (std::size_t i = 0; i < l2_rates[0].size(); ++i) {
        out << fmt(" %.2f/%.2f", l2_rates[0][i], l2_rates[1][i]);
        gap = std::max(gap, std::abs(l2_rates[0][i] - l2_rates[1][i]));
    }
    if (!(gap < 0.4)) pass = false;
    out << fmt(", max gap %.2f (limit 0.4); %d load steps", gap, sc.convergence_load_steps);
    return {pass, out.str()};
}

// ---------------------------------------------------------------------------
// 4. Conservation after the loads vanish
// ---------------------------------------------------------------------------

struct ConservationNumbers {
    Termination status;
    double momentum_excess = 0.0;  ///< max over steps/components of |dX| - 1e-10 |X|
    double energy_drift = 0.0;     ///< max |E - E(t_c)| / E(t_c)
};

ConservationNumbers conservation(InternalForceEvaluation eval) {
    auto sc = preset("unconstrained_3d");
    sc.internal_force = eval;
    const auto tr = run_preset(sc);
    ConservationNumbers out{tr.status};
    double t_c = 0.0;
    for (const auto& l : sc.loads) t_c = std::max(t_c, l.t_c);
    const int i0 = first_index_after(tr, t_c);
    const double e0 = tr.diagnostics[static_cast<std::size_t>(i0)].total;
    for (std::size_t i = static_cast<std::size_t>(i0) + 1; i < tr.diagnostics.size(); ++i) {
        const auto& a = tr.diagnostics[i - 1];
        const auto& b = tr.diagnostics[i];
        for (int c = 0; c < 3; ++c) {
            out.momentum_excess = std::max(out.momentum_excess, std::abs(b.linear[c] - a.linear[c]) - 1e-10 * std::abs(a.linear[c]));
            out.momentum_excess = std::max(out.momentum_excess, std::abs(b.angular[c] - a.angular[c]) - 1e-10 * std::abs(a.angular[c]));
        }
        out.energy_drift = std::max(out.energy_drift, std::abs(b.total - e0) / e0);
    }
    return out;
}

Outcome conservation_criterion() {
    auto printed = std::async(std::launch::async, conservation, InternalForceEvaluation::Trapezoidal);
    const auto dg = conservation(InternalForceEvaluation::DiscreteGradient);
    const auto tr = printed.get();
    const bool pass = tr.status == Termination::Completed && tr.momentum_excess < 1e-12 && tr.energy_drift < 1e-6;
    return {pass, fmt("trapezoidal internal force (as stated): momentum excess per step %.2e (limit 1e-12 beyond "
                      "1e-10 relative), energy drift %.2e (limit 1e-6); discrete-gradient variant: %.2e, %.2e",
                      tr.momentum_excess, tr.energy_drift, dg.momentum_excess, dg.energy_drift)};
}

// ---------------------------------------------------------------------------
// 5. Outlier-removal robustness
// ---------------------------------------------------------------------------

Outcome outlier_robustness() {
    const auto on = preset("clamped_2d");
    auto off_run = std::async(std::launch::async, [] {
        return run_preset(preset("clamped_2d", {"bc.outlier_removal = false"}));
    });
    const auto tr = run_preset(on);
    const auto off = off_run.get();
    std::string diagnostic = fmt("removal OFF: %s", to_string(off.status).c_str());
    if (off.status != Termination::Completed) diagnostic += fmt(" at t = %.3f s", off.failure_time);
    double off_peak = 0.0;
    for (const auto& d : off.diagnostics) off_peak = std::max(off_peak, d.total);
    diagnostic += fmt(", peak total energy %.3g J", off_peak);

    if (tr.status != Termination::Completed)
        return {false, fmt("removal ON failed at t = %.3f: %s; %s", tr.failure_time, tr.message.c_str(),
                           diagnostic.c_str())};
    const double plateau = tr.diagnostics[static_cast<std::size_t>(first_index_after(tr, on.loads[0].t_c))].total;
    double peak = 0.0;
    for (const auto& d : tr.diagnostics) peak = std::max(peak, d.total);
    const bool pass = peak < 2.0 * plateau;
    return {pass, fmt("removal ON completed %.0f s (%zu steps, all converged); max total energy %.4g J vs "
                      "post-load plateau %.4g J (limit 2x); %s",
                      tr.diagnostics.back().t, tr.diagnostics.size() - 1, peak, plateau, diagnostic.c_str())};
}

// ---------------------------------------------------------------------------
// 6. Kinetic-energy spectrum in the outlier band
// ---------------------------------------------------------------------------

Outcome fft_evidence() {
    const std::vector<std::string> half_load = {"load.1.force = 0, 15, 0", "time.t_end = 100"};
    auto make = [&](bool removal) {
        auto o = half_load;
        o.push_back(std::string("bc.outlier_removal = ") + (removal ? "true" : "false"));
        return preset("clamped_2d", o);
    };
    const auto sc_on = make(true);
    const auto sc_off = make(false);
    auto off_run = std::async(std::launch::async, [&] { return run_preset(sc_off); });
    const auto on = run_preset(sc_on);
    const auto off = off_run.get();
    const double nyquist = 0.5 / sc_on.dt;
    const double hi = sc_on.band_hi > 0.0 ? sc_on.band_hi : nyquist;
    const Spectrum s_on = fft_kinetic(on, sc_on.fft_threshold);
    const Spectrum s_off = fft_kinetic(off, sc_off.fft_threshold);
    const double b_on = band_integral(s_on, sc_on.band_lo, hi);
    const double b_off = band_integral(s_off, sc_off.band_lo, hi);
    const double ratio = b_off / b_on;
    return {ratio >= 10.0,
            fmt("band [%g, %g] Hz, threshold %g J, rectangular window: OFF %.3e (%zu samples, run %s), ON %.3e "
                "(%zu samples, run %s), ratio %.2f (limit 10)",
                sc_on.band_lo, hi, sc_on.fft_threshold, b_off, s_off.samples_used, to_string(off.status).c_str(),
                b_on, s_on.samples_used, to_string(on.status).c_str(), ratio)};
}

// ---------------------------------------------------------------------------
// 7. Propagator determinant
// ---------------------------------------------------------------------------

Outcome det_probe() {
    const auto sc = preset("det_probe");
    const auto mat = sc.material_params();
    auto sweep = [&] {
        std::vector<double> out;
        for (double dt : sc.det_time_steps)
            for (int ne : sc.det_elements)
                for (auto b : sc.det_bases) out.push_back(linear_beam_det_probe(b, ne, sc.length, dt, mat.EI, mat.A_rho));
        return out;
    };
    const auto a = sweep();
    const auto b = sweep();
    double worst = 0.0;
    for (double d : a) worst = std::isfinite(d) ? std::max(worst, std::abs(d - 1.0)) : 1.0;
    const bool repeatable = a == b;
    return {worst < 1e-11 && repeatable,
            fmt("%zu cells (%zu steps x %zu meshes x %zu bases), max |det-1| = %.2e (limit 1e-11), bitwise repeatable: %s",
                a.size(), sc.det_time_steps.size(), sc.det_elements.size(), sc.det_bases.size(), worst,
                repeatable ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 8. Elastic pendulum
// ---------------------------------------------------------------------------

Outcome pendulum() {
    const auto free_sc = preset("pendulum_free");
    const auto wind_sc = preset("pendulum_wind");
    const auto fp = free_sc.pendulum_params();
    const auto wp = wind_sc.pendulum_params();
    const auto wind = wind_sc.pendulum_wind_model();

    auto q_free = std::async(std::launch::async, [&] { return pendulum_precision_quotient(fp); });
    auto q_wind = std::async(std::launch::async, [&] { return pendulum_precision_quotient(wp, wind); });
    const auto tr = pendulum_run(fp);
    const auto tw = pendulum_run(wp, wind);
    if (tr.status != Termination::Completed || tw.status != Termination::Completed)
        return {false, "pendulum run failed: " + tr.message + tw.message};

    const double j0 = tr.records.front().j3;
    const double e0 = tr.records.front().total;
    double dj = 0.0, de = 0.0;
    for (const auto& r : tr.records) {
        dj = std::max(dj, std::abs(r.j3 - j0));
        de = std::max(de, std::abs(r.total - e0) / std::abs(e0));
    }
    double ke = 0.0;
    for (const auto& r : tw.records)
        if (r.t > 17.0) ke = std::max(ke, r.kinetic);
    const auto sf = summarize_quotient(q_free.get(), 3.5, 4.5);
    const auto sw = summarize_quotient(q_wind.get(), 3.5, 4.5);

    const bool ok_j = dj < 1e-11, ok_e = de < 1e-8, ok_qf = sf.fraction_in_band >= 0.95,
               ok_qw = sw.fraction_in_band >= 0.95, ok_ke = ke < 1e-6;
    auto tag = [](bool ok) { return ok ? "ok" : "FAIL"; };
    return {ok_j && ok_e && ok_qf && ok_qw && ok_ke,
            fmt("force-free: j3(0) = %.12f, |dj3| %.2e (limit 1e-11) %s, |dE|/E %.2e (limit 1e-8) %s, Q_II in "
                "[3.5,4.5] for %.1f%% (limit 95%%) %s; wind: Q_II %.1f%% %s, max KE after 17 s %.2e J (limit 1e-6) %s",
                j0, dj, tag(ok_j), de, tag(ok_e), 100.0 * sf.fraction_in_band, tag(ok_qf),
                100.0 * sw.fraction_in_band, tag(ok_qw), ke, tag(ok_ke))};
}

// ---------------------------------------------------------------------------
// 9. Mass-perturbation study
// ---------------------------------------------------------------------------

Outcome mass_perturbation() {
    const auto sc = preset("mass_alpha_sweep");
    std::vector<std::future<Trajectory>> jobs;
    for (double a : sc.sweep_alphas)
        jobs.push_back(std::async(std::launch::async, [&sc, a] {
            Scenario run = sc;
            run.material.alpha = a;
            return run_preset(run);
        }));
    auto ref_sc = sc;
    ref_sc.material.alpha = sc.sweep_reference_alpha;
    std::vector<Vector> finals;
    for (auto& j : jobs) {
        const auto tr = j.get();
        if (tr.status != Termination::Completed) return {false, "run failed: " + tr.message};
        finals.push_back(tr.q.back());
    }
    const RodModel model = build_model(ref_sc);
    const auto ref_it = std::find(sc.sweep_alphas.begin(), sc.sweep_alphas.end(), sc.sweep_reference_alpha);
    const Vector& q_ref = finals[static_cast<std::size_t>(ref_it - sc.sweep_alphas.begin())];
    bool pass = true;
    std::ostringstream out;
    out << fmt("relative L2 change vs alpha = %g at t = %g s:", sc.sweep_reference_alpha, sc.t_end);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < finals.size(); ++i) {
        const double a = sc.sweep_alphas[i];
        const double c = relative_l2_change(model.space(), finals[i], q_ref);
        out << fmt(" alpha %g: %.3e;", a, c);
        if (a < sc.sweep_reference_alpha && !(c > 0.0)) pass = false;
        if (!(c < prev) && a != sc.sweep_reference_alpha) pass = false;
        if (a == sc.sweep_reference_alpha && c != 0.0) pass = false;
        prev = c;
    }
    out << (pass ? " monotonically decreasing, positive below the reference" : " ordering violated");
    return {pass, out.str()};
}

// ---------------------------------------------------------------------------
// 10. Swinging rod in wind
// ---------------------------------------------------------------------------

Outcome swinging_wind() {
    const auto sc = preset("swinging_wind");
    const auto tr = run_preset(sc);
    if (tr.status != Termination::Completed)
        return {false, fmt("run failed at t = %.3f: %s", tr.failure_time, tr.message.c_str())};
    double running = 0.0, worst = 0.0, k_after = 0.0;
    for (const auto& d : tr.diagnostics) {
        running = std::max(running, d.kinetic);
        if (d.t > 20.0) {
            worst = std::max(worst, d.kinetic / running);
            k_after = std::max(k_after, d.kinetic);
        }
    }
    return {worst < 0.01, fmt("max KE after 20 s %.3e J, running maximum %.3e J, worst ratio %.2e (limit 1e-2)",
                              k_after, running, worst)};
}

// ---------------------------------------------------------------------------
// 11. Pulsating load: single-frequency steady state and the oscillator oracle
// ---------------------------------------------------------------------------

double rk4_oscillator_amplitude(double f0, double m, double k, double b, double omega, double t_end, double window) {
    const double h = 1e-3;
    double x = 0.0, v = 0.0;
    auto acc = [&](double t, double xx, double vv) { return (f0 * std::sin(omega * t) - b * vv - k * xx) / m; };
    double lo = 1e300, hi = -1e300;
    const int n = static_cast<int>(std::llround(t_end / h));
    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        const double k1x = v, k1v = acc(t, x, v);
        const double k2x = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, x + 0.5 * h * k1x, v + 0.5 * h * k1v);
        const double k3x = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, x + 0.5 * h * k2x, v + 0.5 * h * k2v);
        const double k4x = v + h * k3v, k4v = acc(t + h, x + h * k3x, v + h * k3v);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if ((i + 1) * h > t_end - window) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    return 0.5 * (hi - lo);
}

Outcome pulsating() {
    const auto sc = preset("pulsating_sweep");
    const RodModel model = build_model(sc);
    const Vector q0 = initial_configuration(sc, model);
    const double x0 = axis_point(model.space(), q0, sc.steady_probe)[sc.steady_component];
    std::vector<double> t, x;
    DynamicOptions opts = sc.dynamic_options();
    opts.record_diagnostics = false;
    opts.store_every = std::numeric_limits<int>::max();
    const auto tr = run_dynamic(model, opts, q0, Vector::Zero(model.full_dim()),
                                [&](int, double time, const Vector& q, const Vector&) {
                                    t.push_back(time);
                                    x.push_back(axis_point(model.space(), q, sc.steady_probe)[sc.steady_component] - x0);
                                    return true;
                                });
    if (tr.status != Termination::Completed)
        return {false, fmt("run failed at t = %.3f: %s", tr.failure_time, tr.message.c_str())};
    const auto st = steady_state_stats(t, x, sc.steady_window);

    // Oscillator oracle: integrated steady amplitude against the closed form.
    const double m = 2.0, k = 50.0, b = 1.5, f0 = 3.0, omega = 2.0 * kPi * 0.88;
    const double closed = linear_oscillator_amplitude(f0, m, k, b, omega);
    const double integrated = rk4_oscillator_amplitude(f0, m, k, b, omega, 60.0, 10.0);
    const double rel = std::abs(integrated - closed) / closed;

    double freq = 0.0;
    for (const auto& l : sc.loads)
        if (l.kind == LoadSpec::Kind::Pulsating) freq = l.frequency_hz;
    return {st.periodic && rel < 1e-3,
            fmt("%.2f Hz (%s convention), T = %g s, window %g s: periodic %s, %d cycles, mean %.4g m, peak-to-peak "
                "%.4g m; oscillator amplitude closed form %.6g vs integrated %.6g (rel %.1e, limit 1e-3)",
                freq, "printed", sc.effective_t_end(), sc.steady_window, st.periodic ? "yes" : "no", st.cycles,
                st.mean, st.amplitude, closed, integrated, rel)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "tangent consistency", tangents},
        {2, "roll-up closure", roll_up_closure},
        {3, "roll-up convergence rates", roll_up_rates},
        {4, "conservation after unloading", conservation_criterion},
        {5, "outlier-removal robustness", outlier_robustness},
        {6, "outlier-band spectrum", fft_evidence},
        {7, "propagator determinant", det_probe},
        {8, "elastic pendulum", pendulum},
        {9, "mass perturbation", mass_perturbation},
        {10, "swinging rod in wind", swinging_wind},
        {11, "pulsating load steady state", pulsating},
    };
    struct Timed {
        Outcome outcome;
        double seconds;
    };
    std::vector<std::future<Timed>> results;
    for (const auto& c : criteria)
        results.push_back(std::async(std::launch::async, [&c] {
            const auto t0 = std::chrono::steady_clock::now();
            Outcome o;
            try {
                o = c.run();
            } catch (const std::exception& e) {
                o = {false, std::string("exception: ") + e.what()};
            }
            return Timed{o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
        }));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto r = results[i].get();
        if (!r.outcome.pass) ++failed;
        std::printf("criterion %2d %s: %s -- %s [%.1f s]\n", criteria[i].id, r.outcome.pass ? "PASS" : "FAIL",
                    criteria[i].title, r.outcome.detail.c_str(), r.seconds);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
