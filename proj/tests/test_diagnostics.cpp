#include <krod/diagnostics.hpp>
#include <krod/dynamic_solver.hpp>
#include <krod/static_solver.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

using namespace krod;

namespace {

constexpr double kPi = std::numbers::pi;

MaterialParams test_material() {
    MaterialParams mat;
    mat.EA = 100.0;
    mat.EI = 10.0;
    mat.A_rho = 1.5;
    mat.I_rho = 0.1;
    return mat;
}

RodModel free_rod(int p = 3, int ne = 6, double L = 2.0) {
    auto space = make_space(p, p - 1, ne, L);
    const Vector ref = straight_configuration(space, Vec3::Zero(), Vec3::UnitX());
    return RodModel(space, test_material(), {BoundaryKind::Free, BoundaryKind::Free, false},
                    Vec3::UnitX(), ref, {});
}

Vector uniform_velocity(const RodModel& model, const Vec3& v) {
    Vector qdot(model.full_dim());
    for (int i = 0; i < model.space().basis_count(); ++i) qdot.segment<3>(3 * i) = v;
    return qdot;
}

ReferenceCurve discrete_curve(const SplineSpace& space, const Vector& q) {
    return {[=](double s) { return evaluate_fields(evaluate_basis(space, s), q).phi; },
            [=](double s) { return evaluate_fields(evaluate_basis(space, s), q).phi_p; },
            [=](double s) { return evaluate_fields(evaluate_basis(space, s), q).phi_pp; }};
}

/// Roll-up errors of a clamped cantilever on a C^(p-1) space of ne elements.
ErrorNorms roll_up_errors(int p, int r, int ne) {
    const double L = 40.0;
    MaterialParams mat;
    mat.EA = 100.0;
    mat.EI = 200.0;
    mat.I_rho = 0.0;
    auto space = make_space(p, r, ne, L);
    const Vector ref = straight_configuration(space, Vec3::Zero(), Vec3::UnitX());
    const RodModel model(space, mat, {BoundaryKind::Clamped, BoundaryKind::Free, false}, Vec3::UnitX(),
                         ref, {TipMoment{Vec3(0.0, 0.0, 2.0 * mat.EI * kPi / L)}});
    StaticOptions opts;
    opts.n_load_steps = 48;
    const auto res = solve_static(model, opts, ref);
    if (!res.converged) throw std::runtime_error(res.message);
    return error_norms(space, res.steps.back().q, roll_up_reference(L));
}

/// Deformed rod translating and spinning about an oblique axis.
std::pair<Vector, Vector> spinning_state(const RodModel& model) {
    Vector q = model.reference();
    Vector qdot(model.full_dim());
    for (int i = 0; i < model.space().basis_count(); ++i) {
        const Vec3 x = control_point(q, i);
        q.segment<3>(3 * i) += Vec3(0.0, 0.02 * std::sin(2.0 * x.x()), 0.01 * x.x() * x.x());
        qdot.segment<3>(3 * i) = Vec3(0.1, 0.2, -0.1) + Vec3(0.3, -0.2, 0.5).cross(x);
    }
    return {q, qdot};
}

/// Largest deviation of each momentum component from its initial value.
Momenta momentum_drift(const Trajectory& tr) {
    Momenta out;
    const auto& first = tr.diagnostics.front();
    for (const auto& d : tr.diagnostics) {
        out.linear = out.linear.cwiseMax((d.linear - first.linear).cwiseAbs());
        out.angular = out.angular.cwiseMax((d.angular - first.angular).cwiseAbs());
    }
    return out;
}

}  // namespace

TEST(Energies, RodAtRestHasNoEnergy) {
    const auto model = free_rod();
    const auto e = energies(model, model.reference(), Vector::Zero(model.full_dim()));
    EXPECT_EQ(e.kinetic, 0.0);
    EXPECT_EQ(e.potential, 0.0);
}

TEST(Energies, RigidTranslation) {
    const auto model = free_rod();
    const Vec3 v(0.3, -1.2, 2.0);
    const auto e = energies(model, model.reference(), uniform_velocity(model, v));
    EXPECT_NEAR(e.kinetic, 0.5 * 1.5 * 2.0 * v.squaredNorm(), 1e-13);
    EXPECT_EQ(e.potential, 0.0);
}

TEST(Energies, RigidRotationIncludesRotaryInertia) {
    // Spin about E3 through the origin: phi_dot = omega x phi, d_dot = omega x d.
    const auto model = free_rod(3, 4, 2.0);
    const double w = 0.7;
    Vector qdot(model.full_dim());
    for (int i = 0; i < model.space().basis_count(); ++i)
        qdot.segment<3>(3 * i) = Vec3(0.0, 0.0, w).cross(control_point(model.reference(), i));
    const auto e = energies(model, model.reference(), qdot);
    const auto& mat = model.material();
    const double expected = 0.5 * mat.A_rho * w * w * 8.0 / 3.0 + 0.5 * mat.I_rho * w * w * 2.0;
    EXPECT_NEAR(e.kinetic, expected, 1e-12);
    const auto mom = momenta(model, model.reference(), qdot);
    EXPECT_NEAR(mom.angular.z(), 2.0 * expected / w, 1e-12);
}

TEST(Momenta, RodAtRestHasNoMomentum) {
    const auto model = free_rod();
    const auto m = momenta(model, model.reference(), Vector::Zero(model.full_dim()));
    EXPECT_EQ(m.linear.norm(), 0.0);
    EXPECT_EQ(m.angular.norm(), 0.0);
}

TEST(Momenta, RigidTranslation) {
    const auto model = free_rod();
    const Vec3 v(0.3, -1.2, 2.0);
    const auto m = momenta(model, model.reference(), uniform_velocity(model, v));
    EXPECT_LT((m.linear - 1.5 * 2.0 * v).norm(), 1e-13);
}

TEST(Momenta, DiscreteAngularMomentumAgreesForRigidMotion) {
    const auto model = free_rod();
    const Vec3 v(0.3, -1.2, 2.0);
    const Vector qdot = uniform_velocity(model, v);
    const Vec3 cont = momenta(model, model.reference(), qdot).angular;
    const Vec3 disc = discrete_angular_momentum(model, model.reference(), qdot);
    EXPECT_LT((cont - disc).norm(), 1e-12);
}

// Free flight of a deformed, spinning rod with the scheme as stated.
TEST(Momenta, FreeFlightConservation) {
    const auto model = free_rod(3, 6, 2.0);
    const auto [q, qdot] = spinning_state(model);
    DynamicOptions opts;
    opts.dt = 0.002;
    opts.t_end = 1.0;
    const auto tr = run_dynamic(model, opts, q, qdot);
    ASSERT_EQ(tr.status, Termination::Completed) << tr.message;
    ASSERT_EQ(tr.diagnostics.size(), 501u);
    const auto drift = momentum_drift(tr);
    for (int c = 0; c < 3; ++c) {
        EXPECT_LT(drift.linear[c], 1e-10 * std::abs(tr.diagnostics.front().linear[c]) + 1e-12) << "component " << c;
        EXPECT_LT(drift.angular[c], 1e-10 * std::abs(tr.diagnostics.front().angular[c]) + 1e-12) << "component " << c;
    }
}

// Without rotary inertia the mass matrix is constant and a midpoint-type internal force
// conserves the angular momentum to round-off.
TEST(Momenta, FreeFlightConservationWithoutRotaryInertia) {
    for (auto eval : {InternalForceEvaluation::Midpoint, InternalForceEvaluation::DiscreteGradient}) {
        auto model = free_rod(3, 6, 2.0);
        model.material().I_rho = 0.0;
        const auto [q, qdot] = spinning_state(model);
        DynamicOptions opts;
        opts.dt = 0.002;
        opts.t_end = 1.0;
        opts.terms.internal_eval = eval;
        const auto tr = run_dynamic(model, opts, q, qdot);
        ASSERT_EQ(tr.status, Termination::Completed) << tr.message;
        const auto drift = momentum_drift(tr);
        for (int c = 0; c < 3; ++c) {
            EXPECT_LT(drift.linear[c], 1e-10 * std::abs(tr.diagnostics.front().linear[c]) + 1e-12)
                << to_string(eval) << " component " << c;
            EXPECT_LT(drift.angular[c], 1e-10 * std::abs(tr.diagnostics.front().angular[c]) + 1e-12)
                << to_string(eval) << " component " << c;
        }
    }
}

// With rotary inertia the configuration-dependent mass matrix enters through a difference
// quotient of M(q) qdot; the angular momentum error is a second-order truncation error.
TEST(Momenta, RotaryInertiaDriftIsSecondOrderInTheStep) {
    const auto model = free_rod(3, 6, 2.0);
    const auto [q, qdot] = spinning_state(model);
    double drift[2];
    for (int k = 0; k < 2; ++k) {
        DynamicOptions opts;
        opts.dt = 0.004 / (1 << k);
        opts.t_end = 1.0;
        opts.terms.internal_eval = InternalForceEvaluation::DiscreteGradient;
        const auto tr = run_dynamic(model, opts, q, qdot);
        ASSERT_EQ(tr.status, Termination::Completed) << tr.message;
        drift[k] = momentum_drift(tr).angular.maxCoeff();
    }
    const double order = std::log2(drift[0] / drift[1]);
    EXPECT_NEAR(order, 2.0, 0.2);
}

TEST(ErrorNorms, DiscreteSolutionAgainstItselfIsZero) {
    const auto model = free_rod(3, 5, 2.0);
    Vector q = model.reference();
    for (int i = 0; i < q.size(); ++i) q[i] += 0.05 * std::sin(0.9 * i);
    const auto e = error_norms(model.space(), q, discrete_curve(model.space(), q));
    EXPECT_EQ(e.L2, 0.0);
    EXPECT_EQ(e.H1_semi, 0.0);
    EXPECT_EQ(e.H2_semi, 0.0);
}

TEST(ErrorNorms, SplinesReproduceAStraightRod) {
    for (int p : {2, 3, 4}) {
        const auto space = make_space(p, p - 1, 7, 3.0);
        const Vec3 dir = Vec3(1.0, -2.0, 0.5).normalized();
        const Vector q = straight_configuration(space, Vec3(0.1, 0.2, 0.3), dir);
        const ReferenceCurve line{[=](double s) { return Vec3(Vec3(0.1, 0.2, 0.3) + s * dir); },
                                  [=](double) { return dir; },
                                  [](double) { return Vec3(Vec3::Zero()); }};
        const auto e = error_norms(space, q, line);
        EXPECT_LT(e.L2, 1e-14) << "p=" << p;
        EXPECT_LT(e.H1_semi, 1e-14) << "p=" << p;
    }
}

TEST(ErrorNorms, RollUpReferenceIsAClosedUnitSpeedCircle) {
    const double L = 40.0;
    const auto c = roll_up_reference(L);
    EXPECT_LT(c.value(0.0).norm(), 1e-14);
    EXPECT_LT(c.value(L).norm(), 1e-12);
    EXPECT_LT((c.d1(0.0) - Vec3::UnitX()).norm(), 1e-14);
    for (double s : {3.0, 17.0, 33.0}) {
        EXPECT_NEAR(c.d1(s).norm(), 1.0, 1e-14);
        EXPECT_NEAR(c.d2(s).norm(), 2.0 * kPi / L, 1e-14);
    }
    const auto half = roll_up_reference(L, 0.5);
    EXPECT_NEAR(half.d2(5.0).norm(), kPi / L, 1e-14);
}

TEST(ErrorNorms, CubicC2RollUpRates) {
    std::vector<ErrorNorms> errs;
    for (int ne : {8, 16, 32, 64}) errs.push_back(roll_up_errors(3, 2, ne));
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double rate = std::log2(errs[i - 1].H2_semi / errs[i].H2_semi);
        EXPECT_NEAR(rate, 2.0, 0.3) << "refinement " << i;
    }
}

TEST(RelativeChange, ZeroForIdenticalStatesAndScaleInvariant) {
    const auto model = free_rod();
    const Vector q = model.reference();
    EXPECT_EQ(relative_l2_change(model.space(), q, q), 0.0);
    // A uniform offset c of a rod phi = s E1 on [0, L]: ||c|| sqrt(L) / sqrt(L^3/3).
    Vector shifted = q;
    for (int i = 0; i < model.space().basis_count(); ++i) shifted[3 * i + 1] += 0.1;
    EXPECT_NEAR(relative_l2_change(model.space(), shifted, q), 0.1 * std::sqrt(3.0) / 2.0, 1e-13);
    EXPECT_THROW((void)relative_l2_change(model.space(), q, Vector::Zero(q.size())), std::invalid_argument);
    EXPECT_THROW((void)relative_l2_change(model.space(), q, Vector::Zero(3)), std::invalid_argument);
}

TEST(Spectrum, SinusoidHasOneDominantBin) {
    const double dt = 0.01, f0 = 7.0;
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 3.0 + 2.0 * std::sin(2.0 * kPi * f0 * i * dt);
    const auto sp = fft_series(x, dt, 0.0);
    ASSERT_EQ(sp.samples_used, x.size());
    const auto peak = std::max_element(sp.magnitude.begin(), sp.magnitude.end()) - sp.magnitude.begin();
    const double df = sp.frequency[1] - sp.frequency[0];
    EXPECT_NEAR(sp.frequency[static_cast<std::size_t>(peak)], f0, df);
    EXPECT_NEAR(sp.magnitude[static_cast<std::size_t>(peak)], 2.0, 1e-9);
    EXPECT_EQ(sp.magnitude[0], 0.0);
    EXPECT_NEAR(sp.frequency.back(), 0.5 / dt, 1e-12);
}

TEST(Spectrum, ConstantSeriesIsAllZero) {
    const std::vector<double> x(256, 4.2);
    const auto sp = fft_series(x, 0.005, 0.0);
    for (double m : sp.magnitude) EXPECT_LT(m, 1e-14);
}

TEST(Spectrum, TruncatesAtTheThreshold) {
    std::vector<double> x(100, 1.0);
    x[60] = 50.0;
    const auto sp = fft_series(x, 0.01, 40.0);
    EXPECT_EQ(sp.samples_used, 60u);
    EXPECT_EQ(fft_series(x, 0.01, 0.0).samples_used, 100u);
}

TEST(Spectrum, BandIntegralIsTheBinSumTimesTheBinWidth) {
    Spectrum sp;
    sp.frequency = {0.0, 0.5, 1.0, 1.5, 2.0};
    sp.magnitude = {0.0, 1.0, 2.0, 3.0, 4.0};
    EXPECT_DOUBLE_EQ(band_integral(sp, 1.0, 2.0), 0.5 * (2.0 + 3.0 + 4.0));
    EXPECT_DOUBLE_EQ(band_integral(sp, 0.6, 0.9), 0.0);
    Spectrum one;
    one.frequency = {0.0};
    one.magnitude = {1.0};
    EXPECT_EQ(band_integral(one, 0.0, 1.0), 0.0);
}

TEST(Spectrum, BandIntegralIsLengthIndependentForNoise) {
    // A sinusoid outside the band contributes no leakage with an integer number of periods.
    const double dt = 0.01;
    std::vector<double> a(2000), b(4000);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double v = std::sin(2.0 * kPi * 5.0 * i * dt) + 0.1 * std::sin(2.0 * kPi * 30.0 * i * dt);
        if (i < a.size()) a[i] = v;
        b[i] = v;
    }
    const double ia = band_integral(fft_series(a, dt, 0.0), 20.0, 50.0);
    const double ib = band_integral(fft_series(b, dt, 0.0), 20.0, 50.0);
    EXPECT_NEAR(ia, 0.1 * (1.0 / (a.size() * dt)), 1e-9);
    EXPECT_NEAR(ib, 0.1 * (1.0 / (b.size() * dt)), 1e-9);
}

TEST(PrecisionQuotient, QuadraticErrorModelGivesFour) {
    const int n = 50;
    const double dt = 0.01;
    std::vector<Vector> u1, u2, u4;
    for (int i = 0; i < n; ++i) {
        Vector exact(2), c(2);
        exact << std::sin(0.1 * i), std::cos(0.2 * i);
        c << 1.0 + 0.5 * std::cos(0.3 * i), -2.0;
        u1.push_back(exact + c * dt * dt);
        u2.push_back(exact + c * dt * dt / 4.0);
        u4.push_back(exact + c * dt * dt / 16.0);
    }
    const auto q = precision_quotient(u1, u2, u4);
    ASSERT_EQ(q.size(), static_cast<std::size_t>(n));
    for (double v : q) EXPECT_NEAR(v, 4.0, 1e-9);
    const auto s = summarize_quotient(q, 3.5, 4.5);
    EXPECT_EQ(s.fraction_in_band, 1.0);
    EXPECT_EQ(s.valid, static_cast<std::size_t>(n));
}

TEST(PrecisionQuotient, IdenticalSeriesAreMasked) {
    std::vector<Vector> u(10, Vector::Ones(3));
    const auto q = precision_quotient(u, u, u);
    for (double v : q) EXPECT_TRUE(std::isnan(v));
    const auto s = summarize_quotient(q, 3.5, 4.5);
    EXPECT_EQ(s.valid, 0u);
}

TEST(DetProbe, CubicC1TwoElements) {
    const auto mat = MaterialParams::circular(2e11, 7900.0, 0.01);
    const double det = linear_beam_det_probe(DetProbeBasis::BSpline, 2, 10.0, 0.005, mat.EI, mat.A_rho);
    EXPECT_LT(std::abs(det - 1.0), 1e-12);
}

TEST(DetProbe, OutlierRemovedSixteenElements) {
    const auto mat = MaterialParams::circular(2e11, 7900.0, 0.01);
    const double det = linear_beam_det_probe(DetProbeBasis::BSplineOutlierRemoved, 16, 10.0, 0.01,
                                             mat.EI, mat.A_rho);
    EXPECT_LT(std::abs(det - 1.0), 5e-12);
}

TEST(DetProbe, HermiteElements) {
    const auto mat = MaterialParams::circular(2e11, 7900.0, 0.01);
    for (int ne : {2, 8, 32}) {
        const double det = linear_beam_det_probe(DetProbeBasis::Hermite, ne, 10.0, 0.0025, mat.EI, mat.A_rho);
        EXPECT_LT(std::abs(det - 1.0), 1e-11) << "ne=" << ne;
    }
}

TEST(DetProbe, ReversedStepInvertsThePropagator) {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 6;
    Matrix B(n, n), C(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            B(i, j) = u(rng);
            C(i, j) = u(rng);
        }
    const Matrix M = B * B.transpose() + Matrix::Identity(n, n);
    const Matrix K = C * C.transpose();
    const double forward = propagator_determinant(M, K, 0.01);
    const double backward = propagator_determinant(M, K, -0.01);
    EXPECT_NEAR(forward * backward, 1.0, 1e-12);
}

TEST(DetProbe, NamesAndRepeatability) {
    EXPECT_EQ(to_string(DetProbeBasis::Hermite), "hermite");
    EXPECT_EQ(to_string(DetProbeBasis::BSpline), "bspline_c1");
    EXPECT_EQ(to_string(DetProbeBasis::BSplineOutlierRemoved), "bspline_c1_outliers_removed");
    const double a = linear_beam_det_probe(DetProbeBasis::BSpline, 8, 10.0, 0.005, 1.0, 2.0);
    const double b = linear_beam_det_probe(DetProbeBasis::BSpline, 8, 10.0, 0.005, 1.0, 2.0);
    EXPECT_EQ(a, b);
}

TEST(SteadyState, ConstantSeries) {
    std::vector<double> t, x;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.1 * i);
        x.push_back(2.5);
    }
    const auto st = steady_state_stats(t, x, 5.0);
    EXPECT_DOUBLE_EQ(st.mean, 2.5);
    EXPECT_EQ(st.amplitude, 0.0);
    EXPECT_TRUE(st.periodic);
}

TEST(SteadyState, SinusoidMeanAndPeakToPeak) {
    std::vector<double> t, x;
    const double a = 1.3, b = 0.4, f = 0.88, dt = 0.001;
    for (int i = 0; i <= 50000; ++i) {
        t.push_back(dt * i);
        x.push_back(a + b * std::sin(2.0 * kPi * f * dt * i));
    }
    const auto st = steady_state_stats(t, x, 20.0);
    // 17.6 cycles in the window: the mean carries the exact partial-cycle contribution.
    const double w = 2.0 * kPi * f;
    const double exact_mean = a + b * (std::cos(w * 30.0) - std::cos(w * 50.0)) / (w * 20.0);
    EXPECT_GT(std::abs(exact_mean - a), 2e-3);
    EXPECT_NEAR(st.mean, exact_mean, 1e-4);
    EXPECT_NEAR(st.amplitude, 2.0 * b, 1e-4);
    EXPECT_TRUE(st.periodic);
    EXPECT_GE(st.cycles, 16);
}

TEST(SteadyState, DampedOscillatorSettles) {
    // x'' + 2 zeta w x' + w^2 (x - x*) = 0 from x(0) = 0, x'(0) = 0: closed form.
    const double w = 2.0, zeta = 0.1, xs = 3.0, wd = w * std::sqrt(1.0 - zeta * zeta);
    std::vector<double> t, x;
    for (int i = 0; i <= 60000; ++i) {
        const double ti = 0.001 * i;
        t.push_back(ti);
        x.push_back(xs - xs * std::exp(-zeta * w * ti) *
                             (std::cos(wd * ti) + zeta * w / wd * std::sin(wd * ti)));
    }
    std::vector<double> amplitudes;
    for (double end : {15.0, 30.0, 60.0}) {
        const auto n = static_cast<std::ptrdiff_t>(end / 0.001) + 1;
        const std::vector<double> tt(t.begin(), t.begin() + n), xx(x.begin(), x.begin() + n);
        const auto st = steady_state_stats(tt, xx, 10.0);
        amplitudes.push_back(st.amplitude);
        if (end == 60.0) EXPECT_NEAR(st.mean, xs, 1e-3);
    }
    EXPECT_GT(amplitudes[0], amplitudes[1]);
    EXPECT_GT(amplitudes[1], amplitudes[2]);
    EXPECT_LT(amplitudes[2], 1e-3);
}

TEST(SteadyState, RejectsBadWindows) {
    const std::vector<double> t = {0.0, 1.0, 2.0}, x = {1.0, 2.0, 3.0};
    EXPECT_THROW((void)steady_state_stats(t, x, 5.0), std::invalid_argument);
    EXPECT_THROW((void)steady_state_stats(t, x, 0.0), std::invalid_argument);
    EXPECT_THROW((void)steady_state_stats(t, {1.0}, 1.0), std::invalid_argument);
}

TEST(LinearOscillator, ClosedFormMatchesIntegratedSteadyState) {
    // m x'' + b x' + k x = f0 sin(W t), integrated with classical RK4 until the transient died out.
    const double m = 2.0, k = 50.0, b = 1.5, f0 = 3.0;
    for (double W : {1.0, 5.0, 9.0}) {
        double x = 0.0, v = 0.0, t = 0.0;
        const double h = 1e-3;
        auto acc = [&](double tt, double xx, double vv) { return (f0 * std::sin(W * tt) - b * vv - k * xx) / m; };
        double lo = 0.0, hi = 0.0;
        const int n = 80000;
        for (int i = 0; i < n; ++i) {
            const double k1x = v, k1v = acc(t, x, v);
            const double k2x = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, x + 0.5 * h * k1x, v + 0.5 * h * k1v);
            const double k3x = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, x + 0.5 * h * k2x, v + 0.5 * h * k2v);
            const double k4x = v + h * k3v, k4v = acc(t + h, x + h * k3x, v + h * k3v);
            x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            t += h;
            if (i > n - 20000) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
        EXPECT_NEAR(0.5 * (hi - lo), linear_oscillator_amplitude(f0, m, k, b, W),
                    1e-4 * linear_oscillator_amplitude(f0, m, k, b, W))
            << "W=" << W;
    }
    EXPECT_DOUBLE_EQ(linear_oscillator_amplitude(3.0, 1.0, 0.0, 0.0, 1.0), 3.0);
    EXPECT_THROW((void)linear_oscillator_amplitude(1.0, 0.0, 1.0, 1.0, 1.0), std::invalid_argument);
}
