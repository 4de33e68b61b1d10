#include <krod/assembly.hpp>
#include <krod/diagnostics.hpp>
#include <krod/static_solver.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace krod;

namespace {

constexpr double kPi = std::numbers::pi;

RodModel cantilever(int p, int ne, double L, const MaterialParams& mat, std::vector<LoadCase> loads) {
    auto space = make_space(p, p - 1, ne, L);
    const Vector ref = straight_configuration(space, Vec3::Zero(), Vec3::UnitX());
    return RodModel(space, mat, {BoundaryKind::Clamped, BoundaryKind::Free, false}, Vec3::UnitX(),
                    ref, std::move(loads));
}

MaterialParams roll_up_material() {
    MaterialParams mat;
    mat.EA = 100.0;
    mat.EI = 200.0;
    mat.A_rho = 1.0;
    mat.I_rho = 0.0;
    return mat;
}

Vec3 axis(const RodModel& model, const Vector& q, double s) {
    return evaluate_fields(evaluate_basis(model.space(), s), q).phi;
}

Vec3 tangent(const RodModel& model, const Vector& q, double s) {
    return evaluate_fields(evaluate_basis(model.space(), s), q).phi_p.normalized();
}

}  // namespace

TEST(StaticSolver, ZeroLoadKeepsTheStartVector) {
    const auto model = cantilever(3, 8, 2.0, roll_up_material(), {});
    StaticOptions opts;
    const auto res = solve_static(model, opts, model.reference());
    ASSERT_TRUE(res.converged);
    ASSERT_EQ(static_cast<int>(res.steps.size()), opts.n_load_steps);
    for (const auto& step : res.steps) {
        EXPECT_EQ((step.q - model.reference()).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(step.iterations, 1);
    }
    EXPECT_DOUBLE_EQ(res.steps.back().lambda, 1.0);
}

TEST(StaticSolver, RollUpClosesACircle) {
    const double L = 40.0;
    const auto mat = roll_up_material();
    const auto model = cantilever(2, 40, L, mat, {TipMoment{Vec3(0.0, 0.0, 2.0 * mat.EI * kPi / L)}});
    StaticOptions opts;
    opts.n_load_steps = 6;
    const auto res = solve_static(model, opts, model.reference());
    ASSERT_TRUE(res.converged) << res.message;
    const Vector& q = res.steps.back().q;
    EXPECT_LT((axis(model, q, L) - axis(model, q, 0.0)).norm(), 1e-2 * L);
    EXPECT_LT((tangent(model, q, L) - tangent(model, q, 0.0)).norm(), 1e-2);
}

TEST(StaticSolver, RollUpStrainEnergyMatchesTheCircle) {
    const double L = 40.0;
    const auto mat = roll_up_material();
    const auto model = cantilever(3, 32, L, mat, {TipMoment{Vec3(0.0, 0.0, 2.0 * mat.EI * kPi / L)}});
    StaticOptions opts;
    opts.n_load_steps = 48;
    const auto res = solve_static(model, opts, model.reference());
    ASSERT_TRUE(res.converged) << res.message;
    const double U = energies(model, res.steps.back().q, Vector::Zero(model.full_dim())).potential;
    const double expected = 2.0 * kPi * kPi * mat.EI / L;  // 1/2 EI (2 pi / L)^2 L
    EXPECT_NEAR(expected, 98.696, 1e-3);
    EXPECT_NEAR(U, expected, 1e-3 * expected);
}

TEST(StaticSolver, SmallTipLoadMatchesEulerBernoulli) {
    const double L = 10.0;
    MaterialParams mat;
    mat.EA = 1e6;
    mat.EI = 1e3;
    const double F = 1e-3 * 3.0 * mat.EI / (L * L * L) * L;  // deflection 1e-3 L
    const auto model = cantilever(3, 16, L, mat, {PointLoad{L, Vec3(0.0, F, 0.0), 0.0}});
    StaticOptions opts;
    opts.n_load_steps = 1;
    const auto res = solve_static(model, opts, model.reference());
    ASSERT_TRUE(res.converged) << res.message;
    const double w = axis(model, res.steps.back().q, L).y();
    const double exact = F * L * L * L / (3.0 * mat.EI);
    EXPECT_LT(exact, 0.01 * L);
    EXPECT_NEAR(w, exact, 0.01 * exact);
}

TEST(StaticSolver, NewtonConvergesQuadratically) {
    const double L = 40.0;
    const auto mat = roll_up_material();
    const auto model = cantilever(2, 16, L, mat, {TipMoment{Vec3(0.0, 0.0, 2.0 * mat.EI * kPi / L)}});
    StaticOptions opts;
    opts.n_load_steps = 12;
    const auto res = solve_static(model, opts, model.reference());
    ASSERT_TRUE(res.converged) << res.message;
    // Once in the asymptotic range, each increment is bounded by the square of the previous
    // one (down to round-off).
    for (const auto& step : res.steps) {
        const auto& inc = step.increments;
        int checked = 0;
        for (std::size_t k = 0; k + 1 < inc.size(); ++k) {
            if (inc[k] >= 1e-2) continue;
            EXPECT_LT(inc[k + 1], std::max(10.0 * inc[k] * inc[k], 1e-12)) << "lambda " << step.lambda;
            ++checked;
        }
        EXPECT_GE(checked, 1) << "lambda " << step.lambda;
    }
}

TEST(StaticSolver, FailureIsReportedWithTheIterateHistory) {
    const double L = 40.0;
    const auto mat = roll_up_material();
    const auto model = cantilever(2, 40, L, mat, {TipMoment{Vec3(0.0, 0.0, 2.0 * mat.EI * kPi / L)}});
    StaticOptions opts;
    opts.n_load_steps = 1;
    opts.newton.max_iters = 3;
    const auto res = solve_static(model, opts, model.reference());
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.failed_step, 1);
    EXPECT_TRUE(res.steps.empty());
    EXPECT_FALSE(res.message.empty());
    EXPECT_EQ(res.failed_attempt.residuals.size(), 3u);
}

TEST(StaticSolver, ClampedRootStaysFixed) {
    const auto mat = roll_up_material();
    const auto model = cantilever(3, 10, 5.0, mat,
                                  {Gravity{Vec3(0.0, -2.0, 1.0)}, PointLoad{3.0, Vec3(1.0, 4.0, -2.0), 0.0}});
    const auto res = solve_static(model, {}, model.reference());
    ASSERT_TRUE(res.converged) << res.message;
    const Vector& q = res.steps.back().q;
    EXPECT_LT(axis(model, q, 0.0).norm(), 1e-14);
    EXPECT_LT((tangent(model, q, 0.0) - Vec3::UnitX()).norm(), 1e-12);
    // Equilibrium: the reduced residual vanishes at the tolerance.
    const auto sys = reduce_system(model.extraction(), assemble_static(model, q, 1.0, false));
    EXPECT_LT(sys.residual.cwiseAbs().maxCoeff(), 1e-8);
}
