#include <krod/kinematics.hpp>
#include <krod/quadrature.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace krod {

void MaterialParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(std::isfinite(EA) && EA > 0.0, "material: EA must be positive");
    require(std::isfinite(EI) && EI > 0.0, "material: EI must be positive");
    require(std::isfinite(A_rho) && A_rho > 0.0, "material: A_rho must be positive");
    require(std::isfinite(I_rho) && I_rho >= 0.0, "material: I_rho must be non-negative");
    require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0,
            "material: alpha must lie in [0, 1]");
}

MaterialParams MaterialParams::circular(double youngs_modulus, double density, double diameter,
                                        double alpha) {
    const double area = std::numbers::pi * diameter * diameter / 4.0;
    const double inertia = std::numbers::pi * std::pow(diameter, 4) / 64.0;
    MaterialParams mat;
    mat.EA = youngs_modulus * area;
    mat.EI = youngs_modulus * inertia;
    mat.A_rho = density * area;
    mat.I_rho = density * inertia;
    mat.alpha = alpha;
    return mat;
}

PointKinematics director_ops(const Vec3& phi_p, double jac_floor) {
    const double jac = phi_p.norm();
    if (!(jac > jac_floor) || !std::isfinite(jac)) {
        std::ostringstream msg;
        msg << "degenerate configuration: |phi'| = " << jac << " <= " << jac_floor;
        throw DegenerateConfiguration(msg.str(), std::nan(""));
    }
    PointKinematics kin;
    kin.phi_p = phi_p;
    kin.jac = jac;
    kin.d = phi_p / jac;
    const Mat3 dd = kin.d * kin.d.transpose();
    kin.P = Mat3::Identity() - dd;
    kin.H = Mat3::Identity() - 2.0 * dd;
    return kin;
}

PointKinematics point_kinematics(const Vec3& phi_p, const Vec3& phi_pp, double jac_floor) {
    PointKinematics kin = director_ops(phi_p, jac_floor);
    kin.phi_pp = phi_pp;
    return kin;
}

StrainStress strain_stress(const PointKinematics& kin, const MaterialParams& mat) {
    StrainStress ss;
    ss.eps = kin.phi_p - kin.d - kin.eps0;
    // kappa = d x d' with d' = P phi'' / |phi'|; the P drops out of the cross product.
    ss.kappa = kin.d.cross(kin.phi_pp) / kin.jac - kin.kappa0;
    ss.n = mat.EA * ss.eps;
    ss.m = mat.EI * ss.kappa;
    return ss;
}

namespace {

struct StrainOperators {
    Mat3 B11;  // d eps / d phi'
    Mat3 B21;  // d kappa / d phi'
    Mat3 B22;  // d kappa / d phi''
};

StrainOperators strain_operators(const PointKinematics& kin) {
    const double inv_j = 1.0 / kin.jac;
    StrainOperators ops;
    ops.B11 = Mat3::Identity() - inv_j * kin.P;
    ops.B21 = -(inv_j * inv_j) * skew(kin.phi_pp) * kin.H;
    ops.B22 = inv_j * skew(kin.d);
    return ops;
}

}  // namespace

Matrix b_matrix_point(const PointKinematics& kin, const BasisEval& basis) {
    const auto ops = strain_operators(kin);
    const auto n_local = static_cast<int>(basis.values.size());
    Matrix B = Matrix::Zero(6, 3 * n_local);
    for (int a = 0; a < n_local; ++a) {
        B.block<3, 3>(0, 3 * a) = basis.d1[a] * ops.B11;
        B.block<3, 3>(3, 3 * a) = basis.d1[a] * ops.B21 + basis.d2[a] * ops.B22;
    }
    return B;
}

Matrix mass_density_point(const PointKinematics& kin, const BasisEval& basis,
                          const MaterialParams& mat) {
    const auto n_local = static_cast<int>(basis.values.size());
    const Mat3 rot = mat.alpha * mat.I_rho / (kin.jac * kin.jac) * kin.P;
    Matrix M = Matrix::Zero(3 * n_local, 3 * n_local);
    for (int a = 0; a < n_local; ++a) {
        for (int b = 0; b < n_local; ++b) {
            M.block<3, 3>(3 * a, 3 * b) =
                mat.A_rho * basis.values[a] * basis.values[b] * Mat3::Identity() +
                basis.d1[a] * basis.d1[b] * rot;
        }
    }
    return M;
}

GeometricBlocks geometric_blocks(const PointKinematics& kin, const StrainStress& ss) {
    const Vec3& d = kin.d;
    const Vec3& n = ss.n;
    const Vec3& m = ss.m;
    const double inv_j = 1.0 / kin.jac;
    const double inv_j2 = inv_j * inv_j;
    const Mat3 I = Mat3::Identity();
    const Mat3 dd = d * d.transpose();
    const double dn = d.dot(n);

    GeometricBlocks g;
    g.A1 = inv_j2 * (d * n.transpose() + n * d.transpose() - 3.0 * dn * dd + dn * I);
    const Vec3 w = kin.phi_pp.cross(m);
    const double wd = w.dot(d);
    g.A2 = -2.0 * inv_j2 * inv_j *
           (w * d.transpose() + d * w.transpose() + wd * (2.0 * kin.H - I));
    g.A3 = -inv_j2 * kin.H * skew(m);
    g.A4 = inv_j2 * skew(m) * kin.H;
    return g;
}

void add_internal_density(const PointKinematics& kin, const MaterialParams& mat, double scale,
                          PointDensity& out, bool with_tangent) {
    add_internal_density(kin, mat, scale, scale, out, with_tangent);
}

void add_internal_density(const PointKinematics& kin, const MaterialParams& mat,
                          double scale_value, double scale, PointDensity& out,
                          bool with_tangent) {
    const auto ss = strain_stress(kin, mat);
    const auto ops = strain_operators(kin);
    out.r[1] += scale_value * (ops.B11.transpose() * ss.n + ops.B21.transpose() * ss.m);
    out.r[2] += scale_value * (ops.B22.transpose() * ss.m);
    if (!with_tangent) return;

    const auto g = geometric_blocks(kin, ss);
    out.K[1][1] += scale * (g.A1 + g.A2 + mat.EA * ops.B11.transpose() * ops.B11 +
                            mat.EI * ops.B21.transpose() * ops.B21);
    out.K[1][2] += scale * (g.A3 + mat.EI * ops.B21.transpose() * ops.B22);
    out.K[2][1] += scale * (g.A4 + mat.EI * ops.B22.transpose() * ops.B21);
    out.K[2][2] += scale * (mat.EI * ops.B22.transpose() * ops.B22);
}

InvariantEnergy invariant_energy(double a, double b, double c, const MaterialParams& mat,
                                 double e0) {
    const double ra = std::sqrt(a);
    const double a2 = a * a;
    const double a3 = a2 * a;
    const double a4 = a3 * a;
    const double axial = ra - 1.0 - e0;
    const double hb = 0.5 * mat.EI;
    InvariantEnergy w;
    w.value = 0.5 * mat.EA * axial * axial + hb * (a * c - b * b) / a2;
    w.gradient[0] = 0.5 * mat.EA * axial / ra + hb * (2.0 * b * b / a3 - c / a2);
    w.gradient[1] = hb * (-2.0 * b / a2);
    w.gradient[2] = hb / a;
    w.hessian(0, 0) = 0.25 * mat.EA * (1.0 + e0) / (a * ra) + hb * (2.0 * c / a3 - 6.0 * b * b / a4);
    w.hessian(0, 1) = w.hessian(1, 0) = hb * 4.0 * b / a3;
    w.hessian(0, 2) = w.hessian(2, 0) = -hb / a2;
    w.hessian(1, 1) = -hb * 2.0 / a2;
    w.hessian(1, 2) = w.hessian(2, 1) = 0.0;
    w.hessian(2, 2) = 0.0;
    return w;
}

void add_internal_discrete_gradient_density(const Vec3& phi_p0, const Vec3& phi_pp0,
                                            const Vec3& phi_p1, const Vec3& phi_pp1,
                                            const MaterialParams& mat, double e0,
                                            PointDensity& out, bool with_tangent) {
    static const QuadratureRule rule = gauss_rule(8);
    const Eigen::Vector3d pi0(phi_p0.squaredNorm(), phi_p0.dot(phi_pp0), phi_pp0.squaredNorm());
    const Eigen::Vector3d pi1(phi_p1.squaredNorm(), phi_p1.dot(phi_pp1), phi_pp1.squaredNorm());
    const Eigen::Vector3d dpi = pi1 - pi0;

    Eigen::Vector3d wbar = Eigen::Vector3d::Zero();
    Mat3 gbar = Mat3::Zero();  // d wbar / d pi1
    for (int g = 0; g < rule.order(); ++g) {
        const double xi = 0.5 * (rule.points[g] + 1.0);
        const double wt = 0.5 * rule.weights[g];
        const Eigen::Vector3d pi = pi0 + xi * dpi;
        const auto w = invariant_energy(pi[0], pi[1], pi[2], mat, e0);
        wbar += wt * w.gradient;
        if (with_tangent) gbar += (wt * xi) * w.hessian;
    }

    const Vec3 xm = 0.5 * (phi_p0 + phi_p1);
    const Vec3 ym = 0.5 * (phi_pp0 + phi_pp1);
    // Gradients of (a, b, c) with respect to (phi', phi''), split by row block.
    const std::array<Vec3, 3> grad_x_mid = {2.0 * xm, ym, Vec3::Zero()};
    const std::array<Vec3, 3> grad_y_mid = {Vec3::Zero(), xm, 2.0 * ym};
    for (int i = 0; i < 3; ++i) {
        out.r[1] += wbar[i] * grad_x_mid[static_cast<std::size_t>(i)];
        out.r[2] += wbar[i] * grad_y_mid[static_cast<std::size_t>(i)];
    }
    if (!with_tangent) return;

    const std::array<Vec3, 3> grad_x_1 = {2.0 * phi_p1, phi_pp1, Vec3::Zero()};
    const std::array<Vec3, 3> grad_y_1 = {Vec3::Zero(), phi_p1, 2.0 * phi_pp1};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double gij = gbar(static_cast<int>(i), static_cast<int>(j));
            if (gij == 0.0) continue;
            out.K[1][1] += gij * grad_x_mid[i] * grad_x_1[j].transpose();
            out.K[1][2] += gij * grad_x_mid[i] * grad_y_1[j].transpose();
            out.K[2][1] += gij * grad_y_mid[i] * grad_x_1[j].transpose();
            out.K[2][2] += gij * grad_y_mid[i] * grad_y_1[j].transpose();
        }
    }
    // Midpoint gradients depend on q_{n+1} with the factor 1/2.
    const Mat3 I = Mat3::Identity();
    out.K[1][1] += wbar[0] * I;
    out.K[1][2] += 0.5 * wbar[1] * I;
    out.K[2][1] += 0.5 * wbar[1] * I;
    out.K[2][2] += wbar[2] * I;
}

void add_momentum_density(const PointKinematics& kin, const Vec3& phi_dot, const Vec3& phi_dot_p,
                          const MaterialParams& mat, double scale_value, double scale_wrt_q,
                          double scale_wrt_qdot, PointDensity& out, bool with_tangent) {
    const double rot = mat.alpha * mat.I_rho;
    const double inv_j = 1.0 / kin.jac;
    const Vec3& a = phi_dot_p;
    const Vec3& d = kin.d;
    out.r[0] += scale_value * mat.A_rho * phi_dot;
    out.r[1] += scale_value * rot * inv_j * inv_j * (kin.P * a);
    if (!with_tangent) return;

    if (rot != 0.0 && scale_wrt_q != 0.0) {
        const double da = d.dot(a);
        const Mat3 dK = -(rot * inv_j * inv_j * inv_j) *
                        (da * (2.0 * kin.H - Mat3::Identity()) + d * a.transpose() +
                         2.0 * a * d.transpose());
        out.K[1][1] += scale_wrt_q * dK;
    }
    if (scale_wrt_qdot != 0.0) {
        out.K[0][0] += scale_wrt_qdot * mat.A_rho * Mat3::Identity();
        out.K[1][1] += scale_wrt_qdot * rot * inv_j * inv_j * kin.P;
    }
}

void add_inertia_correction_density(const PointKinematics& kin, const Vec3& phi_dot_p,
                                    const MaterialParams& mat, double scale_value,
                                    double scale_wrt_q, double scale_wrt_qdot,
                                    PointDensity& out, bool with_tangent) {
    const double rot = mat.alpha * mat.I_rho;
    if (rot == 0.0) return;
    const double inv_j = 1.0 / kin.jac;
    const double c3 = rot * inv_j * inv_j * inv_j;
    const Vec3& d = kin.d;
    const Vec3& a = phi_dot_p;
    const Vec3 Pa = kin.P * a;
    const double beta = d.dot(a);
    const double pa2 = Pa.squaredNorm();
    const Vec3 f = beta * Pa + pa2 * d;
    out.r[1] += scale_value * c3 * f;
    if (!with_tangent) return;

    if (scale_wrt_q != 0.0) {
        const Mat3 df = Pa * Pa.transpose() - beta * beta * kin.P -
                        3.0 * beta * d * Pa.transpose() + pa2 * kin.P -
                        3.0 * f * d.transpose();
        out.K[1][1] += scale_wrt_q * c3 * inv_j * df;
    }
    if (scale_wrt_qdot != 0.0) {
        const Mat3 da = Pa * d.transpose() + beta * kin.P + 2.0 * d * Pa.transpose();
        out.K[1][1] += scale_wrt_qdot * c3 * da;
    }
}

Vector inertia_residual_point(const PointKinematics& kin, const BasisEval& basis,
                              const Vector& qdot_local, const MaterialParams& mat) {
    const auto n_local = static_cast<int>(basis.values.size());
    if (qdot_local.size() != 3 * n_local)
        throw std::invalid_argument("inertia_residual_point: velocity size mismatch");
    Vec3 phi_dot = Vec3::Zero();
    Vec3 phi_dot_p = Vec3::Zero();
    for (int a = 0; a < n_local; ++a) {
        phi_dot += basis.values[a] * qdot_local.segment<3>(3 * a);
        phi_dot_p += basis.d1[a] * qdot_local.segment<3>(3 * a);
    }
    // (dM/dt) qdot is the q-derivative of the momentum density applied to qdot.
    PointDensity dens;
    dens.clear();
    add_momentum_density(kin, phi_dot, phi_dot_p, mat, 0.0, 1.0, 0.0, dens, true);
    const Vec3 mdot_qdot = dens.K[1][1] * phi_dot_p;
    dens.clear();
    add_inertia_correction_density(kin, phi_dot_p, mat, 1.0, 0.0, 0.0, dens, false);
    const Vec3 r1 = mdot_qdot + dens.r[1];

    Vector out(3 * n_local);
    for (int a = 0; a < n_local; ++a) out.segment<3>(3 * a) = basis.d1[a] * r1;
    return out;
}

double potential_density(const PointKinematics& kin, const MaterialParams& mat) {
    const auto ss = strain_stress(kin, mat);
    return 0.5 * (mat.EA * ss.eps.squaredNorm() + mat.EI * ss.kappa.squaredNorm());
}

Vec3 director_rate(const PointKinematics& kin, const Vec3& phi_dot_p) {
    return kin.P * phi_dot_p / kin.jac;
}

double kinetic_density(const PointKinematics& kin, const Vec3& phi_dot, const Vec3& phi_dot_p,
                       const MaterialParams& mat) {
    const Vec3 d_dot = director_rate(kin, phi_dot_p);
    return 0.5 * (mat.A_rho * phi_dot.squaredNorm() + mat.alpha * mat.I_rho * d_dot.squaredNorm());
}

}  // namespace krod
