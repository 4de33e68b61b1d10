#include <krod/assembly.hpp>

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace krod {

ConstraintSet rod_constraints(const SplineSpace& space, const BoundarySpec& bc,
                              const Vec3& director) {
    ConstraintSet rows = essential_constraints(BoundarySide::Start, bc.start, director);
    const auto end_rows = essential_constraints(BoundarySide::End, bc.end, director);
    rows.insert(rows.end(), end_rows.begin(), end_rows.end());
    if (bc.outlier_removal) {
        for (const auto side : {BoundarySide::Start, BoundarySide::End}) {
            const auto kind = side == BoundarySide::Start ? bc.start : bc.end;
            const auto extra = outlier_constraints(space.degree, side, kind);
            rows.insert(rows.end(), extra.begin(), extra.end());
        }
    }
    return rows;
}

Vector straight_configuration(const SplineSpace& space, const Vec3& origin, const Vec3& director) {
    const auto g = space.greville();
    Vector q(3 * static_cast<int>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
        q.segment<3>(3 * static_cast<int>(i)) = origin + g[i] * director;
    return q;
}

AxisFields evaluate_fields(const BasisEval& basis, const Vector& q) {
    AxisFields f;
    const auto n = static_cast<int>(basis.values.size());
    for (int a = 0; a < n; ++a) {
        const Vec3 x = q.segment<3>(3 * (basis.first_index + a));
        f.phi += basis.values[a] * x;
        f.phi_p += basis.d1[a] * x;
        f.phi_pp += basis.d2[a] * x;
    }
    return f;
}

RodModel::RodModel(SplineSpace space, MaterialParams material, const BoundarySpec& bc,
                   const Vec3& director, const Vector& reference, std::vector<LoadCase> loads,
                   int n_quad)
    : space_(std::move(space)),
      material_(material),
      bc_(bc),
      loads_(std::move(loads)),
      reference_(reference) {
    material_.validate();
    for (const auto& load : loads_) validate_load(load, space_.length);
    if (reference_.size() != full_dim())
        throw std::invalid_argument("rod model: reference configuration has wrong size");

    constraints_ = rod_constraints(space_, bc_, director);
    extraction_ = build_extraction(space_, constraints_);
    offset_ = reference_ - extraction_.expand(extraction_.reduce(reference_));

    n_quad_ = n_quad > 0 ? n_quad : space_.degree + 1;
    const auto rule = gauss_rule(n_quad_);
    const double h = space_.element_size();
    qps_.reserve(static_cast<std::size_t>(space_.n_elements * n_quad_));
    for (int e = 0; e < space_.n_elements; ++e) {
        for (int g = 0; g < n_quad_; ++g) {
            QuadPoint qp;
            qp.element = e;
            qp.s = (e + 0.5 * (rule.points[g] + 1.0)) * h;
            qp.weight = 0.5 * h * rule.weights[g];
            qp.basis = evaluate_basis(space_, qp.s);
            if (qp.basis.first_index != space_.first_basis_of_element(e))
                throw std::logic_error("rod model: quadrature point outside its element");
            qps_.push_back(std::move(qp));
        }
    }
    jac_floor_ = 1e-10 * space_.element_size();
    for (auto& qp : qps_) {
        const auto kin = kinematics(evaluate_fields(qp.basis, reference_), qp.s);
        const auto ss = strain_stress(kin, material_);
        qp.eps0 = ss.eps;
        qp.kappa0 = ss.kappa;
        qp.e0 = kin.jac - 1.0;
    }
}

Vector RodModel::expand(const Vector& q_red) const { return offset_ + extraction_.expand(q_red); }

Vector RodModel::expand_velocity(const Vector& qdot_red) const {
    return extraction_.expand(qdot_red);
}

bool RodModel::has_flow() const {
    for (const auto& load : loads_)
        if (std::holds_alternative<FlowLoad>(load)) return true;
    return false;
}

PointKinematics RodModel::kinematics(const AxisFields& f, double s) const {
    try {
        return point_kinematics(f.phi_p, f.phi_pp, jac_floor_);
    } catch (const DegenerateConfiguration& e) {
        std::ostringstream msg;
        msg << e.what() << " at s = " << s;
        throw DegenerateConfiguration(msg.str(), s);
    }
}

PointKinematics RodModel::kinematics(const AxisFields& f, const QuadPoint& qp) const {
    PointKinematics kin = kinematics(f, qp.s);
    kin.eps0 = qp.eps0;
    kin.kappa0 = qp.kappa0;
    return kin;
}

AssembledSystem reduce_system(const ExtractionMatrix& extraction, const AssembledSystem& full) {
    AssembledSystem out;
    const SparseMatrix Ct = extraction.C.transpose();
    out.residual = Ct * full.residual;
    if (full.has_tangent) {
        out.tangent = Ct * full.tangent * extraction.C;
        out.tangent.makeCompressed();
        out.has_tangent = true;
    }
    return out;
}

std::string to_string(CorrectionEvaluation c) {
    return c == CorrectionEvaluation::Midpoint ? "midpoint" : "endpoint_average";
}

CorrectionEvaluation correction_evaluation_from_string(const std::string& text) {
    if (text == "midpoint") return CorrectionEvaluation::Midpoint;
    if (text == "endpoint_average") return CorrectionEvaluation::EndpointAverage;
    throw std::invalid_argument("unknown correction evaluation '" + text +
                                "' (expected midpoint or endpoint_average)");
}

std::string to_string(InternalForceEvaluation e) {
    switch (e) {
        case InternalForceEvaluation::Trapezoidal: return "trapezoidal";
        case InternalForceEvaluation::Midpoint: return "midpoint";
        case InternalForceEvaluation::DiscreteGradient: return "discrete_gradient";
    }
    return "unknown";
}

InternalForceEvaluation internal_force_evaluation_from_string(const std::string& text) {
    if (text == "trapezoidal") return InternalForceEvaluation::Trapezoidal;
    if (text == "midpoint") return InternalForceEvaluation::Midpoint;
    if (text == "discrete_gradient") return InternalForceEvaluation::DiscreteGradient;
    throw std::invalid_argument("unknown internal force evaluation '" + text +
                                "' (expected trapezoidal, midpoint or discrete_gradient)");
}

Vector velocity_update(const Vector& q_n, const Vector& qdot_n, const Vector& q_next, double dt) {
    return (2.0 / dt) * (q_next - q_n) - qdot_n;
}

namespace {

/// Dense element-local residual/tangent and its global placement.
class LocalSystem {
public:
    LocalSystem(int first_basis, int n_local, bool with_tangent)
        : first_(first_basis),
          R_(Vector::Zero(3 * n_local)),
          K_(with_tangent ? Matrix::Zero(3 * n_local, 3 * n_local) : Matrix()),
          with_tangent_(with_tangent) {}

    void add(const PointDensity& dens, const BasisEval& basis, double w) {
        const auto n = static_cast<int>(basis.values.size());
        const std::array<const Vector*, 3> D{&basis.values, &basis.d1, &basis.d2};
        for (int a = 0; a < n; ++a) {
            Vec3 r = Vec3::Zero();
            for (int k = 0; k < 3; ++k) r += (*D[k])[a] * dens.r[k];
            R_.segment<3>(3 * a) += w * r;
        }
        if (!with_tangent_) return;
        for (int a = 0; a < n; ++a) {
            std::array<Mat3, 3> T;
            for (int j = 0; j < 3; ++j) {
                T[j] = (*D[0])[a] * dens.K[0][j] + (*D[1])[a] * dens.K[1][j] +
                       (*D[2])[a] * dens.K[2][j];
            }
            for (int b = 0; b < n; ++b) {
                K_.block<3, 3>(3 * a, 3 * b) +=
                    w * (T[0] * (*D[0])[b] + T[1] * (*D[1])[b] + T[2] * (*D[2])[b]);
            }
        }
    }

    void flush(Vector& R, std::vector<Triplet>* triplets) const {
        const int offset = 3 * first_;
        R.segment(offset, R_.size()) += R_;
        if (!with_tangent_ || triplets == nullptr) return;
        for (int j = 0; j < K_.cols(); ++j)
            for (int i = 0; i < K_.rows(); ++i)
                triplets->emplace_back(offset + i, offset + j, K_(i, j));
    }

private:
    int first_;
    Vector R_;
    Matrix K_;
    bool with_tangent_;
};

/// Adds a density evaluated at a single point (concentrated load) to the global system.
void add_point_density(const PointDensity& dens, const BasisEval& basis, Vector& R,
                       std::vector<Triplet>* triplets) {
    LocalSystem local(basis.first_index, static_cast<int>(basis.values.size()),
                      triplets != nullptr);
    local.add(dens, basis, 1.0);
    local.flush(R, triplets);
}

AssembledSystem finish(Vector R, std::vector<Triplet>* triplets, int n) {
    AssembledSystem out;
    out.residual = std::move(R);
    if (triplets != nullptr) {
        out.tangent.resize(n, n);
        out.tangent.setFromTriplets(triplets->begin(), triplets->end());
        out.tangent.makeCompressed();
        out.has_tangent = true;
    }
    return out;
}

template <typename Fn>
void for_each_element(const RodModel& model, bool with_tangent, Vector& R,
                      std::vector<Triplet>* triplets, Fn&& at_point) {
    const auto& qps = model.quad_points();
    const int nq = model.n_quad();
    const int n_local = model.space().degree + 1;
    PointDensity dens;
    for (std::size_t start = 0; start < qps.size(); start += static_cast<std::size_t>(nq)) {
        LocalSystem local(qps[start].basis.first_index, n_local, with_tangent);
        for (int g = 0; g < nq; ++g) {
            const auto& qp = qps[start + static_cast<std::size_t>(g)];
            dens.clear();
            at_point(qp, dens);
            local.add(dens, qp.basis, qp.weight);
        }
        local.flush(R, triplets);
    }
}

void reserve_triplets(const RodModel& model, std::vector<Triplet>& triplets) {
    const auto n_local = static_cast<std::size_t>(3 * (model.space().degree + 1));
    triplets.reserve(static_cast<std::size_t>(model.space().n_elements) * n_local * n_local +
                     model.loads().size() * n_local * n_local);
}

}  // namespace

AssembledSystem assemble_static(const RodModel& model, const Vector& q, double lambda,
                                bool with_tangent, const StaticTerms& terms) {
    const int n = model.full_dim();
    if (q.size() != n) throw std::invalid_argument("assemble_static: coefficient size mismatch");
    const auto& mat = model.material();
    Vec3 gravity = Vec3::Zero();
    for (const auto& load : model.loads()) {
        if (std::holds_alternative<FlowLoad>(load))
            throw std::invalid_argument("assemble_static: flow loads require a dynamic analysis");
        if (std::holds_alternative<Pulsating>(load))
            throw std::invalid_argument("assemble_static: pulsating loads require a dynamic analysis");
        if (const auto* g = std::get_if<Gravity>(&load)) gravity += g->g;
    }

    Vector R = Vector::Zero(n);
    std::vector<Triplet> triplets;
    std::vector<Triplet>* trip = with_tangent ? &triplets : nullptr;
    if (with_tangent) reserve_triplets(model, triplets);

    for_each_element(model, with_tangent, R, trip,
                     [&](const RodModel::QuadPoint& qp, PointDensity& dens) {
                         if (terms.internal) {
                             const auto f = evaluate_fields(qp.basis, q);
                             const auto kin = model.kinematics(f, qp);
                             add_internal_density(kin, mat, 1.0, dens, with_tangent);
                         }
                         if (terms.loads) dens.r[0] -= lambda * mat.A_rho * gravity;
                     });

    if (terms.loads) {
        PointDensity dens;
        for (const auto& load : model.loads()) {
            dens.clear();
            BasisEval basis;
            if (const auto* p = std::get_if<PointLoad>(&load)) {
                basis = model.basis_at(p->s);
                dens.r[0] -= lambda * p->force;
            } else if (const auto* fl = std::get_if<Follower2D>(&load)) {
                basis = model.basis_at(fl->s);
                const auto kin = model.kinematics(evaluate_fields(basis, q), fl->s);
                const auto ff = follower_force_2d(kin, fl->f0, fl->normal);
                dens.r[0] -= lambda * ff.force;
                dens.K[0][1] -= lambda * ff.d_phi_p;
            } else if (const auto* tm = std::get_if<TipMoment>(&load)) {
                const double s = model.space().length;
                basis = model.basis_at(s);
                const auto kin = model.kinematics(evaluate_fields(basis, q), s);
                const auto mf = tip_moment_load(kin, tm->moment);
                dens.r[1] -= lambda * mf.value;
                dens.K[1][1] -= lambda * mf.d_phi_p;
            } else {
                continue;
            }
            add_point_density(dens, basis, R, trip);
        }
    }
    return finish(std::move(R), trip, n);
}

Vector dynamic_step_constant_part(const RodModel& model, const StepContext& ctx,
                                  const DynamicTerms& terms) {
    const Vector& q0 = *ctx.q_n;
    const Vector& v0 = *ctx.qdot_n;
    const double dt = ctx.dt;
    const double t_mid = ctx.t_n + 0.5 * dt;
    const auto& mat = model.material();
    Vec3 gravity = Vec3::Zero();
    for (const auto& load : model.loads())
        if (const auto* g = std::get_if<Gravity>(&load)) gravity += g->g;

    Vector R = Vector::Zero(model.full_dim());
    for_each_element(model, false, R, nullptr,
                     [&](const RodModel::QuadPoint& qp, PointDensity& dens) {
                         const auto f0 = evaluate_fields(qp.basis, q0);
                         const auto kin0 = model.kinematics(f0, qp);
                         const auto fv0 = evaluate_fields(qp.basis, v0);
                         if (terms.inertia)
                             add_momentum_density(kin0, fv0.phi, fv0.phi_p, mat, -1.0 / dt, 0.0,
                                                  0.0, dens, false);
                         if (terms.correction &&
                             terms.correction_eval == CorrectionEvaluation::EndpointAverage)
                             add_inertia_correction_density(kin0, fv0.phi_p, mat, 0.5, 0.0, 0.0,
                                                            dens, false);
                         if (terms.internal &&
                             terms.internal_eval == InternalForceEvaluation::Trapezoidal)
                             add_internal_density(kin0, mat, 0.5, dens, false);
                         if (terms.loads) dens.r[0] -= mat.A_rho * gravity;
                         if (terms.flow) {
                             for (const auto& load : model.loads()) {
                                 const auto* fl = std::get_if<FlowLoad>(&load);
                                 if (fl == nullptr) continue;
                                 const double C1 = fl->coeffs.C1();
                                 const auto pa = projected_ambient_acceleration(
                                     kin0, f0.phi, fl->profile, ctx.t_n);
                                 const auto pv = projected_velocity(kin0, fv0.phi);
                                 const auto drag = flow_drag_point(kin0, f0.phi, fv0.phi,
                                                                   fl->profile, ctx.t_n, fl->coeffs);
                                 dens.r[0] -= C1 * (0.5 * pa.value + pv.value / dt) +
                                              0.5 * drag.force;
                             }
                         }
                     });

    if (terms.loads) {
        PointDensity dens;
        for (const auto& load : model.loads()) {
            dens.clear();
            BasisEval basis;
            if (const auto* p = std::get_if<PointLoad>(&load)) {
                basis = model.basis_at(p->s);
                const Vec3 F = p->t_c > 0.0 ? vanishing_point_load(t_mid, p->t_c, p->force)
                                            : p->force;
                dens.r[0] -= F;
            } else if (const auto* pl = std::get_if<Pulsating>(&load)) {
                basis = model.basis_at(pl->s);
                dens.r[0] -= pulsating_force(t_mid, pl->amplitude, pl->omega, pl->convention,
                                             pl->direction);
            } else {
                continue;
            }
            add_point_density(dens, basis, R, nullptr);
        }
    }
    return R;
}

AssembledSystem assemble_dynamic_step(const RodModel& model, const StepContext& ctx,
                                      const Vector& q_next, bool with_tangent,
                                      const DynamicTerms& terms, const Vector* constant_part) {
    const int n = model.full_dim();
    if (ctx.q_n == nullptr || ctx.qdot_n == nullptr)
        throw std::invalid_argument("assemble_dynamic_step: missing start state");
    if (ctx.dt == 0.0 || !std::isfinite(ctx.dt))
        throw std::invalid_argument("assemble_dynamic_step: dt must be finite and non-zero");
    const Vector& q0 = *ctx.q_n;
    const Vector& v0 = *ctx.qdot_n;
    if (q0.size() != n || v0.size() != n || q_next.size() != n)
        throw std::invalid_argument("assemble_dynamic_step: coefficient size mismatch");

    const double dt = ctx.dt;
    const double t1 = ctx.t_n + dt;
    const auto& mat = model.material();
    const Vector v1 = velocity_update(q0, v0, q_next, dt);
    const Vector q_mid = 0.5 * (q0 + q_next);
    const Vector v_mid = (q_next - q0) / dt;
    const bool midpoint_corr = terms.correction_eval == CorrectionEvaluation::Midpoint;
    const bool midpoint_internal = terms.internal_eval == InternalForceEvaluation::Midpoint;

    Vector R = constant_part != nullptr ? *constant_part
                                        : dynamic_step_constant_part(model, ctx, terms);
    std::vector<Triplet> triplets;
    std::vector<Triplet>* trip = with_tangent ? &triplets : nullptr;
    if (with_tangent) reserve_triplets(model, triplets);

    for_each_element(
        model, with_tangent, R, trip, [&](const RodModel::QuadPoint& qp, PointDensity& dens) {
            const auto f1 = evaluate_fields(qp.basis, q_next);
            const auto kin1 = model.kinematics(f1, qp);
            const auto fv1 = evaluate_fields(qp.basis, v1);
            if (terms.inertia)
                add_momentum_density(kin1, fv1.phi, fv1.phi_p, mat, 1.0 / dt, 1.0 / dt,
                                     2.0 / (dt * dt), dens, with_tangent);
            const bool need_mid =
                (terms.correction && midpoint_corr) || (terms.internal && midpoint_internal);
            PointKinematics kinm;
            if (need_mid) kinm = model.kinematics(evaluate_fields(qp.basis, q_mid), qp);
            if (terms.correction) {
                if (midpoint_corr) {
                    const auto fvm = evaluate_fields(qp.basis, v_mid);
                    add_inertia_correction_density(kinm, fvm.phi_p, mat, 1.0, 0.5, 1.0 / dt, dens,
                                                   with_tangent);
                } else {
                    add_inertia_correction_density(kin1, fv1.phi_p, mat, 0.5, 0.5, 1.0 / dt, dens,
                                                   with_tangent);
                }
            }
            if (terms.internal) {
                switch (terms.internal_eval) {
                    case InternalForceEvaluation::Trapezoidal:
                        add_internal_density(kin1, mat, 0.5, dens, with_tangent);
                        break;
                    case InternalForceEvaluation::Midpoint:
                        add_internal_density(kinm, mat, 1.0, 0.5, dens, with_tangent);
                        break;
                    case InternalForceEvaluation::DiscreteGradient: {
                        const auto f0 = evaluate_fields(qp.basis, q0);
                        add_internal_discrete_gradient_density(f0.phi_p, f0.phi_pp, f1.phi_p,
                                                               f1.phi_pp, mat, qp.e0, dens,
                                                               with_tangent);
                        break;
                    }
                }
            }
            if (terms.flow) {
                for (const auto& load : model.loads()) {
                    const auto* fl = std::get_if<FlowLoad>(&load);
                    if (fl == nullptr) continue;
                    const double C1 = fl->coeffs.C1();
                    const auto pa = projected_ambient_acceleration(kin1, f1.phi, fl->profile, t1);
                    const auto pv = projected_velocity(kin1, fv1.phi);
                    const auto drag =
                        flow_drag_point(kin1, f1.phi, fv1.phi, fl->profile, t1, fl->coeffs);
                    dens.r[0] -= C1 * (0.5 * pa.value - pv.value / dt) + 0.5 * drag.force;
                    if (with_tangent) {
                        dens.K[0][0] -= C1 * (0.5 * pa.d_phi - (2.0 / (dt * dt)) * pv.d_phi_dot) +
                                        0.5 * drag.d_phi + (1.0 / dt) * drag.d_phi_dot;
                        dens.K[0][1] -= C1 * (0.5 * pa.d_phi_p - pv.d_phi_p / dt) +
                                        0.5 * drag.d_phi_p;
                    }
                }
            }
        });

    if (terms.loads) {
        PointDensity dens;
        for (const auto& load : model.loads()) {
            dens.clear();
            BasisEval basis;
            if (const auto* fl = std::get_if<Follower2D>(&load)) {
                basis = model.basis_at(fl->s);
                const auto kin = model.kinematics(evaluate_fields(basis, q_mid), fl->s);
                const auto ff = follower_force_2d(kin, fl->f0, fl->normal);
                dens.r[0] -= ff.force;
                dens.K[0][1] -= 0.5 * ff.d_phi_p;
            } else if (const auto* tm = std::get_if<TipMoment>(&load)) {
                const double s = model.space().length;
                basis = model.basis_at(s);
                const auto kin = model.kinematics(evaluate_fields(basis, q_mid), s);
                const auto mf = tip_moment_load(kin, tm->moment);
                dens.r[1] -= mf.value;
                dens.K[1][1] -= 0.5 * mf.d_phi_p;
            } else {
                continue;
            }
            add_point_density(dens, basis, R, trip);
        }
    }
    return finish(std::move(R), trip, n);
}

SparseMatrix assemble_mass(const RodModel& model, const Vector& q) {
    const int n = model.full_dim();
    Vector R = Vector::Zero(n);
    std::vector<Triplet> triplets;
    reserve_triplets(model, triplets);
    const auto& mat = model.material();
    for_each_element(model, true, R, &triplets,
                     [&](const RodModel::QuadPoint& qp, PointDensity& dens) {
                         const auto kin = model.kinematics(evaluate_fields(qp.basis, q), qp);
                         add_momentum_density(kin, Vec3::Zero(), Vec3::Zero(), mat, 0.0, 0.0, 1.0,
                                              dens, true);
                     });
    SparseMatrix M(n, n);
    M.setFromTriplets(triplets.begin(), triplets.end());
    M.makeCompressed();
    return M;
}

Vector assemble_internal_force(const RodModel& model, const Vector& q) {
    Vector R = Vector::Zero(model.full_dim());
    const auto& mat = model.material();
    for_each_element(model, false, R, nullptr,
                     [&](const RodModel::QuadPoint& qp, PointDensity& dens) {
                         const auto kin = model.kinematics(evaluate_fields(qp.basis, q), qp);
                         add_internal_density(kin, mat, 1.0, dens, false);
                     });
    return R;
}

Vector solve_linear(const SparseMatrix& K, const Vector& rhs) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(K);
    lu.factorize(K);
    if (lu.info() != Eigen::Success) throw LinearSolveError("sparse LU factorization failed");
    Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite())
        throw LinearSolveError("sparse LU solve failed");
    return x;
}

}  // namespace krod
