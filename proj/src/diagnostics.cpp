#include <krod/diagnostics.hpp>
#include <krod/dynamic_solver.hpp>

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace krod {

Energies energies(const RodModel& model, const Vector& q, const Vector& qdot) {
    Energies e;
    const auto& mat = model.material();
    for (const auto& qp : model.quad_points()) {
        const auto f = evaluate_fields(qp.basis, q);
        const auto v = evaluate_fields(qp.basis, qdot);
        const auto kin = model.kinematics(f, qp);
        e.kinetic += qp.weight * kinetic_density(kin, v.phi, v.phi_p, mat);
        e.potential += qp.weight * potential_density(kin, mat);
    }
    return e;
}

Momenta momenta(const RodModel& model, const Vector& q, const Vector& qdot) {
    Momenta m;
    const auto& mat = model.material();
    const double rot = mat.alpha * mat.I_rho;
    for (const auto& qp : model.quad_points()) {
        const auto f = evaluate_fields(qp.basis, q);
        const auto v = evaluate_fields(qp.basis, qdot);
        m.linear += qp.weight * mat.A_rho * v.phi;
        m.angular += qp.weight * mat.A_rho * f.phi.cross(v.phi);
        if (rot != 0.0) {
            const auto kin = model.kinematics(f, qp);
            m.angular += qp.weight * rot * kin.d.cross(director_rate(kin, v.phi_p));
        }
    }
    return m;
}

Vec3 discrete_angular_momentum(const RodModel& model, const Vector& q, const Vector& qdot) {
    const Vector p = assemble_mass(model, q) * qdot;
    Vec3 j = Vec3::Zero();
    for (int i = 0; i < model.space().basis_count(); ++i)
        j += control_point(q, i).cross(p.segment<3>(3 * i));
    return j;
}

DiagnosticsRecord make_record(const RodModel& model, double t, const Vector& q,
                              const Vector& qdot) {
    DiagnosticsRecord r;
    r.t = t;
    const auto e = energies(model, q, qdot);
    const auto m = momenta(model, q, qdot);
    r.kinetic = e.kinetic;
    r.potential = e.potential;
    r.total = e.kinetic + e.potential;
    r.linear = m.linear;
    r.angular = m.angular;
    return r;
}

ReferenceCurve roll_up_reference(double length, double lambda) {
    const double kappa = 2.0 * std::numbers::pi * lambda / length;
    ReferenceCurve c;
    if (kappa == 0.0) {
        c.value = [](double s) { return Vec3(s, 0.0, 0.0); };
        c.d1 = [](double) { return Vec3(1.0, 0.0, 0.0); };
        c.d2 = [](double) { return Vec3::Zero().eval(); };
        return c;
    }
    c.value = [kappa](double s) {
        return Vec3(std::sin(kappa * s) / kappa, (1.0 - std::cos(kappa * s)) / kappa, 0.0);
    };
    c.d1 = [kappa](double s) { return Vec3(std::cos(kappa * s), std::sin(kappa * s), 0.0); };
    c.d2 = [kappa](double s) {
        return Vec3(-kappa * std::sin(kappa * s), kappa * std::cos(kappa * s), 0.0);
    };
    return c;
}

ErrorNorms error_norms(const SplineSpace& space, const Vector& q, const ReferenceCurve& reference,
                       int n_quad) {
    const int nq = n_quad > 0 ? n_quad : std::min(space.degree + 3, 16);
    const auto rule = gauss_rule(nq);
    const double h = space.element_size();
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    for (int e = 0; e < space.n_elements; ++e) {
        for (int g = 0; g < nq; ++g) {
            const double s = (e + 0.5 * (rule.points[g] + 1.0)) * h;
            const double w = 0.5 * h * rule.weights[g];
            const auto f = evaluate_fields(evaluate_basis(space, s), q);
            const Vec3 x = reference.value(s);
            const Vec3 x1 = reference.d1(s);
            const Vec3 x2 = reference.d2(s);
            e0 += w * (f.phi - x).squaredNorm();
            e1 += w * (f.phi_p - x1).squaredNorm();
            e2 += w * (f.phi_pp - x2).squaredNorm();
            r0 += w * x.squaredNorm();
            r1 += w * x1.squaredNorm();
            r2 += w * x2.squaredNorm();
        }
    }
    // A vanishing reference norm (e.g. phi'' of a straight rod) falls back to the absolute error.
    auto rel = [](double err, double ref) { return std::sqrt(ref > 0.0 ? err / ref : err); };
    return {rel(e0, r0), rel(e1, r1), rel(e2, r2)};
}

double relative_l2_change(const SplineSpace& space, const Vector& q, const Vector& q_ref,
                          int n_quad) {
    if (q.size() != q_ref.size() || q.size() != 3 * space.basis_count())
        throw std::invalid_argument("relative_l2_change: coefficient vectors do not match the space");
    const int nq = n_quad > 0 ? n_quad : std::min(space.degree + 3, 16);
    const auto rule = gauss_rule(nq);
    const double h = space.element_size();
    const Vector diff = q - q_ref;
    double num = 0.0, den = 0.0;
    for (int e = 0; e < space.n_elements; ++e) {
        for (int g = 0; g < nq; ++g) {
            const double s = (e + 0.5 * (rule.points[g] + 1.0)) * h;
            const double w = 0.5 * h * rule.weights[g];
            const auto basis = evaluate_basis(space, s);
            num += w * evaluate_fields(basis, diff).phi.squaredNorm();
            den += w * evaluate_fields(basis, q_ref).phi.squaredNorm();
        }
    }
    if (!(den > 0.0)) throw std::invalid_argument("relative_l2_change: reference has zero norm");
    return std::sqrt(num / den);
}

Spectrum fft_series(const std::vector<double>& series, double dt, double threshold, bool hann) {
    if (series.empty()) throw std::invalid_argument("fft: empty series");
    if (!(dt > 0.0)) throw std::invalid_argument("fft: dt must be positive");
    std::size_t n = series.size();
    if (threshold > 0.0) {
        const auto it = std::find_if(series.begin(), series.end(),
                                     [threshold](double v) { return v > threshold; });
        n = static_cast<std::size_t>(it - series.begin());
    }
    if (n < 2) throw std::invalid_argument("fft: fewer than two samples below the threshold");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += series[i];
    mean /= static_cast<double>(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 1.0;
        if (hann) w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1));
        x[i] = w * (series[i] - mean);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> X;
    fft.fwd(X, x);

    Spectrum out;
    out.samples_used = n;
    const std::size_t half = n / 2;
    out.frequency.resize(half + 1);
    out.magnitude.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        out.frequency[k] = static_cast<double>(k) / (static_cast<double>(n) * dt);
        out.magnitude[k] = k == 0 ? 0.0 : 2.0 * std::abs(X[k]) / static_cast<double>(n);
    }
    return out;
}

Spectrum fft_kinetic(const Trajectory& trajectory, double threshold, bool hann) {
    std::vector<double> kinetic;
    kinetic.reserve(trajectory.diagnostics.size());
    for (const auto& r : trajectory.diagnostics) kinetic.push_back(r.kinetic);
    return fft_series(kinetic, trajectory.dt, threshold, hann);
}

double band_integral(const Spectrum& spectrum, double f_lo, double f_hi) {
    if (spectrum.frequency.size() < 2) return 0.0;
    const double df = spectrum.frequency[1] - spectrum.frequency[0];
    double sum = 0.0;
    for (std::size_t k = 0; k < spectrum.frequency.size(); ++k)
        if (spectrum.frequency[k] >= f_lo && spectrum.frequency[k] <= f_hi)
            sum += spectrum.magnitude[k];
    return sum * df;
}

std::vector<double> precision_quotient(const std::vector<Vector>& u_dt,
                                       const std::vector<Vector>& u_dt2,
                                       const std::vector<Vector>& u_dt4) {
    if (u_dt.size() != u_dt2.size() || u_dt.size() != u_dt4.size())
        throw std::invalid_argument("precision_quotient: series must share their sample times");
    std::vector<double> out(u_dt.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < u_dt.size(); ++i) {
        const double num = (u_dt[i] - u_dt2[i]).norm();
        const double den = (u_dt2[i] - u_dt4[i]).norm();
        const double floor = 16.0 * eps * std::max(1.0, u_dt4[i].norm());
        out[i] = den > floor ? num / den : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

QuotientSummary summarize_quotient(const std::vector<double>& q, double lo, double hi) {
    QuotientSummary s;
    std::size_t in_band = 0;
    for (double v : q) {
        if (std::isnan(v)) continue;
        ++s.valid;
        if (v >= lo && v <= hi) ++in_band;
    }
    s.fraction_in_band = s.valid > 0 ? static_cast<double>(in_band) / static_cast<double>(s.valid)
                                     : 0.0;
    return s;
}

std::string to_string(DetProbeBasis b) {
    switch (b) {
        case DetProbeBasis::Hermite: return "hermite";
        case DetProbeBasis::BSpline: return "bspline_c1";
        case DetProbeBasis::BSplineOutlierRemoved: return "bspline_c1_outliers_removed";
    }
    return "unknown";
}

double propagator_determinant(const Matrix& M, const Matrix& K, double dt) {
    const auto n = M.rows();
    if (M.cols() != n || K.rows() != n || K.cols() != n)
        throw std::invalid_argument("det probe: M and K must be square and of equal size");
    const Matrix I = Matrix::Identity(n, n);
    Matrix AL(2 * n, 2 * n);
    Matrix AR(2 * n, 2 * n);
    AL << dt * K, 2.0 * M, -2.0 * I, dt * I;
    AR << -dt * K, 2.0 * M, -2.0 * I, -dt * I;
    const Eigen::FullPivLU<Matrix> check(AL);
    if (!check.isInvertible()) throw std::runtime_error("det probe: A_L is singular");
    const Matrix A = AL.partialPivLu().solve(AR);
    return A.partialPivLu().determinant();
}

double linear_beam_det_probe(const SplineSpace& space, const ConstraintSet& constraints, double dt,
                             double EI, double rho_A) {
    const auto ext = build_extraction(space, constraints, 1);
    const int m = space.basis_count();
    Matrix M = Matrix::Zero(m, m);
    Matrix K = Matrix::Zero(m, m);
    const auto rule = gauss_rule(space.degree + 1);
    const double h = space.element_size();
    for (int e = 0; e < space.n_elements; ++e) {
        for (int g = 0; g < rule.order(); ++g) {
            const double s = (e + 0.5 * (rule.points[g] + 1.0)) * h;
            const double w = 0.5 * h * rule.weights[g];
            const auto b = evaluate_basis(space, s);
            const auto n = static_cast<int>(b.values.size());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    M(b.first_index + i, b.first_index + j) += w * rho_A * b.values[i] * b.values[j];
                    K(b.first_index + i, b.first_index + j) += w * EI * b.d2[i] * b.d2[j];
                }
        }
    }
    const Matrix C(ext.C);
    return propagator_determinant(C.transpose() * M * C, C.transpose() * K * C, dt);
}

double linear_beam_det_probe(DetProbeBasis basis, int n_elements, double length, double dt,
                             double EI, double rho_A) {
    if (n_elements < 1 || !(length > 0.0) || !(EI > 0.0) || !(rho_A > 0.0))
        throw std::invalid_argument("det probe: invalid beam parameters");
    if (basis == DetProbeBasis::Hermite) {
        const int n = 2 * (n_elements + 1);
        const double h = length / n_elements;
        Matrix Me(4, 4);
        Me << 156, 22 * h, 54, -13 * h,
              22 * h, 4 * h * h, 13 * h, -3 * h * h,
              54, 13 * h, 156, -22 * h,
              -13 * h, -3 * h * h, -22 * h, 4 * h * h;
        Me *= rho_A * h / 420.0;
        Matrix Ke(4, 4);
        Ke << 12, 6 * h, -12, 6 * h,
              6 * h, 4 * h * h, -6 * h, 2 * h * h,
              -12, -6 * h, 12, -6 * h,
              6 * h, 2 * h * h, -6 * h, 4 * h * h;
        Ke *= EI / (h * h * h);
        Matrix M = Matrix::Zero(n, n);
        Matrix K = Matrix::Zero(n, n);
        for (int e = 0; e < n_elements; ++e) {
            M.block<4, 4>(2 * e, 2 * e) += Me;
            K.block<4, 4>(2 * e, 2 * e) += Ke;
        }
        return propagator_determinant(M, K, dt);
    }
    const auto space = make_space(3, 1, n_elements, length);
    ConstraintSet constraints;
    if (basis == DetProbeBasis::BSplineOutlierRemoved) {
        constraints = outlier_constraints(3, BoundarySide::Start, BoundaryKind::Free, 1);
        const auto end = outlier_constraints(3, BoundarySide::End, BoundaryKind::Free, 1);
        constraints.insert(constraints.end(), end.begin(), end.end());
    }
    return linear_beam_det_probe(space, constraints, dt, EI, rho_A);
}

SteadyStateStats steady_state_stats(const std::vector<double>& times,
                                    const std::vector<double>& series, double window) {
    if (times.size() != series.size() || times.empty())
        throw std::invalid_argument("steady_state_stats: times and series must match");
    if (!(window > 0.0)) throw std::invalid_argument("steady_state_stats: window must be positive");
    const double t_end = times.back();
    const double tol = 1e-9 * std::max(1.0, std::abs(t_end));
    if (window > t_end - times.front() + tol)
        throw std::invalid_argument("steady_state_stats: window longer than the series");
    std::size_t start = 0;
    while (start < times.size() && times[start] < t_end - window - tol) ++start;

    SteadyStateStats st;
    double lo = series[start];
    double hi = series[start];
    double sum = 0.0;
    for (std::size_t i = start; i < series.size(); ++i) {
        sum += series[i];
        lo = std::min(lo, series[i]);
        hi = std::max(hi, series[i]);
    }
    const auto count = static_cast<double>(series.size() - start);
    st.mean = sum / count;
    st.amplitude = hi - lo;
    if (st.amplitude == 0.0) {
        st.periodic = true;
        return st;
    }

    // Split the window at upward crossings of the mean and compare cycle extrema.
    std::vector<std::size_t> crossings;
    for (std::size_t i = start + 1; i < series.size(); ++i)
        if (series[i - 1] < st.mean && series[i] >= st.mean) crossings.push_back(i);
    std::vector<double> maxima;
    std::vector<double> minima;
    for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
        const auto first = series.begin() + static_cast<std::ptrdiff_t>(crossings[c]);
        const auto last = series.begin() + static_cast<std::ptrdiff_t>(crossings[c + 1]);
        maxima.push_back(*std::max_element(first, last));
        minima.push_back(*std::min_element(first, last));
    }
    st.cycles = static_cast<int>(maxima.size());
    if (st.cycles < 2) return st;
    st.periodic = true;
    for (std::size_t c = 1; c < maxima.size(); ++c) {
        if (std::abs(maxima[c] - maxima[c - 1]) > 0.01 * st.amplitude ||
            std::abs(minima[c] - minima[c - 1]) > 0.01 * st.amplitude) {
            st.periodic = false;
            break;
        }
    }
    return st;
}

double linear_oscillator_amplitude(double f0, double m, double k, double b, double omega) {
    if (!(m > 0.0) || !(k >= 0.0) || !(b >= 0.0))
        throw std::invalid_argument("linear oscillator: m > 0, k >= 0, b >= 0 required");
    const double w0sq = k / m;
    const double detune = omega * omega - w0sq;
    return f0 / std::sqrt(m * m * detune * detune + b * b * omega * omega);
}

}  // namespace krod
