#pragma once

#include <krod/assembly.hpp>
#include <krod/types.hpp>

#include <functional>
#include <vector>

namespace krod {

struct Trajectory;

/// Conserved quantities of one stored state.
struct DiagnosticsRecord {
    double t = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
    Vec3 linear = Vec3::Zero();
    Vec3 angular = Vec3::Zero();
};

struct Energies {
    double kinetic = 0.0;
    double potential = 0.0;
};

/// T = int 1/2 (A_rho |phi_dot|^2 + alpha I_rho |d_dot|^2) ds,
/// U = int 1/2 (EA |eps|^2 + EI |kappa|^2) ds.
[[nodiscard]] Energies energies(const RodModel& model, const Vector& q, const Vector& qdot);

struct Momenta {
    Vec3 linear = Vec3::Zero();
    Vec3 angular = Vec3::Zero();
};

/// l = int A_rho phi_dot ds, j = int (A_rho phi x phi_dot + alpha I_rho d x d_dot) ds,
/// angular momentum about the origin.
[[nodiscard]] Momenta momenta(const RodModel& model, const Vector& q, const Vector& qdot);

/// Angular momentum of the discrete momentum vector p = M(q) qdot, sum_i x_i x p_i,
/// which is the quantity the time integrator acts on.
[[nodiscard]] Vec3 discrete_angular_momentum(const RodModel& model, const Vector& q,
                                             const Vector& qdot);

[[nodiscard]] DiagnosticsRecord make_record(const RodModel& model, double t, const Vector& q,
                                            const Vector& qdot);

/// Parametric reference curve with its first two arc-length derivatives.
struct ReferenceCurve {
    std::function<Vec3(double)> value;
    std::function<Vec3(double)> d1;
    std::function<Vec3(double)> d2;
};

/// Planar circle traced by a cantilever along `director` (E1) bent by a tip
/// moment about E3 of magnitude lambda 2 pi EI / L: curvature 2 pi lambda / L.
[[nodiscard]] ReferenceCurve roll_up_reference(double length, double lambda = 1.0);

struct ErrorNorms {
    double L2 = 0.0;
    double H1_semi = 0.0;
    double H2_semi = 0.0;
};

/// Relative L2, H1 and H2 (semi-)norm errors of phi_h against `reference`,
/// using n_quad Gauss points per element (default p + 3).
[[nodiscard]] ErrorNorms error_norms(const SplineSpace& space, const Vector& q,
                                     const ReferenceCurve& reference, int n_quad = 0);

/// ||phi_h(q) - phi_h(q_ref)||_L2 / ||phi_h(q_ref)||_L2 on [0, L].
[[nodiscard]] double relative_l2_change(const SplineSpace& space, const Vector& q,
                                        const Vector& q_ref, int n_quad = 0);

/// One-sided magnitude spectrum of a uniformly sampled series.
struct Spectrum {
    std::vector<double> frequency;  ///< [Hz]
    std::vector<double> magnitude;  ///< 2|X_k|/N for k > 0, DC bin zeroed
    std::size_t samples_used = 0;
};

/// FFT of the series truncated before its first sample exceeding `threshold`
/// (no truncation if threshold <= 0); the mean is removed first.
[[nodiscard]] Spectrum fft_series(const std::vector<double>& series, double dt, double threshold,
                                  bool hann = false);

/// fft_series applied to the kinetic energy of a trajectory.
[[nodiscard]] Spectrum fft_kinetic(const Trajectory& trajectory, double threshold,
                                   bool hann = false);

/// Integral of the magnitude over f_lo <= f <= f_hi (bin sum times the bin width), so
/// spectra of series with different lengths compare on the same scale.
[[nodiscard]] double band_integral(const Spectrum& spectrum, double f_lo, double f_hi);

/// Q_II(t_i) = ||u_dt - u_dt/2|| / ||u_dt/2 - u_dt/4|| per common sample.
/// Samples whose denominator vanishes (relative to the sample size) are NaN.
[[nodiscard]] std::vector<double> precision_quotient(const std::vector<Vector>& u_dt,
                                                     const std::vector<Vector>& u_dt2,
                                                     const std::vector<Vector>& u_dt4);

/// Fraction of non-masked samples with lo <= Q <= hi, and the number of non-masked samples.
struct QuotientSummary {
    double fraction_in_band = 0.0;
    std::size_t valid = 0;
};
[[nodiscard]] QuotientSummary summarize_quotient(const std::vector<double>& q, double lo,
                                                 double hi);

/// Discretization used by the linear-beam propagator probe.
enum class DetProbeBasis {
    Hermite,               ///< classical nodal cubic Hermite elements
    BSpline,               ///< cubic C1 B-splines
    BSplineOutlierRemoved  ///< cubic C1 B-splines with the free-end outlier rows
};

[[nodiscard]] std::string to_string(DetProbeBasis b);

/// Free-free linear Euler-Bernoulli beam M u'' + K u = 0 integrated with the
/// hybrid scheme: returns det(A_L^-1 A_R) of the one-step propagator.
[[nodiscard]] double linear_beam_det_probe(DetProbeBasis basis, int n_elements, double length,
                                           double dt, double EI, double rho_A);

/// Same probe on an arbitrary scalar spline space with an optional constraint set.
[[nodiscard]] double linear_beam_det_probe(const SplineSpace& space,
                                           const ConstraintSet& constraints, double dt, double EI,
                                           double rho_A);

/// det(A_L^-1 A_R) for given mass and stiffness matrices.
[[nodiscard]] double propagator_determinant(const Matrix& M, const Matrix& K, double dt);

struct SteadyStateStats {
    double mean = 0.0;
    double amplitude = 0.0;  ///< max - min over the window
    bool periodic = false;   ///< successive cycle extrema agree within 1 % of the amplitude
    int cycles = 0;          ///< complete cycles found in the window
};

/// Statistics of the trailing `window` seconds of a sampled series.
[[nodiscard]] SteadyStateStats steady_state_stats(const std::vector<double>& times,
                                                  const std::vector<double>& series,
                                                  double window);

/// Steady-state amplitude of m x'' + b x' + k x = f0 sin(Omega t):
/// f0 / sqrt(m^2 (Omega^2 - omega0^2)^2 + b^2 Omega^2) with omega0^2 = k/m.
[[nodiscard]] double linear_oscillator_amplitude(double f0, double m, double k, double b,
                                                 double omega);

}  // namespace krod
