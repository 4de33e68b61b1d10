#include <krod/forces.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace krod {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

FreestreamProfile FreestreamProfile::rotating(double v0, double beta0, double length) {
    FreestreamProfile p;
    p.kind = Kind::RotatingWind;
    p.v0 = v0;
    p.beta0 = beta0;
    p.length = length;
    p.axis = 2;
    return p;
}

FreestreamProfile FreestreamProfile::parabolic(double v0, double length, const Vec3& direction,
                                               int axis, double modulation_amplitude,
                                               double modulation_omega) {
    FreestreamProfile p;
    p.kind = Kind::ParabolicWind;
    p.v0 = v0;
    p.length = length;
    p.direction = direction;
    p.axis = axis;
    p.modulation_amplitude = modulation_amplitude;
    p.modulation_omega = modulation_omega;
    return p;
}

FreestreamProfile FreestreamProfile::table(std::vector<double> z, std::vector<double> speed,
                                           const Vec3& direction, int axis) {
    FreestreamProfile p;
    p.kind = Kind::Table;
    p.table_z = std::move(z);
    p.table_speed = std::move(speed);
    p.direction = direction;
    p.axis = axis;
    p.validate();
    return p;
}

FreestreamProfile FreestreamProfile::table_from_text(const std::string& text,
                                                     const Vec3& direction, int axis) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> z;
    std::vector<double> speed;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        double zi = 0.0;
        double vi = 0.0;
        if (!(row >> zi >> vi)) {
            throw std::invalid_argument("flow table line " + std::to_string(line_no) +
                                        ": expected two numbers");
        }
        z.push_back(zi);
        speed.push_back(vi);
    }
    return table(std::move(z), std::move(speed), direction, axis);
}

void FreestreamProfile::validate() const {
    require(axis >= 0 && axis <= 2, "flow profile: axis must be 0, 1 or 2");
    require(std::isfinite(v0) && std::isfinite(beta0), "flow profile: non-finite parameter");
    switch (kind) {
        case Kind::Still:
            break;
        case Kind::RotatingWind:
            require(length > 0.0, "flow profile: length must be positive");
            break;
        case Kind::ParabolicWind:
            require(length > 0.0, "flow profile: length must be positive");
            require(finite(direction), "flow profile: non-finite direction");
            require(std::isfinite(modulation_amplitude) && std::isfinite(modulation_omega),
                    "flow profile: non-finite modulation");
            break;
        case Kind::Table:
            require(table_z.size() >= 2 && table_z.size() == table_speed.size(),
                    "flow profile: table needs at least two (z, speed) rows");
            for (std::size_t i = 1; i < table_z.size(); ++i)
                require(table_z[i] > table_z[i - 1], "flow profile: table heights must increase");
            require(finite(direction), "flow profile: non-finite direction");
            break;
    }
}

Vec3 rotating_wind_profile(double z, double v0, double beta0, double length) {
    const double angle = beta0 - 2.0 * beta0 * z / length;
    return v0 * Vec3(std::cos(angle), std::sin(angle), 0.0);
}

namespace {

/// Index i with table_z[i] <= z < table_z[i+1], or -1 / n-1 outside.
std::ptrdiff_t table_interval(const std::vector<double>& zs, double z) {
    if (z < zs.front()) return -1;
    if (z >= zs.back()) return static_cast<std::ptrdiff_t>(zs.size()) - 1;
    const auto it = std::upper_bound(zs.begin(), zs.end(), z);
    return (it - zs.begin()) - 1;
}

}  // namespace

Vec3 FreestreamProfile::velocity(double z, double t) const {
    switch (kind) {
        case Kind::Still:
            return Vec3::Zero();
        case Kind::RotatingWind:
            return rotating_wind_profile(z, v0, beta0, length);
        case Kind::ParabolicWind: {
            const double zeta = z / length;
            return v0 * zeta * zeta * (1.0 + modulation_amplitude * std::sin(modulation_omega * t)) *
                   direction;
        }
        case Kind::Table: {
            const auto i = table_interval(table_z, z);
            if (i < 0) return table_speed.front() * direction;
            const auto n = static_cast<std::ptrdiff_t>(table_z.size());
            if (i >= n - 1) return table_speed.back() * direction;
            const double w = (z - table_z[i]) / (table_z[i + 1] - table_z[i]);
            return ((1.0 - w) * table_speed[i] + w * table_speed[i + 1]) * direction;
        }
    }
    return Vec3::Zero();
}

Vec3 FreestreamProfile::acceleration(double z, double t) const {
    if (kind != Kind::ParabolicWind) return Vec3::Zero();
    const double zeta = z / length;
    return v0 * zeta * zeta * modulation_amplitude * modulation_omega *
           std::cos(modulation_omega * t) * direction;
}

Vec3 FreestreamProfile::velocity_dz(double z, double t) const {
    switch (kind) {
        case Kind::Still:
            return Vec3::Zero();
        case Kind::RotatingWind: {
            const double angle = beta0 - 2.0 * beta0 * z / length;
            const double rate = -2.0 * beta0 / length;
            return v0 * rate * Vec3(-std::sin(angle), std::cos(angle), 0.0);
        }
        case Kind::ParabolicWind:
            return v0 * 2.0 * z / (length * length) *
                   (1.0 + modulation_amplitude * std::sin(modulation_omega * t)) * direction;
        case Kind::Table: {
            const auto i = table_interval(table_z, z);
            const auto n = static_cast<std::ptrdiff_t>(table_z.size());
            if (i < 0 || i >= n - 1) return Vec3::Zero();
            return (table_speed[i + 1] - table_speed[i]) / (table_z[i + 1] - table_z[i]) *
                   direction;
        }
    }
    return Vec3::Zero();
}

Vec3 FreestreamProfile::acceleration_dz(double z, double t) const {
    if (kind != Kind::ParabolicWind) return Vec3::Zero();
    return v0 * 2.0 * z / (length * length) * modulation_amplitude * modulation_omega *
           std::cos(modulation_omega * t) * direction;
}

std::string to_string(FreestreamProfile::Kind kind) {
    switch (kind) {
        case FreestreamProfile::Kind::Still: return "still";
        case FreestreamProfile::Kind::RotatingWind: return "rotating_wind";
        case FreestreamProfile::Kind::ParabolicWind: return "parabolic_wind";
        case FreestreamProfile::Kind::Table: return "table";
    }
    return "unknown";
}

double FlowCoefficients::C1() const {
    return 0.25 * std::numbers::pi * C_M * rho_f * diameter * diameter;
}
double FlowCoefficients::C2() const { return 0.5 * C_N * rho_f * diameter; }
double FlowCoefficients::C3() const { return 0.5 * C_T * rho_f * diameter; }

void FlowCoefficients::validate() const {
    require(std::isfinite(C_M) && C_M >= 0.0, "flow: C_M must be non-negative");
    require(std::isfinite(C_N) && C_N >= 0.0, "flow: C_N must be non-negative");
    require(std::isfinite(C_T) && C_T >= 0.0, "flow: C_T must be non-negative");
    require(std::isfinite(rho_f) && rho_f >= 0.0, "flow: rho_f must be non-negative");
    require(std::isfinite(diameter) && diameter > 0.0, "flow: diameter must be positive");
}

std::string to_string(FrequencyConvention c) {
    return c == FrequencyConvention::Printed ? "printed" : "angular";
}

FrequencyConvention frequency_convention_from_string(const std::string& text) {
    if (text == "printed") return FrequencyConvention::Printed;
    if (text == "angular") return FrequencyConvention::Angular;
    throw std::invalid_argument("unknown frequency convention '" + text +
                                "' (expected printed or angular)");
}

std::string load_name(const LoadCase& load) {
    struct Visitor {
        std::string operator()(const PointLoad&) const { return "point"; }
        std::string operator()(const Gravity&) const { return "gravity"; }
        std::string operator()(const Follower2D&) const { return "follower"; }
        std::string operator()(const TipMoment&) const { return "tip_moment"; }
        std::string operator()(const Pulsating&) const { return "pulsating"; }
        std::string operator()(const FlowLoad&) const { return "flow"; }
    };
    return std::visit(Visitor{}, load);
}

void validate_load(const LoadCase& load, double length) {
    auto check_s = [length](double s) {
        require(std::isfinite(s) && s >= 0.0 && s <= length,
                "load: location s must lie in [0, L]");
    };
    std::visit(
        [&](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, PointLoad>) {
                check_s(l.s);
                require(finite(l.force), "point load: non-finite force");
                require(std::isfinite(l.t_c) && l.t_c >= 0.0, "point load: t_c must be >= 0");
            } else if constexpr (std::is_same_v<T, Gravity>) {
                require(finite(l.g), "gravity: non-finite vector");
            } else if constexpr (std::is_same_v<T, Follower2D>) {
                check_s(l.s);
                require(std::isfinite(l.f0), "follower: non-finite magnitude");
                require(std::abs(l.normal.norm() - 1.0) < 1e-12, "follower: normal must be unit");
            } else if constexpr (std::is_same_v<T, TipMoment>) {
                require(finite(l.moment), "tip moment: non-finite moment");
            } else if constexpr (std::is_same_v<T, Pulsating>) {
                check_s(l.s);
                require(std::isfinite(l.amplitude) && l.amplitude >= 0.0,
                        "pulsating: amplitude must be non-negative");
                require(std::isfinite(l.omega), "pulsating: non-finite frequency");
                require(finite(l.direction), "pulsating: non-finite direction");
            } else if constexpr (std::is_same_v<T, FlowLoad>) {
                l.coeffs.validate();
                l.profile.validate();
            }
        },
        load);
}

Vec3 vanishing_point_load(double t, double t_c, const Vec3& F_c) {
    if (t < 0.0 || t >= t_c) return Vec3::Zero();
    if (t <= 0.5 * t_c) return (t / (0.5 * t_c)) * F_c;
    return (2.0 / t_c) * (t_c - t) * F_c;
}

double pulsating_argument(double t, double omega, FrequencyConvention convention) {
    return convention == FrequencyConvention::Printed ? omega / (2.0 * std::numbers::pi) * t
                                                      : omega * t;
}

Vec3 pulsating_force(double t, double amplitude, double omega, FrequencyConvention convention,
                     const Vec3& direction) {
    return amplitude * std::sin(pulsating_argument(t, omega, convention)) * direction;
}

FollowerForce follower_force_2d(const PointKinematics& kin, double f0, const Vec3& normal) {
    FollowerForce out;
    out.force = f0 * normal.cross(kin.d);
    out.d_phi_p = (f0 / kin.jac) * skew(normal) * kin.P;
    return out;
}

TipMomentForce tip_moment_load(const PointKinematics& kin, const Vec3& moment) {
    const double inv_j = 1.0 / kin.jac;
    const Vec3 md = moment.cross(kin.d);
    TipMomentForce out;
    out.value = inv_j * md;
    out.d_phi_p = inv_j * inv_j * (skew(moment) * kin.P - md * kin.d.transpose());
    return out;
}

FlowDrag flow_drag_point(const PointKinematics& kin, const Vec3& phi, const Vec3& phi_dot,
                         const FreestreamProfile& profile, double t,
                         const FlowCoefficients& coeffs) {
    FlowDrag out;
    const double z = profile.height(phi);
    const Vec3 V = profile.velocity(z, t) - phi_dot;
    const Mat3 dV_dphi = profile.velocity_dz(z, t) * profile.axis_vector().transpose();
    const Vec3& d = kin.d;
    const double beta = V.dot(d);
    const Vec3 u = kin.P * V;
    const Vec3 w = beta * d;
    const double inv_j = 1.0 / kin.jac;

    const double C2 = coeffs.C2();
    const double C3 = coeffs.C3();
    const double nu = u.norm();
    const double nw = w.norm();
    out.normal = C2 * nu * u;
    out.tangential = C3 * nw * w;
    out.force = out.normal + out.tangential;

    // d(|x| x)/dx = |x| I + x x^T / |x|, with zero limit at x = 0.
    auto abs_jac = [](const Vec3& x, double nx) -> Mat3 {
        if (nx == 0.0) return Mat3::Zero();
        return nx * Mat3::Identity() + x * x.transpose() / nx;
    };
    const Mat3 Gu = C2 * abs_jac(u, nu);
    const Mat3 Gw = C3 * abs_jac(w, nw);
    const Mat3 dd = d * d.transpose();

    const Mat3 du_dphip = -inv_j * (beta * kin.P + d * u.transpose());
    const Mat3 dw_dphip = inv_j * (beta * kin.P + d * u.transpose());
    const Mat3 dF_dV = Gu * kin.P + Gw * dd;

    out.d_phi_p = Gu * du_dphip + Gw * dw_dphip;
    out.d_phi = dF_dV * dV_dphi;
    out.d_phi_dot = -dF_dV;
    return out;
}

ProjectedAcceleration projected_ambient_acceleration(const PointKinematics& kin, const Vec3& phi,
                                                     const FreestreamProfile& profile, double t) {
    ProjectedAcceleration out;
    if (profile.is_still()) return out;
    const double z = profile.height(phi);
    const Vec3 a = profile.acceleration(z, t);
    const double beta = a.dot(kin.d);
    out.value = kin.P * a;
    out.d_phi_p = -(1.0 / kin.jac) * (beta * kin.P + kin.d * out.value.transpose());
    out.d_phi = kin.P * profile.acceleration_dz(z, t) * profile.axis_vector().transpose();
    return out;
}

ProjectedVelocity projected_velocity(const PointKinematics& kin, const Vec3& phi_dot) {
    ProjectedVelocity out;
    const double beta = phi_dot.dot(kin.d);
    out.value = kin.P * phi_dot;
    out.d_phi_p = -(1.0 / kin.jac) * (beta * kin.P + kin.d * out.value.transpose());
    out.d_phi_dot = kin.P;
    return out;
}

FlowForce flow_force_point(const PointKinematics& kin, const Vec3& phi, const Vec3& phi_dot,
                           const Vec3& phi_ddot, const FreestreamProfile& profile, double t,
                           const FlowCoefficients& coeffs) {
    FlowForce out;
    const Vec3 a = profile.acceleration(profile.height(phi), t) - phi_ddot;
    out.added_mass = coeffs.C1() * (kin.P * a);
    out.drag = flow_drag_point(kin, phi, phi_dot, profile, t, coeffs);
    out.force = out.added_mass + out.drag.force;
    return out;
}

}  // namespace krod
