#include <krod/scenario.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace krod {

namespace {

// ---------------------------------------------------------------------------
// Value parsing and formatting
// ---------------------------------------------------------------------------

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ScenarioError("invalid number '" + text + "'", key);
    return value;
}

long long parse_integer(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    long long value = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc() || ptr != end)
        throw ScenarioError("invalid integer '" + text + "'", key);
    return value;
}

int parse_int(const std::string& text, const std::string& key) {
    const long long v = parse_integer(text, key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ScenarioError("integer out of range '" + text + "'", key);
    return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t == "true" || t == "on" || t == "yes") return true;
    if (t == "false" || t == "off" || t == "no") return false;
    throw ScenarioError("invalid boolean '" + text + "' (expected true/false)", key);
}

Vec3 parse_vec3(const std::string& text, const std::string& key) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw ScenarioError("expected three comma-separated numbers", key);
    return {parse_double(parts[0], key), parse_double(parts[1], key), parse_double(parts[2], key)};
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part, key));
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
    std::vector<int> out;
    if (trim(text).empty()) return out;
    for (const auto& part : split(text, ',')) out.push_back(parse_int(part, key));
    return out;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string format_vec3(const Vec3& v) {
    return format_double(v.x()) + ", " + format_double(v.y()) + ", " + format_double(v.z());
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& format) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += format(items[i]);
    }
    return out;
}

std::string format_int(int v) { return std::to_string(v); }

DetProbeBasis det_basis_from_string(const std::string& text, const std::string& key) {
    for (auto b : {DetProbeBasis::Hermite, DetProbeBasis::BSpline,
                   DetProbeBasis::BSplineOutlierRemoved})
        if (to_string(b) == text) return b;
    throw ScenarioError("unknown det probe basis '" + text + "'", key);
}

MaterialSpec::Mode material_mode_from_string(const std::string& text, const std::string& key) {
    if (text == "direct") return MaterialSpec::Mode::Direct;
    if (text == "circular") return MaterialSpec::Mode::Circular;
    throw ScenarioError("unknown material mode '" + text + "' (expected direct/circular)", key);
}

std::string to_string(MaterialSpec::Mode mode) {
    return mode == MaterialSpec::Mode::Direct ? "direct" : "circular";
}

LoadSpec::Kind load_kind_from_string(const std::string& text, const std::string& key) {
    for (auto k : {LoadSpec::Kind::Point, LoadSpec::Kind::Gravity, LoadSpec::Kind::Follower,
                   LoadSpec::Kind::TipMoment, LoadSpec::Kind::Pulsating, LoadSpec::Kind::Flow})
        if (to_string(k) == text) return k;
    throw ScenarioError("unknown load type '" + text + "'", key);
}

FreestreamProfile::Kind profile_kind_from_string(const std::string& text, const std::string& key) {
    for (auto k : {FreestreamProfile::Kind::Still, FreestreamProfile::Kind::RotatingWind,
                   FreestreamProfile::Kind::ParabolicWind, FreestreamProfile::Kind::Table})
        if (to_string(k) == text) return k;
    throw ScenarioError("unknown freestream profile '" + text + "'", key);
}

template <typename F>
auto wrap(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(e.what(), key);
    }
}

// ---------------------------------------------------------------------------
// Key registry
// ---------------------------------------------------------------------------

struct KeyHandler {
    std::string key;
    std::function<void(Scenario&, const std::string&, const std::string&)> set;
    std::function<std::string(const Scenario&)> get;
    /// Only serialized when this returns true.
    std::function<bool(const Scenario&)> relevant = [](const Scenario&) { return true; };
};

template <typename M>
KeyHandler double_key(std::string key, M member) {
    return {std::move(key),
            [member](Scenario& s, const std::string& v, const std::string& k) {
                std::invoke(member, s) = parse_double(v, k);
            },
            [member](const Scenario& s) { return format_double(std::invoke(member, s)); }};
}

template <typename M>
KeyHandler int_key(std::string key, M member) {
    return {std::move(key),
            [member](Scenario& s, const std::string& v, const std::string& k) {
                std::invoke(member, s) = parse_int(v, k);
            },
            [member](const Scenario& s) { return std::to_string(std::invoke(member, s)); }};
}

template <typename M>
KeyHandler bool_key(std::string key, M member) {
    return {std::move(key),
            [member](Scenario& s, const std::string& v, const std::string& k) {
                std::invoke(member, s) = parse_bool(v, k);
            },
            [member](const Scenario& s) { return format_bool(std::invoke(member, s)); }};
}

template <typename M>
KeyHandler vec_key(std::string key, M member) {
    return {std::move(key),
            [member](Scenario& s, const std::string& v, const std::string& k) {
                std::invoke(member, s) = parse_vec3(v, k);
            },
            [member](const Scenario& s) { return format_vec3(std::invoke(member, s)); }};
}

/// Pointer-to-member access into the nested pendulum parameters.
template <double PendulumParams::*Field>
double& pendulum_field(Scenario& s) {
    return s.pendulum.*Field;
}
template <double PendulumParams::*Field>
const double& pendulum_field_c(const Scenario& s) {
    return s.pendulum.*Field;
}

template <double PendulumParams::*Field>
KeyHandler pendulum_key(std::string key) {
    return {std::move(key),
            [](Scenario& s, const std::string& v, const std::string& k) {
                pendulum_field<Field>(s) = parse_double(v, k);
            },
            [](const Scenario& s) { return format_double(pendulum_field_c<Field>(s)); }};
}

template <double MaterialSpec::*Field>
KeyHandler material_key(std::string key, std::optional<MaterialSpec::Mode> mode) {
    KeyHandler h{std::move(key),
                 [](Scenario& s, const std::string& v, const std::string& k) {
                     s.material.*Field = parse_double(v, k);
                 },
                 [](const Scenario& s) { return format_double(s.material.*Field); }};
    if (mode) h.relevant = [m = *mode](const Scenario& s) { return s.material.mode == m; };
    return h;
}

/// Keys in serialization order. `preset`, `material.mode` and `load.N.type`
/// are applied before the others of the same source.
const std::vector<KeyHandler>& key_registry() {
    static const std::vector<KeyHandler> registry = [] {
        std::vector<KeyHandler> r;
        r.push_back({"derived_from",
                     [](Scenario& s, const std::string& v, const std::string&) { s.preset = v; },
                     [](const Scenario& s) { return s.preset; }});
        r.push_back({"name", [](Scenario& s, const std::string& v, const std::string& k) {
                         if (v.empty()) throw ScenarioError("name must not be empty", k);
                         s.name = v;
                     },
                     [](const Scenario& s) { return s.name; }});
        r.push_back({"job",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.job = wrap(k, [&] { return job_kind_from_string(v); });
                     },
                     [](const Scenario& s) { return to_string(s.job); }});
        r.push_back({"seed",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         const long long x = parse_integer(v, k);
                         if (x < 0) throw ScenarioError("seed must be non-negative", k);
                         s.seed = static_cast<std::uint64_t>(x);
                     },
                     [](const Scenario& s) { return std::to_string(s.seed); }});
        r.push_back(double_key("rod.length", &Scenario::length));
        r.push_back(vec_key("rod.origin", &Scenario::origin));
        r.push_back(vec_key("rod.director", &Scenario::director));
        r.push_back(int_key("space.degree", &Scenario::degree));
        r.push_back(int_key("space.continuity", &Scenario::continuity));
        r.push_back(int_key("space.elements", &Scenario::n_elements));
        r.push_back(int_key("space.quadrature", &Scenario::n_quad));
        r.push_back({"bc.start",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.bc_start = wrap(k, [&] { return boundary_kind_from_string(v); });
                     },
                     [](const Scenario& s) { return to_string(s.bc_start); }});
        r.push_back({"bc.end",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.bc_end = wrap(k, [&] { return boundary_kind_from_string(v); });
                     },
                     [](const Scenario& s) { return to_string(s.bc_end); }});
        r.push_back(bool_key("bc.outlier_removal", &Scenario::outlier_removal));
        r.push_back({"material.mode",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         // Switching the mode resets the values of the other mode.
                         MaterialSpec fresh;
                         fresh.mode = material_mode_from_string(v, k);
                         fresh.alpha = s.material.alpha;
                         if (fresh.mode != s.material.mode) s.material = fresh;
                     },
                     [](const Scenario& s) { return to_string(s.material.mode); }});
        r.push_back(material_key<&MaterialSpec::youngs_modulus>("material.youngs_modulus", MaterialSpec::Mode::Circular));
        r.push_back(material_key<&MaterialSpec::density>("material.density", MaterialSpec::Mode::Circular));
        r.push_back(material_key<&MaterialSpec::diameter>("material.diameter", MaterialSpec::Mode::Circular));
        r.push_back(material_key<&MaterialSpec::EA>("material.EA", MaterialSpec::Mode::Direct));
        r.push_back(material_key<&MaterialSpec::EI>("material.EI", MaterialSpec::Mode::Direct));
        r.push_back(material_key<&MaterialSpec::A_rho>("material.A_rho", MaterialSpec::Mode::Direct));
        r.push_back(material_key<&MaterialSpec::I_rho>("material.I_rho", MaterialSpec::Mode::Direct));
        r.push_back(material_key<&MaterialSpec::alpha>("material.alpha", std::nullopt));
        r.push_back(int_key("static.load_steps", &Scenario::load_steps));
        r.push_back(double_key("newton.tol", &Scenario::newton_tol));
        r.push_back(int_key("newton.max_iters", &Scenario::newton_max_iters));
        r.push_back(bool_key("newton.normalize_residual", &Scenario::newton_normalize));
        r.push_back(double_key("time.dt", &Scenario::dt));
        r.push_back(double_key("time.t_end", &Scenario::t_end));
        r.push_back(bool_key("time.long_run", &Scenario::long_run));
        r.push_back(double_key("time.long_run_t_end", &Scenario::long_run_t_end));
        r.push_back({"integrator.internal_force",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.internal_force =
                             wrap(k, [&] { return internal_force_evaluation_from_string(v); });
                     },
                     [](const Scenario& s) { return to_string(s.internal_force); }});
        r.push_back({"integrator.correction",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.correction = wrap(k, [&] { return correction_evaluation_from_string(v); });
                     },
                     [](const Scenario& s) { return to_string(s.correction); }});
        r.push_back(double_key("initial.perturbation", &Scenario::initial_perturbation));
        r.push_back({"output.probes",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.probes = parse_double_list(v, k);
                     },
                     [](const Scenario& s) { return join(s.probes, format_double); }});
        r.push_back(bool_key("output.dofs", &Scenario::write_dofs));
        r.push_back(int_key("output.every", &Scenario::output_every));
        r.push_back(bool_key("fft.enabled", &Scenario::fft));
        r.push_back(double_key("fft.threshold", &Scenario::fft_threshold));
        r.push_back(bool_key("fft.hann", &Scenario::fft_hann));
        r.push_back(double_key("fft.band_lo", &Scenario::band_lo));
        r.push_back(double_key("fft.band_hi", &Scenario::band_hi));
        r.push_back(double_key("steady.window", &Scenario::steady_window));
        r.push_back(double_key("steady.probe", &Scenario::steady_probe));
        r.push_back(int_key("steady.component", &Scenario::steady_component));
        r.push_back(pendulum_key<&PendulumParams::L0>("pendulum.L0"));
        r.push_back(pendulum_key<&PendulumParams::k>("pendulum.k"));
        r.push_back(pendulum_key<&PendulumParams::m>("pendulum.m"));
        r.push_back(pendulum_key<&PendulumParams::g>("pendulum.g"));
        r.push_back(pendulum_key<&PendulumParams::theta0>("pendulum.theta0"));
        r.push_back(pendulum_key<&PendulumParams::eta0>("pendulum.eta0"));
        r.push_back(pendulum_key<&PendulumParams::theta_dot0>("pendulum.theta_dot0"));
        r.push_back(pendulum_key<&PendulumParams::eta_dot0>("pendulum.eta_dot0"));
        r.push_back(bool_key("pendulum.wind", &Scenario::pendulum_wind));
        r.push_back(double_key("pendulum.drag", &Scenario::pendulum_drag));
        r.push_back(bool_key("pendulum.quotient", &Scenario::pendulum_quotient));
        r.push_back({"det_probe.time_steps",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.det_time_steps = parse_double_list(v, k);
                     },
                     [](const Scenario& s) { return join(s.det_time_steps, format_double); }});
        r.push_back({"det_probe.elements",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.det_elements = parse_int_list(v, k);
                     },
                     [](const Scenario& s) { return join(s.det_elements, format_int); }});
        r.push_back({"det_probe.bases",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.det_bases.clear();
                         if (trim(v).empty()) return;
                         for (const auto& part : split(v, ','))
                             s.det_bases.push_back(det_basis_from_string(part, k));
                     },
                     [](const Scenario& s) {
                         return join(s.det_bases, [](DetProbeBasis b) { return to_string(b); });
                     }});
        r.push_back({"sweep.alphas",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.sweep_alphas = parse_double_list(v, k);
                     },
                     [](const Scenario& s) { return join(s.sweep_alphas, format_double); }});
        r.push_back(double_key("sweep.reference_alpha", &Scenario::sweep_reference_alpha));
        r.push_back({"sweep.frequencies_hz",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.sweep_frequencies_hz = parse_double_list(v, k);
                     },
                     [](const Scenario& s) { return join(s.sweep_frequencies_hz, format_double); }});
        r.push_back(int_key("convergence.load_steps", &Scenario::convergence_load_steps));
        r.push_back({"convergence.elements",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.convergence_elements = parse_int_list(v, k);
                     },
                     [](const Scenario& s) { return join(s.convergence_elements, format_int); }});
        r.push_back({"convergence.spaces",
                     [](Scenario& s, const std::string& v, const std::string& k) {
                         s.convergence_spaces.clear();
                         if (trim(v).empty()) return;
                         for (const auto& part : split(v, ',')) {
                             const auto pr = split(part, ':');
                             if (pr.size() != 2)
                                 throw ScenarioError("expected degree:continuity pairs", k);
                             s.convergence_spaces.emplace_back(parse_int(pr[0], k),
                                                               parse_int(pr[1], k));
                         }
                     },
                     [](const Scenario& s) {
                         return join(s.convergence_spaces, [](const std::pair<int, int>& p) {
                             return std::to_string(p.first) + ":" + std::to_string(p.second);
                         });
                     }});
        return r;
    }();
    return registry;
}

const KeyHandler* find_handler(const std::string& key) {
    for (const auto& h : key_registry())
        if (h.key == key) return &h;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Load fields
// ---------------------------------------------------------------------------

using Kind = LoadSpec::Kind;

struct LoadField {
    std::string name;
    std::vector<Kind> kinds;
    std::function<void(LoadSpec&, const std::string&, const std::string&)> set;
    std::function<std::string(const LoadSpec&)> get;
    /// Only serialized when this returns true (e.g. profile-specific fields).
    std::function<bool(const LoadSpec&)> relevant = [](const LoadSpec&) { return true; };
};

template <typename M>
LoadField load_double(std::string name, std::vector<Kind> kinds, M member) {
    return {std::move(name), std::move(kinds),
            [member](LoadSpec& l, const std::string& v, const std::string& k) {
                l.*member = parse_double(v, k);
            },
            [member](const LoadSpec& l) { return format_double(l.*member); }};
}

template <typename M>
LoadField load_vec(std::string name, std::vector<Kind> kinds, M member) {
    return {std::move(name), std::move(kinds),
            [member](LoadSpec& l, const std::string& v, const std::string& k) {
                l.*member = parse_vec3(v, k);
            },
            [member](const LoadSpec& l) { return format_vec3(l.*member); }};
}

bool profile_is(const LoadSpec& l, std::initializer_list<FreestreamProfile::Kind> kinds) {
    return std::find(kinds.begin(), kinds.end(), l.profile) != kinds.end();
}

const std::vector<LoadField>& load_fields() {
    using PK = FreestreamProfile::Kind;
    static const std::vector<LoadField> fields = [] {
        std::vector<LoadField> f;
        f.push_back(load_double("s", {Kind::Point, Kind::Follower, Kind::Pulsating}, &LoadSpec::s));
        f.push_back(load_vec("force", {Kind::Point}, &LoadSpec::vector));
        f.push_back(load_double("t_c", {Kind::Point}, &LoadSpec::t_c));
        f.push_back(load_vec("g", {Kind::Gravity}, &LoadSpec::vector));
        f.push_back(load_double("f0", {Kind::Follower}, &LoadSpec::f0));
        f.push_back(load_vec("normal", {Kind::Follower}, &LoadSpec::normal));
        f.push_back(load_vec("moment", {Kind::TipMoment}, &LoadSpec::vector));
        f.push_back(load_double("amplitude", {Kind::Pulsating}, &LoadSpec::amplitude));
        f.push_back(load_double("frequency_hz", {Kind::Pulsating}, &LoadSpec::frequency_hz));
        f.push_back(load_vec("direction", {Kind::Pulsating}, &LoadSpec::vector));
        f.push_back({"convention",
                     {Kind::Pulsating},
                     [](LoadSpec& l, const std::string& v, const std::string& k) {
                         l.convention = wrap(k, [&] { return frequency_convention_from_string(v); });
                     },
                     [](const LoadSpec& l) { return to_string(l.convention); }});
        f.push_back(load_double("C_M", {Kind::Flow}, &LoadSpec::C_M));
        f.push_back(load_double("C_N", {Kind::Flow}, &LoadSpec::C_N));
        f.push_back(load_double("C_T", {Kind::Flow}, &LoadSpec::C_T));
        f.push_back(load_double("rho_f", {Kind::Flow}, &LoadSpec::rho_f));
        f.push_back(load_double("diameter", {Kind::Flow}, &LoadSpec::diameter));
        f.push_back({"profile",
                     {Kind::Flow},
                     [](LoadSpec& l, const std::string& v, const std::string& k) {
                         l.profile = profile_kind_from_string(v, k);
                     },
                     [](const LoadSpec& l) { return to_string(l.profile); }});
        auto v0 = load_double("v0", {Kind::Flow}, &LoadSpec::v0);
        v0.relevant = [](const LoadSpec& l) {
            return profile_is(l, {PK::RotatingWind, PK::ParabolicWind});
        };
        f.push_back(v0);
        auto beta = load_double("beta0_deg", {Kind::Flow}, &LoadSpec::beta0_deg);
        beta.relevant = [](const LoadSpec& l) { return profile_is(l, {PK::RotatingWind}); };
        f.push_back(beta);
        auto len = load_double("profile_length", {Kind::Flow}, &LoadSpec::profile_length);
        len.relevant = [](const LoadSpec& l) {
            return profile_is(l, {PK::RotatingWind, PK::ParabolicWind});
        };
        f.push_back(len);
        LoadField axis{"axis",
                       {Kind::Flow},
                       [](LoadSpec& l, const std::string& v, const std::string& k) {
                           l.axis = parse_int(v, k);
                       },
                       [](const LoadSpec& l) { return std::to_string(l.axis); }};
        axis.relevant = [](const LoadSpec& l) { return !profile_is(l, {PK::Still}); };
        f.push_back(axis);
        auto dir = load_vec("flow_direction", {Kind::Flow}, &LoadSpec::flow_direction);
        dir.relevant = [](const LoadSpec& l) {
            return profile_is(l, {PK::ParabolicWind, PK::Table});
        };
        f.push_back(dir);
        auto ma = load_double("modulation_amplitude", {Kind::Flow}, &LoadSpec::modulation_amplitude);
        ma.relevant = [](const LoadSpec& l) { return profile_is(l, {PK::ParabolicWind}); };
        f.push_back(ma);
        auto mo = load_double("modulation_omega", {Kind::Flow}, &LoadSpec::modulation_omega);
        mo.relevant = [](const LoadSpec& l) { return profile_is(l, {PK::ParabolicWind}); };
        f.push_back(mo);
        LoadField table{"table_file",
                        {Kind::Flow},
                        [](LoadSpec& l, const std::string& v, const std::string&) {
                            l.table_file = v;
                        },
                        [](const LoadSpec& l) { return l.table_file; }};
        table.relevant = [](const LoadSpec& l) { return profile_is(l, {PK::Table}); };
        f.push_back(table);
        return f;
    }();
    return fields;
}

// ---------------------------------------------------------------------------
// Text handling
// ---------------------------------------------------------------------------

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

std::vector<Entry> tokenize(const std::string& text) {
    std::vector<Entry> entries;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("line " + std::to_string(line_no) + ": expected 'key = value'", {},
                                line_no);
        Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (e.key.empty())
            throw ScenarioError("line " + std::to_string(line_no) + ": missing key", {}, line_no);
        if (e.key.find_first_of(" \t") != std::string::npos)
            throw ScenarioError("line " + std::to_string(line_no) + ": key contains whitespace",
                                e.key, line_no);
        if (auto it = seen.find(e.key); it != seen.end())
            throw ScenarioError("line " + std::to_string(line_no) + ": duplicate key '" + e.key +
                                    "' (first set on line " + std::to_string(it->second) + ")",
                                e.key, line_no);
        seen[e.key] = line_no;
        entries.push_back(std::move(e));
    }
    return entries;
}

/// "load.<index>.<field>" split; returns false if the key is not a load key.
bool split_load_key(const std::string& key, int& index, std::string& field) {
    if (key.rfind("load.", 0) != 0) return false;
    const auto dot = key.find('.', 5);
    if (dot == std::string::npos) throw ScenarioError("expected load.<index>.<field>", key);
    index = parse_int(key.substr(5, dot - 5), key);
    if (index < 1) throw ScenarioError("load indices start at 1", key);
    field = key.substr(dot + 1);
    return true;
}

void apply_entries(Scenario& s, const std::vector<Entry>& entries) {
    auto fail = [](const std::string& msg, const Entry& e) {
        const std::string where = e.line > 0 ? "line " + std::to_string(e.line) + ": " : "";
        return ScenarioError(where + msg, e.key, e.line);
    };

    // Loads are edited through an index map so entries may address them in any order.
    std::map<int, std::optional<LoadSpec>> loads;
    for (std::size_t i = 0; i < s.loads.size(); ++i) loads[static_cast<int>(i) + 1] = s.loads[i];

    auto run = [&](const Entry& e, auto&& fn) {
        try {
            fn();
        } catch (const ScenarioError& err) {
            throw fail(err.what(), e);
        }
    };

    // Pass 0: mode and type keys; pass 1: everything else.
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : entries) {
            if (e.key == "preset") continue;
            int index = 0;
            std::string field;
            bool is_load = false;
            run(e, [&] { is_load = split_load_key(e.key, index, field); });
            const bool first_pass_key = (is_load && field == "type") || e.key == "material.mode";
            if ((pass == 0) != first_pass_key) continue;

            if (is_load) {
                run(e, [&] {
                    if (field == "type") {
                        if (e.value == "none") {
                            loads[index] = std::nullopt;
                            return;
                        }
                        const Kind kind = load_kind_from_string(e.value, e.key);
                        auto& slot = loads[index];
                        if (!slot || slot->kind != kind) {
                            LoadSpec fresh;
                            fresh.kind = kind;
                            slot = fresh;
                        }
                        return;
                    }
                    auto it = loads.find(index);
                    if (it == loads.end() || !it->second)
                        throw ScenarioError("load " + std::to_string(index) +
                                                " has no type (set load." +
                                                std::to_string(index) + ".type first)",
                                            e.key);
                    LoadSpec& l = *it->second;
                    const auto& fields = load_fields();
                    const auto fi = std::find_if(fields.begin(), fields.end(),
                                                 [&](const LoadField& f) { return f.name == field; });
                    if (fi == fields.end() ||
                        std::find(fi->kinds.begin(), fi->kinds.end(), l.kind) == fi->kinds.end())
                        throw ScenarioError("unknown key '" + e.key + "' for load type " +
                                                to_string(l.kind),
                                            e.key);
                    fi->set(l, e.value, e.key);
                });
                continue;
            }
            const KeyHandler* h = find_handler(e.key);
            if (!h) throw fail("unknown key '" + e.key + "'", e);
            run(e, [&] { h->set(s, e.value, e.key); });
        }
    }
    s.loads.clear();
    for (auto& [index, spec] : loads)
        if (spec) s.loads.push_back(*spec);
}

Scenario base_scenario() {
    Scenario s;
    s.det_bases = {DetProbeBasis::Hermite, DetProbeBasis::BSpline,
                   DetProbeBasis::BSplineOutlierRemoved};
    return s;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

struct Preset {
    std::string name;
    std::string description;
    std::string text;
};

const std::vector<Preset>& presets() {
    static const std::vector<Preset> list = {
        {"roll_up", "static cantilever rolled into a circle by a tip moment 2 pi EI / L",
         R"(job = static
rod.length = 40
rod.director = 1, 0, 0
space.degree = 2
space.continuity = 1
space.elements = 40
bc.start = clamped
bc.end = free
bc.outlier_removal = false
material.mode = direct
material.EA = 100
material.EI = 200
material.A_rho = 1
material.I_rho = 0
# 2 pi EI / L = 10 pi N m about E3
load.1.type = tip_moment
load.1.moment = 0, 0, 31.415926535897931
static.load_steps = 6
output.probes = 0, 40
# used when job = convergence_sweep; more load steps keep plain Newton
# convergent on the finest meshes (the converged state does not depend on them)
convergence.load_steps = 48
convergence.elements = 8, 16, 32, 64
convergence.spaces = 2:1, 3:2, 3:1, 4:3
)"},
        {"clamped_2d", "clamped steel rod under a vanishing tip load, cubic C1 with outliers removed",
         R"(job = dynamic
rod.length = 10
rod.director = 1, 0, 0
space.degree = 3
space.continuity = 1
space.elements = 20
bc.start = clamped
bc.end = free
bc.outlier_removal = true
material.mode = circular
material.youngs_modulus = 2e11
material.density = 7900
material.diameter = 0.01
load.1.type = point
load.1.s = 10
load.1.force = 0, 30, 0
load.1.t_c = 0.5
time.dt = 0.005
time.t_end = 20
output.probes = 10
# kinetic-energy spectrum; enable with fft.enabled = true (half load, t_end = 100)
fft.threshold = 40
fft.band_lo = 50
)"},
        {"unconstrained_3d", "free-free steel rod under four vanishing out-of-plane loads",
         R"(job = dynamic
rod.length = 10
rod.director = 1, 0, 0
space.degree = 3
space.continuity = 1
space.elements = 20
bc.start = free
bc.end = free
bc.outlier_removal = false
material.mode = circular
material.youngs_modulus = 2e11
material.density = 7900
material.diameter = 0.005
load.1.type = point
load.1.s = 0
load.1.force = -30, -30, 0
load.1.t_c = 0.5
load.2.type = point
load.2.s = 10
load.2.force = 30, 30, 0
load.2.t_c = 0.5
load.3.type = point
load.3.s = 0.5
load.3.force = 0, 0, -24
load.3.t_c = 0.5
load.4.type = point
load.4.s = 9.5
load.4.force = 0, 0, 24
load.4.t_c = 0.5
time.dt = 0.001
time.t_end = 2
output.probes = 0, 5, 10
)"},
        {"mass_alpha_sweep",
         "unconstrained rod with the configuration-dependent mass part scaled by alpha",
         R"(preset_base = unconstrained_3d
output.every = 10
sweep.alphas = 0, 0.25, 0.5, 0.75, 1
sweep.reference_alpha = 1
)"},
        {"swinging_gravity", "rubber rod hinged at the origin swinging under gravity",
         R"(job = dynamic
rod.length = 1
rod.director = 1, 0, 0
space.degree = 3
space.continuity = 1
space.elements = 20
bc.start = pinned
bc.end = free
bc.outlier_removal = true
material.mode = circular
material.youngs_modulus = 5e6
material.density = 1100
material.diameter = 0.01
load.1.type = gravity
load.1.g = 0, -9.81, 0
time.dt = 0.01
time.t_end = 2.4
output.probes = 1
)"},
        {"swinging_wind", "swinging rubber rod with gravity and a rotating wind profile",
         R"(preset_base = swinging_gravity
# initial director (cos 15 deg, 0, -sin 15 deg)
rod.director = 0.96592582628906831, 0, -0.25881904510252074
# air; drag coefficients of a smooth cylinder (chosen, see README)
load.2.type = flow
load.2.C_M = 1
load.2.C_N = 1.2
load.2.C_T = 0.1
load.2.rho_f = 1.225
load.2.diameter = 0.01
load.2.profile = rotating_wind
load.2.v0 = 10
load.2.beta0_deg = 45
load.2.profile_length = 1
load.2.axis = 2
time.t_end = 30
)"},
        {"pulsating_sweep",
         "aluminium rod in still water driven by a horizontal pulsating tip force",
         R"(job = frequency_sweep
rod.length = 250
rod.director = 0, -1, 0
space.degree = 3
space.continuity = 1
space.elements = 20
bc.start = pinned
bc.end = free
bc.outlier_removal = true
material.mode = circular
material.youngs_modulus = 7e10
material.density = 2700
material.diameter = 0.04
load.1.type = gravity
load.1.g = 0, -9.81, 0
load.2.type = flow
load.2.C_M = 1
load.2.C_N = 1.2
load.2.C_T = 0.1
load.2.rho_f = 1000
load.2.diameter = 0.04
load.2.profile = still
load.3.type = pulsating
load.3.s = 250
load.3.amplitude = 350000
load.3.frequency_hz = 0.88
load.3.direction = 1, 0, 0
load.3.convention = printed
time.dt = 0.01
# desk-scale horizon; time.long_run = true uses time.long_run_t_end instead
time.t_end = 400
time.long_run_t_end = 2000
steady.window = 50
steady.probe = 250
steady.component = 0
sweep.frequencies_hz = 0.1, 0.5, 0.88, 2, 4.9, 8
)"},
        {"pendulum_free", "force-free elastic pendulum",
         R"(job = pendulum
pendulum.L0 = 1
pendulum.k = 5328.5
pendulum.m = 1
pendulum.g = 0
pendulum.theta0 = 0
pendulum.eta0 = 0.1
pendulum.theta_dot0 = -0.5
pendulum.eta_dot0 = 0.25
pendulum.wind = false
pendulum.quotient = true
time.dt = 0.005
time.t_end = 30
)"},
        {"pendulum_wind", "elastic pendulum released horizontally under gravity and parabolic wind",
         R"(job = pendulum
pendulum.L0 = 1
pendulum.k = 5328.5
pendulum.m = 1
pendulum.g = 9.81
pendulum.theta0 = 1.5707963267948966
pendulum.eta0 = 0
pendulum.theta_dot0 = 0
pendulum.eta_dot0 = 0
pendulum.wind = true
pendulum.drag = 2
pendulum.quotient = true
time.dt = 0.005
time.t_end = 30
)"},
        {"det_probe", "propagator determinant of the free-free linear beam on the step/mesh grid",
         R"(job = det_probe
rod.length = 10
material.mode = circular
material.youngs_modulus = 2e11
material.density = 7900
material.diameter = 0.01
det_probe.time_steps = 0.0025, 0.005, 0.01
det_probe.elements = 2, 4, 8, 16, 32
det_probe.bases = hermite, bspline_c1, bspline_c1_outliers_removed
)"},
    };
    return list;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

/// Resolve a preset (following `preset_base`) into a scenario.
Scenario scenario_from_preset(const std::string& name, int depth = 0) {
    const Preset* p = find_preset(name);
    if (!p) throw ScenarioError("unknown preset '" + name + "'", "preset");
    if (depth > 4) throw ScenarioError("preset chain too deep", "preset");
    auto entries = tokenize(p->text);
    Scenario s = base_scenario();
    const auto base = std::find_if(entries.begin(), entries.end(),
                                   [](const Entry& e) { return e.key == "preset_base"; });
    if (base != entries.end()) {
        s = scenario_from_preset(base->value, depth + 1);
        entries.erase(base);
    }
    apply_entries(s, entries);
    s.preset = name;
    s.name = name;
    return s;
}

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ScenarioError(key + ": " + message, key);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string to_string(JobKind job) {
    switch (job) {
        case JobKind::Static: return "static";
        case JobKind::Dynamic: return "dynamic";
        case JobKind::Pendulum: return "pendulum";
        case JobKind::DetProbe: return "det_probe";
        case JobKind::ConvergenceSweep: return "convergence_sweep";
        case JobKind::FrequencySweep: return "frequency_sweep";
    }
    return "unknown";
}

JobKind job_kind_from_string(const std::string& text) {
    for (auto j : {JobKind::Static, JobKind::Dynamic, JobKind::Pendulum, JobKind::DetProbe,
                   JobKind::ConvergenceSweep, JobKind::FrequencySweep})
        if (to_string(j) == text) return j;
    throw std::invalid_argument("unknown job kind '" + text + "'");
}

std::string to_string(LoadSpec::Kind kind) {
    switch (kind) {
        case Kind::Point: return "point";
        case Kind::Gravity: return "gravity";
        case Kind::Follower: return "follower";
        case Kind::TipMoment: return "tip_moment";
        case Kind::Pulsating: return "pulsating";
        case Kind::Flow: return "flow";
    }
    return "unknown";
}

MaterialParams MaterialSpec::params() const {
    if (mode == Mode::Circular) return MaterialParams::circular(youngs_modulus, density, diameter, alpha);
    MaterialParams m;
    m.EA = EA;
    m.EI = EI;
    m.A_rho = A_rho;
    m.I_rho = I_rho;
    m.alpha = alpha;
    return m;
}

LoadCase make_load(const LoadSpec& l) {
    switch (l.kind) {
        case Kind::Point: return PointLoad{l.s, l.vector, l.t_c};
        case Kind::Gravity: return Gravity{l.vector};
        case Kind::Follower: return Follower2D{l.s, l.f0, l.normal};
        case Kind::TipMoment: return TipMoment{l.vector};
        case Kind::Pulsating:
            return Pulsating{l.s, l.amplitude, 2.0 * std::numbers::pi * l.frequency_hz, l.vector,
                             l.convention};
        case Kind::Flow: {
            FlowLoad f;
            f.coeffs = {l.C_M, l.C_N, l.C_T, l.rho_f, l.diameter};
            switch (l.profile) {
                case FreestreamProfile::Kind::Still: f.profile = FreestreamProfile::still(); break;
                case FreestreamProfile::Kind::RotatingWind:
                    f.profile = FreestreamProfile::rotating(l.v0, l.beta0_deg * std::numbers::pi / 180.0,
                                                            l.profile_length);
                    f.profile.axis = l.axis;
                    break;
                case FreestreamProfile::Kind::ParabolicWind:
                    f.profile = FreestreamProfile::parabolic(l.v0, l.profile_length, l.flow_direction,
                                                             l.axis, l.modulation_amplitude,
                                                             l.modulation_omega);
                    break;
                case FreestreamProfile::Kind::Table: {
                    std::ifstream in(l.table_file);
                    if (!in) throw std::invalid_argument("cannot read table file '" + l.table_file + "'");
                    std::stringstream buf;
                    buf << in.rdbuf();
                    f.profile = FreestreamProfile::table_from_text(buf.str(), l.flow_direction, l.axis);
                    break;
                }
            }
            return f;
        }
    }
    throw std::invalid_argument("unknown load kind");
}

std::vector<LoadCase> Scenario::load_cases() const {
    std::vector<LoadCase> out;
    out.reserve(loads.size());
    for (const auto& l : loads) out.push_back(make_load(l));
    return out;
}

NewtonOptions Scenario::newton() const {
    NewtonOptions n;
    n.tol = newton_tol;
    n.max_iters = newton_max_iters;
    n.normalize_residual = newton_normalize;
    return n;
}

DynamicOptions Scenario::dynamic_options() const {
    DynamicOptions o;
    o.dt = dt;
    o.t_end = effective_t_end();
    o.newton = newton();
    o.terms.internal_eval = internal_force;
    o.terms.correction_eval = correction;
    return o;
}

PendulumParams Scenario::pendulum_params() const {
    PendulumParams p = pendulum;
    p.dt = dt;
    p.t_end = effective_t_end();
    p.newton = newton();
    return p;
}

std::optional<PendulumWind> Scenario::pendulum_wind_model() const {
    if (!pendulum_wind) return std::nullopt;
    const PendulumParams p = pendulum_params();
    return PendulumWind{pendulum_parabolic_wind(p), pendulum_drag};
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& p : presets()) n.push_back(p.name);
        return n;
    }();
    return names;
}

std::string preset_description(const std::string& name) {
    const Preset* p = find_preset(name);
    if (!p) throw ScenarioError("unknown preset '" + name + "'", "preset");
    return p->description;
}

const std::string& preset_text(const std::string& name) {
    const Preset* p = find_preset(name);
    if (!p) throw ScenarioError("unknown preset '" + name + "'", "preset");
    return p->text;
}

Scenario parse_scenario(const std::string& text, const std::vector<std::string>& overrides) {
    const auto entries = tokenize(text);
    Scenario s = base_scenario();
    for (const auto& e : entries) {
        if (e.key == "preset_base")
            throw ScenarioError("line " + std::to_string(e.line) + ": unknown key 'preset_base'",
                                e.key, e.line);
        if (e.key == "preset") {
            try {
                s = scenario_from_preset(e.value);
            } catch (const ScenarioError& err) {
                throw ScenarioError("line " + std::to_string(e.line) + ": " + err.what(), "preset",
                                    e.line);
            }
        }
    }
    apply_entries(s, entries);

    std::vector<Entry> extra;
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ScenarioError("override '" + o + "' is not key=value");
        Entry e{trim(o.substr(0, eq)), trim(o.substr(eq + 1)), 0};
        if (e.key == "preset" || e.key == "preset_base")
            throw ScenarioError("the preset cannot be overridden", e.key);
        for (const auto& prev : extra)
            if (prev.key == e.key) throw ScenarioError("override '" + e.key + "' given twice", e.key);
        extra.push_back(std::move(e));
    }
    apply_entries(s, extra);
    validate_scenario(s);
    return s;
}

void validate_scenario(const Scenario& s) {
    require(std::isfinite(s.length) && s.length > 0.0, "rod.length", "must be positive");
    require(s.origin.allFinite(), "rod.origin", "must be finite");
    require(s.director.allFinite() && s.director.norm() > 0.0, "rod.director", "must be non-zero");
    require(std::abs(s.director.norm() - 1.0) < 1e-12, "rod.director", "must be a unit vector");
    require(s.degree >= 2, "space.degree", "must be >= 2");
    require(s.continuity >= 1 && s.continuity <= s.degree - 1, "space.continuity",
            "must satisfy 1 <= r <= p - 1 (got r = " + std::to_string(s.continuity) +
                ", p = " + std::to_string(s.degree) + ")");
    require(s.n_elements >= 1, "space.elements", "must be >= 1");
    require(s.n_quad >= 0, "space.quadrature", "must be >= 0 (0 selects p + 1)");

    const auto& m = s.material;
    if (m.mode == MaterialSpec::Mode::Circular) {
        require(m.youngs_modulus > 0.0, "material.youngs_modulus", "must be positive");
        require(m.density > 0.0, "material.density", "must be positive");
        require(m.diameter > 0.0, "material.diameter", "must be positive");
    }
    require(m.alpha >= 0.0 && m.alpha <= 1.0, "material.alpha", "must lie in [0, 1]");
    if (m.mode == MaterialSpec::Mode::Direct) {
        require(std::isfinite(m.EA) && m.EA > 0.0, "material.EA", "must be positive");
        require(std::isfinite(m.EI) && m.EI > 0.0, "material.EI", "must be positive");
        require(std::isfinite(m.A_rho) && m.A_rho > 0.0, "material.A_rho", "must be positive");
        require(std::isfinite(m.I_rho) && m.I_rho >= 0.0, "material.I_rho", "must be non-negative");
    }
    wrap("material", [&] { m.params().validate(); });

    for (std::size_t i = 0; i < s.loads.size(); ++i) {
        const std::string key = "load." + std::to_string(i + 1);
        wrap(key, [&] { validate_load(make_load(s.loads[i]), s.length); });
        if (s.loads[i].kind == Kind::Flow && s.loads[i].profile == FreestreamProfile::Kind::Table)
            require(!s.loads[i].table_file.empty(), key + ".table_file", "required for table profiles");
    }

    require(s.load_steps >= 1, "static.load_steps", "must be >= 1");
    require(s.newton_tol > 0.0, "newton.tol", "must be positive");
    require(s.newton_max_iters >= 1, "newton.max_iters", "must be >= 1");
    require(s.dt > 0.0, "time.dt", "must be positive");
    require(s.t_end >= s.dt, "time.t_end", "must be >= time.dt");
    require(s.long_run_t_end >= s.dt, "time.long_run_t_end", "must be >= time.dt");
    require(s.initial_perturbation >= 0.0, "initial.perturbation", "must be >= 0");
    for (double p : s.probes)
        require(p >= 0.0 && p <= s.length, "output.probes", "positions must lie in [0, L]");
    require(s.output_every >= 1, "output.every", "must be >= 1");
    require(s.fft_threshold >= 0.0, "fft.threshold", "must be >= 0");
    require(s.band_lo >= 0.0, "fft.band_lo", "must be >= 0");
    require(s.band_hi == 0.0 || s.band_hi > s.band_lo, "fft.band_hi", "must exceed fft.band_lo");
    require(s.steady_window > 0.0, "steady.window", "must be positive");
    require(s.steady_probe >= 0.0 && s.steady_probe <= s.length, "steady.probe",
            "must lie in [0, L]");
    require(s.steady_component >= 0 && s.steady_component <= 2, "steady.component",
            "must be 0, 1 or 2");
    require(s.pendulum_drag >= 0.0, "pendulum.drag", "must be >= 0");
    for (double a : s.sweep_alphas)
        require(a >= 0.0 && a <= 1.0, "sweep.alphas", "values must lie in [0, 1]");
    require(s.sweep_reference_alpha >= 0.0 && s.sweep_reference_alpha <= 1.0,
            "sweep.reference_alpha", "must lie in [0, 1]");

    const bool has_flow = std::any_of(s.loads.begin(), s.loads.end(),
                                      [](const LoadSpec& l) { return l.kind == Kind::Flow; });
    switch (s.job) {
        case JobKind::Static:
            require(!has_flow, "job", "flow loads are not admissible in static jobs");
            break;
        case JobKind::Dynamic:
            require(s.sweep_alphas.empty() ||
                        std::find(s.sweep_alphas.begin(), s.sweep_alphas.end(),
                                  s.sweep_reference_alpha) != s.sweep_alphas.end(),
                    "sweep.reference_alpha", "must be one of sweep.alphas");
            break;
        case JobKind::Pendulum:
            wrap("pendulum", [&] { s.pendulum_params().validate(); });
            break;
        case JobKind::DetProbe:
            require(!s.det_time_steps.empty(), "det_probe.time_steps", "must not be empty");
            require(!s.det_elements.empty(), "det_probe.elements", "must not be empty");
            require(!s.det_bases.empty(), "det_probe.bases", "must not be empty");
            for (double dt : s.det_time_steps)
                require(dt > 0.0, "det_probe.time_steps", "values must be positive");
            for (int n : s.det_elements) require(n >= 1, "det_probe.elements", "values must be >= 1");
            break;
        case JobKind::ConvergenceSweep: {
            require(s.convergence_load_steps >= 1, "convergence.load_steps", "must be >= 1");
            require(!s.convergence_elements.empty(), "convergence.elements", "must not be empty");
            for (int n : s.convergence_elements)
                require(n >= 1, "convergence.elements", "values must be >= 1");
            for (const auto& [p, r] : s.convergence_spaces)
                require(p >= 2 && r >= 1 && r <= p - 1, "convergence.spaces",
                        "each pair must satisfy p >= 2 and 1 <= r <= p - 1");
            require(s.loads.size() == 1 && s.loads[0].kind == Kind::TipMoment, "load.1",
                    "the convergence sweep compares with the roll-up circle and needs exactly one "
                    "tip moment");
            const Vec3& mo = s.loads[0].vector;
            require(mo.x() == 0.0 && mo.y() == 0.0 && mo.z() > 0.0, "load.1.moment",
                    "must point along +E3");
            require(s.director == Vec3::UnitX() && s.origin == Vec3::Zero(), "rod.director",
                    "the roll-up reference assumes a rod along E1 from the origin");
            require(s.bc_start == BoundaryKind::Clamped && s.bc_end == BoundaryKind::Free,
                    "bc.start", "the roll-up reference assumes a clamped-free cantilever");
            break;
        }
        case JobKind::FrequencySweep:
            require(!s.sweep_frequencies_hz.empty(), "sweep.frequencies_hz", "must not be empty");
            for (double f : s.sweep_frequencies_hz)
                require(f > 0.0, "sweep.frequencies_hz", "values must be positive");
            require(std::any_of(s.loads.begin(), s.loads.end(),
                                [](const LoadSpec& l) { return l.kind == Kind::Pulsating; }),
                    "job", "frequency_sweep needs a pulsating load");
            require(s.steady_window <= s.effective_t_end(), "steady.window",
                    "must not exceed the simulated horizon");
            break;
    }
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    for (const auto& h : key_registry())
        if (h.relevant(s)) out << h.key << " = " << h.get(s) << "\n";
    for (std::size_t i = 0; i < s.loads.size(); ++i) {
        const LoadSpec& l = s.loads[i];
        const std::string prefix = "load." + std::to_string(i + 1) + ".";
        out << prefix << "type = " << to_string(l.kind) << "\n";
        for (const auto& f : load_fields()) {
            if (std::find(f.kinds.begin(), f.kinds.end(), l.kind) == f.kinds.end()) continue;
            if (!f.relevant(l)) continue;
            out << prefix << f.name << " = " << f.get(l) << "\n";
        }
    }
    return out.str();
}

}  // namespace krod
