#include "saddlesim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

namespace saddlesim {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string &key, int line, const std::string &v) {
    double out = 0;
    const auto *end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, line, "not a number: '" + v + "'");
    return out;
}

int to_int(const std::string &key, int line, const std::string &v) {
    int out = 0;
    const auto *end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, line, "not an integer: '" + v + "'");
    return out;
}

bool to_bool(const std::string &key, int line, const std::string &v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigError(key, line, "not a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string &key, int line, const std::string &v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, line, trim(item)));
    return out;
}

Profile to_profile(const std::string &key, int line, const std::string &v) {
    if (v == "mesh_a") return Profile::MeshA;
    if (v == "mesh_b") return Profile::MeshB;
    throw ConfigError(key, line, "expected mesh_a or mesh_b, got '" + v + "'");
}

SimConfig profile_defaults(Profile p) {
    SimConfig c;
    c.profile = p;
    if (p == Profile::MeshB) {
        c.tau = 1.66e-2;
        c.nr = 32;
        c.nz = 80;
    }
    return c;
}

// Line numbers of the keys that were set explicitly, for error messages.
using LineMap = std::map<std::string, int>;

void set_key(SimConfig &c, const std::string &key, const std::string &v, int line) {
    if (key == "profile") {
        c.profile = to_profile(key, line, v);
    } else if (key == "re") {
        c.re = to_double(key, line, v);
    } else if (key == "tau") {
        c.tau = to_double(key, line, v);
    } else if (key == "a") {
        c.a = to_double(key, line, v);
    } else if (key == "variant") {
        if (v == "offset")
            c.variant = DomainKind::Offset;
        else if (v == "centered")
            c.variant = DomainKind::Centered;
        else
            throw ConfigError(key, line, "expected offset or centered, got '" + v + "'");
    } else if (key == "swirl") {
        c.swirl = to_bool(key, line, v);
    } else if (key.size() == 4 && key.compare(0, 3, "eps") == 0 && key[3] >= '1' && key[3] <= '6') {
        c.eps[static_cast<std::size_t>(key[3] - '1')] = to_double(key, line, v);
    } else if (key.size() == 5 && key.compare(0, 4, "beta") == 0 && key[4] >= '1' && key[4] <= '6') {
        c.beta[static_cast<std::size_t>(key[4] - '1')] = to_double(key, line, v);
    } else if (key == "delta0") {
        c.delta0 = to_double(key, line, v);
    } else if (key == "lin_tol") {
        c.lin_tol = to_double(key, line, v);
    } else if (key == "lin_maxit") {
        c.lin_maxit = to_int(key, line, v);
    } else if (key == "h_rule") {
        if (v == "local")
            c.h_rule = HRule::LocalCell;
        else if (v == "representative")
            c.h_rule = HRule::Representative;
        else
            throw ConfigError(key, line, "expected local or representative, got '" + v + "'");
    } else if (key == "swirl_coupling") {
        if (v == "implicit")
            c.coupling = SwirlCoupling::Implicit;
        else if (v == "explicit")
            c.coupling = SwirlCoupling::Explicit;
        else
            throw ConfigError(key, line, "expected implicit or explicit, got '" + v + "'");
    } else if (key == "nr") {
        c.nr = to_int(key, line, v);
    } else if (key == "nz") {
        c.nz = to_int(key, line, v);
    } else if (key == "grading") {
        c.grading = to_double(key, line, v);
    } else if (key == "t_end") {
        c.t_end = to_double(key, line, v);
    } else if (key == "record_every") {
        c.record_every = to_int(key, line, v);
    } else if (key == "r_core") {
        c.r_core = to_double(key, line, v);
    } else if (key == "jump_threshold") {
        c.jump_threshold = to_double(key, line, v);
    } else if (key == "xi_floor") {
        c.xi_floor = to_double(key, line, v);
    } else if (key == "out_dir") {
        c.out_dir = v;
    } else if (key == "snapshot_times") {
        c.snapshot_times = to_list(key, line, v);
    } else {
        throw ConfigError(key, line, "unknown key");
    }
}

void check(bool ok, const std::string &key, const LineMap &lines, const std::string &why) {
    if (ok) return;
    const auto it = lines.find(key);
    throw ConfigError(key, it == lines.end() ? 0 : it->second, why);
}

void validate(const SimConfig &c, const LineMap &lines) {
    check(c.re > 0, "re", lines, "must be positive");
    check(c.tau > 0, "tau", lines, "must be positive");
    check(c.a > 0, "a", lines, "must be positive");
    for (int k = 0; k < 6; ++k) {
        check(c.eps[k] > 0, "eps" + std::to_string(k + 1), lines, "must be positive");
        check(c.beta[k] > 0, "beta" + std::to_string(k + 1), lines, "must be positive");
    }
    check(c.delta0 > 0, "delta0", lines, "must be positive");
    check(c.lin_tol > 0 && c.lin_tol < 1, "lin_tol", lines, "must lie in (0, 1)");
    check(c.lin_maxit >= 0, "lin_maxit", lines, "must be non-negative");
    check(c.nr >= 3, "nr", lines, "must be at least 3");
    check(c.nz >= 3, "nz", lines, "must be at least 3");
    check(c.grading > 0 && c.grading <= 1, "grading", lines, "must lie in (0, 1]");
    check(c.t_end >= 0, "t_end", lines, "must be non-negative");
    check(c.record_every >= 1, "record_every", lines, "must be at least 1");
    check(c.r_core > 0 && c.r_core < 1, "r_core", lines, "must lie in (0, 1)");
    check(c.jump_threshold > 0, "jump_threshold", lines, "must be positive");
    check(c.xi_floor > 0 && c.xi_floor < 1, "xi_floor", lines, "must lie in (0, 1)");
    check(!c.out_dir.empty(), "out_dir", lines, "must not be empty");
    for (double t : c.snapshot_times) check(t >= 0, "snapshot_times", lines, "times must be non-negative");
}

} // namespace

GridSpec SimConfig::grid_spec() const {
    GridSpec g;
    g.nr = nr;
    g.nz = nz;
    g.grading = grading;
    g.variant.kind = variant;
    g.variant.a = a;
    return g;
}

InitialParams SimConfig::initial_params() const { return {eps, beta, swirl}; }

SolverSettings SimConfig::solver_settings() const { return {delta0, lin_tol, lin_maxit, h_rule, coupling}; }

std::string to_string(Profile p) { return p == Profile::MeshA ? "mesh_a" : "mesh_b"; }

std::string to_string(HRule h) { return h == HRule::LocalCell ? "local" : "representative"; }

std::string to_string(SwirlCoupling c) { return c == SwirlCoupling::Implicit ? "implicit" : "explicit"; }

SimConfig parse_config(const std::string &text) {
    std::vector<std::pair<std::string, std::pair<std::string, int>>> entries;
    LineMap lines;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(body, line_no, "expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError("", line_no, "missing key");
        if (lines.count(key)) throw ConfigError(key, line_no, "duplicate key");
        lines[key] = line_no;
        entries.push_back({key, {value, line_no}});
    }

    Profile profile = Profile::MeshA;
    for (const auto &[key, v] : entries)
        if (key == "profile") profile = to_profile(key, v.second, v.first);
    SimConfig c = profile_defaults(profile);
    for (const auto &[key, v] : entries) set_key(c, key, v.first, v.second);
    validate(c, lines);
    return c;
}

void apply_override(SimConfig &cfg, const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(assignment, 0, "override must look like key=value");
    const std::string key = trim(assignment.substr(0, eq));
    SimConfig next = cfg;
    if (key == "profile") {
        // a profile switch keeps explicit values but swaps the profile's own defaults
        const SimConfig from = profile_defaults(cfg.profile);
        next.profile = to_profile(key, 0, trim(assignment.substr(eq + 1)));
        const SimConfig to = profile_defaults(next.profile);
        if (next.tau == from.tau) next.tau = to.tau;
        if (next.nr == from.nr) next.nr = to.nr;
        if (next.nz == from.nz) next.nz = to.nz;
    } else {
        set_key(next, key, trim(assignment.substr(eq + 1)), 0);
    }
    validate(next, {});
    cfg = next;
}

void validate(const SimConfig &cfg) { validate(cfg, {}); }

std::string echo_config(const SimConfig &c) {
    std::ostringstream os;
    os << "profile = " << to_string(c.profile) << "\n";
    os << "re = " << fmt(c.re) << "\n";
    os << "tau = " << fmt(c.tau) << "\n";
    os << "a = " << fmt(c.a) << "\n";
    os << "variant = " << (c.variant == DomainKind::Offset ? "offset" : "centered") << "\n";
    os << "swirl = " << (c.swirl ? "true" : "false") << "\n";
    for (int k = 0; k < 6; ++k) os << "eps" << k + 1 << " = " << fmt(c.eps[k]) << "\n";
    for (int k = 0; k < 6; ++k) os << "beta" << k + 1 << " = " << fmt(c.beta[k]) << "\n";
    os << "delta0 = " << fmt(c.delta0) << "\n";
    os << "lin_tol = " << fmt(c.lin_tol) << "\n";
    os << "lin_maxit = " << c.lin_maxit << "\n";
    os << "h_rule = " << to_string(c.h_rule) << "\n";
    os << "swirl_coupling = " << to_string(c.coupling) << "\n";
    os << "nr = " << c.nr << "\n";
    os << "nz = " << c.nz << "\n";
    os << "grading = " << fmt(c.grading) << "\n";
    os << "t_end = " << fmt(c.t_end) << "\n";
    os << "record_every = " << c.record_every << "\n";
    os << "r_core = " << fmt(c.r_core) << "\n";
    os << "jump_threshold = " << fmt(c.jump_threshold) << "\n";
    os << "xi_floor = " << fmt(c.xi_floor) << "\n";
    os << "out_dir = " << c.out_dir << "\n";
    os << "snapshot_times = ";
    for (std::size_t k = 0; k < c.snapshot_times.size(); ++k) os << (k ? "," : "") << fmt(c.snapshot_times[k]);
    os << "\n";
    return os.str();
}

} // namespace saddlesim
