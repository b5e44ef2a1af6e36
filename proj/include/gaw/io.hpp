// io.hpp — artifact plumbing: flat key=value config files, CSV writers with
// full round-trip precision, JSON exports for mode sets and pole lists, and
// the run manifest. Headers and key names are a stable contract; outputs are
// bit-identical across reruns except for the manifest timestamp and runtime.
#pragma once

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "config.hpp"
#include "field.hpp"
#include "integrator.hpp"
#include "spectral.hpp"
#include "trajectory.hpp"

namespace gaw {

using ojson = nlohmann::ordered_json;

// full round-trip decimal formatting for CSV cells
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline const char* to_string(ModeSource s) {
    switch (s) {
        case ModeSource::Cond2kPi: return "Cond2kPi";
        case ModeSource::CondOddPi: return "CondOddPi";
        case ModeSource::CondN: return "CondN";
        default: return "CondNPlus1";
    }
}

inline const char* to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::Decaying: return "Decaying";
        case CaseLabel::OneMode: return "OneMode";
        case CaseLabel::TwoMode: return "TwoMode";
        default: return "ThreeMode";
    }
}

// ------------------------- config files -------------------------
// Flat `key = value` lines; '#' starts a comment; blank lines ignored.

namespace detail {

inline std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

inline std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_parse_error("line " + std::to_string(lineno) +
                                     ": expected `key = value`");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_parse_error("line " + std::to_string(lineno) +
                                     ": empty key or value");
        if (!kv.emplace(key, val).second)
            throw config_parse_error("duplicate key: " + key);
    }
    return kv;
}

inline double to_double(const std::string& key, const std::string& val) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(val, &used);
    } catch (const std::exception&) {
        throw config_parse_error("key " + key + ": not a number: " + val);
    }
    if (used != val.size())
        throw config_parse_error("key " + key + ": trailing junk: " + val);
    return x;
}

inline int to_int(const std::string& key, const std::string& val) {
    std::size_t used = 0;
    long x = 0;
    try {
        x = std::stol(val, &used);
    } catch (const std::exception&) {
        throw config_parse_error("key " + key + ": not an integer: " + val);
    }
    if (used != val.size())
        throw config_parse_error("key " + key + ": trailing junk: " + val);
    return static_cast<int>(x);
}

} // namespace detail

// Single-emitter schema, keys exactly: n_points, omega0_tau0_pi, gamma_tau0_pi,
// reflectivity, gamma_ext_ratio, dephasing_ratio. Frequencies are in units of
// pi. The first three are required, the rest default to the ideal case.
inline SystemConfig parse_system_config(const std::string& text) {
    auto kv = detail::parse_kv(text);
    SystemConfig cfg;
    auto take = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::string();
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const std::string n = take("n_points");
    const std::string w0 = take("omega0_tau0_pi");
    const std::string g = take("gamma_tau0_pi");
    if (n.empty() || w0.empty() || g.empty())
        throw config_parse_error(
            "required keys: n_points, omega0_tau0_pi, gamma_tau0_pi");
    cfg.n_points = detail::to_int("n_points", n);
    cfg.omega0_tau0 = pi * detail::to_double("omega0_tau0_pi", w0);
    cfg.gamma_tau0 = pi * detail::to_double("gamma_tau0_pi", g);
    cfg.reflectivity = 1.0;
    cfg.gamma_ext_ratio = 0.0;
    cfg.dephasing_ratio = 0.0;
    if (auto v = take("reflectivity"); !v.empty())
        cfg.reflectivity = detail::to_double("reflectivity", v);
    if (auto v = take("gamma_ext_ratio"); !v.empty())
        cfg.gamma_ext_ratio = detail::to_double("gamma_ext_ratio", v);
    if (auto v = take("dephasing_ratio"); !v.empty())
        cfg.dephasing_ratio = detail::to_double("dephasing_ratio", v);
    if (!kv.empty())
        throw config_parse_error("unknown key: " + kv.begin()->first);
    cfg.validate();
    return cfg;
}

// Several-emitter schema: shared keys omega0_tau0_pi, gamma_tau0_pi,
// reflectivity, coupling_mode (as_printed | full_cross), duplicate_detuning
// (0 | 1); per emitter K = 1,2,...: atomK_n_points, atomK_detuning_ratio,
// atomK_eps0_re, atomK_eps0_im.
inline MultiAtomConfig parse_multi_config(const std::string& text) {
    auto kv = detail::parse_kv(text);
    MultiAtomConfig cfg;
    auto take = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::string();
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    const std::string w0 = take("omega0_tau0_pi");
    const std::string g = take("gamma_tau0_pi");
    if (w0.empty() || g.empty())
        throw config_parse_error("required keys: omega0_tau0_pi, gamma_tau0_pi");
    cfg.omega0_tau0 = pi * detail::to_double("omega0_tau0_pi", w0);
    cfg.gamma_tau0 = pi * detail::to_double("gamma_tau0_pi", g);
    cfg.reflectivity = 1.0;
    if (auto v = take("reflectivity"); !v.empty())
        cfg.reflectivity = detail::to_double("reflectivity", v);
    cfg.coupling_mode = CouplingMode::FullCrossCoupling;
    if (auto v = take("coupling_mode"); !v.empty()) {
        if (v == "as_printed")
            cfg.coupling_mode = CouplingMode::AsPrinted;
        else if (v == "full_cross")
            cfg.coupling_mode = CouplingMode::FullCrossCoupling;
        else
            throw config_parse_error("coupling_mode must be as_printed or full_cross");
    }
    cfg.duplicate_detuning = false;
    if (auto v = take("duplicate_detuning"); !v.empty())
        cfg.duplicate_detuning = detail::to_int("duplicate_detuning", v) != 0;
    cfg.atoms.clear();
    for (int k = 1;; ++k) {
        const std::string prefix = "atom" + std::to_string(k) + "_";
        const std::string np = take(prefix + "n_points");
        if (np.empty()) break;
        AtomSpec a;
        a.n_points = detail::to_int(prefix + "n_points", np);
        a.detuning_ratio = 0.0;
        a.eps0 = {0.0, 0.0};
        if (auto v = take(prefix + "detuning_ratio"); !v.empty())
            a.detuning_ratio = detail::to_double(prefix + "detuning_ratio", v);
        if (auto v = take(prefix + "eps0_re"); !v.empty())
            a.eps0 += cplx{detail::to_double(prefix + "eps0_re", v), 0.0};
        if (auto v = take(prefix + "eps0_im"); !v.empty())
            a.eps0 += cplx{0.0, detail::to_double(prefix + "eps0_im", v)};
        cfg.atoms.push_back(a);
    }
    if (cfg.atoms.empty())
        throw config_parse_error("at least atom1_n_points is required");
    if (!kv.empty())
        throw config_parse_error("unknown key: " + kv.begin()->first);
    cfg.validate();
    return cfg;
}

inline std::string system_config_text(const SystemConfig& c) {
    std::ostringstream out;
    out << "n_points = " << c.n_points << '\n'
        << "omega0_tau0_pi = " << g17(c.omega0_tau0 / pi) << '\n'
        << "gamma_tau0_pi = " << g17(c.gamma_tau0 / pi) << '\n'
        << "reflectivity = " << g17(c.reflectivity) << '\n'
        << "gamma_ext_ratio = " << g17(c.gamma_ext_ratio) << '\n'
        << "dephasing_ratio = " << g17(c.dephasing_ratio) << '\n';
    return out.str();
}

// ------------------------- hashing -------------------------

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hash_hex(std::string_view canonical) {
    const std::uint64_t h = fnv1a64(canonical);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string config_hash(const SystemConfig& c) {
    return hash_hex(system_config_text(c));
}

inline std::string multi_config_text(const MultiAtomConfig& c) {
    std::ostringstream out;
    out << "omega0_tau0_pi = " << g17(c.omega0_tau0 / pi) << '\n'
        << "gamma_tau0_pi = " << g17(c.gamma_tau0 / pi) << '\n'
        << "reflectivity = " << g17(c.reflectivity) << '\n'
        << "coupling_mode = "
        << (c.coupling_mode == CouplingMode::AsPrinted ? "as_printed" : "full_cross")
        << '\n'
        << "duplicate_detuning = " << (c.duplicate_detuning ? 1 : 0) << '\n';
    for (std::size_t q = 0; q < c.atoms.size(); ++q) {
        const std::string p = "atom" + std::to_string(q + 1) + "_";
        out << p << "n_points = " << c.atoms[q].n_points << '\n'
            << p << "detuning_ratio = " << g17(c.atoms[q].detuning_ratio) << '\n'
            << p << "eps0_re = " << g17(c.atoms[q].eps0.real()) << '\n'
            << p << "eps0_im = " << g17(c.atoms[q].eps0.imag()) << '\n';
    }
    return out.str();
}

inline std::string config_hash(const MultiAtomConfig& c) {
    return hash_hex(multi_config_text(c));
}

// ------------------------- CSV writers -------------------------

inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr,
                                 std::size_t stride = 1) {
    if (stride < 1) stride = 1;
    out << "t_over_tau0, re_eps, im_eps, abs2\n";
    for (std::size_t j = 0; j < tr.size(); j += stride) {
        const cplx v = tr.value(j);
        out << g17(tr.time(j)) << ", " << g17(v.real()) << ", " << g17(v.imag())
            << ", " << g17(tr.abs2(j)) << '\n';
    }
}

inline void write_ensemble_csv(std::ostream& out, const EnsembleStats& st,
                               std::size_t stride = 1) {
    if (stride < 1) stride = 1;
    out << "t_over_tau0, mean_abs2, stderr_abs2\n";
    for (std::size_t j = 0; j < st.mean_abs2.size(); j += stride)
        out << g17(st.time(j)) << ", " << g17(st.mean_abs2[j]) << ", "
            << g17(st.stderr_abs2[j]) << '\n';
}

// generic two-column series (analytic overlays, norm series)
inline void write_series_csv(std::ostream& out, const std::string& name,
                             const std::vector<double>& t,
                             const std::vector<double>& y) {
    out << "t_over_tau0, " << name << '\n';
    for (std::size_t i = 0; i < t.size() && i < y.size(); ++i)
        out << g17(t[i]) << ", " << g17(y[i]) << '\n';
}

// matrix of intensities: one row per time, one column per position
inline void write_field_csv(std::ostream& out, const FieldMap& fm) {
    for (std::size_t ti = 0; ti < fm.t_grid.size(); ++ti) {
        for (std::size_t xi = 0; xi < fm.x_grid.size(); ++xi) {
            if (xi) out << ", ";
            out << g17(fm.at(ti, xi));
        }
        out << '\n';
    }
}

// ------------------------- JSON exports -------------------------

inline ojson field_meta_json(const FieldMap& fm) {
    ojson j;
    j["x_grid"] = fm.x_grid;
    j["t_grid"] = fm.t_grid;
    j["norm_series"] = fm.norm_series;
    return j;
}

inline ojson mode_set_json(const ModeSet& set) {
    ojson j;
    j["case_label"] = to_string(set.case_label);
    j["modes"] = ojson::array();
    for (const auto& m : set.modes) {
        ojson e;
        e["omega_tau0_pi"] = m.omega_tau0 / pi;
        e["weight"] = {{"re", m.weight.real()}, {"im", m.weight.imag()}};
        e["source"] = to_string(m.source);
        e["k"] = m.k;
        e["residual"] = m.residual;
        j["modes"].push_back(e);
    }
    return j;
}

inline ojson poles_json(const std::vector<cplx>& poles, const SystemConfig& cfg) {
    ojson j = ojson::array();
    for (const auto& s : poles) {
        const cplx w = residue_weight(s, cfg);
        ojson e;
        e["re_s_tau0"] = s.real();
        e["im_s_tau0"] = s.imag();
        e["omega_tau0_pi"] = -s.imag() / pi;
        e["weight"] = {{"re", w.real()}, {"im", w.imag()}};
        j.push_back(e);
    }
    return j;
}

inline ojson manifest_json(const std::string& preset_id, const std::string& cfg_hash,
                           std::uint64_t seed, double runtime_seconds) {
    ojson j;
    j["preset"] = preset_id;
    j["config_hash"] = cfg_hash;
    j["tool_version"] = version;
    j["seed"] = seed;
    j["runtime_seconds"] = runtime_seconds;
    char stamp[32] = "unknown";
    const std::time_t now = std::time(nullptr);
    if (std::tm tm{}; gmtime_r(&now, &tm) != nullptr)
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["created_utc"] = stamp;
    return j;
}

// ------------------------- files -------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error("read failed: " + path);
    return ss.str();
}

} // namespace gaw
