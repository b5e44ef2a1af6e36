// gaw — reproducible experiment runner for the giant-atom waveguide toolkit.
//
//   gaw list                         show the preset catalog
//   gaw run <preset|kind> [flags]    produce figure-ready datasets
//   gaw scan [flags]                 classify a (omega0, Gamma) grid
//
// Kinds: dynamics, ensemble, field, poles, multi. A bare preset id runs the
// preset with its stored kind; a kind word plus --preset or --config reuses
// the configuration under another view. All outputs land in --out together
// with a manifest (config hash, tool version, seed, runtime).
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaw/analytic.hpp"
#include "gaw/field.hpp"
#include "gaw/integrator.hpp"
#include "gaw/io.hpp"
#include "gaw/presets.hpp"
#include "gaw/spectral.hpp"

namespace fs = std::filesystem;
using namespace gaw;

namespace {

struct RunOptions {
    std::string what;
    std::string preset_id;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int steps_per_tau0 = 0;
    double horizon_gamma_t = 0.0;
    int n_traj = 0;
    double dx = 0.0;
    double x_max = 0.0;
    std::vector<double> snapshot_gamma_t;
    std::size_t stride = 1;
};

struct ScanOptions {
    int n_points = 0;
    std::string omega0_range;
    std::string gamma_range;
    std::string out_dir = "out/scan";
    int chunk = 256;
};

bool is_kind_word(const std::string& s) {
    return s == "dynamics" || s == "ensemble" || s == "field" || s == "poles" ||
           s == "multi";
}

double horizon_tau0_of(const SystemConfig& cfg, double horizon_gamma_t) {
    // with Gamma = 0 there is no 1/Gamma clock; read the span in units of tau0
    return cfg.gamma_tau0 > 0.0 ? horizon_gamma_t / cfg.gamma_tau0 : horizon_gamma_t;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + p.string());
    return out;
}

void write_json(const fs::path& p, const ojson& j) {
    write_text_file(p.string(), j.dump(2) + "\n");
}

void write_manifest(const fs::path& dir, const std::string& preset_id,
                    const std::string& cfg_hash, std::uint64_t seed,
                    std::chrono::steady_clock::time_point t0) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(dir / "manifest.json", manifest_json(preset_id, cfg_hash, seed, secs));
}

void warn_if_fast_rotating(const SystemConfig& cfg) {
    if (const auto w = rwa_warning(cfg)) std::cerr << "warning: " << *w << '\n';
}

// Resolve the preset/overrides pair into a concrete run description.
Preset resolve_preset(const RunOptions& opt, RunKind kind_hint, bool kind_forced) {
    Preset p;
    if (!opt.preset_id.empty()) {
        p = find_preset(opt.preset_id);
    } else if (!opt.config_path.empty()) {
        p.id = "custom";
        p.summary = "configuration file " + opt.config_path;
        p.kind = kind_hint;
        p.variants = {{"base", parse_system_config(read_text_file(opt.config_path))}};
        p.horizon_gamma_t = kind_hint == RunKind::Field ? 20.0 : 50.0;
    } else {
        throw config_error("need a preset id, --preset, or --config");
    }
    if (kind_forced) p.kind = kind_hint;
    if (opt.seed) p.seed = opt.seed;
    if (opt.steps_per_tau0) p.steps_per_tau0 = opt.steps_per_tau0;
    if (opt.horizon_gamma_t > 0.0) p.horizon_gamma_t = opt.horizon_gamma_t;
    if (opt.n_traj) p.n_traj = opt.n_traj;
    if (opt.dx > 0.0) p.dx = opt.dx;
    if (opt.x_max > 0.0) p.x_max = opt.x_max;
    if (!opt.snapshot_gamma_t.empty()) p.snapshot_gamma_t = opt.snapshot_gamma_t;
    return p;
}

fs::path prepare_out_dir(const RunOptions& opt, const std::string& fallback) {
    fs::path dir = opt.out_dir.empty() ? fs::path("out") / fallback : fs::path(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + dir.string());
    return dir;
}

std::string csv_name(const std::string& stem, const Preset& p, std::size_t vi) {
    if (p.variants.size() == 1) return stem + ".csv";
    return stem + "_" + p.variants[vi].label + ".csv";
}

void run_dynamics(const Preset& p, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(opt, p.id);
    const double horizon = horizon_tau0_of(p.config(), p.horizon_gamma_t);
    warn_if_fast_rotating(p.config());
    double end_abs2 = 0.0;
    for (std::size_t vi = 0; vi < p.variants.size(); ++vi) {
        const auto& v = p.variants[vi];
        const auto tr = integrate(v.config, horizon, p.steps_per_tau0, Frame::Lab);
        if (vi == 0) end_abs2 = tr.abs2(tr.size() - 1);
        auto out = open_out(dir / csv_name("dynamics", p, vi));
        write_trajectory_csv(out, tr, opt.stride);
    }
    const ModeSet set = classify(p.config());
    if (p.config().ideal() && set.modes.size() == 1) {
        const double cf = static_amplitude(p.config(), set.modes.front().source);
        std::cout << "plateau |eps|^2: integrated " << g17(end_abs2)
                  << " vs closed form " << g17(cf * cf) << '\n';
    }
    write_json(dir / "modes.json", mode_set_json(set));
    if (p.config().ideal() && set.case_label != CaseLabel::Decaying) {
        // analytic overlay: trapped-mode superposition (a constant line for
        // a single mode, the beat envelope otherwise)
        std::vector<double> t, y;
        const auto n = static_cast<std::size_t>(horizon * p.steps_per_tau0 + 1e-9);
        for (std::size_t j = 0; j <= n; j += opt.stride) {
            const double tj = static_cast<double>(j) / p.steps_per_tau0;
            t.push_back(tj);
            y.push_back(std::norm(multi_mode_amplitude(set, tj)));
        }
        auto out = open_out(dir / "analytic.csv");
        write_series_csv(out, "abs2_analytic", t, y);
    }
    write_manifest(dir, p.id, config_hash(p.config()), p.seed, t0);
    std::cout << p.id << ": " << to_string(set.case_label) << " with "
              << set.modes.size() << " trapped mode(s); wrote " << dir.string() << '\n';
}

void run_ensemble(const Preset& p, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(opt, p.id);
    const double horizon = horizon_tau0_of(p.config(), p.horizon_gamma_t);
    warn_if_fast_rotating(p.config());
    for (std::size_t vi = 0; vi < p.variants.size(); ++vi) {
        const auto& v = p.variants[vi];
        const int n = v.config.dephasing_ratio > 0.0 ? p.n_traj : 1;
        const auto st = ensemble_average(v.config, build_kernel(v.config), horizon,
                                         p.steps_per_tau0, n, p.seed);
        auto out = open_out(dir / csv_name("ensemble", p, vi));
        write_ensemble_csv(out, st, opt.stride);
    }
    write_json(dir / "modes.json", mode_set_json(classify(p.config())));
    write_manifest(dir, p.id, config_hash(p.config()), p.seed, t0);
    std::cout << p.id << ": " << p.variants.size() << " ensemble curve(s); wrote "
              << dir.string() << '\n';
}

void run_field(const Preset& p, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(opt, p.id);
    const auto& cfg = p.config();
    const double horizon = horizon_tau0_of(cfg, p.horizon_gamma_t);
    if (cfg.reflectivity < 1.0)
        std::cerr << "warning: intensity maps with R < 1 scale the mirror ray by r; "
                     "treat them as exploratory\n";
    const auto tr = integrate(cfg, horizon, p.steps_per_tau0, Frame::Lab);
    const double x_hi = p.x_max > 0.0 ? p.x_max : cfg.n_points + horizon;
    const auto xg = make_grid(0.0, x_hi, p.dx);
    std::vector<double> tg;
    if (!p.snapshot_gamma_t.empty()) {
        for (double gt : p.snapshot_gamma_t)
            tg.push_back(horizon_tau0_of(cfg, gt));
    } else {
        tg = make_grid(0.0, horizon, 0.25);
    }
    const auto fm = intensity_map(tr, xg, tg, cfg);
    {
        auto out = open_out(dir / "field.csv");
        write_field_csv(out, fm);
    }
    write_json(dir / "field_meta.json", field_meta_json(fm));
    {
        auto out = open_out(dir / "norm.csv");
        write_series_csv(out, "norm", fm.t_grid, fm.norm_series);
    }
    write_manifest(dir, p.id, config_hash(cfg), p.seed, t0);
    std::cout << p.id << ": field map " << fm.t_grid.size() << " x "
              << fm.x_grid.size() << "; wrote " << dir.string() << '\n';
}

void run_poles(const Preset& p, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = prepare_out_dir(opt, p.id);
    const auto& cfg = p.config();
    warn_if_fast_rotating(cfg);
    const auto poles = find_poles(cfg);
    const ModeSet set = classify(cfg);
    write_json(dir / "poles.json", poles_json(poles, cfg));
    write_json(dir / "modes.json", mode_set_json(set));
    write_manifest(dir, p.id, config_hash(cfg), p.seed, t0);
    std::cout << p.id << ": " << poles.size() << " pole(s), "
              << to_string(set.case_label) << "; wrote " << dir.string() << '\n';
}

void run_multi(const RunOptions& opt) {
    if (opt.config_path.empty())
        throw config_error("run multi requires --config with the emitter layout");
    const auto t0 = std::chrono::steady_clock::now();
    const MultiAtomConfig cfg = parse_multi_config(read_text_file(opt.config_path));
    const fs::path dir = prepare_out_dir(opt, "multi");
    const double horizon_gt = opt.horizon_gamma_t > 0.0 ? opt.horizon_gamma_t : 50.0;
    const double horizon =
        cfg.gamma_tau0 > 0.0 ? horizon_gt / cfg.gamma_tau0 : horizon_gt;
    const int steps = opt.steps_per_tau0 > 0 ? opt.steps_per_tau0 : 200;
    const auto trs = integrate_multi(cfg, horizon, steps, Frame::Lab);
    for (std::size_t q = 0; q < trs.size(); ++q) {
        auto out = open_out(dir / ("atom" + std::to_string(q + 1) + "_dynamics.csv"));
        write_trajectory_csv(out, trs[q], opt.stride);
    }
    write_manifest(dir, "multi", config_hash(cfg), opt.seed ? opt.seed : 12345, t0);
    std::cout << "multi: " << trs.size() << " emitter(s); wrote " << dir.string()
              << '\n';
}

void dispatch_run(const RunOptions& opt) {
    if (!is_kind_word(opt.what)) {
        RunOptions o = opt;
        o.preset_id = opt.what;
        const Preset p = resolve_preset(o, RunKind::Dynamics, false);
        switch (p.kind) {
            case RunKind::Dynamics: run_dynamics(p, o); return;
            case RunKind::Ensemble: run_ensemble(p, o); return;
            case RunKind::Field: run_field(p, o); return;
        }
        return;
    }
    if (opt.what == "dynamics") {
        run_dynamics(resolve_preset(opt, RunKind::Dynamics, true), opt);
    } else if (opt.what == "ensemble") {
        run_ensemble(resolve_preset(opt, RunKind::Ensemble, true), opt);
    } else if (opt.what == "field") {
        run_field(resolve_preset(opt, RunKind::Field, true), opt);
    } else if (opt.what == "poles") {
        run_poles(resolve_preset(opt, RunKind::Dynamics, false), opt);
    } else {
        run_multi(opt);
    }
}

// ------------------------- scan -------------------------

std::vector<double> parse_range(const std::string& key, const std::string& text) {
    // "lo:hi:step" or a single value, all in units of pi
    std::vector<double> parts;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ':'))
        parts.push_back(detail::to_double(key, detail::trim(token)));
    if (parts.size() == 1) return parts;
    if (parts.size() != 3)
        throw config_parse_error(key + ": expected `lo:hi:step` or a single value");
    const auto [lo, hi, step] = std::tuple{parts[0], parts[1], parts[2]};
    if (!(step > 0.0) || hi < lo)
        throw config_parse_error(key + ": need step > 0 and hi >= lo");
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + step * i);
    return grid;
}

std::string modes_cell(const ModeSet& set) {
    std::string cell;
    for (const auto& m : set.modes) {
        if (!cell.empty()) cell += ';';
        cell += std::string(to_string(m.source)) + ":" + std::to_string(m.k) + ":" +
                g17(m.omega_tau0 / pi) + ":" + g17(m.weight.real());
    }
    return cell;
}

void dispatch_scan(const ScanOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.n_points < 1) throw config_error("scan needs --n >= 1");
    if (opt.chunk < 1) throw config_error("scan needs --chunk >= 1");
    const auto w_grid = parse_range("--omega0-pi", opt.omega0_range);
    const auto g_grid = parse_range("--gamma-pi", opt.gamma_range);

    fs::path dir(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + dir.string());
    const fs::path csv = dir / "scan.csv";

    // resume: skip as many grid points as there are data rows already on disk
    std::size_t done = 0;
    bool have_header = false;
    if (fs::exists(csv)) {
        std::ifstream in(csv);
        std::string line;
        while (std::getline(in, line)) {
            if (!have_header) {
                have_header = true;
                continue;
            }
            if (!line.empty()) ++done;
        }
    }
    std::ofstream out(csv, std::ios::binary | std::ios::app);
    if (!out) throw io_error("cannot open for writing: " + csv.string());
    if (!have_header)
        out << "n_points, omega0_tau0_pi, gamma_tau0_pi, case_label, modes\n";

    const std::size_t total = w_grid.size() * g_grid.size();
    std::size_t index = 0, written = 0, in_chunk = 0;
    for (const double w : w_grid) {
        for (const double g : g_grid) {
            if (index++ < done) continue;
            const auto cfg = make_config(opt.n_points, w * pi, g * pi);
            const ModeSet set = classify(cfg);
            out << opt.n_points << ", " << g17(w) << ", " << g17(g) << ", "
                << to_string(set.case_label) << ", " << modes_cell(set) << '\n';
            ++written;
            if (++in_chunk >= static_cast<std::size_t>(opt.chunk)) {
                out.flush();
                in_chunk = 0;
            }
        }
    }
    out.flush();
    if (!out) throw io_error("write failed: " + csv.string());

    const std::string spec_text = "scan;n=" + std::to_string(opt.n_points) +
                                  ";omega0_pi=" + opt.omega0_range +
                                  ";gamma_pi=" + opt.gamma_range;
    write_manifest(dir, "scan", hash_hex(spec_text), 0, t0);
    std::cout << "scan: " << written << " new row(s), " << total
              << " total grid points; wrote " << csv.string() << '\n';
}

void dispatch_list() {
    std::printf("%-8s %-9s %-3s %-12s %-11s %-8s %s\n", "id", "kind", "N",
                "omega0/pi", "gamma/pi", "curves", "summary");
    for (const auto& p : preset_table()) {
        const char* kind = p.kind == RunKind::Dynamics    ? "dynamics"
                           : p.kind == RunKind::Ensemble ? "ensemble"
                                                         : "field";
        std::printf("%-8s %-9s %-3d %-12.6f %-11.6f %-8zu %s\n", p.id.c_str(), kind,
                    p.config().n_points, p.config().omega0_tau0 / pi,
                    p.config().gamma_tau0 / pi, p.variants.size(), p.summary.c_str());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"giant-atom waveguide dynamics toolkit"};
    app.require_subcommand(1);

    RunOptions ropt;
    auto* run = app.add_subcommand("run", "run a preset or a run kind");
    run->add_option("what", ropt.what,
                    "preset id (see `gaw list`) or kind: dynamics | ensemble | "
                    "field | poles | multi")
        ->required();
    run->add_option("--preset", ropt.preset_id, "preset id supplying the configuration");
    run->add_option("--config", ropt.config_path, "key = value configuration file");
    run->add_option("--out", ropt.out_dir, "output directory (default out/<id>)");
    run->add_option("--seed", ropt.seed, "base RNG seed for stochastic runs");
    run->add_option("--steps-per-tau0", ropt.steps_per_tau0, "grid steps per delay");
    run->add_option("--horizon-gamma-t", ropt.horizon_gamma_t,
                    "time span in units of 1/Gamma (tau0 units when Gamma = 0)");
    run->add_option("--ntraj", ropt.n_traj, "trajectories per noisy ensemble");
    run->add_option("--dx", ropt.dx, "field grid spacing, units of x0");
    run->add_option("--x-max", ropt.x_max, "field grid extent, units of x0");
    run->add_option("--snapshot-gamma-t", ropt.snapshot_gamma_t,
                    "field snapshot times in units of 1/Gamma (else a full map)");
    run->add_option("--stride", ropt.stride, "write every n-th time sample");

    ScanOptions sopt;
    auto* scan = app.add_subcommand("scan", "classify a grid of (omega0, Gamma)");
    scan->add_option("--n", sopt.n_points, "number of coupling points")->required();
    scan->add_option("--omega0-pi", sopt.omega0_range,
                     "omega0*tau0 range lo:hi:step in units of pi")
        ->required();
    scan->add_option("--gamma-pi", sopt.gamma_range,
                     "Gamma*tau0 range lo:hi:step in units of pi")
        ->required();
    scan->add_option("--out", sopt.out_dir, "output directory");
    scan->add_option("--chunk", sopt.chunk, "rows per flush (resume unit)");

    auto* list = app.add_subcommand("list", "print the preset catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) dispatch_run(ropt);
        else if (scan->parsed()) dispatch_scan(sopt);
        else if (list->parsed()) dispatch_list();
        return 0;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 4;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
