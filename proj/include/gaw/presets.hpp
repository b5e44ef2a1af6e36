// presets.hpp — the catalog of ready-made runs. Each entry pins a physical
// configuration (synthesized from the mode-placement helpers, never typed in
// by hand), the run kind it is meant for, and the numerical defaults: grid
// density, horizon, trajectory count, seed. Family entries carry one variant
// per curve (reflectivity or loss sweeps) sharing a common time axis.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "config.hpp"
#include "spectral.hpp"

namespace gaw {

enum class RunKind { Dynamics, Ensemble, Field };

struct Variant {
    std::string label; // column tag in exports
    SystemConfig config;
};

struct Preset {
    std::string id;
    std::string summary;
    RunKind kind{RunKind::Dynamics};
    std::vector<Variant> variants; // first entry is the primary configuration
    double horizon_gamma_t{50.0};  // time span in units of 1/Gamma
    int steps_per_tau0{200};
    int n_traj{500};              // ensemble runs
    std::uint64_t seed{12345};
    double dx{0.02};              // field runs, units of x0
    double x_max{0.0};            // 0 = cover the light cone
    std::vector<double> snapshot_gamma_t; // field runs: empty = full map

    const SystemConfig& config() const { return variants.front().config; }
    double horizon_tau0() const { return horizon_gamma_t / config().gamma_tau0; }
};

namespace detail {

inline Preset run_of(std::string id, std::string summary, RunKind kind,
                     SystemConfig cfg, double horizon_gt) {
    Preset p;
    p.id = std::move(id);
    p.summary = std::move(summary);
    p.kind = kind;
    p.variants = {{"base", std::move(cfg)}};
    p.horizon_gamma_t = horizon_gt;
    return p;
}

inline SystemConfig losses(SystemConfig cfg, double refl, double ext, double deph) {
    cfg.reflectivity = refl;
    cfg.gamma_ext_ratio = ext;
    cfg.dephasing_ratio = deph;
    return cfg;
}

// reflectivity sweep, fully deterministic
inline Preset mirror_family(std::string id, std::string summary, const SystemConfig& base,
                            double horizon_gt) {
    Preset p;
    p.id = std::move(id);
    p.summary = std::move(summary);
    p.kind = RunKind::Dynamics;
    p.variants = {{"R_1", losses(base, 1.0, 0.0, 0.0)},
                  {"R_0.9", losses(base, 0.9, 0.0, 0.0)},
                  {"R_0", losses(base, 0.0, 0.0, 0.0)}};
    p.horizon_gamma_t = horizon_gt;
    return p;
}

// non-radiative loss sweep at fixed dephasing, plus the ideal reference
inline Preset ext_family(std::string id, std::string summary, const SystemConfig& base) {
    Preset p;
    p.id = std::move(id);
    p.summary = std::move(summary);
    p.kind = RunKind::Ensemble;
    p.variants = {{"ideal", losses(base, 1.0, 0.0, 0.0)},
                  {"gamma_ext_0.1", losses(base, 0.98, 0.1, 0.1)},
                  {"gamma_ext_0.2", losses(base, 0.98, 0.2, 0.1)}};
    p.horizon_gamma_t = 40.0;
    return p;
}

// dephasing sweep at fixed non-radiative loss, plus the ideal reference
inline Preset dephasing_family(std::string id, std::string summary,
                               const SystemConfig& base) {
    Preset p;
    p.id = std::move(id);
    p.summary = std::move(summary);
    p.kind = RunKind::Ensemble;
    p.variants = {{"ideal", losses(base, 1.0, 0.0, 0.0)},
                  {"dephasing_0.1", losses(base, 0.98, 0.1, 0.1)},
                  {"dephasing_0.2", losses(base, 0.98, 0.1, 0.2)}};
    p.horizon_gamma_t = 40.0;
    return p;
}

inline Preset field_map(std::string id, std::string summary, SystemConfig cfg,
                        double horizon_gt) {
    Preset p = run_of(std::move(id), std::move(summary), RunKind::Field,
                      std::move(cfg), horizon_gt);
    return p;
}

inline Preset field_snapshot(std::string id, std::string summary, SystemConfig cfg,
                             double at_gamma_t) {
    Preset p = run_of(std::move(id), std::move(summary), RunKind::Field,
                      std::move(cfg), at_gamma_t);
    p.snapshot_gamma_t = {at_gamma_t};
    p.x_max = p.config().n_points + 2.0;
    return p;
}

inline std::vector<Preset> build_table() {
    using DV = DivisorVariant;
    using CP = CenterParity;
    std::vector<Preset> t;
    t.reserve(70);

    auto dyn = [&](std::string id, std::string summary, SystemConfig cfg,
                   double horizon_gt = 50.0) {
        t.push_back(run_of(std::move(id), std::move(summary), RunKind::Dynamics,
                           std::move(cfg), horizon_gt));
    };

    // --- N = 3 single trapped modes -------------------------------------
    const double g3 = 0.05 * pi;
    const SystemConfig c2a = make_config(3, 2.0 * pi, g3);
    const SystemConfig c2b = make_config(3, 3.0 * pi, g3);
    const SystemConfig c2c =
        make_config(3, bound_state_frequency(3, 4, g3, DV::DivN), g3);
    const SystemConfig c2d =
        make_config(3, bound_state_frequency(3, 3, g3, DV::DivNPlus1), g3);
    dyn("fig2a", "N=3 static trapped mode, transition at an even multiple of pi", c2a);
    dyn("fig2b", "N=3 static trapped mode, transition at an odd multiple of pi", c2b);
    dyn("fig2c", "N=3 trapped mode on the divisor-N grid (k=4)", c2c);
    dyn("fig2d", "N=3 trapped mode on the divisor-(N+1) grid (k=3)", c2d);

    for (auto [suffix, cfg] : {std::pair{"a", c2a}, std::pair{"b", c2b},
                               std::pair{"c", c2c}, std::pair{"d", c2d}}) {
        t.push_back(field_map(std::string("fig3") + suffix,
                              "field intensity map while the N=3 trapped state forms",
                              cfg, 20.0));
        t.push_back(field_snapshot(std::string("fig4") + suffix,
                                   "late-time field profile of the N=3 trapped state",
                                   cfg, 40.0));
    }

    // --- N = 3 rate and frequency sweeps ---------------------------------
    dyn("fig5a", "N=3 even-multiple pinning at a weaker rate", make_config(3, 2.0 * pi, 0.04 * pi));
    dyn("fig5b", "N=3 even-multiple pinning at a stronger rate", make_config(3, 2.0 * pi, 0.08 * pi));
    dyn("fig5c", "N=3 even-multiple pinning at a larger delay phase", make_config(3, 10.0 * pi, 0.1 * pi));
    dyn("fig5d", "N=3 even-multiple pinning deeper in the delay ladder", make_config(3, 14.0 * pi, 0.1 * pi));

    // --- N = 6 two-mode beats --------------------------------------------
    const auto p6a = two_mode_parameters(6, 23, 26, DV::DivN);
    const auto p6b = two_mode_parameters(6, 27, 30, DV::DivNPlus1);
    const SystemConfig c6a = make_config(6, p6a.omega0_tau0, p6a.gamma_tau0);
    const SystemConfig c6b = make_config(6, p6b.omega0_tau0, p6b.gamma_tau0);
    dyn("fig6a", "N=6 equal-weight beat of divisor-N modes k=23,26", c6a);
    dyn("fig6b", "N=6 equal-weight beat of divisor-(N+1) modes k=27,30", c6b);

    t.push_back(field_map("fig7a", "field map of the N=6 divisor-N beat", c6a, 15.0));
    t.push_back(field_snapshot("fig7b", "field profile of the N=6 divisor-N beat", c6a, 15.0));
    t.push_back(field_map("fig7c", "field map of the N=6 divisor-(N+1) beat", c6b, 15.0));
    t.push_back(field_snapshot("fig7d", "field profile of the N=6 divisor-(N+1) beat", c6b, 15.0));

    // --- two-mode beats at other point counts -----------------------------
    const auto p8a = two_mode_parameters(7, 27, 30, DV::DivN);
    const auto p8b = two_mode_parameters(8, 31, 34, DV::DivN);
    const auto p8c = two_mode_parameters(7, 31, 34, DV::DivNPlus1);
    const auto p8d = two_mode_parameters(8, 35, 38, DV::DivNPlus1);
    dyn("fig8a", "N=7 beat of divisor-N modes k=27,30",
        make_config(7, p8a.omega0_tau0, p8a.gamma_tau0));
    dyn("fig8b", "N=8 beat of divisor-N modes k=31,34",
        make_config(8, p8b.omega0_tau0, p8b.gamma_tau0));
    dyn("fig8c", "N=7 beat of divisor-(N+1) modes k=31,34",
        make_config(7, p8c.omega0_tau0, p8c.gamma_tau0));
    dyn("fig8d", "N=8 beat of divisor-(N+1) modes k=35,38",
        make_config(8, p8d.omega0_tau0, p8d.gamma_tau0));

    // --- three-mode superpositions ----------------------------------------
    const auto p9a = three_mode_parameters(5, 4, 1, CP::Even2kPi, DV::DivN);
    const auto p9b = three_mode_parameters(8, 8, 3, CP::OddPi, DV::DivN);
    const SystemConfig c9a = make_config(5, p9a.omega0_tau0, p9a.gamma_tau0);
    const SystemConfig c9b = make_config(8, p9b.omega0_tau0, p9b.gamma_tau0);
    dyn("fig9a", "N=5 three-mode beat, center pinned at an even multiple of pi", c9a);
    dyn("fig9b", "N=8 three-mode beat, center pinned at an odd multiple of pi", c9b);

    // --- reflectivity families --------------------------------------------
    const std::pair<const char*, const SystemConfig*> mirror_bases[] = {
        {"fig10a", &c2a}, {"fig10b", &c2b}, {"fig10c", &c2c}, {"fig10d", &c2d},
        {"fig10e", &c6a}, {"fig10f", &c6b}, {"fig10g", &c9a}, {"fig10h", &c9b}};
    for (auto [id, base] : mirror_bases)
        t.push_back(detail::mirror_family(
            id, "same base with mirror reflectivity R = 1, 0.9, 0", *base, 40.0));

    // --- N = 6 loss families ----------------------------------------------
    t.push_back(ext_family("fig11a", "N=6 divisor-N beat under non-radiative loss", c6a));
    t.push_back(ext_family("fig11b", "N=6 divisor-(N+1) beat under non-radiative loss", c6b));
    t.push_back(dephasing_family("fig11c", "N=6 divisor-N beat under pure dephasing", c6a));
    t.push_back(dephasing_family("fig11d", "N=6 divisor-(N+1) beat under pure dephasing", c6b));

    // --- three-mode point-count sweep --------------------------------------
    const auto p12a = three_mode_parameters(6, 4, 1, CP::Even2kPi, DV::DivN);
    const auto p12b = three_mode_parameters(7, 4, 1, CP::Even2kPi, DV::DivN);
    const auto p12c = three_mode_parameters(9, 8, 4, CP::OddPi, DV::DivN);
    const auto p12d = three_mode_parameters(10, 8, 4, CP::OddPi, DV::DivN);
    dyn("fig12a", "N=6 three-mode beat, even-multiple center",
        make_config(6, p12a.omega0_tau0, p12a.gamma_tau0));
    dyn("fig12b", "N=7 three-mode beat, even-multiple center",
        make_config(7, p12b.omega0_tau0, p12b.gamma_tau0));
    dyn("fig12c", "N=9 three-mode beat, odd-multiple center",
        make_config(9, p12c.omega0_tau0, p12c.gamma_tau0));
    dyn("fig12d", "N=10 three-mode beat, odd-multiple center",
        make_config(10, p12d.omega0_tau0, p12d.gamma_tau0));

    // --- N = 3 loss families ------------------------------------------------
    const std::pair<const char*, const SystemConfig*> n3_bases[] = {
        {"a", &c2a}, {"b", &c2b}, {"c", &c2c}, {"d", &c2d}};
    for (auto [suffix, base] : n3_bases)
        t.push_back(ext_family(std::string("fig13") + suffix,
                               "N=3 trapped state under non-radiative loss", *base));
    const std::pair<const char*, const SystemConfig*> n3_deph[] = {
        {"e", &c2a}, {"f", &c2b}, {"g", &c2c}, {"h", &c2d}};
    for (auto [suffix, base] : n3_deph)
        t.push_back(dephasing_family(std::string("fig13") + suffix,
                                     "N=3 trapped state under pure dephasing", *base));

    // --- three-mode beats on the divisor-(N+1) grid -------------------------
    const auto p14a = three_mode_parameters(5, 4, 1, CP::Even2kPi, DV::DivNPlus1);
    const auto p14b = three_mode_parameters(8, 8, 4, CP::OddPi, DV::DivNPlus1);
    const SystemConfig c14a = make_config(5, p14a.omega0_tau0, p14a.gamma_tau0);
    const SystemConfig c14b = make_config(8, p14b.omega0_tau0, p14b.gamma_tau0);
    dyn("fig14a", "N=5 three-mode beat on the divisor-(N+1) grid, even center", c14a);
    dyn("fig14b", "N=8 three-mode beat on the divisor-(N+1) grid, odd center", c14b);

    // --- three-mode loss families --------------------------------------------
    const std::pair<const char*, const SystemConfig*> tm_bases[] = {
        {"a", &c9a}, {"b", &c9b}, {"c", &c14a}, {"d", &c14b}};
    for (auto [suffix, base] : tm_bases)
        t.push_back(ext_family(std::string("fig15") + suffix,
                               "three-mode beat under non-radiative loss", *base));
    const std::pair<const char*, const SystemConfig*> tm_deph[] = {
        {"e", &c9a}, {"f", &c9b}, {"g", &c14a}, {"h", &c14b}};
    for (auto [suffix, base] : tm_deph)
        t.push_back(dephasing_family(std::string("fig15") + suffix,
                                     "three-mode beat under pure dephasing", *base));

    // --- field views of the divisor-(N+1) three-mode beats --------------------
    t.push_back(field_map("fig16a", "field map of the N=5 three-mode beat", c14a, 20.0));
    t.push_back(field_snapshot("fig16b", "field profile of the N=5 three-mode beat", c14a, 20.0));
    t.push_back(field_map("fig16c", "field map of the N=8 three-mode beat", c14b, 20.0));
    t.push_back(field_snapshot("fig16d", "field profile of the N=8 three-mode beat", c14b, 20.0));

    return t;
}

} // namespace detail

inline const std::vector<Preset>& preset_table() {
    static const std::vector<Preset> table = detail::build_table();
    return table;
}

inline const Preset& find_preset(std::string_view id) {
    for (const auto& p : preset_table())
        if (p.id == id) return p;
    throw config_error("unknown preset: " + std::string(id));
}

} // namespace gaw
