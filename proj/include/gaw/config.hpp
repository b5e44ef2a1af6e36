// config.hpp — system parameters for one or several multi-point emitters
// coupled to a semi-infinite waveguide terminated by a mirror of reflectivity
// R. The emitter touches the line at n_points equally spaced positions
// x = m*x0 (m = 1..n_points); tau0 = x0/v is the single-hop delay.
#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "common.hpp"

namespace gaw {

struct SystemConfig {
    int n_points{1};          // coupling points N
    double omega0_tau0{2.0 * pi}; // transition frequency, radians per tau0
    double gamma_tau0{0.1 * pi};  // per-point emission rate, radians per tau0
    double reflectivity{1.0};     // mirror power reflectivity R in [0,1]
    double gamma_ext_ratio{0.0};  // external loss per point, units of Gamma
    double dephasing_ratio{0.0};  // white-noise dephasing rate, units of Gamma

    // Complex backward-reflection amplitude of the mirror; |r|^2 = R.
    cplx mirror_r() const {
        double R = reflectivity;
        return {R, std::sqrt(R * (1.0 - R))};
    }

    bool ideal() const {
        return reflectivity == 1.0 && gamma_ext_ratio == 0.0 && dephasing_ratio == 0.0;
    }

    void validate() const {
        if (n_points < 1)
            throw config_error("n_points must be >= 1");
        if (!(omega0_tau0 > 0.0) || !std::isfinite(omega0_tau0))
            throw config_error("omega0_tau0 must be positive and finite");
        if (gamma_tau0 < 0.0 || !std::isfinite(gamma_tau0))
            throw config_error("gamma_tau0 must be >= 0 and finite");
        if (reflectivity < 0.0 || reflectivity > 1.0)
            throw config_error("reflectivity must lie in [0,1]");
        if (gamma_ext_ratio < 0.0 || !std::isfinite(gamma_ext_ratio))
            throw config_error("gamma_ext_ratio must be >= 0 and finite");
        if (dephasing_ratio < 0.0 || !std::isfinite(dephasing_ratio))
            throw config_error("dephasing_ratio must be >= 0 and finite");
    }
};

inline SystemConfig make_config(int n_points, double omega0_tau0, double gamma_tau0,
                                double reflectivity = 1.0, double gamma_ext_ratio = 0.0,
                                double dephasing_ratio = 0.0) {
    SystemConfig c{n_points, omega0_tau0, gamma_tau0, reflectivity, gamma_ext_ratio,
                   dephasing_ratio};
    c.validate();
    return c;
}

// ------------------------- several emitters -------------------------
// Emitter q occupies the next block of coupling points along the line:
// absolute positions l_q+1 .. l_q+N_q with l_q = N_1 + ... + N_{q-1}.

enum class CouplingMode {
    AsPrinted,        // each emitter keeps only its own block of delay terms
    FullCrossCoupling // retarded cross terms between all blocks
};

struct AtomSpec {
    int n_points{1};
    double detuning_ratio{0.0}; // detuning from omega0, units of Gamma
    cplx eps0{1.0, 0.0};        // initial amplitude
};

struct MultiAtomConfig {
    std::vector<AtomSpec> atoms;
    double omega0_tau0{2.0 * pi};
    double gamma_tau0{0.1 * pi};
    double reflectivity{1.0};
    CouplingMode coupling_mode{CouplingMode::FullCrossCoupling};
    // Literal-transcription toggle: apply the detuning twice in AsPrinted
    // mode (the block-diagonal equations repeat the -i*delta term).
    bool duplicate_detuning{false};

    cplx mirror_r() const {
        double R = reflectivity;
        return {R, std::sqrt(R * (1.0 - R))};
    }

    // First absolute coupling index minus one for each block (l_q), strictly
    // increasing by construction.
    std::vector<int> offsets() const {
        std::vector<int> l(atoms.size());
        int acc = 0;
        for (std::size_t q = 0; q < atoms.size(); ++q) {
            l[q] = acc;
            acc += atoms[q].n_points;
        }
        return l;
    }

    int total_points() const {
        int acc = 0;
        for (const auto& a : atoms) acc += a.n_points;
        return acc;
    }

    void validate() const {
        if (atoms.empty())
            throw config_error("at least one emitter required");
        for (const auto& a : atoms)
            if (a.n_points < 1)
                throw config_error("every emitter needs n_points >= 1");
        if (!(omega0_tau0 > 0.0) || !std::isfinite(omega0_tau0))
            throw config_error("omega0_tau0 must be positive and finite");
        if (gamma_tau0 < 0.0 || !std::isfinite(gamma_tau0))
            throw config_error("gamma_tau0 must be >= 0 and finite");
        if (reflectivity < 0.0 || reflectivity > 1.0)
            throw config_error("reflectivity must lie in [0,1]");
        double norm = 0.0;
        for (const auto& a : atoms) norm += std::norm(a.eps0);
        if (std::abs(norm - 1.0) > 1e-12)
            throw config_error("initial amplitudes must satisfy sum |eps0|^2 = 1");
    }
};

} // namespace gaw
