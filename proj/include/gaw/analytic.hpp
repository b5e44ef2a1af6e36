// analytic.hpp — closed-form long-time amplitudes. Once the decaying part of
// the motion has died out, the amplitude is a sum over trapped modes,
// eps(t) -> sum_k A_k exp(-i omega_k t), with real weights A_k given by the
// residues of the resolvent. The four mode families admit compact weights:
//
//   center on an even multiple of pi:  A = 1 / (1 + (G/2) sum [(m+n) - |m-n|])
//   center on an odd multiple of pi:   A = 1 / (1 + (G/2) sum [(-1)^(m+n)(m+n)
//                                                   - (-1)^(m-n)|m-n|])
//   divisor-grid mode at theta = 2k pi/D:
//                                      A = 2 sin^2(theta/2)
//                                          / (2 sin^2(theta/2) + D*G)
//
// (G = Gamma*tau0, D = N or N+1). Sums run over m,n = 1..N.
#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "common.hpp"
#include "config.hpp"
#include "spectral.hpp"

namespace gaw {

namespace detail {

inline double plateau_sum_plain(int n) {
    double acc = 0.0;
    for (int m = 1; m <= n; ++m)
        for (int k = 1; k <= n; ++k) acc += (m + k) - std::abs(m - k);
    return acc;
}

inline double plateau_sum_alternating(int n) {
    double acc = 0.0;
    for (int m = 1; m <= n; ++m)
        for (int k = 1; k <= n; ++k) {
            const int sgn = ((m + k) % 2 == 0) ? 1 : -1; // (-1)^(m+k) = (-1)^|m-k|
            acc += sgn * ((m + k) - std::abs(m - k));
        }
    return acc;
}

} // namespace detail

// Long-time weight of the single trapped mode selected by `source`. Throws
// condition_not_met unless the configuration pins exactly one mode of that
// family.
inline double static_amplitude(const SystemConfig& config, ModeSource source) {
    const auto set = classify(config);
    const Mode* match = nullptr;
    for (const auto& m : set.modes) {
        if (m.source != source) continue;
        if (match) throw condition_not_met("more than one mode of this family is pinned");
        match = &m;
    }
    if (!match) throw condition_not_met("configuration does not pin a mode of this family");
    const double g = config.gamma_tau0;
    switch (source) {
        case ModeSource::Cond2kPi:
            return 1.0 / (1.0 + 0.5 * g * detail::plateau_sum_plain(config.n_points));
        case ModeSource::CondOddPi:
            return 1.0 / (1.0 + 0.5 * g * detail::plateau_sum_alternating(config.n_points));
        case ModeSource::CondN:
        case ModeSource::CondNPlus1: {
            const int d = divisor_of(config.n_points,
                                     source == ModeSource::CondN
                                         ? DivisorVariant::DivN
                                         : DivisorVariant::DivNPlus1);
            const double s2 = 2.0 * std::pow(std::sin(match->k * pi / d), 2.0);
            return s2 / (s2 + d * g);
        }
    }
    throw condition_not_met("unknown mode family");
}

// ------------------------- superpositions -------------------------

struct LongTimeAmplitude {
    ModeSet modes;

    // lab-frame amplitude at time t (units of tau0)
    cplx evaluate(double t) const {
        cplx acc = 0.0;
        for (const auto& m : modes.modes)
            acc += m.weight * std::exp(-iu * m.omega_tau0 * t);
        return acc;
    }
};

inline cplx multi_mode_amplitude(const ModeSet& modes, double t) {
    return LongTimeAmplitude{modes}.evaluate(t);
}

// ------------------------- beat envelope -------------------------
// For a three-mode set with sides at omega0 +- Y the population is
//   |eps|^2 = sum A^2 + 2 A0 (A1 + A2) cos(Y t) + 2 A1 A2 cos(2 Y t),
// i.e. a slow envelope riding on a half-period ripple.

struct EnvelopeMetrics {
    double mean{};      // sum of squared weights
    double amp_slow{};  // coefficient of cos(Y t)
    double amp_fast{};  // coefficient of cos(2 Y t)
    double delta_a{};   // |amp_slow - amp_fast|
    double beat{};      // Y, radians per tau0
};

inline EnvelopeMetrics envelope_metrics(const ModeSet& set) {
    if (set.case_label != CaseLabel::ThreeMode || set.modes.size() != 3)
        throw wrong_case("envelope metrics need a three-mode set");
    const Mode* center = nullptr;
    for (const auto& m : set.modes)
        if (m.source == ModeSource::Cond2kPi || m.source == ModeSource::CondOddPi)
            center = &m;
    if (!center) throw wrong_case("three-mode set lacks a pi-multiple center mode");
    const Mode& lo = set.modes.front();
    const Mode& hi = set.modes.back();
    if (&lo == center || &hi == center)
        throw wrong_case("center mode is not between the side modes");
    const double y1 = center->omega_tau0 - lo.omega_tau0;
    const double y2 = hi.omega_tau0 - center->omega_tau0;
    if (std::abs(y1 - y2) > 1e-9)
        throw wrong_case("side modes are not symmetric about the center");
    EnvelopeMetrics em;
    em.beat = 0.5 * (y1 + y2);
    const double a0 = center->weight.real(), a1 = lo.weight.real(),
                 a2 = hi.weight.real();
    em.mean = a0 * a0 + a1 * a1 + a2 * a2;
    em.amp_slow = 2.0 * a0 * (a1 + a2);
    em.amp_fast = 2.0 * a1 * a2;
    em.delta_a = std::abs(em.amp_slow - em.amp_fast);
    return em;
}

// ------------------------- residue reconstruction -------------------------
// Sum over resolvent poles (trapped and decaying alike): valid once the
// truncated far poles have decayed, i.e. away from t = 0.
inline cplx residue_amplitude(const std::vector<cplx>& poles, const SystemConfig& config,
                              double t) {
    cplx acc = 0.0;
    for (const auto& s : poles) acc += std::exp(s * t) * residue_weight(s, config);
    return acc;
}

} // namespace gaw
