// spectral.hpp — Laplace-domain analysis of the delayed equation of motion
// for the ideal (perfect mirror, lossless) system. The resolvent is
//
//   1 / D(s),   D(s) = s + i*omega0 + (Gamma/2) [ S1(z) - S2(z) ],
//
// with z = exp(-s*tau0), S1 = sum_{m,n} z^{|m-n|}, S2 = sum_{m,n} z^{m+n}.
// Purely imaginary zeros of D are trapped (bound) modes; residues at simple
// poles give the long-time amplitudes. Both sums collapse to closed geometric
// forms; near z = 1 those forms are evaluated through their exact binomial
// expansion in w = z - 1 to dodge the removable 0/0.
//
// Everything here is dimensionless: s means s*tau0, frequencies mean
// omega*tau0, and rates mean Gamma*tau0.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "config.hpp"

namespace gaw {

// ------------------------- closed delay sums -------------------------

namespace detail {

// exact for the arguments used here (n <= a few hundred)
inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double acc = 1.0;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

// Switch to the binomial expansion once the geometric denominators get shaky.
// The expansion is an exact finite polynomial with positive coefficients, so
// its only failure mode is the (1+|w|)^n term growth; keeping n*|w| <~ 3
// bounds its condition number while the geometric form still has |w|^-3
// cancellation to worry about.
inline double fallback_radius(int n) { return std::min(0.1, 3.0 / n); }

} // namespace detail

struct DelaySums {
    cplx s1, s2;   // sum z^|m-n|, sum z^(m+n)
    cplx ds1, ds2; // d/dz of the above
};

// Closed evaluation of both pair sums and their z-derivatives.
inline DelaySums delay_sums(int n, cplx s) {
    const cplx z = std::exp(-s);
    const cplx w = z - 1.0;
    DelaySums out;
    if (std::abs(w) < detail::fallback_radius(n)) {
        // S1 = 2 sum_i C(n+1, i+2) w^i - n          (exact, positive coefficients)
        // g  = (1 - z^n)/(1 - z) = sum_i C(n, i+1) w^i,  S2 = z^2 g^2
        cplx s1acc = 0.0, ds1acc = 0.0, g = 0.0, dg = 0.0;
        cplx wi = 1.0; // w^i, following i
        for (int i = 0; i < n; ++i) {
            const double c1 = detail::binom(n + 1, i + 2);
            const double cg = detail::binom(n, i + 1);
            s1acc += c1 * wi;
            g += cg * wi;
            if (i + 1 < n) { // derivative terms, one order ahead on the same ladder
                ds1acc += (i + 1.0) * detail::binom(n + 1, i + 3) * wi;
                dg += (i + 1.0) * detail::binom(n, i + 2) * wi;
            }
            wi *= w;
        }
        out.s1 = 2.0 * s1acc - static_cast<double>(n);
        out.ds1 = 2.0 * ds1acc;
        out.s2 = z * z * g * g;
        out.ds2 = 2.0 * z * g * g + 2.0 * z * z * g * dg;
        return out;
    }
    const cplx zn = std::exp(-s * static_cast<double>(n));
    const cplx zn1 = zn * z;
    const cplx d = 1.0 - z;
    const cplx d2 = d * d;
    const double nd = n;
    out.s1 = 2.0 * (nd - (nd + 1.0) * z + zn1) / d2 - nd;
    out.ds1 = 2.0 * ((nd + 1.0) * (zn - 1.0) * d + 2.0 * (nd - (nd + 1.0) * z + zn1)) /
              (d2 * d);
    const cplx u = 1.0 - zn;
    out.s2 = z * z * u * u / d2;
    out.ds2 = 2.0 * z * u * (u - nd * zn) / d2 + 2.0 * z * z * u * u / (d2 * d);
    return out;
}

// D(s) for the ideal system (the Laplace denominator of the amplitude).
inline cplx char_residual(cplx s, const SystemConfig& config) {
    const auto sums = delay_sums(config.n_points, s);
    return s + iu * config.omega0_tau0 + 0.5 * config.gamma_tau0 * (sums.s1 - sums.s2);
}

// dD/ds, used by the Newton search and for residue weights. dz/ds = -z.
inline cplx char_derivative(cplx s, const SystemConfig& config) {
    const auto sums = delay_sums(config.n_points, s);
    const cplx z = std::exp(-s);
    return 1.0 - z * 0.5 * config.gamma_tau0 * (sums.ds1 - sums.ds2);
}

// Residue of 1/D at a simple pole: the long-time weight carried by that pole.
inline cplx residue_weight(cplx s, const SystemConfig& config) {
    return 1.0 / char_derivative(s, config);
}

// ------------------------- pole search -------------------------

struct PoleBox {
    double re_min, re_max;
    double im_min, im_max;
};

inline PoleBox default_pole_box(const SystemConfig& config) {
    return {-3.0 * config.gamma_tau0, 1e-6, -config.omega0_tau0 - 6.0 * pi,
            -config.omega0_tau0 + 6.0 * pi};
}

// Newton iteration seeded on a uniform grid over the box. Seeds that fail to
// converge are dropped; converged roots are deduplicated and kept only if
// they land inside the (slightly padded) box.
inline std::vector<cplx> find_poles(const SystemConfig& config,
                                    const PoleBox& box, int grid = 60) {
    config.validate();
    std::vector<cplx> poles;
    const double pad = 1e-6;
    const double dedup = 1e-6;
    for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
            cplx s{box.re_min + (box.re_max - box.re_min) * (a + 0.5) / grid,
                   box.im_min + (box.im_max - box.im_min) * (b + 0.5) / grid};
            bool ok = false;
            for (int it = 0; it < 80; ++it) {
                const cplx f = char_residual(s, config);
                const cplx df = char_derivative(s, config);
                if (std::abs(df) < 1e-14) break;
                const cplx step = f / df;
                s -= step;
                if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) break;
                if (std::abs(step) < 1e-13 * (1.0 + std::abs(s))) {
                    ok = true;
                    break;
                }
            }
            if (!ok) continue;
            if (std::abs(char_residual(s, config)) > 1e-10) continue;
            if (s.real() < box.re_min - pad || s.real() > box.re_max + pad ||
                s.imag() < box.im_min - pad || s.imag() > box.im_max + pad)
                continue;
            bool dup = false;
            for (const auto& p : poles)
                if (std::abs(p - s) < dedup) {
                    dup = true;
                    break;
                }
            if (!dup) poles.push_back(s);
        }
    }
    std::sort(poles.begin(), poles.end(), [](const cplx& x, const cplx& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() < y.imag();
    });
    return poles;
}

inline std::vector<cplx> find_poles(const SystemConfig& config) {
    return find_poles(config, default_pole_box(config));
}

// ------------------------- trapped-mode conditions -------------------------
// A purely imaginary zero s = -i*omega exists in four families:
//   (a) omega0*tau0 = 2k*pi                      -> mode at omega0
//   (b) omega0*tau0 = (2k+1)*pi                  -> mode at omega0
//   (c) omega*tau0 = 2k*pi/N     with omega0*tau0 = 2k*pi/N - (N G/2) cot(k pi/N)
//   (d) omega*tau0 = 2k*pi/(N+1) with the same form at divisor N+1.

enum class ModeSource { Cond2kPi, CondOddPi, CondN, CondNPlus1 };

enum class DivisorVariant { DivN, DivNPlus1 };

inline int divisor_of(int n_points, DivisorVariant v) {
    return v == DivisorVariant::DivN ? n_points : n_points + 1;
}

// omega0*tau0 pinning the divisor-grid mode k (families (c)/(d) above).
inline double bound_state_frequency(int n_points, int k, double gamma_tau0,
                                    DivisorVariant variant) {
    if (n_points < 1) throw config_error("n_points must be >= 1");
    if (k < 1) throw config_error("mode index k must be >= 1");
    const int d = divisor_of(n_points, variant);
    if (k % d == 0)
        throw cotangent_pole("mode index k multiple of the divisor: cot(k pi/D) diverges");
    const double x = k * pi / d;
    return 2.0 * k * pi / d - 0.5 * d * gamma_tau0 / std::tan(x);
}

// ------------------------- coexistence synthesis -------------------------

struct TwoModeParams {
    double omega0_tau0{};
    double gamma_tau0{};
    int k1{}, k2{};            // ascending
    double freq1{}, freq2{};   // omega*tau0 of the two trapped modes
};

// Parameters making divisor-grid modes k1 and k2 coexist with equal pinning.
inline TwoModeParams two_mode_parameters(int n_points, int k1, int k2,
                                         DivisorVariant variant) {
    if (n_points < 1) throw config_error("n_points must be >= 1");
    if (k1 == k2) throw infeasible("two distinct mode indices required");
    if (k1 > k2) std::swap(k1, k2);
    if (k1 < 1) throw config_error("mode indices must be >= 1");
    const int d = divisor_of(n_points, variant);
    if (k1 % d == 0 || k2 % d == 0)
        throw cotangent_pole("mode index multiple of the divisor: cot(k pi/D) diverges");
    const double c1 = 1.0 / std::tan(k1 * pi / d);
    const double c2 = 1.0 / std::tan(k2 * pi / d);
    if (c1 == c2) throw infeasible("degenerate pair: equal cotangents");
    TwoModeParams p;
    p.k1 = k1;
    p.k2 = k2;
    p.gamma_tau0 = 4.0 * (k1 - k2) * pi / (d * d) / (c1 - c2);
    if (!(p.gamma_tau0 > 0.0))
        throw infeasible("pair requires a non-positive rate");
    p.omega0_tau0 = 2.0 * k1 * pi / d - (2.0 * (k1 - k2) * pi / d) * c1 / (c1 - c2);
    p.freq1 = 2.0 * k1 * pi / d;
    p.freq2 = 2.0 * k2 * pi / d;
    return p;
}

enum class CenterParity { Even2kPi, OddPi };

struct ThreeModeParams {
    double omega0_tau0{};
    double gamma_tau0{};
    int k1{}, k2{};                 // divisor-grid indices of the side modes, ascending
    double freq_center{};           // omega*tau0 of the center mode (= omega0)
    double freq_lower{}, freq_upper{};
    double beat{};                  // side-mode detuning from the center, omega*tau0
};

// Parameters placing a center mode at omega0 (even or odd multiple of pi)
// with two divisor-grid side modes symmetric about it.
//
// Even parity: omega0*tau0 = 2*k0*pi, sides at indices D*k0 +- q with
//   Gamma*tau0 = q (4 pi/D^2) tan(q pi/D),  1 <= q < D/2.
// Odd parity: omega0*tau0 = (2*k0+1)*pi. The side indices sit at
//   (2*k0+1)*D/2 +- qt where qt = D - q (D even) or D - q + 1/2 (D odd) so
//   that the indices stay integral; then Gamma*tau0 = -(4 pi/D^2) qt cot(qt pi/D),
//   positive because qt pi/D lies in (pi/2, pi).
inline ThreeModeParams three_mode_parameters(int n_points, int k0, int q,
                                             CenterParity parity,
                                             DivisorVariant variant) {
    if (n_points < 1) throw config_error("n_points must be >= 1");
    if (k0 < 1) throw config_error("center index k0 must be >= 1");
    const int d = divisor_of(n_points, variant);
    if (q < 1 || 2 * q >= d)
        throw infeasible("side offset q must satisfy 1 <= q < D/2");
    ThreeModeParams p;
    if (parity == CenterParity::Even2kPi) {
        p.omega0_tau0 = 2.0 * k0 * pi;
        p.gamma_tau0 = q * (4.0 * pi / (d * d)) * std::tan(q * pi / d);
        p.k1 = d * k0 - q;
        p.k2 = d * k0 + q;
        p.beat = 2.0 * q * pi / d;
    } else {
        const double qt = (d % 2 == 0) ? (d - q) : (d - q + 0.5);
        p.omega0_tau0 = (2.0 * k0 + 1.0) * pi;
        p.gamma_tau0 = -(4.0 * pi / (d * d)) * qt / std::tan(qt * pi / d);
        const double center_idx = 0.5 * (2.0 * k0 + 1.0) * d;
        p.k1 = static_cast<int>(std::lround(center_idx - qt));
        p.k2 = static_cast<int>(std::lround(center_idx + qt));
        p.beat = 2.0 * qt * pi / d;
    }
    if (!(p.gamma_tau0 > 0.0)) throw infeasible("offset yields a non-positive rate");
    if (p.k1 < 1) throw infeasible("lower side index fell below 1");
    p.freq_center = p.omega0_tau0;
    p.freq_lower = p.omega0_tau0 - p.beat;
    p.freq_upper = p.omega0_tau0 + p.beat;
    return p;
}

// ------------------------- classification -------------------------

enum class CaseLabel { Decaying, OneMode, TwoMode, ThreeMode };

struct Mode {
    double omega_tau0{};
    cplx weight{};     // residue of 1/D at -i*omega (real for trapped modes)
    ModeSource source{ModeSource::Cond2kPi};
    int k{};           // family index (multiple of pi, or divisor-grid index)
    double residual{}; // |D(-i*omega)|, recorded for auditing
};

struct ModeSet {
    CaseLabel case_label{CaseLabel::Decaying};
    std::vector<Mode> modes; // ascending frequency
};

namespace detail {

inline double cond_tolerance(double omega0_tau0) {
    return 1e-6 * std::max(pi, std::abs(omega0_tau0));
}

struct KWindow {
    int lo, hi;
};

inline KWindow k_window(double omega0_tau0, int divisor) {
    const double lo = (omega0_tau0 - 4.0 * pi) * divisor / (2.0 * pi);
    const double hi = (omega0_tau0 + 4.0 * pi) * divisor / (2.0 * pi);
    return {std::max(1, static_cast<int>(std::floor(lo))),
            static_cast<int>(std::ceil(hi))};
}

} // namespace detail

inline ModeSet classify(const SystemConfig& config) {
    config.validate();
    const double w0 = config.omega0_tau0;
    const double g = config.gamma_tau0;
    const int n = config.n_points;
    const double tol = detail::cond_tolerance(w0);

    std::vector<Mode> found;
    auto add_mode = [&](double omega, ModeSource src, int k) {
        for (const auto& m : found)
            if (std::abs(m.omega_tau0 - omega) < 1e-9) return; // same pole, keep first
        Mode m;
        m.omega_tau0 = omega;
        m.source = src;
        m.k = k;
        const cplx s{0.0, -omega};
        m.residual = std::abs(char_residual(s, config));
        m.weight = residue_weight(s, config);
        found.push_back(m);
    };

    // center families: omega0 itself on an even or odd multiple of pi
    {
        const double ratio = w0 / (2.0 * pi);
        const int k = static_cast<int>(std::lround(ratio));
        if (k >= 1 && std::abs(w0 - 2.0 * k * pi) < tol)
            add_mode(w0, ModeSource::Cond2kPi, k);
    }
    {
        const double ratio = (w0 / pi - 1.0) / 2.0;
        const int k = static_cast<int>(std::lround(ratio));
        if (k >= 0 && std::abs(w0 - (2.0 * k + 1.0) * pi) < tol)
            add_mode(w0, ModeSource::CondOddPi, k);
    }
    // divisor-grid families
    for (const auto variant : {DivisorVariant::DivN, DivisorVariant::DivNPlus1}) {
        const int d = divisor_of(n, variant);
        const auto win = detail::k_window(w0, d);
        const ModeSource src =
            variant == DivisorVariant::DivN ? ModeSource::CondN : ModeSource::CondNPlus1;
        for (int k = win.lo; k <= win.hi; ++k) {
            if (k % d == 0) continue;
            const double pinned = bound_state_frequency(n, k, g, variant);
            if (std::abs(w0 - pinned) < tol)
                add_mode(2.0 * k * pi / d, src, k);
        }
    }

    std::sort(found.begin(), found.end(),
              [](const Mode& a, const Mode& b) { return a.omega_tau0 < b.omega_tau0; });
    ModeSet set;
    set.modes = std::move(found);
    switch (set.modes.size()) {
        case 0: set.case_label = CaseLabel::Decaying; break;
        case 1: set.case_label = CaseLabel::OneMode; break;
        case 2: set.case_label = CaseLabel::TwoMode; break;
        default: set.case_label = CaseLabel::ThreeMode; break;
    }
    return set;
}

// Rotating-frame validity check: the divisor-grid pinning shifts omega0 by
// (D Gamma/2) cot(k pi/D); once that shift is a noticeable fraction of omega0
// the two-level/rotating-frame modelling is suspect. Returns a message for
// the worst offender with ratio >= 0.1, nothing otherwise.
inline std::optional<std::string> rwa_warning(const SystemConfig& config) {
    const double w0 = config.omega0_tau0;
    double worst = 0.0;
    int worst_k = 0, worst_d = 0;
    for (const auto variant : {DivisorVariant::DivN, DivisorVariant::DivNPlus1}) {
        const int d = divisor_of(config.n_points, variant);
        const auto win = detail::k_window(w0, d);
        for (int k = win.lo; k <= win.hi; ++k) {
            if (k % d == 0) continue;
            const double pinned = bound_state_frequency(config.n_points, k,
                                                        config.gamma_tau0, variant);
            if (std::abs(w0 - pinned) >= detail::cond_tolerance(w0)) continue;
            const double ratio =
                d * config.gamma_tau0 * std::abs(1.0 / std::tan(k * pi / d)) / (2.0 * w0);
            if (ratio > worst) {
                worst = ratio;
                worst_k = k;
                worst_d = d;
            }
        }
    }
    if (worst >= 0.1)
        return "frequency pinning shift for mode k=" + std::to_string(worst_k) +
               " (divisor " + std::to_string(worst_d) + ") is " + std::to_string(worst) +
               " of omega0; rotating-frame model marginal";
    return std::nullopt;
}

} // namespace gaw
