// integrator.hpp — method-of-steps integration of the delayed equations of
// motion. Fixed step h = tau0/M keeps every delay on the grid, classical RK4
// advances the smooth pieces, and half-step history values come from cubic
// Hermite interpolation with one-sided tangents, so the derivative jumps at
// t = d*tau0 never leak into a stencil. Work happens in the frame rotating
// at omega0: each delayed coefficient picks up exp(+i omega0 d tau0) and the
// fast carrier drops out of the state.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "config.hpp"
#include "kernel.hpp"
#include "trajectory.hpp"

namespace gaw {

inline constexpr int min_steps_per_tau0 = 50;

namespace detail {

inline std::int64_t step_count(double horizon, int steps_per_tau0) {
    return static_cast<std::int64_t>(std::ceil(horizon * steps_per_tau0 - 1e-9));
}

inline void check_grid(double horizon, int steps_per_tau0) {
    if (horizon < 0.0) throw horizon_negative("horizon must be >= 0");
    if (steps_per_tau0 < min_steps_per_tau0)
        throw step_too_coarse("steps per tau0 must be >= " +
                              std::to_string(min_steps_per_tau0));
}

// rotating-frame delayed coefficients, folded over channels by delay
struct FoldedKernel {
    cplx a0{};                       // instantaneous coefficient
    std::vector<int> delay_nodes;    // d*M for each delayed term
    std::vector<cplx> coeff;         // matching coefficients (phase included)
};

inline FoldedKernel fold_kernel(const DelayKernel& kernel, double omega0_tau0,
                                double extra_instantaneous_rate, int steps_per_tau0) {
    std::map<int, cplx> by_delay;
    cplx a0{-extra_instantaneous_rate, 0.0};
    for (const auto& e : kernel.entries) {
        if (e.delay == 0)
            a0 += e.coeff;
        else
            by_delay[e.delay] += e.coeff * std::exp(iu * omega0_tau0 *
                                                    static_cast<double>(e.delay));
    }
    FoldedKernel fk;
    fk.a0 = a0;
    for (const auto& [d, c] : by_delay) {
        fk.delay_nodes.push_back(d * steps_per_tau0);
        fk.coeff.push_back(c);
    }
    return fk;
}

} // namespace detail

// ------------------------- single emitter -------------------------

inline Trajectory integrate_stochastic(const SystemConfig& config,
                                       const DelayKernel& kernel, double horizon,
                                       int steps_per_tau0, const NoiseRealization& noise,
                                       Frame frame = Frame::Lab) {
    config.validate();
    detail::check_grid(horizon, steps_per_tau0);
    const int M = steps_per_tau0;
    const auto J = detail::step_count(horizon, M);
    if (!noise.increments.empty() &&
        noise.increments.size() < static_cast<std::size_t>(J))
        throw config_error("noise realization shorter than the run");

    const double h = 1.0 / M;
    const double loss_rate =
        0.5 * config.n_points * config.gamma_tau0 * config.gamma_ext_ratio;
    const auto fk = detail::fold_kernel(kernel, config.omega0_tau0, loss_rate, M);
    const std::size_t nd = fk.delay_nodes.size();

    Trajectory tr;
    tr.steps_per_tau0 = M;
    tr.omega0_tau0 = config.omega0_tau0;
    tr.frame = frame;
    tr.rot.resize(J + 1);
    tr.rot_deriv_out.resize(J + 1);
    tr.rot_deriv_in.resize(J + 1);

    auto& u = tr.rot;
    auto& dout = tr.rot_deriv_out;
    auto& din = tr.rot_deriv_in;
    u[0] = {1.0, 0.0};
    dout[0] = fk.a0 * u[0];
    din[0] = {0.0, 0.0}; // never used: no interval ends at t = 0

    const bool noisy = !noise.increments.empty();
    for (std::int64_t n = 0; n < J; ++n) {
        // history sums shared by the stages of this step
        cplx mid_hist{0.0, 0.0}; // at t_n + h/2
        cplx end_hist{0.0, 0.0}; // at t_{n+1}, delayed terms strictly past only
        cplx end_jump{0.0, 0.0}; // term switching on exactly at t_{n+1}
        for (std::size_t i = 0; i < nd; ++i) {
            const std::int64_t j = n - fk.delay_nodes[i];
            if (j >= 0)
                mid_hist += fk.coeff[i] * (0.5 * (u[j] + u[j + 1]) +
                                           h * 0.125 * (dout[j] - din[j + 1]));
            const std::int64_t je = j + 1;
            if (je > 0)
                end_hist += fk.coeff[i] * u[je];
            else if (je == 0)
                end_jump += fk.coeff[i] * u[0];
        }
        const cplx k1 = dout[n];
        const cplx k2 = fk.a0 * (u[n] + 0.5 * h * k1) + mid_hist;
        const cplx k3 = fk.a0 * (u[n] + 0.5 * h * k2) + mid_hist;
        const cplx k4 = fk.a0 * (u[n] + h * k3) + end_hist;
        cplx next = u[n] + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (noisy) next *= std::exp(-iu * noise.increments[n]);
        u[n + 1] = next;
        din[n + 1] = fk.a0 * next + end_hist;
        dout[n + 1] = din[n + 1] + end_jump;
    }
    return tr;
}

inline Trajectory integrate(const SystemConfig& config, const DelayKernel& kernel,
                            double horizon, int steps_per_tau0,
                            Frame frame = Frame::Lab) {
    return integrate_stochastic(config, kernel, horizon, steps_per_tau0,
                                NoiseRealization{}, frame);
}

inline Trajectory integrate(const SystemConfig& config, double horizon,
                            int steps_per_tau0, Frame frame = Frame::Lab) {
    return integrate(config, build_kernel(config), horizon, steps_per_tau0, frame);
}

// Phase-noise realization matched to a run's grid: variance per step is
// 2 * deltaomega * h with deltaomega = dephasing_ratio * Gamma.
inline NoiseRealization make_noise(const SystemConfig& config, double horizon,
                                   int steps_per_tau0, std::uint64_t seed) {
    detail::check_grid(horizon, steps_per_tau0);
    const auto J = detail::step_count(horizon, steps_per_tau0);
    const double delta_omega = config.dephasing_ratio * config.gamma_tau0;
    return NoiseRealization::generate(seed, static_cast<std::size_t>(J),
                                      2.0 * delta_omega / steps_per_tau0);
}

inline Trajectory integrate_stochastic(const SystemConfig& config,
                                       const DelayKernel& kernel, double horizon,
                                       int steps_per_tau0, std::uint64_t seed,
                                       Frame frame = Frame::Lab) {
    return integrate_stochastic(config, kernel, horizon, steps_per_tau0,
                                make_noise(config, horizon, steps_per_tau0, seed), frame);
}

// ------------------------- ensembles -------------------------

struct EnsembleStats {
    int steps_per_tau0{0};
    int n_traj{0};
    std::uint64_t base_seed{0};
    std::vector<double> mean_abs2;
    std::vector<double> stderr_abs2;

    double time(std::size_t j) const { return static_cast<double>(j) / steps_per_tau0; }
};

// Mean population over n_traj noise realizations seeded base_seed .. +n-1,
// with the per-sample standard error of the mean.
inline EnsembleStats ensemble_average(const SystemConfig& config,
                                      const DelayKernel& kernel, double horizon,
                                      int steps_per_tau0, int n_traj,
                                      std::uint64_t base_seed) {
    if (n_traj < 1) throw config_error("n_traj must be >= 1");
    EnsembleStats st;
    st.steps_per_tau0 = steps_per_tau0;
    st.n_traj = n_traj;
    st.base_seed = base_seed;
    std::vector<double> mean, m2;
    for (int i = 0; i < n_traj; ++i) {
        const auto tr = integrate_stochastic(config, kernel, horizon, steps_per_tau0,
                                             base_seed + static_cast<std::uint64_t>(i),
                                             Frame::Rotating);
        if (i == 0) {
            mean.assign(tr.size(), 0.0);
            m2.assign(tr.size(), 0.0);
        }
        for (std::size_t j = 0; j < tr.size(); ++j) { // Welford update
            const double x = tr.abs2(j);
            const double d = x - mean[j];
            mean[j] += d / (i + 1);
            m2[j] += d * (x - mean[j]);
        }
    }
    st.mean_abs2 = std::move(mean);
    st.stderr_abs2.assign(st.mean_abs2.size(), 0.0);
    if (n_traj > 1)
        for (std::size_t j = 0; j < st.stderr_abs2.size(); ++j)
            st.stderr_abs2[j] = std::sqrt(m2[j] / (n_traj - 1.0) / n_traj);
    return st;
}

// ------------------------- several emitters -------------------------

inline std::vector<Trajectory> integrate_multi(const MultiAtomConfig& config,
                                               const MultiKernel& mk, double horizon,
                                               int steps_per_tau0,
                                               Frame frame = Frame::Lab) {
    config.validate();
    detail::check_grid(horizon, steps_per_tau0);
    const int M = steps_per_tau0;
    const auto J = detail::step_count(horizon, M);
    const std::size_t Q = config.atoms.size();
    const double h = 1.0 / M;

    // per-pair folded kernels and per-emitter instantaneous terms
    std::vector<std::vector<detail::FoldedKernel>> fk(Q);
    std::vector<cplx> a0(Q);
    for (std::size_t q = 0; q < Q; ++q) {
        fk[q].resize(Q);
        for (std::size_t p = 0; p < Q; ++p) {
            fk[q][p] = detail::fold_kernel(mk.kernels[q][p], config.omega0_tau0, 0.0, M);
            if (q != p && fk[q][p].a0 != cplx{0.0, 0.0})
                throw numeric_error("cross blocks cannot carry zero-delay terms");
        }
        const double detuning = config.atoms[q].detuning_ratio * config.gamma_tau0;
        const double dup =
            (config.coupling_mode == CouplingMode::AsPrinted && config.duplicate_detuning)
                ? 2.0
                : 1.0;
        a0[q] = fk[q][q].a0 - iu * (dup * detuning);
    }

    std::vector<Trajectory> trs(Q);
    for (std::size_t q = 0; q < Q; ++q) {
        trs[q].steps_per_tau0 = M;
        trs[q].omega0_tau0 = config.omega0_tau0;
        trs[q].frame = frame;
        trs[q].rot.assign(J + 1, cplx{});
        trs[q].rot_deriv_out.assign(J + 1, cplx{});
        trs[q].rot_deriv_in.assign(J + 1, cplx{});
        trs[q].rot[0] = config.atoms[q].eps0;
    }

    auto rhs_nodes = [&](std::size_t q, std::int64_t n) {
        // delayed node sums at t_{n+1}: strictly-past part and the jump
        cplx end{0.0, 0.0}, jump{0.0, 0.0};
        for (std::size_t p = 0; p < Q; ++p) {
            const auto& f = fk[q][p];
            for (std::size_t i = 0; i < f.delay_nodes.size(); ++i) {
                const std::int64_t je = n + 1 - f.delay_nodes[i];
                if (je > 0)
                    end += f.coeff[i] * trs[p].rot[je];
                else if (je == 0)
                    jump += f.coeff[i] * trs[p].rot[0];
            }
        }
        return std::pair{end, jump};
    };

    for (std::size_t q = 0; q < Q; ++q)
        trs[q].rot_deriv_out[0] = a0[q] * trs[q].rot[0];

    std::vector<cplx> mid(Q), endh(Q), endj(Q), k1(Q), k2(Q), k3(Q), k4(Q);
    for (std::int64_t n = 0; n < J; ++n) {
        for (std::size_t q = 0; q < Q; ++q) {
            cplx m{0.0, 0.0};
            for (std::size_t p = 0; p < Q; ++p) {
                const auto& f = fk[q][p];
                const auto& u = trs[p].rot;
                const auto& dvo = trs[p].rot_deriv_out;
                const auto& dvi = trs[p].rot_deriv_in;
                for (std::size_t i = 0; i < f.delay_nodes.size(); ++i) {
                    const std::int64_t j = n - f.delay_nodes[i];
                    if (j >= 0)
                        m += f.coeff[i] * (0.5 * (u[j] + u[j + 1]) +
                                           h * 0.125 * (dvo[j] - dvi[j + 1]));
                }
            }
            mid[q] = m;
            const auto [e, jmp] = rhs_nodes(q, n);
            endh[q] = e;
            endj[q] = jmp;
            k1[q] = trs[q].rot_deriv_out[n];
        }
        for (std::size_t q = 0; q < Q; ++q)
            k2[q] = a0[q] * (trs[q].rot[n] + 0.5 * h * k1[q]) + mid[q];
        for (std::size_t q = 0; q < Q; ++q)
            k3[q] = a0[q] * (trs[q].rot[n] + 0.5 * h * k2[q]) + mid[q];
        for (std::size_t q = 0; q < Q; ++q)
            k4[q] = a0[q] * (trs[q].rot[n] + h * k3[q]) + endh[q];
        for (std::size_t q = 0; q < Q; ++q) {
            trs[q].rot[n + 1] =
                trs[q].rot[n] + (h / 6.0) * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        for (std::size_t q = 0; q < Q; ++q) {
            trs[q].rot_deriv_in[n + 1] = a0[q] * trs[q].rot[n + 1] + endh[q];
            trs[q].rot_deriv_out[n + 1] = trs[q].rot_deriv_in[n + 1] + endj[q];
        }
    }
    return trs;
}

inline std::vector<Trajectory> integrate_multi(const MultiAtomConfig& config,
                                               double horizon, int steps_per_tau0,
                                               Frame frame = Frame::Lab) {
    return integrate_multi(config, build_multi_kernel(config), horizon, steps_per_tau0,
                           frame);
}

} // namespace gaw
