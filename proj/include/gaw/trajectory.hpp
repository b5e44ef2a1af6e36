// trajectory.hpp — sampled amplitude history with cubic-Hermite dense output,
// plus the Gaussian phase-noise realization consumed by the stochastic
// integrator. Samples are kept in the frame rotating at omega0 (where the
// integrator works); lab-frame values are recovered with an exact phase, so
// off-grid lookups stay accurate however fast the carrier oscillates.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "common.hpp"

namespace gaw {

enum class Frame { Lab, Rotating };

struct Trajectory {
    int steps_per_tau0{0};
    double omega0_tau0{0.0};
    Frame frame{Frame::Lab};
    // rotating-frame samples u_j = exp(+i omega0 t_j) eps(t_j) and the
    // one-sided derivatives used as Hermite tangents. The derivative jumps
    // where a delayed term switches on, hence two arrays.
    std::vector<cplx> rot;
    std::vector<cplx> rot_deriv_out; // right-limit at node j
    std::vector<cplx> rot_deriv_in;  // left-limit at node j

    std::size_t size() const { return rot.size(); }
    double step() const { return 1.0 / steps_per_tau0; }
    double time(std::size_t j) const { return static_cast<double>(j) / steps_per_tau0; }
    double horizon() const { return rot.empty() ? 0.0 : time(rot.size() - 1); }
    double abs2(std::size_t j) const { return std::norm(rot[j]); }

    // sample in the trajectory's own frame
    cplx value(std::size_t j) const {
        if (frame == Frame::Rotating) return rot[j];
        return std::exp(-iu * omega0_tau0 * time(j)) * rot[j];
    }

    // rotating-frame amplitude at arbitrary t in [0, horizon]
    cplx rot_at(double t) const {
        const double x = t * steps_per_tau0;
        auto j = static_cast<std::size_t>(x);
        if (j >= rot.size() - 1) return rot.back();
        const double th = x - static_cast<double>(j);
        if (th == 0.0) return rot[j];
        const double h = step();
        const double th2 = th * th, th3 = th2 * th;
        return (2.0 * th3 - 3.0 * th2 + 1.0) * rot[j] +
               (th3 - 2.0 * th2 + th) * h * rot_deriv_out[j] +
               (-2.0 * th3 + 3.0 * th2) * rot[j + 1] +
               (th3 - th2) * h * rot_deriv_in[j + 1];
    }

    // lab-frame amplitude at arbitrary t; zero before the initial time
    cplx eps_lab_at(double t) const {
        if (t < 0.0) return {0.0, 0.0};
        return std::exp(-iu * omega0_tau0 * t) * rot_at(t);
    }
};

// ------------------------- phase noise -------------------------
// Per-step Gaussian phase increments DW_j with variance 2*deltaomega*h.
// Drawn through a hand-rolled Box-Muller on top of mt19937_64 so that a seed
// means the same numbers on every standard library.

struct NoiseRealization {
    std::uint64_t seed{0};
    std::vector<double> increments;

    static NoiseRealization generate(std::uint64_t seed, std::size_t n_steps,
                                     double step_variance) {
        NoiseRealization nr;
        nr.seed = seed;
        if (step_variance <= 0.0 || n_steps == 0) return nr; // noise-free
        nr.increments.resize(n_steps);
        std::mt19937_64 rng(seed);
        const double sigma = std::sqrt(step_variance);
        auto uniform = [&rng]() {
            return (rng() >> 11) * (1.0 / 9007199254740992.0); // [0,1)
        };
        for (std::size_t i = 0; i < n_steps; i += 2) {
            const double u1 = 1.0 - uniform(); // (0,1]
            const double u2 = uniform();
            const double rad = std::sqrt(-2.0 * std::log(u1));
            nr.increments[i] = sigma * rad * std::cos(2.0 * pi * u2);
            if (i + 1 < n_steps) nr.increments[i + 1] = sigma * rad * std::sin(2.0 * pi * u2);
        }
        return nr;
    }
};

} // namespace gaw
