// field.hpp — real-space field radiated by the coupling points. With x in
// units of x0 and t in units of tau0, the dimensionless field amplitude is
//
//   phi(x,t) = -(i/sqrt2) sum_m [ eps(t - |x-m|) Theta(t - |x-m|)
//                                 - r eps(t - (x+m)) Theta(t - (x+m)) ],
//
// the two terms being the wave radiated straight to the observation point and
// the wave bounced off the mirror. Intensities are P = |phi|^2; the excitation
// balance is |eps(t)|^2 + Gamma*tau0 * integral P dx. Scaling the mirror term
// by r < 1 extrapolates the ideal-mirror expression to lossy terminations;
// treat those intensity maps as exploratory rather than exact.
#pragma once

#include <cmath>
#include <vector>

#include "common.hpp"
#include "config.hpp"
#include "trajectory.hpp"

namespace gaw {

inline cplx field_amplitude(const Trajectory& traj, double x, double t,
                            const SystemConfig& config) {
    if (x < 0.0) throw config_error("x must be >= 0 (mirror sits at x = 0)");
    if (t < 0.0 || t > traj.horizon() + 1e-12)
        throw history_too_short("field time outside the integrated history");
    const cplx r = config.mirror_r();
    cplx acc{0.0, 0.0};
    for (int m = 1; m <= config.n_points; ++m) {
        const double td = t - std::abs(x - m); // direct ray
        if (td >= 0.0) acc += traj.eps_lab_at(td);
        const double tm = t - (x + m); // mirror ray
        if (tm >= 0.0) acc -= r * traj.eps_lab_at(tm);
    }
    return -iu * std::sqrt(0.5) * acc;
}

struct FieldMap {
    std::vector<double> x_grid; // units of x0
    std::vector<double> t_grid; // units of tau0
    std::vector<double> values; // row-major: values[ti * x_grid.size() + xi] >= 0
    std::vector<double> norm_series; // |eps|^2 + Gamma*tau0 * trapz_x P per row

    double at(std::size_t ti, std::size_t xi) const {
        return values[ti * x_grid.size() + xi];
    }
};

inline std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw config_error("bad grid range");
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    g.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.push_back(lo + step * i);
    return g;
}

namespace detail {

// P(.,t) is smooth except where some ray argument t-|x-m| or t-(x+m) crosses
// an integer knot of eps (a front at knot 0, a derivative kink at the rest),
// plus the |x-m| corners. All of those positions are known in closed form.
inline std::vector<double> row_breakpoints(const SystemConfig& config, double t,
                                           double x_lo, double x_hi) {
    std::vector<double> b;
    const int kmax = static_cast<int>(std::floor(t));
    for (int m = 1; m <= config.n_points; ++m) {
        for (int k = 0; k <= kmax; ++k) {
            const double age = t - k;
            for (double x : {m + age, m - age, age - m})
                if (x > x_lo && x < x_hi) b.push_back(x);
        }
        const double xm = m;
        if (xm > x_lo && xm < x_hi) b.push_back(xm);
    }
    std::sort(b.begin(), b.end());
    return b;
}

// Trapezoid over [x_lo, x_hi] split at the breakpoints, with one-sided
// evaluation on each smooth segment so the front jumps cost nothing.
inline double row_integral(const Trajectory& traj, const SystemConfig& config,
                           double t, const std::vector<double>& x_grid) {
    std::vector<double> edges = row_breakpoints(config, t, x_grid.front(), x_grid.back());
    edges.insert(edges.end(), x_grid.begin(), x_grid.end());
    std::sort(edges.begin(), edges.end());
    constexpr double delta = 1e-9; // inward nudge resolving the Theta gates
    double acc = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        const double a = edges[i - 1], b = edges[i];
        if (b - a < 3.0 * delta) continue;
        const double pa = std::norm(field_amplitude(traj, a + delta, t, config));
        const double pb = std::norm(field_amplitude(traj, b - delta, t, config));
        acc += 0.5 * (pa + pb) * (b - a);
    }
    return acc;
}

// Beyond the last coupling point the field is purely outgoing: P depends on
// the retarded time u = t - x only, so the part of the light cone past the
// grid reduces to a time integral over the stored trajectory. Plain
// node-trapezoid here, an estimate rather than a certified value.
inline double tail_integral(const Trajectory& traj, const SystemConfig& config,
                            double t, double x_hi) {
    const double n = config.n_points;
    if (x_hi < n) return 0.0;
    const double u_hi = t - x_hi;
    if (u_hi <= -n) return 0.0;
    const cplx r = config.mirror_r();
    auto F = [&](double u) {
        cplx acc{0.0, 0.0};
        for (int m = 1; m <= config.n_points; ++m) {
            if (u + m >= 0.0) acc += traj.eps_lab_at(u + m);
            if (u - m >= 0.0) acc -= r * traj.eps_lab_at(u - m);
        }
        return 0.5 * std::norm(acc);
    };
    const double h = 1.0 / traj.steps_per_tau0;
    double acc = 0.0, u = -n;
    while (u + h < u_hi) {
        acc += 0.5 * (F(u) + F(u + h)) * h;
        u += h;
    }
    acc += 0.5 * (F(u) + F(u_hi)) * (u_hi - u);
    return acc;
}

} // namespace detail

inline FieldMap intensity_map(const Trajectory& traj, std::vector<double> x_grid,
                              std::vector<double> t_grid, const SystemConfig& config) {
    if (x_grid.empty() || t_grid.empty())
        throw config_error("field map needs non-empty grids");
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (x_grid[i] <= x_grid[i - 1]) throw config_error("x grid must ascend");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1]) throw config_error("t grid must ascend");
    if (t_grid.back() > traj.horizon() + 1e-12)
        throw history_too_short("field map extends past the integrated history");

    FieldMap fm;
    fm.x_grid = std::move(x_grid);
    fm.t_grid = std::move(t_grid);
    fm.values.resize(fm.x_grid.size() * fm.t_grid.size());
    fm.norm_series.resize(fm.t_grid.size());
    for (std::size_t ti = 0; ti < fm.t_grid.size(); ++ti) {
        const double t = fm.t_grid[ti];
        double* row = fm.values.data() + ti * fm.x_grid.size();
        for (std::size_t xi = 0; xi < fm.x_grid.size(); ++xi)
            row[xi] = std::norm(field_amplitude(traj, fm.x_grid[xi], t, config));
        const double integral =
            fm.x_grid.size() > 1
                ? detail::row_integral(traj, config, t, fm.x_grid)
                : 0.0;
        const double tail = detail::tail_integral(traj, config, t, fm.x_grid.back());
        fm.norm_series[ti] =
            std::norm(traj.rot_at(t)) + config.gamma_tau0 * (integral + tail);
    }
    return fm;
}

} // namespace gaw
