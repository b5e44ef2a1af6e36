// kernel.hpp — reduction of the coupling-point double sums to discrete delay
// channels. A two-level emitter touching the line at points m = 1..N in front
// of a mirror obeys
//
//   d eps/dt = -i*omega0*eps
//              - (Gamma/2) sum_{m,n} eps(t - |m-n|tau0) Theta(t - |m-n|tau0)
//              + (Gamma/2) r sum_{m,n} eps(t - (m+n)tau0) Theta(t - (m+n)tau0),
//
// so only the pair counts per integer delay matter. Direct entries come from
// |m-n| (same-side round trips), Mirror entries from m+n (round trips via the
// mirror, weighted by the complex reflection amplitude r).
#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "common.hpp"
#include "config.hpp"

namespace gaw {

enum class Channel { Direct, Mirror };

struct KernelEntry {
    Channel channel{Channel::Direct};
    int delay{0};   // integer multiple of tau0
    int count{0};   // number of (m,n) pairs mapping to this delay
    cplx coeff{};   // -(Gamma/2)*count (Direct) or +(Gamma/2)*r*count (Mirror)
};

struct DelayKernel {
    int n_points{0};
    double gamma_tau0{0.0};
    cplx mirror_r{1.0, 0.0};
    std::vector<KernelEntry> entries; // sorted: Direct by delay, then Mirror by delay

    int max_delay() const {
        int d = 0;
        for (const auto& e : entries)
            if (e.delay > d) d = e.delay;
        return d;
    }
};

// Pair counts for one emitter block occupying absolute positions
// [offset+1, offset+n]. Direct delays |m-n| never see the offset; Mirror
// delays m+n are shifted up by 2*offset.
inline std::vector<KernelEntry> block_entries(int rows_offset, int rows_n, int cols_offset,
                                              int cols_n, double gamma_tau0, cplx r) {
    std::vector<KernelEntry> out;
    // Direct channel: delay d = |m-n| for m in rows block, n in cols block.
    {
        // range of m-n over the two blocks
        int lo = (rows_offset + 1) - (cols_offset + cols_n);
        int hi = (rows_offset + rows_n) - (cols_offset + 1);
        int dmin = (lo > 0) ? lo : (hi < 0 ? -hi : 0);
        int dmax = std::max(std::abs(lo), std::abs(hi));
        for (int d = dmin; d <= dmax; ++d) {
            int count = 0;
            for (int m = rows_offset + 1; m <= rows_offset + rows_n; ++m) {
                int n1 = m - d, n2 = m + d;
                if (n1 >= cols_offset + 1 && n1 <= cols_offset + cols_n) ++count;
                if (d != 0 && n2 >= cols_offset + 1 && n2 <= cols_offset + cols_n) ++count;
            }
            if (count > 0)
                out.push_back({Channel::Direct, d, count,
                               cplx{-0.5 * gamma_tau0 * count, 0.0}});
        }
    }
    // Mirror channel: delay d = m+n, coefficient carries r. A fully
    // absorbing termination (r == 0) contributes nothing.
    if (r != cplx{0.0, 0.0}) {
        int dmin = rows_offset + cols_offset + 2;
        int dmax = rows_offset + rows_n + cols_offset + cols_n;
        for (int d = dmin; d <= dmax; ++d) {
            int count = 0;
            for (int m = rows_offset + 1; m <= rows_offset + rows_n; ++m) {
                int n = d - m;
                if (n >= cols_offset + 1 && n <= cols_offset + cols_n) ++count;
            }
            if (count > 0)
                out.push_back({Channel::Mirror, d, count,
                               0.5 * gamma_tau0 * static_cast<double>(count) * r});
        }
    }
    return out;
}

inline DelayKernel build_kernel(const SystemConfig& config) {
    config.validate();
    DelayKernel k;
    k.n_points = config.n_points;
    k.gamma_tau0 = config.gamma_tau0;
    k.mirror_r = config.mirror_r();
    k.entries = block_entries(0, config.n_points, 0, config.n_points, config.gamma_tau0,
                              k.mirror_r);
    return k;
}

// Q x Q matrix of delay kernels for several emitters. kernels[q][p] feeds
// emitter p's history into emitter q's equation of motion.
struct MultiKernel {
    std::vector<int> offsets;
    std::vector<std::vector<DelayKernel>> kernels;
};

inline MultiKernel build_multi_kernel(const MultiAtomConfig& config) {
    config.validate();
    const auto l = config.offsets();
    const auto r = config.mirror_r();
    const std::size_t Q = config.atoms.size();
    MultiKernel mk;
    mk.offsets = l;
    mk.kernels.assign(Q, std::vector<DelayKernel>(Q));
    for (std::size_t q = 0; q < Q; ++q) {
        for (std::size_t p = 0; p < Q; ++p) {
            DelayKernel& k = mk.kernels[q][p];
            k.n_points = config.atoms[p].n_points;
            k.gamma_tau0 = config.gamma_tau0;
            k.mirror_r = r;
            if (config.coupling_mode == CouplingMode::AsPrinted && q != p)
                continue; // block-diagonal reading: no cross terms
            k.entries = block_entries(l[q], config.atoms[q].n_points, l[p],
                                      config.atoms[p].n_points, config.gamma_tau0, r);
        }
    }
    return mk;
}

} // namespace gaw
