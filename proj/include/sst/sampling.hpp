#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sst/geometry.hpp"

namespace sst {

// Engine output mapped to [0,1) through the top 53 bits explicitly, so draws
// are bit-identical across standard libraries (std::uniform_real_distribution
// is not pinned down by the standard).
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Every check derives its own stream from the master seed and a salt naming
// the check, so report content does not depend on check ordering.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view salt) {
    return std::mt19937_64(seed ^ fnv1a64(salt));
}

// A batch of chart points with inline per-point storage.
struct PointList {
    int dim = 0;
    std::vector<std::array<double, expr::kMaxDim>> pts;

    std::span<const double> at(std::size_t i) const {
        return {pts[i].data(), static_cast<std::size_t>(dim)};
    }
    std::size_t size() const { return pts.size(); }
};

// Deterministic sample sweep over the margin-shrunk box: a small inclusive
// lattice (so box extrema are represented exactly) plus `n_random` seeded
// uniform draws.
inline PointList sample_points(const geom::Chart& chart, int n_random, std::uint64_t seed,
                               std::string_view salt) {
    PointList out;
    out.dim = chart.dim();

    // lattice: 3 points per axis up to dim 4, corners+center beyond
    std::size_t lattice = 1;
    for (int i = 0; i < chart.dim(); ++i) lattice *= 3;
    if (lattice <= 81) {
        std::array<int, expr::kMaxDim> idx{};
        for (std::size_t n = 0; n < lattice; ++n) {
            std::array<double, expr::kMaxDim> p{};
            std::size_t rem = n;
            for (int i = 0; i < chart.dim(); ++i) {
                idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % 3);
                rem /= 3;
                const geom::Interval iv = chart.sample_interval(i);
                p[static_cast<std::size_t>(i)] =
                    iv.lo + 0.5 * (iv.hi - iv.lo) * idx[static_cast<std::size_t>(i)];
            }
            out.pts.push_back(p);
        }
    } else {
        std::size_t corners = std::size_t{1} << chart.dim();
        for (std::size_t n = 0; n < corners; ++n) {
            std::array<double, expr::kMaxDim> p{};
            for (int i = 0; i < chart.dim(); ++i) {
                const geom::Interval iv = chart.sample_interval(i);
                p[static_cast<std::size_t>(i)] = (n >> i) & 1 ? iv.hi : iv.lo;
            }
            out.pts.push_back(p);
        }
        std::array<double, expr::kMaxDim> center{};
        for (int i = 0; i < chart.dim(); ++i) {
            const geom::Interval iv = chart.sample_interval(i);
            center[static_cast<std::size_t>(i)] = 0.5 * (iv.lo + iv.hi);
        }
        out.pts.push_back(center);
    }

    std::mt19937_64 rng = seeded_rng(seed, salt);
    for (int n = 0; n < n_random; ++n) {
        std::array<double, expr::kMaxDim> p{};
        for (int i = 0; i < chart.dim(); ++i) {
            const geom::Interval iv = chart.sample_interval(i);
            p[static_cast<std::size_t>(i)] = uniform_in(rng, iv.lo, iv.hi);
        }
        out.pts.push_back(p);
    }
    return out;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    for (int i = 0; i < n; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

} // namespace sst
