#pragma once

// Independent brute-force references used by the test suite only. These are
// deliberately written from the definitions, sharing as little as possible
// with the library implementations they check.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sll/function.hpp"
#include "sll/rational.hpp"
#include "sll/stats.hpp"

namespace oracle {

// Exact pair distribution by enumerating every input and every gene order --

struct ExactPair {
    sll::Rational p00, p01, p10, p11;
};

/// Deterministic single-block FIHC: sweeps the fixed order, keeps strictly
/// improving flips, until a sweep changes nothing. Returns the final bits.
inline std::uint32_t fihc_fixed_order(const sll::UnitationFunction& g,
                                      std::uint32_t x,
                                      const std::vector<int>& order) {
    int u = std::popcount(x);
    bool modified = true;
    while (modified) {
        modified = false;
        for (int gene : order) {
            const bool bit = (x >> gene) & 1u;
            const int nu = bit ? u - 1 : u + 1;
            if (g(nu) > g(u)) {
                x ^= 1u << gene;
                u = nu;
                modified = true;
            }
        }
    }
    return x;
}

/// Distribution of the final values of genes (0,1) over all 2^k inputs and
/// all k! orders, each weighted equally. Exact; feasible up to k = 7.
inline ExactPair full_enumeration_pair(const sll::UnitationFunction& g) {
    const int k = g.k;
    std::array<sll::BigInt, 4> c{};
    std::vector<int> order(static_cast<std::size_t>(k));
    for (std::uint32_t x = 0; x < (1u << k); ++x) {
        std::iota(order.begin(), order.end(), 0);
        do {
            const std::uint32_t y = fihc_fixed_order(g, x, order);
            ++c[(y & 1u) * 2 + ((y >> 1) & 1u)];
        } while (std::next_permutation(order.begin(), order.end()));
    }
    sll::BigInt total = sll::pow2(k);
    for (int i = 2; i <= k; ++i) total *= i;
    return {sll::Rational(c[0], total), sll::Rational(c[1], total),
            sll::Rational(c[2], total), sll::Rational(c[3], total)};
}

// Collapsed oracle --------------------------------------------------------

/// Same distribution without enumerating orders. The order matters only when
/// the initial unitation sits at a local minimum: the first gene of the order
/// picks the direction (a one with probability u/k descends, a zero ascends),
/// and conditioned on the direction the flipped genes form a uniformly random
/// subset of the ones (resp. zeros) of the required size. The per-pair
/// contribution is then hypergeometric. Exact for any k.
inline ExactPair collapsed_pair(const sll::UnitationFunction& g) {
    const int k = g.k;
    auto walk_up = [&](int u) {
        while (u < k && g(u + 1) > g(u)) ++u;
        return u;
    };
    auto walk_down = [&](int u) {
        while (u > 0 && g(u - 1) > g(u)) --u;
        return u;
    };
    std::array<sll::Rational, 4> q{};
    const sll::Rational input_w(1, sll::pow2(k));
    for (std::uint32_t x = 0; x < (1u << k); ++x) {
        const int u0 = std::popcount(x);
        const bool b0 = x & 1u, b1 = (x >> 1) & 1u;
        std::vector<std::pair<int, sll::Rational>> dests;
        const bool up = u0 < k && g(u0 + 1) > g(u0);
        const bool down = u0 > 0 && g(u0 - 1) > g(u0);
        if (up && down) {
            dests.emplace_back(walk_down(u0 - 1), sll::Rational(u0, k));
            dests.emplace_back(walk_up(u0 + 1), sll::Rational(k - u0, k));
        } else if (up) {
            dests.emplace_back(walk_up(u0), sll::Rational(1));
        } else if (down) {
            dests.emplace_back(walk_down(u0), sll::Rational(1));
        } else {
            dests.emplace_back(u0, sll::Rational(1));
        }
        for (const auto& [uf, w] : dests) {
            const sll::Rational scale = input_w * w;
            // symbol change probabilities for the two watched genes
            auto add = [&](bool f0, bool f1, const sll::Rational& p) {
                q[static_cast<int>(f0) * 2 + static_cast<int>(f1)] += scale * p;
            };
            if (uf >= u0) {
                const int d = uf - u0, z = k - u0;  // flip d of the z zeros
                if (b0 && b1) {
                    add(1, 1, 1);
                } else if (b0 != b1) {
                    add(1, 1, sll::Rational(d, z));  // the zero gene flips
                    if (b0) add(1, 0, sll::Rational(z - d, z));
                    else add(0, 1, sll::Rational(z - d, z));
                } else {
                    const sll::BigInt zz = sll::BigInt(z) * (z - 1);
                    add(1, 1, sll::Rational(sll::BigInt(d) * (d - 1), zz));
                    add(1, 0, sll::Rational(sll::BigInt(d) * (z - d), zz));
                    add(0, 1, sll::Rational(sll::BigInt(d) * (z - d), zz));
                    add(0, 0, sll::Rational(sll::BigInt(z - d) * (z - d - 1), zz));
                }
            } else {
                const int d = u0 - uf, o = u0;  // clear d of the o ones
                if (!b0 && !b1) {
                    add(0, 0, 1);
                } else if (b0 != b1) {
                    add(0, 0, sll::Rational(d, o));
                    if (b0) add(1, 0, sll::Rational(o - d, o));
                    else add(0, 1, sll::Rational(o - d, o));
                } else {
                    const sll::BigInt oo = sll::BigInt(o) * (o - 1);
                    add(0, 0, sll::Rational(sll::BigInt(d) * (d - 1), oo));
                    add(0, 1, sll::Rational(sll::BigInt(d) * (o - d), oo));
                    add(1, 0, sll::Rational(sll::BigInt(d) * (o - d), oo));
                    add(1, 1, sll::Rational(sll::BigInt(o - d) * (o - d - 1), oo));
                }
            }
        }
    }
    return {q[0], q[1], q[2], q[3]};
}

// Independent DSM distance ------------------------------------------------

/// D = 1 - I/H from raw counts, written directly from the definitions.
inline double dsm_distance(const std::vector<sll::Individual>& pop, int i, int j) {
    double pij[2][2] = {{0, 0}, {0, 0}};
    double pi[2] = {0, 0}, pj[2] = {0, 0};
    const double s = static_cast<double>(pop.size());
    for (const auto& ind : pop) {
        pij[ind[i]][ind[j]] += 1.0 / s;
        pi[ind[i]] += 1.0 / s;
        pj[ind[j]] += 1.0 / s;
    }
    double h = 0.0, info = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double p = pij[a][b];
            if (p > 0.0) {
                h -= p * std::log(p);
                info += p * std::log(p / (pi[a] * pj[b]));
            }
        }
    }
    if (h == 0.0) return 0.0;
    return 1.0 - info / h;
}

}  // namespace oracle
