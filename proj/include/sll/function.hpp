#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sll/common.hpp"

namespace sll {

/// Number of ones in a binary sequence.
inline int unitation(std::span<const std::uint8_t> x) {
    int u = 0;
    for (auto b : x) u += b;
    return u;
}

/// A function g: {0..k} -> R stored as a dense value table indexed by
/// unitation. Only the ordering of neighbouring values matters to the
/// hill climber, so a table is fully general.
struct UnitationFunction {
    int k = 0;
    std::vector<double> values;  // values[u] = g(u), size k+1
    std::string name;

    UnitationFunction() = default;
    UnitationFunction(int order, std::vector<double> vals, std::string label)
        : k(order), values(std::move(vals)), name(std::move(label)) {
        if (k < 1)
            throw ParameterError("UnitationFunction: k must be positive");
        if (values.size() != static_cast<std::size_t>(k) + 1)
            throw ParameterError("UnitationFunction '" + name +
                                 "': expected k+1 values");
    }

    double operator()(int u) const { return values[static_cast<std::size_t>(u)]; }

    /// Largest value of g; the global optimum of one block.
    double max_value() const {
        return *std::max_element(values.begin(), values.end());
    }
};

/// Wrapper asserting g(i) = g(k-i); the population-size estimate is
/// proved only for this class.
struct SymmetricUnitationFunction {
    UnitationFunction g;

    explicit SymmetricUnitationFunction(UnitationFunction fn) : g(std::move(fn)) {
        for (int i = 0; i <= g.k; ++i)
            if (g.values[i] != g.values[g.k - i])
                throw ParameterError("function '" + g.name +
                                     "' is not symmetric: g(" + std::to_string(i) +
                                     ") != g(k-" + std::to_string(i) + ")");
    }
};

// Built-in families -------------------------------------------------------

inline UnitationFunction make_trap(int k) {
    if (k < 2) throw ParameterError("trap: k must be >= 2");
    std::vector<double> v(k + 1);
    for (int u = 0; u < k; ++u) v[u] = k - u - 1;
    v[k] = k;
    return {k, std::move(v), "trap_" + std::to_string(k)};
}

inline UnitationFunction make_bimodal(int k) {
    if (k < 4 || k % 2 != 0) throw ParameterError("bimodal: k must be even, >= 4");
    const int l = k / 2;
    std::vector<double> v(k + 1);
    for (int u = 1; u < k; ++u) v[u] = l - std::abs(u - l) - 1;
    v[0] = v[k] = l;
    return {k, std::move(v), "bimodal_" + std::to_string(k)};
}

inline UnitationFunction make_reverted_bimodal(int k) {
    if (k < 4 || k % 2 != 0)
        throw ParameterError("reverted bimodal: k must be even, >= 4");
    const int l = k / 2;
    std::vector<double> v(k + 1);
    for (int u = 0; u <= k; ++u) v[u] = (u == l) ? k : std::abs(l - u);
    return {k, std::move(v), "reverted_bimodal_" + std::to_string(k)};
}

/// Bimodal of order 10 plus the fixed noise table from the literature.
inline UnitationFunction make_noised_bimodal(int k = 10) {
    if (k != 10) throw ParameterError("noised bimodal is defined for k = 10");
    const UnitationFunction b = make_bimodal(10);
    constexpr double noise[11] = {-1, 0, 1, -1, 0, -2, 0, -1, 1, 0, -1};
    std::vector<double> v(11);
    for (int u = 0; u <= 10; ++u) v[u] = b(u) + noise[u];
    return {10, std::move(v), "noised_bimodal_10"};
}

inline UnitationFunction make_ridge2(int k) {
    if (k < 4 || k % 2 != 0) throw ParameterError("ridge-k2: k must be even, >= 4");
    std::vector<double> v(k + 1);
    for (int u = 0; u <= k; ++u) {
        if (u == k) v[u] = 2;
        else if (u % 2 == 0) v[u] = 1;
        else v[u] = 0;
    }
    return {k, std::move(v), "ridge" + std::to_string(k) + "_2"};
}

inline UnitationFunction make_ridge4(int k) {
    if (k < 4 || k % 4 != 0)
        throw ParameterError("ridge-k4: k must be divisible by 4");
    std::vector<double> v(k + 1);
    for (int u = 0; u <= k; ++u) {
        if (u == k) v[u] = 3;
        else if (u % 2 == 1) v[u] = 1;
        else if (u % 4 == 0) v[u] = 2;
        else v[u] = 0;
    }
    return {k, std::move(v), "ridge" + std::to_string(k) + "_4"};
}

/// Dispatcher over the built-in families. Accepts the bare family name
/// ("trap", "bimodal", "reverted", "noised_bimodal", "ridge2", "ridge4").
inline UnitationFunction builtin(const std::string& family, int k) {
    if (family == "trap") return make_trap(k);
    if (family == "bimodal") return make_bimodal(k);
    if (family == "reverted" || family == "reverted_bimodal")
        return make_reverted_bimodal(k);
    if (family == "noised_bimodal") return make_noised_bimodal(k);
    if (family == "ridge2") return make_ridge2(k);
    if (family == "ridge4") return make_ridge4(k);
    throw ParameterError("unknown function family '" + family + "'");
}

// Concatenation -----------------------------------------------------------

/// f(x) = sum over r disjoint k-gene blocks of g(unitation of block).
struct ConcatenatedProblem {
    UnitationFunction g;
    int r = 1;

    ConcatenatedProblem(UnitationFunction fn, int blocks)
        : g(std::move(fn)), r(blocks) {
        if (r < 1) throw ParameterError("ConcatenatedProblem: r must be >= 1");
    }

    int k() const { return g.k; }
    int n() const { return r * g.k; }
    int block_of(int gene) const { return gene / g.k; }
    double optimum() const { return r * g.max_value(); }

    double evaluate(std::span<const std::uint8_t> x) const {
        if (static_cast<int>(x.size()) != n())
            throw DimensionError("evaluate: genotype length " +
                                 std::to_string(x.size()) + " != n = " +
                                 std::to_string(n()));
        double f = 0.0;
        for (int b = 0; b < r; ++b)
            f += g(unitation(x.subspan(static_cast<std::size_t>(b) * g.k,
                                       static_cast<std::size_t>(g.k))));
        return f;
    }

    std::vector<int> block_unitations(std::span<const std::uint8_t> x) const {
        if (static_cast<int>(x.size()) != n())
            throw DimensionError("block_unitations: length mismatch");
        std::vector<int> u(r);
        for (int b = 0; b < r; ++b)
            u[b] = unitation(x.subspan(static_cast<std::size_t>(b) * g.k,
                                       static_cast<std::size_t>(g.k)));
        return u;
    }
};

// Monotonicity profile ----------------------------------------------------

/// The sequences MAX_g = (k_1..k_N) of interior local maxima and
/// MIN_g = (l_0..l_N) of local minima. When l_0 > 0 the boundary maximum
/// k_0 = 0 exists; when l_N < k, k_{N+1} = k.
struct MonotonicityProfile {
    int k = 0;
    std::vector<int> maxima;  // strictly increasing, in {1..k-1}
    std::vector<int> minima;  // strictly increasing, in {0..k}, size N+1

    int order() const { return static_cast<int>(maxima.size()); }
    bool has_left_boundary_max() const { return minima.front() > 0; }
    bool has_right_boundary_max() const { return minima.back() < k; }

    void validate() const {
        const int N = order();
        if (k < 1) throw ParameterError("profile: k must be positive");
        if (static_cast<int>(minima.size()) != N + 1)
            throw ParameterError("profile: need exactly N+1 minima");
        for (int m : minima)
            if (m < 0 || m > k) throw ParameterError("profile: minimum out of range");
        for (int m : maxima)
            if (m < 1 || m > k - 1)
                throw ParameterError("profile: interior maximum out of range");
        for (int i = 0; i < N; ++i)
            if (!(minima[i] < maxima[i] && maxima[i] < minima[i + 1]))
                throw ParameterError("profile: interleaving l_{i-1} < k_i < l_i violated");
    }

    /// Reflection i -> k - i; swaps the roles of 0 and 1.
    MonotonicityProfile mirror() const {
        MonotonicityProfile m;
        m.k = k;
        for (auto it = maxima.rbegin(); it != maxima.rend(); ++it)
            m.maxima.push_back(k - *it);
        for (auto it = minima.rbegin(); it != minima.rend(); ++it)
            m.minima.push_back(k - *it);
        return m;
    }

    bool operator==(const MonotonicityProfile&) const = default;
};

/// Scans the value table for local extrema. Requires sharp inequalities
/// between neighbours; a plateau leaves FIHC behaviour undefined.
inline MonotonicityProfile extract_profile(const UnitationFunction& g) {
    for (int u = 0; u < g.k; ++u)
        if (g(u) == g(u + 1))
            throw PlateauError("function '" + g.name + "' has a plateau at u=" +
                               std::to_string(u));
    MonotonicityProfile p;
    p.k = g.k;
    for (int u = 0; u <= g.k; ++u) {
        const bool left_up = (u == 0) || g(u - 1) < g(u);
        const bool right_down = (u == g.k) || g(u) > g(u + 1);
        if (left_up && right_down) {
            if (u > 0 && u < g.k) p.maxima.push_back(u);
        } else if (!left_up && !right_down) {
            p.minima.push_back(u);
        }
        // endpoints that are minima:
        if (u == 0 && !right_down) p.minima.push_back(0);
        if (u == g.k && !left_up) p.minima.push_back(g.k);
    }
    std::sort(p.minima.begin(), p.minima.end());
    p.minima.erase(std::unique(p.minima.begin(), p.minima.end()), p.minima.end());
    p.validate();
    return p;
}

/// A concrete value table realizing a profile; values descend/ascend by 1
/// between consecutive extrema. Used by oracles and the profile scan.
inline UnitationFunction function_from_profile(const MonotonicityProfile& p,
                                               std::string name = "profile") {
    p.validate();
    // alternating extremum positions; bool marks "walk up towards it"
    std::vector<std::pair<int, bool>> pts;
    if (p.has_left_boundary_max()) pts.emplace_back(0, true);
    const int N = p.order();
    for (int i = 0; i <= N; ++i) {
        pts.emplace_back(p.minima[i], false);
        if (i < N) pts.emplace_back(p.maxima[i], true);
    }
    if (p.has_right_boundary_max()) pts.emplace_back(p.k, true);

    std::vector<double> v(static_cast<std::size_t>(p.k) + 1, 0.0);
    // assign heights: walk between consecutive extrema with slope +-1
    double h = 0.0;
    v[pts[0].first] = 0.0;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const int a = pts[s].first, b = pts[s + 1].first;
        const double step = pts[s + 1].second ? 1.0 : -1.0;
        for (int u = a + 1; u <= b; ++u) {
            h += step;
            v[u] = h;
        }
    }
    return {p.k, std::move(v), std::move(name)};
}

}  // namespace sll
