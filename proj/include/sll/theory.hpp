#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sll/common.hpp"
#include "sll/function.hpp"
#include "sll/rational.hpp"

namespace sll {

inline constexpr double kBisectionTolerance = 0x1.0p-50;

/// Kullback-Leibler divergence of (p,1-p) from (q,1-q), natural log,
/// with 0*log 0 = 0. A degenerate reference q in {0,1} with mass of p on
/// the impossible symbol gives +infinity.
inline double relative_entropy(double p, double q) {
    if (p < 0.0 || p > 1.0) throw ParameterError("relative_entropy: p outside [0,1]");
    if (q < 0.0 || q > 1.0) throw ParameterError("relative_entropy: q outside [0,1]");
    auto term = [](double a, double b) {
        if (a == 0.0) return 0.0;
        if (b == 0.0) return std::numeric_limits<double>::infinity();
        return a * std::log(a / b);
    };
    return term(p, q) + term(1.0 - p, 1.0 - q);
}

/// Entropy of the symmetric pair distribution (q, 1/2-q, 1/2-q, q).
inline double symmetric_pair_entropy(double q) {
    auto nlogn = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return 2.0 * nlogn(q) + 2.0 * nlogn(0.5 - q);
}

/// The unique q in (1/4, p) with H(P) - 2H(Q) + log 4 = 0 for
/// P = (p,1/2-p,1/2-p,p), Q = (q,1/2-q,1/2-q,q). Bisection on [1/4, p];
/// q -> H(Q) is decreasing there.
inline double q_of_p(double p) {
    if (!(p > 0.25 && p <= 0.5))
        throw ParameterError("q_of_p: p must lie in (1/4, 1/2]");
    const double target = 0.5 * (symmetric_pair_entropy(p) + std::log(4.0));
    double lo = 0.25, hi = p;
    while (hi - lo > kBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (symmetric_pair_entropy(mid) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// The unique rho in (1/4, q_tilde) with H_{2q~}(2 rho) = H_{1/4}(q(rho)).
/// The difference is decreasing in rho, so plain bisection applies.
inline double solve_rho(double q_tilde) {
    if (q_tilde <= 0.25)
        throw UndecidableError("solve_rho: q_tilde <= 1/4, no separation exists");
    if (q_tilde >= 0.5) throw ParameterError("solve_rho: q_tilde must be < 1/2");
    double lo = 0.25, hi = q_tilde;
    while (hi - lo > kBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        const double diff = relative_entropy(2.0 * mid, 2.0 * q_tilde) -
                            relative_entropy(q_of_p(mid), 0.25);
        if (diff > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Canonical symmetric dependent-pair distribution (q~, 1/2-q~, 1/2-q~, q~)
/// with q~ = max(p00, p01); `from_01` records when the maximum was the
/// probability of 01/10 rather than 00/11.
struct SymmetricPairDistribution {
    Rational q_tilde;
    bool from_01 = false;
};

struct EstimateResult {
    double rho = 0.0;
    double q_of_rho = 0.0;
    double exponent = 0.0;        // H_{2q~}(2 rho)
    std::int64_t pair_budget = 0; // r*C(k,2) + 8*C(r,2)*k^2
    std::int64_t s_min = 0;
    double alpha = 0.0;           // allowed failure probability
    bool q_tilde_from_01 = false;
};

/// Population size sufficient for a perfect DSM with probability
/// >= 1 - alpha. `alpha` is the failure budget: the bound solves
/// pair_budget * exp(-s * exponent) <= alpha.
inline EstimateResult estimate_s_min(const SymmetricPairDistribution& q,
                                     int k, int r, double alpha) {
    if (k < 2) throw ParameterError("estimate_s_min: k must be >= 2");
    if (r < 1) throw ParameterError("estimate_s_min: r must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ParameterError("estimate_s_min: alpha must lie in (0,1)");
    const Rational quarter(1, 4);
    if (q.q_tilde == quarter)
        throw UndecidableError("estimate_s_min: q_tilde = 1/4, SLL-undecidable");
    if (q.q_tilde < quarter || q.q_tilde > Rational(1, 2))
        throw ParameterError("estimate_s_min: q_tilde outside (1/4, 1/2]");

    EstimateResult res;
    res.alpha = alpha;
    res.q_tilde_from_01 = q.from_01;
    const double qt = to_double(q.q_tilde);
    if (q.q_tilde == Rational(1, 2)) {
        // Dependent pairs are always 00/11, their tail bound vanishes; the
        // exponent is driven entirely by the independent side at t -> 1/2.
        res.rho = 0.5;
        res.q_of_rho = q_of_p(0.5);
        res.exponent = relative_entropy(res.q_of_rho, 0.25);
    } else {
        res.rho = solve_rho(qt);
        res.q_of_rho = q_of_p(res.rho);
        res.exponent = relative_entropy(2.0 * res.rho, 2.0 * qt);
    }
    res.pair_budget =
        static_cast<std::int64_t>(r) * k * (k - 1) / 2 +
        8 * (static_cast<std::int64_t>(r) * (r - 1) / 2) * k * k;
    res.s_min = static_cast<std::int64_t>(
        std::ceil(std::log(static_cast<double>(res.pair_budget) / alpha) / res.exponent));
    return res;
}

// Closed forms for the two worked families --------------------------------

/// Bimodal of order 2l: p01 = l(2^{2l-2}-1) / ((2l-1) 2^{2l-1}).
inline SymmetricPairDistribution q_tilde_bimodal(int l) {
    if (l < 1) throw ParameterError("q_tilde_bimodal: l must be >= 1");
    const Rational p01(BigInt(l) * (pow2(2 * l - 2) - 1),
                       BigInt(2 * l - 1) * pow2(2 * l - 1));
    const Rational p00 = Rational(1, 2) - p01;
    if (p01 >= p00) return {p01, true};
    return {p00, false};
}

/// Reverted bimodal of order 2l: p01 = C(2l-2, l-1) / 2^{2l-1}.
inline SymmetricPairDistribution q_tilde_reverted(int l) {
    if (l < 1) throw ParameterError("q_tilde_reverted: l must be >= 1");
    const Rational p01(binomial(2 * l - 2, l - 1), pow2(2 * l - 1));
    const Rational p00 = Rational(1, 2) - p01;
    if (p01 >= p00) return {p01, true};
    return {p00, false};
}

// General theoretical distribution (any monotonicity profile) -------------

/// Exact dependent-pair distribution (q1, q2, q2, q3).
struct TheoreticalPairDistribution {
    Rational q1, q2, q3;

    bool symmetric() const { return q1 == q3; }

    /// Canonical q~ for the population-size estimate; only defined on the
    /// symmetric interval q1 = q3.
    SymmetricPairDistribution canonical_symmetric() const {
        if (!symmetric())
            throw ParameterError("canonical_symmetric: distribution has q1 != q3");
        if (q2 >= q1) return {q2, true};
        return {q1, false};
    }

    bool operator==(const TheoreticalPairDistribution&) const = default;
};

/// Dependent-pair distribution of FIHC-optimized random blocks, from the
/// monotonicity profile alone. Occupancy of each interior maximum k_i is
/// 2^{-k+1} * sum_{j=l_{i-1}}^{l_i - 1} C(k-1, j); the all-zeros state adds
/// the l_0 > 0 boundary term to q1, and the all-ones state reaches q3 only
/// through normalization.
inline TheoreticalPairDistribution theoretical_distribution(
    const MonotonicityProfile& p) {
    p.validate();
    const int k = p.k;
    if (k < 2) throw ParameterError("theoretical_distribution: k must be >= 2");
    const BigInt denom_pairs = BigInt(k) * (k - 1);
    Rational q1(0), q2(0);
    for (int i = 0; i < p.order(); ++i) {
        const int ki = p.maxima[i];
        BigInt occ = 0;
        for (int j = p.minima[i]; j < p.minima[i + 1]; ++j) occ += binomial(k - 1, j);
        const Rational occupancy(occ * 2, pow2(k));  // 2^{-k+1} * occ
        q1 += occupancy * Rational(BigInt(k - ki) * (k - ki - 1), denom_pairs);
        q2 += occupancy * Rational(BigInt(ki) * (k - ki), denom_pairs);
    }
    const int l0 = p.minima.front();
    if (l0 > 0) {
        BigInt below = 0;
        for (int j = 0; j < l0; ++j) below += binomial(k, j);
        q1 += Rational(below + binomial(k - 1, l0 - 1), pow2(k));
    }
    return {q1, q2, Rational(1) - q1 - 2 * q2};
}

/// Exact test for pairwise stochastic independence of the dependent pair
/// (membership of curve C); by symmetry of the three conditions, one
/// equality suffices.
inline bool is_sll_undecidable(const TheoreticalPairDistribution& d) {
    const Rational m = d.q1 + d.q2;
    return d.q1 == m * m;
}

// Exhaustive profile scan -------------------------------------------------

struct ScanEntry {
    MonotonicityProfile profile;
    TheoreticalPairDistribution distribution;
};

/// All valid profiles for a given k with N interior maxima, i.e. strictly
/// increasing alternating sequences l_0 < k_1 < l_1 < ... < k_N < l_N in
/// {0..k}. Emitted sorted by (N, maxima, minima) so output is diffable.
inline std::vector<MonotonicityProfile> enumerate_profiles(int k, int n_max) {
    std::vector<MonotonicityProfile> out;
    for (int N = 1; N <= n_max; ++N) {
        const int len = 2 * N + 1;
        if (len > k + 1) break;
        std::vector<int> seq(len);
        // lexicographic combinations of size len from {0..k}
        for (int i = 0; i < len; ++i) seq[i] = i;
        while (true) {
            MonotonicityProfile p;
            p.k = k;
            for (int i = 0; i < len; ++i)
                (i % 2 == 0 ? p.minima : p.maxima).push_back(seq[i]);
            out.push_back(std::move(p));
            int pos = len - 1;
            while (pos >= 0 && seq[pos] == k - (len - 1 - pos)) --pos;
            if (pos < 0) break;
            ++seq[pos];
            for (int i = pos + 1; i < len; ++i) seq[i] = seq[i - 1] + 1;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const MonotonicityProfile& a, const MonotonicityProfile& b) {
                  if (a.maxima.size() != b.maxima.size())
                      return a.maxima.size() < b.maxima.size();
                  if (a.maxima != b.maxima) return a.maxima < b.maxima;
                  return a.minima < b.minima;
              });
    return out;
}

/// Enumerates every profile with 1 <= N <= n_max for each k in the range and
/// returns the ones whose exact distribution lies on curve C.
inline std::vector<ScanEntry> scan_undecidable(int k_min, int k_max, int n_max) {
    if (k_min < 3) throw ParameterError("scan_undecidable: k_min must be >= 3");
    if (k_max < k_min) throw ParameterError("scan_undecidable: empty k range");
    if (n_max < 1) throw ParameterError("scan_undecidable: n_max must be >= 1");
    std::vector<ScanEntry> out;
    for (int k = k_min; k <= k_max; ++k) {
        for (auto& p : enumerate_profiles(k, n_max)) {
            TheoreticalPairDistribution d = theoretical_distribution(p);
            if (is_sll_undecidable(d))
                out.push_back({std::move(p), std::move(d)});
        }
    }
    return out;
}

// Chernoff tail diagnostics -----------------------------------------------

struct ChernoffBounds {
    double dependent;    // exp(-s H_{2q~}(2t)): dependent pair drifts low
    double independent;  // exp(-s H_{1/4}(u)): independent pair drifts out
};

inline ChernoffBounds chernoff_diagnostics(double q_tilde, double t, double u,
                                           std::int64_t s) {
    if (!(0.25 < u && u < t && t < q_tilde))
        throw ParameterError("chernoff_diagnostics: need 1/4 < u < t < q_tilde");
    if (s < 0) throw ParameterError("chernoff_diagnostics: s must be >= 0");
    return {std::exp(-static_cast<double>(s) * relative_entropy(2.0 * t, 2.0 * q_tilde)),
            std::exp(-static_cast<double>(s) * relative_entropy(u, 0.25))};
}

}  // namespace sll
