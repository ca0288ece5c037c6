#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "sll/common.hpp"
#include "sll/fihc.hpp"

namespace sll {

// Natural logarithms throughout; every quantity that leaves this module is
// either base-invariant (the ratio D) or compared in the same base.

struct MarginalDistribution {
    double p0 = 0.0;
    double p1 = 0.0;
};

/// Probabilities of (00, 01, 10, 11) for a pair of genes.
struct PairDistribution {
    std::array<double, 4> p{};

    MarginalDistribution marginal_first() const { return {p[0] + p[1], p[2] + p[3]}; }
    MarginalDistribution marginal_second() const { return {p[0] + p[2], p[1] + p[3]}; }
};

namespace detail {
inline double nlogn(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }
}  // namespace detail

inline double entropy(const MarginalDistribution& m) {
    return detail::nlogn(m.p0) + detail::nlogn(m.p1);
}

inline double joint_entropy(const PairDistribution& pd) {
    double h = 0.0;
    for (double x : pd.p) h += detail::nlogn(x);
    return h;
}

inline double mutual_information(const PairDistribution& pd,
                                 const MarginalDistribution& mi,
                                 const MarginalDistribution& mj) {
    return entropy(mi) + entropy(mj) - joint_entropy(pd);
}

/// D = 1 - I/H(joint). A constant pair (H = 0) gets distance 0: the
/// variables trivially determine each other, and the convention keeps NaNs
/// out of the perfect-decomposition test. Zero information with positive
/// joint entropy gives exactly 1.
inline double distance(const PairDistribution& pd, const MarginalDistribution& mi,
                       const MarginalDistribution& mj) {
    const double h = joint_entropy(pd);
    if (h == 0.0) return 0.0;
    return 1.0 - mutual_information(pd, mi, mj) / h;
}

inline MarginalDistribution marginal(const Population& pop, int i) {
    if (i < 0 || i >= pop.n) throw ParameterError("marginal: gene index out of range");
    std::int64_t zeros = 0;
    for (const auto& ind : pop.members) zeros += ind[i] == 0;
    const double s = static_cast<double>(pop.size());
    return {zeros / s, (pop.size() - zeros) / s};
}

inline PairDistribution pair(const Population& pop, int i, int j) {
    if (i < 0 || i >= pop.n || j < 0 || j >= pop.n || i == j)
        throw ParameterError("pair: bad gene indices");
    std::array<std::int64_t, 4> c{};
    for (const auto& ind : pop.members) ++c[ind[i] * 2 + ind[j]];
    PairDistribution pd;
    const double s = static_cast<double>(pop.size());
    for (int b = 0; b < 4; ++b) pd.p[b] = c[b] / s;
    return pd;
}

// Incremental pair-count accumulator -------------------------------------

/// Counts of the four symbol pairs for every i < j, additive over appended
/// individuals. Lets a growing-population experiment rebuild the DSM in
/// O(n^2) per step instead of O(n^2 s).
class PairCounts {
public:
    explicit PairCounts(int n) : n_(n), counts_(static_cast<std::size_t>(n) * n * 4, 0) {
        if (n < 2) throw ParameterError("PairCounts: need n >= 2");
    }

    void add(const Individual& ind) {
        for (int i = 0; i < n_; ++i) {
            const int bi = ind[i];
            std::int64_t* row = counts_.data() + (static_cast<std::size_t>(i) * n_ + i + 1) * 4;
            for (int j = i + 1; j < n_; ++j, row += 4) ++row[bi * 2 + ind[j]];
        }
        ++s_;
    }

    void add_all(const Population& pop) {
        for (const auto& ind : pop.members) add(ind);
    }

    std::int64_t samples() const { return s_; }
    int n() const { return n_; }

    PairDistribution distribution(int i, int j) const {
        if (i > j) std::swap(i, j);
        const std::int64_t* c = counts_.data() + (static_cast<std::size_t>(i) * n_ + j) * 4;
        PairDistribution pd;
        for (int b = 0; b < 4; ++b) pd.p[b] = static_cast<double>(c[b]) / s_;
        return pd;
    }

private:
    int n_;
    std::int64_t s_ = 0;
    std::vector<std::int64_t> counts_;  // [i][j][4], used for i < j
};

// DSM ---------------------------------------------------------------------

/// Symmetric matrix of pairwise distances, plus the ground-truth block id of
/// every gene. The blocks are only ever used for scoring (perfection, Fill),
/// never during construction.
struct Dsm {
    int n = 0;
    std::vector<double> d;       // n*n, row-major, diagonal 0
    std::vector<int> block_of;   // ground truth

    double at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }
    bool dependent(int i, int j) const { return block_of[i] == block_of[j]; }
};

inline Dsm build_dsm(const PairCounts& counts, std::vector<int> block_of) {
    if (counts.samples() < 2)
        throw InsufficientSampleError("build_dsm: need at least 2 individuals");
    Dsm dsm;
    dsm.n = counts.n();
    dsm.block_of = std::move(block_of);
    dsm.d.assign(static_cast<std::size_t>(dsm.n) * dsm.n, 0.0);
    for (int i = 0; i < dsm.n; ++i) {
        for (int j = i + 1; j < dsm.n; ++j) {
            const PairDistribution pd = counts.distribution(i, j);
            const double dist = distance(pd, pd.marginal_first(), pd.marginal_second());
            dsm.at(i, j) = dist;
            dsm.at(j, i) = dist;
        }
    }
    return dsm;
}

inline Dsm build_dsm(const Population& pop, const ConcatenatedProblem& problem) {
    PairCounts counts(pop.n);
    counts.add_all(pop);
    std::vector<int> blocks(static_cast<std::size_t>(pop.n));
    for (int i = 0; i < pop.n; ++i) blocks[i] = problem.block_of(i);
    return build_dsm(counts, std::move(blocks));
}

/// Definition of a perfect decomposition: every dependent-pair entry is
/// strictly below every independent-pair entry. Exact comparison, no
/// epsilon; vacuously true when one side is empty (r = 1).
inline bool is_perfect_decomposition(const Dsm& dsm) {
    double max_dep = -1.0;
    double min_indep = 2.0;
    bool any_dep = false, any_indep = false;
    for (int i = 0; i < dsm.n; ++i) {
        for (int j = i + 1; j < dsm.n; ++j) {
            const double v = dsm.at(i, j);
            if (dsm.dependent(i, j)) {
                any_dep = true;
                max_dep = std::max(max_dep, v);
            } else {
                any_indep = true;
                min_indep = std::min(min_indep, v);
            }
        }
    }
    if (!any_dep || !any_indep) return true;
    return max_dep < min_indep;
}

struct FillResult {
    double fill = 0.0;
    int ties_at_cutoff = 0;  // genes sharing the cutoff distance at rank k-1
};

/// Fraction of gene i's true block mates among its BlockSize(i) = (block
/// size - 1) nearest genes by DSM distance. Ties at the cutoff are broken
/// optimistically: a true dependent counts if some ordering of the tied
/// genes places it inside the cutoff.
inline FillResult fill(const Dsm& dsm, int i) {
    if (i < 0 || i >= dsm.n) throw ParameterError("fill: gene index out of range");
    int mates = 0;
    for (int j = 0; j < dsm.n; ++j)
        if (j != i && dsm.dependent(i, j)) ++mates;
    if (mates == 0) return {1.0, 0};

    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(dsm.n) - 1);
    for (int j = 0; j < dsm.n; ++j)
        if (j != i) row.push_back(dsm.at(i, j));
    std::vector<double> sorted = row;
    std::nth_element(sorted.begin(), sorted.begin() + (mates - 1), sorted.end());
    const double cutoff = sorted[static_cast<std::size_t>(mates) - 1];

    int below = 0, dep_below = 0, at = 0, dep_at = 0;
    for (int j = 0; j < dsm.n; ++j) {
        if (j == i) continue;
        const double v = dsm.at(i, j);
        if (v < cutoff) {
            ++below;
            if (dsm.dependent(i, j)) ++dep_below;
        } else if (v == cutoff) {
            ++at;
            if (dsm.dependent(i, j)) ++dep_at;
        }
    }
    const int slots = mates - below;
    const int credited = dep_below + std::min(dep_at, slots);
    const int ties = (at > slots) ? at : 0;
    return {static_cast<double>(credited) / mates, ties};
}

inline double fill_summary(const Dsm& dsm) {
    double sum = 0.0;
    for (int i = 0; i < dsm.n; ++i) sum += fill(dsm, i).fill;
    return sum / dsm.n;
}

// CSV export --------------------------------------------------------------

inline void write_dsm_csv(std::ostream& os, const Dsm& dsm) {
    os << "gene";
    for (int j = 0; j < dsm.n; ++j) os << ',' << j;
    os << '\n';
    const auto flags = os.flags();
    os.precision(17);
    for (int i = 0; i < dsm.n; ++i) {
        os << i;
        for (int j = 0; j < dsm.n; ++j) os << ',' << dsm.at(i, j);
        os << '\n';
    }
    os.flags(flags);
}

inline void write_fill_csv(std::ostream& os, const Dsm& dsm) {
    os << "gene,fill,ties_at_cutoff\n";
    const auto flags = os.flags();
    os.precision(17);
    for (int i = 0; i < dsm.n; ++i) {
        const FillResult f = fill(dsm, i);
        os << i << ',' << f.fill << ',' << f.ties_at_cutoff << '\n';
    }
    os.flags(flags);
}

}  // namespace sll
