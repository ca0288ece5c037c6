#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sll/common.hpp"
#include "sll/function.hpp"
#include "sll/parallel.hpp"
#include "sll/rng.hpp"

namespace sll {

using Individual = std::vector<std::uint8_t>;

/// First Improvement Hill Climber. One uniformly random gene order is drawn
/// before the repeat loop and reused across sweeps; a flip is kept iff it
/// strictly improves fitness. Ties (plateaus) are therefore never accepted.
/// Fitness deltas are tracked through per-block unitation counters, so each
/// flip test is O(1).
inline Individual fihc_optimize(const ConcatenatedProblem& problem,
                                Individual x, Rng& rng) {
    if (static_cast<int>(x.size()) != problem.n())
        throw DimensionError("fihc_optimize: genotype length mismatch");
    const int k = problem.k();
    const auto& g = problem.g;
    std::vector<int> bu = problem.block_unitations(x);
    const std::vector<int> order = rng.permutation(problem.n());
    bool modified = true;
    while (modified) {
        modified = false;
        for (int gene : order) {
            const int b = gene / k;
            const int nu = x[gene] ? bu[b] - 1 : bu[b] + 1;
            if (g(nu) > g(bu[b])) {
                x[gene] ^= 1;
                bu[b] = nu;
                modified = true;
            }
        }
    }
    return x;
}

/// A population of FIHC-optimized individuals plus the seed that produced it.
/// Member i is fully determined by seed.derive(i): uniform bits, then one
/// random gene order for FIHC.
struct Population {
    int n = 0;
    RngSeed seed;
    std::vector<Individual> members;

    int size() const { return static_cast<int>(members.size()); }
};

inline Individual sample_member(const ConcatenatedProblem& problem,
                                const RngSeed& seed, std::uint64_t index) {
    Rng rng(seed.derive(index));
    Individual x(static_cast<std::size_t>(problem.n()));
    for (auto& b : x) b = rng.next_bit() ? 1 : 0;
    return fihc_optimize(problem, std::move(x), rng);
}

inline Population sample_optimized_population(const ConcatenatedProblem& problem,
                                              int s, RngSeed seed,
                                              unsigned threads = 1) {
    if (s < 1) throw ParameterError("sample_optimized_population: s must be >= 1");
    Population pop;
    pop.n = problem.n();
    pop.seed = seed;
    pop.members.resize(static_cast<std::size_t>(s));
    parallel_for(static_cast<std::size_t>(s), threads, [&](std::size_t i) {
        pop.members[i] = sample_member(problem, seed, i);
    });
    return pop;
}

/// Appends newly sampled and optimized members; existing members are frozen
/// (FIHC output is a fixed point, so re-optimizing would be a no-op).
/// Extending in chunks consumes the same streams as one big extension.
inline void extend_population(Population& pop, const ConcatenatedProblem& problem,
                              int extra, unsigned threads = 1) {
    if (extra < 1) throw ParameterError("extend_population: extra must be >= 1");
    const std::size_t base = pop.members.size();
    pop.members.resize(base + static_cast<std::size_t>(extra));
    parallel_for(static_cast<std::size_t>(extra), threads, [&](std::size_t j) {
        pop.members[base + j] = sample_member(problem, pop.seed, base + j);
    });
}

// One individual per line as a 0/1 string, after a "n s master stream" header.
inline void dump_population(std::ostream& os, const Population& pop) {
    os << pop.n << ' ' << pop.size() << ' ' << pop.seed.master << ' '
       << pop.seed.stream << '\n';
    std::string line(static_cast<std::size_t>(pop.n), '0');
    for (const auto& ind : pop.members) {
        for (int i = 0; i < pop.n; ++i) line[i] = ind[i] ? '1' : '0';
        os << line << '\n';
    }
}

inline Population load_population(std::istream& is) {
    Population pop;
    int s = 0;
    if (!(is >> pop.n >> s >> pop.seed.master >> pop.seed.stream))
        throw ParameterError("load_population: malformed header");
    pop.members.reserve(static_cast<std::size_t>(s));
    std::string line;
    for (int i = 0; i < s; ++i) {
        if (!(is >> line) || static_cast<int>(line.size()) != pop.n)
            throw ParameterError("load_population: bad individual at line " +
                                 std::to_string(i + 2));
        Individual ind(static_cast<std::size_t>(pop.n));
        for (int j = 0; j < pop.n; ++j) {
            if (line[j] != '0' && line[j] != '1')
                throw ParameterError("load_population: expected 0/1 string");
            ind[j] = line[j] == '1';
        }
        pop.members.push_back(std::move(ind));
    }
    return pop;
}

}  // namespace sll
