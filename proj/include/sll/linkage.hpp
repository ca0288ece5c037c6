#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "sll/common.hpp"
#include "sll/fihc.hpp"
#include "sll/stats.hpp"

namespace sll {

/// Binary merge hierarchy over genes built from a DSM with average linkage
/// (UPGMA). Leaves are nodes 0..n-1, the root is the last node. Every node
/// except the root may serve as a mixing mask.
struct LinkageTree {
    struct Node {
        std::vector<int> genes;  // sorted mask
        int left = -1, right = -1;
        double height = 0.0;     // inter-cluster distance at the merge
    };
    int n = 0;
    std::vector<Node> nodes;  // 2n-1 nodes, leaves first

    int root() const { return static_cast<int>(nodes.size()) - 1; }

    /// Indices of all usable mixing masks (everything but the root).
    std::vector<int> mask_indices() const {
        std::vector<int> idx(nodes.size() - 1);
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) idx[i] = static_cast<int>(i);
        return idx;
    }
};

/// Agglomerative UPGMA over the DSM. The pair with minimal average distance
/// merges next; ties go to the pair whose clusters have the lexicographically
/// smallest (min gene, min gene) indices.
inline LinkageTree build_linkage_tree(const Dsm& dsm) {
    const int n = dsm.n;
    if (n < 2) throw ParameterError("build_linkage_tree: need n >= 2");
    LinkageTree tree;
    tree.n = n;
    tree.nodes.reserve(static_cast<std::size_t>(2 * n - 1));
    for (int i = 0; i < n; ++i) tree.nodes.push_back({{i}, -1, -1, 0.0});

    struct Cluster {
        int node;   // index into tree.nodes
        int size;
        int lead;   // smallest gene, for tie-breaking
    };
    std::vector<Cluster> active;
    for (int i = 0; i < n; ++i) active.push_back({i, 1, i});
    // dist[a][b]: average linkage between active clusters a, b
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) dist[a][b] = dsm.at(a, b);

    while (active.size() > 1) {
        const std::size_t m = active.size();
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a + 1; b < m; ++b) {
                const double v = dist[a][b];
                auto key = std::minmax(active[a].lead, active[b].lead);
                auto best_key = std::minmax(active[best_a].lead, active[best_b].lead);
                if (v < best || (v == best && key < best_key)) {
                    best = v;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        LinkageTree::Node merged;
        merged.left = active[best_a].node;
        merged.right = active[best_b].node;
        merged.height = best;
        const auto& ga = tree.nodes[merged.left].genes;
        const auto& gb = tree.nodes[merged.right].genes;
        std::merge(ga.begin(), ga.end(), gb.begin(), gb.end(),
                   std::back_inserter(merged.genes));
        const int merged_node = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(std::move(merged));

        // Lance-Williams update for average linkage, then compact the table.
        const int sa = active[best_a].size, sb = active[best_b].size;
        std::vector<double> drow(m, 0.0);
        for (std::size_t c = 0; c < m; ++c) {
            if (c == best_a || c == best_b) continue;
            drow[c] = (sa * dist[best_a][c] + sb * dist[best_b][c]) / (sa + sb);
        }
        Cluster combined{merged_node, sa + sb,
                         std::min(active[best_a].lead, active[best_b].lead)};
        // remove b then a (b > a), append combined
        auto drop = [&](std::size_t idx) {
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(idx));
            drow.erase(drow.begin() + static_cast<std::ptrdiff_t>(idx));
            dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(idx));
            for (auto& r : dist) r.erase(r.begin() + static_cast<std::ptrdiff_t>(idx));
        };
        drop(best_b);
        drop(best_a);
        active.push_back(combined);
        for (auto& r : dist) r.push_back(0.0);
        dist.emplace_back(active.size(), 0.0);
        for (std::size_t c = 0; c + 1 < active.size(); ++c) {
            dist[active.size() - 1][c] = drow[c];
            dist[c][active.size() - 1] = drow[c];
        }
    }
    return tree;
}

struct MixingOutcome {
    bool accepted = false;
    double fitness_before = 0.0;
    double fitness_after = 0.0;
    std::int64_t evaluations_used = 0;
};

namespace detail {

/// In-place OM step over cached fitness and block unitations. Copies donor
/// genes at the mask into the source and keeps the change iff fitness does
/// not decrease. A no-op mask (donor equals source there) costs nothing.
template <typename OnEval>
MixingOutcome mix_in_place(Individual& source, double& fitness,
                           std::vector<int>& block_u, const Individual& donor,
                           const std::vector<int>& mask,
                           const ConcatenatedProblem& problem, OnEval&& on_eval) {
    MixingOutcome out;
    out.fitness_before = fitness;
    std::vector<int> changed;
    for (int gene : mask)
        if (source[gene] != donor[gene]) changed.push_back(gene);
    if (changed.empty()) {
        out.accepted = true;
        out.fitness_after = fitness;
        return out;
    }
    const int k = problem.k();
    double delta = 0.0;
    std::vector<std::pair<int, int>> touched;  // block -> new unitation
    for (int gene : changed) {
        const int b = gene / k;
        auto it = std::find_if(touched.begin(), touched.end(),
                               [b](auto& t) { return t.first == b; });
        if (it == touched.end()) touched.emplace_back(b, block_u[b]);
    }
    for (auto& [b, u] : touched) {
        const double before = problem.g(u);
        int nu = u;
        for (int gene : changed)
            if (gene / k == b) nu += donor[gene] ? 1 : -1;
        delta += problem.g(nu) - before;
        u = nu;
    }
    out.evaluations_used = 1;
    out.fitness_after = fitness + delta;
    on_eval(out.fitness_after);
    if (out.fitness_after >= out.fitness_before) {
        out.accepted = true;
        for (int gene : changed) source[gene] = donor[gene];
        for (auto& [b, u] : touched) block_u[b] = u;
        fitness = out.fitness_after;
    } else {
        out.fitness_after = out.fitness_before;
    }
    return out;
}

}  // namespace detail

/// Standalone OM: returns the possibly modified copy of the source plus the
/// outcome record.
inline std::pair<Individual, MixingOutcome> optimal_mixing(
    const Individual& source, const Individual& donor,
    const std::vector<int>& mask, const ConcatenatedProblem& problem) {
    if (static_cast<int>(source.size()) != problem.n() ||
        static_cast<int>(donor.size()) != problem.n())
        throw DimensionError("optimal_mixing: genotype length mismatch");
    if (mask.empty()) throw ParameterError("optimal_mixing: empty mask");
    Individual result = source;
    double fitness = problem.evaluate(result);
    std::vector<int> bu = problem.block_unitations(result);
    MixingOutcome out = detail::mix_in_place(result, fitness, bu, donor, mask,
                                             problem, [](double) {});
    return {std::move(result), out};
}

struct FillTracePoint {
    int generation = 0;
    std::int64_t ffe_used = 0;
    double fill_summary = 0.0;
    double best_fitness = 0.0;
};

struct OptimizerResult {
    Individual best;
    double best_fitness = 0.0;
    std::vector<FillTracePoint> fill_trace;
    std::optional<std::int64_t> ffe_to_optimum;
    std::int64_t ffe_used = 0;
};

/// Minimal fixed-population LT+OM loop over an already initialized
/// population: per generation rebuild DSM and LT, then pass every individual
/// through OM over all non-root masks in random order with random donors.
/// Fitness never decreases. Stops at the global optimum (known for every
/// unitation problem) or when the FFE budget runs out.
inline OptimizerResult run_lt_gomea_lite(const ConcatenatedProblem& problem,
                                         std::vector<Individual> pop,
                                         std::int64_t budget_ffe, Rng& rng,
                                         std::int64_t ffe_already_used = 0,
                                         std::optional<std::int64_t> ffe_opt = {}) {
    const int pop_size = static_cast<int>(pop.size());
    if (pop_size < 2) throw ParameterError("run_lt_gomea_lite: pop_size must be >= 2");
    if (budget_ffe < 1) throw ParameterError("run_lt_gomea_lite: budget must be >= 1");
    const double optimum = problem.optimum();
    OptimizerResult res;
    res.ffe_to_optimum = ffe_opt;
    std::int64_t ffe = ffe_already_used;
    auto note_eval = [&](double f) {
        ++ffe;
        if (!res.ffe_to_optimum && f == optimum) res.ffe_to_optimum = ffe;
    };

    std::vector<double> fitness(static_cast<std::size_t>(pop_size));
    std::vector<std::vector<int>> block_u(static_cast<std::size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i) {
        fitness[i] = problem.evaluate(pop[i]);
        block_u[i] = problem.block_unitations(pop[i]);
    }

    std::vector<int> blocks(static_cast<std::size_t>(problem.n()));
    for (int i = 0; i < problem.n(); ++i) blocks[i] = problem.block_of(i);

    int generation = 0;
    while (true) {
        PairCounts counts(problem.n());
        for (const auto& ind : pop) counts.add(ind);
        const Dsm dsm = build_dsm(counts, blocks);
        const auto best_it = std::max_element(fitness.begin(), fitness.end());
        res.fill_trace.push_back(
            {generation, ffe, fill_summary(dsm), *best_it});
        if (*best_it == optimum || ffe >= budget_ffe) break;

        const LinkageTree tree = build_linkage_tree(dsm);
        const std::int64_t ffe_at_start = ffe;
        std::vector<int> mask_order = tree.mask_indices();
        for (int i = 0; i < pop_size && ffe < budget_ffe; ++i) {
            // random mask order per individual
            for (std::size_t a = mask_order.size(); a > 1; --a)
                std::swap(mask_order[a - 1],
                          mask_order[rng.next_below(static_cast<std::uint32_t>(a))]);
            for (int mi : mask_order) {
                if (ffe >= budget_ffe) break;
                int donor = static_cast<int>(rng.next_below(
                    static_cast<std::uint32_t>(pop_size - 1)));
                if (donor >= i) ++donor;
                detail::mix_in_place(pop[i], fitness[i], block_u[i], pop[donor],
                                     tree.nodes[mi].genes, problem, note_eval);
            }
        }
        // a generation with no evaluations means the population has collapsed
        // to copies of one genotype; further mixing cannot change anything
        if (ffe == ffe_at_start) break;
        ++generation;
    }
    const auto best_it = std::max_element(fitness.begin(), fitness.end());
    res.best = pop[static_cast<std::size_t>(best_it - fitness.begin())];
    res.best_fitness = *best_it;
    res.ffe_used = ffe;
    return res;
}

/// Convenience entry point: uniformly random population, FIHC-initialized
/// (each flip trial charged as one evaluation), then the LT+OM loop.
inline OptimizerResult run_lt_gomea_lite(const ConcatenatedProblem& problem,
                                         int pop_size, std::int64_t budget_ffe,
                                         RngSeed seed) {
    if (pop_size < 2) throw ParameterError("run_lt_gomea_lite: pop_size must be >= 2");
    if (budget_ffe < 1) throw ParameterError("run_lt_gomea_lite: budget must be >= 1");
    const double optimum = problem.optimum();
    const int k = problem.k();
    Rng rng(seed);
    std::int64_t ffe = 0;
    std::optional<std::int64_t> ffe_opt;
    auto note_eval = [&](double f) {
        ++ffe;
        if (!ffe_opt && f == optimum) ffe_opt = ffe;
    };
    std::vector<Individual> pop(static_cast<std::size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i) {
        Individual x(static_cast<std::size_t>(problem.n()));
        for (auto& b : x) b = rng.next_bit() ? 1 : 0;
        std::vector<int> bu = problem.block_unitations(x);
        const std::vector<int> order = rng.permutation(problem.n());
        double f_cur = problem.evaluate(x);
        note_eval(f_cur);
        bool modified = true;
        while (modified && ffe < budget_ffe) {
            modified = false;
            for (int gene : order) {
                const int b = gene / k;
                const int nu = x[gene] ? bu[b] - 1 : bu[b] + 1;
                const double f_new = f_cur - problem.g(bu[b]) + problem.g(nu);
                note_eval(f_new);
                if (f_new > f_cur) {
                    x[gene] ^= 1;
                    bu[b] = nu;
                    f_cur = f_new;
                    modified = true;
                }
            }
        }
        pop[i] = std::move(x);
    }
    return run_lt_gomea_lite(problem, std::move(pop), budget_ffe, rng, ffe, ffe_opt);
}

inline void write_fill_trace_csv(std::ostream& os, const OptimizerResult& res) {
    os << "generation,ffe_used,fill_summary,best_fitness\n";
    const auto flags = os.flags();
    os.precision(17);
    for (const auto& p : res.fill_trace)
        os << p.generation << ',' << p.ffe_used << ',' << p.fill_summary << ','
           << p.best_fitness << '\n';
    os.flags(flags);
}

}  // namespace sll
