#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "sll/fihc.hpp"

using namespace sll;

TEST_CASE("rng streams are deterministic and distinct") {
    Rng a({42, 7}), b({42, 7}), c({42, 8});
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
    }
    bool differs = false;
    Rng a2({42, 7});
    for (int i = 0; i < 100; ++i) differs |= a2.next_u64() != c.next_u64();
    CHECK(differs);
}

TEST_CASE("derive gives order-independent sub-streams") {
    const RngSeed base{123, 456};
    CHECK(base.derive(3).master == base.derive(3).master);
    CHECK(base.derive(3).stream == 3);
    CHECK(base.derive(0).master == base.derive(9).master);
}

TEST_CASE("next_below stays in range and covers all values") {
    Rng rng({1, 0});
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 10000; ++i) {
        const auto v = rng.next_below(7);
        REQUIRE(v < 7);
        ++seen[v];
    }
    CHECK(*std::min_element(seen.begin(), seen.end()) > 0);
}

TEST_CASE("permutation is a permutation") {
    Rng rng({5, 5});
    for (int n : {1, 2, 7, 31}) {
        auto p = rng.permutation(n);
        std::sort(p.begin(), p.end());
        for (int i = 0; i < n; ++i) REQUIRE(p[i] == i);
    }
}

TEST_CASE("fihc reaches a local optimum and never decreases fitness") {
    const ConcatenatedProblem problem(make_bimodal(6), 4);
    for (std::uint64_t rep = 0; rep < 10000; ++rep) {
        Rng rng(RngSeed{11, 0}.derive(rep));
        Individual x(static_cast<std::size_t>(problem.n()));
        for (auto& b : x) b = rng.next_bit() ? 1 : 0;
        const double before = problem.evaluate(x);
        const Individual y = fihc_optimize(problem, x, rng);
        const double after = problem.evaluate(y);
        REQUIRE(after >= before);
        // local optimality: no single flip improves
        const auto bu = problem.block_unitations(y);
        for (int gene = 0; gene < problem.n(); ++gene) {
            const int b = gene / problem.k();
            const int nu = y[gene] ? bu[b] - 1 : bu[b] + 1;
            REQUIRE(problem.g(nu) <= problem.g(bu[b]));
        }
        // idempotence: a second pass changes nothing
        Rng rng2({99, rep});
        REQUIRE(fihc_optimize(problem, y, rng2) == y);
    }
}

TEST_CASE("fihc block locality") {
    // each block's outcome depends only on its own genes: optimizing the
    // concatenation and optimizing one block with the restricted order agree
    const ConcatenatedProblem whole(make_reverted_bimodal(6), 3);
    const ConcatenatedProblem single(make_reverted_bimodal(6), 1);
    for (std::uint64_t rep = 0; rep < 300; ++rep) {
        Rng rng(RngSeed{77, 1}.derive(rep));
        Individual x(static_cast<std::size_t>(whole.n()));
        for (auto& b : x) b = rng.next_bit() ? 1 : 0;
        const std::vector<int> order = rng.permutation(whole.n());

        Individual y = x;
        auto bu = whole.block_unitations(y);
        bool modified = true;
        while (modified) {
            modified = false;
            for (int gene : order) {
                const int b = gene / 6;
                const int nu = y[gene] ? bu[b] - 1 : bu[b] + 1;
                if (whole.g(nu) > whole.g(bu[b])) {
                    y[gene] ^= 1;
                    bu[b] = nu;
                    modified = true;
                }
            }
        }
        for (int b = 0; b < 3; ++b) {
            // same sweep restricted to block b's genes
            Individual xb(x.begin() + b * 6, x.begin() + (b + 1) * 6);
            Individual yb = xb;
            int u = unitation(yb);
            bool mod = true;
            while (mod) {
                mod = false;
                for (int gene : order) {
                    if (gene / 6 != b) continue;
                    const int g = gene % 6;
                    const int nu = yb[g] ? u - 1 : u + 1;
                    if (single.g(nu) > single.g(u)) {
                        yb[g] ^= 1;
                        u = nu;
                        mod = true;
                    }
                }
            }
            REQUIRE(Individual(y.begin() + b * 6, y.begin() + (b + 1) * 6) == yb);
        }
    }
}

TEST_CASE("population sampling is thread-count invariant") {
    const ConcatenatedProblem problem(make_bimodal(6), 2);
    const RngSeed seed{2024, 3};
    const auto serial = sample_optimized_population(problem, 200, seed, 1);
    const auto parallel = sample_optimized_population(problem, 200, seed, 8);
    CHECK(serial.members == parallel.members);
}

TEST_CASE("chunked extension equals one-shot sampling") {
    const ConcatenatedProblem problem(make_reverted_bimodal(6), 2);
    const RngSeed seed{7, 7};
    auto pop = sample_optimized_population(problem, 50, seed, 2);
    extend_population(pop, problem, 30, 2);
    extend_population(pop, problem, 20, 1);
    const auto oneshot = sample_optimized_population(problem, 100, seed, 4);
    CHECK(pop.members == oneshot.members);
}

TEST_CASE("population dump/load round trip") {
    const ConcatenatedProblem problem(make_bimodal(6), 2);
    const auto pop = sample_optimized_population(problem, 25, {13, 1}, 1);
    std::stringstream ss;
    dump_population(ss, pop);
    const auto loaded = load_population(ss);
    CHECK(loaded.n == pop.n);
    CHECK(loaded.seed.master == pop.seed.master);
    CHECK(loaded.seed.stream == pop.seed.stream);
    CHECK(loaded.members == pop.members);

    std::stringstream bad("12 1 0 0\n01010\n");
    CHECK_THROWS_AS(load_population(bad), ParameterError);
}
