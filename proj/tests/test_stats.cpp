#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "sll/rng.hpp"
#include "sll/stats.hpp"

using namespace sll;
using Catch::Matchers::WithinAbs;

TEST_CASE("entropy of simple marginals") {
    CHECK(entropy({1.0, 0.0}) == 0.0);
    CHECK(entropy({0.0, 1.0}) == 0.0);
    CHECK_THAT(entropy({0.5, 0.5}), WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("joint entropy and mutual information identities") {
    const PairDistribution uniform{{0.25, 0.25, 0.25, 0.25}};
    CHECK_THAT(joint_entropy(uniform), WithinAbs(std::log(4.0), 1e-15));
    CHECK_THAT(mutual_information(uniform, uniform.marginal_first(),
                                  uniform.marginal_second()),
               WithinAbs(0.0, 1e-15));

    const PairDistribution copy{{0.5, 0.0, 0.0, 0.5}};
    CHECK_THAT(mutual_information(copy, copy.marginal_first(), copy.marginal_second()),
               WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("distance conventions") {
    const PairDistribution constant{{1.0, 0.0, 0.0, 0.0}};
    CHECK(distance(constant, constant.marginal_first(), constant.marginal_second()) ==
          0.0);

    const PairDistribution indep{{0.25, 0.25, 0.25, 0.25}};
    CHECK_THAT(distance(indep, indep.marginal_first(), indep.marginal_second()),
               WithinAbs(1.0, 1e-15));

    const PairDistribution copy{{0.5, 0.0, 0.0, 0.5}};
    CHECK_THAT(distance(copy, copy.marginal_first(), copy.marginal_second()),
               WithinAbs(0.0, 1e-15));
}

TEST_CASE("pair counts agree with direct estimation") {
    const ConcatenatedProblem problem(make_bimodal(6), 2);
    const auto pop = sample_optimized_population(problem, 500, {3, 1}, 1);
    PairCounts counts(pop.n);
    counts.add_all(pop);
    CHECK(counts.samples() == 500);
    for (int i = 0; i < pop.n; ++i) {
        for (int j = i + 1; j < pop.n; ++j) {
            const auto a = counts.distribution(i, j);
            const auto b = pair(pop, i, j);
            for (int s = 0; s < 4; ++s) REQUIRE(a.p[s] == b.p[s]);
        }
    }
    const auto m = marginal(pop, 4);
    const auto mf = counts.distribution(4, 5).marginal_first();
    CHECK(m.p0 == mf.p0);
    CHECK(m.p1 == mf.p1);
}

TEST_CASE("dsm matches the brute-force oracle") {
    Rng rng({17, 0});
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 3 + static_cast<int>(rng.next_below(4));  // 3..6
        const int s = 2 + static_cast<int>(rng.next_below(7));  // 2..8
        std::vector<Individual> members(static_cast<std::size_t>(s));
        for (auto& ind : members) {
            ind.resize(static_cast<std::size_t>(n));
            for (auto& b : ind) b = rng.next_bit() ? 1 : 0;
        }
        PairCounts counts(n);
        for (const auto& ind : members) counts.add(ind);
        std::vector<int> blocks(static_cast<std::size_t>(n), 0);
        const Dsm dsm = build_dsm(counts, blocks);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                REQUIRE_THAT(dsm.at(i, j),
                             WithinAbs(oracle::dsm_distance(members, i, j), 1e-12));
    }
}

TEST_CASE("dsm requires at least two samples") {
    PairCounts counts(4);
    counts.add({1, 0, 1, 0});
    CHECK_THROWS_AS(build_dsm(counts, {0, 0, 1, 1}), InsufficientSampleError);
}

TEST_CASE("perfect decomposition is a strict comparison") {
    Dsm dsm;
    dsm.n = 4;
    dsm.block_of = {0, 0, 1, 1};
    dsm.d.assign(16, 0.0);
    auto set = [&](int i, int j, double v) {
        dsm.at(i, j) = v;
        dsm.at(j, i) = v;
    };
    set(0, 1, 0.3);
    set(2, 3, 0.4);
    set(0, 2, 0.9);
    set(0, 3, 0.9);
    set(1, 2, 0.9);
    set(1, 3, 0.9);
    CHECK(is_perfect_decomposition(dsm));

    set(1, 3, 0.4);  // equality with the max dependent entry: not perfect
    CHECK_FALSE(is_perfect_decomposition(dsm));
    set(1, 3, 0.39);
    CHECK_FALSE(is_perfect_decomposition(dsm));
}

TEST_CASE("perfect decomposition is vacuous for a single block") {
    Dsm dsm;
    dsm.n = 3;
    dsm.block_of = {0, 0, 0};
    dsm.d.assign(9, 0.77);
    CHECK(is_perfect_decomposition(dsm));
}

TEST_CASE("fill counts block mates among nearest genes") {
    Dsm dsm;
    dsm.n = 4;
    dsm.block_of = {0, 0, 1, 1};
    dsm.d.assign(16, 0.0);
    auto set = [&](int i, int j, double v) {
        dsm.at(i, j) = v;
        dsm.at(j, i) = v;
    };
    set(0, 1, 0.2);
    set(2, 3, 0.2);
    set(0, 2, 0.8);
    set(0, 3, 0.8);
    set(1, 2, 0.8);
    set(1, 3, 0.8);
    CHECK(fill(dsm, 0).fill == 1.0);
    CHECK(fill_summary(dsm) == 1.0);

    set(0, 1, 0.9);  // gene 0's mate is now its farthest neighbour
    CHECK(fill(dsm, 0).fill == 0.0);

    set(0, 1, 0.8);  // four-way tie; optimistic tie-break credits the mate
    const auto f = fill(dsm, 0);
    CHECK(f.fill == 1.0);
    CHECK(f.ties_at_cutoff == 3);
}

TEST_CASE("fill csv output is stable") {
    Dsm dsm;
    dsm.n = 2;
    dsm.block_of = {0, 1};
    dsm.d = {0.0, 0.5, 0.5, 0.0};
    std::ostringstream os;
    write_fill_csv(os, dsm);
    CHECK(os.str() == "gene,fill,ties_at_cutoff\n0,1,0\n1,1,0\n");
}
