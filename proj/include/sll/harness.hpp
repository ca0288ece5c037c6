#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sll/common.hpp"
#include "sll/fihc.hpp"
#include "sll/function.hpp"
#include "sll/parallel.hpp"
#include "sll/stats.hpp"
#include "sll/theory.hpp"

namespace sll {

using nlohmann::json;

// Function <-> file -------------------------------------------------------

inline json function_to_json(const UnitationFunction& g) {
    return json{{"k", g.k}, {"name", g.name}, {"values", g.values}};
}

inline UnitationFunction function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("values"))
        throw ParameterError("function file: need fields k and values");
    return {j.at("k").get<int>(), j.at("values").get<std::vector<double>>(),
            j.value("name", std::string("custom"))};
}

inline UnitationFunction load_function_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open function file '" + path + "'");
    json j;
    in >> j;
    return function_from_json(j);
}

// Percentile --------------------------------------------------------------

/// Linear-interpolation percentile: index h = (m-1)q between order
/// statistics. 100 integer samples can yield fractional values like 1337.60.
inline double percentile(std::vector<double> samples, double q) {
    if (samples.empty()) throw ParameterError("percentile: empty sample set");
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("percentile: q must lie in (0,1)");
    std::sort(samples.begin(), samples.end());
    const double h = (static_cast<double>(samples.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= samples.size()) return samples.back();
    const double frac = h - static_cast<double>(lo);
    return samples[lo] + frac * (samples[lo + 1] - samples[lo]);
}

// Experiment config -------------------------------------------------------

struct ExperimentConfig {
    UnitationFunction function;
    int r = 2;
    int repeats = 100;
    double alpha = 0.1;
    std::int64_t initial_size = 2;
    std::int64_t increment = 1;
    bool refine = false;               // binary-search refinement for increment > 1
    std::int64_t max_individuals = 50'000'000;
    double time_limit_seconds = 0.0;   // 0 = unlimited
    RngSeed seed;
    unsigned threads = 0;              // 0 = hardware concurrency

    unsigned effective_threads() const {
        return threads == 0 ? hardware_threads() : threads;
    }
};

inline ExperimentConfig parse_experiment_config(const json& j) {
    static const char* known[] = {"version",   "function",  "r",
                                  "repeats",   "alpha",     "initial_size",
                                  "increment", "refine",    "max_individuals",
                                  "time_limit_seconds",     "seed",
                                  "stream",    "threads"};
    if (!j.is_object()) throw ParameterError("experiment config: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* f) {
                return it.key() == f;
            }) == std::end(known))
            throw ParameterError("experiment config: unknown field '" + it.key() + "'");
    }
    if (j.value("version", 1) != 1)
        throw ParameterError("experiment config: unsupported version");
    ExperimentConfig cfg;
    const json& fn = j.at("function");
    if (fn.contains("file")) {
        cfg.function = load_function_file(fn.at("file").get<std::string>());
    } else if (fn.contains("family")) {
        cfg.function = builtin(fn.at("family").get<std::string>(),
                               fn.value("k", 10));
    } else {
        cfg.function = function_from_json(fn);
    }
    cfg.r = j.value("r", 2);
    cfg.repeats = j.value("repeats", 100);
    cfg.alpha = j.value("alpha", 0.1);
    cfg.initial_size = j.value("initial_size", std::int64_t{2});
    cfg.increment = j.value("increment", std::int64_t{1});
    cfg.refine = j.value("refine", false);
    cfg.max_individuals = j.value("max_individuals", std::int64_t{50'000'000});
    cfg.time_limit_seconds = j.value("time_limit_seconds", 0.0);
    cfg.seed.master = j.value("seed", std::uint64_t{0});
    cfg.seed.stream = j.value("stream", std::uint64_t{0});
    cfg.threads = j.value("threads", 0u);
    if (cfg.repeats < 1) throw ParameterError("experiment config: repeats must be >= 1");
    if (cfg.increment < 1) throw ParameterError("experiment config: increment must be >= 1");
    if (cfg.initial_size < 2)
        throw ParameterError("experiment config: initial_size must be >= 2");
    if (cfg.max_individuals < cfg.initial_size)
        throw ParameterError("experiment config: max_individuals too small");
    return cfg;
}

inline json experiment_config_to_json(const ExperimentConfig& cfg) {
    return json{{"version", 1},
                {"function", function_to_json(cfg.function)},
                {"r", cfg.r},
                {"repeats", cfg.repeats},
                {"alpha", cfg.alpha},
                {"initial_size", cfg.initial_size},
                {"increment", cfg.increment},
                {"refine", cfg.refine},
                {"max_individuals", cfg.max_individuals},
                {"time_limit_seconds", cfg.time_limit_seconds},
                {"seed", cfg.seed.master},
                {"stream", cfg.seed.stream},
                {"threads", cfg.threads}};
}

// Growth experiment -------------------------------------------------------

struct ExperimentRecord {
    std::vector<std::int64_t> final_sizes;  // -1 = censored
    int censored = 0;
    std::optional<double> p90, mean, min, max;
    std::optional<EstimateResult> estimate;
    std::optional<double> ratio;  // s_min / 90th percentile
};

namespace detail {

/// One repeat: grow the FIHC-optimized population by the increment, rebuild
/// the DSM from additive pair counts, test it for perfection, stop
/// at the first success or at the cap. Returns the final size, or -1 when
/// censored.
inline std::int64_t growth_repeat(const ConcatenatedProblem& problem,
                                  const ExperimentConfig& cfg, RngSeed repeat_seed,
                                  std::chrono::steady_clock::time_point deadline,
                                  bool use_deadline) {
    const int n = problem.n();
    std::vector<int> blocks(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) blocks[i] = problem.block_of(i);
    PairCounts counts(n);
    std::int64_t size = 0;
    auto grow_to = [&](std::int64_t target) {
        while (size < target) {
            counts.add(sample_member(problem, repeat_seed,
                                     static_cast<std::uint64_t>(size)));
            ++size;
        }
    };
    auto perfect_at = [&](const PairCounts& c) {
        return is_perfect_decomposition(build_dsm(c, blocks));
    };

    grow_to(cfg.initial_size);
    while (true) {
        if (perfect_at(counts)) break;
        if (size >= cfg.max_individuals) return -1;
        if (use_deadline && std::chrono::steady_clock::now() > deadline) return -1;
        grow_to(std::min(cfg.max_individuals, size + cfg.increment));
    }

    if (cfg.refine && cfg.increment > 1 && size > cfg.initial_size) {
        // smallest tested size achieving perfection, via resampling prefixes
        std::int64_t lo = std::max(cfg.initial_size, size - cfg.increment);
        std::int64_t hi = size;  // known perfect
        while (lo + 1 < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            PairCounts probe(n);
            for (std::int64_t i = 0; i < mid; ++i)
                probe.add(sample_member(problem, repeat_seed,
                                        static_cast<std::uint64_t>(i)));
            if (perfect_at(probe)) hi = mid;
            else lo = mid;
        }
        size = hi;
    }
    return size;
}

}  // namespace detail

inline ExperimentRecord run_growth_experiment(const ExperimentConfig& cfg) {
    const ConcatenatedProblem problem(cfg.function, cfg.r);
    ExperimentRecord rec;
    rec.final_sizes.assign(static_cast<std::size_t>(cfg.repeats), -1);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(cfg.time_limit_seconds));
    const bool use_deadline = cfg.time_limit_seconds > 0.0;
    parallel_for(static_cast<std::size_t>(cfg.repeats), cfg.effective_threads(),
                 [&](std::size_t rep) {
                     rec.final_sizes[rep] = detail::growth_repeat(
                         problem, cfg, cfg.seed.derive(rep), deadline, use_deadline);
                 });

    std::vector<double> done;
    for (auto v : rec.final_sizes) {
        if (v < 0) ++rec.censored;
        else done.push_back(static_cast<double>(v));
    }
    if (!done.empty()) {
        rec.p90 = percentile(done, 0.9);
        rec.mean = std::accumulate(done.begin(), done.end(), 0.0) / done.size();
        rec.min = *std::min_element(done.begin(), done.end());
        rec.max = *std::max_element(done.begin(), done.end());
    }

    // Matching estimate, when the theory applies (symmetric interval, q~ > 1/4).
    try {
        const auto dist = theoretical_distribution(extract_profile(cfg.function));
        if (dist.symmetric()) {
            rec.estimate = estimate_s_min(dist.canonical_symmetric(),
                                          problem.k(), cfg.r, cfg.alpha);
            if (rec.p90 && *rec.p90 > 0.0)
                rec.ratio = static_cast<double>(rec.estimate->s_min) / *rec.p90;
        }
    } catch (const UndecidableError&) {
    } catch (const PlateauError&) {
    }
    return rec;
}

inline json experiment_record_to_json(const ExperimentRecord& rec) {
    json j{{"repeats", rec.final_sizes.size()},
           {"censored", rec.censored},
           {"final_sizes", rec.final_sizes}};
    if (rec.p90) j["p90"] = *rec.p90;
    if (rec.mean) j["mean"] = *rec.mean;
    if (rec.min) j["min"] = *rec.min;
    if (rec.max) j["max"] = *rec.max;
    if (rec.estimate) {
        j["estimate"] = json{{"rho", rec.estimate->rho},
                             {"q_of_rho", rec.estimate->q_of_rho},
                             {"exponent", rec.estimate->exponent},
                             {"pair_budget", rec.estimate->pair_budget},
                             {"s_min", rec.estimate->s_min},
                             {"alpha", rec.estimate->alpha}};
    }
    if (rec.ratio) j["ratio"] = *rec.ratio;
    return j;
}

inline void write_experiment_csv(std::ostream& os, const ExperimentRecord& rec) {
    os << "repeat,final_size,censored\n";
    for (std::size_t i = 0; i < rec.final_sizes.size(); ++i) {
        const auto v = rec.final_sizes[i];
        os << i << ',' << (v < 0 ? 0 : v) << ',' << (v < 0 ? 1 : 0) << '\n';
    }
}

}  // namespace sll
