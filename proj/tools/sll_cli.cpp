#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sll/harness.hpp"
#include "sll/linkage.hpp"
#include "sll/theory.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitAllCensored = 3;

sll::UnitationFunction resolve_function(const std::string& family, int k,
                                        const std::string& file) {
    if (!file.empty()) return sll::load_function_file(file);
    if (family.empty())
        throw sll::ParameterError("specify --function or --function-file");
    return sll::builtin(family, k);
}

std::string rational_str(const sll::Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

nlohmann::json profile_json(const sll::MonotonicityProfile& p) {
    return {{"k", p.k}, {"maxima", p.maxima}, {"minima", p.minima}};
}

nlohmann::json distribution_json(const sll::TheoreticalPairDistribution& d) {
    return {{"q1", rational_str(d.q1)},
            {"q2", rational_str(d.q2)},
            {"q3", rational_str(d.q3)},
            {"q1_double", sll::to_double(d.q1)},
            {"q2_double", sll::to_double(d.q2)},
            {"q3_double", sll::to_double(d.q3)},
            {"symmetric", d.symmetric()},
            {"undecidable", sll::is_sll_undecidable(d)}};
}

nlohmann::json estimate_json(const sll::EstimateResult& e) {
    return {{"rho", e.rho},
            {"q_of_rho", e.q_of_rho},
            {"exponent", e.exponent},
            {"pair_budget", e.pair_budget},
            {"s_min", e.s_min},
            {"alpha", e.alpha},
            {"q_tilde_from_01", e.q_tilde_from_01}};
}

void emit(const nlohmann::json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw sll::ParameterError("cannot open output file '" + out_path + "'");
        out << j.dump(2) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical linkage learning analysis over unitation problems"};
    app.require_subcommand(1);

    std::string family, function_file, out_path, csv_path, config_path;
    int k = 10, r = 2;
    double alpha = 0.1;
    std::uint64_t seed = 0, stream = 0;

    auto add_function_opts = [&](CLI::App* cmd) {
        cmd->add_option("--function", family,
                        "built-in family (trap, bimodal, reverted, noised_bimodal, "
                        "ridge2, ridge4)");
        cmd->add_option("-k,--k", k, "order of one block");
        cmd->add_option("--function-file", function_file,
                        "JSON file with fields k, values[, name]");
    };

    // estimate ------------------------------------------------------------
    auto* est = app.add_subcommand(
        "estimate", "sufficient population size for a perfect decomposition");
    add_function_opts(est);
    est->add_option("-r,--r", r, "number of concatenated blocks");
    est->add_option("--alpha", alpha, "allowed failure probability");
    est->add_option("-o,--output", out_path, "write JSON here instead of stdout");

    // theory-dist ---------------------------------------------------------
    auto* dist = app.add_subcommand(
        "theory-dist", "exact dependent-pair distribution of a function");
    add_function_opts(dist);
    dist->add_option("-o,--output", out_path, "write JSON here instead of stdout");

    // scan-undecidable ----------------------------------------------------
    int k_min = 3, k_max = 16, n_max = 4;
    auto* scan = app.add_subcommand(
        "scan-undecidable", "enumerate profiles whose distribution is independent");
    scan->add_option("--k-min", k_min, "smallest block order");
    scan->add_option("--k-max", k_max, "largest block order");
    scan->add_option("--n-max", n_max, "largest number of interior maxima");
    scan->add_option("-o,--output", out_path, "write JSON here instead of stdout");

    // experiment ----------------------------------------------------------
    auto* exp = app.add_subcommand(
        "experiment", "empirical population-size growth experiment");
    exp->add_option("-c,--config", config_path, "JSON experiment config")
        ->required();
    exp->add_option("-o,--output", out_path, "write JSON here instead of stdout");
    exp->add_option("--csv", csv_path, "also write per-repeat CSV here");

    // fill ----------------------------------------------------------------
    int sample_size = 1000;
    unsigned threads = 0;
    auto* fill_cmd = app.add_subcommand(
        "fill", "DSM and Fill statistics of a sampled optimized population");
    add_function_opts(fill_cmd);
    fill_cmd->add_option("-r,--r", r, "number of concatenated blocks");
    fill_cmd->add_option("-s,--size", sample_size, "population size");
    fill_cmd->add_option("--seed", seed, "master seed");
    fill_cmd->add_option("--stream", stream, "stream id");
    fill_cmd->add_option("--threads", threads, "worker threads (0 = all)");
    fill_cmd->add_option("-o,--output", out_path, "write JSON here instead of stdout");
    fill_cmd->add_option("--csv", csv_path, "write the per-gene fill CSV here");
    std::string dsm_csv_path;
    fill_cmd->add_option("--dsm-csv", dsm_csv_path, "write the full DSM CSV here");

    // optimize ------------------------------------------------------------
    int pop_size = 64;
    std::int64_t budget = 1'000'000;
    auto* opt = app.add_subcommand(
        "optimize", "linkage-tree optimizer with optimal mixing");
    add_function_opts(opt);
    opt->add_option("-r,--r", r, "number of concatenated blocks");
    opt->add_option("-p,--pop-size", pop_size, "population size");
    opt->add_option("-b,--budget", budget, "fitness evaluation budget");
    opt->add_option("--seed", seed, "master seed");
    opt->add_option("--stream", stream, "stream id");
    opt->add_option("-o,--output", out_path, "write JSON here instead of stdout");
    opt->add_option("--csv", csv_path, "write the fill trace CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (est->parsed()) {
            const auto g = resolve_function(family, k, function_file);
            const auto d = sll::theoretical_distribution(sll::extract_profile(g));
            const auto e = sll::estimate_s_min(d.canonical_symmetric(), g.k, r, alpha);
            emit({{"function", sll::function_to_json(g)},
                  {"r", r},
                  {"distribution", distribution_json(d)},
                  {"estimate", estimate_json(e)}},
                 out_path);
        } else if (dist->parsed()) {
            const auto g = resolve_function(family, k, function_file);
            const auto p = sll::extract_profile(g);
            const auto d = sll::theoretical_distribution(p);
            emit({{"function", sll::function_to_json(g)},
                  {"profile", profile_json(p)},
                  {"distribution", distribution_json(d)}},
                 out_path);
        } else if (scan->parsed()) {
            const auto hits = sll::scan_undecidable(k_min, k_max, n_max);
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& h : hits)
                arr.push_back({{"profile", profile_json(h.profile)},
                               {"distribution", distribution_json(h.distribution)}});
            emit({{"k_min", k_min},
                  {"k_max", k_max},
                  {"n_max", n_max},
                  {"matches", arr}},
                 out_path);
        } else if (exp->parsed()) {
            std::ifstream in(config_path);
            if (!in)
                throw sll::ParameterError("cannot open config '" + config_path + "'");
            nlohmann::json cfg_json;
            in >> cfg_json;
            const auto cfg = sll::parse_experiment_config(cfg_json);
            const auto rec = sll::run_growth_experiment(cfg);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv)
                    throw sll::ParameterError("cannot open '" + csv_path + "'");
                sll::write_experiment_csv(csv, rec);
            }
            emit({{"config", sll::experiment_config_to_json(cfg)},
                  {"record", sll::experiment_record_to_json(rec)}},
                 out_path);
            if (rec.censored == static_cast<int>(rec.final_sizes.size()))
                return kExitAllCensored;
        } else if (fill_cmd->parsed()) {
            const auto g = resolve_function(family, k, function_file);
            const sll::ConcatenatedProblem problem(g, r);
            const auto pop = sll::sample_optimized_population(
                problem, sample_size, {seed, stream},
                threads == 0 ? sll::hardware_threads() : threads);
            const auto dsm = sll::build_dsm(pop, problem);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv)
                    throw sll::ParameterError("cannot open '" + csv_path + "'");
                sll::write_fill_csv(csv, dsm);
            }
            if (!dsm_csv_path.empty()) {
                std::ofstream csv(dsm_csv_path);
                if (!csv)
                    throw sll::ParameterError("cannot open '" + dsm_csv_path + "'");
                sll::write_dsm_csv(csv, dsm);
            }
            emit({{"function", sll::function_to_json(g)},
                  {"r", r},
                  {"size", sample_size},
                  {"seed", seed},
                  {"stream", stream},
                  {"perfect", sll::is_perfect_decomposition(dsm)},
                  {"fill_summary", sll::fill_summary(dsm)}},
                 out_path);
        } else if (opt->parsed()) {
            const auto g = resolve_function(family, k, function_file);
            const sll::ConcatenatedProblem problem(g, r);
            const auto res =
                sll::run_lt_gomea_lite(problem, pop_size, budget, {seed, stream});
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv)
                    throw sll::ParameterError("cannot open '" + csv_path + "'");
                sll::write_fill_trace_csv(csv, res);
            }
            nlohmann::json j{{"function", sll::function_to_json(g)},
                             {"r", r},
                             {"pop_size", pop_size},
                             {"budget", budget},
                             {"seed", seed},
                             {"stream", stream},
                             {"best_fitness", res.best_fitness},
                             {"optimum", problem.optimum()},
                             {"solved", res.best_fitness == problem.optimum()},
                             {"ffe_used", res.ffe_used},
                             {"generations", res.fill_trace.size()}};
            if (res.ffe_to_optimum) j["ffe_to_optimum"] = *res.ffe_to_optimum;
            emit(j, out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
