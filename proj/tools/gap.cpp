// gap: command-line front end for the GAP location solvers.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gap/assign.hpp"
#include "gap/bench.hpp"
#include "gap/front_io.hpp"
#include "gap/metrics.hpp"
#include "gap/model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text;
}

std::string front_text(const gap::Front& front) {
    std::ostringstream os;
    gap::write_front_csv(os, front);
    return os.str();
}

json objectives_json(const gap::Objectives& o) {
    return {{"cost", o.cost}, {"distance", o.distance}, {"volume", o.volume}};
}

json params_json(const gap::SolveOptions& o) {
    return {{"pop_size", o.ea.pop_size},
            {"generations", o.ea.generations},
            {"p_crossover", o.ea.p_crossover},
            {"p_mutation", o.ea.p_mutation},
            {"elite_size", o.ea.elite_size},
            {"tournament_size", o.ea.tournament_size},
            {"seed", o.ea.seed},
            {"decoder", gap::to_string(o.ea.decoder)},
            {"damping", o.pr.damping},
            {"pr_tol", o.pr.tol},
            {"pr_max_iter", o.pr.max_iter}};
}

struct EaFlags {
    std::string decoder = "greedy";
};

void add_solver_flags(CLI::App* cmd, gap::SolveOptions& opt, EaFlags& flags) {
    cmd->add_option("--pop", opt.ea.pop_size, "population size")->capture_default_str();
    cmd->add_option("--gens", opt.ea.generations, "generations")->capture_default_str();
    cmd->add_option("--pc", opt.ea.p_crossover, "crossover probability")->capture_default_str();
    cmd->add_option("--pm", opt.ea.p_mutation, "per-gene mutation probability")->capture_default_str();
    cmd->add_option("--elite", opt.ea.elite_size, "SPEA2 archive size")->capture_default_str();
    cmd->add_option("--tournament", opt.ea.tournament_size, "tournament size")->capture_default_str();
    cmd->add_option("--seed", opt.ea.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--decoder", flags.decoder, "greedy|exact")->capture_default_str();
    cmd->add_option("--damping", opt.pr.damping, "PageRank damping")->capture_default_str();
    cmd->add_option("--pr-tol", opt.pr.tol, "PageRank L1 tolerance")->capture_default_str();
    cmd->add_option("--pr-max-iter", opt.pr.max_iter, "PageRank iteration cap")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiobjective garbage accumulation point location"};
    app.require_subcommand(1);

    // gen
    gap::ScenarioSpec spec;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
    gen->add_option("--generators", spec.n_generators, "number of generators")->capture_default_str();
    gen->add_option("--sites", spec.n_sites, "number of candidate sites")->capture_default_str();
    gen->add_option("--width", spec.width, "area width in m (0 = auto)")->capture_default_str();
    gen->add_option("--height", spec.height, "area height in m (0 = auto)")->capture_default_str();
    gen->add_option("--waste", spec.waste_mean, "mean waste per generator (m3)")->capture_default_str();
    gen->add_option("--jitter", spec.waste_jitter, "relative waste jitter")->capture_default_str();
    gen->add_option("--factor", spec.demand_factor, "demand factor 0.8|1.0|1.2")->capture_default_str();
    gen->add_option("--space", spec.site_space, "space per site (m2)")->capture_default_str();
    gen->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output instance JSON (default stdout)");

    // solve
    gap::SolveOptions solve_opt;
    EaFlags solve_flags;
    std::string solve_instance, solve_algorithm = "nsga2", solve_out, solve_meta;
    auto* solve = app.add_subcommand("solve", "compute a front with one algorithm");
    solve->add_option("--instance", solve_instance, "instance JSON")->required();
    solve->add_option("--algorithm", solve_algorithm, "nsga2|spea2|pr-vol|pr-dist|pr-cost|pr-mo")
        ->capture_default_str();
    add_solver_flags(solve, solve_opt, solve_flags);
    solve->add_option("--out", solve_out, "front CSV (default stdout)");
    solve->add_option("--meta", solve_meta, "run metadata JSON");

    // oracle
    std::string oracle_instance, oracle_decoder = "greedy", oracle_out;
    auto* oracle = app.add_subcommand("oracle", "exhaustive true front for small instances");
    oracle->add_option("--instance", oracle_instance, "instance JSON")->required();
    oracle->add_option("--decoder", oracle_decoder, "greedy|exact")->capture_default_str();
    oracle->add_option("--out", oracle_out, "front CSV (default stdout)");

    // metrics
    std::vector<std::string> metric_fronts;
    std::string metric_reference, metric_out;
    auto* metrics = app.add_subcommand("metrics", "quality metrics of fronts against their pooled reference");
    metrics->add_option("--fronts", metric_fronts, "front CSV files")->required();
    metrics->add_option("--reference", metric_reference, "reference front CSV (default: pool of --fronts)");
    metrics->add_option("--out", metric_out, "metrics JSON (default stdout)");

    // batch
    gap::SolveOptions batch_opt;
    EaFlags batch_flags;
    std::string batch_instance, batch_out;
    std::vector<std::string> batch_algorithms{"nsga2", "spea2", "pr-vol", "pr-dist", "pr-cost", "pr-mo"};
    std::size_t batch_runs = 30;
    auto* batch = app.add_subcommand("batch", "multi-seed experiment with aggregated metrics");
    batch->add_option("--instance", batch_instance, "instance JSON")->required();
    batch->add_option("--algorithms", batch_algorithms, "algorithms to run")->delimiter(',')->capture_default_str();
    batch->add_option("--runs", batch_runs, "runs per MOEA")->capture_default_str();
    add_solver_flags(batch, batch_opt, batch_flags);
    batch->add_option("--out-dir", batch_out, "directory for report.json and per-run fronts")->required();

    // check
    std::string check_instance, check_genes, check_front, check_decoder = "greedy";
    auto* check = app.add_subcommand("check", "report constraint violations of plans");
    check->add_option("--instance", check_instance, "instance JSON")->required();
    auto* genes_opt = check->add_option("--genes", check_genes, "space- or comma-separated configuration ids");
    auto* front_opt = check->add_option("--front", check_front, "front CSV whose plans to check");
    genes_opt->excludes(front_opt);
    check->add_option("--decoder", check_decoder, "greedy|exact")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            write_text(gen_out, gap::instance_to_json(gap::generate_instance(spec)).dump(2) + "\n");
        } else if (*solve) {
            solve_opt.ea.decoder = gap::parse_decoder(solve_flags.decoder);
            const auto algorithm = gap::parse_algorithm(solve_algorithm);
            const auto instance = gap::load_instance(solve_instance);
            const auto start = std::chrono::steady_clock::now();
            const auto front = gap::solve(instance, algorithm, solve_opt);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_text(solve_out, front_text(front));
            if (!solve_meta.empty()) {
                json meta{{"algorithm", gap::to_string(algorithm)},
                          {"instance", solve_instance},
                          {"params", params_json(solve_opt)},
                          {"nd_count", front.size()},
                          {"wall_seconds", secs}};
                write_text(solve_meta, meta.dump(2) + "\n");
            }
        } else if (*oracle) {
            const auto instance = gap::load_instance(oracle_instance);
            write_text(oracle_out, front_text(gap::exhaustive_front(instance, gap::parse_decoder(oracle_decoder))));
        } else if (*metrics) {
            std::vector<gap::Front> fronts;
            for (const auto& f : metric_fronts) fronts.push_back(gap::nondominated(gap::read_front_csv(f).points));
            const gap::Front reference = metric_reference.empty()
                                             ? gap::reference_front(fronts)
                                             : gap::nondominated(gap::read_front_csv(metric_reference).points);
            json out{{"reference_size", reference.size()}, {"fronts", json::array()}};
            for (std::size_t k = 0; k < fronts.size(); ++k) {
                json j{{"file", metric_fronts[k]}, {"nd_count", fronts[k].size()}};
                const auto r = gap::rhv(fronts[k], reference);
                const auto s = gap::spread(fronts[k], reference);
                j["rhv"] = r ? json(*r) : json(nullptr);
                j["spread"] = s ? json(*s) : json(nullptr);
                if (const auto bc = gap::best_compromise(fronts[k], reference)) {
                    j["best_compromise"] = objectives_json(bc->objectives);
                    if (bc->plan) j["best_compromise"]["genes"] = bc->plan->genes;
                } else {
                    j["best_compromise"] = nullptr;
                }
                out["fronts"].push_back(std::move(j));
            }
            write_text(metric_out, out.dump(2) + "\n");
        } else if (*batch) {
            batch_opt.ea.decoder = gap::parse_decoder(batch_flags.decoder);
            std::vector<gap::Algorithm> algorithms;
            for (const auto& a : batch_algorithms) algorithms.push_back(gap::parse_algorithm(a));
            const auto instance = gap::load_instance(batch_instance);
            const auto report = gap::run_batch(instance, algorithms, batch_runs, batch_opt.ea.seed, batch_opt);

            fs::create_directories(batch_out);
            for (const auto& ar : report.algorithms) {
                for (std::size_t r = 0; r < ar.runs.size(); ++r) {
                    const auto name = std::string(gap::to_string(ar.algorithm)) + "-run" + std::to_string(r) + ".csv";
                    gap::write_front_csv(fs::path(batch_out) / name, ar.runs[r].front);
                }
            }
            gap::write_front_csv(fs::path(batch_out) / "reference.csv", report.reference);
            auto doc = report.to_json();
            doc["params"] = params_json(batch_opt);
            doc["instance"] = batch_instance;
            write_text((fs::path(batch_out) / "report.json").string(), doc.dump(2) + "\n");
            std::cerr << "wrote " << (fs::path(batch_out) / "report.json").string() << '\n';
        } else if (*check) {
            const auto instance = gap::load_instance(check_instance);
            const auto decoder = gap::parse_decoder(check_decoder);
            std::vector<gap::Plan> plans;
            if (!check_front.empty()) {
                for (const auto& p : gap::read_front_csv(check_front).points) {
                    if (p.plan) plans.push_back(*p.plan);
                }
            } else {
                std::string text = check_genes;
                std::replace(text.begin(), text.end(), ',', ' ');
                std::istringstream is(text);
                gap::Plan plan;
                for (int g; is >> g;) plan.genes.push_back(g);
                plans.push_back(std::move(plan));
            }
            std::size_t bad = 0;
            for (std::size_t k = 0; k < plans.size(); ++k) {
                std::vector<gap::Violation> v;
                try {
                    v = gap::check_constraints(instance, plans[k], gap::decode(instance, plans[k], decoder));
                } catch (const std::exception& e) {
                    v = gap::check_constraints(instance, plans[k], gap::Assignment(instance.num_generators()));
                    if (v.empty()) v.push_back({"decode", -1, -1, e.what()});
                }
                const auto limits = gap::check_bin_limits(instance, plans[k]);
                v.insert(v.end(), limits.begin(), limits.end());
                std::cout << "plan " << k << ": " << (v.empty() ? "ok" : std::to_string(v.size()) + " violation(s)")
                          << '\n';
                for (const auto& x : v) std::cout << "  " << x.to_string() << '\n';
                if (!v.empty()) ++bad;
            }
            return bad == 0 ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
