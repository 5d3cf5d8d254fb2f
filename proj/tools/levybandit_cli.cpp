#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "levybandit/bandit_sim.hpp"
#include "levybandit/json_io.hpp"
#include "levybandit/verify.hpp"

namespace lb = levybandit;
using nlohmann::json;

namespace {

std::vector<double> parse_range(const std::string& text) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
        throw lb::ConfigError("--x must be start:stop:step");
    if (step <= 0.0) throw lb::ConfigError("--x: step must be positive");
    std::vector<double> grid;
    for (double x = start; x <= stop + 0.5 * step; x += step) grid.push_back(x);
    return grid;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw lb::ConfigError(std::string(flag) + ": bad number \"" + item + "\"");
        }
    }
    if (values.empty()) throw lb::ConfigError(std::string(flag) + ": empty list");
    return values;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw lb::ConfigError("cannot open output file: " + out_path);
    out << content;
}

std::string rows_to_csv(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows,
                        const std::string& footer = "") {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!footer.empty()) out << "# " << footer << "\n";
    return out.str();
}

struct CommonOpts {
    std::string model_text;
    std::string reward_text;
    double q = 1.0;
    double lambda = 1.0;
    int problem = 1;
    std::string x_range = "-1:1:0.5";
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 12345;
};

lb::Problem problem_of(int p) {
    if (p == 1) return lb::Problem::P1;
    if (p == 2) return lb::Problem::P2;
    throw lb::ConfigError("--problem must be 1 or 2");
}

lb::GittinsEvaluator make_evaluator(const CommonOpts& opts) {
    if (opts.model_text.empty()) throw lb::ConfigError("--model is required");
    if (opts.reward_text.empty()) throw lb::ConfigError("--reward is required");
    return lb::GittinsEvaluator(lb::model_from_string(opts.model_text),
                                lb::reward_from_string(opts.reward_text), opts.q,
                                opts.lambda, problem_of(opts.problem));
}

int cmd_index(const CommonOpts& opts) {
    const lb::GittinsEvaluator eval = make_evaluator(opts);
    const std::vector<double> grid = parse_range(opts.x_range);
    if (opts.format == "json") {
        json rows = json::array();
        for (double x : grid) rows.push_back({{"x", x}, {"gamma", eval.index(x)}});
        write_output(opts.out_path, json{{"rows", rows}}.dump(2) + "\n");
    } else {
        std::vector<std::vector<std::string>> rows;
        for (double x : grid)
            rows.push_back({lb::format_double(x), lb::format_double(eval.index(x))});
        write_output(opts.out_path, rows_to_csv({"x", "gamma"}, rows));
    }
    return 0;
}

int cmd_measure(const CommonOpts& opts) {
    const lb::GittinsEvaluator eval = make_evaluator(opts);
    const lb::IndexMeasure measure = eval.measure();
    const std::vector<double> grid = parse_range(opts.x_range);
    const double mass = lb::measure_mass_by_quadrature(measure);

    std::vector<std::vector<std::string>> rows;
    json jrows = json::array();
    if (measure.problem == lb::Problem::P1) {
        rows.push_back({"0", "1", lb::format_double(measure.atom_at_zero)});
        jrows.push_back({{"y", 0.0}, {"atom_flag", 1}, {"density", measure.atom_at_zero}});
    }
    for (double y : grid) {
        const double d = measure.density(y);
        rows.push_back({lb::format_double(y), "0", lb::format_double(d)});
        jrows.push_back({{"y", y}, {"atom_flag", 0}, {"density", d}});
    }
    const json footer{{"total_mass", mass}};
    if (opts.format == "json") {
        write_output(opts.out_path,
                     json{{"rows", jrows}, {"total_mass", mass}}.dump(2) + "\n");
    } else {
        write_output(opts.out_path,
                     rows_to_csv({"y", "atom_flag", "density"}, rows, footer.dump()));
    }
    return 0;
}

int cmd_converge(const CommonOpts& opts, const std::string& lambdas_text) {
    if (opts.model_text.empty()) throw lb::ConfigError("--model is required");
    const lb::LevyModel model = lb::model_from_string(opts.model_text);
    const lb::Problem problem = problem_of(opts.problem);
    const std::vector<double> lambdas = parse_list(lambdas_text, "--lambdas");
    const std::vector<double> thetas = lb::default_theta_grid(problem);
    const auto sweep = lb::convergence_sweep(model, opts.q, problem, lambdas, thetas);
    if (opts.format == "json") {
        json rows = json::array();
        for (const auto& row : sweep)
            rows.push_back({{"lambda", row.lambda}, {"sup_distance", row.sup_distance}});
        write_output(opts.out_path, json{{"rows", rows}}.dump(2) + "\n");
    } else {
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : sweep)
            rows.push_back(
                {lb::format_double(row.lambda), lb::format_double(row.sup_distance)});
        write_output(opts.out_path, rows_to_csv({"lambda", "sup_distance"}, rows));
    }
    return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& suite, std::int64_t n_paths) {
    std::vector<lb::CheckResult> results;
    if (suite == "transforms" || suite == "all") {
        auto r = lb::run_transform_checks();
        results.insert(results.end(), r.begin(), r.end());
    }
    if (suite == "oracle" || suite == "all") {
        auto r = lb::run_oracle_checks(n_paths, opts.seed);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (results.empty())
        throw lb::ConfigError("--suite must be transforms, oracle or all");

    bool all_pass = true;
    json report = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        report.push_back({{"name", r.name},
                          {"error", r.error},
                          {"tolerance", r.tolerance},
                          {"pass", r.pass}});
        rows.push_back({r.name, lb::format_double(r.error),
                        lb::format_double(r.tolerance), r.pass ? "1" : "0"});
    }
    if (opts.format == "json")
        write_output(opts.out_path, report.dump(2) + "\n");
    else
        write_output(opts.out_path,
                     rows_to_csv({"name", "error", "tolerance", "pass"}, rows));
    return all_pass ? 0 : 1;
}

int cmd_simulate(const CommonOpts& opts, const std::string& arms_text,
                 const std::string& policies_text, std::int64_t n_episodes) {
    if (arms_text.empty()) throw lb::ConfigError("--arms is required");
    const lb::ArmsFile arms = lb::arms_from_string(arms_text);
    lb::EpisodeConfig config;
    config.arms = arms.arms;
    config.q = arms.q;
    config.lambda = arms.lambda;
    config.problem = problem_of(opts.problem);
    config.seed = opts.seed;

    std::vector<lb::Policy> policies;
    std::stringstream ss(policies_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            policies.push_back(lb::policy_from_name(item));
        } catch (const lb::DomainError& e) {
            throw lb::ConfigError(e.what());
        }
    }
    if (policies.empty()) throw lb::ConfigError("--policies: empty list");

    const lb::SimReport report = lb::compare_policies(config, n_episodes, policies);
    if (opts.format == "json") {
        json rows = json::array();
        for (const auto& p : report.policies)
            rows.push_back({{"policy", lb::policy_name(p.policy)},
                            {"mean", p.mean},
                            {"std_error", p.std_error},
                            {"n_episodes", p.n_episodes}});
        write_output(opts.out_path, json{{"rows", rows}}.dump(2) + "\n");
    } else {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : report.policies)
            rows.push_back({lb::policy_name(p.policy), lb::format_double(p.mean),
                            lb::format_double(p.std_error),
                            std::to_string(p.n_episodes)});
        write_output(opts.out_path,
                     rows_to_csv({"policy", "mean", "std_error", "n_episodes"}, rows));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gittins indices for Levy-driven bandits observed at Poisson times"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string lambdas_text;
    std::string suite = "all";
    std::string arms_text;
    std::string policies_text = "gittins,uniform_random";
    std::int64_t n_paths = 20000;
    std::int64_t n_episodes = 1000;

    auto add_common = [&](CLI::App* cmd, bool needs_model) {
        if (needs_model) {
            cmd->add_option("--model", opts.model_text, "model JSON (inline or file path)");
            cmd->add_option("--q", opts.q, "discount rate q > 0");
            cmd->add_option("--lambda", opts.lambda, "observation rate lambda > 0");
            cmd->add_option("--problem", opts.problem, "problem variant (1 or 2)");
        }
        cmd->add_option("--out", opts.out_path, "output path (default stdout)");
        cmd->add_option("--format", opts.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--seed", opts.seed, "rng seed");
    };

    CLI::App* index = app.add_subcommand("index", "tabulate the Gittins index");
    add_common(index, true);
    index->add_option("--reward", opts.reward_text,
                      "reward JSON, file path, or affine:a,b");
    index->add_option("--x", opts.x_range, "state grid start:stop:step");

    CLI::App* measure = app.add_subcommand("measure", "tabulate the index measure");
    add_common(measure, true);
    measure->add_option("--reward", opts.reward_text,
                        "reward JSON, file path, or affine:a,b");
    measure->add_option("--x", opts.x_range, "support grid start:stop:step");

    CLI::App* converge =
        app.add_subcommand("converge", "transform distance to the classical limit");
    add_common(converge, true);
    converge->add_option("--lambdas", lambdas_text, "ascending list, e.g. 1,10,100")
        ->required();

    CLI::App* verify = app.add_subcommand("verify", "run identity/oracle suites");
    add_common(verify, false);
    verify->add_option("--suite", suite, "transforms, oracle or all")
        ->check(CLI::IsMember({"transforms", "oracle", "all"}));
    verify->add_option("--n-paths", n_paths, "Monte Carlo paths per estimate");

    CLI::App* simulate = app.add_subcommand("simulate", "compare bandit policies");
    add_common(simulate, false);
    simulate->add_option("--arms", arms_text, "arms JSON (inline or file path)")
        ->required();
    simulate->add_option("--policies", policies_text, "comma list of policies");
    simulate->add_option("--episodes", n_episodes, "number of episodes");
    simulate->add_option("--problem", opts.problem, "problem variant (1 or 2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (index->parsed()) return cmd_index(opts);
        if (measure->parsed()) return cmd_measure(opts);
        if (converge->parsed()) return cmd_converge(opts, lambdas_text);
        if (verify->parsed()) return cmd_verify(opts, suite, n_paths);
        if (simulate->parsed())
            return cmd_simulate(opts, arms_text, policies_text, n_episodes);
    } catch (const lb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lb::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
