// Command-line front end for the droop-path prediction pipeline.
//
// Subcommands:
//   reconstruct  spectra + actual droop from a pair of deviation series
//   predict      full pipeline: actual droop, six expected droops, totals
//   simulate     synthetic deviation series with a known droop
//   fit-poisson  fit the redundancy regression and dump the model

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "openpath/openpath.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<double> k0;
    std::optional<int> grid;
    std::optional<double> lambda;
    std::optional<std::string> link;
    std::optional<long long> seed;
    std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "scenario configuration file");
    cmd->add_option("--k0", flags.k0, "path scaling constant");
    cmd->add_option("--grid", flags.grid, "reconstruction grid size N");
    cmd->add_option("--lambda", flags.lambda, "regularization weight");
    cmd->add_option("--link", flags.link, "regression link: identity or log");
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--out", flags.out_path, "output file (default stdout)");
}

openpath::ScenarioConfig load_config(const CommonFlags& flags) {
    openpath::ScenarioConfig cfg;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            openpath::raise(openpath::errc::config_error,
                            "cannot open config '" + flags.config_path + "'");
        }
        cfg = openpath::parse_config(in);
    }
    if (flags.k0) cfg.k0 = *flags.k0;
    if (flags.grid) cfg.grid = *flags.grid;
    if (flags.lambda) cfg.lambda = *flags.lambda;
    if (flags.link) cfg.link = openpath::parse_link(*flags.link);
    if (flags.seed) cfg.seed = *flags.seed;
    return cfg;
}

void emit(const openpath::ordered_json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        openpath::raise(openpath::errc::config_error,
                        "cannot write '" + out_path + "'");
    }
    out << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"open-system droop path prediction"};
    app.require_subcommand(1);

    CommonFlags reconstruct_flags, predict_flags, simulate_flags, fit_flags;

    auto* cmd_reconstruct =
        app.add_subcommand("reconstruct", "emit spectra and the actual droop");
    add_common_flags(cmd_reconstruct, reconstruct_flags);
    std::string rec_f_path, rec_p_path;
    cmd_reconstruct->add_option("--series-f", rec_f_path,
                                "frequency deviation CSV (overrides config)");
    cmd_reconstruct->add_option("--series-p", rec_p_path,
                                "power deviation CSV (overrides config)");

    auto* cmd_predict = app.add_subcommand("predict", "run the full pipeline");
    add_common_flags(cmd_predict, predict_flags);

    auto* cmd_simulate =
        app.add_subcommand("simulate", "generate a synthetic deviation pair");
    add_common_flags(cmd_simulate, simulate_flags);
    double sim_droop = 1.0;
    int sim_T = 201;
    double sim_noise = 1e-3;
    std::string sim_out_f = "series_f.csv", sim_out_p = "series_p.csv";
    cmd_simulate->add_option("--droop", sim_droop, "true droop of the pair");
    cmd_simulate->add_option("--T", sim_T, "series length (>= 8)");
    cmd_simulate->add_option("--noise", sim_noise, "noise amplitude");
    cmd_simulate->add_option("--out-f", sim_out_f, "frequency series output");
    cmd_simulate->add_option("--out-p", sim_out_p, "power series output");

    auto* cmd_fit =
        app.add_subcommand("fit-poisson", "fit the redundancy regression");
    add_common_flags(cmd_fit, fit_flags);
    std::string fit_history;
    cmd_fit->add_option("--history", fit_history,
                        "history CSV (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_reconstruct->parsed()) {
            auto cfg = load_config(reconstruct_flags);
            if (!rec_f_path.empty()) cfg.series_f_path = rec_f_path;
            if (!rec_p_path.empty()) cfg.series_p_path = rec_p_path;
            if (cfg.series_f_path.empty() || cfg.series_p_path.empty()) {
                openpath::raise(openpath::errc::config_error,
                                "reconstruct needs series.f and series.p");
            }
            openpath::validate_reconstruction_params(cfg);
            const auto f = openpath::csv::read_series(cfg.series_f_path);
            const auto p = openpath::csv::read_series(cfg.series_p_path);
            const auto rec =
                openpath::reconstruct_droop(f, p, cfg.k0, cfg.grid, cfg.lambda);
            emit(openpath::reconstruction_json(rec, cfg),
                 reconstruct_flags.out_path);
        } else if (cmd_predict->parsed()) {
            const auto cfg = load_config(predict_flags);
            openpath::validate_for_predict(cfg);
            const auto f = openpath::csv::read_series(cfg.series_f_path);
            const auto p = openpath::csv::read_series(cfg.series_p_path);
            const auto result = openpath::run_pipeline(cfg, f, p);
            emit(openpath::report_json(result, cfg), predict_flags.out_path);
        } else if (cmd_simulate->parsed()) {
            const auto cfg = load_config(simulate_flags);
            const auto [f, p] =
                openpath::generate_synthetic(cfg.seed, sim_droop, sim_T, sim_noise);
            openpath::csv::write_series(sim_out_f, "delta_f", f.values);
            openpath::csv::write_series(sim_out_p, "delta_p", p.values);
            openpath::ordered_json j;
            j["version"] = openpath::kVersion;
            j["seed"] = cfg.seed;
            j["true_droop"] = sim_droop;
            j["T"] = sim_T;
            j["noise"] = sim_noise;
            j["out_f"] = sim_out_f;
            j["out_p"] = sim_out_p;
            emit(j, simulate_flags.out_path);
        } else if (cmd_fit->parsed()) {
            auto cfg = load_config(fit_flags);
            if (!fit_history.empty()) cfg.regression_path = fit_history;
            if (cfg.regression_path.empty()) {
                openpath::raise(openpath::errc::config_error,
                                "fit-poisson needs a history path");
            }
            const auto rows = openpath::csv::read_history(cfg.regression_path);
            const auto model = openpath::fit_poisson(rows, cfg.link);
            openpath::ordered_json j;
            j["version"] = openpath::kVersion;
            j["link"] = openpath::link_name(model.link);
            j["beta"] = model.beta;
            j["iterations"] = model.iterations;
            j["loglik"] = model.loglik_trace.empty() ? 0.0
                                                     : model.loglik_trace.back();
            emit(j, fit_flags.out_path);
        }
    } catch (const openpath::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
