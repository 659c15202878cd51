// Command-line front end: quote share prices for a pool, or regenerate the
// data behind the published tables and figures.

#include "tontine/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Every flag may also be set through an environment variable TONTINE_<NAME>.
void add_common_options(CLI::App &app, tontine::cli::RunConfig &cfg, std::string &design,
                        std::string &gompertz, double &rate) {
    app.add_option("--design", design, "flat | natural-age:<x> | natural | proportional | crra:<g>")
        ->envname("TONTINE_DESIGN");
    app.add_option("--gamma", cfg.gamma, "risk aversion for welfare outputs")
        ->envname("TONTINE_GAMMA");
    app.add_option("--rate", rate, "continuously compounded interest rate")
        ->envname("TONTINE_RATE");
    app.add_option("--gompertz", gompertz, "Gompertz modal age and dispersion as m,b")
        ->envname("TONTINE_GOMPERTZ");
    app.add_option("--steps", cfg.steps, "Simpson steps (even)")->envname("TONTINE_STEPS");
    app.add_option("--horizon-age", cfg.horizon_age, "age at which the integration stops")
        ->envname("TONTINE_HORIZON_AGE");
    app.add_option("--seed", cfg.seed, "simulation seed")->envname("TONTINE_SEED");
    app.add_option("--tolerance", cfg.tolerance, "solver tolerance on inequity")
        ->envname("TONTINE_TOLERANCE");
    app.add_option("--out", cfg.out_path, "output file (default stdout)")->envname("TONTINE_OUT");
}

tontine::MortalityModel parse_gompertz(const std::string &text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("--gompertz expects m,b");
    }
    return tontine::MortalityModel(std::stod(text.substr(0, comma)),
                                   std::stod(text.substr(comma + 1)));
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Equitable tontine pricing and simulation"};
    app.require_subcommand(1);

    tontine::cli::RunConfig cfg;
    std::string design = "natural";
    std::string gompertz;
    double rate = 0.04;
    std::string id;

    auto *quote = app.add_subcommand("quote", "equitable participation rates for a pool CSV");
    quote->add_option("--pool", cfg.pool_path, "pool CSV with header age,investment,count")
        ->envname("TONTINE_POOL")
        ->required()
        ->check(CLI::ExistingFile);
    add_common_options(*quote, cfg, design, gompertz, rate);

    auto *reproduce = app.add_subcommand("reproduce", "data behind a published table or figure");
    reproduce->add_option("id", id, "table or figure id")
        ->required()
        ->check(CLI::IsMember(tontine::cli::reproducible_ids()));
    reproduce->add_option("--sizes", cfg.sizes, "override the population sizes swept")
        ->envname("TONTINE_SIZES")
        ->delimiter(',');
    add_common_options(*reproduce, cfg, design, gompertz, rate);

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.design = tontine::cli::parse_design(design);
        cfg.economy = tontine::EconomicParams(rate);
        if (!gompertz.empty()) {
            cfg.mortality = parse_gompertz(gompertz);
        }

        std::ofstream file;
        if (!cfg.out_path.empty()) {
            file.open(cfg.out_path);
            if (!file) {
                std::cerr << "cannot open " << cfg.out_path << " for writing\n";
                return EXIT_FAILURE;
            }
        }
        std::ostream &out = cfg.out_path.empty() ? std::cout : file;

        if (*quote) {
            cfg.command = "quote";
            const int code = tontine::cli::quote(cfg, out);
            if (code == tontine::cli::exit_infeasible) {
                std::cerr << "pool is infeasible: no equitable participation rates exist\n";
            }
            return code;
        }
        cfg.command = "reproduce";
        tontine::cli::reproduce(id, cfg, out);
        return EXIT_SUCCESS;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_FAILURE;
    }
}
