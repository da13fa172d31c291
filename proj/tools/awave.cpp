// awave: batch front end for the solver and the estimate lab.
//
//   awave solve --config run.json [--out dir] [--svg] [--seed n]
//   awave sweep --config sweep.json [--out dir] [--seed n]
//   awave verify NAME [--config verify.json] [--out dir] [--seed n]
//   awave admissible --mu 2 --p 2 --N 3 [--theorem integer|real]

#include <CLI11.hpp>

#include <iostream>

#include "accretive_wave/cli/runner.hpp"

int main(int argc, char** argv) {
    using namespace awave::cli;
    CLI::App app{"Pseudospectral solver and estimate lab for the accretive wave equation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommandOptions opt;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", opt.config_path, "JSON configuration file");
        if (config_required) c->required();
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "override the configured seed");
    };

    auto* solve = app.add_subcommand("solve", "integrate one configuration until the horizon or blow-up");
    add_common(solve, true);
    solve->add_flag("--svg", opt.svg, "also write trajectory.svg");

    auto* sweep = app.add_subcommand("sweep", "run a p x mu x amplitude grid in parallel");
    add_common(sweep, true);

    std::string verifier;
    auto* verify = app.add_subcommand("verify", "run one estimate verifier over a random ensemble");
    verify->add_option("name", verifier, "verifier name")->required();
    add_common(verify, false);

    double mu = 0.0;
    double p = 0.0;
    int N = 1;
    std::string theorem;
    auto* adm = app.add_subcommand("admissible", "decide admissibility of (mu, p, N)");
    adm->add_option("--mu", mu, "regularity order")->required();
    adm->add_option("--p", p, "power")->required();
    adm->add_option("--N", N, "dimension")->required();
    adm->add_option("--theorem", theorem, "integer or real (default: by p)")
        ->check(CLI::IsMember({"integer", "real"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }
    for (auto* sub : {solve, sweep, verify}) {
        if (sub->parsed() && sub->count("--seed")) opt.seed = seed;
    }

    if (solve->parsed()) return cmd_solve(opt, std::cout, std::cerr);
    if (sweep->parsed()) return cmd_sweep(opt, std::cout, std::cerr);
    if (verify->parsed()) return cmd_verify(verifier, opt, std::cout, std::cerr);
    std::optional<awave::Theorem> th;
    if (theorem == "integer") th = awave::Theorem::IntegerP;
    if (theorem == "real") th = awave::Theorem::RealP;
    return cmd_admissible(mu, p, N, th, std::cout, std::cerr);
}
