#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "nestspec/errors.hpp"

using namespace nestspec;
using namespace nestspec::cli;

int main(int argc, char** argv) {
    CLI::App app{"nestspec: nested regression fitting, spectral comparison, and "
                 "bias-variance sweeps"};
    app.require_subcommand(1);

    int exit_code = kExitOk;

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "Fit one model and write a report");
    struct {
        std::string input, family, output, format = "json";
        std::int64_t order = -1;
    } fit_args;
    fit->add_option("--input", fit_args.input, "CSV input file")->required();
    fit->add_option("--family", fit_args.family, "linear|binomial|poisson|survival|ar")
        ->required();
    fit->add_option("--output", fit_args.output, "report file")->required();
    fit->add_option("--format", fit_args.format, "json|csv");
    fit->add_option("--order", fit_args.order, "AR model order (ar family only)");
    fit->callback([&] {
        FitConfig config;
        config.input = fit_args.input;
        config.family = parse_family(fit_args.family);
        config.output = fit_args.output;
        config.format = parse_format(fit_args.format);
        if (fit_args.order >= 0) config.ar_order = static_cast<std::size_t>(fit_args.order);
        exit_code = run_guarded(cmd_fit, config);
    });

    // ---- compare ----
    auto* compare = app.add_subcommand("compare", "Compare a nested model against the saturated one");
    struct {
        std::string input, family, subset, output, format = "json", weights = "shared";
        std::int64_t order = -1, nested_order = -1;
    } cmp_args;
    compare->add_option("--input", cmp_args.input, "CSV input file")->required();
    compare->add_option("--family", cmp_args.family, "linear|binomial|poisson|survival|ar")
        ->required();
    compare->add_option("--subset", cmp_args.subset,
                        "comma-separated 0-based column indices of the nested model");
    compare->add_option("--output", cmp_args.output, "report file")->required();
    compare->add_option("--format", cmp_args.format, "json|csv");
    compare->add_option("--weights", cmp_args.weights,
                        "shared|refit nested information matrix mode");
    compare->add_option("--order", cmp_args.order, "saturated AR order (ar family)");
    compare->add_option("--nested-order", cmp_args.nested_order, "nested AR order (ar family)");
    compare->callback([&] {
        CompareConfig config;
        config.input = cmp_args.input;
        config.family = parse_family(cmp_args.family);
        if (!cmp_args.subset.empty()) config.subset = parse_index_list(cmp_args.subset);
        config.output = cmp_args.output;
        config.format = parse_format(cmp_args.format);
        config.mode = parse_weights(cmp_args.weights);
        if (cmp_args.order >= 0) config.ar_order = static_cast<std::size_t>(cmp_args.order);
        if (cmp_args.nested_order >= 0)
            config.ar_nested_order = static_cast<std::size_t>(cmp_args.nested_order);
        exit_code = run_guarded(cmd_compare, config);
    });

    // ---- sweep ----
    auto* sweep = app.add_subcommand(
        "sweep", "Monte Carlo complexity sweep producing a tradeoff curve");
    struct {
        std::string input, family = "linear", ladder, output, format = "csv";
        int replicates = 100;
        double train_fraction = 0.5;
        std::uint64_t seed = 0;
        std::size_t n = 60;
    } sweep_args;
    bool sweep_seed_set = false;
    sweep->add_option("--input", sweep_args.input,
                      "CSV input (absent: built-in noisy-cubic benchmark)");
    sweep->add_option("--family", sweep_args.family, "family of the input file");
    sweep->add_option("--ladder", sweep_args.ladder,
                      "comma-separated rungs: degrees (benchmark), leading-subset sizes, or AR orders");
    sweep->add_option("--replicates", sweep_args.replicates, "Monte Carlo replicates");
    sweep->add_option("--train-fraction", sweep_args.train_fraction,
                      "train fraction in [0.2, 0.8]");
    sweep->add_option("--seed", sweep_args.seed, "base seed (required)")
        ->each([&](const std::string&) { sweep_seed_set = true; });
    sweep->add_option("--n", sweep_args.n, "benchmark sample size");
    sweep->add_option("--output", sweep_args.output, "curve file")->required();
    sweep->add_option("--format", sweep_args.format, "csv|json");
    sweep->callback([&] {
        SweepConfig config;
        if (!sweep_seed_set) {
            std::cerr << "nestspec: sweep requires --seed (randomness never comes from the clock)\n";
            exit_code = kExitParse;
            return;
        }
        if (!sweep_args.input.empty()) config.input = sweep_args.input;
        config.family = parse_family(sweep_args.family);
        if (!sweep_args.ladder.empty()) config.ladder = parse_index_list(sweep_args.ladder);
        config.replicates = sweep_args.replicates;
        config.train_fraction = sweep_args.train_fraction;
        config.seed = sweep_args.seed;
        config.n = sweep_args.n;
        config.output = sweep_args.output;
        config.format = parse_format(sweep_args.format);
        exit_code = run_guarded(cmd_sweep, config);
    });

    // ---- verify ----
    auto* verify = app.add_subcommand(
        "verify", "Run the seeded interlacing/ordering fuzz corpus");
    struct {
        std::string dims = "2..20", output, format = "json";
        int trials = 1000;
        std::uint64_t seed = 0;
        double perturb = 0.0;
    } verify_args;
    bool verify_seed_set = false;
    verify->add_option("--dims", verify_args.dims, "matrix dimension band, e.g. 2..20");
    verify->add_option("--trials", verify_args.trials, "number of fuzz trials");
    verify->add_option("--seed", verify_args.seed, "base seed (required)")
        ->each([&](const std::string&) { verify_seed_set = true; });
    verify->add_option("--output", verify_args.output, "report file")->required();
    verify->add_option("--format", verify_args.format, "json|csv");
    verify->add_option("--perturb-eigenvalue", verify_args.perturb,
                       "test fixture: perturb each full spectrum before checking")
        ->group("");  // hidden
    verify->callback([&] {
        VerifyCommandConfig config;
        if (!verify_seed_set) {
            std::cerr << "nestspec: verify requires --seed (randomness never comes from the clock)\n";
            exit_code = kExitParse;
            return;
        }
        config.fuzz.seed = verify_args.seed;
        config.fuzz.trials = verify_args.trials;
        try {
            const auto [lo, hi] = parse_dim_range(verify_args.dims);
            config.fuzz.dim_min = lo;
            config.fuzz.dim_max = hi;
        } catch (const InputError& e) {
            std::cerr << "nestspec: " << e.what() << "\n";
            exit_code = kExitParse;
            return;
        }
        config.fuzz.perturb_eigenvalue = verify_args.perturb;
        config.output = verify_args.output;
        config.format = parse_format(verify_args.format);
        exit_code = run_guarded(cmd_verify, config);
    });

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
    struct {
        std::string family, beta, phi, output;
        std::size_t n = 0;
        std::uint64_t seed = 0;
        double sigma = 1.0, censoring = 0.0;
    } sim_args;
    bool sim_seed_set = false;
    simulate->add_option("--family", sim_args.family, "linear|binomial|poisson|survival|ar")
        ->required();
    simulate->add_option("--n", sim_args.n, "sample size")->required();
    simulate->add_option("--beta", sim_args.beta,
                         "true coefficients (regression/survival families)");
    simulate->add_option("--phi", sim_args.phi, "AR coefficients (ar family)");
    simulate->add_option("--sigma", sim_args.sigma, "noise standard deviation (linear/ar)");
    simulate->add_option("--censoring", sim_args.censoring, "censoring rate in [0,1) (survival)");
    simulate->add_option("--seed", sim_args.seed, "seed (required)")
        ->each([&](const std::string&) { sim_seed_set = true; });
    simulate->add_option("--output", sim_args.output, "dataset CSV (ground truth in sidecar)")
        ->required();
    simulate->callback([&] {
        SimulateConfig config;
        if (!sim_seed_set) {
            std::cerr << "nestspec: simulate requires --seed (randomness never comes from the clock)\n";
            exit_code = kExitParse;
            return;
        }
        try {
            config.generator.family = parse_family(sim_args.family);
            config.generator.n = sim_args.n;
            config.generator.seed = sim_args.seed;
            config.generator.noise = sim_args.sigma;
            if (config.generator.family == DataFamily::survival)
                config.generator.noise = sim_args.censoring;
            const std::string& params =
                config.generator.family == DataFamily::ar ? sim_args.phi : sim_args.beta;
            if (params.empty())
                throw InputError(config.generator.family == DataFamily::ar
                                     ? "ar simulation requires --phi"
                                     : "simulation requires --beta");
            config.generator.true_parameters = parse_double_list(params);
        } catch (const InputError& e) {
            std::cerr << "nestspec: " << e.what() << "\n";
            exit_code = kExitParse;
            return;
        }
        config.output = sim_args.output;
        exit_code = run_guarded(cmd_simulate, config);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitParse;
    }
    return exit_code;
}
