#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <cstdlib>
#include <string>

#include "commands.hpp"
#include "csv.hpp"
#include "nestspec/errors.hpp"
#include "nestspec/glm.hpp"
#include "verify.hpp"

using namespace nestspec;
using namespace nestspec::cli;
using json = nlohmann::json;

namespace {

std::filesystem::path work_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "nestspec_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = work_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    return json::parse(in);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("fit on a tiny linear CSV reproduces the closed-form numbers") {
    const std::string input = write_temp("tiny.csv", "y,x1\n1,1\n3,1\n");
    FitConfig config;
    config.input = input;
    config.family = DataFamily::linear;
    config.output = (work_dir() / "tiny_fit.json").string();

    CHECK(cmd_fit(config) == kExitOk);
    const json report = parse_file(config.output);
    CHECK(report["schema_version"] == 1);
    CHECK(report["estimates"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report["model"]["sigma2_hat"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report["model"]["rss"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report["n"] == 2);
}

TEST_CASE("fit report in csv format carries the same numbers") {
    const std::string input = write_temp("tiny2.csv", "y,x1\n1,1\n3,1\n");
    FitConfig config;
    config.input = input;
    config.family = DataFamily::linear;
    config.output = (work_dir() / "tiny_fit.csv").string();
    config.format = Format::csv;
    CHECK(cmd_fit(config) == kExitOk);

    const std::string content = read_file(config.output);
    CHECK(content.find("field,value") == 0);
    const std::size_t pos = content.find("estimates[0],");
    REQUIRE(pos != std::string::npos);
    CHECK(std::strtod(content.c_str() + pos + 13, nullptr) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(content.find("model.sigma2_hat,") != std::string::npos);
}

TEST_CASE("malformed CSV rows are rejected with their row number, exit code 2") {
    const std::string bad = write_temp("bad.csv", "y,x1\n1,1\n2,oops\n");
    try {
        read_csv(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("row 3") != std::string::npos);
        CHECK(what.find("column 2") != std::string::npos);
    }

    FitConfig config;
    config.input = bad;
    config.family = DataFamily::linear;
    config.output = (work_dir() / "never.json").string();
    CHECK(run_guarded(cmd_fit, config) == kExitParse);
}

TEST_CASE("missing input file is an I/O failure, exit code 4") {
    FitConfig config;
    config.input = (work_dir() / "does_not_exist.csv").string();
    config.family = DataFamily::linear;
    config.output = (work_dir() / "never.json").string();
    CHECK(run_guarded(cmd_fit, config) == kExitIo);
}

TEST_CASE("fit failures map to exit code 3") {
    // Second column duplicates the first: rank deficient.
    const std::string input = write_temp(
        "collinear.csv", "y,x1,x2\n1,1,2\n2,2,4\n3,3,6\n1,4,8\n2,5,10\n");
    FitConfig config;
    config.input = input;
    config.family = DataFamily::linear;
    config.output = (work_dir() / "never2.json").string();
    CHECK(run_guarded(cmd_fit, config) == kExitFit);
}

TEST_CASE("compare rejects a duplicate subset with exit code 2") {
    const std::string input = write_temp("cmp.csv", "y,x1,x2\n1,1,0\n2,0,1\n3,1,1\n1,2,1\n");
    CompareConfig config;
    config.input = input;
    config.family = DataFamily::linear;
    config.subset = {0, 0};
    config.output = (work_dir() / "never3.json").string();
    CHECK(run_guarded(cmd_compare, config) == kExitParse);
}

TEST_CASE("glm compare carries the weights-mode marker and no assertion in refit mode") {
    SimulateConfig sim;
    sim.generator.family = DataFamily::poisson;
    sim.generator.n = 60;
    sim.generator.true_parameters = {0.5, -0.25};
    sim.generator.seed = 6101;
    sim.output = (work_dir() / "pois.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);

    CompareConfig config;
    config.input = sim.output;
    config.family = DataFamily::poisson;
    config.subset = {0};
    config.mode = NestingMode::refit;
    config.output = (work_dir() / "pois_cmp.json").string();
    CHECK(cmd_compare(config) == kExitOk);
    const json report = parse_file(config.output);
    CHECK(report["report"]["mode"] == "refit");
    CHECK(report["report"]["theorem_backed"] == false);

    config.mode = NestingMode::shared;
    config.output = (work_dir() / "pois_cmp_shared.json").string();
    CHECK(cmd_compare(config) == kExitOk);
    const json shared = parse_file(config.output);
    CHECK(shared["report"]["mode"] == "shared");
    CHECK(shared["report"]["theorem_backed"] == true);
    CHECK(shared["report"]["orderings_hold"] == true);
}

TEST_CASE("sweep with one replicate zeroes the standard errors; csv and json agree") {
    SweepConfig config;
    config.seed = 6102;
    config.replicates = 1;
    config.n = 40;
    config.output = (work_dir() / "curve1.csv").string();
    CHECK(cmd_sweep(config) == kExitOk);

    const std::string csv = read_file(config.output);
    CHECK(csv.find("complexity,train_cost_mean,train_cost_se,validation_cost_mean,"
                   "validation_cost_se,var_radius_mean\n") == 0);

    config.format = Format::json;
    config.output = (work_dir() / "curve1.json").string();
    CHECK(cmd_sweep(config) == kExitOk);
    const json doc = parse_file(config.output);

    // Same run, two formats: identical numeric content, SEs zero.
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    std::size_t rung = 0;
    while (std::getline(lines, line)) {
        const auto& pt = doc["points"][rung];
        char* cursor = line.data();
        auto next_field = [&]() {
            const double v = std::strtod(cursor, &cursor);
            if (*cursor == ',') ++cursor;
            return v;
        };
        CHECK(next_field() == pt["complexity"].get<double>());
        CHECK(next_field() == pt["train_cost_mean"].get<double>());
        CHECK(next_field() == pt["train_cost_se"].get<double>());
        CHECK(next_field() == pt["validation_cost_mean"].get<double>());
        CHECK(next_field() == pt["validation_cost_se"].get<double>());
        CHECK(next_field() == pt["var_radius_mean"].get<double>());
        CHECK(pt["train_cost_se"].get<double>() == 0.0);
        ++rung;
    }
    CHECK(rung == 10);
}

TEST_CASE("simulate is byte-deterministic and writes a ground-truth sidecar") {
    SimulateConfig sim;
    sim.generator.family = DataFamily::ar;
    sim.generator.n = 100;
    sim.generator.true_parameters = {0.5};
    sim.generator.noise = 1.0;
    sim.generator.seed = 7;
    sim.output = (work_dir() / "ar1.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);
    const std::string first = read_file(sim.output);

    sim.output = (work_dir() / "ar2.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);
    CHECK(first == read_file(sim.output));

    const json meta = parse_file(sim.output + ".meta.json");
    CHECK(meta["family"] == "ar");
    CHECK(meta["seed"] == 7);
    CHECK(meta["true_parameters"][0] == 0.5);
}

TEST_CASE("survival simulation writes the time,event,x schema") {
    SimulateConfig sim;
    sim.generator.family = DataFamily::survival;
    sim.generator.n = 30;
    sim.generator.true_parameters = {0.5, -0.5};
    sim.generator.noise = 0.3;
    sim.generator.seed = 6103;
    sim.output = (work_dir() / "surv.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);

    const CsvTable table = read_csv(sim.output);
    REQUIRE(table.header.size() == 4);
    CHECK(table.header[0] == "time");
    CHECK(table.header[1] == "event");
    CHECK(table.header[2] == "x1");
    for (const auto& row : table.rows) {
        CHECK(row[0] > 0.0);
        CHECK((row[1] == 0.0 || row[1] == 1.0));
    }
}

TEST_CASE("simulate -> fit round trip reproduces in-memory results bit for bit") {
    SimulateConfig sim;
    sim.generator.family = DataFamily::linear;
    sim.generator.n = 50;
    sim.generator.true_parameters = {1.5, -0.5, 0.25};
    sim.generator.noise = 0.7;
    sim.generator.seed = 42;
    sim.output = (work_dir() / "roundtrip.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);

    FitConfig fit_config;
    fit_config.input = sim.output;
    fit_config.family = DataFamily::linear;
    fit_config.output = (work_dir() / "roundtrip_fit.json").string();
    CHECK(cmd_fit(fit_config) == kExitOk);
    const json report = parse_file(fit_config.output);

    const Dataset data = generate(sim.generator);
    const LinearFit fit = fit_ols(data.regression().x, data.regression().y);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(report["estimates"][j].get<double>() == fit.beta_hat[j]);
    CHECK(report["model"]["rss"].get<double>() == fit.rss);
    CHECK(report["model"]["sigma2_hat"].get<double>() == fit.sigma2_hat);

    // The fit recovers the generating coefficients within 3 standard errors.
    const std::vector<double> truth{1.5, -0.5, 0.25};
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(std::abs(fit.beta_hat[j] - truth[j]) <=
              3.0 * report["standard_errors"][j].get<double>());
}

TEST_CASE("poisson simulate -> fit round trip is bit-identical to the library path") {
    SimulateConfig sim;
    sim.generator.family = DataFamily::poisson;
    sim.generator.n = 70;
    sim.generator.true_parameters = {0.4, -0.3};
    sim.generator.seed = 6105;
    sim.output = (work_dir() / "pois_rt.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);

    FitConfig fit_config;
    fit_config.input = sim.output;
    fit_config.family = DataFamily::poisson;
    fit_config.output = (work_dir() / "pois_rt.json").string();
    CHECK(cmd_fit(fit_config) == kExitOk);
    const json report = parse_file(fit_config.output);

    const Dataset data = generate(sim.generator);
    const GlmFit fit = fit_glm(data.regression().x, data.regression().y, GlmFamily::poisson);
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(report["estimates"][j].get<double>() == fit.beta_hat[j]);
    CHECK(report["model"]["loglik"].get<double>() == fit.loglik);
    CHECK(report["convergence"]["iterations"].get<int>() == fit.iterations);
}

TEST_CASE("verify passes on the default corpus and flags injected defects") {
    VerifyConfig fuzz;
    fuzz.seed = 3;
    fuzz.trials = 40;
    fuzz.dim_min = 2;
    fuzz.dim_max = 10;
    const VerifyResult clean = run_verify(fuzz);
    CHECK(clean.all_pass);
    for (const auto& prop : clean.properties) CHECK(prop.violations == 0);

    fuzz.perturb_eigenvalue = 1.0;
    const VerifyResult broken = run_verify(fuzz);
    CHECK_FALSE(broken.all_pass);

    VerifyCommandConfig config;
    config.fuzz = fuzz;
    config.output = (work_dir() / "verify_broken.json").string();
    CHECK(run_guarded(cmd_verify, config) == kExitTheorem);
    const json doc = parse_file(config.output);
    CHECK(doc["all_pass"] == false);
    bool some_seed_named = false;
    for (const auto& prop : doc["properties"])
        if (prop.contains("first_violation_seed")) some_seed_named = true;
    CHECK(some_seed_named);
}

TEST_CASE("ar fit requires --order and ar compare requires both orders") {
    SimulateConfig sim;
    sim.generator.family = DataFamily::ar;
    sim.generator.n = 200;
    sim.generator.true_parameters = {0.6, -0.2};
    sim.generator.noise = 1.0;
    sim.generator.seed = 6104;
    sim.output = (work_dir() / "ar_fit.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);

    FitConfig fit_config;
    fit_config.input = sim.output;
    fit_config.family = DataFamily::ar;
    fit_config.output = (work_dir() / "ar_fit.json").string();
    CHECK(run_guarded(cmd_fit, fit_config) == kExitParse);

    fit_config.ar_order = 2;
    CHECK(cmd_fit(fit_config) == kExitOk);
    const json report = parse_file(fit_config.output);
    CHECK(report["model"]["order"] == 2);
    CHECK(report["estimates"].size() == 2);

    CompareConfig cmp;
    cmp.input = sim.output;
    cmp.family = DataFamily::ar;
    cmp.output = (work_dir() / "ar_cmp.json").string();
    CHECK(run_guarded(cmd_compare, cmp) == kExitParse);

    cmp.ar_order = 3;
    cmp.ar_nested_order = 1;
    CHECK(cmd_compare(cmp) == kExitOk);
    const json cmp_report = parse_file(cmp.output);
    CHECK(cmp_report["report"]["orderings_hold"] == true);
    CHECK(cmp_report["saturated"]["phi"].size() == 3);
    CHECK(cmp_report["nested"]["phi"].size() == 1);
}

TEST_CASE("sweep over a file-backed dataset uses leading-subset ladders") {
    SimulateConfig sim;
    sim.generator.family = DataFamily::linear;
    sim.generator.n = 60;
    sim.generator.true_parameters = {1.0, -0.5, 0.25};
    sim.generator.noise = 0.8;
    sim.generator.seed = 6106;
    sim.output = (work_dir() / "sweep_in.csv").string();
    CHECK(cmd_simulate(sim) == kExitOk);

    SweepConfig config;
    config.input = sim.output;
    config.family = DataFamily::linear;
    config.ladder = {1, 2, 3};
    config.replicates = 8;
    config.seed = 6107;
    config.format = Format::json;
    config.output = (work_dir() / "sweep_file.json").string();
    CHECK(cmd_sweep(config) == kExitOk);

    const json doc = parse_file(config.output);
    REQUIRE(doc["points"].size() == 3);
    CHECK(doc["points"][0]["complexity"] == 1);
    CHECK(doc["points"][2]["complexity"] == 3);
    // More columns cannot raise the mean training cost.
    CHECK(doc["points"][0]["train_cost_mean"].get<double>() >=
          doc["points"][2]["train_cost_mean"].get<double>() - 1e-9);
    CHECK(doc["raw"].size() == 3);
    CHECK(doc["raw"][0].size() == 8);

    config.ladder = {1, 5};  // 5 > p = 3
    CHECK(run_guarded(cmd_sweep, config) == kExitParse);

    config.ladder.clear();
    CHECK(run_guarded(cmd_sweep, config) == kExitParse);
}

TEST_CASE("atomic writes leave no temp file behind") {
    const std::string target = (work_dir() / "atomic.txt").string();
    write_file_atomic(target, "payload\n");
    CHECK(read_file(target) == "payload\n");
    CHECK_FALSE(std::filesystem::exists(target + ".tmp"));
}

TEST_CASE("flag parsing helpers") {
    CHECK(parse_family("poisson") == DataFamily::poisson);
    CHECK_THROWS_AS(parse_family("weibull"), InputError);

    CHECK(parse_index_list("0,2,5") == std::vector<std::size_t>{0, 2, 5});
    CHECK_THROWS_AS(parse_index_list("0,-1"), InputError);
    CHECK_THROWS_AS(parse_index_list(""), InputError);

    CHECK(parse_double_list("0.5,-0.5") == std::vector<double>{0.5, -0.5});
    CHECK_THROWS_AS(parse_double_list("a,b"), InputError);

    const auto [lo, hi] = parse_dim_range("2..20");
    CHECK(lo == 2);
    CHECK(hi == 20);
    CHECK(parse_dim_range("7").first == 7);
    CHECK_THROWS_AS(parse_dim_range("x..y"), InputError);

    CHECK(parse_weights("refit") == NestingMode::refit);
    CHECK_THROWS_AS(parse_weights("other"), InputError);
    CHECK(parse_format("csv") == Format::csv);
    CHECK_THROWS_AS(parse_format("xml"), InputError);
}

TEST_SUITE_END();
