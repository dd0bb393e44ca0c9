#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include "csv.hpp"
#include "nestspec/coxph.hpp"
#include "nestspec/errors.hpp"
#include "nestspec/glm.hpp"
#include "nestspec/linear_model.hpp"
#include "nestspec/timeseries.hpp"

namespace nestspec::cli {

namespace {

bool log_enabled() {
    const char* v = std::getenv("NESTSPEC_LOG");
    return v != nullptr && v[0] != '\0' && std::string(v) != "0";
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[nestspec] " << msg << "\n";
}

JsonValue spectrum_to_json(const SpectralSummary& s) {
    JsonValue o = JsonValue::object();
    o.set("eigenvalues", JsonValue::array_of(s.eigenvalues));
    o.set("spectral_radius", s.spectral_radius);
    o.set("min_eigenvalue", s.min_eigenvalue);
    return o;
}

JsonValue convergence_to_json(bool converged, int iterations, double final_step_norm) {
    JsonValue o = JsonValue::object();
    o.set("converged", converged);
    o.set("iterations", iterations);
    o.set("final_step_norm", final_step_norm);
    return o;
}

std::vector<double> standard_errors_from(const SymmetricMatrix& covariance) {
    std::vector<double> se(covariance.dim());
    for (std::size_t i = 0; i < covariance.dim(); ++i)
        se[i] = std::sqrt(std::max(0.0, covariance(i, i)));
    return se;
}

JsonValue report_to_json(const NestedComparisonReport& r) {
    JsonValue o = JsonValue::object();
    o.set("bias_saturated", r.bias_saturated);
    o.set("bias_nested", r.bias_nested);
    o.set("residual_norm_saturated", r.residual_norm_saturated);
    o.set("residual_norm_nested", r.residual_norm_nested);
    o.set("var_radius_saturated", r.var_radius_saturated);
    o.set("var_radius_nested", r.var_radius_nested);
    o.set("info_radius_saturated", r.info_radius_saturated);
    o.set("info_radius_nested", r.info_radius_nested);
    o.set("inv_info_radius_saturated", r.inv_info_radius_saturated);
    o.set("inv_info_radius_nested", r.inv_info_radius_nested);
    JsonValue inter = JsonValue::object();
    inter.set("holds", r.info_interlacing.holds);
    inter.set("max_violation", r.info_interlacing.max_violation);
    inter.set("checked_inequalities", r.info_interlacing.checked_inequalities);
    o.set("gram_interlacing", std::move(inter));
    o.set("mode", r.mode == NestingMode::shared ? "shared" : "refit");
    o.set("theorem_backed", r.theorem_backed);
    o.set("orderings_hold", r.orderings_hold);
    return o;
}

std::string report_document(const JsonValue& doc, Format format) {
    if (format == Format::json) return doc.dump();
    std::string out = "field,value\n";
    for (const auto& [key, value] : doc.flatten()) out += key + "," + value + "\n";
    return out;
}

}  // namespace

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw InputError("unknown format '" + s + "' (expected json or csv)");
}

DataFamily parse_family(const std::string& s) {
    if (s == "linear" || s == "gaussian") return DataFamily::linear;
    if (s == "binomial") return DataFamily::binomial;
    if (s == "poisson") return DataFamily::poisson;
    if (s == "survival" || s == "cox") return DataFamily::survival;
    if (s == "ar" || s == "timeseries") return DataFamily::ar;
    throw InputError("unknown family '" + s +
                     "' (expected linear, binomial, poisson, survival, or ar)");
}

NestingMode parse_weights(const std::string& s) {
    if (s == "shared") return NestingMode::shared;
    if (s == "refit") return NestingMode::refit;
    throw InputError("unknown weights mode '" + s + "' (expected shared or refit)");
}

std::vector<std::size_t> parse_index_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        const std::string tok = s.substr(pos, comma - pos);
        if (tok.empty()) throw InputError("empty entry in index list '" + s + "'");
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (end != tok.c_str() + tok.size() || v < 0)
            throw InputError("'" + tok + "' is not a non-negative integer");
        out.push_back(static_cast<std::size_t>(v));
        pos = comma + 1;
    }
    if (out.empty()) throw InputError("index list is empty");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        const std::string tok = s.substr(pos, comma - pos);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
            throw InputError("'" + tok + "' is not a number");
        out.push_back(v);
        pos = comma + 1;
    }
    if (out.empty()) throw InputError("number list is empty");
    return out;
}

std::pair<std::size_t, std::size_t> parse_dim_range(const std::string& s) {
    const std::size_t dots = s.find("..");
    auto to_size = [&](const std::string& tok) {
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (tok.empty() || end != tok.c_str() + tok.size() || v < 1)
            throw InputError("'" + tok + "' is not a positive integer");
        return static_cast<std::size_t>(v);
    };
    if (dots == std::string::npos) {
        const std::size_t v = to_size(s);
        return {v, v};
    }
    return {to_size(s.substr(0, dots)), to_size(s.substr(dots + 2))};
}

JsonValue run_fit(const FitConfig& config) {
    const Dataset dataset = read_dataset(config.input, config.family);

    JsonValue doc = JsonValue::object();
    doc.set("schema_version", kSchemaVersion);
    doc.set("command", "fit");
    doc.set("family", data_family_name(config.family));

    switch (config.family) {
        case DataFamily::linear: {
            const auto& reg = dataset.regression();
            const LinearFit fit = fit_ols(reg.x, reg.y);
            doc.set("n", reg.y.size());
            doc.set("p", reg.x.n_cols());
            doc.set("estimates", JsonValue::array_of(fit.beta_hat));
            doc.set("standard_errors", JsonValue::array_of(standard_errors_from(fit.covariance)));
            doc.set("covariance_spectrum", spectrum_to_json(eigenvalues_symmetric(fit.covariance)));
            doc.set("convergence", convergence_to_json(true, 0, 0.0));
            JsonValue model = JsonValue::object();
            model.set("rss", fit.rss);
            model.set("sigma2_hat", fit.sigma2_hat);
            model.set("dof", static_cast<long long>(fit.dof));
            doc.set("model", std::move(model));
            break;
        }
        case DataFamily::binomial:
        case DataFamily::poisson: {
            const auto& reg = dataset.regression();
            const GlmFamily family = config.family == DataFamily::binomial ? GlmFamily::binomial
                                                                           : GlmFamily::poisson;
            const GlmFit fit = fit_glm(reg.x, reg.y, family);
            doc.set("n", reg.y.size());
            doc.set("p", reg.x.n_cols());
            doc.set("estimates", JsonValue::array_of(fit.beta_hat));
            doc.set("standard_errors",
                    JsonValue::array_of(standard_errors_from(fit.fisher_inverse)));
            doc.set("covariance_spectrum",
                    spectrum_to_json(eigenvalues_symmetric(fit.fisher_inverse)));
            doc.set("convergence",
                    convergence_to_json(fit.converged, fit.iterations, fit.final_step_norm));
            JsonValue model = JsonValue::object();
            model.set("loglik", fit.loglik);
            model.set("dispersion", fit.dispersion);
            model.set("flagged_observations", static_cast<long long>(fit.flagged_observations.size()));
            doc.set("model", std::move(model));
            break;
        }
        case DataFamily::survival: {
            const auto& records = dataset.survival().records;
            const CoxFit fit = fit_cox(records);
            long long events = 0;
            for (const auto& rec : records) events += rec.event ? 1 : 0;
            doc.set("n", records.size());
            doc.set("p", records.empty() ? 0 : records[0].covariates.size());
            doc.set("estimates", JsonValue::array_of(fit.beta_hat));
            doc.set("standard_errors",
                    JsonValue::array_of(standard_errors_from(fit.fisher_inverse)));
            doc.set("covariance_spectrum",
                    spectrum_to_json(eigenvalues_symmetric(fit.fisher_inverse)));
            doc.set("convergence", convergence_to_json(fit.converged, fit.iterations, 0.0));
            JsonValue model = JsonValue::object();
            model.set("partial_loglik", fit.partial_loglik);
            model.set("events", events);
            doc.set("model", std::move(model));
            break;
        }
        case DataFamily::ar: {
            if (!config.ar_order.has_value())
                throw InputError("ar fits require --order (the AR model order)");
            const std::size_t order = *config.ar_order;
            const auto& series = dataset.series().series;
            const AutocovarianceEstimate gamma = autocovariance(series, order);
            const YuleWalkerSolution yw = solve_yule_walker(gamma, order);

            SymmetricMatrix covariance = invert_spd(toeplitz_from(gamma, order));
            const double scale = yw.sigma2 / static_cast<double>(series.n());
            SymmetricMatrix scaled(covariance.dim());
            for (std::size_t i = 0; i < covariance.dim(); ++i)
                for (std::size_t j = i; j < covariance.dim(); ++j)
                    scaled.set(i, j, scale * covariance(i, j));

            doc.set("n", series.n());
            doc.set("p", order);
            doc.set("estimates", JsonValue::array_of(yw.phi));
            doc.set("standard_errors", JsonValue::array_of(standard_errors_from(scaled)));
            doc.set("covariance_spectrum", spectrum_to_json(eigenvalues_symmetric(scaled)));
            doc.set("convergence", convergence_to_json(true, 0, 0.0));
            JsonValue model = JsonValue::object();
            model.set("order", order);
            model.set("sigma2", yw.sigma2);
            model.set("autocovariance", JsonValue::array_of(gamma.gamma));
            model.set("toeplitz_spectrum", spectrum_to_json(yw.toeplitz_spectrum));
            doc.set("model", std::move(model));
            break;
        }
    }
    return doc;
}

JsonValue run_compare(const CompareConfig& config, bool& theorem_violated) {
    const Dataset dataset = read_dataset(config.input, config.family);

    JsonValue doc = JsonValue::object();
    doc.set("schema_version", kSchemaVersion);
    doc.set("command", "compare");
    doc.set("family", data_family_name(config.family));

    NestedComparisonReport report;
    if (config.family == DataFamily::ar) {
        if (!config.ar_order || !config.ar_nested_order)
            throw InputError("ar comparisons require --order and --nested-order");
        const ArNestedComparison cmp =
            compare_nested_ar(dataset.series().series, *config.ar_order, *config.ar_nested_order);
        report = cmp.report;
        doc.set("order", *config.ar_order);
        doc.set("nested_order", *config.ar_nested_order);
        doc.set("report", report_to_json(report));
        JsonValue sat = JsonValue::object();
        sat.set("phi", JsonValue::array_of(cmp.saturated.phi));
        sat.set("sigma2", cmp.saturated.sigma2);
        doc.set("saturated", std::move(sat));
        JsonValue nest = JsonValue::object();
        nest.set("phi", JsonValue::array_of(cmp.nested.phi));
        nest.set("sigma2", cmp.nested.sigma2);
        doc.set("nested", std::move(nest));
    } else {
        if (config.subset.empty()) throw InputError("compare requires --subset");
        JsonValue subset_json = JsonValue::array();
        for (std::size_t i : config.subset) subset_json.push_back(JsonValue(i));
        doc.set("subset", std::move(subset_json));

        if (config.family == DataFamily::survival) {
            const auto& records = dataset.survival().records;
            const std::size_t p = records.empty() ? 0 : records[0].covariates.size();
            const ColumnSubset subset(config.subset, p);
            report = compare_nested_cox(records, subset, config.mode);
        } else {
            const auto& reg = dataset.regression();
            const ColumnSubset subset(config.subset, reg.x.n_cols());
            if (config.family == DataFamily::linear) {
                report = compare_nested(reg.x, reg.y, subset);
            } else {
                const GlmFamily family = config.family == DataFamily::binomial
                                             ? GlmFamily::binomial
                                             : GlmFamily::poisson;
                report = compare_nested_glm(reg.x, reg.y, family, subset, config.mode);
            }
        }
        doc.set("report", report_to_json(report));
    }

    theorem_violated = report.theorem_backed && !report.orderings_hold;
    return doc;
}

TradeoffCurve run_sweep_command(const SweepConfig& config) {
    SplitSpec split_spec;
    split_spec.train_fraction = config.train_fraction;
    // Decorrelated from the generator stream; the harness derives
    // per-replicate seeds from each independently.
    split_spec.seed = config.seed ^ 0x9e3779b97f4a7c15ull;

    if (!config.input.has_value()) {
        const GeneratorSpec generator = noisy_cubic_spec(config.n, config.seed);
        DegreeLadder ladder = default_degree_ladder();
        if (!config.ladder.empty()) ladder.degrees = config.ladder;
        return sweep_complexity(generator, Ladder{ladder}, split_spec, config.replicates);
    }

    const Dataset dataset = read_dataset(*config.input, config.family);
    if (config.ladder.empty()) throw InputError("sweep on a file requires --ladder");
    if (config.family == DataFamily::ar) {
        OrderLadder ladder{config.ladder};
        return sweep_complexity(dataset, Ladder{std::move(ladder)}, split_spec,
                                config.replicates);
    }
    std::size_t p = 0;
    if (config.family == DataFamily::survival) {
        const auto& records = dataset.survival().records;
        p = records.empty() ? 0 : records[0].covariates.size();
    } else {
        p = dataset.regression().x.n_cols();
    }
    SubsetLadder ladder;
    for (std::size_t size : config.ladder) {
        if (size == 0 || size > p)
            throw InputError("ladder rung size " + std::to_string(size) +
                             " is out of range for " + std::to_string(p) + " columns");
        ladder.subsets.push_back(ColumnSubset::leading(size, p));
    }
    return sweep_complexity(dataset, Ladder{std::move(ladder)}, split_spec, config.replicates);
}

std::string sweep_to_csv(const TradeoffCurve& curve) {
    std::string out =
        "complexity,train_cost_mean,train_cost_se,validation_cost_mean,validation_cost_se,"
        "var_radius_mean\n";
    for (const auto& pt : curve.points) {
        out += std::to_string(pt.complexity);
        out += "," + format_number(pt.train_cost_mean);
        out += "," + format_number(pt.train_cost_se);
        out += "," + format_number(pt.validation_cost_mean);
        out += "," + format_number(pt.validation_cost_se);
        out += "," + format_number(pt.var_radius_mean);
        out += "\n";
    }
    return out;
}

JsonValue sweep_to_json(const SweepConfig& config, const TradeoffCurve& curve) {
    JsonValue doc = JsonValue::object();
    doc.set("schema_version", kSchemaVersion);
    doc.set("command", "sweep");
    JsonValue cfg = JsonValue::object();
    cfg.set("family", config.input ? data_family_name(config.family) : "linear");
    cfg.set("benchmark", !config.input.has_value());
    cfg.set("replicates", config.replicates);
    cfg.set("train_fraction", config.train_fraction);
    cfg.set("seed", static_cast<long long>(config.seed));
    doc.set("config", std::move(cfg));

    JsonValue points = JsonValue::array();
    for (const auto& pt : curve.points) {
        JsonValue o = JsonValue::object();
        o.set("complexity", pt.complexity);
        o.set("train_cost_mean", pt.train_cost_mean);
        o.set("train_cost_se", pt.train_cost_se);
        o.set("validation_cost_mean", pt.validation_cost_mean);
        o.set("validation_cost_se", pt.validation_cost_se);
        o.set("var_radius_mean", pt.var_radius_mean);
        o.set("var_radius_se", pt.var_radius_se);
        o.set("failures", pt.failures);
        points.push_back(std::move(o));
    }
    doc.set("points", std::move(points));

    JsonValue raw = JsonValue::array();
    for (const auto& rung : curve.raw) {
        JsonValue samples = JsonValue::array();
        for (const auto& s : rung) {
            JsonValue o = JsonValue::object();
            o.set("replicate", s.replicate);
            o.set("train_cost", s.train_cost);
            o.set("validation_cost", s.validation_cost);
            o.set("var_radius", s.var_radius);
            samples.push_back(std::move(o));
        }
        raw.push_back(std::move(samples));
    }
    doc.set("raw", std::move(raw));
    return doc;
}

JsonValue verify_to_json(const VerifyCommandConfig& config, const VerifyResult& result) {
    JsonValue doc = JsonValue::object();
    doc.set("schema_version", kSchemaVersion);
    doc.set("command", "verify");
    doc.set("seed", static_cast<long long>(config.fuzz.seed));
    doc.set("trials", config.fuzz.trials);
    JsonValue dims = JsonValue::object();
    dims.set("min", config.fuzz.dim_min);
    dims.set("max", config.fuzz.dim_max);
    doc.set("dims", std::move(dims));

    JsonValue properties = JsonValue::array();
    for (const auto& prop : result.properties) {
        JsonValue o = JsonValue::object();
        o.set("name", prop.name);
        o.set("trials", prop.trials);
        o.set("violations", prop.violations);
        o.set("max_violation", prop.max_violation);
        if (prop.violations > 0) {
            o.set("first_violation_seed", static_cast<long long>(prop.first_violation_seed));
            o.set("first_violation_dim", prop.first_violation_dim);
        }
        properties.push_back(std::move(o));
    }
    doc.set("properties", std::move(properties));
    doc.set("all_pass", result.all_pass);
    return doc;
}

int cmd_fit(const FitConfig& config) {
    log_line("fit: family=" + std::string(data_family_name(config.family)) + " input=" +
             config.input);
    const JsonValue doc = run_fit(config);
    write_file_atomic(config.output, report_document(doc, config.format));
    log_line("fit: wrote " + config.output);
    return kExitOk;
}

int cmd_compare(const CompareConfig& config) {
    log_line("compare: family=" + std::string(data_family_name(config.family)));
    bool theorem_violated = false;
    const JsonValue doc = run_compare(config, theorem_violated);
    write_file_atomic(config.output, report_document(doc, config.format));
    log_line("compare: wrote " + config.output);
    if (theorem_violated) {
        std::cerr << "nestspec compare: theorem-backed ordering violated; this indicates a "
                     "software defect, not a property of the data\n";
        return kExitTheorem;
    }
    return kExitOk;
}

int cmd_sweep(const SweepConfig& config) {
    const TradeoffCurve curve = run_sweep_command(config);
    const std::string content = config.format == Format::csv
                                    ? sweep_to_csv(curve)
                                    : sweep_to_json(config, curve).dump();
    write_file_atomic(config.output, content);
    log_line("sweep: wrote " + config.output);
    return kExitOk;
}

int cmd_verify(const VerifyCommandConfig& config) {
    const VerifyResult result = run_verify(config.fuzz);
    write_file_atomic(config.output, report_document(verify_to_json(config, result),
                                                     config.format));
    log_line("verify: wrote " + config.output);
    if (!result.all_pass) {
        for (const auto& prop : result.properties)
            if (prop.violations > 0)
                std::cerr << "nestspec verify: property '" << prop.name << "' violated "
                          << prop.violations << " time(s); first at seed "
                          << prop.first_violation_seed << " (dim " << prop.first_violation_dim
                          << ")\n";
        return kExitTheorem;
    }
    return kExitOk;
}

int cmd_simulate(const SimulateConfig& config) {
    const Dataset dataset = generate(config.generator);
    write_file_atomic(config.output, dataset_to_csv(dataset));

    const GeneratorSpec& spec = config.generator;
    JsonValue meta = JsonValue::object();
    meta.set("schema_version", kSchemaVersion);
    meta.set("command", "simulate");
    meta.set("family", data_family_name(spec.family));
    meta.set("n", spec.n);
    meta.set("seed", static_cast<long long>(spec.seed));
    meta.set("true_parameters", JsonValue::array_of(spec.true_parameters));
    meta.set("noise", spec.noise);
    meta.set("design", spec.design == DesignKind::polynomial ? "polynomial" : "gaussian_iid");
    write_file_atomic(config.output + ".meta.json", meta.dump());
    log_line("simulate: wrote " + config.output + " (+ sidecar metadata)");
    return kExitOk;
}

int guarded(int (*body)(const void*), const void* config) {
    try {
        return body(config);
    } catch (const IoError& e) {
        std::cerr << "nestspec: I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const InputError& e) {
        std::cerr << "nestspec: " << e.what() << "\n";
        return kExitParse;
    } catch (const NumericError& e) {
        std::cerr << "nestspec: fit failed: " << e.what() << "\n";
        return kExitFit;
    } catch (const std::exception& e) {
        std::cerr << "nestspec: internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace nestspec::cli
