// Command-line runner for the weak-coupling-limit toolkit: configuration
// driven experiments plus the built-in acceptance self-test.

#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wcl/acceptance.hpp"
#include "wcl/config.hpp"
#include "wcl/errors.hpp"

namespace {

struct CommandContext {
    std::string config_path;
    wcl::CliOverrides overrides;
};

void add_common_options(CLI::App* cmd, CommandContext& ctx, bool config_required) {
    auto* positional = cmd->add_option("config", ctx.config_path, "experiment config (JSON)");
    if (config_required) positional->required();
    double t = 0.0, dt = 0.0;
    cmd->add_option_function<double>(
        "--t", [&ctx](double v) { ctx.overrides.t = v; }, "override time horizon");
    cmd->add_option_function<double>(
        "--dt", [&ctx](double v) { ctx.overrides.dt = v; }, "override time step");
    (void)t;
    (void)dt;
    cmd->add_option_function<int>(
        "--n-max", [&ctx](int v) { ctx.overrides.n_max = v; }, "override level cap");
    cmd->add_option("--lambda", ctx.overrides.lambdas,
                    "override lambda sweep (repeat, strictly decreasing)");
    cmd->add_option_function<std::string>(
        "--out", [&ctx](const std::string& v) { ctx.overrides.out = v; },
        "override output directory");
}

int run_with_config(const CommandContext& ctx, const std::string& experiment) {
    wcl::CliOverrides overrides = ctx.overrides;
    if (!experiment.empty()) overrides.experiment = experiment;
    const wcl::ExperimentConfig config =
        ctx.config_path.empty() ? wcl::default_config(overrides)
                                : wcl::load_config(ctx.config_path, overrides);
    const int status = wcl::run_experiment(config);
    std::printf("experiment %s -> %s (artifacts in %s)\n", config.experiment.c_str(),
                status == 0 ? "ok" : "CHECK FAILED", config.output_directory.c_str());
    return status;
}

int run_selftest(double corrupt_ito) {
    wcl::AcceptanceOptions options;
    options.ito_corruption = corrupt_ito;
    int failures = 0;
    for (const wcl::CriterionResult& r : wcl::run_acceptance_suite(options)) {
        std::printf("[%s] %2d  %-70s %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.measured.c_str(), r.runtime_seconds);
        if (!r.pass) ++failures;
    }
    std::printf("%d/%d criteria passed\n", wcl::criterion_count() - failures,
                wcl::criterion_count());
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak-coupling-limit toolkit: moments, Dyson sweeps, Pule bounds, "
                 "limit QSDE coefficients and repeated-interaction simulation"};
    app.require_subcommand(1);

    CommandContext run_ctx;
    auto* run_cmd = app.add_subcommand("run", "run the experiment named in a config file");
    add_common_options(run_cmd, run_ctx, true);

    double corrupt_ito = 1.0;
    auto* selftest_cmd =
        app.add_subcommand("selftest", "run the built-in acceptance suite");
    selftest_cmd
        ->add_option("--corrupt-ito", corrupt_ito,
                     "fault-injection: rescale the gauge increment before the audit")
        ->capture_default_str();

    struct Named {
        const char* name;
        const char* help;
        CommandContext ctx;
    };
    Named named[] = {
        {"bounds", "level-bound / omega / tail table as CSV", {}},
        {"coefficients", "limit QSDE coefficients and residuals as JSON", {}},
        {"simulate", "repeated-interaction trajectory plus oracle comparison", {}},
        {"dyson-sweep", "lambda sweep of simplex contraction integrals", {}},
        {"moments", "random-word vacuum moments vs the Fock oracle", {}},
        {"ito-audit", "classify all sixteen increment products", {}},
    };
    for (Named& n : named) {
        auto* cmd = app.add_subcommand(n.name, n.help);
        add_common_options(cmd, n.ctx, false);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run_with_config(run_ctx, "");
        if (selftest_cmd->parsed()) return run_selftest(corrupt_ito);
        for (Named& n : named)
            if (app.get_subcommand(n.name)->parsed()) return run_with_config(n.ctx, n.name);
    } catch (const wcl::ValidationError& e) {
        nlohmann::json diag{{"error", "validation"}, {"message", e.what()}};
        std::fprintf(stderr, "%s\n", diag.dump().c_str());
        return 2;
    } catch (const wcl::DivergenceError& e) {
        nlohmann::json diag{{"error", "divergence"}, {"message", e.what()}};
        std::fprintf(stderr, "%s\n", diag.dump().c_str());
        return 2;
    } catch (const wcl::Error& e) {
        nlohmann::json diag{{"error", "internal"}, {"message", e.what()}};
        std::fprintf(stderr, "%s\n", diag.dump().c_str());
        return 3;
    }
    return 0;
}
