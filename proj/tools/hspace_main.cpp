#include <cstdlib>
#include <iostream>
#include <set>

#include "CLI11.hpp"

#include "hspace/builtins.hpp"
#include "hspace/runner.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::uint64_t seed = 0;
    int samples = 0;
    double tolerance = 0.0;
    std::string report_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "config file path or built-in suite name")->required();
    cmd->add_option("--seed", args.seed, "sampling seed (default 0)");
    cmd->add_option("--samples", args.samples, "override the per-check sample count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", args.tolerance, "override every check tolerance");
    cmd->add_option("--report", args.report_path, "report output path");
}

std::string default_report_path() {
    const char* dir = std::getenv("HSPACE_REPORT_DIR");
    const std::string base = (dir && *dir) ? dir : ".";
    return base + "/report.json";
}

// exit codes: 0 all checks pass, 1 some check failed, 2 configuration or
// runtime breakage
int run_filtered(const CLI::App* cmd, const CommonArgs& args,
                 const std::set<std::string>* type_filter) {
    try {
        hspace::Config cfg = hspace::load_config(args.config);
        if (type_filter) {
            std::vector<hspace::CheckSpec> kept;
            for (auto& check : cfg.checks)
                if (type_filter->count(check.type)) kept.push_back(std::move(check));
            cfg.checks = std::move(kept);
        }

        hspace::RunOptions opt;
        opt.seed = args.seed;
        if (cmd->count("--samples")) opt.samples_override = args.samples;
        if (cmd->count("--tol")) opt.tolerance_override = args.tolerance;
        opt.warn = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };

        const hspace::Report report = hspace::run_suite(cfg, opt);

        const std::string path =
            args.report_path.empty() ? default_report_path() : args.report_path;
        hspace::emit(report, path);

        for (const auto& check : report.checks) {
            std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name
                      << "  max_residual=" << check.max_residual
                      << "  tolerance=" << check.tolerance;
            if (!check.errors.empty()) std::cout << "  errors=" << check.errors.size();
            std::cout << "\n";
        }
        std::cout << "report: " << path << "\n";
        return report.all_pass() ? 0 : 1;
    } catch (const hspace::Error& e) {
        std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical checks for contact surfaces, harmonic morphisms and their"
                 " Einstein anti-self-dual extensions"};
    app.require_subcommand(1);

    CommonArgs args;

    CLI::App* run = app.add_subcommand("run", "run every check in a config");
    add_common(run, args);

    CLI::App* vm = app.add_subcommand("verify-metric", "run the metric curvature checks");
    add_common(vm, args);
    static const std::set<std::string> metric_types{"einstein", "scalar-curvature", "weyl-flat",
                                                    "weyl-asd"};

    CLI::App* vw = app.add_subcommand("verify-weyl", "run the Weyl-structure checks");
    add_common(vw, args);
    static const std::set<std::string> weyl_types{"einstein-weyl", "weyl-scalar"};

    CLI::App* sp = app.add_subcommand("surface-pipeline",
                                      "run the contact-surface and submersion checks");
    add_common(sp, args);
    static const std::set<std::string> surface_types{
        "contact",           "holomorphy",        "incidence-roundtrip",  "submersion-formula",
        "pipeline-verdict",  "boundary-hwc",      "nijenhuis-positivity", "nijenhuis-best",
        "isotropic-frobenius", "sky-tangency"};

    CLI::App* cb = app.add_subcommand("calderbank",
                                      "run the Einstein anti-self-dual extension checks");
    add_common(cb, args);
    static const std::set<std::string> calderbank_types{
        "calderbank-einstein", "calderbank-scalar", "calderbank-asd",   "calderbank-flatness",
        "pole",                "retract-verdict",   "retract-dilation", "compose-verdict"};

    CLI::App* lb = app.add_subcommand("list-builtins", "list built-in suites and objects");

    CLI11_PARSE(app, argc, argv);

    if (lb->parsed()) {
        std::cout << "suites:";
        for (const auto& n : hspace::builtin_config_names()) std::cout << " " << n;
        std::cout << "\nmetrics:";
        for (const auto& n : hspace::builtin_metric_names()) std::cout << " " << n;
        std::cout << "\nweyl structures:";
        for (const auto& n : hspace::builtin_weyl_names()) std::cout << " " << n;
        std::cout << "\nsurfaces: model-rotational contact-violating\n";
        return 0;
    }
    if (run->parsed()) return run_filtered(run, args, nullptr);
    if (vm->parsed()) return run_filtered(vm, args, &metric_types);
    if (vw->parsed()) return run_filtered(vw, args, &weyl_types);
    if (sp->parsed()) return run_filtered(sp, args, &surface_types);
    if (cb->parsed()) return run_filtered(cb, args, &calderbank_types);
    return 2;
}
