#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sst/cli.hpp"

namespace {

struct Options {
    std::string manifest;
    std::string out;
    std::optional<int> samples;
    std::optional<int> causal_samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<double> step;
};

const char* describe(std::string_view command) {
    if (command == "curvature") return "cross-check the warped curvature closed forms";
    if (command == "killing-check") return "verify declared fields and static candidates";
    if (command == "killing-classify") return "classify a structured Killing candidate";
    if (command == "energy") return "energy conditions, causal sweep and hyperbolicity";
    if (command == "classify") return "conformal-hyperbolicity classification";
    if (command == "geodesic") return "integrate a geodesic and locate conjugate points";
    return "every applicable section in one report";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature, symmetry and causality reports for standard static space-times"};
    app.require_subcommand(1);
    Options opt;

    for (std::string_view name : sst::cli::kCommands) {
        CLI::App* sub = app.add_subcommand(std::string(name), describe(name));
        sub->add_option("--manifest", opt.manifest, "manifest file (INI dialect)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "write the JSON report here instead of stdout");
        sub->add_option("--samples", opt.samples, "override [numerics] samples");
        sub->add_option("--causal-samples", opt.causal_samples,
                        "override [numerics] causal_samples");
        sub->add_option("--seed", opt.seed, "override [numerics] seed");
        sub->add_option("--tol", opt.tol, "override [numerics] tol");
        sub->add_option("--step", opt.step, "override [numerics] step");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        sst::manifest::Manifest m = sst::manifest::load_manifest(opt.manifest);
        if (opt.samples) {
            if (*opt.samples < 0) throw sst::ValidationError("--samples must be nonnegative");
            m.numerics.samples = *opt.samples;
        }
        if (opt.causal_samples) {
            if (*opt.causal_samples < 0)
                throw sst::ValidationError("--causal-samples must be nonnegative");
            m.numerics.causal_samples = *opt.causal_samples;
        }
        if (opt.seed) m.numerics.seed = *opt.seed;
        if (opt.tol) {
            if (!(*opt.tol > 0.0)) throw sst::ValidationError("--tol must be positive");
            m.numerics.tol = *opt.tol;
        }
        if (opt.step) {
            if (!(*opt.step > 0.0)) throw sst::ValidationError("--step must be positive");
            m.numerics.step = *opt.step;
        }

        const sst::report::Document doc = sst::cli::run(command, m);
        if (!opt.out.empty()) {
            std::ofstream out(opt.out);
            if (!out) throw sst::ValidationError("cannot write report to '" + opt.out + "'");
            doc.write(out);
        } else {
            doc.write(std::cout);
        }
        return doc.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
