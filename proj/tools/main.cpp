// nongauss command-line front end.  See README.md for the command surface.

#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"
#include "nongauss/config.hpp"
#include "nongauss/errors.hpp"

namespace {

using nongauss::cli::Settings;

int report(const Settings& s, const std::string& kind, const std::string& message, int code,
           std::size_t suggested_cutoff = 0) {
    if (s.json_errors) {
        nlohmann::json j{{"error", kind}, {"message", message}, {"exit_code", code}};
        if (suggested_cutoff != 0) j["suggested_cutoff"] = suggested_cutoff;
        std::cerr << j.dump() << '\n';
    } else {
        std::cerr << "nongauss: " << kind << ": " << message << '\n';
        if (suggested_cutoff != 0) std::cerr << "  try --cutoff " << suggested_cutoff << '\n';
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = nongauss::cli;
    Settings s;

    CLI::App app{"Non-Gaussianity of continuous-variable states in truncated Fock space"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file mirroring the flags (flags win)");
    app.add_option("--cutoff", s.cutoff, "Fock cutoff per mode (0 = automatic)");
    app.add_option("--tolerance-profile", s.tolerance_profile, "default | strict | loose");
    app.add_option("--log-base", s.log_base, "Entropy unit: nat | 2")
        ->check(CLI::IsMember({"nat", "2"}));
    app.add_option("--seed", s.seed, "Seed for sampled datasets");
    app.add_option("--out", s.out, "Output file (default stdout)");
    app.add_option("--threads", s.threads, "Worker threads (0 = all cores)");
    app.add_flag("--json-errors", s.json_errors, "Print errors as JSON on stderr");

    std::function<int()> run;

    // state build | inspect
    std::string state_spec;
    auto* state = app.add_subcommand("state", "Build or inspect a state");
    state->require_subcommand(1);
    state->fallthrough();
    auto* build = state->add_subcommand("build", "Write a state as JSON");
    build->add_option("--state", state_spec, "State spec, e.g. cat:1.5,0.3")->required();
    build->callback([&] { run = [&] { return cli::state_build(s, state_spec); }; });
    auto* inspect = state->add_subcommand("inspect", "Summarise a state");
    inspect->add_option("--state", state_spec, "State spec or file:path.json")->required();
    inspect->callback([&] { run = [&] { return cli::state_inspect(s, state_spec); }; });

    // measure
    std::string which;
    bool as_json = false;
    int digits = 6;
    double wehrl_spacing = 0.0;
    auto* meas = app.add_subcommand("measure", "Compute deltaA, deltaB or deltaC");
    meas->add_option("measure", which, "deltaA | deltaB | deltaC")
        ->required()
        ->check(CLI::IsMember({"deltaA", "deltaB", "deltaC"}));
    meas->add_option("--state", state_spec, "State spec")->required();
    meas->add_flag("--json", as_json, "Print the value with its diagnostics");
    meas->add_option("--digits", digits, "Decimal places")->check(CLI::Range(0, 17));
    meas->add_option("--wehrl-spacing", wehrl_spacing, "deltaC grid spacing");
    meas->callback([&] {
        run = [&] { return cli::measure(s, which, state_spec, as_json, digits, wehrl_spacing); };
    });

    // channel apply
    std::vector<std::string> channels;
    auto* chan = app.add_subcommand("channel", "Apply channels to a state");
    chan->require_subcommand(1);
    chan->fallthrough();
    auto* chan_apply = chan->add_subcommand("apply", "Apply channels in order, write JSON");
    chan_apply->add_option("--state", state_spec, "Input state spec")->required();
    chan_apply->add_option("--channel", channels, "loss:eta | dephase:Delta | kerr:gamma | "
                                                   "displace:re,im | squeeze:r,phi")
        ->required();
    chan_apply->callback([&] { run = [&] { return cli::channel_apply(s, state_spec, channels); }; });

    // protocol browne | taka
    std::string variant = "a";
    double lambda = 0.5;
    std::size_t steps = 10;
    std::string r_grid = "0.05:1.5:30";
    auto* proto = app.add_subcommand("protocol", "Run a distillation protocol");
    proto->require_subcommand(1);
    proto->fallthrough();
    auto* browne = proto->add_subcommand("browne", "Iterated Gaussification (CSV per step)");
    browne->add_option("--variant", variant, "Input family a | b")->check(CLI::IsMember({"a", "b"}));
    browne->add_option("--lambda", lambda, "Input parameter");
    browne->add_option("--state", state_spec, "Two-mode input spec instead of the family");
    browne->add_option("--steps", steps, "Iterations")->check(CLI::PositiveNumber);
    browne->callback([&] {
        run = [&] { return cli::protocol_browne(s, variant, lambda, state_spec, steps); };
    });
    auto* taka = proto->add_subcommand("taka", "Photon-subtracted squeezed vacuum (CSV)");
    taka->add_option("--r", r_grid, "Squeezing grid lo:hi:points or a list");
    taka->callback([&] { run = [&] { return cli::protocol_taka(s, cli::parse_grid(r_grid)); }; });

    // bound A..E
    std::string bound_name, hist;
    double eta = 1.0;
    auto* bnd = app.add_subcommand("bound", "Photon-counting lower bounds on deltaB");
    bnd->add_option("bound", bound_name, "A | B | C | D | E")
        ->required()
        ->check(CLI::IsMember({"A", "B", "C", "D", "E"}));
    bnd->add_option("--state", state_spec, "State spec");
    bnd->add_option("--hist", hist, "Measured 'm,count' histogram (bound A)");
    bnd->add_option("--eta", eta, "Detector efficiency")->check(CLI::Range(0.0, 1.0));
    bnd->callback([&] {
        run = [&] { return cli::bound(s, bound_name, state_spec, hist, eta); };
    });

    // figure
    std::string fig;
    std::size_t samples = 1000;
    auto* figc = app.add_subcommand("figure", "Emit the CSV dataset of a figure");
    figc->add_option("figure", fig, "Figure id")->required()->check(CLI::IsMember(cli::figure_names()));
    figc->add_option("--samples", samples, "Random mixtures per H (figure 4)");
    figc->callback([&] { run = [&] { return cli::figure(s, fig, samples); }; });

    // sweep
    std::string tmpl, sweep_channel, sweep_measure = "deltaB", var = "x", grid;
    auto* swp = app.add_subcommand("sweep", "Evaluate a measure over a parameter grid");
    swp->add_option("--state", tmpl, "State template with {x}, e.g. coherent:{x}")->required();
    swp->add_option("--channel", sweep_channel, "Channel template; ';' separates stages");
    swp->add_option("--measure", sweep_measure, "deltaA | deltaB | deltaC | purity | entropy | mean | EN");
    swp->add_option("--var", var, "Placeholder name");
    swp->add_option("--grid", grid, "lo:hi:points or comma list")->required();
    swp->callback([&] {
        run = [&] { return cli::sweep(s, tmpl, sweep_channel, sweep_measure, var, grid); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report(s, "ArgumentError", e.what(), 2);
    }

    try {
        nongauss::set_tolerances(nongauss::tolerance_profile(s.tolerance_profile));
        (void)s.base();
        return run();
    } catch (const nongauss::TruncationError& e) {
        return report(s, "TruncationError", e.what(), 4, e.suggested_cutoff());
    } catch (const nongauss::ResourceError& e) {
        return report(s, "ResourceError", e.what(), 4);
    } catch (const nongauss::NumericalError& e) {
        return report(s, "NumericalError", e.what(), 3);
    } catch (const nongauss::ArgumentError& e) {
        return report(s, "ArgumentError", e.what(), 2);
    } catch (const std::exception& e) {
        return report(s, "Error", e.what(), 1);
    }
}
