// Command-line front end: subcommand dispatch, config ingestion, flag
// overrides. Exit codes: 0 success, 1 domain error, 2 configuration error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "optocool/config.hpp"
#include "optocool/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw optocool::SchemaError("cannot read configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace optocool;

    CLI::App app{"optocool: steady-state cooling and squeezing of a "
                 "laser-driven optomechanical cavity in the second-moment picture"};
    app.require_subcommand(1);

    std::string config_path, out_path, format_name, figure_id;
    bool allow_unstable = false;
    double n_bar_override = 0.0, tol_override = 0.0;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* copt = sub->add_option("--config", config_path, "JSON configuration file");
        if (config_required) copt->required();
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--format", format_name, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--allow-unstable", allow_unstable,
                      "report algebraic steady states of unstable drift matrices");
        sub->add_option("--n-bar", n_bar_override,
                        "override the mechanical bath occupation");
        sub->add_option("--tol", tol_override, "squeezing classification tolerance");
    };

    CLI::App* c_steady = app.add_subcommand("steady", "one-point steady-state report");
    add_common(c_steady, true);
    CLI::App* c_sweep = app.add_subcommand("sweep", "parameter-grid sweep");
    add_common(c_sweep, true);
    CLI::App* c_evolve = app.add_subcommand("evolve", "time evolution of the moments");
    add_common(c_evolve, true);
    CLI::App* c_figure =
        app.add_subcommand("figure", "emit the dataset behind one published figure");
    c_figure->add_option("id", figure_id, "fig2, fig3, fig5, fig05 or fig6");
    add_common(c_figure, false);
    CLI::App* c_check =
        app.add_subcommand("check", "run the oracle-equivalence self-test");
    add_common(c_check, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Command cmd = Command::steady;
    CLI::App* active = c_steady;
    if (app.got_subcommand(c_sweep)) {
        cmd = Command::sweep;
        active = c_sweep;
    } else if (app.got_subcommand(c_evolve)) {
        cmd = Command::evolve;
        active = c_evolve;
    } else if (app.got_subcommand(c_figure)) {
        cmd = Command::figure;
        active = c_figure;
    } else if (app.got_subcommand(c_check)) {
        cmd = Command::check;
        active = c_check;
    }

    try {
        RunConfig cfg = config_path.empty() ? default_config(cmd)
                                            : parse_config(slurp(config_path));
        if (cfg.command_explicit && cfg.command != cmd)
            throw SchemaError(std::string("config names command '") +
                              to_string(cfg.command) + "' but subcommand '" +
                              to_string(cmd) + "' was invoked");
        cfg.command = cmd;

        if (!figure_id.empty()) {
            const auto fid = figure_from_string(figure_id);
            if (!fid) throw SchemaError("unknown figure id '" + figure_id + "'");
            if (cfg.figure && *cfg.figure != *fid)
                throw SchemaError("config and command line disagree on the figure id");
            cfg.figure = fid;
        }
        if (!out_path.empty()) cfg.out_path = out_path;
        if (format_opt->count() > 0)
            cfg.format = format_name == "json" ? OutputFormat::json : OutputFormat::csv;
        if (allow_unstable) cfg.allow_unstable = true;
        if (n_bar_opt->count() > 0) cfg.n_bar_override = n_bar_override;
        if (tol_opt->count() > 0) {
            if (!(tol_override > 0)) throw RangeError("--tol must be positive");
            cfg.squeezing_tol = tol_override;
        }
        return run(cfg);
    } catch (const SchemaError& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return 2;
    } catch (const RangeError& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
