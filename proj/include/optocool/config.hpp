#pragma once

// Configuration ingestion (strict-schema JSON documents), subcommand
// dispatch and serialization of result tables to CSV/JSON.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optocool/model.hpp"
#include "optocool/sweep.hpp"

namespace optocool {

enum class Command { steady, sweep, evolve, figure, check };
enum class OutputFormat { csv, json };
enum class InitialState { zero, thermal };

struct TimeGrid {
    double start = 0.0;
    double stop = 0.0;
    int count = 201;
    AxisScale scale = AxisScale::linear;
};

// Fully resolved run description: exactly one parameter entry mode, one
// command, one output destination. All defaults are materialized by
// parse_config so the config echoed into JSON meta is self-contained.
struct RunConfig {
    enum class Mode { effective, drive };
    Mode mode = Mode::effective;
    PhysicalParams effective;           // valid in effective mode
    std::optional<DriveConfig> drive;   // set in drive mode

    Command command = Command::steady;
    bool command_explicit = false;  // config document named the command
    ModelKind model = ModelKind::full;

    std::vector<SweepAxis> axes;             // sweep
    std::vector<SweepOutput> sweep_outputs;  // sweep
    TimeGrid time;                           // evolve
    InitialState initial = InitialState::thermal;
    std::optional<FigureId> figure;          // figure

    std::string out_path;                // empty: stdout
    OutputFormat format = OutputFormat::csv;
    bool allow_unstable = false;
    std::optional<double> n_bar_override;
    double squeezing_tol = 1e-6;
};

// Parses and validates a JSON configuration document. Unknown keys are
// rejected with their full path (SchemaError); invariant violations raise
// RangeError. SI inputs are normalized to omega_m = 1 on entry.
RunConfig parse_config(const std::string& text);

// Built-in defaults (effective mode at the standard unresolved-sideband
// working point kappa = 0.5, g = 0.2, gamma_m = 1e-5, delta = -1,
// n_bar = 1e3) for subcommands that can run without a config file.
RunConfig default_config(Command cmd);

// Effective parameters for the run: the drive-mode working point is resolved
// through the classical cubic; n_bar_override applies last.
PhysicalParams resolve_params(const RunConfig& cfg);

// Executes one subcommand, writing declared artifacts. Returns the process
// exit status for non-throwing outcomes (check: 1 when any check fails).
// Domain and config failures are reported by exception.
int run(const RunConfig& cfg);

const char* to_string(Command c);
const char* to_string(ModelKind m);
std::optional<Command> command_from_string(const std::string& s);

// serialization -----------------------------------------------------------

// CSV: comma separated, '.' decimal point, LF endings, mandatory header,
// doubles printed with 17 significant digits.
void write_csv(std::ostream& os, const DataTable& table);

// JSON object mirroring the CSV content plus a meta block (schema version,
// resolved config, build identifier).
void write_json(std::ostream& os, const DataTable& table, const RunConfig& cfg);

void write_table(const DataTable& table, const RunConfig& cfg);

std::string resolved_config_json(const RunConfig& cfg);

}  // namespace optocool
