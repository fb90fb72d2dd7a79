#include "optocool/config.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "optocool/errors.hpp"

namespace optocool {

using json = nlohmann::json;

namespace {

std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json& as_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    return j;
}

// strict schema: any key outside `allowed` is an error
void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known)
            throw SchemaError("unknown key '" + join_path(path, item.key()) + "'");
    }
}

double get_number(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key))
        throw SchemaError("missing required key '" + join_path(path, key) + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) throw SchemaError(join_path(path, key) + ": expected a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& path, const char* key,
                     double fallback) {
    return obj.contains(key) ? get_number(obj, path, key) : fallback;
}

int get_count(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw SchemaError(join_path(path, key) + ": expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key))
        throw SchemaError("missing required key '" + join_path(path, key) + "'");
    const json& v = obj.at(key);
    if (!v.is_string()) throw SchemaError(join_path(path, key) + ": expected a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& obj, const std::string& path, const char* key,
                          const std::string& fallback) {
    return obj.contains(key) ? get_string(obj, path, key) : fallback;
}

bool get_bool_or(const json& obj, const std::string& path, const char* key,
                 bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw SchemaError(join_path(path, key) + ": expected a boolean");
    return v.get<bool>();
}

AxisScale parse_scale(const std::string& s, const std::string& path) {
    if (s == "linear") return AxisScale::linear;
    if (s == "log") return AxisScale::log;
    throw SchemaError(path + ": scale must be 'linear' or 'log'");
}

SweepParam parse_sweep_param(const std::string& s, const std::string& path) {
    if (s == "delta") return SweepParam::delta;
    if (s == "g") return SweepParam::g;
    if (s == "kappa") return SweepParam::kappa;
    if (s == "gamma_m") return SweepParam::gamma_m;
    if (s == "n_bar") return SweepParam::n_bar;
    throw SchemaError(path + ": param must be one of delta, g, kappa, gamma_m, n_bar");
}

ModelKind parse_model(const std::string& s, const std::string& path) {
    if (s == "rwa") return ModelKind::rwa;
    if (s == "full") return ModelKind::full;
    if (s == "both") return ModelKind::both;
    throw SchemaError(path + ": model must be 'rwa', 'full' or 'both'");
}

std::complex<double> get_complex(const json& obj, const std::string& path,
                                 const char* key) {
    if (!obj.contains(key))
        throw SchemaError("missing required key '" + join_path(path, key) + "'");
    const json& v = obj.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw SchemaError(join_path(path, key) +
                      ": expected a number or a [re, im] pair");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("configuration is not valid JSON: ") + e.what());
    }
    as_object(root, "config");
    check_keys(root, "", {"effective", "drive", "command", "output"});

    const bool has_effective = root.contains("effective");
    const bool has_drive = root.contains("drive");
    if (has_effective == has_drive)
        throw SchemaError(
            "exactly one of the 'effective' and 'drive' parameter blocks is required");

    RunConfig cfg;
    double omega_unit = 1.0;
    if (has_effective) {
        const json& p = as_object(root.at("effective"), "effective");
        check_keys(p, "effective", {"omega_m", "kappa", "gamma_m", "delta", "g", "n_bar"});
        omega_unit = get_number_or(p, "effective", "omega_m", 1.0);
        if (!(omega_unit > 0)) throw RangeError("effective.omega_m must be positive");
        cfg.mode = RunConfig::Mode::effective;
        cfg.effective.omega_m = 1.0;
        cfg.effective.kappa = get_number(p, "effective", "kappa") / omega_unit;
        cfg.effective.gamma_m = get_number(p, "effective", "gamma_m") / omega_unit;
        cfg.effective.delta = get_number(p, "effective", "delta") / omega_unit;
        cfg.effective.g = get_number(p, "effective", "g") / omega_unit;
        cfg.effective.n_bar = get_number(p, "effective", "n_bar");
        cfg.effective.validate();
    } else {
        const json& p = as_object(root.at("drive"), "drive");
        check_keys(p, "drive",
                   {"omega_m", "kappa", "gamma_m", "delta_0", "g0", "drive_strength_E",
                    "n_bar"});
        omega_unit = get_number_or(p, "drive", "omega_m", 1.0);
        if (!(omega_unit > 0)) throw RangeError("drive.omega_m must be positive");
        cfg.mode = RunConfig::Mode::drive;
        DriveConfig d;
        d.omega_m = 1.0;
        d.kappa = get_number(p, "drive", "kappa") / omega_unit;
        d.gamma_m = get_number(p, "drive", "gamma_m") / omega_unit;
        d.delta_0 = get_number(p, "drive", "delta_0") / omega_unit;
        d.g0 = get_number(p, "drive", "g0") / omega_unit;
        d.drive_strength_E = get_complex(p, "drive", "drive_strength_E") / omega_unit;
        d.n_bar = get_number(p, "drive", "n_bar");
        d.validate();
        cfg.drive = d;
    }

    if (root.contains("command")) {
        const json& c = as_object(root.at("command"), "command");
        const std::string name = get_string(c, "command", "name");
        const auto cmd = command_from_string(name);
        if (!cmd)
            throw SchemaError("command.name: unknown subcommand '" + name + "'");
        cfg.command = *cmd;
        cfg.command_explicit = true;

        std::vector<const char*> allowed{"name", "model", "tol", "allow_unstable"};
        switch (cfg.command) {
            case Command::sweep:
                allowed.insert(allowed.end(), {"axes", "outputs"});
                break;
            case Command::evolve:
                allowed.insert(allowed.end(), {"time", "initial"});
                break;
            case Command::figure:
                allowed.push_back("id");
                break;
            case Command::steady:
            case Command::check:
                break;
        }
        for (const auto& item : c.items()) {
            if (std::none_of(allowed.begin(), allowed.end(),
                             [&](const char* k) { return item.key() == k; }))
                throw SchemaError("unknown key 'command." + item.key() + "'");
        }

        cfg.model = parse_model(get_string_or(c, "command", "model", "full"),
                                "command.model");
        if (cfg.model == ModelKind::both && cfg.command != Command::sweep)
            throw SchemaError("command.model: 'both' is only valid for sweep");
        cfg.squeezing_tol = get_number_or(c, "command", "tol", 1e-6);
        if (!(cfg.squeezing_tol > 0)) throw RangeError("command.tol must be positive");
        cfg.allow_unstable = get_bool_or(c, "command", "allow_unstable", false);

        if (cfg.command == Command::sweep) {
            if (!c.contains("axes"))
                throw SchemaError("missing required key 'command.axes'");
            const json& axes = c.at("axes");
            if (!axes.is_array() || axes.empty() || axes.size() > 2)
                throw SchemaError("command.axes: expected an array of 1 or 2 axes");
            for (size_t i = 0; i < axes.size(); ++i) {
                const std::string path = "command.axes[" + std::to_string(i) + "]";
                const json& a = as_object(axes[i], path);
                check_keys(a, path, {"param", "start", "stop", "count", "scale"});
                SweepAxis ax;
                ax.param = parse_sweep_param(get_string(a, path, "param"), path + ".param");
                const bool rate_like = ax.param != SweepParam::n_bar;
                const double unit = rate_like ? omega_unit : 1.0;
                ax.start = get_number(a, path, "start") / unit;
                ax.stop = get_number(a, path, "stop") / unit;
                ax.count = get_count(a, path, "count", 401);
                ax.scale = parse_scale(get_string_or(a, path, "scale", "linear"),
                                       path + ".scale");
                cfg.axes.push_back(ax);
            }
            cfg.sweep_outputs.clear();
            if (c.contains("outputs")) {
                const json& outs = c.at("outputs");
                if (!outs.is_array())
                    throw SchemaError("command.outputs: expected an array of strings");
                for (const json& o : outs) {
                    if (!o.is_string())
                        throw SchemaError("command.outputs: expected an array of strings");
                    const std::string s = o.get<std::string>();
                    if (s == "phonon")
                        cfg.sweep_outputs.push_back(SweepOutput::phonon);
                    else if (s == "variances")
                        cfg.sweep_outputs.push_back(SweepOutput::variances);
                    else if (s == "stability")
                        cfg.sweep_outputs.push_back(SweepOutput::stability);
                    else if (s == "closed_forms")
                        cfg.sweep_outputs.push_back(SweepOutput::closed_forms);
                    else
                        throw SchemaError("command.outputs: unknown output '" + s + "'");
                }
            } else {
                cfg.sweep_outputs = {SweepOutput::phonon, SweepOutput::stability};
            }
        } else if (cfg.command == Command::evolve) {
            if (!c.contains("time"))
                throw SchemaError("missing required key 'command.time'");
            const json& t = as_object(c.at("time"), "command.time");
            check_keys(t, "command.time", {"start", "stop", "count", "scale"});
            cfg.time.start = get_number_or(t, "command.time", "start", 0.0) * omega_unit;
            cfg.time.stop = get_number(t, "command.time", "stop") * omega_unit;
            cfg.time.count = get_count(t, "command.time", "count", 201);
            cfg.time.scale = parse_scale(
                get_string_or(t, "command.time", "scale", "linear"), "command.time.scale");
            if (cfg.time.count < 2) throw RangeError("command.time.count must be >= 2");
            if (!(cfg.time.stop > cfg.time.start))
                throw RangeError("command.time.stop must exceed start");
            if (cfg.time.scale == AxisScale::log && cfg.time.start <= 0)
                throw RangeError("command.time: log scale requires positive start");
            const std::string init =
                get_string_or(c, "command", "initial", "thermal");
            if (init == "zero")
                cfg.initial = InitialState::zero;
            else if (init == "thermal")
                cfg.initial = InitialState::thermal;
            else
                throw SchemaError("command.initial must be 'zero' or 'thermal'");
        } else if (cfg.command == Command::figure) {
            const std::string fid = get_string(c, "command", "id");
            cfg.figure = figure_from_string(fid);
            if (!cfg.figure)
                throw SchemaError("command.id: unknown figure '" + fid + "'");
        }
    }

    if (root.contains("output")) {
        const json& o = as_object(root.at("output"), "output");
        check_keys(o, "output", {"path", "format"});
        cfg.out_path = get_string_or(o, "output", "path", "");
        const std::string fmt = get_string_or(o, "output", "format", "csv");
        if (fmt == "csv")
            cfg.format = OutputFormat::csv;
        else if (fmt == "json")
            cfg.format = OutputFormat::json;
        else
            throw SchemaError("output.format must be 'csv' or 'json'");
    }
    return cfg;
}

RunConfig default_config(Command cmd) {
    RunConfig cfg;
    cfg.mode = RunConfig::Mode::effective;
    cfg.effective.omega_m = 1.0;
    cfg.effective.kappa = 0.5;
    cfg.effective.gamma_m = 1e-5;
    cfg.effective.delta = -1.0;
    cfg.effective.g = 0.2;
    cfg.effective.n_bar = 1e3;
    cfg.command = cmd;
    return cfg;
}

PhysicalParams resolve_params(const RunConfig& cfg) {
    PhysicalParams p = cfg.mode == RunConfig::Mode::drive ? to_effective(*cfg.drive)
                                                          : cfg.effective;
    if (cfg.n_bar_override) {
        p.n_bar = *cfg.n_bar_override;
    }
    p.validate();
    return p;
}

const char* to_string(Command c) {
    switch (c) {
        case Command::steady: return "steady";
        case Command::sweep: return "sweep";
        case Command::evolve: return "evolve";
        case Command::figure: return "figure";
        case Command::check: return "check";
    }
    return "unknown";
}

const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::rwa: return "rwa";
        case ModelKind::full: return "full";
        case ModelKind::both: return "both";
    }
    return "unknown";
}

std::optional<Command> command_from_string(const std::string& s) {
    if (s == "steady") return Command::steady;
    if (s == "sweep") return Command::sweep;
    if (s == "evolve") return Command::evolve;
    if (s == "figure") return Command::figure;
    if (s == "check") return Command::check;
    return std::nullopt;
}

std::string resolved_config_json(const RunConfig& cfg) {
    json j;
    j["mode"] = cfg.mode == RunConfig::Mode::drive ? "drive" : "effective";
    if (cfg.mode == RunConfig::Mode::drive) {
        const DriveConfig& d = *cfg.drive;
        j["drive"] = {{"omega_m", d.omega_m},
                      {"kappa", d.kappa},
                      {"gamma_m", d.gamma_m},
                      {"delta_0", d.delta_0},
                      {"g0", d.g0},
                      {"drive_strength_E",
                       json::array({d.drive_strength_E.real(), d.drive_strength_E.imag()})},
                      {"n_bar", d.n_bar}};
    }
    const PhysicalParams p = resolve_params(cfg);
    j["effective"] = {{"omega_m", p.omega_m}, {"kappa", p.kappa},
                      {"gamma_m", p.gamma_m}, {"delta", p.delta},
                      {"g", p.g},             {"n_bar", p.n_bar}};

    json c;
    c["name"] = to_string(cfg.command);
    c["model"] = to_string(cfg.model);
    c["tol"] = cfg.squeezing_tol;
    c["allow_unstable"] = cfg.allow_unstable;
    if (cfg.command == Command::sweep) {
        json axes = json::array();
        for (const SweepAxis& ax : cfg.axes) {
            axes.push_back({{"param", to_string(ax.param)},
                            {"start", ax.start},
                            {"stop", ax.stop},
                            {"count", ax.count},
                            {"scale", ax.scale == AxisScale::log ? "log" : "linear"}});
        }
        c["axes"] = axes;
        json outs = json::array();
        for (SweepOutput o : cfg.sweep_outputs) {
            switch (o) {
                case SweepOutput::phonon: outs.push_back("phonon"); break;
                case SweepOutput::variances: outs.push_back("variances"); break;
                case SweepOutput::stability: outs.push_back("stability"); break;
                case SweepOutput::closed_forms: outs.push_back("closed_forms"); break;
            }
        }
        c["outputs"] = outs;
    } else if (cfg.command == Command::evolve) {
        c["time"] = {{"start", cfg.time.start},
                     {"stop", cfg.time.stop},
                     {"count", cfg.time.count},
                     {"scale", cfg.time.scale == AxisScale::log ? "log" : "linear"}};
        c["initial"] = cfg.initial == InitialState::zero ? "zero" : "thermal";
    } else if (cfg.command == Command::figure && cfg.figure) {
        c["id"] = to_string(*cfg.figure);
    }
    j["command"] = c;

    j["output"] = {{"path", cfg.out_path},
                   {"format", cfg.format == OutputFormat::json ? "json" : "csv"}};
    if (cfg.n_bar_override)
        j["n_bar_override"] = *cfg.n_bar_override;
    else
        j["n_bar_override"] = nullptr;
    return j.dump();
}

}  // namespace optocool
