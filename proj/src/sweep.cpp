#include "optocool/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "optocool/errors.hpp"
#include "optocool/observables.hpp"
#include "optocool/solve.hpp"

namespace optocool {

namespace {

unsigned thread_count(size_t work_items) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("OPTOCOOL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<size_t>(n, std::max<size_t>(work_items, 1)));
}

// Index-pulling parallel loop; each index writes only its own output slot,
// so the result is identical to the serial evaluation order.
void parallel_for(size_t n, const std::function<void(size_t)>& body) {
    const unsigned workers = thread_count(n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<double> axis_values(const SweepAxis& axis) {
    std::vector<double> v(axis.count);
    for (int i = 0; i < axis.count; ++i) {
        const double u = static_cast<double>(i) / (axis.count - 1);
        if (axis.scale == AxisScale::log) {
            v[i] = std::exp(std::log(axis.start) * (1.0 - u) + std::log(axis.stop) * u);
        } else {
            v[i] = axis.start * (1.0 - u) + axis.stop * u;
        }
    }
    return v;
}

void apply_param(PhysicalParams& p, SweepParam which, double value) {
    switch (which) {
        case SweepParam::delta: p.delta = value; break;
        case SweepParam::g: p.g = value; break;
        case SweepParam::kappa: p.kappa = value; break;
        case SweepParam::gamma_m: p.gamma_m = value; break;
        case SweepParam::n_bar: p.n_bar = value; break;
    }
}

bool wants(const SweepSpec& spec, SweepOutput o) {
    return std::find(spec.outputs.begin(), spec.outputs.end(), o) != spec.outputs.end();
}

struct StablePoint {
    double n_b = 0.0;
    bool stable = false;
};

// Steady phonon number restricted to stable systems; nullopt when unstable
// or when the solve fails.
std::optional<double> stable_phonon(PhysicalParams p, double delta, ModelKind model) {
    p.delta = delta;
    try {
        const DriftSystem sys =
            model == ModelKind::rwa ? build_rwa_system(p) : build_full_system(p);
        const StabilityReport rep = stability(sys);
        if (!rep.stable) return std::nullopt;
        SolveOptions o;
        o.precomputed_stability = &rep;
        return steady_state(sys, o).mu(mom::n_b).real();
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

void SweepSpec::validate() const {
    base.validate();
    if (axes.empty() || axes.size() > 2)
        throw RangeError("sweep: one or two axes required");
    for (const SweepAxis& ax : axes) {
        if (ax.count < 2) throw RangeError("sweep axis: count must be >= 2");
        if (ax.start == ax.stop) throw RangeError("sweep axis: start must differ from stop");
        if (ax.scale == AxisScale::log && (ax.start <= 0 || ax.stop <= 0))
            throw RangeError("sweep axis: log scale requires positive endpoints");
    }
    if (axes.size() == 2 && axes[0].param == axes[1].param)
        throw RangeError("sweep: axes must vary distinct parameters");
    if (outputs.empty()) throw RangeError("sweep: outputs must not be empty");
}

SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();

    std::vector<std::vector<double>> grids;
    for (const SweepAxis& ax : spec.axes) grids.push_back(axis_values(ax));

    std::vector<ModelKind> models;
    if (spec.model == ModelKind::both)
        models = {ModelKind::rwa, ModelKind::full};
    else
        models = {spec.model};

    SweepTable table;
    for (const SweepAxis& ax : spec.axes) table.columns.push_back(to_string(ax.param));
    struct ModelBlock {
        ModelKind model;
        std::string suffix;
        int first_col;
    };
    std::vector<ModelBlock> blocks;
    for (ModelKind m : models) {
        ModelBlock blk;
        blk.model = m;
        blk.suffix = spec.model == ModelKind::both
                         ? (m == ModelKind::rwa ? "_rwa" : "_full")
                         : "";
        blk.first_col = static_cast<int>(table.columns.size());
        if (wants(spec, SweepOutput::stability)) {
            table.columns.push_back("stable" + blk.suffix);
            table.columns.push_back("max_real_part" + blk.suffix);
        }
        if (wants(spec, SweepOutput::phonon)) {
            table.columns.push_back("n_b" + blk.suffix);
            table.columns.push_back("n_a" + blk.suffix);
        }
        if (wants(spec, SweepOutput::variances)) {
            for (const char* name :
                 {"var_x_plus", "var_y_plus", "var_x_minus", "var_y_minus",
                  "unc_product_plus", "unc_product_minus"})
                table.columns.push_back(name + blk.suffix);
        }
        table.columns.push_back("error" + blk.suffix);
        blocks.push_back(blk);
    }
    int closed_col = -1;
    if (wants(spec, SweepOutput::closed_forms)) {
        closed_col = static_cast<int>(table.columns.size());
        for (const char* name :
             {"n_b_rwa_closed_form", "n_b_rwa_resonant", "n_b_min_asymptotic",
              "var_y_plus_asymptotic", "var_x_minus_asymptotic", "d_validity"})
            table.columns.push_back(name);
    }

    const size_t inner = grids.size() == 2 ? grids[1].size() : 1;
    const size_t n_rows = grids[0].size() * inner;
    table.rows.assign(n_rows, std::vector<Cell>(table.columns.size()));

    parallel_for(n_rows, [&](size_t row) {
        std::vector<Cell>& cells = table.rows[row];
        PhysicalParams p = spec.base;
        const size_t i0 = row / inner;
        apply_param(p, spec.axes[0].param, grids[0][i0]);
        cells[0] = cell(grids[0][i0]);
        if (grids.size() == 2) {
            const size_t i1 = row % inner;
            apply_param(p, spec.axes[1].param, grids[1][i1]);
            cells[1] = cell(grids[1][i1]);
        }

        for (const ModelBlock& blk : blocks) {
            int c = blk.first_col;
            try {
                const DriftSystem sys = blk.model == ModelKind::rwa
                                            ? build_rwa_system(p)
                                            : build_full_system(p);
                const StabilityReport rep = stability(sys);
                if (wants(spec, SweepOutput::stability)) {
                    cells[c++] = cell(rep.stable);
                    cells[c++] = cell(rep.max_real_part);
                }
                if (rep.stable || spec.allow_unstable) {
                    SolveOptions o;
                    o.allow_unstable = spec.allow_unstable;
                    o.precomputed_stability = &rep;
                    const SteadyState st = steady_state(sys, o);
                    if (wants(spec, SweepOutput::phonon)) {
                        cells[c++] = cell(st.mu(mom::n_b).real());
                        cells[c++] = cell(st.mu(mom::n_a).real());
                    }
                    if (wants(spec, SweepOutput::variances)) {
                        const VarianceSet vs = variances(st.mu);
                        cells[c++] = cell(vs.var_x_plus);
                        cells[c++] = cell(vs.var_y_plus);
                        cells[c++] = cell(vs.var_x_minus);
                        cells[c++] = cell(vs.var_y_minus);
                        cells[c++] = cell(vs.uncertainty_product_plus);
                        cells[c++] = cell(vs.uncertainty_product_minus);
                    }
                }
            } catch (const Error& e) {
                const int err_col = table.column_index("error" + blk.suffix);
                for (int k = blk.first_col; k <= err_col; ++k) cells[k] = Cell{};
                cells[err_col] = cell(std::string(e.name()));
            }
        }

        if (closed_col >= 0) {
            int c = closed_col;
            try {
                cells[c] = cell(rwa_phonon_closed_form(p));
            } catch (const Error&) {
            }
            try {
                cells[c + 1] = cell(rwa_resonant_phonon(p));
            } catch (const Error&) {
            }
            const double n_gamma = p.gamma_m * p.n_bar;
            try {
                cells[c + 2] = cell(min_phonon_asymptotic(p.kappa, p.g, p.omega_m, n_gamma).total);
            } catch (const Error&) {
            }
            try {
                const AsymptoticVariances av =
                    variance_asymptotic(p.kappa, p.g, p.omega_m, n_gamma);
                cells[c + 3] = cell(av.var_y_plus);
                cells[c + 4] = cell(av.var_x_minus);
            } catch (const Error&) {
            }
            cells[c + 5] = cell(asymptotic_validity(p.kappa, p.g, p.omega_m));
        }
    });
    return table;
}

DetuningMinimum minimize_over_detuning(const PhysicalParams& base, double delta_lo,
                                       double delta_hi, ModelKind model) {
    base.validate();
    if (!(delta_hi > delta_lo)) throw RangeError("minimize_over_detuning: empty range");
    if (model == ModelKind::both)
        throw RangeError("minimize_over_detuning: pick rwa or full");

    constexpr int kCoarse = 64;
    double best_delta = 0.0;
    double best_value = std::numeric_limits<double>::infinity();
    int best_index = -1;
    std::vector<double> grid(kCoarse);
    for (int i = 0; i < kCoarse; ++i) {
        const double u = static_cast<double>(i) / (kCoarse - 1);
        grid[i] = delta_lo * (1.0 - u) + delta_hi * u;
        if (auto v = stable_phonon(base, grid[i], model); v && *v < best_value) {
            best_value = *v;
            best_delta = grid[i];
            best_index = i;
        }
    }
    if (best_index < 0)
        throw NoStablePoint("no stable detuning in the requested range");

    double lo = grid[std::max(0, best_index - 1)];
    double hi = grid[std::min(kCoarse - 1, best_index + 1)];
    auto eval = [&](double x) {
        const auto v = stable_phonon(base, x, model);
        const double value = v ? *v : std::numeric_limits<double>::infinity();
        if (value < best_value) {
            best_value = value;
            best_delta = x;
        }
        return value;
    };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double tol = 1e-6 * base.omega_m;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2);
        }
    }
    return {best_delta, best_value};
}

namespace {

PhysicalParams figure_base(double kappa, double g, double gamma_m, double n_bar) {
    PhysicalParams p;
    p.omega_m = 1.0;
    p.kappa = kappa;
    p.g = g;
    p.gamma_m = gamma_m;
    p.n_bar = n_bar;
    return p;
}

}  // namespace

SweepTable figure_dataset(FigureId id, const FigureOptions& opts) {
    SweepTable table;
    switch (id) {
        case FigureId::fig2: {
            const std::vector<double> gs{0.05, 0.1};
            const SweepAxis ax{SweepParam::delta, -2.0, 0.0, 401, AxisScale::linear};
            const std::vector<double> deltas = axis_values(ax);
            table.columns = {"delta_over_omega_m", "g_over_omega_m", "n_b_rwa"};
            table.rows.assign(gs.size() * deltas.size(),
                              std::vector<Cell>(table.columns.size()));
            parallel_for(table.rows.size(), [&](size_t row) {
                const double g = gs[row / deltas.size()];
                const double delta = deltas[row % deltas.size()];
                auto& cells = table.rows[row];
                cells[0] = cell(delta);
                cells[1] = cell(g);
                PhysicalParams p = figure_base(0.01, g, 1e-5, opts.n_bar.value_or(1e3));
                if (auto v = stable_phonon(p, delta, ModelKind::rwa)) cells[2] = cell(*v);
            });
            return table;
        }
        case FigureId::fig3: {
            const std::vector<double> gs{0.1, 0.2, 0.3};
            const SweepAxis ax{SweepParam::delta, -2.0, 0.0, 401, AxisScale::linear};
            const std::vector<double> deltas = axis_values(ax);
            table.columns = {"delta_over_omega_m", "g_over_omega_m", "n_b_full",
                             "stable", "error"};
            table.rows.assign(gs.size() * deltas.size(),
                              std::vector<Cell>(table.columns.size()));
            parallel_for(table.rows.size(), [&](size_t row) {
                const double g = gs[row / deltas.size()];
                const double delta = deltas[row % deltas.size()];
                auto& cells = table.rows[row];
                cells[0] = cell(delta);
                cells[1] = cell(g);
                PhysicalParams p = figure_base(0.5, g, 1e-5, opts.n_bar.value_or(1e3));
                p.delta = delta;
                try {
                    const DriftSystem sys = build_full_system(p);
                    const StabilityReport rep = stability(sys);
                    cells[3] = cell(rep.stable);
                    if (rep.stable || opts.allow_unstable) {
                        SolveOptions o;
                        o.allow_unstable = opts.allow_unstable;
                        o.precomputed_stability = &rep;
                        cells[2] = cell(steady_state(sys, o).mu(mom::n_b).real());
                    }
                } catch (const Error& e) {
                    cells[4] = cell(std::string(e.name()));
                }
            });
            return table;
        }
        case FigureId::fig05: {
            const SweepAxis ax{SweepParam::delta, -2.0, 0.0, 401, AxisScale::linear};
            const std::vector<double> deltas = axis_values(ax);
            table.columns = {"delta_over_omega_m", "var_x_plus", "var_y_plus",
                             "var_x_minus", "var_y_minus", "stable", "error"};
            table.rows.assign(deltas.size(), std::vector<Cell>(table.columns.size()));
            parallel_for(table.rows.size(), [&](size_t row) {
                auto& cells = table.rows[row];
                cells[0] = cell(deltas[row]);
                PhysicalParams p = figure_base(0.5, 0.2, 1e-5, opts.n_bar.value_or(1e3));
                p.delta = deltas[row];
                try {
                    const DriftSystem sys = build_full_system(p);
                    const StabilityReport rep = stability(sys);
                    cells[5] = cell(rep.stable);
                    if (rep.stable || opts.allow_unstable) {
                        SolveOptions o;
                        o.allow_unstable = opts.allow_unstable;
                        o.precomputed_stability = &rep;
                        const VarianceSet vs = variances(steady_state(sys, o).mu);
                        cells[1] = cell(vs.var_x_plus);
                        cells[2] = cell(vs.var_y_plus);
                        cells[3] = cell(vs.var_x_minus);
                        cells[4] = cell(vs.var_y_minus);
                    }
                } catch (const Error& e) {
                    cells[6] = cell(std::string(e.name()));
                }
            });
            return table;
        }
        case FigureId::fig5: {
            // gamma_m -> 0 realized as gamma_m = 1e-7 with gamma_m * n_bar = 1e-2
            const double gamma_m = 1e-7;
            const double n_bar = opts.n_bar.value_or(1e-2 / gamma_m);
            const std::vector<double> gs =
                axis_values({SweepParam::g, 0.05, 0.5, 101, AxisScale::linear});
            const std::vector<double> kappas =
                axis_values({SweepParam::kappa, 0.05, 1.0, 101, AxisScale::linear});
            table.columns = {"g_over_omega_m", "kappa_over_omega_m", "delta_star",
                             "n_b_min", "n_b_min_asymptotic", "d_validity", "error"};
            table.rows.assign(gs.size() * kappas.size(),
                              std::vector<Cell>(table.columns.size()));
            parallel_for(table.rows.size(), [&](size_t row) {
                const double g = gs[row / kappas.size()];
                const double kappa = kappas[row % kappas.size()];
                auto& cells = table.rows[row];
                cells[0] = cell(g);
                cells[1] = cell(kappa);
                const PhysicalParams p = figure_base(kappa, g, gamma_m, n_bar);
                try {
                    const DetuningMinimum m =
                        minimize_over_detuning(p, -2.0, 0.0, ModelKind::full);
                    cells[2] = cell(m.delta_star);
                    cells[3] = cell(m.n_b_star);
                } catch (const Error& e) {
                    cells[6] = cell(std::string(e.name()));
                }
                try {
                    cells[4] = cell(
                        min_phonon_asymptotic(kappa, g, 1.0, gamma_m * n_bar).total);
                } catch (const Error&) {
                }
                cells[5] = cell(asymptotic_validity(kappa, g, 1.0));
            });
            return table;
        }
        case FigureId::fig6: {
            const double n_bar = opts.n_bar.value_or(1e3);
            const std::vector<double> gs =
                axis_values({SweepParam::g, 0.05, 0.5, 101, AxisScale::linear});
            const std::vector<double> kappas =
                axis_values({SweepParam::kappa, 0.05, 1.0, 101, AxisScale::linear});
            table.columns = {"g_over_omega_m", "kappa_over_omega_m",
                             "var_x_plus", "var_y_plus", "var_x_minus", "var_y_minus",
                             "var_y_plus_asymptotic", "var_x_minus_asymptotic",
                             "d_validity", "d_positive", "stable", "error"};
            table.rows.assign(gs.size() * kappas.size(),
                              std::vector<Cell>(table.columns.size()));
            parallel_for(table.rows.size(), [&](size_t row) {
                const double g = gs[row / kappas.size()];
                const double kappa = kappas[row % kappas.size()];
                auto& cells = table.rows[row];
                cells[0] = cell(g);
                cells[1] = cell(kappa);
                PhysicalParams p = figure_base(kappa, g, 1e-5, n_bar);
                p.delta = -1.0;
                const double d = asymptotic_validity(kappa, g, 1.0);
                cells[8] = cell(d);
                cells[9] = cell(d > 0.0);
                try {
                    const DriftSystem sys = build_full_system(p);
                    const StabilityReport rep = stability(sys);
                    cells[10] = cell(rep.stable);
                    if (rep.stable || opts.allow_unstable) {
                        SolveOptions o;
                        o.allow_unstable = opts.allow_unstable;
                        o.precomputed_stability = &rep;
                        const VarianceSet vs = variances(steady_state(sys, o).mu);
                        cells[2] = cell(vs.var_x_plus);
                        cells[3] = cell(vs.var_y_plus);
                        cells[4] = cell(vs.var_x_minus);
                        cells[5] = cell(vs.var_y_minus);
                    }
                } catch (const Error& e) {
                    cells[11] = cell(std::string(e.name()));
                }
                if (d > 0.0) {
                    try {
                        const AsymptoticVariances av =
                            variance_asymptotic(kappa, g, 1.0, p.gamma_m * n_bar);
                        cells[6] = cell(av.var_y_plus);
                        cells[7] = cell(av.var_x_minus);
                    } catch (const Error&) {
                    }
                }
            });
            return table;
        }
    }
    throw RangeError("unknown figure id");
}

const char* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::delta: return "delta";
        case SweepParam::g: return "g";
        case SweepParam::kappa: return "kappa";
        case SweepParam::gamma_m: return "gamma_m";
        case SweepParam::n_bar: return "n_bar";
    }
    return "unknown";
}

const char* to_string(FigureId id) {
    switch (id) {
        case FigureId::fig2: return "fig2";
        case FigureId::fig3: return "fig3";
        case FigureId::fig5: return "fig5";
        case FigureId::fig05: return "fig05";
        case FigureId::fig6: return "fig6";
    }
    return "unknown";
}

std::optional<FigureId> figure_from_string(const std::string& s) {
    if (s == "fig2") return FigureId::fig2;
    if (s == "fig3") return FigureId::fig3;
    if (s == "fig5") return FigureId::fig5;
    if (s == "fig05") return FigureId::fig05;
    if (s == "fig6") return FigureId::fig6;
    return std::nullopt;
}

}  // namespace optocool
