#include <cmath>
#include <iostream>
#include <vector>

#include "optocool/checks.hpp"
#include "optocool/config.hpp"
#include "optocool/errors.hpp"
#include "optocool/observables.hpp"
#include "optocool/solve.hpp"

namespace optocool {

namespace {

std::vector<double> time_grid(const TimeGrid& t) {
    std::vector<double> v(t.count);
    for (int i = 0; i < t.count; ++i) {
        const double u = static_cast<double>(i) / (t.count - 1);
        if (t.scale == AxisScale::log)
            v[i] = std::exp(std::log(t.start) * (1.0 - u) + std::log(t.stop) * u);
        else
            v[i] = t.start * (1.0 - u) + t.stop * u;
    }
    return v;
}

DriftSystem build_by_model(const PhysicalParams& p, ModelKind model) {
    if (model == ModelKind::both)
        throw RangeError("this subcommand needs a single model (rwa or full)");
    return model == ModelKind::rwa ? build_rwa_system(p) : build_full_system(p);
}

void add_verdict_cells(std::vector<Cell>& row, const SqueezingVerdict& v) {
    row.push_back(cell(std::string(to_string(v.classification))));
    row.push_back(v.squeezed_quadrature
                      ? cell(std::string(to_string(*v.squeezed_quadrature)))
                      : Cell{});
    row.push_back(cell(v.margin));
}

DataTable steady_report(const RunConfig& cfg, const PhysicalParams& p) {
    const DriftSystem sys = build_by_model(p, cfg.model);
    SolveOptions o;
    o.allow_unstable = cfg.allow_unstable;
    const SteadyState st = steady_state(sys, o);
    const VarianceSet vs = variances(st.mu);
    const SqueezingVerdict plus = classify_field(vs, FieldId::d_plus, cfg.squeezing_tol);
    const SqueezingVerdict minus = classify_field(vs, FieldId::d_minus, cfg.squeezing_tol);

    DataTable table;
    table.columns = {"kappa", "gamma_m", "delta", "g", "n_bar", "quality_factor",
                     "model", "stable", "max_real_part",
                     "n_b", "n_a",
                     "var_x_plus", "var_y_plus", "var_x_minus", "var_y_minus",
                     "unc_product_plus", "unc_product_minus",
                     "field_d_plus", "squeezed_quadrature_d_plus", "margin_d_plus",
                     "field_d_minus", "squeezed_quadrature_d_minus", "margin_d_minus",
                     "n_b_rwa_closed_form", "n_b_rwa_resonant",
                     "n_b_min_asymptotic", "asymptotic_mechanical_term",
                     "asymptotic_backaction_term",
                     "var_y_plus_asymptotic", "var_x_minus_asymptotic", "d_validity",
                     "residual_inf", "symmetrization_delta"};
    std::vector<Cell> row;
    row.reserve(table.columns.size());
    row.push_back(cell(p.kappa));
    row.push_back(cell(p.gamma_m));
    row.push_back(cell(p.delta));
    row.push_back(cell(p.g));
    row.push_back(cell(p.n_bar));
    row.push_back(cell(p.quality_factor()));
    row.push_back(cell(std::string(to_string(cfg.model))));
    row.push_back(cell(st.stability.stable));
    row.push_back(cell(st.stability.max_real_part));
    row.push_back(cell(st.mu(mom::n_b).real()));
    row.push_back(cell(st.mu(mom::n_a).real()));
    row.push_back(cell(vs.var_x_plus));
    row.push_back(cell(vs.var_y_plus));
    row.push_back(cell(vs.var_x_minus));
    row.push_back(cell(vs.var_y_minus));
    row.push_back(cell(vs.uncertainty_product_plus));
    row.push_back(cell(vs.uncertainty_product_minus));
    add_verdict_cells(row, plus);
    add_verdict_cells(row, minus);
    try {
        row.push_back(cell(rwa_phonon_closed_form(p)));
    } catch (const Error&) {
        row.push_back(Cell{});
    }
    try {
        row.push_back(cell(rwa_resonant_phonon(p)));
    } catch (const Error&) {
        row.push_back(Cell{});
    }
    const double n_gamma = p.gamma_m * p.n_bar;
    try {
        const AsymptoticPhonon ap = min_phonon_asymptotic(p.kappa, p.g, p.omega_m, n_gamma);
        row.push_back(cell(ap.total));
        row.push_back(cell(ap.mechanical_term));
        row.push_back(cell(ap.backaction_term));
    } catch (const Error&) {
        row.insert(row.end(), 3, Cell{});
    }
    try {
        const AsymptoticVariances av = variance_asymptotic(p.kappa, p.g, p.omega_m, n_gamma);
        row.push_back(cell(av.var_y_plus));
        row.push_back(cell(av.var_x_minus));
    } catch (const Error&) {
        row.insert(row.end(), 2, Cell{});
    }
    row.push_back(cell(asymptotic_validity(p.kappa, p.g, p.omega_m)));
    row.push_back(cell(st.residual_inf));
    row.push_back(cell(st.symmetrization_delta));
    table.rows.push_back(std::move(row));
    return table;
}

DataTable trajectory_table(const Trajectory& traj) {
    DataTable table;
    table.columns = {"t", "n_a", "n_b"};
    for (int i = 1; i <= kNumMoments; ++i) {
        table.columns.push_back("mu" + std::to_string(i) + "_re");
        table.columns.push_back("mu" + std::to_string(i) + "_im");
    }
    for (size_t k = 0; k < traj.times.size(); ++k) {
        auto& row = table.add_row();
        row[0] = cell(traj.times[k]);
        row[1] = cell(traj.states[k](mom::n_a).real());
        row[2] = cell(traj.states[k](mom::n_b).real());
        for (int i = 0; i < kNumMoments; ++i) {
            row[3 + 2 * i] = cell(traj.states[k](i).real());
            row[4 + 2 * i] = cell(traj.states[k](i).imag());
        }
    }
    return table;
}

}  // namespace

int run(const RunConfig& cfg) {
    const PhysicalParams p = resolve_params(cfg);
    if (p.low_quality_factor())
        std::cerr << "warning: mechanical quality factor Q_m = " << p.quality_factor()
                  << " < 100; the Markovian bath treatment assumes Q_m >> 1\n";

    switch (cfg.command) {
        case Command::steady: {
            write_table(steady_report(cfg, p), cfg);
            return 0;
        }
        case Command::sweep: {
            SweepSpec spec;
            spec.axes = cfg.axes;
            spec.base = p;
            spec.model = cfg.model;
            spec.outputs = cfg.sweep_outputs;
            spec.allow_unstable = cfg.allow_unstable;
            write_table(run_sweep(spec), cfg);
            return 0;
        }
        case Command::evolve: {
            const DriftSystem sys = build_by_model(p, cfg.model);
            MomentVector mu0 = MomentVector::Zero();
            if (cfg.initial == InitialState::thermal) mu0(mom::n_b) = p.n_bar;
            const std::vector<double> grid = time_grid(cfg.time);
            write_table(trajectory_table(evolve(sys, mu0, grid)), cfg);
            return 0;
        }
        case Command::figure: {
            if (!cfg.figure)
                throw SchemaError("figure subcommand requires a figure id");
            FigureOptions fo;
            fo.n_bar = cfg.n_bar_override;
            fo.allow_unstable = cfg.allow_unstable;
            write_table(figure_dataset(*cfg.figure, fo), cfg);
            return 0;
        }
        case Command::check: {
            const std::vector<CheckResult> results = run_checks(p);
            bool all_pass = true;
            DataTable table;
            table.columns = {"check", "pass", "detail"};
            for (const CheckResult& r : results) {
                std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
                if (!r.detail.empty()) std::cout << ": " << r.detail;
                std::cout << '\n';
                all_pass = all_pass && r.pass;
                auto& row = table.add_row();
                row[0] = cell(r.name);
                row[1] = cell(r.pass);
                row[2] = cell(r.detail);
            }
            if (!cfg.out_path.empty()) write_table(table, cfg);
            return all_pass ? 0 : 1;
        }
    }
    throw RangeError("unknown command");
}

}  // namespace optocool
