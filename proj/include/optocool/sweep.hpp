#pragma once

// Parameter grids, detuning optimization and the datasets behind the
// published cooling/squeezing figures. Grid points are evaluated in
// parallel; output ordering is row-major by grid index regardless of
// completion order, so identical specs give bit-identical tables.

#include <optional>
#include <string>
#include <vector>

#include "optocool/model.hpp"
#include "optocool/table.hpp"

namespace optocool {

enum class SweepParam { delta, g, kappa, gamma_m, n_bar };
enum class AxisScale { linear, log };
enum class ModelKind { rwa, full, both };
enum class SweepOutput { phonon, variances, stability, closed_forms };

struct SweepAxis {
    SweepParam param = SweepParam::delta;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    AxisScale scale = AxisScale::linear;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;  // 1 or 2
    PhysicalParams base;
    ModelKind model = ModelKind::full;
    std::vector<SweepOutput> outputs{SweepOutput::phonon, SweepOutput::stability};
    bool allow_unstable = false;

    void validate() const;  // throws RangeError
};

using SweepTable = DataTable;

// Evaluates the requested outputs at every grid point. Unstable points keep
// stability flag 0 with observables omitted (unless allow_unstable);
// per-point failures are recorded in the error column.
SweepTable run_sweep(const SweepSpec& spec);

struct DetuningMinimum {
    double delta_star = 0.0;
    double n_b_star = 0.0;
};

// Coarse 64-point scan of the steady phonon number over [delta_lo, delta_hi]
// followed by golden-section refinement to a 1e-6 omega_m step, restricted
// to stable points. Throws NoStablePoint when the whole range is unstable.
DetuningMinimum minimize_over_detuning(const PhysicalParams& base,
                                       double delta_lo, double delta_hi,
                                       ModelKind model);

enum class FigureId { fig2, fig3, fig5, fig05, fig6 };

struct FigureOptions {
    std::optional<double> n_bar;  // overrides the figure's default bath occupation
    bool allow_unstable = false;
};

// Plot-ready dataset for one figure:
//   fig2  RWA phonon number vs delta for g in {0.05, 0.10}, kappa = 0.01
//   fig3  full phonon number vs delta for g in {0.1, 0.2, 0.3}, kappa = 0.5
//   fig5  min-over-delta phonon number over (g, kappa), gamma_m -> 0 proxy
//   fig05 the four d+- quadrature variances vs delta at g = 0.2, kappa = 0.5
//   fig6  variance surfaces over (g, kappa) at delta = -omega_m
SweepTable figure_dataset(FigureId id, const FigureOptions& opts = {});

const char* to_string(SweepParam p);
const char* to_string(FigureId id);
std::optional<FigureId> figure_from_string(const std::string& s);

}  // namespace optocool
