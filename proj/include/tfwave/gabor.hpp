#ifndef TFWAVE_GABOR_HPP
#define TFWAVE_GABOR_HPP

/*
    Stationary Gabor systems {Pi(sigma) w}_{sigma in alpha Z x beta Z}:
    coefficient grids, empirical frame bounds on a dense probe grid, weighted
    modulation-space norms and finite synthesis.

    Frame bounds are extreme Rayleigh quotients of the discretized frame
    operator, computed by power iteration; they are estimates for the probe
    discretization, not certificates for L2.
*/

#include "tfwave/signals.hpp"

#include <optional>
#include <vector>

namespace tfwave {

struct Lattice {
    double alpha = 1.0;
    double beta = 1.0;
    int index_radius = 1 << 20;  // cap on |m|, |n|
};

struct FrameBounds {
    double A = 0.0;
    double B = 0.0;
};

struct GaborSystem {
    Window window = Window::gaussian(1.0);
    Lattice lattice;
    std::optional<FrameBounds> bounds;
};

struct CoefficientGrid {
    struct Entry {
        int m = 0;
        int n = 0;
        double x = 0.0;
        double xi = 0.0;
        cplx value;
    };
    std::vector<Entry> entries;
    int omitted_nodes = 0;  // nodes inside the radius the oracle could not reach
};

// Samples Pi(x, xi) w on a grid.
SampledSignal sample_atom(const Window& w, double x, double xi, const GridSpec& grid);

// c_{m,n} = V_w u(alpha n, beta m) over all lattice nodes with |node| <= radius.
// Nodes outside the oracle's reliable x-range are omitted and counted.
CoefficientGrid gabor_coeffs(const CoefficientOracle& oracle, const GaborSystem& sys, double radius);

// --- discretized frame operator ----------------------------------------------

// Atoms as vectors on a probe grid under the trapezoid inner product. The
// Rayleigh extremes of S = sum_sigma <., a_sigma> a_sigma are the empirical
// frame bounds of the atom family on the probe.
class DiscreteFrame {
public:
    explicit DiscreteFrame(GridSpec grid);

    void add_atom(const SampledSignal& atom);
    int atom_count() const { return static_cast<int>(atoms_.size()); }
    const GridSpec& grid() const { return grid_; }

    // sum_sigma |<f, a_sigma>|^2 under the trapezoid inner product.
    double coefficient_energy(const SampledSignal& f) const;

    struct Extremes {
        double lambda_min = 0.0;
        double lambda_max = 0.0;
        int iterations_max = 0;
        int iterations_min = 0;
    };
    // Power iteration on S and on (c I - S); numeric error after 10^4
    // iterations without 1e-12 relative stabilization.
    Extremes rayleigh_extremes(std::uint64_t seed = 0x5eed) const;

private:
    std::vector<cplx> weighted(const SampledSignal& f) const;
    void apply(const std::vector<cplx>& v, std::vector<cplx>& out) const;

    GridSpec grid_;
    std::vector<double> sqrt_w_;            // sqrt(dt * trapezoid weight)
    std::vector<std::vector<cplx>> atoms_;  // weighted coordinates
};

// Builds the probe-grid frame operator for a Gabor system: time shifts up to
// T + 6 window widths, modulations up to the dual half-width, both capped by
// lattice.index_radius.
DiscreteFrame assemble_gabor_frame(const GaborSystem& sys, const GridSpec& probe);

struct FrameEstimate {
    double A_est = 0.0;
    double B_est = 0.0;
    int probe_N = 0;
    int atom_count = 0;
};

// Empirical frame bounds; probe N <= 512 (dense assembly).
FrameEstimate frame_bounds_numeric(const GaborSystem& sys, const GridSpec& probe);

// --- modulation norm -----------------------------------------------------------

struct ModulationNormResult {
    double value = 0.0;
    bool truncated = false;  // boundary ring carried > 1e-9 of the mass
    operator double() const { return value; }
};

// (iint |V_w f|^2 e^{2 mu omega(|z|)} dx dxi)^{1/2} over the phase grid.
ModulationNormResult modulation_norm(const SampledSignal& f, double mu, const Window& w,
                                     const WeightFunction& weight, const PhaseGrid& pg);

// sum of entry.value * atoms[i] on the common grid.
SampledSignal synthesize(const CoefficientGrid& coeffs, const std::vector<SampledSignal>& atoms);

} // namespace tfwave

#endif
