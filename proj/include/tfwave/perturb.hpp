#ifndef TFWAVE_PERTURB_HPP
#define TFWAVE_PERTURB_HPP

/*
    Perturbed atom families y_sigma = x_sigma + eps0 e^{-c omega(|sigma|)} b_sigma
    around a Gabor frame, the Christensen frame/Bessel bounds, weighted
    perturbation sums and the exact squared distance between a stationary and
    a frequency-warped Gaussian atom.

    Every b_sigma is the same compactly supported smooth bump, unit L2 norm,
    with a per-node pseudo-random center jitter and phase derived from
    (seed, m, n) alone, so families are reproducible across thread counts.
*/

#include "tfwave/gabor.hpp"

#include <optional>

namespace tfwave {

struct PerturbedAtom {
    int m = 0;
    int n = 0;
    double x = 0.0;       // node position
    double xi = 0.0;
    double scale = 0.0;   // eps0 e^{-c omega(|sigma|)} = ||x_sigma - y_sigma||
    double center = 0.0;  // bump center (atom time center + jitter)
    double amp = 0.0;     // scale / norm of the bump shape (grid norm if gridded)
    cplx phase;           // unit modulus
};

class PerturbedFamily {
public:
    const GaborSystem& base() const { return base_; }
    const std::vector<PerturbedAtom>& atoms() const { return atoms_; }
    double eps0() const { return eps0_; }
    double decay_rate() const { return decay_c_; }
    std::uint64_t seed() const { return seed_; }
    double bump_halfwidth() const { return halfwidth_; }
    double build_radius() const { return radius_; }
    const std::optional<GridSpec>& grid() const { return grid_; }
    int skipped_off_grid() const { return skipped_off_grid_; }

    // b_sigma scaled: (y_sigma - x_sigma)(t).
    cplx perturbation_value(const PerturbedAtom& a, double t) const;
    SampledSignal perturbation_sampled(const PerturbedAtom& a, const GridSpec& g) const;
    SampledSignal atom_y(const PerturbedAtom& a, const GridSpec& g) const;

    // <u, y_sigma> for every node |sigma| <= radius (nodes beyond the built
    // family fall back to <u, x_sigma>).
    CoefficientGrid coeffs(const CoefficientOracle& oracle, double radius) const;

private:
    friend PerturbedFamily make_perturbed_family(const GaborSystem&, const WeightFunction&,
                                                 double, double, std::uint64_t, double,
                                                 std::optional<GridSpec>, double);
    GaborSystem base_;
    std::vector<PerturbedAtom> atoms_;
    double eps0_ = 0.0, decay_c_ = 0.0, halfwidth_ = 0.25, radius_ = 0.0;
    std::uint64_t seed_ = 0;
    std::optional<GridSpec> grid_;
    int skipped_off_grid_ = 0;
};

// Builds the family over all nodes |sigma| <= radius. When a grid is given,
// bumps are normalized in the grid's trapezoid norm (and atoms whose bump
// would leave the grid keep y_sigma = x_sigma); otherwise in the continuum
// norm. bump_halfwidth <= 0 selects 0.35 * alpha.
PerturbedFamily make_perturbed_family(const GaborSystem& base, const WeightFunction& w,
                                      double eps0, double c, std::uint64_t seed, double radius,
                                      std::optional<GridSpec> grid = std::nullopt,
                                      double bump_halfwidth = 0.0);

struct PerturbationEnergy {
    double value = 0.0;  // sum of ||x_sigma - y_sigma||^2 within the radius
    int covered = 0;
    int missing = 0;     // nodes inside the radius with no stored perturbation
    operator double() const { return value; }
};

PerturbationEnergy perturbation_energy(const PerturbedFamily& fam, double radius);

struct ChristensenBounds {
    std::optional<FrameBounds> frame;  // absent when eps >= A
    double bessel = 0.0;               // 2 (B + eps)
};

// Frame bounds A(1 - sqrt(eps/A))^2, B(1 + sqrt(eps/B))^2 when eps < A;
// the Bessel bound needs no condition on eps.
ChristensenBounds christensen_bounds(double A, double B, double eps);

struct WeightedPerturbationSum {
    double value = 0.0;
    bool overflow = false;  // a term overflowed; offending node recorded
    int offending_m = 0, offending_n = 0;
    bool truncated = false;  // some modulation norm carried a truncation warning
};

// sum over |sigma| <= radius of e^{lambda omega(|sigma|)} ||x-y||_{M^2_mu}^2.
// Successive radii are the caller's convergence probe.
WeightedPerturbationSum weighted_perturbation_sum(const PerturbedFamily& fam,
                                                  const WeightFunction& w, double lambda,
                                                  double mu, double radius,
                                                  const PhaseGrid& rel_grid);

// || Pi(alpha n, beta m) g  -  Pi(alpha n, beta_n m) g ||^2 for g = e^{-t^2/2}:
// 2 sqrt(pi) (1 - cos((beta_n - beta) m alpha n) e^{-(beta_n-beta)^2 m^2 / 4}).
double gaussian_nonstationary_distance(double beta, double beta_n, int m, int n, double alpha);

} // namespace tfwave

#endif
