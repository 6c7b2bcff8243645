#ifndef TFWAVE_WAVEFRONT_HPP
#define TFWAVE_WAVEFRONT_HPP

/*
    Numerical estimation of global wave front sets from coefficient grids:
    phase space is split into conic sectors and geometric radial shells,
    per-cell coefficient maxima are fitted against the weight to a decay
    rate, and each sector is classified Regular / Singular / Indeterminate.

    A direction is declared Regular when the fitted rate clears a threshold
    (decay against every e^{-lambda omega} is not decidable from finite
    data; the threshold and the sup/sum cross-check below are the honest
    stand-ins). Sectors whose shells all sit below the noise floor while
    nodes are present decay faster than the floor and are Regular as well;
    Indeterminate is reserved for genuine coverage starvation.
*/

#include "tfwave/gabor.hpp"
#include "tfwave/weights.hpp"

#include <string>
#include <vector>

namespace tfwave {

struct ConePartition {
    int K = 16;
    double offset = 0.0;  // sector k covers [offset + 2pi k/K, offset + 2pi (k+1)/K)

    // Sectors centered on the directions 2pi k / K (offset -pi/K), so the
    // coordinate axes and diagonals are sector-interior.
    static ConePartition centered(int K);

    int sector_of(double x, double xi) const;
    double angle_lo(int k) const { return offset + 2.0 * M_PI * k / K; }
    double angle_hi(int k) const { return offset + 2.0 * M_PI * (k + 1) / K; }
    bool operator==(const ConePartition& o) const { return K == o.K && offset == o.offset; }
};

struct ShellSpec {
    double r0 = 2.0;
    double rho = 1.3;
    int J = 10;

    int shell_of(double r) const;  // -1 outside [r0, r0 rho^J)
    double lo(int j) const { return r0 * std::pow(rho, j); }
    double mid(int j) const { return r0 * std::pow(rho, j + 0.5); }
    double outer_radius() const { return r0 * std::pow(rho, J); }
};

struct ShellMaxima {
    int K = 0, J = 0;
    std::vector<double> max_abs;  // K*J, row-major by sector
    std::vector<int> count;       // nodes per cell
    double global_max = 0.0;

    double at(int k, int j) const { return max_abs[static_cast<std::size_t>(k * J + j)]; }
    int cnt(int k, int j) const { return count[static_cast<std::size_t>(k * J + j)]; }
};

ShellMaxima shell_maxima(const CoefficientGrid& coeffs, const ConePartition& part,
                         const ShellSpec& shells);

struct DecayFit {
    double lambda_hat = 0.0;
    int shells_used = 0;  // shells above the floor entering the fit
    bool defined = false; // at least 2 usable shells
};

// Least squares of log max against -omega(shell mid) over shells above the
// floor (absolute).
DecayFit decay_rate_fit(const std::vector<double>& shell_max, const std::vector<int>& shell_count,
                        const WeightFunction& w, const ShellSpec& shells, double floor_abs);

enum class SectorStatus { Regular, Singular, Indeterminate };
const char* to_string(SectorStatus s);

struct SectorReport {
    int k = 0;
    double angle_lo = 0.0, angle_hi = 0.0;
    double lambda_hat = 0.0;
    int shells_used = 0;
    SectorStatus status = SectorStatus::Indeterminate;
    bool coverage_gap = false;  // fewer than 4 occupied shells
};

struct WavefrontReport {
    std::string weight_spec;
    int K = 0;
    double offset = 0.0;
    double r0 = 0.0, rho = 0.0;
    int J = 0;
    double lambda_reg = 0.0;
    double floor_abs = 0.0;
    std::vector<SectorReport> sectors;

    std::vector<int> singular_sectors() const;
    int indeterminate_count() const;
};

// Sentinel rate for sectors whose occupied shells all decayed below floor.
inline constexpr double kDecayedLambda = 1e9;

WavefrontReport wavefront_report(const CoefficientGrid& coeffs, const WeightFunction& w,
                                 const ConePartition& part, const ShellSpec& shells,
                                 double lambda_reg, double floor_rel = 1e-13);

// Continuum-sample variant: dense phase-space grid instead of lattice nodes.
CoefficientGrid dense_stft_grid(const CoefficientOracle& oracle, double step, double radius);

// Report over continuum samples (step should stay below half the smallest
// lattice step of any report it is compared against).
WavefrontReport wavefront_stft(const CoefficientOracle& oracle, double step, double radius,
                               const WeightFunction& w, const ConePartition& part,
                               const ShellSpec& shells, double lambda_reg,
                               double floor_rel = 1e-13);

struct SupSumRow {
    double lambda = 0.0;
    double radius = 0.0;
    double sup_stat = 0.0;  // max e^{lambda omega}|c| within the radius
    double sum_stat = 0.0;  // sum e^{lambda omega}|c|^2 within the radius
};

// Both boundedness statistics per (lambda, truncation radius) for one sector;
// the caller compares growth across radii.
std::vector<SupSumRow> sup_sum_equivalence(const CoefficientGrid& coeffs, const ConePartition& part,
                                           int sector, const WeightFunction& w,
                                           const std::vector<double>& lambdas,
                                           const std::vector<double>& truncations);

struct SectorDiff {
    int k = 0;
    SectorStatus status_a = SectorStatus::Indeterminate;
    SectorStatus status_b = SectorStatus::Indeterminate;
    bool flip = false;  // Regular <-> Singular disagreement
};

struct ComparisonResult {
    bool pass = false;
    int indeterminate_a = 0;
    int indeterminate_b = 0;
    std::vector<SectorDiff> sectors;
};

// PASS iff no sector flips Regular <-> Singular (Indeterminate sectors are
// excluded and counted). Refuses mismatched partitions or weights.
ComparisonResult stability_compare(const WavefrontReport& a, const WavefrontReport& b);

} // namespace tfwave

#endif
