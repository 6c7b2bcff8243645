#ifndef TFWAVE_NSGT_HPP
#define TFWAVE_NSGT_HPP

/*
    Painless nonstationary Gabor systems.

    Time side: atoms g_{m,n}(t) = e^{i beta_n m t} g(t - alpha n) with a
    compactly supported window g. When 1/beta_n covers the support width, the
    frame operator is multiplication by

        G(t) = sum_n (2 pi / beta_n) |g(t - alpha n)|^2 .

    The 2 pi comes from the Fourier convention used throughout (e^{i beta m t}
    exponentials are orthogonal over intervals of length 2 pi / beta); it is
    pinned by the reconstruction and Rayleigh-quotient identities.

    Frequency side: atoms h_{m,n}(t) = h_m(t - alpha_m n) with spec(h_m)
    = hhat(. - beta m) compactly supported; there the multiplier on the
    Fourier side is sum_m (1 / alpha_m) |hhat(xi - beta m)|^2 (the Plancherel
    factor cancels against the squared pairing).

    Also here: the derivative machinery for 1/G (partition-sum derivatives,
    composition counts with their closed-form and exponential bounds, and the
    finite-order multiplier constant).
*/

#include "tfwave/gabor.hpp"

#include <vector>

namespace tfwave {

class StepSequence {
public:
    static StepSequence constant(double v);
    static StepSequence sine(double base, double amp);  // base * (1 + amp sin n)
    static StepSequence table(std::vector<int> n, std::vector<double> v);
    double operator()(int n) const;
    std::string spec_string() const;

private:
    enum class Kind { Constant, Sine, Table } kind_ = Kind::Constant;
    double base_ = 1.0, amp_ = 0.0;
    std::vector<int> tab_n_;
    std::vector<double> tab_v_;
};

// Parses "const:<v>", "sine:<base>,<amp>" or "csv:<path>" (columns n,value).
StepSequence parse_steps(const std::string& spec);

struct NSGSystemTime {
    Window window = Window::bump(1.0);
    double alpha = 0.5;
    StepSequence betas = StepSequence::constant(0.4);
    int index_radius = 64;  // atoms stored for |n| <= index_radius
};

struct NSGSystemFreq {
    Window spectrum_window = Window::bump(1.0);  // hhat, compact in xi
    double beta = 0.5;
    StepSequence alphas = StepSequence::constant(0.4);
    int index_radius = 64;  // |m| <= index_radius
};

// Built from time samples: takes the FFT, detects the spectral support.
NSGSystemFreq nsg_freq_from_signal(const SampledSignal& h, double beta, StepSequence alphas,
                                   int index_radius);

struct PainlessCertificate {
    enum class Side { Time, Frequency };
    Side side = Side::Time;
    bool is_frame = false;        // inf of the multiplier above 1e-10
    double A = 0.0;               // sampled inf of the multiplier (interior)
    double B = 0.0;               // sampled sup
    double support_lo = 0.0;      // window support [A1, B1]
    double support_hi = 0.0;
    double interior_lo = 0.0;     // range where the stored index set is complete
    double interior_hi = 0.0;
    double alpha = 0.0;           // translation step (time) / beta (frequency)
    double periodicity_defect = 0.0;  // max |G(t + step) - G(t)| over one period
    std::vector<double> period_samples;  // multiplier over [0, step)
    double period_step = 0.0;

    // system copy, so the certificate can evaluate its operator exactly
    Window window = Window::bump(1.0);
    StepSequence steps = StepSequence::constant(0.4);
    int index_radius = 0;
    double parseval = 1.0;  // 2 pi on the time side, 1 on the frequency side

    // The multiplier sum_n parseval/step_n |w(t - alpha n)|^2, locally finite.
    double multiplier(double t) const;
    // Derived lower bound on the steps: step_n >= sup|w|^2 / B.
    double step_lower_bound() const;
};

// Verifies the support condition 1/beta_n >= B1 - A1 for every stored n
// (refusal carries the offending n) and samples the multiplier; A below
// 1e-10 yields a certificate with is_frame = false, never an error.
PainlessCertificate painless_check_time(const NSGSystemTime& sys);
PainlessCertificate painless_check_freq(const NSGSystemFreq& sys);

// G . f pointwise (time side; works on non-frames, where G may vanish).
SampledSignal diagonal_frame_operator(const PainlessCertificate& cert, const SampledSignal& f);

// Truncated sum_{m,n} <f, g_{m,n}> g_{m,n} with discrete inner products;
// each row n keeps |beta_n m| <= xi_cut. Throws when some boundary-row
// coefficient is >= 1e-12 (truncation not certified); the message carries
// the largest boundary coefficient.
SampledSignal frame_operator_via_expansion(const PainlessCertificate& cert, const SampledSignal& f,
                                           double xi_cut);

// Same operator from precomputed analysis coefficients (the truncation check
// runs on each row's outermost m).
SampledSignal frame_operator_via_expansion(const PainlessCertificate& cert,
                                           const CoefficientGrid& coeffs, const GridSpec& grid);

// Canonical dual atom g_n(t) e^{i beta_n m t} / G(t) (0 outside supp g_n).
SampledSignal canonical_dual_time(const PainlessCertificate& cert, int m, int n,
                                  const GridSpec& grid);

// Dual of the frequency-side atom via its spectrum, returned in time domain.
SampledSignal canonical_dual_freq(const PainlessCertificate& cert, int m, int n,
                                  const GridSpec& grid);

// Coefficients <u, g_{m,n}> = V_g u(alpha n, beta_n m) at the nonstationary
// nodes with |node| <= radius.
CoefficientGrid nsg_coeffs(const CoefficientOracle& oracle, const NSGSystemTime& sys, double radius);

// Frequency-side pairings <u, h_{m,n}> at nodes (alpha_m n, beta m), through
// the spectral integral (2 pi)^{-1} int uhat conj(hhat(. - beta m)) e^{i alpha_m n .}.
CoefficientGrid nsg_coeffs_freq(const CoefficientOracle& oracle, const NSGSystemFreq& sys,
                                double radius);

// Discrete analysis coefficients of a sampled f over the stored n range and
// |beta_n m| <= xi_cut; xi_cut must stay below the grid's dual half-width
// (discrete modulations alias past it).
CoefficientGrid nsg_analysis(const PainlessCertificate& cert, const SampledSignal& f,
                             double xi_cut);

// sum c_{m,n} dual_{m,n} on the grid; requires a frame certificate.
SampledSignal reconstruct(const PainlessCertificate& cert, const CoefficientGrid& coeffs,
                          const GridSpec& grid);

// Frequency-side analysis + dual synthesis against a closed-form spectrum,
// carried out on a dedicated fine spectral grid; returns the relative L2
// error between the reconstructed and the given spectrum.
struct FreqReconstruction {
    double rel_error = 0.0;
    int n_max_used = 0;
    double largest_boundary_coeff = 0.0;
};
FreqReconstruction freq_reconstruction_error(const PainlessCertificate& cert,
                                             const std::function<cplx(double)>& fhat,
                                             double fhat_support, double quad_step);

// --- derivative and combinatorial machinery ------------------------------------

struct CompositionCount {
    unsigned long long enumeration = 0;      // ordered tuples of nonzero multi-indices
    unsigned long long factorial_form = 0;   // ell! sum over multiplicities prod 1/c!
    unsigned long long binomial_product = 0; // prod_j C(kappa_j + ell - 1, ell - 1)
    unsigned long long power_bound = 0;      // 2^{|kappa| + d ell - d}
};

// Counts ordered ell-tuples (gamma_1..gamma_ell), gamma_i != 0, summing to
// kappa, three ways. |kappa| <= 12, d <= 3, ell <= 12.
CompositionCount composition_count(const std::vector<int>& kappa, int ell);

// D^k (1/G) at sample index `center` via the partition sum over derivatives
// of G (5-point central stencils), k <= 4. Refuses when G is near zero.
double reciprocal_derivative_faa(const std::vector<double>& G, double step, int center, int order);

// Direct route: the same stencils applied to the sampled 1/G.
double reciprocal_derivative_direct(const std::vector<double>& G, double step, int center,
                                    int order);

// Minimal C with |D^k(1/G)(t)| <= C e^{lambda phi*(k/lambda)} for sampled t
// and k <= max_order (phi* clamped at 0 so the bound is scale-correct for
// constant G). A finite-order witness, not a proof.
double multiplier_bound_check(const std::vector<double>& G, double step,
                              const WeightFunction& w, double lambda, int max_order);

} // namespace tfwave

#endif
