#ifndef TFWAVE_SIGNALS_HPP
#define TFWAVE_SIGNALS_HPP

/*
    Sampled signals on uniform symmetric grids, the Fourier transform under
    the convention

        F f (xi) = int f(x) e^{-i x xi} dx,    inverse carries (2 pi)^{-1},

    real-valued analysis windows, and coefficient oracles producing
    short-time Fourier transform values

        V_w f (x, xi) = <f, M_xi T_x w> = int f(t) w(t - x) e^{-i t xi} dt

    either by trapezoid quadrature over a sampled signal or by closed form
    for distributions that are not square integrable (Dirac delta, the
    constant function, chirps).
*/

#include "tfwave/common.hpp"
#include "tfwave/weights.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tfwave {

struct GridSpec {
    double T = 40.0;  // grid covers [-T, T)
    int N = 4096;     // power of two, >= 64

    double dt() const { return 2.0 * T / N; }
    double t(int j) const { return -T + dt() * j; }
    double dual_T() const { return M_PI * N / (2.0 * T); }  // dual grid half-width
    double xi(int k) const { return M_PI * (k - N / 2) / T; }
    bool operator==(const GridSpec& o) const { return T == o.T && N == o.N; }
};

void validate_grid(const GridSpec& g);

class SampledSignal {
public:
    SampledSignal() = default;
    SampledSignal(GridSpec grid, std::vector<cplx> values);
    static SampledSignal zeros(GridSpec grid);
    template <class F>
    static SampledSignal from_function(GridSpec grid, F&& f) {
        std::vector<cplx> v(static_cast<std::size_t>(grid.N));
        for (int j = 0; j < grid.N; ++j) v[static_cast<std::size_t>(j)] = f(grid.t(j));
        return SampledSignal(grid, std::move(v));
    }

    const GridSpec& grid() const { return grid_; }
    int size() const { return grid_.N; }
    double t(int j) const { return grid_.t(j); }
    const std::vector<cplx>& values() const { return values_; }
    cplx operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }

    // Linear interpolation; zero outside the grid.
    cplx interp(double t) const;

private:
    GridSpec grid_;
    std::vector<cplx> values_;
};

// Trapezoid approximations of the L2 pairing and norm.
cplx inner(const SampledSignal& f, const SampledSignal& g);  // shape error on grid mismatch
double norm_sq(const SampledSignal& f);
double norm_l2(const SampledSignal& f);

// FFT-based Fourier transform onto the dual grid xi_k = pi k / T and back.
SampledSignal fourier(const SampledSignal& f);
SampledSignal inverse_fourier(const SampledSignal& fhat);

// In-place radix-2 DFT, sign = -1 for e^{-2pi i jk/N} (used by fourier).
void dft_pow2(std::vector<cplx>& a, int sign);

// --- analysis windows -------------------------------------------------------
//
// Real-valued windows with known support radius. The bump window is
// exp(1 - 1/(1 - (t/h)^2)) on (-h, h): compactly supported, smooth, peak 1.

class Window {
public:
    enum class Kind { Gaussian, Bump, Sampled };

    static Window gaussian(double sigma);
    static Window bump(double halfwidth);
    static Window bump(double halfwidth, double center);
    static Window sampled(SampledSignal s);

    double operator()(double t) const;
    Kind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    double halfwidth() const { return halfwidth_; }
    double bump_center() const { return center_; }
    const SampledSignal* samples() const { return samples_.get(); }
    // Radius beyond which the window is below ~1e-17 (exact for bumps).
    double support_radius() const;
    SampledSignal sample(const GridSpec& grid) const;

private:
    Kind kind_ = Kind::Gaussian;
    double sigma_ = 1.0;
    double halfwidth_ = 1.0;
    double center_ = 0.0;
    std::shared_ptr<const SampledSignal> samples_;
};

double bump_value(double u);  // exp(1 - 1/(1-u^2)) for |u| < 1, else 0

// --- test distributions and coefficient oracles ------------------------------

struct SignalFamily {
    enum class Kind { Delta, Constant, Chirp, Gaussian, Hermite };
    Kind kind = Kind::Gaussian;
    double chirp_rate = 1.0;  // Chirp: f(t) = e^{i c t^2 / 2}
    double sigma = 1.0;       // Gaussian: f(t) = e^{-t^2/(2 sigma^2)}
    int hermite_k = 0;        // Hermite: f(t) = H_k(t) e^{-t^2/2}

    bool square_integrable() const {
        return kind == Kind::Gaussian || kind == Kind::Hermite;
    }
    std::string name() const;
};

// Parses "delta", "const", "chirp:<c>", "gauss:<sigma>", "hermite:<k>".
SignalFamily parse_family(const std::string& spec);

double hermite_poly(int k, double x);
cplx hermite_poly(int k, cplx x);

class CoefficientOracle {
public:
    enum class Kind { Quadrature, ClosedForm };

    static CoefficientOracle quadrature(SampledSignal f, Window window);
    static CoefficientOracle closed_form(SignalFamily family, Window window);

    Kind kind() const { return kind_; }
    const Window& window() const { return window_; }

    // V_w u (x, xi). Quadrature oracles throw a range error when |x| exceeds
    // the reliable range (silent truncation bias otherwise).
    cplx stft(double x, double xi) const;
    double reliable_x_radius() const;

    // <u, M_xi T_x w> for an arbitrary real window, by fine quadrature over
    // the window support (closed form for delta).
    cplx pair_window(const Window& w, double x, double xi) const;

    // <u, psi> against a sampled function psi.
    cplx pair_sampled(const SampledSignal& psi) const;

    // Closed-form spectrum of the underlying distribution (delta -> 1,
    // gaussian, hermite, chirp). Constant has no pointwise spectrum.
    bool has_spectrum() const;
    cplx spectrum(double xi) const;
    bool is_constant() const {
        return kind_ == Kind::ClosedForm && family_.kind == SignalFamily::Kind::Constant;
    }

    const SampledSignal& signal() const;  // quadrature kind only

private:
    CoefficientOracle() = default;
    cplx closed_stft(double x, double xi) const;

    Kind kind_ = Kind::ClosedForm;
    SignalFamily family_;
    Window window_ = Window::gaussian(1.0);
    std::shared_ptr<const SampledSignal> signal_;
};

// Builds the standard oracle for a family: quadrature for square-integrable
// families (and chirp, which restricts to the grid), closed form for delta
// and the constant.
CoefficientOracle generate(const SignalFamily& family, const GridSpec& grid, const Window& window);

// --- phase-space sampling -----------------------------------------------------

struct PhaseGrid {
    double x_max = 12.0;
    int nx = 97;
    double xi_max = 12.0;
    int nxi = 97;
    double x_center = 0.0;

    double x(int i) const { return x_center - x_max + 2.0 * x_max * i / (nx - 1); }
    double xi(int k) const { return -xi_max + 2.0 * xi_max * k / (nxi - 1); }
    double dx() const { return 2.0 * x_max / (nx - 1); }
    double dxi() const { return 2.0 * xi_max / (nxi - 1); }
};

// sup over the sampled phase grid of |V_win f| e^{lambda omega(|z|)}.
// Returns +inf when the weighted field overflows or peaks on the outer ring
// of the grid (numerically not in the decaying class at this lambda).
double seminorm_r(const SampledSignal& f, const Window& win, double lambda,
                  const WeightFunction& w, const PhaseGrid& pg);

// CSV ingestion, header "t,re,im", uniform grid, N a power of two.
SampledSignal load_signal_csv(const std::string& path);

} // namespace tfwave

#endif
