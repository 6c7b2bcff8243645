#include "tfwave/signals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tfwave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

void validate_grid(const GridSpec& g) {
    if (!(g.T > 0.0) || !std::isfinite(g.T)) throw ConfigError("grid half-width T must be positive");
    if (g.N < 64 || !is_pow2(g.N))
        throw ConfigError("grid size N must be a power of two >= 64, got " + std::to_string(g.N));
}

SampledSignal::SampledSignal(GridSpec grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
    validate_grid(grid_);
    if (static_cast<int>(values_.size()) != grid_.N)
        throw ShapeError("signal length does not match its grid");
    for (const cplx& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("signal contains non-finite samples");
}

SampledSignal SampledSignal::zeros(GridSpec grid) {
    return SampledSignal(grid, std::vector<cplx>(static_cast<std::size_t>(grid.N)));
}

cplx SampledSignal::interp(double t) const {
    const double pos = (t + grid_.T) / grid_.dt();
    if (pos < 0.0 || pos > grid_.N - 1) return {0.0, 0.0};
    const int j = std::min(static_cast<int>(pos), grid_.N - 2);
    const double frac = pos - j;
    return values_[static_cast<std::size_t>(j)] * (1.0 - frac) +
           values_[static_cast<std::size_t>(j + 1)] * frac;
}

cplx inner(const SampledSignal& f, const SampledSignal& g) {
    if (!(f.grid() == g.grid())) throw ShapeError("inner: mismatched grids");
    const int n = f.size();
    const double dt = f.grid().dt();
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        acc += w * f[j] * std::conj(g[j]);
    }
    return acc * dt;
}

double norm_sq(const SampledSignal& f) {
    const int n = f.size();
    const double dt = f.grid().dt();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        acc += w * std::norm(f[j]);
    }
    return acc * dt;
}

double norm_l2(const SampledSignal& f) { return std::sqrt(norm_sq(f)); }

void dft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

SampledSignal fourier(const SampledSignal& f) {
    const GridSpec g = f.grid();
    const int n = g.N;
    std::vector<cplx> a = f.values();
    dft_pow2(a, -1);
    // fhat(xi_k) = dt (-1)^k DFT_{k mod N}, ordered for k in [-N/2, N/2).
    std::vector<cplx> out(static_cast<std::size_t>(n));
    const double dt = g.dt();
    for (int k = -n / 2; k < n / 2; ++k) {
        const int idx = (k + n) % n;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        out[static_cast<std::size_t>(k + n / 2)] = dt * sgn * a[static_cast<std::size_t>(idx)];
    }
    GridSpec dual{g.dual_T(), n};
    return SampledSignal(dual, std::move(out));
}

SampledSignal inverse_fourier(const SampledSignal& fhat) {
    const GridSpec g = fhat.grid();
    const int n = g.N;
    // f(t_j) = (1/2T_out) sum_k (-1)^k fhat_k e^{2pi i jk/N}, T_out = dual of g.
    std::vector<cplx> a(static_cast<std::size_t>(n));
    for (int k = -n / 2; k < n / 2; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        a[static_cast<std::size_t>((k + n) % n)] =
            sgn * fhat[k + n / 2];
    }
    dft_pow2(a, +1);
    GridSpec out_grid{g.dual_T(), n};
    const double scale = 1.0 / (2.0 * out_grid.T);
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = scale * a[static_cast<std::size_t>(j)];
    return SampledSignal(out_grid, std::move(out));
}

// --- windows -----------------------------------------------------------------

double bump_value(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

Window Window::gaussian(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("gaussian window sigma must be > 0");
    Window w;
    w.kind_ = Kind::Gaussian;
    w.sigma_ = sigma;
    return w;
}

Window Window::bump(double halfwidth) { return bump(halfwidth, 0.0); }

Window Window::bump(double halfwidth, double center) {
    if (!(halfwidth > 0.0) || !std::isfinite(halfwidth))
        throw ConfigError("bump window halfwidth must be > 0");
    Window w;
    w.kind_ = Kind::Bump;
    w.halfwidth_ = halfwidth;
    w.center_ = center;
    return w;
}

Window Window::sampled(SampledSignal s) {
    Window w;
    w.kind_ = Kind::Sampled;
    w.samples_ = std::make_shared<const SampledSignal>(std::move(s));
    return w;
}

double Window::operator()(double t) const {
    switch (kind_) {
    case Kind::Gaussian: {
        const double u = t / sigma_;
        return std::exp(-0.5 * u * u);
    }
    case Kind::Bump:
        return bump_value((t - center_) / halfwidth_);
    case Kind::Sampled:
        return samples_->interp(t).real();
    }
    return 0.0;
}

double Window::support_radius() const {
    switch (kind_) {
    case Kind::Gaussian:
        return 8.9 * sigma_;  // e^{-t^2/2s^2} ~ 6e-18 there
    case Kind::Bump:
        return halfwidth_ + std::abs(center_);
    case Kind::Sampled:
        return samples_->grid().T;
    }
    return 0.0;
}

SampledSignal Window::sample(const GridSpec& grid) const {
    return SampledSignal::from_function(grid, [&](double t) { return cplx((*this)(t), 0.0); });
}

// --- families ----------------------------------------------------------------

std::string SignalFamily::name() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Delta: return "delta";
    case Kind::Constant: return "const";
    case Kind::Chirp: os << "chirp:" << chirp_rate; return os.str();
    case Kind::Gaussian: os << "gauss:" << sigma; return os.str();
    case Kind::Hermite: os << "hermite:" << hermite_k; return os.str();
    }
    return "?";
}

SignalFamily parse_family(const std::string& spec) {
    SignalFamily f;
    if (spec == "delta") {
        f.kind = SignalFamily::Kind::Delta;
        return f;
    }
    if (spec == "const") {
        f.kind = SignalFamily::Kind::Constant;
        return f;
    }
    const auto arg_of = [&](const char* prefix) -> std::optional<std::string> {
        const std::string p(prefix);
        if (spec.rfind(p, 0) == 0) return spec.substr(p.size());
        return std::nullopt;
    };
    try {
        if (auto a = arg_of("chirp:")) {
            f.kind = SignalFamily::Kind::Chirp;
            f.chirp_rate = std::stod(*a);
            return f;
        }
        if (auto a = arg_of("gauss:")) {
            f.kind = SignalFamily::Kind::Gaussian;
            f.sigma = std::stod(*a);
            if (!(f.sigma > 0.0)) throw ConfigError("gauss sigma must be > 0");
            return f;
        }
        if (spec == "gauss") {
            f.kind = SignalFamily::Kind::Gaussian;
            return f;
        }
        if (auto a = arg_of("hermite:")) {
            f.kind = SignalFamily::Kind::Hermite;
            f.hermite_k = std::stoi(*a);
            if (f.hermite_k < 0) throw ConfigError("hermite order must be >= 0");
            return f;
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad numeric argument in signal spec '" + spec + "'");
    }
    throw ConfigError("unknown signal spec '" + spec +
                      "' (expected delta, const, chirp:<c>, gauss:<sigma>, hermite:<k>)");
}

double hermite_poly(int k, double x) {
    double h0 = 1.0, h1 = 2.0 * x;
    if (k == 0) return h0;
    if (k == 1) return h1;
    for (int i = 1; i < k; ++i) {
        const double h2 = 2.0 * x * h1 - 2.0 * i * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

cplx hermite_poly(int k, cplx x) {
    cplx h0 = 1.0, h1 = 2.0 * x;
    if (k == 0) return h0;
    if (k == 1) return h1;
    for (int i = 1; i < k; ++i) {
        const cplx h2 = 2.0 * x * h1 - 2.0 * static_cast<double>(i) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

namespace {

cplx family_value(const SignalFamily& f, double t) {
    switch (f.kind) {
    case SignalFamily::Kind::Constant:
        return 1.0;
    case SignalFamily::Kind::Chirp: {
        const double ph = 0.5 * f.chirp_rate * t * t;
        return {std::cos(ph), std::sin(ph)};
    }
    case SignalFamily::Kind::Gaussian: {
        const double u = t / f.sigma;
        return std::exp(-0.5 * u * u);
    }
    case SignalFamily::Kind::Hermite:
        return hermite_poly(f.hermite_k, t) * std::exp(-0.5 * t * t);
    case SignalFamily::Kind::Delta:
        throw std::domain_error("delta has no pointwise values");
    }
    return 0.0;
}

// sqrt(2 pi / a) e^{b^2/(2a) + c0}, principal branch, Re a > 0.
cplx gauss_integral(cplx a, cplx b, cplx c0) {
    return std::sqrt(2.0 * M_PI / a) * std::exp(b * b / (2.0 * a) + c0);
}

} // namespace

// --- oracle ------------------------------------------------------------------

CoefficientOracle CoefficientOracle::quadrature(SampledSignal f, Window window) {
    CoefficientOracle o;
    o.kind_ = Kind::Quadrature;
    o.window_ = std::move(window);
    o.signal_ = std::make_shared<const SampledSignal>(std::move(f));
    return o;
}

CoefficientOracle CoefficientOracle::closed_form(SignalFamily family, Window window) {
    if (family.kind != SignalFamily::Kind::Delta && window.kind() != Window::Kind::Gaussian)
        throw ConfigError("closed-form oracle needs a gaussian window (except delta)");
    if (family.kind == SignalFamily::Kind::Hermite && std::abs(window.sigma() - 1.0) > 1e-12)
        throw ConfigError("closed-form hermite oracle needs the unit gaussian window");
    CoefficientOracle o;
    o.kind_ = Kind::ClosedForm;
    o.family_ = family;
    o.window_ = std::move(window);
    return o;
}

const SampledSignal& CoefficientOracle::signal() const {
    if (!signal_) throw ShapeError("oracle has no sampled signal");
    return *signal_;
}

double CoefficientOracle::reliable_x_radius() const {
    if (kind_ == Kind::ClosedForm) return kInf;
    return signal_->grid().T - window_.support_radius();
}

cplx CoefficientOracle::closed_stft(double x, double xi) const {
    const double s = window_.sigma();
    const cplx b(x / (s * s), -xi);
    const cplx c0(-x * x / (2.0 * s * s), 0.0);
    switch (family_.kind) {
    case SignalFamily::Kind::Delta:
        // <delta, Pi(z) w> = conj(w(-x)), xi-independent.
        return window_(-x);
    case SignalFamily::Kind::Constant:
        return gauss_integral(cplx(1.0 / (s * s), 0.0), b, c0);
    case SignalFamily::Kind::Gaussian:
        return gauss_integral(cplx(1.0 / (s * s) + 1.0 / (family_.sigma * family_.sigma), 0.0), b, c0);
    case SignalFamily::Kind::Chirp:
        return gauss_integral(cplx(1.0 / (s * s), -family_.chirp_rate), b, c0);
    case SignalFamily::Kind::Hermite: {
        // window sigma pinned to 1 at construction
        const cplx z(x, -xi);
        cplx zk = 1.0;
        for (int i = 0; i < family_.hermite_k; ++i) zk *= z;
        return std::sqrt(M_PI) * zk *
               std::exp(cplx(-(x * x + xi * xi) / 4.0, -x * xi / 2.0));
    }
    }
    return 0.0;
}

cplx CoefficientOracle::stft(double x, double xi) const {
    if (!std::isfinite(x) || !std::isfinite(xi))
        throw std::domain_error("stft: phase-space point must be finite");
    if (kind_ == Kind::ClosedForm) return closed_stft(x, xi);

    const SampledSignal& f = *signal_;
    const GridSpec& g = f.grid();
    const double r = window_.support_radius();
    if (std::abs(x) > g.T - r)
        throw RangeError("stft: |x| = " + std::to_string(std::abs(x)) +
                         " exceeds reliable range " + std::to_string(g.T - r));
    const double dt = g.dt();
    int j_lo = std::max(0, static_cast<int>(std::floor((x - r + g.T) / dt)));
    int j_hi = std::min(g.N - 1, static_cast<int>(std::ceil((x + r + g.T) / dt)));
    if (j_lo > j_hi) return 0.0;
    // phase recurrence for e^{-i t_j xi}
    cplx rot = std::polar(1.0, -dt * xi);
    cplx ph = std::polar(1.0, -g.t(j_lo) * xi);
    cplx acc = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double w = (j == 0 || j == g.N - 1) ? 0.5 : 1.0;
        acc += w * f[j] * window_(g.t(j) - x) * ph;
        ph *= rot;
    }
    return acc * dt;
}

cplx CoefficientOracle::pair_window(const Window& w, double x, double xi) const {
    if (kind_ == Kind::Quadrature) {
        // same trapezoid machinery, arbitrary window
        const SampledSignal& f = *signal_;
        const GridSpec& g = f.grid();
        const double r = w.support_radius();
        if (std::abs(x) > g.T - r)
            throw RangeError("pair_window: atom support leaves the signal grid");
        const double dt = g.dt();
        int j_lo = std::max(0, static_cast<int>(std::floor((x - r + g.T) / dt)));
        int j_hi = std::min(g.N - 1, static_cast<int>(std::ceil((x + r + g.T) / dt)));
        cplx rot = std::polar(1.0, -dt * xi);
        cplx ph = std::polar(1.0, -g.t(j_lo) * xi);
        cplx acc = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) {
            acc += f[j] * w(g.t(j) - x) * ph;
            ph *= rot;
        }
        return acc * dt;
    }

    if (family_.kind == SignalFamily::Kind::Delta) return std::conj(cplx(w(-x), 0.0));

    // fine trapezoid over the atom support; step tracks the local oscillation
    const double r = w.support_radius();
    double osc = std::abs(xi);
    if (family_.kind == SignalFamily::Kind::Chirp)
        osc += std::abs(family_.chirp_rate) * (std::abs(x) + r);
    const int per_period = 24;
    int n = 600 + static_cast<int>(std::min(2.0e5, (2.0 * r) * osc * per_period / (2.0 * M_PI)));
    const double h = 2.0 * r / n;
    cplx acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double t = x - r + h * j;
        const double ww = w(t - x);
        if (ww == 0.0 && j != 0 && j != n) continue;
        const double trap = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += trap * family_value(family_, t) * ww * std::polar(1.0, -t * xi);
    }
    return acc * h;
}

cplx CoefficientOracle::pair_sampled(const SampledSignal& psi) const {
    if (kind_ == Kind::Quadrature) return inner(*signal_, psi);
    switch (family_.kind) {
    case SignalFamily::Kind::Delta: {
        // grids are symmetric: t_{N/2} = 0 exactly
        return std::conj(psi[psi.size() / 2]);
    }
    case SignalFamily::Kind::Constant: {
        const int n = psi.size();
        const double dt = psi.grid().dt();
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += w * std::conj(psi[j]);
        }
        return acc * dt;
    }
    default: {
        const int n = psi.size();
        const double dt = psi.grid().dt();
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += w * family_value(family_, psi.t(j)) * std::conj(psi[j]);
        }
        return acc * dt;
    }
    }
}

bool CoefficientOracle::has_spectrum() const {
    if (kind_ == Kind::Quadrature) return false;
    return family_.kind != SignalFamily::Kind::Constant;
}

cplx CoefficientOracle::spectrum(double xi) const {
    if (kind_ == Kind::Quadrature)
        throw std::domain_error("spectrum: quadrature oracles use fourier() instead");
    switch (family_.kind) {
    case SignalFamily::Kind::Delta:
        return 1.0;
    case SignalFamily::Kind::Gaussian: {
        const double s = family_.sigma;
        return std::sqrt(2.0 * M_PI) * s * std::exp(-0.5 * s * s * xi * xi);
    }
    case SignalFamily::Kind::Hermite: {
        cplx ik = 1.0;
        for (int i = 0; i < family_.hermite_k; ++i) ik *= cplx(0.0, -1.0);
        return std::sqrt(2.0 * M_PI) * ik * hermite_poly(family_.hermite_k, xi) *
               std::exp(-0.5 * xi * xi);
    }
    case SignalFamily::Kind::Chirp: {
        const double c = family_.chirp_rate;
        if (c == 0.0) throw std::domain_error("chirp rate 0 has no pointwise spectrum");
        const double sgn = c > 0.0 ? 1.0 : -1.0;
        return std::sqrt(2.0 * M_PI / std::abs(c)) * std::polar(1.0, sgn * M_PI / 4.0) *
               std::polar(1.0, -xi * xi / (2.0 * c));
    }
    case SignalFamily::Kind::Constant:
        throw std::domain_error("constant has no pointwise spectrum (2 pi delta)");
    }
    return 0.0;
}

CoefficientOracle generate(const SignalFamily& family, const GridSpec& grid, const Window& window) {
    validate_grid(grid);
    switch (family.kind) {
    case SignalFamily::Kind::Delta:
    case SignalFamily::Kind::Constant:
        return CoefficientOracle::closed_form(family, window);
    default: {
        SampledSignal f =
            SampledSignal::from_function(grid, [&](double t) { return family_value(family, t); });
        // Nyquist coverage check on the sampled signal (skip for chirp: its
        // grid restriction is band-limited by construction when |c| T is
        // below the dual half-width, which we verify directly).
        if (family.kind == SignalFamily::Kind::Chirp) {
            if (std::abs(family.chirp_rate) * grid.T > 0.9 * grid.dual_T())
                throw ConfigError("chirp rate exceeds the grid's dual range");
        } else {
            const SampledSignal fh = fourier(f);
            double total = 0.0, tail = 0.0;
            const int n = fh.size();
            for (int k = 0; k < n; ++k) {
                const double e = std::norm(fh[k]);
                total += e;
                if (k < n / 16 || k >= n - n / 16) tail += e;
            }
            if (total > 0.0 && tail / total > 1e-12)
                throw ConfigError("signal violates the Nyquist coverage margin on this grid");
        }
        return CoefficientOracle::quadrature(std::move(f), window);
    }
    }
}

double seminorm_r(const SampledSignal& f, const Window& win, double lambda,
                  const WeightFunction& w, const PhaseGrid& pg) {
    if (!(lambda >= 0.0)) throw std::domain_error("seminorm_r: lambda must be >= 0");
    CoefficientOracle oracle = CoefficientOracle::quadrature(f, win);
    const double x_cap = oracle.reliable_x_radius();
    if (std::abs(pg.x_center) + pg.x_max > x_cap)
        throw RangeError("seminorm_r: phase grid exceeds the reliable x-range " +
                         std::to_string(x_cap));

    std::vector<double> row_max(static_cast<std::size_t>(pg.nx), 0.0);
    std::vector<double> row_boundary(static_cast<std::size_t>(pg.nx), 0.0);
    parallel_for(static_cast<std::size_t>(pg.nx), [&](std::size_t i) {
        const double x = pg.x(static_cast<int>(i));
        double best = 0.0, bnd = 0.0;
        for (int k = 0; k < pg.nxi; ++k) {
            const double xi = pg.xi(k);
            const double v = std::abs(oracle.stft(x, xi));
            const double lw = std::log(v + 1e-320) + lambda * w.omega2(x, xi);
            const double val = lw > 700.0 ? kInf : v * std::exp(lambda * w.omega2(x, xi));
            best = std::max(best, val);
            const bool outer = std::hypot(x / pg.x_max, xi / pg.xi_max) > 0.9;
            if (outer) bnd = std::max(bnd, val);
        }
        row_max[i] = best;
        row_boundary[i] = bnd;
    });
    double best = 0.0, bnd = 0.0;
    for (std::size_t i = 0; i < row_max.size(); ++i) {
        best = std::max(best, row_max[i]);
        bnd = std::max(bnd, row_boundary[i]);
    }
    if (!std::isfinite(best)) return kInf;
    if (bnd >= best && best > 0.0) return kInf;  // peak on the outer ring: not decaying
    return best;
}

SampledSignal load_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open signal file '" + path + "'");
    std::string line;
    std::vector<double> ts;
    std::vector<cplx> vs;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            if (line.find("re") != std::string::npos) continue;
        }
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c, ','))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 't,re,im'");
        try {
            ts.push_back(std::stod(a));
            vs.emplace_back(std::stod(b), std::stod(c));
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number");
        }
    }
    const std::size_t n = ts.size();
    if (n < 64 || !is_pow2(static_cast<int>(n)))
        throw ConfigError(path + ": sample count must be a power of two >= 64");
    const double dt = ts[1] - ts[0];
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs((ts[j] - ts[j - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw ConfigError(path + ": grid is not uniform near row " + std::to_string(j + 1));
    const double T = dt * static_cast<double>(n) / 2.0;
    if (std::abs(ts[0] + T) > 1e-6 * std::max(1.0, T))
        throw ConfigError(path + ": grid must start at -T with T = N dt / 2");
    return SampledSignal(GridSpec{T, static_cast<int>(n)}, std::move(vs));
}

} // namespace tfwave
