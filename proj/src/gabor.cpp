#include "tfwave/gabor.hpp"

#include <algorithm>
#include <cmath>

namespace tfwave {

SampledSignal sample_atom(const Window& w, double x, double xi, const GridSpec& grid) {
    return SampledSignal::from_function(
        grid, [&](double t) { return w(t - x) * std::polar(1.0, t * xi); });
}

CoefficientGrid gabor_coeffs(const CoefficientOracle& oracle, const GaborSystem& sys, double radius) {
    if (!(radius > 0.0)) throw std::domain_error("gabor_coeffs: radius must be > 0");
    const double a = sys.lattice.alpha, b = sys.lattice.beta;
    const int n_max = std::min(sys.lattice.index_radius, static_cast<int>(std::floor(radius / a)));
    const int m_max = std::min(sys.lattice.index_radius, static_cast<int>(std::floor(radius / b)));
    const double x_cap = oracle.reliable_x_radius();

    struct Node {
        int m, n;
    };
    std::vector<Node> nodes;
    int omitted = 0;
    for (int n = -n_max; n <= n_max; ++n) {
        for (int m = -m_max; m <= m_max; ++m) {
            if (std::hypot(a * n, b * m) > radius) continue;
            if (std::abs(a * n) > x_cap) {
                ++omitted;
                continue;
            }
            nodes.push_back({m, n});
        }
    }

    CoefficientGrid out;
    out.omitted_nodes = omitted;
    out.entries.resize(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        const Node nd = nodes[i];
        CoefficientGrid::Entry e;
        e.m = nd.m;
        e.n = nd.n;
        e.x = a * nd.n;
        e.xi = b * nd.m;
        e.value = oracle.stft(e.x, e.xi);
        out.entries[i] = e;
    });
    return out;
}

// --- DiscreteFrame -------------------------------------------------------------

DiscreteFrame::DiscreteFrame(GridSpec grid) : grid_(grid) {
    validate_grid(grid_);
    const double dt = grid_.dt();
    sqrt_w_.resize(static_cast<std::size_t>(grid_.N));
    for (int j = 0; j < grid_.N; ++j) {
        const double w = (j == 0 || j == grid_.N - 1) ? 0.5 : 1.0;
        sqrt_w_[static_cast<std::size_t>(j)] = std::sqrt(dt * w);
    }
}

std::vector<cplx> DiscreteFrame::weighted(const SampledSignal& f) const {
    if (!(f.grid() == grid_)) throw ShapeError("DiscreteFrame: signal grid mismatch");
    std::vector<cplx> u(static_cast<std::size_t>(grid_.N));
    for (int j = 0; j < grid_.N; ++j)
        u[static_cast<std::size_t>(j)] = sqrt_w_[static_cast<std::size_t>(j)] * f[j];
    return u;
}

void DiscreteFrame::add_atom(const SampledSignal& atom) { atoms_.push_back(weighted(atom)); }

double DiscreteFrame::coefficient_energy(const SampledSignal& f) const {
    const std::vector<cplx> u = weighted(f);
    std::vector<double> terms(atoms_.size());
    parallel_for(atoms_.size(), [&](std::size_t s) {
        cplx c = 0.0;
        const auto& a = atoms_[s];
        for (std::size_t j = 0; j < u.size(); ++j) c += u[j] * std::conj(a[j]);
        terms[s] = std::norm(c);
    });
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

void DiscreteFrame::apply(const std::vector<cplx>& v, std::vector<cplx>& out) const {
    std::vector<cplx> coef(atoms_.size());
    parallel_for(atoms_.size(), [&](std::size_t s) {
        cplx c = 0.0;
        const auto& a = atoms_[s];
        for (std::size_t j = 0; j < v.size(); ++j) c += v[j] * std::conj(a[j]);
        coef[s] = c;
    });
    out.assign(v.size(), cplx(0.0, 0.0));
    const std::size_t nj = v.size();
    parallel_for(nj, [&](std::size_t j) {
        cplx acc = 0.0;
        for (std::size_t s = 0; s < atoms_.size(); ++s) acc += coef[s] * atoms_[s][j];
        out[j] = acc;
    });
}

namespace {

double vec_norm(const std::vector<cplx>& v) {
    double acc = 0.0;
    for (const cplx& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

cplx vec_dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * std::conj(b[j]);
    return acc;
}

} // namespace

DiscreteFrame::Extremes DiscreteFrame::rayleigh_extremes(std::uint64_t seed) const {
    if (atoms_.empty()) throw NumericError("rayleigh_extremes: no atoms assembled");
    const std::size_t n = static_cast<std::size_t>(grid_.N);

    // Lanczos iteration on the Hermitian PSD operator (power iteration with
    // optimal polynomial acceleration); full reorthogonalization keeps the
    // extreme Ritz values clean at the clustered spectral edges.
    const int max_steps = std::min<int>(static_cast<int>(n), 400);
    std::vector<std::vector<cplx>> basis;
    std::vector<double> diag, offdiag;

    DetRng rng(seed ^ 0x517cc1b727220a95ull);
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(rng.normal(), rng.normal());
    {
        const double nv = vec_norm(v);
        for (auto& x : v) x /= nv;
    }

    // smallest/largest eigenvalue of the symmetric tridiagonal via Sturm
    // bisection
    const auto tridiag_extremes = [&](double& lo, double& hi) {
        const int m = static_cast<int>(diag.size());
        const auto count_below = [&](double x) {
            int cnt = 0;
            double d = 1.0;
            for (int i = 0; i < m; ++i) {
                const double b2 = i > 0 ? offdiag[static_cast<std::size_t>(i - 1)] *
                                              offdiag[static_cast<std::size_t>(i - 1)]
                                        : 0.0;
                d = diag[static_cast<std::size_t>(i)] - x - (i > 0 ? b2 / d : 0.0);
                if (d == 0.0) d = -1e-300;
                if (d < 0.0) ++cnt;
            }
            return cnt;
        };
        double rad = 0.0;
        for (int i = 0; i < m; ++i) {
            double r = std::abs(diag[static_cast<std::size_t>(i)]);
            if (i > 0) r += std::abs(offdiag[static_cast<std::size_t>(i - 1)]);
            if (i + 1 < m) r += std::abs(offdiag[static_cast<std::size_t>(i)]);
            rad = std::max(rad, r);
        }
        const auto bisect = [&](int k) {
            double a = -rad - 1.0, b = rad + 1.0;
            for (int it = 0; it < 200; ++it) {
                const double midp = 0.5 * (a + b);
                if (count_below(midp) > k)
                    b = midp;
                else
                    a = midp;
            }
            return 0.5 * (a + b);
        };
        lo = bisect(0);
        hi = bisect(m - 1);
    };

    double lo_prev = 0.0, hi_prev = 0.0;
    int steps = 0;
    std::vector<cplx> w(n);
    for (int it = 0; it < max_steps; ++it) {
        apply(v, w);
        const double alpha = vec_dot(w, v).real();
        // full reorthogonalization (twice)
        basis.push_back(v);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                const cplx c0 = vec_dot(w, b);
                for (std::size_t j = 0; j < n; ++j) w[j] -= c0 * b[j];
            }
        diag.push_back(alpha);
        const double beta = vec_norm(w);
        ++steps;
        double lo = 0.0, hi = 0.0;
        tridiag_extremes(lo, hi);
        const double scale = std::max(std::abs(hi), 1e-30);
        if (it > 4 && std::abs(lo - lo_prev) <= 1e-12 * scale &&
            std::abs(hi - hi_prev) <= 1e-12 * scale) {
            Extremes ext;
            ext.lambda_min = std::max(0.0, lo);
            ext.lambda_max = hi;
            ext.iterations_max = steps;
            ext.iterations_min = steps;
            return ext;
        }
        lo_prev = lo;
        hi_prev = hi;
        if (beta < 1e-14 * scale) {
            // invariant subspace found: Ritz values are exact
            Extremes ext;
            ext.lambda_min = std::max(0.0, lo);
            ext.lambda_max = hi;
            ext.iterations_max = steps;
            ext.iterations_min = steps;
            return ext;
        }
        offdiag.push_back(beta);
        for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / beta;
    }
    throw NumericError("extreme Rayleigh quotients did not stabilize to 1e-12 within the step cap");
}

DiscreteFrame assemble_gabor_frame(const GaborSystem& sys, const GridSpec& probe) {
    validate_grid(probe);
    DiscreteFrame frame(probe);
    const double a = sys.lattice.alpha, b = sys.lattice.beta;
    const double width = sys.window.kind() == Window::Kind::Gaussian ? sys.window.sigma()
                                                                     : sys.window.support_radius();
    const int n_max = std::min(sys.lattice.index_radius,
                               static_cast<int>(std::floor((probe.T + 6.0 * width) / a)));
    const int m_max =
        std::min(sys.lattice.index_radius, static_cast<int>(std::floor(probe.dual_T() / b)));
    for (int n = -n_max; n <= n_max; ++n)
        for (int m = -m_max; m <= m_max; ++m)
            frame.add_atom(sample_atom(sys.window, a * n, b * m, probe));
    return frame;
}

FrameEstimate frame_bounds_numeric(const GaborSystem& sys, const GridSpec& probe) {
    if (probe.N > 512) throw ConfigError("frame_bounds_numeric: probe N must be <= 512");
    const DiscreteFrame frame = assemble_gabor_frame(sys, probe);
    const DiscreteFrame::Extremes ext = frame.rayleigh_extremes();
    FrameEstimate est;
    est.A_est = ext.lambda_min;
    est.B_est = ext.lambda_max;
    est.probe_N = probe.N;
    est.atom_count = frame.atom_count();
    return est;
}

ModulationNormResult modulation_norm(const SampledSignal& f, double mu, const Window& w,
                                     const WeightFunction& weight, const PhaseGrid& pg) {
    const CoefficientOracle oracle = CoefficientOracle::quadrature(f, w);
    const double x_cap = oracle.reliable_x_radius();
    if (std::abs(pg.x_center) + pg.x_max > x_cap)
        throw RangeError("modulation_norm: phase grid exceeds the reliable x-range " +
                         std::to_string(x_cap));

    std::vector<double> row_total(static_cast<std::size_t>(pg.nx), 0.0);
    std::vector<double> row_boundary(static_cast<std::size_t>(pg.nx), 0.0);
    parallel_for(static_cast<std::size_t>(pg.nx), [&](std::size_t i) {
        const double x = pg.x(static_cast<int>(i));
        const double wx = (i == 0 || i + 1 == static_cast<std::size_t>(pg.nx)) ? 0.5 : 1.0;
        double acc = 0.0, bnd = 0.0;
        for (int k = 0; k < pg.nxi; ++k) {
            const double xi = pg.xi(k);
            const double wxi = (k == 0 || k == pg.nxi - 1) ? 0.5 : 1.0;
            const double term = wx * wxi * std::norm(oracle.stft(x, xi)) *
                                std::exp(2.0 * mu * weight.omega2(x, xi));
            acc += term;
            const double rr = std::hypot((x - pg.x_center) / pg.x_max, xi / pg.xi_max);
            if (rr > 0.9) bnd = std::max(bnd, term);
        }
        row_total[i] = acc;
        row_boundary[i] = bnd;
    });
    double total = 0.0, bnd = 0.0;
    for (std::size_t i = 0; i < row_total.size(); ++i) {
        total += row_total[i];
        bnd = std::max(bnd, row_boundary[i]);
    }
    total *= pg.dx() * pg.dxi();
    ModulationNormResult res;
    res.value = std::sqrt(std::max(0.0, total));
    res.truncated = total > 0.0 && bnd * pg.dx() * pg.dxi() > 1e-9 * total;
    return res;
}

SampledSignal synthesize(const CoefficientGrid& coeffs, const std::vector<SampledSignal>& atoms) {
    if (coeffs.entries.size() != atoms.size())
        throw ShapeError("synthesize: coefficient/atom count mismatch");
    if (atoms.empty()) throw ShapeError("synthesize: empty expansion");
    const GridSpec g = atoms.front().grid();
    std::vector<cplx> acc(static_cast<std::size_t>(g.N), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i].grid() == g)) throw ShapeError("synthesize: atom grids differ");
        const cplx c = coeffs.entries[i].value;
        for (int j = 0; j < g.N; ++j) acc[static_cast<std::size_t>(j)] += c * atoms[i][j];
    }
    return SampledSignal(g, std::move(acc));
}

} // namespace tfwave
