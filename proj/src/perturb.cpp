#include "tfwave/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tfwave {

namespace {

// L2 norm of the unit-amplitude bump shape bump_value(t/h) is this times sqrt(h).
double unit_bump_l2() {
    static const double v = [] {
        const int n = 20000;
        const double hstep = 2.0 / n;
        double acc = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double u = -1.0 + hstep * j;
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            const double b = bump_value(u);
            acc += w * b * b;
        }
        return std::sqrt(acc * hstep);
    }();
    return v;
}

} // namespace

cplx PerturbedFamily::perturbation_value(const PerturbedAtom& a, double t) const {
    if (a.scale == 0.0) return {0.0, 0.0};
    return a.amp * a.phase * bump_value((t - a.center) / halfwidth_);
}

SampledSignal PerturbedFamily::perturbation_sampled(const PerturbedAtom& a, const GridSpec& g) const {
    return SampledSignal::from_function(g, [&](double t) { return perturbation_value(a, t); });
}

SampledSignal PerturbedFamily::atom_y(const PerturbedAtom& a, const GridSpec& g) const {
    const Window& w = base_.window;
    return SampledSignal::from_function(g, [&](double t) {
        return w(t - a.x) * std::polar(1.0, t * a.xi) + perturbation_value(a, t);
    });
}

CoefficientGrid PerturbedFamily::coeffs(const CoefficientOracle& oracle, double radius) const {
    CoefficientGrid out;
    std::vector<const PerturbedAtom*> sel;
    for (const PerturbedAtom& a : atoms_)
        if (std::hypot(a.x, a.xi) <= radius) sel.push_back(&a);
    out.entries.resize(sel.size());
    const Window shape = Window::bump(halfwidth_);
    parallel_for(sel.size(), [&](std::size_t i) {
        const PerturbedAtom& a = *sel[i];
        CoefficientGrid::Entry e;
        e.m = a.m;
        e.n = a.n;
        e.x = a.x;
        e.xi = a.xi;
        cplx v = oracle.stft(a.x, a.xi);
        if (a.scale != 0.0) {
            // <u, y> = <u, x> + <u, d> with d = amp * phase * T_center shape;
            // the pairing is conjugate-linear in its second slot.
            const cplx ud = oracle.pair_window(shape, a.center, 0.0);
            v += std::conj(a.amp * a.phase) * ud;
        }
        e.value = v;
        out.entries[i] = e;
    });
    return out;
}

PerturbedFamily make_perturbed_family(const GaborSystem& base, const WeightFunction& w,
                                      double eps0, double c, std::uint64_t seed, double radius,
                                      std::optional<GridSpec> grid, double bump_halfwidth) {
    if (!(eps0 >= 0.0) || !(c >= 0.0))
        throw std::domain_error("make_perturbed_family: eps0 and c must be >= 0");
    PerturbedFamily fam;
    fam.base_ = base;
    fam.eps0_ = eps0;
    fam.decay_c_ = c;
    fam.seed_ = seed;
    fam.radius_ = radius;
    fam.grid_ = grid;
    fam.halfwidth_ = bump_halfwidth > 0.0 ? bump_halfwidth : 0.35 * base.lattice.alpha;
    const double continuum_norm = unit_bump_l2() * std::sqrt(fam.halfwidth_);

    const double a = base.lattice.alpha, b = base.lattice.beta;
    const int n_max = static_cast<int>(std::floor(radius / a));
    const int m_max = static_cast<int>(std::floor(radius / b));
    for (int n = -n_max; n <= n_max; ++n) {
        for (int m = -m_max; m <= m_max; ++m) {
            const double x = a * n, xi = b * m;
            const double r = std::hypot(x, xi);
            if (r > radius) continue;
            PerturbedAtom at;
            at.m = m;
            at.n = n;
            at.x = x;
            at.xi = xi;
            const double jitter = (u01_from_key(hash_key(seed, m, n, 0x1)) - 0.5) * 0.25 * a;
            at.center = x + jitter;
            const double th = 2.0 * M_PI * u01_from_key(hash_key(seed, m, n, 0x2));
            at.phase = {std::cos(th), std::sin(th)};
            at.scale = eps0 * std::exp(-c * w.omega(r));
            if (grid && std::abs(at.center) + fam.halfwidth_ > grid->T) {
                at.scale = 0.0;  // bump would leave the grid; keep y = x
                at.amp = 0.0;
                ++fam.skipped_off_grid_;
            } else if (at.scale != 0.0 && grid) {
                // normalize in the grid norm so ||x - y||_h equals scale
                double acc = 0.0;
                const GridSpec& g = *grid;
                const double dt = g.dt();
                for (int j = 0; j < g.N; ++j) {
                    const double bw = (j == 0 || j == g.N - 1) ? 0.5 : 1.0;
                    const double bv = bump_value((g.t(j) - at.center) / fam.halfwidth_);
                    acc += bw * bv * bv;
                }
                const double grid_norm = std::sqrt(acc * dt);
                if (grid_norm <= 0.0) throw NumericError("perturbation bump vanishes on the grid");
                at.amp = at.scale / grid_norm;
            } else {
                at.amp = at.scale / continuum_norm;
            }
            fam.atoms_.push_back(at);
        }
    }
    return fam;
}

PerturbationEnergy perturbation_energy(const PerturbedFamily& fam, double radius) {
    PerturbationEnergy e;
    if (radius > fam.build_radius() + 1e-12) {
        const double a = fam.base().lattice.alpha, b = fam.base().lattice.beta;
        const int n_max = static_cast<int>(std::floor(radius / a));
        const int m_max = static_cast<int>(std::floor(radius / b));
        int total = 0;
        for (int n = -n_max; n <= n_max; ++n)
            for (int m = -m_max; m <= m_max; ++m)
                if (std::hypot(a * n, b * m) <= radius) ++total;
        e.missing = total - static_cast<int>(fam.atoms().size());
    }
    if (fam.grid()) {
        const GridSpec g = *fam.grid();
        std::vector<double> terms(fam.atoms().size(), 0.0);
        parallel_for(fam.atoms().size(), [&](std::size_t i) {
            const PerturbedAtom& a = fam.atoms()[i];
            if (std::hypot(a.x, a.xi) > radius || a.scale == 0.0) return;
            terms[i] = norm_sq(fam.perturbation_sampled(a, g));
        });
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (std::hypot(fam.atoms()[i].x, fam.atoms()[i].xi) <= radius) {
                e.value += terms[i];
                ++e.covered;
            }
        }
    } else {
        for (const PerturbedAtom& a : fam.atoms()) {
            if (std::hypot(a.x, a.xi) > radius) continue;
            e.value += a.scale * a.scale;
            ++e.covered;
        }
    }
    return e;
}

ChristensenBounds christensen_bounds(double A, double B, double eps) {
    if (!(A > 0.0) || !(B > 0.0) || A > B)
        throw std::domain_error("christensen_bounds: need 0 < A <= B");
    if (!(eps >= 0.0)) throw std::domain_error("christensen_bounds: eps must be >= 0");
    ChristensenBounds out;
    out.bessel = 2.0 * (B + eps);
    if (eps < A) {
        const double lo = A * std::pow(1.0 - std::sqrt(eps / A), 2);
        const double hi = B * std::pow(1.0 + std::sqrt(eps / B), 2);
        out.frame = FrameBounds{lo, hi};
    }
    return out;
}

WeightedPerturbationSum weighted_perturbation_sum(const PerturbedFamily& fam,
                                                  const WeightFunction& w, double lambda,
                                                  double mu, double radius,
                                                  const PhaseGrid& rel_grid) {
    if (!(lambda >= 0.0) || !(mu >= 0.0))
        throw std::domain_error("weighted_perturbation_sum: lambda, mu must be >= 0");
    WeightedPerturbationSum out;

    // |V_win shape|^2 of the unit-amplitude bump shape, shared by every atom
    // up to translation: |V(T_c b)(x, xi)| = |V(b)(x - c, xi)|.
    const Window& win = fam.base().window;
    const Window shape = Window::bump(fam.bump_halfwidth());

    const int nx = rel_grid.nx, nxi = rel_grid.nxi;
    std::vector<double> field(static_cast<std::size_t>(nx) * nxi, 0.0);
    const double quad_r = fam.bump_halfwidth();
    parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
        const double x = -rel_grid.x_max + 2.0 * rel_grid.x_max * i / (nx - 1);
        const int nq = 400;
        const double h = 2.0 * quad_r / nq;
        std::vector<cplx> sampled(static_cast<std::size_t>(nq + 1));
        for (int q = 0; q <= nq; ++q) {
            const double t = -quad_r + h * q;
            const double trap = (q == 0 || q == nq) ? 0.5 : 1.0;
            sampled[static_cast<std::size_t>(q)] = trap * shape(t) * win(t - x) * h;
        }
        for (int k = 0; k < nxi; ++k) {
            const double xi = rel_grid.xi(k);
            cplx acc = 0.0;
            const cplx rot = std::polar(1.0, -h * xi);
            cplx ph = std::polar(1.0, quad_r * xi);
            for (int q = 0; q <= nq; ++q) {
                acc += sampled[static_cast<std::size_t>(q)] * ph;
                ph *= rot;
            }
            field[i * static_cast<std::size_t>(nxi) + static_cast<std::size_t>(k)] = std::norm(acc);
        }
    });

    std::vector<double> terms(fam.atoms().size(), 0.0);
    std::vector<char> over(fam.atoms().size(), 0);
    const double dx = 2.0 * rel_grid.x_max / (nx - 1);
    const double dxi = rel_grid.dxi();
    parallel_for(fam.atoms().size(), [&](std::size_t s) {
        const PerturbedAtom& a = fam.atoms()[s];
        if (std::hypot(a.x, a.xi) > radius || a.scale == 0.0) return;
        double mod2 = 0.0;
        for (int i = 0; i < nx; ++i) {
            const double x = a.center - rel_grid.x_max + dx * i;
            const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
            const std::size_t row = static_cast<std::size_t>(i) * nxi;
            for (int k = 0; k < nxi; ++k) {
                const double xi = rel_grid.xi(k);
                const double wxi = (k == 0 || k == nxi - 1) ? 0.5 : 1.0;
                mod2 += wx * wxi * field[row + static_cast<std::size_t>(k)] *
                        std::exp(2.0 * mu * w.omega2(x, xi));
            }
        }
        mod2 *= dx * dxi * a.amp * a.amp;
        const double log_term =
            lambda * w.omega2(a.x, a.xi) + std::log(std::max(1e-320, mod2));
        if (log_term > 700.0) {
            over[s] = 1;
            return;
        }
        terms[s] = std::exp(lambda * w.omega2(a.x, a.xi)) * mod2;
    });
    for (std::size_t s = 0; s < terms.size(); ++s) {
        if (over[s]) {
            out.overflow = true;
            out.offending_m = fam.atoms()[s].m;
            out.offending_n = fam.atoms()[s].n;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        out.value += terms[s];
    }
    return out;
}

double gaussian_nonstationary_distance(double beta, double beta_n, int m, int n, double alpha) {
    const double d = beta_n - beta;
    const double sp = std::sqrt(M_PI);
    return 2.0 * sp * (1.0 - std::cos(d * m * alpha * n) * std::exp(-d * d * m * m / 4.0));
}

} // namespace tfwave
