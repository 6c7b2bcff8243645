#include "tfwave/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tfwave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConePartition ConePartition::centered(int K) {
    if (K < 8) throw ConfigError("cone partition needs K >= 8 sectors");
    ConePartition p;
    p.K = K;
    p.offset = -M_PI / K;
    return p;
}

int ConePartition::sector_of(double x, double xi) const {
    if (x == 0.0 && xi == 0.0) throw std::domain_error("sector_of: origin has no direction");
    const double ang = std::atan2(xi, x);
    double rel = ang - offset;
    const double two_pi = 2.0 * M_PI;
    rel -= two_pi * std::floor(rel / two_pi);
    int k = static_cast<int>(rel / (two_pi / K));
    if (k >= K) k = K - 1;
    return k;
}

int ShellSpec::shell_of(double r) const {
    if (r < r0) return -1;
    const int j = static_cast<int>(std::floor(std::log(r / r0) / std::log(rho)));
    return j >= J ? -1 : j;
}

ShellMaxima shell_maxima(const CoefficientGrid& coeffs, const ConePartition& part,
                         const ShellSpec& shells) {
    ShellMaxima out;
    out.K = part.K;
    out.J = shells.J;
    out.max_abs.assign(static_cast<std::size_t>(part.K * shells.J), 0.0);
    out.count.assign(static_cast<std::size_t>(part.K * shells.J), 0);
    for (const auto& e : coeffs.entries) {
        const double a = std::abs(e.value);
        out.global_max = std::max(out.global_max, a);
        const double r = std::hypot(e.x, e.xi);
        if (r == 0.0) continue;
        const int j = shells.shell_of(r);
        if (j < 0) continue;
        const int k = part.sector_of(e.x, e.xi);
        const std::size_t idx = static_cast<std::size_t>(k * shells.J + j);
        ++out.count[idx];
        if (a > out.max_abs[idx]) out.max_abs[idx] = a;  // ties keep the earliest entry
    }
    return out;
}

DecayFit decay_rate_fit(const std::vector<double>& shell_max, const std::vector<int>& shell_count,
                        const WeightFunction& w, const ShellSpec& shells, double floor_abs) {
    if (!(floor_abs > 0.0)) throw std::domain_error("decay_rate_fit: floor must be > 0");
    DecayFit fit;
    std::vector<double> u_all, y_all;
    for (int j = 0; j < shells.J; ++j) {
        if (shell_count[static_cast<std::size_t>(j)] == 0) continue;
        const double m = shell_max[static_cast<std::size_t>(j)];
        if (m <= floor_abs) continue;
        u_all.push_back(-w.omega(shells.mid(j)));
        y_all.push_back(std::log(m));
    }
    fit.shells_used = static_cast<int>(u_all.size());
    if (u_all.size() < 2) return fit;  // lambda undefined
    // Fit the outer half of the live shells: the classification quantifies
    // tail decay, and superpolynomial data is convex against -omega, so a
    // full-range slope would understate the rate.
    const std::size_t keep = std::max<std::size_t>(2, (u_all.size() + 1) / 2);
    std::vector<double> u(u_all.end() - static_cast<std::ptrdiff_t>(keep), u_all.end());
    std::vector<double> y(y_all.end() - static_cast<std::ptrdiff_t>(keep), y_all.end());
    double um = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        um += u[i];
        ym += y[i];
    }
    um /= static_cast<double>(u.size());
    ym /= static_cast<double>(u.size());
    double suu = 0.0, suy = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += (u[i] - um) * (u[i] - um);
        suy += (u[i] - um) * (y[i] - ym);
    }
    if (suu == 0.0) return fit;
    fit.lambda_hat = suy / suu;
    fit.defined = true;
    return fit;
}

const char* to_string(SectorStatus s) {
    switch (s) {
    case SectorStatus::Regular: return "regular";
    case SectorStatus::Singular: return "singular";
    case SectorStatus::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::vector<int> WavefrontReport::singular_sectors() const {
    std::vector<int> out;
    for (const auto& s : sectors)
        if (s.status == SectorStatus::Singular) out.push_back(s.k);
    return out;
}

int WavefrontReport::indeterminate_count() const {
    int c = 0;
    for (const auto& s : sectors)
        if (s.status == SectorStatus::Indeterminate) ++c;
    return c;
}

WavefrontReport wavefront_report(const CoefficientGrid& coeffs, const WeightFunction& w,
                                 const ConePartition& part, const ShellSpec& shells,
                                 double lambda_reg, double floor_rel) {
    const ShellMaxima M = shell_maxima(coeffs, part, shells);
    WavefrontReport rep;
    rep.weight_spec = w.spec_string();
    rep.K = part.K;
    rep.offset = part.offset;
    rep.r0 = shells.r0;
    rep.rho = shells.rho;
    rep.J = shells.J;
    rep.lambda_reg = lambda_reg;
    rep.floor_abs = std::max(floor_rel * M.global_max, 1e-300);

    for (int k = 0; k < part.K; ++k) {
        SectorReport sr;
        sr.k = k;
        sr.angle_lo = part.angle_lo(k);
        sr.angle_hi = part.angle_hi(k);
        std::vector<double> row(static_cast<std::size_t>(shells.J));
        std::vector<int> cnt(static_cast<std::size_t>(shells.J));
        int occupied = 0, live = 0, last_occupied = -1;
        for (int j = 0; j < shells.J; ++j) {
            row[static_cast<std::size_t>(j)] = M.at(k, j);
            cnt[static_cast<std::size_t>(j)] = M.cnt(k, j);
            if (M.cnt(k, j) > 0) {
                ++occupied;
                last_occupied = j;
                if (M.at(k, j) > rep.floor_abs) ++live;
            }
        }
        if (occupied < 4) {
            sr.status = SectorStatus::Indeterminate;
            sr.coverage_gap = true;
            sr.shells_used = live;
            rep.sectors.push_back(sr);
            continue;
        }
        if (live >= 4) {
            const DecayFit fit = decay_rate_fit(row, cnt, w, shells, rep.floor_abs);
            sr.lambda_hat = fit.lambda_hat;
            sr.shells_used = fit.shells_used;
            sr.status = (fit.defined && fit.lambda_hat >= lambda_reg) ? SectorStatus::Regular
                                                                      : SectorStatus::Singular;
            if (!fit.defined) sr.status = SectorStatus::Indeterminate;
            rep.sectors.push_back(sr);
            continue;
        }
        // nodes are present but (almost) everything sits below the floor:
        // decayed past the measurable range counts as regular, provided the
        // tail itself is dead
        const bool tail_dead =
            last_occupied >= 0 && M.at(k, last_occupied) <= rep.floor_abs;
        if (tail_dead) {
            sr.lambda_hat = kDecayedLambda;
            sr.shells_used = occupied;
            sr.status = SectorStatus::Regular;
        } else {
            sr.status = SectorStatus::Indeterminate;
            sr.shells_used = live;
        }
        rep.sectors.push_back(sr);
    }
    return rep;
}

CoefficientGrid dense_stft_grid(const CoefficientOracle& oracle, double step, double radius) {
    if (!(step > 0.0) || !(radius > 0.0))
        throw std::domain_error("dense_stft_grid: step and radius must be > 0");
    const int half = static_cast<int>(std::floor(radius / step));
    const double x_cap = oracle.reliable_x_radius();
    struct Node {
        int i, j;
    };
    std::vector<Node> nodes;
    int omitted = 0;
    for (int i = -half; i <= half; ++i) {
        for (int j = -half; j <= half; ++j) {
            if (std::hypot(step * i, step * j) > radius) continue;
            if (std::abs(step * i) > x_cap) {
                ++omitted;
                continue;
            }
            nodes.push_back({i, j});
        }
    }
    CoefficientGrid out;
    out.omitted_nodes = omitted;
    out.entries.resize(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t q) {
        const Node nd = nodes[q];
        CoefficientGrid::Entry e;
        e.n = nd.i;
        e.m = nd.j;
        e.x = step * nd.i;
        e.xi = step * nd.j;
        e.value = oracle.stft(e.x, e.xi);
        out.entries[q] = e;
    });
    return out;
}

WavefrontReport wavefront_stft(const CoefficientOracle& oracle, double step, double radius,
                               const WeightFunction& w, const ConePartition& part,
                               const ShellSpec& shells, double lambda_reg, double floor_rel) {
    return wavefront_report(dense_stft_grid(oracle, step, radius), w, part, shells, lambda_reg,
                            floor_rel);
}

std::vector<SupSumRow> sup_sum_equivalence(const CoefficientGrid& coeffs, const ConePartition& part,
                                           int sector, const WeightFunction& w,
                                           const std::vector<double>& lambdas,
                                           const std::vector<double>& truncations) {
    for (double l : lambdas)
        if (!(l > 0.0)) throw std::domain_error("sup_sum_equivalence: lambdas must be > 0");
    std::vector<SupSumRow> rows;
    for (double lambda : lambdas) {
        for (double radius : truncations) {
            SupSumRow row;
            row.lambda = lambda;
            row.radius = radius;
            for (const auto& e : coeffs.entries) {
                const double r = std::hypot(e.x, e.xi);
                if (r == 0.0 || r > radius) continue;
                if (part.sector_of(e.x, e.xi) != sector) continue;
                const double a = std::abs(e.value);
                const double lw = lambda * w.omega(r);
                const double sup_term = lw + std::log(a + 1e-320) > 700.0
                                            ? kInf
                                            : a * std::exp(lw);
                const double sum_term = lw + 2.0 * std::log(a + 1e-320) > 700.0
                                            ? kInf
                                            : a * a * std::exp(lw);
                row.sup_stat = std::max(row.sup_stat, sup_term);
                row.sum_stat += sum_term;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

ComparisonResult stability_compare(const WavefrontReport& a, const WavefrontReport& b) {
    if (a.K != b.K || a.offset != b.offset)
        throw ShapeError("stability_compare: partitions differ");
    if (a.weight_spec != b.weight_spec)
        throw ShapeError("stability_compare: weights differ");
    ComparisonResult res;
    res.indeterminate_a = a.indeterminate_count();
    res.indeterminate_b = b.indeterminate_count();
    bool any_flip = false;
    for (int k = 0; k < a.K; ++k) {
        SectorDiff d;
        d.k = k;
        d.status_a = a.sectors[static_cast<std::size_t>(k)].status;
        d.status_b = b.sectors[static_cast<std::size_t>(k)].status;
        const bool both_decided = d.status_a != SectorStatus::Indeterminate &&
                                  d.status_b != SectorStatus::Indeterminate;
        d.flip = both_decided && d.status_a != d.status_b;
        any_flip = any_flip || d.flip;
        res.sectors.push_back(d);
    }
    res.pass = !any_flip;
    return res;
}

} // namespace tfwave
