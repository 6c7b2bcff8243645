#include "tfwave/nsgt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tfwave {

// --- step sequences -------------------------------------------------------------

StepSequence StepSequence::constant(double v) {
    if (!(v > 0.0)) throw ConfigError("step sequence values must be > 0");
    StepSequence s;
    s.kind_ = Kind::Constant;
    s.base_ = v;
    return s;
}

StepSequence StepSequence::sine(double base, double amp) {
    if (!(base > 0.0) || std::abs(amp) >= 1.0)
        throw ConfigError("sine step sequence needs base > 0 and |amp| < 1");
    StepSequence s;
    s.kind_ = Kind::Sine;
    s.base_ = base;
    s.amp_ = amp;
    return s;
}

StepSequence StepSequence::table(std::vector<int> n, std::vector<double> v) {
    if (n.size() != v.size() || n.empty()) throw ConfigError("step table is empty or ragged");
    StepSequence s;
    s.kind_ = Kind::Table;
    s.tab_n_ = std::move(n);
    s.tab_v_ = std::move(v);
    for (double x : s.tab_v_)
        if (!(x > 0.0)) throw ConfigError("step sequence values must be > 0");
    return s;
}

double StepSequence::operator()(int n) const {
    switch (kind_) {
    case Kind::Constant:
        return base_;
    case Kind::Sine:
        return base_ * (1.0 + amp_ * std::sin(static_cast<double>(n)));
    case Kind::Table: {
        for (std::size_t i = 0; i < tab_n_.size(); ++i)
            if (tab_n_[i] == n) return tab_v_[i];
        throw RangeError("step sequence table has no entry for n = " + std::to_string(n));
    }
    }
    return base_;
}

std::string StepSequence::spec_string() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Constant: os << "const:" << base_; break;
    case Kind::Sine: os << "sine:" << base_ << "," << amp_; break;
    case Kind::Table: os << "csv:<table>"; break;
    }
    return os.str();
}

StepSequence parse_steps(const std::string& spec) {
    try {
        if (spec.rfind("const:", 0) == 0) return StepSequence::constant(std::stod(spec.substr(6)));
        if (spec.rfind("sine:", 0) == 0) {
            const std::string rest = spec.substr(5);
            const auto comma = rest.find(',');
            if (comma == std::string::npos) throw ConfigError("sine steps need 'sine:<base>,<amp>'");
            return StepSequence::sine(std::stod(rest.substr(0, comma)),
                                      std::stod(rest.substr(comma + 1)));
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad numeric argument in step spec '" + spec + "'");
    }
    if (spec.rfind("csv:", 0) == 0) {
        const std::string path = spec.substr(4);
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open step table '" + path + "'");
        std::vector<int> ns;
        std::vector<double> vs;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == 'n') continue;
            std::istringstream ls(line);
            std::string a, b;
            if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'n,value'");
            try {
                ns.push_back(std::stoi(a));
                vs.push_back(std::stod(b));
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number");
            }
        }
        return StepSequence::table(std::move(ns), std::move(vs));
    }
    throw ConfigError("unknown step spec '" + spec +
                      "' (expected const:<v>, sine:<base>,<amp>, csv:<path>)");
}

// --- certificates ---------------------------------------------------------------

namespace {

void sampled_window_support(const SampledSignal& s, double& lo, double& hi) {
    double peak = 0.0;
    for (int j = 0; j < s.size(); ++j) peak = std::max(peak, std::abs(s[j]));
    if (peak == 0.0) throw ConfigError("window is identically zero");
    int j_lo = 0, j_hi = s.size() - 1;
    while (j_lo < s.size() && std::abs(s[j_lo]) < 1e-14 * peak) ++j_lo;
    while (j_hi >= 0 && std::abs(s[j_hi]) < 1e-14 * peak) --j_hi;
    if (j_lo > j_hi) throw ConfigError("window has no support above the floor");
    if (j_lo == 0 || j_hi == s.size() - 1)
        throw ConfigError("window is not compactly supported (edge samples above 1e-14 of peak)");
    lo = s.t(j_lo);
    hi = s.t(j_hi);
}

PainlessCertificate build_certificate(PainlessCertificate::Side side, const Window& win,
                                      double step, const StepSequence& seq, int index_radius,
                                      double parseval) {
    if (!(step > 0.0)) throw ConfigError("translation step must be > 0");
    if (index_radius < 0 || index_radius > 20000)
        throw ConfigError("index radius out of range [0, 20000]");

    PainlessCertificate cert;
    cert.side = side;
    cert.window = win;
    cert.alpha = step;
    cert.steps = seq;
    cert.index_radius = index_radius;
    cert.parseval = parseval;

    double lo = 0.0, hi = 0.0;
    if (win.kind() == Window::Kind::Bump) {
        if (std::abs(win.bump_center()) > 1e-312)
            throw ConfigError("painless window bumps must be centered at 0");
        lo = -win.halfwidth();
        hi = win.halfwidth();
    } else if (win.kind() == Window::Kind::Sampled) {
        sampled_window_support(*win.samples(), lo, hi);
    } else {
        throw ConfigError("painless certificate needs a compactly supported window");
    }
    cert.support_lo = lo;
    cert.support_hi = hi;
    const double width = hi - lo;

    for (int n = -index_radius; n <= index_radius; ++n) {
        const double sn = seq(n);
        if (1.0 / sn < width - 1e-12)
            throw NumericError("painless support condition violated at n = " + std::to_string(n) +
                               ": 1/step = " + std::to_string(1.0 / sn) + " < support width " +
                               std::to_string(width));
    }

    // Interior where the stored index range covers every overlapping atom;
    // systems whose truncation leaves no interior have no lower bound.
    cert.interior_lo = hi - step * index_radius;
    cert.interior_hi = lo + step * index_radius;
    const bool has_interior = cert.interior_lo < cert.interior_hi;

    const double fine = step / 2048.0;
    double A = std::numeric_limits<double>::infinity(), B = 0.0;
    if (has_interior) {
        const long count =
            static_cast<long>(std::floor((cert.interior_hi - cert.interior_lo) / fine));
        for (long i = 0; i <= count; ++i) {
            const double t = cert.interior_lo + fine * static_cast<double>(i);
            const double g = cert.multiplier(t);
            A = std::min(A, g);
            B = std::max(B, g);
        }
    } else {
        A = 0.0;
        cert.interior_lo = lo;
        cert.interior_hi = hi;
    }
    {
        // the sup runs over the whole covered range
        const double cov_lo = lo - step * index_radius, cov_hi = hi + step * index_radius;
        const long count = static_cast<long>(std::floor((cov_hi - cov_lo) / fine));
        for (long i = 0; i <= count; ++i)
            B = std::max(B, cert.multiplier(cov_lo + fine * static_cast<double>(i)));
    }
    cert.A = std::isfinite(A) ? A : 0.0;
    cert.B = B;
    cert.is_frame = cert.A > 1e-10;

    // One period [0, step) and the periodicity defect (zero only for constant
    // step sequences; reported either way).
    const int per_n = 2048;
    cert.period_step = step / per_n;
    cert.period_samples.resize(per_n);
    double defect = 0.0;
    for (int i = 0; i < per_n; ++i) {
        const double t = cert.period_step * i;
        const double g = cert.multiplier(t);
        cert.period_samples[static_cast<std::size_t>(i)] = g;
        if (t >= cert.interior_lo && t + step <= cert.interior_hi)
            defect = std::max(defect, std::abs(cert.multiplier(t + step) - g));
    }
    cert.periodicity_defect = defect;
    return cert;
}

} // namespace

double PainlessCertificate::multiplier(double t) const {
    const int n_lo =
        std::max(-index_radius, static_cast<int>(std::ceil((t - support_hi) / alpha - 1e-12)));
    const int n_hi =
        std::min(index_radius, static_cast<int>(std::floor((t - support_lo) / alpha + 1e-12)));
    double acc = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double v = window(t - alpha * n);
        acc += parseval / steps(n) * v * v;
    }
    return acc;
}

double PainlessCertificate::step_lower_bound() const {
    double sup = 0.0;
    const double width = support_hi - support_lo;
    for (int i = 0; i <= 4096; ++i) {
        const double t = support_lo + width * i / 4096.0;
        sup = std::max(sup, window(t) * window(t));
    }
    return parseval * sup / B;
}

PainlessCertificate painless_check_time(const NSGSystemTime& sys) {
    return build_certificate(PainlessCertificate::Side::Time, sys.window, sys.alpha, sys.betas,
                             sys.index_radius, 2.0 * M_PI);
}

PainlessCertificate painless_check_freq(const NSGSystemFreq& sys) {
    return build_certificate(PainlessCertificate::Side::Frequency, sys.spectrum_window, sys.beta,
                             sys.alphas, sys.index_radius, 1.0);
}

NSGSystemFreq nsg_freq_from_signal(const SampledSignal& h, double beta, StepSequence alphas,
                                   int index_radius) {
    SampledSignal raw = fourier(h);
    // FFT round-trip noise sits around N*eps of the peak; hard-threshold it
    // so the support detector sees genuine zeros
    double peak = 0.0;
    for (int k = 0; k < raw.size(); ++k) peak = std::max(peak, std::abs(raw[k]));
    std::vector<cplx> cleaned(raw.values());
    for (auto& v : cleaned)
        if (std::abs(v) < 1e-13 * peak) v = 0.0;
    SampledSignal hhat(raw.grid(), std::move(cleaned));
    double lo = 0.0, hi = 0.0;
    sampled_window_support(hhat, lo, hi);
    NSGSystemFreq sys;
    sys.spectrum_window = Window::sampled(std::move(hhat));
    sys.beta = beta;
    sys.alphas = std::move(alphas);
    sys.index_radius = index_radius;
    return sys;
}

SampledSignal diagonal_frame_operator(const PainlessCertificate& cert, const SampledSignal& f) {
    if (cert.side != PainlessCertificate::Side::Time)
        throw ShapeError("diagonal_frame_operator expects a time-side certificate");
    const GridSpec& g = f.grid();
    std::vector<cplx> v(static_cast<std::size_t>(g.N));
    for (int j = 0; j < g.N; ++j)
        v[static_cast<std::size_t>(j)] = cert.multiplier(g.t(j)) * f[j];
    return SampledSignal(g, std::move(v));
}

namespace {

struct SupportIdx {
    int j_lo = 0, j_hi = -1;
};

SupportIdx support_indices(const GridSpec& g, double lo, double hi) {
    SupportIdx s;
    s.j_lo = std::max(0, static_cast<int>(std::ceil((lo + g.T) / g.dt() - 1e-9)));
    s.j_hi = std::min(g.N - 1, static_cast<int>(std::floor((hi + g.T) / g.dt() + 1e-9)));
    return s;
}

} // namespace

CoefficientGrid nsg_analysis(const PainlessCertificate& cert, const SampledSignal& f,
                             double xi_cut) {
    const GridSpec& g = f.grid();
    const double dt = g.dt();
    if (!(xi_cut > 0.0)) throw std::domain_error("nsg_analysis: xi_cut must be > 0");
    if (xi_cut > 0.98 * g.dual_T())
        throw ConfigError("nsg_analysis: cutoff " + std::to_string(xi_cut) +
                          " reaches the grid's dual half-width " + std::to_string(g.dual_T()) +
                          " (discrete modulations alias)");
    std::vector<int> ns;
    for (int n = -cert.index_radius; n <= cert.index_radius; ++n) {
        const double lo = cert.support_lo + cert.alpha * n;
        const double hi = cert.support_hi + cert.alpha * n;
        if (hi < -g.T || lo > g.T) continue;
        ns.push_back(n);
    }
    std::vector<std::vector<CoefficientGrid::Entry>> rows(ns.size());
    parallel_for(ns.size(), [&](std::size_t ri) {
        const int n = ns[ri];
        const double bn = cert.steps(n);
        const int m_max = static_cast<int>(std::floor(xi_cut / bn));
        const SupportIdx si = support_indices(g, cert.support_lo + cert.alpha * n,
                                              cert.support_hi + cert.alpha * n);
        const int len = si.j_hi - si.j_lo + 1;
        if (len <= 0) return;
        std::vector<cplx> run(static_cast<std::size_t>(len));
        std::vector<cplx> rot(static_cast<std::size_t>(len));
        for (int j = 0; j < len; ++j) {
            const int jj = si.j_lo + j;
            const double w = (jj == 0 || jj == g.N - 1) ? 0.5 : 1.0;
            const double t = g.t(jj);
            // start the m-recurrence at m = -m_max
            run[static_cast<std::size_t>(j)] = w * dt * f[jj] * cert.window(t - cert.alpha * n) *
                                               std::polar(1.0, bn * m_max * t);
            rot[static_cast<std::size_t>(j)] = std::polar(1.0, -bn * t);
        }
        auto& row = rows[ri];
        row.reserve(static_cast<std::size_t>(2 * m_max + 1));
        for (int m = -m_max; m <= m_max; ++m) {
            cplx acc = 0.0;
            for (int j = 0; j < len; ++j) acc += run[static_cast<std::size_t>(j)];
            CoefficientGrid::Entry e;
            e.m = m;
            e.n = n;
            e.x = cert.alpha * n;
            e.xi = bn * m;
            e.value = acc;
            row.push_back(e);
            if (m < m_max)
                for (int j = 0; j < len; ++j)
                    run[static_cast<std::size_t>(j)] *= rot[static_cast<std::size_t>(j)];
        }
    });
    CoefficientGrid out;
    for (auto& row : rows) out.entries.insert(out.entries.end(), row.begin(), row.end());
    return out;
}

namespace {

// sum over rows n of g_n(t) [ / G(t) ] sum_m c_{m,n} e^{i beta_n m t},
// parallel over output samples; rows must be m-contiguous per n (they are:
// analysis emits them row-major). Each row's m values form an arithmetic
// progression, so the inner sum runs on a phase recurrence.
SampledSignal synthesize_rows(const PainlessCertificate& cert, const CoefficientGrid& coeffs,
                              const GridSpec& g, bool dual_weights) {
    struct Row {
        int n = 0;
        int m_lo = 0;
        std::size_t lo = 0, hi = 0;
        double bn = 0.0;
    };
    std::vector<Row> rows;
    std::size_t idx = 0;
    while (idx < coeffs.entries.size()) {
        Row r;
        r.n = coeffs.entries[idx].n;
        r.lo = idx;
        std::size_t end = idx;
        int expect = coeffs.entries[idx].m;
        while (end < coeffs.entries.size() && coeffs.entries[end].n == r.n) {
            if (coeffs.entries[end].m != expect)
                throw ShapeError("synthesis needs m-contiguous coefficient rows");
            ++expect;
            ++end;
        }
        r.hi = end;
        r.m_lo = coeffs.entries[r.lo].m;
        r.bn = cert.steps(r.n);
        rows.push_back(r);
        idx = end;
    }
    std::vector<cplx> acc(static_cast<std::size_t>(g.N), cplx(0.0, 0.0));
    parallel_for(static_cast<std::size_t>(g.N), [&](std::size_t j) {
        const double t = g.t(static_cast<int>(j));
        cplx out = 0.0;
        for (const Row& r : rows) {
            const double gn = cert.window(t - cert.alpha * r.n);
            if (gn == 0.0) continue;
            const cplx rot = std::polar(1.0, r.bn * t);
            cplx ph = std::polar(1.0, r.bn * t * r.m_lo);
            cplx s = 0.0;
            for (std::size_t q = r.lo; q < r.hi; ++q) {
                s += coeffs.entries[q].value * ph;
                ph *= rot;
            }
            out += dual_weights ? s * gn / cert.multiplier(t) : s * gn;
        }
        acc[j] = out;
    });
    return SampledSignal(g, std::move(acc));
}

} // namespace

SampledSignal frame_operator_via_expansion(const PainlessCertificate& cert, const SampledSignal& f,
                                           double xi_cut) {
    if (cert.side != PainlessCertificate::Side::Time)
        throw ShapeError("frame_operator_via_expansion expects a time-side certificate");
    return frame_operator_via_expansion(cert, nsg_analysis(cert, f, xi_cut), f.grid());
}

SampledSignal frame_operator_via_expansion(const PainlessCertificate& cert,
                                           const CoefficientGrid& coeffs, const GridSpec& grid) {
    if (cert.side != PainlessCertificate::Side::Time)
        throw ShapeError("frame_operator_via_expansion expects a time-side certificate");
    double worst = 0.0;
    for (std::size_t i = 0; i < coeffs.entries.size(); ++i) {
        const auto& e = coeffs.entries[i];
        const bool row_edge = i == 0 || i + 1 == coeffs.entries.size() ||
                              coeffs.entries[i - 1].n != e.n || coeffs.entries[i + 1].n != e.n;
        if (row_edge) worst = std::max(worst, std::abs(e.value));
    }
    if (worst >= 1e-12)
        throw NumericError("expansion truncation not certified: boundary coefficient " +
                           std::to_string(worst));
    return synthesize_rows(cert, coeffs, grid, false);
}

SampledSignal canonical_dual_time(const PainlessCertificate& cert, int m, int n,
                                  const GridSpec& grid) {
    if (!cert.is_frame) throw NumericError("canonical dual refused: certificate has A = 0");
    const double bn = cert.steps(n);
    return SampledSignal::from_function(grid, [&](double t) -> cplx {
        const double gn = cert.window(t - cert.alpha * n);
        if (gn == 0.0) return {0.0, 0.0};
        return gn / cert.multiplier(t) * std::polar(1.0, bn * m * t);
    });
}

SampledSignal reconstruct(const PainlessCertificate& cert, const CoefficientGrid& coeffs,
                          const GridSpec& grid) {
    if (!cert.is_frame) throw NumericError("reconstruct refused: certificate has A = 0");
    return synthesize_rows(cert, coeffs, grid, true);
}

CoefficientGrid nsg_coeffs(const CoefficientOracle& oracle, const NSGSystemTime& sys,
                           double radius) {
    if (!(radius > 0.0)) throw std::domain_error("nsg_coeffs: radius must be > 0");
    struct Node {
        int m, n;
        double x, xi;
    };
    std::vector<Node> nodes;
    int omitted = 0;
    const double x_cap = oracle.reliable_x_radius();
    const int n_max = std::min(sys.index_radius, static_cast<int>(std::floor(radius / sys.alpha)));
    for (int n = -n_max; n <= n_max; ++n) {
        const double bn = sys.betas(n);
        const double x = sys.alpha * n;
        const int m_max = static_cast<int>(std::floor(radius / bn));
        for (int m = -m_max; m <= m_max; ++m) {
            const double xi = bn * m;
            if (std::hypot(x, xi) > radius) continue;
            if (std::abs(x) > x_cap) {
                ++omitted;
                continue;
            }
            nodes.push_back({m, n, x, xi});
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
        e.x = nd.x;
        e.xi = nd.xi;
        e.value = oracle.pair_window(sys.window, nd.x, nd.xi);
        out.entries[i] = e;
    });
    return out;
}

CoefficientGrid nsg_coeffs_freq(const CoefficientOracle& oracle, const NSGSystemFreq& sys,
                                double radius) {
    if (!(radius > 0.0)) throw std::domain_error("nsg_coeffs_freq: radius must be > 0");
    if (!oracle.has_spectrum() && !oracle.is_constant())
        throw ConfigError("frequency-side pairings need a closed-form spectrum");

    const double w = sys.spectrum_window.support_radius();
    const int m_max = std::min(sys.index_radius, static_cast<int>(std::floor(radius / sys.beta)));
    std::vector<int> ms;
    for (int m = -m_max; m <= m_max; ++m) ms.push_back(m);

    std::vector<std::vector<CoefficientGrid::Entry>> rows(ms.size());
    parallel_for(ms.size(), [&](std::size_t mi) {
        const int m = ms[mi];
        const double am = sys.alphas(m);
        const double xi = sys.beta * m;
        if (std::abs(xi) > radius) return;
        const int n_max = static_cast<int>(std::floor(std::sqrt(std::max(
                              0.0, radius * radius - xi * xi)) / am));
        auto& row = rows[mi];
        if (oracle.is_constant()) {
            // <1, h_{m,n}> = conj(hhat_{m,n}(0)) = hhat(-beta m) for real hhat
            const double v = sys.spectrum_window(-xi);
            for (int n = -n_max; n <= n_max; ++n) {
                CoefficientGrid::Entry e;
                e.m = m;
                e.n = n;
                e.x = am * n;
                e.xi = xi;
                e.value = v;
                row.push_back(e);
            }
            return;
        }
        // (2 pi)^{-1} int uhat(eta) hhat(eta - beta m) e^{i alpha_m n eta} d eta
        const double lo = xi - w, hi = xi + w;
        const int nq = std::max(256, static_cast<int>((hi - lo) / 0.004));
        const double h = (hi - lo) / nq;
        std::vector<cplx> run(static_cast<std::size_t>(nq + 1));
        std::vector<cplx> rot(static_cast<std::size_t>(nq + 1));
        for (int q = 0; q <= nq; ++q) {
            const double eta = lo + h * q;
            const double trap = (q == 0 || q == nq) ? 0.5 : 1.0;
            // start at n = -n_max
            run[static_cast<std::size_t>(q)] = trap * oracle.spectrum(eta) *
                                               sys.spectrum_window(eta - xi) *
                                               std::polar(1.0, -am * n_max * eta) * h /
                                               (2.0 * M_PI);
            rot[static_cast<std::size_t>(q)] = std::polar(1.0, am * eta);
        }
        row.reserve(static_cast<std::size_t>(2 * n_max + 1));
        for (int n = -n_max; n <= n_max; ++n) {
            cplx acc = 0.0;
            for (int q = 0; q <= nq; ++q) acc += run[static_cast<std::size_t>(q)];
            CoefficientGrid::Entry e;
            e.m = m;
            e.n = n;
            e.x = am * n;
            e.xi = xi;
            e.value = acc;
            row.push_back(e);
            if (n < n_max)
                for (int q = 0; q <= nq; ++q)
                    run[static_cast<std::size_t>(q)] *= rot[static_cast<std::size_t>(q)];
        }
    });
    CoefficientGrid out;
    for (auto& row : rows) out.entries.insert(out.entries.end(), row.begin(), row.end());
    return out;
}

SampledSignal canonical_dual_freq(const PainlessCertificate& cert, int m, int n,
                                  const GridSpec& grid) {
    if (cert.side != PainlessCertificate::Side::Frequency)
        throw ShapeError("canonical_dual_freq expects a frequency-side certificate");
    if (!cert.is_frame) throw NumericError("canonical dual refused: certificate has A = 0");
    const double am = cert.steps(m);
    const double beta = cert.alpha;
    GridSpec dual{grid.dual_T(), grid.N};
    SampledSignal spec = SampledSignal::from_function(dual, [&](double xi) -> cplx {
        const double hm = cert.window(xi - beta * m);
        if (hm == 0.0) return {0.0, 0.0};
        return hm / cert.multiplier(xi) * std::polar(1.0, -am * n * xi);
    });
    return inverse_fourier(spec);
}

FreqReconstruction freq_reconstruction_error(const PainlessCertificate& cert,
                                             const std::function<cplx(double)>& fhat,
                                             double fhat_support, double quad_step) {
    if (cert.side != PainlessCertificate::Side::Frequency)
        throw ShapeError("freq_reconstruction_error expects a frequency-side certificate");
    if (!cert.is_frame) throw NumericError("frequency reconstruction refused: A = 0");
    const double w = (cert.support_hi - cert.support_lo) / 2.0;
    const double beta = cert.alpha;
    const int m_max =
        std::min(cert.index_radius, static_cast<int>(std::ceil((fhat_support + w) / beta)));

    const double lim = fhat_support + 2.0 * w;
    const int nrec = static_cast<int>(2.0 * lim / quad_step);
    std::vector<cplx> rec(static_cast<std::size_t>(nrec + 1), cplx(0.0, 0.0));

    FreqReconstruction out;
    for (int m = -m_max; m <= m_max; ++m) {
        const double am = cert.steps(m);
        const double c_lo = beta * m - w, c_hi = beta * m + w;
        // resolution follows the oscillation e^{i alpha_m n eta}: the trapezoid
        // alias at 2 pi / h must land past the integrand's own spectral tail,
        // or large-n rows turn into coherent ghosts of the low frequencies
        const auto coeff_at = [&](int n) {
            const double osc = std::abs(am * n) + 800.0;
            const int nq = std::max(256, static_cast<int>(std::ceil((c_hi - c_lo) * osc / M_PI)));
            const double h = (c_hi - c_lo) / nq;
            cplx acc = 0.0;
            const cplx rot = std::polar(1.0, am * n * h);
            cplx ph = std::polar(1.0, am * n * c_lo);
            for (int q = 0; q <= nq; ++q) {
                const double eta = c_lo + h * q;
                const double trap = (q == 0 || q == nq) ? 0.5 : 1.0;
                acc += trap * fhat(eta) * cert.window(eta - beta * m) * ph;
                ph *= rot;
            }
            return acc * h / (2.0 * M_PI);
        };
        std::vector<cplx> cpos, cneg;
        int n_used = 0;
        double tail = 0.0;
        int quiet = 0;
        const int n_cap = 4000;
        for (int n = 0; n <= n_cap; ++n) {
            cpos.push_back(coeff_at(n));
            if (n > 0) cneg.push_back(coeff_at(-n));
            tail = std::abs(cpos.back());
            if (n > 0) tail = std::max(tail, std::abs(cneg.back()));
            n_used = n;
            quiet = tail < 1e-13 ? quiet + 1 : 0;
            if (n > 8 && quiet >= 3) break;
        }
        out.n_max_used = std::max(out.n_max_used, n_used);
        out.largest_boundary_coeff = std::max(out.largest_boundary_coeff, tail);

        parallel_for(static_cast<std::size_t>(nrec + 1), [&](std::size_t k) {
            const double xi = -lim + quad_step * static_cast<double>(k);
            const double hm = cert.window(xi - beta * m);
            if (hm == 0.0) return;
            cplx s = cpos[0];
            const cplx rot = std::polar(1.0, -am * xi);
            cplx php = rot;
            cplx phm = std::conj(rot);
            for (int n = 1; n <= n_used; ++n) {
                s += cpos[static_cast<std::size_t>(n)] * php;
                s += cneg[static_cast<std::size_t>(n - 1)] * phm;
                php *= rot;
                phm *= std::conj(rot);
            }
            rec[k] += s * hm / cert.multiplier(xi);
        });
    }

    double err2 = 0.0, ref2 = 0.0;
    for (int k = 0; k <= nrec; ++k) {
        const double xi = -lim + quad_step * k;
        const cplx want = fhat(xi);
        err2 += std::norm(rec[static_cast<std::size_t>(k)] - want);
        ref2 += std::norm(want);
    }
    out.rel_error = ref2 > 0.0 ? std::sqrt(err2 / ref2) : 0.0;
    return out;
}

// --- combinatorics ---------------------------------------------------------------

namespace {

unsigned long long binom_ull(int n, int k) {
    if (k < 0 || k > n) return 0;
    unsigned long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / i;
    return r;
}

unsigned long long factorial_ull(int n) {
    unsigned long long r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<unsigned long long>(i);
    return r;
}

// ordered tuples of nonzero multi-indices summing to kappa
unsigned long long enumerate_tuples(std::vector<int>& kappa, int slots) {
    int total = 0;
    for (int k : kappa) total += k;
    if (slots == 0) return total == 0 ? 1ull : 0ull;
    if (total < slots) return 0;
    const int d = static_cast<int>(kappa.size());
    std::vector<int> gamma(static_cast<std::size_t>(d), 0);
    unsigned long long count = 0;
    const std::function<void(int)> rec = [&](int j) {
        if (j == d) {
            int s = 0;
            for (int v : gamma) s += v;
            if (s == 0) return;
            for (int i = 0; i < d; ++i) kappa[static_cast<std::size_t>(i)] -= gamma[static_cast<std::size_t>(i)];
            count += enumerate_tuples(kappa, slots - 1);
            for (int i = 0; i < d; ++i) kappa[static_cast<std::size_t>(i)] += gamma[static_cast<std::size_t>(i)];
            return;
        }
        for (int v = 0; v <= kappa[static_cast<std::size_t>(j)]; ++v) {
            gamma[static_cast<std::size_t>(j)] = v;
            rec(j + 1);
        }
        gamma[static_cast<std::size_t>(j)] = 0;
    };
    rec(0);
    return count;
}

} // namespace

CompositionCount composition_count(const std::vector<int>& kappa, int ell) {
    const int d = static_cast<int>(kappa.size());
    if (d < 1 || d > 3) throw RangeError("composition_count: dimension must be 1..3");
    int total = 0;
    for (int k : kappa) {
        if (k < 0) throw RangeError("composition_count: kappa components must be >= 0");
        total += k;
    }
    if (total > 12 || ell > 12 || ell < 1)
        throw RangeError("composition_count: |kappa| <= 12 and 1 <= ell <= 12 required");

    CompositionCount out;
    {
        std::vector<int> ka = kappa;
        out.enumeration = enumerate_tuples(ka, ell);
    }
    {
        // multiplicity vectors c over J = { gamma : 0 < gamma <= kappa } with
        // sum c = ell, sum gamma c_gamma = kappa; each contributes the exact
        // multinomial ell! / prod c!
        std::vector<std::vector<int>> J;
        std::vector<int> gamma(static_cast<std::size_t>(d), 0);
        const std::function<void(int)> gen = [&](int j) {
            if (j == d) {
                int s = 0;
                for (int v : gamma) s += v;
                if (s > 0) J.push_back(gamma);
                return;
            }
            for (int v = 0; v <= kappa[static_cast<std::size_t>(j)]; ++v) {
                gamma[static_cast<std::size_t>(j)] = v;
                gen(j + 1);
            }
            gamma[static_cast<std::size_t>(j)] = 0;
        };
        gen(0);

        unsigned long long acc = 0;
        std::vector<int> rem = kappa;
        std::vector<int> counts;
        const std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int used) {
            int rem_total = 0;
            for (int v : rem) rem_total += v;
            if (used == ell) {
                if (rem_total == 0) {
                    unsigned long long denom = 1;
                    for (int c : counts) denom *= factorial_ull(c);
                    acc += factorial_ull(ell) / denom;
                }
                return;
            }
            if (idx == J.size() || rem_total < ell - used) return;
            const auto& g = J[idx];
            counts.push_back(0);
            rec(idx + 1, used);
            counts.pop_back();
            int c = 0;
            while (true) {
                ++c;
                bool ok = used + c <= ell;
                for (int j = 0; j < d && ok; ++j)
                    if (rem[static_cast<std::size_t>(j)] < c * g[static_cast<std::size_t>(j)]) ok = false;
                if (!ok) break;
                for (int j = 0; j < d; ++j)
                    rem[static_cast<std::size_t>(j)] -= c * g[static_cast<std::size_t>(j)];
                counts.push_back(c);
                rec(idx + 1, used + c);
                counts.pop_back();
                for (int j = 0; j < d; ++j)
                    rem[static_cast<std::size_t>(j)] += c * g[static_cast<std::size_t>(j)];
            }
        };
        rec(0, 0);
        out.factorial_form = acc;
    }
    {
        out.binomial_product = 1;
        for (int k : kappa) out.binomial_product *= binom_ull(k + ell - 1, ell - 1);
        const int expn = total + d * ell - d;
        out.power_bound = expn >= 64 ? ~0ull : (1ull << expn);
    }
    return out;
}

// --- derivatives of 1/G -----------------------------------------------------------

namespace {

double stencil_derivative(const std::vector<double>& v, double h, int c, int order) {
    const auto at = [&](int off) { return v[static_cast<std::size_t>(c + off)]; };
    switch (order) {
    case 0:
        return at(0);
    case 1:
        return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
    case 2:
        return (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
    case 3:
        return (at(2) - 2.0 * at(1) + 2.0 * at(-1) - at(-2)) / (2.0 * h * h * h);
    case 4:
        return (at(2) - 4.0 * at(1) + 6.0 * at(0) - 4.0 * at(-1) + at(-2)) / (h * h * h * h);
    default:
        throw RangeError("stencil order must be <= 4");
    }
}

void check_center(const std::vector<double>& G, int center, int order) {
    if (order < 0 || order > 4) throw RangeError("derivative order must be in [0, 4]");
    if (center < 2 || center + 2 >= static_cast<int>(G.size()))
        throw RangeError("sample index too close to the boundary for a 5-point stencil");
}

} // namespace

double reciprocal_derivative_faa(const std::vector<double>& G, double step, int center, int order) {
    check_center(G, center, order);
    const double g0 = G[static_cast<std::size_t>(center)];
    if (!(g0 > 1e-10)) throw NumericError("reciprocal derivative refused: G near zero");
    if (order == 0) return 1.0 / g0;

    double deriv[5] = {0, 0, 0, 0, 0};
    for (int i = 1; i <= order; ++i) deriv[i] = stencil_derivative(G, step, center, i);

    const auto dfact = [](int n) {
        double r = 1.0;
        for (int i = 2; i <= n; ++i) r *= i;
        return r;
    };

    // partition form: sum over multiplicities (c_1..c_k), sum i c_i = k, with
    // ell = sum c_i, of k! (-1)^ell ell! / G^{ell+1} prod (G^(i)/i!)^{c_i}/c_i!
    double total = 0.0;
    std::vector<int> c(static_cast<std::size_t>(order + 1), 0);
    const std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i > order) {
            if (remaining != 0) return;
            int ell = 0;
            for (int j = 1; j <= order; ++j) ell += c[static_cast<std::size_t>(j)];
            if (ell == 0) return;
            double prod = 1.0;
            for (int j = 1; j <= order; ++j) {
                const int cj = c[static_cast<std::size_t>(j)];
                if (cj == 0) continue;
                prod *= std::pow(deriv[j] / dfact(j), cj) / dfact(cj);
            }
            const double sign = (ell % 2 == 0) ? 1.0 : -1.0;
            total += dfact(order) * sign * dfact(ell) / std::pow(g0, ell + 1) * prod;
            return;
        }
        for (int cc = 0; cc * i <= remaining; ++cc) {
            c[static_cast<std::size_t>(i)] = cc;
            rec(i + 1, remaining - cc * i);
        }
        c[static_cast<std::size_t>(i)] = 0;
    };
    rec(1, order);
    return total;
}

double reciprocal_derivative_direct(const std::vector<double>& G, double step, int center,
                                    int order) {
    check_center(G, center, order);
    std::vector<double> H(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (!(G[i] > 1e-10)) throw NumericError("reciprocal derivative refused: G near zero");
        H[i] = 1.0 / G[i];
    }
    return stencil_derivative(H, step, center, order);
}

double multiplier_bound_check(const std::vector<double>& G, double step, const WeightFunction& w,
                              double lambda, int max_order) {
    if (max_order < 0 || max_order > 4) throw RangeError("max_order must be in [0, 4]");
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
    double C = 0.0;
    for (int k = 0; k <= max_order; ++k) {
        const double conj = w.young_conjugate(static_cast<double>(k) / lambda);
        if (!std::isfinite(conj)) continue;  // bound trivially satisfied at this order
        const double denom = std::exp(lambda * std::max(conj, 0.0));
        for (int c = 2; c + 2 < static_cast<int>(G.size()); ++c) {
            const double val = std::abs(reciprocal_derivative_faa(G, step, c, k));
            C = std::max(C, val / denom);
        }
    }
    return C;
}

} // namespace tfwave
