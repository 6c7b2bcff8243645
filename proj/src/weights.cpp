#include "tfwave/weights.hpp"

#include "tfwave/common.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tfwave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

WeightFunction WeightFunction::log_weight() {
    WeightFunction w;
    w.kind_ = WeightKind::Log;
    return w;
}

WeightFunction WeightFunction::gevrey(double s) {
    if (!(s >= 1.0) || !std::isfinite(s))
        throw ConfigError("gevrey order must be finite and >= 1, got " + std::to_string(s));
    WeightFunction w;
    w.kind_ = WeightKind::Gevrey;
    w.gevrey_s_ = s;
    return w;
}

WeightFunction WeightFunction::custom(std::vector<double> t, std::vector<double> omega) {
    if (t.size() != omega.size() || t.size() < 2)
        throw ConfigError("custom weight needs >= 2 (t, omega) pairs of equal length");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(omega[i]) || omega[i] < 0.0)
            throw ConfigError("custom weight table has non-finite or negative entries");
        if (i > 0 && t[i] <= t[i - 1])
            throw ConfigError("custom weight table t-column must be strictly increasing");
    }
    if (t.front() > 1e-12)
        throw ConfigError("custom weight table must start at t = 0");
    WeightFunction w;
    w.kind_ = WeightKind::Custom;
    w.tab_t_ = std::move(t);
    w.tab_w_ = std::move(omega);
    return w;
}

double WeightFunction::omega_unchecked(double t) const {
    switch (kind_) {
    case WeightKind::Log:
        return std::log1p(t);
    case WeightKind::Gevrey:
        return std::pow(t, 1.0 / gevrey_s_);
    case WeightKind::Custom: {
        if (t <= tab_t_.front()) return tab_w_.front();
        const auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
        std::size_t hi = static_cast<std::size_t>(it - tab_t_.begin());
        if (hi >= tab_t_.size()) hi = tab_t_.size() - 1;  // extrapolate on the last segment
        const std::size_t lo = hi - 1;
        const double slope = (tab_w_[hi] - tab_w_[lo]) / (tab_t_[hi] - tab_t_[lo]);
        return std::max(0.0, tab_w_[lo] + slope * (t - tab_t_[lo]));
    }
    }
    return 0.0;
}

double WeightFunction::omega(double t) const {
    if (!std::isfinite(t) || t < 0.0)
        throw std::domain_error("omega: argument must be finite and >= 0");
    return omega_unchecked(t);
}

double WeightFunction::omega2(double x, double xi) const {
    return omega_unchecked(std::hypot(x, xi));
}

double WeightFunction::search_cap() const {
    switch (kind_) {
    case WeightKind::Log:
        return 700.0;  // e^t overflows past this; phi is affine there anyway
    case WeightKind::Gevrey:
        return 700.0 * gevrey_s_;
    case WeightKind::Custom:
        return std::log(tab_t_.back());
    }
    return 700.0;
}

double WeightFunction::young_conjugate(double s) const {
    if (!std::isfinite(s) || s < 0.0)
        throw std::domain_error("young_conjugate: argument must be finite and >= 0");

    if (kind_ == WeightKind::Gevrey) {
        // phi(t) = e^{t/s0}; interior maximizer t* = s0 log(s0 s) when s0 s >= 1.
        const double s0 = gevrey_s_;
        if (s0 * s >= 1.0) return s0 * s * std::log(s0 * s) - s0 * s;
        return -1.0;  // attained at t = 0, value -phi(0) = -e^0
    }

    const auto objective = [&](double t) { return s * t - phi(t); };

    // Bracket the maximum: double t_hi until the forward difference turns
    // negative. A still-positive slope at the cap means the supremum is not
    // attained below it; report +inf unless the slope has already flattened
    // out (bounded-from-above case, e.g. log weight at s = 1).
    const double cap = search_cap();
    const double d = 1e-6;
    double t_hi = 1.0;
    while (t_hi < cap && objective(t_hi + d) - objective(t_hi) > 0.0) t_hi *= 2.0;
    if (t_hi >= cap) {
        t_hi = cap;
        const double slope = (objective(t_hi) - objective(t_hi - d)) / d;
        if (slope > 1e-10) return kInf;
        return objective(t_hi);
    }

    // Golden-section on the concave objective (phi convex => unimodal).
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = t_hi;
    double c = b - invphi * (b - a);
    double e = a + invphi * (b - a);
    double fc = objective(c), fe = objective(e);
    int it = 0;
    const int max_it = 400;
    while (b - a > 1e-12 && it++ < max_it) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + invphi * (b - a);
            fe = objective(e);
        }
    }
    if (it >= max_it)
        throw NumericError("young_conjugate: golden-section search did not converge");
    return objective(0.5 * (a + b));
}

std::string WeightFunction::spec_string() const {
    switch (kind_) {
    case WeightKind::Log:
        return "log";
    case WeightKind::Gevrey: {
        std::ostringstream os;
        os << "gevrey:" << gevrey_s_;
        return os.str();
    }
    case WeightKind::Custom:
        return "custom";
    }
    return "log";
}

ConditionReport check_weight_conditions(const WeightFunction& w, const WeightGrid& grid) {
    if (grid.points < 100) throw ConfigError("weight condition grid needs >= 100 points");
    ConditionReport rep;

    // (alpha) subadditivity on sampled pairs, pairs drawn from a log-spaced set.
    {
        const int np = 48;
        std::vector<double> pts(np);
        for (int i = 0; i < np; ++i)
            pts[static_cast<std::size_t>(i)] =
                (grid.t_max / 2.0) * std::pow(static_cast<double>(i) / (np - 1), 2.0);
        rep.subadditive_ok = true;
        for (double t1 : pts)
            for (double t2 : pts)
                if (w.omega(t1 + t2) > w.omega(t1) + w.omega(t2) + 1e-12) {
                    rep.subadditive_ok = false;
                    break;
                }
    }

    // (delta) convexity of phi via second divided differences.
    {
        rep.convex_ok = true;
        const int n = std::max(grid.points, 100);
        const double lo = 0.0, hi = std::log(std::max(4.0, grid.t_max));
        const double h = (hi - lo) / (n - 1);
        double f0 = w.phi(lo), f1 = w.phi(lo + h);
        for (int i = 2; i < n; ++i) {
            const double f2 = w.phi(lo + i * h);
            if (f2 - 2.0 * f1 + f0 < -1e-10 * std::max(1.0, std::abs(f1))) {
                rep.convex_ok = false;
                break;
            }
            f0 = f1;
            f1 = f2;
        }
    }

    // (gamma) fit omega(t) >= a + b log(1+t): a = omega(0), b = worst grid ratio.
    {
        rep.gamma_a = w.omega(0.0);
        double b = std::numeric_limits<double>::max();
        const int n = grid.points;
        for (int i = 1; i <= n; ++i) {
            const double t = grid.t_max * std::pow(static_cast<double>(i) / n, 3.0);
            if (t <= 0.0) continue;
            b = std::min(b, (w.omega(t) - rep.gamma_a) / std::log1p(t));
        }
        rep.gamma_b = b;
        rep.gamma_ok = b > 1e-12;
    }

    // (beta) integral of omega/t^2 over [1, R] for doubling R; geometric
    // increment decay drives a Richardson-style tail estimate.
    {
        const auto segment = [&](double lo, double hi) {
            const int n = 256;
            const double h = (hi - lo) / n;
            double acc = 0.5 * (w.omega(lo) / (lo * lo) + w.omega(hi) / (hi * hi));
            for (int i = 1; i < n; ++i) {
                const double t = lo + i * h;
                acc += w.omega(t) / (t * t);
            }
            return acc * h;
        };
        double R = 1.0;
        double total = 0.0;
        std::vector<double> increments;
        const int doublings = std::max(6, static_cast<int>(std::log2(grid.t_max)) - 1);
        for (int k = 0; k < doublings; ++k) {
            const double inc = segment(R, 2.0 * R);
            increments.push_back(inc);
            total += inc;
            R *= 2.0;
        }
        const std::size_t m = increments.size();
        const double ratio =
            increments[m - 2] > 0.0 ? increments[m - 1] / increments[m - 2] : 0.0;
        rep.beta_converging = ratio < 0.9;
        rep.integral_beta_estimate =
            rep.beta_converging ? total + increments[m - 1] * ratio / (1.0 - ratio) : total;
    }

    return rep;
}

WeightFunction parse_weight(const std::string& spec) {
    if (spec == "log") return WeightFunction::log_weight();
    if (spec.rfind("gevrey:", 0) == 0) {
        const std::string arg = spec.substr(7);
        try {
            return WeightFunction::gevrey(std::stod(arg));
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad gevrey order '" + arg + "'");
        }
    }
    if (spec.rfind("custom:", 0) == 0) {
        const std::string path = spec.substr(7);
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open weight table '" + path + "'");
        std::string line;
        std::vector<double> ts, ws;
        bool header_seen = false;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (!header_seen) {
                header_seen = true;
                if (line.find("t") != std::string::npos && line.find("omega") != std::string::npos)
                    continue;  // header row
            }
            std::istringstream ls(line);
            std::string a, b;
            if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 't,omega'");
            try {
                ts.push_back(std::stod(a));
                ws.push_back(std::stod(b));
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number");
            }
        }
        return WeightFunction::custom(std::move(ts), std::move(ws));
    }
    throw ConfigError("unknown weight spec '" + spec + "' (expected log, gevrey:<s>, custom:<csv>)");
}

} // namespace tfwave
