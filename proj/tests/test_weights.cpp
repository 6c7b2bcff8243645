#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tfwave/weights.hpp"

#include "tfwave/common.hpp"

#include <cmath>
#include <fstream>

using namespace tfwave;

namespace {

// independent golden-section maximizer for s t - phi(t), used as the oracle
// against the closed forms (coarse grid scan + refinement)
double young_oracle(const WeightFunction& w, double s, double t_hi) {
    double best = -w.phi(0.0), best_t = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
        const double t = t_hi * i / n;
        const double v = s * t - w.phi(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    // local refinement
    double lo = std::max(0.0, best_t - t_hi / n), hi = best_t + t_hi / n;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (s * m1 - w.phi(m1) < s * m2 - w.phi(m2))
            lo = m1;
        else
            hi = m2;
    }
    const double t = 0.5 * (lo + hi);
    return s * t - w.phi(t);
}

WeightFunction linear_weight(double t_max = 1e7) {
    std::vector<double> ts, ws;
    for (int i = 0; i <= 200; ++i) {
        const double t = t_max * i / 200.0;
        ts.push_back(t);
        ws.push_back(t);
    }
    return WeightFunction::custom(std::move(ts), std::move(ws));
}

} // namespace

TEST_CASE("omega evaluation closed forms") {
    const WeightFunction lg = WeightFunction::log_weight();
    CHECK(lg.omega(0.0) == 0.0);
    CHECK(lg.omega(std::exp(1.0) - 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const WeightFunction gv = WeightFunction::gevrey(2.0);
    CHECK(gv.omega(4.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(lg.omega(-1.0), std::domain_error);
    CHECK_THROWS_AS(lg.omega(std::nan("")), std::domain_error);
}

TEST_CASE("young conjugate closed forms and oracle") {
    const WeightFunction g1 = WeightFunction::gevrey(1.0);
    CHECK(g1.young_conjugate(0.0) == doctest::Approx(-1.0).epsilon(1e-14));
    // s0 y log(s0 y) - s0 y at y = e: e * 1 - e = 0
    CHECK(g1.young_conjugate(std::exp(1.0)) == doctest::Approx(0.0).epsilon(1e-12));

    // Gevrey closed form vs the numeric maximizer at 50 sampled s
    const WeightFunction g2 = WeightFunction::gevrey(2.0);
    for (int i = 1; i <= 50; ++i) {
        const double s = 0.1 * i;
        const double closed = g2.young_conjugate(s);
        const double numeric = young_oracle(g2, s, 2.0 * (std::log1p(2.0 * s) + 4.0));
        CHECK(closed == doctest::Approx(numeric).epsilon(1e-8));
    }
}

TEST_CASE("young conjugate for the log weight") {
    const WeightFunction lg = WeightFunction::log_weight();
    // closed form (test-side oracle): phi(t) = log(1+e^t);
    // phi*(s) = -log 2 for s < 1/2, s log s + (1-s) log(1-s) on [1/2, 1),
    // 0 at s = 1 (limit), +inf beyond.
    CHECK(lg.young_conjugate(0.25) == doctest::Approx(-std::log(2.0)).epsilon(1e-10));
    const double s = 0.8;
    const double want = s * std::log(s) + (1.0 - s) * std::log(1.0 - s);
    CHECK(lg.young_conjugate(s) == doctest::Approx(want).epsilon(1e-9));
    CHECK(std::abs(lg.young_conjugate(1.0)) < 1e-8);
    CHECK(std::isinf(lg.young_conjugate(2.0)));  // objective keeps climbing
}

TEST_CASE("young conjugate monotone and Fenchel inequality") {
    for (const WeightFunction& w :
         {WeightFunction::log_weight(), WeightFunction::gevrey(2.0), WeightFunction::gevrey(1.5)}) {
        double prev = w.young_conjugate(0.0);
        for (int i = 1; i <= 30; ++i) {
            const double s = 0.05 * i;
            const double cur = w.young_conjugate(s);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
            for (int j = 0; j <= 10; ++j) {
                const double t = 0.6 * j;
                if (!std::isfinite(cur)) continue;
                CHECK(s * t <= w.phi(t) + cur + 1e-9);
            }
        }
    }
}

TEST_CASE("weight conditions: log and gevrey pass, linear fails beta") {
    const WeightGrid grid{1e6, 200};
    const ConditionReport a = check_weight_conditions(WeightFunction::log_weight(), grid);
    CHECK(a.subadditive_ok);
    CHECK(a.convex_ok);
    CHECK(a.gamma_ok);
    CHECK(a.beta_converging);
    CHECK(std::isfinite(a.integral_beta_estimate));
    // int_1^inf log(1+t)/t^2 dt = log(4) (by parts): the estimate should land close
    CHECK(a.integral_beta_estimate == doctest::Approx(std::log(4.0)).epsilon(0.05));

    const ConditionReport b = check_weight_conditions(WeightFunction::gevrey(2.0), grid);
    CHECK(b.subadditive_ok);
    CHECK(b.convex_ok);
    CHECK(b.gamma_ok);
    CHECK(b.beta_converging);

    const ConditionReport c = check_weight_conditions(linear_weight(), grid);
    CHECK(c.subadditive_ok);
    CHECK_FALSE(c.beta_converging);  // int 1/t diverges
    CHECK(c.gamma_b > 0.0);
}

TEST_CASE("subadditivity property on sampled pairs") {
    for (const WeightFunction& w :
         {WeightFunction::log_weight(), WeightFunction::gevrey(2.0), linear_weight()}) {
        for (int i = 0; i <= 40; ++i) {
            for (int j = 0; j <= 40; ++j) {
                const double t1 = std::pow(1.35, i) - 1.0;
                const double t2 = std::pow(1.35, j) - 1.0;
                CHECK(w.omega(t1 + t2) <= w.omega(t1) + w.omega(t2) + 1e-12);
            }
        }
    }
}

TEST_CASE("weight spec parsing") {
    CHECK(parse_weight("log").kind() == WeightKind::Log);
    CHECK(parse_weight("gevrey:2").gevrey_order() == 2.0);
    CHECK_THROWS_AS(parse_weight("gevrey:0.5"), ConfigError);
    CHECK_THROWS_AS(parse_weight("poly"), ConfigError);

    const std::string path = "weights_tmp_table.csv";
    {
        std::ofstream out(path);
        out << "t,omega\n";
        for (int i = 0; i <= 100; ++i) out << i * 10.0 << "," << std::sqrt(i * 10.0) << "\n";
    }
    const WeightFunction w = parse_weight("custom:" + path);
    CHECK(w.omega(40.0) == doctest::Approx(std::sqrt(40.0)).epsilon(1e-2));
    std::remove(path.c_str());
}
