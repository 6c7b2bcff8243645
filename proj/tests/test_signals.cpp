#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tfwave/signals.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace tfwave;

namespace {

SampledSignal unit_gaussian(const GridSpec& g) {
    return SampledSignal::from_function(g, [](double t) { return std::exp(-0.5 * t * t); });
}

} // namespace

TEST_CASE("fourier of the unit gaussian") {
    GridSpec g{40.0, 4096};
    const SampledSignal fh = fourier(unit_gaussian(g));
    for (int k = 0; k < fh.size(); ++k) {
        const double xi = fh.grid().t(k);
        if (std::abs(xi) > 5.0) continue;
        const double want = std::sqrt(2.0 * M_PI) * std::exp(-0.5 * xi * xi);
        CHECK(std::abs(fh[k].real() - want) <= 1e-10 * want);
        CHECK(std::abs(fh[k].imag()) <= 1e-10);
    }
}

TEST_CASE("fourier symmetry and inversion") {
    GridSpec g{20.0, 1024};
    const SampledSignal f = SampledSignal::from_function(
        g, [](double t) { return std::exp(-0.3 * t * t) * std::cos(2.0 * t); });  // even real
    const SampledSignal fh = fourier(f);
    for (int k = 0; k < fh.size(); ++k) CHECK(std::abs(fh[k].imag()) < 1e-12);

    const SampledSignal back = inverse_fourier(fh);
    REQUIRE(back.grid() == g);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.N; ++j) {
        num += std::norm(back[j] - f[j]);
        den += std::norm(f[j]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("inner products") {
    GridSpec g{30.0, 2048};
    const SampledSignal f = unit_gaussian(g);
    CHECK(inner(f, f).real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

    const SampledSignal h0 = SampledSignal::from_function(
        g, [](double t) { return hermite_poly(0, t) * std::exp(-0.5 * t * t); });
    const SampledSignal h1 = SampledSignal::from_function(
        g, [](double t) { return hermite_poly(1, t) * std::exp(-0.5 * t * t); });
    CHECK(std::abs(inner(h0, h1)) < 1e-12);

    const SampledSignal p = SampledSignal::from_function(
        g, [](double t) { return cplx(std::exp(-t * t), std::exp(-2.0 * t * t)); });
    CHECK(inner(f, p) == std::conj(inner(p, f)));

    GridSpec g2{30.0, 1024};
    CHECK_THROWS_AS(inner(f, unit_gaussian(g2)), ShapeError);
}

TEST_CASE("generate: gaussian quadrature oracle and closed forms") {
    GridSpec g{20.0, 1024};
    const CoefficientOracle o = generate(parse_family("gauss:1"), g, Window::gaussian(1.0));
    CHECK(o.kind() == CoefficientOracle::Kind::Quadrature);
    CHECK(norm_sq(o.signal()) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

    const CoefficientOracle d = generate(parse_family("delta"), g, Window::gaussian(1.0));
    CHECK(d.kind() == CoefficientOracle::Kind::ClosedForm);
    // V delta (x, xi) = conj(w(-x)), xi-independent
    CHECK(d.stft(0.0, 17.3) == cplx(1.0, 0.0));
    CHECK(std::abs(d.stft(1.2, -3.0)) == doctest::Approx(std::exp(-0.72)).epsilon(1e-12));
    CHECK(d.stft(1.2, 5.0) == d.stft(1.2, -11.0));

    const CoefficientOracle c = generate(parse_family("const"), g, Window::gaussian(1.0));
    // |V 1 (x, xi)| = sqrt(2 pi) e^{-xi^2/2}, checked against quadrature on a
    // wide grid at 20 points
    GridSpec wide{60.0, 8192};
    const SampledSignal one = SampledSignal::from_function(wide, [](double) { return 1.0; });
    const CoefficientOracle cq = CoefficientOracle::quadrature(one, Window::gaussian(1.0));
    for (int i = 0; i < 20; ++i) {
        const double x = -8.0 + i * 0.8;
        const double xi = -2.5 + 0.25 * i;
        const cplx closed = c.stft(x, xi);
        CHECK(std::abs(closed) ==
              doctest::Approx(std::sqrt(2.0 * M_PI) * std::exp(-0.5 * xi * xi)).epsilon(1e-10));
        CHECK(std::abs(closed - cq.stft(x, xi)) <= 1e-8 * std::max(1.0, std::abs(closed)));
    }
}

TEST_CASE("stft values") {
    GridSpec g{40.0, 4096};
    const CoefficientOracle o = generate(parse_family("gauss:1"), g, Window::gaussian(1.0));
    CHECK(o.stft(0.0, 0.0).real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    CHECK_THROWS_AS(o.stft(35.0, 0.0), RangeError);
    CHECK_THROWS_AS(o.stft(std::nan(""), 0.0), std::domain_error);
}

TEST_CASE("chirp: closed form matches quadrature at 100 random points") {
    GridSpec g{40.0, 4096};
    const CoefficientOracle oq = generate(parse_family("chirp:1"), g, Window::gaussian(1.0));
    const CoefficientOracle oc =
        CoefficientOracle::closed_form(parse_family("chirp:1"), Window::gaussian(1.0));
    DetRng rng(20240811);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(-15.0, 15.0);
        const double xi = x + rng.uniform(-6.0, 6.0);  // near the ridge, values O(1)
        const cplx a = oq.stft(x, xi);
        const cplx b = oc.stft(x, xi);
        CHECK(std::abs(a - b) <= 1e-7 * std::abs(b));
    }
    // |V|^2 = (2 pi / sqrt 2) e^{-(xi - x)^2 / 2} for c = 1
    const cplx v = oc.stft(1.3, 2.1);
    const double want = (2.0 * M_PI / std::sqrt(2.0)) * std::exp(-0.5 * 0.8 * 0.8);
    CHECK(std::norm(v) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("stft covariance under phase-space shifts") {
    GridSpec g{40.0, 4096};
    const double y = 1.5, eta = 2.0;
    const SampledSignal f = unit_gaussian(g);
    const SampledSignal shifted = SampledSignal::from_function(g, [&](double t) {
        return std::polar(1.0, eta * t) * std::exp(-0.5 * (t - y) * (t - y));
    });
    const CoefficientOracle of = CoefficientOracle::quadrature(f, Window::gaussian(1.0));
    const CoefficientOracle os = CoefficientOracle::quadrature(shifted, Window::gaussian(1.0));
    for (int i = 0; i < 25; ++i) {
        const double x = -4.0 + 0.3 * i, xi = -3.0 + 0.25 * i;
        CHECK(std::abs(os.stft(x, xi)) ==
              doctest::Approx(std::abs(of.stft(x - y, xi - eta))).epsilon(1e-9));
    }
}

TEST_CASE("moyal identity anchors the convention constant") {
    GridSpec g{24.0, 2048};
    const SampledSignal f = unit_gaussian(g);
    const CoefficientOracle o = CoefficientOracle::quadrature(f, Window::gaussian(1.0));
    const int n = 97;
    const double L = 12.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double x = -L + 2.0 * L * i / (n - 1);
            const double xi = -L + 2.0 * L * k / (n - 1);
            const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            const double wk = (k == 0 || k == n - 1) ? 0.5 : 1.0;
            total += wx * wk * std::norm(o.stft(x, xi));
        }
    }
    total *= std::pow(2.0 * L / (n - 1), 2);
    const double want = 2.0 * M_PI * norm_sq(f) * norm_sq(Window::gaussian(1.0).sample(g));
    CHECK(total == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("hermite closed form vs quadrature") {
    GridSpec g{40.0, 4096};
    const CoefficientOracle oq = generate(parse_family("hermite:3"), g, Window::gaussian(1.0));
    const CoefficientOracle oc =
        CoefficientOracle::closed_form(parse_family("hermite:3"), Window::gaussian(1.0));
    for (int i = 0; i < 30; ++i) {
        const double x = -4.0 + 0.27 * i, xi = 3.0 - 0.2 * i;
        const cplx a = oq.stft(x, xi), b = oc.stft(x, xi);
        CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)));
    }
}

TEST_CASE("seminorm r: gaussian decays, truncated constant does not") {
    GridSpec g{24.0, 2048};
    const WeightFunction w = WeightFunction::log_weight();
    PhaseGrid pg;
    pg.x_max = 12.0;
    pg.nx = 49;
    pg.xi_max = 12.0;
    pg.nxi = 49;
    const SampledSignal f = unit_gaussian(g);
    const double r0 = seminorm_r(f, Window::gaussian(1.0), 0.0, w, pg);
    CHECK(r0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-6));
    const double r1 = seminorm_r(f, Window::gaussian(1.0), 1.0, w, pg);
    CHECK(std::isfinite(r1));
    CHECK(r1 >= r0);

    const SampledSignal one = SampledSignal::from_function(g, [](double) { return 1.0; });
    CHECK(std::isinf(seminorm_r(one, Window::gaussian(1.0), 3.0, w, pg)));
}

TEST_CASE("pairings against sampled functions") {
    GridSpec g{20.0, 1024};
    const CoefficientOracle d = generate(parse_family("delta"), g, Window::gaussian(1.0));
    const SampledSignal psi = SampledSignal::from_function(
        g, [](double t) { return cplx(std::exp(-t * t), 0.3 * std::exp(-2.0 * t * t)); });
    CHECK(d.pair_sampled(psi) == std::conj(psi[g.N / 2]));

    const CoefficientOracle c = generate(parse_family("const"), g, Window::gaussian(1.0));
    // <1, gaussian> = conj(int e^{-t^2}) = sqrt(pi)
    const SampledSignal gau = SampledSignal::from_function(
        g, [](double t) { return std::exp(-t * t); });
    CHECK(c.pair_sampled(gau).real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("csv signal ingestion") {
    GridSpec g{10.0, 128};
    const SampledSignal f = SampledSignal::from_function(
        g, [](double t) { return cplx(std::exp(-t * t), 0.25 * t * std::exp(-t * t)); });
    const std::string path = "signals_tmp.csv";
    {
        std::ofstream out(path);
        out << "t,re,im\n";
        char buf[96];
        for (int j = 0; j < g.N; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.t(j), f[j].real(),
                          f[j].imag());
            out << buf;
        }
    }
    const SampledSignal back = load_signal_csv(path);
    REQUIRE(back.grid() == g);
    for (int j = 0; j < g.N; ++j) CHECK(back[j] == f[j]);
    std::remove(path.c_str());

    {
        std::ofstream out(path);
        out << "t,re,im\n0,1,0\n0.5,1,0\n1.7,1,0\n";
    }
    CHECK_THROWS_AS(load_signal_csv(path), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(validate_grid(GridSpec{10.0, 100}), ConfigError);   // not a power of two
    CHECK_THROWS_AS(validate_grid(GridSpec{10.0, 32}), ConfigError);    // too small
    CHECK_THROWS_AS(validate_grid(GridSpec{-1.0, 128}), ConfigError);
    CHECK_THROWS_AS(SampledSignal(GridSpec{10.0, 128}, std::vector<cplx>(64)), ShapeError);
}
