#include "invctl/errors.hpp"
#include "invctl/estimation.hpp"
#include "invctl/noise.hpp"
#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

using namespace invctl;
using Catch::Approx;

namespace {

// Composite Simpson on [0, T] with many panels; independent of the library's
// trapezoid code.
template <class F>
double simpson(F f, double T, int panels = 2000)
{
    const double h = T / panels;
    double s = f(0.0) + f(T);
    for (int k = 1; k < panels; ++k)
        s += f(k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

TimeSeries sampled(double dt, std::size_t n, auto f)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = f(static_cast<double>(i) * dt);
    return TimeSeries(0.0, dt, std::move(v));
}

EstimatorConfig window(std::size_t w, int order = 2)
{
    EstimatorConfig c;
    c.window_samples = w;
    c.integration_order = order;
    return c;
}

} // namespace

TEST_CASE("order two kernels are the least-squares line fit")
{
    for (double T : {0.5, 1.0, 9.0}) {
        const KernelPair k(2, T);
        for (double tau : {0.0, 0.1 * T, 0.5 * T, 0.77 * T, T}) {
            CHECK(k.intercept(tau) == Approx(2.0 * (2.0 * T - 3.0 * tau) / (T * T)));
            CHECK(k.slope(tau) == Approx(6.0 * (2.0 * tau - T) / (T * T * T)).margin(1e-12));
        }
    }
}

TEST_CASE("kernel moments reproduce the affine model for every order")
{
    for (int order : {2, 3, 4, 6}) {
        for (double T : {0.9, 1.0, 4.9}) {
            const KernelPair k = derive_kernel_weights(window(10, order), T);
            INFO("order " << order << " T " << T);
            CHECK(simpson([&](double t) { return k.intercept(t); }, T) == Approx(1.0).epsilon(1e-9));
            CHECK(simpson([&](double t) { return t * k.intercept(t); }, T) == Approx(0.0).margin(1e-9));
            CHECK(simpson([&](double t) { return k.slope(t); }, T) == Approx(0.0).margin(1e-9));
            CHECK(simpson([&](double t) { return t * k.slope(t); }, T) == Approx(1.0).epsilon(1e-9));
            CHECK(simpson([&](double t) { return t * k.annihilator(t); }, T) == Approx(0.0).margin(1e-9));
            CHECK(simpson([&](double t) { return k.annihilator(t); }, T) == Approx(k.annihilator_mass()));
            CHECK(simpson([&](double t) { return k.plain(t); }, T) == Approx(k.plain_mass()));
        }
    }
    CHECK_THROWS_AS(KernelPair(2, 0.0), InvalidArgument);
    CHECK_THROWS_AS(KernelPair(1, 1.0), InvalidArgument);
}

TEST_CASE("continuous kernels on x = 2 + 3 tau over [0, 1]")
{
    const KernelPair k(2, 1.0);
    const double a0 = simpson([&](double t) { return k.intercept(t) * (2.0 + 3.0 * t); }, 1.0);
    const double a1 = simpson([&](double t) { return k.slope(t) * (2.0 + 3.0 * t); }, 1.0);
    CHECK(a0 == Approx(2.0));
    CHECK(a1 == Approx(3.0));
}

TEST_CASE("discrete weights satisfy the affine moment conditions")
{
    for (double dt : {1.0, 0.1, 0.01}) {
        for (std::size_t w : {3u, 10u, 50u}) {
            for (int order : {2, 3}) {
                const TrendEstimator est(window(w, order), dt);
                const auto e = est.end_value_weights();
                const auto s = est.slope_weights();
                REQUIRE(e.size() == w);
                double e0 = 0, e1 = 0, s0 = 0, s1 = 0;
                for (std::size_t i = 0; i < w; ++i) {
                    const double t = static_cast<double>(i) * dt;
                    e0 += e[i];
                    e1 += e[i] * t;
                    s0 += s[i];
                    s1 += s[i] * t;
                }
                CHECK(e0 == Approx(1.0).epsilon(1e-12));
                CHECK(e1 == Approx(est.span()).epsilon(1e-11));
                CHECK(s0 == Approx(0.0).margin(1e-9 / dt));
                CHECK(s1 == Approx(1.0).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("worked examples: constant, affine and quadratic windows")
{
    const EstimatorConfig cfg = window(101);
    SECTION("constant")
    {
        const TrendEstimate e = estimate_trend(sampled(0.01, 101, [](double) { return 5.0; }), 100, cfg);
        CHECK(e.mean_at_end == Approx(5.0));
        CHECK(e.slope == Approx(0.0).margin(1e-10));
        CHECK_FALSE(e.warmup);
    }
    SECTION("affine on [0, 1]")
    {
        const TrendEstimate e = estimate_trend(sampled(0.01, 101, [](double t) { return 2.0 + 3.0 * t; }), 100, cfg);
        CHECK(e.mean_at_end == Approx(5.0).epsilon(1e-9));
        CHECK(e.slope == Approx(3.0).epsilon(1e-9));
        CHECK(e.window_end_time == Approx(1.0));
    }
    SECTION("square on [0, 1]")
    {
        const TrendEstimate e = estimate_trend(sampled(0.01, 101, [](double t) { return t * t; }), 100, cfg);
        CHECK(e.slope == Approx(1.0).margin(1e-3));
        CHECK(e.mean_at_end == Approx(5.0 / 6.0).margin(1e-3));
    }
}

TEST_CASE("property: affine exactness over random lines, steps and windows")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coef(-100.0, 100.0);
    const double dts[] = {1.0, 0.5, 0.1, 0.01};
    const std::size_t ws[] = {3, 5, 10, 37, 50};
    for (int trial = 0; trial < 200; ++trial) {
        const double a0 = coef(rng), a1 = coef(rng) / 10.0;
        const double dt = dts[trial % 4];
        const std::size_t w = ws[trial % 5];
        const TimeSeries x = sampled(dt, w + 20, [&](double t) { return a0 + a1 * t; });
        const std::size_t end = w + 20 - 1 - static_cast<std::size_t>(trial % 20);
        const TrendEstimate e = estimate_trend(x, end, window(w));
        const double t = static_cast<double>(end) * dt;
        REQUIRE(e.mean_at_end == Approx(a0 + a1 * t).epsilon(1e-9).margin(1e-9));
        REQUIRE(e.slope == Approx(a1).epsilon(1e-9).margin(1e-9));
    }
}

TEST_CASE("oracle: smooth signals match the continuous least-squares fit")
{
    const double dt = 0.01;
    for (std::size_t w : {21u, 101u, 401u}) {
        const double span = static_cast<double>(w - 1) * dt;
        const TimeSeries sq = sampled(dt, 1500, [](double t) { return t * t; });
        const TimeSeries sn = sampled(dt, 1500, [](double t) { return std::sin(t); });
        for (std::size_t end = w - 1; end < 1500; end += 113) {
            const double b = static_cast<double>(end) * dt;
            const auto fq = oracle::fit_square(b - span, b);
            const auto fs = oracle::fit_sine(b - span, b);
            const TrendEstimate eq = estimate_trend(sq, end, window(w));
            const TrendEstimate es = estimate_trend(sn, end, window(w));
            CHECK(eq.mean_at_end == Approx(fq.end_value).epsilon(1e-3).margin(1e-3));
            CHECK(eq.slope == Approx(fq.slope).epsilon(1e-3).margin(1e-3));
            CHECK(es.mean_at_end == Approx(fs.end_value).margin(1e-3));
            CHECK(es.slope == Approx(fs.slope).margin(1e-3));
        }
    }
}

TEST_CASE("property: the estimator is linear")
{
    NoiseSource a(NoiseSpec::gaussian(0, 3), 1), b(NoiseSpec::uniform(-5, 5), 2);
    std::vector<double> xv(80), zv(80), mix(80);
    for (std::size_t i = 0; i < 80; ++i) {
        xv[i] = a.next();
        zv[i] = b.next();
        mix[i] = 2.5 * xv[i] - 0.75 * zv[i];
    }
    const TimeSeries x(0, 0.1, xv), z(0, 0.1, zv), m(0, 0.1, mix);
    for (std::size_t end = 9; end < 80; ++end) {
        const auto ex = estimate_trend(x, end, window(10));
        const auto ez = estimate_trend(z, end, window(10));
        const auto em = estimate_trend(m, end, window(10));
        REQUIRE(em.mean_at_end == Approx(2.5 * ex.mean_at_end - 0.75 * ez.mean_at_end).margin(1e-10));
        REQUIRE(em.slope == Approx(2.5 * ex.slope - 0.75 * ez.slope).margin(1e-9));
    }
}

TEST_CASE("warm-up holds the last sample with zero slope")
{
    const TimeSeries x = sampled(1.0, 20, [](double t) { return 1.0 + t; });
    const TrendEstimate e = estimate_trend(x, 3, window(10));
    CHECK(e.warmup);
    CHECK(e.mean_at_end == 4.0);
    CHECK(e.slope == 0.0);
    CHECK_FALSE(estimate_trend(x, 9, window(10)).warmup);
    CHECK_THROWS_AS(estimate_trend(x, 20, window(10)), InvalidArgument);
}

TEST_CASE("config validation")
{
    CHECK_THROWS_AS(window(2).validate(), InvalidArgument);
    CHECK_THROWS_AS(window(10, 1).validate(), InvalidArgument);
    CHECK_THROWS_AS(TrendEstimator(window(10), 0.0), InvalidArgument);
    const TrendEstimator est(window(10), 0.5);
    CHECK_THROWS_AS(est.estimate(TimeSeries(0.0, 1.0, std::vector<double>(20, 1.0)), 15), GridMismatch);
}

TEST_CASE("slope lag locates the slope on quadratics")
{
    // For x = t^2 the slope is a weighted mean of increments dt (2 t + dt),
    // so it equals 2 (end - lag) + dt exactly.
    for (double dt : {1.0, 0.1}) {
        for (std::size_t w : {5u, 10u, 50u}) {
            for (int order : {2, 3}) {
                const TrendEstimator est(window(w, order), dt);
                const TimeSeries x = sampled(dt, w + 5, [](double t) { return t * t; });
                const std::size_t end = w + 4;
                const double t_end = static_cast<double>(end) * dt;
                CHECK(est.estimate(x, end).slope == Approx(2.0 * (t_end - est.slope_lag()) + dt).epsilon(1e-9));
            }
        }
        // Least squares weighs increments symmetrically about the middle.
        const TrendEstimator ls(window(10), dt);
        CHECK(ls.slope_lag() == Approx(0.5 * (ls.span() + dt)));
    }
}

TEST_CASE("decompose: the parts add back up")
{
    NoiseSource n(NoiseSpec::uniform(-1, 1), 11);
    const TimeSeries x = sampled(1.0, 300, [&](double) { return 5.0 + n.next(); });
    const Decomposition d = decompose(x, window(10));
    REQUIRE(d.trend.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        REQUIRE(d.trend[i] + d.fluctuation[i] == x[i]);

    const TimeSeries line = sampled(0.1, 60, [](double t) { return -3.0 + 0.5 * t; });
    const Decomposition dl = decompose(line, window(10));
    for (std::size_t i = 9; i < line.size(); ++i)
        REQUIRE(std::abs(dl.fluctuation[i]) <= 1e-9);

    CHECK_THROWS_AS(decompose(TimeSeries(0, 1, {1, 2, 3}), window(10)), InvalidArgument);
}

TEST_CASE("decompose: noise around a constant is attenuated as the weights predict")
{
    const TrendEstimator est(window(10), 1.0);
    const auto c = est.end_value_weights();
    const double sum_sq = std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
    double sum_abs = 0.0;
    for (double v : c)
        sum_abs += std::abs(v);
    // U(-1, 1) has variance 1/3.
    // About 0.35 for a 10-sample window; the trapezoid ends make it a touch
    // larger than the plain discrete least-squares value.
    const double predicted_std = std::sqrt(sum_sq / 3.0);
    CHECK(predicted_std == Approx(0.35).epsilon(0.02));

    NoiseSource n(NoiseSpec::uniform(-1, 1), 42);
    const TimeSeries x = sampled(1.0, 20000, [&](double) { return 5.0 + n.next(); });
    const Decomposition d = decompose(x, window(10));
    double sq = 0.0, worst = 0.0;
    for (std::size_t i = 9; i < x.size(); ++i) {
        const double e = d.trend[i] - 5.0;
        sq += e * e;
        worst = std::max(worst, std::abs(e));
    }
    const double rms = std::sqrt(sq / static_cast<double>(x.size() - 9));
    CHECK(rms == Approx(predicted_std).epsilon(0.03));
    CHECK(worst <= sum_abs);
}

TEST_CASE("slope noise variance falls like W^-3")
{
    double prev = 0.0;
    for (std::size_t w : {10u, 20u, 40u}) {
        const TrendEstimator est(window(w), 1.0);
        NoiseSource n(NoiseSpec::gaussian(0, 1), 5);
        std::vector<double> v(40000);
        for (double& x : v)
            x = n.next();
        const TimeSeries x(0.0, 1.0, v);
        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t end = w - 1; end < v.size(); end += w) {
            const double s = est.estimate(x, end).slope;
            sq += s * s;
            ++count;
        }
        const double var = sq / static_cast<double>(count);
        const auto s = est.slope_weights();
        CHECK(var == Approx(std::inner_product(s.begin(), s.end(), s.begin(), 0.0)).epsilon(0.1));
        if (prev > 0.0)
            CHECK(prev / var == Approx(8.0).epsilon(0.25));
        prev = var;
    }
}
