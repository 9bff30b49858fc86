#include <doctest.h>

#include <cmath>
#include <random>

#include "logconc/errors.hpp"
#include "logconc/gauss.hpp"
#include "logconc/grid_measure.hpp"
#include "logconc/metrics.hpp"

using namespace logconc;

namespace {
GridMeasure std_gaussian(std::size_t n = 4096) {
    return realize(MeasureSpec::gaussian_spec(0.0, 1.0, n));
}
}  // namespace

TEST_CASE("realize gaussian anchors") {
    const GridMeasure m = std_gaussian();
    validate(m);
    CHECK(m.is_log_concave);
    CHECK(grid_mean(m) == doctest::Approx(0.0).epsilon(0.0).scale(1.0));
    CHECK(std::fabs(grid_mean(m)) < 1e-8);
    CHECK(std::fabs(grid_variance(m) - 1.0) < 1e-6);
    // the mean sits on a node so the mode is represented exactly
    DensityModel model(m);
    CHECK(std::fabs(model.quantile(0.5)) < 1e-12);
}

TEST_CASE("realize exponential anchors") {
    const GridMeasure m = realize(MeasureSpec::exponential_spec(1.0, 4096));
    validate(m);
    CHECK(m.is_log_concave);
    // int x^2 (1/2) e^{-|x|} dx = 2 by the closed-form integral
    CHECK(std::fabs(grid_variance(m) - 2.0) < 1e-4);
    CHECK(std::fabs(grid_mean(m)) < 1e-10);
}

TEST_CASE("realize uniform anchors") {
    const GridMeasure m = realize(MeasureSpec::uniform_spec(-1.0, 1.0, 4096));
    validate(m);
    CHECK(std::fabs(grid_variance(m) - 1.0 / 3.0) < 1e-6);
    CHECK(m.xmin() == doctest::Approx(-1.0));
    CHECK(m.xmax() == doctest::Approx(1.0));
}

TEST_CASE("realize rejects bad parameters") {
    CHECK_THROWS_AS(realize(MeasureSpec::gaussian_spec(0.0, -1.0)), InvalidParameter);
    CHECK_THROWS_AS(realize(MeasureSpec::exponential_spec(0.0)), InvalidParameter);
    CHECK_THROWS_AS(realize(MeasureSpec::uniform_spec(2.0, 1.0)), InvalidParameter);
    MeasureSpec tiny = MeasureSpec::gaussian_spec(0.0, 1.0, 32);
    CHECK_THROWS_AS(realize(tiny), InvalidParameter);
}

TEST_CASE("mixture may be non-log-concave, flag tracks the shape") {
    const GridMeasure bimodal =
        realize(MeasureSpec::mixture_spec({0.5, 0.5}, {-3.0, 3.0}, {0.6, 0.6}, 2048));
    validate(bimodal);
    CHECK_FALSE(bimodal.is_log_concave);
    const GridMeasure single =
        realize(MeasureSpec::mixture_spec({0.4, 0.6}, {0.0, 0.0}, {1.0, 1.0}, 2048));
    CHECK(single.is_log_concave);
}

TEST_CASE("radial n=1 with even potential equals the half-line restriction") {
    std::vector<double> r, v;
    for (int k = 0; k <= 800; ++k) {
        const double rr = 8.0 * k / 800.0;
        r.push_back(rr);
        v.push_back(0.5 * rr * rr);
    }
    const GridMeasure rad = realize(MeasureSpec::radial_spec(1, r, v, 2048));
    validate(rad);
    const GridMeasure half = truncate(std_gaussian(2048), 0.0, kPosInf);
    CHECK(tv(rad, half) < 2e-3);
}

TEST_CASE("radial n=3 is a chi-like law") {
    std::vector<double> r, v;
    for (int k = 0; k <= 2000; ++k) {
        const double rr = 10.0 * k / 2000.0;
        r.push_back(rr);
        v.push_back(0.5 * rr * rr);
    }
    const GridMeasure m = realize(MeasureSpec::radial_spec(3, r, v, 2048));
    validate(m);
    CHECK(m.is_log_concave);
    // chi(3): mean = 2 sqrt(2/pi), variance = 3 - mean^2
    const double mean = 2.0 * std::sqrt(2.0 / 3.141592653589793);
    CHECK(std::fabs(grid_mean(m) - mean) < 2e-3);
    CHECK(std::fabs(grid_variance(m) - (3.0 - mean * mean)) < 2e-3);
}

TEST_CASE("apply_affine") {
    const GridMeasure g = std_gaussian(2048);
    SUBCASE("scaling lands on the wider gaussian") {
        const GridMeasure scaled = apply_affine(g, {2.0, 0.0});
        const GridMeasure target = realize(MeasureSpec::gaussian_spec(0.0, 2.0, 2048));
        CHECK(tv(scaled, target) < 1e-6);
    }
    SUBCASE("identity map returns an identical measure") {
        const GridMeasure same = apply_affine(g, {1.0, 0.0});
        CHECK(same.x0 == g.x0);
        CHECK(same.log_density == g.log_density);
    }
    SUBCASE("translation moves the mean") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        const GridMeasure shifted = apply_affine(e, {1.0, 3.0});
        CHECK(std::fabs(grid_mean(shifted) - 3.0) < 1e-6);
    }
    SUBCASE("negative scale reverses and preserves mass") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        const GridMeasure neg = apply_affine(e, {-1.5, 0.3});
        validate(neg);
        CHECK(std::fabs(grid_mean(neg) - 0.3) < 1e-6);
        CHECK(std::fabs(grid_variance(neg) - 1.5 * 1.5 * 2.0) < 1e-3);
    }
    SUBCASE("zero scale rejected") {
        CHECK_THROWS_AS(apply_affine(g, {0.0, 1.0}), InvalidParameter);
    }
    SUBCASE("variance covariance") {
        const GridMeasure m = realize(MeasureSpec::uniform_spec(0.0, 2.0, 2048));
        const GridMeasure t = apply_affine(m, {3.0, -1.0});
        CHECK(grid_variance(t) ==
              doctest::Approx(9.0 * grid_variance(m)).epsilon(1e-6));
    }
}

TEST_CASE("truncate") {
    SUBCASE("full-support restriction is the identity") {
        const GridMeasure g = std_gaussian(2048);
        const GridMeasure t = truncate(g, -kPosInf, kPosInf);
        CHECK(t.log_density == g.log_density);
    }
    SUBCASE("nested uniform") {
        const GridMeasure u = realize(MeasureSpec::uniform_spec(-1.0, 1.0, 2048));
        const GridMeasure t = truncate(u, -0.5, 0.5);
        const GridMeasure target = realize(MeasureSpec::uniform_spec(-0.5, 0.5, 2048));
        CHECK(tv(t, target) < 1e-8);
    }
    SUBCASE("truncated exponential mass and variance") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 4096));
        DensityModel model(e);
        const double mass = model.mass_between(-3.0, 3.0) / model.total_mass();
        CHECK(std::fabs(mass - (1.0 - std::exp(-3.0))) < 1e-9);
        const GridMeasure t = truncate(e, -3.0, 3.0);
        validate(t);
        CHECK(t.is_log_concave);
        CHECK(grid_variance(t) < 2.0);
    }
    SUBCASE("recenter") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        const GridMeasure t = truncate(e, 0.0, 5.0, true);
        CHECK(std::fabs(grid_mean(t)) < 1e-9);
    }
    SUBCASE("empty restriction") {
        const GridMeasure u = realize(MeasureSpec::uniform_spec(0.0, 1.0, 2048));
        CHECK_THROWS_AS(truncate(u, 5.0, 6.0), EmptyRestriction);
        CHECK_THROWS_AS(truncate(u, 0.7, 0.2), InvalidParameter);
    }
}

TEST_CASE("convolve_gaussian") {
    SUBCASE("gaussian + gaussian") {
        const GridMeasure g = std_gaussian(2048);
        const GridMeasure c = convolve_gaussian(g, 1.0);
        const GridMeasure target =
            realize(MeasureSpec::gaussian_spec(0.0, std::sqrt(2.0), 2048));
        CHECK(tv(c, target) < 1e-5);
    }
    SUBCASE("beta = 0 is the identity") {
        const GridMeasure g = std_gaussian(1024);
        const GridMeasure c = convolve_gaussian(g, 0.0);
        CHECK(c.log_density == g.log_density);
    }
    SUBCASE("variance additivity on the uniform") {
        const GridMeasure u = realize(MeasureSpec::uniform_spec(-1.0, 1.0, 2048));
        const GridMeasure c = convolve_gaussian(u, 0.5);
        validate(c);
        CHECK(c.is_log_concave);
        CHECK(std::fabs(grid_variance(c) - (1.0 / 3.0 + 0.25)) < 1e-4);
        CHECK(std::fabs(grid_mean(c)) < 1e-6);
    }
    SUBCASE("log-concavity verified numerically after smoothing a kink") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        const GridMeasure c = convolve_gaussian(e, 0.3);
        CHECK(log_concavity_holds(c));
    }
    SUBCASE("negative width rejected") {
        CHECK_THROWS_AS(convolve_gaussian(std_gaussian(1024), -0.1), InvalidParameter);
    }
}

TEST_CASE("scale_mix") {
    SUBCASE("gaussian fixed point") {
        const GridMeasure g = std_gaussian(2048);
        const GridMeasure m = scale_mix(g, 0.5);
        CHECK(tv(m, g) < 1e-5);
    }
    SUBCASE("lambda = 1 identity") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 1024));
        const GridMeasure m = scale_mix(e, 1.0);
        CHECK(m.log_density == e.log_density);
    }
    SUBCASE("variance interpolation on the exponential") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        const GridMeasure m = scale_mix(e, 0.5);
        CHECK(std::fabs(grid_variance(m) - 1.5) < 1e-3);
    }
    SUBCASE("domain check") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 1024));
        CHECK_THROWS_AS(scale_mix(e, 0.0), InvalidParameter);
        CHECK_THROWS_AS(scale_mix(e, 1.5), InvalidParameter);
    }
}

TEST_CASE("transforms preserve normalization and the concavity flag") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        GridMeasure m = realize(MeasureSpec::gaussian_spec(-1.0 + 2.0 * unif(rng),
                                                           0.5 + unif(rng), 1024));
        m = convolve_gaussian(m, 0.2 + 0.5 * unif(rng));
        m = apply_affine(m, {0.5 + unif(rng), -1.0 + 2.0 * unif(rng)});
        DensityModel model(m);
        m = truncate(m, model.quantile(0.02 + 0.1 * unif(rng)),
                     model.quantile(0.8 + 0.19 * unif(rng)));
        CHECK(std::fabs(m.mass_trapezoid() - 1.0) < 1e-8);
        CHECK(m.is_log_concave);
        CHECK(log_concavity_holds(m));
    }
}

TEST_CASE("density model is internally consistent") {
    const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
    DensityModel model(e);
    const double total = model.total_mass();
    CHECK(std::fabs(total - 1.0) < 1e-4);
    for (double u : {0.01, 0.1, 0.3, 0.5, 0.77, 0.99}) {
        const double q = model.quantile(u);
        CHECK(model.cdf(q) / total == doctest::Approx(u).epsilon(1e-9));
        // exponential quantiles in closed form: F^{-1}(u) = ln(2u) for u <= 1/2
        if (u <= 0.5) CHECK(q == doctest::Approx(std::log(2.0 * u)).epsilon(1e-6));
    }
    CHECK(model.pdf(model.xmin() - 1.0) == 0.0);
    CHECK(model.cdf(model.xmax() + 1.0) == doctest::Approx(total));
}

TEST_CASE("gauss utilities") {
    CHECK(gauss::cdf(0.0) == doctest::Approx(0.5));
    CHECK(gauss::quantile(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    for (double p : {1e-12, 1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-9}) {
        CHECK(gauss::cdf(gauss::quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    // log tail consistent with erfc in the overlap region
    for (double x : {1.0, 5.0, 20.0, 34.0}) {
        CHECK(gauss::log_upper_tail(x) ==
              doctest::Approx(std::log(0.5 * std::erfc(x / gauss::kSqrt2))).epsilon(1e-10));
    }
    // and finite far beyond underflow
    CHECK(std::isfinite(gauss::log_upper_tail(1e4)));
}
