#include <doctest.h>

#include <cmath>
#include <random>

#include "logconc/errors.hpp"
#include "logconc/gauss.hpp"
#include "logconc/grid_measure.hpp"
#include "logconc/metrics.hpp"
#include "logconc/transport.hpp"

using namespace logconc;

namespace {

GridMeasure gauss_m(double mean, double sd, std::size_t n = 2048) {
    return realize(MeasureSpec::gaussian_spec(mean, sd, n));
}

// plain augmenting-path max flow on the banded bipartite graph, used as the
// oracle for the greedy sweep on tiny instances
double slow_onband_flow(const std::vector<double>& x, std::vector<double> a,
                        std::vector<double> b, double eps) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> flow(n, std::vector<double>(n, 0.0));
    // iterative augmentation: saturate pairs favoring any admissible route via
    // simple repeated DFS over residual capacities
    double total = 0.0;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < n && !progress; ++i) {
            if (a[i] <= 1e-15) continue;
            for (std::size_t j = 0; j < n && !progress; ++j) {
                if (b[j] <= 1e-15 || std::fabs(x[i] - x[j]) > eps + 1e-15) continue;
                const double take = std::min(a[i], b[j]);
                a[i] -= take;
                b[j] -= take;
                flow[i][j] += take;
                total += take;
                progress = true;
            }
            // single alternating-path improvement: move flow to free a sink
            if (!progress && a[i] > 1e-15) {
                for (std::size_t j = 0; j < n && !progress; ++j) {
                    if (std::fabs(x[i] - x[j]) > eps + 1e-15) continue;
                    for (std::size_t i2 = 0; i2 < n && !progress; ++i2) {
                        if (flow[i2][j] <= 1e-15) continue;
                        for (std::size_t j2 = 0; j2 < n && !progress; ++j2) {
                            if (b[j2] <= 1e-15 ||
                                std::fabs(x[i2] - x[j2]) > eps + 1e-15)
                                continue;
                            const double take =
                                std::min({a[i], flow[i2][j], b[j2]});
                            if (take <= 1e-15) continue;
                            flow[i2][j] -= take;
                            flow[i][j] += take;
                            flow[i2][j2] += take;
                            a[i] -= take;
                            b[j2] -= take;
                            total += take;
                            progress = true;
                        }
                    }
                }
            }
        }
    }
    return total;
}

}  // namespace

TEST_CASE("tv anchors") {
    const GridMeasure g = gauss_m(0, 1);
    CHECK(tv(g, g) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    SUBCASE("disjoint uniforms") {
        const GridMeasure a = realize(MeasureSpec::uniform_spec(0.0, 1.0, 1024));
        const GridMeasure b = realize(MeasureSpec::uniform_spec(1.0, 2.0, 1024));
        CHECK(std::fabs(tv(a, b) - 1.0) < 1e-8);
    }
    SUBCASE("gaussian shift closed form") {
        for (double c : {0.3, 1.0, 2.7}) {
            const double expect = 2.0 * gauss::cdf(0.5 * c) - 1.0;
            CHECK(std::fabs(tv(g, gauss_m(c, 1)) - expect) < 1e-5);
        }
    }
}

TEST_CASE("w1 anchors") {
    const GridMeasure g = gauss_m(0, 1);
    CHECK(w1(g, g) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    SUBCASE("translation is exact") {
        for (double c : {0.137, 1.0, 2.4})
            CHECK(std::fabs(w1(g, apply_affine(g, {1.0, c})) - c) < 1e-6);
    }
    SUBCASE("nested uniforms") {
        const GridMeasure a = realize(MeasureSpec::uniform_spec(0.0, 1.0, 4096));
        const GridMeasure b = realize(MeasureSpec::uniform_spec(0.0, 2.0, 4096));
        CHECK(std::fabs(w1(a, b) - 0.5) < 1e-6);
    }
}

TEST_CASE("bl and dudley") {
    const GridMeasure g = gauss_m(0, 1, 1024);
    CHECK(bl_dud(g, g, BLKind::BL) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(bl_dud(g, g, BLKind::Dudley) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const GridMeasure a = gauss_m(-1.0 + 2.0 * unif(rng), 0.5 + unif(rng), 1024);
        const GridMeasure b = gauss_m(-1.0 + 2.0 * unif(rng), 0.5 + unif(rng), 1024);
        const double dbl = bl_dud(a, b, BLKind::BL);
        const double ddud = bl_dud(a, b, BLKind::Dudley);
        const double dtv = tv(a, b);
        const double dw1 = w1(a, b);
        CHECK(ddud <= dbl + 1e-6);
        CHECK(dbl <= 2.0 * ddud + 1e-6);
        CHECK(dbl <= 2.0 * dtv + 1e-4);
        CHECK(dbl <= dw1 + 1e-4);  // the 1-Lipschitz class is smaller than W1's
        CHECK(dbl <= 2.0 + 1e-12);
        CHECK(ddud <= 1.0 + 1e-12);
    }

    SUBCASE("far pair saturates the sup-norm budget") {
        const GridMeasure a = gauss_m(0.0, 1.0, 1024);
        const GridMeasure b = gauss_m(30.0, 1.0, 1024);
        CHECK(bl_dud(a, b, BLKind::BL) == doctest::Approx(2.0).epsilon(1e-3));
        CHECK(bl_dud(a, b, BLKind::Dudley) == doctest::Approx(1.0).epsilon(1e-3));
    }

    SUBCASE("bl agrees with the truncated-metric transport dual") {
        // sup over 1-Lipschitz |f|<=1 equals min-cost transport for the cost
        // min(|x-y|, 2)
        const GridMeasure a = gauss_m(0.0, 0.7, 512);
        const GridMeasure b = gauss_m(1.1, 1.2, 512);
        const double primal = bl_dud(a, b, BLKind::BL);
        const AtomizedPair p = atomize_pair(a, b, 512);
        std::vector<double> ep, em, xp, xm;
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            const double d = p.a[i] - p.b[i];
            if (d > 1e-14) {
                xp.push_back(p.x[i]);
                ep.push_back(d);
            } else if (d < -1e-14) {
                xm.push_back(p.x[i]);
                em.push_back(-d);
            }
        }
        double sp = 0.0, sm = 0.0;
        for (double v : ep) sp += v;
        for (double v : em) sm += v;
        for (double& v : em) v *= sp / sm;
        const TransportPlan plan = min_cost_transport(
            xp, ep, xm, em,
            [](double x, double y) { return std::min(std::fabs(x - y), 2.0); });
        CHECK(primal == doctest::Approx(plan.cost).epsilon(2e-3));
    }
}

TEST_CASE("levy-prokhorov") {
    const GridMeasure g = gauss_m(0, 1, 1024);
    CHECK(levy_prokhorov(g, g) == 0.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const GridMeasure a = gauss_m(-unif(rng), 0.5 + unif(rng), 1024);
        const GridMeasure b = gauss_m(unif(rng), 0.5 + unif(rng), 1024);
        const double dlp = levy_prokhorov(a, b);
        const double dtv = tv(a, b);
        const double ddud = bl_dud(a, b, BLKind::Dudley);
        const double dbl = bl_dud(a, b, BLKind::BL);
        CHECK(dlp <= dtv + 1e-4);
        CHECK(0.25 * dbl <= 0.5 * ddud + 1e-4);
        CHECK(0.5 * ddud <= dlp + 1e-4);
        CHECK(dlp <= std::sqrt(1.5 * ddud) + 1e-4);
    }
}

TEST_CASE("greedy on-band flow equals a generic max flow on tiny instances") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(unif(rng) * 8);
        std::vector<double> x(n), a(n), b(n);
        double sa = 0.0, sb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(i) * 0.25;
            sa += a[i] = unif(rng) < 0.25 ? 0.0 : unif(rng);
            sb += b[i] = unif(rng) < 0.25 ? 0.0 : unif(rng);
        }
        for (auto& v : a) v /= sa;
        for (auto& v : b) v /= sb;
        const double eps = unif(rng) * 1.2;
        const double fast = max_onband_flow(x, a, b, eps);
        const double slow = slow_onband_flow(x, a, b, eps);
        CHECK(fast == doctest::Approx(slow).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("transportation simplex sanity") {
    SUBCASE("convex cost reproduces the monotone coupling value") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            const std::size_t n = 6 + static_cast<std::size_t>(unif(rng) * 10);
            std::vector<double> xs(n), ys(n), a(n), b(n);
            double sa = 0.0, sb = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = static_cast<double>(i) + unif(rng) * 0.3;
                ys[i] = static_cast<double>(i) + unif(rng) * 0.3;
                sa += a[i] = 0.05 + unif(rng);
                sb += b[i] = 0.05 + unif(rng);
            }
            for (auto& v : a) v /= sa;
            for (auto& v : b) v /= sb;
            const TransportPlan plan = min_cost_transport(
                xs, a, ys, b, [](double x, double y) { return std::fabs(x - y); });
            // monotone (north-west) coupling is optimal for convex costs in 1D
            double expect = 0.0;
            std::size_t i = 0, j = 0;
            double ra = a[0], rb = b[0];
            while (i < n && j < n) {
                const double take = std::min(ra, rb);
                expect += take * std::fabs(xs[i] - ys[j]);
                ra -= take;
                rb -= take;
                if (ra <= 1e-15) {
                    if (++i < n) ra = a[i];
                }
                if (rb <= 1e-15) {
                    if (++j < n) rb = b[j];
                }
            }
            CHECK(plan.cost == doctest::Approx(expect).epsilon(1e-8));
        }
    }
    SUBCASE("concave cost prefers long-plus-short over two mediums") {
        // +1 @0, -1 @4.9, +1 @5, -1 @10 with cost d/(1+d): nesting wins
        std::vector<double> xs = {0.0, 5.0}, ys = {4.9, 10.0};
        std::vector<double> a = {0.5, 0.5}, b = {0.5, 0.5};
        auto cost = [](double x, double y) {
            const double d = std::fabs(x - y);
            return d / (1.0 + d);
        };
        const TransportPlan plan = min_cost_transport(xs, a, ys, b, cost);
        const double nested = 0.5 * (cost(0.0, 10.0) + cost(5.0, 4.9));
        const double adjacent = 0.5 * (cost(0.0, 4.9) + cost(5.0, 10.0));
        CHECK(nested < adjacent);
        CHECK(plan.cost == doctest::Approx(nested).epsilon(1e-9));
    }
}

TEST_CASE("w_lp") {
    const GridMeasure g = gauss_m(0, 1, 1024);
    CHECK(w_lp(g, g) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    SUBCASE("translation equality case of the Jensen bound") {
        const double c = 1.3;
        const GridMeasure b = apply_affine(g, {1.0, c});
        const WlpResult r = w_lp_plan(g, b);
        CHECK(std::fabs(r.value - c / (1.0 + c)) < 2.0 * r.tolerance + 1e-3);
        CHECK(r.plan.marginal_error({}, {}, {}, {}) == 0.0);
    }
    SUBCASE("chain against w1 and lp") {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 4; ++trial) {
            const GridMeasure a = gauss_m(-unif(rng), 0.6 + unif(rng), 1024);
            const GridMeasure b = gauss_m(unif(rng), 0.6 + unif(rng), 1024);
            const WlpResult r = w_lp_plan(a, b);
            const double dw1 = w1(a, b);
            const double dlp = levy_prokhorov(a, b);
            const double tol = 2.0 * r.tolerance + 2e-4;
            CHECK(r.value <= dw1 / (1.0 + dw1) + tol);
            CHECK(0.5 * r.value <= dlp + tol);
            CHECK(dlp <= std::sqrt(2.0 * r.value + tol) + 1e-4);
        }
    }
}

TEST_CASE("kyfan") {
    SUBCASE("identity coupling") {
        CouplingPlan plan;
        plan.x = {0.0, 1.0, 2.0};
        plan.y = {0.0, 1.0, 2.0};
        plan.mass = {0.2, 0.5, 0.3};
        const auto [k, kstar] = kyfan(plan);
        CHECK(k == 0.0);
        CHECK(kstar == 0.0);
    }
    SUBCASE("rigid displacement by d gives K = min(d, 1)") {
        for (double d : {0.3, 0.9, 2.5}) {
            CouplingPlan plan;
            plan.x = {0.0, 1.0};
            plan.y = {d, 1.0 + d};
            plan.mass = {0.5, 0.5};
            const auto [k, kstar] = kyfan(plan);
            CHECK(k == doctest::Approx(std::min(d, 1.0)).epsilon(1e-9));
            CHECK(kstar == doctest::Approx(d / (1.0 + d)).epsilon(1e-12));
        }
    }
    SUBCASE("K and K* comparison holds for random plans") {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            CouplingPlan plan;
            double total = 0.0;
            const int k = 2 + static_cast<int>(unif(rng) * 6);
            for (int i = 0; i < k; ++i) {
                plan.x.push_back(unif(rng) * 4.0);
                plan.y.push_back(unif(rng) * 4.0);
                plan.mass.push_back(0.1 + unif(rng));
                total += plan.mass.back();
            }
            for (auto& mv : plan.mass) mv /= total;
            const auto [kf, kstar] = kyfan(plan);
            CHECK(0.5 * kstar <= kf + 1e-9);
            CHECK(kf <= std::sqrt(2.0 * kstar) + 1e-9);
        }
    }
}

TEST_CASE("metric axioms on random triples") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const GridMeasure a = gauss_m(-0.4, 0.8, 1024);
    const GridMeasure b = gauss_m(0.6, 1.1, 1024);
    const GridMeasure c = gauss_m(0.1, 1.4, 1024);
    for (Metric metric : {Metric::TV, Metric::W1, Metric::BL, Metric::Dudley,
                          Metric::LevyProkhorov, Metric::WLP}) {
        const double ab = eval_metric(metric, a, b);
        const double ba = eval_metric(metric, b, a);
        const double ac = eval_metric(metric, a, c);
        const double cb = eval_metric(metric, c, b);
        const double tol = metric == Metric::WLP ? 0.05 : 2e-4;
        CHECK(ab == doctest::Approx(ba).epsilon(1e-6).scale(1.0));
        CHECK(ab <= ac + cb + 2.0 * tol);
        CHECK(ab >= 0.0);
    }
}

TEST_CASE("smoothing inequality: tv of mollified pair versus bl and dudley") {
    const GridMeasure a = gauss_m(0.0, 0.8, 1024);
    const GridMeasure b = realize(MeasureSpec::uniform_spec(-1.0, 1.5, 1024));
    const double dbl = bl_dud(a, b, BLKind::BL);
    const double ddud = bl_dud(a, b, BLKind::Dudley);
    for (double t : {0.25, 1.0, 4.0}) {
        const double lhs = tv(convolve_gaussian(a, t), convolve_gaussian(b, t));
        const double factor = std::sqrt(2.0) / (t * std::sqrt(3.141592653589793));
        CHECK(lhs <= std::max(1.0, factor) * dbl + 1e-4);
        CHECK(lhs <= (1.0 + factor) * ddud + 1e-4);
    }
}

TEST_CASE("distance matrix structure") {
    std::vector<GridMeasure> ms = {gauss_m(0, 1, 512), gauss_m(1, 1, 512),
                                   realize(MeasureSpec::uniform_spec(-1, 1, 512))};
    std::vector<std::string> names = {"a", "b", "c"};
    const DistanceReport r = distance_matrix(ms, names, Metric::TV);
    CHECK(r.matrix.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.matrix[i][i] == 0.0);
        for (std::size_t j = 0; j < 3; ++j) CHECK(r.matrix[i][j] == r.matrix[j][i]);
    }
}
