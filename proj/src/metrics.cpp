#include "logconc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "logconc/errors.hpp"
#include "logconc/transport.hpp"

namespace logconc {

namespace {

constexpr std::size_t kAtomsLP = 4096;
constexpr std::size_t kAtomsBL = 2048;
constexpr std::size_t kAtomsDudley = 1024;
constexpr std::size_t kAtomsWLP = 768;
constexpr std::size_t kExcessBins = 384;
constexpr int kLPBisectionDepth = 14;

// merged breakpoints of two grids over the union domain
std::vector<double> merged_breakpoints(const GridMeasure& a, const GridMeasure& b) {
    std::vector<double> xs;
    xs.reserve(a.size() + b.size() + 2);
    for (std::size_t i = 0; i < a.size(); ++i) xs.push_back(a.node(i));
    for (std::size_t i = 0; i < b.size(); ++i) xs.push_back(b.node(i));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double u, double v) { return std::fabs(u - v) < 1e-15; }),
             xs.end());
    return xs;
}

// Simpson over merged segments with 4 subdivisions each; integrand must be
// cheap and piecewise smooth between breakpoints.
template <typename F>
double segment_integral(const std::vector<double>& xs, F&& f) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double lo = xs[k], hi = xs[k + 1];
        const double w = (hi - lo) / 4.0;
        if (!(w > 0.0)) continue;
        double sum = f(lo) + f(hi);
        sum += 4.0 * (f(lo + w) + f(lo + 3.0 * w));
        sum += 2.0 * f(lo + 2.0 * w);
        acc += sum * w / 3.0;
    }
    return acc;
}

}  // namespace

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::TV: return "TV";
        case Metric::W1: return "W1";
        case Metric::BL: return "BL";
        case Metric::Dudley: return "Dudley";
        case Metric::LevyProkhorov: return "LevyProkhorov";
        case Metric::WLP: return "WLP";
    }
    return "?";
}

double CouplingPlan::total_mass() const {
    double t = 0.0;
    for (double m : mass) t += m;
    return t;
}

double CouplingPlan::marginal_error(const std::vector<double>& xs, const std::vector<double>& a,
                                    const std::vector<double>& ys,
                                    const std::vector<double>& b) const {
    std::map<double, double> mx, my;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        mx[x[k]] += mass[k];
        my[y[k]] += mass[k];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto it = mx.find(xs[i]);
        const double got = it == mx.end() ? 0.0 : it->second;
        worst = std::max(worst, std::fabs(got - a[i]));
    }
    for (std::size_t j = 0; j < ys.size(); ++j) {
        auto it = my.find(ys[j]);
        const double got = it == my.end() ? 0.0 : it->second;
        worst = std::max(worst, std::fabs(got - b[j]));
    }
    return worst;
}

AtomizedPair atomize_pair(const GridMeasure& a, const GridMeasure& b, std::size_t max_atoms) {
    const double lo = std::min(a.xmin(), b.xmin());
    const double hi = std::max(a.xmax(), b.xmax());
    double step = std::min(a.step, b.step);
    std::size_t n = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 2;
    if (n > max_atoms) {
        n = max_atoms;
        step = (hi - lo) / static_cast<double>(n - 1);
    }
    DensityModel ma(a), mb(b);
    AtomizedPair out;
    out.spacing = step;
    out.x.resize(n);
    out.a.resize(n);
    out.b.resize(n);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = lo + step * static_cast<double>(i);
        const double l = (i == 0) ? xi : xi - 0.5 * step;
        const double r = (i + 1 == n) ? xi : xi + 0.5 * step;
        out.x[i] = xi;
        sa += out.a[i] = ma.mass_between(std::max(l, ma.xmin()), std::min(r, ma.xmax())) /
                         ma.total_mass();
        sb += out.b[i] = mb.mass_between(std::max(l, mb.xmin()), std::min(r, mb.xmax())) /
                         mb.total_mass();
    }
    if (std::fabs(sa - 1.0) > 1e-6 || std::fabs(sb - 1.0) > 1e-6)
        throw GridMismatch("atomize_pair: atomization changed the mass by more than 1e-6");
    for (auto& v : out.a) v /= sa;
    for (auto& v : out.b) v /= sb;
    return out;
}

double tv(const GridMeasure& a, const GridMeasure& b) {
    DensityModel ma(a), mb(b);
    const double ia = 1.0 / ma.total_mass(), ib = 1.0 / mb.total_mass();
    const std::vector<double> xs = merged_breakpoints(a, b);
    const double val = 0.5 * segment_integral(xs, [&](double x) {
        return std::fabs(ma.pdf(x) * ia - mb.pdf(x) * ib);
    });
    return std::clamp(val, 0.0, 1.0);
}

double w1(const GridMeasure& a, const GridMeasure& b) {
    DensityModel ma(a), mb(b);
    const double ia = 1.0 / ma.total_mass(), ib = 1.0 / mb.total_mass();
    const std::vector<double> xs = merged_breakpoints(a, b);
    return segment_integral(
        xs, [&](double x) { return std::fabs(ma.cdf(x) * ia - mb.cdf(x) * ib); });
}

double bl_dud(const GridMeasure& a, const GridMeasure& b, BLKind kind) {
    const std::size_t atoms = (kind == BLKind::BL) ? kAtomsBL : kAtomsDudley;
    const AtomizedPair p = atomize_pair(a, b, atoms);
    std::vector<double> d(p.x.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = p.a[i] - p.b[i];
    if (kind == BLKind::BL) return std::clamp(lipschitz_box_lp(p.x, d, 1.0, 1.0), 0.0, 2.0);
    // Dudley: scan the Lipschitz budget L, solving with sup-norm budget 1 - L
    double best = 0.0;
    const int grid = 64;
    for (int k = 0; k <= grid; ++k) {
        const double lip = static_cast<double>(k) / grid;
        const double box = 1.0 - lip;
        best = std::max(best, lipschitz_box_lp(p.x, d, lip, box));
    }
    return std::clamp(best, 0.0, 1.0);
}

double levy_prokhorov(const GridMeasure& a, const GridMeasure& b) {
    const AtomizedPair p = atomize_pair(a, b, kAtomsLP);
    auto feasible = [&](double eps) {
        const double flow = max_onband_flow(p.x, p.a, p.b, eps);
        return 1.0 - flow <= eps + 1e-12;
    };
    if (feasible(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < kLPBisectionDepth; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

WlpResult w_lp_plan(const GridMeasure& a, const GridMeasure& b) {
    const AtomizedPair p = atomize_pair(a, b, kAtomsWLP);
    const std::size_t n = p.x.size();
    auto cost = [](double x, double y) {
        const double d = std::fabs(x - y);
        return d / (1.0 + d);
    };

    WlpResult out;
    out.tolerance = p.spacing;
    // shared mass stays in place (optimal for a metric cost)
    std::vector<double> ex_pos, ex_mass, dn_pos, dn_mass;
    for (std::size_t i = 0; i < n; ++i) {
        const double shared = std::min(p.a[i], p.b[i]);
        if (shared > 0.0) {
            out.plan.x.push_back(p.x[i]);
            out.plan.y.push_back(p.x[i]);
            out.plan.mass.push_back(shared);
        }
        const double d = p.a[i] - p.b[i];
        if (d > 1e-15) {
            ex_pos.push_back(p.x[i]);
            ex_mass.push_back(d);
        } else if (d < -1e-15) {
            dn_pos.push_back(p.x[i]);
            dn_mass.push_back(-d);
        }
    }
    if (ex_pos.empty() || dn_pos.empty()) {
        out.value = 0.0;
        out.plan.cost_value = 0.0;
        return out;
    }
    // aggregate long excess lists into contiguous barycenter bins
    auto aggregate = [&](std::vector<double>& pos, std::vector<double>& mass) {
        if (pos.size() <= kExcessBins) return 0.0;
        const std::size_t chunk = (pos.size() + kExcessBins - 1) / kExcessBins;
        std::vector<double> np, nm;
        double width = 0.0;
        for (std::size_t i = 0; i < pos.size(); i += chunk) {
            const std::size_t j = std::min(i + chunk, pos.size());
            double m = 0.0, bary = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                m += mass[k];
                bary += mass[k] * pos[k];
            }
            if (m <= 0.0) continue;
            np.push_back(bary / m);
            nm.push_back(m);
            width = std::max(width, pos[j - 1] - pos[i]);
        }
        pos = std::move(np);
        mass = std::move(nm);
        return width;
    };
    out.tolerance += aggregate(ex_pos, ex_mass) + aggregate(dn_pos, dn_mass);

    double se = 0.0, sd = 0.0;
    for (double v : ex_mass) se += v;
    for (double v : dn_mass) sd += v;
    // the two excess totals agree up to rounding; equalize them exactly
    const double scale = 0.5 * (se + sd);
    for (auto& v : ex_mass) v *= scale / se;
    for (auto& v : dn_mass) v *= scale / sd;

    const TransportPlan tp = min_cost_transport(ex_pos, ex_mass, dn_pos, dn_mass, cost);
    for (std::size_t k = 0; k < tp.mass.size(); ++k) {
        out.plan.x.push_back(ex_pos[tp.from[k]]);
        out.plan.y.push_back(dn_pos[tp.to[k]]);
        out.plan.mass.push_back(tp.mass[k]);
    }
    out.value = tp.cost;
    out.plan.cost_value = tp.cost;
    return out;
}

double w_lp(const GridMeasure& a, const GridMeasure& b) { return w_lp_plan(a, b).value; }

std::pair<double, double> kyfan(const CouplingPlan& plan) {
    if (plan.mass.empty()) throw InvalidParameter("kyfan: empty coupling");
    const double total = plan.total_mass();
    if (!(total > 0.0)) throw InvalidParameter("kyfan: zero-mass coupling");
    std::vector<std::pair<double, double>> disp;  // (|x-y|, mass)
    disp.reserve(plan.mass.size());
    double kstar = 0.0;
    for (std::size_t k = 0; k < plan.mass.size(); ++k) {
        const double z = std::fabs(plan.x[k] - plan.y[k]);
        disp.emplace_back(z, plan.mass[k] / total);
        kstar += (plan.mass[k] / total) * z / (1.0 + z);
    }
    std::sort(disp.begin(), disp.end());
    auto tail_above = [&](double eps) {
        double t = 0.0;
        for (auto it = disp.rbegin(); it != disp.rend() && it->first > eps; ++it) t += it->second;
        return t;
    };
    double lo = 0.0, hi = 1.0;
    if (tail_above(0.0) <= 0.0) return {0.0, kstar};
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tail_above(mid) <= mid ? hi : lo) = mid;
    }
    return {hi, kstar};
}

double eval_metric(Metric metric, const GridMeasure& a, const GridMeasure& b) {
    switch (metric) {
        case Metric::TV: return tv(a, b);
        case Metric::W1: return w1(a, b);
        case Metric::BL: return bl_dud(a, b, BLKind::BL);
        case Metric::Dudley: return bl_dud(a, b, BLKind::Dudley);
        case Metric::LevyProkhorov: return levy_prokhorov(a, b);
        case Metric::WLP: return w_lp(a, b);
    }
    throw InvalidParameter("eval_metric: unknown metric");
}

DistanceReport distance_matrix(const std::vector<GridMeasure>& measures,
                               const std::vector<std::string>& names, Metric metric) {
    if (measures.size() != names.size())
        throw InvalidParameter("distance_matrix: names do not match measures");
    DistanceReport r;
    r.measures = names;
    r.metric = metric;
    const std::size_t n = measures.size();
    r.matrix.assign(n, std::vector<double>(n, 0.0));
    r.tolerance = 1e-9;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v;
            if (metric == Metric::WLP) {
                WlpResult w = w_lp_plan(measures[i], measures[j]);
                v = w.value;
                r.tolerance = std::max(r.tolerance, w.tolerance);
            } else {
                v = eval_metric(metric, measures[i], measures[j]);
                if (metric == Metric::LevyProkhorov)
                    r.tolerance = std::max(r.tolerance, std::pow(0.5, kLPBisectionDepth));
                else if (metric == Metric::BL || metric == Metric::Dudley)
                    r.tolerance = std::max(r.tolerance, 1e-6);
            }
            r.matrix[i][j] = r.matrix[j][i] = v;
        }
    return r;
}

}  // namespace logconc
