#include "logconc/grid_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "logconc/errors.hpp"
#include "logconc/gauss.hpp"

namespace logconc {

namespace {

// (exp(z) - 1) / z with a series fallback near zero
double expm1_over(double z) {
    if (std::fabs(z) < 1e-5) return 1.0 + z * (0.5 + z / 6.0);
    return std::expm1(z) / z;
}

double trapezoid_weight(std::size_t i, std::size_t n, double h) {
    return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace

double GridMeasure::density(std::size_t i) const { return std::exp(log_density[i]); }

double GridMeasure::mass_trapezoid() const {
    const std::size_t n = size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += trapezoid_weight(i, n, step) * density(i);
    return acc;
}

std::pair<std::size_t, std::size_t> GridMeasure::support_range() const {
    std::size_t lo = 0, hi = size() - 1;
    while (lo < hi && !(log_density[lo] > kNegInf)) ++lo;
    while (hi > lo && !(log_density[hi] > kNegInf)) --hi;
    return {lo, hi};
}

GridMeasure finalize_measure(double x0, double step, std::vector<double> log_density,
                             bool is_log_concave, double silent_drift) {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(x0))
        throw InvalidParameter("finalize_measure: bad grid geometry");
    if (log_density.size() < 2) throw InvalidParameter("finalize_measure: need at least 2 nodes");
    for (double v : log_density)
        if (std::isnan(v) || v == kPosInf)
            throw NonNormalizable("finalize_measure: log-density contains nan or +inf");

    GridMeasure m;
    m.x0 = x0;
    m.step = step;
    m.log_density = std::move(log_density);
    m.is_log_concave = is_log_concave;

    const double mass = m.mass_trapezoid();
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw NonNormalizable("finalize_measure: nonpositive or infinite mass");
    const double drift = std::fabs(mass - 1.0);
    if (drift > silent_drift) {
        std::ostringstream os;
        os << "finalize_measure: mass drift " << drift << " exceeds " << silent_drift;
        throw NonNormalizable(os.str());
    }
    const double shift = std::log(mass);
    for (double& v : m.log_density)
        if (v > kNegInf) v -= shift;

    const std::size_t n = m.size();
    m.cdf.assign(n, 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        acc += 0.5 * step * (m.density(i - 1) + m.density(i));
        m.cdf[i] = acc;
    }
    const double total = acc;
    if (!(total > 0.0)) throw NonNormalizable("finalize_measure: empty cdf");
    for (std::size_t i = 0; i < n; ++i) m.cdf[i] = std::min(1.0, m.cdf[i] / total);
    m.cdf.back() = 1.0;
    return m;
}

GridMeasure measure_from_density(double x0, double step, const std::vector<double>& density,
                                 bool is_log_concave) {
    std::vector<double> logd(density.size());
    for (std::size_t i = 0; i < density.size(); ++i) {
        if (density[i] < 0.0) throw InvalidParameter("measure_from_density: negative density");
        logd[i] = density[i] > 0.0 ? std::log(density[i]) : kNegInf;
    }
    return finalize_measure(x0, step, std::move(logd), is_log_concave);
}

bool log_concavity_holds(const GridMeasure& m, double tol_scale) {
    double max_abs = 0.0;
    for (double v : m.log_density)
        if (v > kNegInf) max_abs = std::max(max_abs, std::fabs(v));
    const double tol = tol_scale * (max_abs + 1.0);
    const std::size_t n = m.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double a = m.log_density[i - 1], b = m.log_density[i], c = m.log_density[i + 1];
        if (a > kNegInf && b > kNegInf && c > kNegInf) {
            if (a - 2.0 * b + c > tol) return false;
        }
    }
    return true;
}

void validate(const GridMeasure& m) {
    if (!(m.step > 0.0)) throw InvalidParameter("validate: nonpositive step");
    if (m.cdf.size() != m.size()) throw InvalidParameter("validate: cdf size mismatch");
    if (std::fabs(m.mass_trapezoid() - 1.0) > 1e-9)
        throw NonNormalizable("validate: trapezoid mass not 1 within 1e-9");
    for (std::size_t i = 1; i < m.size(); ++i)
        if (m.cdf[i] < m.cdf[i - 1] - 1e-12) throw NonNormalizable("validate: cdf decreasing");
    if (std::fabs(m.cdf.back() - 1.0) > 1e-9)
        throw NonNormalizable("validate: cdf does not reach 1");
    if (m.is_log_concave && !log_concavity_holds(m))
        throw NotLogConcave("validate: log-concavity flag set but second differences fail");
}

// ---------------------------------------------------------------------------
// DensityModel

DensityModel::DensityModel(const GridMeasure& m)
    : x0_(m.x0), step_(m.step), n_(m.size()), logd_(m.log_density) {
    prefix_.assign(n_, 0.0);
    for (std::size_t c = 0; c + 1 < n_; ++c) prefix_[c + 1] = prefix_[c] + cell_mass(c);
}

double DensityModel::cell_mass(std::size_t c) const {
    const double l0 = logd_[c], l1 = logd_[c + 1];
    const bool f0 = l0 > kNegInf, f1 = l1 > kNegInf;
    if (f0 && f1) {
        const double z = l1 - l0;
        return step_ * std::exp(l0) * expm1_over(z);
    }
    if (f0 || f1) {
        // linear ramp from/to zero density
        return 0.5 * step_ * (std::exp(f0 ? l0 : l1));
    }
    return 0.0;
}

double DensityModel::cell_cdf(std::size_t c, double t) const {
    t = std::clamp(t, 0.0, step_);
    const double l0 = logd_[c], l1 = logd_[c + 1];
    const bool f0 = l0 > kNegInf, f1 = l1 > kNegInf;
    if (f0 && f1) {
        const double s = (l1 - l0) / step_;
        return std::exp(l0) * t * expm1_over(s * t);
    }
    if (f0 || f1) {
        const double w0 = f0 ? std::exp(l0) : 0.0;
        const double w1 = f1 ? std::exp(l1) : 0.0;
        return w0 * t + 0.5 * (w1 - w0) * t * t / step_;
    }
    return 0.0;
}

double DensityModel::cell_quantile(std::size_t c, double mass) const {
    const double l0 = logd_[c], l1 = logd_[c + 1];
    const bool f0 = l0 > kNegInf, f1 = l1 > kNegInf;
    const double total = cell_mass(c);
    mass = std::clamp(mass, 0.0, total);
    if (f0 && f1) {
        const double s = (l1 - l0) / step_;
        if (std::fabs(s) * step_ < 1e-10) return mass * std::exp(-l0);
        double arg = mass * s * std::exp(-l0);
        arg = std::max(arg, -1.0 + 1e-300);
        return std::log1p(arg) / s;
    }
    if (f0 || f1) {
        const double w0 = f0 ? std::exp(l0) : 0.0;
        const double w1 = f1 ? std::exp(l1) : 0.0;
        const double a = 0.5 * (w1 - w0) / step_;
        if (std::fabs(a) < 1e-300) return w0 > 0.0 ? mass / w0 : 0.0;
        const double disc = w0 * w0 + 4.0 * a * mass;
        const double root = std::sqrt(std::max(0.0, disc));
        const double t = (a > 0.0) ? (-w0 + root) / (2.0 * a) : (2.0 * mass) / (w0 + root);
        return std::clamp(t, 0.0, step_);
    }
    return 0.0;
}

double DensityModel::pdf(double x) const { return std::exp(log_pdf(x)); }

double DensityModel::log_pdf(double x) const {
    if (x < x0_ || x > xmax()) return kNegInf;
    std::size_t c = static_cast<std::size_t>(std::clamp(
        std::floor((x - x0_) / step_), 0.0, static_cast<double>(n_ - 2)));
    const double t = x - node(c);
    const double l0 = logd_[c], l1 = logd_[c + 1];
    const bool f0 = l0 > kNegInf, f1 = l1 > kNegInf;
    if (f0 && f1) return l0 + (l1 - l0) * (t / step_);
    if (f0 || f1) {
        const double w0 = f0 ? std::exp(l0) : 0.0;
        const double w1 = f1 ? std::exp(l1) : 0.0;
        const double w = w0 + (w1 - w0) * (t / step_);
        return w > 0.0 ? std::log(w) : kNegInf;
    }
    return kNegInf;
}

double DensityModel::cdf(double x) const {
    if (x <= x0_) return 0.0;
    if (x >= xmax()) return total_mass();
    std::size_t c = static_cast<std::size_t>(std::clamp(
        std::floor((x - x0_) / step_), 0.0, static_cast<double>(n_ - 2)));
    return prefix_[c] + cell_cdf(c, x - node(c));
}

double DensityModel::quantile(double u) const {
    const double target = std::clamp(u, 0.0, 1.0) * total_mass();
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), target);
    std::size_t c = (it == prefix_.begin()) ? 0 : static_cast<std::size_t>(it - prefix_.begin() - 1);
    c = std::min(c, n_ - 2);
    // skip zero-mass cells so the generalized inverse is well defined
    while (c + 2 < n_ && cell_mass(c) <= 0.0 && prefix_[c + 1] <= target) ++c;
    return node(c) + cell_quantile(c, target - prefix_[c]);
}

double DensityModel::mass_between(double a, double b) const {
    if (!(a < b)) return 0.0;
    return std::max(0.0, cdf(b) - cdf(a));
}

double DensityModel::atom_mass(std::size_t i) const {
    const double lo = std::max(xmin(), node(i) - 0.5 * step_);
    const double hi = std::min(xmax(), node(i) + 0.5 * step_);
    return mass_between(lo, hi);
}

// ---------------------------------------------------------------------------
// MeasureSpec factories

MeasureSpec MeasureSpec::gaussian_spec(double mean, double sd, std::size_t n) {
    MeasureSpec s;
    s.family = Family::gaussian;
    s.mean = mean;
    s.sd = sd;
    s.grid.n = n;
    return s;
}

MeasureSpec MeasureSpec::exponential_spec(double scale, std::size_t n) {
    MeasureSpec s;
    s.family = Family::exponential_symmetric;
    s.scale = scale;
    s.grid.n = n;
    return s;
}

MeasureSpec MeasureSpec::uniform_spec(double a, double b, std::size_t n) {
    MeasureSpec s;
    s.family = Family::uniform;
    s.a = a;
    s.b = b;
    s.grid.n = n;
    return s;
}

MeasureSpec MeasureSpec::mixture_spec(std::vector<double> w, std::vector<double> means,
                                      std::vector<double> sds, std::size_t n) {
    MeasureSpec s;
    s.family = Family::gaussian_mixture;
    s.mix_weights = std::move(w);
    s.mix_means = std::move(means);
    s.mix_sds = std::move(sds);
    s.grid.n = n;
    return s;
}

MeasureSpec MeasureSpec::potential_spec(std::vector<double> x, std::vector<double> v,
                                        std::size_t n) {
    MeasureSpec s;
    s.family = Family::potential;
    s.pot_x = std::move(x);
    s.pot_v = std::move(v);
    s.grid.n = n;
    return s;
}

MeasureSpec MeasureSpec::radial_spec(int dim, std::vector<double> r, std::vector<double> v,
                                     std::size_t n) {
    MeasureSpec s;
    s.family = Family::radial;
    s.dim = dim;
    s.pot_x = std::move(r);
    s.pot_v = std::move(v);
    s.grid.n = n;
    return s;
}

std::string MeasureSpec::label() const {
    std::ostringstream os;
    switch (family) {
        case Family::gaussian: os << "gaussian(" << mean << "," << sd << ")"; break;
        case Family::exponential_symmetric: os << "exponential(" << scale << ")"; break;
        case Family::uniform: os << "uniform(" << a << "," << b << ")"; break;
        case Family::potential: os << "potential[" << pot_x.size() << "]"; break;
        case Family::gaussian_mixture: os << "mixture[" << mix_weights.size() << "]"; break;
        case Family::radial: os << "radial(" << dim << ")"; break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// realize

namespace {

// Uniform grid with `center` exactly on a node, covering [center-wl, center+wr].
void anchored_grid(double center, double wl, double wr, std::size_t n, double& x0, double& h) {
    const auto total = wl + wr;
    std::size_t k = static_cast<std::size_t>(
        std::llround(static_cast<double>(n - 1) * (total > 0.0 ? wl / total : 0.0)));
    if (wl > 0.0 && k == 0) k = 1;
    if (wr > 0.0 && k == n - 1) k = n - 2;
    const double h_left = (k > 0) ? wl / static_cast<double>(k) : 0.0;
    const double h_right = (k < n - 1) ? wr / static_cast<double>(n - 1 - k) : 0.0;
    h = std::max(h_left, h_right);
    x0 = center - static_cast<double>(k) * h;
}

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

GridMeasure realize_gaussian(const MeasureSpec& spec) {
    if (!(spec.sd > 0.0) || !std::isfinite(spec.sd) || !std::isfinite(spec.mean))
        throw InvalidParameter("realize: gaussian needs finite mean and sd > 0");
    const double eps = 0.5 * spec.grid.tail_mass;
    const double z = -gauss::quantile(eps);
    double x0, h;
    anchored_grid(spec.mean, spec.sd * z, spec.sd * z, spec.grid.n, x0, h);
    std::vector<double> logd(spec.grid.n);
    const double lognorm = -std::log(spec.sd) - gauss::kLnSqrt2Pi;
    for (std::size_t i = 0; i < logd.size(); ++i) {
        const double u = (x0 + h * static_cast<double>(i) - spec.mean) / spec.sd;
        logd[i] = lognorm - 0.5 * u * u;
    }
    return finalize_measure(x0, h, std::move(logd), true, 1e-6);
}

GridMeasure realize_exponential(const MeasureSpec& spec) {
    if (!(spec.scale > 0.0) || !std::isfinite(spec.scale))
        throw InvalidParameter("realize: exponential needs scale > 0");
    const double eps = 0.5 * spec.grid.tail_mass;
    const double w = spec.scale * std::log(1.0 / (2.0 * eps));
    double x0, h;
    anchored_grid(0.0, w, w, spec.grid.n, x0, h);
    std::vector<double> logd(spec.grid.n);
    const double lognorm = -std::log(2.0 * spec.scale);
    for (std::size_t i = 0; i < logd.size(); ++i)
        logd[i] = lognorm - std::fabs(x0 + h * static_cast<double>(i)) / spec.scale;
    return finalize_measure(x0, h, std::move(logd), true, 1e-6);
}

GridMeasure realize_uniform(const MeasureSpec& spec) {
    if (!(spec.a < spec.b) || !std::isfinite(spec.a) || !std::isfinite(spec.b))
        throw InvalidParameter("realize: uniform needs finite a < b");
    const double h = (spec.b - spec.a) / static_cast<double>(spec.grid.n - 1);
    std::vector<double> logd(spec.grid.n, -std::log(spec.b - spec.a));
    return finalize_measure(spec.a, h, std::move(logd), true, 1e-6);
}

GridMeasure realize_mixture(const MeasureSpec& spec) {
    const std::size_t k = spec.mix_weights.size();
    if (k == 0 || spec.mix_means.size() != k || spec.mix_sds.size() != k)
        throw InvalidParameter("realize: mixture needs matching weights/means/sds");
    double wsum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (!(spec.mix_weights[j] > 0.0) || !(spec.mix_sds[j] > 0.0))
            throw InvalidParameter("realize: mixture weights and sds must be positive");
        wsum += spec.mix_weights[j];
    }
    std::vector<double> w(k);
    for (std::size_t j = 0; j < k; ++j) w[j] = spec.mix_weights[j] / wsum;

    auto mix_cdf = [&](double x) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            acc += w[j] * gauss::cdf((x - spec.mix_means[j]) / spec.mix_sds[j]);
        return acc;
    };
    const double eps = 0.5 * spec.grid.tail_mass;
    const double zfull = -gauss::quantile(eps / static_cast<double>(k));
    double lo = kPosInf, hi = kNegInf;
    for (std::size_t j = 0; j < k; ++j) {
        lo = std::min(lo, spec.mix_means[j] - zfull * spec.mix_sds[j]);
        hi = std::max(hi, spec.mix_means[j] + zfull * spec.mix_sds[j]);
    }
    // tighten by bisection on the mixture cdf
    auto solve = [&](double target, double a, double b) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            (mix_cdf(mid) < target ? a : b) = mid;
        }
        return 0.5 * (a + b);
    };
    const double left = solve(eps, lo, hi);
    const double right = solve(1.0 - eps, lo, hi);

    double mean = 0.0;
    for (std::size_t j = 0; j < k; ++j) mean += w[j] * spec.mix_means[j];
    mean = std::clamp(mean, left, right);
    double x0, h;
    anchored_grid(mean, mean - left, right - mean, spec.grid.n, x0, h);

    std::vector<double> logd(spec.grid.n);
    std::vector<double> comp(k);
    for (std::size_t i = 0; i < logd.size(); ++i) {
        const double x = x0 + h * static_cast<double>(i);
        double mx = kNegInf;
        for (std::size_t j = 0; j < k; ++j) {
            const double u = (x - spec.mix_means[j]) / spec.mix_sds[j];
            comp[j] = std::log(w[j]) - std::log(spec.mix_sds[j]) - gauss::kLnSqrt2Pi -
                      0.5 * u * u;
            mx = std::max(mx, comp[j]);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += std::exp(comp[j] - mx);
        logd[i] = mx + std::log(acc);
    }
    GridMeasure m = finalize_measure(x0, h, std::move(logd), false, 1e-6);
    m.is_log_concave = log_concavity_holds(m);
    return m;
}

GridMeasure realize_potential(const MeasureSpec& spec) {
    if (spec.pot_x.size() < 2 || spec.pot_x.size() != spec.pot_v.size())
        throw InvalidParameter("realize: potential needs sampled (x, v) of equal size >= 2");
    if (!std::is_sorted(spec.pot_x.begin(), spec.pot_x.end()))
        throw InvalidParameter("realize: potential abscissae must be increasing");
    for (double v : spec.pot_v)
        if (!std::isfinite(v)) throw InvalidParameter("realize: potential values must be finite");
    const double lo = spec.pot_x.front(), hi = spec.pot_x.back();
    const double h = (hi - lo) / static_cast<double>(spec.grid.n - 1);
    std::vector<double> logd(spec.grid.n);
    for (std::size_t i = 0; i < logd.size(); ++i)
        logd[i] = -interp_linear(spec.pot_x, spec.pot_v, lo + h * static_cast<double>(i));
    GridMeasure m = finalize_measure(lo, h, std::move(logd), false);
    m.is_log_concave = log_concavity_holds(m);
    return m;
}

GridMeasure realize_radial(const MeasureSpec& spec) {
    if (spec.dim < 1) throw InvalidParameter("realize: radial needs dimension n >= 1");
    if (spec.pot_x.size() < 2 || spec.pot_x.size() != spec.pot_v.size())
        throw InvalidParameter("realize: radial needs sampled (r, v) of equal size >= 2");
    if (spec.pot_x.front() < 0.0)
        throw InvalidParameter("realize: radial potential must live on r >= 0");
    const double lo = spec.pot_x.front(), hi = spec.pot_x.back();
    auto log_unnorm = [&](double r) {
        const double lr = (spec.dim > 1) ? (r > 0.0 ? (spec.dim - 1) * std::log(r) : kNegInf) : 0.0;
        return lr - interp_linear(spec.pot_x, spec.pot_v, r);
    };
    // provisional pass to locate the upper quantile
    const std::size_t fine = 1 << 14;
    const double hf = (hi - lo) / static_cast<double>(fine - 1);
    std::vector<double> fw(fine);
    double mx = kNegInf;
    for (std::size_t i = 0; i < fine; ++i)
        mx = std::max(mx, fw[i] = log_unnorm(lo + hf * static_cast<double>(i)));
    double total = 0.0;
    std::vector<double> cum(fine, 0.0);
    for (std::size_t i = 1; i < fine; ++i) {
        total += 0.5 * hf * (std::exp(fw[i - 1] - mx) + std::exp(fw[i] - mx));
        cum[i] = total;
    }
    if (!(total > 0.0)) throw NonNormalizable("realize: radial potential has no mass");
    const double target = (1.0 - spec.grid.tail_mass) * total;
    std::size_t j = 1;
    while (j + 1 < fine && cum[j] < target) ++j;
    const double right = lo + hf * static_cast<double>(j);

    const double h = (right - lo) / static_cast<double>(spec.grid.n - 1);
    std::vector<double> logd(spec.grid.n);
    for (std::size_t i = 0; i < logd.size(); ++i)
        logd[i] = log_unnorm(lo + h * static_cast<double>(i));
    GridMeasure m = finalize_measure(lo, h, std::move(logd), false);
    m.is_log_concave = log_concavity_holds(m);
    return m;
}

}  // namespace

GridMeasure realize(const MeasureSpec& spec) {
    if (spec.grid.n < 64) throw InvalidParameter("realize: grid_request.N must be >= 64");
    if (!(spec.grid.tail_mass > 0.0) || spec.grid.tail_mass > 1e-3)
        throw InvalidParameter("realize: tail mass policy out of range");
    switch (spec.family) {
        case MeasureSpec::Family::gaussian: return realize_gaussian(spec);
        case MeasureSpec::Family::exponential_symmetric: return realize_exponential(spec);
        case MeasureSpec::Family::uniform: return realize_uniform(spec);
        case MeasureSpec::Family::gaussian_mixture: return realize_mixture(spec);
        case MeasureSpec::Family::potential: return realize_potential(spec);
        case MeasureSpec::Family::radial: return realize_radial(spec);
    }
    throw InvalidParameter("realize: unknown family");
}

// ---------------------------------------------------------------------------
// transforms

GridMeasure apply_affine(const GridMeasure& m, const AffineMap1D& t) {
    if (t.scale == 0.0 || !std::isfinite(t.scale) || !std::isfinite(t.shift))
        throw InvalidParameter("apply_affine: scale must be nonzero and finite");
    if (t.scale == 1.0 && t.shift == 0.0) return m;
    GridMeasure out;
    const double a = std::fabs(t.scale);
    out.step = m.step * a;
    const std::size_t n = m.size();
    out.log_density.resize(n);
    const double lj = std::log(a);
    if (t.scale > 0.0) {
        out.x0 = t.scale * m.x0 + t.shift;
        for (std::size_t i = 0; i < n; ++i)
            out.log_density[i] = m.log_density[i] > kNegInf ? m.log_density[i] - lj : kNegInf;
    } else {
        out.x0 = t.scale * m.xmax() + t.shift;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = m.log_density[n - 1 - i];
            out.log_density[i] = v > kNegInf ? v - lj : kNegInf;
        }
    }
    return finalize_measure(out.x0, out.step, std::move(out.log_density), m.is_log_concave, 1e-6);
}

GridMeasure truncate(const GridMeasure& m, double a, double b, bool recenter) {
    if (!(a < b)) throw InvalidParameter("truncate: need a < b");
    const double lo = std::max(a, m.xmin());
    const double hi = std::min(b, m.xmax());
    if (!(lo < hi)) throw EmptyRestriction("truncate: window misses the support");
    DensityModel model(m);
    const double mass = model.mass_between(lo, hi) / model.total_mass();
    if (mass < 1e-12) throw EmptyRestriction("truncate: restricted mass below 1e-12");

    GridMeasure out;
    if (lo == m.xmin() && hi == m.xmax()) {
        out = m;
    } else {
        const std::size_t n = m.size();
        const double h = (hi - lo) / static_cast<double>(n - 1);
        std::vector<double> logd(n);
        const double lmass = std::log(mass);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = model.log_pdf(lo + h * static_cast<double>(i));
            logd[i] = v > kNegInf ? v - lmass : kNegInf;
        }
        out = finalize_measure(lo, h, std::move(logd), m.is_log_concave, 1e-5);
    }
    if (recenter) out = apply_affine(out, {1.0, -grid_mean(out)});
    return out;
}

namespace {

// ln of the integral over one cell of (cell density model) * gaussian_beta(y - x).
// Closed form: log-linear cells pair with the gaussian MGF, ramp cells with
// first-moment gaussian integrals.
double log_cell_kernel(const DensityModel& model, const std::vector<double>& logd, double h,
                       double x_cell, std::size_t c, double y, double beta) {
    const double l0 = logd[c], l1 = logd[c + 1];
    const bool f0 = l0 > kNegInf, f1 = l1 > kNegInf;
    const double cc = y - x_cell;  // kernel center in cell coordinates
    if (f0 && f1) {
        const double s = (l1 - l0) / h;
        const double shift = s * beta * beta;
        const double lm = gauss::log_mass((-cc - shift) / beta, (h - cc - shift) / beta);
        return l0 + s * cc + 0.5 * s * s * beta * beta + lm;
    }
    if (f0 || f1) {
        const double w0 = f0 ? std::exp(l0) : 0.0;
        const double w1 = f1 ? std::exp(l1) : 0.0;
        const double t0 = (0.0 - cc) / beta, t1 = (h - cc) / beta;
        const double dphi = gauss::cdf(t1) - gauss::cdf(t0);
        const double dpdf = gauss::pdf(t1) - gauss::pdf(t0);
        const double mom0 = dphi;
        const double mom1 = cc * dphi - beta * dpdf;  // integral of u * kernel
        const double val = w0 * mom0 + (w1 - w0) / h * mom1;
        return val > 0.0 ? std::log(val) : kNegInf;
    }
    (void)model;
    return kNegInf;
}

}  // namespace

GridMeasure convolve_gaussian(const GridMeasure& m, double beta) {
    if (beta < 0.0 || !std::isfinite(beta))
        throw InvalidParameter("convolve_gaussian: beta must be finite and >= 0");
    if (beta == 0.0) return m;

    const double eps = 5e-11;
    const double zk = -gauss::quantile(eps);
    const double pad = beta * zk;
    const std::size_t n = m.size();
    const double lo = m.xmin() - pad, hi = m.xmax() + pad;
    const double h_out = (hi - lo) / static_cast<double>(n - 1);

    DensityModel model(m);
    const double h_in = m.step;
    const std::size_t cells = n - 1;
    std::vector<double> top(cells);  // cheap per-cell bound pieces
    for (std::size_t c = 0; c < cells; ++c)
        top[c] = std::max(m.log_density[c], m.log_density[c + 1]);
    const double lead = std::log(h_in) - std::log(beta) - gauss::kLnSqrt2Pi;

    std::vector<double> logd(n);
    std::vector<double> terms;
    terms.reserve(cells);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = lo + h_out * static_cast<double>(i);
        // pass 1: locate the dominating region with a cheap upper bound
        double best = kNegInf;
        for (std::size_t c = 0; c < cells; ++c) {
            if (!(top[c] > kNegInf)) continue;
            const double d = std::max(0.0, std::fabs(y - (m.node(c) + 0.5 * h_in)) - 0.5 * h_in);
            const double ub = top[c] - 0.5 * d * d / (beta * beta) + lead;
            if (ub > best) best = ub;
        }
        if (!(best > kNegInf)) {
            logd[i] = kNegInf;
            continue;
        }
        // pass 2: exact cell integrals where they can matter
        terms.clear();
        double mx = kNegInf;
        for (std::size_t c = 0; c < cells; ++c) {
            if (!(top[c] > kNegInf)) continue;
            const double d = std::max(0.0, std::fabs(y - (m.node(c) + 0.5 * h_in)) - 0.5 * h_in);
            if (top[c] - 0.5 * d * d / (beta * beta) + lead < best - 46.0) continue;
            const double lt = log_cell_kernel(model, m.log_density, h_in, m.node(c), c, y, beta);
            if (lt > kNegInf) {
                terms.push_back(lt);
                mx = std::max(mx, lt);
            }
        }
        if (terms.empty()) {
            logd[i] = kNegInf;
            continue;
        }
        double acc = 0.0;
        for (double lt : terms) acc += std::exp(lt - mx);
        logd[i] = mx + std::log(acc);
    }
    return finalize_measure(lo, h_out, std::move(logd), m.is_log_concave, 1e-5);
}

GridMeasure scale_mix(const GridMeasure& m, double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw InvalidParameter("scale_mix: lambda must lie in (0, 1]");
    if (lambda == 1.0) return m;
    GridMeasure scaled = apply_affine(m, {std::sqrt(lambda), 0.0});
    return convolve_gaussian(scaled, std::sqrt(1.0 - lambda));
}

// ---------------------------------------------------------------------------
// trapezoid moments

double grid_mean(const GridMeasure& m) { return grid_moment(m, 1, 0.0); }

double grid_variance(const GridMeasure& m) {
    const double mu = grid_mean(m);
    return grid_moment(m, 2, mu);
}

double grid_moment(const GridMeasure& m, int order, double center) {
    const std::size_t n = m.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = trapezoid_weight(i, n, m.step) * m.density(i);
        acc += w * std::pow(m.node(i) - center, order);
    }
    return acc;
}

double grid_abs_moment_about(const GridMeasure& m, double point) {
    const std::size_t n = m.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = trapezoid_weight(i, n, m.step) * m.density(i);
        acc += w * std::fabs(m.node(i) - point);
    }
    return acc;
}

}  // namespace logconc
