#include "logconc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "logconc/errors.hpp"

namespace logconc {

// ---------------------------------------------------------------------------
// ProfileTable

double ProfileTable::value_at(double x) const {
    if (abscissae.empty()) return 0.0;
    if (x <= abscissae.front()) return values.front();
    if (x >= abscissae.back()) return values.back();
    auto it = std::upper_bound(abscissae.begin(), abscissae.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - abscissae.begin());
    const double t = (x - abscissae[j - 1]) / (abscissae[j] - abscissae[j - 1]);
    return values[j - 1] + t * (values[j] - values[j - 1]);
}

double ProfileTable::inverse(double y) const {
    if (values.empty()) return 0.0;
    if (y >= values.front()) return abscissae.front() <= 0.0 ? 0.0 : abscissae.front();
    for (std::size_t j = 1; j < values.size(); ++j) {
        if (values[j] <= y) {
            const double v0 = values[j - 1], v1 = values[j];
            if (v0 <= v1 + 1e-300)  // flat step
                return abscissae[j];
            const double t = (v0 - y) / (v0 - v1);
            return abscissae[j - 1] + t * (abscissae[j] - abscissae[j - 1]);
        }
    }
    // below the sampled range: unreachable, report +inf so that consumers of
    // the inverse stay on the conservative side
    return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Spectral solver: symmetric tridiagonal reduction of -(w f')' = lambda w f
// with Neumann ends; node masses are trapezoid weights, conductances use the
// log-linear midpoint density. Constants span the kernel exactly.

namespace {

struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;  // size n-1
};

Tridiag build_operator(const GridMeasure& m) {
    const auto [lo, hi] = m.support_range();
    if (hi - lo + 1 < 8) throw InvalidParameter("spectral: support too small");
    const std::size_t n = hi - lo + 1;
    const double h = m.step;

    std::vector<double> mass(n), cond(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::exp(m.log_density[lo + i]);
        mass[i] = ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * h * w;
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double lmid = 0.5 * (m.log_density[lo + k] + m.log_density[lo + k + 1]);
        cond[k] = std::exp(lmid) / h;
    }

    Tridiag a;
    a.diag.assign(n, 0.0);
    a.off.assign(n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double kd = 0.0;
        if (i > 0) kd += cond[i - 1];
        if (i + 1 < n) kd += cond[i];
        a.diag[i] = kd / mass[i];
    }
    for (std::size_t k = 0; k + 1 < n; ++k)
        a.off[k] = -cond[k] / std::sqrt(mass[k] * mass[k + 1]);
    return a;
}

std::size_t sturm_count(const Tridiag& a, double sigma) {
    const std::size_t n = a.diag.size();
    std::size_t count = 0;
    double d = a.diag[0] - sigma;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::fabs(d) < 1e-300) d = -1e-300;
        d = (a.diag[i] - sigma) - a.off[i - 1] * a.off[i - 1] / d;
        if (d < 0.0) ++count;
    }
    return count;
}

// second-smallest eigenvalue by bisection
double second_eigenvalue(const Tridiag& a) {
    double gersh = 0.0;
    const std::size_t n = a.diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = a.diag[i];
        if (i > 0) r += std::fabs(a.off[i - 1]);
        if (i + 1 < n) r += std::fabs(a.off[i]);
        gersh = std::max(gersh, r);
    }
    double lo = -1e-12 * gersh, hi = gersh * (1.0 + 1e-12);
    while (sturm_count(a, hi) < 2) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, std::fabs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(a, mid) >= 2)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// one inverse-iteration pass for the residual diagnostic
double eigen_residual(const Tridiag& a, double lambda) {
    const std::size_t n = a.diag.size();
    std::vector<double> x(n), y(n);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (auto& v : x) v = unif(rng);

    auto solve_shifted = [&](std::vector<double>& rhs) {
        // Thomas elimination with tiny-pivot replacement
        std::vector<double> d(n), u(n - 1);
        const double shift = lambda * (1.0 + 1e-9) + 1e-300;
        for (std::size_t i = 0; i < n; ++i) d[i] = a.diag[i] - shift;
        for (std::size_t i = 0; i + 1 < n; ++i) u[i] = a.off[i];
        for (std::size_t i = 1; i < n; ++i) {
            if (std::fabs(d[i - 1]) < 1e-280) d[i - 1] = 1e-280;
            const double f = a.off[i - 1] / d[i - 1];
            d[i] -= f * u[i - 1];
            rhs[i] -= f * rhs[i - 1];
        }
        if (std::fabs(d[n - 1]) < 1e-280) d[n - 1] = 1e-280;
        rhs[n - 1] /= d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - u[i] * rhs[i + 1]) / d[i];
    };

    for (int pass = 0; pass < 4; ++pass) {
        solve_shifted(x);
        double norm = 0.0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        for (auto& v : x) v /= norm;
    }
    // A x
    for (std::size_t i = 0; i < n; ++i) {
        double v = a.diag[i] * x[i];
        if (i > 0) v += a.off[i - 1] * x[i - 1];
        if (i + 1 < n) v += a.off[i] * x[i + 1];
        y[i] = v;
    }
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho += x[i] * y[i];
    double def = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - rho * x[i];
        def += e * e;
    }
    return std::sqrt(def) / std::max(rho, 1e-300);
}

GridMeasure coarsen(const GridMeasure& m) {
    std::vector<double> logd;
    logd.reserve((m.size() + 1) / 2);
    for (std::size_t i = 0; i < m.size(); i += 2) logd.push_back(m.log_density[i]);
    return finalize_measure(m.x0, 2.0 * m.step, std::move(logd), m.is_log_concave);
}

}  // namespace

double spectral_gap_single_grid(const GridMeasure& m, double* residual) {
    const Tridiag a = build_operator(m);
    const double lambda = second_eigenvalue(a);
    if (!(lambda > 0.0)) throw NonConverged("spectral: nonpositive gap");
    if (residual) *residual = eigen_residual(a, lambda);
    return lambda;
}

SpectralResult spectral_poincare(const GridMeasure& m) {
    if (!std::isfinite(grid_variance(m)))
        throw InvalidParameter("spectral_poincare: infinite variance");
    double residual = 0.0;
    const double lam_fine = spectral_gap_single_grid(m, &residual);
    const GridMeasure half = coarsen(m);
    const double lam_coarse = spectral_gap_single_grid(half);

    const double cp_fine = 1.0 / lam_fine;
    const double cp_coarse = 1.0 / lam_coarse;
    if (std::fabs(cp_fine - cp_coarse) > 0.05 * cp_fine)
        throw NonConverged("spectral_poincare: two-grid estimates differ by more than 5%");

    SpectralResult r;
    r.richardson_estimate = cp_fine + (cp_fine - cp_coarse) / 3.0;
    r.c_p = r.richardson_estimate;
    r.eigenvalue = 1.0 / r.c_p;
    r.grid_fine = m.size();
    r.grid_coarse = half.size();
    r.residual = residual;
    return r;
}

// ---------------------------------------------------------------------------
// Profiles

ProfileTable isoperimetric_profile(const GridMeasure& m, std::size_t n_points) {
    if (!m.is_log_concave)
        throw NotLogConcave("isoperimetric_profile: needs the log-concavity flag");
    if (n_points < 2) throw InvalidParameter("isoperimetric_profile: need >= 2 points");
    DensityModel model(m);
    const double total = model.total_mass();
    ProfileTable p;
    p.kind = ProfileTable::Kind::isoperimetric;
    p.abscissae.reserve(n_points);
    p.values.reserve(n_points);
    for (std::size_t k = 1; k <= n_points; ++k) {
        const double u = 0.5 * static_cast<double>(k) / static_cast<double>(n_points);
        const double left = model.pdf(model.quantile(u));
        const double right = model.pdf(model.quantile(1.0 - u));
        p.abscissae.push_back(u);
        p.values.push_back(std::min(left, right) / total);
    }
    return p;
}

double cheeger_constant(const GridMeasure& m) {
    if (!m.is_log_concave) throw NotLogConcave("cheeger_constant: needs the log-concavity flag");
    DensityModel model(m);
    const double total = model.total_mass();
    auto ratio = [&](double u) {
        const double left = model.pdf(model.quantile(u));
        const double right = model.pdf(model.quantile(1.0 - u));
        const double is = std::min(left, right) / total;
        return is > 0.0 ? u / is : 0.0;
    };
    const std::size_t scan = 512;
    double best = 0.0, best_u = 0.5;
    for (std::size_t k = 1; k <= scan; ++k) {
        const double u = 0.5 * static_cast<double>(k) / static_cast<double>(scan);
        const double v = ratio(u);
        if (v > best) {
            best = v;
            best_u = u;
        }
    }
    // golden-section refinement around the scan argmax
    const double gr = 0.6180339887498949;
    double a = std::max(1e-9, best_u - 0.5 / scan);
    double b = std::min(0.5, best_u + 0.5 / scan);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = ratio(x1), f2 = ratio(x2);
    for (int it = 0; it < 70; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = ratio(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = ratio(x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

ProfileTable concentration_profile(const GridMeasure& m, const std::vector<double>& radii) {
    if (radii.empty() || radii.front() < 0.0 || !std::is_sorted(radii.begin(), radii.end()))
        throw InvalidParameter("concentration_profile: radii must be increasing and >= 0");
    DensityModel model(m);
    const double total = model.total_mass();
    const double med = model.quantile(0.5);
    ProfileTable p;
    p.kind = ProfileTable::Kind::concentration;
    p.abscissae = radii;
    p.values.reserve(radii.size());
    for (double r : radii) {
        const double left = 1.0 - model.cdf(med + r) / total;   // A = (-inf, median]
        const double right = model.cdf(med - r) / total;        // A = [median, +inf)
        p.values.push_back(std::max(0.0, std::max(left, right)));
    }
    return p;
}

ProfileTable weak_beta_from_profile(const ProfileTable& concentration, Centering centering) {
    if (concentration.kind != ProfileTable::Kind::concentration)
        throw InvalidParameter("weak_beta_from_profile: expects a concentration profile");
    const std::size_t k = 160;
    ProfileTable out;
    out.kind = ProfileTable::Kind::weak_beta;
    out.abscissae.reserve(k);
    out.values.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        // log-spaced from 0.5e-6 up to just below 1/2
        const double expo = -6.0 * static_cast<double>(k - 1 - j) / static_cast<double>(k - 1);
        double s = 0.5 * std::pow(10.0, expo);
        if (j + 1 == k) s = 0.5 * (1.0 - 1e-9);
        const double beta = (centering == Centering::median)
                                ? concentration.inverse(0.5 * s)
                                : 2.0 * concentration.inverse(0.25 * s);
        out.abscissae.push_back(s);
        out.values.push_back(beta);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Moments and density-ratio functionals

namespace {

struct TailExtended {
    // log-density evaluator that linearly continues clipped tails of the
    // reference; genuine compact boundaries (edge density comparable to the
    // mode) are not extended.
    const DensityModel* model;
    double lo, hi;           // support ends
    double slope_lo, slope_hi;
    bool extend_lo, extend_hi;

    double log_pdf(double x) const {
        if (x < lo) return extend_lo ? model->log_pdf(lo) + slope_lo * (lo - x) : kNegInf;
        if (x > hi) return extend_hi ? model->log_pdf(hi) - slope_hi * (x - hi) : kNegInf;
        return model->log_pdf(x);
    }
};

TailExtended make_extended(const GridMeasure& m, const DensityModel& model) {
    TailExtended t;
    t.model = &model;
    const auto [ilo, ihi] = m.support_range();
    t.lo = m.node(ilo);
    t.hi = m.node(ihi);
    double max_ld = kNegInf;
    for (double v : m.log_density)
        if (v > kNegInf) max_ld = std::max(max_ld, v);
    const double genuine_gap = std::log(1e-6);  // edge within 1e-6 of the mode => hard boundary
    t.extend_lo = m.log_density[ilo] - max_ld < genuine_gap;
    t.extend_hi = m.log_density[ihi] - max_ld < genuine_gap;
    auto slope_at = [&](std::size_t a, std::size_t b) {
        const double la = m.log_density[a], lb = m.log_density[b];
        if (!(la > kNegInf) || !(lb > kNegInf)) return 0.0;
        return (lb - la) / m.step;
    };
    t.slope_lo = ilo + 1 <= ihi ? std::max(0.0, slope_at(ilo, ilo + 1)) : 0.0;
    t.slope_hi = ihi >= 1 ? std::max(0.0, -slope_at(ihi - 1, ihi)) : 0.0;
    return t;
}

std::vector<double> merged_nodes(const GridMeasure& a, const GridMeasure& b) {
    std::vector<double> xs;
    xs.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i) xs.push_back(a.node(i));
    for (std::size_t i = 0; i < b.size(); ++i) xs.push_back(b.node(i));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double u, double v) { return std::fabs(u - v) < 1e-14; }),
             xs.end());
    return xs;
}

}  // namespace

MomentReport moments(const GridMeasure& m, const GridMeasure* reference, double p) {
    MomentReport r;
    r.mean = grid_mean(m);
    r.variance = grid_variance(m);
    DensityModel model(m);
    r.median = model.quantile(0.5);
    r.first_abs_moment_about_median = grid_abs_moment_about(m, r.median);
    if (!reference) return r;
    if (!(p > 1.0)) throw InvalidParameter("moments: need p > 1 for the ratio moment");

    DensityModel ref_model(*reference);
    const TailExtended mu = make_extended(*reference, ref_model);

    // absolute continuity on the grid: nu-mass beyond genuine mu boundaries
    double escaped = 0.0;
    if (!mu.extend_lo) escaped += model.cdf(mu.lo) / model.total_mass();
    if (!mu.extend_hi) escaped += 1.0 - model.cdf(mu.hi) / model.total_mass();
    if (escaped > 1e-12)
        throw NotAbsolutelyContinuous("moments: nu has mass on mu-null nodes");

    const std::vector<double> xs = merged_nodes(m, *reference);
    const double lmass_nu = std::log(model.total_mass());
    std::vector<double> ratio_int(xs.size(), 0.0), ent_int(xs.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lnu = model.log_pdf(xs[i]) - lmass_nu;
        const double lmu = mu.log_pdf(xs[i]);
        if (lnu <= -690.0 && lmu <= -690.0) continue;  // both below 1e-300
        if (lnu > kNegInf && lmu > kNegInf) {
            ratio_int[i] = std::exp(p * lnu + (1.0 - p) * lmu);
            ent_int[i] = std::exp(lnu) * (lnu - lmu);
        } else if (lnu > kNegInf) {
            // inside the 1e-12 allowance; treated as zero contribution
        }
    }
    double mp_p = 0.0, ent = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double w = 0.5 * (xs[i + 1] - xs[i]);
        mp_p += w * (ratio_int[i] + ratio_int[i + 1]);
        ent += w * (ent_int[i] + ent_int[i + 1]);
    }
    r.m_p = std::pow(std::max(mp_p, 0.0), 1.0 / p);
    r.relative_entropy = std::max(0.0, ent);
    return r;
}

double bobkov_ledoux_tail(double c_p, double a, double epsilon) {
    if (!(c_p > 0.0)) throw InvalidParameter("bobkov_ledoux_tail: c_p must be positive");
    if (a < 0.0) throw InvalidParameter("bobkov_ledoux_tail: a must be >= 0");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw InvalidParameter("bobkov_ledoux_tail: epsilon must lie in (0, 1]");
    return (4.0 - epsilon) / epsilon * std::exp(-(2.0 - epsilon) * a / std::sqrt(c_p));
}

std::vector<double> default_radii(const GridMeasure& m, std::size_t n_points) {
    const double span = m.xmax() - m.xmin();
    std::vector<double> r;
    r.reserve(n_points);
    r.push_back(0.0);
    const double lo = span * 1e-4;
    for (std::size_t j = 0; j + 1 < n_points; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(n_points - 2);
        r.push_back(lo * std::pow(span / lo, t));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Exhaustive search over unions of at most two grid intervals.

namespace {

constexpr std::size_t kBruteLimit = 300;

struct AtomTable {
    std::vector<double> w;        // node densities (normalized model)
    std::vector<double> prefix;   // prefix[i] = mass of atoms < i
    double total = 0.0;
};

AtomTable atoms_for(const GridMeasure& m, const DensityModel& model) {
    AtomTable t;
    const std::size_t n = m.size();
    t.w.resize(n);
    t.prefix.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        t.w[i] = model.pdf(m.node(i)) / model.total_mass();
        t.prefix[i + 1] = t.prefix[i] + model.atom_mass(i) / model.total_mass();
    }
    t.total = t.prefix[n];
    return t;
}

}  // namespace

BruteForceProfiles brute_force_isoperimetric(const GridMeasure& m, std::size_t mass_bins) {
    const std::size_t n = m.size();
    if (n > kBruteLimit)
        throw InvalidParameter("brute_force_isoperimetric: grid too large for exhaustive search");
    DensityModel model(m);
    const AtomTable t = atoms_for(m, model);

    std::vector<double> best(mass_bins, kPosInf), rep(mass_bins, 0.0);
    auto offer = [&](double mass, double boundary) {
        if (!(mass > 0.0) || mass > 0.5 + 1e-12) return;
        std::size_t bin = static_cast<std::size_t>(std::min(
            static_cast<double>(mass_bins - 1), std::floor(mass / 0.5 * mass_bins)));
        if (boundary < best[bin]) {
            best[bin] = boundary;
            rep[bin] = mass;
        }
    };
    auto mass_of = [&](std::size_t i, std::size_t j) { return t.prefix[j + 1] - t.prefix[i]; };
    auto boundary_of = [&](std::size_t i, std::size_t j) {
        return (i > 0 ? t.w[i] : 0.0) + (j + 1 < n ? t.w[j] : 0.0);
    };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) offer(mass_of(i, j), boundary_of(i, j));
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t j1 = i1; j1 + 2 < n; ++j1) {
            const double m1 = mass_of(i1, j1), b1 = boundary_of(i1, j1);
            if (m1 > 0.5 + 1e-12) break;
            for (std::size_t i2 = j1 + 2; i2 < n; ++i2)
                for (std::size_t j2 = i2; j2 < n; ++j2)
                    offer(m1 + mass_of(i2, j2), b1 + boundary_of(i2, j2));
        }

    BruteForceProfiles out;
    for (std::size_t b = 0; b < mass_bins; ++b)
        if (best[b] < kPosInf) {
            out.iso_u.push_back(rep[b]);
            out.iso_value.push_back(best[b]);
        }
    return out;
}

double brute_force_concentration(const GridMeasure& m, double radius) {
    const std::size_t n = m.size();
    if (n > kBruteLimit)
        throw InvalidParameter("brute_force_concentration: grid too large for exhaustive search");
    if (radius < 0.0) throw InvalidParameter("brute_force_concentration: negative radius");
    DensityModel model(m);
    const AtomTable t = atoms_for(m, model);
    const double total = model.total_mass();

    auto enlarged_mass = [&](double a1, double b1, double a2, double b2, bool two) {
        a1 -= radius;
        b1 += radius;
        if (!two) return model.mass_between(a1, b1) / total;
        a2 -= radius;
        b2 += radius;
        if (a2 <= b1)  // merged
            return model.mass_between(a1, std::max(b1, b2)) / total;
        return (model.mass_between(a1, b1) + model.mass_between(a2, b2)) / total;
    };
    auto mass_of = [&](std::size_t i, std::size_t j) { return t.prefix[j + 1] - t.prefix[i]; };

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (mass_of(i, j) < 0.5 - 1e-12) continue;
            const double esc = 1.0 - enlarged_mass(m.node(i), m.node(j), 0, 0, false);
            worst = std::max(worst, esc);
        }
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t j1 = i1; j1 + 2 < n; ++j1) {
            const double m1 = mass_of(i1, j1);
            for (std::size_t i2 = j1 + 2; i2 < n; ++i2) {
                if (m1 + mass_of(i2, n - 1) < 0.5 - 1e-12) break;
                for (std::size_t j2 = i2; j2 < n; ++j2) {
                    if (m1 + mass_of(i2, j2) < 0.5 - 1e-12) continue;
                    const double esc = 1.0 - enlarged_mass(m.node(i1), m.node(j1), m.node(i2),
                                                           m.node(j2), true);
                    worst = std::max(worst, esc);
                }
            }
        }
    return worst;
}

}  // namespace logconc
