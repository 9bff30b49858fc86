#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace logconc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// A probability measure on a uniform 1D grid, stored through its log-density.
// Nodes are implicit: x_i = x0 + i*step. Zero density is the -inf sentinel.
// Values are immutable after construction; every transform returns a fresh
// measure.
struct GridMeasure {
    double x0 = 0.0;
    double step = 1.0;
    std::vector<double> log_density;
    std::vector<double> cdf;  // trapezoid cumulative, cdf.back() == 1
    bool is_log_concave = false;

    std::size_t size() const { return log_density.size(); }
    double node(std::size_t i) const { return x0 + step * static_cast<double>(i); }
    double xmin() const { return x0; }
    double xmax() const { return node(size() - 1); }
    double density(std::size_t i) const;
    double mass_trapezoid() const;
    // index range [lo, hi] of nodes with positive density
    std::pair<std::size_t, std::size_t> support_range() const;
};

// Normalizes a raw log-density table into a GridMeasure (trapezoid mass 1,
// cdf cache filled). Drift below silent_drift is absorbed quietly; throws
// NonNormalizable beyond it. With require_unit=false any positive mass is
// accepted (used by realize, which always renormalizes).
GridMeasure finalize_measure(double x0, double step, std::vector<double> log_density,
                             bool is_log_concave, double silent_drift = kPosInf);

// Grid measure from plain density samples (suite constructions, tests).
GridMeasure measure_from_density(double x0, double step, const std::vector<double>& density,
                                 bool is_log_concave);

// Second-difference test of the log-concavity invariant.
bool log_concavity_holds(const GridMeasure& m, double tol_scale = 1e-8);

// Throws if any structural invariant is violated (mass, cdf monotone,
// concavity flag versus second differences).
void validate(const GridMeasure& m);

// ---------------------------------------------------------------------------
// Continuous view of a GridMeasure: within each cell the density is the
// exponential of the linear interpolation of the log-density (a linear ramp
// when one endpoint has zero density). CDF and quantiles are exact integrals
// of that model, so density and CDF are always mutually consistent.
class DensityModel {
public:
    explicit DensityModel(const GridMeasure& m);

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;          // in [0, total_mass]
    double total_mass() const { return prefix_.back(); }
    double quantile(double u) const;     // u in (0,1), of the normalized model
    double median() const { return quantile(0.5); }
    double xmin() const { return x0_; }
    double xmax() const { return x0_ + step_ * static_cast<double>(n_ - 1); }
    double step() const { return step_; }
    std::size_t size() const { return n_; }
    double node(std::size_t i) const { return x0_ + step_ * static_cast<double>(i); }
    double mass_between(double a, double b) const;
    // mass of [x_i - step/2, x_i + step/2] clipped to the domain
    double atom_mass(std::size_t i) const;

private:
    double cell_mass(std::size_t c) const;
    double cell_cdf(std::size_t c, double t) const;      // t in [0, step]
    double cell_quantile(std::size_t c, double mass) const;

    double x0_, step_;
    std::size_t n_;
    std::vector<double> logd_;
    std::vector<double> prefix_;  // prefix_[i] = model mass over [x0, x_i]
};

// ---------------------------------------------------------------------------
// Symbolic measure families.

struct GridRequest {
    std::size_t n = 4096;
    double tail_mass = 1e-10;  // total mass allowed outside the realized domain
};

struct MeasureSpec {
    enum class Family {
        gaussian,
        exponential_symmetric,
        uniform,
        potential,
        gaussian_mixture,
        radial,
    };

    Family family = Family::gaussian;
    double mean = 0.0, sd = 1.0;      // gaussian
    double scale = 1.0;               // exponential_symmetric
    double a = -1.0, b = 1.0;         // uniform
    std::vector<double> mix_weights, mix_means, mix_sds;
    std::vector<double> pot_x, pot_v;  // potential (and radial potential over r>=0)
    int dim = 1;                       // radial dimension n
    GridRequest grid;

    static MeasureSpec gaussian_spec(double mean, double sd, std::size_t n = 4096);
    static MeasureSpec exponential_spec(double scale, std::size_t n = 4096);
    static MeasureSpec uniform_spec(double a, double b, std::size_t n = 4096);
    static MeasureSpec mixture_spec(std::vector<double> w, std::vector<double> means,
                                    std::vector<double> sds, std::size_t n = 4096);
    static MeasureSpec potential_spec(std::vector<double> x, std::vector<double> v,
                                      std::size_t n = 4096);
    static MeasureSpec radial_spec(int dim, std::vector<double> r, std::vector<double> v,
                                   std::size_t n = 4096);
    std::string label() const;
};

GridMeasure realize(const MeasureSpec& spec);

// ---------------------------------------------------------------------------
// Transforms. All preserve normalization and the log-concavity flag where the
// operation preserves log-concavity.

struct AffineMap1D {
    double scale = 1.0;  // nonzero
    double shift = 0.0;
};

// law of scale*X + shift
GridMeasure apply_affine(const GridMeasure& m, const AffineMap1D& t);

// normalized restriction to [a, b]; optionally recentered to mean zero
GridMeasure truncate(const GridMeasure& m, double a, double b, bool recenter = false);

// law of X + beta*G, G standard gaussian (exact per-cell kernel integrals)
GridMeasure convolve_gaussian(const GridMeasure& m, double beta);

// law of sqrt(lambda)*X + sqrt(1-lambda)*G, lambda in (0,1]
GridMeasure scale_mix(const GridMeasure& m, double lambda);

// Moment helpers over the trapezoid weights (quadrature convention for all
// reported moments).
double grid_mean(const GridMeasure& m);
double grid_variance(const GridMeasure& m);
double grid_abs_moment_about(const GridMeasure& m, double point);
double grid_moment(const GridMeasure& m, int order, double center);

}  // namespace logconc
