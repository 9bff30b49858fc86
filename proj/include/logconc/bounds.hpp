#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logconc/grid_measure.hpp"
#include "logconc/profile.hpp"

namespace logconc {

// What a bound formula bounds.
enum class BoundTarget {
    C_P,            // Poincare constant
    CheegerMedian,  // C'_C (median-centered Cheeger constant)
    CheegerMean,    // C_C
    beta_profile,
    alpha_profile,
    tail,
    distance,
};

std::string target_name(BoundTarget t);

// One evaluated bound. Failed preconditions produce the +inf sentinel and an
// inert certificate; chains record composed bounds.
struct BoundCertificate {
    std::string formula_id;
    BoundTarget target = BoundTarget::CheegerMedian;
    std::map<std::string, double> inputs;
    double value = kPosInf;
    bool preconditions_met = false;
    std::string diagnostics;
    std::vector<BoundCertificate> chain;
};

struct BoundInputs {
    std::map<std::string, double> scalars;
    std::map<std::string, const ProfileTable*> profiles;

    BoundInputs& set(const std::string& k, double v) {
        scalars[k] = v;
        return *this;
    }
    BoundInputs& set_profile(const std::string& k, const ProfileTable* p) {
        profiles[k] = p;
        return *this;
    }
};

struct FormulaInfo {
    std::string id;
    BoundTarget target;
    std::vector<std::string> scalar_inputs;
    std::vector<std::string> profile_inputs;
    std::string note;  // closed form, spelled out
};

// The static catalog (ids, targets, required inputs).
const std::vector<FormulaInfo>& formula_catalog();

// Evaluates one catalog formula. Throws UnknownFormula / MissingInput; failed
// preconditions return an inert certificate instead of throwing.
BoundCertificate evaluate(const std::string& formula_id, const BoundInputs& in);

// true iff cert.value >= oracle * (1 - slack); throws on inert certificates.
// tightness (value / oracle) is reported through the optional out-parameter.
bool verify_against_oracle(const BoundCertificate& cert, double oracle_value, double slack,
                           double* tightness = nullptr);

// ---------------------------------------------------------------------------
// best_bound: evaluate every applicable entry for a measure given a context
// of available oracle values, profiles, and reference measures.

struct ReferenceContext {
    std::string name;
    const GridMeasure* measure = nullptr;
    bool is_standard_gaussian = false;
    std::optional<double> c_p, cheeger;      // oracle values of the reference
    std::optional<ProfileTable> concentration;  // reference concentration profile
    // quantities of the target measure relative to this reference
    std::optional<double> m_p;
    double p = 2.0;
    std::optional<double> relative_entropy;
    std::optional<double> d_tv, d_w1, d_dud, d_bl, d_lp;
};

struct BoundContext {
    std::optional<double> own_c_p;       // oracle C_P of the measure itself
    std::optional<ProfileTable> own_concentration;
    std::vector<ReferenceContext> references;
};

BoundCertificate best_bound(BoundTarget target, const GridMeasure& m, const BoundContext& ctx);

// ---------------------------------------------------------------------------
// Input builders used by best_bound and the verification suites.

// Weak (2,2) rate from the potential: beta(s) = (4R^2/pi^2) exp(Osc_R V) with
// R chosen so that 2 nu(|x - center| > R) = s.
double weak22_beta(const GridMeasure& m, double s);

// sup over the grid of the density ratio a/b; +inf when a has mass where b
// vanishes.
double sup_density_ratio(const GridMeasure& a, const GridMeasure& b);

// An upper bound for the mean-centered Cheeger constant C_C from oracle
// values: min(2 C'_C, (16/pi) sqrt(C_P)).
double c_c_upper(double cheeger_median, double c_p);

}  // namespace logconc
