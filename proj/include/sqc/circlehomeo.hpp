#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sqc/admissible.hpp"

namespace sqc {

enum class EpsilonKind { power, zero, list };

/// Level perturbations eps_j. Power kind is min((3+j)^-a, cap); a list is padded with zeros.
struct EpsilonSpec {
    EpsilonKind kind = EpsilonKind::power;
    double a = 0.5;
    double cap = 0.45;
    std::vector<double> values;

    double operator()(int j) const;
    void validate() const;
};

/// How the two children of a vertex get their factors.
enum class SignConvention {
    sibling,     // 1/2 + eta(w) eps, 1/2 - eta(w) eps: mass conserving
    independent  // one sign per child, Phi renormalized by its total mass
};

enum class SignSource { seeded, all_plus, explicit_list };

struct CascadeSpec {
    SignConvention convention = SignConvention::sibling;
    SignSource source = SignSource::seeded;
    std::uint64_t seed = 1;
    /// Explicit signs in heap order: vertex (depth d, index i) sits at (2^d - 1) + i.
    std::vector<int> signs;
    EpsilonSpec eps;
    int t = 20;

    void validate() const;
    /// eta at vertex (depth, index); the seeded value depends only on (seed, depth, index).
    int sign(int depth, std::uint64_t index) const;
    /// Factors of the left and right child of vertex (depth, index).
    void child_factors(int depth, std::uint64_t index, double& f0, double& f1) const;
};

/// Depth beyond which cascades are refused.
inline constexpr int kMaxCascadeDepth = 48;

/// Masses M(v) of the 2^t words of length t in binary order (unnormalized in independent mode).
/// Throws std::length_error for t > 48 or an array beyond memory reach.
std::vector<double> cascade_masses(const CascadeSpec& spec, int t);

/// |sum of masses - 1| with compensated summation (0 up to rounding for sibling cascades).
double mass_defect(const CascadeSpec& spec, int t);

/// Phi at k 2^-t, k = 0..2^t. Sibling cascades are bitwise stable under refinement.
std::vector<double> repartition(const CascadeSpec& spec, int t);

/// Pointwise Phi^t on [0, 1] by descending the tree; linear below depth t.
class CascadeMap {
public:
    CascadeMap(CascadeSpec spec, int t);
    double operator()(double x) const;
    double total_mass() const { return total_; }
    const CascadeSpec& spec() const { return spec_; }

private:
    CascadeSpec spec_;
    int t_;
    double total_ = 1.0;
};

/// Envelope function at m = -log s for dyadic s = 2^-t:
/// max(log 2 + sum_{j<t} log(1+2eps_j), log 2 - sum_{j<=t} log(1-2eps_j)).
double envelope_v(const EpsilonSpec& eps, double m);

/// Envelope valid at every real scale m (also m <= 0):
/// 2 log 2 - sum_{0<=j<floor(m/log 2)+2} log(1-2eps_j).
double envelope_v_real(const EpsilonSpec& eps, double m);

struct ContinuityRow {
    int e = 0;  // s = 2^-e
    double s = 0.0;
    double l = 0.0;
    double L = 0.0;
    double v = 0.0;
    double upper_excess = 0.0;  // log l - log s - v
    double lower_excess = 0.0;  // log s - v - log L
    bool skipped = false;
};

struct ContinuityReport {
    std::vector<ContinuityRow> rows;
    double max_violation = 0.0;  // max excess over non-skipped rows
    bool holds = true;
};

/// Exact l(s), L(s) over all pairs of depth-t dyadics, for s = 2^-e, e in exponents.
ContinuityReport continuity_moduli(const CascadeSpec& spec, int t, const std::vector<int>& exponents);

struct NonacRow {
    double rho = 0.0;
    double lambda_b = 0.0;
    double lambda_phi_b = 0.0;
    bool holds = true;
    std::vector<double> lambda_b_by_depth;  // lambda(B_rho^s), s = 0..t
};

struct NonacReport {
    std::vector<NonacRow> rows;
    bool holds = true;
};

/// B_rho^t: maximal dyadic intervals of depth <= t with 2^|v| M(v) <= rho.
NonacReport nonac_statistic(const CascadeSpec& spec, int t, const std::vector<double>& rhos);

/// psi(x) = floor(x) + Phi_k(x - floor(x)), one cascade per unit interval k.
class PeriodicCascade {
public:
    PeriodicCascade(CascadeSpec base, int t) : base_(std::move(base)), t_(t) {}
    double operator()(double x);
    const CascadeSpec& base() const { return base_; }

private:
    CascadeSpec base_;
    int t_;
    std::map<long long, CascadeMap> units_;
};

struct QsRow {
    int n = 0;
    long trials = 0;
    double budget = 0.0;        // l(n)
    double max_observed = 0.0;  // |log image ratio|
    double max_excess = -std::numeric_limits<double>::infinity();
};

struct QsReport {
    std::vector<QsRow> rows;
    double max_excess = -std::numeric_limits<double>::infinity();
    long trials = 0;
    long resampled = 0;
    bool holds = true;
};

struct QsOptions {
    double K = 2.0;
    AdmissibleFn k = AdmissibleFn::logarithmic();
    int t = 24;
    long trials = 10000;
    std::uint64_t seed = 1;
    int n_lo = 2;
    int n_hi = 7;
    double box = 8.0;  // x sampled in [0, box)^2
};

/// Three-point test for Psi(x1, x2) = (psi1(x1), psi2(x2)) in the sup norm against
/// l(n) = k(n) + v(Kn + k(n)) + 4 v(Kn + 2 v(n)); excess = observed - l(n).
QsReport product_map_qs_test(const CascadeSpec& spec1, const CascadeSpec& spec2, const QsOptions& opt);

std::string to_string(SignConvention c);
std::string to_string(SignSource s);

}  // namespace sqc
