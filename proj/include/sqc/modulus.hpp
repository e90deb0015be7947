#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqc/ballsys.hpp"
#include "sqc/measures.hpp"

namespace sqc {

/// Finite weighted curve family. Curves are ordered point sequences.
struct CurveFamily {
    std::vector<std::vector<PointId>> curves;
    std::vector<std::vector<double>> mass;  // m_gamma per curve point, sums to 1
    std::vector<double> weight;             // d gamma
    std::vector<double> length;             // optional, for rectifiable families

    std::size_t size() const { return curves.size(); }
    bool empty() const { return curves.empty(); }
    /// Append a curve with normalized counting measure.
    void add(std::vector<PointId> curve, double w, double len = -1.0);
    double total_weight() const;
    /// Throws std::invalid_argument when masses or weights violate the invariants.
    void validate() const;
};

// ---- generic convex program -----------------------------------------------------

/// minimize sum_g w_g x_g^p subject to A x >= 1, x >= 0 (A nonnegative, sparse rows).
struct Program {
    std::size_t vars = 0;
    std::vector<double> w;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
};

struct ProgramSolution {
    std::vector<double> x;       // primal feasible point
    std::vector<double> lambda;  // dual multipliers per row
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;  // (primal - dual) / primal
    long iterations = 0;
    bool converged = false;
};

/// Dual coordinate ascent (p > 1) or proximal cyclic half-space projections (p = 1).
/// lambda0, when not empty, warm-starts the multipliers.
ProgramSolution solve_program(const Program& prog, double p, double tol, long max_sweeps = 100000,
                              const std::vector<double>& lambda0 = {});

// ---- moduli ---------------------------------------------------------------------------

enum class ShiftEncoding {
    constraint,  // covers of each curve by l-enlarged balls must carry weight >= 1
    objective,   // objective sums the shifted gauge over the k-cover
    literal,     // sum over every ball whose l-enlargement meets the curve (relaxation)
};

const char* to_string(ShiftEncoding e);
ShiftEncoding parse_encoding(const std::string& s);

struct ModulusOptions {
    double p = 2.0;
    AdmissibleFn k = AdmissibleFn::zero();
    AdmissibleFn l = AdmissibleFn::zero();
    AdmissibleFn m = AdmissibleFn::zero();
    int n = 0;
    double tol = 1e-6;
    ShiftEncoding encoding = ShiftEncoding::constraint;
    long max_sweeps = 100000;
    int max_cut_rounds = 200;
};

struct ModulusReport {
    int n = 0;
    double p = 0.0;
    std::string k_name, l_name, m_name;
    double value = 0.0;  // primal value; kInfinity when infeasible
    double dual = 0.0;
    double gap = 0.0;
    long iterations = 0;
    int cut_rounds = 0;
    bool converged = false;
    bool infeasible = false;
    std::string diagnostic;
    std::vector<double> gauge;       // rho on the depth-n layer
    std::vector<double> multiplier;  // per curve (sum over its rows)
    double min_admissibility = 0.0;  // min over curves of the cover weight of the reported gauge
};

/// Combinatorial p-modulus of the family at the depth-n layer.
ModulusReport solve_modulus(const BallSystem& sys, const CurveFamily& family, const ModulusOptions& opt);

/// Packing variant: the objective sums over maximal (k, n)-packings (restart average; exact for
/// tilings with k = 0, where it coincides with solve_modulus).
ModulusReport solve_packing_modulus(const BallSystem& sys, const CurveFamily& family, const ModulusOptions& opt,
                                    int restarts = 4, std::uint64_t seed = 1);

// ---- diffusivity --------------------------------------------------------------------

struct DiffusivityRow {
    int n = 0;
    double tau = 0.0;  // sup over balls of depth >= n
    bool infinite = false;
};

struct DiffusivityReport {
    std::vector<DiffusivityRow> rows;
    double tau_proxy = 0.0;  // max over the top half of the range
    bool diffuse = false;
    AdmissibleFn l_implied = AdmissibleFn::zero();  // q (+) r (+) k
    double lower_bound = 0.0;                       // (1/tau) * total weight
    std::string diagnostic;
};

DiffusivityReport check_diffusivity(const BallSystem& sys, const CurveFamily& family, double p,
                                    const AdmissibleFn& r, int n_lo, int n_hi,
                                    const AdmissibleFn& k = AdmissibleFn::zero());

struct BourdonBound {
    double p = 0.0;
    std::string r_name;
    double constant = 0.0;  // max over depths of C e^eta e^{(p'-p) delta + r(delta)}
};

struct BourdonReport {
    double eta = 0.0;
    double c = 0.0;  // sup length^{p-1} (1 - 1/e)^{1-p} for the first p requested
    std::vector<BourdonBound> bounds;
};

/// eta = max_b [log int 1{gamma meets b} d gamma - (1 - p') delta(b)] and the derived D(p, r) constants.
/// delta(b) is depth * log(base) on grids and the depth elsewhere.
BourdonReport check_diffusivity_bourdon(const BallSystem& sys, const CurveFamily& family, double p_prime, int n_lo,
                                        int n_hi, const std::vector<double>& ps = {},
                                        const std::vector<AdmissibleFn>& rs = {});

// ---- conformal dimension --------------------------------------------------------------

struct SlopeFit {
    double p = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // root mean square
    std::vector<double> log_values;
};

struct CdimOptions {
    std::vector<double> p_grid;
    int n_lo = 3;
    int n_hi = 8;
    ModulusOptions base;  // p and n are overwritten
    bool packing = false;
    int restarts = 4;
    double bisect_tol = 1e-3;
    int jobs = 1;
};

struct CdimEstimate {
    double p_star = 0.0;
    bool crossover = false;  // false: boundary of the grid returned
    double residual = 0.0;
    std::string method;  // "mod" or "pmod"
    std::vector<SlopeFit> fits;
    std::vector<ModulusReport> table;
};

SlopeFit fit_slope(const std::vector<double>& ns, const std::vector<double>& ys);

CdimEstimate estimate_cdim(const BallSystem& sys, const CurveFamily& family, const CdimOptions& opt);

}  // namespace sqc
