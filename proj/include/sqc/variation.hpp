#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sqc/ballsys.hpp"
#include "sqc/function.hpp"
#include "sqc/measures.hpp"
#include "sqc/modulus.hpp"

namespace sqc {

struct VariationRow {
    int n = 0;
    double value = 0.0;
    bool exact = false;
};

/// Packing pre-content of the oscillation gauge of f, one row per depth in [n_lo, n_hi].
std::vector<VariationRow> p_variation(const BallSystem& sys, std::shared_ptr<const SampledFunction> f,
                                      const PointSet& K, double p, const AdmissibleFn& k, const AdmissibleFn& l,
                                      int n_lo, int n_hi, int restarts = 16, std::uint64_t seed = 1);

/// sup_K |f| + V(f)^(1/p) at depth n.
double seminorm(const BallSystem& sys, std::shared_ptr<const SampledFunction> f, const PointSet& K, double p,
                const AdmissibleFn& k, const AdmissibleFn& l, int n, int restarts = 16, std::uint64_t seed = 1);

struct MultiplicativeCheck {
    bool holds = false;
    double lhs = 0.0;    // ||fg||
    double rhs = 0.0;    // ||f|| ||g||
    double slack = 0.0;  // rhs - lhs
};

MultiplicativeCheck multiplicative_check(const BallSystem& sys, const SampledFunction& f, const SampledFunction& g,
                                         const PointSet& K, double p, const AdmissibleFn& k, const AdmissibleFn& l,
                                         int n, int restarts = 16, std::uint64_t seed = 1);

struct Condenser {
    PointSet C, d0, d1;
};

/// Throws std::invalid_argument when the boundary sets overlap each other or C,
/// or are not adjacent to C.
void validate_condenser(const GridSystem& g, const Condenser& cond);

/// C = interior columns of the unit square, d0 / d1 = leftmost / rightmost ground column.
Condenser square_condenser(const GridSystem& g);

/// True when a chain of face-adjacent cells inside C joins d0 to d1.
bool condenser_connected(const GridSystem& g, const Condenser& cond);

enum class CapacityMethod { smoothed, subgradient };

struct CapacityOptions {
    double p = 2.0;
    AdmissibleFn k = AdmissibleFn::zero();
    AdmissibleFn l = AdmissibleFn::zero();
    int n = 0;
    double tol = 1e-4;
    long max_iterations = 200000;
    CapacityMethod method = CapacityMethod::smoothed;
};

struct CapacityResult {
    double value = 0.0;  // objective of the returned feasible f
    bool disconnected = false;
    bool converged = false;
    long iterations = 0;
    std::vector<double> vertex_values;  // f on the ground vertex lattice, axis 0 fastest
    SampledFunction f;                  // corner samples of the same f
    std::string diagnostic;
};

/// Minimizes V(f)(C) over the fixed depth-n packing of C; value is the exact objective of the returned f.
CapacityResult capacity(const GridSystem& g, const Condenser& cond, const CapacityOptions& opt);

/// Objective of the capacity problem for given vertex values (for candidates and tests).
double capacity_objective(const GridSystem& g, const Condenser& cond, const CapacityOptions& opt,
                          const std::vector<double>& vertex_values);

struct CapacityGap {
    double pmod = 0.0;
    double cap = 0.0;
    double gap = 0.0;  // cap - pmod
    bool holds = false;
    bool disconnected = false;
    std::vector<double> vertex_values;  // capacity minimizer on the ground vertex lattice
};

CapacityGap capacity_modulus_gap(const GridSystem& g, const Condenser& cond, const CurveFamily& joining,
                                 const ModulusOptions& mod, const CapacityOptions& cap);

struct ThresholdScan {
    std::vector<SlopeFit> fits;
    double threshold = 0.0;
    bool crossover = false;
    double expected = 0.0;  // tr(alpha) / mu_i
};

/// Slopes of log V_p(x_i) against n; the sign change of the slope is the empirical threshold.
ThresholdScan coordinate_threshold_scan(const GridSystem& g, int axis, const std::vector<double>& p_grid, int n_lo,
                                        int n_hi, const AdmissibleFn& k = AdmissibleFn::zero(),
                                        const AdmissibleFn& l = AdmissibleFn::zero(), int restarts = 1);

}  // namespace sqc
