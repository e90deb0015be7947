#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "sqc/ballsys.hpp"
#include "sqc/function.hpp"
#include "sqc/modulus.hpp"

namespace oracle {

/// Constraint row: multiplicity per depth-n ball index.
using Row = std::map<std::size_t, double>;

/// Every cover of every curve by maximal arcs inside depth-n balls, as rows (duplicates removed).
/// Empty result with *uncoverable = true when some curve point lies in no ball.
std::vector<Row> arc_cover_rows(const sqc::BallSystem& sys, const sqc::CurveFamily& fam, int n, bool* uncoverable);

struct Bracket {
    double primal = 0.0;  // objective at a strictly feasible point
    double dual = 0.0;    // Lagrangian lower bound
    bool ok = false;
};

/// min sum x_b^p subject to row . x >= 1, x >= 0, by a log-barrier Newton method on the full row set.
Bracket barrier_min_power(const std::vector<Row>& rows, double p);

bool realizations_disjoint(const sqc::BallSystem& sys, const std::vector<sqc::Ball>& balls);
bool shifted_union_covers(const sqc::BallSystem& sys, const std::vector<sqc::Ball>& balls, const sqc::PointSet& A);

/// sup_K |f| + (sum over the depth-n tiling of osc^p)^(1/p), computed from the corner samples.
double tiling_seminorm(const sqc::GridSystem& g, const sqc::SampledFunction& f, double p, int n);

}  // namespace oracle
