#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqc/ballsys.hpp"
#include "sqc/covering.hpp"
#include "sqc/function.hpp"

namespace sqc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Nonnegative valuation on realized subsets.
struct Gauge {
    enum class Kind { diameter_power, oscillation, table };
    Kind kind = Kind::table;
    std::string name;
    bool monotone = true;
    std::function<double(const PointSet&)> on_set;  // may be empty for table gauges
    std::function<double(const Ball&)> on_ball;     // fast path for realized balls, may be empty

    double operator()(const PointSet& a) const;
    double of_ball(const BallSystem& sys, const Ball& b) const;

    /// diam(a)^s for the sup metric on a grid (cells are boxes, so diam includes the cell extent)
    static Gauge diameter_power(const GridSystem& g, double s = 1.0);
    /// diam(a)^s for a metric ball system (max pairwise distance of the points)
    static Gauge diameter_power(const MetricBallSystem& m, double s = 1.0);
    static Gauge oscillation(std::shared_ptr<const SampledFunction> f);
    /// Explicit per-ball values keyed by (depth, index); undefined sets evaluate to 0.
    static Gauge table(std::function<double(const Ball&)> values, bool monotone, std::string name = "table");
    /// lambda * a + b, evaluated pointwise
    static Gauge combination(double lambda, const Gauge& a, const Gauge& b);
};

/// Raised when a gauge cannot be shifted because the ring supremum is not computed for it.
class NonMonotoneGauge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// phi evaluated on the realization of l(depth).b; equals the supremum over l-rings for monotone phi.
double shifted_gauge(const BallSystem& sys, const Gauge& phi, const AdmissibleFn& l, const Ball& b);

struct ContentResult {
    double value = 0.0;
    bool exact = false;
    bool infinite = false;
    int max_depth_used = 0;
    std::vector<PointSet> cover;  // witness round sets
    std::string diagnostic;
};

struct CaratheodoryOptions {
    std::optional<AdmissibleFn> shift;  // l for the shifted content; plain when empty
    int depth_span = 0;                 // covers use witnesses with depth in [n, n + span]
};

/// Upper bound on the Caratheodory content of A by (k, n)-round sets, with witness cover.
/// Exact on tiling systems (nested-cover dynamic programme over the depth window).
ContentResult caratheodory_content(const BallSystem& sys, const Gauge& phi, double p, const AdmissibleFn& k, int n,
                                   const PointSet& A, const CaratheodoryOptions& opt = {});

/// Interval covering along a curve: [first, last] index range with a cost.
struct CurveInterval {
    std::size_t first = 0;
    std::size_t last = 0;
    double cost = 0.0;
    std::size_t tag = 0;
};

struct IntervalCover {
    double cost = kInfinity;
    std::vector<std::size_t> chosen;  // indices into the interval list
};

/// Minimum-cost cover of {0..length-1} by intervals (shortest path along the curve order).
IntervalCover min_interval_cover(std::size_t length, const std::vector<CurveInterval>& intervals);

/// Contiguous runs of curve indices lying in a set.
std::vector<std::pair<std::size_t, std::size_t>> runs_inside(const std::vector<PointId>& curve, const PointSet& s);

/// Exact minimum of sum phi over covers of the curve by (m, n)-round sets j.b^ (0 <= j <= m(depth b)).
/// Throws std::invalid_argument if the curve leaves the ground set.
double min_curve_cover(const BallSystem& sys, const Gauge& phi, const AdmissibleFn& m,
                       const std::vector<PointId>& curve, int n, int depth_span = 0);

struct PackingContent {
    double value = 0.0;  // max over restarts
    Packing witness;
    bool exact = false;  // tiling and k = 0
    std::vector<double> per_restart;
};

/// Lower bound on the shifted packing pre-content: max over greedy restarts of sum phi~^l(a-)^p.
PackingContent packing_precontent(const BallSystem& sys, const Gauge& phi, double p, const AdmissibleFn& k,
                                  const AdmissibleFn& l, int n, const PointSet& A, int restarts = 16,
                                  std::uint64_t seed = 1, int max_depth = -1);

/// Same, for several exponents at once (the packings do not depend on p).
std::vector<PackingContent> packing_precontent_multi(const BallSystem& sys, const Gauge& phi,
                                                     const std::vector<double>& ps, const AdmissibleFn& k,
                                                     const AdmissibleFn& l, int n, const PointSet& A,
                                                     int restarts = 16, std::uint64_t seed = 1, int max_depth = -1);

/// Finite-scale spherical Hausdorff content at mesh base^-n on a grid system.
double hausdorff_content(const GridSystem& g, const PointSet& A, double s, int n);

/// Deterministic 64-bit mixer used to derive per-component seeds.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace sqc
