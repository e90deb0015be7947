#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqc/admissible.hpp"

namespace sqc {

using PointId = std::uint32_t;
/// Sorted, duplicate-free set of ground-set indices.
using PointSet = std::vector<PointId>;

bool intersects(const PointSet& a, const PointSet& b);
/// true iff sub is contained in super
bool includes(const PointSet& super, const PointSet& sub);
PointSet set_union(const PointSet& a, const PointSet& b);
bool contains(const PointSet& s, PointId x);
PointSet normalized(PointSet s);

struct Ball {
    int depth = 0;
    std::size_t index = 0;  // position within its depth layer

    friend bool operator==(const Ball&, const Ball&) = default;
    friend auto operator<=>(const Ball&, const Ball&) = default;
};

/// Finite multiscale ball system on a ground set {0, ..., num_points()-1}.
///
/// Abstract balls live at depths [min_depth(), max_depth()]. Immutable after construction.
class BallSystem {
public:
    BallSystem(int n0, int n_max, AdmissibleFn q) : n0_(n0), n_max_(n_max), q_(std::move(q)) {}
    virtual ~BallSystem() = default;

    int min_depth() const { return n0_; }
    int max_depth() const { return n_max_; }
    const AdmissibleFn& q() const { return q_; }

    virtual std::size_t num_points() const = 0;
    virtual std::size_t num_balls(int depth) const = 0;
    virtual PointSet realize(const Ball& b) const = 0;
    /// k.b, saturating at min_depth(); *truncated is set when saturation happened.
    virtual Ball shift(const Ball& b, long k, bool* truncated = nullptr) const = 0;
    virtual PointId center(const Ball& b) const = 0;
    /// Balls of the given depth whose realization contains x. Default: linear scan.
    virtual std::vector<Ball> balls_containing(PointId x, int depth) const;
    /// True when the layers are nested partitions (every point in exactly one ball per depth).
    virtual bool is_tiling() const { return false; }

    Ball shift_by(const Ball& b, const AdmissibleFn& k, bool* truncated = nullptr) const {
        return shift(b, k(b.depth), truncated);
    }
    PointSet realize_shift(const Ball& b, long k) const { return realize(shift(b, k)); }
    std::vector<Ball> layer(int depth) const;
    PointSet all_points() const;

protected:
    int n0_;
    int n_max_;
    AdmissibleFn q_;
};

/// Balls and shifts given explicitly. Shift by one step follows the stored parent.
class ExplicitSystem : public BallSystem {
public:
    ExplicitSystem(std::size_t points, int n0, int n_max, AdmissibleFn q);

    /// Returns the index of the new ball within its layer. parent < 0 means "saturate to itself".
    std::size_t add_ball(int depth, PointId center, PointSet realization, long parent);
    void set_parent(const Ball& b, long parent);
    void set_tiling(bool t) { tiling_ = t; }

    std::size_t num_points() const override { return points_; }
    std::size_t num_balls(int depth) const override;
    PointSet realize(const Ball& b) const override;
    Ball shift(const Ball& b, long k, bool* truncated = nullptr) const override;
    PointId center(const Ball& b) const override;
    bool is_tiling() const override { return tiling_; }

private:
    struct Entry {
        PointId center;
        PointSet real;
        long parent;
    };
    const Entry& entry(const Ball& b) const;
    std::size_t points_;
    bool tiling_ = false;
    std::vector<std::vector<Entry>> layers_;
};

/// Closed sup-metric balls B(x, r0 * 2^-n) centred at every point of a finite cloud.
class MetricBallSystem : public BallSystem {
public:
    MetricBallSystem(std::vector<std::vector<double>> points, int n0, int n_max, double r0 = 1.0);

    std::size_t num_points() const override { return pts_.size(); }
    std::size_t num_balls(int) const override { return pts_.size(); }
    PointSet realize(const Ball& b) const override;
    Ball shift(const Ball& b, long k, bool* truncated = nullptr) const override;
    PointId center(const Ball& b) const override { return static_cast<PointId>(b.index); }
    std::vector<Ball> balls_containing(PointId x, int depth) const override;

    double radius(int depth) const;
    double dist(PointId a, PointId b) const;
    const std::vector<std::vector<double>>& points() const { return pts_; }

private:
    std::vector<std::vector<double>> pts_;
    double r0_;
};

/// Anisotropic box grid on [0,1)^d: depth-n balls are boxes of side base^-ceil(mu_i n) along axis i.
///
/// Ground points are the depth-N cells, indexed with axis 0 fastest.
class GridSystem : public BallSystem {
public:
    GridSystem(std::vector<double> mu, int n_max, int base = 2, std::size_t max_points = 1u << 24);

    std::size_t num_points() const override { return points_; }
    std::size_t num_balls(int depth) const override;
    PointSet realize(const Ball& b) const override;
    Ball shift(const Ball& b, long k, bool* truncated = nullptr) const override;
    PointId center(const Ball& b) const override;
    std::vector<Ball> balls_containing(PointId x, int depth) const override;
    bool is_tiling() const override { return true; }

    int dim() const { return static_cast<int>(mu_.size()); }
    int base() const { return base_; }
    const std::vector<double>& mu() const { return mu_; }
    double trace() const;
    /// ceil(mu_i * n): the per-axis exponent at depth n
    int exponent(int axis, int depth) const;
    /// number of cells along an axis at a depth
    std::size_t cells(int axis, int depth) const;

    Ball ball_of(PointId x, int depth) const;
    /// Per-axis integer coordinates of a ball.
    std::vector<std::size_t> coords(const Ball& b) const;
    Ball ball_at(int depth, const std::vector<std::size_t>& c) const;
    /// Lower corner of a ground cell in [0,1)^d.
    std::vector<double> position(PointId x) const;
    /// Ground cell containing a point of [0,1)^d.
    PointId point_at(const std::vector<double>& x) const;
    /// Box [lo, hi) of a ball in [0,1)^d.
    std::pair<std::vector<double>, std::vector<double>> box(const Ball& b) const;

private:
    std::vector<double> mu_;
    int base_;
    std::size_t points_;
    std::vector<std::size_t> fine_;  // cells per axis at max depth
};

// ---- axiom checks -------------------------------------------------------------

struct AxiomResult {
    std::string name;
    bool pass = true;
    std::string witness;
    std::size_t checked = 0;
};

struct AxiomReport {
    std::vector<AxiomResult> results;  // SC0, SC1(i), SC1(ii), SC1(iii), SC2, SC3
    bool all_pass() const;
    const AxiomResult& get(const std::string& name) const;
};

/// Exhaustive check of SC0-SC3 over balls with depth in [lo, hi].
AxiomReport check_axioms(const BallSystem& sys, int lo, int hi);

// ---- quasidistance and entourages ---------------------------------------------

struct Quasidistance {
    double value = 0.0;
    int depth = 0;           // deepest depth of a common ball
    bool truncated = false;  // no common ball in range
};

/// exp(-deepest depth of a ball containing x and y); 0 on the diagonal.
Quasidistance quasidistance_rho(const BallSystem& sys, PointId x, PointId y);

/// Some ball with depth >= n realizes both x and y.
bool entourage_contains(const BallSystem& sys, int n, PointId x, PointId y);

// ---- round sets, rings, outer rings -------------------------------------------

/// b with depth >= n and b^ within a within k.b^.
std::optional<Ball> find_round(const BallSystem& sys, const PointSet& a, const AdmissibleFn& k, int n);
/// b with depth >= n and b^ within a- within a+ within k.b^.
std::optional<Ball> find_ring(const BallSystem& sys, const PointSet& a_minus, const PointSet& a_plus,
                              const AdmissibleFn& k, int n);
/// b with depth >= n and a- within b^ within j.b^ within a+.
std::optional<Ball> find_outer_ring(const BallSystem& sys, const PointSet& a_minus, const PointSet& a_plus,
                                    const AdmissibleFn& j, int n);

// ---- serialization -------------------------------------------------------------

void write_system(std::ostream& os, const BallSystem& sys);
std::unique_ptr<ExplicitSystem> read_system(std::istream& is);
std::string format_ranges(const PointSet& s);
PointSet parse_ranges(const std::string& text);

}  // namespace sqc
