#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sqc/ballsys.hpp"
#include "sqc/modulus.hpp"

namespace sqc {

struct HeintzeGridSpec {
    std::vector<double> mu{1.0, 1.0};
    int depth = 6;
    int base = 2;
    std::size_t max_points = std::size_t{1} << 24;

    double trace() const;
    /// Throws std::invalid_argument unless every mu_i >= 1 and min mu_i == 1.
    void validate() const;
};

/// Refusal carries the number of cells the request would need.
std::unique_ptr<GridSystem> build_heintze_grid(const HeintzeGridSpec& spec);

/// Lines along `axis` (1-based) through the centres of the depth-n_ref cells; uniform d gamma of total mass 1.
CurveFamily eigencurve_family(const GridSystem& grid, int axis, int n_ref);

struct TiltedBall {
    double s = 1.0;
    std::array<std::array<double, 2>, 4> vertices{};
    double width = 0.0;
    double height = 0.0;
    double log_asphericity = 0.0;  // log(width / height)
    double ratio = 0.0;            // (width / height) / |log s|, 0 at s = 1
};

/// Image of the unit sup-norm ball under s [[1, -log s], [0, 1]].
TiltedBall tilted_plane_ball(double s);

// ---- Coxeter polygon groups and buildings ---------------------------------------------------

struct CoxeterPolygonSpec {
    int r = 5;
    std::vector<int> m;       // m_i between s_i and s_{i+1}; empty means all 2
    std::vector<double> thickness;  // per generator, >= 2; empty means unweighted

    int order(int i) const { return m.empty() ? 2 : m[static_cast<std::size_t>(i)]; }
    bool right_angled() const;
    bool hyperbolic() const;
    /// log(thickness - 1) per generator; 1 when unweighted.
    std::vector<double> weights() const;
    void validate() const;
};

enum class GrowthMethod { series, bfs };

struct CoxeterGrowth {
    GrowthMethod method = GrowthMethod::series;
    std::vector<long long> numerator;    // growth series = numerator / denominator (ascending powers)
    std::vector<long long> denominator;
    double r_star = 1.0;  // smallest positive pole
    double omega = 0.0;   // -log r_star, or the BFS regression slope
    double T = 0.0;       // weighted growth rate
    bool hyperbolic = true;
    bool experimental = false;  // non-constant weights
    bool partial = false;       // BFS stopped by the state budget
    std::vector<std::uint64_t> sphere;      // BFS counts of length exactly n
    std::vector<std::uint64_t> cumulative;  // #{w : |w| <= n}
    std::string diagnostic;
};

/// Throws std::invalid_argument for BFS on non-right-angled specs.
CoxeterGrowth coxeter_growth(const CoxeterPolygonSpec& spec, GrowthMethod method, int n_max = 14,
                             std::size_t max_states = std::size_t{1} << 26);

/// Weighted growth rate: root of the Steinberg sum along the ray x_i = e^{-s w_i}.
double weighted_growth_rate(const CoxeterPolygonSpec& spec);

struct BuildingCdim {
    double formula = 0.0;
    double cross_check = 0.0;  // 1 + 1/T
    double T = 0.0;
};

/// Throws std::domain_error for p < 5 or q < 2.
BuildingCdim building_cdim_formula(int p, int q);
double cdim_from_T(double T);

}  // namespace sqc
