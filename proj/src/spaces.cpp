#include "sqc/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sqc {

double HeintzeGridSpec::trace() const { return std::accumulate(mu.begin(), mu.end(), 0.0); }

void HeintzeGridSpec::validate() const {
    if (mu.empty()) throw std::invalid_argument("eigenvalue vector is empty");
    for (double m : mu)
        if (!(m >= 1.0)) throw std::invalid_argument("eigenvalues must be >= 1");
    if (*std::min_element(mu.begin(), mu.end()) != 1.0) throw std::invalid_argument("smallest eigenvalue must be 1");
    if (depth < 0) throw std::invalid_argument("negative depth");
    if (base < 2) throw std::invalid_argument("base must be >= 2");
}

std::unique_ptr<GridSystem> build_heintze_grid(const HeintzeGridSpec& spec) {
    spec.validate();
    double cells = 1.0;
    for (double m : spec.mu) cells *= std::pow(static_cast<double>(spec.base), std::ceil(m * spec.depth - 1e-9));
    if (cells > static_cast<double>(spec.max_points))
        throw std::length_error("grid needs " + std::to_string(static_cast<unsigned long long>(cells)) +
                                " cells, budget is " + std::to_string(spec.max_points));
    return std::make_unique<GridSystem>(spec.mu, spec.depth, spec.base, spec.max_points);
}

CurveFamily eigencurve_family(const GridSystem& grid, int axis, int n_ref) {
    const int d = grid.dim();
    if (axis < 1 || axis > d) throw std::out_of_range("axis out of range");
    const int a = axis - 1;
    n_ref = std::clamp(n_ref, 0, grid.max_depth());
    const int N = grid.max_depth();
    std::vector<std::size_t> trans(static_cast<std::size_t>(d), 1);
    std::size_t lines = 1;
    for (int j = 0; j < d; ++j)
        if (j != a) {
            trans[static_cast<std::size_t>(j)] = grid.cells(j, n_ref);
            lines *= trans[static_cast<std::size_t>(j)];
        }
    const std::size_t steps = grid.cells(a, N);
    CurveFamily fam;
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t l = 0; l < lines; ++l) {
        std::size_t rest = l;
        for (int j = 0; j < d; ++j) {
            if (j == a) continue;
            auto J = static_cast<std::size_t>(j);
            x[J] = (static_cast<double>(rest % trans[J]) + 0.5) / static_cast<double>(trans[J]);
            rest /= trans[J];
        }
        std::vector<PointId> curve(steps);
        for (std::size_t t = 0; t < steps; ++t) {
            x[static_cast<std::size_t>(a)] = (static_cast<double>(t) + 0.5) / static_cast<double>(steps);
            curve[t] = grid.point_at(x);
        }
        fam.add(std::move(curve), 1.0 / static_cast<double>(lines), 1.0);
    }
    return fam;
}

TiltedBall tilted_plane_ball(double s) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in (0, 1]");
    TiltedBall tb;
    tb.s = s;
    const double c = -std::log(s);
    const double corners[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    double xmin = kInfinity, xmax = -kInfinity, ymin = kInfinity, ymax = -kInfinity;
    for (int i = 0; i < 4; ++i) {
        double x = s * (corners[i][0] + c * corners[i][1]);
        double y = s * corners[i][1];
        tb.vertices[static_cast<std::size_t>(i)] = {x, y};
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    tb.width = xmax - xmin;
    tb.height = ymax - ymin;
    tb.log_asphericity = std::log(tb.width / tb.height);
    tb.ratio = c > 0.0 ? (tb.width / tb.height) / c : 0.0;
    return tb;
}

BuildingCdim building_cdim_formula(int p, int q) {
    if (p < 5 || q < 2) throw std::domain_error("building parameters need p >= 5 and q >= 2");
    BuildingCdim out;
    const double omega = std::acosh((p - 2) / 2.0);
    out.formula = 1.0 + std::log(q - 1.0) / omega;
    // independent route: root of the weighted growth series of the right-angled p-gon group
    CoxeterPolygonSpec w;
    w.r = p;
    w.thickness.assign(static_cast<std::size_t>(p), static_cast<double>(q));
    out.T = weighted_growth_rate(w);
    out.cross_check = cdim_from_T(out.T);
    return out;
}

double cdim_from_T(double T) {
    if (!(T > 0.0)) throw std::domain_error("growth rate must be positive");
    return 1.0 + 1.0 / T;
}

}  // namespace sqc
