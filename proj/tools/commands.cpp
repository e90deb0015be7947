#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "sqc/ballsys.hpp"
#include "sqc/circlehomeo.hpp"
#include "sqc/measures.hpp"
#include "sqc/modulus.hpp"
#include "sqc/parallel.hpp"
#include "sqc/report.hpp"
#include "sqc/spaces.hpp"
#include "sqc/variation.hpp"

namespace sqc::cli {

std::string Context::resolve(const std::string& key) const {
    const std::string scoped = command + "." + key;
    return config.has(scoped) ? scoped : key;
}

bool Context::has(const std::string& key) const { return config.has(resolve(key)); }
std::string Context::str(const std::string& key, const std::string& fallback) const {
    return config.get(resolve(key), fallback);
}
std::string Context::require(const std::string& key) const { return config.require(resolve(key)); }
double Context::num(const std::string& key, double fallback) const { return config.get_double(resolve(key), fallback); }
long Context::integer(const std::string& key, long fallback) const { return config.get_int(resolve(key), fallback); }
bool Context::flag(const std::string& key, bool fallback) const { return config.get_bool(resolve(key), fallback); }
std::vector<double> Context::list(const std::string& key, const std::vector<double>& fallback) const {
    return config.get_list(resolve(key), fallback);
}
std::vector<double> Context::require_list(const std::string& key) const { return config.require_list(resolve(key)); }

AdmissibleFn Context::fn(const std::string& key, const AdmissibleFn& fallback) const {
    if (!has(key)) return fallback;
    try {
        return AdmissibleFn::parse(str(key, ""));
    } catch (const std::exception& e) {
        throw ConfigError(key, "field '" + key + "': " + e.what());
    }
}

namespace {

std::string num(double v) { return format_number(v); }

std::vector<int> as_ints(const std::vector<double>& v, const std::string& field) {
    std::vector<int> out;
    for (double x : v) {
        if (x != std::floor(x)) throw ConfigError(field, "field '" + field + "': expected integers");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

std::unique_ptr<GridSystem> grid_from(const Context& c, std::vector<double> default_mu = {}) {
    HeintzeGridSpec s;
    s.mu = default_mu.empty() || c.has("mu") ? c.require_list("mu") : default_mu;
    s.depth = static_cast<int>(c.integer("depth", 8));
    s.base = static_cast<int>(c.integer("base", 2));
    s.max_points = static_cast<std::size_t>(c.integer("max_points", 1L << 24));
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("mu", std::string("field 'mu': ") + e.what());
    }
    return build_heintze_grid(s);
}

int axis_from(const Context& c, const GridSystem& g) {
    const std::string f = c.str("family", "horizontal");
    int axis = 0;
    if (f == "horizontal")
        axis = 1;
    else if (f == "vertical")
        axis = 2;
    else if (f.rfind("axis", 0) == 0)
        axis = std::atoi(f.c_str() + 4 + (f.size() > 4 && f[4] == ':' ? 1 : 0));
    if (axis < 1 || axis > g.dim()) throw ConfigError("family", "field 'family': unknown family '" + f + "'");
    return axis;
}

CurveFamily family_from(const Context& c, const GridSystem& g) {
    const int n_ref = static_cast<int>(c.integer("n_ref", g.max_depth()));
    return eigencurve_family(g, axis_from(c, g), n_ref);
}

ModulusOptions modulus_options(const Context& c) {
    ModulusOptions o;
    o.p = c.list("p", {2.0}).front();
    o.k = c.fn("k", AdmissibleFn::zero());
    o.l = c.fn("l", AdmissibleFn::zero());
    o.m = c.fn("m", AdmissibleFn::zero());
    o.tol = c.num("tol", c.tol);
    try {
        o.encoding = parse_encoding(c.str("encoding", "constraint"));
    } catch (const std::exception& e) {
        throw ConfigError("encoding", std::string("field 'encoding': ") + e.what());
    }
    o.max_sweeps = c.integer("max_sweeps", o.max_sweeps);
    o.max_cut_rounds = static_cast<int>(c.integer("max_cut_rounds", o.max_cut_rounds));
    return o;
}

// ---- axioms ------------------------------------------------------------------------

int run_axioms(const Context& c) {
    const std::string space = c.str("space", "grid");
    std::unique_ptr<BallSystem> sys;
    if (space == "grid") {
        sys = grid_from(c, {1.0, 1.0});
    } else if (space == "metric") {
        const long count = c.integer("count", 64), dim = c.integer("dim", 2);
        if (count < 1 || dim < 1) throw ConfigError("count", "field 'count': need a positive point count and dimension");
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(count), std::vector<double>(static_cast<std::size_t>(dim)));
        for (auto& p : pts)
            for (auto& x : p) x = u(rng);
        sys = std::make_unique<MetricBallSystem>(std::move(pts), static_cast<int>(c.integer("n0", 0)),
                                                 static_cast<int>(c.integer("depth", 5)), c.num("r0", 1.0));
    } else if (space == "file") {
        std::ifstream in(c.require("system"));
        if (!in) throw ConfigError("system", "cannot open system file '" + c.require("system") + "'");
        sys = read_system(in);
    } else {
        throw ConfigError("space", "field 'space': unknown space '" + space + "'");
    }
    const int lo = static_cast<int>(c.integer("lo", sys->min_depth()));
    const int hi = static_cast<int>(c.integer("hi", sys->max_depth()));
    const auto rep = check_axioms(*sys, lo, hi);
    CsvWriter csv(c.path("axioms.csv"), {"axiom", "pass", "checked", "witness"}, c.digest());
    int passed = 0;
    for (const auto& r : rep.results) {
        csv.row(std::vector<std::string>{r.name, r.pass ? "1" : "0", std::to_string(r.checked), r.witness});
        passed += r.pass ? 1 : 0;
    }
    std::cout << "axioms: " << passed << "/" << rep.results.size() << " pass on " << space << " depths [" << lo << ", "
              << hi << "]\n";
    return rep.all_pass() ? kOk : kFailure;
}

// ---- modulus -----------------------------------------------------------------------

int run_modulus(const Context& c) {
    auto g = grid_from(c);
    const auto fam = family_from(c, *g);
    const auto base = modulus_options(c);
    const auto ps = c.list("p", {base.p});
    const auto ns = as_ints(c.list("n", {static_cast<double>(g->max_depth())}), "n");
    const bool packing = c.flag("packing", false);
    const int restarts = static_cast<int>(c.integer("restarts", 4));
    std::vector<std::pair<double, int>> jobs;
    for (double p : ps)
        for (int n : ns) jobs.emplace_back(p, n);
    std::vector<ModulusReport> reps(jobs.size());
    parallel_for(jobs.size(), c.jobs, [&](std::size_t i) {
        ModulusOptions o = base;
        o.p = jobs[i].first;
        o.n = jobs[i].second;
        reps[i] = packing ? solve_packing_modulus(*g, fam, o, restarts, c.seed) : solve_modulus(*g, fam, o);
    });
    CsvWriter csv(c.path("modulus.csv"),
                  {"method", "p", "n", "k", "l", "m", "value", "dual", "gap", "iterations", "cut_rounds", "converged",
                   "infeasible", "min_admissibility"},
                  c.digest());
    int bad = 0;
    for (const auto& r : reps) {
        csv.row(std::vector<std::string>{packing ? "pmod" : "mod", num(r.p), std::to_string(r.n), r.k_name, r.l_name,
                                         r.m_name, num(r.value), num(r.dual), num(r.gap), std::to_string(r.iterations),
                                         std::to_string(r.cut_rounds), r.converged ? "1" : "0",
                                         r.infeasible ? "1" : "0", num(r.min_admissibility)});
        if (!r.converged && !r.infeasible) ++bad;
    }
    std::cout << "modulus: " << reps.size() << " solves, " << bad << " not converged";
    if (reps.size() == 1) std::cout << ", value = " << num(reps[0].value);
    std::cout << "\n";
    return bad ? kFailure : kOk;
}

// ---- cdim --------------------------------------------------------------------------

int run_cdim(const Context& c) {
    auto g = grid_from(c);
    const auto fam = family_from(c, *g);
    CdimOptions o;
    o.base = modulus_options(c);
    o.p_grid = c.list("p_grid", {1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5});
    o.n_lo = static_cast<int>(c.integer("n_lo", 3));
    o.n_hi = static_cast<int>(c.integer("n_hi", g->max_depth()));
    o.packing = c.flag("packing", false);
    o.restarts = static_cast<int>(c.integer("restarts", 4));
    o.bisect_tol = c.num("bisect_tol", 1e-3);
    o.jobs = c.jobs;
    const auto est = estimate_cdim(*g, fam, o);

    CsvWriter fits(c.path("cdim_fits.csv"), {"p", "slope", "intercept", "residual"}, c.digest());
    for (const auto& f : est.fits) fits.row(std::vector<double>{f.p, f.slope, f.intercept, f.residual});
    CsvWriter table(c.path("cdim_table.csv"), {"p", "n", "value", "gap", "converged"}, c.digest());
    auto rows = est.table;
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return std::pair(a.p, a.n) < std::pair(b.p, b.n); });
    for (const auto& r : rows) table.row(std::vector<double>{r.p, static_cast<double>(r.n), r.value, r.gap, r.converged ? 1.0 : 0.0});

    PlotSpec plot;
    plot.title = "modulus against depth";
    plot.x_label = "n";
    plot.y_label = "modulus";
    plot.log_y = true;
    for (double p : o.p_grid) {
        PlotSeries s;
        s.name = "p = " + num(p);
        for (const auto& r : rows)
            if (r.p == p) {
                s.x.push_back(r.n);
                s.y.push_back(r.value);
            }
        plot.series.push_back(std::move(s));
    }
    write_svg(c.path("cdim.svg"), plot);

    char line[128];
    std::snprintf(line, sizeof line, "p* = %.4f", est.p_star);
    std::cout << line << " (" << est.method << ", " << (est.crossover ? "crossover" : "no crossover in grid")
              << ", residual " << num(est.residual) << ")\n";
    if (!est.crossover) return kFailure;
    if (c.has("expect") && std::abs(est.p_star - c.num("expect", 0.0)) > c.num("expect_tol", 0.1)) {
        std::cout << "expected " << num(c.num("expect", 0.0)) << "\n";
        return kFailure;
    }
    return kOk;
}

// ---- diffusivity -------------------------------------------------------------------

int run_diffusivity(const Context& c) {
    auto g = grid_from(c);
    const auto fam = family_from(c, *g);
    const double p = c.list("p", {2.0}).front();
    const auto r = c.fn("r", AdmissibleFn::logarithmic());
    const int n_lo = static_cast<int>(c.integer("n_lo", 1));
    const int n_hi = static_cast<int>(c.integer("n_hi", g->max_depth()));
    const auto rep = check_diffusivity(*g, fam, p, r, n_lo, n_hi, c.fn("k", AdmissibleFn::zero()));
    CsvWriter csv(c.path("diffusivity.csv"), {"n", "tau", "infinite"}, c.digest());
    for (const auto& row : rep.rows)
        csv.row(std::vector<double>{static_cast<double>(row.n), row.tau, row.infinite ? 1.0 : 0.0});
    std::cout << "diffusivity: tau = " << num(rep.tau_proxy) << ", " << (rep.diffuse ? "diffuse" : "not diffuse")
              << ", modulus lower bound " << num(rep.lower_bound) << ", l = " << rep.l_implied.name();
    if (!rep.diagnostic.empty()) std::cout << " (" << rep.diagnostic << ")";
    std::cout << "\n";
    if (c.has("p_prime")) {
        const auto ps = c.list("ps", {p});
        const auto b = check_diffusivity_bourdon(*g, fam, c.num("p_prime", 1.0), n_lo, n_hi, ps, {r});
        CsvWriter bc(c.path("bourdon.csv"), {"p", "r", "constant", "eta", "c"}, c.digest());
        for (const auto& x : b.bounds)
            bc.row(std::vector<std::string>{num(x.p), x.r_name, num(x.constant), num(b.eta), num(b.c)});
        std::cout << "bourdon: eta = " << num(b.eta) << ", C = " << num(b.c) << "\n";
    }
    return kOk;
}

// ---- heintze -----------------------------------------------------------------------

int run_heintze(const Context& c) {
    auto g = grid_from(c);
    const auto p_grid = c.list("p_grid", {1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5});
    const int n_lo = static_cast<int>(c.integer("n_lo", 3));
    const int n_hi = static_cast<int>(c.integer("n_hi", g->max_depth()));
    const auto k = c.fn("k", AdmissibleFn::zero()), l = c.fn("l", AdmissibleFn::zero());
    const double check_tol = c.num("check_tol", 0.1);
    int status = kOk;

    CsvWriter scan(c.path("heintze_scan.csv"), {"axis", "p", "slope", "intercept", "residual"}, c.digest());
    CsvWriter thr(c.path("heintze_thresholds.csv"), {"axis", "mu", "threshold", "expected", "crossover", "error"},
                  c.digest());
    for (int axis = 1; axis <= g->dim(); ++axis) {
        const auto s = coordinate_threshold_scan(*g, axis, p_grid, n_lo, n_hi, k, l);
        for (const auto& f : s.fits) scan.row(std::vector<double>{static_cast<double>(axis), f.p, f.slope, f.intercept, f.residual});
        const double err = s.threshold - s.expected;
        thr.row(std::vector<double>{static_cast<double>(axis), g->mu()[static_cast<std::size_t>(axis - 1)], s.threshold,
                                    s.expected, s.crossover ? 1.0 : 0.0, err});
        std::cout << "axis " << axis << ": threshold " << num(s.threshold) << ", expected tr/mu = " << num(s.expected)
                  << "\n";
        if (!s.crossover || std::abs(err) > check_tol) status = kFailure;
    }

    const auto exps = c.list("tilt_exponents", {1, 2, 4, 6, 8, 10, 12, 14});
    CsvWriter tilt(c.path("tilted.csv"), {"s", "width", "height", "log_asphericity", "ratio"}, c.digest());
    PlotSpec plot;
    plot.title = "tilted-plane balls, rescaled by 1/s";
    for (double e : exps) {
        const auto b = tilted_plane_ball(std::exp(-e));
        tilt.row(std::vector<double>{b.s, b.width, b.height, b.log_asphericity, b.ratio});
        if (e >= 10.0 - 1e-12 && (b.ratio < 0.8 || b.ratio > 1.2)) status = kFailure;
        PlotSeries poly;
        poly.name = "s = e^-" + num(e);
        for (int i = 0; i <= 4; ++i) {
            poly.x.push_back(b.vertices[static_cast<std::size_t>(i % 4)][0] / b.s);
            poly.y.push_back(b.vertices[static_cast<std::size_t>(i % 4)][1] / b.s);
        }
        plot.series.push_back(std::move(poly));
    }
    write_svg(c.path("tilted.svg"), plot);
    return status;
}

// ---- coxeter and buildings ---------------------------------------------------------

CoxeterPolygonSpec polygon_from(const Context& c) {
    CoxeterPolygonSpec s;
    s.r = static_cast<int>(c.integer("r", 5));
    if (c.has("m")) s.m = as_ints(c.require_list("m"), "m");
    if (c.has("thickness")) s.thickness = c.require_list("thickness");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("r", e.what());
    }
    return s;
}

int run_coxeter(const Context& c) {
    const auto spec = polygon_from(c);
    const std::string method = c.str("method", "both");
    const int n_max = static_cast<int>(c.integer("n_max", 14));
    CsvWriter summary(c.path("coxeter.csv"), {"method", "omega", "r_star", "T", "partial"}, c.digest());
    double omega_series = 0.0, omega_bfs = 0.0;
    bool have_series = false, have_bfs = false;
    if (method == "series" || method == "both") {
        const auto g = coxeter_growth(spec, GrowthMethod::series, n_max);
        CsvWriter poly(c.path("coxeter_series.csv"), {"power", "numerator", "denominator"}, c.digest());
        const std::size_t len = std::max(g.numerator.size(), g.denominator.size());
        for (std::size_t i = 0; i < len; ++i)
            poly.row(std::vector<std::string>{std::to_string(i),
                                              std::to_string(i < g.numerator.size() ? g.numerator[i] : 0),
                                              std::to_string(i < g.denominator.size() ? g.denominator[i] : 0)});
        summary.row(std::vector<std::string>{"series", num(g.omega), num(g.r_star), num(g.T), "0"});
        omega_series = g.omega;
        have_series = true;
        std::cout << "series: omega = " << num(g.omega) << ", pole " << num(g.r_star) << ", T = " << num(g.T)
                  << (g.experimental ? " (weighted, experimental)" : "") << "\n";
        if (!g.diagnostic.empty()) std::cout << "  " << g.diagnostic << "\n";
    }
    if ((method == "bfs" || method == "both") && spec.right_angled()) {
        const auto g = coxeter_growth(spec, GrowthMethod::bfs, n_max,
                                      static_cast<std::size_t>(c.integer("max_states", 1L << 26)));
        CsvWriter counts(c.path("coxeter_bfs.csv"), {"n", "sphere", "cumulative"}, c.digest());
        PlotSeries s;
        s.name = "cumulative";
        for (std::size_t n = 0; n < g.cumulative.size(); ++n) {
            counts.row(std::vector<std::string>{std::to_string(n), std::to_string(g.sphere[n]), std::to_string(g.cumulative[n])});
            s.x.push_back(static_cast<double>(n));
            s.y.push_back(static_cast<double>(g.cumulative[n]));
        }
        PlotSpec plot;
        plot.title = "ball growth";
        plot.x_label = "n";
        plot.y_label = "#{|w| <= n}";
        plot.log_y = true;
        plot.series.push_back(std::move(s));
        write_svg(c.path("coxeter_bfs.svg"), plot);
        summary.row(std::vector<std::string>{"bfs", num(g.omega), "", num(g.T), g.partial ? "1" : "0"});
        omega_bfs = g.omega;
        have_bfs = true;
        std::cout << "bfs: omega = " << num(g.omega) << " from counts to n = " << g.cumulative.size() - 1 << "\n";
    }
    if (have_series && have_bfs && omega_series > 0.0) {
        const double rel = std::abs(omega_bfs - omega_series) / omega_series;
        std::cout << "relative difference " << num(rel) << "\n";
        if (rel > c.num("bfs_tol", 0.05)) return kFailure;
    }
    return kOk;
}

int run_buildings(const Context& c) {
    const auto ps = as_ints(c.list("p", {5}), "p");
    const auto qs = as_ints(c.list("q", {3}), "q");
    const double check_tol = c.num("check_tol", 1e-12);
    CsvWriter csv(c.path("buildings.csv"), {"p", "q", "formula", "cross_check", "T", "difference"}, c.digest());
    int status = kOk;
    for (int p : ps)
        for (int q : qs) {
            const auto b = building_cdim_formula(p, q);
            const double diff = b.formula - b.cross_check;
            csv.row(std::vector<double>{static_cast<double>(p), static_cast<double>(q), b.formula, b.cross_check, b.T, diff});
            char line[160];
            std::snprintf(line, sizeof line, "p=%d q=%d: %.6f (cross-check 1 + 1/T = %.6f)", p, q, b.formula,
                          b.cross_check);
            std::cout << line << "\n";
            if (!(std::abs(diff) <= check_tol)) status = kFailure;
        }
    return status;
}

// ---- variation and capacity ---------------------------------------------------------

SampledFunction function_from(const std::string& name, const GridSystem& g) {
    if (name == "x1") return SampledFunction::coordinate(g, 0);
    if (name == "x2") return SampledFunction::coordinate(g, 1);
    if (name == "x1x2") return SampledFunction::coordinate(g, 0) * SampledFunction::coordinate(g, 1);
    if (name == "sum") return SampledFunction::coordinate(g, 0) + SampledFunction::coordinate(g, 1);
    if (name == "radial")
        return SampledFunction::on_grid(g, [](const std::vector<double>& x) {
            double s = 0;
            for (double v : x) s += (v - 0.5) * (v - 0.5);
            return std::sqrt(s);
        }, "radial");
    throw ConfigError("function", "field 'function': unknown function '" + name + "'");
}

int run_variation(const Context& c) {
    auto g = grid_from(c, {1.0, 1.0});
    if (g->dim() < 2) throw ConfigError("mu", "field 'mu': variation functions need a planar grid");
    const auto f = std::make_shared<const SampledFunction>(function_from(c.str("function", "x1"), *g));
    const auto gg = function_from(c.str("function_g", "x2"), *g);
    const double p = c.num("p", 2.0);
    const auto k = c.fn("k", AdmissibleFn::zero()), l = c.fn("l", AdmissibleFn::zero());
    const int n_lo = static_cast<int>(c.integer("n_lo", 1));
    const int n_hi = static_cast<int>(c.integer("n_hi", g->max_depth()));
    const int restarts = static_cast<int>(c.integer("restarts", 16));
    const auto K = g->all_points();
    const auto rows = p_variation(*g, f, K, p, k, l, n_lo, n_hi, restarts, c.seed);
    CsvWriter csv(c.path("variation.csv"), {"n", "value", "exact"}, c.digest());
    for (const auto& r : rows) csv.row(std::vector<double>{static_cast<double>(r.n), r.value, r.exact ? 1.0 : 0.0});
    const auto mc = multiplicative_check(*g, *f, gg, K, p, k, l, n_hi, restarts, c.seed);
    std::cout << "variation: V(" << f->name << ") at n = " << n_hi << " is " << num(rows.empty() ? 0.0 : rows.back().value)
              << "; ||fg|| = " << num(mc.lhs) << " <= ||f|| ||g|| = " << num(mc.rhs) << (mc.holds ? "" : "  VIOLATED")
              << "\n";
    return mc.holds ? kOk : kFailure;
}

int run_capacity(const Context& c) {
    const auto ps = c.list("p", {2, 3, 4});
    const auto ns = as_ints(c.list("n", {3, 4, 5}), "n");
    CapacityOptions base;
    base.k = c.fn("k", AdmissibleFn::zero());
    base.l = c.fn("l", AdmissibleFn::zero());
    base.tol = c.num("cap_tol", 1e-4);
    base.max_iterations = c.integer("max_iterations", base.max_iterations);
    const std::string method = c.str("method", "smoothed");
    if (method == "subgradient")
        base.method = CapacityMethod::subgradient;
    else if (method != "smoothed")
        throw ConfigError("method", "field 'method': expected smoothed or subgradient");
    auto mod = modulus_options(c);
    mod.k = base.k;
    mod.l = base.l;

    std::vector<std::pair<double, int>> jobs;
    for (double p : ps)
        for (int n : ns) jobs.emplace_back(p, n);
    std::vector<CapacityGap> gaps(jobs.size());
    parallel_for(jobs.size(), c.jobs, [&](std::size_t i) {
        const auto [p, n] = jobs[i];
        HeintzeGridSpec s;
        s.mu = {1.0, 1.0};
        s.depth = n + 1;
        auto g = build_heintze_grid(s);
        const auto cond = square_condenser(*g);
        const auto joining = eigencurve_family(*g, 1, n + 1);
        ModulusOptions mo = mod;
        mo.p = p;
        mo.n = n;
        CapacityOptions co = base;
        co.p = p;
        co.n = n;
        gaps[i] = capacity_modulus_gap(*g, cond, joining, mo, co);
    });
    CsvWriter csv(c.path("capacity.csv"), {"p", "n", "pmod", "cap", "gap", "holds", "disconnected"}, c.digest());
    int bad = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& r = gaps[i];
        csv.row(std::vector<double>{jobs[i].first, static_cast<double>(jobs[i].second), r.pmod, r.cap, r.gap,
                                    r.holds ? 1.0 : 0.0, r.disconnected ? 1.0 : 0.0});
        if (!r.holds) ++bad;
    }
    CsvWriter raster(c.path("capacity_f.csv"), {"p", "n", "i", "j", "f"}, c.digest());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& v = gaps[i].vertex_values;
        const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
        for (std::size_t idx = 0; idx < v.size(); ++idx)
            raster.row(std::vector<double>{jobs[i].first, static_cast<double>(jobs[i].second),
                                           static_cast<double>(idx % side), static_cast<double>(idx / side), v[idx]});
    }
    std::cout << "capacity: " << jobs.size() - static_cast<std::size_t>(bad) << "/" << jobs.size()
              << " cases with pmod <= cap";
    if (jobs.size() == 1) std::cout << ", cap = " << num(gaps[0].cap) << ", pmod = " << num(gaps[0].pmod);
    std::cout << "\n";
    return bad ? kFailure : kOk;
}

// ---- circle ------------------------------------------------------------------------

CascadeSpec cascade_from(const Context& c, const std::string& prefix) {
    CascadeSpec s;
    auto key = [&](const std::string& k) { return c.has(prefix + k) ? prefix + k : k; };
    const std::string eps = c.str(key("eps"), "power");
    if (eps == "power") {
        s.eps.kind = EpsilonKind::power;
        s.eps.a = c.num(key("a"), 0.5);
        s.eps.cap = c.num(key("cap"), 0.45);
    } else if (eps == "zero") {
        s.eps.kind = EpsilonKind::zero;
    } else if (eps == "list") {
        s.eps.kind = EpsilonKind::list;
        s.eps.values = c.require_list(key("eps_values"));
    } else {
        throw ConfigError("eps", "field 'eps': expected power, zero or list");
    }
    const std::string conv = c.str(key("convention"), "sibling");
    if (conv == "sibling")
        s.convention = SignConvention::sibling;
    else if (conv == "independent")
        s.convention = SignConvention::independent;
    else
        throw ConfigError("convention", "field 'convention': expected sibling or independent");
    const std::string signs = c.str(key("signs"), "seeded");
    if (signs == "seeded")
        s.source = SignSource::seeded;
    else if (signs == "all_plus")
        s.source = SignSource::all_plus;
    else if (signs == "explicit") {
        s.source = SignSource::explicit_list;
        s.signs = as_ints(c.require_list(key("sign_values")), "sign_values");
    } else {
        throw ConfigError("signs", "field 'signs': expected seeded, all_plus or explicit");
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("eps", e.what());
    }
    return s;
}

int run_circle(const Context& c) {
    const auto base = cascade_from(c, "");
    const int seeds = static_cast<int>(c.integer("seeds", 100));
    const int t = static_cast<int>(c.integer("t", 20));
    std::vector<int> exps;
    for (int e = 1; e <= t; ++e) exps.push_back(e);
    if (c.has("exponents")) exps = as_ints(c.require_list("exponents"), "exponents");
    int status = kOk;

    // continuity envelopes
    std::vector<ContinuityReport> cont(static_cast<std::size_t>(std::max(0, seeds)));
    parallel_for(cont.size(), c.jobs, [&](std::size_t i) {
        CascadeSpec s = base;
        s.seed = split_seed(c.seed, i + 1);
        cont[i] = continuity_moduli(s, t, exps);
    });
    CsvWriter env(c.path("circle_envelopes.csv"),
                  {"seed", "e", "s", "l", "L", "v", "upper_excess", "lower_excess", "skipped"}, c.digest());
    double worst = -kInfinity;
    long violations = 0;
    for (std::size_t i = 0; i < cont.size(); ++i) {
        for (const auto& r : cont[i].rows) {
            env.row(std::vector<double>{static_cast<double>(i + 1), static_cast<double>(r.e), r.s, r.l, r.L, r.v,
                                        r.upper_excess, r.lower_excess, r.skipped ? 1.0 : 0.0});
            if (!r.skipped && (r.upper_excess > 0.0 || r.lower_excess > 0.0)) ++violations;
        }
        worst = std::max(worst, cont[i].max_violation);
    }
    std::cout << "envelopes: " << violations << " violations over " << seeds << " seeds at t = " << t
              << ", max excess " << num(worst) << "\n";
    if (violations) status = kFailure;

    // non-absolute-continuity statistic
    const int t_nonac = static_cast<int>(c.integer("t_nonac", 24));
    const int nonac_seeds = static_cast<int>(c.integer("nonac_seeds", 20));
    const auto rhos = c.list("rho", {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
    std::vector<NonacReport> nonac(static_cast<std::size_t>(std::max(0, nonac_seeds)));
    parallel_for(nonac.size(), c.jobs, [&](std::size_t i) {
        CascadeSpec s = base;
        s.seed = split_seed(c.seed, i + 1);
        nonac[i] = nonac_statistic(s, t_nonac, rhos);
    });
    CsvWriter na(c.path("circle_nonac.csv"), {"seed", "rho", "depth", "lambda_b", "lambda_phi_b", "holds"}, c.digest());
    long image_violations = 0, flat = 0;
    for (std::size_t i = 0; i < nonac.size(); ++i)
        for (const auto& r : nonac[i].rows) {
            na.row(std::vector<double>{static_cast<double>(i + 1), r.rho, static_cast<double>(t_nonac), r.lambda_b,
                                       r.lambda_phi_b, r.holds ? 1.0 : 0.0});
            if (!r.holds) ++image_violations;
            for (int d = 8; d <= t_nonac; d += 4)
                if (!(r.lambda_b_by_depth[static_cast<std::size_t>(d)] > r.lambda_b_by_depth[static_cast<std::size_t>(d - 4)]))
                    ++flat;
        }
    std::cout << "non-AC: " << image_violations << " cases with lambda(Phi(B)) > rho, " << flat
              << " depth steps without growth of lambda(B)\n";
    if (image_violations) status = kFailure;

    // product map three-point test
    QsOptions q;
    q.K = c.num("K", 2.0);
    q.k = c.fn("k", AdmissibleFn::logarithmic());
    q.t = static_cast<int>(c.integer("t_qs", 24));
    q.trials = c.integer("trials", 10000);
    q.seed = split_seed(c.seed, 0);
    q.n_lo = static_cast<int>(c.integer("n_lo", 2));
    q.n_hi = static_cast<int>(c.integer("n_hi", 7));
    CascadeSpec s1 = base, s2 = cascade_from(c, "axis2_");
    s1.seed = split_seed(c.seed, 1001);
    s2.seed = split_seed(c.seed, 1002);
    const auto qs = product_map_qs_test(s1, s2, q);
    CsvWriter qc(c.path("circle_qs.csv"), {"n", "trials", "budget", "max_observed", "max_excess"}, c.digest());
    for (const auto& r : qs.rows)
        qc.row(std::vector<double>{static_cast<double>(r.n), static_cast<double>(r.trials), r.budget, r.max_observed,
                                   r.max_excess});
    std::cout << "product map: max excess " << num(qs.max_excess) << " over " << qs.trials << " trials\n";
    if (!qs.holds) status = kFailure;

    // graph of Phi with B_rho for the first seed
    const int t_plot = std::min(t, 12);
    CascadeSpec s = base;
    s.seed = split_seed(c.seed, 1);
    const auto phi = repartition(s, t_plot);
    PlotSpec plot;
    plot.title = "repartition function";
    plot.x_label = "x";
    plot.y_label = "Phi(x)";
    PlotSeries graph;
    graph.name = "Phi";
    for (std::size_t k = 0; k < phi.size(); ++k) {
        graph.x.push_back(std::ldexp(static_cast<double>(k), -t_plot));
        graph.y.push_back(phi[k]);
    }
    plot.series.push_back(std::move(graph));
    const double rho_plot = c.num("rho_plot", 0.5);
    const auto masses = cascade_masses(s, t_plot);
    // first-hit intervals at the plot depth
    for (std::size_t k = 0; k < masses.size(); ++k) {
        bool hit = false;
        for (int d = 0; d <= t_plot && !hit; ++d) {
            const std::size_t v = k >> (t_plot - d);
            const double mass = phi[(v + 1) << (t_plot - d)] - phi[v << (t_plot - d)];
            hit = std::ldexp(mass, d) <= rho_plot;
        }
        if (hit) plot.bands.push_back({std::ldexp(static_cast<double>(k), -t_plot), std::ldexp(static_cast<double>(k + 1), -t_plot)});
    }
    write_svg(c.path("circle_phi.svg"), plot);
    return status;
}

// ---- plot --------------------------------------------------------------------------

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

int run_plot(const Context& c) {
    const std::string input = c.require("input");
    std::ifstream in(input);
    if (!in) throw ConfigError("input", "cannot open '" + input + "'");
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header.empty())
            header = split_csv(line);
        else
            rows.push_back(split_csv(line));
    }
    auto column = [&](const std::string& field) -> long {
        if (!c.has(field)) return -1;
        const std::string name = c.str(field, "");
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<long>(i);
        throw ConfigError(field, "field '" + field + "': no column '" + name + "' in " + input);
    };
    const long xi = column("x"), yi = column("y"), gi = column("group");
    if (xi < 0) throw ConfigError("x", "missing required field 'x'");
    if (yi < 0) throw ConfigError("y", "missing required field 'y'");
    PlotSpec plot;
    plot.title = c.str("title", input);
    plot.x_label = header[static_cast<std::size_t>(xi)];
    plot.y_label = header[static_cast<std::size_t>(yi)];
    plot.log_x = c.flag("log_x", false);
    plot.log_y = c.flag("log_y", false);
    std::map<std::string, std::size_t> index;
    for (const auto& r : rows) {
        if (r.size() != header.size()) continue;
        const std::string key = gi >= 0 ? r[static_cast<std::size_t>(gi)] : "";
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, plot.series.size()).first;
            PlotSeries s;
            s.name = gi >= 0 ? header[static_cast<std::size_t>(gi)] + " = " + key : plot.y_label;
            plot.series.push_back(std::move(s));
        }
        auto& s = plot.series[it->second];
        s.x.push_back(std::strtod(r[static_cast<std::size_t>(xi)].c_str(), nullptr));
        s.y.push_back(std::strtod(r[static_cast<std::size_t>(yi)].c_str(), nullptr));
    }
    const std::string out = c.path(c.str("output", "plot.svg"));
    write_svg(out, plot);
    std::cout << "plot: " << plot.series.size() << " series from " << rows.size() << " rows -> " << out << "\n";
    return kOk;
}

}  // namespace

const std::vector<CommandInfo>& commands() {
    static const std::vector<CommandInfo> list = {
        {"axioms", "check the ball-system axioms on a grid, metric cloud or stored system", run_axioms},
        {"modulus", "combinatorial p-modulus of an eigencurve family", run_modulus},
        {"cdim", "conformal dimension estimate from the modulus crossover in p", run_cdim},
        {"diffusivity", "diffusivity constants and the implied modulus lower bound", run_diffusivity},
        {"heintze", "coordinate thresholds and tilted-plane ball shapes", run_heintze},
        {"coxeter", "growth of polygonal Coxeter groups (series pole and BFS)", run_coxeter},
        {"buildings", "conformal dimension of Bourdon buildings with a growth cross-check", run_buildings},
        {"variation", "p-variation of a function and the multiplicative seminorm bound", run_variation},
        {"capacity", "square-condenser capacity against the packing modulus", run_capacity},
        {"circle", "cascade circle homeomorphisms: envelopes, non-AC statistic, product map test", run_circle},
        {"plot", "SVG line plot of two CSV columns", run_plot},
    };
    return list;
}

}  // namespace sqc::cli
