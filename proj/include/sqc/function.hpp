#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "sqc/ballsys.hpp"

namespace sqc {

/// A function on the ground set, stored as a fixed number of samples per ground point.
///
/// On grids the samples are the values at the corners of each ground cell, so the
/// oscillation over a union of cells is the exact range of a cellwise-monotone function.
struct SampledFunction {
    std::string name;
    std::size_t per_point = 1;
    std::vector<double> re;
    std::vector<double> im;  // empty for real functions

    bool is_complex() const { return !im.empty(); }
    std::size_t points() const { return per_point ? re.size() / per_point : 0; }
    std::complex<double> sample(PointId x, std::size_t j) const;

    /// max |f| over the samples of K
    double sup_norm(const PointSet& K) const;
    /// diameter of f(a): max - min for real f, max pairwise distance for complex f
    double osc(const PointSet& a) const;

    static SampledFunction constant(std::size_t points, double c);
    static SampledFunction on_grid(const GridSystem& g, const std::function<double(const std::vector<double>&)>& f,
                                   std::string name = "f");
    static SampledFunction on_grid_complex(const GridSystem& g,
                                           const std::function<std::complex<double>(const std::vector<double>&)>& f,
                                           std::string name = "f");
    /// i-th coordinate x_i on the grid
    static SampledFunction coordinate(const GridSystem& g, int axis);
};

SampledFunction operator*(const SampledFunction& f, const SampledFunction& g);
SampledFunction operator+(const SampledFunction& f, const SampledFunction& g);
SampledFunction scaled(const SampledFunction& f, double lambda);

}  // namespace sqc
