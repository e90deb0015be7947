#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace sqc {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal form (deterministic across runs).
std::string format_number(double v);

/// CSV file with a provenance comment line and a header row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns, const std::string& config_digest);
    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::size_t width_;
    std::ofstream out_;
};

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

struct PlotBand {
    double x0 = 0.0, x1 = 0.0;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
    std::vector<PlotBand> bands;  // shaded x-intervals
};

/// Minimal line plot. Nonpositive values are dropped on log axes.
void write_svg(const std::string& path, const PlotSpec& plot);

}  // namespace sqc
