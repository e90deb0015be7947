#include "sqc/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqc {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns, const std::string& config_digest)
    : path_(path), width_(columns.size()), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    out_ << "# sqc " << kToolVersion << " config " << config_digest << "\n";
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch in " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        const auto& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            out_ << '"';
            for (char ch : c) out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
            out_ << '"';
        } else {
            out_ << c;
        }
    }
    out_ << '\n';
    out_.flush();
}

void CsvWriter::row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_number(v));
    row(s);
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '<') out += "&lt;";
        else if (ch == '>') out += "&gt;";
        else if (ch == '&') out += "&amp;";
        else out += ch;
    }
    return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg(const std::string& path, const PlotSpec& plot) {
    const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    auto tx = [&](double v) { return plot.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return plot.log_y ? std::log10(v) : v; };
    auto usable_x = [&](double v) { return std::isfinite(v) && (!plot.log_x || v > 0); };
    auto usable_y = [&](double v) { return std::isfinite(v) && (!plot.log_y || v > 0); };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable_x(s.x[i]) && usable_y(s.y[i])) {
                x0 = std::min(x0, tx(s.x[i]));
                x1 = std::max(x1, tx(s.x[i]));
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& b : plot.bands) {
        if (!usable_x(b.x0) || !usable_x(b.x1)) continue;
        out << "<rect x=\"" << format_number(px(b.x0)) << "\" y=\"" << T << "\" width=\""
            << format_number(std::max(0.5, px(b.x1) - px(b.x0))) << "\" height=\"" << H - T - B
            << "\" fill=\"#f4c7c3\" stroke=\"none\"/>\n";
    }
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
        << "</text>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << escape(plot.x_label + (plot.log_x ? " (log)" : "")) << "</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << H / 2 << ")\">" << escape(plot.y_label + (plot.log_y ? " (log)" : "")) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
        const double vx = plot.log_x ? std::pow(10.0, fx) : fx, vy = plot.log_y ? std::pow(10.0, fy) : fy;
        char lx[32], ly[32];
        std::snprintf(lx, sizeof lx, "%.3g", vx);
        std::snprintf(ly, sizeof ly, "%.3g", vy);
        out << "<text x=\"" << format_number(px(vx)) << "\" y=\"" << H - B + 16
            << "\" text-anchor=\"middle\" font-size=\"11\">" << lx << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << format_number(py(vy) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << ly << "</text>\n";
    }
    int idx = 0;
    for (const auto& s : plot.series) {
        const char* color = kColors[idx % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable_x(s.x[i]) && usable_y(s.y[i]))
                out << format_number(px(s.x[i])) << ',' << format_number(py(s.y[i])) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 15 * idx << "\" font-size=\"12\" fill=\"" << color
            << "\">" << escape(s.name) << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

}  // namespace sqc
