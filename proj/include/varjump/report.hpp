#ifndef VARJUMP_REPORT_HPP
#define VARJUMP_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace varjump {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;  // measured margin, formatted
};

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
    bool dashed = false;
};

struct SvgPlot {
    std::string name;  // file suffix
    std::string x_label, y_label;
    std::vector<SvgSeries> series;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> info;  // config echo and summary statistics
    std::vector<Verdict> verdicts;
    std::vector<SvgPlot> plots;
    double wall_seconds = 0.0;

    bool passed() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }

    void add_row(std::initializer_list<std::string> cells) { rows.emplace_back(cells); }
};

namespace detail {

inline void require_stream(const std::ofstream& out, const std::string& path) {
    if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace detail

inline void write_csv(const ExperimentReport& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    detail::require_stream(out, path);
    for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c];
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << "\n";
    }
}

// JSON mirror of the CSV rows, 1:1, plus the verdicts.
inline void write_json(const ExperimentReport& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    detail::require_stream(out, path);
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"' || ch == '\\') q += '\\';
            q += ch;
        }
        return q + "\"";
    };
    out << "{\n  \"experiment\": " << quote(r.experiment) << ",\n  \"columns\": [";
    for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? ", " : "") << quote(r.columns[c]);
    out << "],\n  \"rows\": [";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        out << (i ? ",\n    [" : "\n    [");
        for (std::size_t c = 0; c < r.rows[i].size(); ++c) out << (c ? ", " : "") << quote(r.rows[i][c]);
        out << "]";
    }
    out << "\n  ],\n  \"verdicts\": [";
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
        const auto& v = r.verdicts[i];
        out << (i ? ",\n    {" : "\n    {") << "\"name\": " << quote(v.name)
            << ", \"pass\": " << (v.pass ? "true" : "false") << ", \"detail\": " << quote(v.detail) << "}";
    }
    out << "\n  ]\n}\n";
}

// Minimal log-log line chart: one polyline per series, dashed for envelopes.
inline void write_svg(const SvgPlot& plot, const std::string& path) {
    const double width = 640, height = 480, margin = 56;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin < xmax)) xmax = xmin + 1;
    if (!(ymin < ymax)) ymax = ymin * 10 + 1;
    auto tx = [&](double x) {
        return margin + (std::log(x) - std::log(xmin)) / (std::log(xmax) - std::log(xmin)) * (width - 2 * margin);
    };
    auto ty = [&](double y) {
        return height - margin -
               (std::log(y) - std::log(ymin)) / (std::log(ymax) - std::log(ymin)) * (height - 2 * margin);
    };
    std::ofstream out(path, std::ios::binary);
    detail::require_stream(out, path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
        << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << plot.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << height / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16 " << height / 2
        << ")\" text-anchor=\"middle\">" << plot.y_label << "</text>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    int ci = 0;
    double legend_y = margin + 16;
    for (const auto& s : plot.series) {
        const char* color = colors[ci % 4];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
            << " stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", tx(s.x[i]), ty(s.y[i]));
            out << buf;
        }
        out << "\"/>\n";
        out << "<text x=\"" << width - margin - 8 << "\" y=\"" << legend_y << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
            << color << "\">" << s.label << "</text>\n";
        legend_y += 16;
        ++ci;
    }
    out << "</svg>\n";
}

// Human-readable summary; the timing line is informational and not part of
// the byte-stable surface (CSV/JSON/SVG are).
inline void write_summary(const ExperimentReport& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    detail::require_stream(out, path);
    out << "experiment: " << r.experiment << "\n";
    out << "cases: " << r.rows.size() << "\n";
    for (const auto& line : r.info) out << line << "\n";
    for (const auto& v : r.verdicts)
        out << (v.pass ? "[PASS] " : "[FAIL] ") << v.name << ": " << v.detail << "\n";
    out << "# timing (non-normative): " << format_double(r.wall_seconds) << " s\n";
}

inline std::vector<std::string> emit_report(const ExperimentReport& r, const std::string& out_dir,
                                            const std::vector<std::string>& formats) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;
    const std::string base = out_dir + "/" + r.experiment;
    for (const auto& fmt : formats) {
        if (fmt == "csv") {
            write_csv(r, base + ".csv");
            written.push_back(base + ".csv");
        } else if (fmt == "json") {
            write_json(r, base + ".json");
            written.push_back(base + ".json");
        } else if (fmt == "svg") {
            for (const auto& plot : r.plots) {
                const std::string path = base + "_" + plot.name + ".svg";
                write_svg(plot, path);
                written.push_back(path);
            }
        } else {
            throw std::runtime_error("unknown report format '" + fmt + "'");
        }
    }
    write_summary(r, base + "_summary.txt");
    written.push_back(base + "_summary.txt");
    return written;
}

}  // namespace varjump

#endif  // VARJUMP_REPORT_HPP
