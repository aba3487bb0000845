#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qic/experiment.hpp"

namespace qic {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

inline std::string to_fixed(double v, int precision) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << v;
    return out.str();
}

}  // namespace detail

inline std::vector<ReportRow> read_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty report: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != report_header)
        throw std::runtime_error("unrecognized report header in " + path.string());

    std::vector<ReportRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 17)
            throw std::runtime_error("report line " + std::to_string(lineno) +
                                     ": expected 17 fields, got " + std::to_string(f.size()));
        ReportRow row;
        row.dataset = f[0];
        row.encoder = f[1];
        row.classifier = f[2];
        row.n = static_cast<int>(parse_int(f[3], "report n"));
        row.train_size = static_cast<std::size_t>(parse_uint(f[4], "report train_size"));
        row.shade = f[5].empty() ? -1 : static_cast<int>(parse_int(f[5], "report shade"));
        row.corruption = f[6];
        row.digits = f[7];
        row.seed = parse_uint(f[8], "report seed");
        row.epochs = static_cast<int>(parse_int(f[9], "report epochs"));
        row.layers = static_cast<int>(parse_int(f[10], "report layers"));
        row.final_loss = std::stod(f[11]);
        row.train_acc_default = std::stod(f[12]);
        row.train_acc = std::stod(f[13]);
        row.valid_acc_default = std::stod(f[14]);
        row.valid_acc = std::stod(f[15]);
        row.wall_seconds = std::stod(f[16]);
        rows.push_back(std::move(row));
    }
    return rows;
}

enum class TableFormat { csv, markdown };

/// Pivot a report into summary-table orientation: one row per
/// (train size, classifier), one column per n, shade, or corruption value,
/// cells holding the calibrated validation accuracy to 3 decimals.
inline std::string emit_table(const std::vector<ReportRow>& rows, TableFormat format) {
    if (rows.empty()) throw std::invalid_argument("emit_table: empty report");

    const bool by_shade =
        std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.shade >= 0; });
    std::vector<std::string> corruptions;
    for (const auto& r : rows)
        if (!r.corruption.empty() &&
            std::find(corruptions.begin(), corruptions.end(), r.corruption) == corruptions.end())
            corruptions.push_back(r.corruption);
    const bool by_corruption = !by_shade && corruptions.size() > 1;

    std::vector<std::string> col_keys;
    if (by_shade) {
        std::set<int> shades;
        for (const auto& r : rows)
            if (r.shade >= 0) shades.insert(r.shade);
        for (int s : shades) col_keys.push_back("shade=" + std::to_string(s));
    } else if (by_corruption) {
        col_keys = corruptions;
    } else {
        std::set<int> ns;
        for (const auto& r : rows) ns.insert(r.n);
        for (int n : ns) col_keys.push_back("n=" + std::to_string(n));
    }

    const auto col_of = [&](const ReportRow& r) -> std::string {
        if (by_shade) return "shade=" + std::to_string(r.shade);
        if (by_corruption) return r.corruption;
        return "n=" + std::to_string(r.n);
    };
    const auto classifier_rank = [](const std::string& c) { return c == "vqc" ? 0 : 1; };

    std::vector<std::pair<std::size_t, std::string>> row_keys;
    std::map<std::pair<std::size_t, std::string>, std::map<std::string, std::string>> cells;
    for (const auto& r : rows) {
        const auto key = std::make_pair(r.train_size, r.classifier);
        if (std::find(row_keys.begin(), row_keys.end(), key) == row_keys.end())
            row_keys.push_back(key);
        cells[key][col_of(r)] = detail::to_fixed(r.valid_acc, 3);
    }
    std::sort(row_keys.begin(), row_keys.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return classifier_rank(a.second) < classifier_rank(b.second);
    });

    std::ostringstream out;
    if (format == TableFormat::csv) {
        out << "train_size,classifier";
        for (const auto& c : col_keys) out << ',' << csv_escape(c);
        out << '\n';
        for (const auto& key : row_keys) {
            out << key.first << ',' << csv_escape(key.second);
            for (const auto& c : col_keys) {
                const auto& row_cells = cells[key];
                const auto it = row_cells.find(c);
                out << ',' << (it == row_cells.end() ? "" : it->second);
            }
            out << '\n';
        }
    } else {
        out << "| train size | classifier |";
        for (const auto& c : col_keys) out << ' ' << c << " |";
        out << "\n|---|---|";
        for (std::size_t i = 0; i < col_keys.size(); ++i) out << "---|";
        out << '\n';
        for (const auto& key : row_keys) {
            out << "| " << key.first << " | " << key.second << " |";
            for (const auto& c : col_keys) {
                const auto& row_cells = cells[key];
                const auto it = row_cells.find(c);
                out << ' ' << (it == row_cells.end() ? "" : it->second) << " |";
            }
            out << '\n';
        }
    }
    return out.str();
}

/// SVG line chart of calibrated validation accuracy against shade, one
/// polyline per (classifier, train size) series.
inline std::string emit_shade_plot(const std::vector<ReportRow>& rows) {
    std::vector<const ReportRow*> points;
    for (const auto& r : rows)
        if (r.shade >= 0) points.push_back(&r);
    if (points.empty())
        throw std::invalid_argument("emit_shade_plot: report has no shade sweep");

    std::vector<std::pair<std::size_t, std::string>> series_keys;
    for (const auto* r : points) {
        const auto key = std::make_pair(r->train_size, r->classifier);
        if (std::find(series_keys.begin(), series_keys.end(), key) == series_keys.end())
            series_keys.push_back(key);
    }
    std::sort(series_keys.begin(), series_keys.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return (a.second == "vqc" ? 0 : 1) < (b.second == "vqc" ? 0 : 1);
    });

    std::set<int> shade_set;
    for (const auto* r : points) shade_set.insert(r->shade);
    const std::vector<int> shades(shade_set.begin(), shade_set.end());
    const double lo = shades.front(), hi = shades.back();

    const double width = 680, height = 440;
    const double left = 64, right = width - 170, top = 48, bottom = height - 56;
    const auto x_of = [&](int shade) {
        if (hi == lo) return (left + right) / 2.0;
        return left + (shade - lo) / (hi - lo) * (right - left);
    };
    const auto y_of = [&](double acc) { return bottom - acc * (bottom - top); };
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (left + right) / 2
        << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">"
           "validation accuracy vs shade</text>\n";

    for (int i = 0; i <= 5; ++i) {
        const double acc = i * 0.2;
        const double y = y_of(acc);
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << right << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << detail::to_fixed(acc, 1) << "</text>\n";
    }
    for (int shade : shades) {
        const double x = x_of(shade);
        svg << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
            << bottom + 5 << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << bottom + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << shade
            << "</text>\n";
    }
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\" stroke=\"#333333\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 16
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">shade</text>\n";

    std::set<std::size_t> sizes;
    for (const auto& key : series_keys) sizes.insert(key.first);
    const std::vector<std::size_t> size_order(sizes.begin(), sizes.end());

    double legend_y = top + 10;
    for (const auto& [train_size, classifier] : series_keys) {
        const std::size_t color_index =
            std::find(size_order.begin(), size_order.end(), train_size) - size_order.begin();
        const char* color = palette[color_index % 6];
        const bool dashed = classifier != "vqc";

        std::map<int, double> acc_by_shade;
        for (const auto* r : points)
            if (r->train_size == train_size && r->classifier == classifier)
                acc_by_shade[r->shade] = r->valid_acc;

        std::ostringstream poly;
        for (const auto& [shade, acc] : acc_by_shade)
            poly << detail::to_fixed(x_of(shade), 1) << ',' << detail::to_fixed(y_of(acc), 1)
                 << ' ';
        svg << "<polyline points=\"" << poly.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        for (const auto& [shade, acc] : acc_by_shade)
            svg << "<circle cx=\"" << detail::to_fixed(x_of(shade), 1) << "\" cy=\""
                << detail::to_fixed(y_of(acc), 1) << "\" r=\"3\" fill=\"" << color << "\"/>\n";

        svg << "<line x1=\"" << right + 12 << "\" y1=\"" << legend_y << "\" x2=\"" << right + 40
            << "\" y2=\"" << legend_y << "\" stroke=\"" << color << "\" stroke-width=\"2\""
            << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        svg << "<text x=\"" << right + 46 << "\" y=\"" << legend_y + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << classifier << ", train "
            << train_size << "</text>\n";
        legend_y += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace qic
