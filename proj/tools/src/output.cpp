#include "relaxosc_cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace relaxosc::cli {
namespace {

std::string fixed(double v, int precision) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    if (ec != std::errc{}) {
        return "0";
    }
    return std::string(buf, ptr);
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

nlohmann::ordered_json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_number: buffer too small");
    }
    return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                os << ',';
            }
            if (const auto* d = std::get_if<double>(&row[i])) {
                os << format_number(*d);
            } else if (const auto* b = std::get_if<bool>(&row[i])) {
                os << (*b ? "true" : "false");
            } else {
                os << std::get<std::string>(row[i]);
            }
        }
        os << '\n';
    }
}

nlohmann::ordered_json rows_to_json(const Table& t) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            obj[t.columns[i]] = cell_json(row[i]);
        }
        out.push_back(std::move(obj));
    }
    return out;
}

nlohmann::ordered_json record_to_json(const Table& t) {
    if (t.rows.size() != 1) {
        throw std::logic_error("record_to_json: table must have exactly one row");
    }
    return rows_to_json(t).front();
}

std::string render_svg(const Plot& p, std::size_t max_points) {
    constexpr double width = 640.0;
    constexpr double height = 400.0;
    constexpr double left = 80.0;
    constexpr double right = 20.0;
    constexpr double top = 30.0;
    constexpr double bottom = 50.0;

    std::vector<double> xs;
    std::vector<double> ys;
    const std::size_t n = std::min(p.x.size(), p.y.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double y = p.log_y ? std::log10(p.y[i]) : p.y[i];
        if (std::isfinite(p.x[i]) && std::isfinite(y)) {
            xs.push_back(p.x[i]);
            ys.push_back(y);
        }
    }
    if (xs.size() > max_points && max_points >= 2) {
        std::vector<double> dx;
        std::vector<double> dy;
        const double stride = static_cast<double>(xs.size() - 1) / static_cast<double>(max_points - 1);
        for (std::size_t k = 0; k < max_points; ++k) {
            const auto i = static_cast<std::size_t>(std::llround(stride * static_cast<double>(k)));
            dx.push_back(xs[i]);
            dy.push_back(ys[i]);
        }
        xs = std::move(dx);
        ys = std::move(dy);
    }

    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (!xs.empty()) {
        const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
        const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
        x0 = *xmin;
        x1 = *xmax > *xmin ? *xmax : *xmin + 1.0;
        y0 = *ymin;
        y1 = *ymax > *ymin ? *ymax : *ymin + 1.0;
    }
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    const auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };
    const auto label_y = [&](double y) { return format_number(p.log_y ? std::pow(10.0, y) : y); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(p.title)
       << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left << "\" y=\"" << top + ph + 18 << "\" font-size=\"11\">" << format_number(x0)
       << "</text>\n";
    os << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"end\" font-size=\"11\">"
       << format_number(x1) << "</text>\n";
    os << "<text x=\"" << left - 4 << "\" y=\"" << top + ph << "\" text-anchor=\"end\" font-size=\"11\">"
       << label_y(y0) << "</text>\n";
    os << "<text x=\"" << left - 4 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\" font-size=\"11\">"
       << label_y(y1) << "</text>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << escape_xml(p.x_label) << "</text>\n";
    os << "<text x=\"15\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 "
       << top + ph / 2 << ")\">" << escape_xml(p.y_label) << (p.log_y ? " (log)" : "") << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        os << (i ? " " : "") << fixed(px(xs[i]), 2) << ',' << fixed(py(ys[i]), 2);
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

}  // namespace relaxosc::cli
