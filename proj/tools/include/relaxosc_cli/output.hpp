#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace relaxosc::cli {

using Cell = std::variant<double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t);

/// Array of row objects keyed by column name.
nlohmann::ordered_json rows_to_json(const Table& t);
/// The single row of `t` as one object.
nlohmann::ordered_json record_to_json(const Table& t);

struct Plot {
    std::vector<double> x;
    std::vector<double> y;
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
};

/// Single-polyline line chart. Coordinates are printed with fixed precision,
/// so identical input yields identical bytes. At most `max_points` vertices
/// are drawn (uniform decimation keeping the last point).
std::string render_svg(const Plot& p, std::size_t max_points = 4000);

}  // namespace relaxosc::cli
