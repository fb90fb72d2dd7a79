#pragma once

// Column-ordered result table shared by the sweep engine and the CLI
// serializers. Cells are empty, numeric or text; failed grid points keep an
// error marker instead of fabricated values.

#include <string>
#include <variant>
#include <vector>

namespace optocool {

using Cell = std::variant<std::monostate, double, std::string>;

struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::vector<Cell>& add_row() {
        rows.emplace_back(columns.size());
        return rows.back();
    }

    int column_index(const std::string& name) const {
        for (size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline Cell cell() { return std::monostate{}; }
inline Cell cell(double v) { return v; }
inline Cell cell(std::string v) { return v; }
inline Cell cell(bool v) { return v ? 1.0 : 0.0; }

}  // namespace optocool
