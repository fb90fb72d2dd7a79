#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "optocool/config.hpp"
#include "optocool/errors.hpp"

#ifndef OPTOCOOL_BUILD_ID
#define OPTOCOOL_BUILD_ID "unknown"
#endif

namespace optocool {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

void write_csv(std::ostream& os, const DataTable& table) {
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(table.columns[i]);
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const double* d = std::get_if<double>(&row[i]))
                os << format_double(*d);
            else if (const std::string* s = std::get_if<std::string>(&row[i]))
                os << csv_escape(*s);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const DataTable& table, const RunConfig& cfg) {
    nlohmann::json j;
    j["meta"] = {{"schema_version", 1},
                 {"generator", "optocool"},
                 {"build", OPTOCOOL_BUILD_ID},
                 {"config", nlohmann::json::parse(resolved_config_json(cfg))}};
    j["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const Cell& c : row) {
            if (const double* d = std::get_if<double>(&c))
                r.push_back(*d);
            else if (const std::string* s = std::get_if<std::string>(&c))
                r.push_back(*s);
            else
                r.push_back(nullptr);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << '\n';
}

void write_table(const DataTable& table, const RunConfig& cfg) {
    std::ostringstream buf;
    if (cfg.format == OutputFormat::json)
        write_json(buf, table, cfg);
    else
        write_csv(buf, table);

    if (cfg.out_path.empty()) {
        std::cout << buf.str();
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw RangeError("cannot open output file '" + cfg.out_path + "'");
    out << buf.str();
    if (!out.good()) throw RangeError("failed writing output file '" + cfg.out_path + "'");
}

}  // namespace optocool
