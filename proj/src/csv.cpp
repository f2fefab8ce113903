#include "aalsim/csv.hpp"

#include <cstdio>
#include <sstream>

#include "aalsim/error.hpp"

namespace aalsim {

std::string format_csv_value(const CsvValue& value)
{
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(double v) const
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", v);
            return buf;
        }
    };
    return std::visit(Visitor{}, value);
}

std::string emit_csv(const ResultTable& table)
{
    std::string out;
    auto append_line = [&out](const auto& fields, auto&& show) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += show(fields[i]);
        }
        out += '\n';
    };

    append_line(table.columns, [](const std::string& s) { return s; });
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != table.columns.size()) {
            throw InternalError("ragged CSV row " + std::to_string(r));
        }
        append_line(table.rows[r], format_csv_value);
    }
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) {
            fields.push_back(field);
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        out.push_back(std::move(fields));
    }
    return out;
}

std::string emit_snapshot(const Community& community)
{
    ResultTable table;
    table.columns = {"row", "col", "role", "req_value", "pro_value", "work_status", "partner_row", "partner_col"};
    const auto cells = community.cells();
    table.rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell& cell = cells[i];
        const Coord c = community.coord(i);
        table.rows.push_back({
            std::int64_t{c.row},
            std::int64_t{c.col},
            std::string(to_string(cell.role)),
            cell.req_value.value(),
            std::int64_t{cell.pro_value},
            std::int64_t{cell.work_status() ? 1 : 0},
            std::int64_t{cell.partner ? cell.partner->row : -1},
            std::int64_t{cell.partner ? cell.partner->col : -1},
        });
    }
    return emit_csv(table);
}

} // namespace aalsim
