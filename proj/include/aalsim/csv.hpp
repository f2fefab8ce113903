#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "aalsim/community.hpp"

namespace aalsim {

/// A CSV field. Doubles are written with 6 decimal digits.
using CsvValue = std::variant<std::int64_t, std::uint64_t, double, std::string>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<CsvValue>> rows;

    bool operator==(const ResultTable&) const = default;
};

std::string format_csv_value(const CsvValue& value);

/// Header line plus one line per row, '\n' terminated. Throws InternalError
/// if a row's width differs from the header's.
std::string emit_csv(const ResultTable& table);

/// Parses text produced by emit_csv back into header and string fields.
/// Intended for tests and tooling; no quoting support.
std::vector<std::vector<std::string>> read_csv(const std::string& text);

/// Per-cell dump of a grid: row,col,role,req_value,pro_value,work_status,partner_row,partner_col.
/// Partner coordinates are -1 for free cells.
std::string emit_snapshot(const Community& community);

} // namespace aalsim
