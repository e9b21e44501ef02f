#pragma once

// Tabular command output rendered as commented CSV or JSON.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace c3rotor::cli {

enum class CellKind {
    Number,  // machine-precision real or integer: JSON number
    Text,    // rationals, labels, extended-precision reals: JSON string
};

struct Cell {
    std::string text;
    CellKind kind = CellKind::Text;
};

inline Cell number(std::string text) { return {std::move(text), CellKind::Number}; }
inline Cell text(std::string text) { return {std::move(text), CellKind::Text}; }

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_meta(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }
};

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

}  // namespace c3rotor::cli
