#include "table.hpp"

#include <json.hpp>

#include <ostream>

namespace c3rotor::cli {

void write_csv(std::ostream& out, const Table& table) {
    for (const auto& [key, value] : table.meta) out << "# " << key << ": " << value << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    if (!table.columns.empty()) out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].text;
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.meta) doc["meta"][key] = value;
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json record = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            const auto& cell = row[i];
            if (cell.kind == CellKind::Number) {
                record[table.columns[i]] = nlohmann::ordered_json::parse(cell.text);
            } else {
                record[table.columns[i]] = cell.text;
            }
        }
        doc["rows"].push_back(std::move(record));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace c3rotor::cli
