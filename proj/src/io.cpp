#include "divchain/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "divchain/error.hpp"

namespace divchain {

namespace {

bool needs_quotes(const std::string& s) { return s.find_first_of(",\"\n") != std::string::npos; }

std::string csv_field(const Cell& c, bool hex)
{
    return std::visit(
        [&](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
                return format_double(v, hex);
            } else if constexpr (std::is_same_v<V, std::string>) {
                if (!needs_quotes(v)) return v;
                std::string out = "\"";
                for (char ch : v) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return out + "\"";
            } else {
                return std::to_string(v);
            }
        },
        c);
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (ch == '"') quoted = false;
            else cur += ch;
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur), cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

Cell parse_cell(const std::string& s)
{
    if (s.empty()) return s;
    if (s.find_first_not_of("0123456789") == std::string::npos) return std::uint64_t(std::stoull(s));
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (*end == '\0') return v;
    return s;
}

}  // namespace

Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::csv;
    if (s == "jsonl" || s == "json-lines") return Format::jsonl;
    throw domain_error("unknown format '" + s + "' (csv, jsonl)");
}

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw domain_error("row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_double(double x, bool hex)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, hex ? "%a" : "%.17g", x);
    return buf;
}

void write_table(std::ostream& os, const Table& t, Format f, bool hex)
{
    if (f == Format::csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i], false);
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i], hex);
            os << '\n';
        }
        return;
    }
    for (const auto& row : t.rows) {
        nlohmann::ordered_json j;
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        if (hex || !std::isfinite(v)) j[t.columns[i]] = format_double(v, true);
                        else j[t.columns[i]] = v;
                    } else {
                        j[t.columns[i]] = v;
                    }
                },
                row[i]);
        os << j.dump() << '\n';
    }
}

Table read_csv(std::istream& is)
{
    Table t;
    std::string line;
    if (!std::getline(is, line)) throw domain_error("empty CSV input");
    t.columns = split_csv(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<Cell> row;
        for (const std::string& f : split_csv(line)) row.push_back(parse_cell(f));
        t.add(std::move(row));
    }
    return t;
}

Table read_jsonl(std::istream& is)
{
    Table t;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::ordered_json::parse(line);
        if (t.columns.empty())
            for (auto it = j.begin(); it != j.end(); ++it) t.columns.push_back(it.key());
        std::vector<Cell> row;
        for (const std::string& c : t.columns) {
            const auto& v = j.at(c);
            if (v.is_number_unsigned()) row.push_back(v.get<std::uint64_t>());
            else if (v.is_number_integer()) row.push_back(v.get<std::int64_t>());
            else if (v.is_number_float()) row.push_back(v.get<double>());
            else row.push_back(parse_cell(v.get<std::string>()));
        }
        t.add(std::move(row));
    }
    return t;
}

}  // namespace divchain
