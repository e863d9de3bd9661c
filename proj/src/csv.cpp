#include "conharm/csv.hpp"

#include "conharm/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace conharm::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

} // namespace

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

Table parse(std::istream& in) {
    Table table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        auto fields = split(view);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size())
            throw ValidationError("csv: row has " + std::to_string(fields.size()) + " fields, header has " +
                                  std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) throw ValidationError("csv: missing header row");
    return table;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("csv: cannot open " + path.string());
    return parse(in);
}

double to_double(std::string_view field) {
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ValidationError("csv: not a number: '" + std::string(field) + "'");
    return value;
}

long to_integer(std::string_view field) {
    long value = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ValidationError("csv: not an integer: '" + std::string(field) + "'");
    return value;
}

std::string format(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_row(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << format(values[i]);
    }
    out << '\n';
}

void write_header(std::ostream& out, std::span<const std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ',';
        out << names[i];
    }
    out << '\n';
}

} // namespace conharm::csv
