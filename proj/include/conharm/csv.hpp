#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace conharm::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, or -1.
    int column(std::string_view name) const;
};

// Reads a comma-separated file with a header row. Blank lines and lines
// starting with '#' are skipped.
Table read(const std::filesystem::path& path);
Table parse(std::istream& in);

double to_double(std::string_view field);
long to_integer(std::string_view field);

// Shortest round-trip representation (%.17g); deterministic across runs.
std::string format(double value);

void write_row(std::ostream& out, std::span<const double> values);
void write_header(std::ostream& out, std::span<const std::string> names);

} // namespace conharm::csv
