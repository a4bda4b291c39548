#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace memsteer::io {

struct CsvTable {
    std::vector<std::string> header;  // empty when the file has none
    std::vector<std::vector<double>> rows;

    // Index of a named column, or -1.
    int column(const std::string& name) const;
};

// Numeric CSV reader: blank lines and lines starting with '#' are skipped, a
// first line that does not parse as numbers is taken as the header.
CsvTable read_csv(const std::filesystem::path& path);

// Shortest round-trip representation; artifacts are byte-reproducible.
std::string format_double(double value);

void write_text(const std::filesystem::path& path, const std::string& contents);

} // namespace memsteer::io
