#include "memsteer/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "memsteer/errors.hpp"

namespace memsteer::io {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

} // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "io", "cannot open '" + path.string() + "'");
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto cells = split(stripped);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t i = 0; i < cells.size() && numeric; ++i) numeric = parse_number(cells[i], row[i]);
        if (!numeric) {
            if (first) {
                table.header = cells;
                first = false;
                continue;
            }
            throw Error(Errc::io, "io",
                        path.string() + ":" + std::to_string(line_no) + ": non-numeric row");
        }
        first = false;
        if (!table.rows.empty() && row.size() != table.rows.front().size())
            throw Error(Errc::io, "io",
                        path.string() + ":" + std::to_string(line_no) + ": ragged row");
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "io", "cannot write '" + path.string() + "'");
    out << contents;
}

} // namespace memsteer::io
