#include "wavescat/csv.hpp"

#include <cstdio>
#include <sstream>

#include "wavescat/errors.hpp"

namespace wavescat {

std::string format_g17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), columns_(columns.size()) {
    if (!out_) throw ArgumentError("cannot open output file '" + path + "'");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() {
    if (!finished_) out_.flush();
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw ArgumentError("csv row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_g17(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
        throw ArgumentError("csv row width does not match the header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << '\n'; }

void CsvWriter::finish(std::uint64_t config_hash) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash));
    out_ << "# config_hash=" << buf << ", version=" << kVersion << '\n';
    out_.flush();
    finished_ = true;
}

int CsvTable::column(const std::string& name) const {
    const int idx = maybe_column(name);
    if (idx < 0) throw ArgumentError("csv is missing required column '" + name + "'");
    return idx;
}

int CsvTable::maybe_column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        std::size_t a = field.find_first_not_of(" \t\r");
        std::size_t b = field.find_last_not_of(" \t\r");
        out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
    }
    return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open csv file '" + path + "'");
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        auto fields = split_csv_line(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) throw ArgumentError("csv file '" + path + "' has no header");
    return table;
}

double parse_double_field(const std::string& field) {
    try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw ArgumentError("cannot parse '" + field + "' as a number");
    }
}

}  // namespace wavescat
