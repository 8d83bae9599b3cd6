#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace wavescat {

inline constexpr const char* kVersion = "0.1.0";

/// 17 significant digits: doubles round-trip exactly.
std::string format_g17(double value);

/// CSV emitter with a header row and a trailing metadata comment block.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& fields);
    void comment(const std::string& line);
    /// Writes the `# config_hash=..., version=...` trailer and closes.
    void finish(std::uint64_t config_hash);

private:
    std::ofstream out_;
    std::size_t columns_ = 0;
    bool finished_ = false;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;

    /// Index of a named column; throws if absent.
    int column(const std::string& name) const;
    /// Index or -1 if absent.
    int maybe_column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
double parse_double_field(const std::string& field);

}  // namespace wavescat
