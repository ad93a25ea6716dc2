#ifndef TSEM_IO_HPP
#define TSEM_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace tsem::io {

/// Shortest round-trip decimal representation of a double ("%.17g" trimmed).
std::string format_double(double v);

/// One CSV row from already-formatted cells.
std::string csv_row(const std::vector<std::string>& cells);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// Incremental CSV writer with a fixed header; flushes after every row so a
/// later abort still leaves all completed rows on disk.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& cells);

private:
    std::filesystem::path path_;
    std::size_t width_;
};

} // namespace tsem::io

#endif
