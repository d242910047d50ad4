#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace sawphoton::io {

/// Shortest decimal rendering that parses back to exactly the same double.
std::string format_double(double x);

double parse_double(const std::string& text);

/// Line-oriented CSV writer; cells are pre-rendered strings.
class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path);

    void row(const std::vector<std::string>& cells);
    void close();

  private:
    std::ofstream out_;
    std::filesystem::path path_;
};

/// Minimal reader for the files this tool writes (no quoting, no escapes).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace sawphoton::io
