#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace qbd {

/// Shortest representation of v that round-trips exactly through parsing.
std::string format_double(double v);

/// Comma-separated tables with '#'-prefixed metadata header lines.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);

    void comment(const std::string& line);
    void header(std::span<const std::string> names);
    void row(std::span<const double> values);
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

} // namespace qbd
