#pragma once

#include <fstream>
#include <span>
#include <string>

namespace pwlab {

// Deterministic CSV emission: fixed header, %.17g floats, LF line endings,
// binary stream. Identical data must produce identical bytes on every
// platform.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);
    ~CsvWriter();

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) {
        row(std::span<const double>(values.begin(), values.size()));
    }

private:
    std::ofstream out_;
    std::string path_;
};

} // namespace pwlab
