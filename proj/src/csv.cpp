#include "pwlab/csv.hpp"

#include <cstdio>

#include "pwlab/errors.hpp"

namespace pwlab {

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) throw IoError("cannot open " + path + " for writing");
    out_ << header << '\n';
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(std::span<const double> values) {
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out_.put(',');
        const int len = std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        out_.write(buf, len);
    }
    out_.put('\n');
    if (!out_) throw IoError("write failed on " + path_);
}

} // namespace pwlab
