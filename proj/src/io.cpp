#include "anelastic/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "anelastic/errors.hpp"

namespace anelastic {

std::string format_double(double v) {
    char buf[40];
    // %.17g is always sufficient for binary64 round trips; shorter forms that
    // still round-trip keep t columns readable.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v || (v != v && back != back)) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), ncols_(columns.size()) {
    if (!out_) throw Error("cannot open output file: " + path);
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw Error("CsvWriter: column count mismatch");
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::row_raw(const std::vector<std::string>& fields) {
    if (fields.size() != ncols_) throw Error("CsvWriter: column count mismatch");
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

void CsvWriter::flush() { out_.flush(); }

void write_matrix_binary(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    static_assert(sizeof(double) == 8);
    static_assert(std::endian::native == std::endian::little,
                  "binary dumps are specified little-endian");
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            out.write(reinterpret_cast<const char*>(&v), 8);
        }
    if (!out) throw Error("failed writing matrix to " + path);
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << body;
    if (!out) throw Error("failed writing " + path);
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec && !std::filesystem::is_directory(path))
        throw Error("cannot create output directory " + path + ": " + ec.message());
}

}  // namespace anelastic
