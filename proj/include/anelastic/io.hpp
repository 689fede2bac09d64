#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <string>
#include <vector>

namespace anelastic {

/// Shortest round-trip decimal form of a double ("%.17g"-style, trimmed).
std::string format_double(double v);

/// Streaming CSV writer: header row on open, '\n' line ends, values printed
/// with full round-trip precision.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    /// Mixed row: fields are written verbatim (callers format numbers).
    void row_raw(const std::vector<std::string>& fields);
    void flush();

  private:
    std::ofstream out_;
    size_t ncols_;
};

/// Row-major little-endian binary64 dump of a dense matrix.
void write_matrix_binary(const std::string& path, const Eigen::MatrixXd& m);

/// Write a string to a file (used for JSON summaries).
void write_text(const std::string& path, const std::string& body);

/// Create the directory (and parents) if needed; throws on failure.
void ensure_directory(const std::string& path);

}  // namespace anelastic
