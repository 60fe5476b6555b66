#pragma once

#include <string>

#include "taildep/matrix.hpp"

namespace taildep {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Reads a headerless comma-separated numeric matrix. Throws io_error (with
/// the 1-based row number where applicable) on unreadable files, empty
/// files, ragged rows, or unparseable fields.
Matrix read_csv_matrix(const std::string& path);

/// Writes a headerless comma-separated matrix, one row per line, using
/// shortest round-trip formatting.
void write_csv_matrix(const std::string& path, const Matrix& m);

}  // namespace taildep
