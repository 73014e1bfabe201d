#pragma once

//
// Matrix file formats.
//
// CSV: one line per matrix row, comma-separated decimal values, no header.
// Binary (.pmat): magic "PMAT1" (5 bytes), then rows and cols as unsigned
// 64-bit little-endian, then rows*cols IEEE-754 doubles little-endian in
// column-major order. Binary round-trips are bit-exact.
//

#include <iosfwd>
#include <string>

#include "pcss/linalg.hpp"

namespace pcss {

// Format chosen by content: files starting with the "PMAT1" magic load as
// binary, everything else parses as CSV.
Matrix load_matrix(const std::string& path);

// Format chosen by extension: ".csv" writes CSV, everything else binary.
void save_matrix(const std::string& path, const Matrix& a);

Matrix load_matrix_csv(std::istream& in, const std::string& context);
Matrix load_matrix_pmat(std::istream& in, const std::string& context);
void save_matrix_csv(std::ostream& out, const Matrix& a);
void save_matrix_pmat(std::ostream& out, const Matrix& a);

} // namespace pcss
