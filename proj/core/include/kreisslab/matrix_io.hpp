#pragma once

#include <string>

#include "kreisslab/cmatrix.hpp"

namespace kreisslab {

/// Matrix file format:
///   {"rows": r, "cols": c, "re": [..row-major..], "im": [..row-major..]}
/// Doubles are written in shortest round-trip form, so write/read is
/// bit-exact.
std::string matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const std::string& text);

void write_matrix_file(const std::string& path, const CMatrix& a);
CMatrix read_matrix_file(const std::string& path);

} // namespace kreisslab
