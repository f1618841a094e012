#pragma once

#include <string>

#include "nfsic/common.hpp"

namespace nfsic {

// Headerless numeric CSV -> matrix. Ragged rows, empty cells, non-numeric
// or non-finite values raise ParseError with row/column diagnostics.
Matrix load_matrix_csv(const std::string& path, bool skip_header = false);

// Comma-separated, LF line endings, 17 significant digits.
void write_matrix_csv(const std::string& path, const Matrix& m);

std::string format_double(double v);  // shortest-ish %.17g rendering

}  // namespace nfsic
