#pragma once

// Text matrix format:
//
//   dim <n>
//   <n rows of n whitespace-separated complex tokens>
//
// A complex token is written `re+imj` or `re-imj` (e.g. `1.5-0.25j`,
// `-3e-05+0j`). Values are printed with 17 significant digits so a
// write/read cycle is exact.

#include <iosfwd>
#include <string>

#include "entrate/linalg.hpp"

namespace entrate::io {

Complex parse_complex(const std::string& token);
std::string format_complex(Complex z);

CMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const CMatrix& m);

CMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const CMatrix& m);

}  // namespace entrate::io
