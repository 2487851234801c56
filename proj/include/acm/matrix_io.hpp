#ifndef ACM_MATRIX_IO_HPP
#define ACM_MATRIX_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "acm/structures.hpp"

// Plain-text matrix files: first line n, then n rows of n complex entries
// "a+bi" whitespace-separated. Pairs are two such blocks separated by a
// blank line. Floats print with 17 significant digits so files round-trip
// exactly.
namespace acm {

struct ParseError : Error {
  using Error::Error;
};

std::string format_double(double x);
std::string format_complex(Complex z);
Complex parse_complex(const std::string& token);

void write_matrix(std::ostream& os, const Matrix& M);
Matrix read_matrix(std::istream& is);

void write_matrix_file(const std::string& path, const Matrix& M);
void write_pair_file(const std::string& path, const Matrix& A, const Matrix& B);

// One or two blocks, depending on the file.
std::vector<Matrix> read_matrices_file(const std::string& path);

} // namespace acm

#endif
