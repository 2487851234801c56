#include "acm/matrix_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace acm {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  std::string s = format_double(z.real());
  s += z.imag() < 0.0 ? '-' : '+';
  s += format_double(std::abs(z.imag()));
  s += 'i';
  return s;
}

Complex parse_complex(const std::string& token) {
  if (token.empty()) throw ParseError("empty complex token");
  std::string body = token;
  const bool has_i = body.back() == 'i';
  if (has_i) body.pop_back();
  // Split at the last sign that does not follow an exponent marker.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') &&
        body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  try {
    if (!has_i) {
      std::size_t used = 0;
      const double re = std::stod(body, &used);
      if (used != body.size()) throw ParseError("trailing junk in: " + token);
      return Complex(re, 0.0);
    }
    if (split == std::string::npos) {
      // pure imaginary, e.g. "1i" or "-2.5i"
      std::size_t used = 0;
      const double im = std::stod(body, &used);
      if (used != body.size()) throw ParseError("trailing junk in: " + token);
      return Complex(0.0, im);
    }
    std::size_t used = 0;
    const double re = std::stod(body.substr(0, split), &used);
    if (used != split) throw ParseError("bad real part in: " + token);
    const double im = std::stod(body.substr(split), &used);
    if (used != body.size() - split) throw ParseError("bad imaginary part in: " + token);
    return Complex(re, im);
  } catch (const std::invalid_argument&) {
    throw ParseError("not a complex number: " + token);
  } catch (const std::out_of_range&) {
    throw ParseError("complex number out of range: " + token);
  }
}

void write_matrix(std::ostream& os, const Matrix& M) {
  os << M.rows() << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) os << ' ';
      os << format_complex(M(i, j));
    }
    os << '\n';
  }
}

namespace {

Matrix read_matrix_body(std::istream& is, long long n) {
  if (n <= 0) throw ParseError("expected positive matrix dimension");
  if (n > 4096) throw ParseError("matrix dimension too large");
  Matrix M(n, n);
  std::string tok;
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      if (!(is >> tok)) throw ParseError("unexpected end of matrix data");
      M(i, j) = parse_complex(tok);
    }
  return M;
}

} // namespace

Matrix read_matrix(std::istream& is) {
  long long n = 0;
  if (!(is >> n)) throw ParseError("expected positive matrix dimension");
  return read_matrix_body(is, n);
}

void write_matrix_file(const std::string& path, const Matrix& M) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  write_matrix(os, M);
}

void write_pair_file(const std::string& path, const Matrix& A, const Matrix& B) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  write_matrix(os, A);
  os << '\n';
  write_matrix(os, B);
}

std::vector<Matrix> read_matrices_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open: " + path);
  std::vector<Matrix> out;
  out.push_back(read_matrix(is));
  std::string probe;
  if (is >> probe) {
    // a second block follows; probe already holds its dimension line
    long long n = 0;
    try {
      std::size_t used = 0;
      n = std::stoll(probe, &used);
      if (used != probe.size()) throw ParseError("bad dimension: " + probe);
    } catch (const std::logic_error&) {
      throw ParseError("bad dimension line for second block: " + probe);
    }
    out.push_back(read_matrix_body(is, n));
    if (is >> probe) throw ParseError("trailing data after second matrix block");
  }
  return out;
}

} // namespace acm
