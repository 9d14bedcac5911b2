#include "entrate/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace entrate::io {
namespace {

double parse_real(const std::string& s, const std::string& token) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error("malformed complex token '" + token + "'");
  }
  return v;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

Complex parse_complex(const std::string& token) {
  if (token.empty()) throw Error("empty complex token");
  if (token.back() != 'j') {
    return {parse_real(token, token), 0.0};
  }
  // Split at the last sign that is not the leading one or part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = token.size() - 1; i > 0; --i) {
    const char c = token[i];
    if ((c == '+' || c == '-') && token[i - 1] != 'e' && token[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string body = token.substr(0, token.size() - 1);
  if (split == std::string::npos) {
    return {0.0, parse_real(body, token)};
  }
  return {parse_real(token.substr(0, split), token),
          parse_real(body.substr(split), token)};
}

std::string format_complex(Complex z) {
  std::string im = format_real(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_real(z.real()) + im + "j";
}

CMatrix read_matrix(std::istream& in) {
  std::string keyword;
  long long n = 0;
  if (!(in >> keyword >> n) || keyword != "dim" || n <= 0) {
    throw Error("matrix file: expected header 'dim <n>'");
  }
  CMatrix m(n, n);
  std::string token;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!(in >> token)) throw Error("matrix file: dimension mismatch (too few entries)");
      m(i, j) = parse_complex(token);
    }
  }
  return m;
}

void write_matrix(std::ostream& out, const CMatrix& m) {
  out << "dim " << m.rows() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_complex(m(i, j));
    }
    out << '\n';
  }
}

CMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void save_matrix(const std::string& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file '" + path + "'");
  write_matrix(out, m);
}

}  // namespace entrate::io
