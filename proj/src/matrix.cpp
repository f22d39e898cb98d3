#include "ietlab/matrix.hpp"

#include <sstream>

namespace ietlab {

namespace {
std::string cell(std::int64_t x) { return std::to_string(x); }
std::string cell(const BigInt& x) { return to_string(x); }
std::string cell(const Rational& x) { return to_string(x); }
}  // namespace

template <class T>
std::string to_string(const Matrix<T>& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << cell(m(i, j));
    os << ']';
  }
  os << ']';
  return os.str();
}

template std::string to_string(const IntMatrix&);
template std::string to_string(const BigMatrix&);
template std::string to_string(const RatMatrix&);

}  // namespace ietlab
