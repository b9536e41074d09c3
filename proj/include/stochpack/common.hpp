// Copyright 2026 The stochpack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stochpack {

using Rational = boost::multiprecision::cpp_rational;

// Error categories. Each maps to a distinct CLI exit code.

// Inconsistent dimensions or malformed data.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A desk-scale guard refused the input before doing any work.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Row-major dense matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  bool operator==(const Matrix&) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double v) { return v; }

// Parses "3", "-2/5", "0.25", "1e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  };
  if (s.empty()) return fail();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) return fail();
    return num / den;
  }
  size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  boost::multiprecision::cpp_int mantissa = 0;
  int exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char ch = s[pos];
    if (ch >= '0' && ch <= '9') {
      mantissa = mantissa * 10 + (ch - '0');
      if (seen_point) --exponent;
      seen_digit = true;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return fail();
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') return fail();
    try {
      size_t used = 0;
      exponent += std::stoi(s.substr(pos + 1), &used);
      if (pos + 1 + used != s.size()) return fail();
    } catch (const std::logic_error&) {
      return fail();
    }
  }
  Rational value(mantissa);
  boost::multiprecision::cpp_int ten_pow = 1;
  for (int e = 0; e < std::abs(exponent); ++e) ten_pow *= 10;
  value = exponent >= 0 ? value * Rational(ten_pow) : value / Rational(ten_pow);
  return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() +
         (boost::multiprecision::denominator(r) == 1
              ? std::string()
              : "/" + boost::multiprecision::denominator(r).str());
}

inline Rational floor_rational(const Rational& r) {
  using boost::multiprecision::cpp_int;
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  cpp_int q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return Rational(q);
}

// Exact decimal value of a double (every finite double is a dyadic rational).
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  int exp = 0;
  double frac = std::frexp(v, &exp);
  auto mant = static_cast<int64_t>(std::ldexp(frac, 53));
  exp -= 53;
  Rational r(mant);
  boost::multiprecision::cpp_int scale = 1;
  scale <<= std::abs(exp);
  return exp >= 0 ? r * Rational(scale) : r / Rational(scale);
}

}  // namespace stochpack
