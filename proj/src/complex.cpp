#include "ellex/complex.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "ellex/errors.hpp"

namespace ellex {

void require_finite(Complex z, std::string_view what) {
  if (!is_finite(z)) throw DomainError(std::string(what) + " is not finite");
}

Complex ipow(Complex z, long long n) {
  if (n == 0) return {1.0, 0.0};
  if (n < 0) {
    if (z == Complex{}) throw DomainError("negative power of zero");
    return ipow(1.0 / z, -n);
  }
  Complex result{1.0, 0.0};
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

namespace {

double parse_real(std::string_view text, std::string_view whole) {
  if (text.empty()) throw DomainError("malformed number '" + std::string(whole) + "'");
  std::string buf(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw DomainError("malformed number '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw DomainError("empty number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, text), 0.0};
  s.pop_back();
  // split at the last sign that is not the leading one nor part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [&](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t, text);
  };
  if (split == std::string::npos) return {0.0, imag_of(s)};
  return {parse_real(std::string_view(s).substr(0, split), text),
          imag_of(std::string_view(s).substr(split))};
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string im = format_double(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(z.real()) + im + "i";
}

}  // namespace ellex
