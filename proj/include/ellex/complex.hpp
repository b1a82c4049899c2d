#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

namespace ellex {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Throws DomainError naming `what` if z is NaN or infinite.
void require_finite(Complex z, std::string_view what);

/// z^n for integer n by repeated squaring; z must be nonzero when n < 0.
Complex ipow(Complex z, long long n);

/// Relative distance |a - b| / max(1, |b|).
inline double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

/// Parses "1.5", "-0.3", "0.2+0.1i", "0.4i", "1e-3-2e-2i".
Complex parse_complex(std::string_view text);

/// Shortest round-trip text for a double ("%.17g" trimmed).
std::string format_double(double v);

/// "re" when the imaginary part is zero, otherwise "re+imi" / "re-imi".
std::string format_complex(Complex z);

}  // namespace ellex
