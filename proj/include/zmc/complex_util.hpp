#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace zmc {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// z^n by binary exponentiation; exact repeated products, no exp/log detour.
inline cplx ipow(cplx z, long n) {
    if (n < 0) return 1.0 / ipow(z, -n);
    cplx acc{1.0, 0.0};
    while (n > 0) {
        if (n & 1) acc *= z;
        z *= z;
        n >>= 1;
    }
    return acc;
}

inline cplx unit(double angle) { return std::polar(1.0, angle); }

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline double cross2(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot2(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Fixed 17-significant-digit decimal rendering; the spine of byte-stable output files.
inline std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace zmc
