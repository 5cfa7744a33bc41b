#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace couette {

using Complex = std::complex<double>;

/// Complex value carried as mantissa * exp(log_scale). The Airy machinery
/// produces magnitudes far outside double range; every quantity that can
/// over/underflow is kept in this form and only collapsed to a plain
/// complex once the scales have cancelled.
struct ScaledC {
    Complex m{0.0, 0.0};
    double e{0.0};

    ScaledC() = default;
    ScaledC(Complex mantissa, double log_scale) : m(mantissa), e(log_scale) { normalize(); }
    explicit ScaledC(Complex value) : m(value), e(0.0) { normalize(); }

    bool is_zero() const { return m == Complex(0.0, 0.0); }

    void normalize() {
        const double a = std::abs(m);
        if (a == 0.0 || std::isnan(a)) {
            e = 0.0;
            return;
        }
        m /= a;
        e += std::log(a);
    }

    /// log |value|; -inf for zero.
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(m)) + e;
    }

    Complex to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        if (e > 700.0) {  // saturate instead of producing inf*0 artifacts
            return m * std::exp(700.0);
        }
        if (e < -745.0) return {0.0, 0.0};
        return m * std::exp(e);
    }

    friend ScaledC operator*(const ScaledC& a, const ScaledC& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return {a.m * b.m, a.e + b.e};
    }
    friend ScaledC operator*(const ScaledC& a, Complex c) { return a * ScaledC(c); }
    friend ScaledC operator*(Complex c, const ScaledC& a) { return a * ScaledC(c); }
    friend ScaledC operator/(const ScaledC& a, const ScaledC& b) {
        return {a.m / b.m, a.e - b.e};
    }
    friend ScaledC operator+(const ScaledC& a, const ScaledC& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const double E = std::max(a.e, b.e);
        return {a.m * std::exp(a.e - E) + b.m * std::exp(b.e - E), E};
    }
    friend ScaledC operator-(const ScaledC& a, const ScaledC& b) {
        return a + ScaledC(-b.m, b.e);
    }
    ScaledC& operator+=(const ScaledC& o) { return *this = *this + o; }
};

/// exp(z) for complex z of arbitrary real part, in scaled form.
inline ScaledC scaled_exp(Complex z) { return {std::polar(1.0, z.imag()), z.real()}; }

}  // namespace couette
