#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "couette/chebyshev.hpp"
#include "couette/scaled_complex.hpp"

namespace couette {

namespace airy_detail {

inline constexpr double kSeriesRadius = 5.5;
inline constexpr double kAsymptoticRadius = 14.0;
inline constexpr double kConnectionArg = 2.75;

struct AiPair {
    ScaledC ai, aip;
};

/// Maclaurin series of Ai and Ai'. Entire; round-off grows like
/// exp(|zeta|(1+cos(arg zeta))), so the dispatcher keeps it away from the
/// positive real direction at large |z|.
inline AiPair ai_series(Complex z) {
    static const double ai0 = 0.3550280538878172392600631860041831763980;
    static const double aip0 = -0.2588194037928067984051835601892039634793;
    Complex f(1.0, 0.0), fp(0.0, 0.0);        // f(0)=1, f'(0)=0 solution
    Complex g = z, gp(1.0, 0.0);              // g(0)=0, g'(0)=1 solution
    const Complex z3 = z * z * z;
    Complex tf(1.0, 0.0), tg = z;
    for (int k = 1; k <= 160; ++k) {
        tf *= z3 / double((3 * k - 1) * (3 * k));
        tg *= z3 / double((3 * k) * (3 * k + 1));
        f += tf;
        g += tg;
        fp += tf * (3.0 * k) / z;   // d/dz z^{3k} = 3k z^{3k-1}
        gp += tg * (3.0 * k + 1.0) / z;
        if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g))) break;
    }
    if (z == Complex(0.0, 0.0)) {
        fp = Complex(0, 0);
        gp = Complex(1, 0);
    }
    return {ScaledC(ai0 * f + aip0 * g), ScaledC(ai0 * fp + aip0 * gp)};
}

inline const std::array<double, 40>& u_coeffs() {
    static const auto u = [] {
        std::array<double, 40> a{};
        a[0] = 1.0;
        for (int k = 1; k < 40; ++k)
            a[k] = a[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
        return a;
    }();
    return u;
}

/// Poincare expansion with smallest-term truncation. Valid |arg z| < pi;
/// beyond the Stokes rays |arg z| > 2pi/3 the neglected subdominant
/// exponential contributes ~exp(2 Re zeta), which the dispatcher budgets.
inline AiPair ai_asymptotic(Complex z) {
    const auto& u = u_coeffs();
    const Complex zs = std::sqrt(z);
    const Complex zeta = (2.0 / 3.0) * zs * zs * zs;
    const Complex izeta = 1.0 / zeta;
    Complex sa(0, 0), sb(0, 0), pw(1.0, 0.0);
    double last = 1e300;
    for (int k = 0; k < 40; ++k) {
        const double uk = u[k];
        const double vk = uk * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        const double mag = uk * std::pow(std::abs(izeta), k);
        if (mag > last) break;  // divergence onset
        last = mag;
        const Complex term = ((k % 2 == 0) ? 1.0 : -1.0) * pw;
        sa += uk * term;
        sb += ((k == 0) ? 1.0 : vk) * term;
        pw *= izeta;
    }
    const double pref = 0.5 / std::sqrt(kPi);
    ScaledC es = scaled_exp(-zeta);
    ScaledC ai = es * ScaledC(pref * sa / std::sqrt(zs));
    ScaledC aip = es * ScaledC(-pref * sb * std::sqrt(zs));
    return {ai, aip};
}

/// Taylor recentering along the ray |z| = const arg: marches the exact ODE
/// f'' = z f inward from an asymptotic seed. Stable toward decreasing |z|
/// while cos(1.5 arg z) >= 0 (the recessive direction grows inward).
inline AiPair ai_translated(Complex z) {
    const double r = std::abs(z);
    if (std::abs(std::arg(z)) > 1.02)
        throw std::invalid_argument("ai_translated: inward march unstable for |arg z| > 1.02");
    const Complex dir = z / r;
    Complex c = kAsymptoticRadius * dir;
    AiPair state = ai_asymptotic(c);
    const int nsteps = static_cast<int>(std::ceil((kAsymptoticRadius - r) / 1.3));
    const Complex h = (z - c) / double(nsteps);
    for (int s = 0; s < nsteps; ++s) {
        // joint scale so the Taylor recurrence runs in plain complex
        const double E = std::max(state.ai.e, state.aip.e);
        std::array<Complex, 40> a{};
        a[0] = state.ai.m * std::exp(state.ai.e - E);
        a[1] = state.aip.m * std::exp(state.aip.e - E);
        for (int j = 0; j + 2 < 40; ++j)
            a[j + 2] = (c * a[j] + ((j >= 1) ? a[j - 1] : Complex(0, 0))) /
                       double((j + 1) * (j + 2));
        Complex f(0, 0), fp(0, 0), hp(1.0, 0.0);
        for (int j = 0; j < 40; ++j) {
            f += a[j] * hp;
            if (j + 1 < 40) fp += a[j + 1] * double(j + 1) * hp;
            hp *= h;
        }
        state.ai = ScaledC(f, E);
        state.aip = ScaledC(fp, E);
        c += h;
    }
    return state;
}

inline AiPair ai_dispatch(Complex z);

inline AiPair ai_connection(Complex z) {
    // Ai(z) + w Ai(w z) + w^-1 Ai(z/w) = 0 with w = exp(2 pi i/3)
    const Complex w = std::polar(1.0, 2.0 * kPi / 3.0);
    AiPair p = ai_dispatch(z * w);
    AiPair q = ai_dispatch(z / w);
    AiPair out;
    out.ai = ScaledC(Complex(0, 0)) - (w * p.ai + (1.0 / w) * q.ai);
    out.aip = ScaledC(Complex(0, 0)) - (w * w * p.aip + (1.0 / (w * w)) * q.aip);
    return out;
}

inline AiPair ai_dispatch(Complex z) {
    const double r = std::abs(z);
    const double a = std::abs(std::arg(z));
    if (r > 1e4) throw NumericalError("ai: |z| beyond overflow guard 1e4");
    if (a > kConnectionArg && r > 1.0) return ai_connection(z);
    if (r <= 1.0) return ai_series(z);
    if (r >= kAsymptoticRadius) return ai_asymptotic(z);
    if (a <= 1.0 && r >= 3.0) return ai_translated(z);
    // error models: series round-off vs asymptotic truncation + Stokes term
    const double azeta = (2.0 / 3.0) * std::pow(r, 1.5);
    const double cs = std::cos(1.5 * std::arg(z));
    const double log_err_series = std::log(2.2e-16) + azeta * (1.0 + cs);
    double log_err_asym = -2.2 * azeta;
    if (a > 2.0 * kPi / 3.0) log_err_asym = std::max(log_err_asym, 2.0 * azeta * cs);
    if (r <= kSeriesRadius || log_err_series < log_err_asym) return ai_series(z);
    return ai_asymptotic(z);
}

/// Asymptotic tail integral int_X^inf Ai(t) dt, |arg X| < pi.
inline ScaledC airy_tail_integral(Complex X) {
    static const auto gamma_coeffs = [] {
        const auto& u = u_coeffs();
        std::array<double, 22> g{};
        for (int j = 0; j < 22; ++j) {
            double s = 0.0;
            for (int k = 0; k <= j; ++k) {
                double p = 1.0;  // prod_{i=1}^{j-k} (1/2 - k - i)
                for (int i = 1; i <= j - k; ++i) p *= (0.5 - k - i);
                s += ((k % 2 == 0) ? 1.0 : -1.0) * u[k] * p;
            }
            g[j] = s;
        }
        return g;
    }();
    const Complex Xs = std::sqrt(X);
    const Complex xi = (2.0 / 3.0) * Xs * Xs * Xs;
    const Complex ixi = 1.0 / xi;
    Complex s(0, 0), pw(1.0, 0.0);
    double last = 1e300;
    for (int j = 0; j < 22; ++j) {
        const double mag = std::abs(gamma_coeffs[j]) * std::pow(std::abs(ixi), j);
        if (mag > last) break;
        last = mag;
        s += gamma_coeffs[j] * pw;
        pw *= ixi;
    }
    const double pref = 0.5 / std::sqrt(kPi);
    return scaled_exp(-xi) * ScaledC(pref * s / (Xs * std::sqrt(Xs)));
}

}  // namespace airy_detail

struct AiryValue {
    Complex z;
    ScaledC ai;
    ScaledC aip;
    enum class Method { series, asymptotic, quadrature_oracle } method;
};

/// Classical Airy function Ai (and Ai'), scaled representation.
inline AiryValue ai_complex(Complex z) {
    auto p = airy_detail::ai_dispatch(z);
    const double r = std::abs(z);
    auto m = (r <= airy_detail::kSeriesRadius) ? AiryValue::Method::series
                                               : AiryValue::Method::asymptotic;
    return {z, p.ai, p.aip, m};
}

inline Complex ai_value(Complex z) { return ai_complex(z).ai.to_complex(); }

namespace airy_detail {

/// Recursive adaptive quadrature (Gauss-Legendre 12 vs bisected halves).
template <typename F>
Complex adaptive_gl(F&& f, double a, double b, double abs_tol, int depth = 0) {
    Complex whole = gauss_legendre_panel(f, a, b, 12);
    const double mid = 0.5 * (a + b);
    Complex halves = gauss_legendre_panel(f, a, mid, 12) + gauss_legendre_panel(f, mid, b, 12);
    if (std::abs(whole - halves) <= abs_tol || depth >= 28) return halves;
    return adaptive_gl(f, a, mid, 0.5 * abs_tol, depth + 1) +
           adaptive_gl(f, mid, b, 0.5 * abs_tol, depth + 1);
}

}  // namespace airy_detail

/// Independent quadrature oracle (test use only):
///     Ai(z) = (1/pi) sqrt(z/3) K_{1/3}(zeta),
///     K_nu(zeta) = sqrt(pi/(2 zeta)) e^{-zeta}/Gamma(nu+1/2)
///                  * int_0^inf e^{-u} u^{nu-1/2} (1+u/(2 zeta))^{nu-1/2} du.
/// For |arg zeta| > pi the branch point u* = -2 zeta has crossed the
/// integration ray; the analytic continuation picks up a cut-loop term.
/// Arguments beyond 2.2 rad go through the standard connection formula.
inline ScaledC ai_quadrature_oracle(Complex z, double tol = 1e-12) {
    const double r = std::abs(z);
    if (r < 0.3) throw std::invalid_argument("ai_quadrature_oracle: |z| < 0.3");
    const double argz = std::arg(z);
    if (std::abs(argz) > 2.2) {
        const Complex w = std::polar(1.0, 2.0 * kPi / 3.0);
        ScaledC p = ai_quadrature_oracle(z * w, tol);
        ScaledC q = ai_quadrature_oracle(z / w, tol);
        return ScaledC(Complex(0, 0)) - (w * p + (1.0 / w) * q);
    }
    const double rzeta = (2.0 / 3.0) * std::pow(r, 1.5);
    const double angzeta = 1.5 * argz;  // |.| <= 3.3, kept unwrapped
    const Complex zeta = std::polar(rzeta, angzeta);
    const Complex inv2z = 1.0 / (2.0 * zeta);

    auto g = [&](double u) { return std::pow(1.0 + u * inv2z, -1.0 / 6.0); };
    // u in (0, ubreak]: u = v^6 removes the endpoint singularity
    const double ucap = 45.0;
    const double ubreak = std::min(1.0, ucap);
    Complex J = airy_detail::adaptive_gl(
        [&](double v) {
            const double u = std::pow(v, 6);
            return 6.0 * std::pow(v, 4) * std::exp(-u) * g(u);
        },
        0.0, std::pow(ubreak, 1.0 / 6.0), tol);
    J += airy_detail::adaptive_gl([&](double u) { return std::exp(-u) * std::pow(u, -1.0 / 6.0) * g(u); },
                                  ubreak, ucap, tol);

    ScaledC F(J);
    if (std::abs(angzeta) > kPi) {
        // cut-loop around u = -2 zeta (1+t), t >= 0; jump of the power
        // across its cut is -i t^{-1/6} (orientation fixed by continuity
        // across arg zeta = pi, verified against the series branch).
        const Complex ustar = -2.0 * zeta;
        Complex loop = airy_detail::adaptive_gl(
            [&](double s) {
                const double t = std::pow(s, 6);
                return 6.0 * std::pow(s, 4) * std::exp(-ustar * t) *
                       std::pow(1.0 + t, -1.0 / 6.0);
            },
            0.0, std::pow(40.0 / std::abs(ustar.real()), 1.0 / 6.0), tol);
        const Complex upow = std::pow(ustar, 5.0 / 6.0);  // |arg ustar| < pi/2 here
        const Complex orient = (angzeta > 0) ? Complex(0, 1) : Complex(0, -1);
        F = F + scaled_exp(-ustar) * ScaledC(orient * upow * loop);
    }
    // sqrt(pi/(2 zeta)) with the unwrapped angle
    const Complex root = std::sqrt(kPi / (2.0 * rzeta)) * std::polar(1.0, -angzeta / 2.0);
    const double g56 = std::tgamma(5.0 / 6.0);
    ScaledC K = scaled_exp(-zeta) * ScaledC(root / g56) * F;
    return K * ScaledC(std::sqrt(z / 3.0) / kPi);
}

struct A0Value {
    Complex z;
    ScaledC a0;
    ScaledC a0_prime;
};

namespace airy_detail {

/// One Gauss-Legendre panel of Ai(t0 + s) ds in scaled arithmetic.
inline ScaledC ai_panel(Complex t0, double a, double b, int pts = 12) {
    // fixed 12-point rule, nodes via gauss_legendre_panel's cache shape
    static const std::array<double, 6> xs = {0.1252334085114689, 0.3678314989981802,
                                             0.5873179542866175, 0.7699026741943047,
                                             0.9041172563704748, 0.9815606342467192};
    static const std::array<double, 6> ws = {0.2491470458134028, 0.2334925365383548,
                                             0.2031674267230659, 0.1600783285433462,
                                             0.1069393259953184, 0.0471753363865118};
    (void)pts;
    const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
    ScaledC acc;
    for (int i = 0; i < 6; ++i) {
        acc += ScaledC(ws[i], 0.0) * ai_dispatch(t0 + Complex(mid + c * xs[i], 0)).ai;
        acc += ScaledC(ws[i], 0.0) * ai_dispatch(t0 + Complex(mid - c * xs[i], 0)).ai;
    }
    return acc * Complex(c, 0);
}

/// Ray quadrature for A0: integrate Ai from e^{i pi/6} z rightwards, then
/// attach the asymptotic tail.
inline ScaledC a0_ray(Complex z) {
    const Complex t0 = std::polar(1.0, kPi / 6.0) * z;
    ScaledC acc;
    double s = 0.0;
    double peak = -1e300;
    const double cap = std::abs(t0) + 80.0;
    bool converged = false;
    while (s < cap) {
        const Complex t = t0 + Complex(s, 0);
        const double width = std::min(0.5, 2.0 / std::sqrt(1.0 + std::abs(t)));
        ScaledC panel = ai_panel(t0, s, s + width);
        acc += panel;
        peak = std::max(peak, panel.log_abs());
        s += width;
        const double plog = panel.log_abs();
        if (plog < peak - 42.0 && plog < acc.log_abs() - 38.0 && s > 1.0) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericalError("a0: ray quadrature tail failed to converge");
    acc += airy_tail_integral(t0 + Complex(s, 0));
    return acc;
}

inline ScaledC a0_dispatch(Complex z) {
    const Complex X = std::polar(1.0, kPi / 6.0) * z;
    if (std::abs(z) >= kAsymptoticRadius && std::abs(std::arg(X)) <= 2.75)
        return airy_tail_integral(X);
    return a0_ray(z);
}

}  // namespace airy_detail

/// A0(z) = int_{e^{i pi/6} z}^{inf} Ai(t) dt and its derivative
/// A0'(z) = -e^{i pi/6} Ai(e^{i pi/6} z).
inline A0Value a0(Complex z) {
    if (z.imag() > 1.0) throw std::invalid_argument("a0: Im z > 1 outside region of use");
    A0Value out;
    out.z = z;
    out.a0 = airy_detail::a0_dispatch(z);
    const Complex rot = std::polar(1.0, kPi / 6.0);
    out.a0_prime = ScaledC(-rot) * airy_detail::ai_dispatch(rot * z).ai;
    return out;
}

/// A0(z + t) for a batch of shifts t >= 0 (ascending), via one backward
/// sweep: n quadrature gaps instead of n full ray integrations. All values
/// share the same tail, which keeps ratios of neighbours fully consistent.
inline std::vector<ScaledC> a0_profile(Complex z, const std::vector<double>& ts) {
    for (size_t i = 0; i + 1 < ts.size(); ++i)
        if (ts[i + 1] < ts[i]) throw std::invalid_argument("a0_profile: shifts must ascend");
    const Complex rot = std::polar(1.0, kPi / 6.0);
    const Complex t0 = rot * z;
    std::vector<ScaledC> out(ts.size());
    if (ts.empty()) return out;
    ScaledC acc = airy_detail::a0_dispatch(z + Complex(ts.back(), 0));
    out.back() = acc;
    for (int i = static_cast<int>(ts.size()) - 2; i >= 0; --i) {
        double a = ts[i], b = ts[i + 1];
        // contribution of the gap, rotated onto the ray: e^{i pi/6} int Ai(e^{i pi/6}(z+s)) ds
        const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / 0.4)));
        for (int q = sub - 1; q >= 0; --q) {
            const double lo = a + (b - a) * q / sub, hi = a + (b - a) * (q + 1) / sub;
            ScaledC gap;
            {
                static const std::array<double, 6> xs = {0.1252334085114689, 0.3678314989981802,
                                                         0.5873179542866175, 0.7699026741943047,
                                                         0.9041172563704748, 0.9815606342467192};
                static const std::array<double, 6> ws = {0.2491470458134028, 0.2334925365383548,
                                                         0.2031674267230659, 0.1600783285433462,
                                                         0.1069393259953184, 0.0471753363865118};
                const double c = 0.5 * (hi - lo), mid = 0.5 * (lo + hi);
                for (int j = 0; j < 6; ++j) {
                    gap += ScaledC(ws[j], 0.0) *
                           airy_detail::ai_dispatch(t0 + rot * Complex(mid + c * xs[j], 0)).ai;
                    gap += ScaledC(ws[j], 0.0) *
                           airy_detail::ai_dispatch(t0 + rot * Complex(mid - c * xs[j], 0)).ai;
                }
                gap = gap * Complex(c, 0);
            }
            acc += ScaledC(rot) * gap;
        }
        out[i] = acc;
    }
    return out;
}

struct EtaValue {
    Complex z;
    double x;
    Complex eta;
};

/// eta(z, x) = A0(z+x)/A0(z); the exponents cancel in the scaled ratio.
inline EtaValue eta(Complex z, double x) {
    if (x < 0) throw std::invalid_argument("eta: x must be nonnegative");
    if (x == 0.0) return {z, x, Complex(1.0, 0.0)};
    auto prof = a0_profile(z, {0.0, x});
    return {z, x, (prof[1] / prof[0]).to_complex()};
}

/// A0'(z)/A0(z). Guarded against vanishing denominators (none exist in the
/// lower half plane, which is where this is used).
inline Complex log_derivative_a0(Complex z) {
    A0Value v = a0(z);
    if (v.a0.log_abs() < -690.0 && v.a0.is_zero()) throw NumericalError("log_derivative_a0: A0 underflow");
    return (v.a0_prime / v.a0).to_complex();
}

/// a(delta) = sup { Re A0'(z)/A0(z) : Im z <= delta }, located numerically
/// on the boundary line Im z = delta (coarse scan + golden section).
struct ADeltaResult {
    double value;
    double argmax_re;
};

inline ADeltaResult a_of_delta(double delta) {
    if (delta < 0.0 || delta > 0.2) throw std::invalid_argument("a_of_delta: delta outside [0, 0.2]");
    auto f = [&](double x) { return log_derivative_a0(Complex(x, delta)).real(); };
    double best = -1e300, bx = 0.0;
    std::vector<std::pair<double, double>> tops;
    for (double x = -40.0; x <= 8.0; x += 0.1) {
        double v = f(x);
        tops.push_back({v, x});
        if (v > best) {
            best = v;
            bx = x;
        }
    }
    std::sort(tops.rbegin(), tops.rend());
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int s = 0; s < 5 && s < static_cast<int>(tops.size()); ++s) {
        double a = tops[s].second - 0.15, b = tops[s].second + 0.15;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < 60; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = f(d);
            }
        }
        double xm = 0.5 * (a + b), vm = f(xm);
        if (vm > best) {
            best = vm;
            bx = xm;
        }
    }
    return {best, bx};
}

}  // namespace couette
