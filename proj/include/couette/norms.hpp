#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "couette/chebyshev.hpp"

namespace couette {

/// Pointwise weights used throughout the estimates: the boundary-layer
/// cutoff rho_k (1 inside, linear ramp of width delta at the walls) and
/// the wall weight (1-|y|)^{1/2}.
struct WeightProfile {
    enum class Kind { rho_k, sqrt_one_minus_abs_y };
    Kind kind = Kind::rho_k;
    double delta = 0.1;  // only for rho_k

    double value(double y) const {
        const double a = std::abs(y);
        if (kind == Kind::rho_k) {
            if (a <= 1.0 - delta) return 1.0;
            return std::max(0.0, (1.0 - a) / delta);
        }
        return std::sqrt(std::max(0.0, 1.0 - a));
    }

    /// Interior points where the profile is not smooth.
    std::vector<double> breakpoints() const {
        if (kind == Kind::rho_k) return {-(1.0 - delta), 1.0 - delta};
        return {0.0};
    }
};

inline WeightProfile rho_k_profile(double nu, double k) {
    return {WeightProfile::Kind::rho_k, std::pow(nu, 1.0 / 3.0) * std::pow(std::abs(k), -1.0 / 3.0)};
}

namespace detail {

/// Composite Gauss-Legendre integration of g(y) over [-1,1] split at the
/// given breakpoints (so weight kinks never sit inside a panel).
template <typename G>
double integrate_split(G&& g, const std::vector<double>& breaks, int panels_per_piece = 6,
                       int pts = 16) {
    std::vector<double> cuts{-1.0};
    for (double b : breaks)
        if (b > -1.0 && b < 1.0) cuts.push_back(b);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double h = (b - a) / panels_per_piece;
        for (int p = 0; p < panels_per_piece; ++p)
            total += gauss_legendre_panel(g, a + p * h, a + (p + 1) * h, pts);
    }
    return total;
}

}  // namespace detail

/// || rho^p f ||_{L^2} for the rho_k ramp weight; the wall panels use the
/// substitution 1-|y| = s^2 so negative powers stay integrable.
inline double rho_weighted_l2(const SpectralOperatorSet& ops, const ComplexVec& f, double delta,
                              double p) {
    auto fval = [&](double y) { return std::norm(ops.interpolate(f, y)); };
    const double yc = 1.0 - delta;
    double interior = 0.0;
    const int panels = 12;
    for (int q = 0; q < panels; ++q) {
        const double a = -yc + 2.0 * yc * q / panels;
        const double b = -yc + 2.0 * yc * (q + 1) / panels;
        interior += gauss_legendre_panel(fval, a, b, 16);
    }
    // wall strips with the ramp raised to 2p, via 1 - |y| = s^2
    auto wall = [&](int sign) {
        const double S = std::sqrt(delta);
        return gauss_legendre_panel(
            [&](double s) {
                const double y = sign * (1.0 - s * s);
                const double ramp = (s * s) / delta;  // rho(y)
                return std::pow(ramp, 2.0 * p) * fval(y) * 2.0 * s;
            },
            0.0, S, 32);
    };
    double total = interior + wall(+1) + wall(-1);
    return std::sqrt(std::max(0.0, total));
}

/// || (1-|y|)^{1/2} f ||_{L^2} (the weight enters squared, so only the |y|
/// kink needs a split).
inline double sqrt1my_weighted_l2(const SpectralOperatorSet& ops, const ComplexVec& f) {
    auto g = [&](double y) { return (1.0 - std::abs(y)) * std::norm(ops.interpolate(f, y)); };
    return std::sqrt(std::max(0.0, detail::integrate_split(g, {0.0}, 6, 16)));
}

struct NormBundle {
    double l1 = 0, l2 = 0, linf = 0, h1_seminorm = 0, h_minus1 = 0;
};

inline NormBundle norm_bundle(const SpectralOperatorSet& ops, const ComplexVec& f,
                              std::optional<WeightProfile> weight = std::nullopt) {
    NormBundle out;
    if (!weight) {
        out.l1 = ops.l1(f);
        out.l2 = ops.l2(f);
        out.linf = ops.linf(f);
        out.h1_seminorm = ops.l2(ComplexVec(ops.d1() * f));
        out.h_minus1 = ops.h_minus1(f);
        return out;
    }
    const WeightProfile& w = *weight;
    auto breaks = w.breakpoints();
    auto fabs = [&](double y) { return w.value(y) * std::abs(ops.interpolate(f, y)); };
    out.l1 = detail::integrate_split(fabs, breaks, 6, 16);
    out.l2 = std::sqrt(std::max(
        0.0, detail::integrate_split([&](double y) { return fabs(y) * fabs(y); }, breaks, 6, 16)));
    double mx = 0.0;
    for (int j = 0; j < ops.size(); ++j)
        mx = std::max(mx, w.value(ops.nodes()[j]) * std::abs(f[j]));
    out.linf = mx;
    ComplexVec wf(ops.size());
    for (int j = 0; j < ops.size(); ++j) wf[j] = w.value(ops.nodes()[j]) * f[j];
    out.h1_seminorm = ops.l2(ComplexVec(ops.d1() * wf));
    out.h_minus1 = ops.h_minus1(wf);
    return out;
}

/// phi_j(y) = sin(pi j (y+1)/2), an orthogonal basis of L^2(-1,1) with
/// ||phi_j||^2 = 1.
inline RealVec sine_mode(const RealVec& nodes, int j) {
    RealVec v(nodes.size());
    for (int i = 0; i < nodes.size(); ++i) v[i] = std::sin(0.5 * kPi * j * (nodes[i] + 1.0));
    return v;
}

inline ComplexVec sine_expand(const SpectralOperatorSet& ops, const ComplexVec& f, int jmax) {
    if (jmax > ops.size() / 2) throw std::invalid_argument("sine_expand: jmax > n/2");
    ComplexVec coeffs(jmax);
    for (int j = 1; j <= jmax; ++j) {
        RealVec phi = sine_mode(ops.nodes(), j);
        Complex c(0, 0);
        for (int i = 0; i < ops.size(); ++i) c += ops.quad_weights()[i] * phi[i] * f[i];
        coeffs[j - 1] = c;  // ||phi_j||^2 = 1
    }
    return coeffs;
}

inline ComplexVec sine_synthesize(const SpectralOperatorSet& ops, const ComplexVec& coeffs) {
    ComplexVec f = ComplexVec::Zero(ops.size());
    for (int j = 1; j <= coeffs.size(); ++j) {
        RealVec phi = sine_mode(ops.nodes(), j);
        for (int i = 0; i < ops.size(); ++i) f[i] += coeffs[j - 1] * phi[i];
    }
    return f;
}

/// Rayleigh ratio ||f||^2 / ||f'||^2; requires f(+-1)=0. By the sharp
/// Sobolev constant this never exceeds (2/pi)^2 on [-1,1].
inline double wirtinger_check(const SpectralOperatorSet& ops, const ComplexVec& f) {
    const double scale = ops.linf(f);
    if (std::abs(f[0]) > 1e-10 * std::max(1.0, scale) ||
        std::abs(f[ops.size() - 1]) > 1e-10 * std::max(1.0, scale))
        throw std::invalid_argument("wirtinger_check: f must vanish at the endpoints");
    const double num = ops.l2(f);
    const double den = ops.l2(ComplexVec(ops.d1() * f));
    return (num * num) / (den * den);
}

}  // namespace couette
