#pragma once

#include <random>
#include <string>
#include <vector>

#include "couette/chebyshev.hpp"
#include "couette/norms.hpp"

namespace couette {

struct ForcingField {
    std::string id;
    ComplexVec values;
};

/// Fixed adversarial family standing in for the supremum over forcings:
/// low sine modes, interior Gaussian bumps, wall-layer exponentials on the
/// critical-layer width, and seeded random trigonometric polynomials.
/// Every field is normalized to unit L^2.
inline std::vector<ForcingField> forcing_ensemble(const SpectralOperatorSet& ops, double delta,
                                                  std::uint64_t seed = 20240915) {
    std::vector<ForcingField> out;
    auto push = [&](std::string id, ComplexVec v) {
        const double s = ops.l2(v);
        if (s > 0) v /= s;
        out.push_back({std::move(id), std::move(v)});
    };
    const auto& y = ops.nodes();
    const int n = ops.size();

    for (int j = 1; j <= 3; ++j) push("sine" + std::to_string(j), sine_mode(y, j).cast<Complex>());
    for (double c : {0.0, 0.7, -0.7}) {
        ComplexVec v(n);
        for (int i = 0; i < n; ++i) v[i] = std::exp(-std::pow((y[i] - c) / 0.2, 2));
        push("bump" + std::to_string(c), v);
    }
    for (int s : {+1, -1}) {
        ComplexVec v(n);
        for (int i = 0; i < n; ++i) v[i] = std::exp(-(1.0 - s * y[i]) / delta);
        push(s > 0 ? "wall+" : "wall-", v);
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int r = 0; r < 8; ++r) {
        ComplexVec v = ComplexVec::Zero(n);
        for (int j = 1; j <= 10; ++j) {
            const Complex c(gauss(rng), gauss(rng));
            RealVec m = sine_mode(y, j);
            for (int i = 0; i < n; ++i) v[i] += c * m[i] / double(j);
        }
        push("rand" + std::to_string(r), v);
    }
    return out;
}

/// Initial-vorticity family for the time-dependent runs: sine modes, a
/// shear layer, and wall-localized bumps.
inline std::vector<ForcingField> omega_in_ensemble(const SpectralOperatorSet& ops) {
    std::vector<ForcingField> out;
    const auto& y = ops.nodes();
    const int n = ops.size();
    auto push = [&](std::string id, ComplexVec v) {
        const double s = ops.l2(v);
        if (s > 0) v /= s;
        out.push_back({std::move(id), std::move(v)});
    };
    for (int j = 1; j <= 2; ++j) push("sine" + std::to_string(j), sine_mode(y, j).cast<Complex>());
    {
        ComplexVec v(n);
        for (int i = 0; i < n; ++i) v[i] = std::tanh(y[i] / 0.3);
        push("shear", v);
    }
    for (int s : {+1, -1}) {
        ComplexVec v(n);
        for (int i = 0; i < n; ++i) v[i] = std::exp(-std::pow((1.0 - s * y[i]) / 0.1, 2));
        push(s > 0 ? "wallbump+" : "wallbump-", v);
    }
    return out;
}

}  // namespace couette
