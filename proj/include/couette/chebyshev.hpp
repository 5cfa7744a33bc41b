#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "couette/scaled_complex.hpp"

namespace couette {

using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Plain quadrature rule on [-1,1] (nodes descending, Clenshaw-Curtis weights).
struct QuadRule {
    RealVec nodes;
    RealVec weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

/// Clenshaw-Curtis rule on the Chebyshev-Gauss-Lobatto points
/// x_j = cos(j pi / N), exact for polynomials of degree <= n-1.
inline QuadRule clenshaw_curtis_rule(int n) {
    if (n < 2) throw std::invalid_argument("clenshaw_curtis_rule: n < 2");
    const int N = n - 1;
    QuadRule rule;
    rule.nodes.resize(n);
    for (int j = 0; j <= N; ++j) {
        // sin form keeps the grid exactly symmetric with endpoints +-1
        rule.nodes[j] = std::sin(kPi * (N - 2.0 * j) / (2.0 * N));
    }
    rule.weights = RealVec::Zero(n);
    std::vector<double> theta(n);
    for (int j = 0; j <= N; ++j) theta[j] = kPi * j / N;
    if (N % 2 == 0) {
        rule.weights[0] = rule.weights[N] = 1.0 / (N * N - 1.0);
        for (int i = 1; i < N; ++i) {
            double v = 1.0;
            for (int k = 1; k <= N / 2 - 1; ++k)
                v -= 2.0 * std::cos(2.0 * k * theta[i]) / (4.0 * k * k - 1.0);
            v -= std::cos(N * theta[i]) / (N * N - 1.0);
            rule.weights[i] = 2.0 * v / N;
        }
    } else {
        rule.weights[0] = rule.weights[N] = 1.0 / (N * N);
        for (int i = 1; i < N; ++i) {
            double v = 1.0;
            for (int k = 1; k <= (N - 1) / 2; ++k)
                v -= 2.0 * std::cos(2.0 * k * theta[i]) / (4.0 * k * k - 1.0);
            rule.weights[i] = 2.0 * v / N;
        }
    }
    return rule;
}

/// Barycentric weights of the CGL grid: (-1)^j, halved at the endpoints.
inline RealVec cgl_barycentric_weights(int n) {
    RealVec b(n);
    for (int j = 0; j < n; ++j) b[j] = (j % 2 == 0) ? 1.0 : -1.0;
    b[0] *= 0.5;
    b[n - 1] *= 0.5;
    return b;
}

template <typename Vec>
inline typename Vec::Scalar barycentric_eval(const RealVec& nodes, const RealVec& bary,
                                             const Vec& values, double y) {
    using Scalar = typename Vec::Scalar;
    const int n = static_cast<int>(nodes.size());
    Scalar num = Scalar(0);
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
        const double d = y - nodes[j];
        if (d == 0.0) return values[j];
        const double c = bary[j] / d;
        num += c * values[j];
        den += c;
    }
    return num / den;
}

/// Differentiation and quadrature operators for [-1,1] on the CGL grid.
/// Immutable after construction; safe to share across threads.
class SpectralOperatorSet {
  public:
    explicit SpectralOperatorSet(int n) : n_(n) {
        if (n < 8) throw std::invalid_argument("SpectralOperatorSet: need n >= 8 (fourth-order boundary rows)");
        auto rule = clenshaw_curtis_rule(n);
        nodes_ = rule.nodes;
        weights_ = rule.weights;
        bary_ = cgl_barycentric_weights(n);

        d1_ = RealMat::Zero(n, n);
        RealVec c(n);
        for (int i = 0; i < n; ++i) c[i] = ((i == 0 || i == n - 1) ? 2.0 : 1.0) * ((i % 2 == 0) ? 1.0 : -1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) d1_(i, j) = c[i] / c[j] / (nodes_[i] - nodes_[j]);
        apply_negative_sum(d1_);
        d2_ = d1_ * d1_;
        apply_negative_sum(d2_);
        d4_ = d2_ * d2_;
        apply_negative_sum(d4_);

        // dual-norm solver (-g'' + g = f, g(+-1)=0), reused by every H^{-1} evaluation
        RealMat A = -d2_ + RealMat::Identity(n, n);
        A.row(0) = RealVec::Unit(n, 0).transpose();
        A.row(n - 1) = RealVec::Unit(n, n - 1).transpose();
        hminus1_lu_ = std::make_shared<Eigen::PartialPivLU<RealMat>>(A);
    }

    int size() const { return n_; }
    const RealVec& nodes() const { return nodes_; }
    const RealVec& quad_weights() const { return weights_; }
    const RealVec& barycentric() const { return bary_; }
    const RealMat& d1() const { return d1_; }
    const RealMat& d2() const { return d2_; }
    const RealMat& d4() const { return d4_; }

    double integrate(const RealVec& f) const { return weights_.dot(f); }
    Complex integrate(const ComplexVec& f) const {
        return Complex(weights_.dot(f.real()), weights_.dot(f.imag()));
    }
    /// <f,g> = int f conj(g) dy
    Complex inner(const ComplexVec& f, const ComplexVec& g) const {
        return integrate(ComplexVec(f.array() * g.array().conjugate()));
    }
    double l2(const ComplexVec& f) const {
        return std::sqrt(std::max(0.0, weights_.dot(RealVec(f.array().abs2()))));
    }
    double l1(const ComplexVec& f) const { return weights_.dot(RealVec(f.array().abs())); }
    double linf(const ComplexVec& f) const { return f.array().abs().maxCoeff(); }

    Complex interpolate(const ComplexVec& values, double y) const {
        return barycentric_eval(nodes_, bary_, values, y);
    }

    /// Solve rhs with a real matrix LU, complex right-hand side.
    static ComplexVec solve_real_lu(const Eigen::PartialPivLU<RealMat>& lu, const ComplexVec& rhs) {
        RealVec re = lu.solve(rhs.real());
        RealVec im = lu.solve(rhs.imag());
        ComplexVec out(re.size());
        out.real() = re;
        out.imag() = im;
        return out;
    }

    /// H^{-1} norm: dual of H_0^1 with the full H^1 norm, realized through
    /// the Riesz problem -g'' + g = f, g(+-1)=0.
    double h_minus1(const ComplexVec& f) const {
        ComplexVec rhs = f;
        rhs[0] = rhs[n_ - 1] = Complex(0, 0);
        ComplexVec g = solve_real_lu(*hminus1_lu_, rhs);
        ComplexVec gp = d1_ * g;
        double val = weights_.dot(RealVec(gp.array().abs2())) + weights_.dot(RealVec(g.array().abs2()));
        return std::sqrt(std::max(0.0, val));
    }

  private:
    static void apply_negative_sum(RealMat& D) {
        for (int i = 0; i < D.rows(); ++i) {
            D(i, i) = 0.0;
            D(i, i) = -D.row(i).sum();
        }
    }

    int n_;
    RealVec nodes_, weights_, bary_;
    RealMat d1_, d2_, d4_;
    std::shared_ptr<Eigen::PartialPivLU<RealMat>> hminus1_lu_;
};

inline SpectralOperatorSet build_chebyshev(int n) { return SpectralOperatorSet(n); }

/// Reusable Dirichlet solver for (d2 - k^2) psi = omega, psi(+-1) = 0.
class HelmholtzDirichlet {
  public:
    HelmholtzDirichlet(const SpectralOperatorSet& ops, double k) : ops_(&ops) {
        const int n = ops.size();
        RealMat A = ops.d2() - k * k * RealMat::Identity(n, n);
        A.row(0) = RealVec::Unit(n, 0).transpose();
        A.row(n - 1) = RealVec::Unit(n, n - 1).transpose();
        lu_.compute(A);
    }
    ComplexVec solve(const ComplexVec& omega) const {
        ComplexVec rhs = omega;
        rhs[0] = rhs[ops_->size() - 1] = Complex(0, 0);
        return SpectralOperatorSet::solve_real_lu(lu_, rhs);
    }

  private:
    const SpectralOperatorSet* ops_;
    Eigen::PartialPivLU<RealMat> lu_;
};

/// psi with (d^2-k^2) psi = omega, psi(+-1)=0.
inline ComplexVec poisson_streamfunction(const SpectralOperatorSet& ops, const ComplexVec& omega,
                                         double k) {
    if (omega.size() != ops.size()) throw std::invalid_argument("poisson_streamfunction: grid mismatch");
    return HelmholtzDirichlet(ops, k).solve(omega);
}

/// u = (d_y psi, -i k psi)
inline std::pair<ComplexVec, ComplexVec> velocity_from_stream(const SpectralOperatorSet& ops,
                                                              const ComplexVec& psi, double k) {
    ComplexVec u1 = ops.d1() * psi;
    ComplexVec u2 = Complex(0.0, -k) * psi;
    return {u1, u2};
}

inline double velocity_l2(const SpectralOperatorSet& ops, const ComplexVec& u1, const ComplexVec& u2) {
    double s = ops.quad_weights().dot(RealVec(u1.array().abs2())) +
               ops.quad_weights().dot(RealVec(u2.array().abs2()));
    return std::sqrt(std::max(0.0, s));
}

inline double velocity_linf(const ComplexVec& u1, const ComplexVec& u2) {
    return std::sqrt((u1.array().abs2() + u2.array().abs2()).maxCoeff());
}

/// Integrate f(y) over [a,b] by an m-point Gauss-Legendre panel.
template <typename F>
auto gauss_legendre_panel(F&& f, double a, double b, int m) -> decltype(f(0.0)) {
    // nodes/weights for m in {8, 12, 16, 20} via Newton on Legendre polynomials
    static thread_local std::vector<std::pair<int, std::pair<std::vector<double>, std::vector<double>>>> cache;
    const std::pair<std::vector<double>, std::vector<double>>* rule = nullptr;
    for (auto& c : cache)
        if (c.first == m) rule = &c.second;
    if (!rule) {
        std::vector<double> x(m), w(m);
        for (int i = 0; i < m; ++i) {
            double t = std::cos(kPi * (i + 0.75) / (m + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= m; ++j) {
                    double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = m * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= m; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = m * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        cache.push_back({m, {x, w}});
        rule = &cache.back().second;
    }
    const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
    decltype(f(0.0)) acc = f(mid) * 0.0;
    for (int i = 0; i < m; ++i) acc += rule->second[i] * f(mid + c * rule->first[i]);
    return acc * c;
}

}  // namespace couette
