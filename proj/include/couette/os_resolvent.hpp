#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <variant>

#include "couette/chebyshev.hpp"
#include "couette/forcing.hpp"
#include "couette/norms.hpp"
#include "couette/parallel.hpp"

namespace couette {

enum class BoundaryKind { navier_slip, non_slip };

struct L2Force {
    ComplexVec F;
};
/// F = -i k f1 - d_y f2
struct SplitForce {
    ComplexVec f1, f2;
};

struct ResolventCase {
    double nu = 1e-3;
    double k = 0.5;
    double lambda = 0.0;
    double eps = 0.0;
    std::variant<L2Force, SplitForce> forcing;

    void validate() const {
        if (nu <= 0) throw std::invalid_argument("ResolventCase: nu must be positive");
        if (eps < 0) throw std::invalid_argument("ResolventCase: eps must be nonnegative");
        if (k == 0) throw std::invalid_argument("ResolventCase: k must be nonzero");
    }
    double delta() const { return std::pow(nu, 1.0 / 3.0) * std::pow(std::abs(k), -1.0 / 3.0); }
    double damping() const { return eps * std::pow(nu, 1.0 / 3.0) * std::pow(std::abs(k), 2.0 / 3.0); }
};

struct ResolventNorms {
    double u_l2 = 0, w_l1 = 0, w_l2 = 0, wprime_l2 = 0, ylam_w_l2 = 0;
    double rho_half_w_l2 = 0, rho_mquarter_w_l2 = 0;
};

struct ResolventSolution {
    ComplexVec w, phi, u1, u2;
    ResolventNorms norms;
    double residual = 0;
    double condition_estimate = 0;
    bool condition_warning = false;  // above 1e12: increase resolution
};

namespace os_detail {

inline ComplexVec effective_force(const SpectralOperatorSet& ops, const ResolventCase& c) {
    if (std::holds_alternative<L2Force>(c.forcing)) return std::get<L2Force>(c.forcing).F;
    const auto& s = std::get<SplitForce>(c.forcing);
    return Complex(0, -c.k) * s.f1 - ops.d1() * s.f2;
}

inline double cond_estimate(const Eigen::PartialPivLU<ComplexMat>& lu, double row_norm) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pm(0, 1);
    double inv_norm = 0.0;
    const int n = static_cast<int>(lu.rows());
    for (int t = 0; t < 3; ++t) {
        ComplexVec x(n);
        for (int i = 0; i < n; ++i) x[i] = pm(rng) ? 1.0 : -1.0;
        inv_norm = std::max(inv_norm, lu.solve(x).cwiseAbs().maxCoeff());
    }
    return inv_norm * row_norm;
}

inline void fill_norms(const SpectralOperatorSet& ops, double nu, double k, double lambda,
                       ResolventSolution& s) {
    const double delta = std::pow(nu, 1.0 / 3.0) * std::pow(std::abs(k), -1.0 / 3.0);
    s.norms.u_l2 = velocity_l2(ops, s.u1, s.u2);
    s.norms.w_l1 = ops.l1(s.w);
    s.norms.w_l2 = ops.l2(s.w);
    s.norms.wprime_l2 = ops.l2(ComplexVec(ops.d1() * s.w));
    ComplexVec ylam(ops.size());
    for (int i = 0; i < ops.size(); ++i) ylam[i] = (ops.nodes()[i] - lambda) * s.w[i];
    s.norms.ylam_w_l2 = ops.l2(ylam);
    s.norms.rho_half_w_l2 = rho_weighted_l2(ops, s.w, delta, 0.5);
    s.norms.rho_mquarter_w_l2 = rho_weighted_l2(ops, s.w, delta, -0.25);
}

}  // namespace os_detail

/// Second-order operator with w(+-1)=0; one factorization serves every
/// right-hand side at this (nu, k, lambda, eps).
class NavierSlipSolver {
  public:
    NavierSlipSolver(const SpectralOperatorSet& ops, double nu, double k, double lambda,
                     double eps = 0.0)
        : ops_(&ops), nu_(nu), k_(k), lambda_(lambda) {
        const int n = ops.size();
        const double damp = eps * std::pow(nu, 1.0 / 3.0) * std::pow(std::abs(k), 2.0 / 3.0);
        ComplexMat A =
            (-nu * (ops.d2() - k * k * RealMat::Identity(n, n)) - damp * RealMat::Identity(n, n))
                .cast<Complex>();
        for (int i = 0; i < n; ++i) A(i, i) += Complex(0, k) * (ops.nodes()[i] - lambda);
        A.row(0).setZero();
        A(0, 0) = 1.0;
        A.row(n - 1).setZero();
        A(n - 1, n - 1) = 1.0;
        double rn = 0.0;
        for (int i = 0; i < n; ++i) rn = std::max(rn, A.row(i).cwiseAbs().sum());
        lu_.compute(A);
        condition_ = os_detail::cond_estimate(lu_, rn);
        damp_ = damp;
        poisson_ = std::make_shared<HelmholtzDirichlet>(ops, k);
    }

    ComplexVec solve_w(const ComplexVec& F) const {
        ComplexVec rhs = F;
        rhs[0] = rhs[ops_->size() - 1] = 0.0;
        return lu_.solve(rhs);
    }

    ResolventSolution solve(const ComplexVec& F) const {
        ResolventSolution sol;
        sol.w = solve_w(F);
        sol.condition_estimate = condition_;
        sol.condition_warning = condition_ > 1e12;
        sol.phi = poisson_->solve(sol.w);
        std::tie(sol.u1, sol.u2) = velocity_from_stream(*ops_, sol.phi, k_);
        const int n = ops_->size();
        ComplexVec Aw = -nu_ * (ops_->d2() * sol.w - k_ * k_ * sol.w) - damp_ * sol.w;
        for (int i = 0; i < n; ++i)
            Aw[i] += Complex(0, k_) * (ops_->nodes()[i] - lambda_) * sol.w[i];
        // componentwise backward error: misfit against the local row scale
        const double wmax = ops_->linf(sol.w);
        const double d2row = nu_ * ops_->d2().cwiseAbs().rowwise().sum().maxCoeff();
        double mis = 0.0;
        for (int i = 1; i + 1 < n; ++i)
            mis = std::max(mis, std::abs(Aw[i] - F[i]) /
                                    (d2row * wmax + std::abs(F[i]) + 1e-300));
        sol.residual = mis;
        os_detail::fill_norms(*ops_, nu_, k_, lambda_, sol);
        return sol;
    }

  private:
    const SpectralOperatorSet* ops_;
    double nu_, k_, lambda_, damp_ = 0;
    Eigen::PartialPivLU<ComplexMat> lu_;
    double condition_ = 0;
    std::shared_ptr<HelmholtzDirichlet> poisson_;
};

/// Fourth-order clamped operator phi(+-1) = phi'(+-1) = 0 (boundary-row
/// replacement); also solves the homogeneous problems with prescribed
/// wall derivative data.
class NonSlipSolver {
  public:
    NonSlipSolver(const SpectralOperatorSet& ops, double nu, double k, double lambda,
                  double eps = 0.0)
        : ops_(&ops), nu_(nu), k_(k), lambda_(lambda) {
        const int n = ops.size();
        damp_ = eps * std::pow(nu, 1.0 / 3.0) * std::pow(std::abs(k), 2.0 / 3.0);
        H_ = ops.d2() - k * k * RealMat::Identity(n, n);
        ComplexMat M = (-nu * (H_ * H_) - damp_ * H_).cast<Complex>();
        for (int i = 0; i < n; ++i)
            M.row(i) += Complex(0, k) * (ops.nodes()[i] - lambda) * H_.row(i).cast<Complex>();
        interior_ = M;
        M.row(0).setZero();
        M(0, 0) = 1.0;
        M.row(n - 1).setZero();
        M(n - 1, n - 1) = 1.0;
        M.row(1) = ops.d1().row(0).cast<Complex>();
        M.row(n - 2) = ops.d1().row(n - 1).cast<Complex>();
        // row equilibration keeps the boundary rows honest in the LU
        row_scale_.resize(n);
        for (int i = 0; i < n; ++i) {
            row_scale_[i] = M.row(i).cwiseAbs().maxCoeff();
            M.row(i) /= row_scale_[i];
        }
        double rn = 0.0;
        for (int i = 0; i < n; ++i) rn = std::max(rn, M.row(i).cwiseAbs().sum());
        lu_.compute(M);
        condition_ = os_detail::cond_estimate(lu_, rn);
    }

    double condition_estimate() const { return condition_; }

    ComplexVec solve_phi(const ComplexVec& F, Complex dphi_plus = 0.0,
                         Complex dphi_minus = 0.0) const {
        ComplexVec rhs = F;
        const int n = ops_->size();
        rhs[0] = rhs[n - 1] = 0.0;
        rhs[1] = dphi_plus;
        rhs[n - 2] = dphi_minus;
        for (int i = 0; i < n; ++i) rhs[i] /= row_scale_[i];
        return lu_.solve(rhs);
    }

    /// w = (d^2 - k^2) phi for the homogeneous problem with phi'(1)=bp,
    /// phi'(-1)=bm.
    ComplexVec homogeneous_w(double bp, double bm) const {
        ComplexVec phi = solve_phi(ComplexVec::Zero(ops_->size()), bp, bm);
        return H_.cast<Complex>() * phi;
    }

    ResolventSolution solve(const ComplexVec& F) const {
        ResolventSolution sol;
        sol.phi = solve_phi(F);
        sol.condition_estimate = condition_;
        sol.condition_warning = condition_ > 1e12;
        sol.w = H_.cast<Complex>() * sol.phi;
        std::tie(sol.u1, sol.u2) = velocity_from_stream(*ops_, sol.phi, k_);
        ComplexVec Mphi = interior_ * sol.phi;
        // componentwise backward error against the local row scale
        double mis = 0.0;
        const int n = ops_->size();
        const double phimax = ops_->linf(sol.phi);
        for (int i = 2; i + 2 < n; ++i) {
            const double rowsc = interior_.row(i).cwiseAbs().maxCoeff() * double(n);
            mis = std::max(mis,
                           std::abs(Mphi[i] - F[i]) / (rowsc * phimax + std::abs(F[i]) + 1e-300));
        }
        sol.residual = mis;
        os_detail::fill_norms(*ops_, nu_, k_, lambda_, sol);
        return sol;
    }

  private:
    const SpectralOperatorSet* ops_;
    double nu_, k_, lambda_, damp_ = 0;
    RealMat H_;
    ComplexMat interior_;
    RealVec row_scale_;
    Eigen::PartialPivLU<ComplexMat> lu_;
    double condition_ = 0;
};

inline ResolventSolution solve_navier_slip(const SpectralOperatorSet& ops, const ResolventCase& c) {
    c.validate();
    return NavierSlipSolver(ops, c.nu, c.k, c.lambda, c.eps)
        .solve(os_detail::effective_force(ops, c));
}

inline ResolventSolution solve_nonslip_direct(const SpectralOperatorSet& ops,
                                              const ResolventCase& c) {
    c.validate();
    return NonSlipSolver(ops, c.nu, c.k, c.lambda, c.eps)
        .solve(os_detail::effective_force(ops, c));
}

inline ComplexVec solve_homogeneous_spectral(const SpectralOperatorSet& ops,
                                             const ResolventCase& c, double bp, double bm) {
    c.validate();
    return NonSlipSolver(ops, c.nu, c.k, c.lambda, c.eps).homogeneous_w(bp, bm);
}

struct DecompositionBundle {
    ComplexVec w_na;
    Complex c1, c2;
    ComplexVec w1, w2;
    ComplexVec reconstructed;
    ComplexVec direct;
    double rel_l2_diff = 0;
    bool band_flagged = false;  // outside 10 nu <= |k| < 1
};

struct NumericalFailure : NumericalError {
    using NumericalError::NumericalError;
};

struct CrossValidationError : NumericalError {
    CrossValidationError(const std::string& msg, DecompositionBundle b)
        : NumericalError(msg), bundle(std::move(b)) {}
    DecompositionBundle bundle;
};

/// w = w_Na + c1 w1 + c2 w2 with the coefficients determined by the clamped
/// conditions: c1 = -phi_Na'(1), c2 = -phi_Na'(-1). By the Green identity
/// these equal -int sinh(k(1+y))/sinh(2k) w_Na dy and
/// -int sinh(k(1-y))/sinh(2k) w_Na dy; both routes are computed and compared.
inline DecompositionBundle decompose_nonslip(
    const SpectralOperatorSet& ops, const ResolventCase& c,
    std::optional<std::pair<ComplexVec, ComplexVec>> homogeneous = std::nullopt,
    double tolerance = 1e-6) {
    c.validate();
    const int n = ops.size();
    DecompositionBundle out;
    out.band_flagged = !(10.0 * c.nu <= std::abs(c.k) && std::abs(c.k) < 1.0);

    const ComplexVec F = os_detail::effective_force(ops, c);
    NavierSlipSolver slip(ops, c.nu, c.k, c.lambda, c.eps);
    ResolventSolution na = slip.solve(F);
    out.w_na = na.w;

    // Green identity: int g1 w = +phi'(1), int g2 w = -phi'(-1) for
    // g1 = sinh(k(1+y))/sinh 2k, g2 = sinh(k(1-y))/sinh 2k
    Complex c1_quad(0, 0), c2_quad(0, 0);
    for (int i = 0; i < n; ++i) {
        const double y = ops.nodes()[i];
        c1_quad -= ops.quad_weights()[i] * std::sinh(c.k * (1.0 + y)) / std::sinh(2.0 * c.k) * na.w[i];
        c2_quad += ops.quad_weights()[i] * std::sinh(c.k * (1.0 - y)) / std::sinh(2.0 * c.k) * na.w[i];
    }
    out.c1 = -(ops.d1().row(0).cast<Complex>() * na.phi)(0);
    out.c2 = -(ops.d1().row(n - 1).cast<Complex>() * na.phi)(0);
    const double cscale = std::abs(out.c1) + std::abs(out.c2) + 1e-300;
    if (std::abs(out.c1 - c1_quad) + std::abs(out.c2 - c2_quad) > 1e-6 * cscale)
        throw NumericalFailure("decompose_nonslip: Green-identity coefficient mismatch");

    if (homogeneous) {
        out.w1 = homogeneous->first;
        out.w2 = homogeneous->second;
    } else {
        NonSlipSolver clamp(ops, c.nu, c.k, c.lambda, c.eps);
        out.w1 = clamp.homogeneous_w(1.0, 0.0);
        out.w2 = clamp.homogeneous_w(0.0, 1.0);
        out.direct = clamp.solve(F).w;
    }
    if (out.direct.size() == 0) out.direct = solve_nonslip_direct(ops, c).w;
    out.reconstructed = out.w_na + out.c1 * out.w1 + out.c2 * out.w2;
    out.rel_l2_diff = ops.l2(ComplexVec(out.reconstructed - out.direct)) / ops.l2(out.direct);
    if (out.rel_l2_diff > tolerance)
        throw CrossValidationError(
            "decompose_nonslip: reconstruction mismatch " + std::to_string(out.rel_l2_diff), out);
    return out;
}

struct WeakResolventReport {
    double pairing = 0;  // |<w, f>|
    double bound = 0;    // right-hand side
    double ratio = 0;
    bool interval_empty = false;
    double t_sup = 0, t_endpoint = 0, t_h1 = 0, t_l2 = 0;
};

/// Pairing |<w,f>| against the cutoff-weighted right-hand side built from
/// chi (reciprocal outside the critical layer, cubic ramp inside).
inline WeakResolventReport verify_weak_resolvent(const SpectralOperatorSet& ops,
                                                 const ResolventCase& c,
                                                 const std::function<double(double)>& f,
                                                 const std::function<double(double)>& fprime,
                                                 int j) {
    if (j != 1 && j != -1) throw std::invalid_argument("verify_weak_resolvent: j must be +-1");
    if (std::abs(f(-double(j))) > 1e-12)
        throw std::invalid_argument("verify_weak_resolvent: f must vanish at y = -j");
    const double la = c.lambda, delta = c.delta();

    ResolventSolution sol = solve_navier_slip(ops, c);
    Complex pair(0, 0);
    for (int i = 0; i < ops.size(); ++i)
        pair += ops.quad_weights()[i] * sol.w[i] * f(ops.nodes()[i]);

    auto chi = [&](double y) {
        if (y > la - delta && y < la + delta) {
            const double t = y - la;
            return 2.0 * t / (delta * delta) - t * t * t / std::pow(delta, 4);
        }
        return 1.0 / (y - la);
    };
    auto chiprime = [&](double y) {
        if (y > la - delta && y < la + delta) {
            const double t = y - la;
            return 2.0 / (delta * delta) - 3.0 * t * t / std::pow(delta, 4);
        }
        return -1.0 / ((y - la) * (y - la));
    };

    WeakResolventReport rep;
    const double elo = std::max(-1.0, la - delta), ehi = std::min(1.0, la + delta);
    rep.interval_empty = !(elo < ehi);
    if (!rep.interval_empty) {
        double fsup = 0.0;
        for (int q = 0; q <= 64; ++q)
            fsup = std::max(fsup, std::abs(f(elo + (ehi - elo) * q / 64.0)));
        rep.t_sup = std::pow(delta, -1.5) * fsup;
    }
    rep.t_endpoint = std::abs(f(double(j))) * std::pow(std::abs(j - la) + delta, -0.75) *
                     std::pow(delta, -0.75);

    std::vector<double> breaks;
    for (double b : {la - delta, la + delta})
        if (b > -1.0 && b < 1.0) breaks.push_back(b);
    auto fchi2 = [&](double y) { return std::pow(f(y) * chi(y), 2); };
    auto dfchi2 = [&](double y) {
        const double d = fprime(y) * chi(y) + f(y) * chiprime(y);
        return d * d;
    };
    const double l2 = std::sqrt(std::max(0.0, detail::integrate_split(fchi2, breaks, 8, 20)));
    const double h1s = std::sqrt(std::max(0.0, detail::integrate_split(dfchi2, breaks, 8, 20)));
    rep.t_h1 = std::sqrt(h1s * h1s + l2 * l2);
    rep.t_l2 = l2 / delta;

    const ComplexVec F = os_detail::effective_force(ops, c);
    rep.bound =
        (rep.t_sup + rep.t_endpoint + rep.t_h1 + rep.t_l2) * ops.h_minus1(F) / std::abs(c.k);
    rep.pairing = std::abs(pair);
    rep.ratio = rep.pairing / rep.bound;
    return rep;
}

struct InequalityEnvelope {
    std::string id;
    double worst_ratio = 0;
    double worst_lambda = 0;
    std::string worst_forcing;
};

struct ScanRow {
    double lambda;
    std::string forcing_id;
    BoundaryKind bc;
    ResolventNorms norms;
    double f_l2 = 0, f_hminus1 = 0;
    double residual = 0;
};

struct ConstantReport {
    std::vector<ScanRow> rows;
    std::map<std::string, InequalityEnvelope> envelopes;
    int failures = 0;
};

inline std::vector<double> lambda_grid(double nu, double k, double lo = -3.0, double hi = 3.0) {
    const double delta = std::pow(nu, 1.0 / 3.0) * std::pow(std::abs(k), -1.0 / 3.0);
    std::vector<double> grid;
    for (double la = lo; la <= hi + 1e-12; la += delta / 2.0) grid.push_back(la);
    for (int m = -16; m <= 16; ++m) {  // refinement near the wall critical layers
        for (double c : {-1.0, 1.0}) {
            const double la = c + m * delta / 8.0;
            if (la >= lo && la <= hi) grid.push_back(la);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               grid.end());
    return grid;
}

/// Sweeps lambda and the forcing ensemble, accumulating the empirical
/// constants of the four resolvent inequalities (both boundary conditions,
/// L^2 and H^-1 normalizations). One factorization per (lambda, bc).
inline ConstantReport scan_lambda(const SpectralOperatorSet& ops, double nu, double k, double eps,
                                  const std::vector<double>& lambdas,
                                  const std::vector<ForcingField>& ensemble, int workers = 0) {
    ConstantReport report;
    struct PointResult {
        std::vector<ScanRow> rows;
        bool failed = false;
    };
    std::vector<PointResult> results(lambdas.size());

    parallel_for(
        static_cast<int>(lambdas.size()),
        [&](int li) {
            PointResult& pr = results[li];
            try {
                NavierSlipSolver slip(ops, nu, k, lambdas[li], eps);
                NonSlipSolver clamp(ops, nu, k, lambdas[li], eps);
                for (const auto& f : ensemble) {
                    ResolventSolution na = slip.solve(f.values);
                    ResolventSolution ns = clamp.solve(f.values);
                    const double fl2 = ops.l2(f.values);
                    const double fh = ops.h_minus1(f.values);
                    pr.rows.push_back({lambdas[li], f.id, BoundaryKind::navier_slip, na.norms,
                                       fl2, fh, na.residual});
                    pr.rows.push_back(
                        {lambdas[li], f.id, BoundaryKind::non_slip, ns.norms, fl2, fh, ns.residual});
                }
            } catch (const NumericalError&) {
                pr.failed = true;
            }
        },
        workers);

    auto bump = [&](const std::string& id, double ratio, double la, const std::string& fid) {
        auto& env = report.envelopes[id];
        env.id = id;
        if (ratio > env.worst_ratio) {
            env.worst_ratio = ratio;
            env.worst_lambda = la;
            env.worst_forcing = fid;
        }
    };
    const double ak = std::abs(k);
    for (auto& pr : results) {
        if (pr.failed) ++report.failures;
        for (auto& r : pr.rows) {
            const auto& m = r.norms;
            if (r.bc == BoundaryKind::navier_slip) {
                const double lhs_l2 =
                    std::pow(nu, 1.0 / 6.0) * std::pow(ak, 5.0 / 6.0) * (m.u_l2 + m.w_l1) +
                    std::pow(nu, 2.0 / 3.0) * std::pow(ak, 1.0 / 3.0) * m.wprime_l2 +
                    std::pow(nu * ak * ak, 1.0 / 3.0) * m.w_l2 + ak * m.ylam_w_l2;
                bump("slip_L2", lhs_l2 / r.f_l2, r.lambda, r.forcing_id);
                const double lhs_h = std::sqrt(nu * ak) * m.u_l2 + nu * m.wprime_l2 +
                                     std::pow(nu, 2.0 / 3.0) * std::pow(ak, 1.0 / 3.0) * m.w_l2;
                bump("slip_Hm1", lhs_h / r.f_hminus1, r.lambda, r.forcing_id);
            } else {
                const double lhs_l2 =
                    std::pow(nu, 1.0 / 3.0) * std::pow(ak, 2.0 / 3.0) * m.rho_half_w_l2 +
                    std::pow(nu, 1.0 / 6.0) * std::pow(ak, 5.0 / 6.0) * m.u_l2 +
                    std::pow(nu, 5.0 / 12.0) * std::pow(ak, 7.0 / 12.0) * m.w_l2;
                bump("clamp_L2", lhs_l2 / r.f_l2, r.lambda, r.forcing_id);
                const double lhs_h =
                    std::pow(nu, 2.0 / 3.0) * std::pow(ak, 1.0 / 3.0) * m.rho_half_w_l2 +
                    std::sqrt(nu * ak) * m.u_l2 +
                    std::pow(nu, 0.75) * std::pow(ak, 0.25) * m.w_l2;
                bump("clamp_Hm1", lhs_h / r.f_hminus1, r.lambda, r.forcing_id);
            }
            report.rows.push_back(std::move(r));
        }
    }
    return report;
}

}  // namespace couette
