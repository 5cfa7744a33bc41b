#pragma once

#include <map>
#include <string>

#include "couette/airy.hpp"
#include "couette/os_resolvent.hpp"

namespace couette {

/// Semi-analytic package for the homogeneous Orr-Sommerfeld solutions
///   W1(y) = Ai(e^{i pi/6}(L(y - lambda - i k nu) + i eps)),
///   W2(y) = Ai(e^{i 5pi/6}(L(y - lambda - i k nu) + i eps)),
/// their wall-weighted moments A1, A2, B1, B2, and the boundary-data
/// coefficients C_ij of w1 = C11 W1 + C12 W2, w2 = C21 W1 + C22 W2.
struct AiryCoefficientBundle {
    double nu, k, lambda, eps;
    double L;            // (k/nu)^{1/3}
    Complex d, d_tilde;  // -1 - lambda - i k nu, -1 + lambda - i k nu
    ScaledC a0_d, a0_dt;
    ScaledC A1, A2, B1, B2;
    ScaledC C11, C12, C21, C22;
    ScaledC det;             // A1 A2 - B1 B2
    double det_margin;       // |det| / (0.002 e^{-4} |k| |B1 B2|)
    double det_vs_a0;        // |det| / (|k| L^{-2} |A0(Ld)| |A0(Ld~)|)
    double b1_lower_margin;  // |B1| L / |A0(Ld)|
    double b2_lower_margin;  // |B2| L / |A0(Ld~)|
    bool band_flagged;
    QuadRule rule;  // the rule the moments were computed with

    Complex w_arg(double y) const { return L * Complex(y - lambda, -k * nu) + Complex(0, eps); }
    ScaledC W1(double y) const {
        return airy_detail::ai_dispatch(std::polar(1.0, kPi / 6.0) * w_arg(y)).ai;
    }
    ScaledC W2(double y) const {
        return airy_detail::ai_dispatch(std::polar(1.0, 5.0 * kPi / 6.0) * w_arg(y)).ai;
    }
    Complex w1(double y) const { return (C11 * W1(y) + C12 * W2(y)).to_complex(); }
    Complex w2(double y) const { return (C21 * W1(y) + C22 * W2(y)).to_complex(); }
};

inline int bundle_quadrature_size(double L) {
    int m = static_cast<int>(std::ceil(32.0 * L));
    m = std::clamp(m, 257, 2049);
    return m | 1;  // odd keeps y=0 a node
}

inline AiryCoefficientBundle build_bundle(double nu, double k, double lambda, double eps = 0.0) {
    if (nu <= 0) throw std::invalid_argument("build_bundle: nu must be positive");
    if (k <= 0)
        throw std::invalid_argument("build_bundle: requires k > 0 (negative k by conjugation symmetry)");
    AiryCoefficientBundle b;
    b.nu = nu;
    b.k = k;
    b.lambda = lambda;
    b.eps = eps;
    b.L = std::pow(k / nu, 1.0 / 3.0);
    b.d = Complex(-1.0 - lambda, -k * nu);
    b.d_tilde = Complex(-1.0 + lambda, -k * nu);
    b.band_flagged = !(10.0 * nu <= k && k < 1.0);
    b.a0_d = airy_detail::a0_dispatch(b.L * b.d + Complex(0, eps));
    b.a0_dt = airy_detail::a0_dispatch(b.L * b.d_tilde + Complex(0, eps));

    b.rule = clenshaw_curtis_rule(bundle_quadrature_size(b.L));
    ScaledC A1, A2, B1, B2;
    for (int i = 0; i < b.rule.size(); ++i) {
        const double y = b.rule.nodes[i], w = b.rule.weights[i];
        ScaledC W1 = b.W1(y), W2 = b.W2(y);
        const double ep = std::exp(k * y), em = std::exp(-k * y);
        A1 += ScaledC(w * ep, 0.0) * W1;
        B1 += ScaledC(w * em, 0.0) * W1;
        A2 += ScaledC(w * em, 0.0) * W2;
        B2 += ScaledC(w * ep, 0.0) * W2;
    }
    b.A1 = A1;
    b.A2 = A2;
    b.B1 = B1;
    b.B2 = B2;
    b.det = A1 * A2 - B1 * B2;

    const double log_bb = B1.log_abs() + B2.log_abs();
    if (b.det.log_abs() - log_bb < -644.0)  // |det|/|B1 B2| below 1e-280
        throw NumericalError("build_bundle: determinant underflow relative to |B1 B2|");

    const Complex ek(std::exp(k), 0), emk(std::exp(-k), 0);
    b.C11 = (A2 * ek - B2 * emk) / b.det;
    b.C12 = (A1 * emk - B1 * ek) / b.det;
    b.C21 = (B2 * ek - A2 * emk) / b.det;
    b.C22 = (B1 * emk - A1 * ek) / b.det;

    b.det_margin = std::exp(b.det.log_abs() - (std::log(0.002) - 4.0 + std::log(k) + log_bb));
    b.det_vs_a0 = std::exp(b.det.log_abs() -
                           (std::log(k) - 2.0 * std::log(b.L) + b.a0_d.log_abs() + b.a0_dt.log_abs()));
    b.b1_lower_margin = std::exp(B1.log_abs() + std::log(b.L) - b.a0_d.log_abs());
    b.b2_lower_margin = std::exp(B2.log_abs() + std::log(b.L) - b.a0_dt.log_abs());
    return b;
}

struct HomogeneousNorms {
    double l1 = 0, l2 = 0, linf = 0, rho_half_l2 = 0, rho_mquarter_l2 = 0;
};

struct HomogeneousPair {
    ComplexVec w1, w2;      // sampled on the operator grid
    ComplexVec phi1, phi2;  // streamfunctions with Dirichlet data
    double bc_err = 0;      // worst wall-derivative misfit of phi1, phi2
    double residual = 0;    // homogeneous equation misfit (componentwise)
    HomogeneousNorms n1, n2;
};

namespace homog_detail {

inline HomogeneousNorms norms_on_rule(const QuadRule& rule, const std::vector<Complex>& vals,
                                      double delta) {
    HomogeneousNorms n;
    const int m = rule.size();
    RealVec bary = cgl_barycentric_weights(m);
    Eigen::Map<const ComplexVec> v(vals.data(), m);
    double l1 = 0, l2 = 0;
    for (int i = 0; i < m; ++i) {
        const double a = std::abs(vals[i]);
        l1 += rule.weights[i] * a;
        l2 += rule.weights[i] * a * a;
        n.linf = std::max(n.linf, a);
    }
    n.l1 = l1;
    n.l2 = std::sqrt(std::max(0.0, l2));

    // rho-weighted norms: interior panels + wall strips via 1-|y| = s^2
    auto fval = [&](double y) { return std::norm(barycentric_eval(rule.nodes, bary, v, y)); };
    const double yc = 1.0 - delta;
    auto rho_l2 = [&](double p) {
        double interior = 0.0;
        const int panels = 24;
        for (int q = 0; q < panels; ++q) {
            const double a = -yc + 2.0 * yc * q / panels;
            const double b222 = -yc + 2.0 * yc * (q + 1) / panels;
            interior += gauss_legendre_panel(fval, a, b222, 16);
        }
        auto wall = [&](int sign) {
            return gauss_legendre_panel(
                [&](double s) {
                    const double y = sign * (1.0 - s * s);
                    return std::pow(s * s / delta, 2.0 * p) * fval(y) * 2.0 * s;
                },
                0.0, std::sqrt(delta), 32);
        };
        return std::sqrt(std::max(0.0, interior + wall(+1) + wall(-1)));
    };
    n.rho_half_l2 = rho_l2(0.5);
    n.rho_mquarter_l2 = rho_l2(-0.25);
    return n;
}

}  // namespace homog_detail

/// Samples w1, w2 on the operator grid, recovers the streamfunctions, and
/// checks the wall data phi1'(1)=1, phi1'(-1)=0 (and mirrored for phi2).
/// A failed check retries once on a doubled grid.
inline HomogeneousPair build_homogeneous_pair(const AiryCoefficientBundle& b,
                                              const SpectralOperatorSet& ops,
                                              double bc_tol = 1e-6) {
    const int n = ops.size();
    HomogeneousPair pair;
    pair.w1.resize(n);
    pair.w2.resize(n);
    for (int i = 0; i < n; ++i) {
        pair.w1[i] = b.w1(ops.nodes()[i]);
        pair.w2[i] = b.w2(ops.nodes()[i]);
    }
    pair.phi1 = poisson_streamfunction(ops, pair.w1, b.k);
    pair.phi2 = poisson_streamfunction(ops, pair.w2, b.k);

    auto dphi = [&](const ComplexVec& phi, int row) {
        return (ops.d1().row(row).cast<Complex>() * phi)(0);
    };
    pair.bc_err = std::max({std::abs(dphi(pair.phi1, 0) - 1.0), std::abs(dphi(pair.phi1, n - 1)),
                            std::abs(dphi(pair.phi2, n - 1) - 1.0), std::abs(dphi(pair.phi2, 0))});

    // componentwise residual of the homogeneous equation on w1
    {
        const double damp = b.eps * std::pow(b.nu, 1.0 / 3.0) * std::pow(b.k, 2.0 / 3.0);
        ComplexVec r = -b.nu * (ops.d2() * pair.w1 - b.k * b.k * pair.w1) - damp * pair.w1;
        for (int i = 0; i < n; ++i)
            r[i] += Complex(0, b.k) * (ops.nodes()[i] - b.lambda) * pair.w1[i];
        const double rowsc =
            b.nu * ops.d2().cwiseAbs().rowwise().sum().maxCoeff() * ops.linf(pair.w1);
        double mis = 0.0;
        for (int i = 1; i + 1 < n; ++i) mis = std::max(mis, std::abs(r[i]));
        pair.residual = mis / (rowsc + 1e-300);
    }

    const double delta = std::pow(b.nu, 1.0 / 3.0) * std::pow(b.k, -1.0 / 3.0);
    std::vector<Complex> v1(b.rule.size()), v2(b.rule.size());
    for (int i = 0; i < b.rule.size(); ++i) {
        v1[i] = b.w1(b.rule.nodes[i]);
        v2[i] = b.w2(b.rule.nodes[i]);
    }
    pair.n1 = homog_detail::norms_on_rule(b.rule, v1, delta);
    pair.n2 = homog_detail::norms_on_rule(b.rule, v2, delta);

    if (pair.bc_err > bc_tol) {
        if (ops.size() < 1025) {
            SpectralOperatorSet fine(2 * (n - 1) + 1);
            return build_homogeneous_pair(b, fine, bc_tol);
        }
        throw NumericalError("build_homogeneous_pair: wall data failed at doubled resolution");
    }
    return pair;
}

/// The determinant pieces recomputed through the eta = A0-ratio route,
/// independently of the direct A/B quadrature.
struct EtaFormReport {
    Complex I, II, III;
    Complex D1, D2;
    double d1_margin;     // |D1| / (0.02 k)
    double ratio_margin;  // |D1/D2| / (0.002 e^{-4} k)
};

inline EtaFormReport eta_form_d1(double nu, double k, double lambda, double eps = 0.0,
                                 int panels = 24) {
    if (k <= 0) throw std::invalid_argument("eta_form_d1: requires k > 0");
    const double L = std::pow(k / nu, 1.0 / 3.0);
    const Complex z1 = L * Complex(-1.0 - lambda, -k * nu) + Complex(0, eps);
    const Complex z2 = L * Complex(-1.0 + lambda, -k * nu) + Complex(0, eps);

    // composite Gauss-Legendre in t over [0, 2L], shared with the eta profile
    const int pts = 8;
    static const std::array<double, 4> gx = {0.1834346424956498, 0.5255324099163290,
                                             0.7966664774136267, 0.9602898564975363};
    static const std::array<double, 4> gw = {0.3626837833783620, 0.3137066458778873,
                                             0.2223810344533745, 0.1012285362903763};
    std::vector<double> ts{0.0};
    std::vector<double> tw{0.0};
    for (int p = 0; p < panels; ++p) {
        const double a = 2.0 * L * p / panels, bb = 2.0 * L * (p + 1) / panels;
        const double c = 0.5 * (bb - a), mid = 0.5 * (a + bb);
        for (int q = 0; q < pts / 2; ++q) {
            ts.push_back(mid - c * gx[q]);
            tw.push_back(c * gw[q]);
            ts.push_back(mid + c * gx[q]);
            tw.push_back(c * gw[q]);
        }
    }
    ts.push_back(2.0 * L);
    tw.push_back(0.0);
    std::vector<int> order(ts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int bb) { return ts[a] < ts[bb]; });
    std::vector<double> ts_sorted(ts.size());
    for (size_t i = 0; i < order.size(); ++i) ts_sorted[i] = ts[order[i]];

    auto eta_profile = [&](Complex z) {
        auto prof = a0_profile(z, ts_sorted);
        std::vector<Complex> eta(ts.size());
        for (size_t i = 0; i < order.size(); ++i) eta[order[i]] = (prof[i] / prof[0]).to_complex();
        return eta;
    };
    std::vector<Complex> eta1 = eta_profile(z1);
    std::vector<Complex> eta2 = eta_profile(z2);
    for (auto& e : eta2) e = std::conj(e);

    auto moment = [&](const std::vector<Complex>& eta, double sgn) {
        Complex s(0, 0);
        for (size_t i = 0; i < ts.size(); ++i) s += tw[i] * std::exp(sgn * k * ts[i] / L) * eta[i];
        return s;
    };
    const Complex eta1_2L = eta1.back(), eta2_2L = eta2.back();
    const double e2k = std::exp(2.0 * k);
    const Complex A11 = 1.0 - e2k * eta1_2L, A21 = 1.0 - e2k * eta2_2L;
    const Complex A12 = (k / L) * moment(eta1, +1.0), A22 = (k / L) * moment(eta2, +1.0);
    const Complex B11 = e2k - eta1_2L, B21 = e2k - eta2_2L;
    const Complex B12 = -(k * e2k / L) * moment(eta1, -1.0), B22 = -(k * e2k / L) * moment(eta2, -1.0);

    EtaFormReport rep;
    rep.I = B11 * B21 - A11 * A21;
    rep.II = B11 * B22 + B21 * B12 - A11 * A22 - A21 * A12;
    rep.III = B12 * B22 - A12 * A22;
    rep.D1 = rep.I + rep.II + rep.III;
    rep.D2 = (B11 + B12) * (B21 + B22);
    rep.d1_margin = std::abs(rep.D1) / (0.02 * k);
    rep.ratio_margin = std::abs(rep.D1 / rep.D2) / (0.002 * std::exp(-4.0) * k);
    return rep;
}

/// Scale-normalized ratios of the homogeneous-solution norm estimates; a
/// finite uniform envelope over the sweep is the verified statement.
inline std::map<std::string, double> w_norm_lemma_ratios(const AiryCoefficientBundle& b,
                                                         const HomogeneousPair& p) {
    std::map<std::string, double> r;
    const double nu = b.nu, k = b.k, la = b.lambda, L = b.L;
    const double g1 = 1.0 + std::sqrt(std::abs(1.0 - la));
    const double g2 = 1.0 + std::sqrt(std::abs(1.0 + la));
    r["w_l1_sum"] = p.n1.l1 + p.n2.l1;
    r["w1_linf"] = p.n1.linf * std::sqrt(nu / k) / g1;
    r["w2_linf"] = p.n2.linf * std::sqrt(nu / k) / g2;
    r["w1_l2"] = p.n1.l2 * std::pow(nu / k, 0.25) / std::sqrt(g1);
    r["w2_l2"] = p.n2.l2 * std::pow(nu / k, 0.25) / std::sqrt(g2);
    r["rho_half_sum"] = (p.n1.rho_half_l2 + p.n2.rho_half_l2) / std::sqrt(L);
    r["w1_rho_mquarter"] = p.n1.rho_mquarter_l2 * std::pow(nu / k, 7.0 / 24.0) / std::pow(g1, 0.75);
    r["w2_rho_mquarter"] = p.n2.rho_mquarter_l2 * std::pow(nu / k, 7.0 / 24.0) / std::pow(g2, 0.75);

    // W-level estimates normalized by the A0 magnitudes
    double W1_l1 = 0, W2_l1 = 0, W1_linf = 0, W2_linf = 0;
    double W1_rho = 0, W2_rho = 0;
    const double delta = std::pow(nu / k, 1.0 / 3.0);
    WeightProfile rho{WeightProfile::Kind::rho_k, delta};
    for (int i = 0; i < b.rule.size(); ++i) {
        const double y = b.rule.nodes[i], w = b.rule.weights[i];
        const double a1 = std::exp(b.W1(y).log_abs() - b.a0_d.log_abs());
        const double a2 = std::exp(b.W2(y).log_abs() - b.a0_dt.log_abs());
        W1_l1 += w * a1;
        W2_l1 += w * a2;
        W1_linf = std::max(W1_linf, a1);
        W2_linf = std::max(W2_linf, a2);
        W1_rho += w * rho.value(y) * a1 * a1;
        W2_rho += w * rho.value(y) * a2 * a2;
    }
    r["W_l1_sum"] = L * (W1_l1 + W2_l1);
    r["W1_linf"] = W1_linf / (1.0 + std::sqrt(std::abs(L * (1.0 + la))));
    r["W2_linf"] = W2_linf / (1.0 + std::sqrt(std::abs(L * (1.0 - la))));
    r["W_rho_half_sum"] = L * (std::sqrt(W1_rho) + std::sqrt(W2_rho)) / std::sqrt(L);
    return r;
}

struct CoefficientLemmaRow {
    double lambda;
    std::string forcing_id;
    double lhs_l2 = 0;    // (1+|la-1|)|c1| + (1+|la+1|)|c2|, scaled
    double lhs_hm1 = 0;   // the 3/4-power variant, scaled
    double far_c1 = 0;    // |la-1|>=3 case: |c1| |la-1| scaled
    bool far_case = false;
};

/// Coefficient bounds over a lambda sweep: both the L^2- and the
/// H^-1-normalized forms, split into the near and far critical-layer cases.
inline std::vector<CoefficientLemmaRow> verify_c_lemmas(const SpectralOperatorSet& ops, double nu,
                                                        double k,
                                                        const std::vector<double>& lambdas,
                                                        const std::vector<ForcingField>& ensemble,
                                                        int workers = 0) {
    std::vector<std::vector<CoefficientLemmaRow>> slots(lambdas.size());
    parallel_for(
        static_cast<int>(lambdas.size()),
        [&](int li) {
            const double la = lambdas[li];
            NavierSlipSolver slip(ops, nu, k, la, 0.0);
            for (const auto& f : ensemble) {
                ResolventSolution na = slip.solve(f.values);
                const Complex c1 = -(ops.d1().row(0).cast<Complex>() * na.phi)(0);
                const Complex c2 = -(ops.d1().row(ops.size() - 1).cast<Complex>() * na.phi)(0);
                CoefficientLemmaRow row;
                row.lambda = la;
                row.forcing_id = f.id;
                const double fl2 = ops.l2(f.values), fh = ops.h_minus1(f.values);
                const double s1 = 1.0 + std::abs(la - 1.0), s2 = 1.0 + std::abs(la + 1.0);
                row.lhs_l2 = (s1 * std::abs(c1) + s2 * std::abs(c2)) /
                             (std::pow(nu, -1.0 / 6.0) * std::pow(k, -5.0 / 6.0) * fl2);
                row.lhs_hm1 = (std::pow(s1, 0.75) * std::abs(c1) + std::pow(s2, 0.75) * std::abs(c2)) /
                              (std::pow(nu, -0.5) * std::pow(k, -0.5) * fh);
                row.far_case = std::abs(la - 1.0) >= 3.0;
                if (row.far_case)
                    row.far_c1 = std::abs(c1) * std::abs(la - 1.0) /
                                 (std::pow(nu, -1.0 / 6.0) * std::pow(k, -5.0 / 6.0) * fl2);
                slots[li].push_back(row);
            }
        },
        workers);
    std::vector<CoefficientLemmaRow> rows;
    for (auto& s : slots)
        for (auto& r : s) rows.push_back(std::move(r));
    return rows;
}

}  // namespace couette
