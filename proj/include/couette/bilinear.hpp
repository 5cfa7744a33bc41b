#pragma once

#include <map>

#include "couette/nonlinear.hpp"

namespace couette {

/// Frequency regions of the interaction analysis: 1 (|x| <= 10 nu),
/// 2 (10 nu < |x| <= 1), 3 (|x| > 1).
inline int region_of(double x, double nu) {
    const double a = std::abs(x);
    if (a <= 10.0 * nu) return 1;
    if (a <= 1.0) return 2;
    return 3;
}

/// Hölder-route kernel K_{ij}(l, k) with unit constants so that
///   min(nu^{-1/6}|k+l|^{2/3}, nu^{-1/2}) ||u1_l w_k||_{L2 L2}
///     <= K_{ij}(l,k) E_l E_k
/// for l in region i and k in region j, following the case analysis:
/// Case I pairs u1 in L2_t Linf_y with w in Linf_t L2_y; Case II splits
/// |k+l|^{2/3} <= |k|^{2/3} + |l|^{2/3} and interpolates; Case III uses
/// min(a,b) <= a^{3/4} b^{1/4} = nu^{-1/4}|k+l|^{1/2}.
inline double bilinear_kernel(double l, double k, double nu) {
    const double al = std::abs(l), ak = std::abs(k);
    const int i = region_of(l, nu), j = region_of(k, nu);
    const double w23 = std::pow(nu, -1.0 / 6.0) * std::pow(std::abs(k + l), 2.0 / 3.0);

    // u1 tables (exact unit constants from the E_k definition)
    auto u_l2linf = [&](double x) {  // ||u1_x||_{L2 Linf} / E_x
        switch (region_of(x, nu)) {
            case 1: return std::pow(nu, -0.5);
            case 2: return std::pow(nu, -1.0 / 8.0) * std::pow(std::abs(x), -3.0 / 8.0);
            default: return std::pow(nu, -1.0 / 8.0) * std::pow(std::abs(x), -0.75);
        }
    };
    auto u_linflinf = [&](double x) {  // ||u1_x||_{Linf Linf} / E_x
        return std::min(1.0, std::pow(std::abs(x), -0.5));
    };
    auto w_l2l2 = [&](double x) {  // ||w_x||_{L2 L2} / E_x
        switch (region_of(x, nu)) {
            case 1: return std::pow(nu, -0.5);
            case 2: return std::pow(nu, -0.25) * std::pow(std::abs(x), -0.25);
            default: return std::pow(nu, -0.25) * std::pow(std::abs(x), -0.5);
        }
    };
    auto w_linfl2 = [&](double x) {  // ||w_x||_{Linf L2} / E_x (regions 1, 2)
        return (region_of(x, nu) == 1) ? 1.0 : std::pow(nu, -0.25) * std::pow(std::abs(x), 0.25);
    };

    if (j == 1) return w23 * u_l2linf(al) * w_linfl2(ak);
    if (j == 2) {
        if (i == 1) return w23 * u_linflinf(al) * w_l2l2(ak);
        // split |k+l|^{2/3} <= |k|^{2/3} + |l|^{2/3}
        const double pref = std::pow(nu, -1.0 / 6.0);
        const double term_k = std::pow(ak, 2.0 / 3.0) * u_linflinf(al) * w_l2l2(ak);
        double term_l;
        if (i == 2) {
            // geometric mean of (Linf Linf x L2 L2) and (L2 Linf x Linf L2)
            term_l = std::pow(al, 2.0 / 3.0) *
                     std::sqrt(u_linflinf(al) * w_l2l2(ak) * u_l2linf(al) * w_linfl2(ak));
        } else {
            term_l = std::pow(al, 2.0 / 3.0) *
                     std::pow(u_linflinf(al) * w_l2l2(ak), 1.0 / 3.0) *
                     std::pow(u_l2linf(al) * w_linfl2(ak), 2.0 / 3.0);
        }
        return pref * (term_k + term_l);
    }
    // j == 3
    const double w12 = std::pow(nu, -0.25) * std::pow(std::abs(k + l), 0.5);
    return w12 * u_linflinf(al) * w_l2l2(ak);
}

struct RegionInequality {
    std::string id;
    double constant;    // asserted bound
    double worst;       // measured supremum over the samples
    int violations = 0;
};

/// The nine per-region scalar inequalities of the case analysis, each
/// sampled densely over its region. Constants are the sharp suprema with
/// a little headroom.
inline std::vector<RegionInequality> verify_region_inequalities(double nu, int samples = 200) {
    std::vector<RegionInequality> out;
    auto sample_region = [&](int region, int idx) {
        // log-spaced magnitudes with alternating signs
        double lo, hi;
        if (region == 1) {
            lo = 1e-4 * 10.0 * nu;
            hi = 10.0 * nu;
        } else if (region == 2) {
            lo = 10.0 * nu * (1.0 + 1e-9);
            hi = 1.0;
        } else {
            lo = 1.0 + 1e-9;
            hi = 1e3;
        }
        const double x = lo * std::pow(hi / lo, double(idx) / (samples - 1));
        return (idx % 2 == 0) ? x : -x;
    };
    auto check = [&](const std::string& id, int ri, int rj, double constant,
                     const std::function<double(double, double)>& ratio) {
        RegionInequality q{id, constant, 0.0, 0};
        for (int a = 0; a < samples; ++a)
            for (int b = 0; b < samples; ++b) {
                const double l = sample_region(ri, a), k = sample_region(rj, b);
                const double r = ratio(l, k);
                q.worst = std::max(q.worst, r);
                if (r > constant) ++q.violations;
            }
        out.push_back(q);
    };

    // Case I row (k low)
    check("I11_k+l_vs_nu", 1, 1, 7.4, [&](double l, double k) {
        return std::pow(std::abs(k + l), 2.0 / 3.0) / std::pow(nu, 2.0 / 3.0);
    });
    check("I21_k+l_vs_l38", 2, 1, 1.6, [&](double l, double k) {
        return std::pow(std::abs(k + l), 2.0 / 3.0) / std::pow(std::abs(l), 3.0 / 8.0);
    });
    check("I31_k+l_vs_l34", 3, 1, 1.2, [&](double l, double k) {
        return std::pow(std::abs(k + l), 2.0 / 3.0) / std::pow(std::abs(l), 0.75);
    });
    // Case II row (k intermediate)
    check("I12_k+l_vs_k14", 1, 2, 1.6, [&](double l, double k) {
        return std::pow(std::abs(k + l), 2.0 / 3.0) / std::pow(std::abs(k), 0.25);
    });
    check("I22_subadditive", 2, 2, 1.0, [&](double l, double k) {
        return std::pow(std::abs(k + l), 2.0 / 3.0) /
               (std::pow(std::abs(k), 2.0 / 3.0) + std::pow(std::abs(l), 2.0 / 3.0));
    });
    check("I32_k512_vs_nu", 3, 2, 1.0, [&](double l, double k) {
        (void)l;  // nu^{-5/12}|k|^{5/12} <= nu^{-1/2} on |k| <= 1
        return std::pow(nu, -5.0 / 12.0) * std::pow(std::abs(k), 5.0 / 12.0) / std::pow(nu, -0.5);
    });
    // Case III row (k high)
    check("I13_k+l_vs_k", 1, 3, 2.0, [&](double l, double k) {
        return std::sqrt(std::abs(k + l) / std::abs(k));
    });
    check("I23_k+l_vs_k", 2, 3, 2.0, [&](double l, double k) {
        return std::sqrt(std::abs(k + l) / std::abs(k));
    });
    check("I33_product", 3, 3, 2.0, [&](double l, double k) {
        return std::abs(k + l) / (std::abs(l) * std::abs(k));
    });
    return out;
}

struct BilinearCheckReport {
    double measured_f1 = 0;       // simulation flux norm, weighted, L1_k
    double assembled_f1 = 0;      // nine-region kernel bound
    double measured_f2 = 0;       // nu^{-1/2} f2 flux norm, L1_k
    double assembled_f2 = 0;      // Hardy-route bound
    double e_l1 = 0;              // ||E_k||_{L1_k}
    double nu = 0;
    std::map<std::string, double> region_share;  // fraction of assembled_f1
};

/// Assembles the nine-region double integral over an energy profile and
/// compares it against the simulation-measured flux norms.
inline BilinearCheckReport bilinear_region_check(const NonlinearSolver::RunResult& rr,
                                                 const NonlinearConfig& cfg) {
    BilinearCheckReport rep;
    rep.nu = cfg.nu;
    const int M2 = cfg.x_modes / 2;
    const double dk = cfg.dk();

    std::vector<double> E(M2 + 1);
    for (int m = 0; m <= M2; ++m)
        E[m] = mode_energy(rr.ledgers[m], cfg.k_of(m), cfg.nu, cfg.Lx);
    for (int m = 0; m <= M2; ++m)
        rep.e_l1 += dk * (m == 0 ? 1.0 : 2.0) * E[m];

    // assembled bound: signed double sum over (l, k)
    for (int ml = -M2; ml <= M2; ++ml) {
        if (ml == 0) continue;  // u1 of the mean mode pairs through f2 only
        for (int mk = -M2; mk <= M2; ++mk) {
            if (mk == 0) continue;
            const double l = cfg.k_of(std::abs(ml)) * (ml < 0 ? -1.0 : 1.0);
            const double k = cfg.k_of(std::abs(mk)) * (mk < 0 ? -1.0 : 1.0);
            const double kern = bilinear_kernel(l, k, cfg.nu);
            const double contrib = dk * dk * kern * E[std::abs(ml)] * E[std::abs(mk)];
            rep.assembled_f1 += contrib;
            const std::string id = "I" + std::to_string(region_of(l, cfg.nu)) +
                                   std::to_string(region_of(k, cfg.nu));
            rep.region_share[id] += contrib;
        }
    }
    for (auto& [id, v] : rep.region_share) v /= rep.assembled_f1;

    // measured: dk sum over output modes of weight(k) ||f1_k||_{L2 L2}
    for (int m = 1; m <= M2; ++m) {
        const double k = cfg.k_of(m);
        const double weight =
            std::min(std::pow(cfg.nu, -1.0 / 6.0) * std::pow(k, 2.0 / 3.0), std::pow(cfg.nu, -0.5));
        rep.measured_f1 += 2.0 * dk * weight * cfg.Lx * std::sqrt(rr.ledgers[m].int_f1_l2sq);
        rep.measured_f2 += 2.0 * dk * std::pow(cfg.nu, -0.5) * cfg.Lx *
                           std::sqrt(rr.ledgers[m].int_f2_l2sq);
    }
    {  // mean mode contributes to both flux norms with weight nu^{-1/2}
        rep.measured_f1 += dk * std::pow(cfg.nu, -0.5) * cfg.Lx * 0.0;
        rep.measured_f2 +=
            dk * std::pow(cfg.nu, -0.5) * cfg.Lx * std::sqrt(rr.ledgers[0].int_f2_l2sq);
    }

    // Hardy-route bound for f2: nu^{-1/2} (dk sum ||l u1_l||)(dk sum ||(1-|y|)^{1/2} w||)
    double du2_sum = 0, wweight_sum = 0;
    for (int m = 0; m <= M2; ++m) {
        const double fac = (m == 0 ? 1.0 : 2.0) * dk * cfg.Lx;
        du2_sum += fac * cfg.k_of(m) * std::sqrt(rr.ledgers[m].int_u_l2sq);
        wweight_sum += fac * rr.ledgers[m].sup_w_weighted;
    }
    rep.assembled_f2 = std::pow(cfg.nu, -0.5) * du2_sum * wweight_sum;
    return rep;
}

}  // namespace couette
