#include <catch2/catch_amalgamated.hpp>

#include "couette/os_resolvent.hpp"

using namespace couette;

namespace {
ComplexVec grid_fn(const SpectralOperatorSet& ops, const std::function<Complex(double)>& f) {
    ComplexVec v(ops.size());
    for (int i = 0; i < ops.size(); ++i) v[i] = f(ops.nodes()[i]);
    return v;
}
}  // namespace

TEST_CASE("navier-slip solve") {
    auto ops = build_chebyshev(129);

    SECTION("zero forcing gives the zero solution") {
        ResolventCase c{1e-3, 0.5, 0.0, 0.0, L2Force{ComplexVec::Zero(129)}};
        auto sol = solve_navier_slip(ops, c);
        CHECK(ops.l2(sol.w) == 0.0);
    }

    SECTION("manufactured solution is recovered") {
        const double nu = 1e-3, k = 0.5, la = 0.0;
        ComplexVec wstar = grid_fn(ops, [](double y) { return Complex(1.0 - y * y, 0); });
        ComplexVec F = -nu * (ops.d2() * wstar - k * k * wstar);
        for (int i = 0; i < 129; ++i) F[i] += Complex(0, k) * (ops.nodes()[i] - la) * wstar[i];
        ResolventCase c{nu, k, la, 0.0, L2Force{F}};
        auto sol = solve_navier_slip(ops, c);
        CHECK(ops.l2(ComplexVec(sol.w - wstar)) / ops.l2(wstar) < 1e-8);
        CHECK(sol.residual < 1e-8);
        CHECK(std::abs(sol.w[0]) < 1e-9);
        CHECK(std::abs(sol.w[128]) < 1e-9);
    }

    SECTION("resolvent quotient is stable under grid doubling") {
        const double nu = 1e-3, k = 0.5;
        auto ops2 = build_chebyshev(257);
        double quotient[2];
        int idx = 0;
        for (const SpectralOperatorSet* o : {&ops, &ops2}) {
            auto ens = forcing_ensemble(*o, std::pow(nu / k, 1.0 / 3.0));
            ResolventCase c{nu, k, 0.0, 0.0, L2Force{ens.back().values}};
            auto sol = solve_navier_slip(*o, c);
            quotient[idx++] = std::pow(nu * k * k, 1.0 / 3.0) * sol.norms.w_l2 /
                              o->l2(ens.back().values);
        }
        CHECK(std::abs(quotient[0] - quotient[1]) < 1e-3 * quotient[1]);
    }
}

TEST_CASE("non-slip direct solve") {
    auto ops = build_chebyshev(129);

    SECTION("zero forcing") {
        ResolventCase c{1e-2, 0.3, 0.2, 0.0, L2Force{ComplexVec::Zero(129)}};
        CHECK(ops.l2(solve_nonslip_direct(ops, c).phi) == 0.0);
    }

    SECTION("manufactured clamped solution") {
        const double nu = 1e-2, k = 0.3, la = 0.2;
        ComplexVec phistar = grid_fn(ops, [](double y) {
            const double q = 1.0 - y * y;
            return Complex(q * q, 0);
        });
        RealMat H = ops.d2() - k * k * RealMat::Identity(129, 129);
        ComplexVec wstar = H.cast<Complex>() * phistar;
        ComplexVec F = -nu * (H.cast<Complex>() * wstar);
        for (int i = 0; i < 129; ++i) F[i] += Complex(0, k) * (ops.nodes()[i] - la) * wstar[i];
        ResolventCase c{nu, k, la, 0.0, L2Force{F}};
        auto sol = solve_nonslip_direct(ops, c);
        CHECK(ops.l2(ComplexVec(sol.phi - phistar)) / ops.l2(phistar) < 1e-7);
        // clamped boundary data
        CHECK(std::abs(sol.phi[0]) < 1e-9);
        CHECK(std::abs(sol.phi[128]) < 1e-9);
        CHECK(std::abs((ops.d1().row(0).cast<Complex>() * sol.phi)(0)) < 1e-9);
        CHECK(std::abs((ops.d1().row(128).cast<Complex>() * sol.phi)(0)) < 1e-9);
        CHECK(sol.residual < 1e-8);
    }
}

TEST_CASE("non-slip decomposition") {
    auto ops = build_chebyshev(129);

    SECTION("zero forcing gives vanishing pieces") {
        ResolventCase c{1e-2, 0.5, 0.0, 0.0, L2Force{ComplexVec::Zero(129)}};
        auto d = decompose_nonslip(ops, c);
        CHECK(ops.l2(d.w_na) == 0.0);
        CHECK(std::abs(d.c1) < 1e-14);
        CHECK(std::abs(d.c2) < 1e-14);
    }

    SECTION("reconstruction matches the direct clamped solve") {
        ComplexVec F = sine_mode(ops.nodes(), 1).cast<Complex>();
        ResolventCase c{1e-2, 0.5, 0.0, 0.0, L2Force{F}};
        auto d = decompose_nonslip(ops, c);
        CHECK(d.rel_l2_diff < 1e-6);
        CHECK_FALSE(d.band_flagged);
    }

    SECTION("coefficient bound over a lambda sweep") {
        const double nu = 1e-2, k = 0.5;
        ComplexVec F = sine_mode(ops.nodes(), 2).cast<Complex>();
        const double fl2 = ops.l2(F);
        double worst = 0.0;
        for (double la = -4.0; la <= 4.0 + 1e-9; la += 0.25) {
            ResolventCase c{nu, k, la, 0.0, L2Force{F}};
            auto d = decompose_nonslip(ops, c);
            const double lhs = (1.0 + std::abs(la - 1.0)) * std::abs(d.c1) +
                               (1.0 + std::abs(la + 1.0)) * std::abs(d.c2);
            worst = std::max(worst, lhs / (std::pow(nu, -1.0 / 6.0) * std::pow(k, -5.0 / 6.0) * fl2));
        }
        INFO("measured constant " << worst);
        CHECK(worst < 10.0);
        CHECK(worst > 0.0);
    }
}

TEST_CASE("lambda scan") {
    auto ops = build_chebyshev(129);

    SECTION("degenerate scan equals the pointwise ratio") {
        const double nu = 1e-3, k = 0.5;
        auto ens = forcing_ensemble(ops, std::pow(nu / k, 1.0 / 3.0));
        std::vector<ForcingField> one{ens[0]};
        auto rep = scan_lambda(ops, nu, k, 0.0, {0.7}, one);
        REQUIRE(rep.rows.size() == 2);
        ResolventCase c{nu, k, 0.7, 0.0, L2Force{ens[0].values}};
        auto direct = solve_navier_slip(ops, c);
        const double ak = std::abs(k);
        const double lhs = std::pow(nu, 1.0 / 6.0) * std::pow(ak, 5.0 / 6.0) *
                               (direct.norms.u_l2 + direct.norms.w_l1) +
                           std::pow(nu, 2.0 / 3.0) * std::pow(ak, 1.0 / 3.0) * direct.norms.wprime_l2 +
                           std::pow(nu * ak * ak, 1.0 / 3.0) * direct.norms.w_l2 +
                           ak * direct.norms.ylam_w_l2;
        CHECK(rep.envelopes.at("slip_L2").worst_ratio ==
              Catch::Approx(lhs / ops.l2(ens[0].values)).epsilon(1e-12));
    }

    SECTION("scan envelope is stable under grid doubling") {
        const double nu = 1e-3, k = 0.1;
        // thinned grid + small ensemble keeps this a unit test
        std::vector<double> las;
        for (double la = -3.0; la <= 3.0 + 1e-12; la += 0.4) las.push_back(la);
        auto run = [&](int n) {
            auto o = build_chebyshev(n);
            auto ens = forcing_ensemble(o, std::pow(nu / k, 1.0 / 3.0));
            ens.resize(6);
            return scan_lambda(o, nu, k, 0.0, las, ens);
        };
        auto r1 = run(129), r2 = run(257);
        CHECK(r1.failures == 0);
        CHECK(r2.failures == 0);
        for (const auto& id : {"slip_L2", "slip_Hm1", "clamp_L2", "clamp_Hm1"}) {
            const double c1 = r1.envelopes.at(id).worst_ratio;
            const double c2 = r2.envelopes.at(id).worst_ratio;
            INFO(id << ": " << c1 << " vs " << c2);
            CHECK(std::abs(c1 - c2) < 0.1 * c2);
        }
    }
}

TEST_CASE("weak resolvent pairing") {
    auto ops = build_chebyshev(129);
    const double nu = 1e-2, k = 0.5;

    SECTION("zero test function pairs to zero") {
        ComplexVec F = sine_mode(ops.nodes(), 1).cast<Complex>();
        ResolventCase c{nu, k, 0.0, 0.0, L2Force{F}};
        auto rep = verify_weak_resolvent(
            ops, c, [](double) { return 0.0; }, [](double) { return 0.0; }, 1);
        CHECK(rep.pairing == 0.0);
    }

    SECTION("wall-flux test function over a lambda sweep") {
        ComplexVec F = sine_mode(ops.nodes(), 1).cast<Complex>();
        auto f = [=](double y) { return std::sinh(k * (1.0 + y)) / std::sinh(2.0 * k); };
        auto fp = [=](double y) { return k * std::cosh(k * (1.0 + y)) / std::sinh(2.0 * k); };
        double worst = 0.0;
        for (double la = -4.0; la <= 4.0 + 1e-9; la += 0.2) {
            ResolventCase c{nu, k, la, 0.0, L2Force{F}};
            auto rep = verify_weak_resolvent(ops, c, f, fp, 1);
            worst = std::max(worst, rep.ratio);
            if (std::abs(la - 1.0) >= 3.0 && std::abs(la) <= 1.0 + 0.0) {
                // unreachable; interval emptiness asserted below instead
            }
        }
        INFO("worst pairing/bound ratio " << worst);
        CHECK(worst < 5.0);

        // |lambda - 1| >= 3 with delta < 1 empties the critical interval
        ResolventCase c{nu, k, 4.2, 0.0, L2Force{F}};
        auto rep = verify_weak_resolvent(ops, c, f, fp, 1);
        CHECK(rep.interval_empty);
        CHECK(rep.t_sup == 0.0);
        CHECK(rep.ratio < 5.0);
    }

    SECTION("boundary condition on f is enforced") {
        ComplexVec F = sine_mode(ops.nodes(), 1).cast<Complex>();
        ResolventCase c{nu, k, 0.0, 0.0, L2Force{F}};
        CHECK_THROWS_AS(verify_weak_resolvent(
                            ops, c, [](double) { return 1.0; }, [](double) { return 0.0; }, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("hyperbolic wall-weight bounds") {
    // sup |sinh(k(1+y))/sinh 2k| <= C and ||cosh(k(1+y))/sinh 2k||_{L2} <= 1/|k|
    auto ops = build_chebyshev(129);
    for (double k : {0.011, 0.05, 0.2, 0.5, 0.9, -0.3, -0.9}) {
        double sup_s = 0.0;
        ComplexVec cosh_w(129);
        for (int i = 0; i < 129; ++i) {
            const double y = ops.nodes()[i];
            sup_s = std::max({sup_s, std::abs(std::sinh(k * (1 + y)) / std::sinh(2 * k)),
                              std::abs(std::sinh(k * (1 - y)) / std::sinh(2 * k))});
            cosh_w[i] = std::cosh(k * (1 + y)) / std::sinh(2 * k);
        }
        CHECK(sup_s <= 1.01);
        CHECK(ops.l2(cosh_w) <= 1.0 / std::abs(k) * (1 + 1e-9));
    }
}
