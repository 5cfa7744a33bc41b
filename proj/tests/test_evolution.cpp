#include <catch2/catch_amalgamated.hpp>

#include "couette/evolution.hpp"
#include "couette/forcing.hpp"

using namespace couette;

TEST_CASE("band classification") {
    CHECK(classify(0.05, 0.01) == FrequencyBand::low);
    CHECK(classify(0.5, 0.01) == FrequencyBand::intermediate);
    CHECK(classify(1.0, 0.01) == FrequencyBand::high);
    CHECK(classify(0.1, 0.01) == FrequencyBand::intermediate);  // |k| = 10 nu
    CHECK(classify(-0.5, 0.01) == FrequencyBand::intermediate);
    CHECK_THROWS_AS(classify(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("evolve basics") {
    auto ops = build_chebyshev(65);

    SECTION("zero data stays zero") {
        EvolutionConfig cfg;
        cfg.nu = 1e-2;
        cfg.k = 0.5;
        cfg.omega_in = ComplexVec::Zero(65);
        auto [traj, led] = evolve(ops, cfg);
        CHECK(led.sup_w_l2 == 0.0);
        CHECK(led.int_u_l2sq == 0.0);
        CHECK(led.sup_u_linf == 0.0);
    }

    SECTION("dt and horizon contracts are enforced") {
        EvolutionConfig cfg;
        cfg.nu = 1e-2;
        cfg.k = 0.5;
        cfg.omega_in = sine_mode(ops.nodes(), 1).cast<Complex>();
        cfg.dt = 10.0 / lambda_nu(cfg.nu, cfg.k);
        CHECK_THROWS_AS(evolve(ops, cfg), std::invalid_argument);
        cfg.dt = 0.0;
        cfg.T = 1.0 / lambda_nu(cfg.nu, cfg.k);
        CHECK_THROWS_AS(evolve(ops, cfg), std::invalid_argument);
    }

    SECTION("k = 0 heat flow is second order in dt") {
        // u1 = sin(pi (y+1)) e^{-nu pi^2 t} satisfies the clamped conditions
        const double nu = 1e-2, T = 5.0;
        ComplexVec w_in(65);
        for (int i = 0; i < 65; ++i) w_in[i] = kPi * std::cos(kPi * (ops.nodes()[i] + 1.0));
        auto error_at = [&](double dt) {
            EvolutionConfig cfg;
            cfg.nu = nu;
            cfg.k = 0.0;
            cfg.dt = dt;
            cfg.T = T;
            cfg.omega_in = w_in;
            cfg.store_stride = 1 << 20;  // keep only endpoints
            Evolver ev(ops, nu, 0.0, dt);
            ComplexVec w = w_in;
            const int nsteps = static_cast<int>(std::round(T / dt));
            ComplexVec psi;
            for (int s = 0; s < nsteps; ++s) std::tie(w, psi) = ev.step(w, ComplexVec());
            auto [u1, u2] = velocity_from_stream(ops, psi, 0.0);
            double err = 0;
            for (int i = 0; i < 65; ++i) {
                const double exact = std::sin(kPi * (ops.nodes()[i] + 1.0)) * std::exp(-nu * kPi * kPi * T);
                err = std::max(err, std::abs(u1[i] - exact));
            }
            return err;
        };
        const double e1 = error_at(0.5), e2 = error_at(0.25), e3 = error_at(0.125);
        const double order12 = std::log2(e1 / e2), order23 = std::log2(e2 / e3);
        INFO("errors " << e1 << " " << e2 << " " << e3);
        CHECK(order12 == Catch::Approx(2.0).margin(0.25));
        CHECK(order23 == Catch::Approx(2.0).margin(0.25));
    }

    SECTION("clamped condition and energy identity per step") {
        EvolutionConfig cfg;
        cfg.nu = 1e-2;
        cfg.k = 0.5;
        cfg.omega_in = sine_mode(ops.nodes(), 2).cast<Complex>();
        cfg.track_identities = true;
        auto [traj, led] = evolve(ops, cfg);
        CHECK(led.max_bc_violation < 1e-10);
        CHECK(led.max_energy_residual < 1e-7);
        CHECK(led.sine_chain_violation <= 1e-10);
        CHECK(led.wirtinger_f1_violation <= 1e-10);
    }

    SECTION("low band unforced energy is non-increasing with the sharp budget") {
        EvolutionConfig cfg;
        cfg.nu = 1e-2;
        cfg.k = 0.05;
        cfg.omega_in = sine_mode(ops.nodes(), 1).cast<Complex>();
        cfg.track_identities = true;
        ComplexVec psi0 = poisson_streamfunction(ops, cfg.omega_in, cfg.k);
        auto [u1, u2] = velocity_from_stream(ops, psi0, cfg.k);
        const double uin2 = std::pow(velocity_l2(ops, u1, u2), 2);
        auto [traj, led] = evolve(ops, cfg);
        CHECK(led.energy_budget_sup <= (1.0 + 1e-3) * uin2);
        // u-energy monotone in the low band
        for (size_t i = 1; i < led.u_l2.size(); ++i)
            CHECK(led.u_l2[i] <= led.u_l2[i - 1] * (1.0 + 1e-8));
    }
}

TEST_CASE("elliptic identities on evolved states") {
    auto ops = build_chebyshev(65);
    EvolutionConfig cfg;
    cfg.nu = 1e-2;
    cfg.k = 0.7;
    cfg.omega_in = sine_mode(ops.nodes(), 2).cast<Complex>();
    cfg.store_stride = 50;
    auto [traj, led] = evolve(ops, cfg);
    for (const auto& psi : traj.psi) {
        ComplexVec w = ops.d2() * psi - cfg.k * cfg.k * psi;
        const double lhs = std::pow(ops.l2(ComplexVec(ops.d2() * psi)), 2) +
                           2.0 * cfg.k * cfg.k * std::pow(ops.l2(ComplexVec(ops.d1() * psi)), 2) +
                           std::pow(cfg.k, 4) * std::pow(ops.l2(psi), 2);
        const double rhs = std::pow(ops.l2(w), 2);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs));

        // interpolation bound for the wall-parallel velocity
        ComplexVec dpsi = ops.d1() * psi;
        CHECK(ops.linf(dpsi) <=
              std::sqrt(ops.l2(dpsi)) * std::sqrt(ops.l2(w)) * (1.0 + 1e-9) + 1e-14);
    }
}

TEST_CASE("band space-time estimates") {
    auto ops = build_chebyshev(65);

    SECTION("low band with zero forcing keeps the unit initial coefficient") {
        EvolutionConfig cfg;
        cfg.nu = 1e-2;
        cfg.k = 0.05;
        cfg.omega_in = sine_mode(ops.nodes(), 1).cast<Complex>();
        auto rep = verify_band_estimate(ops, cfg);
        CHECK(rep.band == FrequencyBand::low);
        CHECK(rep.ratio < 20.0);  // full four-term envelope against ||w_in||^2
        CHECK(rep.ledger.energy_budget_sup > 0.0);
    }

    SECTION("intermediate band ratio is stable under refinement") {
        auto run = [&](int n, double dt_scale) {
            auto o = build_chebyshev(n);
            EvolutionConfig cfg;
            cfg.nu = 1e-3;
            cfg.k = 0.5;
            cfg.omega_in = sine_mode(o.nodes(), 2).cast<Complex>();
            cfg.fill_defaults();
            cfg.dt *= dt_scale;
            return verify_band_estimate(o, cfg).ratio;
        };
        const double base = run(65, 1.0);
        const double fine_t = run(65, 0.5);
        const double fine_y = run(129, 1.0);
        INFO("ratios " << base << " " << fine_t << " " << fine_y);
        CHECK(std::abs(base - fine_t) < 0.15 * base);
        CHECK(std::abs(base - fine_y) < 0.15 * base);
    }

    SECTION("high band ratio is finite and stable") {
        auto run = [&](int n, double dt_scale) {
            auto o = build_chebyshev(n);
            EvolutionConfig cfg;
            cfg.nu = 1e-3;
            cfg.k = 2.0;
            cfg.omega_in = sine_mode(o.nodes(), 1).cast<Complex>();
            ComplexVec f2base = sine_mode(o.nodes(), 3).cast<Complex>();
            cfg.f2 = [f2base](double t) { return ComplexVec(std::exp(-0.3 * t) * f2base); };
            cfg.fill_defaults();
            cfg.dt *= dt_scale;
            return verify_band_estimate(o, cfg).ratio;
        };
        const double base = run(65, 1.0);
        const double fine = run(129, 0.5);
        INFO("ratios " << base << " " << fine);
        CHECK(std::isfinite(base));
        CHECK(std::abs(base - fine) < 0.15 * base);
    }
}

TEST_CASE("enhanced dissipation fits") {
    auto ops = build_chebyshev(65);

    SECTION("lambda_nu arithmetic") {
        CHECK(lambda_nu(1e-3, 1.0) == Catch::Approx(0.1));
        CHECK(lambda_nu(1e-2, 0.05) == Catch::Approx(std::pow(1e-2 * 0.05 * 0.05, 1.0 / 3.0)));
    }

    SECTION("rate scales like nu^{1/3} at k = 1") {
        std::vector<double> nus{1e-2, 3e-3, 1e-3};
        std::vector<double> rates;
        for (double nu : nus) {
            EvolutionConfig cfg;
            cfg.nu = nu;
            cfg.k = 1.0;
            cfg.omega_in = sine_mode(ops.nodes(), 1).cast<Complex>();
            auto fit = fit_decay(ops, cfg);
            CHECK(fit.epsilon_eff > 0.0);
            CHECK(fit.r2 > 0.9);
            rates.push_back(fit.rate);
        }
        // log-log slope across the sweep
        const double slope01 = std::log(rates[0] / rates[1]) / std::log(nus[0] / nus[1]);
        const double slope12 = std::log(rates[1] / rates[2]) / std::log(nus[1] / nus[2]);
        INFO("slopes " << slope01 << " " << slope12);
        CHECK(slope01 == Catch::Approx(1.0 / 3.0).margin(0.08));
        CHECK(slope12 == Catch::Approx(1.0 / 3.0).margin(0.08));
    }

    SECTION("low band rate respects the heat floor") {
        EvolutionConfig cfg;
        cfg.nu = 1e-2;
        cfg.k = 0.05;
        cfg.omega_in = sine_mode(ops.nodes(), 1).cast<Complex>();
        auto fit = fit_decay(ops, cfg);
        CHECK(fit.rate >= 0.5 * cfg.nu * kPi * kPi / 4.0);
    }
}

TEST_CASE("homogeneous split") {
    auto ops = build_chebyshev(65);
    EvolutionConfig cfg;
    cfg.nu = 1e-3;
    cfg.k = 0.5;
    cfg.omega_in = sine_mode(ops.nodes(), 2).cast<Complex>();

    auto rep = split_homogeneous(ops, cfg);
    // the phase factor has unit modulus pointwise, so the norm decay is exact
    CHECK(rep.phase_norm_error < 1e-12);
    CHECK(rep.u1_time_integral <= rep.u1_integral_bound * (1.0 + 1e-6));
    CHECK(rep.split_consistency < 1e-2);
    CHECK(std::isfinite(rep.homogeneous.ratio));

    SECTION("projection failure on degenerate data") {
        EvolutionConfig bad = cfg;
        ComplexVec e(65);
        for (int i = 0; i < 65; ++i) e[i] = std::exp(bad.k * ops.nodes()[i]);
        bad.omega_in = e;
        CHECK_THROWS_AS(split_homogeneous(ops, bad), std::invalid_argument);
    }

    SECTION("band precondition") {
        EvolutionConfig bad = cfg;
        bad.k = 2.0;
        CHECK_THROWS_AS(split_homogeneous(ops, bad), std::invalid_argument);
    }
}
