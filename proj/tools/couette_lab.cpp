// couette-lab: command-line driver for the verification campaigns.
//
// Subcommands: airy-selftest, resolvent-scan, homog-verify, evolve,
// dissipation-sweep, threshold-scan, bilinear-check. Parameters are
// key=value tokens (or --manifest FILE); every output embeds the manifest.
// Exit codes: 0 pass, 2 schema violation, 3 numerical failure,
// 4 budget exhaustion.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "couette/bilinear.hpp"
#include "couette/evolution.hpp"
#include "couette/homogeneous.hpp"
#include "couette/report.hpp"

using namespace couette;

namespace {

struct ExitCodes {
    static constexpr int ok = 0, schema = 2, numerical = 3, budget = 4;
};

struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_outputs(const RunManifest& m, const CampaignReport& rep,
                   const std::vector<std::pair<std::string, std::string>>& files) {
    namespace fs = std::filesystem;
    nlohmann::ordered_json j = report_json(m, rep);
    if (!m.fixed_epoch) {
        j["wall_clock"] = std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
    }
    atomic_write((fs::path(m.output_dir) / (m.subcommand + ".json")).string(), j.dump(2) + "\n");
    for (const auto& [name, content] : files)
        atomic_write((fs::path(m.output_dir) / name).string(), content);
    std::cout << render_text(rep);
}

int finish(const RunManifest& m, const CampaignReport& rep,
           const std::vector<std::pair<std::string, std::string>>& files = {}) {
    write_outputs(m, rep, files);
    return rep.aggregate_pass() ? ExitCodes::ok : ExitCodes::numerical;
}

// ---------------------------------------------------------------------------

int run_airy_selftest(const RunManifest& m) {
    m.validate_keys({"grid_points"});
    const int pts = static_cast<int>(m.get_int("grid_points", 120));
    CampaignReport rep;

    rep.add("ai.origin", "Ai(0)=3^{-2/3}/Gamma(2/3)",
            std::abs(ai_value({0, 0}).real() - 0.35502805388781723926), 1e-10);
    rep.add("ai.origin_derivative", "Ai'(0)=-3^{-1/3}/Gamma(1/3)",
            std::abs(ai_complex({0, 0}).aip.to_complex().real() + 0.25881940379280679841), 1e-10);
    rep.add("a0.origin", "A0(0)=1/3",
            std::abs(a0({0, 0}).a0.to_complex() - Complex(1.0 / 3.0, 0)), 1e-9);

    // oracle agreement on a deterministic spiral of points
    double worst_oracle = 0;
    for (int i = 0; i < pts; ++i) {
        const double r = 0.5 + 19.5 * i / (pts - 1.0);
        const double a = -0.95 * kPi + 1.9 * kPi * ((i * 7) % pts) / double(pts);
        const Complex z = std::polar(r, a);
        ScaledC prod = ai_complex(z).ai;
        ScaledC orac = ai_quadrature_oracle(z);
        ScaledC d = prod - orac;
        if (!d.is_zero())
            worst_oracle = std::max(
                worst_oracle, std::exp(d.log_abs() - std::max(prod.log_abs(), orac.log_abs())));
    }
    rep.add("ai.oracle_agreement", "contour-integral oracle, |z|<=20", worst_oracle, 1e-10);

    auto ar = a_of_delta(0.0);
    rep.add("a0.log_derivative_sup", "a(0)=-0.4843", std::abs(ar.value + 0.4843), 5e-4);
    rep.add("a0.rate_admissible", "a(0) < -0.47 admits rate 0.47", ar.value, -0.47);

    // log-derivative bounds on the sampled lower half plane
    double worst_mod = 0, worst_re = -1e300;
    for (int i = 0; i < pts; ++i) {
        const double re = -30.0 + 60.0 * ((i * 13) % pts) / double(pts);
        const double im = -30.0 * i / double(pts);
        const Complex z(re, im);
        if (std::abs(z) > 30.0) continue;
        const Complex ld = log_derivative_a0(z);
        const double s = 1.0 + std::sqrt(std::abs(z));
        worst_mod = std::max(worst_mod, std::abs(ld) / s);
        worst_re = std::max(worst_re, ld.real() / s);
    }
    rep.add("a0.log_derivative_modulus", "|A0'/A0| <= 1+|z|^{1/2}", worst_mod, 1.0 + 1e-9);
    rep.add("a0.log_derivative_real", "Re A0'/A0 <= -c(1+|z|^{1/2})", worst_re, -1e-6);

    // eta decay at rate 0.47 over the sampled region
    double worst_eta = 0;
    for (int i = 0; i < pts; ++i) {
        const double re = -10.0 + 20.0 * ((i * 11) % pts) / double(pts);
        const double im = -4.0 * i / double(pts);
        const double x = 10.0 * ((i * 3) % pts) / double(pts);
        const Complex e = eta(Complex(re, im), x).eta;
        worst_eta = std::max(worst_eta, std::abs(e) * std::exp(0.47 * x));
    }
    rep.add("eta.decay", "|eta(z,x)| <= exp(-0.47 x), Im z <= 0", worst_eta, 1.0 + 1e-9);
    return finish(m, rep);
}

// ---------------------------------------------------------------------------

int run_resolvent_scan(const RunManifest& m) {
    m.validate_keys({"nu", "k", "eps", "lambda_min", "lambda_max", "n"});
    const double nu = m.get_real("nu", 1e-3);
    const double k = m.get_real("k", 0.5);
    const double eps = m.get_real("eps", 0.0);
    const int n = static_cast<int>(m.get_int("n", 129));
    auto ops = build_chebyshev(n);
    auto grid = lambda_grid(nu, k, m.get_real("lambda_min", -3.0), m.get_real("lambda_max", 3.0));
    auto ens = forcing_ensemble(ops, std::pow(nu / std::abs(k), 1.0 / 3.0), m.seed);
    auto report = scan_lambda(ops, nu, k, eps, grid, ens, m.workers);

    CampaignReport rep;
    for (const auto& [id, env] : report.envelopes)
        rep.add("envelope." + id, "empirical resolvent constant", env.worst_ratio, 1e9, true,
                "argmax lambda=" + CsvWriter::num(env.worst_lambda) + " forcing=" + env.worst_forcing);
    rep.add("scan.failures", "per-point solver failures", report.failures, 0.5);
    double worst_res = 0;
    for (const auto& r : report.rows) worst_res = std::max(worst_res, r.residual);
    rep.add("scan.residual", "componentwise solve residual", worst_res, 1e-8);

    CsvWriter csv(m, {"nu", "k", "lambda", "bc", "forcing_id", "u_l2", "w_l1", "w_l2", "wprime_l2",
                      "ylam_w_l2", "rho_half_w_l2", "rho_mquarter_w_l2", "f_l2", "f_hminus1",
                      "residual"});
    for (const auto& r : report.rows)
        csv.row({CsvWriter::num(nu), CsvWriter::num(k), CsvWriter::num(r.lambda),
                 r.bc == BoundaryKind::navier_slip ? "slip" : "clamp", r.forcing_id,
                 CsvWriter::num(r.norms.u_l2), CsvWriter::num(r.norms.w_l1),
                 CsvWriter::num(r.norms.w_l2), CsvWriter::num(r.norms.wprime_l2),
                 CsvWriter::num(r.norms.ylam_w_l2), CsvWriter::num(r.norms.rho_half_w_l2),
                 CsvWriter::num(r.norms.rho_mquarter_w_l2), CsvWriter::num(r.f_l2),
                 CsvWriter::num(r.f_hminus1), CsvWriter::num(r.residual)});
    return finish(m, rep, {{"resolvent-scan.csv", csv.str()}});
}

// ---------------------------------------------------------------------------

int run_homog_verify(const RunManifest& m) {
    m.validate_keys({"nu", "k", "eps", "lambda_min", "lambda_max", "lambda_step", "n"});
    const double nu = m.get_real("nu", 1e-2);
    const double k = m.get_real("k", 0.5);
    const double eps = m.get_real("eps", 0.0);
    const double lo = m.get_real("lambda_min", -3.0), hi = m.get_real("lambda_max", 3.0);
    const double step = m.get_real("lambda_step", 0.05);
    const int n = static_cast<int>(m.get_int("n", 129));
    auto ops = build_chebyshev(n);

    std::vector<double> lambdas;
    for (double la = lo; la <= hi + 1e-12; la += step) lambdas.push_back(la);

    struct Row {
        double lambda, det_margin, d1_margin, ratio_margin, det_vs_a0, b1, b2;
    };
    std::vector<Row> rows(lambdas.size());
    parallel_for(
        static_cast<int>(lambdas.size()),
        [&](int i) {
            auto b = build_bundle(nu, k, lambdas[i], eps);
            auto e = eta_form_d1(nu, k, lambdas[i], eps);
            rows[i] = {lambdas[i], b.det_margin, e.d1_margin, e.ratio_margin, b.det_vs_a0,
                       b.b1_lower_margin, b.b2_lower_margin};
        },
        m.workers);

    CampaignReport rep;
    double min_det = 1e300, min_d1 = 1e300, min_b = 1e300, min_ratio = 1e300;
    for (const auto& r : rows) {
        min_det = std::min(min_det, r.det_margin);
        min_d1 = std::min(min_d1, r.d1_margin);
        min_ratio = std::min(min_ratio, r.ratio_margin);
        min_b = std::min(min_b, std::min(r.b1, r.b2));
    }
    rep.add("det.lower_bound", "|A1A2-B1B2| >= 0.002 e^{-4} |k||B1B2|", 1.0, min_det);
    rep.add("det.eta_form_d1", "|D1| >= 0.02 k", 1.0, min_d1);
    rep.add("det.eta_form_ratio", "|D1/D2| >= 0.002 e^{-4} k", 1.0, min_ratio);
    rep.add("moments.b_lower", "|B_i| L / |A0| >= 0.5", 0.5, min_b);

    CsvWriter csv(m, {"lambda", "det_margin", "d1_margin", "ratio_margin", "det_vs_a0",
                      "b1_margin", "b2_margin"});
    for (const auto& r : rows)
        csv.row({CsvWriter::num(r.lambda), CsvWriter::num(r.det_margin), CsvWriter::num(r.d1_margin),
                 CsvWriter::num(r.ratio_margin), CsvWriter::num(r.det_vs_a0), CsvWriter::num(r.b1),
                 CsvWriter::num(r.b2)});
    return finish(m, rep, {{"homog-verify.csv", csv.str()}});
}

// ---------------------------------------------------------------------------

ComplexVec omega_in_by_id(const SpectralOperatorSet& ops, const std::string& id) {
    for (auto& f : omega_in_ensemble(ops))
        if (f.id == id) return f.values;
    throw SchemaError("unknown omega_in '" + id + "'");
}

int run_evolve(const RunManifest& m) {
    m.validate_keys({"nu", "k", "dt", "T", "n", "omega_in"});
    const int n = static_cast<int>(m.get_int("n", 129));
    auto ops = build_chebyshev(n);
    EvolutionConfig cfg;
    cfg.nu = m.get_real("nu", 1e-3);
    cfg.k = m.get_real("k", 0.5);
    cfg.dt = m.get_real("dt", 0.0);
    cfg.T = m.get_real("T", 0.0);
    cfg.omega_in = omega_in_by_id(ops, m.has("omega_in") ? m.params.at("omega_in") : "sine1");
    cfg.track_identities = true;
    auto band = verify_band_estimate(ops, cfg);

    CampaignReport rep;
    rep.add("evolve.bc", "psi'(+-1) = 0 after correction", band.ledger.max_bc_violation, 1e-10);
    rep.add("evolve.energy_identity", "per-step energy identity",
            band.ledger.max_energy_residual, 1e-7);
    rep.add("evolve.band_ratio", "space-time estimate ratio", band.ratio, 1e9, true);

    CsvWriter csv(m, {"t", "u_l2", "w_l2"});
    for (size_t i = 0; i < band.ledger.t.size(); ++i)
        csv.row({CsvWriter::num(band.ledger.t[i]), CsvWriter::num(band.ledger.u_l2[i]),
                 CsvWriter::num(band.ledger.w_l2[i])});
    return finish(m, rep, {{"evolve.csv", csv.str()}});
}

// ---------------------------------------------------------------------------

int run_dissipation_sweep(const RunManifest& m) {
    m.validate_keys({"nu_list", "k_list", "n"});
    const int n = static_cast<int>(m.get_int("n", 129));
    auto ops = build_chebyshev(n);
    auto nus = m.get_real_list("nu_list", {1e-2, 3e-3, 1e-3});
    auto ks = m.get_real_list("k_list", {0.1, 0.5, 1.0, 2.0});

    struct Row {
        double nu, k, rate, lnv, eps_eff, r2;
    };
    std::vector<Row> rows;
    for (double k : ks)
        for (double nu : nus) {
            if (std::abs(k) < 10.0 * nu) continue;
            EvolutionConfig cfg;
            cfg.nu = nu;
            cfg.k = k;
            cfg.omega_in = sine_mode(ops.nodes(), 1).cast<Complex>();
            auto fit = fit_decay(ops, cfg);
            rows.push_back({nu, k, fit.rate, fit.lambda_nu_val, fit.epsilon_eff, fit.r2});
        }

    CampaignReport rep;
    double min_eps = 1e300, worst_band_spread = 0;
    for (double k : ks) {
        double lo = 1e300, hi = 0;
        for (const auto& r : rows)
            if (r.k == k) {
                lo = std::min(lo, r.eps_eff);
                hi = std::max(hi, r.eps_eff);
                min_eps = std::min(min_eps, r.eps_eff);
            }
        if (hi > 0) worst_band_spread = std::max(worst_band_spread, hi / lo);
    }
    rep.add("dissipation.positive", "epsilon_eff > 0 across the sweep", -min_eps, -1e-6);
    rep.add("dissipation.uniformity", "eps_eff spread <= 2 at fixed k", worst_band_spread, 2.0);
    for (const auto& r : rows)
        rep.add("fit.quality(nu=" + CsvWriter::num(r.nu) + ",k=" + CsvWriter::num(r.k) + ")",
                "log-linear tail fit", 0.98, r.r2, true);

    CsvWriter csv(m, {"nu", "k", "rate", "lambda_nu", "epsilon_eff", "r2"});
    for (const auto& r : rows)
        csv.row({CsvWriter::num(r.nu), CsvWriter::num(r.k), CsvWriter::num(r.rate),
                 CsvWriter::num(r.lnv), CsvWriter::num(r.eps_eff), CsvWriter::num(r.r2)});
    return finish(m, rep, {{"dissipation-sweep.csv", csv.str()}});
}

// ---------------------------------------------------------------------------

int run_threshold_scan(const RunManifest& m) {
    m.validate_keys({"nu_list", "gamma_list", "c_amp", "x_modes", "y_nodes", "Lx_over_pi",
                     "budget_seconds"});
    auto nus = m.get_real_list("nu_list", {1e-2, 3e-3});
    auto gammas = m.get_real_list("gamma_list", {0.5});
    const double c_amp = m.get_real("c_amp", 0.05);
    const double budget = m.get_real("budget_seconds", 3300.0);

    NonlinearConfig base;
    base.x_modes = static_cast<int>(m.get_int("x_modes", 256));
    base.y_nodes = static_cast<int>(m.get_int("y_nodes", 65));
    base.Lx = m.get_real("Lx_over_pi", 8.0) * kPi;
    auto ops = build_chebyshev(base.y_nodes);

    CampaignReport rep;
    CsvWriter csv(m, {"nu", "gamma", "c_amp", "verdict", "initial_h2", "peak_aggregate",
                      "ek_l1", "ek_l1_over_sqrt_nu", "steps"});
    bool budget_hit = false;
    for (double nu : nus) {
        if (base.dk() >= 10.0 * nu)
            std::cerr << "note: dk = " << base.dk() << " leaves the band |k| < " << 10.0 * nu
                      << " unpopulated\n";
        for (double gamma : gammas) {
            NonlinearConfig cfg = base;
            cfg.nu = nu;
            auto rec = threshold_scan_single(ops, cfg, gamma, c_amp, budget);
            budget_hit |= rec.verdict == "inconclusive";
            rep.add("stable(nu=" + CsvWriter::num(nu) + ",gamma=" + CsvWriter::num(gamma) + ")",
                    "nonlinear stability verdict", rec.verdict == "stable" ? 0.0 : 1.0, 0.5);
            rep.add("ek_envelope(nu=" + CsvWriter::num(nu) + ")", "||E_k||_{L1}/nu^{1/2}",
                    rec.ek_l1_over_sqrt_nu, 1e9, true);
            csv.row({CsvWriter::num(nu), CsvWriter::num(gamma), CsvWriter::num(c_amp), rec.verdict,
                     CsvWriter::num(rec.initial_h2), CsvWriter::num(rec.peak_aggregate),
                     CsvWriter::num(rec.ek_l1), CsvWriter::num(rec.ek_l1_over_sqrt_nu),
                     CsvWriter::num(rec.steps)});
        }
    }
    int code = finish(m, rep, {{"threshold-scan.csv", csv.str()}});
    if (budget_hit) return ExitCodes::budget;
    return code;
}

// ---------------------------------------------------------------------------

int run_bilinear_check(const RunManifest& m) {
    m.validate_keys({"nu", "samples", "with_simulation", "x_modes", "y_nodes"});
    const double nu = m.get_real("nu", 1e-2);
    const int samples = static_cast<int>(m.get_int("samples", 200));
    CampaignReport rep;
    for (const auto& q : verify_region_inequalities(nu, samples)) {
        rep.add("region." + q.id, "interaction-region scalar inequality", q.worst, q.constant,
                false, "violations=" + std::to_string(q.violations));
    }
    std::vector<std::pair<std::string, std::string>> files;
    if (m.get_int("with_simulation", 1)) {
        NonlinearConfig cfg;
        cfg.nu = nu;
        cfg.x_modes = static_cast<int>(m.get_int("x_modes", 128));
        cfg.y_nodes = static_cast<int>(m.get_int("y_nodes", 65));
        cfg.track_flux_norms = true;
        cfg.fill_defaults();
        auto ops = build_chebyshev(cfg.y_nodes);
        NonlinearSolver solver(ops, cfg);
        FlowState seed = make_seed(solver, 0.05 * std::sqrt(nu));
        auto rr = solver.run(std::move(seed));
        auto br = bilinear_region_check(rr, cfg);
        rep.add("flux.f1_dominated", "measured f1 norm <= assembled nine-region bound",
                br.measured_f1, br.assembled_f1);
        rep.add("flux.f2_dominated", "measured f2 norm <= Hardy-route bound", br.measured_f2,
                br.assembled_f2);
        CsvWriter csv(m, {"region", "share_of_assembled"});
        for (auto& [id, v] : br.region_share) csv.row({id, CsvWriter::num(v)});
        files.push_back({"bilinear-regions.csv", csv.str()});
    }
    return finish(m, rep, files);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for channel-flow stability estimates"};
    app.require_subcommand(1);

    std::string out_dir = ".", manifest_file;
    std::uint64_t seed = 20240915;
    int workers = 0, n_override = 0;
    bool fixed_epoch = false;

    const std::vector<std::string> names = {"airy-selftest",     "resolvent-scan", "homog-verify",
                                            "evolve",            "dissipation-sweep",
                                            "threshold-scan",    "bilinear-check"};
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        sub->allow_extras();  // key=value parameter tokens
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--workers", workers, "worker threads (0 = hardware)");
        sub->add_option("--n", n_override, "resolution override");
        sub->add_flag("--fixed-epoch", fixed_epoch, "omit wall-clock fields for byte-stable output");
        sub->add_option("--manifest", manifest_file, "manifest file of key=value lines");
        subs[name] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        RunManifest m = manifest_file.empty()
                            ? RunManifest::from_tokens(active->get_name(), active->remaining())
                            : RunManifest::from_file(active->get_name(), manifest_file);
        for (const auto& extra : manifest_file.empty()
                                     ? std::vector<std::string>{}
                                     : active->remaining()) {
            const auto eq = extra.find('=');
            if (eq == std::string::npos) throw SchemaError("expected key=value: " + extra);
            m.params[extra.substr(0, eq)] = extra.substr(eq + 1);
        }
        m.output_dir = out_dir;
        m.seed = seed;
        m.workers = workers;
        m.fixed_epoch = fixed_epoch;
        if (n_override > 0) m.params["n"] = std::to_string(n_override);

        const std::string& name = m.subcommand;
        if (name == "airy-selftest") return run_airy_selftest(m);
        if (name == "resolvent-scan") return run_resolvent_scan(m);
        if (name == "homog-verify") return run_homog_verify(m);
        if (name == "evolve") return run_evolve(m);
        if (name == "dissipation-sweep") return run_dissipation_sweep(m);
        if (name == "threshold-scan") return run_threshold_scan(m);
        if (name == "bilinear-check") return run_bilinear_check(m);
        throw SchemaError("unknown subcommand " + name);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return ExitCodes::schema;
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return ExitCodes::budget;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return ExitCodes::numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCodes::numerical;
    }
}
