#include "slspec/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "slspec/asymptotics.hpp"
#include "slspec/bc_model.hpp"
#include "slspec/eig_solver.hpp"
#include "slspec/errors.hpp"
#include "slspec/oracle.hpp"
#include "slspec/potential.hpp"
#include "slspec/riesz_diag.hpp"

namespace slspec {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(int v) { return std::to_string(v); }

// Report-friendly shorter form.
std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_c(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
    return buf;
}

class Csv {
public:
    Csv(const fs::path& path, const std::string& header) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot open output file " + path.string());
        out_ << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

class Report {
public:
    void line(const std::string& s = "") {
        body_ += s;
        body_ += "\n";
    }
    void section(const std::string& title) {
        if (!body_.empty()) line();
        line(title);
        line(std::string(title.size(), '-'));
    }
    void write(const fs::path& dir) const {
        std::ofstream out(dir / "report.txt", std::ios::binary);
        if (!out) throw ConfigError("cannot open report.txt in " + dir.string());
        out << body_;
        std::cout << body_;
    }

private:
    std::string body_;
};

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json bc_json(const CanonicalBC& cbc) {
    json j;
    j["family"] = to_string(cbc.family);
    j["sigma"] = cbc.sigma;
    j["p"] = cplx_json(cbc.p);
    j["r"] = cplx_json(cbc.r);
    j["adjoint_form"] = cbc.adjoint_form;
    j["case"] = to_string(classify_case(cbc));
    return j;
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const CanonicalBC* cbc, std::optional<Regime> resolved) {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    if (cfg.raw_bc) {
        const GeneralBC& g = *cfg.raw_bc;
        j["raw_bc"] = {{"a1", cplx_json(g.a1)}, {"b1", cplx_json(g.b1)},
                       {"a0", cplx_json(g.a0)}, {"b0", cplx_json(g.b0)},
                       {"c0", cplx_json(g.c0)}, {"d0", cplx_json(g.d0)}};
    }
    if (cbc) j["bc"] = bc_json(*cbc);
    j["potential"] = {
        {"label", cfg.potential_label},
        {"smoothness",
         cfg.potential.smoothness() == Smoothness::AbsolutelyContinuous ? "ac" : "l1"},
        {"q0", cfg.potential.q0()},
        {"q1", cfg.potential.q1()},
        {"mean_shift", cfg.potential.mean_shift()},
    };
    j["n_range"] = json::array({cfg.n_min, cfg.n_max});
    j["regime_requested"] = cfg.regime ? to_string(*cfg.regime) : "auto";
    if (resolved) j["regime_resolved"] = to_string(*resolved);
    j["tolerances"] = {{"alg", cfg.tol.alg},   {"ode", cfg.tol.ode},
                       {"quad", cfg.tol.quad}, {"eig_scale", cfg.tol.eig_scale},
                       {"mult", cfg.tol.mult}, {"cond", cfg.tol.cond}};
    j["out_dir"] = cfg.out_dir;
    j["threads"] = cfg.threads;
    if (command == "oracle")
        j["oracle"] = {{"N", cfg.oracle_N}, {"n_max", cfg.oracle_n_max}};
    if (cfg.trace_n)
        j["trace"] = {{"n", *cfg.trace_n}, {"samples", cfg.trace_samples}};

    std::ofstream out(fs::path(cfg.out_dir) / "manifest.json", std::ios::binary);
    if (!out) throw ConfigError("cannot open manifest.json in " + cfg.out_dir);
    out << j.dump(2) << "\n";
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

// Windows in index order; batches of `threads` run concurrently, results are
// collected in order so output stays deterministic.
std::vector<WindowResult> solve_windows(const EigenSolver& solver, int n_min,
                                        int n_max, int threads) {
    if (threads <= 1) return solver.solve_range(n_min, n_max);
    std::vector<WindowResult> out;
    for (int base = n_min; base <= n_max; base += threads) {
        const int last = std::min(n_max, base + threads - 1);
        std::vector<std::future<WindowResult>> batch;
        for (int n = base; n <= last; ++n)
            batch.push_back(std::async(std::launch::async,
                                       [&solver, n] { return solver.solve_window(n); }));
        for (auto& f : batch) out.push_back(f.get());
    }
    return out;
}

double bc_residual_of(const EigenSolver& solver, cplx mu) {
    try {
        return solver.eigenfunction(mu).bc_residual;
    } catch (const DegenerateEigenfunction&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

void eig_rows(Csv& csv, const EigenSolver& solver,
              const std::vector<EigenRecord>& eigs) {
    for (const EigenRecord& e : eigs) {
        csv.row({fmt(e.n), fmt(e.j), fmt(e.mu.real()), fmt(e.mu.imag()),
                 fmt(e.lambda.real()), fmt(e.lambda.imag()), fmt(e.multiplicity),
                 fmt(e.det_residual), fmt(bc_residual_of(solver, e.mu))});
    }
}

cplx rect_boundary(const Rect& b, double t) {
    const double w = b.width(), h = b.height();
    double s = t * 2.0 * (w + h);
    if (s < w) return {b.re_lo + s, b.im_lo};
    s -= w;
    if (s < h) return {b.re_hi, b.im_lo + s};
    s -= h;
    if (s < w) return {b.re_hi - s, b.im_hi};
    s -= w;
    return {b.re_lo, b.im_hi - s};
}

void report_conditions(Report& rep, const ConditionSet& cs) {
    const DecayReport& d = cs.cond12;
    rep.line("sine-coefficient decay d_n = n |s_n| (mean-normalized potential):");
    rep.line("  tail median = " + fmt_short(d.tail_median) +
             ", log-log slope = " + fmt_short(d.slope) +
             ", verdict = " + to_string(d.verdict));
    if (cs.cond1314) {
        const EndpointCondition& ec = *cs.cond1314;
        rep.line(std::string("endpoint pairing: lhs = ") + fmt_c(ec.lhs) +
                 ", rhs = " + fmt_c(ec.rhs) + ", holds = " + (ec.holds ? "yes" : "no"));
    } else {
        rep.line("endpoint pairing: not applicable (potential not smooth, zero, "
                 "or the condition is undefined at |p| = 1)");
    }
}

void report_window_summary(Report& rep, const std::vector<WindowResult>& windows) {
    for (const WindowResult& w : windows) {
        std::string line = "n=" + fmt(w.n) + ": winding=" + fmt(w.winding) +
                           ", roots=" + fmt(static_cast<int>(w.eigs.size()));
        for (const EigenRecord& e : w.eigs) {
            line += ", j" + fmt(e.j) + " mu=" + fmt_c(e.mu);
            if (e.multiplicity > 1) line += " (x" + fmt(e.multiplicity) + ")";
            if (e.ambiguous) line += " [ambiguous]";
        }
        rep.line(line);
    }
}

}  // namespace

void cmd_classify(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    Report rep;
    std::optional<CanonicalBC> canon;

    rep.section("boundary condition classification");
    if (cfg.raw_bc) {
        const GeneralBC& g = *cfg.raw_bc;
        rep.line("rows: U1(y) = a1 y'(0) + b1 y'(1) + a0 y(0) + b0 y(1),");
        rep.line("      U2(y) = c0 y(0) + d0 y(1)");
        rep.line("  a1 = " + fmt_c(g.a1) + ", b1 = " + fmt_c(g.b1) +
                 ", a0 = " + fmt_c(g.a0) + ", b0 = " + fmt_c(g.b0));
        rep.line("  c0 = " + fmt_c(g.c0) + ", d0 = " + fmt_c(g.d0));

        const ThetaTriple th = compute_theta(g);
        rep.line("theta_-1 = " + fmt_c(th.theta_m1));
        rep.line("theta_0  = " + fmt_c(th.theta_0));
        rep.line("theta_+1 = " + fmt_c(th.theta_1));
        rep.line("criterion theta_0^2 - 4 theta_1 theta_-1 = " + fmt_c(th.criterion()));

        const BCCase tag = classify_general(g, cfg.tol);
        const bool reducible =
            tag != BCCase::StronglyRegular && tag != BCCase::NotRegular;
        rep.line(std::string("regular but not strongly regular: ") +
                 (reducible ? "yes" : "no"));
        rep.line(std::string("case: ") + to_string(tag));
        if (reducible) canon = reduce_to_canonical(g, cfg.tol);
    } else {
        canon = resolve_bc(cfg);
        rep.line("canonical input; raw coefficients not supplied");
        rep.line(std::string("case: ") + to_string(classify_case(*canon, cfg.tol)));
    }

    if (canon) {
        rep.section("canonical form");
        rep.line(std::string("family = ") + to_string(canon->family) +
                 ", sigma = " + fmt(canon->sigma));
        rep.line("p = " + fmt_c(canon->p) + ", r = " + fmt_c(canon->r));
        rep.line(std::string("adjoint parameterization: ") +
                 (canon->adjoint_form ? "yes" : "no"));

        const CanonicalBC adj = adjoint_of(*canon);
        rep.section("adjoint problem parameters");
        rep.line(std::string("family = ") + to_string(adj.family) +
                 ", sigma = " + fmt(adj.sigma));
        rep.line("p = " + fmt_c(adj.p) + ", r = " + fmt_c(adj.r));
        rep.line(std::string("adjoint parameterization: ") +
                 (adj.adjoint_form ? "yes" : "no"));
    }

    write_manifest(cfg, "classify", canon ? &*canon : nullptr, std::nullopt);
    rep.write(dir);
}

void cmd_eigs(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const CanonicalBC cbc = resolve_bc(cfg);
    EigenSolver solver(cbc, cfg.potential, cfg.regime, cfg.tol);

    const std::vector<EigenRecord> low = solver.sweep_low();
    const std::vector<WindowResult> windows =
        solve_windows(solver, cfg.n_min, cfg.n_max, cfg.threads);

    Csv csv(dir / "eigs.csv",
            "n,j,re_mu,im_mu,re_lambda,im_lambda,multiplicity,det_residual,bc_residual");
    eig_rows(csv, solver, low);
    for (const WindowResult& w : windows) eig_rows(csv, solver, w.eigs);

    Report rep;
    rep.section("low-index sweep [1e-3, 4pi] x [-2pi, 2pi]");
    rep.line("roots found: " + fmt(static_cast<int>(low.size())));
    for (const EigenRecord& e : low) {
        std::string line = "  mu = " + fmt_c(e.mu) + ", lambda = " + fmt_c(e.lambda);
        if (e.multiplicity > 1) line += " (x" + fmt(e.multiplicity) + ")";
        rep.line(line);
    }

    rep.section("windows n = " + fmt(cfg.n_min) + " .. " + fmt(cfg.n_max) +
                " (regime: " + to_string(solver.regime()) + ")");
    report_window_summary(rep, windows);

    if (cfg.trace_n) {
        const Rect box = solver.window(*cfg.trace_n);
        Csv trace(dir / "trace.csv", "re_mu,im_mu,re_delta,im_delta");
        for (int k = 0; k < cfg.trace_samples; ++k) {
            const cplx mu = rect_boundary(box, static_cast<double>(k) / cfg.trace_samples);
            const cplx d = solver.delta(mu);
            trace.row({fmt(mu.real()), fmt(mu.imag()), fmt(d.real()), fmt(d.imag())});
        }
        rep.section("determinant trace");
        rep.line("window n = " + fmt(*cfg.trace_n) + ", " + fmt(cfg.trace_samples) +
                 " boundary samples written to trace.csv");
    }

    write_manifest(cfg, "eigs", &cbc, solver.regime());
    rep.write(dir);
}

void cmd_asym(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const CanonicalBC cbc = resolve_bc(cfg);
    const Potential& q = cfg.potential;

    // Model cascade for this command: smooth potentials with the endpoint
    // pairing satisfied get the smooth corrections; otherwise the rough model
    // applies when the sine coefficients decay; otherwise fall back to the
    // unperturbed lattice and warn.
    Regime regime = Regime::Unperturbed;
    std::string warning;
    std::optional<ConditionSet> conds;
    if (cfg.regime) {
        regime = *cfg.regime;
    } else if (q.is_zero()) {
        regime = Regime::Unperturbed;
    } else {
        conds = evaluate_conditions(q, cbc, cfg.n_min, cfg.n_max, cfg.tol);
        if (conds->cond1314 && conds->cond1314->holds) {
            regime = Regime::AbsolutelyContinuous;
        } else if (conds->cond12.verdict == CondVerdict::Holds) {
            regime = Regime::L1;
        } else {
            regime = Regime::Unperturbed;
            warning = "warning: neither splitting condition verified; "
                      "falling back to unperturbed predictions";
        }
    }

    EigenSolver solver(cbc, q, regime, cfg.tol);
    const std::vector<WindowResult> windows =
        solve_windows(solver, cfg.n_min, cfg.n_max, cfg.threads);

    std::vector<PredictedPair> preds;
    std::vector<cplx> mu1s, mu2s;
    std::vector<int> skipped;
    for (const WindowResult& w : windows) {
        const EigenRecord* e1 = nullptr;
        const EigenRecord* e2 = nullptr;
        for (const EigenRecord& e : w.eigs) {
            if (e.j == 1) e1 = &e;
            if (e.j == 2) e2 = &e;
        }
        if (!e1 || !e2) {
            skipped.push_back(w.n);
            continue;
        }
        preds.push_back(w.predicted);
        mu1s.push_back(e1->mu);
        mu2s.push_back(e2->mu);
    }

    const ResidualTable rt = residual_table(preds, mu1s, mu2s);

    Csv csv(dir / "residuals.csv", "n,j,regime,re_mu,re_mu_pred,abs_r,n_abs_r,n2_abs_r");
    for (std::size_t i = 0; i < rt.n.size(); ++i) {
        const double nn = rt.n[i];
        csv.row({fmt(rt.n[i]), "1", to_string(regime), fmt(mu1s[i].real()),
                 fmt(preds[i].mu1.real()), fmt(rt.res1[i]), fmt(nn * rt.res1[i]),
                 fmt(nn * nn * rt.res1[i])});
        csv.row({fmt(rt.n[i]), "2", to_string(regime), fmt(mu2s[i].real()),
                 fmt(preds[i].mu2.real()), fmt(rt.res2[i]), fmt(nn * rt.res2[i]),
                 fmt(nn * nn * rt.res2[i])});
    }

    Report rep;
    rep.section("asymptotic model");
    rep.line(std::string("regime: ") + to_string(regime) +
             (cfg.regime ? " (forced by config)" : " (auto)"));
    if (!warning.empty()) rep.line(warning);
    if (conds) report_conditions(rep, *conds);
    if (!q.is_zero() && regime != Regime::Unperturbed) {
        const Discriminant d = discriminant(cbc, q);
        rep.line(std::string("discriminant ") + d.name + " = " + fmt_c(d.value) +
                 ", sqrt = " + fmt_c(d.root));
    }

    rep.section("branch residual trends");
    rep.line("windows labeled: " + fmt(static_cast<int>(rt.n.size())));
    if (!skipped.empty()) {
        std::string line = "windows without a labeled simple pair:";
        for (int n : skipped) line += " " + fmt(n);
        rep.line(line);
    }
    rep.line("log-log slope of n |r_1|: " + fmt_short(rt.slope1));
    rep.line("log-log slope of n |r_2|: " + fmt_short(rt.slope2));

    const SimplicityReport sr =
        simplicity_report(cbc, cfg.n_min, cfg.n_max, regime, &q, cfg.tol.mult);
    rep.section("branch separation");
    rep.line("min predicted gap |mu2 - mu1| = " + fmt_short(sr.min_gap) +
             " (threshold " + fmt_short(sr.tau) + ")");
    rep.line(std::string("all windows exceed threshold: ") +
             (sr.all_exceed_tau ? "yes" : "no"));

    write_manifest(cfg, "asym", &cbc, regime);
    rep.write(dir);
}

void cmd_riesz(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const CanonicalBC cbc = resolve_bc(cfg);
    EigenSolver solver(cbc, cfg.potential, cfg.regime, cfg.tol);

    const RieszReport rr = diagnose_riesz(solver, cfg.n_min, cfg.n_max);

    Csv angles(dir / "angles.csv", "n,angle,n_angle");
    for (const PairAngleRecord& a : rr.angles)
        angles.row({fmt(a.n), fmt(a.angle), fmt(a.n * a.angle)});

    // Oscillatory moments of the mean-normalized potential at the condition's
    // frequencies mu_n.
    const Potential qn = normalize_mean(cfg.potential);
    Csv moments(dir / "moments.csv", "n,c,s,n_s");
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        const double mu = cbc.sigma == 1 ? pi * n : (2.0 * n + 1.0) * pi / 2.0;
        const TrigMoment tm = trig_moments(qn, mu, cfg.tol.quad);
        moments.row({fmt(n), fmt(tm.c.real()), fmt(tm.s.real()),
                     fmt(n * tm.s.real())});
    }

    Report rep;
    rep.section("split conditions");
    report_conditions(rep, rr.conditions);

    rep.section("branch pair angles");
    rep.line("pairs formed: " + fmt(static_cast<int>(rr.angles.size())));
    rep.line("angle log-log slope = " + fmt_short(rr.evidence.angle_slope));
    rep.line("first angle = " + fmt_short(rr.evidence.first_angle) +
             ", last angle = " + fmt_short(rr.evidence.last_angle));
    rep.line(std::string("angles trend to zero: ") +
             (rr.evidence.trend_to_zero ? "yes" : "no"));

    rep.section("verdict");
    rep.line(std::string("route: ") + to_string(rr.evidence.route) + " (family " +
             to_string(rr.evidence.family) + ", sigma " + fmt(rr.evidence.sigma) +
             ")");
    if (rr.evidence.route == RieszRoute::RoughSplit)
        rep.line("decay subsequence: stride " + fmt(rr.evidence.stride) +
                 ", offset " + fmt(rr.evidence.offset));
    rep.line(std::string("verdict: ") + to_string(rr.verdict));

    write_manifest(cfg, "riesz", &cbc, solver.regime());
    rep.write(dir);
}

void cmd_oracle(const RunConfig& cfg) {
    const fs::path dir = ensure_out_dir(cfg);
    const CanonicalBC cbc = resolve_bc(cfg);
    EigenSolver solver(cbc, cfg.potential, cfg.regime, cfg.tol);

    const double err_constant = calibrate_error_constant(cbc, cfg.oracle_N);
    const PencilProblem prob = make_pencil(cbc, cfg.potential, cfg.oracle_N);

    Csv csv(dir / "oracle.csv",
            "n,j,re_lambda_solver,im_lambda_solver,re_lambda_oracle,im_lambda_oracle,"
            "abs_diff,error_bar");

    Report rep;
    rep.section("finite-difference cross-check (N = " + fmt(cfg.oracle_N) + ")");
    rep.line("error constant C = " + fmt_short(err_constant) +
             " (bars C h^2 (1 + |lambda|^2))");

    int total = 0, within = 0;
    for (int n = 1; n <= cfg.oracle_n_max; ++n) {
        const WindowResult w = solver.solve_window(n);
        const Rect region = lambda_region(cbc.sigma, n);
        std::vector<cplx> seeds;
        for (const EigenRecord& e : w.eigs) seeds.push_back(e.lambda);
        const std::vector<OracleEig> fd =
            oracle_eigs(prob, region, err_constant, static_cast<int>(seeds.size()),
                        seeds);

        int n_within = 0;
        for (const EigenRecord& e : w.eigs) {
            const OracleEig* best = nullptr;
            for (const OracleEig& oe : fd)
                if (!best || std::abs(oe.lambda - e.lambda) <
                                 std::abs(best->lambda - e.lambda))
                    best = &oe;
            if (!best) continue;
            const double diff = std::abs(best->lambda - e.lambda);
            csv.row({fmt(e.n), fmt(e.j), fmt(e.lambda.real()), fmt(e.lambda.imag()),
                     fmt(best->lambda.real()), fmt(best->lambda.imag()), fmt(diff),
                     fmt(best->error_bar)});
            ++total;
            if (diff <= best->error_bar) {
                ++within;
                ++n_within;
            }
        }
        rep.line("n=" + fmt(n) + ": solver roots " +
                 fmt(static_cast<int>(w.eigs.size())) + ", pencil roots " +
                 fmt(static_cast<int>(fd.size())) + ", within bar " + fmt(n_within));
    }

    rep.section("totals");
    rep.line("compared " + fmt(total) + " eigenvalues, " + fmt(within) +
             " within the discretization error bar");

    write_manifest(cfg, "oracle", &cbc, solver.regime());
    rep.write(dir);
}

}  // namespace slspec
