#include "slspec/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slspec/errors.hpp"

namespace slspec {
namespace {

using nlohmann::json;

cplx parse_cplx(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(std::string(what) + " must be a number or [re, im]");
}

Potential parse_potential(const json& j, std::string& label) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("potential block needs a kind");
    const std::string kind = j.at("kind").get<std::string>();
    label = kind;
    if (kind == "zero") return Potential::zero();
    if (kind == "cosine" || kind == "sine") {
        const int k = j.value("k", 1);
        if (k < 1) throw ConfigError("harmonic index k must be >= 1");
        label += "_" + std::to_string(k);
        return kind == "cosine" ? Potential::cosine(k) : Potential::sine(k);
    }
    if (kind == "sawtooth") return Potential::sawtooth();
    if (kind == "smoothed-step") {
        const double w = j.value("width", 0.05);
        if (!(w > 0.0)) throw ConfigError("smoothed-step width must be positive");
        return Potential::smoothed_step(w);
    }
    if (kind == "polynomial") {
        if (!j.contains("coeffs") || !j.at("coeffs").is_array())
            throw ConfigError("polynomial potential needs a coeffs array");
        std::vector<double> c;
        for (const auto& e : j.at("coeffs")) c.push_back(e.get<double>());
        if (c.empty()) throw ConfigError("polynomial coeffs must be nonempty");
        return Potential::polynomial(std::move(c));
    }
    if (kind == "samples") {
        if (!j.contains("values") || !j.at("values").is_array())
            throw ConfigError("sampled potential needs a values array");
        std::vector<double> v;
        for (const auto& e : j.at("values")) v.push_back(e.get<double>());
        if (v.size() < 2) throw ConfigError("sampled potential needs >= 2 values");
        const std::string s = j.value("smoothness", "l1");
        Smoothness sm;
        if (s == "l1")
            sm = Smoothness::L1;
        else if (s == "ac" || s == "absolutely-continuous")
            sm = Smoothness::AbsolutelyContinuous;
        else
            throw ConfigError("smoothness must be l1 or ac");
        return Potential::from_samples(std::move(v), sm);
    }
    throw ConfigError("unknown potential kind: " + kind);
}

GeneralBC parse_raw_bc(const json& j) {
    for (const char* key : {"a1", "b1", "a0", "b0", "c0", "d0"})
        if (!j.contains(key)) throw ConfigError(std::string("raw bc misses ") + key);
    return {parse_cplx(j.at("a1"), "a1"), parse_cplx(j.at("b1"), "b1"),
            parse_cplx(j.at("a0"), "a0"), parse_cplx(j.at("b0"), "b0"),
            parse_cplx(j.at("c0"), "c0"), parse_cplx(j.at("d0"), "d0")};
}

CanonicalBC parse_canonical_bc(const json& j) {
    CanonicalBC c;
    const std::string fam = j.value("family", "T1");
    if (fam == "T1")
        c.family = Family::T1;
    else if (fam == "T2")
        c.family = Family::T2;
    else
        throw ConfigError("family must be T1 or T2");
    c.sigma = j.value("sigma", 1);
    if (c.sigma != 0 && c.sigma != 1) throw ConfigError("sigma must be 0 or 1");
    if (!j.contains("p") || !j.contains("r"))
        throw ConfigError("canonical bc needs p and r");
    c.p = parse_cplx(j.at("p"), "p");
    c.r = parse_cplx(j.at("r"), "r");
    c.adjoint_form = j.value("adjoint_form", false);
    return c;
}

std::optional<Regime> parse_regime(const json& j) {
    const std::string s = j.get<std::string>();
    if (s == "auto") return std::nullopt;
    if (s == "unperturbed") return Regime::Unperturbed;
    if (s == "l1") return Regime::L1;
    if (s == "ac" || s == "absolutely-continuous") return Regime::AbsolutelyContinuous;
    throw ConfigError("regime must be auto, unperturbed, l1, or ac");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    try {
        RunConfig cfg;
        if (!j.is_object()) throw ConfigError("config root must be an object");
        if (j.contains("bc")) {
            const json& b = j.at("bc");
            if (b.contains("raw")) cfg.raw_bc = parse_raw_bc(b.at("raw"));
            if (b.contains("canonical"))
                cfg.canonical_bc = parse_canonical_bc(b.at("canonical"));
            if (cfg.raw_bc && cfg.canonical_bc)
                throw ConfigError("give bc.raw or bc.canonical, not both");
        }
        if (j.contains("potential"))
            cfg.potential = parse_potential(j.at("potential"), cfg.potential_label);
        if (j.contains("n_range")) {
            const json& r = j.at("n_range");
            if (!r.is_array() || r.size() != 2)
                throw ConfigError("n_range must be [n_min, n_max]");
            cfg.n_min = r[0].get<int>();
            cfg.n_max = r[1].get<int>();
        }
        if (cfg.n_min < 1 || cfg.n_max < cfg.n_min)
            throw ConfigError("n_range must be nonempty with n_min >= 1");
        if (j.contains("regime")) cfg.regime = parse_regime(j.at("regime"));
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            cfg.tol.ode = t.value("ode", cfg.tol.ode);
            cfg.tol.quad = t.value("quad", cfg.tol.quad);
            cfg.tol.eig_scale = t.value("eig", cfg.tol.eig_scale);
            if (!(cfg.tol.ode > 0.0) || !(cfg.tol.quad > 0.0) || !(cfg.tol.eig_scale > 0.0))
                throw ConfigError("tolerances must be positive");
        }
        cfg.out_dir = j.value("out", cfg.out_dir);
        if (j.contains("oracle")) {
            const json& o = j.at("oracle");
            cfg.oracle_N = o.value("N", cfg.oracle_N);
            cfg.oracle_n_max = o.value("n_max", cfg.oracle_n_max);
            if (cfg.oracle_N < 8 || cfg.oracle_n_max < 1)
                throw ConfigError("oracle block invalid");
        }
        if (j.contains("trace")) {
            const json& t = j.at("trace");
            cfg.trace_n = t.value("n", 10);
            cfg.trace_samples = t.value("samples", 512);
            if (*cfg.trace_n < 1 || cfg.trace_samples < 16)
                throw ConfigError("trace block invalid");
        }
        cfg.threads = j.value("threads", 1);
        if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

CanonicalBC resolve_bc(const RunConfig& cfg) {
    if (cfg.canonical_bc) return *cfg.canonical_bc;
    if (cfg.raw_bc) return reduce_to_canonical(*cfg.raw_bc, cfg.tol);
    throw ConfigError("config has no bc block");
}

}  // namespace slspec
