#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(SLSPEC_CLI_PATH) + " " + args;
    cmd += stdout_file.empty() ? " > /dev/null 2>&1"
                               : " > " + stdout_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

struct Scratch {
    fs::path dir;
    explicit Scratch(const char* name) : dir(fs::path("cli_scratch") / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path file(const char* f) const { return dir / f; }
    std::string out() const { return (dir / "out").string(); }
};

const char* kCanonicalCfg =
    R"({"bc": {"canonical": {"family": "T1", "sigma": 1, "p": 3, "r": 2}}})";

}  // namespace

TEST_CASE("cli: classify from raw coefficients") {
    Scratch s("classify");
    spit(s.file("cfg.json"),
         R"({"bc": {"raw": {"a1": 1, "b1": 2, "a0": 0, "b0": 3, "c0": 1, "d0": -1}}})");
    const int rc = run("classify --config " + s.file("cfg.json").string() + " --out " +
                           s.out(),
                       s.file("stdout.txt").string());
    CHECK(rc == 0);

    const std::string report = slurp(fs::path(s.out()) / "report.txt");
    CHECK(contains(report, "regular but not strongly regular: yes"));
    CHECK(contains(report, "case: General"));
    CHECK(contains(report, "family = T1"));
    CHECK(contains(report, "adjoint parameterization: no"));
    CHECK(contains(report, "adjoint problem parameters"));
    // Report echoes to stdout as well.
    CHECK(contains(slurp(s.file("stdout.txt")), "case: General"));

    const json manifest = json::parse(slurp(fs::path(s.out()) / "manifest.json"));
    CHECK(manifest.at("version").get<std::string>() == "1.0.0");
    CHECK(manifest.at("command").get<std::string>() == "classify");
    CHECK(manifest.at("bc").at("family").get<std::string>() == "T1");
    CHECK(manifest.at("bc").at("p")[0].get<double>() == doctest::Approx(2.0));
    CHECK(manifest.at("raw_bc").at("b0")[0].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("cli: eigenvalue runs are deterministic and honour overrides") {
    Scratch s("eigs");
    spit(s.file("cfg.json"), kCanonicalCfg);
    const std::string base = "eigs --config " + s.file("cfg.json").string() +
                             " --n-min 5 --n-max 6 --out " + s.out();
    REQUIRE(run(base) == 0);
    const std::string first = slurp(fs::path(s.out()) / "eigs.csv");

    // Header plus 4 sweep rows plus 2 windows x 2 roots.
    CHECK(count_lines(first) == 9);
    CHECK(contains(first,
                   "n,j,re_mu,im_mu,re_lambda,im_lambda,multiplicity,det_residual,"
                   "bc_residual"));

    const json manifest = json::parse(slurp(fs::path(s.out()) / "manifest.json"));
    CHECK(manifest.at("command").get<std::string>() == "eigs");
    CHECK(manifest.at("n_range")[0].get<int>() == 5);
    CHECK(manifest.at("n_range")[1].get<int>() == 6);
    CHECK(manifest.at("regime_requested").get<std::string>() == "auto");
    CHECK(manifest.at("regime_resolved").get<std::string>() == "unperturbed");

    // Byte-identical on a second run.
    REQUIRE(run(base) == 0);
    CHECK(slurp(fs::path(s.out()) / "eigs.csv") == first);
}

TEST_CASE("cli: determinant trace emission") {
    Scratch s("trace");
    spit(s.file("cfg.json"),
         R"({"bc": {"canonical": {"p": 3, "r": 2}}, "n_range": [5, 5],
             "trace": {"n": 5, "samples": 32}})");
    REQUIRE(run("eigs --config " + s.file("cfg.json").string() + " --out " + s.out()) ==
            0);
    const std::string trace = slurp(fs::path(s.out()) / "trace.csv");
    CHECK(contains(trace, "re_mu,im_mu,re_delta,im_delta"));
    CHECK(count_lines(trace) == 33);
}

TEST_CASE("cli: asymptotic residual comparison") {
    Scratch s("asym");
    spit(s.file("cfg.json"), kCanonicalCfg);
    REQUIRE(run("asym --config " + s.file("cfg.json").string() +
                " --n-min 5 --n-max 8 --out " + s.out()) == 0);
    const std::string csv = slurp(fs::path(s.out()) / "residuals.csv");
    CHECK(contains(csv, "n,j,regime,re_mu,re_mu_pred,abs_r,n_abs_r,n2_abs_r"));
    CHECK(count_lines(csv) == 9);  // header + 4 windows x 2 branches
    CHECK(contains(csv, ",unperturbed,"));
    const std::string report = slurp(fs::path(s.out()) / "report.txt");
    CHECK(contains(report, "branch residual trends"));
    CHECK(contains(report, "branch separation"));
}

TEST_CASE("cli: riesz diagnosis of the cosine potential") {
    Scratch s("riesz");
    spit(s.file("cfg.json"),
         R"({"bc": {"canonical": {"p": 3, "r": 2}},
             "potential": {"kind": "cosine", "k": 1}})");
    REQUIRE(run("riesz --config " + s.file("cfg.json").string() +
                    " --n-min 5 --n-max 12 --out " + s.out(),
                s.file("stdout.txt").string()) == 0);
    const std::string out = slurp(s.file("stdout.txt"));
    CHECK(contains(out, "verdict: FailsRieszBasis"));
    CHECK(contains(out, "route: rough-split"));
    const std::string angles = slurp(fs::path(s.out()) / "angles.csv");
    CHECK(contains(angles, "n,angle,n_angle"));
    CHECK(count_lines(angles) == 9);
    const std::string moments = slurp(fs::path(s.out()) / "moments.csv");
    CHECK(count_lines(moments) == 9);
}

TEST_CASE("cli: oracle cross-check on a coarse grid") {
    Scratch s("oracle");
    spit(s.file("cfg.json"),
         R"({"bc": {"canonical": {"p": 3, "r": 2}}, "oracle": {"N": 200, "n_max": 1}})");
    REQUIRE(run("oracle --config " + s.file("cfg.json").string() + " --out " + s.out(),
                s.file("stdout.txt").string()) == 0);
    const std::string report = slurp(fs::path(s.out()) / "report.txt");
    CHECK(contains(report, "within the discretization error bar"));
    CHECK(contains(report, "compared 2 eigenvalues, 2 within"));
    const std::string csv = slurp(fs::path(s.out()) / "oracle.csv");
    CHECK(count_lines(csv) == 3);
    const json manifest = json::parse(slurp(fs::path(s.out()) / "manifest.json"));
    CHECK(manifest.at("oracle").at("N").get<int>() == 200);
}

TEST_CASE("cli: usage and configuration failures exit with 2") {
    Scratch s("fail2");
    CHECK(run("eigs --config does_not_exist.json") == 2);
    CHECK(run("") == 2);                  // missing subcommand
    CHECK(run("frobnicate --config x") == 2);  // unknown subcommand
    CHECK(run("--help") == 0);

    spit(s.file("bad.json"), "{ not json");
    CHECK(run("eigs --config " + s.file("bad.json").string()) == 2);

    spit(s.file("cfg.json"), kCanonicalCfg);
    CHECK(run("eigs --config " + s.file("cfg.json").string() + " --unknown-flag 3") ==
          2);
    CHECK(run("eigs --config " + s.file("cfg.json").string() +
              " --n-min 9 --n-max 5") == 2);
}

TEST_CASE("cli: numerical contract violations exit with 3") {
    Scratch s("fail3");
    // p = 1 passes config validation but violates the regularity constraint
    // used by the sigma = 1 splitting formulas at solve time.
    spit(s.file("cfg.json"), R"({"bc": {"canonical": {"p": 1, "r": 2}}})");
    CHECK(run("eigs --config " + s.file("cfg.json").string() +
              " --n-min 5 --n-max 5 --out " + s.out()) == 3);
}
