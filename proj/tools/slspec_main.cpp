#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "slspec/commands.hpp"
#include "slspec/config.hpp"
#include "slspec/errors.hpp"

namespace {

using Cmd = void (*)(const slspec::RunConfig&);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenvalue and Riesz-basis diagnostics for -y'' + q(x) y = mu^2 y "
                 "on [0,1] with two-point boundary conditions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int n_min = -1, n_max = -1, threads = 0;
    Cmd chosen = nullptr;

    auto add = [&](const char* name, const char* desc, Cmd fn) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--n-min", n_min, "lowest window index (overrides config)");
        sub->add_option("--n-max", n_max, "highest window index (overrides config)");
        sub->add_option("--threads", threads, "parallel window workers (overrides config)");
        sub->callback([&chosen, fn] { chosen = fn; });
    };

    add("classify", "classify boundary conditions and print canonical parameters",
        &slspec::cmd_classify);
    add("eigs", "locate eigenvalues over the window range plus the low-index sweep",
        &slspec::cmd_eigs);
    add("asym", "compare located eigenvalues against asymptotic predictions",
        &slspec::cmd_asym);
    add("riesz", "evaluate split conditions, branch angles, and the basis verdict",
        &slspec::cmd_riesz);
    add("oracle", "cross-check low eigenvalues against a finite-difference pencil",
        &slspec::cmd_oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        slspec::RunConfig cfg = slspec::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (n_min >= 0) cfg.n_min = n_min;
        if (n_max >= 0) cfg.n_max = n_max;
        if (threads > 0) cfg.threads = threads;
        if (cfg.n_min < 1 || cfg.n_max < cfg.n_min)
            throw slspec::ConfigError("window range must satisfy 1 <= n_min <= n_max");
        chosen(cfg);
        return 0;
    } catch (const slspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const slspec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
