#pragma once

#include <optional>
#include <string>

#include "slspec/asymptotics.hpp"
#include "slspec/bc_model.hpp"
#include "slspec/potential.hpp"
#include "slspec/types.hpp"

namespace slspec {

inline constexpr const char* kVersion = "1.0.0";

/// Resolved run configuration. Complex config entries are [re, im] arrays;
/// a bare number is treated as purely real.
struct RunConfig {
    std::optional<GeneralBC> raw_bc;
    std::optional<CanonicalBC> canonical_bc;
    Potential potential = Potential::zero();
    std::string potential_label = "zero";
    int n_min = 5, n_max = 40;
    std::optional<Regime> regime;  // empty = auto
    Tolerances tol;
    std::string out_dir = "out";
    int oracle_N = 2000;
    int oracle_n_max = 8;
    std::optional<int> trace_n;
    int trace_samples = 512;
    int threads = 1;
};

/// Parse a JSON config document. Throws ConfigError on malformed input or
/// violated invariants (empty n_range, nonpositive tolerances, missing bc).
RunConfig parse_config_text(const std::string& text);

/// Read and parse a config file. Throws ConfigError when unreadable.
RunConfig load_config(const std::string& path);

/// The canonical BC the run works on: the canonical block verbatim, or the
/// raw block reduced. Throws when neither block is present.
CanonicalBC resolve_bc(const RunConfig& cfg);

}  // namespace slspec
