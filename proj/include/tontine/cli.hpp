#pragma once

#include "tontine/equity.hpp"
#include "tontine/mortality.hpp"
#include "tontine/payout.hpp"
#include "tontine/pool.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tontine::cli {

/// Payout design named on the command line:
/// flat | natural-age:<x> | natural | proportional | crra:<gamma>.
struct DesignChoice {
    PayoutKind kind = PayoutKind::natural;
    double parameter = 0.0; ///< age for natural-age, gamma for crra
};

DesignChoice parse_design(const std::string &text);

struct RunConfig {
    std::string command;
    std::string pool_path;
    MortalityModel mortality;
    EconomicParams economy;
    int steps = QuadratureGrid::default_steps;
    double horizon_age = default_horizon_age;
    DesignChoice design;
    double gamma = 1.0;
    std::uint64_t seed = 1;
    std::string out_path;
    double tolerance = 1e-5;
    std::vector<int> sizes; ///< table population sizes; empty = defaults
};

/// Exit codes: 0 success, 2 pool infeasible.
inline constexpr int exit_infeasible = 2;

/// Prices the pool in `config.pool_path` and writes the equity report CSV.
/// Returns exit_infeasible (after writing the violated conditions) when no
/// equitable rates exist.
int quote(const RunConfig &config, std::ostream &out);
int quote(const PoolSpec &pool, const RunConfig &config, std::ostream &out);

/// Table and figure identifiers understood by reproduce().
const std::vector<std::string> &reproducible_ids();

/// Writes the data behind a published table or figure as CSV.
void reproduce(const std::string &id, const RunConfig &config, std::ostream &out);

} // namespace tontine::cli
