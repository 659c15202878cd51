#pragma once

#include "tontine/mortality.hpp"
#include "tontine/numerics.hpp"
#include "tontine/payout.hpp"
#include "tontine/pool.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace tontine {

/// Uniform (0,1) draws from std::mt19937_64: the top 53 bits of each output x
/// map to ((x >> 11) + 0.5) * 2^-53. The stream is fully determined by the seed.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_{seed} {}
    double next();

private:
    std::mt19937_64 engine_;
};

/// Remaining lifetimes for every subscriber, cohort by cohort in pool order.
std::vector<std::vector<double>> draw_lifetimes(const PoolSpec &pool, const MortalityModel &model,
                                                std::uint64_t seed);

struct SimulationPath {
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<std::vector<int>> survivors;       ///< [cohort][time]
    std::vector<double> total_payout;              ///< rate, or amount per period for GSA
    std::vector<std::vector<double>> per_survivor; ///< [cohort][time]; NaN when nobody is alive
    std::vector<double> wealth;                    ///< fund assets (GSA and PAF only)
    double last_death = 0.0;
    double residual = 0.0; ///< GSA assets left when the pool dies out

    /// Index of the first time with no survivors, or times.size().
    std::size_t extinction_index() const;
};

/// Tontine payments along one lifetime path: a survivor in cohort i receives
/// w d(t) pi_i w_i / sum_j pi_j w_j N_j(t).
SimulationPath simulate_tontine(const PoolSpec &pool, const PayoutFunction &d,
                                const ParticipationRates &rates, const MortalityModel &model,
                                std::uint64_t seed, const std::vector<double> &times);

/// Group self-annuitization with payments at t_k = k dt until extinction or `horizon`:
/// g_{i,0} = w_i / a''_{x_i}; later payments rescale by the common factor making
/// sum_i g_{i,k} N_i a''_{x_i+t_k} equal the fund W_k, and W_{k+1} = (W_k - g_k) e^{r dt}.
SimulationPath simulate_gsa(const PoolSpec &pool, const MortalityModel &model,
                            const EconomicParams &econ, double dt, std::uint64_t seed,
                            double horizon, double horizon_age = default_horizon_age);

/// Log-optimal pooled annuity fund for a homogeneous pool, sampled at the grid
/// nodes. Total payout is deterministic, n w tp_x / a_x, and the fund holds
/// n w a_{x+t} tp_x / a_x.
SimulationPath simulate_paf_log(const PoolSpec &pool, const MortalityModel &model,
                                const EconomicParams &econ, std::uint64_t seed,
                                const QuadratureGrid &grid);

/// Columns t, total_payout, then survivors_i and payout_i per cohort (and wealth
/// when the path carries it).
void write_path_csv(std::ostream &out, const SimulationPath &path);

} // namespace tontine
