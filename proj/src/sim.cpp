#include "tontine/sim.hpp"

#include "tontine/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tontine {

double UniformStream::next() {
    const std::uint64_t x = engine_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<std::vector<double>> draw_lifetimes(const PoolSpec &pool, const MortalityModel &model,
                                                std::uint64_t seed) {
    UniformStream u(seed);
    std::vector<std::vector<double>> out;
    for (const auto &c : pool.cohorts()) {
        auto &lives = out.emplace_back();
        lives.reserve(static_cast<std::size_t>(c.size));
        for (int k = 0; k < c.size; ++k) {
            lives.push_back(model.sample_lifetime(c.age, u.next()));
        }
    }
    return out;
}

std::size_t SimulationPath::extinction_index() const {
    for (std::size_t k = 0; k < times.size(); ++k) {
        bool any = false;
        for (const auto &s : survivors) {
            any = any || s[k] > 0;
        }
        if (!any) {
            return k;
        }
    }
    return times.size();
}

namespace {

int alive_at(const std::vector<double> &lifetimes, double t) {
    return static_cast<int>(
        std::count_if(lifetimes.begin(), lifetimes.end(), [&](double life) { return life > t; }));
}

double latest_death(const std::vector<std::vector<double>> &lifetimes) {
    double last = 0.0;
    for (const auto &cohort : lifetimes) {
        for (double life : cohort) {
            last = std::max(last, life);
        }
    }
    return last;
}

constexpr double no_survivor = std::numeric_limits<double>::quiet_NaN();

} // namespace

SimulationPath simulate_tontine(const PoolSpec &pool, const PayoutFunction &d,
                                const ParticipationRates &rates, const MortalityModel &model,
                                std::uint64_t seed, const std::vector<double> &times) {
    const auto K = pool.cohort_count();
    if (rates.size() != K) {
        throw std::invalid_argument("simulate_tontine: one rate per cohort required");
    }
    const auto lifetimes = draw_lifetimes(pool, model, seed);
    SimulationPath path;
    path.seed = seed;
    path.times = times;
    path.last_death = latest_death(lifetimes);
    path.survivors.assign(K, std::vector<int>(times.size()));
    path.per_survivor.assign(K, std::vector<double>(times.size(), no_survivor));
    path.total_payout.assign(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        double shares = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            const int n = alive_at(lifetimes[i], times[k]);
            path.survivors[i][k] = n;
            shares += rates[i] * pool[i].investment * n;
        }
        if (shares == 0.0) {
            continue;
        }
        const double pot = pool.total_wealth() * d(times[k]);
        double total = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            if (path.survivors[i][k] > 0) {
                const double each = pot * rates[i] * pool[i].investment / shares;
                path.per_survivor[i][k] = each;
                total += each * path.survivors[i][k];
            }
        }
        path.total_payout[k] = total;
    }
    return path;
}

SimulationPath simulate_gsa(const PoolSpec &pool, const MortalityModel &model,
                            const EconomicParams &econ, double dt, std::uint64_t seed,
                            double horizon, double horizon_age) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("simulate_gsa: period must be positive");
    }
    const auto K = pool.cohort_count();
    const auto lifetimes = draw_lifetimes(pool, model, seed);
    // Discrete annuity price for someone now aged x, summed up to horizon_age.
    auto annuity = [&](double x) {
        return discrete_annuity_factor(model, econ, x, dt, std::max(0.0, horizon_age - x));
    };

    SimulationPath path;
    path.seed = seed;
    path.last_death = latest_death(lifetimes);
    path.survivors.assign(K, {});
    path.per_survivor.assign(K, {});

    std::vector<double> initial(K);
    for (std::size_t i = 0; i < K; ++i) {
        initial[i] = pool[i].investment / annuity(pool[i].age);
    }
    double fund = pool.total_wealth();
    const auto periods = static_cast<long>(std::floor(horizon / dt + 1e-9));
    for (long k = 0; k <= periods; ++k) {
        const double t = static_cast<double>(k) * dt;
        std::vector<int> alive(K);
        double liability = 0.0; // sum_i g_{i,0} N_i a''_{x_i + t}
        for (std::size_t i = 0; i < K; ++i) {
            alive[i] = alive_at(lifetimes[i], t);
            if (alive[i] > 0) {
                liability += initial[i] * alive[i] * annuity(pool[i].age + t);
            }
        }
        path.times.push_back(t);
        path.wealth.push_back(fund);
        for (std::size_t i = 0; i < K; ++i) {
            path.survivors[i].push_back(alive[i]);
        }
        if (liability == 0.0) {
            // Pool extinct: whatever is left stays with the fund.
            path.residual = fund;
            path.total_payout.push_back(0.0);
            for (std::size_t i = 0; i < K; ++i) {
                path.per_survivor[i].push_back(no_survivor);
            }
            break;
        }
        const double adjustment = fund / liability;
        double paid = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            const double each = adjustment * initial[i];
            path.per_survivor[i].push_back(alive[i] > 0 ? each : no_survivor);
            paid += each * alive[i];
        }
        path.total_payout.push_back(paid);
        fund = (fund - paid) * std::exp(econ.rate * dt);
    }
    return path;
}

SimulationPath simulate_paf_log(const PoolSpec &pool, const MortalityModel &model,
                                const EconomicParams &econ, std::uint64_t seed,
                                const QuadratureGrid &grid) {
    const auto &first = pool[0];
    for (const auto &c : pool.cohorts()) {
        if (c.age != first.age || c.investment != first.investment) {
            throw std::invalid_argument(
                "simulate_paf_log: the log-optimal fund is defined for homogeneous pools only");
        }
    }
    const PoolSpec merged({Cohort{first.age, first.investment, pool.total_heads()}});
    const double x = first.age;
    const auto d = natural_for_age(x, model, econ, grid);
    const double ax = annuity_factor(model, econ, x, grid);
    const auto lifetimes = draw_lifetimes(merged, model, seed);

    SimulationPath path;
    path.seed = seed;
    path.last_death = latest_death(lifetimes);
    path.times = grid.nodes();
    path.survivors.assign(1, {});
    path.per_survivor.assign(1, {});
    const double w = merged.total_wealth();
    const double grid_end_age = x + grid.horizon();
    for (double t : path.times) {
        const int alive = alive_at(lifetimes[0], t);
        // Optimal withdrawals are deterministic: the natural tontine.
        const double total = alive > 0 ? w * d(t) : 0.0;
        path.survivors[0].push_back(alive);
        path.total_payout.push_back(total);
        path.per_survivor[0].push_back(alive > 0 ? total / alive : no_survivor);
        const double remaining = grid_end_age - (x + t);
        const double a_now =
            remaining > 0.0 ? annuity_factor(model, econ, x + t, QuadratureGrid(remaining,
                                                                                grid.steps()))
                            : 0.0;
        path.wealth.push_back(w * a_now * model.survival(x, t) / ax);
    }
    return path;
}

void write_path_csv(std::ostream &out, const SimulationPath &path) {
    const auto K = path.survivors.size();
    const bool with_wealth = !path.wealth.empty();
    out << "t,total_payout";
    for (std::size_t i = 0; i < K; ++i) {
        out << ",survivors_" << i + 1 << ",payout_" << i + 1;
    }
    if (with_wealth) {
        out << ",wealth";
    }
    out << '\n';
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        out << format_number(path.times[k]) << ',' << format_number(path.total_payout[k]);
        for (std::size_t i = 0; i < K; ++i) {
            out << ',' << path.survivors[i][k] << ',' << format_number(path.per_survivor[i][k]);
        }
        if (with_wealth) {
            out << ',' << format_number(path.wealth[k]);
        }
        out << '\n';
    }
}

} // namespace tontine
