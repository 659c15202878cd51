#include "tontine/welfare.hpp"

#include "tontine/numerics.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tontine {

namespace {

void require_positive_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::domain_error("risk aversion gamma must be positive");
    }
}

bool is_log(double gamma) { return gamma == 1.0; }

} // namespace

double crra_utility(double consumption, double gamma) {
    require_positive_gamma(gamma);
    if (is_log(gamma)) {
        return std::log(consumption);
    }
    return std::pow(consumption, 1.0 - gamma) / (1.0 - gamma);
}

double cohort_utility(std::size_t cohort, const ParticipationRates &rates,
                      const PayoutFunction &d, const PoolGrid &pg, double gamma) {
    require_positive_gamma(gamma);
    const auto &pool = pg.pool();
    const auto K = pool.cohort_count();
    if (rates.size() != K || cohort >= K) {
        throw std::invalid_argument("cohort_utility: rates do not match the pool");
    }
    std::vector<double> coef(K);
    for (std::size_t j = 0; j < K; ++j) {
        coef[j] = rates[j] * pool[j].investment;
    }
    const auto w = pg.grid().weights();
    const double n_i = pool[cohort].size;
    double total = 0.0;
    for (std::size_t k = 0; k < pg.node_count(); ++k) {
        const double payout = pool.total_wealth() * d(pg.time(k)) * coef[cohort];
        // p_i E_i[U(c_i)] = E[(N_i / n_i) U(c_i)], c_i = w d pi_i w_i / S.
        double expected = 0.0;
        for_each_joint_outcome(pg.counts(k), [&](std::span<const int> n, double prob) {
            if (n[cohort] == 0) {
                return;
            }
            double s = 0.0;
            for (std::size_t j = 0; j < K; ++j) {
                s += coef[j] * n[j];
            }
            const double c = payout / s;
            assert(c > 0.0);
            expected += prob * (n[cohort] / n_i) * crra_utility(c, gamma);
        });
        total += w[k] * pg.discount(k) * expected;
    }
    return total;
}

double homogeneous_tontine_utility(double age, int size, double investment,
                                   const PayoutFunction &d, const MortalityModel &model,
                                   const EconomicParams &econ, const QuadratureGrid &grid,
                                   double gamma) {
    require_positive_gamma(gamma);
    if (size < 1 || !(investment > 0.0)) {
        throw std::invalid_argument("homogeneous_tontine_utility: bad pool");
    }
    return integrate(
        [&](double t) {
            const double p = model.survival(age, t);
            const double share = size * investment * d(t);
            if (p == 0.0 || share == 0.0) {
                return 0.0;
            }
            // Given the member is alive, the others alive ~ Bin(n - 1, p).
            const auto others = binomial_distribution(size - 1, p);
            double expected = 0.0;
            for (std::size_t k = 0; k < others.prob.size(); ++k) {
                const int alive = others.offset + static_cast<int>(k) + 1;
                expected += others.prob[k] * crra_utility(share / alive, gamma);
            }
            return econ.discount(t) * p * expected;
        },
        grid);
}

double annuity_utility(double age, double gamma, double premium, const MortalityModel &model,
                       const EconomicParams &econ, const QuadratureGrid &grid) {
    require_positive_gamma(gamma);
    if (!(premium > 0.0)) {
        throw std::domain_error("annuity_utility: premium must be positive");
    }
    const double a = annuity_factor(model, econ, age, grid);
    return a * crra_utility(premium / a, gamma);
}

PayoutFunction optimal_homogeneous_payout(int size, double gamma, double age,
                                          const MortalityModel &model,
                                          const EconomicParams &econ,
                                          const QuadratureGrid &grid) {
    require_positive_gamma(gamma);
    if (is_log(gamma)) {
        return natural_for_age(age, model, econ, grid);
    }
    return crra_optimal_payout(size, gamma, age, model, econ, grid);
}

double loading(std::size_t cohort, const ParticipationRates &rates, const PayoutFunction &d,
               const PoolGrid &pg, double gamma) {
    require_positive_gamma(gamma);
    const auto &c = pg.pool()[cohort];
    const auto dhat = optimal_homogeneous_payout(c.size, gamma, c.age, pg.model(), pg.economy(),
                                                 pg.grid());
    const double pooled = cohort_utility(cohort, rates, d, pg, gamma);
    auto alone = [&](double investment) {
        return homogeneous_tontine_utility(c.age, c.size, investment, dhat, pg.model(),
                                           pg.economy(), pg.grid(), gamma);
    };
    if (is_log(gamma)) {
        // Log utility: scaling the investment by (1 - delta) adds a_x log(1 - delta).
        return -std::expm1((pooled - alone(c.investment)) / pg.annuity_factor(cohort));
    }
    const auto gap = [&](double delta) { return pooled - alone((1.0 - delta) * c.investment); };
    return solve_scalar(gap, -100.0, 1.0 - 1e-12, 1e-13);
}

LoadingReport loadings(const ParticipationRates &rates, const PayoutFunction &d,
                       const PoolGrid &pg, double gamma) {
    LoadingReport report;
    for (std::size_t i = 0; i < pg.pool().cohort_count(); ++i) {
        report.basis_points.push_back(1e4 * loading(i, rates, d, pg, gamma));
        const auto &c = pg.pool()[i];
        std::ostringstream bench;
        bench << (is_log(gamma) ? "natural" : "crra-optimal") << " tontine for " << c.size
              << " members aged " << c.age << " alone";
        report.benchmarks.push_back(bench.str());
    }
    return report;
}

double certainty_equivalent(const PayoutFunction &d, double age, int size, double gamma,
                            const MortalityModel &model, const EconomicParams &econ,
                            const QuadratureGrid &grid, double premium) {
    const double target = annuity_utility(age, gamma, premium, model, econ, grid);
    const double unit = homogeneous_tontine_utility(age, size, 1.0, d, model, econ, grid, gamma);
    if (is_log(gamma)) {
        // U(X) = a_x log X + U(1).
        return std::exp((target - unit) / annuity_factor(model, econ, age, grid));
    }
    // U(X) = X^{1-gamma} U(1).
    return std::pow(target / unit, 1.0 / (1.0 - gamma));
}

double certainty_equivalent(ProductDesign design, double age, int size, double gamma,
                            const MortalityModel &model, const EconomicParams &econ,
                            const QuadratureGrid &grid, double premium) {
    require_positive_gamma(gamma);
    switch (design) {
    case ProductDesign::annuity:
        return premium;
    case ProductDesign::optimal_tontine:
        return certainty_equivalent(optimal_homogeneous_payout(size, gamma, age, model, econ, grid),
                                    age, size, gamma, model, econ, grid, premium);
    case ProductDesign::gsa:
        if (gamma >= 2.0) {
            throw std::domain_error("GSA certainty equivalents are only defined for gamma < 2");
        }
        [[fallthrough]];
    case ProductDesign::natural_tontine:
        return certainty_equivalent(natural_for_age(age, model, econ, grid), age, size, gamma,
                                    model, econ, grid, premium);
    case ProductDesign::log_optimal_paf:
        if (!is_log(gamma)) {
            throw std::domain_error("the optimal pooled annuity fund is only available for "
                                    "log utility (gamma = 1)");
        }
        // With log utility the optimal fund pays out exactly the natural tontine.
        return certainty_equivalent(natural_for_age(age, model, econ, grid), age, size, gamma,
                                    model, econ, grid, premium);
    }
    throw std::invalid_argument("unknown product design");
}

} // namespace tontine
