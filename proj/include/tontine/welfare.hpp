#pragma once

#include "tontine/payout.hpp"
#include "tontine/pool.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tontine {

/// CRRA utility c^{1-gamma}/(1-gamma), log c at gamma = 1.
double crra_utility(double consumption, double gamma);

/// Discounted expected lifetime utility of one member of cohort i in the
/// pooled tontine (d, rates), with the survivor expectation taken exactly.
double cohort_utility(std::size_t cohort, const ParticipationRates &rates,
                      const PayoutFunction &d, const PoolGrid &pg, double gamma);

/// Same quantity for a stand-alone pool of `size` people aged `age`, each
/// investing `investment`, sharing the payout d.
double homogeneous_tontine_utility(double age, int size, double investment,
                                   const PayoutFunction &d, const MortalityModel &model,
                                   const EconomicParams &econ, const QuadratureGrid &grid,
                                   double gamma);

/// Utility of a fairly priced life annuity bought with `premium`: a_x U(premium / a_x).
double annuity_utility(double age, double gamma, double premium, const MortalityModel &model,
                       const EconomicParams &econ, const QuadratureGrid &grid);

/// Utility-maximizing payout for a homogeneous pool: natural for gamma = 1,
/// the CRRA optimum otherwise.
PayoutFunction optimal_homogeneous_payout(int size, double gamma, double age,
                                          const MortalityModel &model,
                                          const EconomicParams &econ, const QuadratureGrid &grid);

/// delta_i: the haircut on cohort i's stand-alone optimal tontine that matches
/// its utility in the pooled design. Negative means pooling helps the cohort.
/// Closed form for gamma = 1, bisection otherwise.
double loading(std::size_t cohort, const ParticipationRates &rates, const PayoutFunction &d,
               const PoolGrid &pg, double gamma);

struct LoadingReport {
    std::vector<double> basis_points;
    std::vector<std::string> benchmarks; ///< stand-alone design each cohort is compared with
};

LoadingReport loadings(const ParticipationRates &rates, const PayoutFunction &d,
                       const PoolGrid &pg, double gamma);

enum class ProductDesign {
    annuity,          ///< fairly priced life annuity (the benchmark)
    optimal_tontine,  ///< gamma-optimal tontine
    natural_tontine,  ///< natural tontine for the cohort's age
    gsa,              ///< group self-annuitization, via its continuous natural-tontine limit
    log_optimal_paf,  ///< pooled annuity fund optimal for log utility (gamma = 1 only)
};

/// Per-head amount a homogeneous pool of `size` people aged `age` must invest in
/// `design` to match the utility of `premium` in a fair annuity.
double certainty_equivalent(ProductDesign design, double age, int size, double gamma,
                            const MortalityModel &model, const EconomicParams &econ,
                            const QuadratureGrid &grid, double premium = 100.0);

/// Same for an arbitrary tontine payout d shared by the homogeneous pool.
double certainty_equivalent(const PayoutFunction &d, double age, int size, double gamma,
                            const MortalityModel &model, const EconomicParams &econ,
                            const QuadratureGrid &grid, double premium = 100.0);

} // namespace tontine
