#pragma once

#include "tontine/payout.hpp"
#include "tontine/pool.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tontine {

/// Present value left with the sponsor: payouts scheduled after the last death.
double epsilon(const PayoutFunction &d, const PoolGrid &pg);

/// F_i: expected present value received per dollar invested by cohort i.
double present_value(const ParticipationRates &rates, const PayoutFunction &d, const PoolGrid &pg,
                     std::size_t cohort);
std::vector<double> present_values(const ParticipationRates &rates, const PayoutFunction &d,
                                   const PoolGrid &pg);

/// Largest pairwise gap between present values; 0 for a single cohort.
double inequity(std::span<const double> present_values);

/// One existence condition: for the cohorts in `cohorts`, the discounted
/// payout paid while only they survive must stay below alpha_A (1 - eps).
struct SubsetCondition {
    std::vector<std::size_t> cohorts;
    double integral = 0.0; ///< left-hand side
    double bound = 0.0;    ///< alpha_A (1 - eps)

    double margin() const noexcept { return bound - integral; }
    bool holds() const noexcept { return integral < bound; }
};

struct ExistenceCheck {
    double epsilon = 0.0;
    std::vector<SubsetCondition> conditions; ///< every proper nonempty subset
    bool feasible = true;

    std::vector<SubsetCondition> violations() const;
    /// Condition with the smallest margin, or nullptr for a single cohort.
    const SubsetCondition *tightest() const;
};

/// Evaluates all 2^K - 2 subset conditions. Equitable rates exist iff all hold.
ExistenceCheck check_existence(const PayoutFunction &d, const PoolGrid &pg);

struct EquityReport {
    ParticipationRates rates;
    std::vector<double> present_values;
    double epsilon = 0.0;
    double inequity = 0.0;
    bool feasible = true;
    std::vector<SubsetCondition> violating_subsets;
};

/// Present values, epsilon, inequity and the existence verdict for given rates.
EquityReport assess(const ParticipationRates &rates, const PayoutFunction &d, const PoolGrid &pg);

/// Rates normalized pi_1 = 1 for two cohorts and pi_2 = 1 for three, matching
/// the published tables; pi_1 = 1 otherwise.
std::size_t default_anchor(std::size_t cohort_count);

struct RelaxationSchedule {
    double shrink = 0.5;        ///< step multiplier after a pass without raises
    double initial_step = 0.25; ///< additive step, relative to rates scaled to max 1
    std::optional<std::vector<double>> start; ///< defaults to 1/a_{x_i}
    int max_passes = 100000;
    std::optional<std::size_t> anchor; ///< output normalization; default_anchor() if unset
};

class InfeasiblePoolError : public std::runtime_error {
public:
    explicit InfeasiblePoolError(ExistenceCheck check);
    const ExistenceCheck &check() const noexcept { return check_; }

private:
    ExistenceCheck check_;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string &what, double inequity, std::vector<double> trace = {});
    double inequity() const noexcept { return inequity_; }
    const std::vector<double> &trace() const noexcept { return trace_; }

private:
    double inequity_;
    std::vector<double> trace_;
};

struct EquitableSolution {
    ParticipationRates rates;
    std::vector<double> present_values;
    double epsilon = 0.0;
    double inequity = 0.0;
    int evaluations = 0; ///< single-cohort present value evaluations
    int passes = 0;
};

/// Coordinate relaxation: cycle through the cohorts raising pi_i by the current
/// step as long as F_i stays below 1 - eps, then shrink the step. Stops once the
/// step and the inequity are both below `tol`.
EquitableSolution solve_equitable(const PayoutFunction &d, const PoolGrid &pg,
                                  const RelaxationSchedule &schedule = {}, double tol = 1e-5);

struct NaturalEquitableOptions {
    RelaxationSchedule schedule;
    double damping = 1.0; ///< 1 = full replacement of pi each round
    int max_iterations = 60;
};

struct NaturalEquitableSolution {
    EquitableSolution equity;
    PayoutFunction payout;
    int iterations = 0;
    std::vector<double> trace; ///< change in normalized rates per round
};

/// Rates and natural payout solved together: iterate pi -> equitable rates for
/// natural_payout(pi) until successive normalized rates agree within `tol`.
NaturalEquitableSolution solve_natural_equitable(const PoolGrid &pg, double tol = 1e-5,
                                                 const NaturalEquitableOptions &options = {});

/// Per-cohort rows (age, investment, count, rate, share price, shares, F) then a
/// summary row (epsilon, inequity, feasible); violated subsets follow if any.
void write_equity_csv(std::ostream &out, const PoolSpec &pool, const EquityReport &report);
void write_existence_csv(std::ostream &out, const ExistenceCheck &check);

} // namespace tontine
