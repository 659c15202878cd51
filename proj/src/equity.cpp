#include "tontine/equity.hpp"

#include "tontine/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace tontine {

namespace {

/// w d(t) e^{-rt} times the quadrature weight, per node.
std::vector<double> weighted_payout(const PayoutFunction &d, const PoolGrid &pg) {
    const auto w = pg.grid().weights();
    std::vector<double> out(pg.node_count());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = w[k] * pg.discount(k) * pg.pool().total_wealth() * d(pg.time(k));
    }
    return out;
}

double present_value_from(std::span<const double> weights, std::span<const double> rates,
                          const PoolGrid &pg, std::size_t cohort) {
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] != 0.0) {
            total += weights[k] * pg.weighted_reciprocal(rates, cohort, k);
        }
    }
    return total;
}

std::string subset_label(const std::vector<std::size_t> &cohorts) {
    std::string s;
    for (auto c : cohorts) {
        if (!s.empty()) {
            s += '+';
        }
        s += std::to_string(c + 1);
    }
    return s;
}

} // namespace

double epsilon(const PayoutFunction &d, const PoolGrid &pg) {
    std::vector<double> f(pg.node_count());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = pg.discount(k) * d(pg.time(k)) * pg.all_dead(k);
    }
    return integrate_samples(f, pg.grid());
}

double present_value(const ParticipationRates &rates, const PayoutFunction &d, const PoolGrid &pg,
                     std::size_t cohort) {
    if (rates.size() != pg.pool().cohort_count() || cohort >= rates.size()) {
        throw std::invalid_argument("present_value: rates do not match the pool");
    }
    return present_value_from(weighted_payout(d, pg), rates.values(), pg, cohort);
}

std::vector<double> present_values(const ParticipationRates &rates, const PayoutFunction &d,
                                   const PoolGrid &pg) {
    if (rates.size() != pg.pool().cohort_count()) {
        throw std::invalid_argument("present_values: rates do not match the pool");
    }
    const auto weights = weighted_payout(d, pg);
    std::vector<double> F(rates.size(), 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] == 0.0) {
            continue;
        }
        const auto r = pg.weighted_reciprocals(rates.values(), k);
        for (std::size_t i = 0; i < F.size(); ++i) {
            F[i] += weights[k] * r[i];
        }
    }
    return F;
}

double inequity(std::span<const double> present_values) {
    if (present_values.size() < 2) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(present_values.begin(), present_values.end());
    return *hi - *lo;
}

std::vector<SubsetCondition> ExistenceCheck::violations() const {
    std::vector<SubsetCondition> out;
    std::copy_if(conditions.begin(), conditions.end(), std::back_inserter(out),
                 [](const SubsetCondition &c) { return !c.holds(); });
    return out;
}

const SubsetCondition *ExistenceCheck::tightest() const {
    if (conditions.empty()) {
        return nullptr;
    }
    return &*std::min_element(conditions.begin(), conditions.end(),
                              [](const auto &a, const auto &b) { return a.margin() < b.margin(); });
}

ExistenceCheck check_existence(const PayoutFunction &d, const PoolGrid &pg) {
    const auto &pool = pg.pool();
    const auto K = pool.cohort_count();
    if (K > 20) {
        throw std::invalid_argument("check_existence: too many cohorts to enumerate subsets");
    }
    ExistenceCheck check;
    check.epsilon = epsilon(d, pg);
    if (K == 1) {
        return check;
    }
    const auto nodes = pg.node_count();
    std::vector<double> base(nodes);
    std::vector<double> extinct(nodes * K); // tq_{x_i}^{n_i}
    for (std::size_t k = 0; k < nodes; ++k) {
        base[k] = pg.discount(k) * d(pg.time(k));
        for (std::size_t i = 0; i < K; ++i) {
            extinct[k * K + i] = std::pow(1.0 - pg.survival(i, k), pool[i].size);
        }
    }
    std::vector<double> f(nodes);
    const std::size_t full = (std::size_t{1} << K) - 1;
    for (std::size_t mask = 1; mask < full; ++mask) {
        SubsetCondition cond;
        for (std::size_t i = 0; i < K; ++i) {
            if (mask & (std::size_t{1} << i)) {
                cond.cohorts.push_back(i);
            }
        }
        for (std::size_t k = 0; k < nodes; ++k) {
            double outside_dead = 1.0;
            double inside_dead = 1.0;
            for (std::size_t i = 0; i < K; ++i) {
                (mask & (std::size_t{1} << i) ? inside_dead : outside_dead) *= extinct[k * K + i];
            }
            f[k] = base[k] * outside_dead * (1.0 - inside_dead);
        }
        cond.integral = integrate_samples(f, pg.grid());
        cond.bound = subset_weight(pool, cond.cohorts) * (1.0 - check.epsilon);
        check.feasible = check.feasible && cond.holds();
        check.conditions.push_back(std::move(cond));
    }
    return check;
}

EquityReport assess(const ParticipationRates &rates, const PayoutFunction &d, const PoolGrid &pg) {
    auto check = check_existence(d, pg);
    auto F = present_values(rates, d, pg);
    const double theta = inequity(F);
    return EquityReport{rates, std::move(F), check.epsilon, theta, check.feasible,
                        check.violations()};
}

std::size_t default_anchor(std::size_t cohort_count) { return cohort_count == 3 ? 1 : 0; }

InfeasiblePoolError::InfeasiblePoolError(ExistenceCheck check)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << "no equitable participation rates exist";
          if (const auto *worst = check.tightest()) {
              msg << "; cohorts {" << subset_label(worst->cohorts)
                  << "} fail the existence condition (integral " << worst->integral
                  << " >= bound " << worst->bound << ")";
          }
          return msg.str();
      }()),
      check_{std::move(check)} {}

ConvergenceError::ConvergenceError(const std::string &what, double inequity,
                                   std::vector<double> trace)
    : std::runtime_error(what), inequity_{inequity}, trace_{std::move(trace)} {}

EquitableSolution solve_equitable(const PayoutFunction &d, const PoolGrid &pg,
                                  const RelaxationSchedule &schedule, double tol) {
    const auto &pool = pg.pool();
    const auto K = pool.cohort_count();
    if (!(tol > 0.0) || !(schedule.shrink > 0.0 && schedule.shrink < 1.0) ||
        !(schedule.initial_step > 0.0)) {
        throw std::invalid_argument("solve_equitable: bad tolerance or relaxation schedule");
    }
    const auto anchor = schedule.anchor.value_or(default_anchor(K));
    if (anchor >= K) {
        throw std::invalid_argument("solve_equitable: normalization anchor out of range");
    }

    auto check = check_existence(d, pg);
    if (!check.feasible) {
        throw InfeasiblePoolError(std::move(check));
    }
    const double target = 1.0 - check.epsilon;

    std::vector<double> pi;
    if (schedule.start) {
        pi = *schedule.start;
        if (pi.size() != K) {
            throw std::invalid_argument("solve_equitable: starting rates do not match the pool");
        }
    } else {
        for (std::size_t i = 0; i < K; ++i) {
            pi.push_back(1.0 / pg.annuity_factor(i));
        }
    }
    {
        const ParticipationRates unit(pi);
        pi.assign(unit.values().begin(), unit.values().end());
    }
    const auto weights = weighted_payout(d, pg);

    EquitableSolution sol{ParticipationRates(pi), {}, check.epsilon, 0.0, 0, 0};
    if (K == 1) {
        sol.rates = ParticipationRates(pi, Normalization::anchor_one, anchor);
        sol.present_values = present_values(sol.rates, d, pg);
        return sol;
    }

    double step = schedule.initial_step;
    // Below this the raises no longer change pi in double precision.
    const double min_step = 1e-14;
    double theta = 0.0;
    for (int pass = 0;; ++pass) {
        if (pass >= schedule.max_passes) {
            throw ConvergenceError("solve_equitable: no convergence within the pass limit",
                                   inequity(present_values(ParticipationRates(pi), d, pg)));
        }
        sol.passes = pass + 1;
        bool raised = false;
        for (std::size_t i = 0; i < K; ++i) {
            for (;;) {
                auto trial = pi;
                trial[i] += step;
                ++sol.evaluations;
                const double Fi = present_value_from(weights, trial, pg, i);
                if (!(Fi < target)) {
                    break;
                }
                pi = std::move(trial);
                raised = true;
            }
        }
        if (raised) {
            continue;
        }
        if (step < tol) {
            const auto F = present_values(ParticipationRates(pi, Normalization::annuity), d, pg);
            theta = inequity(F);
            if (theta < tol) {
                break;
            }
        }
        if (step < min_step) {
            throw ConvergenceError("solve_equitable: step exhausted before the inequity fell "
                                   "below tolerance",
                                   theta);
        }
        step *= schedule.shrink;
    }

    sol.rates = ParticipationRates(pi, Normalization::anchor_one, anchor);
    sol.present_values = present_values(sol.rates, d, pg);
    sol.inequity = inequity(sol.present_values);
    return sol;
}

NaturalEquitableSolution solve_natural_equitable(const PoolGrid &pg, double tol,
                                                 const NaturalEquitableOptions &options) {
    const auto &pool = pg.pool();
    const auto K = pool.cohort_count();
    if (!(options.damping > 0.0 && options.damping <= 1.0)) {
        throw std::invalid_argument("solve_natural_equitable: damping must lie in (0, 1]");
    }
    const auto anchor = options.schedule.anchor.value_or(default_anchor(K));

    std::vector<double> pi;
    if (options.schedule.start) {
        pi = *options.schedule.start;
    } else {
        for (std::size_t i = 0; i < K; ++i) {
            pi.push_back(1.0 / pg.annuity_factor(i));
        }
    }
    auto normalize = [&](std::span<const double> v) {
        const ParticipationRates r(std::vector<double>(v.begin(), v.end()),
                                   Normalization::anchor_one, anchor);
        return std::vector<double>(r.values().begin(), r.values().end());
    };
    pi = normalize(pi);

    auto schedule = options.schedule;
    schedule.anchor = anchor;
    std::vector<double> trace;
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const ParticipationRates current(pi, Normalization::anchor_one, anchor);
        auto d = natural_payout(pool, current, pg.model(), pg.economy(), pg.grid());
        schedule.start = pi;
        EquitableSolution inner = [&] {
            try {
                return solve_equitable(d, pg, schedule, 0.1 * tol);
            } catch (const InfeasiblePoolError &) {
                throw;
            } catch (const ConvergenceError &e) {
                throw ConvergenceError(std::string("solve_natural_equitable: inner solve failed: ") +
                                           e.what(),
                                       e.inequity(), trace);
            }
        }();
        auto next = normalize(inner.rates.values());
        double change = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            next[i] = (1.0 - options.damping) * pi[i] + options.damping * next[i];
            change = std::max(change, std::fabs(next[i] - pi[i]));
        }
        trace.push_back(change);
        pi = std::move(next);
        if (change < tol) {
            const ParticipationRates rates(pi, Normalization::anchor_one, anchor);
            auto payout = natural_payout(pool, rates, pg.model(), pg.economy(), pg.grid());
            auto F = present_values(rates, payout, pg);
            const double theta = inequity(F);
            const double eps = epsilon(payout, pg);
            return NaturalEquitableSolution{
                EquitableSolution{rates, std::move(F), eps, theta, inner.evaluations,
                                  inner.passes},
                std::move(payout), iter, std::move(trace)};
        }
        // Successive changes that keep growing mean the iteration is not contracting.
        const auto n = trace.size();
        if (n >= 4 && trace[n - 1] > trace[n - 2] && trace[n - 2] > trace[n - 3] &&
            trace[n - 3] > trace[n - 4]) {
            throw ConvergenceError("solve_natural_equitable: fixed-point iteration diverging; "
                                   "retry with damping < 1",
                                   inner.inequity, trace);
        }
        // Later rounds start close to the answer, so a smaller first step suffices.
        schedule.initial_step = std::clamp(4.0 * change, 1e-3, options.schedule.initial_step);
    }
    throw ConvergenceError("solve_natural_equitable: no fixed point within the iteration limit",
                           trace.empty() ? 0.0 : trace.back(), trace);
}

void write_equity_csv(std::ostream &out, const PoolSpec &pool, const EquityReport &report) {
    out << "age,investment,count,participation_rate,share_price,shares_per_head,present_value\n";
    for (std::size_t i = 0; i < pool.cohort_count(); ++i) {
        const auto &c = pool[i];
        const double pi = report.rates[i];
        const double F = i < report.present_values.size() ? report.present_values[i] : NAN;
        out << format_number(c.age) << ',' << format_number(c.investment) << ',' << c.size << ','
            << format_number(pi) << ',' << format_number(1.0 / pi) << ','
            << format_number(c.investment * pi) << ',' << format_number(F) << '\n';
    }
    out << "epsilon,inequity,feasible\n";
    out << format_number(report.epsilon) << ',' << format_number(report.inequity) << ','
        << (report.feasible ? 1 : 0) << '\n';
    if (!report.violating_subsets.empty()) {
        out << "subset,integral,bound,margin\n";
        for (const auto &c : report.violating_subsets) {
            out << subset_label(c.cohorts) << ',' << format_number(c.integral) << ','
                << format_number(c.bound) << ',' << format_number(c.margin()) << '\n';
        }
    }
}

void write_existence_csv(std::ostream &out, const ExistenceCheck &check) {
    out << "epsilon,feasible\n";
    out << format_number(check.epsilon) << ',' << (check.feasible ? 1 : 0) << '\n';
    out << "subset,integral,bound,margin\n";
    for (const auto &c : check.conditions) {
        out << subset_label(c.cohorts) << ',' << format_number(c.integral) << ','
            << format_number(c.bound) << ',' << format_number(c.margin()) << '\n';
    }
}

} // namespace tontine
