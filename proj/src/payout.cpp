#include "tontine/payout.hpp"

#include "tontine/format.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tontine {

std::string to_string(PayoutKind kind) {
    switch (kind) {
    case PayoutKind::flat:
        return "flat";
    case PayoutKind::natural_for_age:
        return "natural-age";
    case PayoutKind::natural:
        return "natural";
    case PayoutKind::proportional:
        return "proportional";
    case PayoutKind::crra_optimal:
        return "crra";
    }
    return "unknown";
}

PayoutFunction PayoutFunction::normalized(PayoutKind kind, std::string description,
                                          Evaluator shape, const EconomicParams &econ,
                                          const QuadratureGrid &grid) {
    const double mass =
        integrate([&](double t) { return econ.discount(t) * shape(t); }, grid);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw std::domain_error("payout shape has no positive discounted mass on the grid");
    }
    return PayoutFunction(kind, std::move(description), std::move(shape), 1.0 / mass, econ, grid);
}

PayoutFunction PayoutFunction::with_scale(PayoutKind kind, std::string description,
                                          Evaluator shape, double scale,
                                          const EconomicParams &econ, const QuadratureGrid &grid) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::domain_error("payout scale must be positive and finite");
    }
    return PayoutFunction(kind, std::move(description), std::move(shape), scale, econ, grid);
}

std::vector<double> PayoutFunction::sample(const QuadratureGrid &grid) const {
    std::vector<double> d(grid.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = (*this)(grid.node(k));
    }
    return d;
}

double PayoutFunction::budget() const {
    return integrate([&](double t) { return econ_.discount(t) * (*this)(t); }, grid_);
}

PayoutFunction PayoutFunction::renormalized(const QuadratureGrid &grid) const {
    const double mass =
        integrate([&](double t) { return econ_.discount(t) * shape_(t); }, grid);
    PayoutFunction out(kind_, description_, shape_, 1.0 / mass, econ_, grid);
    out.history_ = history_;
    std::ostringstream note;
    note << "renormalized from " << grid_.steps() << " steps on [0," << grid_.horizon() << "] to "
         << grid.steps() << " steps on [0," << grid.horizon() << "], scale x"
         << out.scale_ / scale_;
    out.history_.push_back(note.str());
    return out;
}

PayoutFunction flat_payout(const EconomicParams &econ, const QuadratureGrid &grid) {
    // Truncated budget constraint: d0 (1 - e^{-rT}) / r = 1.
    const double T = grid.horizon();
    const double d0 = econ.rate > 0.0 ? econ.rate / -std::expm1(-econ.rate * T) : 1.0 / T;
    return PayoutFunction::with_scale(PayoutKind::flat, "flat", [](double) { return 1.0; }, d0,
                                      econ, grid);
}

double beta(int n, double gamma, double p) {
    if (!(gamma > 0.0)) {
        throw std::domain_error("beta: risk aversion must be positive");
    }
    if (n < 1) {
        throw std::domain_error("beta: pool size must be at least 1");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("beta: probability must lie in [0, 1]");
    }
    if (p == 0.0) {
        return 0.0;
    }
    const auto law = binomial_distribution(n - 1, p);
    double sum = 0.0;
    for (std::size_t k = 0; k < law.prob.size(); ++k) {
        const int alive_others = law.offset + static_cast<int>(k);
        // (n/(k+1))^{1-gamma} in log space; the pmf itself already came from logs.
        sum += law.prob[k] * std::exp((1.0 - gamma) * std::log(double(n) / (alive_others + 1)));
    }
    return p * sum;
}

PayoutFunction crra_optimal_payout(int n, double gamma, double age, const MortalityModel &model,
                                   const EconomicParams &econ, const QuadratureGrid &grid) {
    beta(n, gamma, 1.0); // validates n and gamma up front
    std::ostringstream desc;
    desc << "crra-optimal(n=" << n << ",gamma=" << gamma << ",age=" << age << ")";
    return PayoutFunction::normalized(
        PayoutKind::crra_optimal, desc.str(),
        [=](double t) { return std::pow(beta(n, gamma, model.survival(age, t)), 1.0 / gamma); },
        econ, grid);
}

PayoutFunction natural_for_age(double age, const MortalityModel &model,
                               const EconomicParams &econ, const QuadratureGrid &grid) {
    std::ostringstream desc;
    desc << "natural-for-age(" << age << ")";
    return PayoutFunction::normalized(PayoutKind::natural_for_age, desc.str(),
                                      [=](double t) { return model.survival(age, t); }, econ,
                                      grid);
}

namespace {

/// Mixture sum_i c_i tp_{x_i}.
PayoutFunction::Evaluator survival_mixture(const PoolSpec &pool, std::vector<double> weights,
                                           const MortalityModel &model) {
    std::vector<double> ages;
    for (const auto &c : pool.cohorts()) {
        ages.push_back(c.age);
    }
    return [=, ages = std::move(ages), weights = std::move(weights)](double t) {
        double d = 0.0;
        for (std::size_t i = 0; i < ages.size(); ++i) {
            d += weights[i] * model.survival(ages[i], t);
        }
        return d;
    };
}

} // namespace

std::pair<PayoutFunction, ParticipationRates>
proportional_payout(const PoolSpec &pool, const MortalityModel &model, const EconomicParams &econ,
                    const QuadratureGrid &grid) {
    std::vector<double> weights;
    std::vector<double> rates;
    for (std::size_t i = 0; i < pool.cohort_count(); ++i) {
        const double a = annuity_factor(model, econ, pool[i].age, grid);
        weights.push_back(pool.wealth_fraction(i) / a);
        rates.push_back(1.0 / a);
    }
    auto d = PayoutFunction::normalized(PayoutKind::proportional, "proportional",
                                        survival_mixture(pool, std::move(weights), model), econ,
                                        grid);
    return {std::move(d), ParticipationRates(std::move(rates), Normalization::annuity)};
}

PayoutFunction natural_payout(const PoolSpec &pool, const ParticipationRates &rates,
                              const MortalityModel &model, const EconomicParams &econ,
                              const QuadratureGrid &grid) {
    if (rates.size() != pool.cohort_count()) {
        throw std::invalid_argument("natural_payout: one rate per cohort required");
    }
    // Normalize to max 1 first so the shape does not depend on the scale of pi.
    const auto unit = rates.renormalized(Normalization::max_one);
    std::vector<double> weights;
    for (std::size_t i = 0; i < pool.cohort_count(); ++i) {
        weights.push_back(unit[i] * pool[i].size * pool[i].investment);
    }
    return PayoutFunction::normalized(PayoutKind::natural, "natural",
                                      survival_mixture(pool, std::move(weights), model), econ,
                                      grid);
}

void write_payout_csv(std::ostream &out, const PayoutFunction &d) {
    out << "t,payout\n";
    const auto &grid = d.grid();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.node(k);
        out << format_number(t) << ',' << format_number(d(t)) << '\n';
    }
}

} // namespace tontine
