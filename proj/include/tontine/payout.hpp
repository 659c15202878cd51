#pragma once

#include "tontine/mortality.hpp"
#include "tontine/numerics.hpp"
#include "tontine/pool.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tontine {

enum class PayoutKind { flat, natural_for_age, natural, proportional, crra_optimal };

std::string to_string(PayoutKind kind);

/// Deterministic total payout rate d(t) per initial dollar, normalized so that
/// the discounted payouts over its grid integrate to one.
class PayoutFunction {
public:
    using Evaluator = std::function<double(double)>;

    /// Scales `shape` so the budget constraint holds on `grid`.
    static PayoutFunction normalized(PayoutKind kind, std::string description, Evaluator shape,
                                     const EconomicParams &econ, const QuadratureGrid &grid);
    /// Uses a known normalizing constant instead of integrating the shape.
    static PayoutFunction with_scale(PayoutKind kind, std::string description, Evaluator shape,
                                     double scale, const EconomicParams &econ,
                                     const QuadratureGrid &grid);

    double operator()(double t) const { return scale_ * shape_(t); }
    /// d at every node of `grid`.
    std::vector<double> sample(const QuadratureGrid &grid) const;

    PayoutKind kind() const noexcept { return kind_; }
    const std::string &description() const noexcept { return description_; }
    const QuadratureGrid &grid() const noexcept { return grid_; }
    const EconomicParams &economy() const noexcept { return econ_; }
    double initial_rate() const { return (*this)(0.0); }

    /// Integral of e^{-rt} d(t) over the normalizing grid.
    double budget() const;

    /// Re-normalized on another grid; the change of scale is recorded in history().
    PayoutFunction renormalized(const QuadratureGrid &grid) const;
    const std::vector<std::string> &history() const noexcept { return history_; }

private:
    PayoutFunction(PayoutKind kind, std::string description, Evaluator shape, double scale,
                   EconomicParams econ, QuadratureGrid grid)
        : kind_{kind}, description_{std::move(description)}, shape_{std::move(shape)},
          scale_{scale}, econ_{econ}, grid_{std::move(grid)} {}

    PayoutKind kind_;
    std::string description_;
    Evaluator shape_;
    double scale_;
    EconomicParams econ_;
    QuadratureGrid grid_;
    std::vector<std::string> history_;
};

/// Constant payout. On a horizon T it pays r / (1 - e^{-rT}).
PayoutFunction flat_payout(const EconomicParams &econ, const QuadratureGrid &grid);

/// p * sum_k C(n-1,k) p^k (1-p)^{n-1-k} (n/(k+1))^{1-gamma}.
double beta(int n, double gamma, double p);

/// Utility-optimal payout for a homogeneous pool of n people aged x with CRRA
/// risk aversion gamma: d(t) proportional to beta(n, gamma, tp_x)^{1/gamma}.
PayoutFunction crra_optimal_payout(int n, double gamma, double age, const MortalityModel &model,
                                   const EconomicParams &econ, const QuadratureGrid &grid);

/// d(t) = tp_x / a_x.
PayoutFunction natural_for_age(double age, const MortalityModel &model,
                               const EconomicParams &econ, const QuadratureGrid &grid);

/// Wealth-weighted mix of natural tontines with rates pi_i = 1/a_{x_i}.
std::pair<PayoutFunction, ParticipationRates>
proportional_payout(const PoolSpec &pool, const MortalityModel &model, const EconomicParams &econ,
                    const QuadratureGrid &grid);

/// d(t) proportional to the expected number of surviving shares
/// sum_i pi_i n_i w_i tp_{x_i}.
PayoutFunction natural_payout(const PoolSpec &pool, const ParticipationRates &rates,
                              const MortalityModel &model, const EconomicParams &econ,
                              const QuadratureGrid &grid);

/// CSV with columns t,payout at the nodes of the function's grid.
void write_payout_csv(std::ostream &out, const PayoutFunction &d);

} // namespace tontine
