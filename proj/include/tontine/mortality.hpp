#pragma once

#include "tontine/numerics.hpp"

namespace tontine {

/// Gompertz law of mortality: hazard (1/b) e^{(x-m)/b} at age x.
class MortalityModel {
public:
    static constexpr double default_modal_age = 88.72;
    static constexpr double default_dispersion = 10.0;

    MortalityModel(double modal_age = default_modal_age, double dispersion = default_dispersion);

    double modal_age() const noexcept { return modal_; }
    double dispersion() const noexcept { return dispersion_; }

    double hazard(double age) const noexcept;

    /// Probability that someone aged `age` survives another `t` years.
    double survival(double age, double t) const;
    double death_probability(double age, double t) const { return 1.0 - survival(age, t); }

    /// Inverse-CDF draw of the remaining lifetime: the t with survival(age, t) == u.
    double sample_lifetime(double age, double u) const;

private:
    double modal_;
    double dispersion_;
};

struct EconomicParams {
    static constexpr double default_rate = 0.04;

    explicit EconomicParams(double r = default_rate);

    /// Continuously compounded risk-free rate.
    double rate;

    double discount(double t) const noexcept;
};

/// Continuous life annuity price a_x on `grid` (paying $1/yr for life).
double annuity_factor(const MortalityModel &model, const EconomicParams &econ, double age,
                      const QuadratureGrid &grid);

/// a_x with the grid chosen so that age reaches `horizon_age`.
double annuity_factor(const MortalityModel &model, const EconomicParams &econ, double age,
                      int steps = QuadratureGrid::default_steps,
                      double horizon_age = default_horizon_age);

/// Discrete annuity price: sum of e^{-r k dt} kdt_p_x over k = 0, 1, ... while
/// k*dt <= horizon (payments at the start of each period).
double discrete_annuity_factor(const MortalityModel &model, const EconomicParams &econ, double age,
                               double dt, double horizon);

} // namespace tontine
