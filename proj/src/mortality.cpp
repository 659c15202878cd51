#include "tontine/mortality.hpp"

#include <cmath>
#include <stdexcept>

namespace tontine {

MortalityModel::MortalityModel(double modal_age, double dispersion)
    : modal_{modal_age}, dispersion_{dispersion} {
    if (!(dispersion > 0.0) || !std::isfinite(dispersion) || !std::isfinite(modal_age)) {
        throw std::invalid_argument("Gompertz dispersion must be positive and parameters finite");
    }
}

double MortalityModel::hazard(double age) const noexcept {
    return std::exp((age - modal_) / dispersion_) / dispersion_;
}

double MortalityModel::survival(double age, double t) const {
    if (t < 0.0) {
        throw std::domain_error("survival: elapsed time must be non-negative");
    }
    // expm1 keeps the small-t regime accurate.
    return std::exp(-std::exp((age - modal_) / dispersion_) * std::expm1(t / dispersion_));
}

double MortalityModel::sample_lifetime(double age, double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::domain_error("sample_lifetime: uniform draw must lie in (0, 1)");
    }
    return dispersion_ * std::log1p(-std::log(u) * std::exp(-(age - modal_) / dispersion_));
}

EconomicParams::EconomicParams(double r) : rate{r} {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("interest rate must be non-negative and finite");
    }
}

double EconomicParams::discount(double t) const noexcept { return std::exp(-rate * t); }

double annuity_factor(const MortalityModel &model, const EconomicParams &econ, double age,
                      const QuadratureGrid &grid) {
    return integrate([&](double t) { return econ.discount(t) * model.survival(age, t); }, grid);
}

double annuity_factor(const MortalityModel &model, const EconomicParams &econ, double age,
                      int steps, double horizon_age) {
    return annuity_factor(model, econ, age, grid_for_age(age, steps, horizon_age));
}

double discrete_annuity_factor(const MortalityModel &model, const EconomicParams &econ, double age,
                               double dt, double horizon) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("discrete_annuity_factor: period must be positive");
    }
    if (horizon < 0.0) {
        return 0.0;
    }
    // Tolerance so that a horizon that is an exact multiple of dt keeps its last term.
    const auto terms = static_cast<long>(std::floor(horizon / dt + 1e-9));
    double total = 0.0;
    for (long k = 0; k <= terms; ++k) {
        const double t = static_cast<double>(k) * dt;
        total += econ.discount(t) * model.survival(age, t);
    }
    return total;
}

} // namespace tontine
