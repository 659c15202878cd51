#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tontine {

/// Composite Simpson grid on [0, horizon] with an even number of intervals.
class QuadratureGrid {
public:
    static constexpr int default_steps = 400;

    QuadratureGrid(double horizon, int steps = default_steps);

    double horizon() const noexcept { return horizon_; }
    int steps() const noexcept { return steps_; }
    double spacing() const noexcept { return horizon_ / steps_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double node(std::size_t k) const noexcept { return static_cast<double>(k) * spacing(); }
    std::span<const double> weights() const noexcept { return weights_; }
    std::vector<double> nodes() const;

    /// Same horizon, twice as many intervals.
    QuadratureGrid refined() const { return QuadratureGrid(horizon_, 2 * steps_); }

private:
    double horizon_;
    int steps_;
    std::vector<double> weights_;
};

/// Age every pool member is integrated out to unless overridden.
inline constexpr double default_horizon_age = 130.0;

/// Grid whose horizon carries the youngest member to `horizon_age`.
QuadratureGrid grid_for_age(double youngest_age, int steps = QuadratureGrid::default_steps,
                            double horizon_age = default_horizon_age);

/// Composite Simpson approximation of the integral of f over [0, T].
/// Throws std::domain_error naming the node if f is not finite there.
double integrate(const std::function<double(double)> &f, const QuadratureGrid &grid);

/// Same rule applied to values already sampled at the grid nodes.
double integrate_samples(std::span<const double> values, const QuadratureGrid &grid);

/// Bisection on a bracketing interval. Stops when |g(x)| < tol or the
/// bracket is narrower than tol.
double solve_scalar(const std::function<double(double)> &g, double lo, double hi, double tol);

} // namespace tontine
