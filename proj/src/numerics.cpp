#include "tontine/numerics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tontine {

QuadratureGrid::QuadratureGrid(double horizon, int steps) : horizon_{horizon}, steps_{steps} {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("quadrature horizon must be positive and finite");
    }
    if (steps < 2 || steps % 2 != 0) {
        throw std::invalid_argument("Simpson's rule needs a positive even number of steps");
    }
    const double h = horizon_ / steps_;
    weights_.assign(static_cast<std::size_t>(steps_) + 1, 0.0);
    for (int k = 0; k <= steps_; ++k) {
        double c = 1.0;
        if (k != 0 && k != steps_) {
            c = (k % 2 == 1) ? 4.0 : 2.0;
        }
        weights_[static_cast<std::size_t>(k)] = c * h / 3.0;
    }
}

std::vector<double> QuadratureGrid::nodes() const {
    std::vector<double> t(size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        t[k] = node(k);
    }
    return t;
}

QuadratureGrid grid_for_age(double youngest_age, int steps, double horizon_age) {
    if (!(horizon_age > youngest_age)) {
        throw std::invalid_argument("horizon age must exceed the youngest age in the pool");
    }
    return QuadratureGrid(horizon_age - youngest_age, steps);
}

double integrate(const std::function<double(double)> &f, const QuadratureGrid &grid) {
    const auto w = grid.weights();
    double total = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double t = grid.node(k);
        const double v = f(t);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "integrand is not finite at node " << k << " (t=" << t << "): " << v;
            throw std::domain_error(msg.str());
        }
        total += w[k] * v;
    }
    return total;
}

double integrate_samples(std::span<const double> values, const QuadratureGrid &grid) {
    const auto w = grid.weights();
    if (values.size() != w.size()) {
        throw std::invalid_argument("sample count does not match the quadrature grid");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!std::isfinite(values[k])) {
            std::ostringstream msg;
            msg << "integrand is not finite at node " << k << " (t=" << grid.node(k) << ")";
            throw std::domain_error(msg.str());
        }
        total += w[k] * values[k];
    }
    return total;
}

double solve_scalar(const std::function<double(double)> &g, double lo, double hi, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("solve_scalar: tolerance must be positive");
    }
    if (lo > hi) {
        std::swap(lo, hi);
    }
    double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) {
        return lo;
    }
    if (ghi == 0.0) {
        return hi;
    }
    if (!std::isfinite(glo) || !std::isfinite(ghi) || glo * ghi > 0.0) {
        std::ostringstream msg;
        msg << "solve_scalar: [" << lo << ", " << hi << "] does not bracket a root (g(lo)=" << glo
            << ", g(hi)=" << ghi << ")";
        throw std::domain_error(msg.str());
    }
    // Bisection halves the bracket each round; 200 rounds exhausts double precision.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double gmid = g(mid);
        if (std::fabs(gmid) < tol || (hi - lo) < tol) {
            return mid;
        }
        if ((gmid < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace tontine
