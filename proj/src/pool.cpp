#include "tontine/pool.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tontine {

PoolSpec::PoolSpec(std::vector<Cohort> cohorts) : cohorts_{std::move(cohorts)} {
    if (cohorts_.empty()) {
        throw std::invalid_argument("a pool needs at least one cohort");
    }
    for (const auto &c : cohorts_) {
        if (c.size < 1) {
            throw std::invalid_argument("cohort size must be at least 1");
        }
        if (!(c.investment > 0.0) || !std::isfinite(c.investment)) {
            throw std::invalid_argument("per-head investment must be positive and finite");
        }
        if (!(c.age >= 0.0) || !std::isfinite(c.age)) {
            throw std::invalid_argument("cohort age must be non-negative and finite");
        }
        heads_ += c.size;
        wealth_ += c.size * c.investment;
    }
}

double PoolSpec::wealth_fraction(std::size_t i) const {
    const auto &c = cohorts_.at(i);
    return c.size * c.investment / wealth_;
}

double PoolSpec::youngest_age() const noexcept {
    return std::min_element(cohorts_.begin(), cohorts_.end(),
                            [](const Cohort &a, const Cohort &b) { return a.age < b.age; })
        ->age;
}

bool PoolSpec::is_homogeneous_age() const noexcept {
    return std::all_of(cohorts_.begin(), cohorts_.end(),
                       [&](const Cohort &c) { return c.age == cohorts_.front().age; });
}

namespace {

std::string trim(std::string s) {
    const auto issp = [](unsigned char ch) { return std::isspace(ch) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(trim(field));
    }
    return out;
}

template <class T> T parse_field(const std::string &text, int line_no, const char *what) {
    T value{};
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("pool csv line " + std::to_string(line_no) + ": bad " + what +
                                    " '" + text + "'");
    }
    return value;
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

PoolSpec read_pool_csv(std::istream &in) {
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::vector<Cohort> cohorts;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto fields = split(line);
        if (!have_header) {
            if (fields != std::vector<std::string>{"age", "investment", "count"}) {
                throw std::invalid_argument("pool csv must start with header 'age,investment,count'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 3) {
            throw std::invalid_argument("pool csv line " + std::to_string(line_no) +
                                        ": expected 3 fields");
        }
        cohorts.push_back({parse_field<double>(fields[0], line_no, "age"),
                           parse_field<double>(fields[1], line_no, "investment"),
                           parse_field<int>(fields[2], line_no, "count")});
    }
    if (!have_header) {
        throw std::invalid_argument("pool csv is empty");
    }
    return PoolSpec(std::move(cohorts));
}

PoolSpec read_pool_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open pool file " + path);
    }
    return read_pool_csv(in);
}

std::string write_pool_csv(const PoolSpec &pool) {
    std::string out = "age,investment,count\n";
    for (const auto &c : pool.cohorts()) {
        out += shortest(c.age) + "," + shortest(c.investment) + "," + std::to_string(c.size) + "\n";
    }
    return out;
}

ParticipationRates::ParticipationRates(std::vector<double> rates, Normalization norm,
                                       std::size_t anchor)
    : rates_{std::move(rates)}, norm_{norm}, anchor_{anchor} {
    if (rates_.empty()) {
        throw std::invalid_argument("participation rates must not be empty");
    }
    for (double r : rates_) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("participation rates must be positive and finite");
        }
    }
    double scale = 1.0;
    switch (norm_) {
    case Normalization::max_one:
        scale = *std::max_element(rates_.begin(), rates_.end());
        anchor_ = 0;
        break;
    case Normalization::anchor_one:
        if (anchor_ >= rates_.size()) {
            throw std::out_of_range("normalization anchor out of range");
        }
        scale = rates_[anchor_];
        break;
    case Normalization::annuity:
        anchor_ = 0;
        break;
    }
    for (double &r : rates_) {
        r /= scale;
    }
}

ParticipationRates ParticipationRates::renormalized(Normalization norm, std::size_t anchor) const {
    return ParticipationRates(rates_, norm, anchor);
}

CountDistribution binomial_distribution(int trials, double p, int offset, double cutoff) {
    if (trials < 0 || !(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("binomial_distribution: need trials >= 0 and p in [0, 1]");
    }
    CountDistribution law;
    if (p == 0.0 || p == 1.0 || trials == 0) {
        law.offset = offset + (p == 1.0 ? trials : 0);
        law.prob = {1.0};
        return law;
    }
    // Ratio recurrence outward from the mode, then normalization: accurate to a
    // few ulps for any trial count, unlike summing log-factorials.
    const double odds = p / (1.0 - p);
    const int n = trials;
    const int mode = std::min(n, static_cast<int>(std::floor((n + 1) * p)));
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    pmf[static_cast<std::size_t>(mode)] = 1.0;
    for (int k = mode; k < n; ++k) {
        pmf[k + 1] = pmf[k] * (n - k) / (k + 1.0) * odds;
    }
    for (int k = mode; k > 0; --k) {
        pmf[k - 1] = pmf[k] * k / (n - k + 1.0) / odds;
    }
    double total = 0.0;
    for (double v : pmf) {
        total += v;
    }
    for (double &v : pmf) {
        v /= total;
    }
    std::size_t lo = 0;
    std::size_t hi = pmf.size();
    if (cutoff > 0.0) {
        while (lo + 1 < hi && pmf[lo] < cutoff) {
            ++lo;
        }
        while (hi - 1 > lo && pmf[hi - 1] < cutoff) {
            --hi;
        }
    }
    law.offset = offset + static_cast<int>(lo);
    law.prob.assign(pmf.begin() + static_cast<std::ptrdiff_t>(lo),
                    pmf.begin() + static_cast<std::ptrdiff_t>(hi));
    return law;
}

double conditional_reciprocal_expectation(const PoolSpec &pool, const ParticipationRates &rates,
                                          std::size_t i, std::span<const double> survival) {
    const auto K = pool.cohort_count();
    if (rates.size() != K || survival.size() != K || i >= K) {
        throw std::invalid_argument("conditional_reciprocal_expectation: size mismatch");
    }
    std::vector<CountDistribution> laws;
    std::vector<double> coef(K);
    for (std::size_t j = 0; j < K; ++j) {
        const auto &c = pool[j];
        coef[j] = rates[j] * c.investment;
        laws.push_back(j == i ? binomial_distribution(c.size - 1, survival[j], 1)
                              : binomial_distribution(c.size, survival[j]));
    }
    double total = 0.0;
    for_each_joint_outcome(std::span<const CountDistribution>(laws),
                           [&](std::span<const int> n, double prob) {
                               double s = 0.0;
                               for (std::size_t j = 0; j < K; ++j) {
                                   s += coef[j] * n[j];
                               }
                               total += prob / s;
                           });
    return rates[i] * total;
}

double conditional_reciprocal_expectation(const PoolSpec &pool, const ParticipationRates &rates,
                                          std::size_t i, const MortalityModel &model, double t) {
    std::vector<double> p;
    for (const auto &c : pool.cohorts()) {
        p.push_back(model.survival(c.age, t));
    }
    return conditional_reciprocal_expectation(pool, rates, i, p);
}

double all_dead_probability(const PoolSpec &pool, const MortalityModel &model, double t) {
    double prob = 1.0;
    for (const auto &c : pool.cohorts()) {
        prob *= std::pow(model.death_probability(c.age, t), c.size);
    }
    return prob;
}

double subset_weight(const PoolSpec &pool, std::span<const std::size_t> subset) {
    if (subset.empty()) {
        throw std::invalid_argument("subset_weight: subset must be nonempty");
    }
    std::vector<bool> seen(pool.cohort_count(), false);
    double total = 0.0;
    for (auto k : subset) {
        if (k >= pool.cohort_count()) {
            throw std::out_of_range("subset_weight: cohort index out of range");
        }
        if (!seen[k]) {
            seen[k] = true;
            total += pool.wealth_fraction(k);
        }
    }
    return total;
}

PoolGrid::PoolGrid(PoolSpec pool, MortalityModel model, EconomicParams econ, QuadratureGrid grid,
                   double cutoff)
    : pool_{std::move(pool)}, model_{model}, econ_{econ}, grid_{std::move(grid)} {
    const auto K = pool_.cohort_count();
    const auto nodes = grid_.size();
    discount_.resize(nodes);
    survival_.resize(nodes * K);
    all_dead_.resize(nodes);
    counts_.reserve(nodes * K);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double t = grid_.node(k);
        discount_[k] = econ_.discount(t);
        double dead = 1.0;
        for (std::size_t j = 0; j < K; ++j) {
            const auto &c = pool_[j];
            const double p = model_.survival(c.age, t);
            survival_[k * K + j] = p;
            dead *= std::pow(1.0 - p, c.size);
            counts_.push_back(binomial_distribution(c.size, p, 0, cutoff));
        }
        all_dead_[k] = dead;
    }
    annuity_.resize(K);
    std::vector<double> f(nodes);
    for (std::size_t j = 0; j < K; ++j) {
        for (std::size_t k = 0; k < nodes; ++k) {
            f[k] = discount_[k] * survival(j, k);
        }
        annuity_[j] = integrate_samples(f, grid_);
    }
}

PoolGrid::PoolGrid(PoolSpec pool, MortalityModel model, EconomicParams econ, int steps)
    : PoolGrid(pool, model, econ, grid_for_age(pool.youngest_age(), steps)) {}

double PoolGrid::weighted_reciprocal(std::span<const double> rates, std::size_t cohort,
                                     std::size_t node) const {
    const auto K = pool_.cohort_count();
    std::vector<double> coef(K);
    for (std::size_t j = 0; j < K; ++j) {
        coef[j] = rates[j] * pool_[j].investment;
    }
    const double scale = rates[cohort] / pool_[cohort].size;
    double total = 0.0;
    for_each_joint_outcome(counts(node), [&](std::span<const int> n, double prob) {
        if (n[cohort] == 0) {
            return;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            s += coef[j] * n[j];
        }
        total += prob * n[cohort] / s;
    });
    return scale * total;
}

std::vector<double> PoolGrid::weighted_reciprocals(std::span<const double> rates,
                                                   std::size_t node) const {
    const auto K = pool_.cohort_count();
    std::vector<double> coef(K);
    for (std::size_t j = 0; j < K; ++j) {
        coef[j] = rates[j] * pool_[j].investment;
    }
    std::vector<double> total(K, 0.0);
    for_each_joint_outcome(counts(node), [&](std::span<const int> n, double prob) {
        double s = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            s += coef[j] * n[j];
        }
        if (s == 0.0) {
            return;
        }
        const double ratio = prob / s;
        for (std::size_t j = 0; j < K; ++j) {
            total[j] += ratio * n[j];
        }
    });
    for (std::size_t j = 0; j < K; ++j) {
        total[j] *= rates[j] / pool_[j].size;
    }
    return total;
}

} // namespace tontine
