#pragma once

#include "tontine/mortality.hpp"
#include "tontine/numerics.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tontine {

/// A group of identical subscribers: same age, same investment each.
struct Cohort {
    double age;
    double investment; ///< dollars per head
    int size;          ///< head count
};

class PoolSpec {
public:
    explicit PoolSpec(std::vector<Cohort> cohorts);

    std::size_t cohort_count() const noexcept { return cohorts_.size(); }
    const std::vector<Cohort> &cohorts() const noexcept { return cohorts_; }
    const Cohort &operator[](std::size_t i) const { return cohorts_.at(i); }

    int total_heads() const noexcept { return heads_; }
    double total_wealth() const noexcept { return wealth_; }
    /// n_i w_i / w, the share of the initial investment made by cohort i.
    double wealth_fraction(std::size_t i) const;
    double youngest_age() const noexcept;
    bool is_homogeneous_age() const noexcept;

private:
    std::vector<Cohort> cohorts_;
    int heads_ = 0;
    double wealth_ = 0.0;
};

PoolSpec read_pool_csv(std::istream &in);
PoolSpec read_pool_csv(const std::string &path);
/// Writes the `age,investment,count` format with shortest round-trip numbers,
/// so read_pool_csv(write_pool_csv(p)) reproduces p exactly.
std::string write_pool_csv(const PoolSpec &pool);

enum class Normalization {
    max_one,    ///< largest rate equals 1
    anchor_one, ///< the rate of one chosen cohort equals 1
    annuity,    ///< absolute rates, pi_i = 1/a_{x_i}
};

/// Shares received per dollar invested, one rate per cohort. Share price is 1/pi_i.
class ParticipationRates {
public:
    /// Scales `rates` to the requested convention (annuity leaves them untouched).
    ParticipationRates(std::vector<double> rates, Normalization norm = Normalization::max_one,
                       std::size_t anchor = 0);

    std::size_t size() const noexcept { return rates_.size(); }
    double operator[](std::size_t i) const { return rates_.at(i); }
    std::span<const double> values() const noexcept { return rates_; }
    Normalization normalization() const noexcept { return norm_; }
    std::size_t anchor() const noexcept { return anchor_; }

    double share_price(std::size_t i) const { return 1.0 / rates_.at(i); }
    ParticipationRates renormalized(Normalization norm, std::size_t anchor = 0) const;

private:
    std::vector<double> rates_;
    Normalization norm_;
    std::size_t anchor_;
};

/// Truncated binomial law: prob[k] = P(N = offset + k).
struct CountDistribution {
    int offset = 0;
    std::vector<double> prob;
};

/// Bin(trials, p) shifted by `offset`, dropping tail terms below `cutoff`.
/// Probabilities come from log-factorials so large trial counts stay finite.
CountDistribution binomial_distribution(int trials, double p, int offset = 0, double cutoff = 0.0);

/// Calls visit(counts, probability) for every point of the product support.
template <class Visitor>
void for_each_joint_outcome(std::span<const CountDistribution> marginals, Visitor &&visit);

/// E_i[pi_i / sum_j pi_j w_j N_j(t)] given member i alive: N_i - 1 ~ Bin(n_i - 1, p_i),
/// N_j ~ Bin(n_j, p_j). Exact enumeration of the joint support; `survival` holds p_j.
double conditional_reciprocal_expectation(const PoolSpec &pool, const ParticipationRates &rates,
                                          std::size_t i, std::span<const double> survival);

double conditional_reciprocal_expectation(const PoolSpec &pool, const ParticipationRates &rates,
                                          std::size_t i, const MortalityModel &model, double t);

/// Probability that every subscriber has died by time t.
double all_dead_probability(const PoolSpec &pool, const MortalityModel &model, double t);

/// alpha_A: share of the initial investment contributed by the cohorts in `subset`.
double subset_weight(const PoolSpec &pool, std::span<const std::size_t> subset);

/// Pool, mortality, rate and quadrature grid bound together, with the
/// survival probabilities and truncated survivor-count laws precomputed at
/// every node. This is the engine behind every expectation in the library.
class PoolGrid {
public:
    /// Binomial tail terms smaller than this are dropped from the enumeration.
    static constexpr double default_cutoff = 1e-18;

    PoolGrid(PoolSpec pool, MortalityModel model, EconomicParams econ, QuadratureGrid grid,
             double cutoff = default_cutoff);
    /// Grid taking the youngest cohort to the default horizon age.
    PoolGrid(PoolSpec pool, MortalityModel model = {}, EconomicParams econ = EconomicParams{},
             int steps = QuadratureGrid::default_steps);

    const PoolSpec &pool() const noexcept { return pool_; }
    const MortalityModel &model() const noexcept { return model_; }
    const EconomicParams &economy() const noexcept { return econ_; }
    const QuadratureGrid &grid() const noexcept { return grid_; }

    std::size_t node_count() const noexcept { return grid_.size(); }
    double time(std::size_t node) const noexcept { return grid_.node(node); }
    double discount(std::size_t node) const noexcept { return discount_[node]; }
    double survival(std::size_t cohort, std::size_t node) const {
        return survival_[node * pool_.cohort_count() + cohort];
    }
    double all_dead(std::size_t node) const noexcept { return all_dead_[node]; }
    std::span<const CountDistribution> counts(std::size_t node) const {
        return {counts_.data() + node * pool_.cohort_count(), pool_.cohort_count()};
    }

    /// a_x for cohort i on this grid.
    double annuity_factor(std::size_t cohort) const { return annuity_[cohort]; }

    /// p_i(t) E_i[pi_i / S(t)] at a node, where S = sum_j pi_j w_j N_j. Computed from the
    /// unconditional law via p_i E_i[g(N)] = E[(N_i/n_i) g(N)].
    double weighted_reciprocal(std::span<const double> rates, std::size_t cohort,
                               std::size_t node) const;
    /// The same quantity for every cohort in one pass.
    std::vector<double> weighted_reciprocals(std::span<const double> rates,
                                             std::size_t node) const;

private:
    PoolSpec pool_;
    MortalityModel model_;
    EconomicParams econ_;
    QuadratureGrid grid_;
    std::vector<double> discount_;
    std::vector<double> survival_;
    std::vector<double> all_dead_;
    std::vector<double> annuity_;
    std::vector<CountDistribution> counts_;
};

namespace detail {

template <class Visitor>
void visit_from(std::span<const CountDistribution> marginals, std::size_t depth, double prob,
                std::vector<int> &counts, Visitor &visit) {
    const auto &law = marginals[depth];
    const bool last = depth + 1 == marginals.size();
    for (std::size_t k = 0; k < law.prob.size(); ++k) {
        const double p = prob * law.prob[k];
        if (p == 0.0) {
            continue;
        }
        counts[depth] = law.offset + static_cast<int>(k);
        if (last) {
            visit(std::span<const int>(counts), p);
        } else {
            visit_from(marginals, depth + 1, p, counts, visit);
        }
    }
}

} // namespace detail

template <class Visitor>
void for_each_joint_outcome(std::span<const CountDistribution> marginals, Visitor &&visit) {
    if (marginals.empty()) {
        return;
    }
    std::vector<int> counts(marginals.size(), 0);
    detail::visit_from(marginals, 0, 1.0, counts, visit);
}

} // namespace tontine
