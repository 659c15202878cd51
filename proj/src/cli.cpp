#include "tontine/cli.hpp"

#include "tontine/format.hpp"
#include "tontine/sim.hpp"
#include "tontine/welfare.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace tontine::cli {

namespace {

double parse_number(const std::string &text, const std::string &context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad number '" + text + "' in " + context);
    }
    return v;
}

QuadratureGrid grid_for(const PoolSpec &pool, const RunConfig &config) {
    return grid_for_age(pool.youngest_age(), config.steps, config.horizon_age);
}

PoolGrid make_pool_grid(const PoolSpec &pool, const RunConfig &config) {
    return PoolGrid(pool, config.mortality, config.economy, grid_for(pool, config));
}

PayoutFunction make_payout(const DesignChoice &design, const PoolGrid &pg) {
    const auto &pool = pg.pool();
    switch (design.kind) {
    case PayoutKind::flat:
        return flat_payout(pg.economy(), pg.grid());
    case PayoutKind::natural_for_age:
        return natural_for_age(design.parameter, pg.model(), pg.economy(), pg.grid());
    case PayoutKind::proportional:
        return proportional_payout(pool, pg.model(), pg.economy(), pg.grid()).first;
    case PayoutKind::crra_optimal:
        if (!pool.is_homogeneous_age()) {
            throw std::invalid_argument("the crra design needs a pool with a single age");
        }
        return crra_optimal_payout(pool.total_heads(), design.parameter, pool[0].age, pg.model(),
                                   pg.economy(), pg.grid());
    case PayoutKind::natural:
        break;
    }
    throw std::logic_error("natural design is solved jointly with the rates");
}

std::string cell(double v) { return format_number(v); }

PoolSpec two_cohort_pool(double x1, double w1, int n1, double x2, double w2, int n2) {
    return PoolSpec({Cohort{x1, w1, n1}, Cohort{x2, w2, n2}});
}

std::vector<int> sizes_or(const RunConfig &config, std::vector<int> defaults) {
    return config.sizes.empty() ? defaults : config.sizes;
}

void table_two_cohort(const RunConfig &config, std::ostream &out) {
    out << "n,design,delta1_bp,delta2_bp,pi2\n";
    for (int n : sizes_or(config, {1, 5, 10, 50})) {
        const PoolGrid pg = make_pool_grid(two_cohort_pool(65, 1, n, 75, 1, n), config);
        auto row = [&](const char *name, const ParticipationRates &rates,
                       const PayoutFunction &d) {
            const auto r = rates.renormalized(Normalization::anchor_one, 0);
            const auto delta = loadings(r, d, pg, 1.0).basis_points;
            out << n << ',' << name << ',' << cell(delta[0]) << ',' << cell(delta[1]) << ','
                << cell(r[1]) << '\n';
        };
        const auto d65 = natural_for_age(65, pg.model(), pg.economy(), pg.grid());
        row("A", solve_equitable(d65, pg, {}, config.tolerance).rates, d65);
        const auto natural = solve_natural_equitable(pg, config.tolerance);
        row("B", natural.equity.rates, natural.payout);
        const auto [dc, rc] = proportional_payout(pg.pool(), pg.model(), pg.economy(), pg.grid());
        row("C", rc, dc);
        const auto d75 = natural_for_age(75, pg.model(), pg.economy(), pg.grid());
        row("D", solve_equitable(d75, pg, {}, config.tolerance).rates, d75);
    }
}

void table_three_cohort(const RunConfig &config, std::ostream &out) {
    out << "n1,n2,n3,design,pi1,pi2,pi3,delta1_bp,delta2_bp,delta3_bp\n";
    for (int n : sizes_or(config, {5, 10, 20})) {
        const PoolSpec pool({Cohort{60, 1, n}, Cohort{65, 1, 2 * n}, Cohort{70, 1, n}});
        const PoolGrid pg = make_pool_grid(pool, config);
        auto row = [&](const char *name, const ParticipationRates &rates,
                       const PayoutFunction &d) {
            const auto r = rates.renormalized(Normalization::anchor_one, 1);
            const auto delta = loadings(r, d, pg, 1.0).basis_points;
            out << n << ',' << 2 * n << ',' << n << ',' << name;
            for (std::size_t i = 0; i < 3; ++i) {
                out << ',' << cell(r[i]);
            }
            for (double v : delta) {
                out << ',' << cell(v);
            }
            out << '\n';
        };
        const auto d65 = natural_for_age(65, pg.model(), pg.economy(), pg.grid());
        row("A", solve_equitable(d65, pg, {}, config.tolerance).rates, d65);
        const auto natural = solve_natural_equitable(pg, config.tolerance);
        row("B", natural.equity.rates, natural.payout);
        const auto [dc, rc] = proportional_payout(pool, pg.model(), pg.economy(), pg.grid());
        row("C", rc, dc);
    }
}

void table_certainty_equivalents(const RunConfig &config, std::ostream &out) {
    const double age = 65.0;
    const auto sizes = sizes_or(config, {10, 100});
    const auto grid = grid_for_age(age, config.steps, config.horizon_age);
    out << "gamma,design";
    for (int n : sizes) {
        out << ",n_" << n;
    }
    out << '\n';
    struct Row {
        const char *label;
        ProductDesign design;
    };
    for (double gamma : {0.5, 1.0, 2.0, 5.0}) {
        for (const Row row : {Row{"A", ProductDesign::log_optimal_paf},
                              Row{"B", ProductDesign::optimal_tontine},
                              Row{"C", ProductDesign::gsa}}) {
            // The PAF row is only available for log utility, the GSA row below gamma 2.
            if ((row.design == ProductDesign::log_optimal_paf && gamma != 1.0) ||
                (row.design == ProductDesign::gsa && gamma >= 2.0)) {
                continue;
            }
            out << cell(gamma) << ',' << row.label;
            for (int n : sizes) {
                out << ','
                    << cell(certainty_equivalent(row.design, age, n, gamma, config.mortality,
                                                 config.economy, grid));
            }
            out << '\n';
        }
    }
}

/// Equitable pi_2 (pi_1 = 1) under d, or NaN when no equitable rates exist.
double outlier_rate(const PoolSpec &pool, double design_age, const RunConfig &config) {
    const PoolGrid pg = make_pool_grid(pool, config);
    const auto d = natural_for_age(design_age, pg.model(), pg.economy(), pg.grid());
    try {
        return solve_equitable(d, pg, {}, config.tolerance).rates[1];
    } catch (const InfeasiblePoolError &) {
        return std::nan("");
    }
}

void figure_age_outlier(const RunConfig &config, std::ostream &out) {
    out << "x2,n1,pi2\n";
    for (double x2 : {70.0, 75.0, 80.0, 85.0, 90.0}) {
        for (int n1 : sizes_or(config, {1, 2, 3, 5, 10, 20, 50, 100})) {
            const double pi2 = outlier_rate(two_cohort_pool(65, 1, n1, x2, 1, 1), 65, config);
            out << cell(x2) << ',' << n1 << ',' << cell(pi2) << '\n';
        }
    }
}

void figure_wealth_outlier(const RunConfig &config, std::ostream &out) {
    out << "w2,n1,pi2\n";
    for (double w2 : {20.0, 100.0, 500.0}) {
        for (int n1 : sizes_or(config, {1, 2, 5, 10, 23, 50, 114, 150, 200})) {
            const double pi2 = outlier_rate(two_cohort_pool(65, 1, n1, 65, w2, 1), 65, config);
            out << cell(w2) << ',' << n1 << ',' << cell(pi2) << '\n';
        }
    }
}

std::vector<double> monthly_times(double horizon) {
    std::vector<double> t;
    const auto months = static_cast<long>(std::floor(horizon * 12.0 + 1e-9));
    for (long k = 0; k <= months; ++k) {
        t.push_back(static_cast<double>(k) / 12.0);
    }
    return t;
}

void figure_payout_path(const RunConfig &config, std::ostream &out) {
    const auto pool = two_cohort_pool(65, 1, 200, 85, 1, 50);
    const PoolGrid pg = make_pool_grid(pool, config);
    const auto natural = solve_natural_equitable(pg, config.tolerance);
    const auto path = simulate_tontine(pool, natural.payout, natural.equity.rates, pg.model(),
                                       config.seed, monthly_times(pg.grid().horizon()));
    write_path_csv(out, path);
}

void figure_gsa_vs_proportional(const RunConfig &config, std::ostream &out) {
    const auto pool = two_cohort_pool(65, 1, 5, 75, 1, 5);
    const PoolGrid pg = make_pool_grid(pool, config);
    const double dt = 1.0 / 12.0;
    const auto gsa = simulate_gsa(pool, pg.model(), pg.economy(), dt, config.seed,
                                  pg.grid().horizon(), config.horizon_age);
    const auto d = proportional_payout(pool, pg.model(), pg.economy(), pg.grid()).first;
    out << "t,gsa_total,proportional_total\n";
    const auto end = gsa.extinction_index();
    for (std::size_t k = 0; k < end; ++k) {
        const double t = gsa.times[k];
        out << cell(t) << ',' << cell(gsa.total_payout[k]) << ','
            << cell(pool.total_wealth() * d(t) * dt) << '\n';
    }
}

} // namespace

DesignChoice parse_design(const std::string &text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto require_arg = [&](bool needed) {
        if (needed == arg.empty()) {
            throw std::invalid_argument("bad design '" + text +
                                        "' (expected flat, natural-age:<x>, natural, "
                                        "proportional or crra:<gamma>)");
        }
    };
    if (head == "flat") {
        require_arg(false);
        return {PayoutKind::flat, 0.0};
    }
    if (head == "natural") {
        require_arg(false);
        return {PayoutKind::natural, 0.0};
    }
    if (head == "proportional") {
        require_arg(false);
        return {PayoutKind::proportional, 0.0};
    }
    if (head == "natural-age") {
        require_arg(true);
        return {PayoutKind::natural_for_age, parse_number(arg, "design")};
    }
    if (head == "crra") {
        require_arg(true);
        const double gamma = parse_number(arg, "design");
        if (!(gamma > 0.0)) {
            throw std::invalid_argument("crra design needs gamma > 0");
        }
        return {PayoutKind::crra_optimal, gamma};
    }
    throw std::invalid_argument("unknown design '" + text +
                                "' (expected flat, natural-age:<x>, natural, proportional or "
                                "crra:<gamma>)");
}

int quote(const RunConfig &config, std::ostream &out) {
    if (config.pool_path.empty()) {
        throw std::invalid_argument("quote needs --pool <csv>");
    }
    return quote(read_pool_csv(config.pool_path), config, out);
}

int quote(const PoolSpec &pool, const RunConfig &config, std::ostream &out) {
    const PoolGrid pg = make_pool_grid(pool, config);
    try {
        if (config.design.kind == PayoutKind::natural) {
            const auto sol = solve_natural_equitable(pg, config.tolerance);
            write_equity_csv(out, pool, assess(sol.equity.rates, sol.payout, pg));
            return 0;
        }
        const auto d = make_payout(config.design, pg);
        const auto sol = solve_equitable(d, pg, {}, config.tolerance);
        write_equity_csv(out, pool, assess(sol.rates, d, pg));
        return 0;
    } catch (const InfeasiblePoolError &e) {
        write_existence_csv(out, e.check());
        return exit_infeasible;
    }
}

const std::vector<std::string> &reproducible_ids() {
    static const std::vector<std::string> ids = {
        "table-ce",         "table-2cohort",      "table-3cohort",          "fig-age-outlier",
        "fig-wealth-outlier", "fig-payout-path", "fig-gsa-vs-proportional"};
    return ids;
}

void reproduce(const std::string &id, const RunConfig &config, std::ostream &out) {
    if (id == "table-ce") {
        table_certainty_equivalents(config, out);
    } else if (id == "table-2cohort") {
        table_two_cohort(config, out);
    } else if (id == "table-3cohort") {
        table_three_cohort(config, out);
    } else if (id == "fig-age-outlier") {
        figure_age_outlier(config, out);
    } else if (id == "fig-wealth-outlier") {
        figure_wealth_outlier(config, out);
    } else if (id == "fig-payout-path") {
        figure_payout_path(config, out);
    } else if (id == "fig-gsa-vs-proportional") {
        figure_gsa_vs_proportional(config, out);
    } else {
        throw std::invalid_argument("unknown table or figure id '" + id + "'");
    }
}

} // namespace tontine::cli
