#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "abacsim/cost_eval.hpp"

using namespace abacsim;
using cost::CurveReport;
using cost::ExperimentConfig;
using cost::RunMode;
using gas::SearchMode;

namespace {

ExperimentConfig curve_config(std::int64_t m_max, std::int64_t p,
                              SearchMode search = SearchMode::PerPair) {
    ExperimentConfig config;
    config.m_max = m_max;
    config.pairs_per_policy = p;
    config.search = search;
    return config;
}

const cost::Crossover* find_crossover(const CurveReport& report, std::string_view label) {
    for (const auto& crossover : report.crossovers) {
        if (crossover.label == label) return &crossover;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("deployment report reproduces the published totals") {
    auto report = cost::deployment_report();
    CHECK(report.proposed_gas == 4'943'332);
    CHECK(report.acl_gas == 2'809'093);
    CHECK(report.metered_proposed_gas == report.proposed_gas);

    CHECK(gas::txfee(report.proposed_gas, report.params).usd_text() == "5.22016");
    CHECK(gas::txfee(report.acl_gas, report.params).usd_text() == "2.96640");

    std::ostringstream csv;
    report.write_csv(csv);
    CHECK(csv.str() ==
          "scheme,gas,usd\n"
          "acl,2809093,2.96640\n"
          "proposed,4943332,5.22016\n");

    gas::CostParams free_gas;
    free_gas.gas_price_gwei = 0;
    auto free_report = cost::deployment_report(free_gas);
    CHECK(gas::txfee(free_report.proposed_gas, free_gas).usd_e5() == 0);
    CHECK(gas::txfee(free_report.acl_gas, free_gas).usd_e5() == 0);
}

TEST_CASE("operating curve rows carry cumulative costs including deployment") {
    auto report = cost::operating_curve(curve_config(10, 1));
    REQUIRE(report.rows.size() == 10);

    // Component sums: deployment + m·(G_SA+G_OA) + n·G_PA + 195,000 + searches.
    CHECK(report.rows[0].proposed_gas == 5'973'666);
    CHECK(report.rows[1].proposed_gas == 6'819'518);
    CHECK(report.rows[2].proposed_gas == 7'675'888);
    CHECK(report.rows[0].acl_gas == 2'809'093 + 1'945'067);
    CHECK(report.rows[2].acl_gas == 2'809'093 + 3 * 1'945'067);

    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].proposed_gas > report.rows[i - 1].proposed_gas);
        CHECK(report.rows[i].acl_gas > report.rows[i - 1].acl_gas);
    }
}

TEST_CASE("the schemes cross exactly at m = 3 for one policy per pair") {
    auto report = cost::operating_curve(curve_config(10, 1));
    CHECK(report.rows[0].proposed_gas > report.rows[0].acl_gas);
    CHECK(report.rows[1].proposed_gas > report.rows[1].acl_gas);
    CHECK(report.rows[2].proposed_gas < report.rows[2].acl_gas);

    auto below = find_crossover(report, "proposed_below_acl");
    REQUIRE(below != nullptr);
    CHECK(below->m == 3);
}

TEST_CASE("second crossovers land inside the published bands (per-pair search)") {
    struct Band {
        std::int64_t p;
        double target;
        double tolerance;
    };
    for (auto [p, target, tolerance] :
         {Band{1, 214, 0.03}, Band{2, 489, 0.05}, Band{3, 761, 0.05}}) {
        auto report = cost::operating_curve(curve_config(1000, p));
        auto above = find_crossover(report, "proposed_above_acl");
        REQUIRE(above != nullptr);
        CHECK(above->m >= static_cast<std::int64_t>(target * (1 - tolerance)));
        CHECK(above->m <= static_cast<std::int64_t>(target * (1 + tolerance)) + 1);

        // Bracketing: the crossover's neighbors have opposite-signed diffs.
        const auto& rows = report.rows;
        std::size_t at = static_cast<std::size_t>(above->m - 1);
        REQUIRE(at >= 1);
        CHECK(rows[at - 1].proposed_gas < rows[at - 1].acl_gas);
        CHECK(rows[at].proposed_gas > rows[at].acl_gas);
    }
}

TEST_CASE("an all-pairs shared policy grows linearly and never re-crosses") {
    ExperimentConfig config = curve_config(1000, 1);
    config.shared_all = true;
    auto report = cost::operating_curve(config);
    CHECK(find_crossover(report, "proposed_above_acl") == nullptr);

    // Per-row growth is constant once the single policy is in place.
    gas::Gas step = report.rows[5].proposed_gas - report.rows[4].proposed_gas;
    for (std::size_t i = 5; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].proposed_gas - report.rows[i - 1].proposed_gas == step);
    }
}

TEST_CASE("more sharing never costs more, and every curve is non-decreasing") {
    auto p1 = cost::operating_curve(curve_config(200, 1));
    auto p2 = cost::operating_curve(curve_config(200, 2));
    auto p5 = cost::operating_curve(curve_config(200, 5));
    for (std::size_t i = 0; i < 200; ++i) {
        CHECK(p1.rows[i].proposed_gas >= p2.rows[i].proposed_gas);
        CHECK(p2.rows[i].proposed_gas >= p5.rows[i].proposed_gas);
        if (i > 0) {
            CHECK(p2.rows[i].proposed_gas >= p2.rows[i - 1].proposed_gas);
            CHECK(p5.rows[i].proposed_gas >= p5.rows[i - 1].proposed_gas);
        }
    }
}

TEST_CASE("metered runs equal the analytic per-policy curve integer-exactly") {
    for (std::int64_t p : {1, 2, 3}) {
        ExperimentConfig metered = curve_config(200, p, SearchMode::PerPolicy);
        metered.run = RunMode::Metered;
        ExperimentConfig analytic = curve_config(200, p, SearchMode::PerPolicy);

        auto metered_report = cost::operating_curve(metered);
        auto analytic_report = cost::operating_curve(analytic);
        REQUIRE(metered_report.rows.size() == analytic_report.rows.size());
        for (std::size_t i = 0; i < metered_report.rows.size(); ++i) {
            CHECK(metered_report.rows[i].proposed_gas == analytic_report.rows[i].proposed_gas);
            CHECK(metered_report.rows[i].acl_gas == analytic_report.rows[i].acl_gas);
        }
    }
}

TEST_CASE("experiment configs are validated") {
    ExperimentConfig bad = curve_config(0, 1);
    std::string why;
    CHECK_FALSE(bad.validate(&why));

    ExperimentConfig metered = curve_config(500, 1, SearchMode::PerPolicy);
    metered.run = RunMode::Metered;
    CHECK_FALSE(metered.validate(&why));  // above the desk-scale ceiling
    metered.m_max = 100;
    CHECK(metered.validate());
    metered.search = SearchMode::PerPair;
    CHECK_FALSE(metered.validate(&why));

    CHECK_THROWS_AS(cost::operating_curve(bad), std::invalid_argument);
}

TEST_CASE("scenario 1: two new lights for a ten-member laboratory") {
    auto report = cost::scenario1();

    const auto* best = report.row("proposed_best");
    REQUIRE(best != nullptr);
    CHECK(best->gas_cost == 310'136);
    CHECK(best->paper_gas == 310'136);
    CHECK(best->usd_text(report.params) == "0.32750");

    const auto* acl = report.row("acl_pairs_20");
    REQUIRE(acl != nullptr);
    CHECK(acl->gas_cost == 38'901'340);
    CHECK(acl->paper_gas == 36'701'340);  // published value, not reproducible

    const auto* worst_fresh = report.row("proposed_worst_fresh_list");
    REQUIRE(worst_fresh != nullptr);
    CHECK(worst_fresh->gas_cost == 310'136 + 20 * 401'483 + 20 * 113'175 + 10'518 * 210);
    CHECK(worst_fresh->gas_cost == 12'812'076);

    const auto* worst_campus = report.row("proposed_worst_campus_list");
    REQUIRE(worst_campus != nullptr);
    CHECK(worst_campus->gas_cost == 33'848'076);
    CHECK(worst_campus->paper_gas == 16'163'226);
}

TEST_CASE("scenario 2: three hundred new members") {
    auto report = cost::scenario2();

    const auto* best = report.row("proposed_best");
    REQUIRE(best != nullptr);
    CHECK(best->gas_cost == 46'520'400);  // 300 · 155,068 (published per-entity constant)
    CHECK(best->paper_gas == 46'520'400);

    const auto* strict = report.row("proposed_best_strict");
    REQUIRE(strict != nullptr);
    CHECK(strict->gas_cost == 46'527'000);  // 300 · 155,090 (the subjectAdd formula)

    const auto* acl_accessed = report.row("acl_pairs_4500");
    REQUIRE(acl_accessed != nullptr);
    CHECK(acl_accessed->gas_cost == 8'752'801'500);  // 4,500 · 1,945,067
    CHECK(acl_accessed->paper_gas == 8'257'801'500);  // published, likely transposed

    const auto* acl_all = report.row("acl_pairs_45000");
    REQUIRE(acl_all != nullptr);
    CHECK(acl_all->gas_cost == 87'528'015'000);

    const auto* worst_all = report.row("proposed_worst_pairs_45000_fresh_list");
    REQUIRE(worst_all != nullptr);
    CHECK(worst_all->gas_cost == 10'672'917'785'400);
    CHECK(worst_all->paper_gas == 113'438'512'500);

    const auto* worst_accessed = report.row("proposed_worst_pairs_4500_campus_list");
    REQUIRE(worst_accessed != nullptr);
    CHECK(worst_accessed->gas_cost == 113'613'996'900);
}

TEST_CASE("curve csv carries the exact header and crossover comments") {
    auto report = cost::operating_curve(curve_config(5, 1));
    std::ostringstream csv;
    report.write_csv(csv);
    std::string text = csv.str();
    CHECK(text.rfind("m,proposed_gas,acl_gas,proposed_usd,acl_usd\n", 0) == 0);
    CHECK(text.find("# crossover proposed_below_acl m=3\n") != std::string::npos);
    CHECK(text.find("1,5973666,4754160,") != std::string::npos);
}

TEST_CASE("scenario csv layout") {
    auto report = cost::scenario1();
    std::ostringstream csv;
    report.write_csv(csv);
    std::string text = csv.str();
    CHECK(text.rfind("metric,gas,usd,paper_gas,paper_usd\n", 0) == 0);
    CHECK(text.find("proposed_best,310136,0.32750,310136,0.32751\n") != std::string::npos);
}
