#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "abacsim/gas_model.hpp"

using namespace abacsim::gas;

namespace {
const CostParams kDefaults{};
}

TEST_CASE("attribute management costs at the published bounds") {
    CHECK(subject_add_cost(kDefaults) == 155'090);  // 64·6·10 + 151,250
    CHECK(object_add_cost(kDefaults) == 155'068);   // 64·6·10 + 151,228

    CHECK(subject_update_cost(kDefaults.subject_char_limit) == 61'890);
    CHECK(subject_update_cost(5) == 61'570);  // metered with the actual value length
    CHECK(object_update_cost(kDefaults.object_char_limit) == 61'868);

    CHECK(subject_delete_cost() == 26'786);
    CHECK(object_delete_cost() == 26'808);
}

TEST_CASE("add costs at other bounds need a calibration constant") {
    CostParams params;
    params.subject_attr_limit = 4;
    CHECK_THROWS_AS(subject_add_cost(params), UnsupportedBound);
    params.subject_add_code_cost = 120'000;
    CHECK(subject_add_cost(params) == 64 * 4 * 10 + 120'000);

    CostParams object_params;
    object_params.object_attr_limit = 8;
    CHECK_THROWS_AS(object_add_cost(object_params), UnsupportedBound);
    object_params.object_add_code_cost = 160'000;
    CHECK(object_add_cost(object_params) == 64 * 8 * 10 + 160'000);
}

TEST_CASE("policy management costs") {
    CHECK(policy_add_cost(kDefaults, true) == 596'483);
    CHECK(policy_add_cost(kDefaults, false) == 401'483);
    CHECK(policy_add_first_time_surcharge(kDefaults) == 195'000);

    CHECK(policy_update_cost(kDefaults, 0) == 202'017);  // 194,337 + 64·120
    CHECK(policy_update_cost(kDefaults, 3) == 202'081);  // 194,401 + 64·120

    CHECK(policy_delete_cost(0) == 51'529);
    CHECK(policy_delete_cost(1) == 51'561);
    CHECK(policy_delete_cost(7) == 51'561);
}

TEST_CASE("policy search cost grows linearly in the list length") {
    CHECK(find_policy_cost(kDefaults, 0) == 113'175);
    CHECK(find_policy_cost(kDefaults, 1) == 123'693);
    CHECK(find_policy_cost(kDefaults, 3) == 113'175 + 31'554);
    CHECK(find_policy_cost(kDefaults, 100) == 1'164'975);

    for (std::int64_t l = 0; l < 50; ++l) {
        CHECK(find_policy_cost(kDefaults, l + 1) - find_policy_cost(kDefaults, l) == 10'518);
    }
}

TEST_CASE("access flow step costs") {
    CHECK(get_subject_cost(kDefaults, true) == 149'467);
    CHECK(get_subject_cost(kDefaults, false) == 59'467);
    CHECK(get_object_cost(kDefaults, true) == 149'201);
    CHECK(get_object_cost(kDefaults, false) == 59'201);
    CHECK(get_policy_cost(true) == 53'215);
    CHECK(get_policy_cost(false) == 46'780);
    CHECK(access_verification_cost(true) == 26'932);
    CHECK(access_verification_cost(false) == 26'640);

    // Steady-state single-policy flow.
    CHECK(get_subject_cost(kDefaults, false) + get_object_cost(kDefaults, false) +
              find_policy_cost(kDefaults, 1) + get_policy_cost(true) +
              access_verification_cost(true) ==
          322'508);
}

TEST_CASE("bulk policy addition: closed form equals the literal sum") {
    auto first = add_n_policies_cost(1, kDefaults, true);
    CHECK(first.literal == 596'483 + 123'693);
    CHECK(first.literal == 720'176);
    CHECK(first.closed_form == first.literal);

    CHECK(add_n_policies_cost(0, kDefaults, true).literal == 0);
    CHECK(add_n_policies_cost(0, kDefaults, false).closed_form == 0);

    for (std::int64_t n = 1; n <= 200; ++n) {
        for (bool first_time : {true, false}) {
            auto cost = add_n_policies_cost(n, kDefaults, first_time);
            CHECK(cost.literal == cost.closed_form);
        }
    }
}

TEST_CASE("pair onboarding cost") {
    CHECK(pair_onboarding_cost(0, 0, kDefaults, SearchMode::PerPolicy, true) == 0);
    CHECK(pair_onboarding_cost(1, 0, kDefaults, SearchMode::PerPolicy, true) == 310'158);

    // Component-wise: 2·(155,090+155,068) + 2·401,483 + 195,000 + G_FP(1) + G_FP(2).
    CHECK(pair_onboarding_cost(2, 2, kDefaults, SearchMode::PerPolicy, true) == 1'876'186);
    CHECK(pair_onboarding_cost(2, 2, kDefaults, SearchMode::PerPolicy, false) ==
          1'876'186 - 195'000);

    // p = 1 makes the two search modes coincide.
    for (std::int64_t m = 1; m <= 40; ++m) {
        CHECK(pair_onboarding_cost(m, m, kDefaults, SearchMode::PerPolicy, true) ==
              pair_onboarding_cost(m, m, kDefaults, SearchMode::PerPair, true));
    }

    // All pairs sharing one policy: per-pair searches scan a one-entry list.
    CHECK(pair_onboarding_cost(10, 1, kDefaults, SearchMode::PerPair, false) ==
          10 * 310'158 + 401'483 + 10 * 123'693);
}

TEST_CASE("property: onboarding cost is monotone and per-pair dominates per-policy") {
    for (std::int64_t m = 1; m <= 60; ++m) {
        for (std::int64_t n = 0; n <= m; ++n) {
            Gas per_policy = pair_onboarding_cost(m, n, kDefaults, SearchMode::PerPolicy, false);
            Gas per_pair = pair_onboarding_cost(m, n, kDefaults, SearchMode::PerPair, false);
            CHECK(per_pair >= per_policy);
            if (n > 0) {
                CHECK(per_policy >
                      pair_onboarding_cost(m, n - 1, kDefaults, SearchMode::PerPolicy, false));
            }
            if (m > 1) {
                CHECK(per_policy >
                      pair_onboarding_cost(m - 1, std::min(n, m - 1), kDefaults,
                                           SearchMode::PerPolicy, false));
            }
        }
    }
}

TEST_CASE("acl pair cost") {
    DeployConstants deploy;
    CHECK(deploy.acl_per_pair() == 1'945'067);
    CHECK(acl_pair_cost(1) == 1'945'067);
    CHECK(acl_pair_cost(20) == 38'901'340);
    CHECK(acl_pair_cost(0) == 0);
}

TEST_CASE("deployment constants") {
    DeployConstants deploy;
    CHECK(deploy.proposed_total() == 4'943'332);
    CHECK(deploy.acl_total == 2'809'093);
    CHECK(deploy.deploy_gas_for("SAMC") + deploy.deploy_gas_for("OAMC") +
              deploy.deploy_gas_for("PMC") + deploy.deploy_gas_for("ACC") ==
          4'943'332);
}

TEST_CASE("fees are exact decimals") {
    Fee proposed = txfee(4'943'332, kDefaults);
    CHECK(proposed.ether_text() == "0.039546656");
    CHECK(proposed.usd_text() == "5.22016");

    Fee acl = txfee(2'809'093, kDefaults);
    CHECK(acl.usd_text() == "2.96640");

    Fee zero = txfee(0, kDefaults);
    CHECK(zero.usd_text() == "0.00000");
    CHECK(zero.ether_text() == "0.0");
    CHECK(zero.wei() == 0);

    CostParams free_gas = kDefaults;
    free_gas.gas_price_gwei = 0;
    CHECK(txfee(4'943'332, free_gas).usd_e5() == 0);

    // Large scenario totals stay exact.
    Fee big = txfee(113'438'512'500, kDefaults);
    CHECK(big.usd_e5() == 11'979'106'920);  // 119,791.06920 USD
    CHECK(big.usd_text() == "119791.06920");
}
