#include "abacsim/gas_model.hpp"

#include <cassert>
#include <cstdio>

namespace abacsim::gas {

namespace {

constexpr Gas kSubjectAddCodeAt6 = 151'250;
constexpr Gas kObjectAddCodeAt6 = 151'228;
constexpr Gas kSubjectUpdateCode = 61'250;
constexpr Gas kObjectUpdateCode = 61'228;
constexpr Gas kSubjectDelete = 26'786;
constexpr Gas kObjectDelete = 26'808;
constexpr Gas kPolicyAddCode = 213'803;
constexpr Gas kPolicyUpdateCodeIndex0 = 194'337;
constexpr Gas kPolicyUpdateCodeIndexGe1 = 194'401;
constexpr Gas kPolicyDeleteIndex0 = 51'529;
constexpr Gas kPolicyDeleteIndexGe1 = 51'561;
constexpr Gas kFindPolicyCode = 57'495;
constexpr Gas kFindPolicyPerAttr = 4'000;
constexpr Gas kFindPolicyPerEntry = 10'518;
constexpr Gas kGetSubjectCode = 59'467;
constexpr Gas kGetObjectCode = 59'201;
constexpr Gas kGetPolicyFound = 53'215;
constexpr Gas kGetPolicyNotFound = 46'780;
constexpr Gas kAccessVerifyFound = 26'932;
constexpr Gas kAccessVerifyNotFound = 26'640;
constexpr Gas kCharCost = 64;
constexpr Gas kSlotCost = 15'000;

Gas policy_char_capacity(const CostParams& p) {
    return p.subject_attr_limit * p.subject_char_limit +
           p.object_attr_limit * p.object_char_limit;
}

Gas subject_add_code(const CostParams& p) {
    if (p.subject_add_code_cost) return *p.subject_add_code_cost;
    if (p.subject_attr_limit == 6) return kSubjectAddCodeAt6;
    throw UnsupportedBound(
        "subjectAdd code cost is measured only at a subject attribute limit of 6; "
        "supply subject_add_code_cost for limit " + std::to_string(p.subject_attr_limit));
}

Gas object_add_code(const CostParams& p) {
    if (p.object_add_code_cost) return *p.object_add_code_cost;
    if (p.object_attr_limit == 6) return kObjectAddCodeAt6;
    throw UnsupportedBound(
        "objectAdd code cost is measured only at an object attribute limit of 6; "
        "supply object_add_code_cost for limit " + std::to_string(p.object_attr_limit));
}

}  // namespace

Gas DeployConstants::deploy_gas_for(std::string_view contract) const {
    if (contract == "SAMC") return samc;
    if (contract == "OAMC") return oamc;
    if (contract == "PMC") return pmc;
    if (contract == "ACC") return acc;
    return 0;
}

Gas subject_add_cost(const CostParams& params) {
    return kCharCost * params.subject_attr_limit * params.subject_char_limit +
           subject_add_code(params);
}

Gas subject_update_cost(std::int64_t value_chars) {
    return kSubjectUpdateCode + kCharCost * value_chars;
}

Gas subject_delete_cost() { return kSubjectDelete; }

Gas object_add_cost(const CostParams& params) {
    return kCharCost * params.object_attr_limit * params.object_char_limit +
           object_add_code(params);
}

Gas object_update_cost(std::int64_t value_chars) {
    return kObjectUpdateCode + kCharCost * value_chars;
}

Gas object_delete_cost() { return kObjectDelete; }

Gas policy_add_first_time_surcharge(const CostParams& params) {
    return kSlotCost * (params.subject_attr_limit + params.object_attr_limit + 1);
}

Gas policy_add_cost(const CostParams& params, bool first_time) {
    Gas gas = kPolicyAddCode +
              kSlotCost * (params.subject_attr_limit + params.object_attr_limit) +
              kCharCost * policy_char_capacity(params);
    if (first_time) gas += policy_add_first_time_surcharge(params);
    return gas;
}

Gas policy_update_cost(const CostParams& params, std::size_t index) {
    Gas code = index == 0 ? kPolicyUpdateCodeIndex0 : kPolicyUpdateCodeIndexGe1;
    return code + kCharCost * policy_char_capacity(params);
}

Gas policy_delete_cost(std::size_t index) {
    return index == 0 ? kPolicyDeleteIndex0 : kPolicyDeleteIndexGe1;
}

Gas find_policy_cost(const CostParams& params, std::int64_t list_len) {
    return kFindPolicyCode +
           kFindPolicyPerAttr * (params.subject_attr_limit + params.object_attr_limit) +
           kFindPolicyPerEntry * list_len + kCharCost * policy_char_capacity(params);
}

Gas get_subject_cost(const CostParams& params, bool first_time) {
    return kGetSubjectCode + (first_time ? kSlotCost * params.subject_attr_limit : 0);
}

Gas get_object_cost(const CostParams& params, bool first_time) {
    return kGetObjectCode + (first_time ? kSlotCost * params.object_attr_limit : 0);
}

Gas get_policy_cost(bool found) { return found ? kGetPolicyFound : kGetPolicyNotFound; }

Gas access_verification_cost(bool found) {
    return found ? kAccessVerifyFound : kAccessVerifyNotFound;
}

AddPoliciesCost add_n_policies_cost(std::int64_t n, const CostParams& params, bool first_time) {
    AddPoliciesCost cost;
    if (n <= 0) return cost;

    for (std::int64_t k = 1; k <= n; ++k) cost.literal += find_policy_cost(params, k);
    cost.literal += n * policy_add_cost(params, first_time);

    Gas attrs = params.subject_attr_limit + params.object_attr_limit;
    Gas linear = 276'557 + 19'000 * attrs + 128 * policy_char_capacity(params);
    if (first_time) linear += policy_add_first_time_surcharge(params);
    cost.closed_form = 5'259 * n * n + linear * n;
    return cost;
}

std::string_view to_string(SearchMode mode) {
    return mode == SearchMode::PerPolicy ? "per-policy" : "per-pair";
}

std::optional<SearchMode> search_mode_from_string(std::string_view text) {
    if (text == "per-policy") return SearchMode::PerPolicy;
    if (text == "per-pair") return SearchMode::PerPair;
    return std::nullopt;
}

Gas pair_onboarding_cost(std::int64_t m, std::int64_t n, const CostParams& params,
                         SearchMode mode, bool first_time) {
    if (m <= 0) return 0;
    Gas gas = m * (subject_add_cost(params) + object_add_cost(params));
    if (n <= 0) return gas;

    gas += n * policy_add_cost(params, false);
    if (first_time) gas += policy_add_first_time_surcharge(params);

    if (mode == SearchMode::PerPolicy) {
        for (std::int64_t k = 1; k <= n; ++k) gas += find_policy_cost(params, k);
    } else {
        // One duplicate/coverage search per onboarded pair; by pair j the list
        // holds ⌈j·n/m⌉ policies.
        for (std::int64_t j = 1; j <= m; ++j) {
            gas += find_policy_cost(params, (j * n + m - 1) / m);
        }
    }
    return gas;
}

Gas acl_pair_cost(std::int64_t m, const DeployConstants& deploy) {
    return m <= 0 ? 0 : m * deploy.acl_per_pair();
}

Fee::Fee(Gas gas, std::int64_t gas_price_gwei, std::int64_t usd_cents_per_ether)
    : gas_(gas), gas_price_gwei_(gas_price_gwei), usd_cents_per_ether_(usd_cents_per_ether) {}

__int128 Fee::wei() const {
    return static_cast<__int128>(gas_) * gas_price_gwei_ * 1'000'000'000;
}

std::int64_t Fee::usd_e5() const {
    // gas · gwei · cents is USD scaled by 1e11; round half up to 1e5.
    __int128 e11 = static_cast<__int128>(gas_) * gas_price_gwei_ * usd_cents_per_ether_;
    return static_cast<std::int64_t>((e11 + 500'000) / 1'000'000);
}

std::string Fee::ether_text() const {
    // gas · gwei is Ether scaled by 1e9, always exact at nine decimals.
    __int128 nano = static_cast<__int128>(gas_) * gas_price_gwei_;
    auto whole = static_cast<std::int64_t>(nano / 1'000'000'000);
    auto frac = static_cast<std::int64_t>(nano % 1'000'000'000);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%lld.%09lld", static_cast<long long>(whole),
                  static_cast<long long>(frac));
    std::string text = buf;
    while (text.size() > 1 && text.back() == '0' && text[text.size() - 2] != '.') {
        text.pop_back();
    }
    return text;
}

std::string Fee::usd_text() const {
    std::int64_t e5 = usd_e5();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%lld.%05lld", static_cast<long long>(e5 / 100'000),
                  static_cast<long long>(e5 % 100'000));
    return buf;
}

Fee txfee(Gas gas, const CostParams& params) {
    return Fee(gas, params.gas_price_gwei, params.usd_cents_per_ether);
}

}  // namespace abacsim::gas
