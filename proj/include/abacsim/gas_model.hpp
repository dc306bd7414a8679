#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "abacsim/core.hpp"

namespace abacsim::gas {

using Gas = std::int64_t;

// ── Parameters ───────────────────────────────────────────────────────────────

/// Cost-model parameters. The attribute/character limits double as the
/// storage bounds enforced by the contracts; the defaults reproduce the
/// published measurements (limits 6/6 and 10/10, gas price 8 Gwei,
/// 132.00 USD per Ether).
struct CostParams {
    std::int64_t subject_attr_limit = 6;   // A_s
    std::int64_t object_attr_limit = 6;    // A_o
    std::int64_t subject_char_limit = 10;  // C_s
    std::int64_t object_char_limit = 10;   // C_o
    std::int64_t gas_price_gwei = 8;
    std::int64_t usd_cents_per_ether = 13200;

    /// subjectAdd/objectAdd code costs are measured functions of the attribute
    /// limit, known only at limit 6 (151,250 / 151,228). Other limits need an
    /// explicit calibration value here.
    std::optional<Gas> subject_add_code_cost;
    std::optional<Gas> object_add_code_cost;

    core::AttributeBounds subject_bounds() const {
        return {static_cast<std::size_t>(subject_attr_limit),
                static_cast<std::size_t>(subject_char_limit)};
    }
    core::AttributeBounds object_bounds() const {
        return {static_cast<std::size_t>(object_attr_limit),
                static_cast<std::size_t>(object_char_limit)};
    }

    bool valid() const {
        return subject_attr_limit > 0 && object_attr_limit > 0 && subject_char_limit > 0 &&
               object_char_limit > 0 && gas_price_gwei >= 0 && usd_cents_per_ether >= 0;
    }
};

/// Deployment gas. Only the four-contract aggregate (4,943,332) and the
/// ACL-side constants are published; the per-contract split is configuration
/// and defaults to an even split.
struct DeployConstants {
    Gas samc = 1'235'833;
    Gas oamc = 1'235'833;
    Gas pmc = 1'235'833;
    Gas acc = 1'235'833;

    Gas acl_total = 2'809'093;           // baseline management contracts
    Gas acl_per_pair_acc = 1'706'290;    // one ACC per subject-object pair
    Gas acl_per_pair_policy = 238'777;   // one policy entry per pair

    Gas proposed_total() const { return samc + oamc + pmc + acc; }
    Gas acl_per_pair() const { return acl_per_pair_acc + acl_per_pair_policy; }

    Gas deploy_gas_for(std::string_view contract) const;
};

/// Thrown when a formula is evaluated at an attribute limit whose measured
/// code cost is unknown and no calibration constant was supplied.
class UnsupportedBound : public std::runtime_error {
public:
    explicit UnsupportedBound(const std::string& what) : std::runtime_error(what) {}
};

// ── Per-ABI gas formulas ─────────────────────────────────────────────────────
//
// All functions return exact non-negative integers. Attribute/character
// limits come from CostParams; list lengths, indices and actual character
// counts are call-site inputs.

Gas subject_add_cost(const CostParams& params);                        // 64·A_s·C_s + 151,250
Gas subject_update_cost(std::int64_t value_chars);                     // 61,250 + 64·chars
Gas subject_delete_cost();                                             // 26,786
Gas object_add_cost(const CostParams& params);                         // 64·A_o·C_o + 151,228
Gas object_update_cost(std::int64_t value_chars);                      // 61,228 + 64·chars
Gas object_delete_cost();                                              // 26,808

Gas policy_add_cost(const CostParams& params, bool first_time);
Gas policy_add_first_time_surcharge(const CostParams& params);         // 15,000·(A_s+A_o+1)
Gas policy_update_cost(const CostParams& params, std::size_t index);   // 194,337 / 194,401 + storage
Gas policy_delete_cost(std::size_t index);                             // 51,529 / 51,561
Gas find_policy_cost(const CostParams& params, std::int64_t list_len);

Gas get_subject_cost(const CostParams& params, bool first_time);       // 59,467 (+15,000·A_s once)
Gas get_object_cost(const CostParams& params, bool first_time);        // 59,201 (+15,000·A_o once)
Gas get_policy_cost(bool found);                                       // 53,215 / 46,780
Gas access_verification_cost(bool found);                              // 26,932 / 26,640

// ── Aggregates ───────────────────────────────────────────────────────────────

/// Cost of adding n distinct policies, each add paired with one list search.
/// `literal` is n·G_PA + Σ_{k=1..n} G_FP(k); `closed_form` is the quadratic
/// 5,259·n² + (276,557 + 19,000·(A_s+A_o) + 128·(A_s·C_s+A_o·C_o) + …)·n.
/// The two are algebraically equal; both are returned so callers can check.
struct AddPoliciesCost {
    Gas literal = 0;
    Gas closed_form = 0;
};
AddPoliciesCost add_n_policies_cost(std::int64_t n, const CostParams& params, bool first_time);

enum class SearchMode {
    PerPolicy,  // one search per policy added: Σ_{k=1..n} G_FP(k)
    PerPair,    // one search per pair onboarded: Σ_{j=1..m} G_FP(⌈j·n/m⌉)
};

std::string_view to_string(SearchMode mode);
std::optional<SearchMode> search_mode_from_string(std::string_view text);

/// Operating cost of onboarding m subject-object pairs requiring n policies:
/// m·(G_SA + G_OA) + n·G_PA + search cost, with the policy-add first-time
/// surcharge applied once when `first_time` and n ≥ 1.
Gas pair_onboarding_cost(std::int64_t m, std::int64_t n, const CostParams& params,
                         SearchMode mode, bool first_time);

/// ACL baseline: one ACC deployment plus one policy entry per pair.
Gas acl_pair_cost(std::int64_t m, const DeployConstants& deploy = {});

// ── Fees ─────────────────────────────────────────────────────────────────────

/// Exact transaction fee. gas · gasPrice[Gwei] · 10⁻⁹ Ether, carried as
/// integer wei so no floating point ever touches a reported value.
class Fee {
public:
    Fee(Gas gas, std::int64_t gas_price_gwei, std::int64_t usd_cents_per_ether);

    Gas gas() const { return gas_; }
    __int128 wei() const;

    /// USD scaled by 1e5 (five decimal places), rounded half up.
    std::int64_t usd_e5() const;

    std::string ether_text() const;  // exact decimal, trailing zeros trimmed
    std::string usd_text() const;    // fixed five decimal places

private:
    Gas gas_;
    std::int64_t gas_price_gwei_;
    std::int64_t usd_cents_per_ether_;
};

Fee txfee(Gas gas, const CostParams& params);

}  // namespace abacsim::gas
