#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "abacsim/core.hpp"
#include "abacsim/gas_model.hpp"
#include "abacsim/receipt.hpp"

namespace abacsim::contracts {

using Json = nlohmann::ordered_json;

// The four contracts of the access-control system.
inline constexpr std::string_view kSamc = "SAMC";  // subject attribute management
inline constexpr std::string_view kOamc = "OAMC";  // object attribute management
inline constexpr std::string_view kPmc = "PMC";    // policy management
inline constexpr std::string_view kAcc = "ACC";    // access control

bool is_contract_name(std::string_view name);

/// Outcome of one ABI execution. A non-empty error means the call failed and
/// changed nothing (zero gas). Access-control denials are not errors: they
/// succeed with a deny decision in `result`.
struct AbiResult {
    std::string error;
    Json result = Json::object();
    chain::GasReceipt receipt;

    bool ok() const { return error.empty(); }
    static AbiResult fail(std::string name) { return {std::move(name), Json::object(), {}}; }
};

// ── Contract storage ─────────────────────────────────────────────────────────

/// Id-keyed attribute records (the subjectList / objectList shape).
class AttributeStore {
public:
    const core::AttributeSet* find(const core::AccountId& id) const;
    core::AttributeSet* find(const core::AccountId& id);
    core::AttributeSet& upsert(const core::AccountId& id);

    const std::map<core::AccountId, core::AttributeSet>& records() const { return records_; }

private:
    std::map<core::AccountId, core::AttributeSet> records_;
};

/// Ordered policy list with the two search patterns.
class PolicyStore {
public:
    const std::vector<core::Policy>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

    void append(core::Policy policy);
    void replace(std::size_t index, core::Policy policy);

    /// Removes items_[index] by swapping the last item into its place.
    void swap_remove(std::size_t index);

    /// Partial-match search: ascending indices of policies whose sa/oa are
    /// covered by the presented attribute sets.
    std::vector<std::size_t> find_match(const core::AttributeSet& sa,
                                        const core::AttributeSet& oa) const;

    /// Complete-match search: lowest index whose policy carries exactly the
    /// given attribute sets (wildcards included).
    std::optional<std::size_t> find_exact(const core::AttributeSet& sa,
                                          const core::AttributeSet& oa) const;

private:
    std::vector<core::Policy> items_;
};

// ── The contract system ──────────────────────────────────────────────────────

/// State and ABI semantics of the four contracts. Every mutation validates
/// fully before touching storage, so a failed call never leaves partial
/// state. Gas is charged from the analytic model, never measured.
class System {
public:
    explicit System(gas::CostParams params = {}, gas::DeployConstants deploy = {});

    const gas::CostParams& params() const { return params_; }
    const gas::DeployConstants& deploy_constants() const { return deploy_; }

    bool deployed(std::string_view contract) const;
    bool all_deployed() const;
    const std::map<std::string, core::AccountId, std::less<>>& admins() const { return admins_; }

    AbiResult deploy(std::string_view contract, const core::AccountId& admin);

    // SAMC — admin only
    AbiResult subject_add(const core::AccountId& sender, const core::AccountId& id,
                          const core::AttributeSet& attrs);
    AbiResult subject_update(const core::AccountId& sender, const core::AccountId& id,
                             const std::string& name, const std::string& value);
    AbiResult subject_delete(const core::AccountId& sender, const core::AccountId& id,
                             const std::string& name);

    // OAMC — admin only
    AbiResult object_add(const core::AccountId& sender, const core::AccountId& id,
                         const core::AttributeSet& attrs);
    AbiResult object_update(const core::AccountId& sender, const core::AccountId& id,
                            const std::string& name, const std::string& value);
    AbiResult object_delete(const core::AccountId& sender, const core::AccountId& id,
                            const std::string& name);

    // PMC — admin only
    AbiResult policy_add(const core::AccountId& sender, const core::Policy& policy);
    AbiResult policy_update(const core::AccountId& sender, std::size_t index,
                            const core::Policy& policy);
    AbiResult policy_delete(const core::AccountId& sender, const core::Policy& policy);
    AbiResult find_match_policy(const core::AccountId& sender, const core::AttributeSet& sa,
                                const core::AttributeSet& oa);
    AbiResult find_exact_match_policy(const core::AccountId& sender, const core::AttributeSet& sa,
                                      const core::AttributeSet& oa);

    // ACC — open to any sender
    AbiResult access_control(const core::AccountId& subject, const core::AccountId& object,
                             const core::ActionFlags& actions, std::int64_t now);

    // Unmetered read-only views.
    const core::AttributeSet* subject_attrs(const core::AccountId& id) const;
    const core::AttributeSet* object_attrs(const core::AccountId& id) const;
    const AttributeStore& subjects() const { return subjects_; }
    const AttributeStore& objects() const { return objects_; }
    const PolicyStore& policies() const { return policies_; }
    const std::set<std::string>& consumed_first_time() const { return consumed_first_time_; }

    /// Deterministic serialization of all contract storage, for digests.
    Json storage_json() const;

private:
    bool is_admin(std::string_view contract, const core::AccountId& sender) const;
    bool consume_first_time(const std::string& marker);

    gas::CostParams params_;
    gas::DeployConstants deploy_;
    std::map<std::string, core::AccountId, std::less<>> admins_;
    AttributeStore subjects_;
    AttributeStore objects_;
    PolicyStore policies_;
    std::set<std::string> consumed_first_time_;
};

/// Record-ingestion normalization: the first letter of a value stored under
/// the name "Role" is uppercased. Applies to subject/object records only,
/// never to policies.
std::string normalize_record_value(std::string_view name, std::string value);

}  // namespace abacsim::contracts
