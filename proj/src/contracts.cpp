#include "abacsim/contracts.hpp"

#include <algorithm>
#include <cctype>

#include "abacsim/codec.hpp"

namespace abacsim::contracts {

using core::AccessDecision;
using core::AccountId;
using core::ActionFlags;
using core::AttributeSet;
using core::DecisionReason;
using core::Policy;

namespace {

constexpr gas::Gas kCharCost = 64;
constexpr gas::Gas kSlotCost = 15'000;

// First-time markers, consumed once per chain lifetime.
const std::string kPmcFirstAdd = "PMC.policyAdd";
const std::string kAccFirstGetSubject = "ACC.getSubject";
const std::string kAccFirstGetObject = "ACC.getObject";

}  // namespace

bool is_contract_name(std::string_view name) {
    return name == kSamc || name == kOamc || name == kPmc || name == kAcc;
}

std::string normalize_record_value(std::string_view name, std::string value) {
    if (name == "Role" && !value.empty()) {
        value[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(value[0])));
    }
    return value;
}

// ── AttributeStore / PolicyStore ─────────────────────────────────────────────

const AttributeSet* AttributeStore::find(const AccountId& id) const {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

AttributeSet* AttributeStore::find(const AccountId& id) {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
}

AttributeSet& AttributeStore::upsert(const AccountId& id) { return records_[id]; }

void PolicyStore::append(Policy policy) { items_.push_back(std::move(policy)); }

void PolicyStore::replace(std::size_t index, Policy policy) {
    items_.at(index) = std::move(policy);
}

void PolicyStore::swap_remove(std::size_t index) {
    if (index + 1 != items_.size()) std::swap(items_[index], items_.back());
    items_.pop_back();
}

std::vector<std::size_t> PolicyStore::find_match(const AttributeSet& sa,
                                                 const AttributeSet& oa) const {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (core::attrs_match_partial(items_[i].sa, sa) &&
            core::attrs_match_partial(items_[i].oa, oa)) {
            indices.push_back(i);
        }
    }
    return indices;
}

std::optional<std::size_t> PolicyStore::find_exact(const AttributeSet& sa,
                                                   const AttributeSet& oa) const {
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (core::attrs_match_complete(items_[i].sa, sa) &&
            core::attrs_match_complete(items_[i].oa, oa)) {
            return i;
        }
    }
    return std::nullopt;
}

// ── System ───────────────────────────────────────────────────────────────────

System::System(gas::CostParams params, gas::DeployConstants deploy)
    : params_(std::move(params)), deploy_(deploy) {}

bool System::deployed(std::string_view contract) const {
    return admins_.find(contract) != admins_.end();
}

bool System::all_deployed() const {
    return deployed(kSamc) && deployed(kOamc) && deployed(kPmc) && deployed(kAcc);
}

bool System::is_admin(std::string_view contract, const AccountId& sender) const {
    auto it = admins_.find(contract);
    return it != admins_.end() && it->second == sender;
}

bool System::consume_first_time(const std::string& marker) {
    return consumed_first_time_.insert(marker).second;
}

AbiResult System::deploy(std::string_view contract, const AccountId& admin) {
    if (!is_contract_name(contract)) return AbiResult::fail("UnknownContract");
    if (deployed(contract)) return AbiResult::fail("AlreadyDeployed");
    admins_.emplace(std::string(contract), admin);
    AbiResult out;
    out.receipt = chain::GasReceipt::of(deploy_.deploy_gas_for(contract));
    out.result = Json{{"contract", std::string(contract)}, {"admin", admin.to_string()}};
    return out;
}

// Upsert: presented entries are merged per-name into the record; entries not
// mentioned are kept. Gas is the published upper bound for an add, charged
// for create and overwrite alike.
static AbiResult record_add(const AccountId& id, const AttributeSet& attrs,
                            AttributeStore& store, const core::AttributeBounds& bounds,
                            gas::Gas total_gas, gas::Gas storage_gas) {
    const AttributeSet* existing = store.find(id);
    std::size_t merged = existing ? existing->size() : 0;
    for (const auto& [name, value] : attrs.entries()) {
        if (value.size() > bounds.max_chars) return AbiResult::fail("AttributeBoundsExceeded");
        if (!existing || !existing->contains(name)) ++merged;
    }
    if (merged > bounds.max_entries) return AbiResult::fail("AttributeBoundsExceeded");

    AttributeSet& record = store.upsert(id);
    for (const auto& [name, value] : attrs.entries()) {
        record.set(name, normalize_record_value(name, value));
    }
    AbiResult out;
    out.receipt = chain::GasReceipt::of(total_gas - storage_gas, storage_gas);
    out.result = Json{{"id", id.to_string()}};
    return out;
}

static AbiResult record_update(const AccountId& id, const std::string& name,
                               const std::string& value, AttributeStore& store,
                               const core::AttributeBounds& bounds, gas::Gas total_gas,
                               const char* missing_record_error) {
    AttributeSet* record = store.find(id);
    if (record == nullptr) return AbiResult::fail(missing_record_error);
    if (!record->contains(name)) return AbiResult::fail("NoSuchAttribute");
    if (value.size() > bounds.max_chars) return AbiResult::fail("AttributeBoundsExceeded");
    record->set(name, normalize_record_value(name, value));
    AbiResult out;
    gas::Gas storage = kCharCost * static_cast<gas::Gas>(value.size());
    out.receipt = chain::GasReceipt::of(total_gas - storage, storage);
    return out;
}

static AbiResult record_delete(const AccountId& id, const std::string& name,
                               AttributeStore& store, gas::Gas total_gas,
                               const char* missing_record_error) {
    AttributeSet* record = store.find(id);
    if (record == nullptr) return AbiResult::fail(missing_record_error);
    if (!record->erase(name)) return AbiResult::fail("NoSuchAttribute");
    // A record whose last attribute was deleted persists with an empty set.
    AbiResult out;
    out.receipt = chain::GasReceipt::of(total_gas);
    return out;
}

AbiResult System::subject_add(const AccountId& sender, const AccountId& id,
                              const AttributeSet& attrs) {
    if (!is_admin(kSamc, sender)) return AbiResult::fail("Unauthorized");
    gas::Gas total = gas::subject_add_cost(params_);
    gas::Gas storage = kCharCost * params_.subject_attr_limit * params_.subject_char_limit;
    return record_add(id, attrs, subjects_, params_.subject_bounds(), total, storage);
}

AbiResult System::subject_update(const AccountId& sender, const AccountId& id,
                                 const std::string& name, const std::string& value) {
    if (!is_admin(kSamc, sender)) return AbiResult::fail("Unauthorized");
    gas::Gas total = gas::subject_update_cost(static_cast<gas::Gas>(value.size()));
    return record_update(id, name, value, subjects_, params_.subject_bounds(), total,
                         "NoSuchSubject");
}

AbiResult System::subject_delete(const AccountId& sender, const AccountId& id,
                                 const std::string& name) {
    if (!is_admin(kSamc, sender)) return AbiResult::fail("Unauthorized");
    return record_delete(id, name, subjects_, gas::subject_delete_cost(), "NoSuchSubject");
}

AbiResult System::object_add(const AccountId& sender, const AccountId& id,
                             const AttributeSet& attrs) {
    if (!is_admin(kOamc, sender)) return AbiResult::fail("Unauthorized");
    gas::Gas total = gas::object_add_cost(params_);
    gas::Gas storage = kCharCost * params_.object_attr_limit * params_.object_char_limit;
    return record_add(id, attrs, objects_, params_.object_bounds(), total, storage);
}

AbiResult System::object_update(const AccountId& sender, const AccountId& id,
                                const std::string& name, const std::string& value) {
    if (!is_admin(kOamc, sender)) return AbiResult::fail("Unauthorized");
    gas::Gas total = gas::object_update_cost(static_cast<gas::Gas>(value.size()));
    return record_update(id, name, value, objects_, params_.object_bounds(), total,
                         "NoSuchObject");
}

AbiResult System::object_delete(const AccountId& sender, const AccountId& id,
                                const std::string& name) {
    if (!is_admin(kOamc, sender)) return AbiResult::fail("Unauthorized");
    return record_delete(id, name, objects_, gas::object_delete_cost(), "NoSuchObject");
}

AbiResult System::policy_add(const AccountId& sender, const Policy& policy) {
    if (!is_admin(kPmc, sender)) return AbiResult::fail("Unauthorized");
    if (!policy.sa.within(params_.subject_bounds()) || !policy.oa.within(params_.object_bounds())) {
        return AbiResult::fail("AttributeBoundsExceeded");
    }
    // Duplicates are complete matches on (sa, oa); actions and context do not
    // distinguish policies (update them via policyUpdate).
    if (policies_.find_exact(policy.sa, policy.oa)) return AbiResult::fail("DuplicatePolicy");

    bool first = consume_first_time(kPmcFirstAdd);
    policies_.append(policy);

    gas::Gas storage = kSlotCost * (params_.subject_attr_limit + params_.object_attr_limit) +
                       kCharCost * (params_.subject_attr_limit * params_.subject_char_limit +
                                    params_.object_attr_limit * params_.object_char_limit);
    gas::Gas init = first ? gas::policy_add_first_time_surcharge(params_) : 0;
    gas::Gas total = gas::policy_add_cost(params_, first);

    AbiResult out;
    out.receipt = chain::GasReceipt::of(total - storage - init, storage, init);
    out.result = Json{{"index", policies_.size() - 1}};
    return out;
}

AbiResult System::policy_update(const AccountId& sender, std::size_t index,
                                const Policy& policy) {
    if (!is_admin(kPmc, sender)) return AbiResult::fail("Unauthorized");
    if (index >= policies_.size()) return AbiResult::fail("IndexOutOfRange");
    if (!policy.sa.within(params_.subject_bounds()) || !policy.oa.within(params_.object_bounds())) {
        return AbiResult::fail("AttributeBoundsExceeded");
    }
    policies_.replace(index, policy);
    gas::Gas storage = kCharCost * (params_.subject_attr_limit * params_.subject_char_limit +
                                    params_.object_attr_limit * params_.object_char_limit);
    gas::Gas total = gas::policy_update_cost(params_, index);
    AbiResult out;
    out.receipt = chain::GasReceipt::of(total - storage, storage);
    return out;
}

AbiResult System::policy_delete(const AccountId& sender, const Policy& policy) {
    if (!is_admin(kPmc, sender)) return AbiResult::fail("Unauthorized");
    auto index = policies_.find_exact(policy.sa, policy.oa);
    if (!index) return AbiResult::fail("PolicyNotFound");
    policies_.swap_remove(*index);
    AbiResult out;
    out.receipt = chain::GasReceipt::of(gas::policy_delete_cost(*index));
    out.result = Json{{"index", *index}};
    return out;
}

AbiResult System::find_match_policy(const AccountId& sender, const AttributeSet& sa,
                                    const AttributeSet& oa) {
    if (!is_admin(kPmc, sender)) return AbiResult::fail("Unauthorized");
    auto indices = policies_.find_match(sa, oa);
    AbiResult out;
    out.receipt = chain::GasReceipt::of(
        gas::find_policy_cost(params_, static_cast<gas::Gas>(policies_.size())));
    out.result = Json{{"indices", indices}};
    return out;
}

AbiResult System::find_exact_match_policy(const AccountId& sender, const AttributeSet& sa,
                                          const AttributeSet& oa) {
    if (!is_admin(kPmc, sender)) return AbiResult::fail("Unauthorized");
    auto index = policies_.find_exact(sa, oa);
    AbiResult out;
    // No separately published search constant; priced like findMatchPolicy.
    out.receipt = chain::GasReceipt::of(
        gas::find_policy_cost(params_, static_cast<gas::Gas>(policies_.size())));
    out.result = index ? Json{{"index", *index}} : Json{{"index", nullptr}};
    return out;
}

AbiResult System::access_control(const AccountId& subject, const AccountId& object,
                                 const ActionFlags& actions, std::int64_t now) {
    chain::GasReceipt receipt;
    Json steps = Json::array();
    std::vector<std::size_t> matched;

    auto finish = [&](AccessDecision decision) {
        AbiResult out;
        out.receipt = receipt;
        out.result = Json{{"subject", subject.to_string()},
                          {"object", object.to_string()},
                          {"actions", codec::actions_to_json(actions)},
                          {"permitted", decision.permitted},
                          {"reason", std::string(core::to_string(decision.reason))},
                          {"matched_indices", matched},
                          {"steps", steps}};
        return out;
    };
    auto charge = [&](std::string_view step, chain::GasReceipt part) {
        receipt += part;
        steps.push_back(Json{{"abi", std::string(step)}, {"gas", part.total}});
    };

    // Step: getSubject. The init cost creates the ACC's subject variable, so
    // it is consumed on the first successful retrieval only.
    const AttributeSet* subject_attrs_ptr = subjects_.find(subject);
    if (subject_attrs_ptr == nullptr) {
        charge("getSubject", chain::GasReceipt::of(gas::get_subject_cost(params_, false)));
        return finish(AccessDecision::deny(DecisionReason::UnknownSubject));
    }
    {
        bool first = consume_first_time(kAccFirstGetSubject);
        gas::Gas init = first ? kSlotCost * params_.subject_attr_limit : 0;
        charge("getSubject",
               chain::GasReceipt::of(gas::get_subject_cost(params_, false), 0, init));
    }

    // Step: getObject.
    const AttributeSet* object_attrs_ptr = objects_.find(object);
    if (object_attrs_ptr == nullptr) {
        charge("getObject", chain::GasReceipt::of(gas::get_object_cost(params_, false)));
        return finish(AccessDecision::deny(DecisionReason::UnknownObject));
    }
    {
        bool first = consume_first_time(kAccFirstGetObject);
        gas::Gas init = first ? kSlotCost * params_.object_attr_limit : 0;
        charge("getObject",
               chain::GasReceipt::of(gas::get_object_cost(params_, false), 0, init));
    }

    // Step: findMatchPolicy over the full list.
    matched = policies_.find_match(*subject_attrs_ptr, *object_attrs_ptr);
    charge("findMatchPolicy",
           chain::GasReceipt::of(
               gas::find_policy_cost(params_, static_cast<gas::Gas>(policies_.size()))));
    bool found = !matched.empty();

    // Step: getPolicy — one fetch per matched index, ascending, until a
    // policy permits or the candidates are exhausted.
    AccessDecision decision = AccessDecision::deny(DecisionReason::NoMatchingPolicy);
    if (found) {
        bool have_failure = false;
        chain::GasReceipt fetches;
        std::size_t fetch_count = 0;
        for (std::size_t index : matched) {
            fetches += chain::GasReceipt::of(gas::get_policy_cost(true));
            ++fetch_count;
            AccessDecision verdict = core::evaluate(policies_.items()[index], actions, now);
            if (verdict.permitted) {
                decision = verdict;
                break;
            }
            if (!have_failure) {
                decision = verdict;
                have_failure = true;
            }
        }
        receipt += fetches;
        steps.push_back(Json{{"abi", "getPolicy"}, {"gas", fetches.total}, {"calls", fetch_count}});
    } else {
        charge("getPolicy", chain::GasReceipt::of(gas::get_policy_cost(false)));
    }

    // Step: access verification.
    charge("accessControl",
           chain::GasReceipt::of(gas::access_verification_cost(found)));
    return finish(decision);
}

const AttributeSet* System::subject_attrs(const AccountId& id) const { return subjects_.find(id); }
const AttributeSet* System::object_attrs(const AccountId& id) const { return objects_.find(id); }

Json System::storage_json() const {
    Json admins = Json::object();
    for (const auto& [name, admin] : admins_) admins[name] = admin.to_string();

    auto store_json = [](const AttributeStore& store) {
        Json out = Json::object();
        for (const auto& [id, attrs] : store.records()) {
            out[id.to_string()] = codec::attrs_to_json(attrs);
        }
        return out;
    };

    Json policies = Json::array();
    for (const auto& policy : policies_.items()) policies.push_back(codec::policy_to_json(policy));

    Json consumed = Json::array();
    for (const auto& marker : consumed_first_time_) consumed.push_back(marker);

    return Json{{"admins", admins},
                {"subjects", store_json(subjects_)},
                {"objects", store_json(objects_)},
                {"policies", policies},
                {"first_time_consumed", consumed}};
}

}  // namespace abacsim::contracts
