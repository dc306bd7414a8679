#include "abacsim/chain.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "abacsim/codec.hpp"

namespace abacsim::chain {

using core::AccountId;
using core::AttributeSet;
using core::Policy;

// ── Transaction ──────────────────────────────────────────────────────────────

std::string Transaction::canonical_line() const {
    Json j;
    j["seq"] = seq;
    j["sender"] = sender.to_string();
    j["target"] = target;
    j["abi"] = abi;
    j["args"] = args;
    j["timestamp"] = timestamp;
    return j.dump();
}

std::optional<Transaction> Transaction::from_line(std::string_view line) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    auto seq = j.find("seq");
    auto sender = j.find("sender");
    auto target = j.find("target");
    auto abi_name = j.find("abi");
    auto args = j.find("args");
    auto timestamp = j.find("timestamp");
    if (seq == j.end() || sender == j.end() || target == j.end() || abi_name == j.end() ||
        args == j.end() || timestamp == j.end()) {
        return std::nullopt;
    }
    if (!seq->is_number_unsigned() || !sender->is_string() || !target->is_string() ||
        !abi_name->is_string() || !args->is_object() || !timestamp->is_number_integer()) {
        return std::nullopt;
    }
    auto account = AccountId::parse(sender->get<std::string>());
    if (!account) return std::nullopt;
    Transaction tx;
    tx.seq = seq->get<std::uint64_t>();
    tx.sender = *account;
    tx.target = target->get<std::string>();
    tx.abi = abi_name->get<std::string>();
    tx.args = *args;
    tx.timestamp = timestamp->get<std::int64_t>();
    return tx;
}

std::string Transaction::hash() const { return codec::sha256_hex(canonical_line()); }

// ── Args builders ────────────────────────────────────────────────────────────

namespace abi {

Json deploy_args(const AccountId& admin) { return Json{{"admin", admin.to_string()}}; }

Json set_clock_args(std::int64_t now) { return Json{{"now", now}}; }

Json record_add_args(const AccountId& id, const AttributeSet& attrs) {
    return Json{{"id", id.to_string()}, {"attrs", codec::attrs_to_json(attrs)}};
}

Json record_update_args(const AccountId& id, std::string_view name, std::string_view value) {
    return Json{{"id", id.to_string()}, {"name", std::string(name)}, {"value", std::string(value)}};
}

Json record_delete_args(const AccountId& id, std::string_view name) {
    return Json{{"id", id.to_string()}, {"name", std::string(name)}};
}

Json policy_add_args(const Policy& policy) {
    return Json{{"policy", codec::policy_to_json(policy)}};
}

Json policy_update_args(std::size_t index, const Policy& policy) {
    return Json{{"index", index}, {"policy", codec::policy_to_json(policy)}};
}

Json policy_delete_args(const Policy& policy) {
    return Json{{"policy", codec::policy_to_json(policy)}};
}

Json find_args(const AttributeSet& sa, const AttributeSet& oa) {
    return Json{{"sa", codec::attrs_to_json(sa)}, {"oa", codec::attrs_to_json(oa)}};
}

Json access_args(const AccountId& subject, const AccountId& object,
                 const core::ActionFlags& actions) {
    return Json{{"subject", subject.to_string()},
                {"object", object.to_string()},
                {"actions", codec::actions_to_json(actions)}};
}

}  // namespace abi

// ── Chain ────────────────────────────────────────────────────────────────────

Chain::Chain(gas::CostParams params, gas::DeployConstants deploy)
    : system_(std::move(params), deploy) {}

Transaction Chain::make_tx(const AccountId& sender, std::string_view target,
                           std::string_view abi_name, Json args,
                           std::optional<std::int64_t> timestamp) const {
    Transaction tx;
    tx.seq = log_.size();
    tx.sender = sender;
    tx.target = std::string(target);
    tx.abi = std::string(abi_name);
    tx.args = std::move(args);
    tx.timestamp = timestamp.value_or(clock_);
    return tx;
}

TxOutcome Chain::deploy(std::string_view contract, const AccountId& admin) {
    return submit(make_tx(admin, kDeployTarget, contract, abi::deploy_args(admin)));
}

TxOutcome Chain::set_clock(std::int64_t now) {
    return submit(make_tx(AccountId{}, kChainTarget, kSetClockAbi, abi::set_clock_args(now), now));
}

namespace {

std::optional<AccountId> account_arg(const Json& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end() || !it->is_string()) return std::nullopt;
    return AccountId::parse(it->get<std::string>());
}

std::optional<std::string> string_arg(const Json& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

std::optional<AttributeSet> attrs_arg(const Json& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end()) return std::nullopt;
    return codec::attrs_from_json(*it);
}

std::optional<Policy> policy_arg(const Json& args) {
    auto it = args.find("policy");
    if (it == args.end()) return std::nullopt;
    return codec::policy_from_json(*it);
}

std::optional<std::size_t> index_arg(const Json& args) {
    auto it = args.find("index");
    if (it == args.end() || !it->is_number_unsigned()) return std::nullopt;
    return it->get<std::size_t>();
}

}  // namespace

TxOutcome Chain::dispatch(const Transaction& tx) {
    auto fail = [](std::string error) {
        return TxOutcome{TxStatus::Failed, std::move(error), Json::object(), {}};
    };
    auto from = [](contracts::AbiResult r) {
        TxOutcome out;
        out.status = r.ok() ? TxStatus::Applied : TxStatus::Failed;
        out.error = std::move(r.error);
        out.result = std::move(r.result);
        out.receipt = r.receipt;
        return out;
    };

    if (tx.target == kDeployTarget) {
        if (!contracts::is_contract_name(tx.abi)) return fail("UnknownContract");
        auto admin = account_arg(tx.args, "admin");
        if (!admin) return fail("MalformedArgs");
        return from(system_.deploy(tx.abi, *admin));
    }

    if (tx.target == kChainTarget) {
        if (tx.abi != kSetClockAbi) return fail("UnknownAbi");
        auto it = tx.args.find("now");
        if (it == tx.args.end() || !it->is_number_integer()) return fail("MalformedArgs");
        // The clock advance itself happens in submit(); the arg must agree
        // with the transaction timestamp that drives it.
        if (it->get<std::int64_t>() != tx.timestamp) return fail("MalformedArgs");
        return TxOutcome{TxStatus::Applied, {}, Json::object(), {}};
    }

    if (!contracts::is_contract_name(tx.target)) return fail("UnknownContract");
    if (!system_.deployed(tx.target)) return fail("UnknownContract");

    if (tx.target == contracts::kSamc || tx.target == contracts::kOamc) {
        bool subject_side = tx.target == contracts::kSamc;
        std::string_view add = subject_side ? abi::kSubjectAdd : abi::kObjectAdd;
        std::string_view update = subject_side ? abi::kSubjectUpdate : abi::kObjectUpdate;
        std::string_view del = subject_side ? abi::kSubjectDelete : abi::kObjectDelete;

        if (tx.abi == add) {
            auto id = account_arg(tx.args, "id");
            auto attrs = attrs_arg(tx.args, "attrs");
            if (!id || !attrs) return fail("MalformedArgs");
            return from(subject_side ? system_.subject_add(tx.sender, *id, *attrs)
                                     : system_.object_add(tx.sender, *id, *attrs));
        }
        if (tx.abi == update) {
            auto id = account_arg(tx.args, "id");
            auto name = string_arg(tx.args, "name");
            auto value = string_arg(tx.args, "value");
            if (!id || !name || !value) return fail("MalformedArgs");
            return from(subject_side ? system_.subject_update(tx.sender, *id, *name, *value)
                                     : system_.object_update(tx.sender, *id, *name, *value));
        }
        if (tx.abi == del) {
            auto id = account_arg(tx.args, "id");
            auto name = string_arg(tx.args, "name");
            if (!id || !name) return fail("MalformedArgs");
            return from(subject_side ? system_.subject_delete(tx.sender, *id, *name)
                                     : system_.object_delete(tx.sender, *id, *name));
        }
        return fail("UnknownAbi");
    }

    if (tx.target == contracts::kPmc) {
        if (tx.abi == abi::kPolicyAdd) {
            auto policy = policy_arg(tx.args);
            if (!policy) return fail("MalformedArgs");
            return from(system_.policy_add(tx.sender, *policy));
        }
        if (tx.abi == abi::kPolicyUpdate) {
            auto index = index_arg(tx.args);
            auto policy = policy_arg(tx.args);
            if (!index || !policy) return fail("MalformedArgs");
            return from(system_.policy_update(tx.sender, *index, *policy));
        }
        if (tx.abi == abi::kPolicyDelete) {
            auto policy = policy_arg(tx.args);
            if (!policy) return fail("MalformedArgs");
            return from(system_.policy_delete(tx.sender, *policy));
        }
        if (tx.abi == abi::kFindMatchPolicy || tx.abi == abi::kFindExactMatchPolicy) {
            auto sa = attrs_arg(tx.args, "sa");
            auto oa = attrs_arg(tx.args, "oa");
            if (!sa || !oa) return fail("MalformedArgs");
            return from(tx.abi == abi::kFindMatchPolicy
                            ? system_.find_match_policy(tx.sender, *sa, *oa)
                            : system_.find_exact_match_policy(tx.sender, *sa, *oa));
        }
        return fail("UnknownAbi");
    }

    // ACC
    if (tx.abi != abi::kAccessControl) return fail("UnknownAbi");
    if (!system_.all_deployed()) return fail("UnknownContract");
    auto subject = account_arg(tx.args, "subject");
    auto object = account_arg(tx.args, "object");
    auto actions_it = tx.args.find("actions");
    if (!subject || !object || actions_it == tx.args.end()) return fail("MalformedArgs");
    auto actions = codec::actions_from_json(*actions_it);
    if (!actions) return fail("MalformedArgs");
    return from(system_.access_control(*subject, *object, *actions, tx.timestamp));
}

TxOutcome Chain::submit(Transaction tx) {
    if (tx.seq != log_.size()) {
        return TxOutcome{TxStatus::Rejected, "SeqMismatch", Json::object(), {}};
    }
    if (tx.timestamp < clock_) {
        return TxOutcome{TxStatus::Rejected, "ClockRegression", Json::object(), {}};
    }
    TxOutcome outcome = dispatch(tx);
    log_.push_back(TxRecord{tx, outcome.receipt, outcome.result, outcome.error});
    clock_ = tx.timestamp;
    total_gas_ += outcome.receipt.total;
    return outcome;
}

std::string Chain::storage_digest() const {
    return codec::sha256_hex(system_.storage_json().dump());
}

std::string Chain::state_digest() const {
    Json j{{"storage", system_.storage_json()}, {"clock", clock_}};
    return codec::sha256_hex(j.dump());
}

void Chain::snapshot(std::ostream& out) const {
    std::string bytes;
    for (const TxRecord& record : log_) {
        bytes += record.tx.canonical_line();
        bytes += '\n';
    }
    out << bytes << codec::sha256_hex(bytes) << '\n';
}

void Chain::snapshot_file(const std::filesystem::path& path) const {
    std::filesystem::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + temp.string());
        snapshot(out);
    }
    std::filesystem::rename(temp, path);
}

Chain Chain::restore(std::istream& in, gas::CostParams params, gas::DeployConstants deploy) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    if (lines.empty()) throw CorruptLog("missing digest line");

    std::string digest = lines.back();
    lines.pop_back();
    std::string bytes;
    for (const std::string& record : lines) {
        bytes += record;
        bytes += '\n';
    }
    if (codec::sha256_hex(bytes) != digest) throw CorruptLog("log digest mismatch");

    Chain chain(std::move(params), deploy);
    for (const std::string& record : lines) {
        auto tx = Transaction::from_line(record);
        if (!tx) throw CorruptLog("malformed transaction record");
        if (tx->canonical_line() != record) throw CorruptLog("non-canonical transaction record");
        TxOutcome outcome = chain.submit(*tx);
        if (outcome.status == TxStatus::Rejected) {
            throw CorruptLog("transaction rejected during replay: " + outcome.error);
        }
    }
    return chain;
}

Chain Chain::restore_file(const std::filesystem::path& path, gas::CostParams params,
                          gas::DeployConstants deploy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptLog("cannot open " + path.string());
    return restore(in, std::move(params), deploy);
}

}  // namespace abacsim::chain
