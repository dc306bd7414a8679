#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "abacsim/contracts.hpp"
#include "abacsim/core.hpp"
#include "abacsim/gas_model.hpp"
#include "abacsim/receipt.hpp"

namespace abacsim::chain {

using Json = nlohmann::ordered_json;

// Pseudo-targets understood by the runtime besides the four contracts.
inline constexpr std::string_view kDeployTarget = "DEPLOY";
inline constexpr std::string_view kChainTarget = "CHAIN";
inline constexpr std::string_view kSetClockAbi = "setClock";

/// A signed-intent record applied to the chain. seq must equal the current
/// log length and timestamps never decrease across the log.
struct Transaction {
    std::uint64_t seq = 0;
    core::AccountId sender;
    std::string target;  // contract name, DEPLOY or CHAIN
    std::string abi;
    Json args = Json::object();
    std::int64_t timestamp = 0;

    /// One-line canonical JSON with fixed key order
    /// {seq, sender, target, abi, args, timestamp}.
    std::string canonical_line() const;
    static std::optional<Transaction> from_line(std::string_view line);

    /// SHA-256 of the canonical line.
    std::string hash() const;
};

enum class TxStatus {
    Applied,   // executed and logged
    Failed,    // ABI error; logged with a zero-gas receipt, state unchanged
    Rejected,  // submit precondition violated; not logged
};

struct TxOutcome {
    TxStatus status = TxStatus::Rejected;
    std::string error;
    Json result = Json::object();
    GasReceipt receipt;

    bool ok() const { return status == TxStatus::Applied; }
};

struct TxRecord {
    Transaction tx;
    GasReceipt receipt;
    Json result;
    std::string error;  // empty when applied
};

class CorruptLog : public std::runtime_error {
public:
    explicit CorruptLog(const std::string& what) : std::runtime_error(what) {}
};

// Canonical args builders. Everything that submits transactions goes through
// these so a given call has exactly one byte representation in the log.
namespace abi {

inline constexpr std::string_view kSubjectAdd = "subjectAdd";
inline constexpr std::string_view kSubjectUpdate = "subjectUpdate";
inline constexpr std::string_view kSubjectDelete = "subjectDelete";
inline constexpr std::string_view kObjectAdd = "objectAdd";
inline constexpr std::string_view kObjectUpdate = "objectUpdate";
inline constexpr std::string_view kObjectDelete = "objectDelete";
inline constexpr std::string_view kPolicyAdd = "policyAdd";
inline constexpr std::string_view kPolicyUpdate = "policyUpdate";
inline constexpr std::string_view kPolicyDelete = "policyDelete";
inline constexpr std::string_view kFindMatchPolicy = "findMatchPolicy";
inline constexpr std::string_view kFindExactMatchPolicy = "findExactMatchPolicy";
inline constexpr std::string_view kAccessControl = "accessControl";

Json deploy_args(const core::AccountId& admin);
Json set_clock_args(std::int64_t now);
Json record_add_args(const core::AccountId& id, const core::AttributeSet& attrs);
Json record_update_args(const core::AccountId& id, std::string_view name, std::string_view value);
Json record_delete_args(const core::AccountId& id, std::string_view name);
Json policy_add_args(const core::Policy& policy);
Json policy_update_args(std::size_t index, const core::Policy& policy);
Json policy_delete_args(const core::Policy& policy);
Json find_args(const core::AttributeSet& sa, const core::AttributeSet& oa);
Json access_args(const core::AccountId& subject, const core::AccountId& object,
                 const core::ActionFlags& actions);

}  // namespace abi

/// Deterministic single-chain execution environment: a serialized transaction
/// log folded into contract state, with analytic gas metering and replayable
/// persistence.
///
/// Single-writer: submission is strictly serialized. Read-only views may be
/// used concurrently with each other but not with submission.
class Chain {
public:
    explicit Chain(gas::CostParams params = {}, gas::DeployConstants deploy = {});

    /// Validates seq/timestamp, dispatches to the target ABI, meters gas and
    /// appends to the log. Failed ABI calls are logged with zero gas; seq or
    /// clock violations are rejected without logging.
    TxOutcome submit(Transaction tx);

    /// Builds a transaction with the next seq. Without an explicit timestamp
    /// the current clock is used.
    Transaction make_tx(const core::AccountId& sender, std::string_view target,
                        std::string_view abi_name, Json args,
                        std::optional<std::int64_t> timestamp = std::nullopt) const;

    TxOutcome deploy(std::string_view contract, const core::AccountId& admin);
    TxOutcome set_clock(std::int64_t now);

    const contracts::System& system() const { return system_; }
    const std::vector<TxRecord>& log() const { return log_; }
    std::int64_t clock() const { return clock_; }
    gas::Gas total_gas() const { return total_gas_; }

    /// Digest of contract storage only (atomicity checks).
    std::string storage_digest() const;
    /// Digest of storage plus the logical clock (replay identity).
    std::string state_digest() const;

    // Persistence: newline-delimited canonical transaction records followed
    // by one line holding the SHA-256 hex of the preceding bytes.
    void snapshot(std::ostream& out) const;
    void snapshot_file(const std::filesystem::path& path) const;  // temp + rename
    static Chain restore(std::istream& in, gas::CostParams params = {},
                         gas::DeployConstants deploy = {});
    static Chain restore_file(const std::filesystem::path& path, gas::CostParams params = {},
                              gas::DeployConstants deploy = {});

private:
    TxOutcome dispatch(const Transaction& tx);

    contracts::System system_;
    std::vector<TxRecord> log_;
    std::int64_t clock_ = 0;
    gas::Gas total_gas_ = 0;
};

}  // namespace abacsim::chain
