#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abacsim::core {

// ── Identifiers ──────────────────────────────────────────────────────────────

/// 20-byte account address, rendered as 0x + 40 lowercase hex characters.
/// Equality and ordering are byte-wise.
class AccountId {
public:
    AccountId() = default;

    /// Accepts "0x" / "0X" followed by exactly 40 hex digits (any case).
    static std::optional<AccountId> parse(std::string_view text);

    /// Deterministic address with `n` in the low 8 bytes. Used by experiment
    /// drivers and tests that need many distinct accounts.
    static AccountId from_index(std::uint64_t n);

    std::string to_string() const;
    const std::array<std::uint8_t, 20>& bytes() const { return bytes_; }

    auto operator<=>(const AccountId&) const = default;

private:
    std::array<std::uint8_t, 20> bytes_{};
};

// ── Attributes ───────────────────────────────────────────────────────────────

struct AttributeBounds {
    std::size_t max_entries = 6;  // A_s / A_o
    std::size_t max_chars = 10;   // C_s / C_o, per attribute value
};

/// Ordered list of (name, value) string pairs with unique names.
///
/// The same type serves two roles: attached to a subject/object record it
/// describes what the entity *is*; attached to a policy it describes what a
/// policy *requires*, where an empty value is a wildcard (no constraint).
class AttributeSet {
public:
    using Entry = std::pair<std::string, std::string>;

    AttributeSet() = default;

    /// Rejects duplicate names.
    static std::optional<AttributeSet> from_entries(std::vector<Entry> entries);

    /// Upsert preserving insertion order. Returns true if a new entry was
    /// created, false if an existing value was overwritten.
    bool set(std::string name, std::string value);

    /// Removes the named entry; false if absent.
    bool erase(std::string_view name);

    const std::string* find(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    bool within(const AttributeBounds& bounds) const;

    /// Representation equality (order-sensitive). Semantic set equality is
    /// attrs_match_complete().
    bool operator==(const AttributeSet&) const = default;

private:
    std::vector<Entry> entries_;
};

// ── Policies ─────────────────────────────────────────────────────────────────

/// Time window context. mode 0 disables the window; mode 1 restricts access
/// to the closed interval [start_time, end_time] (unixtime seconds).
struct TimeContext {
    std::int32_t mode = 0;
    std::int64_t start_time = 0;
    std::int64_t end_time = 0;

    bool valid() const {
        return (mode == 0 || mode == 1) && (mode == 0 || start_time <= end_time);
    }
    bool active_at(std::int64_t now) const {
        return mode == 0 || (start_time <= now && now <= end_time);
    }
    bool operator==(const TimeContext&) const = default;
};

struct ActionFlags {
    bool read = false;
    bool write = false;
    bool execute = false;

    bool none() const { return !read && !write && !execute; }

    /// True when every flag set in `requested` is also set here.
    bool covers(const ActionFlags& requested) const {
        return (!requested.read || read) && (!requested.write || write) &&
               (!requested.execute || execute);
    }
    bool operator==(const ActionFlags&) const = default;
};

struct Policy {
    AttributeSet sa;      // required subject attributes ("" value = wildcard)
    AttributeSet oa;      // required object attributes
    ActionFlags actions;
    TimeContext context;

    bool operator==(const Policy&) const = default;
};

// ── Decisions ────────────────────────────────────────────────────────────────

enum class DecisionReason {
    Permit,
    NoMatchingPolicy,
    ActionNotAllowed,
    OutsideTimeWindow,
    UnknownSubject,
    UnknownObject,
};

std::string_view to_string(DecisionReason reason);
std::optional<DecisionReason> decision_reason_from_string(std::string_view text);

struct AccessDecision {
    bool permitted = false;
    DecisionReason reason = DecisionReason::NoMatchingPolicy;

    static AccessDecision permit() { return {true, DecisionReason::Permit}; }
    static AccessDecision deny(DecisionReason r) { return {false, r}; }

    bool operator==(const AccessDecision&) const = default;
};

// ── Matching and evaluation ──────────────────────────────────────────────────

/// Partial (subset) match: every non-wildcard entry of `policy_attrs` must
/// appear in `presented` with byte-identical name and value. Wildcard entries
/// (empty value) impose no constraint.
bool attrs_match_partial(const AttributeSet& policy_attrs, const AttributeSet& presented);

/// Complete match: identical (name, value) entries, wildcards included,
/// irrespective of order.
bool attrs_match_complete(const AttributeSet& a, const AttributeSet& b);

/// Checks one policy against a request, attributes already matched by the
/// caller. Action check first, time window second. A multi-flag request is
/// permitted only if this single policy covers every requested flag.
AccessDecision evaluate(const Policy& policy, const ActionFlags& action, std::int64_t now);

/// Full decision over an ordered policy list: scans for policies whose sa/oa
/// partially match the presented subject/object attributes; Permit if any of
/// them permits the action at `now`. With no attribute match the reason is
/// NoMatchingPolicy; otherwise the failure reason of the first matching
/// policy in list order.
AccessDecision decide(const AttributeSet& subject, const AttributeSet& object,
                      std::span<const Policy> policies, const ActionFlags& action,
                      std::int64_t now);

}  // namespace abacsim::core
