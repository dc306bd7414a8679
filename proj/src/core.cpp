#include "abacsim/core.hpp"

#include <algorithm>

namespace abacsim::core {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

std::optional<AccountId> AccountId::parse(std::string_view text) {
    if (text.size() != 42 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
        return std::nullopt;
    }
    AccountId id;
    for (std::size_t i = 0; i < 20; ++i) {
        int hi = hex_value(text[2 + 2 * i]);
        int lo = hex_value(text[3 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        id.bytes_[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return id;
}

AccountId AccountId::from_index(std::uint64_t n) {
    AccountId id;
    for (std::size_t i = 0; i < 8; ++i) {
        id.bytes_[19 - i] = static_cast<std::uint8_t>(n >> (8 * i));
    }
    return id;
}

std::string AccountId::to_string() const {
    std::string out = "0x";
    out.reserve(42);
    for (std::uint8_t b : bytes_) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

std::optional<AttributeSet> AttributeSet::from_entries(std::vector<Entry> entries) {
    AttributeSet set;
    for (auto& [name, value] : entries) {
        if (set.contains(name)) return std::nullopt;
        set.entries_.emplace_back(std::move(name), std::move(value));
    }
    return set;
}

bool AttributeSet::set(std::string name, std::string value) {
    for (auto& entry : entries_) {
        if (entry.first == name) {
            entry.second = std::move(value);
            return false;
        }
    }
    entries_.emplace_back(std::move(name), std::move(value));
    return true;
}

bool AttributeSet::erase(std::string_view name) {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.first == name; });
    if (it == entries_.end()) return false;
    entries_.erase(it);
    return true;
}

const std::string* AttributeSet::find(std::string_view name) const {
    for (const auto& entry : entries_) {
        if (entry.first == name) return &entry.second;
    }
    return nullptr;
}

bool AttributeSet::within(const AttributeBounds& bounds) const {
    if (entries_.size() > bounds.max_entries) return false;
    return std::all_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
        return e.second.size() <= bounds.max_chars;
    });
}

std::string_view to_string(DecisionReason reason) {
    switch (reason) {
        case DecisionReason::Permit: return "Permit";
        case DecisionReason::NoMatchingPolicy: return "NoMatchingPolicy";
        case DecisionReason::ActionNotAllowed: return "ActionNotAllowed";
        case DecisionReason::OutsideTimeWindow: return "OutsideTimeWindow";
        case DecisionReason::UnknownSubject: return "UnknownSubject";
        case DecisionReason::UnknownObject: return "UnknownObject";
    }
    return "Unknown";
}

std::optional<DecisionReason> decision_reason_from_string(std::string_view text) {
    for (auto r : {DecisionReason::Permit, DecisionReason::NoMatchingPolicy,
                   DecisionReason::ActionNotAllowed, DecisionReason::OutsideTimeWindow,
                   DecisionReason::UnknownSubject, DecisionReason::UnknownObject}) {
        if (to_string(r) == text) return r;
    }
    return std::nullopt;
}

bool attrs_match_partial(const AttributeSet& policy_attrs, const AttributeSet& presented) {
    for (const auto& [name, value] : policy_attrs.entries()) {
        if (value.empty()) continue;  // wildcard
        const std::string* presented_value = presented.find(name);
        if (presented_value == nullptr || *presented_value != value) return false;
    }
    return true;
}

bool attrs_match_complete(const AttributeSet& a, const AttributeSet& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [name, value] : a.entries()) {
        const std::string* other = b.find(name);
        if (other == nullptr || *other != value) return false;
    }
    return true;  // sizes equal + unique names ⇒ b has no extra entries
}

AccessDecision evaluate(const Policy& policy, const ActionFlags& action, std::int64_t now) {
    if (!policy.actions.covers(action)) {
        return AccessDecision::deny(DecisionReason::ActionNotAllowed);
    }
    if (!policy.context.active_at(now)) {
        return AccessDecision::deny(DecisionReason::OutsideTimeWindow);
    }
    return AccessDecision::permit();
}

AccessDecision decide(const AttributeSet& subject, const AttributeSet& object,
                      std::span<const Policy> policies, const ActionFlags& action,
                      std::int64_t now) {
    std::optional<AccessDecision> first_failure;
    for (const Policy& policy : policies) {
        if (!attrs_match_partial(policy.sa, subject) || !attrs_match_partial(policy.oa, object)) {
            continue;
        }
        AccessDecision decision = evaluate(policy, action, now);
        if (decision.permitted) return decision;
        if (!first_failure) first_failure = decision;
    }
    if (first_failure) return *first_failure;
    return AccessDecision::deny(DecisionReason::NoMatchingPolicy);
}

}  // namespace abacsim::core
