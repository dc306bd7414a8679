#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "abacsim/core.hpp"

namespace abacsim::codec {

using Json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes);

// JSON forms used in transaction args, policy files and state digests.
// Attribute sets are arrays of [name, value] pairs preserving order; policies
// are {sa, oa, actions, context} objects.

Json attrs_to_json(const core::AttributeSet& attrs);
std::optional<core::AttributeSet> attrs_from_json(const Json& j);

Json actions_to_json(const core::ActionFlags& actions);
std::optional<core::ActionFlags> actions_from_json(const Json& j);

Json context_to_json(const core::TimeContext& context);
std::optional<core::TimeContext> context_from_json(const Json& j);

Json policy_to_json(const core::Policy& policy);
std::optional<core::Policy> policy_from_json(const Json& j);

}  // namespace abacsim::codec
