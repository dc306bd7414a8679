#include "abacsim/codec.hpp"

#include <openssl/evp.h>

namespace abacsim::codec {

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0f]);
    }
    return out;
}

Json attrs_to_json(const core::AttributeSet& attrs) {
    Json out = Json::array();
    for (const auto& [name, value] : attrs.entries()) {
        out.push_back(Json::array({name, value}));
    }
    return out;
}

std::optional<core::AttributeSet> attrs_from_json(const Json& j) {
    if (!j.is_array()) return std::nullopt;
    std::vector<core::AttributeSet::Entry> entries;
    entries.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_string()) {
            return std::nullopt;
        }
        entries.emplace_back(item[0].get<std::string>(), item[1].get<std::string>());
    }
    return core::AttributeSet::from_entries(std::move(entries));
}

Json actions_to_json(const core::ActionFlags& actions) {
    return Json{{"read", actions.read}, {"write", actions.write}, {"execute", actions.execute}};
}

std::optional<core::ActionFlags> actions_from_json(const Json& j) {
    if (!j.is_object()) return std::nullopt;
    core::ActionFlags flags;
    for (auto [key, field] : {std::pair{"read", &flags.read},
                              std::pair{"write", &flags.write},
                              std::pair{"execute", &flags.execute}}) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_boolean()) return std::nullopt;
        *field = it->get<bool>();
    }
    return flags;
}

Json context_to_json(const core::TimeContext& context) {
    return Json{{"mode", context.mode},
                {"start_time", context.start_time},
                {"end_time", context.end_time}};
}

std::optional<core::TimeContext> context_from_json(const Json& j) {
    if (!j.is_object()) return std::nullopt;
    auto mode = j.find("mode");
    auto start = j.find("start_time");
    auto end = j.find("end_time");
    if (mode == j.end() || start == j.end() || end == j.end()) return std::nullopt;
    if (!mode->is_number_integer() || !start->is_number_integer() || !end->is_number_integer()) {
        return std::nullopt;
    }
    core::TimeContext context{mode->get<std::int32_t>(), start->get<std::int64_t>(),
                              end->get<std::int64_t>()};
    if (!context.valid()) return std::nullopt;
    return context;
}

Json policy_to_json(const core::Policy& policy) {
    return Json{{"sa", attrs_to_json(policy.sa)},
                {"oa", attrs_to_json(policy.oa)},
                {"actions", actions_to_json(policy.actions)},
                {"context", context_to_json(policy.context)}};
}

std::optional<core::Policy> policy_from_json(const Json& j) {
    if (!j.is_object()) return std::nullopt;
    auto sa = j.find("sa");
    auto oa = j.find("oa");
    auto actions = j.find("actions");
    auto context = j.find("context");
    if (sa == j.end() || oa == j.end() || actions == j.end() || context == j.end()) {
        return std::nullopt;
    }
    auto sa_set = attrs_from_json(*sa);
    auto oa_set = attrs_from_json(*oa);
    auto flags = actions_from_json(*actions);
    auto time = context_from_json(*context);
    if (!sa_set || !oa_set || !flags || !time) return std::nullopt;
    return core::Policy{std::move(*sa_set), std::move(*oa_set), *flags, *time};
}

}  // namespace abacsim::codec
