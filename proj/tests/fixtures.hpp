#pragma once

// Shared test fixture: the student/camera example records and the lab policy
// used across the functional tests.

#include <cstdint>

#include "abacsim/core.hpp"

namespace fixtures {

using abacsim::core::AccountId;
using abacsim::core::ActionFlags;
using abacsim::core::AttributeSet;
using abacsim::core::Policy;
using abacsim::core::TimeContext;

inline constexpr std::int64_t kPolicyStart = 1563206776;
inline constexpr std::int64_t kPolicyEnd = 1575483330;
inline constexpr std::int64_t kInsideWindow = 1570000000;

inline AccountId subject_id() {
    return *AccountId::parse("0x3d03000000000000000000000000000000000000");
}

inline AccountId object_id() {
    return *AccountId::parse("0x272a000000000000000000000000000000000000");
}

inline AccountId admin_id() {
    return *AccountId::parse("0x0000000000000000000000000000000000000001");
}

/// Subject record attributes as submitted (Role lowercase; ingestion
/// normalizes it to "Student").
inline AttributeSet subject_attrs_submitted() {
    AttributeSet attrs;
    attrs.set("Name", "Alice");
    attrs.set("Org", "NAIST");
    attrs.set("Dep", "IS");
    attrs.set("Lab", "LSM");
    attrs.set("Role", "student");
    attrs.set("Others", "");
    return attrs;
}

inline AttributeSet subject_attrs_stored() {
    AttributeSet attrs = subject_attrs_submitted();
    attrs.set("Role", "Student");
    return attrs;
}

inline AttributeSet object_attrs() {
    AttributeSet attrs;
    attrs.set("Name", "Camera");
    attrs.set("Org", "NAIST");
    attrs.set("Dep", "IS");
    attrs.set("Lab", "LSM");
    attrs.set("Place", "Room1");
    attrs.set("Others", "");
    return attrs;
}

/// The lab policy: students of NAIST/IS/LSM may read and write any object of
/// the same lab, within [kPolicyStart, kPolicyEnd].
inline Policy lab_policy() {
    Policy policy;
    policy.sa.set("Name", "");
    policy.sa.set("Org", "NAIST");
    policy.sa.set("Dep", "IS");
    policy.sa.set("Lab", "LSM");
    policy.sa.set("Role", "Student");
    policy.oa.set("Name", "");
    policy.oa.set("Org", "NAIST");
    policy.oa.set("Dep", "IS");
    policy.oa.set("Lab", "LSM");
    policy.oa.set("Place", "");
    policy.actions = ActionFlags{true, true, false};
    policy.context = TimeContext{1, kPolicyStart, kPolicyEnd};
    return policy;
}

inline ActionFlags read_action() { return {true, false, false}; }
inline ActionFlags write_action() { return {false, true, false}; }
inline ActionFlags execute_action() { return {false, false, true}; }

}  // namespace fixtures
