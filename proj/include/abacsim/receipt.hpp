#pragma once

#include "abacsim/gas_model.hpp"

namespace abacsim::chain {

/// Gas consumed by one transaction, split into the three published
/// components. total is always the sum of the parts.
struct GasReceipt {
    gas::Gas code_cost = 0;
    gas::Gas storage_cost = 0;
    gas::Gas init_cost = 0;
    gas::Gas total = 0;

    static GasReceipt of(gas::Gas code, gas::Gas storage = 0, gas::Gas init = 0) {
        return {code, storage, init, code + storage + init};
    }

    GasReceipt& operator+=(const GasReceipt& other) {
        code_cost += other.code_cost;
        storage_cost += other.storage_cost;
        init_cost += other.init_cost;
        total += other.total;
        return *this;
    }

    bool operator==(const GasReceipt&) const = default;
};

}  // namespace abacsim::chain
