#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "abacsim/gas_model.hpp"

namespace abacsim::cost {

using Gas = gas::Gas;

enum class RunMode {
    Analytic,  // evaluate the cost formulas
    Metered,   // drive real transactions through a chain and sum receipts
};

std::string_view to_string(RunMode mode);
std::optional<RunMode> run_mode_from_string(std::string_view text);

struct ExperimentConfig {
    std::int64_t m_max = 1000;         // subject-object pair ceiling
    std::int64_t pairs_per_policy = 1; // p: one policy handles p pairs
    bool shared_all = false;           // p = m: every pair shares one policy
    RunMode run = RunMode::Analytic;
    gas::SearchMode search = gas::SearchMode::PerPair;
    gas::CostParams params{};
    gas::DeployConstants deploy{};
    std::int64_t metered_ceiling = 200;  // desk-scale guard for metered runs

    std::int64_t policies_for(std::int64_t m) const;  // n = ⌈m/p⌉ (1 when shared)
    bool validate(std::string* why = nullptr) const;
};

struct CurveRow {
    std::int64_t m = 0;
    Gas proposed_gas = 0;  // cumulative, deployment included
    Gas acl_gas = 0;       // cumulative, deployment included
};

struct Crossover {
    std::string label;  // proposed_below_acl / proposed_above_acl
    std::int64_t m = 0;
};

struct CurveReport {
    gas::CostParams params;
    gas::DeployConstants deploy;
    std::vector<CurveRow> rows;
    std::vector<Crossover> crossovers;

    /// Header m,proposed_gas,acl_gas,proposed_usd,acl_usd; crossovers appended
    /// as comment lines `# crossover <label> m=<value>`.
    void write_csv(std::ostream& out) const;
};

/// First m of every strict sign change of proposed_gas - acl_gas.
std::vector<Crossover> locate_crossovers(const std::vector<CurveRow>& rows);

struct DeploymentReport {
    gas::CostParams params;
    gas::DeployConstants deploy;
    Gas proposed_gas = 0;
    Gas acl_gas = 0;
    Gas metered_proposed_gas = 0;  // four deploy transactions on a fresh chain

    void write_csv(std::ostream& out) const;
    void write_table(std::ostream& out) const;
};

struct ScenarioRow {
    std::string metric;
    Gas gas_cost = 0;
    std::optional<Gas> paper_gas;         // published table value, where one exists
    std::optional<std::string> paper_usd;

    std::string usd_text(const gas::CostParams& params) const;
};

struct ScenarioReport {
    std::string name;
    gas::CostParams params;
    std::vector<ScenarioRow> rows;

    const ScenarioRow* row(std::string_view metric) const;
    void write_csv(std::ostream& out) const;
};

DeploymentReport deployment_report(const gas::CostParams& params = {},
                                   const gas::DeployConstants& deploy = {});

CurveReport operating_curve(const ExperimentConfig& config);

/// Two newly equipped lights in a laboratory of ten members, on a campus
/// already running 100 policies.
ScenarioReport scenario1(const gas::CostParams& params = {},
                         const gas::DeployConstants& deploy = {});

/// 300 new members join a system of 150 objects (15 accessed per subject)
/// and 100 policies. Worst-case pair counts are emitted under both the
/// all-objects reading (300·150) and the access-pattern reading (300·15).
ScenarioReport scenario2(const gas::CostParams& params = {},
                         const gas::DeployConstants& deploy = {});

}  // namespace abacsim::cost
