// Command-line front door: deploy, attribute/policy management, access
// requests, state persistence and the cost experiments.

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abacsim/chain.hpp"
#include "abacsim/codec.hpp"
#include "abacsim/cost_eval.hpp"

using namespace abacsim;
namespace fs = std::filesystem;

namespace {

struct CliError {
    std::string name;
    std::string detail;
};

// ── Session ──────────────────────────────────────────────────────────────────

struct Session {
    std::string state_path = "abacsim.state";
    std::string sender_text = "0x0000000000000000000000000000000000000001";
    bool dry_run = false;
    gas::CostParams params;
    gas::DeployConstants deploy;

    core::AccountId sender() const {
        auto id = core::AccountId::parse(sender_text);
        if (!id) throw CliError{"BadAccountId", sender_text};
        return *id;
    }

    chain::Chain load() const {
        if (!fs::exists(state_path)) return chain::Chain(params, deploy);
        try {
            return chain::Chain::restore_file(state_path, params, deploy);
        } catch (const chain::CorruptLog& e) {
            throw CliError{"CorruptLog", e.what()};
        }
    }

    void save(const chain::Chain& chain) const {
        if (dry_run) return;
        chain.snapshot_file(state_path);
    }
};

/// Exclusive advisory lock per state path; removed on scope exit.
class StateLock {
public:
    explicit StateLock(const std::string& state_path) : path_(state_path + ".lock") {
        int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0) throw CliError{"StateLocked", path_};
        ::close(fd);
        held_ = true;
    }
    ~StateLock() {
        if (held_) {
            std::error_code ec;
            fs::remove(path_, ec);
        }
    }
    StateLock(const StateLock&) = delete;
    StateLock& operator=(const StateLock&) = delete;

private:
    std::string path_;
    bool held_ = false;
};

// ── Parsing helpers ──────────────────────────────────────────────────────────

core::AccountId parse_account(const std::string& text) {
    auto id = core::AccountId::parse(text);
    if (!id) throw CliError{"BadAccountId", text};
    return *id;
}

core::AttributeSet parse_attr_pairs(const std::vector<std::string>& pairs) {
    core::AttributeSet attrs;
    for (const std::string& pair : pairs) {
        auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw CliError{"BadAttribute", pair + " (expected NAME=VALUE)"};
        }
        std::string name = pair.substr(0, eq);
        if (name.empty() || attrs.contains(name)) {
            throw CliError{"BadAttribute", pair};
        }
        attrs.set(std::move(name), pair.substr(eq + 1));
    }
    return attrs;
}

std::int64_t parse_usd_rate_cents(const std::string& text) {
    auto dot = text.find('.');
    std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (frac.size() > 2) throw CliError{"BadUsdRate", text + " (at most two decimals)"};
    while (frac.size() < 2) frac.push_back('0');
    try {
        return std::stoll(whole) * 100 + std::stoll(frac);
    } catch (const std::exception&) {
        throw CliError{"BadUsdRate", text};
    }
}

struct PolicyFlags {
    std::string file;
    std::vector<std::string> sa;
    std::vector<std::string> oa;
    bool read = false;
    bool write = false;
    bool execute = false;
    std::int32_t mode = 0;
    std::int64_t start = 0;
    std::int64_t end = 0;

    void add_to(CLI::App* cmd, bool with_actions = true) {
        cmd->add_option("--file", file, "Policy as a JSON file ({sa, oa, actions, context})");
        cmd->add_option("--sa", sa, "Subject attribute requirement NAME=VALUE (repeatable)");
        cmd->add_option("--oa", oa, "Object attribute requirement NAME=VALUE (repeatable)");
        if (with_actions) {
            cmd->add_flag("--read", read, "Allow read");
            cmd->add_flag("--write", write, "Allow write");
            cmd->add_flag("--execute", execute, "Allow execute");
            cmd->add_option("--mode", mode, "Time context mode (0 or 1)");
            cmd->add_option("--start", start, "Window start (unixtime, mode 1)");
            cmd->add_option("--end", end, "Window end (unixtime, mode 1)");
        }
    }

    core::Policy build() const {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) throw CliError{"BadPolicyFile", file};
            auto parsed = codec::Json::parse(in, nullptr, false);
            if (parsed.is_discarded()) throw CliError{"BadPolicyFile", file + " (not JSON)"};
            auto policy = codec::policy_from_json(parsed);
            if (!policy) throw CliError{"BadPolicyFile", file + " (schema mismatch)"};
            return *policy;
        }
        core::Policy policy;
        policy.sa = parse_attr_pairs(sa);
        policy.oa = parse_attr_pairs(oa);
        policy.actions = {read, write, execute};
        policy.context = {mode, start, end};
        if (!policy.context.valid()) throw CliError{"BadTimeContext", "mode/start/end"};
        return policy;
    }
};

// ── Output helpers ───────────────────────────────────────────────────────────

std::string fee_line(gas::Gas gas_cost, const gas::CostParams& params) {
    gas::Fee fee = gas::txfee(gas_cost, params);
    return fee.ether_text() + " Ether / " + fee.usd_text() + " USD";
}

void print_receipt(const chain::TxOutcome& outcome, const Session& session) {
    std::cout << "gas:      " << outcome.receipt.total << "\n";
    std::cout << "fee:      " << fee_line(outcome.receipt.total, session.params) << "\n";
    if (session.dry_run) std::cout << "dry-run:  state not persisted\n";
}

chain::TxOutcome require_ok(chain::TxOutcome outcome) {
    if (!outcome.ok()) throw CliError{outcome.error, "transaction failed"};
    return outcome;
}

void print_attrs(const core::AttributeSet& attrs) {
    for (const auto& [name, value] : attrs.entries()) {
        std::cout << name << "=" << value << "\n";
    }
}

void write_report(const std::string& out_path, const std::string& csv) {
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw CliError{"CannotWrite", out_path};
        out << csv;
        std::cout << "wrote " << out_path << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smart-contract ABAC engine on a deterministic chain simulator"};
    app.require_subcommand(1);

    Session session;
    app.add_option("--state", session.state_path, "Transaction-log state file")
        ->envname("ABACSIM_STATE");
    app.add_option("--sender", session.sender_text, "Sender account (0x + 40 hex)")
        ->envname("ABACSIM_SENDER");
    app.add_flag("--dry-run", session.dry_run, "Evaluate without persisting state");
    app.add_option("--max-subject-attrs", session.params.subject_attr_limit, "A_s bound");
    app.add_option("--max-object-attrs", session.params.object_attr_limit, "A_o bound");
    app.add_option("--max-subject-chars", session.params.subject_char_limit, "C_s bound");
    app.add_option("--max-object-chars", session.params.object_char_limit, "C_o bound");
    app.add_option("--gas-price", session.params.gas_price_gwei, "Gas price in Gwei");
    app.add_option_function<gas::Gas>(
        "--subject-add-code",
        [&](gas::Gas value) { session.params.subject_add_code_cost = value; },
        "Calibrated subjectAdd code cost (required when A_s != 6)");
    app.add_option_function<gas::Gas>(
        "--object-add-code",
        [&](gas::Gas value) { session.params.object_add_code_cost = value; },
        "Calibrated objectAdd code cost (required when A_o != 6)");
    app.add_option_function<std::string>(
        "--usd-per-ether",
        [&](const std::string& text) {
            session.params.usd_cents_per_ether = parse_usd_rate_cents(text);
        },
        "USD per Ether (e.g. 132.00)");

    // deploy ------------------------------------------------------------------
    auto* deploy_cmd = app.add_subcommand("deploy", "Deploy SAMC, OAMC, PMC and ACC");
    deploy_cmd->callback([&] {
        StateLock lock(session.state_path);
        chain::Chain chain = session.load();
        gas::Gas total = 0;
        for (auto contract :
             {contracts::kSamc, contracts::kOamc, contracts::kPmc, contracts::kAcc}) {
            auto outcome = require_ok(chain.deploy(contract, session.sender()));
            std::cout << contract << "  " << outcome.receipt.total << " gas\n";
            total += outcome.receipt.total;
        }
        std::cout << "total  " << total << " gas / " << fee_line(total, session.params) << "\n";
        session.save(chain);
    });

    // subject / object ---------------------------------------------------------
    struct RecordArgs {
        std::string id;
        std::vector<std::string> attrs;
        std::string name;
        std::string value;
    };
    auto add_record_commands = [&](const std::string& noun, std::string_view target,
                                   std::string_view add_abi, std::string_view update_abi,
                                   std::string_view delete_abi, bool subject_side) {
        auto* cmd = app.add_subcommand(noun, "Manage " + noun + " attribute records");
        cmd->require_subcommand(1);
        auto args = std::make_shared<RecordArgs>();

        auto* add = cmd->add_subcommand("add", "Create or update a record (upsert)");
        add->add_option("--id", args->id, "Account id")->required();
        add->add_option("attrs", args->attrs, "NAME=VALUE pairs (VALUE may be empty)");
        add->callback([&, args, target, add_abi] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(chain.make_tx(
                session.sender(), target, add_abi,
                chain::abi::record_add_args(parse_account(args->id),
                                            parse_attr_pairs(args->attrs)))));
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* update = cmd->add_subcommand("update", "Rewrite one attribute value");
        update->add_option("--id", args->id)->required();
        update->add_option("--name", args->name)->required();
        update->add_option("--value", args->value)->required();
        update->callback([&, args, target, update_abi] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(chain.make_tx(
                session.sender(), target, update_abi,
                chain::abi::record_update_args(parse_account(args->id), args->name,
                                               args->value))));
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* del = cmd->add_subcommand("delete", "Delete one attribute");
        del->add_option("--id", args->id)->required();
        del->add_option("--name", args->name)->required();
        del->callback([&, args, target, delete_abi] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(chain.make_tx(
                session.sender(), target, delete_abi,
                chain::abi::record_delete_args(parse_account(args->id), args->name))));
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* get = cmd->add_subcommand("get", "Print a record's attributes (no transaction)");
        get->add_option("--id", args->id)->required();
        get->callback([&, args, subject_side] {
            chain::Chain chain = session.load();
            const core::AttributeSet* attrs =
                subject_side ? chain.system().subject_attrs(parse_account(args->id))
                             : chain.system().object_attrs(parse_account(args->id));
            if (attrs == nullptr) {
                throw CliError{subject_side ? "NoSuchSubject" : "NoSuchObject", args->id};
            }
            print_attrs(*attrs);
        });
    };
    add_record_commands("subject", contracts::kSamc, chain::abi::kSubjectAdd,
                        chain::abi::kSubjectUpdate, chain::abi::kSubjectDelete, true);
    add_record_commands("object", contracts::kOamc, chain::abi::kObjectAdd,
                        chain::abi::kObjectUpdate, chain::abi::kObjectDelete, false);

    // policy --------------------------------------------------------------------
    auto* policy_cmd = app.add_subcommand("policy", "Manage the policy list");
    policy_cmd->require_subcommand(1);
    {
        auto flags = std::make_shared<PolicyFlags>();
        auto index = std::make_shared<std::size_t>(0);

        auto* add = policy_cmd->add_subcommand("add", "Append a policy");
        flags->add_to(add);
        add->callback([&, flags] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(
                chain.make_tx(session.sender(), contracts::kPmc, chain::abi::kPolicyAdd,
                              chain::abi::policy_add_args(flags->build()))));
            std::cout << "index:    " << outcome.result.at("index") << "\n";
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* update = policy_cmd->add_subcommand("update", "Replace the policy at an index");
        update->add_option("--index", *index)->required();
        flags->add_to(update);
        update->callback([&, flags, index] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(
                chain.make_tx(session.sender(), contracts::kPmc, chain::abi::kPolicyUpdate,
                              chain::abi::policy_update_args(*index, flags->build()))));
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* del = policy_cmd->add_subcommand("delete",
                                               "Delete the policy matching --sa/--oa exactly");
        flags->add_to(del);
        del->callback([&, flags] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(
                chain.make_tx(session.sender(), contracts::kPmc, chain::abi::kPolicyDelete,
                              chain::abi::policy_delete_args(flags->build()))));
            std::cout << "index:    " << outcome.result.at("index") << "\n";
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* find = policy_cmd->add_subcommand("find", "Partial-match policy search");
        flags->add_to(find, false);
        find->callback([&, flags] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(chain.make_tx(
                session.sender(), contracts::kPmc, chain::abi::kFindMatchPolicy,
                chain::abi::find_args(parse_attr_pairs(flags->sa),
                                      parse_attr_pairs(flags->oa)))));
            std::cout << "indices:  " << outcome.result.at("indices").dump() << "\n";
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* find_exact = policy_cmd->add_subcommand("find-exact",
                                                      "Complete-match policy search");
        flags->add_to(find_exact, false);
        find_exact->callback([&, flags] {
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            auto outcome = require_ok(chain.submit(chain.make_tx(
                session.sender(), contracts::kPmc, chain::abi::kFindExactMatchPolicy,
                chain::abi::find_args(parse_attr_pairs(flags->sa),
                                      parse_attr_pairs(flags->oa)))));
            std::cout << "index:    "
                      << (outcome.result.at("index").is_null() ? std::string("none")
                                                               : outcome.result.at("index").dump())
                      << "\n";
            print_receipt(outcome, session);
            session.save(chain);
        });

        auto* get = policy_cmd->add_subcommand("get", "Print the policy at an index (no transaction)");
        get->add_option("--index", *index)->required();
        get->callback([&, index] {
            chain::Chain chain = session.load();
            if (*index >= chain.system().policies().size()) {
                throw CliError{"IndexOutOfRange", std::to_string(*index)};
            }
            std::cout << codec::policy_to_json(chain.system().policies().items()[*index]).dump(2)
                      << "\n";
        });
    }

    // access --------------------------------------------------------------------
    {
        struct AccessArgs {
            std::string subject;
            std::string object;
            std::vector<std::string> actions;
            std::int64_t now = -1;
        };
        auto args = std::make_shared<AccessArgs>();
        auto* access = app.add_subcommand("access", "Send an access request to the ACC");
        access->add_option("--subject", args->subject)->required();
        access->add_option("--object", args->object)->required();
        access->add_option("--action", args->actions, "read|write|execute (repeatable)")
            ->required();
        access->add_option("--now", args->now, "Decision time (unixtime; must not regress)");
        access->callback([&, args] {
            core::ActionFlags actions;
            for (const std::string& action : args->actions) {
                if (action == "read") actions.read = true;
                else if (action == "write") actions.write = true;
                else if (action == "execute") actions.execute = true;
                else throw CliError{"BadAction", action};
            }
            StateLock lock(session.state_path);
            chain::Chain chain = session.load();
            core::AccountId subject = parse_account(args->subject);
            chain::Transaction tx = chain.make_tx(
                subject, contracts::kAcc, chain::abi::kAccessControl,
                chain::abi::access_args(subject, parse_account(args->object), actions),
                args->now >= 0 ? std::optional<std::int64_t>(args->now) : std::nullopt);
            std::string request_hash = tx.hash();
            auto outcome = require_ok(chain.submit(std::move(tx)));

            bool permitted = outcome.result.at("permitted").get<bool>();
            std::cout << "contract: ACC\n";
            std::cout << "request:  " << request_hash << "\n";
            std::cout << "subject:  " << args->subject << "\n";
            std::cout << "object:   " << args->object << "\n";
            std::cout << "result:   " << (permitted ? "true" : "false") << "\n";
            std::cout << "reason:   " << outcome.result.at("reason").get<std::string>() << "\n";
            std::cout << "steps:   ";
            for (const auto& step : outcome.result.at("steps")) {
                std::cout << " " << step.at("abi").get<std::string>() << "="
                          << step.at("gas").get<gas::Gas>();
            }
            std::cout << "\n";
            print_receipt(outcome, session);
            session.save(chain);
            // A denial is a successful outcome; the exit code stays zero.
        });
    }

    // cost ----------------------------------------------------------------------
    {
        struct CostArgs {
            std::string out;
            std::int64_t p = 1;
            bool shared_all = false;
            std::int64_t m_max = 1000;
            std::string search = "per-pair";
            std::string mode = "analytic";
        };
        auto args = std::make_shared<CostArgs>();
        auto* cost_cmd = app.add_subcommand("cost", "Cost experiments");
        cost_cmd->require_subcommand(1);

        auto* cost_deploy = cost_cmd->add_subcommand("deploy", "Deployment cost report");
        cost_deploy->add_option("--out", args->out, "Write CSV here instead of a table");
        cost_deploy->callback([&, args] {
            auto report = cost::deployment_report(session.params, session.deploy);
            if (report.metered_proposed_gas != report.proposed_gas) {
                throw CliError{"MeteringMismatch", "deployment receipts diverge from constants"};
            }
            if (args->out.empty()) {
                report.write_table(std::cout);
            } else {
                std::ostringstream csv;
                report.write_csv(csv);
                write_report(args->out, csv.str());
            }
        });

        auto* curve = cost_cmd->add_subcommand("curve", "Operating cost vs pair count");
        curve->add_option("--p", args->p, "Pairs handled by one policy");
        curve->add_flag("--shared-all", args->shared_all, "All pairs share one policy");
        curve->add_option("--m-max", args->m_max, "Pair count ceiling");
        auto* search_opt =
            curve->add_option("--search", args->search, "per-pair or per-policy search cost");
        curve->add_option("--mode", args->mode, "analytic or metered");
        curve->callback([&, args, search_opt] {
            cost::ExperimentConfig config;
            config.m_max = args->m_max;
            config.pairs_per_policy = args->p;
            config.shared_all = args->shared_all;
            config.params = session.params;
            config.deploy = session.deploy;
            auto mode = cost::run_mode_from_string(args->mode);
            if (!mode) throw CliError{"BadMode", args->mode};
            config.run = *mode;
            auto search = gas::search_mode_from_string(args->search);
            if (!search) throw CliError{"BadSearchMode", args->search};
            config.search = *search;
            if (config.run == cost::RunMode::Metered && search_opt->count() == 0) {
                config.search = gas::SearchMode::PerPolicy;  // metered sequences are per-policy
            }
            std::string why;
            if (!config.validate(&why)) throw CliError{"BadExperiment", why};
            std::ostringstream csv;
            cost::operating_curve(config).write_csv(csv);
            write_report(args->out, csv.str());
        });
        curve->add_option("--out", args->out, "Write CSV here");

        for (auto [name, help, fn] :
             {std::tuple{"scenario1", "Two new lights in a ten-member laboratory",
                         &cost::scenario1},
              std::tuple{"scenario2", "Three hundred new members join", &cost::scenario2}}) {
            auto* scenario = cost_cmd->add_subcommand(name, help);
            scenario->add_option("--out", args->out, "Write CSV here");
            scenario->callback([&, args, fn] {
                std::ostringstream csv;
                fn(session.params, session.deploy).write_csv(csv);
                write_report(args->out, csv.str());
            });
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.name << " (" << e.detail << ")\n";
        return 2;
    } catch (const gas::UnsupportedBound& e) {
        std::cerr << "error: UnsupportedBound (" << e.what() << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal (" << e.what() << ")\n";
        return 2;
    }
    return 0;
}
