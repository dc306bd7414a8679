#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "abacsim/chain.hpp"
#include "abacsim/codec.hpp"
#include "fixtures.hpp"

using namespace abacsim;
using chain::Chain;
using chain::Transaction;
using chain::TxStatus;

namespace {

Chain deployed_chain() {
    Chain chain;
    for (auto contract : {contracts::kSamc, contracts::kOamc, contracts::kPmc, contracts::kAcc}) {
        REQUIRE(chain.deploy(contract, fixtures::admin_id()).ok());
    }
    return chain;
}

}  // namespace

TEST_CASE("deploying the four contracts charges the configured constants") {
    Chain chain;
    gas::Gas total = 0;
    for (auto contract : {contracts::kAcc, contracts::kSamc, contracts::kOamc, contracts::kPmc}) {
        auto outcome = chain.deploy(contract, fixtures::admin_id());
        REQUIRE(outcome.ok());
        total += outcome.receipt.total;
    }
    CHECK(total == 4'943'332);
    CHECK(chain.total_gas() == 4'943'332);

    auto again = chain.deploy(contracts::kAcc, fixtures::admin_id());
    CHECK(again.status == TxStatus::Failed);
    CHECK(again.error == "AlreadyDeployed");
    CHECK(again.receipt.total == 0);

    auto unknown = chain.deploy("NOPE", fixtures::admin_id());
    CHECK(unknown.error == "UnknownContract");
}

TEST_CASE("submit enforces seq and timestamp preconditions without logging") {
    Chain chain = deployed_chain();
    std::size_t logged = chain.log().size();

    Transaction tx = chain.make_tx(fixtures::admin_id(), contracts::kSamc,
                                   chain::abi::kSubjectAdd,
                                   chain::abi::record_add_args(fixtures::subject_id(),
                                                               fixtures::subject_attrs_submitted()));
    tx.seq += 3;
    auto bad_seq = chain.submit(tx);
    CHECK(bad_seq.status == TxStatus::Rejected);
    CHECK(bad_seq.error == "SeqMismatch");
    CHECK(chain.log().size() == logged);

    REQUIRE(chain.set_clock(100).ok());
    Transaction stale = chain.make_tx(fixtures::admin_id(), contracts::kSamc,
                                      chain::abi::kSubjectAdd,
                                      chain::abi::record_add_args(
                                          fixtures::subject_id(),
                                          fixtures::subject_attrs_submitted()),
                                      50);
    auto regressed = chain.submit(stale);
    CHECK(regressed.status == TxStatus::Rejected);
    CHECK(regressed.error == "ClockRegression");
    CHECK(chain.clock() == 100);
}

TEST_CASE("set_clock moves logical time forward only") {
    Chain chain;
    CHECK(chain.clock() == 0);
    CHECK(chain.set_clock(1563206776).ok());
    CHECK(chain.clock() == 1563206776);
    CHECK(chain.set_clock(1563206776).ok());  // idempotent
    CHECK(chain.set_clock(1563206775).status == TxStatus::Rejected);
    CHECK(chain.clock() == 1563206776);
    // Clock transactions are logged and carry no gas.
    CHECK(chain.log().size() == 2);
    CHECK(chain.total_gas() == 0);
}

TEST_CASE("unknown targets and abis fail but are logged") {
    Chain chain = deployed_chain();
    std::size_t logged = chain.log().size();

    auto ghost = chain.submit(chain.make_tx(fixtures::admin_id(), "GHOST", "noop",
                                            chain::Json::object()));
    CHECK(ghost.status == TxStatus::Failed);
    CHECK(ghost.error == "UnknownContract");

    auto bad_abi = chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc, "mint",
                                              chain::Json::object()));
    CHECK(bad_abi.error == "UnknownAbi");

    auto bad_args = chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc,
                                               chain::abi::kSubjectAdd,
                                               chain::Json{{"id", "not-an-address"}}));
    CHECK(bad_args.error == "MalformedArgs");

    CHECK(chain.log().size() == logged + 3);
    for (std::size_t i = logged; i < chain.log().size(); ++i) {
        CHECK(chain.log()[i].receipt.total == 0);
        CHECK_FALSE(chain.log()[i].error.empty());
    }
}

TEST_CASE("calling an undeployed contract is an UnknownContract failure") {
    Chain chain;
    auto outcome = chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc,
                                              chain::abi::kSubjectAdd,
                                              chain::abi::record_add_args(
                                                  fixtures::subject_id(),
                                                  fixtures::subject_attrs_submitted())));
    CHECK(outcome.status == TxStatus::Failed);
    CHECK(outcome.error == "UnknownContract");
}

TEST_CASE("failed transactions leave contract storage untouched") {
    Chain chain = deployed_chain();
    REQUIRE(chain
                .submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc,
                                      chain::abi::kSubjectAdd,
                                      chain::abi::record_add_args(
                                          fixtures::subject_id(),
                                          fixtures::subject_attrs_submitted())))
                .ok());
    std::string before = chain.storage_digest();

    // Unauthorized sender, oversized attribute set, missing record.
    core::AttributeSet oversized;
    for (int i = 0; i < 7; ++i) oversized.set("n" + std::to_string(i), "v");
    chain.submit(chain.make_tx(fixtures::subject_id(), contracts::kSamc, chain::abi::kSubjectAdd,
                               chain::abi::record_add_args(fixtures::subject_id(), oversized)));
    chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc, chain::abi::kSubjectAdd,
                               chain::abi::record_add_args(fixtures::subject_id(), oversized)));
    chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc, chain::abi::kSubjectDelete,
                               chain::abi::record_delete_args(fixtures::object_id(), "Name")));

    CHECK(chain.storage_digest() == before);
}

TEST_CASE("canonical transaction lines round-trip") {
    Chain chain = deployed_chain();
    chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kPmc, chain::abi::kPolicyAdd,
                               chain::abi::policy_add_args(fixtures::lab_policy())));

    for (const auto& record : chain.log()) {
        std::string line = record.tx.canonical_line();
        auto parsed = Transaction::from_line(line);
        REQUIRE(parsed.has_value());
        CHECK(parsed->canonical_line() == line);
    }

    CHECK_FALSE(Transaction::from_line("{\"seq\":0}").has_value());
    CHECK_FALSE(Transaction::from_line("not json").has_value());
}

TEST_CASE("snapshot and restore reproduce the state digest") {
    Chain chain = deployed_chain();
    chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc, chain::abi::kSubjectAdd,
                               chain::abi::record_add_args(fixtures::subject_id(),
                                                           fixtures::subject_attrs_submitted())));
    chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kOamc, chain::abi::kObjectAdd,
                               chain::abi::record_add_args(fixtures::object_id(),
                                                           fixtures::object_attrs())));
    chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kPmc, chain::abi::kPolicyAdd,
                               chain::abi::policy_add_args(fixtures::lab_policy())));
    chain.set_clock(fixtures::kInsideWindow);

    std::ostringstream out;
    chain.snapshot(out);
    std::istringstream in(out.str());
    Chain restored = Chain::restore(in);

    CHECK(restored.state_digest() == chain.state_digest());
    CHECK(restored.storage_digest() == chain.storage_digest());
    CHECK(restored.log().size() == chain.log().size());
    CHECK(restored.clock() == chain.clock());
    CHECK(restored.total_gas() == chain.total_gas());
}

TEST_CASE("restore of an empty log yields genesis state") {
    Chain genesis;
    std::ostringstream out;
    genesis.snapshot(out);
    CHECK(out.str() == codec::sha256_hex("") + "\n");

    std::istringstream in(out.str());
    Chain restored = Chain::restore(in);
    CHECK(restored.log().empty());
    CHECK(restored.state_digest() == genesis.state_digest());
}

TEST_CASE("tampered logs are rejected") {
    Chain chain = deployed_chain();
    chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc, chain::abi::kSubjectAdd,
                               chain::abi::record_add_args(fixtures::subject_id(),
                                                           fixtures::subject_attrs_submitted())));
    std::ostringstream out;
    chain.snapshot(out);
    std::string text = out.str();

    // Flip one byte inside an attribute value.
    auto pos = text.find("Alice");
    REQUIRE(pos != std::string::npos);
    text[pos] = 'a';
    std::istringstream tampered(text);
    CHECK_THROWS_AS(Chain::restore(tampered), chain::CorruptLog);

    std::istringstream empty(std::string{});
    CHECK_THROWS_AS(Chain::restore(empty), chain::CorruptLog);

    std::istringstream garbage("garbage\n" + codec::sha256_hex("garbage\n") + "\n");
    CHECK_THROWS_AS(Chain::restore(garbage), chain::CorruptLog);
}

TEST_CASE("replaying a randomized session is deterministic") {
    std::mt19937 rng(7);
    Chain chain = deployed_chain();

    for (int i = 0; i < 300; ++i) {
        int op = std::uniform_int_distribution<int>(0, 4)(rng);
        auto id = core::AccountId::from_index(std::uniform_int_distribution<int>(1, 10)(rng));
        core::AttributeSet attrs;
        attrs.set("Org", "NAIST");
        attrs.set("Role", std::uniform_int_distribution<int>(0, 1)(rng) ? "student" : "staff");
        switch (op) {
            case 0:
                chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc,
                                           chain::abi::kSubjectAdd,
                                           chain::abi::record_add_args(id, attrs)));
                break;
            case 1:
                chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kOamc,
                                           chain::abi::kObjectAdd,
                                           chain::abi::record_add_args(id, attrs)));
                break;
            case 2: {
                core::Policy policy;
                policy.sa.set("Org", "NAIST");
                policy.sa.set("i", std::to_string(std::uniform_int_distribution<int>(0, 20)(rng)));
                policy.actions.read = true;
                chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kPmc,
                                           chain::abi::kPolicyAdd,
                                           chain::abi::policy_add_args(policy)));
                break;
            }
            case 3:
                chain.submit(chain.make_tx(id, contracts::kAcc, chain::abi::kAccessControl,
                                           chain::abi::access_args(id, id,
                                                                   fixtures::read_action())));
                break;
            default:
                chain.submit(chain.make_tx(fixtures::admin_id(), contracts::kSamc,
                                           chain::abi::kSubjectDelete,
                                           chain::abi::record_delete_args(id, "Org")));
                break;
        }
    }

    std::ostringstream out;
    chain.snapshot(out);
    for (int trial = 0; trial < 3; ++trial) {
        std::istringstream in(out.str());
        Chain replayed = Chain::restore(in);
        CHECK(replayed.state_digest() == chain.state_digest());
        std::ostringstream resnap;
        replayed.snapshot(resnap);
        CHECK(resnap.str() == out.str());
    }
}
