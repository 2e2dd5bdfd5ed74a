#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qorch/decisions/decisions.hpp"

using namespace qorch::decisions;
using qorch::domain::DeviceDescriptor;

namespace {

json strategy_table_json() {
    return json::parse(R"({
        "id": "strategy-selection",
        "inputs": ["num_variables", "kind"],
        "hit_policy": "FIRST",
        "rules": [
            {"when": {"num_variables": {"<": 16}},
             "output": {"target_definition": "classical-brute-force", "strategy": "classical"}},
            {"when": {"kind": {"==": "schedule"}},
             "output": {"target_definition": "scheduling-qaoa-pipeline", "strategy": "qaoa"}},
            {"when": {"kind": {"==": "knapsack"}},
             "output": {"target_definition": "knapsack-qaoa-pipeline", "strategy": "qaoa"}}
        ]
    })");
}

json device_table_json() {
    return json::parse(R"({
        "id": "device-selection",
        "inputs": ["available", "enough_qubits", "max_qubits", "cost_per_shot",
                   "required_qubits", "shots", "id"],
        "hit_policy": "FIRST",
        "rules": [
            {"when": {"available": {"==": true}, "enough_qubits": {"==": true}},
             "output": {"accept": true}}
        ],
        "default_output": {"accept": false}
    })");
}

}  // namespace

TEST_CASE("first-hit evaluation") {
    auto table = strategy_table_json().get<DecisionTable>();

    SUBCASE("threshold routes small instances to the classical branch") {
        auto out = evaluate(table, {{"num_variables", 10}, {"kind", "schedule"}});
        CHECK(out.at("target_definition") == "classical-brute-force");
    }
    SUBCASE("boundary complement goes to the pipeline") {
        auto out = evaluate(table, {{"num_variables", 16}, {"kind", "schedule"}});
        CHECK(out.at("target_definition") == "scheduling-qaoa-pipeline");
        auto knap = evaluate(table, {{"num_variables", 20}, {"kind", "knapsack"}});
        CHECK(knap.at("target_definition") == "knapsack-qaoa-pipeline");
    }
    SUBCASE("missing fact") {
        CHECK_THROWS_AS(evaluate(table, {{"kind", "schedule"}}), EvaluationError);
    }
    SUBCASE("no match and no default") {
        CHECK_THROWS_AS(evaluate(table, {{"num_variables", 20}, {"kind", "tsp"}}),
                        EvaluationError);
    }
    SUBCASE("determinism") {
        const json facts = {{"num_variables", 10}, {"kind", "knapsack"}};
        CHECK(evaluate(table, facts) == evaluate(table, facts));
    }
    SUBCASE("rule order matters under FIRST") {
        DecisionTable permuted = table;
        std::swap(permuted.rules[0], permuted.rules[1]);
        auto out = evaluate(permuted, {{"num_variables", 10}, {"kind", "schedule"}});
        CHECK(out.at("target_definition") == "scheduling-qaoa-pipeline");
    }
}

TEST_CASE("comparators") {
    DecisionTable t;
    t.id = "t";
    t.inputs = {"x"};
    t.rules.push_back({{{"x", {"in", json::array({1, 3, 5})}}}, json{{"hit", "odd"}}});
    t.rules.push_back({{{"x", {">=", 10}}}, json{{"hit", "big"}}});
    t.default_output = json{{"hit", "none"}};
    CHECK(evaluate(t, {{"x", 3}}).at("hit") == "odd");
    CHECK(evaluate(t, {{"x", 12}}).at("hit") == "big");
    CHECK(evaluate(t, {{"x", 2}}).at("hit") == "none");
    CHECK_THROWS_AS(condition_holds({"<", json("abc")}, json(1)), EvaluationError);
}

TEST_CASE("device selection") {
    DecisionService service;
    service.load_json(json::array({device_table_json()}));

    SUBCASE("single capable simulator") {
        std::vector<DeviceDescriptor> registry{{"local-sv-24", "statevector-simulator", 24, true, 0.0, {}}};
        CHECK(select_device(registry, service, "device-selection", 10, 1000) == "local-sv-24");
    }
    SUBCASE("capacity bound") {
        std::vector<DeviceDescriptor> registry{{"local-sv-24", "statevector-simulator", 24, true, 0.0, {}}};
        CHECK_THROWS_AS(select_device(registry, service, "device-selection", 30, 1000),
                        NoCapableDevice);
    }
    SUBCASE("unavailable devices are skipped") {
        std::vector<DeviceDescriptor> registry{
            {"down", "statevector-simulator", 24, false, 0.0, {}},
            {"up", "statevector-simulator", 24, true, 0.0, {}}};
        CHECK(select_device(registry, service, "device-selection", 10, 1000) == "up");
    }
    SUBCASE("registry order decides between capable devices (FIRST)") {
        std::vector<DeviceDescriptor> registry{
            {"pricey", "statevector-simulator", 24, true, 0.5, {}},
            {"cheap", "statevector-simulator", 24, true, 0.0, {}}};
        CHECK(select_device(registry, service, "device-selection", 10, 100) == "pricey");
    }
    SUBCASE("never returns an incapable device, even if the table accepts it") {
        DecisionService lax;
        lax.load_json(json::array({json::parse(R"({
            "id": "device-selection",
            "inputs": [],
            "rules": [{"when": {}, "output": {"accept": true}}]
        })")}));
        std::vector<DeviceDescriptor> registry{
            {"tiny", "statevector-simulator", 2, true, 0.0, {}},
            {"down", "statevector-simulator", 24, false, 0.0, {}},
            {"ok", "statevector-simulator", 24, true, 0.0, {}}};
        std::mt19937_64 rng(8);
        for (int required = 1; required <= 24; ++required) {
            const auto id = select_device(registry, lax, "device-selection", required, 10);
            const auto& dev = *std::find_if(registry.begin(), registry.end(),
                                            [&](const auto& d) { return d.id == id; });
            CHECK(dev.available);
            CHECK(dev.max_qubits >= required);
        }
    }
}
