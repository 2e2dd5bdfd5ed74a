#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qorch/encode/encoders.hpp"

using namespace qorch::domain;
using namespace qorch::encode;

TEST_CASE("constraint graph construction") {
    SUBCASE("1 shift, 2 agents") {
        auto g = build_constraint_graph({1, 2});
        CHECK(g.num_vertices == 2);
        CHECK(g.edges == std::set<std::pair<int, int>>{{0, 1}});
    }
    SUBCASE("2 shifts, 2 agents") {
        auto g = build_constraint_graph({2, 2});
        CHECK(g.num_vertices == 4);
        CHECK(g.edges == std::set<std::pair<int, int>>{{0, 1}, {2, 3}, {0, 2}, {1, 3}});
    }
    SUBCASE("5 shifts, 2 agents: 5 E1 + 8 E2 edges") {
        auto g = build_constraint_graph({5, 2});
        CHECK(g.num_vertices == 10);
        CHECK(g.edges.size() == 13);
        int e1 = 0, e2 = 0;
        for (const auto& [u, v] : g.edges) {
            const auto& [su, au] = g.vertex_labels[static_cast<size_t>(u)];
            const auto& [sv, av] = g.vertex_labels[static_cast<size_t>(v)];
            if (su == sv) ++e1;
            if (au == av && sv == su + 1) ++e2;
        }
        CHECK(e1 == 5);
        CHECK(e2 == 8);
    }
    SUBCASE("flags suppress edge families") {
        auto g1 = build_constraint_graph({5, 2, true, false});
        CHECK(g1.edges.size() == 5);
        auto g2 = build_constraint_graph({5, 2, false, true});
        CHECK(g2.edges.size() == 8);
    }
    SUBCASE("vertex ordering convention") {
        auto g = build_constraint_graph({3, 2});
        // v = (shift-1)*num_agents + (agent-1)
        CHECK(g.vertex_labels[0] == std::pair{1, 1});
        CHECK(g.vertex_labels[1] == std::pair{1, 2});
        CHECK(g.vertex_labels[4] == std::pair{3, 1});
    }
}

TEST_CASE("maxcut_to_ising") {
    SUBCASE("single edge energies") {
        ConstraintGraph g;
        g.num_vertices = 2;
        g.edges = {{0, 1}};
        auto [m, meta] = maxcut_to_ising(g);
        CHECK(m.energy({+1, -1}) == doctest::Approx(-1.0));
        CHECK(m.energy({+1, +1}) == doctest::Approx(0.0));
        CHECK(meta.kind == "maxcut-schedule");
    }
    SUBCASE("triangle: min energy -2 at any 2-vs-1 split") {
        ConstraintGraph g;
        g.num_vertices = 3;
        g.edges = {{0, 1}, {1, 2}, {0, 2}};
        auto [m, meta] = maxcut_to_ising(g);
        auto r = oracles::ising_min_brute(m);
        CHECK(r.min_energy == doctest::Approx(-2.0));
        CHECK(r.argmin.size() == 6);  // all six 2-vs-1 splits
        CHECK(oracles::max_cut_brute(g).best_cut == 2);
    }
    SUBCASE("5x2 scheduling graph: exactly the two optimal bitstrings") {
        auto g = build_constraint_graph({5, 2});
        auto [m, meta] = maxcut_to_ising(g);
        auto r = oracles::ising_min_brute(m);
        CHECK(r.min_energy == doctest::Approx(-13.0));
        REQUIRE(r.argmin.size() == 2);
        const std::set<std::string> argmin(r.argmin.begin(), r.argmin.end());
        CHECK(argmin == std::set<std::string>{"1001100110", "0110011001"});
    }
    SUBCASE("energy equals -cut on random graphs (<= 12 vertices)") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 30; ++trial) {
            ConstraintGraph g;
            g.num_vertices = 2 + static_cast<int>(rng() % 11);
            for (int u = 0; u < g.num_vertices; ++u)
                for (int v = u + 1; v < g.num_vertices; ++v)
                    if (rng() % 3 == 0) g.edges.emplace(u, v);
            auto [m, meta] = maxcut_to_ising(g);
            auto brute = oracles::max_cut_brute(g);
            auto emin = oracles::ising_min_brute(m);
            CHECK(emin.min_energy == doctest::Approx(-brute.best_cut));
            // argmin invariance under positive scaling
            IsingModel scaled = m;
            for (auto& [k, c] : scaled.j) c *= 3.5;
            scaled.offset *= 3.5;
            auto smin = oracles::ising_min_brute(scaled);
            CHECK(smin.argmin == emin.argmin);
            CHECK(smin.min_energy == doctest::Approx(3.5 * emin.min_energy));
        }
    }
}

TEST_CASE("knapsack_to_qubo") {
    SUBCASE("one item, W=1") {
        auto [q, meta] = knapsack_to_qubo({{1}, {1}, 1});
        CHECK(q.n == 2);
        CHECK(meta.num_slack == 1);
        CHECK(meta.penalty == 2);
        // enumerate all four assignments
        double best = 1e18;
        std::string best_bits;
        for (auto bits : {"00", "10", "01", "11"}) {
            const double v = oracles::qubo_value_of_bits(q, bits);
            if (v < best) { best = v; best_bits = bits; }
        }
        CHECK(best == doctest::Approx(-1.0));
        CHECK(best_bits == "10");  // x=1, slack=0
    }
    SUBCASE("feasible exact fill has zero penalty") {
        KnapsackProblem p{{6, 10, 12}, {1, 2, 3}, 5};
        auto [q, meta] = knapsack_to_qubo(p);
        CHECK(meta.num_slack == 3);
        CHECK(meta.slack_coefficients == std::vector<std::int64_t>{1, 2, 4});
        CHECK(meta.penalty == 29);
        // items {2,3}: weight 5, slack 0 -> objective = -22
        CHECK(oracles::qubo_value_of_bits(q, "011000") == doctest::Approx(-22.0));
        // items {1}: weight 1, slack 4 = bits 001 (coeff 4)
        CHECK(oracles::qubo_value_of_bits(q, "100001") == doctest::Approx(-6.0));
    }
    SUBCASE("global minimizer matches exhaustive optimum") {
        KnapsackProblem p{{6, 10, 12}, {1, 2, 3}, 5};
        auto [q, meta] = knapsack_to_qubo(p);
        auto opt = oracles::knapsack_exhaustive(p.values, p.weights, p.capacity);
        CHECK(opt.best_value == 22);
        double best = 1e18;
        std::string best_bits;
        for (std::uint64_t b = 0; b < (1u << q.n); ++b) {
            const std::string bits = oracles::index_bits(b, q.n);
            const double v = oracles::qubo_value_of_bits(q, bits);
            if (v < best) { best = v; best_bits = bits; }
        }
        CHECK(best == doctest::Approx(-22.0));
        CHECK(best_bits.substr(0, 3) == "011");
    }
    SUBCASE("penalty forces feasibility of global minimizers") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 4);
            std::vector<std::int64_t> values, weights;
            for (int i = 0; i < n; ++i) {
                values.push_back(1 + static_cast<std::int64_t>(rng() % 12));
                weights.push_back(1 + static_cast<std::int64_t>(rng() % 6));
            }
            const std::int64_t W = 1 + static_cast<std::int64_t>(rng() % 12);
            KnapsackProblem p{values, weights, W};
            auto [q, meta] = knapsack_to_qubo(p);
            if (q.n > 12) continue;
            std::int64_t vsum = 0;
            for (auto v : values) vsum += v;

            double best = 1e18;
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << q.n); ++b)
                best = std::min(best, oracles::qubo_value_of_bits(q, oracles::index_bits(b, q.n)));

            for (std::uint64_t b = 0; b < (std::uint64_t{1} << q.n); ++b) {
                const std::string bits = oracles::index_bits(b, q.n);
                std::int64_t fill = 0;
                for (int i = 0; i < n; ++i)
                    if (bits[static_cast<size_t>(i)] == '1') fill += weights[static_cast<size_t>(i)];
                for (int k = 0; k < meta.num_slack; ++k)
                    if (bits[static_cast<size_t>(n + k)] == '1')
                        fill += meta.slack_coefficients[static_cast<size_t>(k)];
                const double value = oracles::qubo_value_of_bits(q, bits);
                if (fill != W) {
                    // penalty alone is at least A > sum(v)
                    const double gap = fill - W;
                    CHECK(value >= -vsum + meta.penalty * gap * gap - 1e-9);
                    CHECK(value > best + 0.5);  // infeasible states never minimize
                }
            }
        }
    }
}

TEST_CASE("qubo_to_ising") {
    SUBCASE("x0 + x1 - 2 x0 x1") {
        QuboModel q;
        q.n = 2;
        q.linear = {{0, 1.0}, {1, 1.0}};
        q.quadratic = {{{0, 1}, -2.0}};
        auto m = qubo_to_ising(q);
        CHECK(m.h.empty());
        CHECK(m.j.at({0, 1}) == doctest::Approx(-0.5));
        CHECK(m.offset == doctest::Approx(0.5));
        for (auto bits : {"00", "10", "01", "11"})
            CHECK(oracles::qubo_value_of_bits(q, bits) ==
                  doctest::Approx(oracles::ising_energy_of_bits(m, bits)));
    }
    SUBCASE("all-zero QUBO maps to all-zero Ising") {
        QuboModel q;
        q.n = 3;
        auto m = qubo_to_ising(q);
        CHECK(m.h.empty());
        CHECK(m.j.empty());
        CHECK(m.offset == 0.0);
    }
    SUBCASE("pointwise equality on random QUBOs") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            QuboModel q;
            q.n = 1 + static_cast<int>(rng() % 10);
            q.offset = static_cast<double>(rng() % 17) - 8.0;
            for (int i = 0; i < q.n; ++i)
                if (rng() % 2) q.linear[i] = (static_cast<double>(rng() % 33) - 16.0) / 2.0;
            for (int u = 0; u < q.n; ++u)
                for (int v = u + 1; v < q.n; ++v)
                    if (rng() % 3 == 0)
                        q.quadratic[{u, v}] = (static_cast<double>(rng() % 33) - 16.0) / 2.0;
            auto m = qubo_to_ising(q);
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << q.n); ++b) {
                const std::string bits = oracles::index_bits(b, q.n);
                CHECK(oracles::qubo_value_of_bits(q, bits) ==
                      doctest::Approx(oracles::ising_energy_of_bits(m, bits)).epsilon(1e-12));
            }
        }
    }
    SUBCASE("knapsack chain: QUBO and Ising agree on every bitstring") {
        KnapsackProblem p{{6, 10, 12}, {1, 2, 3}, 5};
        auto [q, meta] = knapsack_to_qubo(p);
        auto m = qubo_to_ising(q);
        REQUIRE(q.n <= 12);
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << q.n); ++b) {
            const std::string bits = oracles::index_bits(b, q.n);
            CHECK(oracles::qubo_value_of_bits(q, bits) ==
                  doctest::Approx(oracles::ising_energy_of_bits(m, bits)).epsilon(1e-12));
        }
    }
}

TEST_CASE("decode_schedule") {
    SchedulingProblem p5{5, 2};
    auto meta5 = maxcut_to_ising(build_constraint_graph(p5)).second;

    SUBCASE("argmax picks the peak and decodes alternating agents") {
        MeasurementCounts counts{1000, {{"1001100110", 700}, {"0110011001", 300}}};
        auto sol = decode_schedule(counts, meta5, p5, DecodeMode::ArgmaxCount);
        CHECK(sol.status == "ok");
        REQUIRE(sol.schedule.size() == 5);
        CHECK(sol.schedule == std::vector<ShiftAssignment>{{1, 1}, {2, 2}, {3, 1}, {4, 2}, {5, 1}});
        CHECK(sol.diagnostics.bitstring == "1001100110");
        CHECK(sol.diagnostics.count == 700);
        CHECK(sol.diagnostics.objective == doctest::Approx(13.0));
    }
    SUBCASE("all-zero bitstring is flagged infeasible") {
        MeasurementCounts counts{1000, {{"0000000000", 1000}}};
        auto sol = decode_schedule(counts, meta5, p5, DecodeMode::ArgmaxCount);
        CHECK(sol.status == "infeasible");
        CHECK(sol.schedule.empty());
        CHECK(sol.diagnostics.bitstring == "0000000000");
    }
    SUBCASE("best_sampled prefers the higher cut over the higher count") {
        SchedulingProblem p2{2, 2};
        auto meta2 = maxcut_to_ising(build_constraint_graph(p2)).second;
        MeasurementCounts counts{8, {{"1111", 5}, {"1001", 3}}};
        auto sol = decode_schedule(counts, meta2, p2, DecodeMode::BestSampled);
        CHECK(sol.diagnostics.bitstring == "1001");
        CHECK(sol.diagnostics.objective == doctest::Approx(4.0));  // cut 4 beats cut 0
        CHECK(sol.status == "ok");
        CHECK(sol.schedule == std::vector<ShiftAssignment>{{1, 1}, {2, 2}});
    }
    SUBCASE("empty counts is an error") {
        MeasurementCounts counts{0, {}};
        CHECK_THROWS_AS(decode_schedule(counts, meta5, p5, DecodeMode::ArgmaxCount),
                        std::invalid_argument);
    }
    SUBCASE("decoding is pure: same counts, same result") {
        MeasurementCounts counts{10, {{"1001100110", 5}, {"0110011001", 5}}};
        auto a = decode_schedule(counts, meta5, p5, DecodeMode::BestSampled);
        auto b = decode_schedule(counts, meta5, p5, DecodeMode::BestSampled);
        CHECK(a == b);
    }
}

TEST_CASE("decode_knapsack") {
    KnapsackProblem p{{6, 10, 12}, {1, 2, 3}, 5};
    auto meta = knapsack_to_qubo(p).second;

    SUBCASE("argmax keeps item bits, discards slack") {
        MeasurementCounts counts{1000, {{"110100", 800}, {"000000", 200}}};
        auto sol = decode_knapsack(counts, meta, p, DecodeMode::ArgmaxCount);
        CHECK(sol.status == "ok");
        CHECK(sol.items == std::vector<int>{1, 2});
        CHECK(sol.total_value == 16);
        CHECK(sol.total_weight == 3);
    }
    SUBCASE("best_sampled finds the optimum among feasible substrings") {
        MeasurementCounts counts{100, {{"111000", 60}, {"011000", 30}, {"100001", 10}}};
        auto sol = decode_knapsack(counts, meta, p, DecodeMode::BestSampled);
        CHECK(sol.status == "ok");
        CHECK(sol.items == std::vector<int>{2, 3});
        CHECK(sol.total_value == 22);
        CHECK(sol.total_weight == 5);
    }
    SUBCASE("no feasible sample degrades to the empty selection") {
        MeasurementCounts counts{1000, {{"111111", 1000}}};
        auto sol = decode_knapsack(counts, meta, p, DecodeMode::BestSampled);
        CHECK(sol.status == "degraded");
        CHECK(sol.items.empty());
        CHECK(sol.total_weight <= p.capacity);
    }
    SUBCASE("argmax over an infeasible peak withholds the selection") {
        MeasurementCounts counts{10, {{"111000", 10}}};
        auto sol = decode_knapsack(counts, meta, p, DecodeMode::ArgmaxCount);
        CHECK(sol.status == "infeasible");
        CHECK(sol.items.empty());
        CHECK(sol.diagnostics.bitstring == "111000");
    }
    SUBCASE("kind mismatch") {
        SchedulingProblem sp{2, 2};
        auto smeta = maxcut_to_ising(build_constraint_graph(sp)).second;
        MeasurementCounts counts{1, {{"100100", 1}}};
        CHECK_THROWS(decode_knapsack(counts, smeta, p, DecodeMode::ArgmaxCount));
    }
}
