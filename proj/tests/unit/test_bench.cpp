#include <doctest.h>

#include "../support.hpp"
#include "gap/bench.hpp"

using namespace gap;

TEST_CASE("scenario validation") {
    ScenarioSpec s;
    CHECK_NOTHROW(s.validate());
    s.demand_factor = 1.1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.n_sites = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("generate_instance") {
    ScenarioSpec s;
    s.seed = 42;
    const auto a = generate_instance(s);
    CHECK(a.num_generators() == 82);
    CHECK(a.num_sites() == 40);
    CHECK(a.num_configs() == 12);
    CHECK(a.max_walk() == 300.0);

    SUBCASE("same seed, same instance") {
        const auto b = generate_instance(s);
        CHECK(instance_to_json(a) == instance_to_json(b));
    }
    SUBCASE("demand factor scales every waste value exactly") {
        for (double factor : {0.8, 1.2}) {
            auto t = s;
            t.demand_factor = factor;
            const auto c = generate_instance(t);
            for (std::size_t p = 0; p < a.num_generators(); ++p) {
                CHECK(c.generators()[p].waste == a.generators()[p].waste * factor);
                CHECK(c.generators()[p].position.x == a.generators()[p].position.x);
            }
        }
    }
    SUBCASE("default density leaves few generators stranded") {
        std::size_t stranded = 0, total = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto t = s;
            t.seed = seed;
            const auto inst = generate_instance(t);
            for (std::size_t p = 0; p < inst.num_generators(); ++p) stranded += inst.reachable(p).empty();
            total += inst.num_generators();
        }
        CHECK(static_cast<double>(stranded) <= 0.01 * static_cast<double>(total));
    }
}

TEST_CASE("volume scales with demand on an uncongested instance") {
    ScenarioSpec s;
    s.n_generators = 10;
    s.n_sites = 10;
    s.seed = 3;
    const auto base = generate_instance(s);
    s.demand_factor = 1.2;
    const auto high = generate_instance(s);
    Plan full = empty_plan(base);
    std::fill(full.genes.begin(), full.genes.end(), 5);  // 5 m3 everywhere
    CHECK(evaluate_greedy(high, full).volume == doctest::Approx(1.2 * evaluate_greedy(base, full).volume));
}

TEST_CASE("exhaustive_front") {
    SUBCASE("one site: non-dominated subset of the 12 configurations") {
        const auto inst = gaptest::explicit_instance({2.5, 1.0}, {{10.0}, {20.0}});
        const auto f = exhaustive_front(inst);
        std::vector<FrontPoint> all;
        for (int c = 0; c < 12; ++c) {
            const Plan p{{c}};
            all.push_back({evaluate_greedy(inst, p), p});
        }
        const auto expected = nondominated(all);
        REQUIRE(f.size() == expected.size());
        for (std::size_t k = 0; k < f.size(); ++k) CHECK(f.points[k].objectives == expected.points[k].objectives);
        CHECK(rhv(f, f) == 1.0);
    }
    SUBCASE("dominates or equals every random plan") {
        Rng rng(12);
        const auto inst = gaptest::random_instance(rng, 8, 4);
        const auto f = exhaustive_front(inst);
        for (int t = 0; t < 300; ++t) {
            const auto o = minimized(evaluate_greedy(inst, gaptest::random_plan(inst, rng)));
            const bool covered = std::any_of(f.points.begin(), f.points.end(), [&](const FrontPoint& p) {
                return gaptest::weakly_dominates(minimized(p.objectives), o);
            });
            CHECK(covered);
        }
    }
    SUBCASE("guard") {
        Rng rng(1);
        const auto inst = gaptest::random_instance(rng, 3, 7);  // 12^7 > 1e7
        CHECK_THROWS_AS(exhaustive_front(inst), std::length_error);
    }
}

TEST_CASE("summary statistics") {
    const auto s = summarize({4.0, 1.0, 3.0, 2.0});
    CHECK(s.count == 4);
    CHECK(s.min == 1.0);
    CHECK(s.max == 4.0);
    CHECK(s.median == 2.5);
    CHECK(s.iqr == doctest::Approx(1.5));
    CHECK(summarize({}).count == 0);
}

TEST_CASE("algorithm names") {
    for (auto a : {Algorithm::nsga2, Algorithm::spea2, Algorithm::pr_vol, Algorithm::pr_dist, Algorithm::pr_cost,
                   Algorithm::pr_mo}) {
        CHECK(parse_algorithm(to_string(a)) == a);
    }
    CHECK_THROWS_AS(parse_algorithm("moead"), std::invalid_argument);
}

TEST_CASE("run_batch") {
    Rng rng(21);
    const auto inst = gaptest::random_instance(rng, 12, 5);
    SolveOptions opt;
    opt.ea.pop_size = 16;
    opt.ea.generations = 10;
    opt.ea.elite_size = 6;
    const std::vector<Algorithm> algs{Algorithm::nsga2, Algorithm::spea2, Algorithm::pr_vol,
                                      Algorithm::pr_dist, Algorithm::pr_cost, Algorithm::pr_mo};
    const auto report = run_batch(inst, algs, 3, 100, opt);

    SUBCASE("shape") {
        REQUIRE(report.algorithms.size() == 6);
        CHECK(report.algorithms[0].runs.size() == 3);
        CHECK(report.algorithms[0].runs[2].seed == 102);
        for (std::size_t a = 2; a < 6; ++a) CHECK(report.algorithms[a].runs.size() == 1);
        CHECK(report.comparisons.size() == 8);
    }
    SUBCASE("pooled reference") {
        std::vector<Front> all;
        for (const auto& ar : report.algorithms) {
            for (const auto& r : ar.runs) all.push_back(r.front);
        }
        const auto ref = reference_front(all);
        REQUIRE(ref.size() == report.reference.size());
        for (std::size_t k = 0; k < ref.size(); ++k) {
            CHECK(ref.points[k].objectives == report.reference.points[k].objectives);
        }
        for (const auto& ar : report.algorithms) CHECK(ar.rhv.max <= 1.0);
    }
    SUBCASE("reproducible apart from timing") {
        auto a = report.to_json();
        auto b = run_batch(inst, algs, 3, 100, opt).to_json();
        a.erase("timing");
        b.erase("timing");
        CHECK(a.dump() == b.dump());
    }
}
