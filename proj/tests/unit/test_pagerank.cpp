#include <doctest.h>

#include <set>

#include "../support.hpp"
#include "gap/pagerank.hpp"

using namespace gap;

TEST_CASE("build_graph") {
    SUBCASE("co-located sites get a finite clamped weight") {
        auto d = gaptest::standard_data();
        gaptest::add_generator(d, 0, 0, 1.0);
        gaptest::add_generator(d, 500, 0, 2.0);
        gaptest::add_site(d, 0, 0);
        gaptest::add_site(d, 0, 0);
        const auto g = build_graph(Instance(std::move(d)));
        CHECK(g.demand == std::vector<double>{1.0, 0.0});  // tie to the lower id; gen1 reaches nothing
        CHECK(g.weight(0, 1) == doctest::Approx(1.0 / kMinSiteDistance));
        CHECK(g.weight(0, 1) == g.weight(1, 0));
    }
    SUBCASE("single site holds all reachable demand") {
        auto d = gaptest::standard_data();
        for (double b : {1.0, 0.5, 2.0}) gaptest::add_generator(d, 10 * b, 0, b);
        gaptest::add_site(d, 0, 0);
        const auto g = build_graph(Instance(std::move(d)));
        REQUIRE(g.size() == 1);
        CHECK(g.demand[0] == 3.5);
        CHECK(g.weight(0, 0) == 0.0);
    }
    SUBCASE("two sites partition demand by proximity") {
        auto d = gaptest::standard_data();
        gaptest::add_generator(d, 10, 0, 1.0);
        gaptest::add_generator(d, 90, 0, 2.0);
        gaptest::add_generator(d, 40, 0, 4.0);
        gaptest::add_site(d, 0, 0);
        gaptest::add_site(d, 100, 0);
        const auto g = build_graph(Instance(std::move(d)));
        CHECK(g.demand[0] == 5.0);
        CHECK(g.demand[1] == 2.0);
        CHECK(g.weight(0, 1) == doctest::Approx(7.0 / 100.0));
    }
    SUBCASE("no sites") {
        auto d = gaptest::standard_data();
        CHECK_THROWS_AS(build_graph(Instance(std::move(d))), std::invalid_argument);
    }
}

TEST_CASE("pagerank fixed points") {
    SUBCASE("single vertex has only the teleport term") {
        RankGraph g{{2.0}, {0.0}};
        const auto r = pagerank(g);
        CHECK(r.converged);
        CHECK(r.scores[0] == doctest::Approx(0.15).epsilon(1e-12));
    }
    SUBCASE("symmetric pair") {
        RankGraph g{{1.0, 1.0}, {0.0, 3.0, 3.0, 0.0}};
        const auto r = pagerank(g);
        CHECK(r.scores[0] == r.scores[1]);
        CHECK(r.order == std::vector<int>{0, 1});
    }
    SUBCASE("three-vertex line with unequal weights") {
        RankGraph g{{0, 0, 0}, {0.0, 1.0, 0.0, 1.0, 0.0, 4.0, 0.0, 4.0, 0.0}};
        const auto r = pagerank(g);
        const auto x = gaptest::pagerank_linear(g, 0.85);
        REQUIRE(r.converged);
        for (std::size_t i = 0; i < 3; ++i) CHECK(r.scores[i] == doctest::Approx(x[i]).epsilon(1e-8));
        CHECK(r.order.front() == 1);
    }
    SUBCASE("random graphs against the linear solve") {
        Rng rng(17);
        for (int t = 0; t < 50; ++t) {
            const auto g = gaptest::random_graph(rng, 2 + rng.below(12), 0.5);
            const auto r = pagerank(g);
            const auto x = gaptest::pagerank_linear(g, 0.85);
            REQUIRE(r.converged);
            for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(r.scores[i] - x[i]) < 1e-8);
        }
    }
    SUBCASE("iteration cap reports non-convergence") {
        RankGraph g{{1.0, 1.0}, {0.0, 1.0, 1.0, 0.0}};
        const auto r = pagerank(g, {0.85, 0.0, 5});
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 5);
        CHECK(r.residuals.size() == 5);
    }
}

TEST_CASE("ranking is invariant under site relabeling") {
    Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        const auto inst = gaptest::random_instance(rng, 20, 2 + rng.below(8));
        auto data = inst.to_data();
        std::reverse(data.sites.begin(), data.sites.end());
        for (std::size_t i = 0; i < data.sites.size(); ++i) data.sites[i].id = static_cast<int>(i);
        const Instance flipped(std::move(data));
        const auto a = rank_sites(inst).scores;
        const auto b = rank_sites(flipped).scores;
        const std::size_t m = a.size();
        for (std::size_t i = 0; i < m; ++i) CHECK(a[i] == doctest::Approx(b[m - 1 - i]).epsilon(1e-9));
    }
}

TEST_CASE("residuals shrink on symmetric site graphs") {
    const auto inst = load_instance(gaptest::data_path("catalog.json"));
    const auto r = rank_sites(inst);
    CHECK(r.converged);
    for (std::size_t k = 2; k < r.residuals.size(); ++k) CHECK(r.residuals[k] <= r.residuals[k - 1]);
}

TEST_CASE("pr_vol") {
    SUBCASE("single site, 2.5 m3 picks the first 3000-cost entry") {
        const auto inst = gaptest::explicit_instance({2.5}, {{20.0}});
        CHECK(pr_vol(inst, rank_sites(inst)).genes == std::vector<int>{3});
    }
    SUBCASE("capacity-rich instance collects everything") {
        const auto inst = gaptest::explicit_instance({1.0, 2.0, 1.5}, {{10, 50, 90}, {60, 20, 40}, {15, 15, 15}});
        const auto plan = pr_vol(inst, rank_sites(inst));
        CHECK(evaluate_greedy(inst, plan).volume == doctest::Approx(4.5));
    }
    SUBCASE("nothing to collect") {
        const auto inst = gaptest::explicit_instance({0.0, 0.0}, {{10, 50}, {60, 20}});
        CHECK(pr_vol(inst, rank_sites(inst)) == empty_plan(inst));
    }
}

TEST_CASE("pr_dist") {
    SUBCASE("bin goes to the near site") {
        const auto inst = gaptest::explicit_instance({1.0}, {{10.0, 200.0}});
        const auto plan = pr_dist(inst, rank_sites(inst));
        CHECK(plan.genes[0] != 0);
        CHECK(decode_greedy(inst, plan).fraction(0, 0) == 1.0);
    }
    SUBCASE("nothing to collect") {
        const auto inst = gaptest::explicit_instance({0.0}, {{10.0, 200.0}});
        CHECK(pr_dist(inst, rank_sites(inst)) == empty_plan(inst));
    }
    SUBCASE("demand beyond capacity uses every site") {
        Rng rng(8);
        const auto inst = gaptest::random_instance(rng, 60, 6, 200.0, 2.0);
        REQUIRE(inst.total_waste() > 6 * 5.0);
        const auto plan = pr_dist(inst, rank_sites(inst));
        for (int g : plan.genes) CHECK(g != 0);
    }
    SUBCASE("matches a plain re-statement of the sweep") {
        Rng rng(31);
        for (int t = 0; t < 40; ++t) {
            const auto inst = gaptest::random_instance(rng, 1 + rng.below(20), 1 + rng.below(6));
            const auto ranking = rank_sites(inst);
            CHECK(pr_dist(inst, ranking) == gaptest::pr_dist_reference(inst, ranking));
        }
    }
}

TEST_CASE("pr_cost") {
    SUBCASE("1.8 m3 demand picks the cheapest covering entry") {
        const auto inst = gaptest::explicit_instance({1.8}, {{20.0}});
        const auto plan = pr_cost(inst, rank_sites(inst));
        CHECK(plan.genes == std::vector<int>{2});
        CHECK(inst.config(2).cost == 2000.0);
    }
    SUBCASE("no demand leaves the site empty") {
        const auto inst = gaptest::explicit_instance({0.0}, {{20.0}});
        CHECK(pr_cost(inst, rank_sites(inst)).genes == std::vector<int>{0});
    }
    SUBCASE("7 m3 clamps to the largest capacity and spills to the next site") {
        const auto inst = gaptest::explicit_instance({7.0}, {{20.0, 40.0}});
        const auto ranking = rank_sites(inst);
        const auto plan = pr_cost(inst, ranking);
        const int first = ranking.order[0];
        const int second = ranking.order[1];
        CHECK(inst.config(plan.genes[static_cast<std::size_t>(first)]).capacity == 5.0);
        CHECK(inst.config(plan.genes[static_cast<std::size_t>(first)]).cost == 5000.0);
        CHECK(inst.config(plan.genes[static_cast<std::size_t>(second)]).capacity == 2.0);
        CHECK(evaluate_greedy(inst, plan).volume == doctest::Approx(7.0));
    }
}

TEST_CASE("weighted aggregation") {
    const auto grid = weight_grid();
    CHECK(grid.size() == 66);
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& w : grid) {
        const int a = static_cast<int>(std::lround(w.cost * 10));
        const int b = static_cast<int>(std::lround(w.distance * 10));
        const int c = static_cast<int>(std::lround(w.volume * 10));
        CHECK(a + b + c == 10);
        seen.insert({a, b, c});
    }
    CHECK(seen.size() == 66);

    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const auto inst = gaptest::random_instance(rng, 5 + rng.below(20), 2 + rng.below(5));
        const auto ranking = rank_sites(inst);
        CHECK(pr_weighted(inst, ranking, {1.0, 0.0, 0.0}) == empty_plan(inst));
        const auto by_volume = pr_weighted(inst, ranking, {0.0, 0.0, 1.0});
        const auto vol = pr_vol(inst, ranking);
        CHECK(evaluate_greedy(inst, by_volume).volume == doctest::Approx(evaluate_greedy(inst, vol).volume));
        CHECK(by_volume == vol);

        const auto front = pr_mo(inst, ranking);
        CHECK(front.size() <= 66);
        for (const auto& a : front.points) {
            for (const auto& b : front.points) CHECK_FALSE(dominates(minimized(a.objectives), minimized(b.objectives)));
        }
    }
}

TEST_CASE("heuristic plans are feasible") {
    Rng rng(77);
    for (int t = 0; t < 30; ++t) {
        const auto inst = gaptest::random_instance(rng, rng.below(25), 1 + rng.below(7));
        const auto ranking = rank_sites(inst);
        for (const auto& plan : {pr_vol(inst, ranking), pr_dist(inst, ranking), pr_cost(inst, ranking)}) {
            CHECK(check_constraints(inst, plan, decode_greedy(inst, plan)).empty());
        }
        for (const auto& p : pr_mo(inst, ranking).points) {
            CHECK(check_constraints(inst, *p.plan, decode_greedy(inst, *p.plan)).empty());
        }
    }
}
