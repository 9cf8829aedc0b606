#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lccp/labeling.hpp"
#include "lccp/oracle.hpp"
#include "support.hpp"

using namespace lccp;

namespace {

NodeSet set_of(std::initializer_list<int> xs) {
  NodeSet s;
  for (int x : xs) s.insert(x);
  return s;
}

Label label(NodeSet nodes, int end, double rc, double t, double q) {
  Label l;
  l.nodes = nodes;
  l.end = end;
  l.redcost = rc;
  l.time = t;
  l.min_crit = q;
  return l;
}

// Grows a path from `start` through `hops` and stores every prefix.
int push_path(LabelArena& arena, const Instance& inst, std::span<const double> duals, int start,
              std::initializer_list<int> hops, const PricingConstraints& cons) {
  int idx = arena.push(initial_label(start, inst));
  for (int j : hops) {
    auto next = extend(arena[idx], start, j, duals, inst, cons);
    REQUIRE(next);
    next->pred = idx;
    idx = arena.push(*next);
  }
  return idx;
}

Instance loose_instance(int n, double travel, double crit) {
  std::vector<double> t(static_cast<std::size_t>(n) * n, travel);
  for (int i = 0; i < n; ++i) t[i * n + i] = 0;
  return Instance(t, std::vector<double>(n, crit));
}

}  // namespace

TEST_SUITE("labeling") {
  TEST_CASE("initial label") {
    const Instance inst({0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0}, {10, 4, 4, 2.5});
    const Label l = initial_label(0, inst);
    CHECK(l.nodes.empty());
    CHECK(l.end == 0);
    CHECK(l.redcost == 1.0);
    CHECK(l.time == 0.0);
    CHECK(l.min_crit == 10.0);
    CHECK(initial_label(3, inst).min_crit == 2.5);
  }

  TEST_CASE("extend") {
    // t13 = 2, q1 = 9, q3 = 7.
    std::vector<double> t(16, 5.0);
    for (int i = 0; i < 4; ++i) t[i * 4 + i] = 0;
    t[1 * 4 + 3] = t[3 * 4 + 1] = 2;
    const Instance inst(t, {9, 9, 9, 7});
    const std::vector<double> duals{0, 0, 0, 0.4};
    const auto cons = PricingConstraints::unrestricted(4);

    const auto l = extend(initial_label(1, inst), 1, 3, duals, inst, cons);
    REQUIRE(l);
    CHECK(l->nodes == set_of({3}));
    CHECK(l->end == 3);
    CHECK(l->redcost == doctest::Approx(0.6));
    CHECK(l->time == 2.0);
    CHECK(l->min_crit == 7.0);

    // 2 + 5 + ... : going 3 -> 0 reaches time 7 = q, going on would exceed it.
    const auto l2 = extend(*l, 1, 0, duals, inst, cons);
    REQUIRE(l2);
    CHECK(l2->time == 7.0);
    CHECK_FALSE(extend(*l2, 1, 2, duals, inst, cons));

    PricingConstraints floor = cons;
    floor.min_start = 2;
    CHECK_FALSE(extend(initial_label(2, inst), 2, 1, duals, inst, floor));
    CHECK_FALSE(extend(*l, 1, 1, duals, inst, cons));
    CHECK_FALSE(extend(*l, 1, 3, duals, inst, cons));

    const EdgeDecision forbid{Edge(1, 3), false};
    const PricingConstraints no13(4, std::span(&forbid, 1));
    CHECK_FALSE(extend(initial_label(1, inst), 1, 3, duals, inst, no13));
  }

  TEST_CASE("forced edge rule on extension") {
    const Instance inst = loose_instance(5, 1, 100);
    const std::vector<double> duals(5, 0.0);
    const EdgeDecision force{Edge(2, 3), true};
    const PricingConstraints cons(5, std::span(&force, 1));
    LabelArena arena;
    const int at2 = push_path(arena, inst, duals, 0, {2}, cons);
    // Entered 2 from 0, so the forced edge {2,3} must be the way out.
    CHECK_FALSE(extend(arena[at2], 0, 4, duals, inst, cons));
    CHECK(extend(arena[at2], 0, 3, duals, inst, cons));
  }

  TEST_CASE("dominance") {
    const Label a = label(set_of({2}), 5, 0.3, 3.0, 10);
    const Label b = label(set_of({2, 3}), 5, 0.5, 4.0, 8);
    const Label c = label(set_of({4}), 5, 0.5, 4.0, 8);
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(a, c));
    CHECK(dominates(a, c, DominanceMode::heuristic));
    CHECK(dominates(a, a));
    CHECK(dominates(b, b));
    CHECK_FALSE(dominates(b, a));
    Label other_end = b;
    other_end.end = 4;
    CHECK_FALSE(dominates(a, other_end));
  }

  TEST_CASE("merge follows the figure") {
    const Instance inst = loose_instance(6, 1, 100);
    const std::vector<double> duals{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const auto cons = PricingConstraints::unrestricted(6);
    LabelArena arena;
    const int a = push_path(arena, inst, duals, 1, {3, 5}, cons);
    const int b = push_path(arena, inst, duals, 1, {4, 5}, cons);
    const auto c = merge(arena, a, b, 1, duals, inst, cons);
    REQUIRE(c);
    CHECK(c->nodes == std::vector<int>{1, 3, 5, 4});
    CHECK(c->time == 4.0);
    // Incremental formula vs recomputation from the node set.
    CHECK(c->redcost_at_generation == doctest::Approx(reduced_cost(*c, duals)).epsilon(1e-12));

    const int d = push_path(arena, inst, duals, 1, {3, 4}, cons);
    const int e = push_path(arena, inst, duals, 1, {3, 2, 4}, cons);
    CHECK_THROWS_AS(merge(arena, d, e, 1, duals, inst, cons), std::logic_error);
    CHECK_THROWS_AS(merge(arena, a, d, 1, duals, inst, cons), std::logic_error);
  }

  TEST_CASE("merge of a one-node label with itself is the 2-cycle") {
    std::vector<double> t{0, 3, 3, 0};
    const std::vector<double> duals{0.5, 0.5};
    const auto cons = PricingConstraints::unrestricted(2);
    {
      const Instance inst(t, {6, 6});
      LabelArena arena;
      const int a = push_path(arena, inst, duals, 0, {1}, cons);
      const auto c = merge(arena, a, a, 0, duals, inst, cons);
      REQUIRE(c);
      CHECK(c->nodes == std::vector<int>{0, 1});
      CHECK(c->time == 6.0);
      CHECK(c->redcost_at_generation == doctest::Approx(0.0));
    }
    {
      const Instance inst(t, {5, 6});
      LabelArena arena;
      arena.push(initial_label(0, inst));
      Label half = label(set_of({1}), 1, 0.5, 3, 5);
      half.pred = 0;
      half.prev_node = 0;
      half.first = 1;
      const int a = arena.push(half);
      CHECK_FALSE(merge(arena, a, a, 0, duals, inst, cons));
    }
  }

  TEST_CASE("close_cycle") {
    const std::vector<double> duals(5, 0.0);
    const auto cons = PricingConstraints::unrestricted(5);
    // Path 0 -> 1 -> 3 of time 2 reaching q = 7, then closing 3 -> 0.
    auto instance_with_closing = [](double t30) {
      std::vector<double> t(25, 10.0);
      for (int i = 0; i < 5; ++i) t[i * 5 + i] = 0;
      auto set = [&](int i, int j, double v) { t[i * 5 + j] = t[j * 5 + i] = v; };
      set(0, 1, 1);
      set(1, 3, 1);
      set(3, 0, t30);
      return Instance(t, {9, 9, 9, 7, 9});
    };
    {
      const Instance inst = instance_with_closing(4);
      LabelArena arena;
      const int idx = push_path(arena, inst, duals, 0, {1, 3}, cons);
      CHECK(arena[idx].time == 2.0);
      CHECK(arena[idx].min_crit == 7.0);
      const auto c = close_cycle(arena, idx, 0, duals, inst, cons);
      REQUIRE(c);
      CHECK(c->time == 6.0);
      CHECK(c->nodes == std::vector<int>{0, 1, 3});
    }
    {
      const Instance inst = instance_with_closing(6);
      LabelArena arena;
      const int idx = push_path(arena, inst, duals, 0, {1, 3}, cons);
      CHECK_FALSE(close_cycle(arena, idx, 0, duals, inst, cons));
    }
    {
      // Forced edge {3,4}: a cycle over {0,3} lacks it and is rejected.
      const Instance inst = loose_instance(5, 1, 100);
      const EdgeDecision force{Edge(3, 4), true};
      const PricingConstraints forced_cons(5, std::span(&force, 1));
      LabelArena arena;
      arena.push(initial_label(0, inst));
      Label l = label(set_of({3}), 3, 1.0, 1, 100);
      l.pred = 0;
      l.prev_node = 0;
      l.first = 3;
      const int idx = arena.push(l);
      CHECK_FALSE(close_cycle(arena, idx, 0, duals, inst, forced_cons));
      const int through = push_path(arena, inst, duals, 0, {3, 4}, forced_cons);
      CHECK(close_cycle(arena, through, 0, duals, inst, forced_cons));
    }
  }

  TEST_CASE("singleton cycle") {
    const Instance inst({0, 1, 1, 0}, {0.5, 2});
    CHECK(singleton_cycle(0, std::vector<double>{1, 0}, inst).redcost_at_generation == 0.0);
    const Cycle c = singleton_cycle(0, std::vector<double>{1.7, 0}, inst);
    CHECK(c.redcost_at_generation == doctest::Approx(-0.7));
    CHECK(c.time == 0.0);
    CHECK(c.min_crit == 0.5);
    CHECK(is_length_feasible(c));
  }

  TEST_CASE("zero duals price nothing") {
    const Instance inst = generate_euclidean(7, 1, 100, 100, 300);
    const std::vector<double> duals(7, 0.0);
    for (bool bidir : {false, true}) {
      PricingConfig cfg;
      cfg.bidirectional = bidir;
      const auto r = price_all(duals, inst, PricingConstraints::unrestricted(7), cfg);
      CHECK(r.cycles.empty());
      CHECK(r.min_redcost == doctest::Approx(1.0));
    }
  }

  TEST_CASE("exact pricing matches the oracle per start, all search variants") {
    std::mt19937_64 rng(101);
    int checked = 0;
    for (int rep = 0; rep < 120; ++rep) {
      const int n = 4 + rep % 5;
      const Instance inst = testing::suite_instance(rep, n, 600 + rep);
      const auto duals = testing::random_duals(n, rng, rep % 2 ? 1.0 : 0.5);
      for (int s = 0; s < n; ++s) {
        const double expected = oracle::min_redcost(inst, duals, s);
        PricingConstraints cons = PricingConstraints::unrestricted(n);
        cons.min_start = s;
        for (int variant = 0; variant < 4; ++variant) {
          PricingConfig cfg;
          cfg.bidirectional = variant & 1;
          cfg.dominance = variant & 2;
          const auto r = price_from_start(s, duals, inst, cons, cfg);
          CHECK(r.min_redcost == doctest::Approx(expected).epsilon(1e-9));
          for (const auto& c : r.cycles) {
            CHECK(c.nodes[0] == s);
            CHECK(is_length_feasible(c));
            CHECK(c.redcost_at_generation < -cfg.redcost_tolerance);
          }
          ++checked;
        }
      }
    }
    CHECK(checked > 1000);
  }

  TEST_CASE("heuristic mode returns genuine cycles") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 40; ++rep) {
      const int n = 5 + rep % 4;
      const Instance inst = testing::suite_instance(rep, n, 700 + rep);
      const auto duals = testing::random_duals(n, rng);
      PricingConfig cfg;
      cfg.heuristic_dominance = true;
      cfg.bidirectional = rep % 2;
      const auto r = price_all(duals, inst, PricingConstraints::unrestricted(n), cfg);
      for (const auto& c : r.cycles) {
        const Cycle fresh = make_cycle(inst, c.nodes);
        CHECK(fresh.time == doctest::Approx(c.time));
        CHECK(is_length_feasible(fresh));
        CHECK(c.redcost_at_generation == doctest::Approx(reduced_cost(c, duals)));
        CHECK(oracle::min_redcost(inst, duals, c.nodes[0]) <= c.redcost_at_generation + 1e-9);
      }
    }
  }

  TEST_CASE("pricing under branching decisions matches the oracle") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 80; ++rep) {
      const int n = 4 + rep % 4;
      const Instance inst = testing::suite_instance(rep, n, 800 + rep);
      const auto duals = testing::random_duals(n, rng, 1.0);
      std::uniform_int_distribution<int> node(0, n - 1);
      EdgeDecisions decisions;
      for (int k = 0; k < 2; ++k) {
        const int a = node(rng);
        const int b = (a + 1 + node(rng) % (n - 1)) % n;
        const Edge e(a, b);
        const bool clash = std::any_of(decisions.begin(), decisions.end(),
                                       [&](const EdgeDecision& d) { return d.edge == e; });
        if (!clash) decisions.push_back({e, (rep + k) % 2 == 0});
      }
      const PricingConstraints base(n, decisions);
      for (int s = 0; s < n; ++s) {
        const double expected = oracle::min_redcost(inst, duals, s, decisions);
        PricingConstraints cons = base;
        cons.min_start = s;
        for (bool bidir : {false, true}) {
          PricingConfig cfg;
          cfg.bidirectional = bidir;
          const auto r = price_from_start(s, duals, inst, cons, cfg);
          if (std::isinf(expected)) {
            CHECK(std::isinf(r.min_redcost));
          } else {
            CHECK(r.min_redcost == doctest::Approx(expected).epsilon(1e-9));
          }
          for (const auto& c : r.cycles) CHECK(satisfies_decisions(c, decisions));
        }
      }
    }
  }

  TEST_CASE("per-start minima and the return cap") {
    // Every multi-node cycle is feasible and each dual is 1, so a k-cycle
    // has reduced cost 1 - k: far more than 50 negative cycles.
    const int n = 7;
    const Instance inst = loose_instance(n, 1, 100);
    const std::vector<double> duals(n, 1.0);
    PricingConfig cfg;
    cfg.dominance = false;
    const auto r = price_all(duals, inst, PricingConstraints::unrestricted(n), cfg);
    REQUIRE(r.cycles.size() == 50);

    auto catalog = oracle::enumerate_cycles(inst);
    std::vector<Cycle> negative;
    for (auto c : catalog.cycles) {
      c.redcost_at_generation = reduced_cost(c, duals);
      if (c.redcost_at_generation < -1e-6) negative.push_back(c);
    }
    REQUIRE(negative.size() > 60);
    std::sort(negative.begin(), negative.end(), cycle_order);
    for (int k = 0; k < 50; ++k) CHECK(r.cycles[k].nodes == negative[k].nodes);

    for (int s = 0; s < n; ++s) {
      CHECK(r.per_start_min[s] == doctest::Approx(std::min(0.0, oracle::min_redcost(inst, duals, s))));
    }
  }

  TEST_CASE("worker count does not change the output") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 8 + rep;
      const Instance inst = generate_euclidean(n, 50 + rep, 100, 80, 250);
      const auto duals = testing::random_duals(n, rng, 0.8);
      const auto cons = PricingConstraints::unrestricted(n);
      const auto one = price_all(duals, inst, cons, PricingConfig{}, 1);
      const auto many = price_all(duals, inst, cons, PricingConfig{}, 8);
      REQUIRE(one.cycles.size() == many.cycles.size());
      for (std::size_t k = 0; k < one.cycles.size(); ++k) {
        CHECK(one.cycles[k].nodes == many.cycles[k].nodes);
        CHECK(one.cycles[k].redcost_at_generation == many.cycles[k].redcost_at_generation);
      }
      CHECK(one.per_start_min == many.per_start_min);
      CHECK(one.stats.labels_generated == many.stats.labels_generated);
    }
  }

  TEST_CASE("symmetry breaking covers every cycle exactly once") {
    for (int n = 3; n <= 7; ++n) {
      const Instance inst = generate_euclidean(n, 40 + n, 100, 150, 300);
      const std::vector<double> duals(n, 1.0);
      PricingConfig cfg;
      cfg.dominance = false;
      cfg.max_cycles_returned = 100000;
      std::set<std::vector<int>> found;
      std::size_t total = 0;
      for (int s = 0; s < n; ++s) {
        PricingConstraints cons = PricingConstraints::unrestricted(n);
        cons.min_start = s;
        for (const auto& c : price_from_start(s, duals, inst, cons, cfg).cycles) {
          found.insert(c.nodes);
          ++total;
        }
      }
      std::set<std::vector<int>> expected;
      for (const auto& c : oracle::enumerate_cycles(inst).cycles)
        if (c.size() >= 2) expected.insert(c.nodes);
      CHECK(found == expected);
      CHECK(total == found.size());
    }
  }

  TEST_CASE("pruned labels never recover feasibility") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 200; ++rep) {
      const int n = 6;
      const Instance inst = testing::suite_instance(rep, n, 900 + rep);
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      double t = 0, q = inst.crit(order[0]);
      bool infeasible = false;
      for (int k = 1; k < n; ++k) {
        t += inst.travel(order[k - 1], order[k]);
        q = std::min(q, inst.crit(order[k]));
        if (infeasible) CHECK(t > q);
        infeasible = infeasible || t > q;
      }
    }
  }

  TEST_CASE("canonical form is rotation and direction invariant") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 200; ++rep) {
      const int k = 1 + rep % 7;
      std::vector<int> nodes(k);
      std::iota(nodes.begin(), nodes.end(), rep % 5);
      std::shuffle(nodes.begin(), nodes.end(), rng);
      const auto canon = canonicalize(nodes);
      CHECK(canon[0] == *std::min_element(nodes.begin(), nodes.end()));
      if (k >= 3) CHECK(canon[1] < canon.back());
      for (int r = 0; r < k; ++r) {
        std::vector<int> rot = nodes;
        std::rotate(rot.begin(), rot.begin() + r, rot.end());
        CHECK(canonicalize(rot) == canon);
        std::reverse(rot.begin(), rot.end());
        CHECK(canonicalize(rot) == canon);
      }
    }
  }

  TEST_CASE("NodeSet") {
    NodeSet s;
    CHECK(s.empty());
    s.insert(0);
    s.insert(64);
    s.insert(127);
    CHECK(s.count() == 3);
    CHECK(s.contains(64));
    CHECK(set_of({0}).subset_of(s));
    CHECK_FALSE(s.subset_of(set_of({0, 64})));
    CHECK(s.meets_only_at(set_of({64, 5}), 64));
    CHECK_FALSE(s.meets_only_at(set_of({64, 0}), 64));
    s.erase(64);
    CHECK_FALSE(s.contains(64));
    CHECK(NodeSet::all(70).count() == 70);
  }
}
