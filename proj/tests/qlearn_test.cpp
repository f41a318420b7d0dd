#include "oaspmdp/agent.hpp"
#include "oaspmdp/qlearn.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace oasp;

namespace {

const LearnParams standard{0.2, 0.9, 0.1, 1000};
const Cell s{1, 1};
const Cell next{1, 2};

// Greedy rollout length from start on a deterministic grid, capped.
int greedy_rollout(const QTable& q, const GridConfig& g, int cap = 200) {
    Rng unused(0);
    Cell c = g.start;
    for (int n = 1; n <= cap; ++n) {
        const StepOutcome o = step(g, c, greedy_action(q, c), unused);
        if (o.terminal) return n;
        c = o.next;
    }
    return cap + 1;
}

}  // namespace

TEST_SUITE("qlearn.params") {
    TEST_CASE("defaults and ranges") {
        CHECK(LearnParams{} == standard);
        CHECK_NOTHROW(standard.validate());
        CHECK_THROWS_AS((LearnParams{0.0, 0.9, 0.1, 10}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((LearnParams{1.1, 0.9, 0.1, 10}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((LearnParams{0.2, 1.0, 0.1, 10}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((LearnParams{0.2, 0.9, 1.5, 10}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((LearnParams{0.2, 0.9, 0.1, 0}.validate()), std::invalid_argument);
        CHECK_NOTHROW((LearnParams{1.0, 0.0, 0.0, 1}.validate()));
    }
}

TEST_SUITE("qlearn.update") {
    TEST_CASE("zero table, step reward") {
        QTable q;
        q_update(q, s, Action::up, -1.0, next, false, standard);
        CHECK(q.value(s, Action::up) == doctest::Approx(-0.2));
    }

    TEST_CASE("bootstraps from the best successor action") {
        QTable q;
        q.set(s, Action::up, 10.0);
        q.set(next, Action::left, 20.0);
        q.set(next, Action::down, 5.0);
        q_update(q, s, Action::up, 0.0, next, false, standard);
        CHECK(q.value(s, Action::up) == doctest::Approx(11.6));
    }

    TEST_CASE("absent successor entries read zero in the max") {
        QTable q;
        q.set(next, Action::up, -3.0);
        q_update(q, s, Action::right, 0.0, next, false, standard);
        CHECK(q.value(s, Action::right) == 0.0);
    }

    TEST_CASE("terminal successors do not bootstrap") {
        QTable q;
        q.set(next, Action::up, 50.0);
        q_update(q, s, Action::up, 99.0, next, true, standard);
        CHECK(q.value(s, Action::up) == doctest::Approx(19.8));
    }

    TEST_CASE("zero learning rate leaves the table unchanged") {
        QTable q;
        q.set(s, Action::up, 3.0);
        q.set(next, Action::up, 7.0);
        const QTable before = q;
        LearnParams frozen = standard;
        frozen.alpha = 0.0;  // outside validate()'s range, only the formula is exercised
        q_update(q, s, Action::up, -1.0, next, false, frozen);
        CHECK(q == before);
    }

    TEST_CASE("non-finite rewards are rejected") {
        QTable q;
        CHECK_THROWS_AS(q_update(q, s, Action::up, std::numeric_limits<double>::quiet_NaN(), next, false, standard),
                        std::invalid_argument);
        CHECK_THROWS_AS(q_update(q, s, Action::up, INFINITY, next, false, standard), std::invalid_argument);
        CHECK(q.empty());
    }

    TEST_CASE("touches exactly one entry") {
        Rng rng(5);
        QTable q;
        for (int i = 0; i < 500; ++i) {
            const Cell a{static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))};
            const Cell b{static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))};
            const Action act = all_actions[rng.below(4)];
            const QTable before = q;
            q_update(q, a, act, rng.uniform() < 0.1 ? 99.0 : -1.0, b, rng.uniform() < 0.1, standard);
            std::size_t changed = 0;
            for (const auto& [k, v] : q.entries()) {
                if (!before.contains(k.state, k.action) || before.value(k.state, k.action) != v) {
                    ++changed;
                    CHECK((k == QKey{a, act}));
                }
            }
            CHECK(changed <= 1);
            CHECK(q.size() - before.size() <= 1);
        }
    }
}

TEST_SUITE("qlearn.selection") {
    TEST_CASE("epsilon one is uniform") {
        QTable q;
        q.set(s, Action::up, 5.0);
        Rng rng(9);
        std::array<int, 4> hits{};
        const int n = 100000;
        for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(select_epsilon_greedy(q, s, 1.0, rng))];
        for (int h : hits) CHECK(std::abs(h / double(n) - 0.25) <= 0.01);
    }

    TEST_CASE("epsilon zero exploits") {
        QTable q;
        q.set(s, Action::up, 5.0);
        Rng rng(10);
        for (int i = 0; i < 1000; ++i) CHECK(select_epsilon_greedy(q, s, 0.0, rng) == Action::up);
    }

    TEST_CASE("ties are broken uniformly") {
        QTable q;
        Rng rng(11);
        std::array<int, 4> hits{};
        const int n = 100000;
        for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(select_epsilon_greedy(q, s, 0.0, rng))];
        for (int h : hits) CHECK(std::abs(h / double(n) - 0.25) <= 0.01);

        q.set(s, Action::left, 2.0);
        q.set(s, Action::down, 2.0);
        hits = {};
        for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(select_epsilon_greedy(q, s, 0.0, rng))];
        CHECK(hits[0] == 0);
        CHECK(hits[3] == 0);
        CHECK(std::abs(hits[1] / double(n) - 0.5) <= 0.01);
    }

    TEST_CASE("argmax is invariant under shifting a row") {
        Rng rng(12);
        for (int i = 0; i < 200; ++i) {
            QTable q, shifted;
            const double c = rng.uniform() * 100 - 50;
            for (Action a : all_actions) {
                const double v = static_cast<double>(rng.below(4));  // small range forces ties
                q.set(s, a, v);
                shifted.set(s, a, v + c);
            }
            CHECK(greedy_action(q, s) == greedy_action(shifted, s));
            Rng r1(static_cast<std::uint64_t>(i));
            Rng r2(static_cast<std::uint64_t>(i));
            CHECK(select_epsilon_greedy(q, s, 0.0, r1) == select_epsilon_greedy(shifted, s, 0.0, r2));
        }
    }
}

TEST_SUITE("qlearn.policy") {
    TEST_CASE("all-zero table maps to up") {
        const CellSet states{{0, 0}, {1, 0}, {4, 4}};
        for (const auto& [cell, a] : greedy_policy(QTable{}, states)) CHECK(a == Action::up);
    }

    TEST_CASE("unique maxima") {
        QTable q;
        q.set({0, 0}, Action::right, 1.0);
        q.set({1, 0}, Action::down, -0.5);
        q.set({1, 0}, Action::up, -1.0);
        q.set({1, 0}, Action::left, -2.0);
        q.set({1, 0}, Action::right, -3.0);
        const auto policy = greedy_policy(q, {{0, 0}, {1, 0}});
        CHECK(policy.at({0, 0}) == Action::right);
        CHECK(policy.at({1, 0}) == Action::down);
    }

    TEST_CASE("fixed tie order up < down < left < right") {
        QTable q;
        q.set(s, Action::up, -1.0);
        q.set(s, Action::left, 3.0);
        q.set(s, Action::right, 3.0);
        CHECK(greedy_action(q, s) == Action::left);
    }

    TEST_CASE("converged policy on a deterministic 5x5 grid is optimal") {
        const GridConfig g = make_open_grid(5, 5, 1.0);
        const int optimal = optimal_steps(g);
        REQUIRE(optimal == 8);
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            QLearningAgent agent(standard, 5, 5);
            Rng env = Rng::derive(seed, "env");
            Rng policy = Rng::derive(seed, "policy");
            for (int e = 0; e < 2000; ++e) run_episode(agent, g, env, policy);
            hits += greedy_rollout(agent.q(), g) == optimal ? 1 : 0;
        }
        CHECK(hits >= 95);
    }

    TEST_CASE("stored values stay within reward bounds") {
        const GridConfig g = make_open_grid(6, 6, 0.8);
        QLearningAgent agent(standard, 6, 6);
        Rng env(1), policy(2);
        for (int e = 0; e < 300; ++e) run_episode(agent, g, env, policy);
        for (const auto& [k, v] : agent.q().entries()) {
            CHECK(v >= -10.0);
            CHECK(v <= 990.0);
        }
    }
}

TEST_SUITE("qlearn.reset") {
    TEST_CASE("reset empties and is idempotent") {
        QTable q;
        q.set(s, Action::up, 4.0);
        reset(q);
        CHECK(q.empty());
        CHECK(q.value(s, Action::up) == 0.0);
        reset(q);
        CHECK(q.empty());
    }

    TEST_CASE("updates after a reset replay like a fresh table") {
        Rng rng(13);
        QTable used;
        for (int i = 0; i < 50; ++i) used.set({int(rng.below(3)), int(rng.below(3))}, all_actions[rng.below(4)], rng.uniform());
        reset(used);
        QTable fresh;
        Rng a(14), b(14);
        for (int i = 0; i < 300; ++i) {
            const Cell from{int(a.below(3)), int(a.below(3))};
            const Cell to{int(a.below(3)), int(a.below(3))};
            const Action act = all_actions[a.below(4)];
            q_update(used, from, act, -1.0, to, false, standard);
            const Cell from2{int(b.below(3)), int(b.below(3))};
            const Cell to2{int(b.below(3)), int(b.below(3))};
            const Action act2 = all_actions[b.below(4)];
            q_update(fresh, from2, act2, -1.0, to2, false, standard);
        }
        CHECK(used == fresh);
    }

    TEST_CASE("baseline agent reset restores the dense zero table") {
        QLearningAgent agent(standard, 4, 3);
        CHECK(agent.q().size() == 48);
        CHECK(agent.pair_count() == 48);
        Rng env(1), policy(2);
        run_episode(agent, make_open_grid(4, 3, 0.9), env, policy);
        agent.reset();
        CHECK(agent.q() == QLearningAgent(standard, 4, 3).q());
    }
}

TEST_SUITE("qlearn.csv") {
    TEST_CASE("dump and load reproduce the table") {
        QTable q;
        q.set({0, 0}, Action::up, -0.2);
        q.set({3, 1}, Action::right, 1.0 / 3.0);
        q.set({2, 2}, Action::left, 19.8);
        std::stringstream buf;
        write_qtable_csv(q, buf);
        CHECK(buf.str().rfind("state_x,state_y,action,value\n0,0,up,-0.2", 0) == 0);
        CHECK(read_qtable_csv(buf) == q);
    }

    TEST_CASE("malformed input") {
        std::stringstream none("x,y\n");
        CHECK_THROWS_AS(read_qtable_csv(none), std::runtime_error);
        std::stringstream bad("state_x,state_y,action,value\n0,0,jump,1\n");
        CHECK_THROWS_AS(read_qtable_csv(bad), std::runtime_error);
        std::stringstream nan("state_x,state_y,action,value\n0,zero,up,1\n");
        CHECK_THROWS_AS(read_qtable_csv(nan), std::runtime_error);
    }
}
