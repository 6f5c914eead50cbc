#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "enetacl/errors.hpp"
#include "enetacl/policy.hpp"
#include "oracles.hpp"

using namespace enetacl;
using namespace enetacl::testing;

TEST_CASE("engl membership follows the matrix sentinel") {
    const EnglPolicy p = engl_fixture();
    CHECK(engl_member_user(p, 1, 1));   // lug=3
    CHECK_FALSE(engl_member_user(p, 1, 2));  // lug=0
    CHECK(engl_member_user(p, 2, 2));   // lug=1
    CHECK_THROWS_AS(engl_member_user(p, 3, 1), IndexError);
    CHECK_THROWS_AS(engl_member_user(p, 1, 0), IndexError);
}

TEST_CASE("engl access requires co-membership and dominance") {
    const EnglPolicy p = engl_fixture();
    CHECK(engl_can_access(p, 1, 1, 1));        // 3 >= 2
    CHECK_FALSE(engl_can_access(p, 1, 2, 2));  // u1 not in g2
    CHECK(engl_can_access(p, 2, 1, 1));        // boundary 2 >= 2
    CHECK_FALSE(engl_can_access(p, 1, 2, 1));  // r2 not in g1
    CHECK_FALSE(engl_can_access(p, 2, 1, 2));  // r1 not in g2
}

TEST_CASE("engl interaction takes the minimum of the user levels") {
    const EnglPolicy p = engl_fixture();
    CHECK(engl_can_interact(p, 1, 2, 1, 1));        // min(3,2)=2 >= 2
    CHECK_FALSE(engl_can_interact(p, 1, 2, 2, 2));  // u1 not in g2
    // Self-interaction collapses to plain access.
    CHECK(engl_can_interact(p, 1, 1, 1, 1) == engl_can_access(p, 1, 1, 1));
}

TEST_CASE("enlg access returns the smallest-group, smallest-level witness") {
    const EnlgPolicy p = enlg_fixture();
    auto w1 = enlg_can_access(p, 1, 1);
    REQUIRE(w1.has_value());
    CHECK(*w1 == AccessWitness{2, 1});
    auto w2 = enlg_can_access(p, 2, 1);
    REQUIRE(w2.has_value());
    CHECK(*w2 == AccessWitness{2, 1});

    // Resource with no memberships anywhere is unreachable by everyone.
    EnlgPolicy bare = p;
    bare.rlg = LevelCube(1, 3, 1);
    for (int i = 1; i <= bare.user_count(); ++i)
        CHECK_FALSE(enlg_can_access(bare, i, 1).has_value());
}

TEST_CASE("enlg interaction needs a common (level, group) point") {
    const EnlgPolicy p = enlg_fixture();
    auto w = enlg_can_interact(p, 1, 2, 1);
    REQUIRE(w.has_value());
    CHECK(*w == AccessWitness{2, 1});

    // Knock out u2's level-2 membership: no common point remains.
    EnlgPolicy cut = p;
    cut.ulg.set(2, 2, 1, false);
    CHECK_FALSE(enlg_can_interact(cut, 1, 2, 1).has_value());

    // Raising the resource level above min(lu) denies regardless of cubes.
    EnlgPolicy high = p;
    high.lr = {3};
    high.rlg.set(1, 3, 1);
    CHECK_FALSE(enlg_can_interact(high, 1, 2, 1).has_value());
}

TEST_CASE("witness search scans by resource level bound") {
    // Membership shared only at a level above lr(k) must not count.
    EnlgPolicy p = enlg_fixture();
    p.lr = {1};  // witness levels restricted to {1}
    CHECK_FALSE(enlg_can_access(p, 1, 1).has_value());  // rlg only at level 2
}

TEST_CASE("list_groups orders by group index") {
    const EnglPolicy p = engl_fixture();
    CHECK(list_groups(p, 1) == std::vector<GroupLevel>{{1, 3}});
    CHECK(list_groups(p, 2) == std::vector<GroupLevel>{{1, 2}, {2, 1}});

    EnglPolicy empty = p;
    empty.lug[0] = {0, 0};
    CHECK(list_groups(empty, 1).empty());

    const EnlgPolicy q = enlg_fixture();
    CHECK(list_groups(q, 1) == std::vector<GroupLevel>{{1, 2}});
    CHECK(list_groups(q, 2) == std::vector<GroupLevel>{{1, 2}});
}

TEST_CASE("list_resources applies the level cap") {
    const EnglPolicy p = engl_fixture();
    CHECK(list_resources(p, 1, 1) == std::vector<int>{1});
    CHECK(list_resources(p, 1, 1, 1).empty());       // lrg(r1,g1)=2 exceeds cap
    CHECK(list_resources(p, 1, 1, 2) == std::vector<int>{1});
    CHECK(list_resources(p, 1, 2).empty());          // u1 not in g2
    CHECK_THROWS_AS(list_resources(p, 1, 1, 4), EntitlementError);
    CHECK_THROWS_AS(list_resources(p, 1, 2, 1), EntitlementError);  // no entitlement

    const EnlgPolicy q = enlg_fixture();
    CHECK(list_resources(q, 1, 1) == std::vector<int>{1});
    CHECK(list_resources(q, 1, 1, 1).empty());       // witness sits at level 2
    CHECK_THROWS_AS(list_resources(q, 2, 1, 3), EntitlementError);  // lu(u2)=2
}

TEST_CASE("a group holding no resources lists empty") {
    EnglPolicy p = engl_fixture();
    p.lrg[0][0] = 0;  // r1 leaves g1; g1 now has no resources
    CHECK(list_resources(p, 1, 1).empty());
}

TEST_CASE("policy validation rejects malformed values") {
    EnglPolicy p = engl_fixture();
    p.lug[0][0] = 4;  // above q=3
    CHECK_THROWS_AS(p.validate(), ValidationError);

    EnglPolicy dup = engl_fixture();
    dup.users = {"u1", "u1"};
    CHECK_THROWS_AS(dup.validate(), ValidationError);

    EnlgPolicy q = enlg_fixture();
    q.ulg.set(2, 3, 1);  // above lu(u2)=2
    CHECK_THROWS_AS(q.validate(), EntitlementError);

    EnlgPolicy zero = enlg_fixture();
    zero.lu[0] = 0;
    CHECK_THROWS_AS(zero.validate(), ValidationError);
}

// --- Oracle equivalence and model properties ----------------------------------

TEST_CASE("engl predicates equal the brute-force oracle on random policies") {
    std::mt19937 rng(20260808);
    for (int round = 0; round < 300; ++round) {
        const EnglPolicy p = random_engl_policy(rng);
        for (int i = 1; i <= p.user_count(); ++i)
            for (int j = 1; j <= p.group_count(); ++j) {
                CHECK(engl_member_user(p, i, j) == (p.lug[i - 1][j - 1] > 0));
                for (int k = 1; k <= p.resource_count(); ++k) {
                    CHECK(engl_can_access(p, i, k, j) == oracle_engl_access(p, i, k, j));
                    for (int i1 = 1; i1 <= p.user_count(); ++i1)
                        CHECK(engl_can_interact(p, i, i1, k, j) ==
                              oracle_engl_interact(p, i, i1, k, j));
                }
            }
    }
}

TEST_CASE("enlg predicates equal the brute-force oracle on random policies") {
    std::mt19937 rng(20260809);
    for (int round = 0; round < 300; ++round) {
        const EnlgPolicy p = random_enlg_policy(rng);
        for (int i = 1; i <= p.user_count(); ++i)
            for (int k = 1; k <= p.resource_count(); ++k) {
                auto w = enlg_can_access(p, i, k);
                CHECK(w.has_value() == oracle_enlg_access(p, i, k));
                if (w) CHECK(*w == *oracle_enlg_access_witness(p, i, k));
                for (int i1 = 1; i1 <= p.user_count(); ++i1) {
                    auto wi = enlg_can_interact(p, i, i1, k);
                    CHECK(wi.has_value() == oracle_enlg_interact(p, i, i1, k));
                    if (wi) CHECK(*wi == *oracle_enlg_interact_witness(p, i, i1, k));
                }
            }
    }
}

TEST_CASE("interaction is symmetric in the two users") {
    std::mt19937 rng(7);
    for (int round = 0; round < 200; ++round) {
        const EnglPolicy p = random_engl_policy(rng);
        for (int i0 = 1; i0 <= p.user_count(); ++i0)
            for (int i1 = 1; i1 <= p.user_count(); ++i1)
                for (int k = 1; k <= p.resource_count(); ++k)
                    for (int j = 1; j <= p.group_count(); ++j)
                        CHECK(engl_can_interact(p, i0, i1, k, j) ==
                              engl_can_interact(p, i1, i0, k, j));
        const EnlgPolicy q = random_enlg_policy(rng);
        for (int i0 = 1; i0 <= q.user_count(); ++i0)
            for (int i1 = 1; i1 <= q.user_count(); ++i1)
                for (int k = 1; k <= q.resource_count(); ++k)
                    CHECK(enlg_can_interact(q, i0, i1, k).has_value() ==
                          enlg_can_interact(q, i1, i0, k).has_value());
    }
}

TEST_CASE("interaction equals pairwise access in engl") {
    std::mt19937 rng(11);
    for (int round = 0; round < 200; ++round) {
        const EnglPolicy p = random_engl_policy(rng);
        for (int i0 = 1; i0 <= p.user_count(); ++i0)
            for (int i1 = 1; i1 <= p.user_count(); ++i1)
                for (int k = 1; k <= p.resource_count(); ++k)
                    for (int j = 1; j <= p.group_count(); ++j)
                        CHECK(engl_can_interact(p, i0, i1, k, j) ==
                              (engl_can_access(p, i0, k, j) &&
                               engl_can_access(p, i1, k, j)));
    }
}

TEST_CASE("an all-zero engl policy denies everything") {
    EnglPolicy p = engl_fixture();
    p.lug = {{0, 0}, {0, 0}};
    p.lrg = {{0, 0}, {0, 0}};
    for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= 2; ++k)
            for (int j = 1; j <= 2; ++j) {
                CHECK_FALSE(engl_can_access(p, i, k, j));
                CHECK_FALSE(engl_can_interact(p, i, i, k, j));
            }
}

TEST_CASE("raising a single lug entry never revokes access") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int round = 0; round < 200; ++round) {
        EnglPolicy p = random_engl_policy(rng);
        std::uniform_int_distribution<int> user(1, p.user_count());
        std::uniform_int_distribution<int> group(1, p.group_count());
        const int i = user(rng);
        const int j = group(rng);

        EnglPolicy bumped = p;
        if (bumped.lug[i - 1][j - 1] < bumped.levels) bumped.lug[i - 1][j - 1]++;
        EnglPolicy cut = p;
        if (cut.lug[i - 1][j - 1] > 0) cut.lug[i - 1][j - 1]--;

        for (int u0 = 1; u0 <= p.user_count(); ++u0)
            for (int u1 = 1; u1 <= p.user_count(); ++u1)
                for (int k = 1; k <= p.resource_count(); ++k)
                    for (int g = 1; g <= p.group_count(); ++g) {
                        if (engl_can_access(p, u0, k, g))
                            CHECK(engl_can_access(bumped, u0, k, g));
                        if (engl_can_access(cut, u0, k, g))
                            CHECK(engl_can_access(p, u0, k, g));
                        if (engl_can_interact(p, u0, u1, k, g))
                            CHECK(engl_can_interact(bumped, u0, u1, k, g));
                        if (engl_can_interact(cut, u0, u1, k, g))
                            CHECK(engl_can_interact(p, u0, u1, k, g));
                    }
    }
}

TEST_CASE("enlg witnesses satisfy all three memberships and the level bound") {
    std::mt19937 rng(17);
    for (int round = 0; round < 300; ++round) {
        const EnlgPolicy p = random_enlg_policy(rng);
        for (int i = 1; i <= p.user_count(); ++i)
            for (int k = 1; k <= p.resource_count(); ++k) {
                if (auto w = enlg_can_access(p, i, k)) {
                    CHECK(p.ulg.at(i, w->level, w->group));
                    CHECK(p.rlg.at(k, w->level, w->group));
                    CHECK(w->level <= p.lr[k - 1]);
                    CHECK(p.lu[i - 1] >= p.lr[k - 1]);
                }
            }
    }
}

TEST_CASE("group-constrained enlg access matches the constrained oracle") {
    std::mt19937 rng(19);
    for (int round = 0; round < 300; ++round) {
        const EnlgPolicy p = random_enlg_policy(rng);
        for (int i = 1; i <= p.user_count(); ++i)
            for (int k = 1; k <= p.resource_count(); ++k)
                for (int j = 1; j <= p.group_count(); ++j) {
                    auto w = enlg_can_access_in_group(p, i, k, j);
                    CHECK(w.has_value() == oracle_enlg_access_in_group(p, i, k, j));
                    if (w) {
                        CHECK(w->group == j);
                        CHECK(p.ulg.at(i, w->level, j));
                        CHECK(p.rlg.at(k, w->level, j));
                    }
                    for (int cap = 1; cap <= p.lu[i - 1]; ++cap)
                        CHECK(enlg_can_access_in_group(p, i, k, j, cap).has_value() ==
                              oracle_enlg_access_in_group(p, i, k, j, cap));
                    for (int i1 = 1; i1 <= p.user_count(); ++i1)
                        CHECK(enlg_can_interact_in_group(p, i, i1, k, j).has_value() ==
                              oracle_enlg_interact_in_group(p, i, i1, k, j));
                }
    }
}
