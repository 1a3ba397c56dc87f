#include <catch2/catch_amalgamated.hpp>

#include "coperm/template_weights.hpp"

using namespace coperm;

TEST_CASE("joint divisibility law") {
    const ZpLaw exact = zp_law(3, 9);
    CHECK(exact.p10 == mpq_class(1, 3));
    CHECK(exact.p01 == mpq_class(1, 3));
    CHECK(exact.p00 == mpq_class(1, 3));
    CHECK(entropy(exact.probabilities()) == Catch::Approx(std::log(3.0)));

    const ZpLaw floored = zp_law(3, 10);
    CHECK(floored.p10 == mpq_class(3, 10));
    CHECK(floored.p01 == mpq_class(3, 10));
    CHECK(floored.p00 == mpq_class(2, 5));
    CHECK(floored.p10 + floored.p01 + floored.p00 == 1);

    CHECK_THROWS_AS(zp_law(11, 10), std::invalid_argument);
    const ZpLaw degenerate = zp_law(11, 10, true);
    CHECK(degenerate.p00 == 1);
    CHECK_THROWS_AS(zp_law(4, 10), std::invalid_argument);
}

TEST_CASE("entropy") {
    CHECK(entropy({1.0}) == 0.0);
    CHECK(entropy({0.25, 0.25, 0.25, 0.25}) == Catch::Approx(std::log(4.0)));
    CHECK(entropy({0.5, 0.25, 0.25}) == Catch::Approx(1.5 * std::log(2.0)));
    CHECK(entropy({1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(entropy({0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(entropy({1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("pair rate targets") {
    CHECK(beta_target(0, 0, 15, {3, 5}) == Catch::Approx(3.0));
    CHECK(beta_target(0b1, 0, 9, {3}) == Catch::Approx(3.0));
    CHECK(beta_target(0b1, 0b1, 9, {3}, true) == 0.0);
    CHECK_THROWS_AS(beta_target(0b1, 0b1, 9, {3}), std::invalid_argument);
    CHECK_THROWS_AS(beta_target(0, 0, 10, {2, 3}), std::invalid_argument);
}

TEST_CASE("provisional label masses sum to one") {
    // With all labels allowed (k > |basis|) the reserve mass over keyed
    // labels is exactly zero; truncating |T| < k moves the rest to the
    // reserve. Checked in exact rationals.
    const std::vector<std::int64_t> basis{3, 5, 7};
    for (BucketKey s : {0ULL, 0b001ULL, 0b110ULL}) {
        for (int k = 1; k <= 4; ++k) {
            const auto dist = detail::build_label_distribution(s, basis, k);
            CHECK(dist.cumulative.back() <= dist.denom);
            if (k == 4) CHECK(dist.cumulative.back() == dist.denom);
        }
    }
    // Source bucket {3} over basis {3}: only the empty label is valid and it
    // carries the full mass.
    const auto dist = detail::build_label_distribution(0b1, {3}, 2);
    REQUIRE(dist.labels.size() == 1);
    CHECK(dist.labels[0] == kEmptyKey);
    CHECK(dist.cumulative.back() == dist.denom);
}

TEST_CASE("empty basis assigns everything to the empty pair") {
    const auto left = partition(Domain::interval(40), {}, 1);
    const auto right = partition(Domain::odd_interval(40), {}, 1);
    Rng rng(5);
    const auto ar = random_assignment(left, right, rng);
    CHECK(ar.weights.beta_of(kEmptyKey, kEmptyKey) == 40);
    CHECK(ar.weights.star1 == 0);
    CHECK(ar.weights.star2 == 0);
}

TEST_CASE("assignment invariants on a midsize instance") {
    const std::vector<std::int64_t> basis{3, 5, 7};
    const auto left = partition(Domain::interval(3000), basis, 3);
    const auto right = partition(Domain::odd_interval(3000), basis, 3);
    Rng rng(11);
    const auto ar = random_assignment(left, right, rng);

    // Label-disjointness and conservation per left bucket.
    std::int64_t star_count = static_cast<std::int64_t>(left.overflow.size());
    for (const auto& [s, members] : left.buckets) {
        std::int64_t assigned = 0;
        for (std::int64_t m : members) {
            const BucketKey label = ar.assignment.label_left(m);
            if (label == kStarLabel) {
                ++star_count;
                continue;
            }
            CHECK((label & s) == 0);
            ++assigned;
        }
        std::int64_t expected = 0;
        for (const auto& [pair_key, b] : ar.weights.beta)
            if (pair_key.first == s) expected += b;
        CHECK(assigned == expected);
    }
    CHECK(star_count == ar.weights.star1);
    CHECK(ar.weights.star1 == ar.weights.star2);  // equal-size domains

    // Exact balance per pair, recounted from labels on both sides.
    for (const auto& [pair_key, b] : ar.weights.beta) {
        std::int64_t from_left = 0, from_right = 0;
        const auto lit = left.buckets.find(pair_key.first);
        if (lit != left.buckets.end())
            for (std::int64_t m : lit->second)
                if (ar.assignment.label_left(m) == pair_key.second) ++from_left;
        const auto rit = right.buckets.find(pair_key.second);
        if (rit != right.buckets.end())
            for (std::int64_t m : rit->second)
                if (ar.assignment.label_right(m) == pair_key.first) ++from_right;
        CHECK(from_left == b);
        CHECK(from_right == b);
    }
}

TEST_CASE("surplus trimming removes the largest values first") {
    const std::vector<std::int64_t> basis{3, 5};
    const auto left = partition(Domain::interval(500), basis, 2);
    const auto right = partition(Domain::odd_interval(500), basis, 2);
    Rng rng(13);
    const auto ar = random_assignment(left, right, rng);
    // Within each (bucket, label) class on the left, no starred member may
    // sit below a labeled member unless it was provisionally starred; the
    // deterministic trim ensures the kept members of each class are exactly
    // its smallest ones under a redraw with the same seed.
    Rng rng2(13);
    const auto ar2 = random_assignment(left, right, rng2);
    CHECK(ar.assignment.left_labels == ar2.assignment.left_labels);
    CHECK(ar.assignment.right_labels == ar2.assignment.right_labels);
    CHECK(ar.weights.beta == ar2.weights.beta);
}

TEST_CASE("beta concentrates near its target at scale") {
    // Regression at n = 1e5 over {3,5,7}, k = 3: the worst relative gap from
    // the target rate stays below 10% (observed 5.0% at this seed).
    const std::vector<std::int64_t> basis{3, 5, 7};
    const auto left = partition(Domain::interval(100000), basis, 3);
    const auto right = partition(Domain::odd_interval(100000), basis, 3);
    Rng rng(1);
    const auto ar = random_assignment(left, right, rng);
    REQUIRE(ar.weights.beta.size() >= 25);
    double worst = 0.0;
    for (const auto& [pair_key, b] : ar.weights.beta) {
        const double target =
            beta_target(pair_key.first, pair_key.second, 100000, basis, true);
        if (target <= 0.0) continue;
        worst = std::max(worst,
                         std::abs(static_cast<double>(b) - target) / target);
    }
    CHECK(worst < 0.10);
}

TEST_CASE("template CSV serialization") {
    const auto left = partition(Domain::interval(60), {3}, 2);
    const auto right = partition(Domain::odd_interval(60), {3}, 2);
    Rng rng(3);
    const auto ar = random_assignment(left, right, rng);
    const std::string csv = template_csv(ar.weights, {3});
    CHECK(csv.rfind("s1,s2,beta\n", 0) == 0);
    CHECK(csv.find("*1,,") != std::string::npos);
    CHECK(csv.find("*2,,") != std::string::npos);
}

TEST_CASE("mismatched partitions are rejected") {
    const auto left = partition(Domain::interval(30), {3, 5}, 2);
    const auto right_basis = partition(Domain::odd_interval(30), {3}, 2);
    const auto right_k = partition(Domain::odd_interval(30), {3, 5}, 3);
    const auto right_two = partition(Domain::odd_interval(30), {2, 3}, 2);
    Rng rng(1);
    CHECK_THROWS_AS(random_assignment(left, right_basis, rng), std::invalid_argument);
    CHECK_THROWS_AS(random_assignment(left, right_k, rng), std::invalid_argument);
    const auto left_two = partition(Domain::interval(30), {2, 3}, 2);
    CHECK_THROWS_AS(random_assignment(left_two, right_two, rng), std::invalid_argument);
}
