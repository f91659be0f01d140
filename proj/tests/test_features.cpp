#include <doctest.h>

#include <algorithm>

#include "tseg/features.hpp"

using namespace tseg;

TEST_CASE("dense pair features") {
    const auto same = featurize("The budget was approved", "the budget was approved");
    CHECK(same.token_jaccard() == 1.0);
    CHECK(same.tf_cosine() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same.length_ratio() == 1.0);

    const auto disjoint = featurize("alpha beta", "gamma delta epsilon zeta");
    CHECK(disjoint.token_jaccard() == 0.0);
    CHECK(disjoint.tf_cosine() == 0.0);
    CHECK(disjoint.length_ratio() == 0.5);

    const auto marked = featurize("1. Budget item", "text");
    CHECK(marked.marker_a() == 1.0);
    CHECK(marked.marker_b() == 0.0);
}

TEST_CASE("structure markers") {
    CHECK(has_structure_marker("1. Budget"));
    CHECK(has_structure_marker("12) Votes"));
    CHECK(has_structure_marker("- bullet"));
    CHECK(has_structure_marker("ORDEM do dia"));
    CHECK_FALSE(has_structure_marker("The 3 items"));
    CHECK_FALSE(has_structure_marker("A vote"));
}

TEST_CASE("featurize is symmetric in the dense overlap features") {
    const char* a = "1. The council approved the budget";
    const char* b = "Councillors debated the budget for hours";
    const auto ab = featurize(a, b), ba = featurize(b, a);
    CHECK(ab.token_jaccard() == ba.token_jaccard());
    CHECK(ab.tf_cosine() == doctest::Approx(ba.tf_cosine()).epsilon(1e-15));
    CHECK(ab.length_ratio() == ba.length_ratio());
    CHECK(ab.marker_a() == ba.marker_b());
    CHECK(ab.marker_b() == ba.marker_a());
}

TEST_CASE("hashed sparse features") {
    const auto f = featurize("a b a", "c");
    // A:a x2, A:b, A:a b, A:b a, B:c
    CHECK(f.index.size() == 5);
    CHECK(std::is_sorted(f.index.begin(), f.index.end()));
    for (auto i : f.index) CHECK(i < kSparseDim);
    double total = 0.0;
    for (double v : f.value) total += v;
    CHECK(total == 6.0);
    const auto az = featurize("a", "z");
    CHECK(std::find(az.index.begin(), az.index.end(), hash_feature("A:a")) != az.index.end());
    CHECK(hash_feature("A:a") != hash_feature("B:a"));
    const auto again = featurize("a b a", "c");
    CHECK(again.index == f.index);
    CHECK(again.value == f.value);
}
