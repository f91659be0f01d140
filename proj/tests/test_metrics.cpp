#include <doctest.h>

#include <random>

#include "frozen_values.hpp"
#include "oracles.hpp"
#include "tseg/error.hpp"
#include "tseg/metrics.hpp"

using namespace tseg;

namespace {

std::vector<std::size_t> subset(unsigned mask, std::size_t gaps) {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < gaps; ++g)
        if (mask & (1u << g)) out.push_back(g);
    return out;
}

Document doc_of(const Segmentation& s) {
    Document d;
    d.doc_id = "d";
    d.sentences.assign(s.sentence_count(), "x");
    d.boundaries = masses_to_boundaries(s);
    return d;
}

}  // namespace

TEST_CASE("compute_k") {
    CHECK(compute_k({{3, 3}}) == frozen::kComputeK33);
    CHECK(compute_k({{10}}) == 5);
    CHECK(compute_k({{1, 1, 1, 1}}) == 2);
    CHECK(compute_k({{5, 4}}) == 2);   // 9/4 = 2.25
    CHECK(compute_k({{7, 7}}) == 4);   // 14/4 = 3.5 rounds away from zero
}

TEST_CASE("pk and window_diff fixtures") {
    const Segmentation ref{{3, 3}}, hyp{{6}};
    CHECK(pk(ref, hyp, 2) == frozen::kPk33vs6);
    CHECK(window_diff(ref, hyp, 2) == frozen::kWd33vs6);
    CHECK(pk(ref, ref, 2) == 0.0);
    CHECK(window_diff(ref, ref, 2) == 0.0);
    CHECK_THROWS_AS(pk(ref, Segmentation{{5}}, 2), ValidationError);
    CHECK_THROWS_AS(pk(ref, hyp, 6), ValidationError);
    CHECK_THROWS_AS(window_diff(ref, hyp, 0), ValidationError);
}

TEST_CASE("pk and window_diff equal enumeration for every pair at n <= 9") {
    for (std::size_t n = 2; n <= 9; ++n) {
        const std::size_t gaps = n - 1;
        for (unsigned r = 0; r < (1u << gaps); ++r)
            for (unsigned h = 0; h < (1u << gaps); ++h) {
                const auto ref = boundaries_to_masses(subset(r, gaps), n);
                const auto hyp = boundaries_to_masses(subset(h, gaps), n);
                for (std::size_t k = 1; k < n; ++k) {
                    REQUIRE(pk(ref, hyp, k) == oracle::pk(ref, hyp, k));
                    REQUIRE(window_diff(ref, hyp, k) == oracle::window_diff(ref, hyp, k));
                }
            }
    }
}

TEST_CASE("window_diff dominates pk when the hypothesis over-segments") {
    std::mt19937_64 rng(8);
    std::size_t checked = 0, held = 0;
    for (int t = 0; t < 2000; ++t) {
        const std::size_t n = 4 + rng() % 9;
        const auto ref = oracle::random_segmentation(n, 0.25, rng);
        const auto hyp = oracle::random_segmentation(n, 0.5, rng);
        if (hyp.segment_count() < ref.segment_count()) continue;
        const auto k = compute_k(ref);
        if (k >= n) continue;
        ++checked;
        held += window_diff(ref, hyp, k) >= pk(ref, hyp, k);
    }
    REQUIRE(checked > 500);
    CHECK(held == checked);
}

TEST_CASE("match_boundaries fixtures") {
    const std::vector<std::size_t> five{5}, six{6}, nine{9};
    const auto same = match_boundaries(five, five, 2);
    CHECK(same.matches.size() == 1);
    CHECK(same.transpositions.empty());
    const auto near = match_boundaries(five, six, 2);
    REQUIRE(near.transpositions.size() == 1);
    CHECK(near.transpositions[0].offset == frozen::kNearOffset);
    const auto far = match_boundaries(five, nine, 2);
    CHECK(far.misses == five);
    CHECK(far.false_alarms == nine);

    // A hypothesis between two references goes to the earlier one.
    const std::vector<std::size_t> r{3, 5}, h{4};
    const auto tie = match_boundaries(r, h, 2);
    REQUIRE(tie.transpositions.size() == 1);
    CHECK(tie.transpositions[0].ref_gap == 3);
    CHECK(tie.misses == std::vector<std::size_t>{5});
}

TEST_CASE("match_boundaries equals the exhaustive assignment on small instances") {
    for (std::size_t n_t : {1u, 2u, 3u}) {
        for (std::size_t n = 1; n <= 7; ++n) {
            const std::size_t gaps = n - 1;
            for (unsigned r = 0; r < (1u << gaps); ++r)
                for (unsigned h = 0; h < (1u << gaps); ++h) {
                    const auto ref = subset(r, gaps), hyp = subset(h, gaps);
                    const auto m = match_boundaries(ref, hyp, n_t);
                    const auto o = oracle::exhaustive_match(ref, hyp, n_t);
                    std::vector<std::size_t> choice(ref.size(), SIZE_MAX);
                    for (const auto& list : {m.matches, m.transpositions})
                        for (const auto& p : list)
                            choice[std::lower_bound(ref.begin(), ref.end(), p.ref_gap) - ref.begin()] = p.hyp_gap;
                    REQUIRE(choice == o.choice);
                    REQUIRE(static_cast<int>(m.matches.size()) == o.exact);
                    REQUIRE(static_cast<int>(m.transpositions.size()) == o.trans);
                }
        }
    }
}

TEST_CASE("boundary_f1 and boundary_similarity") {
    const std::vector<std::size_t> five{5}, six{6}, nine{9}, none;
    const auto near = boundary_f1(five, six, 2);
    CHECK(near.precision == 1.0);
    CHECK(near.recall == 1.0);
    CHECK(near.f1 == frozen::kBf1Near);
    CHECK(boundary_similarity(five, six, 2) == frozen::kBNear);
    CHECK(boundary_similarity(five, nine, 2) == frozen::kBFar);
    CHECK(boundary_f1(five, none, 2).f1 == 0.0);
    CHECK(boundary_f1(none, five, 2).f1 == 0.0);
    CHECK(boundary_f1(none, none, 2).f1 == 1.0);
    CHECK(boundary_similarity(none, none, 2) == 1.0);
    CHECK(boundary_similarity(five, five, 2) == 1.0);

    // Partial credit in B never exceeds the full credit of B-F1.
    for (unsigned r = 1; r < 64; ++r) {
        const auto ref = subset(r, 6);
        std::vector<std::size_t> hyp;
        for (auto g : ref) hyp.push_back(g + 1);
        const auto m = match_boundaries(ref, hyp, 2);
        if (m.transpositions.empty() || !m.misses.empty() || !m.false_alarms.empty()) continue;
        CHECK(boundary_similarity(m, 2) <= boundary_f1(m).f1);
    }
}

TEST_CASE("evaluate_document") {
    const auto perfect = evaluate_document(doc_of({{3, 3}}), {{3, 3}});
    CHECK(perfect.pk == 0.0);
    CHECK(perfect.wd == 0.0);
    CHECK(perfect.bf1 == 1.0);
    CHECK(perfect.b == 1.0);

    const auto miss = evaluate_document(doc_of({{3, 3}}), {{6}});
    CHECK(miss.pk == frozen::kPk33vs6);
    CHECK(miss.wd == frozen::kWd33vs6);
    CHECK(miss.bf1 == 0.0);
    CHECK(miss.b == 0.0);

    const auto single = evaluate_document(doc_of({{1}}), {{1}});
    CHECK(single.skipped);
    CHECK(single.pk == 0.0);
    CHECK(single.bf1 == 1.0);
    CHECK(single.b == 1.0);

    MetricConfig fixed;
    fixed.k_override = 3;
    CHECK(evaluate_document(doc_of({{3, 3}}), {{6}}, fixed).pk == oracle::pk({{3, 3}}, {{6}}, 3));
    CHECK_THROWS_AS(evaluate_document(doc_of({{3, 3}}), {{5}}), ValidationError);

    std::mt19937_64 rng(2);
    for (int t = 0; t < 300; ++t) {
        const auto s = oracle::random_segmentation(1 + rng() % 30, 0.3, rng);
        const auto m = evaluate_document(doc_of(s), s);
        CHECK(m.pk == 0.0);
        CHECK(m.wd == 0.0);
        CHECK(m.bf1 == 1.0);
        CHECK(m.b == 1.0);
    }
}

TEST_CASE("macro_average") {
    DocMetrics a, b;
    a.doc_id = "a";
    a.pk = 0.1;
    b.doc_id = "b";
    b.pk = 0.3;
    std::vector<DocMetrics> v{a, b};
    CHECK(macro_average(v).pk == doctest::Approx(0.2).epsilon(1e-15));
    std::vector<DocMetrics> rev{b, a};
    CHECK(macro_average(rev).pk == macro_average(v).pk);
    std::vector<DocMetrics> one{a};
    CHECK(macro_average(one).pk == 0.1);
    b.skipped = true;
    std::vector<DocMetrics> skip{a, b};
    const auto m = macro_average(skip);
    CHECK(m.pk == 0.1);
    CHECK(m.pk_documents == 1);
    CHECK(m.documents == 2);
    CHECK_THROWS_AS(macro_average(std::vector<DocMetrics>{}), ValidationError);
}
