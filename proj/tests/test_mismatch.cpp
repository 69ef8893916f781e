#include <doctest.h>

#include <cmath>
#include <vector>

#include "galign/errors.hpp"
#include "galign/mismatch.hpp"

using namespace galign;

namespace {

PartialMapping identity_mapping(std::size_t n, std::size_t n_v) {
    PartialMapping m;
    m.n_u = n;
    m.n_v = n_v;
    for (std::size_t i = 0; i < n; ++i) m.pairs.push_back({i, i});
    return m;
}

AlignmentEstimate estimate_of(EstimatorKind kind,
                              std::vector<std::pair<std::size_t, std::size_t>> pairs) {
    AlignmentEstimate est;
    est.kind = kind;
    est.pairs = std::move(pairs);
    return est;
}

}  // namespace

TEST_CASE("count_errors on injective estimates") {
    const PartialMapping truth = identity_mapping(3, 3);

    const MisalignmentReport clean =
        count_errors(estimate_of(EstimatorKind::ml, {{0, 0}, {1, 1}, {2, 2}}), truth);
    CHECK(clean.errors == 0);
    CHECK(clean.components.empty());

    const MisalignmentReport swapped =
        count_errors(estimate_of(EstimatorKind::ml, {{0, 1}, {1, 0}, {2, 2}}), truth);
    CHECK(swapped.errors == 2);
    REQUIRE(swapped.components.size() == 1);
    CHECK(swapped.components[0].kind == ElementaryKind::cycle);
    CHECK(swapped.components[0].size == 2);
}

TEST_CASE("count_errors on threshold relations") {
    const PartialMapping truth = identity_mapping(2, 2);

    const MisalignmentReport extra = count_errors(
        estimate_of(EstimatorKind::threshold, {{0, 0}, {0, 1}, {1, 1}}), truth);
    CHECK(extra.false_positives == 1);
    CHECK(extra.false_negatives == 0);
    CHECK(extra.errors == 1);

    const MisalignmentReport all = count_errors(
        estimate_of(EstimatorKind::threshold, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}), truth);
    CHECK(all.false_positives == 2);
    CHECK(all.errors == 2);

    const MisalignmentReport miss =
        count_errors(estimate_of(EstimatorKind::threshold, {}), truth);
    CHECK(miss.false_negatives == 2);
    CHECK(miss.errors == 2);
}

TEST_CASE("count_errors validates the estimate") {
    const PartialMapping truth = identity_mapping(2, 2);
    CHECK_THROWS_AS(count_errors(estimate_of(EstimatorKind::ml, {{0, 0}, {0, 1}}), truth),
                    ShapeError);
    CHECK_THROWS_AS(count_errors(estimate_of(EstimatorKind::ml, {{0, 0}, {5, 1}}), truth),
                    ShapeError);
}

TEST_CASE("decompose finds a single cycle") {
    const PartialMapping m1 = identity_mapping(3, 3);
    PartialMapping m2 = m1;
    m2.pairs = {{0, 1}, {1, 0}, {2, 2}};
    const auto comps = decompose(m1, m2);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].kind == ElementaryKind::cycle);
    CHECK(comps[0].size == 2);
    CHECK(comps[0].u_vertices == std::vector<std::size_t>{0, 1});
}

TEST_CASE("decompose finds an even path") {
    const PartialMapping m1 = identity_mapping(3, 4);
    PartialMapping m2 = m1;
    m2.pairs = {{0, 1}, {1, 2}, {2, 3}};
    const auto comps = decompose(m1, m2);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].kind == ElementaryKind::even_path);
    CHECK(comps[0].size == 3);
    CHECK(comps[0].u_vertices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("decompose pairs odd paths") {
    PartialMapping m1;
    m1.n_u = 2;
    m1.n_v = 2;
    m1.pairs = {{0, 0}};
    PartialMapping m2 = m1;
    m2.pairs = {{1, 1}};
    const auto comps = decompose(m1, m2);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].kind == ElementaryKind::odd_path_pair);
    CHECK(comps[0].size == 1);
}

TEST_CASE("decompose drops shared pairs and sorts components") {
    const PartialMapping m1 = identity_mapping(5, 5);
    PartialMapping m2 = m1;
    m2.pairs = {{0, 0}, {1, 2}, {2, 1}, {3, 4}, {4, 3}};
    const auto comps = decompose(m1, m2);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].u_vertices == std::vector<std::size_t>{1, 2});
    CHECK(comps[1].u_vertices == std::vector<std::size_t>{3, 4});
    CHECK(comps[0].kind == ElementaryKind::cycle);
    CHECK(comps[1].kind == ElementaryKind::cycle);
}

TEST_CASE("decompose requires equal sizes") {
    const PartialMapping m1 = identity_mapping(3, 3);
    PartialMapping m2 = m1;
    m2.pairs = {{0, 0}, {1, 1}};
    CHECK_THROWS_AS(decompose(m1, m2), SizeMismatch);
}

TEST_CASE("elementary count bounds reproduce pinned values") {
    const ElementaryCountBounds a = elementary_count_bounds(3, 0, 2);
    CHECK(a.type1 == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(a.type2 == 0.0);

    const ElementaryCountBounds b = elementary_count_bounds(4, 2, 1);
    CHECK(b.type1 == 0.0);
    CHECK(b.type2 == doctest::Approx(8.0).epsilon(1e-12));

    CHECK_THROWS_AS(elementary_count_bounds(0, 0, 1), DomainError);
    CHECK_THROWS_AS(elementary_count_bounds(3, 0, 0), DomainError);
}

TEST_CASE("misalignment count bound reproduces pinned values") {
    CHECK(misalignment_count_bound(5, 0, 2, 1.0) ==
          doctest::Approx(738.9056098930654).epsilon(1e-12));
    // The two branches agree where they meet (delta = c s).
    CHECK(misalignment_count_bound(4, 4, 2, 0.5) ==
          doctest::Approx(1064.0240782460146).epsilon(1e-9));
    CHECK_THROWS_AS(misalignment_count_bound(0, 0, 1, 1.0), DomainError);
    CHECK_THROWS_AS(misalignment_count_bound(3, 0, 0, 1.0), DomainError);
    CHECK_THROWS_AS(misalignment_count_bound(3, 0, 1, 0.0), DomainError);
}

TEST_CASE("exhaustive tallies for bijections of four") {
    const std::vector<MisalignmentTally> census = misalignment_census(4, 0);
    REQUIRE(census.size() == 5);
    CHECK(census[0].mappings == 1);
    CHECK(census[1].mappings == 0);
    CHECK(census[2].mappings == 6);
    CHECK(census[2].type1 == 6);
    CHECK(census[3].mappings == 8);
    CHECK(census[3].type1 == 8);
    CHECK(census[4].mappings == 9);
    CHECK(census[4].type1 == 6);
    for (const MisalignmentTally& t : census) {
        CHECK(t.type2 == 0);
        CHECK(t.type3 == 0);
    }
}

TEST_CASE("exhaustive tallies with an unmatched extra") {
    const MisalignmentTally one = enumerate_misalignments(2, 1, 1);
    CHECK(one.mappings == 2);
    CHECK(one.type1 == 0);
    CHECK(one.type2 == 2);

    const MisalignmentTally two = enumerate_misalignments(2, 1, 2);
    CHECK(two.mappings == 3);
    CHECK(two.type1 == 1);
    CHECK(two.type2 == 2);
}

TEST_CASE("tallies never exceed the closed-form bounds") {
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t s = 0; s <= 2; ++s) {
            const std::vector<MisalignmentTally> census = misalignment_census(n, s);
            for (std::size_t delta = 1; delta <= n; ++delta) {
                const MisalignmentTally& tally = census[delta];
                const ElementaryCountBounds bounds = elementary_count_bounds(n, s, delta);
                CHECK(static_cast<double>(tally.type1) <= bounds.type1 + 1e-9);
                CHECK(static_cast<double>(tally.type2) <= bounds.type2 + 1e-9);
                CHECK(tally.type3 == 0);
                for (double c : {0.5, 1.0, 2.0}) {
                    CHECK(static_cast<double>(tally.mappings) <=
                          misalignment_count_bound(n, s, delta, c) + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("exhaustive enumeration is guarded") {
    CHECK_THROWS_AS(enumerate_misalignments(7, 2, 2), TooLarge);
    CHECK_THROWS_AS(misalignment_census(9, 0), TooLarge);
}
