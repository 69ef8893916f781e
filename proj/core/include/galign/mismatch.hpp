#pragma once

#include <cstddef>
#include <vector>

#include "galign/estimators.hpp"
#include "galign/synth.hpp"

namespace galign {

enum class ElementaryKind { cycle, even_path, odd_path_pair };

std::string to_string(ElementaryKind kind);

// One connected component of the disagreement between two equal-size
// mappings: a cycle, an even path, or a pair of odd paths merged into a
// zero-sum unit. size counts the first mapping's pairs the component disturbs.
struct ElementaryMisalignment {
    ElementaryKind kind = ElementaryKind::cycle;
    std::vector<std::size_t> u_vertices;
    std::vector<std::size_t> v_vertices;
    std::size_t size = 0;
};

struct MisalignmentReport {
    std::size_t errors = 0;
    std::size_t false_positives = 0;  // threshold kind only
    std::size_t false_negatives = 0;  // threshold kind only
    std::vector<ElementaryMisalignment> components;
};

// Error accounting of an estimate against the planted truth.
//   ml / max-row: errors = #{u : est(u) differs from truth(u)}, counting u
//     mapped by exactly one side as a difference. Components are filled when
//     the estimate is injective and has the truth's size.
//   threshold: false_negatives = truth pairs missing from the relation,
//     false_positives = relation pairs outside the truth, errors = their sum.
// Throws ShapeError if the estimate references users outside the truth's
// sides or repeats a u for the injective kinds.
MisalignmentReport count_errors(const AlignmentEstimate& est, const PartialMapping& truth);

// Components of the union multigraph of m1 and m2 with shared pairs removed.
// Odd paths (one side heavier in m1, the other in m2) are paired by ascending
// smallest u-vertex. Requires |m1| = |m2| (SizeMismatch) and valid mappings
// (ShapeError). Components are sorted by smallest u-vertex.
std::vector<ElementaryMisalignment> decompose(const PartialMapping& m1, const PartialMapping& m2);

// Closed-form upper bounds on the number of distinct elementary
// misalignments of size delta among n matched users with s unmatched extras
// on the v side: type I (cycles) n^delta/delta for delta >= 2 and 0 for
// delta = 1; type II (even paths) s n^delta. Type III components cannot occur
// when every u is matched. Throws DomainError unless n >= 1 and delta >= 1.
struct ElementaryCountBounds {
    double type1 = 0.0;
    double type2 = 0.0;
};
ElementaryCountBounds elementary_count_bounds(std::size_t n, std::size_t s, std::size_t delta);

// Upper bound on the number of full injective mappings at misalignment
// distance delta from a fixed truth, split at delta = c s:
//   delta >= c s: exp(delta (1 + log n + log(1 + 1/c)))
//   delta <  c s: exp(delta (1 + log(n s / delta) + log(1 + c)))
// Throws DomainError unless n >= 1, delta >= 1 and c > 0.
double misalignment_count_bound(std::size_t n, std::size_t s, std::size_t delta, double c);

// Exact tallies at one misalignment distance, by exhaustive enumeration of
// all injective full mappings of n users into n+s slots against the identity
// truth. type1/type2/type3 count the mappings whose disagreement is a single
// elementary component of that kind. Guarded to n + s <= 8 (TooLarge).
struct MisalignmentTally {
    std::size_t mappings = 0;
    std::size_t type1 = 0;
    std::size_t type2 = 0;
    std::size_t type3 = 0;
};
MisalignmentTally enumerate_misalignments(std::size_t n, std::size_t s, std::size_t delta);

// All distances at once (index = delta, 0..n).
std::vector<MisalignmentTally> misalignment_census(std::size_t n, std::size_t s);

}  // namespace galign
