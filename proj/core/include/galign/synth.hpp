#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "galign/rng.hpp"

namespace galign {

// Injective partial mapping from users of side A (u < n_u) to side B (v < n_v).
struct PartialMapping {
    std::size_t n_u = 0;
    std::size_t n_v = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    std::size_t size() const { return pairs.size(); }
};

// Throws ShapeError unless indices are in range, u strictly increasing across
// pairs, and the v side has no repeats.
void validate_mapping(const PartialMapping& mapping);

// Two feature databases in canonical coordinates: a is n_u x D, b is n_v x D.
struct DatabasePair {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
};

// Planted matching weights: w(u, v) ~ N(mu, 1) on mapped pairs, N(0, 1) off.
struct PlantedInstance {
    Eigen::MatrixXd w;
    double mu = 0.0;
    PartialMapping truth;
};

// Uniformly random injective mapping of the given size. Throws SizeError if
// size exceeds either side. The seed overloads are pure functions of their
// arguments; the Rng overloads consume the supplied stream.
PartialMapping sample_mapping(std::size_t n_u, std::size_t n_v, std::size_t size, Rng& rng);
PartialMapping sample_mapping(std::size_t n_u, std::size_t n_v, std::size_t size,
                              std::uint64_t seed);

// Canonical-coordinate databases with the given correlation spectrum: rows of
// a and the unmatched rows of b are iid standard normal; a matched row obeys
// b(v, i) = rho_i a(u, i) + sqrt(1 - rho_i^2) z. Throws DomainError if any
// |rho_i| >= 1, ShapeError on an invalid mapping.
DatabasePair sample_database_pair(const std::vector<double>& rho, const PartialMapping& mapping,
                                  Rng& rng);
DatabasePair sample_database_pair(const std::vector<double>& rho, const PartialMapping& mapping,
                                  std::uint64_t seed);

// Planted matching weight matrix. Throws DomainError unless mu > 0,
// ShapeError on an invalid mapping.
PlantedInstance sample_planted(double mu, const PartialMapping& mapping, Rng& rng);
PlantedInstance sample_planted(double mu, const PartialMapping& mapping, std::uint64_t seed);

// Text round-trip for sampled instances (exact: shortest round-trip decimal).
// Format documented in the README. Throws IoError / ParseError.
void write_mapping(std::ostream& out, const PartialMapping& mapping);
PartialMapping read_mapping(std::istream& in);
void write_database_pair(std::ostream& out, const DatabasePair& db);
DatabasePair read_database_pair(std::istream& in);
void write_planted(std::ostream& out, const PlantedInstance& inst);
PlantedInstance read_planted(std::istream& in);

void save_database_pair(const std::string& path, const DatabasePair& db);
void save_planted(const std::string& path, const PlantedInstance& inst);

}  // namespace galign
