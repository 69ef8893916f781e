#include "galign/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "galign/errors.hpp"

namespace galign {

namespace {

void check_rho(const std::vector<double>& rho) {
    for (double r : rho) {
        if (std::abs(r) >= 1.0) {
            std::ostringstream msg;
            msg << "correlation " << r << " must have magnitude below 1";
            throw DomainError(msg.str());
        }
    }
}

// Shortest decimal that round-trips to the same double.
void put_double(std::ostream& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

void put_matrix(std::ostream& out, const char* name, const Eigen::MatrixXd& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            put_double(out, m(r, c));
        }
        out << '\n';
    }
}

std::string get_token(std::istream& in) {
    std::string tok;
    if (!(in >> tok)) throw ParseError("unexpected end of instance file");
    return tok;
}

void expect_token(std::istream& in, const std::string& want) {
    std::string tok = get_token(in);
    if (tok != want) throw ParseError("expected '" + want + "', got '" + tok + "'");
}

double get_double(std::istream& in) {
    std::string tok = get_token(in);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("expected a number, got '" + tok + "'");
    }
    return v;
}

std::size_t get_size(std::istream& in) {
    std::string tok = get_token(in);
    std::size_t v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("expected a nonnegative integer, got '" + tok + "'");
    }
    return v;
}

Eigen::MatrixXd get_matrix(std::istream& in, const char* name) {
    expect_token(in, name);
    std::size_t rows = get_size(in);
    std::size_t cols = get_size(in);
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = get_double(in);
    return m;
}

}  // namespace

void validate_mapping(const PartialMapping& mapping) {
    std::unordered_set<std::size_t> seen_v;
    std::size_t prev_u = 0;
    bool first = true;
    for (const auto& [u, v] : mapping.pairs) {
        if (u >= mapping.n_u || v >= mapping.n_v) {
            std::ostringstream msg;
            msg << "pair (" << u << ", " << v << ") out of range for " << mapping.n_u << "x"
                << mapping.n_v;
            throw ShapeError(msg.str());
        }
        if (!first && u <= prev_u) throw ShapeError("mapping pairs must have strictly increasing u");
        if (!seen_v.insert(v).second) throw ShapeError("mapping reuses a v index");
        prev_u = u;
        first = false;
    }
}

PartialMapping sample_mapping(std::size_t n_u, std::size_t n_v, std::size_t size, Rng& rng) {
    if (size > n_u || size > n_v) {
        std::ostringstream msg;
        msg << "mapping size " << size << " exceeds sides " << n_u << "x" << n_v;
        throw SizeError(msg.str());
    }

    // Uniform size-subset of U (sorted) paired with a uniform ordered
    // injection into V, both by partial Fisher-Yates.
    std::vector<std::size_t> us(n_u);
    std::iota(us.begin(), us.end(), 0);
    for (std::size_t i = 0; i < size; ++i) {
        std::swap(us[i], us[i + rng.below(n_u - i)]);
    }
    us.resize(size);
    std::sort(us.begin(), us.end());

    std::vector<std::size_t> vs(n_v);
    std::iota(vs.begin(), vs.end(), 0);
    for (std::size_t i = 0; i < size; ++i) {
        std::swap(vs[i], vs[i + rng.below(n_v - i)]);
    }

    PartialMapping mapping{n_u, n_v, {}};
    mapping.pairs.reserve(size);
    for (std::size_t i = 0; i < size; ++i) mapping.pairs.emplace_back(us[i], vs[i]);
    return mapping;
}

PartialMapping sample_mapping(std::size_t n_u, std::size_t n_v, std::size_t size,
                              std::uint64_t seed) {
    Rng rng(seed);
    return sample_mapping(n_u, n_v, size, rng);
}

DatabasePair sample_database_pair(const std::vector<double>& rho, const PartialMapping& mapping,
                                  Rng& rng) {
    check_rho(rho);
    validate_mapping(mapping);
    auto dims = static_cast<Eigen::Index>(rho.size());

    DatabasePair db;
    db.a.resize(static_cast<Eigen::Index>(mapping.n_u), dims);
    db.b.resize(static_cast<Eigen::Index>(mapping.n_v), dims);
    for (Eigen::Index r = 0; r < db.a.rows(); ++r)
        for (Eigen::Index c = 0; c < dims; ++c) db.a(r, c) = rng.normal();
    for (Eigen::Index r = 0; r < db.b.rows(); ++r)
        for (Eigen::Index c = 0; c < dims; ++c) db.b(r, c) = rng.normal();

    for (const auto& [u, v] : mapping.pairs) {
        for (Eigen::Index c = 0; c < dims; ++c) {
            double r = rho[static_cast<std::size_t>(c)];
            db.b(static_cast<Eigen::Index>(v), c) =
                r * db.a(static_cast<Eigen::Index>(u), c) +
                std::sqrt(1.0 - r * r) * db.b(static_cast<Eigen::Index>(v), c);
        }
    }
    return db;
}

DatabasePair sample_database_pair(const std::vector<double>& rho, const PartialMapping& mapping,
                                  std::uint64_t seed) {
    Rng rng(seed);
    return sample_database_pair(rho, mapping, rng);
}

PlantedInstance sample_planted(double mu, const PartialMapping& mapping, Rng& rng) {
    if (!(mu > 0.0)) {
        std::ostringstream msg;
        msg << "mu must be positive, got " << mu;
        throw DomainError(msg.str());
    }
    validate_mapping(mapping);

    PlantedInstance inst;
    inst.mu = mu;
    inst.truth = mapping;
    inst.w.resize(static_cast<Eigen::Index>(mapping.n_u), static_cast<Eigen::Index>(mapping.n_v));
    for (Eigen::Index r = 0; r < inst.w.rows(); ++r)
        for (Eigen::Index c = 0; c < inst.w.cols(); ++c) inst.w(r, c) = rng.normal();
    for (const auto& [u, v] : mapping.pairs) {
        inst.w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) += mu;
    }
    return inst;
}

PlantedInstance sample_planted(double mu, const PartialMapping& mapping, std::uint64_t seed) {
    Rng rng(seed);
    return sample_planted(mu, mapping, rng);
}

void write_mapping(std::ostream& out, const PartialMapping& mapping) {
    out << "mapping " << mapping.n_u << ' ' << mapping.n_v << ' ' << mapping.size() << '\n';
    for (const auto& [u, v] : mapping.pairs) out << u << ' ' << v << '\n';
}

PartialMapping read_mapping(std::istream& in) {
    expect_token(in, "mapping");
    PartialMapping mapping;
    mapping.n_u = get_size(in);
    mapping.n_v = get_size(in);
    std::size_t count = get_size(in);
    mapping.pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t u = get_size(in);
        std::size_t v = get_size(in);
        mapping.pairs.emplace_back(u, v);
    }
    validate_mapping(mapping);
    return mapping;
}

void write_database_pair(std::ostream& out, const DatabasePair& db) {
    out << "galign-database-pair v1\n";
    put_matrix(out, "a", db.a);
    put_matrix(out, "b", db.b);
}

DatabasePair read_database_pair(std::istream& in) {
    expect_token(in, "galign-database-pair");
    expect_token(in, "v1");
    DatabasePair db;
    db.a = get_matrix(in, "a");
    db.b = get_matrix(in, "b");
    if (db.a.cols() != db.b.cols()) throw ParseError("database sides disagree on dimension");
    return db;
}

void write_planted(std::ostream& out, const PlantedInstance& inst) {
    out << "galign-planted v1\n";
    out << "mu ";
    put_double(out, inst.mu);
    out << '\n';
    write_mapping(out, inst.truth);
    put_matrix(out, "w", inst.w);
}

PlantedInstance read_planted(std::istream& in) {
    expect_token(in, "galign-planted");
    expect_token(in, "v1");
    expect_token(in, "mu");
    PlantedInstance inst;
    inst.mu = get_double(in);
    inst.truth = read_mapping(in);
    inst.w = get_matrix(in, "w");
    if (inst.w.rows() != static_cast<Eigen::Index>(inst.truth.n_u) ||
        inst.w.cols() != static_cast<Eigen::Index>(inst.truth.n_v)) {
        throw ParseError("weight matrix shape disagrees with the mapping");
    }
    return inst;
}

void save_database_pair(const std::string& path, const DatabasePair& db) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_database_pair(out, db);
    if (!out) throw IoError("failed writing '" + path + "'");
}

void save_planted(const std::string& path, const PlantedInstance& inst) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_planted(out, inst);
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace galign
