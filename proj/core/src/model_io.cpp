#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "galign/errors.hpp"
#include "galign/model.hpp"

namespace galign {

namespace {

// Token stream with '#' line comments.
std::vector<std::string> tokenize(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    return tokens;
}

bool is_key(const std::string& tok) {
    return !tok.empty() && (std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_');
}

double to_double(const std::string& tok) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw ParseError("trailing characters in number '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError("expected a number, got '" + tok + "'");
    } catch (const std::out_of_range&) {
        throw ParseError("number out of range: '" + tok + "'");
    }
}

}  // namespace

CorrelationModel parse_model(std::istream& in) {
    static const char* known[] = {"dim_a", "dim_b", "mu_a", "mu_b", "sigma_a", "sigma_b", "sigma_ab"};

    std::map<std::string, std::vector<double>> fields;
    auto tokens = tokenize(in);
    std::size_t i = 0;
    while (i < tokens.size()) {
        const std::string& key = tokens[i];
        if (!is_key(key)) throw ParseError("expected a key, got '" + key + "'");
        bool recognized = false;
        for (const char* k : known) recognized = recognized || key == k;
        if (!recognized) throw ParseError("unknown key '" + key + "'");
        if (fields.count(key)) throw ParseError("duplicate key '" + key + "'");
        ++i;
        std::vector<double> values;
        while (i < tokens.size() && !is_key(tokens[i])) values.push_back(to_double(tokens[i++]));
        if (values.empty()) throw ParseError("key '" + key + "' has no values");
        fields[key] = std::move(values);
    }

    auto require = [&](const std::string& key) -> const std::vector<double>& {
        auto it = fields.find(key);
        if (it == fields.end()) throw ParseError("missing key '" + key + "'");
        return it->second;
    };
    auto as_size = [](const std::vector<double>& v, const std::string& key) {
        if (v.size() != 1 || v[0] < 1 || v[0] != static_cast<std::size_t>(v[0])) {
            throw ParseError("key '" + key + "' must be a single positive integer");
        }
        return static_cast<std::size_t>(v[0]);
    };

    std::size_t da = as_size(require("dim_a"), "dim_a");
    std::size_t db = as_size(require("dim_b"), "dim_b");

    auto matrix = [&](const std::string& key, std::size_t rows, std::size_t cols) {
        const auto& v = require(key);
        if (v.size() != rows * cols) {
            std::ostringstream msg;
            msg << "key '" << key << "' needs " << rows * cols << " values (row-major " << rows
                << "x" << cols << "), got " << v.size();
            throw ParseError(msg.str());
        }
        Eigen::MatrixXd m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
        return m;
    };
    auto vector_or_zero = [&](const std::string& key, std::size_t size) {
        auto it = fields.find(key);
        if (it == fields.end()) return Eigen::VectorXd(Eigen::VectorXd::Zero(size));
        if (it->second.size() != size) {
            std::ostringstream msg;
            msg << "key '" << key << "' needs " << size << " values, got " << it->second.size();
            throw ParseError(msg.str());
        }
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(it->second.data(), size));
    };

    CorrelationModel model;
    model.sigma_a = matrix("sigma_a", da, da);
    model.sigma_b = matrix("sigma_b", db, db);
    model.sigma_ab = matrix("sigma_ab", da, db);
    model.mu_a = vector_or_zero("mu_a", da);
    model.mu_b = vector_or_zero("mu_b", db);
    return model;
}

CorrelationModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    return parse_model(in);
}

}  // namespace galign
