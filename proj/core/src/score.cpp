#include "galign/score.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "galign/errors.hpp"

namespace galign {

namespace {

struct DimTerms {
    double log_term;  // -log(1 - rho^2) / 2
    double quad;      // rho^2 / (2 (1 - rho^2))
    double cross;     // rho / (1 - rho^2)
};

std::vector<DimTerms> per_dim_terms(const std::vector<double>& rho) {
    std::vector<DimTerms> terms;
    terms.reserve(rho.size());
    for (double r : rho) {
        if (std::abs(r) >= 1.0) {
            std::ostringstream msg;
            msg << "correlation " << r << " must have magnitude below 1";
            throw DomainError(msg.str());
        }
        double one_minus = 1.0 - r * r;
        terms.push_back({-0.5 * std::log1p(-r * r), r * r / (2.0 * one_minus), r / one_minus});
    }
    return terms;
}

void check_columns(Eigen::Index cols, std::size_t dims, const char* side) {
    if (cols != static_cast<Eigen::Index>(dims)) {
        std::ostringstream msg;
        msg << side << " has " << cols << " columns, expected " << dims;
        throw DimensionMismatch(msg.str());
    }
}

}  // namespace

ScoreMatrix info_density_canonical(const DatabasePair& db, const std::vector<double>& rho) {
    check_columns(db.a.cols(), rho.size(), "side a");
    check_columns(db.b.cols(), rho.size(), "side b");
    auto terms = per_dim_terms(rho);
    auto dims = static_cast<Eigen::Index>(rho.size());

    // Row-major copies so the inner dimension loop is contiguous.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a = db.a;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> b = db.b;

    ScoreMatrix g(a.rows(), b.rows());
    for (Eigen::Index u = 0; u < a.rows(); ++u) {
        const double* x = a.row(u).data();
        for (Eigen::Index v = 0; v < b.rows(); ++v) {
            const double* y = b.row(v).data();
            long double acc = 0.0L;
            for (Eigen::Index i = 0; i < dims; ++i) {
                const DimTerms& t = terms[static_cast<std::size_t>(i)];
                acc += t.log_term - t.quad * (x[i] * x[i] + y[i] * y[i]) + t.cross * x[i] * y[i];
            }
            g(u, v) = static_cast<double>(acc);
        }
    }
    return g;
}

Eigen::VectorXd info_density_rowwise(const Eigen::MatrixXd& x_rows, const Eigen::MatrixXd& y_rows,
                                     const std::vector<double>& rho) {
    if (x_rows.rows() != y_rows.rows()) throw DimensionMismatch("row counts differ");
    check_columns(x_rows.cols(), rho.size(), "side a");
    check_columns(y_rows.cols(), rho.size(), "side b");
    auto terms = per_dim_terms(rho);

    Eigen::VectorXd out(x_rows.rows());
    for (Eigen::Index r = 0; r < x_rows.rows(); ++r) {
        long double acc = 0.0L;
        for (Eigen::Index i = 0; i < x_rows.cols(); ++i) {
            const DimTerms& t = terms[static_cast<std::size_t>(i)];
            double x = x_rows(r, i), y = y_rows(r, i);
            acc += t.log_term - t.quad * (x * x + y * y) + t.cross * x * y;
        }
        out(r) = static_cast<double>(acc);
    }
    return out;
}

ScoreMatrix info_density_raw(const Eigen::MatrixXd& a_raw, const Eigen::MatrixXd& b_raw,
                             const CorrelationModel& model) {
    auto da = model.sigma_a.rows();
    auto db_dim = model.sigma_b.rows();
    if (model.sigma_a.cols() != da || model.sigma_b.cols() != db_dim ||
        model.sigma_ab.rows() != da || model.sigma_ab.cols() != db_dim ||
        model.mu_a.size() != da || model.mu_b.size() != db_dim) {
        throw DimensionMismatch("inconsistent model dimensions");
    }
    check_columns(a_raw.cols(), static_cast<std::size_t>(da), "side a");
    check_columns(b_raw.cols(), static_cast<std::size_t>(db_dim), "side b");

    auto cholesky = [](const Eigen::MatrixXd& m, const char* name) {
        Eigen::LLT<Eigen::MatrixXd> llt(m);
        if (llt.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << name << " is not positive definite";
            throw NotPositiveDefinite(msg.str());
        }
        return llt;
    };
    auto log_det = [](const Eigen::LLT<Eigen::MatrixXd>& llt) {
        return 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    };

    auto llt_a = cholesky(model.sigma_a, "sigma_a");
    auto llt_b = cholesky(model.sigma_b, "sigma_b");
    Eigen::MatrixXd joint(da + db_dim, da + db_dim);
    joint.topLeftCorner(da, da) = model.sigma_a;
    joint.topRightCorner(da, db_dim) = model.sigma_ab;
    joint.bottomLeftCorner(db_dim, da) = model.sigma_ab.transpose();
    joint.bottomRightCorner(db_dim, db_dim) = model.sigma_b;
    auto llt_j = cholesky(joint, "joint covariance");

    double log_det_term = 0.5 * (log_det(llt_a) + log_det(llt_b) - log_det(llt_j));

    // Centered samples, one column per user.
    Eigen::MatrixXd xc = (a_raw.rowwise() - model.mu_a.transpose()).transpose();
    Eigen::MatrixXd yc = (b_raw.rowwise() - model.mu_b.transpose()).transpose();

    Eigen::VectorXd q_a = llt_a.matrixL().solve(xc).colwise().squaredNorm();
    Eigen::VectorXd q_b = llt_b.matrixL().solve(yc).colwise().squaredNorm();

    // q_joint(x, y) = x' K11 x + 2 x' K12 y + y' K22 y with K the joint inverse.
    Eigen::MatrixXd k = llt_j.solve(Eigen::MatrixXd::Identity(da + db_dim, da + db_dim));
    Eigen::MatrixXd k11 = k.topLeftCorner(da, da);
    Eigen::MatrixXd k12 = k.topRightCorner(da, db_dim);
    Eigen::MatrixXd k22 = k.bottomRightCorner(db_dim, db_dim);

    Eigen::VectorXd qj_a = (xc.array() * (k11 * xc).array()).colwise().sum();
    Eigen::VectorXd qj_b = (yc.array() * (k22 * yc).array()).colwise().sum();
    Eigen::MatrixXd cross = xc.transpose() * (k12 * yc);

    ScoreMatrix g(a_raw.rows(), b_raw.rows());
    for (Eigen::Index u = 0; u < g.rows(); ++u) {
        for (Eigen::Index v = 0; v < g.cols(); ++v) {
            g(u, v) = log_det_term +
                      0.5 * (q_a(u) + q_b(v) - (qj_a(u) + qj_b(v) + 2.0 * cross(u, v)));
        }
    }
    return g;
}

ScoreMatrix planted_score(const PlantedInstance& inst) {
    return inst.mu * inst.w.array() - inst.mu * inst.mu / 2.0;
}

}  // namespace galign
