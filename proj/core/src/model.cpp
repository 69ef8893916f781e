#include "galign/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "galign/errors.hpp"

namespace galign {

namespace {

constexpr double kRankTolerance = 1e-12;      // relative to largest singular value
constexpr double kJointEigTolerance = 1e-10;  // relative to joint trace
constexpr double kSymmetryTolerance = 1e-9;

void check_symmetric(const Eigen::MatrixXd& m, const char* name) {
    double scale = 1.0 + m.cwiseAbs().maxCoeff();
    double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale) {
        std::ostringstream msg;
        msg << name << " is not symmetric (max asymmetry " << asym << ")";
        throw NotValidJoint(msg.str());
    }
}

void check_dims(const CorrelationModel& model) {
    auto da = model.sigma_a.rows();
    auto db = model.sigma_b.rows();
    if (model.sigma_a.cols() != da || model.sigma_b.cols() != db) {
        throw DimensionMismatch("marginal covariances must be square");
    }
    if (da == 0 || db == 0) throw DimensionMismatch("covariances must be nonempty");
    if (model.sigma_ab.rows() != da || model.sigma_ab.cols() != db) {
        std::ostringstream msg;
        msg << "sigma_ab must be " << da << "x" << db << ", got " << model.sigma_ab.rows() << "x"
            << model.sigma_ab.cols();
        throw DimensionMismatch(msg.str());
    }
    if (model.mu_a.size() != da || model.mu_b.size() != db) {
        throw DimensionMismatch("mean vectors must match covariance dimensions");
    }
}

Eigen::MatrixXd joint_covariance(const CorrelationModel& model) {
    auto da = model.sigma_a.rows();
    auto db = model.sigma_b.rows();
    Eigen::MatrixXd joint(da + db, da + db);
    joint.topLeftCorner(da, da) = model.sigma_a;
    joint.topRightCorner(da, db) = model.sigma_ab;
    joint.bottomLeftCorner(db, da) = model.sigma_ab.transpose();
    joint.bottomRightCorner(db, db) = model.sigma_b;
    return joint;
}

void validate_model(const CorrelationModel& model) {
    check_dims(model);
    check_symmetric(model.sigma_a, "sigma_a");
    check_symmetric(model.sigma_b, "sigma_b");
}

void check_joint_psd(const CorrelationModel& model) {
    Eigen::MatrixXd joint = joint_covariance(model);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(joint, Eigen::EigenvaluesOnly);
    double min_eig = eig.eigenvalues().minCoeff();
    if (min_eig < -kJointEigTolerance * joint.trace()) {
        std::ostringstream msg;
        msg << "joint covariance has negative eigenvalue " << min_eig;
        throw NotValidJoint(msg.str());
    }
}

Eigen::LLT<Eigen::MatrixXd> cholesky_or_throw(const Eigen::MatrixXd& m, const char* name) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << name << " is not positive definite";
        throw NotPositiveDefinite(msg.str());
    }
    return llt;
}

}  // namespace

Eigen::MatrixXd AffineMap::apply_rows(const Eigen::MatrixXd& rows) const {
    Eigen::MatrixXd out = rows * linear.transpose();
    out.rowwise() += offset.transpose();
    return out;
}

CanonicalForm canonicalize(const CorrelationModel& model) {
    validate_model(model);
    auto llt_a = cholesky_or_throw(model.sigma_a, "sigma_a");
    auto llt_b = cholesky_or_throw(model.sigma_b, "sigma_b");
    check_joint_psd(model);

    Eigen::MatrixXd la = llt_a.matrixL();
    Eigen::MatrixXd lb = llt_b.matrixL();

    // Whitened cross-covariance L_a^{-1} sigma_ab L_b^{-T}.
    Eigen::MatrixXd c = la.triangularView<Eigen::Lower>().solve(model.sigma_ab);
    c = lb.triangularView<Eigen::Lower>().solve(c.transpose()).transpose();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    double s_max = sv.size() > 0 ? sv(0) : 0.0;

    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) >= kRankTolerance * s_max && sv(i) > 0.0) ++keep;
    }
    for (Eigen::Index i = 0; i < keep; ++i) {
        if (sv(i) >= 1.0) {
            std::ostringstream msg;
            msg << "canonical correlation " << sv(i) << " is not below 1";
            throw NotValidJoint(msg.str());
        }
    }

    CanonicalForm out;
    out.correlation.rho.assign(sv.data(), sv.data() + keep);
    out.correlation.i_xy = mutual_information(out.correlation.rho);
    out.correlation.rho_max = keep > 0 ? sv(0) : 0.0;

    // t_a(x) = U_D^T L_a^{-1} (x - mu_a); the linear part is (L_a^{-T} U_D)^T.
    Eigen::MatrixXd lin_a =
        la.transpose().triangularView<Eigen::Upper>().solve(svd.matrixU().leftCols(keep)).transpose();
    Eigen::MatrixXd lin_b =
        lb.transpose().triangularView<Eigen::Upper>().solve(svd.matrixV().leftCols(keep)).transpose();
    out.transform.t_a.linear = lin_a;
    out.transform.t_a.offset = -lin_a * model.mu_a;
    out.transform.t_b.linear = lin_b;
    out.transform.t_b.offset = -lin_b * model.mu_b;
    return out;
}

double condition1_margin(const CorrelationModel& model) {
    validate_model(model);

    // Inverse square roots via eigendecomposition; independent of the
    // Cholesky/SVD route used by canonicalize.
    auto inv_sqrt = [](const Eigen::MatrixXd& m, const char* name) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
        if (eig.eigenvalues().minCoeff() <= 0.0) {
            std::ostringstream msg;
            msg << name << " is not positive definite";
            throw NotPositiveDefinite(msg.str());
        }
        Eigen::VectorXd inv_root = eig.eigenvalues().array().rsqrt();
        return Eigen::MatrixXd(eig.eigenvectors() * inv_root.asDiagonal() *
                               eig.eigenvectors().transpose());
    };
    Eigen::MatrixXd wa = inv_sqrt(model.sigma_a, "sigma_a");
    Eigen::MatrixXd wb = inv_sqrt(model.sigma_b, "sigma_b");
    check_joint_psd(model);

    Eigen::MatrixXd whitened = wa * model.sigma_ab * wb;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double mutual_information(const std::vector<double>& rho) {
    long double sum = 0.0L;
    for (double r : rho) {
        if (std::abs(r) >= 1.0) {
            std::ostringstream msg;
            msg << "correlation " << r << " must have magnitude below 1";
            throw DomainError(msg.str());
        }
        sum += -0.5L * std::log1p(static_cast<long double>(-r * r));
    }
    return static_cast<double>(sum);
}

ScorePairMoments score_moments(const std::vector<double>& rho) {
    ScorePairMoments m;
    m.true_mean = mutual_information(rho);
    long double true_var = 0.0L, false_shift = 0.0L, false_var = 0.0L;
    for (double r : rho) {
        long double r2 = static_cast<long double>(r) * r;
        long double one_minus = 1.0L - r2;
        true_var += r2;
        false_shift += r2 / one_minus;
        false_var += r2 * (1.0L + r2) / (one_minus * one_minus);
    }
    m.true_var = static_cast<double>(true_var);
    m.false_mean = static_cast<double>(static_cast<long double>(m.true_mean) - false_shift);
    m.false_var = static_cast<double>(false_var);
    return m;
}

}  // namespace galign
