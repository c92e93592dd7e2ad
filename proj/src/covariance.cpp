#include "fadecv/covariance.hpp"
#include "fadecv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fadecv {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPhysicalTol = 1e-9;    // allowed dip of nu below 1
constexpr double kPairingTol = 1e-9;     // relative mismatch inside a +/- i nu pair
constexpr double kSchurRankTol = 1e-12;  // relative pseudo-inverse threshold
constexpr double kEntropySwitch = 1e5;   // asymptotic branch of entropy_h

void check_even_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
        std::ostringstream os;
        os << what << ": expected a nonempty 2N x 2N matrix, got " << m.rows() << " x "
           << m.cols();
        throw dimension_error(os.str());
    }
}

} // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    check_even_square(m_, "CovarianceMatrix");
    const double scale = m_.cwiseAbs().maxCoeff();
    const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * std::max(scale, 1.0))
        throw invalid_state_error("CovarianceMatrix: input is not symmetric");
    m_ = 0.5 * (m_ + m_.transpose().eval());
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
    if (modes < 1)
        throw dimension_error("vacuum: need at least one mode");
    return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

CovarianceMatrix CovarianceMatrix::thermal(double omega, int modes) {
    if (omega < 1.0)
        throw domain_error("thermal: omega must be >= 1");
    if (modes < 1)
        throw dimension_error("thermal: need at least one mode");
    return CovarianceMatrix(omega * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

Eigen::Matrix2d CovarianceMatrix::mode_block(int i, int j) const {
    if (i < 0 || j < 0 || i >= modes() || j >= modes())
        throw dimension_error("mode_block: mode index out of range");
    return m_.block<2, 2>(2 * i, 2 * j);
}

CovarianceMatrix CovarianceMatrix::tensor(const CovarianceMatrix& other) const {
    const int d1 = dim();
    const int d2 = other.dim();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d1 + d2, d1 + d2);
    out.topLeftCorner(d1, d1) = m_;
    out.bottomRightCorner(d2, d2) = other.m_;
    return CovarianceMatrix(std::move(out));
}

Eigen::MatrixXd symplectic_form(int modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd entries) : s_(std::move(entries)) {
    check_even_square(s_, "SymplecticMatrix");
    const Eigen::MatrixXd omega = symplectic_form(modes());
    const double defect = (s_ * omega * s_.transpose() - omega).cwiseAbs().maxCoeff();
    if (defect > kSymmetryTol * std::max(1.0, s_.cwiseAbs().maxCoeff()))
        throw invalid_state_error("SymplecticMatrix: S Omega S^T != Omega");
}

SymplecticMatrix SymplecticMatrix::identity(int modes) {
    if (modes < 1)
        throw dimension_error("SymplecticMatrix::identity: need at least one mode");
    return SymplecticMatrix(Eigen::MatrixXd::Identity(2 * modes, 2 * modes), unchecked_tag{});
}

double SymplecticSpectrum::min() const {
    if (values.empty())
        throw dimension_error("SymplecticSpectrum: empty spectrum");
    return values.back();
}

double SymplecticSpectrum::max_deviation_from_one() const {
    double dev = 0.0;
    for (double v : values)
        dev = std::max(dev, std::abs(v - 1.0));
    return dev;
}

double entropy_h(double z) {
    if (std::isnan(z) || z < 1.0)
        throw domain_error("entropy_h: eigenvalue below 1 is unphysical");
    if (z == 1.0)
        return 0.0;
    if (z >= kEntropySwitch) {
        // log2(z/2) + log2(e) - 1/(6 z^2 ln2), accurate to O(z^-4)
        return std::log2(0.5 * z) + std::numbers::log2e - 1.0 / (6.0 * z * z * std::numbers::ln2);
    }
    // h(z) = g(n) with n = (z-1)/2 mean photons:
    // g(n) = log2(n+1) + n*log2(1 + 1/n). Both terms are positive; no
    // large cancelling products at any z.
    const double n = 0.5 * (z - 1.0);
    return std::log2(n + 1.0) + n * std::log1p(1.0 / n) / std::numbers::ln2;
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& V) {
    const int n = V.modes();
    Eigen::LLT<Eigen::MatrixXd> llt(V.matrix());
    if (llt.info() != Eigen::Success)
        throw invalid_state_error("symplectic_eigenvalues: matrix is not positive definite");

    // i Omega V is similar to the Hermitian i L^T Omega L, so the moduli of
    // its eigenvalues are the singular values of the real antisymmetric
    // A = L^T Omega L. Working with A keeps the absolute error near
    // ||V|| * eps even for strongly squeezed states.
    const Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd a = l.transpose() * symplectic_form(n) * l;
    a = 0.5 * (a - a.transpose().eval());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);

    std::vector<double> mods(static_cast<std::size_t>(2 * n));
    for (int k = 0; k < 2 * n; ++k)
        mods[static_cast<std::size_t>(k)] = svd.singularValues()(k);
    std::sort(mods.begin(), mods.end(), std::greater<double>());

    SymplecticSpectrum spec;
    spec.values.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double a1 = mods[static_cast<std::size_t>(2 * k)];
        const double a2 = mods[static_cast<std::size_t>(2 * k + 1)];
        if (std::abs(a1 - a2) > kPairingTol * std::max(1.0, a1))
            throw invalid_state_error(
                "symplectic_eigenvalues: could not pair +/- i nu eigenvalues");
        spec.values.push_back(0.5 * (a1 + a2));
    }
    return spec;
}

double von_neumann_entropy(const CovarianceMatrix& V) {
    const SymplecticSpectrum spec = symplectic_eigenvalues(V);
    // Storing a strongly squeezed pure state rounds its unit eigenvalues at
    // the ||V||^2 * eps level, so the physicality clamp must scale with the
    // matrix norm.
    const double scale = V.matrix().cwiseAbs().maxCoeff();
    const double tol = std::max(
        kPhysicalTol, 8.0 * std::numeric_limits<double>::epsilon() * scale * scale);
    double s = 0.0;
    for (double nu : spec.values) {
        if (nu < 1.0 - tol)
            throw invalid_state_error("von_neumann_entropy: state violates the uncertainty bound");
        s += entropy_h(std::max(nu, 1.0));
    }
    return s;
}

CovarianceMatrix tmsv_cm(double mu) {
    if (std::isnan(mu) || mu < 1.0)
        throw domain_error("tmsv_cm: mu must be >= 1");
    const double c = std::sqrt(mu * mu - 1.0);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
    v.diagonal().setConstant(mu);
    v(0, 2) = v(2, 0) = c;
    v(1, 3) = v(3, 1) = -c;
    return CovarianceMatrix(std::move(v));
}

SymplecticMatrix beamsplitter(double tau, int mode_i, int mode_j, int modes) {
    if (std::isnan(tau) || tau < 0.0 || tau > 1.0)
        throw domain_error("beamsplitter: tau must lie in [0, 1]");
    if (mode_i < 0 || mode_j < 0 || mode_i >= modes || mode_j >= modes || mode_i == mode_j)
        throw dimension_error("beamsplitter: invalid mode indices");

    const double t = std::sqrt(tau);
    const double r = std::sqrt(1.0 - tau);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    for (int k = 0; k < 2; ++k) {
        s(2 * mode_i + k, 2 * mode_i + k) = t;
        s(2 * mode_i + k, 2 * mode_j + k) = r;
        s(2 * mode_j + k, 2 * mode_i + k) = -r;
        s(2 * mode_j + k, 2 * mode_j + k) = t;
    }
    return SymplecticMatrix(std::move(s), SymplecticMatrix::unchecked_tag{});
}

CovarianceMatrix apply_symplectic(const SymplecticMatrix& S, const CovarianceMatrix& V) {
    if (S.modes() != V.modes())
        throw dimension_error("apply_symplectic: mode counts differ");
    Eigen::MatrixXd out = S.matrix() * V.matrix() * S.matrix().transpose();
    out = 0.5 * (out + out.transpose().eval());
    return CovarianceMatrix(std::move(out));
}

CovarianceMatrix partial_trace(const CovarianceMatrix& V, const std::vector<int>& keep) {
    if (keep.empty())
        throw dimension_error("partial_trace: empty keep set");
    std::vector<int> idx = keep;
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int m : idx)
        if (m < 0 || m >= V.modes())
            throw dimension_error("partial_trace: mode index out of range");

    const int nk = static_cast<int>(idx.size());
    Eigen::MatrixXd out(2 * nk, 2 * nk);
    for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nk; ++b)
            out.block<2, 2>(2 * a, 2 * b) = V.matrix().block<2, 2>(2 * idx[a], 2 * idx[b]);
    return CovarianceMatrix(std::move(out));
}

namespace {

/// Splits V into the kept block A, the measured-mode block C and the cross
/// block B (kept rows, measured columns).
struct MeasurementSplit {
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    Eigen::Matrix2d c;
    std::vector<int> kept;
};

MeasurementSplit split_for_measurement(const CovarianceMatrix& V, int mode) {
    if (mode < 0 || mode >= V.modes())
        throw dimension_error("measurement: mode index out of range");
    if (V.modes() < 2)
        throw dimension_error("measurement: no modes would remain");

    MeasurementSplit sp;
    sp.kept.reserve(static_cast<std::size_t>(V.modes() - 1));
    for (int m = 0; m < V.modes(); ++m)
        if (m != mode)
            sp.kept.push_back(m);

    const int nk = static_cast<int>(sp.kept.size());
    sp.a.resize(2 * nk, 2 * nk);
    sp.b.resize(2 * nk, 2);
    for (int r = 0; r < nk; ++r) {
        for (int c = 0; c < nk; ++c)
            sp.a.block<2, 2>(2 * r, 2 * c) = V.matrix().block<2, 2>(2 * sp.kept[r], 2 * sp.kept[c]);
        sp.b.block<2, 2>(2 * r, 0) = V.matrix().block<2, 2>(2 * sp.kept[r], 2 * mode);
    }
    sp.c = V.matrix().block<2, 2>(2 * mode, 2 * mode);
    return sp;
}

} // namespace

CovarianceMatrix homodyne_condition(const CovarianceMatrix& V, int mode, Quadrature quad) {
    MeasurementSplit sp = split_for_measurement(V, mode);
    const int qi = (quad == Quadrature::q) ? 0 : 1;
    const double var = sp.c(qi, qi);
    const double scale = std::max({std::abs(sp.c(0, 0)), std::abs(sp.c(1, 1)), 1.0});
    if (var <= kSchurRankTol * scale)
        throw degenerate_measurement_error(
            "homodyne_condition: measured quadrature variance is numerically zero");

    const Eigen::VectorXd col = sp.b.col(qi);
    Eigen::MatrixXd out = sp.a - (col * col.transpose()) / var;
    out = 0.5 * (out + out.transpose().eval());
    return CovarianceMatrix(std::move(out));
}

CovarianceMatrix heterodyne_condition(const CovarianceMatrix& V, int mode) {
    MeasurementSplit sp = split_for_measurement(V, mode);
    const Eigen::Matrix2d cpi = sp.c + Eigen::Matrix2d::Identity();
    Eigen::MatrixXd out = sp.a - sp.b * cpi.inverse() * sp.b.transpose();
    out = 0.5 * (out + out.transpose().eval());
    return CovarianceMatrix(std::move(out));
}

bool is_physical(const CovarianceMatrix& V) {
    Eigen::LLT<Eigen::MatrixXd> llt(V.matrix());
    if (llt.info() != Eigen::Success)
        return false;
    try {
        return symplectic_eigenvalues(V).min() >= 1.0 - kPhysicalTol;
    } catch (const invalid_state_error&) {
        return false;
    }
}

WilliamsonForm williamson(const CovarianceMatrix& V) {
    const int n = V.modes();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> saes(V.matrix());
    if (saes.info() != Eigen::Success || saes.eigenvalues().minCoeff() <= 0.0)
        throw invalid_state_error("williamson: matrix is not positive definite");

    const Eigen::MatrixXd root = saes.operatorSqrt();
    const Eigen::MatrixXd k = root * symplectic_form(n) * root;

    Eigen::RealSchur<Eigen::MatrixXd> schur(k);
    if (schur.info() != Eigen::Success)
        throw invalid_state_error("williamson: Schur decomposition failed");
    Eigen::MatrixXd o = schur.matrixU();
    const Eigen::MatrixXd& t = schur.matrixT();

    // T is antisymmetric block diagonal; flip column pairs so each block is
    // nu_k * [[0,1],[-1,0]] with nu_k > 0, matching the Omega convention.
    std::vector<double> nus(static_cast<std::size_t>(n));
    for (int kblk = 0; kblk < n; ++kblk) {
        double b = t(2 * kblk, 2 * kblk + 1);
        if (b < 0.0) {
            o.col(2 * kblk).swap(o.col(2 * kblk + 1));
            b = -b;
        }
        nus[static_cast<std::size_t>(kblk)] = b;
    }

    Eigen::VectorXd dinv_sqrt(2 * n);
    for (int kblk = 0; kblk < n; ++kblk) {
        const double inv = 1.0 / std::sqrt(nus[static_cast<std::size_t>(kblk)]);
        dinv_sqrt(2 * kblk) = inv;
        dinv_sqrt(2 * kblk + 1) = inv;
    }

    WilliamsonForm form;
    form.S = root * o * dinv_sqrt.asDiagonal();
    form.nus = std::move(nus);
    return form;
}

CovarianceMatrix purify(const CovarianceMatrix& V) {
    const int n = V.modes();
    const WilliamsonForm wf = williamson(V);

    // (S (+) I) applied to a tensor product of TMSV(nu_k) pairs.
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::MatrixXd partner = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        const double nu = wf.nus[static_cast<std::size_t>(k)];
        const double c = std::sqrt(std::max(nu * nu - 1.0, 0.0));
        cross(2 * k, 2 * k) = c;
        cross(2 * k + 1, 2 * k + 1) = -c;
        partner(2 * k, 2 * k) = nu;
        partner(2 * k + 1, 2 * k + 1) = nu;
    }

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    out.topLeftCorner(2 * n, 2 * n) = V.matrix();
    out.topRightCorner(2 * n, 2 * n) = wf.S * cross;
    out.bottomLeftCorner(2 * n, 2 * n) = (wf.S * cross).transpose();
    out.bottomRightCorner(2 * n, 2 * n) = partner;
    return CovarianceMatrix(std::move(out));
}

} // namespace fadecv
