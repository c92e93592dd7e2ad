#pragma once

#include <Eigen/Dense>

#include <vector>

namespace fadecv {

/// Which quadrature of a mode is addressed.
enum class Quadrature { q, p };

/// Covariance matrix of an N-mode Gaussian state in shot-noise units.
///
/// Quadrature ordering is (q1, p1, ..., qN, pN) and the vacuum state is the
/// identity, so physical states satisfy nu_k >= 1 for every symplectic
/// eigenvalue. First moments are never tracked; no rate formula needs them.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;

    /// Wraps a 2N x 2N matrix, enforcing symmetry to a relative 1e-12.
    explicit CovarianceMatrix(Eigen::MatrixXd entries);

    static CovarianceMatrix vacuum(int modes);
    static CovarianceMatrix thermal(double omega, int modes);

    int modes() const { return static_cast<int>(m_.rows()) / 2; }
    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const { return m_; }

    double operator()(int r, int c) const { return m_(r, c); }

    /// 2x2 block coupling modes i and j (i == j gives the mode's own block).
    Eigen::Matrix2d mode_block(int i, int j) const;

    /// Direct sum with another state: modes of `other` are appended.
    CovarianceMatrix tensor(const CovarianceMatrix& other) const;

private:
    Eigen::MatrixXd m_;
};

/// Real symplectic transformation S with S Omega S^T = Omega.
class SymplecticMatrix {
public:
    /// Wraps a matrix, verifying the symplectic condition to 1e-12.
    explicit SymplecticMatrix(Eigen::MatrixXd entries);

    static SymplecticMatrix identity(int modes);

    int modes() const { return static_cast<int>(s_.rows()) / 2; }
    const Eigen::MatrixXd& matrix() const { return s_; }

private:
    struct unchecked_tag {};
    SymplecticMatrix(Eigen::MatrixXd entries, unchecked_tag) : s_(std::move(entries)) {}
    Eigen::MatrixXd s_;

    friend SymplecticMatrix beamsplitter(double, int, int, int);
};

/// Symplectic spectrum {nu_k}, descending, nu_k >= 1 for physical states.
struct SymplecticSpectrum {
    std::vector<double> values;

    double min() const;
    double max_deviation_from_one() const;
};

/// Standard symplectic form for N modes: 2x2 blocks [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int modes);

/// von Neumann entropy (bits) of a thermal symplectic eigenvalue z >= 1.
///
/// h(z) = ((z+1)/2) log2((z+1)/2) - ((z-1)/2) log2((z-1)/2), evaluated in a
/// cancellation-free arrangement; above z = 1e5 the asymptotic expansion
/// log2(z/2) + log2(e) - 1/(6 z^2 ln 2) takes over.
double entropy_h(double z);

/// Symplectic eigenvalues of a positive-definite covariance matrix: the
/// moduli of the eigenvalues of i*Omega*V, one per conjugate pair, descending.
SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& V);

/// Sum of entropy_h over the symplectic spectrum, in bits.
double von_neumann_entropy(const CovarianceMatrix& V);

/// Two-mode squeezed vacuum with EPR parameter mu >= 1:
/// [[mu I, c Z], [c Z, mu I]] with c = sqrt(mu^2 - 1), Z = diag(1, -1).
CovarianceMatrix tmsv_cm(double mu);

/// Beam splitter of transmissivity tau between modes i and j of an N-mode
/// system. Convention: x_i' = sqrt(tau) x_i + sqrt(1-tau) x_j and
/// x_j' = -sqrt(1-tau) x_i + sqrt(tau) x_j.
SymplecticMatrix beamsplitter(double tau, int mode_i, int mode_j, int modes);

/// S V S^T.
CovarianceMatrix apply_symplectic(const SymplecticMatrix& S, const CovarianceMatrix& V);

/// Principal submatrix on the kept modes (indices deduplicated and kept in
/// their original relative order).
CovarianceMatrix partial_trace(const CovarianceMatrix& V, const std::vector<int>& keep);

/// State of the remaining modes after a homodyne measurement of the given
/// quadrature of one mode: A - B (Pi C Pi)^+ B^T. The outcome value never
/// enters; Gaussian conditional covariances are outcome-independent.
CovarianceMatrix homodyne_condition(const CovarianceMatrix& V, int mode, Quadrature quad);

/// State of the remaining modes after heterodyning one mode:
/// A - B (C + I)^{-1} B^T.
CovarianceMatrix heterodyne_condition(const CovarianceMatrix& V, int mode);

/// True iff V is symmetric, positive definite and every symplectic
/// eigenvalue is >= 1 - 1e-9.
bool is_physical(const CovarianceMatrix& V);

/// Williamson normal form V = S diag(nu_1, nu_1, ..., nu_N, nu_N) S^T.
struct WilliamsonForm {
    Eigen::MatrixXd S;          // symplectic
    std::vector<double> nus;    // one per mode, matching S's mode order
};

WilliamsonForm williamson(const CovarianceMatrix& V);

/// Pure 2N-mode extension of an N-mode state: one TMSV partner per
/// symplectic eigenvalue, appended after the original modes.
CovarianceMatrix purify(const CovarianceMatrix& V);

} // namespace fadecv
