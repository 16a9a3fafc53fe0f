#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qenergy {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace tol {
inline constexpr double hermitian = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double eigen_clamp = 1e-10;
inline constexpr double unitary = 1e-9;
}  // namespace tol

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double eps = tol::hermitian) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= eps;
}

inline bool is_unitary(const ComplexMatrix& u, double eps = tol::unitary) {
    if (u.rows() != u.cols()) return false;
    const auto n = u.rows();
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n)) <= eps;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Largest singular value.
inline double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

// Spectral data of a Hermitian matrix, eigenvalues ascending.
struct Spectrum {
    RealVector values;
    ComplexMatrix vectors;
};

inline Spectrum hermitian_spectrum(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

class DensityOperator {
public:
    explicit DensityOperator(const ComplexMatrix& m) {
        if (m.rows() == 0 || m.rows() != m.cols())
            throw ValidationError("density operator must be a non-empty square matrix");
        if (!is_hermitian(m))
            throw ValidationError("density operator is not Hermitian");
        const cplx tr = m.trace();
        if (std::abs(tr.real() - 1.0) > tol::trace || std::abs(tr.imag()) > tol::trace)
            throw ValidationError("density operator trace is " + std::to_string(tr.real()));
        matrix_ = 0.5 * (m + m.adjoint());
        auto sp = hermitian_spectrum(matrix_);
        for (Eigen::Index i = 0; i < sp.values.size(); ++i) {
            double& v = sp.values(i);
            if (v < -tol::eigen_clamp)
                throw ValidationError("density operator has eigenvalue " + std::to_string(v));
            if (v < 0.0) v = 0.0;
        }
        spectrum_ = std::move(sp);
    }

    static DensityOperator from_diagonal(const std::vector<double>& p) {
        ComplexMatrix m = ComplexMatrix::Zero(p.size(), p.size());
        for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
        return DensityOperator(m);
    }

    static DensityOperator basis(std::size_t dim, std::size_t k) {
        if (k >= dim) throw std::out_of_range("basis index out of range");
        ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
        m(k, k) = 1.0;
        return DensityOperator(m);
    }

    static DensityOperator maximally_mixed(std::size_t dim) {
        return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    static DensityOperator pure(const ComplexVector& psi) {
        const double n = psi.norm();
        if (n == 0.0) throw ValidationError("zero state vector");
        ComplexVector v = psi / n;
        return DensityOperator(v * v.adjoint());
    }

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const RealVector& eigenvalues() const { return spectrum_.values; }
    const ComplexMatrix& eigenvectors() const { return spectrum_.vectors; }
    double min_eigenvalue() const { return spectrum_.values(0); }
    double population(std::size_t k) const { return matrix_(k, k).real(); }

private:
    ComplexMatrix matrix_;
    Spectrum spectrum_;
};

class Hamiltonian {
public:
    explicit Hamiltonian(const ComplexMatrix& m) {
        if (m.rows() == 0 || m.rows() != m.cols())
            throw ValidationError("Hamiltonian must be a non-empty square matrix");
        if (!is_hermitian(m)) throw ValidationError("Hamiltonian is not Hermitian");
        matrix_ = 0.5 * (m + m.adjoint());
        auto sp = hermitian_spectrum(matrix_);
        if (sp.values(0) < -tol::hermitian)
            throw ValidationError("Hamiltonian is not positive semidefinite");
        norm_ = std::max(std::abs(sp.values(0)), std::abs(sp.values(sp.values.size() - 1)));
    }

    static Hamiltonian qubit(double gap) {
        ComplexMatrix m = ComplexMatrix::Zero(2, 2);
        m(1, 1) = gap;
        return Hamiltonian(m);
    }

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }
    double norm() const { return norm_; }
    double expectation(const DensityOperator& rho) const {
        return (matrix_ * rho.matrix()).trace().real();
    }

private:
    ComplexMatrix matrix_;
    double norm_ = 0.0;
};

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline double shannon_entropy(const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p) s -= xlogx(x);
    return s;
}

inline double binary_entropy(double p) { return -xlogx(p) - xlogx(1.0 - p); }

inline double von_neumann_entropy(const DensityOperator& rho) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) s -= xlogx(rho.eigenvalues()(i));
    return s;
}

// Support threshold for relative entropy; eigenvalues at or below are treated as zero.
inline constexpr double support_eps = 1e-12;

inline double quantum_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("dimension mismatch");
    const auto& lr = rho.eigenvalues();
    const auto& ls = sigma.eigenvalues();
    // overlap(i, j) = |<r_i|s_j>|^2
    const Eigen::MatrixXd overlap =
        (rho.eigenvectors().adjoint() * sigma.eigenvectors()).cwiseAbs2();
    double d = 0.0;
    for (Eigen::Index i = 0; i < lr.size(); ++i) {
        if (lr(i) <= support_eps) continue;
        d += lr(i) * std::log(lr(i));
        for (Eigen::Index j = 0; j < ls.size(); ++j) {
            const double w = lr(i) * overlap(i, j);
            if (w <= support_eps * support_eps) continue;
            if (ls(j) <= support_eps) return std::numeric_limits<double>::infinity();
            d -= w * std::log(ls(j));
        }
    }
    return std::max(d, 0.0);
}

inline ComplexMatrix matrix_logarithm(const DensityOperator& rho, double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("log floor must be positive");
    const auto& v = rho.eigenvectors();
    RealVector l = rho.eigenvalues().unaryExpr([floor](double x) { return std::log(std::max(x, floor)); });
    return v * l.cast<cplx>().asDiagonal() * v.adjoint();
}

inline double fidelity_to_pure(const DensityOperator& rho, std::size_t k) {
    if (k >= rho.dim()) throw std::out_of_range("basis index out of range");
    return std::clamp(rho.population(k), 0.0, 1.0);
}

inline DensityOperator apply_unitary(const DensityOperator& rho, const ComplexMatrix& u) {
    if (static_cast<std::size_t>(u.rows()) != rho.dim()) throw std::invalid_argument("dimension mismatch");
    if (!is_unitary(u)) throw ValidationError("operator is not unitary");
    return DensityOperator(u * rho.matrix() * u.adjoint());
}

// Subsystem 0 is the most significant digit of the flat index.
inline ComplexMatrix partial_trace_matrix(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                          const std::vector<std::size_t>& keep) {
    if (dims.empty()) throw std::invalid_argument("empty subsystem list");
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) throw std::invalid_argument("zero subsystem dimension");
        total *= d;
    }
    if (total != static_cast<std::size_t>(m.rows()))
        throw std::invalid_argument("subsystem dimensions do not multiply to the matrix size");
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size()) throw std::invalid_argument("kept subsystem index out of range");
        if (kept[k]) throw std::invalid_argument("kept subsystem listed twice");
        kept[k] = true;
    }
    const std::size_t n = dims.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t i = n - 1; i-- > 0;) stride[i] = stride[i + 1] * dims[i + 1];

    std::vector<std::size_t> kdims, tdims, kstride, tstride;
    for (std::size_t i = 0; i < n; ++i) {
        if (kept[i]) {
            kdims.push_back(dims[i]);
            kstride.push_back(stride[i]);
        } else {
            tdims.push_back(dims[i]);
            tstride.push_back(stride[i]);
        }
    }
    // keep order follows subsystem order, not the order in `keep`
    auto flat = [](std::size_t idx, const std::vector<std::size_t>& ds, const std::vector<std::size_t>& st) {
        std::size_t off = 0;
        for (std::size_t i = ds.size(); i-- > 0;) {
            off += (idx % ds[i]) * st[i];
            idx /= ds[i];
        }
        return off;
    };
    const std::size_t kd = std::accumulate(kdims.begin(), kdims.end(), std::size_t{1}, std::multiplies<>());
    const std::size_t td = std::accumulate(tdims.begin(), tdims.end(), std::size_t{1}, std::multiplies<>());
    std::vector<std::size_t> koff(kd), toff(td);
    for (std::size_t i = 0; i < kd; ++i) koff[i] = flat(i, kdims, kstride);
    for (std::size_t i = 0; i < td; ++i) toff[i] = flat(i, tdims, tstride);

    ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
    for (std::size_t a = 0; a < kd; ++a)
        for (std::size_t b = 0; b < kd; ++b) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < td; ++t) acc += m(koff[a] + toff[t], koff[b] + toff[t]);
            out(a, b) = acc;
        }
    return out;
}

inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::size_t>& dims,
                                     const std::vector<std::size_t>& keep) {
    return DensityOperator(partial_trace_matrix(rho.matrix(), dims, keep));
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    return DensityOperator(kron(a.matrix(), b.matrix()));
}

}  // namespace qenergy
