#pragma once

#include <complex>
#include <Eigen/Dense>

namespace wcl {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};

/// Spectral (operator) norm: largest singular value.
inline double operator_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.jacobiSvd().singularValues()(0);
}

inline bool is_hermitian(const CMatrix& a, double tol = 1e-12) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// (A - A†)/(2i), the anti-Hermitian part as a Hermitian matrix.
inline CMatrix imag_part(const CMatrix& a) {
    return (a - a.adjoint()) / (2.0 * I);
}

/// Column-major vec: stacks columns of a dim x dim matrix.
inline CVector vec(const CMatrix& x) {
    return Eigen::Map<const CVector>(x.data(), x.size());
}

inline CMatrix unvec(const CVector& v, Eigen::Index dim) {
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Matrix of the superoperator X -> A X B on column-major vec coordinates.
inline CMatrix sandwich_matrix(const CMatrix& a, const CMatrix& b) {
    return kron(b.transpose(), a);
}

}  // namespace wcl
