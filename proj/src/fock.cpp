#include "wcl/fock.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "wcl/errors.hpp"

namespace wcl {

TruncatedFock::TruncatedFock(int modes, int cutoff, const CMatrix& gram)
    : modes_(modes), cutoff_(cutoff), gram_(gram) {
    if (modes < 1 || cutoff < 1) throw ModelError("TruncatedFock needs modes, cutoff >= 1");
    if (gram.rows() != modes || gram.cols() != modes)
        throw ModelError("Gram matrix must be modes x modes");
    if (!is_hermitian(gram, 1e-12)) throw ModelError("Gram matrix must be Hermitian");

    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, es.eigenvalues().maxCoeff()))
        throw ModelError("Gram matrix must be positive semidefinite");

    dim_ = 1;
    radix_.assign(modes, 0);
    for (int m = 0; m < modes; ++m) {
        radix_[m] = static_cast<int>(dim_);
        dim_ *= cutoff + 1;
        if (dim_ > (1 << 22)) throw CapacityError("truncated Fock dimension too large");
    }

    // Orthonormal single-mode ladder operators, then mix: with gram = F^dag F,
    // a_i = sum_k conj(F(k,i)) b_k gives [a_i, a_j^dag] = gram(i,j) below the cutoff.
    CMatrix factor = es.operatorSqrt();  // Hermitian square root, gram = factor^dag factor
    std::vector<CMatrix> ortho(modes);
    CMatrix lower = CMatrix::Zero(cutoff + 1, cutoff + 1);
    for (int k = 1; k <= cutoff; ++k) lower(k - 1, k) = std::sqrt(static_cast<double>(k));
    for (int m = 0; m < modes; ++m) {
        CMatrix op = CMatrix::Identity(1, 1);
        for (int j = 0; j < modes; ++j) {
            const CMatrix& block =
                (j == m) ? lower : CMatrix::Identity(cutoff + 1, cutoff + 1);
            op = kron(block, op);  // mode j varies with digit weight radix_[j]
        }
        ortho[m] = std::move(op);
    }
    annihilators_.assign(modes, CMatrix::Zero(dim_, dim_));
    for (int i = 0; i < modes; ++i)
        for (int k = 0; k < modes; ++k)
            annihilators_[i] += std::conj(factor(k, i)) * ortho[k];
}

CVector TruncatedFock::vacuum() const {
    CVector v = CVector::Zero(dim_);
    v(0) = 1.0;
    return v;
}

CMatrix TruncatedFock::ccr_defect(int i, int j) const {
    const CMatrix comm = annihilator(i) * creator(j) - creator(j) * annihilator(i);
    CMatrix defect = comm - gram_(i, j) * CMatrix::Identity(dim_, dim_);
    // Zero out rows/columns touching the truncation boundary.
    for (Eigen::Index idx = 0; idx < dim_; ++idx) {
        bool boundary = false;
        Eigen::Index rest = idx;
        for (int m = 0; m < modes_; ++m) {
            if (rest % (cutoff_ + 1) == cutoff_) boundary = true;
            rest /= (cutoff_ + 1);
        }
        if (boundary) {
            defect.row(idx).setZero();
            defect.col(idx).setZero();
        }
    }
    return defect;
}

Complex TruncatedFock::vacuum_moment(const std::vector<WordVertex>& word) const {
    const int n = static_cast<int>(word.size());
    if (cutoff_ < n)
        throw PrecisionError("vacuum_moment needs cutoff >= word length " +
                             std::to_string(n) + " to stay exact");
    CVector state = vacuum();
    for (const WordVertex& v : word) {  // vertex 1 (front) acts first
        if (v.beta) state = annihilator(v.g_id) * state;
        if (v.alpha) state = creator(v.f_id) * state;
    }
    return vacuum().dot(state);
}

CVector TruncatedFock::coherent_vector(const std::vector<Complex>& amplitudes,
                                       double tail_tol) const {
    if (static_cast<int>(amplitudes.size()) != modes_)
        throw ModelError("coherent_vector needs one amplitude per mode");
    CVector z(modes_);
    for (int m = 0; m < modes_; ++m) z(m) = amplitudes[m];
    const double norm2 = (z.adjoint() * gram_ * z)(0).real();
    // Poisson tail of the occupation distribution past the cutoff.
    double term = 1.0;
    double head = 0.0;
    for (int k = 0; k <= cutoff_; ++k) {
        head += term;
        term *= norm2 / static_cast<double>(k + 1);
    }
    const double tail = std::exp(norm2) - head;
    if (!(tail * std::exp(-norm2) < tail_tol)) {
        throw PrecisionError(
            "coherent amplitude too large for cutoff " + std::to_string(cutoff_) +
            "; increase the cutoff until the Poisson tail falls below tolerance");
    }
    CMatrix generator = CMatrix::Zero(dim_, dim_);
    for (int m = 0; m < modes_; ++m)
        generator += amplitudes[m] * creator(m) - std::conj(amplitudes[m]) * annihilator(m);
    CVector vec = generator.exp() * vacuum();
    return vec / vec.norm();
}

}  // namespace wcl
