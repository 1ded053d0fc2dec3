#pragma once

#include <vector>

#include "wcl/types.hpp"

namespace wcl {

/// One vertex of a normally ordered word [a+(f)]^alpha [a-(g)]^beta.
/// Vertices are indexed 1..n with vertex n leftmost (latest); the word is
/// applied to the vacuum rightmost-first.
struct WordVertex {
    int alpha = 0;         // creator present
    int beta = 0;          // annihilator present
    int f_id = 0;          // test function of the creator
    int g_id = 0;          // test function of the annihilator
};

/// Truncated multimode bosonic Fock space with explicit dense operators.
/// Non-orthogonal test functions are realized by mixing orthonormal ladder
/// operators through a factor of the Gram matrix, so [a_i, a_j+] = gram(i,j)
/// holds exactly below the truncation level.
class TruncatedFock {
  public:
    TruncatedFock(int modes, int cutoff, const CMatrix& gram);

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    Eigen::Index dimension() const { return dim_; }
    const CMatrix& gram() const { return gram_; }

    const CMatrix& annihilator(int mode) const { return annihilators_.at(mode); }
    CMatrix creator(int mode) const { return annihilators_.at(mode).adjoint(); }

    CVector vacuum() const;

    /// Commutator [a_i, a_j+] restricted to the sector with every mode
    /// occupation < cutoff, where the CCR are exact.
    CMatrix ccr_defect(int i, int j) const;

    /// Vacuum expectation of the time-ordered word, rightmost vertex first.
    /// Refuses when cutoff < word length: truncation could corrupt the value.
    Complex vacuum_moment(const std::vector<WordVertex>& word) const;

    /// Normalized coherent vector exp[A+(h) - A-(h)] vacuum with
    /// h = sum_i z_i f_i. Refuses if the truncated tail exceeds tail_tol.
    CVector coherent_vector(const std::vector<Complex>& amplitudes,
                            double tail_tol = 1e-10) const;

    static Complex overlap(const CVector& u, const CVector& v) { return u.dot(v); }

  private:
    int modes_;
    int cutoff_;
    Eigen::Index dim_;
    CMatrix gram_;
    std::vector<CMatrix> annihilators_;
    std::vector<int> radix_;  // per-mode digit weights for basis indexing
};

}  // namespace wcl
