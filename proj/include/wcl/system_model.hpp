#pragma once

#include "wcl/correlation.hpp"
#include "wcl/types.hpp"

namespace wcl {

/// The four bounded system blocks of the emission/absorption/scattering
/// coupling. E00 and E11 are self-adjoint and E10 = E01^dag; against a given
/// reservoir kernel the contraction condition K ||E11|| < 1 must hold.
struct SystemModel {
    Eigen::Index dim = 0;
    CMatrix e00, e01, e10, e11;
    double omega = 0.0;  // harmonic frequency, bookkeeping only

    const CMatrix& block(int alpha, int beta) const;

    /// Throws ModelError naming the offending block when the self-adjointness
    /// pattern fails; tol is the allowed Hermiticity defect.
    void validate(double tol = 1e-12) const;

    /// Validate plus the contraction condition against the kernel constants.
    void validate_against(const CorrelationModel& model, double tol = 1e-12) const;

    double scattering_norm() const { return operator_norm(e11); }
};

/// Qubit amplitude damping: E10 = |g><e| (lowering), all other blocks zero.
SystemModel qubit_damping_model();

/// Random system with the required adjointness pattern, rescaled so that
/// K ||E11|| <= margin < 1 for the given kernel.
SystemModel random_system(int dim, unsigned seed, const CorrelationModel& model,
                          double margin = 0.5);

}  // namespace wcl
