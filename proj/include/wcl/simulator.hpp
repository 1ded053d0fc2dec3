#pragma once

#include <optional>
#include <vector>

#include "wcl/qsde.hpp"
#include "wcl/types.hpp"

namespace wcl {

/// One time slice of the discrete noise: a two-level mode carrying the four
/// increment matrices. The two-level truncation realizes the right-vacuum Ito
/// table exactly; the gauge increment gamma*N is forced by
/// dA11 dA11 = gamma dA11 needing eigenvalues {0, gamma}.
struct SliceSpace {
    double gamma = 0.0;
    double dt = 0.0;
    CMatrix a;                       // two-level annihilator
    CMatrix increment[2][2];         // increment[alpha][beta]

    const CMatrix& delta(int alpha, int beta) const { return increment[alpha][beta]; }
    CVector slice_vacuum() const;
    /// Normalized two-level coherent state |0> + z |1>.
    CVector slice_coherent(Complex z) const;
};

SliceSpace build_slices(double gamma, double dt);

struct ItoPairRecord {
    int alpha, beta, mu, nu;      // dA^{alpha beta} dA^{mu nu}
    bool table_pair = false;      // of the form dA^{a1} dA^{1b}
    double residual = 0.0;        // || (product - gamma dA^{a nu}) |0> ||, table pairs
    double vacuum_norm = 0.0;     // || product |0> ||, non-table pairs
    bool vanishes_exactly = false;
};

struct ItoAuditReport {
    std::vector<ItoPairRecord> pairs;
    int table_pairs = 0;
    int vanishing_pairs = 0;
    double max_table_residual = 0.0;
    /// Largest non-table vacuum norm divided by dt (higher-order terms only).
    double max_higher_order_ratio = 0.0;
};

/// Multiplies all 16 increment pairs and classifies each against the table.
/// corruption rescales the gauge increment, a fault-injection hook for the
/// self-test.
ItoAuditReport ito_table_audit(const SliceSpace& slices, double corruption = 1.0);

/// Noise state per slice: vacuum, or bra/ket coherent amplitudes following two
/// piecewise-constant limit amplitudes (scaled per slice by sqrt(dt/gamma)).
struct NoiseState {
    LimitAmplitude bra;  // h_1
    LimitAmplitude ket;  // h_2

    static NoiseState vacuum() { return {}; }
    static NoiseState coherent(const LimitAmplitude& h1, const LimitAmplitude& h2) {
        return {h1, h2};
    }
};

struct TrajectoryStep {
    int step = 0;
    double time = 0.0;
    Complex value{0.0, 0.0};
    double defect = 0.0;  // per-step isometry defect against the slice state
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    Complex final_value{0.0, 0.0};
    Complex overlap{1.0, 0.0};    // product of slice-state overlaps (unitary route)
    CMatrix final_matrix;          // J_t(X) reduced matrix (Heisenberg route)
    double max_step_defect = 0.0;
    double defect_constant = 0.0;  // reported c with defect <= c*dt per step
    bool polar_repaired = false;
};

/// Euler evolution U <- (1 + sum L_ab (x) dA^ab) U with slices consumed
/// left to right and traced against the chosen slice states; tracks the
/// matrix element <phi1 (x) xi...| U |phi2 (x) xi...>.
Trajectory evolve_unitary(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                          int n_steps, const CVector& phi1, const CVector& phi2,
                          const NoiseState& noise, bool polar_repair = false);

/// Euler flow J(X) <- J(X) + sum J(L_ab(X)) (x) dA^ab, reduced against the
/// slice states; tracks <phi1| J_t(X) |phi2> (times the slice overlap product
/// for coherent states). J_t(I) = I holds exactly.
Trajectory evolve_heisenberg(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                             const CMatrix& x, int n_steps, const CVector& phi1,
                             const CVector& phi2, const NoiseState& noise);

/// Cross-check route: conjugation Y <- <xi| S^dag (Y (x) 1) S |xi> with the
/// same Euler step operator S, slice by slice from the latest.
CMatrix heisenberg_by_conjugation(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                                  const CMatrix& x, int n_steps, const NoiseState& noise);

/// Co-evolute K_t(X) = U_t (X (x) 1) U_t^dag by the conjugation route.
CMatrix co_evolute(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                   const CMatrix& x, int n_steps, const NoiseState& noise);

/// Full Euler step operator on system (x) slice (slice index slow).
CMatrix step_operator(const QsdeCoefficients& coeffs, const SliceSpace& slices);

}  // namespace wcl
