#pragma once

#include <array>
#include <vector>

#include "wcl/correlation.hpp"
#include "wcl/system_model.hpp"
#include "wcl/types.hpp"

namespace wcl {

/// Piecewise-constant limit amplitude h(t) = coupling * 1_[lo,hi](t); the
/// coupling is the limit pairing (f|g) of the smearing function against the
/// interaction test function.
struct LimitAmplitude {
    Interval interval;
    Complex coupling{0.0, 0.0};

    Complex operator()(double t) const {
        return (t >= interval.lo && t < interval.hi) ? coupling : Complex{0.0, 0.0};
    }
};

/// Coefficients of the limit quantum stochastic differential equation
/// dU = L_ab U dA^ab together with the equivalent (W, L, H) parameterization:
///   L11 = (W - 1)/gamma, L10 = L, L01 = -L^dag W, L00 = -(gamma/2 L^dag L + i H).
struct QsdeCoefficients {
    Eigen::Index dim = 0;
    CMatrix l00, l01, l10, l11;
    CMatrix w, l, h;
    Complex kappa_plus{0.0, 0.0};
    Complex kappa_minus{0.0, 0.0};
    double gamma = 0.0;

    const CMatrix& block(int alpha, int beta) const;

    struct Residuals {
        double w_unitary = 0.0;
        double h_hermitian = 0.0;
        double l11_consistent = 0.0;
        double l10_consistent = 0.0;
        double l01_consistent = 0.0;
        double l00_consistent = 0.0;
        double max() const;
    };
    /// Deviations of the stored blocks from the (W, L, H) identities.
    Residuals residuals() const;
};

/// Chain coefficient E^(r): E_ab for r = 1, E_a1 E11^{r-2} E_1b for r >= 2.
CMatrix chain_coefficient(const SystemModel& sys, int alpha, int beta, int r);

/// Closed-form limit coefficients with kappa = kappa_plus:
/// L_ab = -i E_ab - kappa E_a1 (1 + i kappa E11)^{-1} E_1b, plus (W, L, H).
QsdeCoefficients limit_coefficients(const SystemModel& sys, const CorrelationModel& model);
QsdeCoefficients limit_coefficients(const SystemModel& sys, Complex kappa_plus,
                                    Complex kappa_minus);

/// Partial geometric sum -i sum_{r<=R} (-i kappa)^{r-1} E^(r)_ab; converges to
/// the closed form at rate (|kappa| ||E11||)^R.
CMatrix partial_chain_sum(const SystemModel& sys, Complex kappa, int alpha, int beta,
                          int r_max);

/// The four Evans-Hudson maps as dim^2 x dim^2 superoperator matrices over
/// column-major vec coordinates:
///   L_ab(X) = X G_ab + G_ba^dag X + gamma G_1a^dag X G_1b  with G = L.
struct EvansHudsonMaps {
    Eigen::Index dim = 0;
    double gamma = 0.0;
    std::array<std::array<CMatrix, 2>, 2> maps;  // maps[alpha][beta]

    const CMatrix& map(int alpha, int beta) const { return maps[alpha][beta]; }
    CMatrix apply(int alpha, int beta, const CMatrix& x) const;
};

EvansHudsonMaps evans_hudson(const QsdeCoefficients& coeffs);

/// e^{t L00}(X): the vacuum-reduced Heisenberg semigroup on observables.
CMatrix lindblad_semigroup(const QsdeCoefficients& coeffs, const CMatrix& x, double t);

/// Superoperator matrix of the Lindblad generator L00 (Heisenberg picture).
CMatrix lindblad_generator_matrix(const QsdeCoefficients& coeffs);

/// Choi matrix of the superoperator with matrix S (column-major vec).
CMatrix choi_matrix(const CMatrix& superoperator_matrix, Eigen::Index dim);

/// Full limit matrix element <phi1 (x) W(f1 (x) 1_[S1,T1]) Psi | U_t | phi2 (x) ...>:
/// the exponential-vector overlap factor times <phi1| V_t |phi2> where
/// dV/dt = (h1(t)^alpha L_ab h2(t)*^beta) V, integrated exactly by matrix
/// exponentials on the constancy intervals of the amplitudes.
struct MatrixElementResult {
    Complex value{0.0, 0.0};          // overlap * <phi1|V_t|phi2>
    Complex overlap{0.0, 0.0};        // exponential-vector overlap factor
    Complex system_part{0.0, 0.0};    // <phi1|V_t|phi2>
};

MatrixElementResult matrix_element_ode(const QsdeCoefficients& coeffs, const CVector& phi1,
                                       const CVector& phi2, const LimitAmplitude& amp1,
                                       const LimitAmplitude& amp2, double t);

/// V_t itself (the system-space propagator of the amplitude-dressed ODE).
CMatrix dressed_propagator(const QsdeCoefficients& coeffs, const LimitAmplitude& amp1,
                           const LimitAmplitude& amp2, double t);

/// Truncated chaotic expansion of V_t: Picard iterates up to m_max quantum
/// stochastic integrals, evaluated with exact piecewise Gauss quadrature.
CMatrix chaotic_expansion_propagator(const QsdeCoefficients& coeffs,
                                     const LimitAmplitude& amp1, const LimitAmplitude& amp2,
                                     double t, int m_max);

/// Contribution to V_t of total original vertex number n: blocks of sizes
/// r_1 + ... + r_m = n with per-vertex weight (-i)^r kappa^{r-1} h-dressed E^(r).
CMatrix limit_chaotic_order_term(const SystemModel& sys, const CorrelationModel& model,
                                 const LimitAmplitude& amp1, const LimitAmplitude& amp2,
                                 double t, int n);

struct NormalOrderReport {
    std::array<std::array<double, 2>, 2> residual{};  // [alpha][beta]
    double max_residual = 0.0;
};

/// Coefficient-level check that normal ordering dU = -i Upsilon U through the
/// commutation replacement a U = (1 + i kappa E11)^{-1} (U a - i kappa E10 U)
/// reproduces the closed-form L_ab exactly.
NormalOrderReport normal_order_identity_check(const QsdeCoefficients& coeffs,
                                              const SystemModel& sys, Complex kappa_plus);

/// Weyl overlap factor for two piecewise-constant limit amplitudes.
Complex limit_weyl_overlap(const LimitAmplitude& amp1, const LimitAmplitude& amp2,
                           double gamma);

}  // namespace wcl
