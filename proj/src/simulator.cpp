#include "wcl/simulator.hpp"

#include <cmath>
#include <string>

#include "wcl/errors.hpp"

namespace wcl {

namespace {

constexpr Complex kZero{0.0, 0.0};

CVector coherent_amplitude_state(const SliceSpace& slices, Complex h, double t_unused) {
    (void)t_unused;
    return slices.slice_coherent(h);
}

// Bra/ket two-level slice states at step time t. The ket amplitude follows
// h_2 and the bra amplitude h_1, both scaled by sqrt(dt/gamma) so that
// <xi1| dA^{10} |xi2> / <xi1|xi2> = h_1 dt and the annihilation pairing gives
// conj(h_2) dt.
void slice_states(const SliceSpace& slices, const NoiseState& noise, double t,
                  CVector& bra, CVector& ket) {
    const double scale = std::sqrt(slices.dt / slices.gamma);
    const Complex z_bra = std::conj(noise.bra(t)) * scale;
    const Complex z_ket = std::conj(noise.ket(t)) * scale;
    bra = slices.slice_coherent(z_bra);
    ket = slices.slice_coherent(z_ket);
}

double defect_constant_estimate(const QsdeCoefficients& coeffs) {
    const double l00 = operator_norm(coeffs.l00);
    const double l10 = operator_norm(coeffs.l10);
    const double l01 = operator_norm(coeffs.l01);
    const double l11 = operator_norm(coeffs.l11);
    const double total = l00 + l10 + l01 + l11 + coeffs.gamma * (l10 + l11) * (l10 + l11);
    return (1.0 + total) * (1.0 + total);
}

}  // namespace

CVector SliceSpace::slice_vacuum() const {
    CVector v = CVector::Zero(2);
    v(0) = 1.0;
    return v;
}

CVector SliceSpace::slice_coherent(Complex z) const {
    CVector v(2);
    v(0) = 1.0;
    v(1) = z;
    return v / v.norm();
}

SliceSpace build_slices(double gamma, double dt) {
    if (gamma <= 0.0 || dt <= 0.0) throw DomainError("build_slices requires gamma, dt > 0");
    SliceSpace s;
    s.gamma = gamma;
    s.dt = dt;
    s.a = CMatrix::Zero(2, 2);
    s.a(0, 1) = 1.0;
    const CMatrix adag = s.a.adjoint();
    const CMatrix number = adag * s.a;
    s.increment[0][0] = dt * CMatrix::Identity(2, 2);
    s.increment[1][0] = std::sqrt(gamma * dt) * adag;
    s.increment[0][1] = std::sqrt(gamma * dt) * s.a;
    s.increment[1][1] = gamma * number;
    return s;
}

ItoAuditReport ito_table_audit(const SliceSpace& slices, double corruption) {
    ItoAuditReport report;
    CMatrix gauge = slices.increment[1][1] * corruption;
    const CVector vac = slices.slice_vacuum();
    auto inc = [&](int alpha, int beta) -> CMatrix {
        if (alpha == 1 && beta == 1) return gauge;
        return slices.increment[alpha][beta];
    };
    for (int alpha : {0, 1})
        for (int beta : {0, 1})
            for (int mu : {0, 1})
                for (int nu : {0, 1}) {
                    ItoPairRecord rec;
                    rec.alpha = alpha;
                    rec.beta = beta;
                    rec.mu = mu;
                    rec.nu = nu;
                    const CMatrix product = inc(alpha, beta) * inc(mu, nu);
                    if (beta == 1 && mu == 1) {
                        rec.table_pair = true;
                        rec.residual =
                            ((product - slices.gamma * inc(alpha, nu)) * vac).norm();
                        ++report.table_pairs;
                        report.max_table_residual =
                            std::max(report.max_table_residual, rec.residual);
                    } else {
                        rec.vacuum_norm = (product * vac).norm();
                        rec.vanishes_exactly = rec.vacuum_norm == 0.0;
                        ++report.vanishing_pairs;
                        report.max_higher_order_ratio = std::max(
                            report.max_higher_order_ratio, rec.vacuum_norm / slices.dt);
                    }
                    report.pairs.push_back(rec);
                }
    return report;
}

CMatrix step_operator(const QsdeCoefficients& coeffs, const SliceSpace& slices) {
    const Eigen::Index dim = coeffs.dim;
    CMatrix s = kron(CMatrix::Identity(2, 2), CMatrix::Identity(dim, dim));
    for (int alpha : {0, 1})
        for (int beta : {0, 1})
            s += kron(slices.delta(alpha, beta), coeffs.block(alpha, beta));
    return s;
}

namespace {

// <bra| S^dag S |ket>-style single-slice contraction of a (2 dim) x (2 dim)
// operator to a system-space matrix.
CMatrix contract_slice(const CMatrix& full, const CVector& bra, const CVector& ket,
                       Eigen::Index dim) {
    CMatrix out = CMatrix::Zero(dim, dim);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out += std::conj(bra(i)) * ket(j) * full.block(i * dim, j * dim, dim, dim);
    return out;
}

CMatrix polar_unitary(const CMatrix& s) {
    Eigen::JacobiSVD<CMatrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

Trajectory evolve_unitary(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                          int n_steps, const CVector& phi1, const CVector& phi2,
                          const NoiseState& noise, bool polar_repair) {
    if (n_steps < 1) throw DomainError("evolve_unitary requires n_steps >= 1");
    const Eigen::Index dim = coeffs.dim;
    Trajectory traj;
    traj.polar_repaired = polar_repair;
    traj.defect_constant = defect_constant_estimate(coeffs);
    CMatrix base_step = step_operator(coeffs, slices);
    if (polar_repair) base_step = polar_unitary(base_step);
    CMatrix v = CMatrix::Identity(dim, dim);
    Complex overlap{1.0, 0.0};
    CVector bra, ket;
    for (int k = 0; k < n_steps; ++k) {
        const double t = k * slices.dt;
        slice_states(slices, noise, t, bra, ket);
        const CMatrix transfer = contract_slice(base_step, bra, ket, dim);
        const Complex slice_overlap = bra.dot(ket);
        v = (transfer / slice_overlap) * v;
        overlap *= slice_overlap;
        const CMatrix isometry_defect =
            contract_slice(base_step.adjoint() * base_step, ket, ket, dim) -
            CMatrix::Identity(dim, dim);
        TrajectoryStep step;
        step.step = k + 1;
        step.time = (k + 1) * slices.dt;
        step.defect = isometry_defect.cwiseAbs().maxCoeff();
        step.value = overlap * phi1.dot(v * phi2);
        traj.max_step_defect = std::max(traj.max_step_defect, step.defect);
        if (step.defect > 10.0 * traj.defect_constant * slices.dt)
            throw InstabilityError("per-step unitarity defect " +
                                   std::to_string(step.defect) +
                                   " exceeds budget; reduce dt");
        traj.steps.push_back(step);
    }
    traj.final_matrix = v;
    traj.overlap = overlap;
    traj.final_value = traj.steps.back().value;
    return traj;
}

Trajectory evolve_heisenberg(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                             const CMatrix& x, int n_steps, const CVector& phi1,
                             const CVector& phi2, const NoiseState& noise) {
    if (n_steps < 1) throw DomainError("evolve_heisenberg requires n_steps >= 1");
    const Eigen::Index dim = coeffs.dim;
    const EvansHudsonMaps eh = evans_hudson(coeffs);
    Trajectory traj;
    traj.defect_constant = defect_constant_estimate(coeffs);
    // Iterating on vec(X) directly keeps J(identity) = identity exact: every
    // increment adds w * map * y and the maps annihilate vec(1) entrywise.
    CVector y = vec(x);
    Complex overlap{1.0, 0.0};
    CVector bra, ket;
    for (int k = 0; k < n_steps; ++k) {
        const double t = k * slices.dt;
        slice_states(slices, noise, t, bra, ket);
        const Complex slice_overlap = bra.dot(ket);
        CVector delta = CVector::Zero(dim * dim);
        for (int alpha : {0, 1})
            for (int beta : {0, 1}) {
                const Complex w =
                    bra.dot(slices.delta(alpha, beta) * ket) / slice_overlap;
                if (w != kZero) delta += w * (eh.map(alpha, beta) * y);
            }
        y += delta;
        overlap *= slice_overlap;
        TrajectoryStep step;
        step.step = k + 1;
        step.time = (k + 1) * slices.dt;
        step.value = overlap * phi1.dot(unvec(y, dim) * phi2);
        traj.steps.push_back(step);
    }
    traj.final_matrix = unvec(y, dim);
    traj.overlap = overlap;
    traj.final_value = traj.steps.back().value;
    return traj;
}

CMatrix heisenberg_by_conjugation(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                                  const CMatrix& x, int n_steps, const NoiseState& noise) {
    const Eigen::Index dim = coeffs.dim;
    const CMatrix s = step_operator(coeffs, slices);
    CMatrix y = x;
    CVector bra, ket;
    for (int k = n_steps - 1; k >= 0; --k) {  // latest slice is innermost
        const double t = k * slices.dt;
        slice_states(slices, noise, t, bra, ket);
        const CMatrix full = s.adjoint() * kron(CMatrix::Identity(2, 2), y) * s;
        y = contract_slice(full, bra, ket, dim) / bra.dot(ket);
    }
    return y;
}

CMatrix co_evolute(const QsdeCoefficients& coeffs, const SliceSpace& slices,
                   const CMatrix& x, int n_steps, const NoiseState& noise) {
    const Eigen::Index dim = coeffs.dim;
    const CMatrix s = step_operator(coeffs, slices);
    CMatrix y = x;
    CVector bra, ket;
    for (int k = 0; k < n_steps; ++k) {  // earliest slice is innermost
        const double t = k * slices.dt;
        slice_states(slices, noise, t, bra, ket);
        const CMatrix full = s * kron(CMatrix::Identity(2, 2), y) * s.adjoint();
        y = contract_slice(full, bra, ket, dim) / bra.dot(ket);
    }
    return y;
}

}  // namespace wcl
