#include "wcl/system_model.hpp"

#include <random>
#include <string>

#include "wcl/errors.hpp"

namespace wcl {

const CMatrix& SystemModel::block(int alpha, int beta) const {
    if (alpha == 0 && beta == 0) return e00;
    if (alpha == 0 && beta == 1) return e01;
    if (alpha == 1 && beta == 0) return e10;
    return e11;
}

void SystemModel::validate(double tol) const {
    if (dim < 1) throw ModelError("system dimension must be >= 1");
    for (const CMatrix* m : {&e00, &e01, &e10, &e11})
        if (m->rows() != dim || m->cols() != dim)
            throw ModelError("system blocks must all be dim x dim");
    if (!is_hermitian(e00, tol)) throw ModelError("E_00 must be Hermitian");
    if (!is_hermitian(e11, tol)) throw ModelError("E_11 must be Hermitian");
    if ((e10 - e01.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw ModelError("E_10 must equal the adjoint of E_01");
}

void SystemModel::validate_against(const CorrelationModel& model, double tol) const {
    validate(tol);
    if (model.is_degenerate())
        throw ModelError("degenerate correlation model (G = 0): every limit trivializes");
    const double product = model.big_k() * scattering_norm();
    if (!(product < 1.0))
        throw DivergenceError("contraction condition fails: K ||E11|| = " +
                              std::to_string(product) + " >= 1");
}

SystemModel qubit_damping_model() {
    SystemModel sys;
    sys.dim = 2;
    sys.e00 = CMatrix::Zero(2, 2);
    sys.e11 = CMatrix::Zero(2, 2);
    sys.e10 = CMatrix::Zero(2, 2);
    sys.e10(1, 0) = 1.0;  // lowering |g><e| with basis {e, g}
    sys.e01 = sys.e10.adjoint();
    return sys;
}

SystemModel random_system(int dim, unsigned seed, const CorrelationModel& model,
                          double margin) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto random_matrix = [&]() {
        CMatrix m(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
        return m;
    };
    SystemModel sys;
    sys.dim = dim;
    CMatrix h0 = random_matrix();
    CMatrix h1 = random_matrix();
    sys.e00 = 0.5 * (h0 + h0.adjoint());
    sys.e11 = 0.5 * (h1 + h1.adjoint());
    sys.e10 = random_matrix();
    sys.e01 = sys.e10.adjoint();
    const double norm11 = operator_norm(sys.e11);
    if (norm11 > 0.0) sys.e11 *= margin / (model.big_k() * norm11);
    sys.validate_against(model);
    return sys;
}

}  // namespace wcl
