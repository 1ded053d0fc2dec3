#include "wcl/pule_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "wcl/errors.hpp"

namespace wcl {

namespace {

void require_contractive(const BoundParameters& params) {
    if (params.gaussian_branch) return;
    if (!(params.a < 0.0))
        throw DivergenceError("series majorant diverges: K * C11 >= 1 (A = " +
                              std::to_string(params.a) + ")");
}

double ln_or_zero(double x) { return std::log(std::max(x, 1.0)); }

// Walks every occupation sequence with weight exactly n, passing the
// accumulated weight factor e^{A E + B N} / prod n_j! (general branch) or the
// raw-constant factor (gaussian branch) to the sink. Sizes descend so each
// (size, count) pair is visited once.
void visit_occupations(int remaining, int max_size,
                       double factor, const std::function<double(int)>& size_weight,
                       double& total) {
    if (remaining == 0) {
        total += factor;
        return;
    }
    for (int size = std::min(remaining, max_size); size >= 1; --size) {
        double f = factor;
        const double w = size_weight(size);
        for (int count = 1; count * size <= remaining; ++count) {
            f *= w / count;  // accumulates w^count / count!
            visit_occupations(remaining - count * size, size - 1, f, size_weight, total);
        }
    }
}

}  // namespace

BoundParameters BoundParameters::from_constants(double big_k, double c11, double c,
                                                double t, double gamma) {
    if (big_k <= 0.0) throw DomainError("bound parameters require K > 0");
    BoundParameters p;
    p.big_k = big_k;
    p.c11 = c11;
    p.c = c;
    p.t = t;
    p.gamma = gamma;
    if (c11 == 0.0) {
        p.gaussian_branch = true;
        p.a = -std::numeric_limits<double>::infinity();
        p.b = 0.0;
        p.b_prime = 0.0;
        return p;
    }
    p.a = std::log(big_k * c11);
    p.b = ln_or_zero(t) + ln_or_zero(c * c) + ln_or_zero(1.0 / (c11 * c11)) +
          ln_or_zero(1.0 / big_k);
    p.b_prime = 0.5 * ln_or_zero(t) + ln_or_zero(c * c) + ln_or_zero(1.0 / (c11 * c11)) +
                ln_or_zero(1.0 / big_k) + 0.5 * std::log(gamma);
    require_contractive(p);
    return p;
}

double level_bound(int n, const BoundParameters& params) {
    require_contractive(params);
    if (n < 0) throw DomainError("level_bound requires n >= 0");
    if (n == 0) return 1.0;
    double total = 0.0;
    if (params.gaussian_branch) {
        // Only blocks of size one and two survive; per occupation the weight is
        // C^E (t v 1)^N K^{n_2} / (n_1! n_2!).
        const double tv = std::max(params.t, 1.0);
        const std::function<double(int)> weight = [&](int size) -> double {
            if (size == 1) return params.c * tv;
            if (size == 2) return params.c * params.c * params.big_k * tv;
            return 0.0;
        };
        visit_occupations(n, 2, 1.0, weight, total);
        return total;
    }
    const std::function<double(int)> weight = [&](int size) {
        return std::exp(params.a * size + params.b);
    };
    visit_occupations(n, n, 1.0, weight, total);
    return total;
}

double omega(double a, double b) {
    if (!(a < 0.0))
        throw DivergenceError("omega requires A < 0, got A = " + std::to_string(a));
    return std::exp(std::exp(a + b) / (1.0 - std::exp(a)));
}

double omega(const BoundParameters& params) {
    if (params.gaussian_branch) {
        const double tv = std::max(params.t, 1.0);
        return std::exp(params.c * tv + params.c * params.c * params.big_k * tv);
    }
    return omega(params.a, params.b);
}

double heisenberg_majorant(double a, double b, double b_prime) {
    if (!(a < 0.0))
        throw DivergenceError("heisenberg_majorant requires A < 0");
    return std::exp(2.0 * std::exp(a + b) / (1.0 - std::exp(a)) +
                    std::exp(2.0 * (a + b_prime)) / (1.0 - std::exp(2.0 * a)));
}

double heisenberg_majorant(const BoundParameters& params) {
    if (params.gaussian_branch) {
        const double tv = std::max(params.t, 1.0);
        const double omega2 = std::pow(omega(params), 2.0);
        // Cross contractions reduce to single links, each worth C^2 gamma (t v 1).
        return omega2 * std::exp(params.c * params.c * params.gamma * tv);
    }
    return heisenberg_majorant(params.a, params.b, params.b_prime);
}

double tail_bound(int truncation, const BoundParameters& params) {
    require_contractive(params);
    if (truncation < 0) throw DomainError("tail_bound requires N >= 0");
    const double whole = omega(params);
    double best = whole;
    if (params.gaussian_branch) {
        const double tv = std::max(params.t, 1.0);
        for (int i = 1; i <= 200; ++i) {
            const double theta = 0.25 * i;
            const double shifted = std::exp(std::exp(theta) * params.c * tv +
                                            std::exp(2.0 * theta) * params.c * params.c *
                                                params.big_k * tv);
            best = std::min(best, std::exp(-theta * (truncation + 1)) * shifted);
        }
        return best;
    }
    // Chernoff shift: tail <= e^{-theta (N+1)} Omega(A + theta, B), 0 < theta < -A.
    for (int i = 1; i < 400; ++i) {
        const double theta = -params.a * i / 400.0;
        best = std::min(best,
                        std::exp(-theta * (truncation + 1)) * omega(params.a + theta, params.b));
    }
    return best;
}

}  // namespace wcl
