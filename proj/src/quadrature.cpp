#include "wcl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "wcl/errors.hpp"

namespace wcl {

namespace {

// Gauss-Kronrod (7,15) nodes and weights on [-1,1].
constexpr double kron_nodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kron_weights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss-7 weights matching kron_nodes[1,3,5,7,9,11,13].
constexpr double gauss_weights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Panel {
    double a, b;
    Complex value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<Complex(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Complex kron{0.0, 0.0};
    Complex gauss{0.0, 0.0};
    double abs_kron = 0.0;
    for (int i = 0; i < 15; ++i) {
        const Complex fx = f(mid + half * kron_nodes[i]);
        kron += kron_weights[i] * fx;
        abs_kron += kron_weights[i] * std::abs(fx);
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * fx;
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = half * kron;
    // Standard QUADPACK-style error rescaling.
    const double raw = std::abs(half) * std::abs(kron - gauss);
    const double scale = std::abs(half) * abs_kron;
    p.error = (scale > 0.0 && raw > 0.0)
                  ? scale * std::min(1.0, std::pow(200.0 * raw / scale, 1.5))
                  : raw;
    return p;
}

}  // namespace

QuadResult integrate(const std::function<Complex(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_intervals) {
    if (a == b) return {Complex{0.0, 0.0}, 0.0};
    std::priority_queue<Panel> queue;
    queue.push(evaluate_panel(f, a, b));
    Complex total = queue.top().value;
    double total_err = queue.top().error;
    int panels = 1;
    while (panels < max_intervals) {
        const double target = std::max(abs_tol, rel_tol * std::abs(total));
        if (total_err <= target) break;
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval at floating-point resolution
            queue.push(worst);
            break;
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }
    const double target = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_err > target * 100.0) {
        throw IntegrationError("quadrature did not converge: error estimate " +
                                   std::to_string(total_err) + " vs target " +
                                   std::to_string(target),
                               total_err);
    }
    return {total, total_err};
}

QuadResult integrate_half_line(const std::function<Complex(double)>& f, double a,
                               double rel_tol, double abs_tol, int max_intervals) {
    auto transformed = [&f, a](double u) -> Complex {
        const double denom = 1.0 - u;
        const double t = a + u / denom;
        const double jacobian = 1.0 / (denom * denom);
        return f(t) * jacobian;
    };
    return integrate(transformed, 0.0, 1.0, rel_tol, abs_tol, max_intervals);
}

Complex richardson_extrapolate(const std::vector<Complex>& values, double order) {
    std::vector<Complex> table = values;
    const double ratio = std::pow(2.0, order);
    for (std::size_t level = 1; level < values.size(); ++level) {
        const double factor = std::pow(ratio, static_cast<double>(level));
        for (std::size_t i = 0; i + level < values.size(); ++i)
            table[i] = (factor * table[i + 1] - table[i]) / (factor - 1.0);
    }
    return table.empty() ? Complex{0.0, 0.0} : table[0];
}

}  // namespace wcl
