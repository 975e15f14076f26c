#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace snrlab {

struct QuadratureNode {
    double x = 0.0;
    double w = 0.0;
};

// n-point Gauss-Legendre rule on (a, b). Nodes are interior, so integrands
// only defined on the open interval are safe. Newton iteration on P_n from
// the usual cosine initial guesses; accurate to ~1e-15 for the orders used
// here.
inline std::vector<QuadratureNode> gauss_legendre(int n, double a, double b) {
    if (n < 1) {
        throw ValidationError("gauss_legendre: node count must be >= 1");
    }
    std::vector<QuadratureNode> rule(static_cast<std::size_t>(n));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double dpn = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: value in pn, previous order in pn1.
            double pn = 1.0;
            double pn1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double tmp = pn1;
                pn1 = pn;
                pn = ((2.0 * j + 1.0) * x * pn1 - j * tmp) / (j + 1.0);
            }
            dpn = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dpn;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
        rule[static_cast<std::size_t>(i)] = {mid - half * x, half * w};
        rule[static_cast<std::size_t>(n - 1 - i)] = {mid + half * x, half * w};
    }
    return rule;
}

}  // namespace snrlab
