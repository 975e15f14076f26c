#pragma once

#include <cmath>

namespace snrlab {

// Standard normal CDF/PDF and the Gaussian tail Q(x) = 1 - Phi(x), evaluated
// through the complementary error function. libm's erfc keeps the absolute
// error well below 1e-12 over the whole real line, which the outage tail
// needs.

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

inline double normal_pdf(double x) {
    return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

inline double q_function(double x) {
    return 0.5 * std::erfc(x * 0.7071067811865475244);
}

}  // namespace snrlab
