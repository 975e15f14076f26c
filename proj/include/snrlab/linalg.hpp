#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace snrlab {

using cdouble = std::complex<double>;
using ComplexVector = std::vector<cdouble>;

// Dense Hermitian matrix, row-major full storage. Symmetry is a caller
// invariant; hermitian_within() checks it and the eigensolver enforces it.
class HermitianMatrix {
public:
    explicit HermitianMatrix(int dim)
        : dim_(dim), a_(dim >= 1 ? static_cast<std::size_t>(dim) * dim : 0) {
        if (dim < 1) {
            throw ValidationError("HermitianMatrix: dim must be >= 1");
        }
    }

    static HermitianMatrix identity(int dim) {
        HermitianMatrix m(dim);
        for (int i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    int dim() const { return dim_; }

    cdouble& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cdouble& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) {
            s += std::norm(v);
        }
        return std::sqrt(s);
    }

    double trace_real() const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            s += (*this)(i, i).real();
        }
        return s;
    }

    double max_abs_entry() const {
        double m = 0.0;
        for (const auto& v : a_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    // Largest deviation |a(i,j) - conj(a(j,i))|, including imaginary parts on
    // the diagonal.
    double hermitian_defect() const {
        double worst = 0.0;
        for (int i = 0; i < dim_; ++i) {
            for (int j = i; j < dim_; ++j) {
                worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
            }
        }
        return worst;
    }

    bool hermitian_within(double tol) const { return hermitian_defect() <= tol; }

private:
    int dim_;
    std::vector<cdouble> a_;
};

namespace detail {

inline double off_diagonal_norm(const HermitianMatrix& a) {
    double s = 0.0;
    const int n = a.dim();
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            s += std::norm(a(p, q));
        }
    }
    return std::sqrt(2.0 * s);
}

}  // namespace detail

// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.
// Eigenvectors are never formed. Converges when the off-diagonal Frobenius
// norm drops below 1e-12 * ||m||_F, with a cap of 30 sweeps.
inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& m) {
    const int n = m.dim();
    const double herm_tol = 1e-12 * std::max(1.0, m.max_abs_entry());
    if (!m.hermitian_within(herm_tol)) {
        std::ostringstream msg;
        msg << "hermitian_eigenvalues: input is not Hermitian (defect " << m.hermitian_defect()
            << " exceeds " << herm_tol << ")";
        throw ValidationError(msg.str());
    }

    HermitianMatrix a = m;
    const double norm = a.frobenius_norm();
    const double threshold = 1e-12 * norm;

    bool converged = (norm == 0.0) || (n == 1) || detail::off_diagonal_norm(a) <= threshold;
    for (int sweep = 0; sweep < 30 && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cdouble apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) {
                    continue;
                }
                // Real symmetric entries keep a unit phase; the complex case
                // factors the phase into the rotation.
                const cdouble phase = (apq.imag() == 0.0) ? cdouble(apq.real() > 0 ? 1.0 : -1.0)
                                                          : apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double hyp = std::sqrt(1.0 + tau * tau);
                // Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0.
                const double t = (tau >= 0.0) ? -1.0 / (tau + hyp) : 1.0 / (-tau + hyp);
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const cdouble akp = a(k, p);
                    const cdouble akq = a(k, q);
                    a(k, p) = c * akp + s * std::conj(phase) * akq;
                    a(k, q) = -s * phase * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cdouble apk = a(p, k);
                    const cdouble aqk = a(q, k);
                    a(p, k) = c * apk + s * phase * aqk;
                    a(q, k) = -s * std::conj(phase) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cdouble(a(p, p).real(), 0.0);
                a(q, q) = cdouble(a(q, q).real(), 0.0);
            }
        }
        converged = detail::off_diagonal_norm(a) <= threshold;
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "hermitian_eigenvalues: no convergence after 30 sweeps, off-diagonal residual "
            << detail::off_diagonal_norm(a);
        throw NumericError(msg.str());
    }

    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        eig[static_cast<std::size_t>(i)] = a(i, i).real();
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

// Cholesky factor L (lower triangular, real positive diagonal) of a Hermitian
// positive definite matrix, m = L L*.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const HermitianMatrix& m)
        : n_(m.dim()), l_(static_cast<std::size_t>(m.dim()) * m.dim()) {
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j <= i; ++j) {
                cdouble sum = m(i, j);
                for (int k = 0; k < j; ++k) {
                    sum -= at(i, k) * std::conj(at(j, k));
                }
                if (i == j) {
                    const double d = sum.real();
                    if (!(d > 0.0) || !std::isfinite(d)) {
                        std::ostringstream msg;
                        msg << "CholeskyFactor: matrix is not positive definite (pivot " << d
                            << " at row " << i << ")";
                        throw NumericError(msg.str());
                    }
                    at(i, i) = std::sqrt(d);
                } else {
                    at(i, j) = sum / at(j, j).real();
                }
            }
        }
    }

    int dim() const { return n_; }

    // Solves (L L*) x = rhs.
    ComplexVector solve(const ComplexVector& rhs) const {
        if (static_cast<int>(rhs.size()) != n_) {
            throw ValidationError("CholeskyFactor::solve: rhs size does not match dimension");
        }
        ComplexVector x = rhs;
        for (int i = 0; i < n_; ++i) {
            cdouble sum = x[static_cast<std::size_t>(i)];
            for (int k = 0; k < i; ++k) {
                sum -= at(i, k) * x[static_cast<std::size_t>(k)];
            }
            x[static_cast<std::size_t>(i)] = sum / at(i, i).real();
        }
        for (int i = n_ - 1; i >= 0; --i) {
            cdouble sum = x[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < n_; ++k) {
                sum -= std::conj(at(k, i)) * x[static_cast<std::size_t>(k)];
            }
            x[static_cast<std::size_t>(i)] = sum / at(i, i).real();
        }
        return x;
    }

    // L * v. With m a covariance matrix this turns an i.i.d. Gaussian vector
    // into one with covariance m.
    ComplexVector apply_lower(const ComplexVector& v) const {
        if (static_cast<int>(v.size()) != n_) {
            throw ValidationError("CholeskyFactor::apply_lower: size does not match dimension");
        }
        ComplexVector out(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            cdouble sum = 0.0;
            for (int k = 0; k <= i; ++k) {
                sum += at(i, k) * v[static_cast<std::size_t>(k)];
            }
            out[static_cast<std::size_t>(i)] = sum;
        }
        return out;
    }

private:
    cdouble& at(int i, int j) { return l_[static_cast<std::size_t>(i) * n_ + j]; }
    const cdouble& at(int i, int j) const { return l_[static_cast<std::size_t>(i) * n_ + j]; }

    int n_;
    std::vector<cdouble> l_;
};

inline ComplexVector hpd_solve(const HermitianMatrix& m, const ComplexVector& rhs) {
    return CholeskyFactor(m).solve(rhs);
}

}  // namespace snrlab
