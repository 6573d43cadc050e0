#include "fkpp/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fkpp/errors.hpp"

namespace fkpp {

std::vector<double> DenseMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* row = a_.data() + static_cast<size_t>(i) * cols_;
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ab_(static_cast<size_t>(2 * kl + ku + 1) * n, 0.0) {}

std::vector<double> BandMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const int ilo = std::max(0, j - ku_);
        const int ihi = std::min(n_ - 1, j + kl_);
        for (int i = ilo; i <= ihi; ++i) y[i] += ab_[index(i, j)] * x[j];
    }
    return y;
}

DenseMatrix BandMatrix::to_dense() const {
    DenseMatrix d(n_, n_);
    for (int j = 0; j < n_; ++j) {
        const int ilo = std::max(0, j - ku_);
        const int ihi = std::min(n_ - 1, j + kl_);
        for (int i = ilo; i <= ihi; ++i) d(i, j) = ab_[index(i, j)];
    }
    return d;
}

LinearSystem LinearSystem::banded(int n, int kl, int ku) {
    LinearSystem s;
    s.n_ = n;
    s.banded_ = true;
    s.band_ = BandMatrix(n, kl, ku);
    return s;
}

LinearSystem LinearSystem::dense(int n) {
    LinearSystem s;
    s.n_ = n;
    s.banded_ = false;
    s.dense_ = DenseMatrix(n, n);
    return s;
}

void LinearSystem::add(int i, int j, double v) {
    if (banded_)
        band_.at(i, j) += v;
    else
        dense_(i, j) += v;
}

void LinearSystem::set(int i, int j, double v) {
    if (banded_)
        band_.at(i, j) = v;
    else
        dense_(i, j) = v;
}

double LinearSystem::get(int i, int j) const {
    if (banded_) return band_.in_band(i, j) ? band_.at(i, j) : 0.0;
    return dense_(i, j);
}

std::vector<double> LinearSystem::multiply(const std::vector<double>& x) const {
    return banded_ ? band_.multiply(x) : dense_.multiply(x);
}

DenseMatrix LinearSystem::to_dense() const { return banded_ ? band_.to_dense() : dense_; }

LinearFactor::LinearFactor(LinearSystem sys) : sys_(std::move(sys)), ipiv_(sys_.n()) {
    const int n = sys_.n();
    lapack_int info = 0;
    if (sys_.is_banded()) {
        BandMatrix& b = sys_.band();
        info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, b.kl(), b.ku(), b.storage(), b.ldab(),
                              ipiv_.data());
    } else {
        info = LAPACKE_dgetrf(LAPACK_ROW_MAJOR, n, n, sys_.dense_ref().data(), n, ipiv_.data());
    }
    if (info > 0) throw SingularJacobianError("linear solve: exactly singular pivot " +
                                              std::to_string(info));
    if (info < 0) throw std::runtime_error("linear solve: invalid argument to LAPACK");
}

void LinearFactor::solve_in_place(std::vector<double>& b) const {
    const int n = sys_.n();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("linear solve: right-hand side size mismatch");
    lapack_int info = 0;
    if (sys_.is_banded()) {
        const BandMatrix& m = sys_.band();
        info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, m.kl(), m.ku(), 1, m.storage(), m.ldab(),
                              ipiv_.data(), b.data(), n);
    } else {
        info = LAPACKE_dgetrs(LAPACK_ROW_MAJOR, 'N', n, 1, sys_.dense_ref().data(), n,
                              ipiv_.data(), b.data(), 1);
    }
    if (info != 0) throw std::runtime_error("linear solve: LAPACK back-substitution failed");
}

std::vector<double> sym_eigenvalues(const DenseMatrix& a) {
    const int n = a.rows();
    DenseMatrix work = a;
    std::vector<double> w(n);
    lapack_int m = 0;
    std::vector<lapack_int> isuppz(2 * std::max(1, n));
    lapack_int info = LAPACKE_dsyevr(LAPACK_ROW_MAJOR, 'N', 'A', 'U', n, work.data(), n, 0, 0, 0,
                                     0, 0.0, &m, w.data(), nullptr, n, isuppz.data());
    if (info != 0) throw std::runtime_error("dsyevr failed");
    w.resize(m);
    return w;
}

TopEigen sym_eigen_top(const DenseMatrix& a, int k, bool want_vector) {
    const int n = a.rows();
    k = std::min(k, n);
    DenseMatrix work = a;
    std::vector<double> w(n);
    std::vector<double> z(want_vector ? static_cast<size_t>(n) * k : 0);
    std::vector<lapack_int> isuppz(2 * std::max(1, k));
    lapack_int m = 0;
    lapack_int info = LAPACKE_dsyevr(LAPACK_ROW_MAJOR, want_vector ? 'V' : 'N', 'I', 'U', n,
                                     work.data(), n, 0, 0, n - k + 1, n, 0.0, &m, w.data(),
                                     want_vector ? z.data() : nullptr, std::max(1, k),
                                     isuppz.data());
    if (info != 0) throw std::runtime_error("dsyevr failed");
    TopEigen out;
    out.values.assign(w.begin(), w.begin() + m);
    std::reverse(out.values.begin(), out.values.end()); // descending
    if (want_vector && m > 0) {
        out.top_vector.resize(n);
        for (int i = 0; i < n; ++i) out.top_vector[i] = z[static_cast<size_t>(i) * m + (m - 1)];
    }
    return out;
}

TopEigen sym_band_eigen_top(int n, int kd, const std::vector<double>& band_upper, int k,
                            bool want_vector) {
    k = std::min(k, n);
    std::vector<double> ab = band_upper; // overwritten by LAPACK
    std::vector<double> w(n);
    std::vector<double> z(want_vector ? static_cast<size_t>(n) * n : 0);
    std::vector<double> q(static_cast<size_t>(n) * n);
    std::vector<lapack_int> ifail(n);
    lapack_int m = 0;
    lapack_int info = LAPACKE_dsbevx(
        LAPACK_COL_MAJOR, want_vector ? 'V' : 'N', 'I', 'U', n, kd, ab.data(), kd + 1, q.data(),
        n, 0, 0, n - k + 1, n, 0.0, &m, w.data(), want_vector ? z.data() : q.data(), n,
        ifail.data());
    if (info != 0) throw std::runtime_error("dsbevx failed");
    TopEigen out;
    out.values.assign(w.begin(), w.begin() + m);
    std::reverse(out.values.begin(), out.values.end());
    if (want_vector && m > 0) {
        out.top_vector.resize(n);
        // column m-1 of z holds the eigenvector of the largest eigenvalue
        for (int i = 0; i < n; ++i) out.top_vector[i] = z[static_cast<size_t>(m - 1) * n + i];
    }
    return out;
}

std::vector<std::complex<double>> general_eigenvalues(DenseMatrix a) {
    const int n = a.rows();
    std::vector<double> wr(n), wi(n);
    lapack_int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                    wi.data(), nullptr, n, nullptr, n);
    if (info != 0) throw std::runtime_error("dgeev failed");
    std::vector<std::complex<double>> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = {wr[i], wi[i]};
    return ev;
}

bool small_eig(DenseMatrix a, std::vector<double>& wr, std::vector<double>& wi,
               std::vector<double>& vr) {
    const int n = a.rows();
    wr.resize(n);
    wi.resize(n);
    vr.resize(static_cast<size_t>(n) * n);
    lapack_int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', 'V', n, a.data(), n, wr.data(),
                                    wi.data(), nullptr, n, vr.data(), n);
    return info == 0;
}

} // namespace fkpp
