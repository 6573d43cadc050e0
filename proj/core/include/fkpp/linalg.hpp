#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace fkpp {

/// Dense row-major matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    std::vector<double> multiply(const std::vector<double>& x) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// General band matrix in LAPACK storage (column-major, kl extra rows for LU fill).
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(int n, int kl, int ku);

    int n() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }

    /// Valid only for |i - j| within the band; unchecked in release builds.
    double& at(int i, int j) { return ab_[index(i, j)]; }
    double at(int i, int j) const { return ab_[index(i, j)]; }
    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }

    std::vector<double> multiply(const std::vector<double>& x) const;
    DenseMatrix to_dense() const;

    double* storage() { return ab_.data(); }
    const double* storage() const { return ab_.data(); }
    int ldab() const { return 2 * kl_ + ku_ + 1; }

private:
    size_t index(int i, int j) const {
        return static_cast<size_t>(j) * ldab() + (kl_ + ku_ + i - j);
    }
    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> ab_;
};

/// Square system assembled either banded or dense; the steady Jacobian picks
/// banded when the convolution window is narrow relative to the matrix and
/// dense otherwise.
class LinearSystem {
public:
    static LinearSystem banded(int n, int kl, int ku);
    static LinearSystem dense(int n);

    int n() const { return n_; }
    bool is_banded() const { return banded_; }

    void add(int i, int j, double v);
    void set(int i, int j, double v);
    double get(int i, int j) const;

    std::vector<double> multiply(const std::vector<double>& x) const;
    DenseMatrix to_dense() const;

    BandMatrix& band() { return band_; }
    const BandMatrix& band() const { return band_; }
    DenseMatrix& dense_ref() { return dense_; }
    const DenseMatrix& dense_ref() const { return dense_; }

private:
    int n_ = 0;
    bool banded_ = false;
    BandMatrix band_;
    DenseMatrix dense_;
};

/// LU factorisation (dgbtrf/dgetrf); consumes the assembled system.
/// Throws SingularJacobianError on an exactly singular pivot.
class LinearFactor {
public:
    explicit LinearFactor(LinearSystem sys);

    void solve_in_place(std::vector<double>& b) const;
    std::vector<double> solve(std::vector<double> b) const { solve_in_place(b); return b; }

private:
    LinearSystem sys_;
    std::vector<int32_t> ipiv_;
};

/// All eigenvalues of a symmetric matrix, ascending (dsyevr).
std::vector<double> sym_eigenvalues(const DenseMatrix& a);

struct TopEigen {
    std::vector<double> values;      // k largest, descending
    std::vector<double> top_vector;  // eigenvector of values[0]; empty unless requested
};

/// k algebraically largest eigenpairs of a symmetric dense matrix.
TopEigen sym_eigen_top(const DenseMatrix& a, int k, bool want_vector);

/// k largest eigenpairs of a symmetric band matrix given in LAPACK 'U' band
/// storage (column-major, ldab = kd + 1).
TopEigen sym_band_eigen_top(int n, int kd, const std::vector<double>& band_upper, int k,
                            bool want_vector);

/// Eigenvalues of a general real matrix (dgeev).
std::vector<std::complex<double>> general_eigenvalues(DenseMatrix a);

/// Full dgeev of a small matrix with right eigenvectors (LAPACK layout: for a
/// complex pair, adjacent columns hold real and imaginary parts). Returns
/// false on LAPACK failure.
bool small_eig(DenseMatrix a, std::vector<double>& wr, std::vector<double>& wi,
               std::vector<double>& vr);

} // namespace fkpp
