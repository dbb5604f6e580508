#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace bandgraph {

using Complex = std::complex<double>;

/// Dense row-major matrix. Sizes here are tiny (a few dozen rows at most).
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    static Matrix diagonal(const std::vector<double>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = T(d[i]);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const noexcept { return data_; }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(T s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if constexpr (std::is_same_v<T, Complex>)
                    m(j, i) = std::conj((*this)(i, j));
                else
                    m(j, i) = (*this)(i, j);
            }
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& x : data_) s += std::norm(x);
        return std::sqrt(s);
    }

    /// Entrywise l1 norm, sum of |M_jk|.
    double entrywise_l1() const {
        double s = 0.0;
        for (const auto& x : data_) s += std::abs(x);
        return s;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<Complex>;
using RMatrix = Matrix<double>;

/// Replaces M by (M + M^H)/2.
CMatrix hermitian_part(const CMatrix& m);

/// Removes row/column `index` of a square matrix.
template <typename T>
Matrix<T> remove_row_col(const Matrix<T>& m, std::size_t index) {
    const std::size_t n = m.rows();
    Matrix<T> out(n - 1, n - 1);
    for (std::size_t i = 0, oi = 0; i < n; ++i) {
        if (i == index) continue;
        for (std::size_t j = 0, oj = 0; j < n; ++j) {
            if (j == index) continue;
            out(oi, oj++) = m(i, j);
        }
        ++oi;
    }
    return out;
}

struct EigenResult {
    std::vector<double> values;          // ascending, with multiplicity
    std::optional<CMatrix> vectors;      // column k belongs to values[k]
};

/// All eigenvalues (and optionally eigenvectors) of a Hermitian matrix.
///
/// Cyclic Jacobi with complex Givens rotations. Sweeps stop once the
/// off-diagonal Frobenius norm drops below 1e-13 * ||M||_F, or after 50 sweeps.
/// Throws NumericInputError on non-finite input.
EigenResult hermitian_eigs(const CMatrix& m, bool want_vectors = false);

/// Shorthand for hermitian_eigs(m).values.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// Perron root of a square matrix with nonnegative entries (power iteration).
/// Throws DomainError on a negative entry and ConvergenceError after 1e5 steps.
double spectral_radius_nonneg(const RMatrix& m);

/// True iff the support digraph of `m` is strongly connected.
bool is_irreducible(const RMatrix& m);
bool is_irreducible(const CMatrix& m);

/// Determinant by LU with partial pivoting.
Complex determinant(const CMatrix& m);

/// det M = det A * det(D - C A^{-1} B) with A the leading `split` x `split` block.
/// split == 0 or split == n degenerates to a plain determinant.
/// Throws PivotError if A is numerically singular.
Complex block_determinant(const CMatrix& m, std::size_t split);

using BitVector = std::vector<std::uint8_t>;
using BitMatrix = std::vector<BitVector>;

/// Solves A x = b over GF(2). Free variables are set to zero.
std::optional<BitVector> gf2_solve(const BitMatrix& a, const BitVector& b);

using IntVector = std::vector<long long>;

/// Row-style Hermite normal form of the integer span of `vs` (nonzero rows only).
std::vector<IntVector> hermite_normal_form(const std::vector<IntVector>& vs, std::size_t dim);

/// True iff the vectors span all of Z^dim.
bool integer_lattice_full(const std::vector<IntVector>& vs, std::size_t dim);

}  // namespace bandgraph
