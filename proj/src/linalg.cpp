#include "bandgraph/linalg.hpp"

#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "bandgraph/errors.hpp"

namespace bandgraph {

CMatrix hermitian_part(const CMatrix& m) {
    CMatrix h = m;
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = Complex(m(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            h(i, j) = avg;
            h(j, i) = std::conj(avg);
        }
    }
    return h;
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p, q).
void rotate(CMatrix& a, std::optional<CMatrix>& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const Complex phase = apq / r;  // a_pq = r * phase
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    const double theta = (aqq - app) / (2.0 * r);
    double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const std::size_t n = a.rows();
    const Complex ce = std::conj(phase);
    // columns: A <- A U
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp - s * ce * akq;
        a(k, q) = s * akp + c * ce * akq;
    }
    // rows: A <- U^H A
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk - s * phase * aqk;
        a(q, k) = s * apk + c * phase * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = Complex(app - t * r, 0.0);
    a(q, q) = Complex(aqq + t * r, 0.0);

    if (v) {
        CMatrix& vm = *v;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = vm(k, p);
            const Complex vkq = vm(k, q);
            vm(k, p) = c * vkp - s * ce * vkq;
            vm(k, q) = s * vkp + c * ce * vkq;
        }
    }
}

}  // namespace

EigenResult hermitian_eigs(const CMatrix& m, bool want_vectors) {
    if (!m.square()) throw ParameterError("hermitian_eigs: matrix is not square");
    for (const auto& x : m.data())
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw NumericInputError("hermitian_eigs: non-finite matrix entry");

    const std::size_t n = m.rows();
    CMatrix a = m;
    std::optional<CMatrix> v;
    if (want_vectors) v = CMatrix::identity(n);

    const double norm = m.frobenius_norm();
    if (norm > 0.0) {
        const double target = 1e-13 * norm;
        for (int sweep = 0; sweep < 50; ++sweep) {
            if (off_diagonal_norm(a) <= target) break;
            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenResult result;
    result.values.reserve(n);
    for (std::size_t k : order) result.values.push_back(a(k, k).real());
    if (v) {
        CMatrix sorted(n, n);
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t row = 0; row < n; ++row) sorted(row, col) = (*v)(row, order[col]);
        result.vectors = std::move(sorted);
    }
    return result;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) { return hermitian_eigs(m, false).values; }

double spectral_radius_nonneg(const RMatrix& m) {
    if (!m.square()) throw ParameterError("spectral_radius_nonneg: matrix is not square");
    for (double x : m.data()) {
        if (!std::isfinite(x)) throw NumericInputError("spectral_radius_nonneg: non-finite entry");
        if (x < 0.0) throw DomainError("spectral_radius_nonneg: negative entry");
    }
    const std::size_t n = m.rows();
    if (n == 0) return 0.0;

    // Iterate on M + I: same Perron vector, and primitive whenever M is irreducible.
    std::vector<double> x(n, 1.0), y(n);
    double rho = -1.0;
    for (int it = 0; it < 100000; ++it) {
        double sx = 0.0, sy = 0.0, ymax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = x[i];
            for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * x[j];
            y[i] = acc;
            sx += x[i];
            sy += acc;
            ymax = std::max(ymax, acc);
        }
        const double next = sy / sx;
        if (std::abs(next - rho) <= 1e-12 * next) return next - 1.0;
        rho = next;
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ymax;
    }
    throw ConvergenceError("spectral_radius_nonneg: power iteration did not converge");
}

namespace {

template <typename T>
bool strongly_connected(const Matrix<T>& m) {
    const std::size_t n = m.rows();
    if (n <= 1) return true;
    auto reach = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::queue<std::size_t> todo;
        todo.push(0);
        seen[0] = 1;
        std::size_t count = 1;
        while (!todo.empty()) {
            const std::size_t u = todo.front();
            todo.pop();
            for (std::size_t w = 0; w < n; ++w) {
                const T entry = transpose ? m(w, u) : m(u, w);
                if (!seen[w] && std::abs(entry) != 0.0) {
                    seen[w] = 1;
                    ++count;
                    todo.push(w);
                }
            }
        }
        return count == n;
    };
    return reach(false) && reach(true);
}

struct LuFactor {
    CMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    double min_pivot = 0.0;
};

LuFactor lu_factor(const CMatrix& m) {
    const std::size_t n = m.rows();
    LuFactor f{m, std::vector<std::size_t>(n), 1, std::numeric_limits<double>::infinity()};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    CMatrix& a = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                piv = i;
            }
        f.min_pivot = std::min(f.min_pivot, best);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        if (best == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex factor = a(i, k) / a(k, k);
            a(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
        }
    }
    return f;
}

Complex lu_det(const LuFactor& f) {
    Complex d(f.sign, 0.0);
    for (std::size_t i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
    return d;
}

// Solves A X = B column by column.
CMatrix lu_solve(const LuFactor& f, const CMatrix& b) {
    const std::size_t n = f.lu.rows();
    CMatrix x(n, b.cols());
    for (std::size_t col = 0; col < b.cols(); ++col) {
        std::vector<Complex> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = b(f.perm[i], col);
            for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * y[j];
            y[i] = acc;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Complex acc = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(ii, j) * x(j, col);
            x(ii, col) = acc / f.lu(ii, ii);
        }
    }
    return x;
}

}  // namespace

bool is_irreducible(const RMatrix& m) { return strongly_connected(m); }
bool is_irreducible(const CMatrix& m) { return strongly_connected(m); }

Complex determinant(const CMatrix& m) {
    if (!m.square()) throw ParameterError("determinant: matrix is not square");
    if (m.rows() == 0) return 1.0;
    return lu_det(lu_factor(m));
}

Complex block_determinant(const CMatrix& m, std::size_t split) {
    if (!m.square()) throw ParameterError("block_determinant: matrix is not square");
    const std::size_t n = m.rows();
    if (split > n) throw ParameterError("block_determinant: split exceeds matrix size");
    if (split == 0 || split == n) return determinant(m);

    const std::size_t r = n - split;
    CMatrix a(split, split), b(split, r), c(r, split), d(r, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < split && j < split) a(i, j) = m(i, j);
            else if (i < split) b(i, j - split) = m(i, j);
            else if (j < split) c(i - split, j) = m(i, j);
            else d(i - split, j - split) = m(i, j);
        }

    const LuFactor fa = lu_factor(a);
    const double scale = std::max(a.max_abs(), 1e-300);
    if (!(fa.min_pivot > 1e-14 * scale))
        throw PivotError("block_determinant: leading block is singular");
    const CMatrix schur = d - c * lu_solve(fa, b);
    return lu_det(fa) * determinant(schur);
}

std::optional<BitVector> gf2_solve(const BitMatrix& a, const BitVector& b) {
    if (a.size() != b.size()) throw ParameterError("gf2_solve: row count mismatch");
    const std::size_t cols = a.empty() ? 0 : a.front().size();
    std::vector<BitVector> rows;
    rows.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != cols) throw ParameterError("gf2_solve: ragged matrix");
        BitVector row(cols + 1);
        for (std::size_t j = 0; j < cols; ++j) row[j] = a[i][j] & 1u;
        row[cols] = b[i] & 1u;
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && rows[i][col])
                for (std::size_t j = col; j <= cols; ++j) rows[i][j] ^= rows[rank][j];
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
        if (rows[i][cols]) return std::nullopt;

    BitVector x(cols, 0);
    for (std::size_t i = 0; i < rank; ++i) x[pivot_col[i]] = rows[i][cols];
    return x;
}

std::vector<IntVector> hermite_normal_form(const std::vector<IntVector>& vs, std::size_t dim) {
    std::vector<IntVector> rows;
    for (const auto& v : vs) {
        if (v.size() != dim) throw ParameterError("hermite_normal_form: vector length mismatch");
        if (std::any_of(v.begin(), v.end(), [](long long x) { return x != 0; })) rows.push_back(v);
    }

    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < dim && pivot_row < rows.size(); ++col) {
        // Euclid on column `col` over rows pivot_row.. until one nonzero entry remains.
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t i = pivot_row; i < rows.size(); ++i)
                if (rows[i][col] != 0 && (best == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[best][col])))
                    best = i;
            if (best == rows.size()) break;
            std::swap(rows[pivot_row], rows[best]);
            bool reduced_all = true;
            for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                const long long f = rows[i][col] / rows[pivot_row][col];
                for (std::size_t j = col; j < dim; ++j) rows[i][j] -= f * rows[pivot_row][j];
                if (rows[i][col] != 0) reduced_all = false;
            }
            if (reduced_all) break;
        }
        if (rows[pivot_row][col] == 0) continue;
        if (rows[pivot_row][col] < 0)
            for (auto& x : rows[pivot_row]) x = -x;
        const long long p = rows[pivot_row][col];
        for (std::size_t i = 0; i < pivot_row; ++i) {
            long long f = rows[i][col] / p;
            if (rows[i][col] - f * p < 0) --f;
            for (std::size_t j = col; j < dim; ++j) rows[i][j] -= f * rows[pivot_row][j];
        }
        ++pivot_row;
    }
    rows.resize(pivot_row);
    return rows;
}

bool integer_lattice_full(const std::vector<IntVector>& vs, std::size_t dim) {
    const auto hnf = hermite_normal_form(vs, dim);
    if (hnf.size() != dim) return false;
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t lead = 0;
        while (lead < dim && hnf[i][lead] == 0) ++lead;
        if (lead >= dim || hnf[i][lead] != 1) return false;
    }
    return true;
}

}  // namespace bandgraph
