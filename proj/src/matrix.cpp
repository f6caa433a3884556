#include "treeforms/matrix.hpp"

#include "treeforms/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace treeforms {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InvalidInput("ragged matrix literal");
        for (long long x : r) data_.emplace_back(x);
    }
}

IntMatrix IntMatrix::from_rows(const std::vector<Vector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw InvalidInput("row " + std::to_string(i) + " has length " + std::to_string(rows[i].size()) +
                               ", expected " + std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Vector IntMatrix::row(std::size_t r) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

std::vector<Vector> IntMatrix::row_vectors() const {
    std::vector<Vector> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidInput("matrix product dimension mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Integer& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (b(k, j) != 0) c(i, j) += x * b(k, j);
        }
    return c;
}

Vector operator*(const Vector& v, const IntMatrix& m) {
    if (v.size() != m.rows())
        throw InvalidInput("vector of length " + std::to_string(v.size()) + " applied to a " +
                           std::to_string(m.rows()) + "-row matrix");
    Vector out(m.cols());
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(k, j) != 0) out[j] += v[k] * m(k, j);
    }
    return out;
}

std::string to_string(const IntMatrix& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw InvalidInput("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

namespace {

void check_bits(const Vector& row, std::size_t from, const MatrixLimits& limits) {
    for (std::size_t j = from; j < row.size(); ++j)
        if (row[j] != 0 && boost::multiprecision::msb(abs(row[j])) >= limits.max_entry_bits)
            throw ResourceLimit("matrix entry exceeds " + std::to_string(limits.max_entry_bits) + " bits");
}

// row[i] -= q * row[p] from column `from` on.
void subtract_row(Vector& target, const Vector& source, const Integer& q, std::size_t from) {
    for (std::size_t j = from; j < target.size(); ++j)
        if (source[j] != 0) target[j] -= q * source[j];
}

}  // namespace

Echelon hermite_rows(std::vector<Vector> rows, std::size_t cols, bool track_transform,
                     const MatrixLimits& limits) {
    const std::size_t n = rows.size();
    if (n > limits.max_rows || cols > limits.max_cols)
        throw ResourceLimit("matrix of size " + std::to_string(n) + "x" + std::to_string(cols) +
                            " exceeds the configured caps");
    for (std::size_t i = 0; i < n; ++i)
        if (rows[i].size() != cols) throw InvalidInput("relation " + std::to_string(i) + " has wrong length");

    std::vector<Vector> t;
    if (track_transform)
        for (std::size_t i = 0; i < n; ++i) t.push_back(unit_vector(n, i));

    Echelon out;
    std::size_t top = 0;
    for (std::size_t c = 0; c < cols && top < n; ++c) {
        std::size_t p = n;
        for (;;) {
            p = n;
            for (std::size_t i = top; i < n; ++i) {
                if (rows[i][c] == 0) continue;
                if (p == n || abs(rows[i][c]) < abs(rows[p][c])) p = i;
                if (abs(rows[p][c]) == 1) break;
            }
            if (p == n) break;
            bool others = false;
            for (std::size_t i = top; i < n; ++i) {
                if (i == p || rows[i][c] == 0) continue;
                Integer q = div_round(rows[i][c], rows[p][c]);
                subtract_row(rows[i], rows[p], q, c);
                if (track_transform) subtract_row(t[i], t[p], q, 0);
                if (rows[i][c] != 0) others = true;
            }
            if (!others) break;
        }
        if (p == n) continue;
        std::swap(rows[p], rows[top]);
        if (track_transform) std::swap(t[p], t[top]);
        if (rows[top][c] < 0) {
            for (auto& x : rows[top]) x = -x;
            if (track_transform)
                for (auto& x : t[top]) x = -x;
        }
        for (std::size_t i = 0; i < top; ++i) {
            if (rows[i][c] == 0) continue;
            Integer q = div_floor(rows[i][c], rows[top][c]);
            if (q == 0) continue;
            subtract_row(rows[i], rows[top], q, c);
            if (track_transform) subtract_row(t[i], t[top], q, 0);
        }
        check_bits(rows[top], c, limits);
        out.pivots.push_back(c);
        ++top;
    }
    rows.resize(top);
    out.basis = std::move(rows);
    out.transform = std::move(t);
    return out;
}

std::vector<Vector> left_kernel(const IntMatrix& a, const MatrixLimits& limits) {
    Echelon e = hermite_rows(a.row_vectors(), a.cols(), true, limits);
    std::vector<Vector> kernel(e.transform.begin() + static_cast<std::ptrdiff_t>(e.rank()), e.transform.end());
    return hermite_rows(std::move(kernel), a.rows(), false, limits).basis;
}

bool solve_in_lattice(const Echelon& e, const Vector& v, Vector& y) {
    Vector r = v;
    y.assign(e.rank(), Integer(0));
    for (std::size_t k = 0; k < e.rank(); ++k) {
        const std::size_t c = e.pivots[k];
        if (r[c] == 0) continue;
        const Integer& pivot = e.basis[k][c];
        if (r[c] % pivot != 0) return false;
        y[k] = r[c] / pivot;
        subtract_row(r, e.basis[k], y[k], c);
    }
    return is_zero(r);
}

std::vector<Integer> SmithDecomposition::diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i) d.push_back(s(i, i));
    return d;
}

std::vector<Integer> SmithDecomposition::invariant_factors() const {
    std::vector<Integer> d;
    for (auto& x : diagonal())
        if (x != 0) d.push_back(x);
    return d;
}

bool SmithDecomposition::verify(const IntMatrix& a) const {
    if (u.rows() != a.rows() || v.cols() != a.cols()) return false;
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j)
            if (i != j && s(i, j) != 0) return false;
    auto d = diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0) return false;
        if (i + 1 < d.size()) {
            if (d[i] == 0 && d[i + 1] != 0) return false;
            if (d[i] != 0 && d[i + 1] % d[i] != 0) return false;
        }
    }
    if (!(v * v_inverse == IntMatrix::identity(v.rows()))) return false;
    if (!(u * u_inverse == IntMatrix::identity(u.rows()))) return false;
    return u * a * v == s;
}

namespace {

struct SmithState {
    IntMatrix s, u, u_inv, v, v_inv;

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < s.cols(); ++j) std::swap(s(a, j), s(b, j));
        for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(a, j), u(b, j));
        for (std::size_t i = 0; i < u_inv.rows(); ++i) std::swap(u_inv(i, a), u_inv(i, b));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < s.rows(); ++i) std::swap(s(i, a), s(i, b));
        for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, a), v(i, b));
        for (std::size_t j = 0; j < v_inv.cols(); ++j) std::swap(v_inv(a, j), v_inv(b, j));
    }
    // row_i -= q * row_t
    void row_op(std::size_t i, std::size_t t, const Integer& q) {
        if (q == 0) return;
        for (std::size_t j = 0; j < s.cols(); ++j)
            if (s(t, j) != 0) s(i, j) -= q * s(t, j);
        for (std::size_t j = 0; j < u.cols(); ++j)
            if (u(t, j) != 0) u(i, j) -= q * u(t, j);
        for (std::size_t r = 0; r < u_inv.rows(); ++r)
            if (u_inv(r, i) != 0) u_inv(r, t) += q * u_inv(r, i);
    }
    // col_j -= q * col_t
    void col_op(std::size_t j, std::size_t t, const Integer& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < s.rows(); ++i)
            if (s(i, t) != 0) s(i, j) -= q * s(i, t);
        for (std::size_t i = 0; i < v.rows(); ++i)
            if (v(i, t) != 0) v(i, j) -= q * v(i, t);
        for (std::size_t c = 0; c < v_inv.cols(); ++c)
            if (v_inv(j, c) != 0) v_inv(t, c) += q * v_inv(j, c);
    }
    void negate_row(std::size_t t) {
        for (std::size_t j = 0; j < s.cols(); ++j) s(t, j) = -s(t, j);
        for (std::size_t j = 0; j < u.cols(); ++j) u(t, j) = -u(t, j);
        for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv(r, t) = -u_inv(r, t);
    }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a, const MatrixLimits& limits) {
    if (a.rows() > limits.max_cols || a.cols() > limits.max_cols)
        throw ResourceLimit("smith_normal_form: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " exceeds the dense-transform cap of " + std::to_string(limits.max_cols));
    const std::size_t r = a.rows(), c = a.cols();
    SmithState st{a, IntMatrix::identity(r), IntMatrix::identity(r), IntMatrix::identity(c),
                  IntMatrix::identity(c)};
    IntMatrix& s = st.s;

    for (std::size_t t = 0; t < std::min(r, c); ++t) {
        bool found = false;
        for (;;) {
            // Smallest nonzero |entry| in the trailing block; ties go to the
            // lowest row, then the lowest column.
            std::size_t pi = r, pj = c;
            for (std::size_t i = t; i < r && !(pi < r && abs(s(pi, pj)) == 1); ++i)
                for (std::size_t j = t; j < c; ++j) {
                    if (s(i, j) == 0) continue;
                    if (pi == r || abs(s(i, j)) < abs(s(pi, pj))) {
                        pi = i;
                        pj = j;
                        if (abs(s(i, j)) == 1) break;
                    }
                }
            if (pi == r) break;
            found = true;
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);

            bool dirty = false;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (s(i, t) == 0) continue;
                st.row_op(i, t, div_round(s(i, t), s(t, t)));
                if (s(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (s(t, j) == 0) continue;
                st.col_op(j, t, div_round(s(t, j), s(t, t)));
                if (s(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (s(i, j) % s(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == r) break;
            st.row_op(t, bad, Integer(-1));
        }
        if (!found) break;
        if (s(t, t) < 0) st.negate_row(t);
        if (s(t, t) != 0 && boost::multiprecision::msb(s(t, t)) >= limits.max_entry_bits)
            throw ResourceLimit("smith_normal_form: entry exceeds the bit cap");
    }
    SmithDecomposition out{std::move(st.u), std::move(st.s), std::move(st.v), std::move(st.u_inv),
                           std::move(st.v_inv)};
    if (!out.verify(a))
        throw std::logic_error("smith_normal_form: decomposition failed verification");
    return out;
}

}  // namespace treeforms
