#pragma once

#include "treeforms/integer.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace treeforms {

/// Dense integer matrix, row-major.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);
    /// Stacks row vectors; `cols` is used when `rows` is empty.
    static IntMatrix from_rows(const std::vector<Vector>& rows, std::size_t cols);
    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const;
    std::vector<Vector> row_vectors() const;
    IntMatrix transpose() const;
    bool is_zero() const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
/// Row vector times matrix.
Vector operator*(const Vector& v, const IntMatrix& m);

std::string to_string(const IntMatrix& m);

/// Exact determinant (fraction-free Bareiss elimination).
Integer determinant(const IntMatrix& m);

/// Resource caps for integer linear algebra.
struct MatrixLimits {
    std::size_t max_rows = 200000;
    std::size_t max_cols = 20000;
    /// Bound on entry size during elimination, in bits.
    std::size_t max_entry_bits = 1u << 16;
};

/// Row-style Hermite normal form of the row lattice.
///
/// `basis` has `rank` rows, each with a positive pivot strictly to the right
/// of the previous one; entries above a pivot are reduced into [0, pivot).
/// When requested, `transform` is unimodular with transform * A = [basis; 0]
/// and its last rows.size() - rank rows span the left kernel of A.
struct Echelon {
    std::vector<Vector> basis;
    std::vector<std::size_t> pivots;
    std::vector<Vector> transform;
    std::size_t rank() const { return basis.size(); }
};

Echelon hermite_rows(std::vector<Vector> rows, std::size_t cols, bool track_transform = false,
                     const MatrixLimits& limits = {});

/// Basis (in Hermite form) of { z : z * A = 0 }.
std::vector<Vector> left_kernel(const IntMatrix& a, const MatrixLimits& limits = {});

/// Solves y * basis = v for an Echelon basis. Returns false when v is not in
/// the row lattice.
bool solve_in_lattice(const Echelon& e, const Vector& v, Vector& y);

/// U * A * V = S with U, V unimodular, S diagonal, d1 | d2 | ... and di >= 0.
struct SmithDecomposition {
    IntMatrix u, s, v;
    /// Inverses of u and v, maintained alongside them.
    IntMatrix u_inverse, v_inverse;

    std::vector<Integer> diagonal() const;
    /// Nonzero diagonal entries.
    std::vector<Integer> invariant_factors() const;
    /// U*A*V == S, diagonal shape, divisibility chain, and both stored
    /// inverses check out (so U and V are unimodular).
    bool verify(const IntMatrix& a) const;
};

SmithDecomposition smith_normal_form(const IntMatrix& a, const MatrixLimits& limits = {});

}  // namespace treeforms
