#pragma once

#include "treeforms/matrix.hpp"
#include "treeforms/quadratic.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace treeforms {

/// Symmetric bilinear form on Z^r.
class SymIntForm {
  public:
    /// Throws InvalidInput unless the matrix is square and symmetric.
    explicit SymIntForm(IntMatrix m);

    static SymIntForm E8();
    static SymIntForm diagonal(const std::vector<long long>& entries);
    /// [[0, 1], [1, 0]].
    static SymIntForm hyperbolic();

    std::size_t rank() const { return m_.rows(); }
    const IntMatrix& matrix() const { return m_; }
    Integer operator()(const Vector& x, const Vector& y) const;
    Integer determinant() const;
    bool unimodular() const;
    /// All diagonal entries even.
    bool even() const;

  private:
    IntMatrix m_;
};

/// "E8", "H", or "diag(a, b, ...)".
SymIntForm named_form(const std::string& name);
/// {"matrix": [[int]]}.
SymIntForm sym_form_from_json(const nlohmann::json& j);

/// Positive minus negative pivots of an exact rational congruence
/// diagonalization. Throws InvalidInput on a degenerate form.
int signature(const SymIntForm& f);

bool is_characteristic(const SymIntForm& f, const Vector& c);
/// Solves f c = diag(f) mod 2; entries in {0, 1}. Throws InvalidInput unless
/// f is unimodular.
Vector find_characteristic(const SymIntForm& f);

/// ((f(c, c) - signature) / 8) mod 2. Throws InvalidInput for a non-unimodular
/// form or non-characteristic c, and std::logic_error if 8 does not divide.
int tau(const SymIntForm& f, const Vector& c);

struct TorsorReport {
    int lhs = 0;  // tau(c + 2x) - tau(c) mod 2
    int rhs = 0;  // (f(c, x) + f(x, x)) / 2 mod 2
    bool ok() const { return lhs == rhs; }
};

TorsorReport torsor_check(const SymIntForm& f, const Vector& c, const Vector& x);

/// tau_c + ((f(c, c) - signature) / 8) mod 2.
int ks(const SymIntForm& f, const Vector& c, int tau_c);

// ---- forms over the two-element field -------------------------------------------

using Z2Matrix = std::vector<std::vector<int>>;

enum class Parity { even, odd };

/// Throws InvalidInput unless the form is square, symmetric, 0/1 valued and
/// nonsingular.
Parity parity(const Z2Matrix& form);
bool has_z2_refinement(const Z2Matrix& form);

/// q given on the basis, extended by q(x + y) = q(x) + q(y) + form(x, y).
struct Z2QuadraticSpace {
    Z2Matrix form;
    std::vector<int> q;

    std::size_t dim() const { return q.size(); }
    int value(const std::vector<int>& x) const;

    /// Sum of `copies` hyperbolic planes with the given basis values.
    static Z2QuadraticSpace hyperbolic(std::size_t copies, std::vector<int> q);
};

Z2QuadraticSpace orthogonal_sum(const Z2QuadraticSpace& a, const Z2QuadraticSpace& b);

/// Sum of q(a_i) q(b_i) over a symplectic basis. Throws InvalidInput for a
/// singular or odd form.
int arf_z2(const Z2QuadraticSpace& v);
/// 0 when q has more zeros than ones. Enumerates all 2^d vectors (d <= 24).
int arf_democratic(const Z2QuadraticSpace& v);

/// mu: Z2^d -> Z4 with mu(x + y) = mu(x) + mu(y) + 2 form(x, y) and
/// mu(x) = form(x, x) mod 2.
struct Z4Refinement {
    Z2Matrix form;
    std::vector<int> mu;

    std::size_t dim() const { return mu.size(); }
    int value(const std::vector<int>& x) const;

    /// mu = 2q for an even form.
    static Z4Refinement doubled(const Z2QuadraticSpace& v);
};

Z4Refinement orthogonal_sum(const Z4Refinement& a, const Z4Refinement& b);

/// Element of Z[z]/(z^4 + 1), z a primitive eighth root of unity.
using Cyclotomic8 = std::array<Integer, 4>;

/// Sum over x of i^mu(x).
Cyclotomic8 gauss_sum(const Z4Refinement& r);

/// beta in Z8 with gauss_sum = sqrt(2)^d z^beta. Throws InvalidInput for a
/// singular form or mu(e_i) != form(e_i, e_i) mod 2, AxiomViolation when the
/// sum has the wrong magnitude.
int brown_z8(const Z4Refinement& r);

/// The refinement as a form on A = Z2^d into the quadratic group Z4 -> Z2 -> Z4.
QuadraticFormData to_form_data(const Z4Refinement& r);

}  // namespace treeforms
