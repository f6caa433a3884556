#include "treeforms/lattice.hpp"

#include "treeforms/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <stdexcept>

namespace treeforms {

using Rational = boost::multiprecision::cpp_rational;

// ---- SymIntForm ------------------------------------------------------------------

SymIntForm::SymIntForm(IntMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidInput("form matrix must be square");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = i + 1; j < m_.cols(); ++j)
            if (m_(i, j) != m_(j, i))
                throw InvalidInput("form matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                                   ")");
}

SymIntForm SymIntForm::E8() {
    // Cartan matrix; the chain 1-3-4-5-6-7-8 with 2 attached to 4.
    IntMatrix m(8, 8);
    const std::pair<int, int> edges[] = {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}};
    for (std::size_t i = 0; i < 8; ++i) m(i, i) = 2;
    for (auto [a, b] : edges) m(a, b) = m(b, a) = -1;
    return SymIntForm(std::move(m));
}

SymIntForm SymIntForm::diagonal(const std::vector<long long>& entries) {
    IntMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return SymIntForm(std::move(m));
}

SymIntForm SymIntForm::hyperbolic() { return SymIntForm(IntMatrix{{0, 1}, {1, 0}}); }

Integer SymIntForm::operator()(const Vector& x, const Vector& y) const {
    if (x.size() != rank() || y.size() != rank()) throw InvalidInput("vector length does not match the form rank");
    Integer s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < rank(); ++j)
            if (y[j] != 0) s += x[i] * m_(i, j) * y[j];
    }
    return s;
}

Integer SymIntForm::determinant() const { return treeforms::determinant(m_); }

bool SymIntForm::unimodular() const { return abs(determinant()) == 1; }

bool SymIntForm::even() const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (parity(m_(i, i)) != 0) return false;
    return true;
}

SymIntForm named_form(const std::string& name) {
    std::string s;
    for (char ch : name)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s == "E8") return SymIntForm::E8();
    if (s == "H") return SymIntForm::hyperbolic();
    if (s.rfind("diag(", 0) == 0 && s.size() > 6 && s.back() == ')') {
        std::vector<long long> entries;
        std::string body = s.substr(5, s.size() - 6);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t comma = body.find(',', pos);
            std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                std::size_t used = 0;
                entries.push_back(std::stoll(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw InvalidInput("bad diagonal entry '" + tok + "' in " + name);
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return SymIntForm::diagonal(entries);
    }
    throw InvalidInput("unknown named form '" + name + "' (expected E8, H or diag(...))");
}

SymIntForm sym_form_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("matrix")) throw InvalidInput("form: missing field 'matrix'");
    const auto& rows = j["matrix"];
    if (!rows.is_array()) throw InvalidInput("form.matrix: expected an array of rows");
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        vs.push_back(vector_from_json(rows[i], "form.matrix[" + std::to_string(i) + "]"));
        if (vs.back().size() != rows.size())
            throw InvalidInput("form.matrix[" + std::to_string(i) + "]: expected " + std::to_string(rows.size()) +
                               " entries");
    }
    return SymIntForm(IntMatrix::from_rows(vs, rows.size()));
}

int signature(const SymIntForm& f) {
    const std::size_t n = f.rank();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(f.matrix()(i, j));
    // Congruence moves: each row operation is mirrored on the columns.
    auto add_multiple = [&](std::size_t target, std::size_t source, const Rational& c) {
        for (std::size_t j = 0; j < n; ++j) a[target][j] += c * a[source][j];
        for (std::size_t i = 0; i < n; ++i) a[i][target] += c * a[i][source];
    };
    auto swap = [&](std::size_t x, std::size_t y) {
        std::swap(a[x], a[y]);
        for (auto& row : a) std::swap(row[x], row[y]);
    };
    int sig = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = n;
        for (std::size_t i = k; i < n && pivot == n; ++i)
            if (a[i][i] != 0) pivot = i;
        if (pivot == n) {
            // Zero diagonal: a[i][j] != 0 makes row i + row j a nonzero pivot.
            for (std::size_t i = k; i < n && pivot == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (a[i][j] != 0) {
                        add_multiple(i, j, 1);
                        pivot = i;
                        break;
                    }
            if (pivot == n) throw InvalidInput("degenerate form");
        }
        swap(k, pivot);
        for (std::size_t r = k + 1; r < n; ++r)
            if (a[r][k] != 0) add_multiple(r, k, -a[r][k] / a[k][k]);
        sig += a[k][k] > 0 ? 1 : -1;
    }
    return sig;
}

bool is_characteristic(const SymIntForm& f, const Vector& c) {
    if (c.size() != f.rank()) throw InvalidInput("characteristic vector has the wrong length");
    for (std::size_t i = 0; i < f.rank(); ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < f.rank(); ++j) s += f.matrix()(i, j) * c[j];
        if (parity(s) != parity(f.matrix()(i, i))) return false;
    }
    return true;
}

Vector find_characteristic(const SymIntForm& f) {
    if (!f.unimodular()) throw InvalidInput("form is not unimodular");
    const std::size_t n = f.rank();
    // Augmented rows over GF(2): [f mod 2 | diag mod 2].
    std::vector<std::vector<int>> rows(n, std::vector<int>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = parity(f.matrix()(i, j));
        rows[i][n] = parity(f.matrix()(i, i));
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < n; ++c) {
        std::size_t p = r;
        while (p < n && rows[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(rows[p], rows[r]);
        for (std::size_t i = 0; i < n; ++i)
            if (i != r && rows[i][c])
                for (std::size_t j = 0; j <= n; ++j) rows[i][j] ^= rows[r][j];
        pivot_col.push_back(c);
        ++r;
    }
    Vector c = zero_vector(n);
    for (std::size_t i = 0; i < pivot_col.size(); ++i) c[pivot_col[i]] = rows[i][n];
    if (!is_characteristic(f, c)) throw std::logic_error("characteristic solve failed");
    return c;
}

namespace {

Integer eight_multiple(const SymIntForm& f, const Vector& c) {
    if (!f.unimodular()) throw InvalidInput("form is not unimodular");
    if (!is_characteristic(f, c)) throw InvalidInput("vector is not characteristic");
    Integer d = f(c, c) - signature(f);
    if (mod_floor(d, 8) != 0)
        throw std::logic_error("8 does not divide lambda(c,c) - signature = " + to_string(d));
    return d / 8;
}

}  // namespace

int tau(const SymIntForm& f, const Vector& c) { return parity(eight_multiple(f, c)); }

TorsorReport torsor_check(const SymIntForm& f, const Vector& c, const Vector& x) {
    TorsorReport rep;
    rep.lhs = static_cast<int>(mod_floor(tau(f, c + 2 * x) - tau(f, c), 2));
    Integer s = f(c, x) + f(x, x);
    if (parity(s) != 0) throw std::logic_error("lambda(c,x) + lambda(x,x) is odd for characteristic c");
    rep.rhs = parity(s / 2);
    return rep;
}

int ks(const SymIntForm& f, const Vector& c, int tau_c) {
    return static_cast<int>(mod_floor(Integer(tau_c) + eight_multiple(f, c), 2));
}

// ---- GF(2) ---------------------------------------------------------------------------

namespace {

using Mask = std::uint64_t;

constexpr std::size_t kMaxZ2Dim = 62;

std::vector<Mask> to_masks(const Z2Matrix& form) {
    const std::size_t d = form.size();
    if (d > kMaxZ2Dim) throw ResourceLimit("dimension over Z2 is capped at " + std::to_string(kMaxZ2Dim));
    std::vector<Mask> rows(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        if (form[i].size() != d) throw InvalidInput("Z2 form must be square");
        for (std::size_t j = 0; j < d; ++j) {
            if (form[i][j] != 0 && form[i][j] != 1) throw InvalidInput("Z2 form entries must be 0 or 1");
            if (form[i][j]) rows[i] |= Mask(1) << j;
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (form[i][j] != form[j][i]) throw InvalidInput("Z2 form is not symmetric");
    return rows;
}

bool nonsingular(std::vector<Mask> rows) {
    const std::size_t d = rows.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = r;
        while (p < d && !((rows[p] >> c) & 1)) ++p;
        if (p == d) return false;
        std::swap(rows[p], rows[r]);
        for (std::size_t i = 0; i < d; ++i)
            if (i != r && ((rows[i] >> c) & 1)) rows[i] ^= rows[r];
        ++r;
    }
    return true;
}

int bilinear(const std::vector<Mask>& rows, Mask x, Mask y) {
    int s = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if ((x >> i) & 1) s ^= __builtin_parityll(rows[i] & y);
    return s;
}

Mask to_mask(const std::vector<int>& x) {
    Mask m = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] & 1) m |= Mask(1) << i;
    return m;
}

std::vector<int> from_mask(Mask m, std::size_t d) {
    std::vector<int> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<int>((m >> i) & 1);
    return x;
}

Z2Matrix block_sum(const Z2Matrix& a, const Z2Matrix& b) {
    const std::size_t n = a.size(), m = b.size();
    Z2Matrix out(n + m, std::vector<int>(n + m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][j];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out[n + i][n + j] = b[i][j];
    return out;
}

void check_space(const Z2QuadraticSpace& v) {
    if (v.form.size() != v.q.size()) throw InvalidInput("q needs one value per basis vector");
    for (int x : v.q)
        if (x != 0 && x != 1) throw InvalidInput("q values must be 0 or 1");
}

}  // namespace

Parity parity(const Z2Matrix& form) {
    auto rows = to_masks(form);
    if (!nonsingular(rows)) throw InvalidInput("Z2 form is singular");
    for (std::size_t i = 0; i < form.size(); ++i)
        if (form[i][i]) return Parity::odd;
    return Parity::even;
}

bool has_z2_refinement(const Z2Matrix& form) { return parity(form) == Parity::even; }

int Z2QuadraticSpace::value(const std::vector<int>& x) const {
    const auto rows = to_masks(form);
    Mask m = to_mask(x);
    int s = 0;
    for (std::size_t i = 0; i < dim(); ++i)
        if ((m >> i) & 1) {
            s ^= q[i] & 1;
            s ^= __builtin_parityll(rows[i] & m & ((Mask(1) << i) - 1));
        }
    return s;
}

Z2QuadraticSpace Z2QuadraticSpace::hyperbolic(std::size_t copies, std::vector<int> q) {
    if (q.size() != 2 * copies) throw InvalidInput("hyperbolic space of dimension " + std::to_string(2 * copies) +
                                                   " needs " + std::to_string(2 * copies) + " q values");
    Z2Matrix form(2 * copies, std::vector<int>(2 * copies, 0));
    for (std::size_t k = 0; k < copies; ++k) form[2 * k][2 * k + 1] = form[2 * k + 1][2 * k] = 1;
    return Z2QuadraticSpace{std::move(form), std::move(q)};
}

Z2QuadraticSpace orthogonal_sum(const Z2QuadraticSpace& a, const Z2QuadraticSpace& b) {
    std::vector<int> q = a.q;
    q.insert(q.end(), b.q.begin(), b.q.end());
    return Z2QuadraticSpace{block_sum(a.form, b.form), std::move(q)};
}

int arf_z2(const Z2QuadraticSpace& v) {
    check_space(v);
    if (parity(v.form) != Parity::even) throw InvalidInput("odd form has no Z2 quadratic refinement");
    const auto rows = to_masks(v.form);
    const std::size_t d = v.dim();
    auto q = [&](Mask x) { return v.value(from_mask(x, d)); };
    std::vector<Mask> pool;
    for (std::size_t i = 0; i < d; ++i) pool.push_back(Mask(1) << i);
    int arf = 0;
    while (!pool.empty()) {
        Mask a = pool.front();
        pool.erase(pool.begin());
        if (a == 0) continue;
        auto it = std::find_if(pool.begin(), pool.end(), [&](Mask y) { return bilinear(rows, a, y) == 1; });
        if (it == pool.end()) throw InvalidInput("Z2 form is singular");
        Mask b = *it;
        pool.erase(it);
        // Project the rest onto the orthogonal complement of <a, b>.
        for (auto& w : pool) {
            Mask nw = w;
            if (bilinear(rows, w, b)) nw ^= a;
            if (bilinear(rows, w, a)) nw ^= b;
            w = nw;
        }
        arf ^= q(a) & q(b);
    }
    return arf;
}

int arf_democratic(const Z2QuadraticSpace& v) {
    check_space(v);
    if (parity(v.form) != Parity::even) throw InvalidInput("odd form has no Z2 quadratic refinement");
    const std::size_t d = v.dim();
    if (d > 24) throw ResourceLimit("democratic count is capped at dimension 24");
    std::uint64_t zeros = 0;
    for (Mask x = 0; x < (Mask(1) << d); ++x)
        if (v.value(from_mask(x, d)) == 0) ++zeros;
    return zeros > (Mask(1) << d) / 2 ? 0 : 1;
}

// ---- Z4 refinements and the Brown invariant ------------------------------------------

int Z4Refinement::value(const std::vector<int>& x) const {
    const auto rows = to_masks(form);
    Mask m = to_mask(x);
    int s = 0;
    for (std::size_t i = 0; i < dim(); ++i)
        if ((m >> i) & 1) {
            s += mu[i];
            s += 2 * __builtin_parityll(rows[i] & m & ((Mask(1) << i) - 1));
        }
    return ((s % 4) + 4) % 4;
}

Z4Refinement Z4Refinement::doubled(const Z2QuadraticSpace& v) {
    check_space(v);
    if (parity(v.form) != Parity::even) throw InvalidInput("odd form has no Z2 quadratic refinement");
    std::vector<int> mu;
    for (int x : v.q) mu.push_back(2 * x);
    return Z4Refinement{v.form, std::move(mu)};
}

Z4Refinement orthogonal_sum(const Z4Refinement& a, const Z4Refinement& b) {
    std::vector<int> mu = a.mu;
    mu.insert(mu.end(), b.mu.begin(), b.mu.end());
    return Z4Refinement{block_sum(a.form, b.form), std::move(mu)};
}

namespace {

void check_refinement(const Z4Refinement& r) {
    if (r.form.size() != r.mu.size()) throw InvalidInput("mu needs one value per basis vector");
    parity(r.form);
    for (std::size_t i = 0; i < r.dim(); ++i) {
        if (r.mu[i] < 0 || r.mu[i] > 3) throw InvalidInput("mu values must lie in 0..3");
        if (r.mu[i] % 2 != r.form[i][i])
            throw InvalidInput("mu(e" + std::to_string(i + 1) + ") does not reduce to lambda(e, e) mod 2");
    }
}

Cyclotomic8 multiply(const Cyclotomic8& a, const Cyclotomic8& b) {
    Cyclotomic8 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i + j < 4) out[i + j] += a[i] * b[j];
            else out[i + j - 4] -= a[i] * b[j];  // z^4 = -1
        }
    return out;
}

Cyclotomic8 power_of_z(int k) {
    k = ((k % 8) + 8) % 8;
    Cyclotomic8 out{};
    out[k % 4] = k < 4 ? 1 : -1;
    return out;
}

}  // namespace

Cyclotomic8 gauss_sum(const Z4Refinement& r) {
    check_refinement(r);
    if (r.dim() > 24) throw ResourceLimit("Gauss sums are capped at dimension 24");
    Cyclotomic8 s{};
    for (Mask x = 0; x < (Mask(1) << r.dim()); ++x) {
        int k = 2 * r.value(from_mask(x, r.dim()));  // i = z^2
        auto t = power_of_z(k);
        for (int j = 0; j < 4; ++j) s[j] += t[j];
    }
    return s;
}

int brown_z8(const Z4Refinement& r) {
    const auto s = gauss_sum(r);
    // sqrt(2) = z - z^3.
    const Cyclotomic8 root2{0, 1, 0, -1};
    Cyclotomic8 scale{1, 0, 0, 0};
    for (std::size_t i = 0; i < r.dim(); ++i) scale = multiply(scale, root2);
    for (int beta = 0; beta < 8; ++beta)
        if (multiply(scale, power_of_z(beta)) == s) return beta;
    throw AxiomViolation("Gauss sum does not have magnitude sqrt(2)^d");
}

QuadraticFormData to_form_data(const Z4Refinement& r) {
    check_refinement(r);
    const std::size_t d = r.dim();
    auto target = z4_quadratic_group();
    std::vector<Vector> rels;
    for (std::size_t i = 0; i < d; ++i) rels.push_back(2 * unit_vector(d, i));
    auto a = make_group(d, std::move(rels));
    std::vector<std::vector<Vector>> values(d, std::vector<Vector>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) values[i][j] = Vector{Integer(r.form[i][j])};
    std::vector<Vector> mu;
    for (int x : r.mu) mu.push_back(Vector{Integer(x)});
    return QuadraticFormData{HermitianForm(a, GroupWithInvolution::trivial(target.mee), std::move(values)), target,
                             std::move(mu)};
}

}  // namespace treeforms
