#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace treeforms {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Dense integer row vector. Homomorphisms act on the right: v -> v * F.
using Vector = std::vector<Integer>;

/// Remainder in [0, |m|). `m` must be nonzero.
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += abs(m);
    return r;
}

/// Floor division toward negative infinity.
inline Integer div_floor(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Quotient rounded to nearest; keeps Euclidean remainders small (|r| <= |b|/2).
inline Integer div_round(const Integer& a, const Integer& b) {
    Integer q = div_floor(a, b);
    Integer r = a - q * b;
    // Floor division leaves r between 0 and b (either sign); one more step of
    // b moves it across zero.
    if (2 * abs(r) > abs(b)) ++q;
    return q;
}

inline int parity(const Integer& a) { return static_cast<int>(mod_floor(a, 2)); }

inline std::string to_string(const Integer& a) { return a.str(); }

inline bool is_zero(const Vector& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline Vector zero_vector(std::size_t n) { return Vector(n, Integer(0)); }

inline Vector unit_vector(std::size_t n, std::size_t i) {
    Vector v(n, Integer(0));
    v[i] = 1;
    return v;
}

inline Vector& add_scaled(Vector& acc, const Vector& v, const Integer& c = 1) {
    if (c == 0) return acc;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) acc[i] += c * v[i];
    return acc;
}

inline Vector operator+(Vector a, const Vector& b) { return add_scaled(a, b); }

inline Vector operator-(Vector a, const Vector& b) { return add_scaled(a, b, -1); }

inline Vector operator*(const Integer& c, Vector v) {
    for (auto& x : v) x *= c;
    return v;
}

inline Vector operator-(Vector v) {
    for (auto& x : v) x = -x;
    return v;
}

inline Vector concat(const Vector& a, const Vector& b) {
    Vector r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

inline Vector to_vector(const std::vector<std::int64_t>& v) {
    return Vector(v.begin(), v.end());
}

}  // namespace treeforms
