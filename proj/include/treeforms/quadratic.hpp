#pragma once

#include "treeforms/abelian.hpp"

#include <json.hpp>

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace treeforms {

/// Abelian group M with an involution *.
struct GroupWithInvolution {
    GroupPtr group;
    GroupHom star;

    /// Throws AxiomViolation unless star * star = id.
    static GroupWithInvolution make(GroupPtr m, IntMatrix star);
    static GroupWithInvolution trivial(GroupPtr m);
    bool is_trivial() const;
};

/// Collected axiom failures; each entry names the identity and the witness.
struct AxiomReport {
    std::vector<std::string> failures;
    std::size_t checks = 0;

    bool ok() const { return failures.empty(); }
    void expect(bool condition, const std::string& what);
    void merge(const AxiomReport& other);
    /// Throws AxiomViolation carrying the first failure.
    void require() const;
    nlohmann::json to_json() const;
};

/// Quadratic group with abelian M_e: h: M_e -> M_ee, p: M_ee -> M_e.
struct QuadraticGroup {
    GroupPtr me, mee;
    GroupHom h, p;

    /// hp - id on M_ee.
    GroupHom star() const;
    /// ph - id on M_e.
    GroupHom dagger() const;
    bool commutative() const;
};

struct QuadraticGroupReport {
    AxiomReport axioms;
    /// php = 2p, the extra condition some authors require.
    bool baues = false;
    IntMatrix star, dagger;
};

/// hph = 2h, and the identities *h = h, php = p + p*, p* = dagger p, with
/// * and dagger involutions. Checked on generators (everything is linear).
QuadraticGroupReport validate_quadratic_group(const QuadraticGroup& q);

/// M_ee = M, M_e = M / <x - x*>, h[x] = x + x*, p the quotient map.
QuadraticGroup from_involution(const GroupWithInvolution& mi);

/// Z with h = id and p = 2.
QuadraticGroup integer_quadratic_group();
/// M_e = Z4, M_ee = Z2, h the reduction, p(1) = 2.
QuadraticGroup z4_quadratic_group();

/// Bilinear form on the generators of A with values in M, hermitian for *.
class HermitianForm {
  public:
    /// values[k][l] = lambda(a_k, a_l) as M coordinates. Validated eagerly:
    /// lambda(a_l, a_k) = lambda(a_k, a_l)* and lambda kills A's relations in
    /// both slots. Throws AxiomViolation / InvalidInput.
    HermitianForm(GroupPtr a, GroupWithInvolution m, std::vector<std::vector<Vector>> values);

    const GroupPtr& a() const { return a_; }
    const GroupWithInvolution& m() const { return m_; }
    const Vector& value(std::size_t k, std::size_t l) const { return values_[k][l]; }
    const std::vector<std::vector<Vector>>& values() const { return values_; }
    std::size_t rank() const { return values_.size(); }

    Vector operator()(const Vector& x, const Vector& y) const;
    /// lambda(b, a) = lambda(a, b) in M on all generator pairs.
    bool symmetric() const;

  private:
    GroupPtr a_;
    GroupWithInvolution m_;
    std::vector<std::vector<Vector>> values_;
};

/// {"A": group, "M": group, "star": [[int]]?, "lambda": [[[int]]]}
HermitianForm form_from_json(const nlohmann::json& j);

// ---- the universal (non-commutative) refinement ---------------------------------

/// (m, a) with (m, a) + (m', a') = (m + m' - lambda(a, a'), a + a').
struct PairElement {
    Vector m;
    Vector a;
};

/// M_e as pairs over M x A; p(m) = (m, 0), h(m, a) = m + m* + lambda(a, a),
/// mu(a) = (0, a).
class PairQuadraticGroup {
  public:
    explicit PairQuadraticGroup(HermitianForm lambda) : lambda_(std::move(lambda)) {}

    const HermitianForm& lambda() const { return lambda_; }
    const GroupPtr& mee() const { return lambda_.m().group; }
    const GroupPtr& a() const { return lambda_.a(); }

    PairElement zero() const;
    PairElement add(const PairElement& x, const PairElement& y) const;
    PairElement negate(const PairElement& x) const;
    PairElement scale(const PairElement& x, long long n) const;
    bool equal(const PairElement& x, const PairElement& y) const;

    PairElement p(const Vector& m) const;
    Vector h(const PairElement& x) const;
    PairElement mu(const Vector& a) const;
    /// ph - id, computed in the group.
    PairElement dagger(const PairElement& x) const;
    Vector star(const Vector& m) const { return lambda_.m().star(m); }

    /// x + y - x - y.
    PairElement commutator(const PairElement& x, const PairElement& y) const;
    PairElement random_element(std::mt19937_64& rng, int bound) const;

  private:
    HermitianForm lambda_;
};

PairQuadraticGroup universal_nc(const HermitianForm& lambda);

/// Quadratic-group and quadratic-form axioms for the pair representation, on
/// generators and `samples` random elements.
AxiomReport validate_universal_nc(const PairQuadraticGroup& q, std::mt19937_64& rng, int samples = 20);

// ---- quadratic forms with abelian M_e --------------------------------------------

/// A quadratic refinement mu of lambda into an abelian quadratic group,
/// given on generators and extended by mu(x + y) = mu(x) + mu(y) + p lambda(x, y)
/// with mu(-a) = mu(a)^dagger.
struct QuadraticFormData {
    HermitianForm lambda;
    QuadraticGroup target;
    std::vector<Vector> mu_generators;

    /// Expands a as a word in +-generators, generator by generator in index
    /// order.
    Vector mu(const Vector& a) const;
    /// Same, visiting generators in `order`.
    Vector mu(const Vector& a, const std::vector<std::size_t>& order) const;
};

/// Form axioms: lambda hermitian for the target's *, mu well defined on A's
/// relations, h mu(a) = lambda(a, a), mu(a + b) = mu(a) + mu(b) + p lambda(a, b),
/// mu(-a) = mu(a)^dagger, expansion-order independence; plus the square law
/// when the target is commutative.
AxiomReport validate_form(const QuadraticFormData& f, std::mt19937_64& rng, int samples = 20);

/// mu(n a) = n^2 mu(a) for n in [lo, hi] and every sample a.
AxiomReport check_square_law(const QuadraticFormData& f, const std::vector<Vector>& samples, int lo = -3,
                             int hi = 3);

/// One letter of a relation word: generator index and sign.
struct Letter {
    std::size_t generator;
    int sign;
};

/// sum_{i<j} lambda(a'_i, a'_j) for the word a'_1 ... a'_r.
Vector cocycle_word(const std::vector<Letter>& word, const HermitianForm& lambda);
/// The word that spells a relation vector: |c_k| copies of sign(c_k) a_k,
/// generator by generator.
std::vector<Letter> relation_word(const Vector& relation);

/// M_e^c presented on the generators of M followed by mu(a_k), with relations
/// (a) those of M, (b) one cocycle relation per relation of A, (c) m* = m per
/// generator of M, (d) 2 mu(a_k) = lambda(a_k, a_k).
QuadraticFormData universal_commutative(const HermitianForm& lambda);
/// The same construction for a symmetric form with trivial *; throws
/// AxiomViolation otherwise.
QuadraticFormData universal_symmetric(const HermitianForm& lambda);

struct SymmetricSequenceReport {
    bool p_injective = false;
    ExactnessReport middle;
    bool surjective = false;
    bool pass() const { return p_injective && middle.exact && surjective; }
};

/// 0 -> M -p-> M_e^c -> Z2 (x) A -> 0 for the universal symmetric refinement.
SymmetricSequenceReport exact_sequence_symmetric(const HermitianForm& lambda);

/// {"group": {...}, "p": [[...]], "h": [[...]], "mu": [[...]]}
nlohmann::json to_json(const QuadraticFormData& f);

// ---- morphisms and the adjunction ---------------------------------------------------

/// alpha: A -> A', beta_ee: M -> M' commuting with the involutions, with
/// lambda'(alpha a, alpha b) = beta_ee(lambda(a, b)).
struct FormMorphism {
    GroupHom alpha;
    GroupHom beta_ee;
};

/// Checks the defining conditions of a morphism between the two forms.
AxiomReport validate_form_morphism(const FormMorphism& f, const HermitianForm& source, const HermitianForm& target);

/// beta_e(m, a) = p' beta_ee(m) + mu'(alpha a), from the universal pair group
/// into a form with abelian M_e.
class InducedMorphism {
  public:
    InducedMorphism(FormMorphism f, PairQuadraticGroup source, QuadraticFormData target);

    Vector operator()(const PairElement& x) const;
    /// Diagrams beta_e p = p' beta_ee, h' beta_e = beta_ee h, beta_e mu = mu' alpha,
    /// and additivity, on generators and random elements.
    AxiomReport check(std::mt19937_64& rng, int samples = 10) const;
    /// Perturbing the value on any single generator by a nonzero element
    /// breaks a diagram. Returns the number of perturbations that went
    /// undetected (0 means the probe passed).
    std::size_t uniqueness_probe() const;

  private:
    FormMorphism f_;
    PairQuadraticGroup source_;
    QuadraticFormData target_;
};

/// The same formula into another pair group.
class InducedPairMorphism {
  public:
    InducedPairMorphism(FormMorphism f, PairQuadraticGroup source, PairQuadraticGroup target);

    PairElement operator()(const PairElement& x) const;
    AxiomReport check(std::mt19937_64& rng, int samples = 10) const;
    std::size_t uniqueness_probe() const;

  private:
    FormMorphism f_;
    PairQuadraticGroup source_, target_;
};

InducedMorphism induced_morphism(const FormMorphism& f, const PairQuadraticGroup& source,
                                 const QuadraticFormData& target);
InducedPairMorphism induced_morphism(const FormMorphism& f, const PairQuadraticGroup& source,
                                     const PairQuadraticGroup& target);

/// From a universal commutative refinement (as built by
/// universal_commutative) into a commutative target: m_i -> p' beta_ee(m_i),
/// mu(a_k) -> mu'(alpha a_k). Well-definedness is checked by GroupHom.
GroupHom induced_commutative(const FormMorphism& f, const QuadraticFormData& universal,
                             const QuadraticFormData& target);

}  // namespace treeforms
