#pragma once

#include "treeforms/lattice.hpp"
#include "treeforms/quadratic.hpp"
#include "treeforms/tree_groups.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace treeforms {

/// Outcome of one verification job. `detail` holds no timings, so equal inputs
/// give equal JSON.
struct SuiteResult {
    std::string name;
    bool pass = false;
    nlohmann::json detail;

    nlohmann::json to_json() const;
};

// ---- random instances -----------------------------------------------------------------

namespace gen {

/// One of a fixed list of small groups with involution.
GroupWithInvolution random_involution(std::mt19937_64& rng);
Vector random_coords(std::mt19937_64& rng, std::size_t n, int bound = 2);
/// Hermitian form on Z^k.
HermitianForm random_form(std::mt19937_64& rng, const GroupWithInvolution& m, std::size_t k);
/// lambda(a, b) = nu(a, b) + nu(b, a)* refined by mu(a_k) = [nu(a_k, a_k)].
QuadraticFormData random_even_form(std::mt19937_64& rng, const GroupWithInvolution& m, std::size_t k);
/// Form on Z^k into Z4 -> Z2 -> Z4.
QuadraticFormData random_z4_form(std::mt19937_64& rng, std::size_t k);
/// A form with abelian M_e of one of the three kinds above.
QuadraticFormData random_target(std::mt19937_64& rng);
/// alpha: Z^k -> A' at random, beta_ee = +-id or +-star, and the pulled-back
/// form on Z^k.
struct RandomMorphism {
    HermitianForm source;
    FormMorphism morphism;
};
RandomMorphism random_morphism_into(std::mt19937_64& rng, const HermitianForm& target);

/// U^T D U with D a sum of <1>, <-1>, H, E8 blocks and U a random product of
/// elementary matrices.
SymIntForm random_unimodular(std::mt19937_64& rng);

/// Every diagonal form with entries +-1, ranks 1..max_rank.
std::vector<SymIntForm> diagonal_pm1_forms(std::size_t max_rank);
/// Every x in Z^r with |x_i| <= bound.
std::vector<Vector> integer_box(std::size_t r, int bound);
/// Every nonsingular symmetric 0/1 matrix of size d.
std::vector<Z2Matrix> nonsingular_z2_forms(std::size_t d);
/// Every vector in {0, ..., values - 1}^d.
std::vector<std::vector<int>> all_assignments(std::size_t d, int values);

}  // namespace gen

/// Seed for job `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// ---- the checks ---------------------------------------------------------------------

/// 0 -> T(2n) -> Tinf(n) -> Z2 (x) L(n) -> 0.
SuiteResult suite_exact(std::size_t n, Label m, TreeGroupCache& cache);
/// Universal symmetric refinement of the L(n) pairing against Tinf(n).
SuiteResult suite_universal(std::size_t n, Label m, TreeGroupCache& cache);
/// L0(m), L1(2), T0(m), T1(2), Tinf0(m) for m <= 3, each against the expected
/// value and against determinant divisors.
SuiteResult suite_small_groups(TreeGroupCache& cache);
/// Psi through every split of `samples` random trees of order <= 4 with
/// labels <= m.
SuiteResult suite_split_independence(Label m, std::size_t samples, std::uint64_t seed, TreeGroupCache& cache);
/// <(I, J), K> = <I, (J, K)> on all generator triples of total order <= 3.
SuiteResult suite_invariance(Label m, TreeGroupCache& cache);
/// Quadratic group, form, square-law and adjunction checks on `forms` random
/// forms and `morphisms` random morphisms.
SuiteResult suite_quadratic(std::size_t forms, std::size_t morphisms, std::uint64_t seed);
/// Injectivity of p and exactness of the symmetric sequence on `forms`
/// random symmetric forms.
SuiteResult suite_symmetric_sequence(std::size_t forms, std::uint64_t seed);
/// tau, ks, torsor, Arf and Brown checks.
SuiteResult suite_lattice(std::uint64_t seed);

}  // namespace treeforms
