#pragma once

#include "treeforms/integer.hpp"
#include "treeforms/matrix.hpp"

#include <json.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace treeforms {

/// Canonical coordinates of a group element: one residue in [0, d) per
/// torsion factor d > 1, then the free coordinates.
struct ElementNF {
    std::vector<Integer> torsion;
    std::vector<Integer> free;

    bool is_zero() const;
    friend bool operator==(const ElementNF&, const ElementNF&) = default;
};

/// Finitely presented abelian group Z^g / <relations>.
///
/// Reduction data: the relation rows are first put in Hermite form. A basis
/// row with pivot 1 just expresses its pivot generator through later ones, so
/// those generators are dropped and the Smith decomposition is taken of the
/// remaining rows on the remaining columns.
class FPAbelianGroup {
  public:
    FPAbelianGroup(std::size_t generators, std::vector<Vector> relations, std::vector<std::string> names = {},
                   const MatrixLimits& limits = {});

    static FPAbelianGroup free(std::size_t generators, std::vector<std::string> names = {});

    std::size_t generator_count() const { return generators_; }
    const std::vector<Vector>& relations() const { return relations_; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(const std::string& name) const;

    const Echelon& echelon() const { return echelon_; }
    /// Of the Hermite rows with pivot > 1, restricted to the kept columns.
    const SmithDecomposition& smith() const { return smith_; }
    /// Generators that survive the unit-pivot elimination.
    const std::vector<std::size_t>& kept_generators() const { return kept_; }

    /// Invariant factors greater than one, in divisibility order.
    const std::vector<Integer>& torsion() const { return torsion_; }
    std::size_t rank() const { return generators_ - echelon_.rank(); }
    bool is_trivial() const { return rank() == 0 && torsion_.empty(); }
    /// e.g. "Z^2 + Z2 + Z6", or "0".
    std::string describe() const;

    ElementNF element_nf(const Vector& v) const;
    bool is_zero(const Vector& v) const;
    bool equal(const Vector& a, const Vector& b) const { return is_zero(a - b); }
    /// Order of the element, 0 when it has infinite order.
    Integer element_order(const Vector& v) const;

    Vector generator(std::size_t i) const { return unit_vector(generators_, i); }
    Vector zero() const { return zero_vector(generators_); }

  private:
    void check_length(const Vector& v) const;

    std::size_t generators_;
    std::vector<Vector> relations_;
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> name_index_;
    Echelon echelon_;
    SmithDecomposition smith_;
    std::vector<std::size_t> kept_;
    // Hermite rows with pivot 1.
    std::vector<std::size_t> unit_rows_;
    std::vector<Integer> torsion_;
    // First position of the Smith diagonal with an entry > 1.
    std::size_t first_torsion_ = 0;
};

using GroupPtr = std::shared_ptr<const FPAbelianGroup>;

GroupPtr make_group(std::size_t generators, std::vector<Vector> relations, std::vector<std::string> names = {},
                    const MatrixLimits& limits = {});

/// Homomorphism acting on row vectors: v -> v * matrix.
class GroupHom {
  public:
    /// Throws NotWellDefined (with the index of the first offending source
    /// relation) unless every source relation maps to zero in the target.
    GroupHom(GroupPtr source, GroupPtr target, IntMatrix matrix);

    static GroupHom identity(const GroupPtr& g);
    static GroupHom zero(GroupPtr source, GroupPtr target);

    const GroupPtr& source() const { return source_; }
    const GroupPtr& target() const { return target_; }
    const IntMatrix& matrix() const { return matrix_; }

    Vector operator()(const Vector& v) const { return v * matrix_; }

  private:
    GroupPtr source_, target_;
    IntMatrix matrix_;
};

/// g after f.
GroupHom compose(const GroupHom& g, const GroupHom& f);
/// Pointwise sum c1*f + c2*g of parallel homomorphisms.
GroupHom combine(const GroupHom& f, const Integer& c1, const GroupHom& g, const Integer& c2);
/// Same source and target presentations and equal on every generator.
bool equal_homs(const GroupHom& f, const GroupHom& g);

/// Sublattice of Z^{g_src} mapping into the target relation lattice, in
/// Hermite form. Contains the source relations.
std::vector<Vector> kernel_lattice(const GroupHom& f);

struct Subgroup {
    GroupPtr group;
    GroupHom inclusion;
};

struct Quotient {
    GroupPtr group;
    GroupHom projection;
};

struct Image {
    GroupPtr group;
    /// Source onto image.
    GroupHom projection;
    /// Image into target.
    GroupHom inclusion;
};

Subgroup kernel(const GroupHom& f);
Image image(const GroupHom& f);
Quotient cokernel(const GroupHom& f);

bool is_injective(const GroupHom& f);
bool is_surjective(const GroupHom& f);
bool hom_is_isomorphism(const GroupHom& f);

struct ExactnessReport {
    bool exact = false;
    /// "composite" when g∘f != 0, "kernel" when some kernel element of g is
    /// not hit by f; empty when exact.
    std::string failure;
    /// A violating element of target(f) = source(g).
    Vector witness;
};

/// Exactness of A -f-> B -g-> C at B.
ExactnessReport is_exact(const GroupHom& f, const GroupHom& g);

/// G / 2G, with the quotient map from G.
Quotient tensor_Z2(const GroupPtr& g);

// ---- JSON ----------------------------------------------------------------

/// {"generators": g, "relations": [[...]], "names": [...]?}
GroupPtr group_from_json(const nlohmann::json& j);
/// {"rank": r, "torsion": [...]}
nlohmann::json group_summary_json(const FPAbelianGroup& g);
nlohmann::json to_json(const Integer& x);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const IntMatrix& m);
/// Accepts JSON integers and decimal strings.
Integer integer_from_json(const nlohmann::json& j, const std::string& where);
Vector vector_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace treeforms
