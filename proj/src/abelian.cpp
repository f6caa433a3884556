#include "treeforms/abelian.hpp"

#include "treeforms/errors.hpp"

#include <boost/integer/common_factor.hpp>

#include <sstream>

namespace treeforms {

bool ElementNF::is_zero() const {
    for (const auto& x : torsion)
        if (x != 0) return false;
    for (const auto& x : free)
        if (x != 0) return false;
    return true;
}

FPAbelianGroup::FPAbelianGroup(std::size_t generators, std::vector<Vector> relations,
                               std::vector<std::string> names, const MatrixLimits& limits)
    : generators_(generators), relations_(std::move(relations)), names_(std::move(names)) {
    if (generators_ > limits.max_cols)
        throw ResourceLimit(std::to_string(generators_) + " generators exceed the cap of " +
                            std::to_string(limits.max_cols));
    if (relations_.size() > limits.max_rows)
        throw ResourceLimit(std::to_string(relations_.size()) + " relations exceed the cap of " +
                            std::to_string(limits.max_rows));
    for (std::size_t i = 0; i < relations_.size(); ++i)
        if (relations_[i].size() != generators_)
            throw InvalidInput("relation " + std::to_string(i) + " has length " +
                               std::to_string(relations_[i].size()) + ", expected " + std::to_string(generators_));
    if (!names_.empty()) {
        if (names_.size() != generators_)
            throw InvalidInput("got " + std::to_string(names_.size()) + " generator names for " +
                               std::to_string(generators_) + " generators");
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (!name_index_.emplace(names_[i], i).second)
                throw InvalidInput("duplicate generator name '" + names_[i] + "'");
    }
    echelon_ = hermite_rows(relations_, generators_, false, limits);
    std::vector<bool> eliminated(generators_, false);
    std::vector<std::size_t> other_rows;
    for (std::size_t k = 0; k < echelon_.rank(); ++k) {
        const std::size_t c = echelon_.pivots[k];
        if (echelon_.basis[k][c] == 1) {
            unit_rows_.push_back(k);
            eliminated[c] = true;
        } else {
            other_rows.push_back(k);
        }
    }
    for (std::size_t c = 0; c < generators_; ++c)
        if (!eliminated[c]) kept_.push_back(c);
    // Reduced Hermite form has zeros above every pivot 1, so the other rows do
    // not involve the eliminated generators.
    IntMatrix reduced(other_rows.size(), kept_.size());
    for (std::size_t i = 0; i < other_rows.size(); ++i)
        for (std::size_t j = 0; j < kept_.size(); ++j) reduced(i, j) = echelon_.basis[other_rows[i]][kept_[j]];
    smith_ = smith_normal_form(reduced, limits);
    const auto diag = smith_.diagonal();
    first_torsion_ = diag.size();
    for (std::size_t i = 0; i < diag.size(); ++i) {
        if (diag[i] == 0) throw std::logic_error("Hermite basis is not of full row rank");
        if (diag[i] > 1) {
            if (first_torsion_ == diag.size()) first_torsion_ = i;
            torsion_.push_back(diag[i]);
        }
    }
}

FPAbelianGroup FPAbelianGroup::free(std::size_t generators, std::vector<std::string> names) {
    return FPAbelianGroup(generators, {}, std::move(names));
}

std::optional<std::size_t> FPAbelianGroup::index_of(const std::string& name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
}

std::string FPAbelianGroup::describe() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    const char* sep = "";
    if (rank() > 0) {
        os << "Z";
        if (rank() > 1) os << '^' << rank();
        sep = " + ";
    }
    for (const auto& d : torsion_) {
        os << sep << 'Z' << d;
        sep = " + ";
    }
    return os.str();
}

void FPAbelianGroup::check_length(const Vector& v) const {
    if (v.size() != generators_)
        throw InvalidInput("element of length " + std::to_string(v.size()) + " in a group with " +
                           std::to_string(generators_) + " generators");
}

ElementNF FPAbelianGroup::element_nf(const Vector& v) const {
    check_length(v);
    // Substitute e_p = -(row - e_p) for every unit pivot p, then drop those columns.
    Vector full = v;
    for (std::size_t k : unit_rows_) {
        const Integer c = full[echelon_.pivots[k]];
        if (c != 0) add_scaled(full, echelon_.basis[k], -c);
    }
    Vector u(kept_.size());
    for (std::size_t j = 0; j < kept_.size(); ++j) u[j] = full[kept_[j]];
    Vector w = u * smith_.v;
    ElementNF nf;
    const std::size_t k = smith_.s.rows();
    for (std::size_t i = first_torsion_; i < k; ++i) nf.torsion.push_back(mod_floor(w[i], smith_.s(i, i)));
    nf.free.assign(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
    return nf;
}

bool FPAbelianGroup::is_zero(const Vector& v) const {
    check_length(v);
    Vector y;
    return solve_in_lattice(echelon_, v, y);
}

Integer FPAbelianGroup::element_order(const Vector& v) const {
    ElementNF nf = element_nf(v);
    for (const auto& x : nf.free)
        if (x != 0) return 0;
    Integer order = 1;
    for (std::size_t i = 0; i < nf.torsion.size(); ++i) {
        const Integer& d = torsion_[i];
        Integer part = d / boost::integer::gcd(d, nf.torsion[i]);
        order = boost::integer::lcm(order, part);
    }
    return order;
}

GroupPtr make_group(std::size_t generators, std::vector<Vector> relations, std::vector<std::string> names,
                    const MatrixLimits& limits) {
    return std::make_shared<const FPAbelianGroup>(generators, std::move(relations), std::move(names), limits);
}

// ---- homomorphisms -----------------------------------------------------------

GroupHom::GroupHom(GroupPtr source, GroupPtr target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (!source_ || !target_) throw InvalidInput("homomorphism with a null group");
    if (matrix_.rows() != source_->generator_count() || matrix_.cols() != target_->generator_count())
        throw InvalidInput("homomorphism matrix is " + std::to_string(matrix_.rows()) + "x" +
                           std::to_string(matrix_.cols()) + ", expected " +
                           std::to_string(source_->generator_count()) + "x" +
                           std::to_string(target_->generator_count()));
    // The Hermite basis spans the same lattice as the relations; only look
    // at the raw relations to name the culprit.
    bool ok = true;
    for (const auto& r : source_->echelon().basis)
        if (!target_->is_zero(r * matrix_)) {
            ok = false;
            break;
        }
    if (ok) return;
    const auto& rel = source_->relations();
    for (std::size_t i = 0; i < rel.size(); ++i)
        if (!target_->is_zero(rel[i] * matrix_))
            throw NotWellDefined("not well-defined on relations: relation " + std::to_string(i) +
                                     " maps to a nonzero element",
                                 i);
    throw std::logic_error("GroupHom: inconsistent relation check");
}

GroupHom GroupHom::identity(const GroupPtr& g) {
    return GroupHom(g, g, IntMatrix::identity(g->generator_count()));
}

GroupHom GroupHom::zero(GroupPtr source, GroupPtr target) {
    IntMatrix m(source->generator_count(), target->generator_count());
    return GroupHom(std::move(source), std::move(target), std::move(m));
}

namespace {

bool same_presentation(const FPAbelianGroup& a, const FPAbelianGroup& b) {
    return &a == &b || (a.generator_count() == b.generator_count() && a.echelon().basis == b.echelon().basis);
}

void require_same(const FPAbelianGroup& a, const FPAbelianGroup& b, const char* what) {
    if (!same_presentation(a, b)) throw InvalidInput(std::string("mismatched groups in ") + what);
}

}  // namespace

GroupHom compose(const GroupHom& g, const GroupHom& f) {
    require_same(*f.target(), *g.source(), "compose");
    return GroupHom(f.source(), g.target(), f.matrix() * g.matrix());
}

GroupHom combine(const GroupHom& f, const Integer& c1, const GroupHom& g, const Integer& c2) {
    require_same(*f.source(), *g.source(), "combine");
    require_same(*f.target(), *g.target(), "combine");
    IntMatrix m(f.matrix().rows(), f.matrix().cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = c1 * f.matrix()(i, j) + c2 * g.matrix()(i, j);
    return GroupHom(f.source(), f.target(), std::move(m));
}

bool equal_homs(const GroupHom& f, const GroupHom& g) {
    if (!same_presentation(*f.source(), *g.source()) || !same_presentation(*f.target(), *g.target()))
        return false;
    for (std::size_t i = 0; i < f.matrix().rows(); ++i)
        if (!f.target()->equal(f.matrix().row(i), g.matrix().row(i))) return false;
    return true;
}

std::vector<Vector> kernel_lattice(const GroupHom& f) {
    const std::size_t gs = f.source()->generator_count(), gt = f.target()->generator_count();
    std::vector<Vector> stacked = f.matrix().row_vectors();
    for (const auto& r : f.target()->echelon().basis) stacked.push_back(r);
    auto z = left_kernel(IntMatrix::from_rows(stacked, gt));
    for (auto& v : z) v.resize(gs);
    return hermite_rows(std::move(z), gs).basis;
}

Subgroup kernel(const GroupHom& f) {
    const std::size_t gs = f.source()->generator_count();
    Echelon lattice = hermite_rows(kernel_lattice(f), gs);
    std::vector<Vector> rels;
    for (const auto& r : f.source()->echelon().basis) {
        Vector y;
        if (!solve_in_lattice(lattice, r, y)) throw std::logic_error("kernel lattice misses a source relation");
        rels.push_back(std::move(y));
    }
    auto k = make_group(lattice.rank(), std::move(rels));
    IntMatrix inc = IntMatrix::from_rows(lattice.basis, gs);
    return Subgroup{k, GroupHom(k, f.source(), std::move(inc))};
}

Image image(const GroupHom& f) {
    auto im = make_group(f.source()->generator_count(), kernel_lattice(f), f.source()->names());
    return Image{im, GroupHom(f.source(), im, IntMatrix::identity(im->generator_count())),
                 GroupHom(im, f.target(), f.matrix())};
}

Quotient cokernel(const GroupHom& f) {
    std::vector<Vector> rels = f.target()->echelon().basis;
    for (auto& r : f.matrix().row_vectors()) rels.push_back(std::move(r));
    auto q = make_group(f.target()->generator_count(), std::move(rels), f.target()->names());
    return Quotient{q, GroupHom(f.target(), q, IntMatrix::identity(q->generator_count()))};
}

bool is_injective(const GroupHom& f) {
    for (const auto& v : kernel_lattice(f))
        if (!f.source()->is_zero(v)) return false;
    return true;
}

bool is_surjective(const GroupHom& f) { return cokernel(f).group->is_trivial(); }

bool hom_is_isomorphism(const GroupHom& f) { return is_surjective(f) && is_injective(f); }

ExactnessReport is_exact(const GroupHom& f, const GroupHom& g) {
    require_same(*f.target(), *g.source(), "is_exact");
    ExactnessReport rep;
    IntMatrix fg = f.matrix() * g.matrix();
    for (std::size_t i = 0; i < fg.rows(); ++i)
        if (!g.target()->is_zero(fg.row(i))) {
            rep.failure = "composite";
            rep.witness = f.matrix().row(i);
            return rep;
        }
    auto coker = cokernel(f).group;
    for (const auto& v : kernel_lattice(g))
        if (!coker->is_zero(v)) {
            rep.failure = "kernel";
            rep.witness = v;
            return rep;
        }
    rep.exact = true;
    return rep;
}

Quotient tensor_Z2(const GroupPtr& g) {
    std::vector<Vector> rels = g->echelon().basis;
    for (std::size_t i = 0; i < g->generator_count(); ++i) rels.push_back(2 * g->generator(i));
    auto q = make_group(g->generator_count(), std::move(rels), g->names());
    return Quotient{q, GroupHom(g, q, IntMatrix::identity(g->generator_count()))};
}

// ---- JSON ------------------------------------------------------------------

nlohmann::json to_json(const Integer& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(x);
    return x.str();
}

nlohmann::json to_json(const Vector& v) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : v) j.push_back(to_json(x));
    return j;
}

nlohmann::json to_json(const IntMatrix& m) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) j.push_back(to_json(m.row(i)));
    return j;
}

Integer integer_from_json(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) return Integer(s);
    }
    throw InvalidInput(where + ": expected an integer");
}

Vector vector_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) throw InvalidInput(where + ": expected an array of integers");
    Vector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

GroupPtr group_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("group: expected an object");
    if (!j.contains("generators") || !j["generators"].is_number_integer() || j["generators"].get<long long>() < 0)
        throw InvalidInput("group.generators: expected a nonnegative integer");
    auto g = static_cast<std::size_t>(j["generators"].get<long long>());
    std::vector<Vector> rels;
    if (j.contains("relations")) {
        if (!j["relations"].is_array()) throw InvalidInput("group.relations: expected an array");
        for (std::size_t i = 0; i < j["relations"].size(); ++i) {
            std::string where = "group.relations[" + std::to_string(i) + "]";
            Vector r = vector_from_json(j["relations"][i], where);
            if (r.size() != g)
                throw InvalidInput(where + ": length " + std::to_string(r.size()) + ", expected " + std::to_string(g));
            rels.push_back(std::move(r));
        }
    }
    std::vector<std::string> names;
    if (j.contains("names")) {
        if (!j["names"].is_array()) throw InvalidInput("group.names: expected an array of strings");
        for (const auto& n : j["names"]) {
            if (!n.is_string()) throw InvalidInput("group.names: expected an array of strings");
            names.push_back(n.get<std::string>());
        }
    }
    return make_group(g, std::move(rels), std::move(names));
}

nlohmann::json group_summary_json(const FPAbelianGroup& g) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& d : g.torsion()) t.push_back(to_json(d));
    return {{"rank", g.rank()}, {"torsion", t}};
}

}  // namespace treeforms
