#include "treeforms/quadratic.hpp"

#include "treeforms/errors.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

namespace treeforms {

namespace {

std::string show(const Vector& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

std::string show(const PairElement& x) { return "(" + show(x.m) + ", " + show(x.a) + ")"; }

Vector random_vector(std::mt19937_64& rng, std::size_t n, int bound) {
    Vector v(n);
    for (auto& x : v) x = static_cast<long long>(rng() % (2 * bound + 1)) - bound;
    return v;
}

constexpr std::size_t kMaxRecordedFailures = 40;

}  // namespace

// ---- involutions and reports ---------------------------------------------------------

GroupWithInvolution GroupWithInvolution::make(GroupPtr m, IntMatrix star) {
    GroupHom s(m, m, std::move(star));
    if (!equal_homs(compose(s, s), GroupHom::identity(m))) throw AxiomViolation("star is not an involution");
    return GroupWithInvolution{m, std::move(s)};
}

GroupWithInvolution GroupWithInvolution::trivial(GroupPtr m) {
    GroupHom id = GroupHom::identity(m);
    return GroupWithInvolution{std::move(m), std::move(id)};
}

bool GroupWithInvolution::is_trivial() const { return equal_homs(star, GroupHom::identity(group)); }

void AxiomReport::expect(bool condition, const std::string& what) {
    ++checks;
    if (!condition && failures.size() < kMaxRecordedFailures) failures.push_back(what);
}

void AxiomReport::merge(const AxiomReport& other) {
    checks += other.checks;
    for (const auto& f : other.failures)
        if (failures.size() < kMaxRecordedFailures) failures.push_back(f);
}

void AxiomReport::require() const {
    if (!ok()) throw AxiomViolation(failures.front());
}

nlohmann::json AxiomReport::to_json() const {
    return {{"ok", ok()}, {"checks", checks}, {"failures", failures}};
}

// ---- quadratic groups --------------------------------------------------------------

GroupHom QuadraticGroup::star() const { return combine(compose(h, p), 1, GroupHom::identity(mee), -1); }

GroupHom QuadraticGroup::dagger() const { return combine(compose(p, h), 1, GroupHom::identity(me), -1); }

bool QuadraticGroup::commutative() const { return equal_homs(dagger(), GroupHom::identity(me)); }

QuadraticGroupReport validate_quadratic_group(const QuadraticGroup& q) {
    QuadraticGroupReport rep;
    const auto& me = *q.me;
    const auto& mee = *q.mee;
    GroupHom star = q.star(), dagger = q.dagger();
    rep.star = star.matrix();
    rep.dagger = dagger.matrix();
    for (std::size_t i = 0; i < me.generator_count(); ++i) {
        Vector e = me.generator(i);
        Vector he = q.h(e);
        rep.axioms.expect(mee.equal(q.h(q.p(he)), 2 * he), "hph = 2h fails on M_e generator " + std::to_string(i));
        rep.axioms.expect(mee.equal(star(he), he), "*h = h fails on M_e generator " + std::to_string(i));
        rep.axioms.expect(me.equal(dagger(dagger(e)), e),
                          "dagger is not an involution on M_e generator " + std::to_string(i));
    }
    rep.baues = true;
    for (std::size_t i = 0; i < mee.generator_count(); ++i) {
        Vector m = mee.generator(i);
        Vector pm = q.p(m);
        Vector php = q.p(q.h(pm));
        rep.axioms.expect(me.equal(php, pm + q.p(star(m))), "php = p + p* fails on M_ee generator " + std::to_string(i));
        rep.axioms.expect(me.equal(q.p(star(m)), dagger(pm)),
                          "p* = dagger p fails on M_ee generator " + std::to_string(i));
        rep.axioms.expect(mee.equal(star(star(m)), m), "* is not an involution on M_ee generator " + std::to_string(i));
        if (!me.equal(php, 2 * pm)) rep.baues = false;
    }
    return rep;
}

QuadraticGroup from_involution(const GroupWithInvolution& mi) {
    const auto& m = mi.group;
    const std::size_t g = m->generator_count();
    std::vector<Vector> rels = m->echelon().basis;
    IntMatrix h(g, g);
    for (std::size_t i = 0; i < g; ++i) {
        Vector e = m->generator(i);
        Vector s = mi.star(e);
        Vector diff = e - s;
        if (!is_zero(diff)) rels.push_back(diff);
        Vector sum = e + s;
        for (std::size_t j = 0; j < g; ++j) h(i, j) = sum[j];
    }
    auto me = make_group(g, std::move(rels), m->names());
    return QuadraticGroup{me, m, GroupHom(me, m, std::move(h)), GroupHom(m, me, IntMatrix::identity(g))};
}

QuadraticGroup integer_quadratic_group() {
    auto z = make_group(1, {});
    return QuadraticGroup{z, z, GroupHom(z, z, IntMatrix{{1}}), GroupHom(z, z, IntMatrix{{2}})};
}

QuadraticGroup z4_quadratic_group() {
    auto z4 = make_group(1, {{4}});
    auto z2 = make_group(1, {{2}});
    return QuadraticGroup{z4, z2, GroupHom(z4, z2, IntMatrix{{1}}), GroupHom(z2, z4, IntMatrix{{2}})};
}

// ---- hermitian forms -------------------------------------------------------------

HermitianForm::HermitianForm(GroupPtr a, GroupWithInvolution m, std::vector<std::vector<Vector>> values)
    : a_(std::move(a)), m_(std::move(m)), values_(std::move(values)) {
    const std::size_t ga = a_->generator_count(), gm = m_.group->generator_count();
    if (values_.size() != ga)
        throw InvalidInput("lambda: expected " + std::to_string(ga) + " rows, got " + std::to_string(values_.size()));
    for (std::size_t k = 0; k < ga; ++k) {
        if (values_[k].size() != ga)
            throw InvalidInput("lambda[" + std::to_string(k) + "]: expected " + std::to_string(ga) + " entries");
        for (std::size_t l = 0; l < ga; ++l)
            if (values_[k][l].size() != gm)
                throw InvalidInput("lambda[" + std::to_string(k) + "][" + std::to_string(l) + "]: expected " +
                                   std::to_string(gm) + " coordinates");
    }
    const auto& mg = *m_.group;
    for (std::size_t k = 0; k < ga; ++k)
        for (std::size_t l = k; l < ga; ++l)
            if (!mg.equal(values_[l][k], m_.star(values_[k][l])))
                throw AxiomViolation("lambda is not hermitian: lambda(a" + std::to_string(l) + ", a" +
                                     std::to_string(k) + ") != lambda(a" + std::to_string(k) + ", a" +
                                     std::to_string(l) + ")*");
    const auto& rels = a_->relations();
    for (std::size_t i = 0; i < rels.size(); ++i)
        for (std::size_t l = 0; l < ga; ++l) {
            Vector e = a_->generator(l);
            if (!mg.is_zero((*this)(rels[i], e)) || !mg.is_zero((*this)(e, rels[i])))
                throw NotWellDefined("lambda does not vanish on relation " + std::to_string(i) + " of A", i);
        }
}

Vector HermitianForm::operator()(const Vector& x, const Vector& y) const {
    const std::size_t ga = a_->generator_count();
    if (x.size() != ga || y.size() != ga) throw InvalidInput("lambda: argument length mismatch");
    Vector out = m_.group->zero();
    for (std::size_t k = 0; k < ga; ++k) {
        if (x[k] == 0) continue;
        for (std::size_t l = 0; l < ga; ++l)
            if (y[l] != 0) add_scaled(out, values_[k][l], x[k] * y[l]);
    }
    return out;
}

bool HermitianForm::symmetric() const {
    for (std::size_t k = 0; k < values_.size(); ++k)
        for (std::size_t l = k + 1; l < values_.size(); ++l)
            if (!m_.group->equal(values_[k][l], values_[l][k])) return false;
    return true;
}

HermitianForm form_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("form: expected an object");
    for (const char* key : {"A", "M", "lambda"})
        if (!j.contains(key)) throw InvalidInput(std::string("form: missing field '") + key + "'");
    GroupPtr a = group_from_json(j["A"]);
    GroupPtr m = group_from_json(j["M"]);
    const std::size_t gm = m->generator_count(), ga = a->generator_count();
    IntMatrix star = IntMatrix::identity(gm);
    if (j.contains("star")) {
        const auto& s = j["star"];
        if (!s.is_array() || s.size() != gm) throw InvalidInput("form.star: expected " + std::to_string(gm) + " rows");
        for (std::size_t i = 0; i < gm; ++i) {
            Vector row = vector_from_json(s[i], "form.star[" + std::to_string(i) + "]");
            if (row.size() != gm) throw InvalidInput("form.star[" + std::to_string(i) + "]: wrong length");
            for (std::size_t c = 0; c < gm; ++c) star(i, c) = row[c];
        }
    }
    const auto& lj = j["lambda"];
    if (!lj.is_array() || lj.size() != ga) throw InvalidInput("form.lambda: expected " + std::to_string(ga) + " rows");
    std::vector<std::vector<Vector>> values(ga);
    for (std::size_t k = 0; k < ga; ++k) {
        std::string where = "form.lambda[" + std::to_string(k) + "]";
        if (!lj[k].is_array() || lj[k].size() != ga)
            throw InvalidInput(where + ": expected " + std::to_string(ga) + " entries");
        for (std::size_t l = 0; l < ga; ++l)
            values[k].push_back(vector_from_json(lj[k][l], where + "[" + std::to_string(l) + "]"));
    }
    return HermitianForm(a, GroupWithInvolution::make(m, std::move(star)), std::move(values));
}

// ---- pair group ----------------------------------------------------------------------

PairElement PairQuadraticGroup::zero() const { return {mee()->zero(), a()->zero()}; }

PairElement PairQuadraticGroup::add(const PairElement& x, const PairElement& y) const {
    return {x.m + y.m - lambda_(x.a, y.a), x.a + y.a};
}

PairElement PairQuadraticGroup::negate(const PairElement& x) const { return {-x.m - lambda_(x.a, x.a), -x.a}; }

PairElement PairQuadraticGroup::scale(const PairElement& x, long long n) const {
    PairElement base = n < 0 ? negate(x) : x;
    PairElement out = zero();
    for (long long i = 0; i < (n < 0 ? -n : n); ++i) out = add(out, base);
    return out;
}

bool PairQuadraticGroup::equal(const PairElement& x, const PairElement& y) const {
    return mee()->equal(x.m, y.m) && a()->equal(x.a, y.a);
}

PairElement PairQuadraticGroup::p(const Vector& m) const { return {m, a()->zero()}; }

Vector PairQuadraticGroup::h(const PairElement& x) const { return x.m + star(x.m) + lambda_(x.a, x.a); }

PairElement PairQuadraticGroup::mu(const Vector& a) const { return {mee()->zero(), a}; }

PairElement PairQuadraticGroup::dagger(const PairElement& x) const { return add(p(h(x)), negate(x)); }

PairElement PairQuadraticGroup::commutator(const PairElement& x, const PairElement& y) const {
    return add(add(add(x, y), negate(x)), negate(y));
}

PairElement PairQuadraticGroup::random_element(std::mt19937_64& rng, int bound) const {
    return {random_vector(rng, mee()->generator_count(), bound), random_vector(rng, a()->generator_count(), bound)};
}

PairQuadraticGroup universal_nc(const HermitianForm& lambda) { return PairQuadraticGroup(lambda); }

AxiomReport validate_universal_nc(const PairQuadraticGroup& q, std::mt19937_64& rng, int samples) {
    AxiomReport rep;
    const auto& mee = *q.mee();
    const auto& lam = q.lambda();
    std::vector<PairElement> xs;
    for (std::size_t i = 0; i < mee.generator_count(); ++i) xs.push_back(q.p(mee.generator(i)));
    for (std::size_t k = 0; k < q.a()->generator_count(); ++k) xs.push_back(q.mu(q.a()->generator(k)));
    for (int s = 0; s < samples; ++s) xs.push_back(q.random_element(rng, 3));

    for (const auto& x : xs) {
        Vector hx = q.h(x);
        rep.expect(mee.equal(q.h(q.p(hx)), 2 * hx), "hph = 2h fails at " + show(x));
        rep.expect(mee.equal(q.star(hx), hx), "*h = h fails at " + show(x));
        rep.expect(q.equal(q.dagger(x), PairElement{q.star(x.m), -x.a}), "dagger(m,a) != (m*,-a) at " + show(x));
        rep.expect(q.equal(q.dagger(q.dagger(x)), x), "dagger is not an involution at " + show(x));
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); j += 1 + (xs.size() > 12)) {
            const auto &x = xs[i], &y = xs[j];
            auto xy = q.add(x, y);
            rep.expect(mee.equal(q.h(xy), q.h(x) + q.h(y)), "h is not additive at " + show(x) + ", " + show(y));
            rep.expect(q.equal(q.dagger(xy), q.add(q.dagger(y), q.dagger(x))),
                       "dagger is not an anti-homomorphism at " + show(x) + ", " + show(y));
            const auto& z = xs[(i + j) % xs.size()];
            rep.expect(q.equal(q.add(xy, z), q.add(x, q.add(y, z))), "addition is not associative at " + show(x));
        }
    std::vector<Vector> ms;
    for (std::size_t i = 0; i < mee.generator_count(); ++i) ms.push_back(mee.generator(i));
    for (int s = 0; s < samples; ++s) ms.push_back(random_vector(rng, mee.generator_count(), 3));
    for (const auto& m : ms) {
        auto pm = q.p(m);
        rep.expect(q.equal(q.p(q.h(pm)), q.add(pm, q.p(q.star(m)))), "php = p + p* fails at " + show(m));
        rep.expect(q.equal(q.p(q.star(m)), q.dagger(pm)), "p* = dagger p fails at " + show(m));
        rep.expect(mee.equal(q.h(pm) - m, q.star(m)), "hp - id differs from * at " + show(m));
        for (const auto& x : xs)
            rep.expect(q.equal(q.add(pm, x), q.add(x, pm)), "p(M) is not central at " + show(m) + ", " + show(x));
    }
    std::vector<Vector> as;
    for (std::size_t k = 0; k < q.a()->generator_count(); ++k) as.push_back(q.a()->generator(k));
    for (int s = 0; s < samples; ++s) as.push_back(random_vector(rng, q.a()->generator_count(), 3));
    for (const auto& a : as) {
        rep.expect(mee.equal(q.h(q.mu(a)), lam(a, a)), "h mu(a) != lambda(a,a) at " + show(a));
        rep.expect(q.equal(q.mu(-a), q.dagger(q.mu(a))), "mu(-a) != mu(a)^dagger at " + show(a));
        for (const auto& b : as) {
            rep.expect(q.equal(q.mu(a + b), q.add(q.add(q.mu(a), q.mu(b)), q.p(lam(a, b)))),
                       "mu(a+b) != mu(a)+mu(b)+p lambda(a,b) at " + show(a) + ", " + show(b));
            rep.expect(mee.equal(lam(b, a), q.star(lam(a, b))), "lambda is not hermitian at " + show(a) + ", " + show(b));
        }
    }
    return rep;
}

// ---- abelian quadratic forms ------------------------------------------------------

Vector QuadraticFormData::mu(const Vector& a) const {
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), 0);
    return mu(a, order);
}

Vector QuadraticFormData::mu(const Vector& a, const std::vector<std::size_t>& order) const {
    const auto& A = *lambda.a();
    if (a.size() != A.generator_count()) throw InvalidInput("mu: argument length mismatch");
    Vector x = A.zero();
    Vector acc = target.me->zero();
    for (std::size_t k : order) {
        if (a[k] == 0) continue;
        const int sign = a[k] > 0 ? 1 : -1;
        const Vector& mk = mu_generators[k];
        // mu(-a_k) = mu(a_k)^dagger = ph(mu(a_k)) - mu(a_k)
        Vector step = sign > 0 ? mk : target.p(target.h(mk)) - mk;
        Vector y = A.zero();
        y[k] = sign;
        for (Integer c = abs(a[k]); c > 0; --c) {
            acc = acc + step + target.p(lambda(x, y));
            x[k] += sign;
        }
    }
    return acc;
}

AxiomReport validate_form(const QuadraticFormData& f, std::mt19937_64& rng, int samples) {
    AxiomReport rep;
    const auto& me = *f.target.me;
    const auto& mee = *f.target.mee;
    const auto& A = *f.lambda.a();
    auto qrep = validate_quadratic_group(f.target);
    rep.merge(qrep.axioms);
    rep.expect(f.lambda.m().group->generator_count() == mee.generator_count() &&
                   equal_homs(f.lambda.m().star, GroupHom(f.target.mee, f.target.mee, qrep.star)),
               "lambda is not hermitian for the target involution hp - id");
    rep.expect(f.mu_generators.size() == A.generator_count(), "mu needs one value per generator of A");
    if (!rep.ok()) return rep;

    for (std::size_t i = 0; i < A.relations().size(); ++i)
        rep.expect(me.is_zero(f.mu(A.relations()[i])), "mu is not zero on relation " + std::to_string(i) + " of A");
    for (std::size_t k = 0; k < A.generator_count(); ++k)
        rep.expect(mee.equal(f.target.h(f.mu_generators[k]), f.lambda.value(k, k)),
                   "h mu(a) != lambda(a,a) on generator " + std::to_string(k));

    GroupHom dagger = f.target.dagger();
    const bool commutative = f.target.commutative();
    std::vector<Vector> as;
    for (std::size_t k = 0; k < A.generator_count(); ++k) as.push_back(A.generator(k));
    for (int s = 0; s < samples; ++s) as.push_back(random_vector(rng, A.generator_count(), 3));
    for (const auto& a : as) {
        rep.expect(mee.equal(f.target.h(f.mu(a)), f.lambda(a, a)), "h mu(a) != lambda(a,a) at " + show(a));
        rep.expect(me.equal(f.mu(-a), dagger(f.mu(a))), "mu(-a) != mu(a)^dagger at " + show(a));
        std::vector<std::size_t> order(a.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        rep.expect(me.equal(f.mu(a, order), f.mu(a)), "mu depends on the expansion order at " + show(a));
    }
    for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t j = i; j < as.size(); ++j) {
            const auto &a = as[i], &b = as[j];
            rep.expect(me.equal(f.mu(a + b), f.mu(a) + f.mu(b) + f.target.p(f.lambda(a, b))),
                       "mu(a+b) != mu(a)+mu(b)+p lambda(a,b) at " + show(a) + ", " + show(b));
            rep.expect(mee.equal(f.lambda(b, a), f.lambda.m().star(f.lambda(a, b))),
                       "lambda is not hermitian at " + show(a) + ", " + show(b));
        }
    if (commutative) rep.merge(check_square_law(f, as));
    return rep;
}

AxiomReport check_square_law(const QuadraticFormData& f, const std::vector<Vector>& samples, int lo, int hi) {
    AxiomReport rep;
    const auto& me = *f.target.me;
    for (const auto& a : samples) {
        Vector ma = f.mu(a);
        for (int n = lo; n <= hi; ++n)
            rep.expect(me.equal(f.mu(Integer(n) * a), Integer(n * n) * ma),
                       "mu(n a) != n^2 mu(a) for n = " + std::to_string(n) + " at " + show(a));
    }
    return rep;
}

Vector cocycle_word(const std::vector<Letter>& word, const HermitianForm& lambda) {
    const auto& A = *lambda.a();
    Vector prefix = A.zero();
    Vector acc = lambda.m().group->zero();
    for (const auto& l : word) {
        if (l.generator >= A.generator_count() || (l.sign != 1 && l.sign != -1))
            throw InvalidInput("cocycle_word: bad letter");
        Vector y = A.zero();
        y[l.generator] = l.sign;
        acc = acc + lambda(prefix, y);
        prefix[l.generator] += l.sign;
    }
    return acc;
}

std::vector<Letter> relation_word(const Vector& relation) {
    std::vector<Letter> word;
    for (std::size_t k = 0; k < relation.size(); ++k)
        for (Integer c = abs(relation[k]); c > 0; --c) word.push_back({k, relation[k] > 0 ? 1 : -1});
    return word;
}

QuadraticFormData universal_commutative(const HermitianForm& lambda) {
    const auto& M = lambda.m().group;
    const auto& A = lambda.a();
    const std::size_t gm = M->generator_count(), ga = A->generator_count();
    auto pad = [&](const Vector& m_part, const Vector& mu_part) { return concat(m_part, mu_part); };

    std::vector<Vector> rels;
    for (const auto& r : M->relations()) rels.push_back(pad(r, zero_vector(ga)));
    for (const auto& r : A->relations()) {
        // mu(-a) = mu(a) once dagger = id, so each letter contributes +mu(a_k).
        Vector counts(ga);
        for (std::size_t k = 0; k < ga; ++k) counts[k] = abs(r[k]);
        rels.push_back(pad(cocycle_word(relation_word(r), lambda), counts));
    }
    for (std::size_t i = 0; i < gm; ++i) {
        Vector e = M->generator(i);
        Vector d = e - lambda.m().star(e);
        if (!is_zero(d)) rels.push_back(pad(d, zero_vector(ga)));
    }
    for (std::size_t k = 0; k < ga; ++k) {
        Vector two = zero_vector(ga);
        two[k] = 2;
        rels.push_back(pad(-lambda.value(k, k), two));
    }

    std::vector<std::string> names;
    if (!M->names().empty()) {
        names = M->names();
        for (std::size_t k = 0; k < ga; ++k)
            names.push_back("mu(" + (A->names().empty() ? "a" + std::to_string(k + 1) : A->names()[k]) + ")");
    }
    auto me = make_group(gm + ga, std::move(rels), std::move(names));

    IntMatrix p(gm, gm + ga), h(gm + ga, gm);
    for (std::size_t i = 0; i < gm; ++i) {
        p(i, i) = 1;
        Vector e = M->generator(i);
        Vector s = e + lambda.m().star(e);
        for (std::size_t j = 0; j < gm; ++j) h(i, j) = s[j];
    }
    for (std::size_t k = 0; k < ga; ++k)
        for (std::size_t j = 0; j < gm; ++j) h(gm + k, j) = lambda.value(k, k)[j];

    std::vector<Vector> mu;
    for (std::size_t k = 0; k < ga; ++k) mu.push_back(me->generator(gm + k));
    QuadraticGroup q{me, M, GroupHom(me, M, std::move(h)), GroupHom(M, me, std::move(p))};
    return QuadraticFormData{lambda, std::move(q), std::move(mu)};
}

QuadraticFormData universal_symmetric(const HermitianForm& lambda) {
    if (!lambda.m().is_trivial()) throw AxiomViolation("symmetric refinement requires the trivial involution");
    if (!lambda.symmetric()) throw AxiomViolation("lambda is not symmetric");
    return universal_commutative(lambda);
}

SymmetricSequenceReport exact_sequence_symmetric(const HermitianForm& lambda) {
    auto u = universal_symmetric(lambda);
    const std::size_t gm = lambda.m().group->generator_count(), ga = lambda.a()->generator_count();
    auto z2a = tensor_Z2(lambda.a()).group;
    IntMatrix q(gm + ga, ga);
    for (std::size_t k = 0; k < ga; ++k) q(gm + k, k) = 1;
    GroupHom quotient(u.target.me, z2a, std::move(q));
    SymmetricSequenceReport rep;
    rep.p_injective = is_injective(u.target.p);
    rep.middle = is_exact(u.target.p, quotient);
    rep.surjective = is_surjective(quotient);
    return rep;
}

nlohmann::json to_json(const QuadraticFormData& f) {
    const auto& g = *f.target.me;
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& r : g.relations()) rels.push_back(to_json(r));
    nlohmann::json group = group_summary_json(g);
    group["generators"] = g.generator_count();
    group["relations"] = rels;
    if (!g.names().empty()) group["names"] = g.names();
    nlohmann::json mu = nlohmann::json::array();
    for (const auto& v : f.mu_generators) mu.push_back(to_json(v));
    return {{"group", group}, {"p", to_json(f.target.p.matrix())}, {"h", to_json(f.target.h.matrix())}, {"mu", mu}};
}

// ---- morphisms -------------------------------------------------------------------------

AxiomReport validate_form_morphism(const FormMorphism& f, const HermitianForm& source, const HermitianForm& target) {
    AxiomReport rep;
    const auto& a = *source.a();
    const auto& m = *source.m().group;
    const auto& m2 = *target.m().group;
    rep.expect(f.alpha.source()->generator_count() == a.generator_count() &&
                   f.alpha.target()->generator_count() == target.a()->generator_count(),
               "alpha has the wrong shape");
    rep.expect(f.beta_ee.source()->generator_count() == m.generator_count() &&
                   f.beta_ee.target()->generator_count() == m2.generator_count(),
               "beta_ee has the wrong shape");
    if (!rep.ok()) return rep;
    for (std::size_t i = 0; i < m.generator_count(); ++i) {
        Vector e = m.generator(i);
        rep.expect(m2.equal(f.beta_ee(source.m().star(e)), target.m().star(f.beta_ee(e))),
                   "beta_ee does not commute with * on generator " + std::to_string(i));
    }
    for (std::size_t k = 0; k < a.generator_count(); ++k)
        for (std::size_t l = 0; l < a.generator_count(); ++l) {
            Vector ak = a.generator(k), al = a.generator(l);
            rep.expect(m2.equal(target(f.alpha(ak), f.alpha(al)), f.beta_ee(source.value(k, l))),
                       "lambda'(alpha a, alpha b) != beta_ee lambda(a, b) at generators " + std::to_string(k) + ", " +
                           std::to_string(l));
        }
    return rep;
}

InducedMorphism::InducedMorphism(FormMorphism f, PairQuadraticGroup source, QuadraticFormData target)
    : f_(std::move(f)), source_(std::move(source)), target_(std::move(target)) {}

Vector InducedMorphism::operator()(const PairElement& x) const {
    return target_.target.p(f_.beta_ee(x.m)) + target_.mu(f_.alpha(x.a));
}

AxiomReport InducedMorphism::check(std::mt19937_64& rng, int samples) const {
    AxiomReport rep = validate_form_morphism(f_, source_.lambda(), target_.lambda);
    if (!rep.ok()) return rep;
    const auto& me2 = *target_.target.me;
    const auto& mee2 = *target_.target.mee;
    const auto& mee = *source_.mee();
    const auto& A = *source_.a();
    std::vector<Vector> ms, as;
    for (std::size_t i = 0; i < mee.generator_count(); ++i) ms.push_back(mee.generator(i));
    for (std::size_t k = 0; k < A.generator_count(); ++k) as.push_back(A.generator(k));
    for (int s = 0; s < samples; ++s) {
        ms.push_back(random_vector(rng, mee.generator_count(), 3));
        as.push_back(random_vector(rng, A.generator_count(), 3));
    }
    for (const auto& m : ms)
        rep.expect(me2.equal((*this)(source_.p(m)), target_.target.p(f_.beta_ee(m))),
                   "beta_e p != p' beta_ee at " + show(m));
    for (const auto& a : as)
        rep.expect(me2.equal((*this)(source_.mu(a)), target_.mu(f_.alpha(a))), "beta_e mu != mu' alpha at " + show(a));
    std::vector<PairElement> xs;
    for (const auto& m : ms) xs.push_back(source_.p(m));
    for (const auto& a : as) xs.push_back(source_.mu(a));
    for (int s = 0; s < samples; ++s) xs.push_back(source_.random_element(rng, 3));
    for (const auto& x : xs) {
        rep.expect(mee2.equal(target_.target.h((*this)(x)), f_.beta_ee(source_.h(x))),
                   "h' beta_e != beta_ee h at " + show(x));
        const auto& y = xs[rng() % xs.size()];
        rep.expect(me2.equal((*this)(source_.add(x, y)), (*this)(x) + (*this)(y)),
                   "beta_e is not additive at " + show(x) + ", " + show(y));
    }
    return rep;
}

std::size_t InducedMorphism::uniqueness_probe() const {
    const auto& me2 = *target_.target.me;
    std::optional<Vector> delta;
    for (std::size_t i = 0; i < me2.generator_count() && !delta; ++i)
        if (!me2.is_zero(me2.generator(i))) delta = me2.generator(i);
    if (!delta) return 0;
    std::size_t undetected = 0;
    const auto& mee = *source_.mee();
    for (std::size_t i = 0; i < mee.generator_count(); ++i) {
        Vector m = mee.generator(i);
        Vector perturbed = (*this)(source_.p(m)) + *delta;
        if (me2.equal(perturbed, target_.target.p(f_.beta_ee(m)))) ++undetected;
    }
    const auto& A = *source_.a();
    for (std::size_t k = 0; k < A.generator_count(); ++k) {
        Vector a = A.generator(k);
        Vector perturbed = (*this)(source_.mu(a)) + *delta;
        if (me2.equal(perturbed, target_.mu(f_.alpha(a)))) ++undetected;
    }
    return undetected;
}

InducedPairMorphism::InducedPairMorphism(FormMorphism f, PairQuadraticGroup source, PairQuadraticGroup target)
    : f_(std::move(f)), source_(std::move(source)), target_(std::move(target)) {}

PairElement InducedPairMorphism::operator()(const PairElement& x) const {
    return target_.add(target_.p(f_.beta_ee(x.m)), target_.mu(f_.alpha(x.a)));
}

AxiomReport InducedPairMorphism::check(std::mt19937_64& rng, int samples) const {
    AxiomReport rep = validate_form_morphism(f_, source_.lambda(), target_.lambda());
    if (!rep.ok()) return rep;
    const auto& mee = *source_.mee();
    const auto& A = *source_.a();
    const auto& mee2 = *target_.mee();
    std::vector<PairElement> xs;
    for (std::size_t i = 0; i < mee.generator_count(); ++i) {
        Vector m = mee.generator(i);
        rep.expect(target_.equal((*this)(source_.p(m)), target_.p(f_.beta_ee(m))), "beta_e p != p' beta_ee at " + show(m));
        xs.push_back(source_.p(m));
    }
    for (std::size_t k = 0; k < A.generator_count(); ++k) {
        Vector a = A.generator(k);
        rep.expect(target_.equal((*this)(source_.mu(a)), target_.mu(f_.alpha(a))), "beta_e mu != mu' alpha at " + show(a));
        xs.push_back(source_.mu(a));
    }
    for (int s = 0; s < samples; ++s) xs.push_back(source_.random_element(rng, 3));
    for (const auto& x : xs) {
        rep.expect(mee2.equal(target_.h((*this)(x)), f_.beta_ee(source_.h(x))), "h' beta_e != beta_ee h at " + show(x));
        const auto& y = xs[rng() % xs.size()];
        rep.expect(target_.equal((*this)(source_.add(x, y)), target_.add((*this)(x), (*this)(y))),
                   "beta_e is not additive at " + show(x) + ", " + show(y));
    }
    return rep;
}

std::size_t InducedPairMorphism::uniqueness_probe() const {
    std::optional<PairElement> delta;
    for (std::size_t i = 0; i < target_.mee()->generator_count() && !delta; ++i) {
        auto d = target_.p(target_.mee()->generator(i));
        if (!target_.equal(d, target_.zero())) delta = d;
    }
    for (std::size_t k = 0; k < target_.a()->generator_count() && !delta; ++k) {
        auto d = target_.mu(target_.a()->generator(k));
        if (!target_.equal(d, target_.zero())) delta = d;
    }
    if (!delta) return 0;
    std::size_t undetected = 0;
    for (std::size_t i = 0; i < source_.mee()->generator_count(); ++i) {
        Vector m = source_.mee()->generator(i);
        if (target_.equal(target_.add((*this)(source_.p(m)), *delta), target_.p(f_.beta_ee(m)))) ++undetected;
    }
    for (std::size_t k = 0; k < source_.a()->generator_count(); ++k) {
        Vector a = source_.a()->generator(k);
        if (target_.equal(target_.add((*this)(source_.mu(a)), *delta), target_.mu(f_.alpha(a)))) ++undetected;
    }
    return undetected;
}

InducedMorphism induced_morphism(const FormMorphism& f, const PairQuadraticGroup& source,
                                 const QuadraticFormData& target) {
    return InducedMorphism(f, source, target);
}

InducedPairMorphism induced_morphism(const FormMorphism& f, const PairQuadraticGroup& source,
                                     const PairQuadraticGroup& target) {
    return InducedPairMorphism(f, source, target);
}

GroupHom induced_commutative(const FormMorphism& f, const QuadraticFormData& universal,
                             const QuadraticFormData& target) {
    const std::size_t gm = universal.lambda.m().group->generator_count();
    const std::size_t ga = universal.lambda.a()->generator_count();
    const auto& me2 = target.target.me;
    IntMatrix m(gm + ga, me2->generator_count());
    auto set_row = [&](std::size_t r, const Vector& v) {
        for (std::size_t j = 0; j < v.size(); ++j) m(r, j) = v[j];
    };
    for (std::size_t i = 0; i < gm; ++i) set_row(i, target.target.p(f.beta_ee(universal.lambda.m().group->generator(i))));
    for (std::size_t k = 0; k < ga; ++k) set_row(gm + k, target.mu(f.alpha(universal.lambda.a()->generator(k))));
    return GroupHom(universal.target.me, me2, std::move(m));
}

}  // namespace treeforms
