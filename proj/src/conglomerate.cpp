#include "famrep/conglomerate.hpp"

#include <set>

namespace famrep {

namespace {

Rational dot_column(const lp::Matrix& t, const std::vector<Rational>& a, std::size_t col) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * t[i][col];
    return s;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// With no columns left, A mu = b is solvable only for b = 0; otherwise the
// unit vector against the first nonzero entry of b separates.
lp::FeasibilityOutcome solve_without_columns(const std::vector<Rational>& b) {
    lp::FeasibilityOutcome out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] != 0) {
            std::vector<Rational> y(b.size(), Rational(0));
            y[i] = b[i] > 0 ? -1 : 1;
            out.result = lp::Infeasible{std::move(y)};
            return out;
        }
    }
    out.result = lp::Feasible{{}};
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Conglomerability

void ConglomerabilityInstance::validate() const {
    const auto d = basis_labels.size();
    if (d == 0) throw InvariantError("instance needs at least one basis function");
    if (std::set<std::string>(basis_labels.begin(), basis_labels.end()).size() != d) {
        throw InvariantError("basis labels must be unique");
    }
    if (t.size() != d) throw InvariantError("T needs one row per basis function");
    for (const auto& row : t) {
        if (row.size() != omega.size()) throw InvariantError("T needs one column per point");
    }
    if (phi.size() != d) throw InvariantError("phi needs one value per basis function");
}

lp::FeasibilitySystem ConglomerabilityInstance::system(bool normalized) const {
    return {t, phi, normalized};
}

ConglomerabilityInstance ConglomerabilityInstance::restrict_columns(
    const std::vector<std::size_t>& columns) const {
    std::vector<std::string> labels;
    for (auto c : columns) labels.push_back(omega.label(c));
    // A ground set cannot be empty; a placeholder keeps the type valid when
    // every column is dropped.
    ConglomerabilityInstance out{basis_labels,
                                 labels.empty() ? GroundSet({"(none)"}) : GroundSet(labels),
                                 {}, phi};
    for (const auto& row : t) {
        std::vector<Rational> r;
        for (auto c : columns) r.push_back(row[c]);
        out.t.push_back(std::move(r));
    }
    return out;
}

lp::FeasibilityOutcome check_conglomerability(const ConglomerabilityInstance& inst) {
    inst.validate();
    return lp::solve_feasibility(inst.system(false));
}

lp::FeasibilityOutcome probability_representation(const ConglomerabilityInstance& inst) {
    inst.validate();
    auto out = lp::solve_feasibility(inst.system(true));
    if (!out.feasible()) {
        auto& y = std::get<lp::Infeasible>(out.result).y;
        y.pop_back();
        lp::normalize_certificate(y);
    }
    return out;
}

bool verify_representation(const ConglomerabilityInstance& inst, const lp::FeasibilityOutcome& out,
                           bool normalized) {
    if (out.feasible()) return lp::verify(inst.system(normalized), out);
    const auto& a = out.certificate();
    if (a.size() != inst.dimension()) return false;
    const Rational at_phi = dot(a, inst.phi);
    if (!normalized) {
        for (std::size_t w = 0; w < inst.omega.size(); ++w) {
            if (dot_column(inst.t, a, w) < 0) return false;
        }
        return at_phi < 0;
    }
    for (std::size_t w = 0; w < inst.omega.size(); ++w) {
        if (dot_column(inst.t, a, w) <= at_phi) return false;
    }
    return true;
}

DirectedVerdict is_directed(const ConglomerabilityInstance& inst) {
    inst.validate();
    const auto d = inst.dimension();
    std::vector<std::size_t> support;
    for (std::size_t w = 0; w < inst.omega.size(); ++w) {
        for (std::size_t i = 0; i < d; ++i) {
            if (inst.t[i][w] != 0) {
                support.push_back(w);
                break;
            }
        }
    }
    DirectedVerdict verdict;
    verdict.witness.assign(d, Rational(0));
    if (support.empty()) {
        verdict.directed = true;
        return verdict;
    }
    // Columns: a⁺ (d), a⁻ (d), one surplus per support point.
    const auto k = support.size();
    lp::FeasibilitySystem sys;
    sys.a.assign(k, std::vector<Rational>(2 * d + k, Rational(0)));
    sys.b.assign(k, Rational(1));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            sys.a[r][i] = inst.t[i][support[r]];
            sys.a[r][d + i] = -inst.t[i][support[r]];
        }
        sys.a[r][2 * d + r] = -1;
    }
    const auto out = lp::solve_feasibility(sys);
    verdict.pivots = out.pivots;
    verdict.directed = out.feasible();
    if (verdict.directed) {
        for (std::size_t i = 0; i < d; ++i) verdict.witness[i] = out.mu()[i] - out.mu()[d + i];
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Companions

void PointMap::validate() const {
    if (image.size() != domain.size()) throw InvariantError("map needs one image per point");
    for (auto i : image) {
        if (i >= codomain.size()) throw InvariantError("map image outside its codomain");
    }
}

RandomQuantity PointMap::pull(const RandomQuantity& h) const {
    if (!(h.ground() == codomain)) throw GroundMismatch();
    std::vector<Rational> v;
    v.reserve(image.size());
    for (auto i : image) v.push_back(h(i));
    return RandomQuantity(domain, std::move(v));
}

bool PointMap::injective() const {
    return std::set<std::size_t>(image.begin(), image.end()).size() == image.size();
}

Subset IdealOfSets::union_of_generators() const {
    Subset u(ground);
    for (const auto& g : generators) u = u | g;
    return u;
}

bool IdealOfSets::contains(const Subset& set) const {
    return set.is_subset_of(union_of_generators());
}

namespace {

ConglomerabilityInstance lift(const MeasureStructure& m, const PointMap& x,
                              const std::vector<RandomQuantity>& family, const PointMap& xprime) {
    x.validate();
    xprime.validate();
    if (!(x.domain == m.ground())) throw GroundMismatch();
    if (!(x.codomain == xprime.codomain)) throw GroundMismatch();
    ConglomerabilityInstance inst{{}, xprime.domain, {}, {}};
    for (std::size_t i = 0; i < family.size(); ++i) {
        inst.basis_labels.push_back("h" + std::to_string(i + 1));
        const auto value = integral(x.pull(family[i]), m);
        if (!value.integrable()) {
            throw PreconditionError("h" + std::to_string(i + 1) + " of X is not integrable");
        }
        inst.phi.push_back(value.value());
        inst.t.push_back(xprime.pull(family[i]).values());
    }
    return inst;
}

CompanionResult solve_lifted(const ConglomerabilityInstance& full,
                             const std::vector<std::size_t>& kept,
                             const std::vector<RandomQuantity>& family, const PointMap& xprime) {
    CompanionResult result{full.restrict_columns(kept), kept, {}, std::nullopt, std::nullopt};
    result.outcome = kept.empty() ? solve_without_columns(full.phi)
                                  : check_conglomerability(result.instance);
    if (!result.outcome.feasible()) return result;

    std::vector<Rational> mu(full.omega.size(), Rational(0));
    for (std::size_t k = 0; k < kept.size(); ++k) mu[kept[k]] = result.outcome.mu()[k];
    std::get<lp::Feasible>(result.outcome.result).mu = mu;

    MeasureStructure measure(SetRing::power_set(full.omega), mu);
    std::vector<RandomQuantity> lifted;
    for (const auto& h : family) lifted.push_back(xprime.pull(h));
    result.minimal = minimal_structure(lifted, measure);
    result.measure = std::move(measure);
    return result;
}

}  // namespace

CompanionResult solve_companion(const MeasureStructure& m, const PointMap& x,
                                const std::vector<RandomQuantity>& family,
                                const PointMap& xprime) {
    const auto full = lift(m, x, family, xprime);
    std::vector<std::size_t> all(full.omega.size());
    for (std::size_t w = 0; w < all.size(); ++w) all[w] = w;
    return solve_lifted(full, all, family, xprime);
}

CompanionResult solve_companion_with_nulls(const MeasureStructure& m, const PointMap& x,
                                           const std::vector<RandomQuantity>& family,
                                           const PointMap& xprime, const IdealOfSets& neg) {
    if (!(neg.ground == xprime.domain)) throw GroundMismatch();
    const auto full = lift(m, x, family, xprime);
    const auto null = neg.union_of_generators();
    std::vector<std::size_t> kept;
    for (std::size_t w = 0; w < full.omega.size(); ++w) {
        if (!null.contains(w)) kept.push_back(w);
    }
    return solve_lifted(full, kept, family, xprime);
}

bool verify_companion(const MeasureStructure& m, const PointMap& x,
                      const std::vector<RandomQuantity>& family, const PointMap& xprime,
                      const CompanionResult& result) {
    const auto full = lift(m, x, family, xprime);
    if (!result.outcome.feasible()) {
        if (result.kept_columns.empty()) {
            const auto& y = result.outcome.certificate();
            return y.size() == full.phi.size() && dot(y, full.phi) < 0;
        }
        return verify_representation(full.restrict_columns(result.kept_columns), result.outcome,
                                     false);
    }
    const auto& mu = result.outcome.mu();
    if (mu.size() != full.omega.size()) return false;
    std::set<std::size_t> kept(result.kept_columns.begin(), result.kept_columns.end());
    for (std::size_t w = 0; w < mu.size(); ++w) {
        if (mu[w] < 0 || (!kept.count(w) && mu[w] != 0)) return false;
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
        Rational s(0);
        for (std::size_t w = 0; w < mu.size(); ++w) s += mu[w] * full.t[i][w];
        if (s != full.phi[i]) return false;
        if (result.minimal) {
            const auto on_minimal = integral(xprime.pull(family[i]), *result.minimal);
            if (!on_minimal.integrable() || on_minimal.value() != s) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Disintegration and takeout

void DisintegrationInstance::validate() const {
    if (algebra.support() != algebra.ground().full_set()) {
        throw InvariantError("the algebra must contain the whole ground set");
    }
    if (thetas.empty() || thetas.size() != q.size()) {
        throw InvariantError("need one distribution per parameter");
    }
    if (std::set<std::string>(thetas.begin(), thetas.end()).size() != thetas.size()) {
        throw InvariantError("parameter labels must be unique");
    }
    if (!(m.ring() == algebra)) throw InvariantError("m must be defined on the algebra");
    if (m.total() != 1) throw InvariantError("m must be a probability");
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (!(q[k].ring() == algebra)) {
            throw InvariantError("Q_" + thetas[k] + " must be defined on the algebra");
        }
        if (q[k].total() != 1) throw InvariantError("Q_" + thetas[k] + " must be a probability");
    }
}

lp::FeasibilityOutcome disintegrate(const DisintegrationInstance& inst) {
    inst.validate();
    const auto atoms = inst.algebra.atom_count();
    lp::FeasibilitySystem sys;
    sys.normalized = true;
    for (std::size_t a = 0; a < atoms; ++a) {
        std::vector<Rational> row;
        for (const auto& q : inst.q) row.push_back(q.atom_masses()[a]);
        sys.a.push_back(std::move(row));
        sys.b.push_back(inst.m.atom_masses()[a]);
    }
    auto out = lp::solve_feasibility(sys);
    if (!out.feasible()) {
        // Both m and every Q_θ sum to one over the atoms, so the weight on
        // the normalization row folds into the atom coefficients.
        auto& y = std::get<lp::Infeasible>(out.result).y;
        const Rational shift = y.back();
        y.pop_back();
        for (auto& c : y) c += shift;
        lp::normalize_certificate(y);
    }
    return out;
}

bool verify_disintegration(const DisintegrationInstance& inst, const lp::FeasibilityOutcome& out) {
    const auto atoms = inst.algebra.atom_count();
    if (out.feasible()) {
        const auto& lambda = out.mu();
        if (lambda.size() != inst.q.size()) return false;
        Rational total(0);
        for (const auto& l : lambda) {
            if (l < 0) return false;
            total += l;
        }
        if (total != 1) return false;
        for (std::size_t a = 0; a < atoms; ++a) {
            Rational s(0);
            for (std::size_t k = 0; k < lambda.size(); ++k) s += lambda[k] * inst.q[k].atom_masses()[a];
            if (s != inst.m.atom_masses()[a]) return false;
        }
        return true;
    }
    const auto& c = out.certificate();
    if (c.size() != atoms) return false;
    for (const auto& q : inst.q) {
        if (dot(c, q.atom_masses()) < 0) return false;
    }
    return dot(c, inst.m.atom_masses()) < 0;
}

bool verify_takeout(const SetRing& ring, const Kernel& kernel, const PointMap& x) {
    x.validate();
    if (!(x.codomain == kernel.s) || !(x.domain == ring.ground())) throw GroundMismatch();
    if (kernel.per_point.size() != kernel.s.size()) {
        throw InvariantError("kernel needs one set function per point");
    }
    std::vector<Subset> fibres(kernel.s.size(), Subset(x.domain));
    for (std::size_t w = 0; w < x.image.size(); ++w) fibres[x.image[w]].insert(w);

    for (std::size_t s = 0; s < kernel.s.size(); ++s) {
        const auto carrier = carrier_ring(MeasureStructure(kernel.per_point[s]));
        const auto value = [&](const Subset& e) -> std::optional<Rational> {
            if (!carrier.ring().contains(e)) return std::nullopt;
            return carrier.value(e);
        };
        for (const auto& atom : ring.atoms()) {
            const auto whole = value(atom);
            if (!whole) return false;
            for (std::size_t t = 0; t < kernel.s.size(); ++t) {
                const auto piece = value(atom & fibres[t]);
                if (!piece || *piece != (t == s ? *whole : Rational(0))) return false;
            }
        }
    }
    return true;
}

Kernel takeout_kernel(const DisintegrationInstance& inst, const PointMap& g) {
    inst.validate();
    g.validate();
    if (g.domain.labels() != inst.thetas) {
        throw PreconditionError("G must be defined on the parameter labels");
    }
    if (!g.injective()) throw PreconditionError("G must be injective");
    const AdditiveSetFunction zero(inst.algebra,
                                   std::vector<Rational>(inst.algebra.atom_count(), Rational(0)));
    Kernel k{g.codomain, std::vector<AdditiveSetFunction>(g.codomain.size(), zero)};
    for (std::size_t theta = 0; theta < g.image.size(); ++theta) k.per_point[g.image[theta]] = inst.q[theta];
    return k;
}

}  // namespace famrep
