// Acceptance suite: one PASS/FAIL line per criterion. Every check compares the
// library against brute-force enumeration or direct substitution computed
// here, never against the library's own verification routines alone.

#include "famrep/conglomerate.hpp"
#include "famrep/convexdec.hpp"
#include "famrep/integrate.hpp"
#include "famrep/skorohod.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>

using namespace famrep;
namespace orc = famrep::oracle;

namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

struct Result {
    bool passed = true;
    std::string detail;
    std::string failure;

    void require(bool ok, const std::string& what) {
        if (!ok && passed) failure = what;
        passed = passed && ok;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
    std::ostringstream os;
    os.precision(3);
    os << s << " s";
    return os.str();
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Column w of a d x n matrix.
std::vector<Rational> column(const lp::Matrix& t, std::size_t w) {
    std::vector<Rational> c;
    for (const auto& row : t) c.push_back(row[w]);
    return c;
}

// Exact substitution check of a cone-membership answer, written out here.
bool substitutes(const ConglomerabilityInstance& inst, const lp::FeasibilityOutcome& out, bool normalized) {
    const std::size_t n = inst.omega.size();
    if (out.feasible()) {
        const auto& mu = out.mu();
        if (mu.size() != n) return false;
        Rational total(0);
        for (const auto& v : mu) {
            if (v < 0) return false;
            total += v;
        }
        if (normalized && total != 1) return false;
        for (std::size_t i = 0; i < inst.dimension(); ++i) {
            if (dot(inst.t[i], mu) != inst.phi[i]) return false;
        }
        return true;
    }
    const auto& a = out.certificate();
    if (a.size() != inst.dimension()) return false;
    Rational lowest;
    for (std::size_t w = 0; w < n; ++w) {
        const Rational v = dot(a, column(inst.t, w));
        if (!normalized && v < 0) return false;
        if (w == 0 || v < lowest) lowest = v;
    }
    return normalized ? dot(a, inst.phi) < lowest : dot(a, inst.phi) < 0;
}

// ---------------------------------------------------------------------------
// 1. Farkas dichotomy

Result criterion_farkas() {
    Result r;
    Rng rng(1001);
    const auto start = Clock::now();
    int feasible = 0;
    const int total = 500;
    for (int k = 0; k < total; ++k) {
        const std::size_t d = pick(rng, 1, 5);
        const std::size_t n = pick(rng, 1, 8);
        ConglomerabilityInstance inst{{}, orc::numbered_ground(n), {}, {}};
        for (std::size_t i = 0; i < d; ++i) {
            inst.basis_labels.push_back("h" + std::to_string(i + 1));
            std::vector<Rational> row;
            for (std::size_t w = 0; w < n; ++w) row.push_back(orc::random_int(rng, -10, 10));
            inst.t.push_back(row);
        }
        // Half of the targets are planted inside the cone so both branches occur.
        if (k % 2 == 0) {
            std::vector<Rational> mu;
            for (std::size_t w = 0; w < n; ++w) mu.push_back(orc::random_int(rng, 0, 3));
            for (std::size_t i = 0; i < d; ++i) inst.phi.push_back(dot(inst.t[i], mu));
        } else {
            for (std::size_t i = 0; i < d; ++i) inst.phi.push_back(orc::random_int(rng, -10, 10));
        }
        const auto out = check_conglomerability(inst);
        const bool oracle = orc::vertex_feasible(inst.t, inst.phi);
        feasible += out.feasible();
        r.require(out.feasible() == oracle, "verdict disagrees with vertex enumeration on instance " +
                                                std::to_string(k));
        r.require(substitutes(inst, out, false), "witness fails substitution on instance " + std::to_string(k));
    }
    const double elapsed = seconds_since(start);
    r.require(elapsed < 10.0, "took " + fmt_seconds(elapsed));
    r.require(feasible > 0 && feasible < total, "only one branch exercised");
    r.detail = std::to_string(total) + " instances, " + std::to_string(feasible) + " feasible, " +
               fmt_seconds(elapsed);
    return r;
}

// ---------------------------------------------------------------------------
// 2. Layer cake vs direct sum

struct BruteLayers {
    Rational lower;
    std::optional<Rational> upper;  // nullopt = infinite
};

// Lower and upper layer integrals of a nonnegative quantity by brute force.
BruteLayers brute_layers(const std::vector<Rational>& x, const MeasureStructure& ms) {
    std::vector<Rational> levels{Rational(0)};
    for (const auto& v : x) {
        if (v > 0) levels.push_back(v);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    BruteLayers b{Rational(0), Rational(0)};
    for (std::size_t j = 1; j < levels.size(); ++j) {
        Subset above(ms.ground());
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] > levels[j - 1]) above.insert(i);
        }
        const Rational width = levels[j] - levels[j - 1];
        b.lower += width * orc::brute_inner(ms, above);
        const auto outer = orc::brute_outer(ms, above);
        if (outer.is_infinite()) {
            b.upper.reset();
        } else if (b.upper) {
            *b.upper += width * outer.value();
        }
    }
    return b;
}

std::vector<Subset> random_partition(Rng& rng, const GroundSet& g, bool full) {
    std::vector<Subset> blocks;
    const std::size_t k = pick(rng, 1, g.size());
    std::vector<Subset> slots(k, Subset(g));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!full && pick(rng, 0, 4) == 0) continue;
        slots[pick(rng, 0, k - 1)].insert(i);
    }
    for (auto& s : slots) {
        if (!s.empty()) blocks.push_back(s);
    }
    return blocks;
}

Result criterion_layer_cake() {
    Result r;
    Rng rng(2002);
    for (int k = 0; k < 1000; ++k) {
        const auto g = orc::numbered_ground(pick(rng, 1, 7));
        std::vector<Rational> masses;
        std::vector<Rational> x;
        Rational direct(0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            masses.push_back(orc::random_rational(rng, 0, 5, 6));
            x.push_back(orc::random_rational(rng, -20, 20, 4));
            direct += masses.back() * x.back();
        }
        const auto res = integral(RandomQuantity(g, x), MeasureStructure(SetRing::power_set(g), masses));
        r.require(res.integrable() && res.value() == direct, "power-set integral differs from direct sum");
    }
    int raised = 0;
    for (int k = 0; k < 200;) {
        const auto g = orc::numbered_ground(pick(rng, 1, 6));
        auto atoms = random_partition(rng, g, pick(rng, 0, 1) == 1);
        if (atoms.empty()) continue;
        ++k;
        std::vector<Rational> masses;
        for (std::size_t a = 0; a < atoms.size(); ++a) masses.push_back(orc::random_rational(rng, 0, 3, 2));
        const MeasureStructure ms(SetRing::from_atoms(g, atoms), masses);
        std::vector<Rational> x;
        for (std::size_t i = 0; i < g.size(); ++i) x.push_back(orc::random_int(rng, -3, 3));
        std::vector<Rational> pos;
        std::vector<Rational> neg;
        for (const auto& v : x) {
            pos.push_back(v > 0 ? v : Rational(0));
            neg.push_back(v < 0 ? Rational(-v) : Rational(0));
        }
        const auto bp = brute_layers(pos, ms);
        const auto bn = brute_layers(neg, ms);
        const bool differ = !bp.upper || *bp.upper != bp.lower || !bn.upper || *bn.upper != bn.lower;
        const auto res = integral(RandomQuantity(g, x), ms);
        raised += !res.integrable();
        r.require(res.integrable() == !differ, "NotIntegrable disagrees with brute layer integrals");
        if (res.integrable() && !differ) {
            r.require(res.value() == bp.lower - bn.lower, "coarse integral differs from brute layer integral");
        }
    }
    r.require(raised > 0 && raised < 200, "coarse sample did not exercise both outcomes");
    r.detail = "1000 power-set structures, 200 coarse rings (" + std::to_string(raised) + " not integrable)";
    return r;
}

// ---------------------------------------------------------------------------
// 3. Probability criterion on a grid

Result criterion_probability() {
    Result r;
    const auto start = Clock::now();
    const std::vector<Rational> entries{Rational(-1), Rational(0), Rational(1)};
    const std::vector<Rational> targets{Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
    std::size_t count = 0;
    std::size_t inside = 0;
    std::size_t exhaustive_shapes = 0;
    std::size_t sampled = 0;
    Rng rng(3003);

    const auto run_one = [&](std::size_t d, std::size_t n, const std::vector<std::size_t>& tcode,
                             const std::vector<std::size_t>& pcode) {
        ConglomerabilityInstance inst{{}, orc::numbered_ground(n), {}, {}};
        for (std::size_t i = 0; i < d; ++i) {
            inst.basis_labels.push_back("h" + std::to_string(i + 1));
            std::vector<Rational> row;
            for (std::size_t w = 0; w < n; ++w) row.push_back(entries[tcode[i * n + w]]);
            inst.t.push_back(row);
            inst.phi.push_back(targets[pcode[i]]);
        }
        const auto out = probability_representation(inst);
        const bool hull = orc::in_convex_hull(inst.t, inst.phi);
        ++count;
        inside += hull;
        r.require(out.feasible() == hull, "verdict disagrees with convex-hull enumeration");
        r.require(substitutes(inst, out, true), "witness fails substitution");
    };

    // Mixed-radix enumeration of every grid instance of a shape.
    const auto exhaust = [&](std::size_t d, std::size_t n) {
        const std::size_t tn = d * n;
        std::vector<std::size_t> tcode(tn, 0);
        std::vector<std::size_t> pcode(d, 0);
        while (true) {
            std::fill(pcode.begin(), pcode.end(), 0);
            while (true) {
                run_one(d, n, tcode, pcode);
                std::size_t i = 0;
                while (i < d && ++pcode[i] == targets.size()) pcode[i++] = 0;
                if (i == d) break;
            }
            std::size_t j = 0;
            while (j < tn && ++tcode[j] == entries.size()) tcode[j++] = 0;
            if (j == tn) break;
        }
        ++exhaustive_shapes;
    };
    const auto sample = [&](std::size_t d, std::size_t n, std::size_t draws) {
        for (std::size_t k = 0; k < draws; ++k) {
            std::vector<std::size_t> tcode(d * n);
            std::vector<std::size_t> pcode(d);
            for (auto& c : tcode) c = pick(rng, 0, entries.size() - 1);
            for (auto& c : pcode) c = pick(rng, 0, targets.size() - 1);
            run_one(d, n, tcode, pcode);
            ++sampled;
        }
    };

    for (std::size_t d = 1; d <= 3; ++d) {
        for (std::size_t n = 1; n <= 4; ++n) {
            // 3^(d n) matrices times 5^d targets; shapes up to 3^6 matrices are enumerated completely.
            if (d * n <= 6) {
                exhaust(d, n);
            } else {
                sample(d, n, 20000);
            }
        }
    }
    const double elapsed = seconds_since(start);
    r.detail = std::to_string(count) + " grid instances (" + std::to_string(exhaustive_shapes) +
               " shapes exhaustive, " + std::to_string(sampled) + " sampled), " + std::to_string(inside) +
               " in hull, " + fmt_seconds(elapsed);
    return r;
}

// ---------------------------------------------------------------------------
// 4. Companion identity

struct CompanionCase {
    MeasureStructure m;
    PointMap x;
    std::vector<RandomQuantity> family;
    PointMap xprime;
};

CompanionCase random_companion(Rng& rng) {
    const auto omega = orc::numbered_ground(pick(rng, 1, 6), "w");
    const auto s = orc::numbered_ground(pick(rng, 1, 5), "s");
    std::vector<Rational> masses;
    for (std::size_t i = 0; i < omega.size(); ++i) masses.push_back(orc::random_rational(rng, 0, 3, 4));
    PointMap x{omega, s, {}};
    for (std::size_t i = 0; i < omega.size(); ++i) x.image.push_back(pick(rng, 0, s.size() - 1));
    // Ω′ covers S (plus a few repeats), which makes the problem feasible.
    const std::size_t extra = pick(rng, 0, 3);
    PointMap xprime{orc::numbered_ground(s.size() + extra, "v"), s, {}};
    for (std::size_t i = 0; i < s.size(); ++i) xprime.image.push_back(i);
    for (std::size_t i = 0; i < extra; ++i) xprime.image.push_back(pick(rng, 0, s.size() - 1));
    std::vector<RandomQuantity> family;
    for (std::size_t k = pick(rng, 1, 4); k > 0; --k) {
        std::vector<Rational> h;
        for (std::size_t i = 0; i < s.size(); ++i) h.push_back(orc::random_rational(rng, -5, 5, 3));
        family.emplace_back(s, h);
    }
    return {MeasureStructure(SetRing::power_set(omega), masses), x, family, xprime};
}

Result criterion_companion() {
    Result r;
    Rng rng(4004);
    for (int k = 0; k < 100; ++k) {
        const auto c = random_companion(rng);
        const auto res = solve_companion(c.m, c.x, c.family, c.xprime);
        r.require(res.outcome.feasible(), "planted feasible instance reported infeasible");
        if (!res.outcome.feasible()) continue;
        const auto& mu = res.outcome.mu();
        for (const auto& h : c.family) {
            Rational lhs(0);
            for (std::size_t w = 0; w < c.x.image.size(); ++w) lhs += h(c.x.image[w]) * c.m.atom_masses()[w];
            Rational rhs(0);
            for (std::size_t w = 0; w < mu.size(); ++w) {
                r.require(mu[w] >= 0, "negative companion mass");
                rhs += h(c.xprime.image[w]) * mu[w];
            }
            r.require(lhs == rhs, "companion identity fails");
            if (!res.minimal) {
                r.require(false, "no minimal structure returned");
                continue;
            }
            std::vector<Rational> lifted;
            for (std::size_t w = 0; w < mu.size(); ++w) lifted.push_back(h(c.xprime.image[w]));
            std::vector<Rational> pos;
            std::vector<Rational> neg;
            for (const auto& v : lifted) {
                pos.push_back(v > 0 ? v : Rational(0));
                neg.push_back(v < 0 ? Rational(-v) : Rational(0));
            }
            const auto bp = brute_layers(pos, *res.minimal);
            const auto bn = brute_layers(neg, *res.minimal);
            r.require(bp.upper && *bp.upper == bp.lower && bn.upper && *bn.upper == bn.lower,
                      "h(X') not integrable on the minimal ring");
            r.require(bp.lower - bn.lower == lhs, "minimal ring changes an integral");
        }
    }
    r.detail = "100 random feasible instances, identities and minimal-ring integrals exact";
    return r;
}

// ---------------------------------------------------------------------------
// 5. Null ideal

Result criterion_nulls() {
    Result r;
    // Worked example.
    const GroundSet omega({"1", "2"});
    const GroundSet s({"s1", "s2"});
    const GroundSet op({"1", "2", "3"});
    const MeasureStructure m(SetRing::power_set(omega), {Rational(1, 2), Rational(1, 2)});
    const PointMap x{omega, s, {0, 1}};
    const PointMap xp{op, s, {0, 1, 1}};
    const std::vector<RandomQuantity> fam{RandomQuantity::indicator(s.singleton(0)),
                                          RandomQuantity::indicator(s.singleton(1))};
    const auto worked = solve_companion_with_nulls(m, x, fam, xp, IdealOfSets{op, {op.subset({"3"})}});
    r.require(worked.outcome.feasible() &&
                  worked.outcome.mu() == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(0)},
              "worked example does not give (1/2, 1/2, 0)");
    const auto blocked = solve_companion_with_nulls(m, x, fam, xp, IdealOfSets{op, {op.subset({"2", "3"})}});
    r.require(!blocked.outcome.feasible(), "ideal {2,3} should block the second indicator");

    Rng rng(5005);
    int feasible = 0;
    for (int k = 0; k < 200; ++k) {
        const auto c = random_companion(rng);
        IdealOfSets ideal{c.xprime.domain, {}};
        for (std::size_t g = pick(rng, 0, 2); g > 0; --g) {
            Subset gen(c.xprime.domain);
            for (std::size_t w = 0; w < c.xprime.domain.size(); ++w) {
                if (pick(rng, 0, 3) == 0) gen.insert(w);
            }
            ideal.generators.push_back(gen);
        }
        const auto res = solve_companion_with_nulls(c.m, c.x, c.family, c.xprime, ideal);
        // Oracle: feasibility with the ideal's columns deleted.
        std::vector<std::size_t> keep;
        const auto null = ideal.union_of_generators();
        for (std::size_t w = 0; w < c.xprime.domain.size(); ++w) {
            if (!null.contains(w)) keep.push_back(w);
        }
        std::vector<Rational> phi;
        for (const auto& h : c.family) {
            Rational v(0);
            for (std::size_t w = 0; w < c.x.image.size(); ++w) v += h(c.x.image[w]) * c.m.atom_masses()[w];
            phi.push_back(v);
        }
        bool oracle = false;
        if (keep.empty()) {
            oracle = std::all_of(phi.begin(), phi.end(), [](const Rational& v) { return v == 0; });
        } else {
            lp::Matrix t;
            for (const auto& h : c.family) {
                std::vector<Rational> row;
                for (const auto w : keep) row.push_back(h(c.xprime.image[w]));
                t.push_back(row);
            }
            oracle = orc::vertex_feasible(t, phi);
        }
        r.require(res.outcome.feasible() == oracle, "null-ideal verdict disagrees with the column-deleted oracle");
        if (!res.outcome.feasible()) continue;
        ++feasible;
        const auto& mu = res.outcome.mu();
        for (const auto& gen : ideal.generators) {
            for (const auto w : gen.indices()) r.require(mu[w] == 0, "mass on an ideal generator");
        }
        for (std::size_t i = 0; i < c.family.size(); ++i) {
            Rational v(0);
            for (std::size_t w = 0; w < mu.size(); ++w) v += c.family[i](c.xprime.image[w]) * mu[w];
            r.require(v == phi[i], "null-ideal solution breaks the identity");
        }
    }
    r.detail = "worked example exact; 200 random ideals (" + std::to_string(feasible) + " feasible)";
    return r;
}

// ---------------------------------------------------------------------------
// 6. Convex round trip

PiecewiseLinear random_convex(Rng& rng, std::size_t max_kinks) {
    PiecewiseLinear pl;
    const std::size_t k = pick(rng, 1, max_kinks);
    Rational at = orc::random_rational(rng, -20, -10, 3);
    for (std::size_t i = 0; i < k; ++i) {
        at += orc::random_rational(rng, 1, 3, 5);
        pl.breakpoints.push_back(at);
    }
    // Strictly increasing slopes with a sign change inside, so a finite minimizer exists.
    std::vector<Rational> jumps;
    for (std::size_t i = 0; i < k; ++i) jumps.push_back(orc::random_rational(rng, 1, 4, 4));
    const std::size_t cross = pick(rng, 0, k - 1);
    Rational left(0);
    for (std::size_t i = 0; i <= cross; ++i) left -= jumps[i];
    left += orc::random_rational(rng, 0, 1, 4) * jumps[cross];
    pl.slopes.push_back(left);
    for (std::size_t i = 0; i < k; ++i) pl.slopes.push_back(pl.slopes.back() + jumps[i]);
    pl.anchor_x = orc::random_rational(rng, -5, 5, 2);
    pl.anchor_value = orc::random_rational(rng, -5, 5, 2);
    return pl;
}

Result criterion_convex() {
    Result r;
    Rng rng(6006);
    const auto start = Clock::now();
    for (int k = 0; k < 100; ++k) {
        const auto pl = random_convex(rng, 20);
        const auto dec = decompose(pl);
        std::vector<Rational> xs = pl.breakpoints;
        xs.push_back(pl.breakpoints.front() - 3);
        xs.push_back(pl.breakpoints.back() + 3);
        for (int j = 0; j < 10; ++j) xs.push_back(orc::random_rational(rng, -30, 30, 7));
        for (const auto& u : {xs.front(), xs.back()}) {
            for (const auto& v : xs) {
                r.require(reconstruct(dec, u, pl(u), v) == pl(v), "PL reconstruction is not exact");
            }
        }
    }
    // φ = x² sampled on [-5, 5] with step 1/1000.
    SampledFunction sq{Rational(-5), Rational(1, 1000), {}};
    for (int i = 0; i <= 10000; ++i) {
        const Rational x = sq.start + sq.step * i;
        sq.values.push_back(x * x);
    }
    const auto dec = decompose(sq);
    double worst = 0.0;
    for (const int v : {-5, -3, -1, 1, 3, 5}) {
        const Rational got = reconstruct(dec, Rational(-5), Rational(25), Rational(v));
        const double err = std::fabs(Rational(got - v * v).get_d());
        worst = std::max(worst, err);
        r.require(err <= 1e-4, "x^2 reconstruction error above 1e-4 at v = " + std::to_string(v));
    }
    const double elapsed = seconds_since(start);
    r.require(elapsed < 5.0, "took " + fmt_seconds(elapsed));
    std::ostringstream os;
    os << "100 PL functions exact; x^2 max error " << worst << "; " << fmt_seconds(elapsed);
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 7. Two-measure consistency

// h_u^v(x) for thresholds u <= v around x0, written out independently.
Rational kernel_direct(const Rational& u, const Rational& v, const Rational& x0, const Rational& x) {
    if (x > x0) {
        const Rational hi = std::max(x, u);
        return v > hi ? Rational(v - hi) : Rational(0);
    }
    const Rational lo = std::min(v, x);
    return lo > u ? Rational(u - lo) : Rational(0);
}

Result criterion_two_measures() {
    Result r;
    Rng rng(7007);
    std::size_t checks = 0;
    for (int k = 0; k < 20; ++k) {
        const auto pl = random_convex(rng, 12);
        const auto dec = decompose(pl);
        // Kink atoms straight from the slope jumps.
        std::vector<std::pair<Rational, Rational>> kinks;
        for (std::size_t i = 0; i < pl.breakpoints.size(); ++i) {
            if (pl.breakpoints[i] == dec.x0) continue;
            const Rational jump = pl.slopes[i + 1] - pl.slopes[i];
            if (jump != 0) kinks.emplace_back(pl.breakpoints[i], jump);
        }
        std::vector<Rational> grid{pl.breakpoints.front() - 2};
        for (const auto& b : pl.breakpoints) grid.push_back(b + Rational(1, 13));
        grid.push_back(pl.breakpoints.back() + 2);
        const auto inst = stieltjes_lambda(dec, grid);
        for (std::size_t a = 0; a < inst.thresholds.size(); ++a) {
            for (std::size_t b = a + 1; b < inst.thresholds.size(); ++b) {
                const Rational& u = inst.thresholds[a];
                const Rational& v = inst.thresholds[b];
                Rational atom_sum(0);
                for (const auto& [x, w] : kinks) atom_sum += kernel_direct(u, v, dec.x0, x) * w;
                r.require(stieltjes_increment(inst, u, v) == atom_sum, "layer-cake and kink sums differ");
                ++checks;
            }
        }
    }
    r.detail = "20 PL functions, " + std::to_string(checks) + " threshold pairs exact";
    return r;
}

// ---------------------------------------------------------------------------
// 8. Skorohod

LabelMap random_law(Rng& rng, const Enumeration& e) {
    LabelMap m;
    Rational total(0);
    for (const auto& l : e.labels) {
        if (!m.empty() && pick(rng, 0, 2) == 0) continue;
        m[l] = orc::random_int(rng, 1, 30);
        total += m[l];
    }
    for (auto& [l, w] : m) w /= total;
    return m;
}

Enumeration enumerate(std::size_t n) {
    Enumeration e;
    for (std::size_t i = 1; i <= n; ++i) e.labels.push_back("s" + std::to_string(i));
    return e;
}

Result criterion_skorohod() {
    Result r;
    Rng rng(8008);
    for (int k = 0; k < 50; ++k) {
        const auto e = enumerate(pick(rng, 1, 16));
        const auto m = random_law(rng, e);
        const auto im = pushforward_measure(m, e);
        std::vector<LabelMap> tests;
        for (int t = 0; t < 20; ++t) {
            LabelMap h;
            for (const auto& l : e.labels) h[l] = orc::random_rational(rng, -10, 10, 9);
            tests.push_back(h);
        }
        r.require(verify_pushforward(m, e, im, tests), "verify_pushforward rejects the pushforward");
        // Direct: the law of H under the cell measure, point by point.
        for (const auto& h : tests) {
            Rational lhs(0);
            Rational rhs(0);
            for (const auto& [l, w] : m) lhs += h.at(l) * w;
            for (const auto& [n, w] : im.masses) {
                r.require(universal_index(cell_upper(n)) == n, "cell endpoint maps to the wrong index");
                rhs += h.at(e.labels.at(n - 1)) * w;
            }
            r.require(lhs == rhs, "pushforward integral differs");
        }
    }
    // Fixed seed schedule: support sizes 1..16, seed 9000 + size.
    double worst = 0.0;
    for (std::size_t size = 1; size <= 16; ++size) {
        const auto e = enumerate(size);
        LabelMap m;
        Rational total(0);
        for (std::size_t i = 0; i < size; ++i) {
            m[e.labels[i]] = Rational(static_cast<long>(i % 5 + 1));
            total += m[e.labels[i]];
        }
        for (auto& [l, w] : m) w /= total;
        const auto rep = sample_companion(m, e, 100000, 9000 + size);
        worst = std::max(worst, rep.total_variation.get_d());
        r.require(rep.total_variation <= Rational(1, 50), "TV above 0.02 at support " + std::to_string(size));
    }
    std::ostringstream os;
    os << "50 laws x 20 tests exact; sampler worst TV " << worst << " at N=1e5 (seeds 9001..9016)";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------------------
// 9. Disintegration

Result criterion_disintegration() {
    Result r;
    Rng rng(9009);
    int feasible = 0;
    int infeasible = 0;
    int takeouts = 0;
    for (int k = 0; k < 150; ++k) {
        const auto g = orc::numbered_ground(pick(rng, 2, 6));
        const auto s = orc::numbered_ground(pick(rng, 1, std::min<std::size_t>(3, g.size())), "s");
        // X maps onto S; the algebra refines the fibres of X.
        PointMap x{g, s, {}};
        for (std::size_t i = 0; i < g.size(); ++i) x.image.push_back(i < s.size() ? i : pick(rng, 0, s.size() - 1));
        std::vector<Subset> atoms;
        for (std::size_t t = 0; t < s.size(); ++t) {
            Subset fibre(g);
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (x.image[i] == t) fibre.insert(i);
            }
            // Split each fibre at random.
            Subset first(g);
            Subset second(g);
            for (const auto i : fibre.indices()) (pick(rng, 0, 1) ? first : second).insert(i);
            if (!first.empty()) atoms.push_back(first);
            if (!second.empty()) atoms.push_back(second);
        }
        const SetRing algebra = SetRing::from_atoms(g, atoms);
        const std::size_t na = algebra.atom_count();
        // Q_θ concentrated on the fibre of G(θ) = θ-th point of S.
        DisintegrationInstance inst{algebra, AdditiveSetFunction(algebra, std::vector<Rational>(na, Rational(0))),
                                    {}, {}};
        for (std::size_t t = 0; t < s.size(); ++t) {
            inst.thetas.push_back("t" + std::to_string(t + 1));
            std::vector<Rational> q(na, Rational(0));
            Rational total(0);
            for (std::size_t a = 0; a < na; ++a) {
                const auto idx = algebra.atoms()[a].indices();
                if (x.image[idx.front()] == t) {
                    q[a] = orc::random_int(rng, 1, 4);
                    total += q[a];
                }
            }
            for (auto& v : q) v /= total;
            inst.q.emplace_back(algebra, q);
        }
        std::vector<Rational> m(na, Rational(0));
        if (k % 3 == 2) {
            // A random law on the atoms: usually not a mixture.
            Rational total(0);
            for (auto& v : m) {
                v = orc::random_int(rng, 0, 4);
                total += v;
            }
            if (total == 0) {
                m[0] = 1;
                total = 1;
            }
            for (auto& v : m) v /= total;
        } else {
            std::vector<Rational> prior;
            Rational total(0);
            for (std::size_t t = 0; t < s.size(); ++t) {
                prior.push_back(orc::random_int(rng, 1, 5));
                total += prior.back();
            }
            for (std::size_t t = 0; t < s.size(); ++t) {
                for (std::size_t a = 0; a < na; ++a) m[a] += prior[t] / total * inst.q[t].atom_masses()[a];
            }
        }
        inst.m = AdditiveSetFunction(algebra, m);
        const auto out = disintegrate(inst);
        const auto members = algebra.members();
        if (out.feasible()) {
            ++feasible;
            const auto& lambda = out.mu();
            Rational total(0);
            for (const auto& l : lambda) {
                r.require(l >= 0, "negative prior weight");
                total += l;
            }
            r.require(total == 1, "prior does not sum to 1");
            for (const auto& a : members) {
                Rational mix(0);
                for (std::size_t t = 0; t < lambda.size(); ++t) mix += lambda[t] * inst.q[t](a);
                r.require(mix == inst.m(a), "m(A) != sum lambda Q(A)");
            }
        } else {
            ++infeasible;
            const auto& c = out.certificate();
            r.require(c.size() == na, "certificate has the wrong length");
            for (const auto& q : inst.q) r.require(dot(c, q.atom_masses()) >= 0, "certificate negative on some Q");
            r.require(dot(c, inst.m.atom_masses()) < 0, "certificate does not separate m");
        }

        // Takeout, exhaustively over ring members, subsets of S and points of S.
        const PointMap gmap{GroundSet(inst.thetas), s, [&] {
                                std::vector<std::size_t> id(s.size());
                                for (std::size_t t = 0; t < id.size(); ++t) id[t] = t;
                                return id;
                            }()};
        const auto kernel = takeout_kernel(inst, gmap);
        const auto subsets_s = orc::all_subsets(s);
        bool holds = true;
        for (std::size_t p = 0; p < s.size(); ++p) {
            const MeasureStructure ks(kernel.per_point[p]);
            for (const auto& a : members) {
                for (const auto& e : subsets_s) {
                    Subset pre(g);
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        if (e.contains(x.image[i])) pre.insert(i);
                    }
                    const Subset lhs_set = a & pre;
                    const auto outer = orc::brute_outer(ks, lhs_set);
                    const auto inner = orc::brute_inner(ks, lhs_set);
                    const Rational rhs = e.contains(p) ? ks.value(a) : Rational(0);
                    holds = holds && outer.is_finite() && outer.value() == inner && inner == rhs;
                }
            }
        }
        r.require(holds, "takeout identity fails");
        r.require(verify_takeout(algebra, kernel, x) == holds, "verify_takeout disagrees with enumeration");
        ++takeouts;
    }
    r.require(feasible > 0 && infeasible > 0, "both branches should occur");
    r.detail = std::to_string(feasible) + " feasible, " + std::to_string(infeasible) + " infeasible, " +
               std::to_string(takeouts) + " kernels checked exhaustively";
    return r;
}

// ---------------------------------------------------------------------------
// 10. Minimality

// Every ring on the ground set: a partition of some subset into blocks.
std::vector<std::vector<Subset>> all_partial_partitions(const GroundSet& g) {
    std::vector<std::vector<Subset>> out;
    std::vector<Subset> blocks;
    std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (i == g.size()) {
            out.push_back(blocks);
            return;
        }
        place(i + 1);  // point i left outside the support
        for (auto& b : blocks) {
            b.insert(i);
            place(i + 1);
            b = b - g.singleton(i);
        }
        blocks.push_back(g.singleton(i));
        place(i + 1);
        blocks.pop_back();
    };
    place(0);
    return out;
}

// All structures with masses in {0, 1, 2} on every atom.
std::vector<MeasureStructure> all_structures(const GroundSet& g) {
    std::vector<MeasureStructure> out;
    for (const auto& blocks : all_partial_partitions(g)) {
        const SetRing ring = SetRing::from_atoms(g, blocks);
        const std::size_t k = ring.atom_count();
        std::vector<std::size_t> code(k, 0);
        while (true) {
            std::vector<Rational> masses;
            for (const auto c : code) masses.emplace_back(static_cast<long>(c));
            out.emplace_back(ring, masses);
            std::size_t j = 0;
            while (j < k && ++code[j] == 3) code[j++] = 0;
            if (j == k) break;
        }
    }
    return out;
}

// φ on the Stonean cone generated by h: the integrals of h ∧ c at every
// positive attained level c, or "-" when one of them does not exist.
std::string functional_key(const std::vector<Rational>& h, const MeasureStructure& ms) {
    std::vector<Rational> levels;
    for (const auto& v : h) {
        if (v > 0) levels.push_back(v);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::string key;
    for (const auto& c : levels) {
        std::vector<Rational> capped;
        for (const auto& v : h) capped.push_back(std::min(v, c));
        const auto b = brute_layers(capped, ms);
        if (!b.upper || *b.upper != b.lower) return "-";
        key += to_string(b.lower) + ",";
    }
    return key;
}

// small ⪯ big, by brute outer/inner measures of big on the members of small.
bool brute_extension(const MeasureStructure& small, const MeasureStructure& big) {
    for (const auto& a : small.ring().members()) {
        const auto outer = orc::brute_outer(big, a);
        if (outer.is_infinite() || outer.value() != orc::brute_inner(big, a) || outer.value() != small.value(a)) {
            return false;
        }
    }
    return true;
}

Result criterion_minimality() {
    Result r;
    const auto start = Clock::now();
    std::size_t pairs = 0;
    std::size_t strict = 0;
    std::size_t problems = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto g = orc::numbered_ground(n);
        const auto structures = all_structures(g);
        std::vector<std::vector<Rational>> hs;
        std::vector<std::size_t> code(n, 0);
        while (true) {
            std::vector<Rational> h;
            for (const auto c : code) h.emplace_back(static_cast<long>(c));
            hs.push_back(h);
            std::size_t j = 0;
            while (j < n && ++code[j] == 3) code[j++] = 0;
            if (j == n) break;
        }
        for (const auto& h : hs) {
            // Group structures by the functional they induce on the cone of h.
            std::unordered_map<std::string, std::vector<std::size_t>> by_key;
            for (std::size_t i = 0; i < structures.size(); ++i) {
                const auto key = functional_key(h, structures[i]);
                if (key != "-") by_key[key].push_back(i);
            }
            for (const auto& [key, group] : by_key) {
                for (const auto i : group) {
                    const auto minimal = minimal_structure({RandomQuantity(g, h)}, structures[i]);
                    ++problems;
                    r.require(functional_key(h, minimal) == key, "minimal structure changes the functional");
                    for (const auto j : group) {
                        const bool ext = brute_extension(minimal, structures[j]);
                        r.require(ext, "a representing structure is not an extension of the minimal one");
                        r.require(is_extension(minimal, structures[j]) == ext,
                                  "is_extension disagrees with brute force");
                        ++pairs;
                        strict += !(structures[j] == minimal);
                    }
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    r.detail = std::to_string(problems) + " (structure, h) problems on |Omega| <= 4, " + std::to_string(pairs) +
               " representing pairs (" + std::to_string(strict) + " strict), " + fmt_seconds(elapsed);
    return r;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"Farkas dichotomy", criterion_farkas},
        {"Layer-cake vs direct sum", criterion_layer_cake},
        {"Probability criterion", criterion_probability},
        {"Companion identity", criterion_companion},
        {"Null-ideal representation", criterion_nulls},
        {"Convex round-trip", criterion_convex},
        {"Two-measure consistency", criterion_two_measures},
        {"Skorohod exactness", criterion_skorohod},
        {"Disintegration", criterion_disintegration},
        {"Minimality", criterion_minimality},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result res;
        try {
            res = criteria[i].second();
        } catch (const std::exception& e) {
            res.passed = false;
            res.failure = std::string("exception: ") + e.what();
        }
        failures += !res.passed;
        std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (res.passed ? "PASS" : "FAIL")
                  << " - " << res.detail;
        if (!res.passed) std::cout << " (" << res.failure << ")";
        std::cout << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
