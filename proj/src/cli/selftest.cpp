#include "famrep/cli/selftest.hpp"

#include "famrep/conglomerate.hpp"
#include "famrep/convexdec.hpp"
#include "famrep/skorohod.hpp"

#include <functional>
#include <random>

namespace famrep::cli {

namespace {

using Rng = std::mt19937_64;

Rational draw(Rng& rng, int lo, int hi, int max_den = 1) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> den(1, max_den);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

GroundSet points(std::size_t n, const std::string& prefix) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i + 1));
    return GroundSet(labels);
}

bool farkas_case(Rng& rng) {
    const std::size_t d = pick(rng, 1, 4);
    const std::size_t n = pick(rng, 1, 6);
    ConglomerabilityInstance inst{{}, points(n, "w"), {}, {}};
    for (std::size_t i = 0; i < d; ++i) {
        inst.basis_labels.push_back("h" + std::to_string(i + 1));
        std::vector<Rational> row;
        for (std::size_t w = 0; w < n; ++w) row.push_back(draw(rng, -6, 6));
        inst.t.push_back(row);
        inst.phi.push_back(draw(rng, -6, 6));
    }
    return verify_representation(inst, check_conglomerability(inst), false) &&
           verify_representation(inst, probability_representation(inst), true);
}

bool layer_cake_case(Rng& rng) {
    const GroundSet g = points(pick(rng, 1, 6), "w");
    std::vector<Rational> masses;
    std::vector<Rational> xs;
    Rational direct(0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        masses.push_back(draw(rng, 0, 5, 4));
        xs.push_back(draw(rng, -9, 9, 3));
        direct += masses.back() * xs.back();
    }
    const MeasureStructure ms(SetRing::power_set(g), masses);
    const auto r = integral(RandomQuantity(g, xs), ms);
    return r.integrable() && r.value() == direct;
}

bool companion_case(Rng& rng) {
    const GroundSet omega = points(pick(rng, 1, 5), "w");
    const GroundSet s = points(pick(rng, 1, 4), "s");
    std::vector<Rational> masses;
    for (std::size_t i = 0; i < omega.size(); ++i) masses.push_back(draw(rng, 0, 4, 3));
    const MeasureStructure m(SetRing::power_set(omega), masses);
    PointMap x{omega, s, {}};
    for (std::size_t i = 0; i < omega.size(); ++i) x.image.push_back(pick(rng, 0, s.size() - 1));
    // Ω′ holds every point of S, so the image law of X is always a solution.
    PointMap xprime{points(s.size() + 1, "v"), s, {}};
    for (std::size_t i = 0; i < s.size(); ++i) xprime.image.push_back(i);
    xprime.image.push_back(0);
    std::vector<RandomQuantity> family;
    for (std::size_t k = pick(rng, 1, 3); k > 0; --k) {
        std::vector<Rational> h;
        for (std::size_t i = 0; i < s.size(); ++i) h.push_back(draw(rng, -5, 5));
        family.emplace_back(s, h);
    }
    const auto result = solve_companion(m, x, family, xprime);
    return result.outcome.feasible() && verify_companion(m, x, family, xprime, result);
}

PiecewiseLinear random_convex(Rng& rng) {
    PiecewiseLinear pl;
    const std::size_t k = pick(rng, 0, 8);
    Rational at(draw(rng, -10, -5));
    for (std::size_t i = 0; i < k; ++i) {
        at += draw(rng, 1, 4, 3);
        pl.breakpoints.push_back(at);
    }
    Rational slope = draw(rng, -6, -1);
    pl.slopes.push_back(slope);
    for (std::size_t i = 0; i < k; ++i) {
        slope += draw(rng, 1, 3, 2);
        pl.slopes.push_back(slope);
    }
    if (k > 0 && pl.slopes.back() < 0) pl.slopes.back() = draw(rng, 0, 2);
    if (k == 0) pl.slopes.back() = 0;
    pl.anchor_x = draw(rng, -3, 3);
    pl.anchor_value = draw(rng, -3, 3);
    return pl;
}

bool convex_case(Rng& rng) {
    const auto pl = random_convex(rng);
    if (!pl.is_convex()) return true;
    const auto dec = decompose(pl);
    std::vector<Rational> xs = pl.breakpoints;
    xs.push_back(pl.anchor_x + 7);
    xs.push_back(pl.anchor_x - 7);
    const Rational u = xs.back();
    for (const auto& v : xs) {
        if (reconstruct(dec, u, pl(u), v) != pl(v)) return false;
    }
    return true;
}

bool stieltjes_case(Rng& rng) {
    const auto pl = random_convex(rng);
    if (!pl.is_convex()) return true;
    const auto dec = decompose(pl);
    std::vector<Rational> t{Rational(-30)};
    for (const auto& b : pl.breakpoints) t.push_back(b + Rational(1, 7));
    t.push_back(Rational(30));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const auto inst = stieltjes_lambda(dec, t);
    for (std::size_t j = 1; j < inst.thresholds.size(); ++j) {
        const Rational& u = inst.thresholds.front();
        const Rational& v = inst.thresholds[j];
        if (stieltjes_increment(inst, u, v) != reconstruct(dec.x0, dec.nu, u, Rational(0), v)) return false;
    }
    return true;
}

bool skorohod_case(Rng& rng) {
    Enumeration e;
    for (std::size_t i = pick(rng, 1, 12); i > 0; --i) e.labels.push_back("s" + std::to_string(i));
    LabelMap m;
    Rational total(0);
    for (const auto& l : e.labels) {
        if (pick(rng, 0, 2) == 0 && !m.empty()) continue;
        m[l] = draw(rng, 1, 9);
        total += m[l];
    }
    for (auto& [l, w] : m) w /= total;
    std::vector<LabelMap> tests;
    for (int k = 0; k < 10; ++k) {
        LabelMap h;
        for (const auto& l : e.labels) h[l] = draw(rng, -5, 5, 3);
        tests.push_back(h);
    }
    const auto im = pushforward_measure(m, e);
    const auto a = sample_companion(m, e, 200, rng());
    return verify_pushforward(m, e, im, tests) && a.total_variation >= 0 && a.total_variation <= 1;
}

bool disintegration_case(Rng& rng) {
    const GroundSet g = points(pick(rng, 2, 5), "w");
    const SetRing algebra = SetRing::power_set(g);
    const std::size_t k = pick(rng, 1, 3);
    DisintegrationInstance inst{algebra, AdditiveSetFunction(algebra, std::vector<Rational>(g.size(), Rational(0))),
                                {}, {}};
    std::vector<Rational> prior;
    Rational prior_total(0);
    for (std::size_t j = 0; j < k; ++j) {
        inst.thetas.push_back("t" + std::to_string(j + 1));
        std::vector<Rational> q;
        Rational qt(0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            q.push_back(draw(rng, 0, 4));
            qt += q.back();
        }
        if (qt == 0) {
            q[0] = 1;
            qt = 1;
        }
        for (auto& v : q) v /= qt;
        inst.q.emplace_back(algebra, q);
        prior.push_back(draw(rng, 1, 5));
        prior_total += prior.back();
    }
    std::vector<Rational> m(g.size(), Rational(0));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < g.size(); ++i) m[i] += prior[j] / prior_total * inst.q[j].atom_masses()[i];
    }
    // Perturb half the time so both branches appear.
    if (pick(rng, 0, 1) == 1 && g.size() >= 2) {
        const Rational shift = std::min(m[0], Rational(1, 3));
        m[0] -= shift;
        m[1] += shift;
    }
    inst.m = AdditiveSetFunction(algebra, m);
    const auto out = disintegrate(inst);
    return verify_disintegration(inst, out);
}

}  // namespace

SelftestReport run_selftest(std::uint64_t seed) {
    struct Suite {
        const char* name;
        int cases;
        std::function<bool(Rng&)> body;
    };
    const std::vector<Suite> suites{
        {"farkas_dichotomy", 200, farkas_case},    {"layer_cake", 300, layer_cake_case},
        {"companion", 40, companion_case},         {"convex_round_trip", 60, convex_case},
        {"stieltjes_consistency", 20, stieltjes_case}, {"skorohod", 30, skorohod_case},
        {"disintegration", 40, disintegration_case},
    };
    SelftestReport report;
    report.passed = true;
    Json results = Json::array();
    Rng rng(seed);
    for (const auto& suite : suites) {
        int failed = 0;
        std::string first_error;
        for (int i = 0; i < suite.cases; ++i) {
            try {
                if (!suite.body(rng)) ++failed;
            } catch (const std::exception& e) {
                ++failed;
                if (first_error.empty()) first_error = e.what();
            }
        }
        Json entry{{"name", suite.name}, {"cases", suite.cases}, {"failed", failed}};
        if (!first_error.empty()) entry["first_error"] = first_error;
        results.push_back(entry);
        report.passed = report.passed && failed == 0;
    }
    report.document = Json{{"id", nullptr},
                           {"kind", nullptr},
                           {"command", "selftest"},
                           {"outcome", report.passed ? "value" : "infeasible"},
                           {"witness", Json{{"seed", seed}, {"suites", results}}},
                           {"solver", Json{{"pivots", 0}}}};
    return report;
}

}  // namespace famrep::cli
