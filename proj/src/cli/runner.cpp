#include "famrep/cli/runner.hpp"

#include "famrep/cli/selftest.hpp"
#include "famrep/conglomerate.hpp"
#include "famrep/convexdec.hpp"
#include "famrep/skorohod.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace famrep::cli {

namespace fs = std::filesystem;

const std::vector<std::string>& commands() {
    static const std::vector<std::string> all{"check",      "represent", "companion", "disintegrate",
                                              "integrate",  "decompose", "skorohod",  "selftest"};
    return all;
}

bool is_known_command(const std::string& command) {
    const auto& all = commands();
    return std::find(all.begin(), all.end(), command) != all.end();
}

std::vector<std::string> commands_for_kind(const std::string& kind) {
    static const std::map<std::string, std::vector<std::string>> table{
        {"measure", {"check"}},
        {"integral", {"check", "integrate"}},
        {"conglomerability", {"check", "represent"}},
        {"companion", {"check", "companion"}},
        {"companion_nulls", {"check", "companion"}},
        {"disintegration", {"check", "disintegrate"}},
        {"convex", {"check", "decompose"}},
        {"skorohod", {"check", "skorohod"}},
    };
    const auto it = table.find(kind);
    return it == table.end() ? std::vector<std::string>{} : it->second;
}

namespace {

// Outcome of one solve, before it is wrapped into the verdict document.
struct Solved {
    std::string outcome;
    Json witness = Json::object();
    std::size_t pivots = 0;
};

Json labelled(const GroundSet& ground, const std::vector<Rational>& values) {
    Json out = Json::object();
    for (std::size_t i = 0; i < values.size(); ++i) out[ground.label(i)] = to_string(values[i]);
    return out;
}

// A value per label of `ground`, keyed by label; every label must appear.
std::vector<Rational> read_labelled(const GroundSet& ground, const Node& node) {
    return read_quantity(ground, node).values();
}

void attach_outcome(Solved& s, const lp::FeasibilityOutcome& out, const GroundSet& columns,
                    const std::string& measure_key) {
    s.pivots = out.pivots;
    if (out.feasible()) {
        s.outcome = "feasible";
        s.witness[measure_key] = labelled(columns, out.mu());
    } else {
        s.outcome = "infeasible";
        s.witness["certificate"] = to_json(out.certificate());
    }
}

lp::FeasibilityOutcome read_outcome(const Node& witness, const GroundSet& columns,
                                    const std::string& measure_key) {
    lp::FeasibilityOutcome out;
    if (witness.has(measure_key)) {
        out.result = lp::Feasible{read_labelled(columns, witness.at(measure_key))};
    } else {
        out.result = lp::Infeasible{witness.at("certificate").rationals()};
    }
    return out;
}

// ---------------------------------------------------------------------------
// conglomerability

ConglomerabilityInstance read_conglomerability(const Node& root) {
    ConglomerabilityInstance inst{root.at("basis").strings(), read_ground(root.at("omega")), {}, {}};
    const Node t = root.at("T");
    if (t.size() != inst.basis_labels.size()) t.fail("expected one row per basis function");
    for (const auto& row : t.items()) {
        if (row.size() != inst.omega.size()) row.fail("expected one entry per point of omega");
        inst.t.push_back(row.rationals());
    }
    const Node phi = root.at("phi");
    if (phi.size() != inst.basis_labels.size()) phi.fail("expected one value per basis function");
    inst.phi = phi.rationals();
    try {
        inst.validate();
    } catch (const InvariantError& e) {
        root.at("basis").fail(e.what());
    }
    return inst;
}

Solved solve_conglomerability(const Node& root, const std::string& command) {
    const auto inst = read_conglomerability(root);
    Solved s;
    const bool normalized = command == "represent";
    const auto out = normalized ? probability_representation(inst) : check_conglomerability(inst);
    attach_outcome(s, out, inst.omega, "mu");
    s.witness["normalized"] = normalized;
    const auto dir = is_directed(inst);
    s.witness["directed"] = Json{{"directed", dir.directed}};
    if (dir.directed) s.witness["directed"]["witness"] = to_json(dir.witness);
    return s;
}

bool reverify_conglomerability(const Node& root, const Node& witness) {
    const auto inst = read_conglomerability(root);
    const bool normalized = witness.at("normalized").boolean();
    return verify_representation(inst, read_outcome(witness, inst.omega, "mu"), normalized);
}

// ---------------------------------------------------------------------------
// measure

Solved solve_measure(const Node& root) {
    const auto ms = read_structure(root.at("structure"));
    Solved s;
    s.outcome = "value";
    s.witness["structure"] = to_json(ms);
    s.witness["total"] = to_json(ms.lambda().total());
    s.witness["carrier"] = to_json(carrier_ring(ms));
    Json queries = Json::array();
    if (const auto list = root.find("queries")) {
        for (const auto& item : list->items()) {
            const auto e = read_subset(ms.ground(), item);
            const auto outer = outer_measure(ms, e);
            const auto inner = inner_measure(ms, e);
            queries.push_back(Json{{"set", to_json(e)},
                                   {"outer", to_string(outer)},
                                   {"inner", to_string(inner)},
                                   {"carried", outer.is_finite() && outer.value() == inner}});
        }
    }
    s.witness["queries"] = queries;
    return s;
}

// ---------------------------------------------------------------------------
// integral

Json layer_json(const LayerIntegrals& li) {
    return Json{{"lower", to_string(li.lower)}, {"upper", to_string(li.upper)}};
}

Solved solve_integral(const Node& root) {
    const auto ms = read_structure(root.at("structure"));
    const auto x = read_quantity(ms.ground(), root.at("x"));
    Solved s;
    const auto result = integral(x, ms);
    s.witness["measurable"] = is_measurable(x, ms);
    if (result.integrable()) {
        s.outcome = "value";
        s.witness["value"] = to_json(result.value());
    } else {
        s.outcome = "infeasible";
        s.witness["positive_tail"] = layer_json(result.failure().positive_tail);
        s.witness["negative_tail"] = layer_json(result.failure().negative_tail);
    }
    return s;
}

bool reverify_integral(const Node& root, const Node& witness) {
    const auto ms = read_structure(root.at("structure"));
    const auto x = read_quantity(ms.ground(), root.at("x"));
    const auto positive = layer_integrals(x.positive_part(), ms);
    const auto negative = layer_integrals(x.negative_part(), ms);
    const bool exists = positive.upper.is_finite() && positive.upper.value() == positive.lower &&
                        negative.upper.is_finite() && negative.upper.value() == negative.lower;
    if (!witness.has("value")) return !exists;
    return exists && witness.at("value").rational() == positive.lower - negative.lower;
}

// ---------------------------------------------------------------------------
// companion

struct CompanionInput {
    MeasureStructure m;
    GroundSet s;
    PointMap x;
    std::vector<RandomQuantity> family;
    PointMap xprime;
    std::optional<IdealOfSets> nulls;
};

CompanionInput read_companion(const Node& root, bool with_nulls) {
    auto m = read_structure(root.at("structure"));
    const GroundSet s = read_ground(root.at("s"));
    auto x = read_point_map(m.ground(), s, root.at("x"));
    std::vector<RandomQuantity> family;
    const Node fam = root.at("family");
    if (fam.size() == 0) fam.fail("family is empty");
    for (const auto& h : fam.items()) family.push_back(read_quantity(s, h));
    const GroundSet omega_prime = read_ground(root.at("omega_prime"));
    auto xprime = read_point_map(omega_prime, s, root.at("x_prime"));
    std::optional<IdealOfSets> nulls;
    if (with_nulls) {
        IdealOfSets ideal{omega_prime, {}};
        for (const auto& g : root.at("nulls").items()) ideal.generators.push_back(read_subset(omega_prime, g));
        nulls = std::move(ideal);
    }
    return {std::move(m), s, std::move(x), std::move(family), std::move(xprime), std::move(nulls)};
}

CompanionResult run_companion(const CompanionInput& in) {
    return in.nulls ? solve_companion_with_nulls(in.m, in.x, in.family, in.xprime, *in.nulls)
                    : solve_companion(in.m, in.x, in.family, in.xprime);
}

Solved solve_companion_kind(const Node& root, bool with_nulls, const Options& options) {
    const auto in = read_companion(root, with_nulls);
    const auto result = run_companion(in);
    Solved s;
    attach_outcome(s, result.outcome, in.xprime.domain, "mu");
    Json kept = Json::array();
    for (const auto c : result.kept_columns) kept.push_back(in.xprime.domain.label(c));
    s.witness["kept"] = kept;
    Json targets = Json::array();
    for (const auto& v : result.instance.phi) targets.push_back(to_string(v));
    s.witness["integrals"] = targets;
    if (options.emit_minimal_ring && result.minimal) s.witness["minimal"] = to_json(*result.minimal);
    return s;
}

bool reverify_companion(const Node& root, const Node& witness, bool with_nulls) {
    const auto in = read_companion(root, with_nulls);
    CompanionResult claimed = run_companion(in);
    claimed.measure.reset();
    claimed.minimal.reset();
    claimed.outcome = read_outcome(witness, in.xprime.domain, "mu");
    if (const auto minimal = witness.find("minimal")) {
        auto layout = read_ring(in.xprime.domain, minimal->at("atoms"));
        auto masses = read_masses(layout, minimal->at("masses"));
        claimed.minimal = MeasureStructure(std::move(layout.ring), std::move(masses));
    }
    return verify_companion(in.m, in.x, in.family, in.xprime, claimed);
}

// ---------------------------------------------------------------------------
// disintegration

struct DisintegrationInput {
    DisintegrationInstance inst;
    std::optional<std::pair<PointMap, PointMap>> takeout;  // (G: Θ → S, X: Ω → S)
};

DisintegrationInput read_disintegration(const Node& root) {
    const GroundSet ground = read_ground(root.at("ground"));
    const auto layout = read_ring(ground, root.find("atoms"));
    const auto as_function = [&](const Node& node) {
        try {
            return AdditiveSetFunction(layout.ring, read_masses(layout, node));
        } catch (const InvariantError& e) {
            node.fail(e.what());
        }
    };
    DisintegrationInstance inst{layout.ring, as_function(root.at("m")), root.at("thetas").strings(), {}};
    const Node q = root.at("q");
    for (const auto& theta : inst.thetas) inst.q.push_back(as_function(q.at(theta)));
    try {
        inst.validate();
    } catch (const InvariantError& e) {
        root.fail(e.what());
    }
    DisintegrationInput in{std::move(inst), std::nullopt};
    if (const auto t = root.find("takeout")) {
        const GroundSet s = read_ground(t->at("s"));
        const GroundSet thetas(in.inst.thetas);
        in.takeout.emplace(read_point_map(thetas, s, t->at("g")), read_point_map(ground, s, t->at("x")));
    }
    return in;
}

Solved solve_disintegration(const Node& root) {
    const auto in = read_disintegration(root);
    Solved s;
    attach_outcome(s, disintegrate(in.inst), GroundSet(in.inst.thetas), "lambda");
    Json atoms = Json::array();
    for (const auto& a : in.inst.algebra.atoms()) atoms.push_back(to_json(a));
    s.witness["atoms"] = atoms;
    if (in.takeout) {
        const auto& [g, x] = *in.takeout;
        try {
            const auto kernel = takeout_kernel(in.inst, g);
            s.witness["takeout"] = Json{{"holds", verify_takeout(in.inst.algebra, kernel, x)}};
        } catch (const PreconditionError& e) {
            root.at("takeout").fail(e.what());
        }
    }
    return s;
}

bool reverify_disintegration(const Node& root, const Node& witness) {
    const auto in = read_disintegration(root);
    return verify_disintegration(in.inst, read_outcome(witness, GroundSet(in.inst.thetas), "lambda"));
}

// ---------------------------------------------------------------------------
// convex

using ConvexFunction = std::variant<PiecewiseLinear, SampledFunction>;

ConvexFunction read_convex_function(const Node& f) {
    if (f.has("values")) {
        SampledFunction s{f.at("start").rational(), f.at("step").rational(), f.at("values").rationals()};
        try {
            s.validate();
        } catch (const InvariantError& e) {
            f.fail(e.what());
        }
        return s;
    }
    const Node anchor = f.at("anchor");
    PiecewiseLinear pl{f.at("breakpoints").rationals(), f.at("slopes").rationals(),
                       anchor.at("x").rational(), anchor.at("value").rational()};
    try {
        pl.validate();
    } catch (const InvariantError& e) {
        f.fail(e.what());
    }
    return pl;
}

// Grid points used for sampled reconstruction checks: about a hundred, ends included.
std::vector<std::size_t> check_indices(const SampledFunction& f) {
    const std::size_t n = f.values.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 100);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; k += stride) out.push_back(k);
    if (out.back() != n - 1) out.push_back(n - 1);
    return out;
}

// Exact check points for a PL function: every breakpoint plus one unit beyond each end.
std::vector<Rational> check_points(const PiecewiseLinear& f) {
    std::vector<Rational> out;
    if (f.breakpoints.empty()) {
        out = {f.anchor_x - 1, f.anchor_x + 1};
    } else {
        out.push_back(f.breakpoints.front() - 1);
        out.insert(out.end(), f.breakpoints.begin(), f.breakpoints.end());
        out.push_back(f.breakpoints.back() + 1);
    }
    return out;
}

Json decomposition_json(const ConvexDecomposition& dec) {
    Json atoms = Json::array();
    for (const auto& [x, w] : dec.nu.atoms) atoms.push_back(Json::array({to_string(x), to_string(w)}));
    Json out{{"x0", to_string(dec.x0)},
             {"left_slope", to_string(dec.left_slope)},
             {"right_slope", to_string(dec.right_slope)},
             {"atoms", atoms}};
    if (dec.nu.density) {
        out["density"] = Json{{"start", to_string(dec.nu.density->start)},
                              {"step", to_string(dec.nu.density->step)},
                              {"cell_masses", to_json(dec.nu.density->cell_masses)}};
    }
    return out;
}

ConvexDecomposition read_decomposition(const Node& w) {
    ConvexDecomposition dec{w.at("x0").rational(), {}, w.at("left_slope").rational(),
                            w.at("right_slope").rational()};
    for (const auto& a : w.at("atoms").items()) {
        if (a.size() != 2) a.fail("expected [location, mass]");
        dec.nu.atoms.emplace_back(a.at(0).rational(), a.at(1).rational());
    }
    if (const auto d = w.find("density")) {
        dec.nu.density = GridDensity{d->at("start").rational(), d->at("step").rational(),
                                     d->at("cell_masses").rationals()};
    }
    try {
        dec.nu.validate();
    } catch (const InvariantError& e) {
        w.fail(e.what());
    }
    return dec;
}

// Largest reconstruction error over the check points, starting from the left end.
Rational reconstruction_error(const ConvexFunction& f, const ConvexDecomposition& dec, std::size_t& points) {
    Rational worst(0);
    points = 0;
    if (const auto* pl = std::get_if<PiecewiseLinear>(&f)) {
        const auto xs = check_points(*pl);
        const Rational u = xs.front();
        for (const auto& v : xs) {
            worst = std::max(worst, Rational(abs(reconstruct(dec, u, (*pl)(u), v) - (*pl)(v))));
            ++points;
        }
    } else {
        const auto& s = std::get<SampledFunction>(f);
        const Rational u = s.point(0);
        for (const auto k : check_indices(s)) {
            const auto r = reconstruct(dec, u, s.values[0], s.point(k));
            worst = std::max(worst, Rational(abs(r - s.values[k])));
            ++points;
        }
    }
    return worst;
}

Solved solve_convex(const Node& root, const Options& options) {
    const Node fnode = root.at("function");
    const auto f = read_convex_function(fnode);
    std::optional<Rational> x0;
    if (const auto n = root.find("x0")) x0 = n->rational();
    ConvexDecomposition dec;
    try {
        if (const auto* pl = std::get_if<PiecewiseLinear>(&f)) {
            dec = decompose(*pl, x0);
        } else {
            if (x0) root.at("x0").fail("x0 is only accepted for piecewise-linear functions");
            dec = decompose(std::get<SampledFunction>(f));
        }
    } catch (const PreconditionError& e) {
        fnode.fail(e.what());
    }
    Solved s;
    s.witness = decomposition_json(dec);
    std::size_t points = 0;
    const Rational err = reconstruction_error(f, dec, points);
    const bool exact = std::holds_alternative<PiecewiseLinear>(f);
    const bool ok = exact ? err == 0 : err <= options.tolerance;
    s.witness["reconstruction"] = Json{{"points", points},
                                       {"max_error", to_string(err)},
                                       {"tolerance", exact ? std::string("0/1") : to_string(options.tolerance)},
                                       {"within_tolerance", ok}};
    s.outcome = ok ? "value" : "infeasible";

    if (const auto t = root.find("thresholds")) {
        std::optional<StieltjesInstance> built;
        try {
            built = stieltjes_lambda(dec, t->rationals());
        } catch (const PreconditionError& e) {
            t->fail(e.what());
        }
        const StieltjesInstance& inst = *built;
        Json cells = Json::array();
        for (std::size_t i = 0; i < inst.x.ground().size(); ++i) {
            cells.push_back(Json{{"cell", inst.x.ground().label(i)},
                                 {"x", to_string(inst.x(i))},
                                 {"mass", to_string(inst.lambda.atom_masses().at(i))}});
        }
        Json increments = Json::array();
        const Rational& u = inst.thresholds.front();
        for (std::size_t j = 1; j < inst.thresholds.size(); ++j) {
            const Rational& v = inst.thresholds[j];
            increments.push_back(Json{{"u", to_string(u)},
                                      {"v", to_string(v)},
                                      {"layer_cake", to_string(stieltjes_increment(inst, u, v))},
                                      {"kink_sum", to_string(reconstruct(dec.x0, dec.nu, u, Rational(0), v))}});
        }
        s.witness["stieltjes"] = Json{{"cells", cells}, {"increments", increments}};
    }
    return s;
}

bool reverify_convex(const Node& root, const Node& witness, const Options& options) {
    const auto f = read_convex_function(root.at("function"));
    const auto dec = read_decomposition(witness);
    std::size_t points = 0;
    const Rational err = reconstruction_error(f, dec, points);
    const bool ok = std::holds_alternative<PiecewiseLinear>(f) ? err == 0 : err <= options.tolerance;
    if (ok != (witness.at("reconstruction").at("within_tolerance").boolean())) return false;
    if (const auto st = witness.find("stieltjes")) {
        for (const auto& inc : st->at("increments").items()) {
            const Rational u = inc.at("u").rational();
            const Rational v = inc.at("v").rational();
            const Rational nu_sum = reconstruct(dec.x0, dec.nu, u, Rational(0), v);
            if (inc.at("layer_cake").rational() != nu_sum) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// skorohod

struct SkorohodInput {
    Enumeration enumeration;
    LabelMap law;
    std::vector<LabelMap> tests;
};

LabelMap read_label_map(const Node& node) {
    LabelMap out;
    for (const auto& [label, value] : node.members()) out[label] = value.rational();
    return out;
}

SkorohodInput read_skorohod(const Node& root) {
    SkorohodInput in{Enumeration{root.at("enumeration").strings()}, read_label_map(root.at("law")), {}};
    try {
        in.enumeration.validate();
    } catch (const InvariantError& e) {
        root.at("enumeration").fail(e.what());
    }
    if (const auto t = root.find("tests")) {
        for (const auto& h : t->items()) in.tests.push_back(read_label_map(h));
    }
    // Indicators of every charged label separate any wrong cell assignment.
    for (const auto& [label, w] : in.law) in.tests.push_back(LabelMap{{label, Rational(1)}});
    return in;
}

Solved solve_skorohod(const Node& root, const Options& options) {
    const auto in = read_skorohod(root);
    IntervalMeasure im;
    try {
        im = pushforward_measure(in.law, in.enumeration);
    } catch (const PreconditionError& e) {
        root.at("law").fail(e.what());
    }
    Solved s;
    s.outcome = "value";
    Json cells = Json::array();
    for (const auto& [n, w] : im.masses) {
        cells.push_back(Json{{"index", n},
                             {"lower", to_string(cell_lower(n))},
                             {"upper", to_string(cell_upper(n))},
                             {"label", in.enumeration.at(n)},
                             {"mass", to_string(w)}});
    }
    s.witness["cells"] = cells;
    s.witness["verified"] = verify_pushforward(in.law, in.enumeration, im, in.tests);

    if (const auto n = root.find("samples")) {
        const std::uint64_t draws = n->unsigned_integer();
        if (draws == 0) n->fail("need at least one sample");
        std::uint64_t seed = 0;
        if (options.seed) {
            seed = *options.seed;
        } else if (const auto sd = root.find("seed")) {
            seed = sd->unsigned_integer();
        } else {
            seed = std::random_device{}();
        }
        const auto report = sample_companion(in.law, in.enumeration, draws, seed);
        Json counts = Json::object();
        for (const auto& [label, c] : report.counts) counts[label] = c;
        s.witness["sampler"] = Json{{"generator", "mt19937_64"},
                                    {"seed", seed},
                                    {"draws", draws},
                                    {"counts", counts},
                                    {"total_variation", to_string(report.total_variation)},
                                    {"total_variation_approx", report.total_variation.get_d()}};
    }
    return s;
}

bool reverify_skorohod(const Node& root, const Node& witness) {
    const auto in = read_skorohod(root);
    IntervalMeasure im;
    for (const auto& c : witness.at("cells").items()) {
        const auto n = static_cast<std::size_t>(c.at("index").unsigned_integer());
        if (n == 0 || n > in.enumeration.labels.size() || in.enumeration.at(n) != c.at("label").string()) {
            return false;
        }
        if (c.at("lower").rational() != cell_lower(n) || c.at("upper").rational() != cell_upper(n)) return false;
        im.masses[n] = c.at("mass").rational();
    }
    return verify_pushforward(in.law, in.enumeration, im, in.tests);
}

// ---------------------------------------------------------------------------

Json base_document(const Json& instance, const std::string& command) {
    Json doc = Json::object();
    doc["id"] = instance.is_object() && instance.contains("id") ? instance["id"] : Json(nullptr);
    doc["kind"] = instance.is_object() && instance.contains("kind") ? instance["kind"] : Json(nullptr);
    doc["command"] = command;
    return doc;
}

Verdict error_verdict(Json doc, const std::string& path, const std::string& message) {
    doc["outcome"] = "error";
    doc["witness"] = nullptr;
    doc["solver"] = Json{{"pivots", 0}};
    doc["diagnostic"] = Json{{"path", path}, {"message", message}};
    return {std::move(doc), 2};
}

std::string read_kind(const Node& root, const std::string& command) {
    const std::string kind = root.at("kind").string();
    const auto allowed = commands_for_kind(kind);
    if (allowed.empty()) root.at("kind").fail("unknown kind \"" + kind + "\"");
    if (std::find(allowed.begin(), allowed.end(), command) == allowed.end()) {
        root.at("kind").fail("command \"" + command + "\" does not accept kind \"" + kind + "\"");
    }
    return kind;
}

Solved dispatch(const std::string& command, const Node& root, const Options& options) {
    const std::string kind = read_kind(root, command);
    if (kind == "measure") return solve_measure(root);
    if (kind == "integral") return solve_integral(root);
    if (kind == "conglomerability") return solve_conglomerability(root, command);
    if (kind == "companion") return solve_companion_kind(root, false, options);
    if (kind == "companion_nulls") return solve_companion_kind(root, true, options);
    if (kind == "disintegration") return solve_disintegration(root);
    if (kind == "convex") return solve_convex(root, options);
    return solve_skorohod(root, options);
}

}  // namespace

Verdict run_instance(const std::string& command, const Json& instance, const Options& options) {
    Json doc = base_document(instance, command);
    if (!is_known_command(command) || command == "selftest") {
        return error_verdict(std::move(doc), "$", "command \"" + command + "\" takes no instance");
    }
    const Node root(instance, "$");
    try {
        Solved s = dispatch(command, root, options);
        doc["outcome"] = s.outcome;
        doc["witness"] = std::move(s.witness);
        doc["solver"] = Json{{"pivots", s.pivots}};
        return {std::move(doc), s.outcome == "infeasible" ? 1 : 0};
    } catch (const SchemaError& e) {
        return error_verdict(std::move(doc), e.path(), e.message());
    } catch (const std::invalid_argument& e) {
        // Domain and invariant errors that no reader caught with a sharper path.
        return error_verdict(std::move(doc), "$", e.what());
    } catch (const std::out_of_range& e) {
        return error_verdict(std::move(doc), "$", e.what());
    }
}

Verdict run_file(const std::string& command, const fs::path& path, const Options& options) {
    try {
        return run_instance(command, load_file(path), options);
    } catch (const SchemaError& e) {
        return error_verdict(base_document(Json(nullptr), command), e.path(), e.message());
    }
}

bool reverify(const Json& instance, const Json& verdict, const Options& options) {
    try {
        const Node v(verdict, "$verdict");
        const std::string outcome = v.at("outcome").string();
        const std::string command = v.at("command").string();
        if (outcome == "error") return run_instance(command, instance, options).document["outcome"] == "error";
        const Node root(instance, "$");
        const Node witness = v.at("witness");
        const std::string kind = read_kind(root, command);
        if (kind == "measure") return solve_measure(root).witness == witness.json();
        if (kind == "integral") return reverify_integral(root, witness);
        if (kind == "conglomerability") return reverify_conglomerability(root, witness);
        if (kind == "companion") return reverify_companion(root, witness, false);
        if (kind == "companion_nulls") return reverify_companion(root, witness, true);
        if (kind == "disintegration") return reverify_disintegration(root, witness);
        if (kind == "convex") return reverify_convex(root, witness, options);
        return reverify_skorohod(root, witness);
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<fs::path> instance_files(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        const std::string suffix = ".verdict.json";
        if (entry.path().extension() != ".json") continue;
        if (name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            continue;
        }
        out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

fs::path verdict_path(const fs::path& input) {
    return input.parent_path() / (input.stem().string() + ".verdict.json");
}

int run(const std::string& command, const std::vector<fs::path>& inputs, const Options& options,
        std::ostream& out, std::ostream& err) {
    if (command == "selftest") {
        const auto report = run_selftest(options.seed.value_or(20240601));
        out << dump(report.document);
        return report.passed ? 0 : 1;
    }
    if (!is_known_command(command)) {
        err << "unknown command \"" << command << "\"\n";
        return 2;
    }
    if (inputs.empty()) {
        err << "no input given\n";
        return 2;
    }
    int worst = 0;
    for (const auto& input : inputs) {
        if (fs::is_directory(input)) {
            const auto files = instance_files(input);
            std::vector<int> codes(files.size(), 0);
            std::atomic<std::size_t> next{0};
            std::mutex err_lock;
            const auto worker = [&] {
                for (std::size_t i = next++; i < files.size(); i = next++) {
                    const auto verdict = run_file(command, files[i], options);
                    codes[i] = verdict.exit_code;
                    try {
                        write_atomically(verdict_path(files[i]), dump(verdict.document));
                    } catch (const std::exception& e) {
                        const std::lock_guard<std::mutex> hold(err_lock);
                        err << e.what() << "\n";
                        codes[i] = 2;
                    }
                }
            };
            const std::size_t n = std::max<std::size_t>(1, std::min(options.jobs, files.size()));
            std::vector<std::thread> pool;
            for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
            worker();
            for (auto& t : pool) t.join();
            for (std::size_t i = 0; i < files.size(); ++i) {
                out << files[i].filename().string() << ": exit " << codes[i] << "\n";
                worst = std::max(worst, codes[i]);
            }
        } else {
            const auto verdict = run_file(command, input, options);
            out << dump(verdict.document);
            if (verdict.exit_code == 2) {
                const auto& diag = verdict.document["diagnostic"];
                err << diag["path"].get<std::string>() << ": " << diag["message"].get<std::string>() << "\n";
            }
            worst = std::max(worst, verdict.exit_code);
        }
    }
    return worst;
}

}  // namespace famrep::cli
