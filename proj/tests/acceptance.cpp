// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stdl/search.hpp"
#include "stdl/translate.hpp"
#include "support.hpp"

using namespace stdl;
using namespace stdl::testing;

namespace {

constexpr double kExampleSeconds = 10.0;
constexpr int kNetworksPerAlgebra = 500;
constexpr int kFormulasPerLogic = 200;
constexpr size_t kMaxFormulaSize = 25;
// Larger CTL formulas close into tens of thousands of DNF elements.
constexpr size_t kCorpusFormulaSize = 15;
constexpr int kTinyTBoxes = 60;
constexpr int kBruteDepth = 3;
constexpr int kBruteDomain = 2;

TBox load(const std::string& name) {
    std::ifstream in(std::string(STDL_FIXTURES) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tbox(ss.str());
}

struct Case {
    std::string label;
    TBox tbox;
    Concept concept_;
};

// Corpus shared by the bound and mode-equivalence criteria.
std::vector<Case> corpus;
double worst_ratio = 0;
size_t decisions = 0;

Verdict decide_tracked(const Automaton& a, Propagation p) {
    Verdict v = decide(a, {p, 0});
    ++decisions;
    worst_ratio = std::max(worst_ratio, double(v.stats.max_unmarked) / v.stats.bound);
    return v;
}

struct Line {
    bool ok;
    std::string text;
};

void print(int n, const Line& l) { std::cout << "criterion " << n << ": " << (l.ok ? "PASS" : "FAIL") << "  " << l.text << "\n"; }

std::set<int> unfolded(const FRunTree& t) {
    std::set<int> seen;
    std::vector<int> todo{0};
    while (!todo.empty()) {
        int u = t.resolve(todo.back());
        todo.pop_back();
        if (!seen.insert(u).second) continue;
        for (auto& [d, c] : t.nodes[u].children) todo.push_back(c);
    }
    return seen;
}

Line worked_examples() {
    std::vector<std::pair<const char*, const char*>> cases = {
        {"flight_cda.tbox", "B_A"}, {"flight_cda_chains.tbox", "B_A"}, {"two_subscenes_rcc8.tbox", "B_i"},
        {"branching_rcc8.tbox", "B_i"}, {"robot_cyct.tbox", "B_1"},        {"robot_cyct_chain.tbox", "B_1"}};
    bool ok = true;
    double slowest = 0;
    std::string bad;
    for (auto [f, c] : cases) {
        TBox t = load(f);
        Concept q = parse_concept(c, t);
        corpus.push_back({f, t, q});
        auto t0 = std::chrono::steady_clock::now();
        Automaton a = build_automaton(close_tbox(t, q));
        Verdict v = decide_tracked(a, Propagation::Lazy);
        bool good = v.kind == Verdict::Sat && v.witness && !check_witness(a, *v.witness);
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, s);
        if (!good || s >= kExampleSeconds) {
            ok = false;
            bad += std::string(" ") + f;
        }
    }
    std::ostringstream os;
    os << cases.size() << " examples SAT with checked witnesses, slowest " << slowest << " s (limit " << kExampleSeconds
       << " s)" << (bad.empty() ? "" : ", failing:" + bad);
    return {ok, os.str()};
}

Line eventualities() {
    int pass = 0, total = 0;
    auto pltl = [&](const std::string& f, Verdict::Kind want) {
        Translation tr = pltl_to_tbox(parse_formula(f));
        Concept c = Concept::name(tr.root, true);
        corpus.push_back({f, tr.tbox, c});
        Automaton a = build_automaton(close_tbox(tr.tbox, c));
        Verdict v = decide_tracked(a, Propagation::Lazy);
        ++total;
        bool good = v.kind == want;
        if (good && want == Verdict::Sat) good = v.witness && !check_witness(a, *v.witness);
        pass += good;
        return std::make_pair(a, v);
    };
    pltl("(and (F p) (G (not p)))", Verdict::Unsat);
    pltl("(and (U p q) (G (not q)))", Verdict::Unsat);
    auto [a, v] = pltl("(F p)", Verdict::Sat);
    ++total;
    if (v.witness) {
        bool hit = false;
        for (int u : unfolded(v.witness->tree)) hit |= v.witness->tree.nodes[u].L.count(Concept::name("A_p", false)) > 0;
        pass += hit;
    }

    TBox t = load("branching_rcc8.tbox");
    Automaton b = build_automaton(close_tbox(t, parse_concept("B_i", t)));
    Verdict w = decide_tracked(b, Propagation::Lazy);
    ++total;
    if (w.kind == Verdict::Sat && w.witness && !check_witness(b, *w.witness)) {
        bool hit = false;
        int de = b.state("B_DE");
        for (int u : unfolded(w.witness->tree)) {
            auto& Y = w.witness->tree.nodes[u].Y;
            hit |= std::find(Y.begin(), Y.end(), de) != Y.end();
        }
        pass += hit;
    }
    std::ostringstream os;
    os << pass << "/" << total << " eventuality checks (zero tolerance)";
    return {pass == total, os.str()};
}

std::mt19937 rng(20261016);

int uniform(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

Formula random_formula(bool ctl, int budget) {
    const char* props[] = {"p", "q", "r"};
    if (budget <= 1 || uniform(5) == 0) return Formula::prop(props[uniform(3)]);
    std::vector<TOp> un = ctl ? std::vector<TOp>{TOp::Not, TOp::AX, TOp::EX, TOp::AG, TOp::EG, TOp::AF, TOp::EF}
                              : std::vector<TOp>{TOp::Not, TOp::X, TOp::G, TOp::F};
    std::vector<TOp> bin = ctl ? std::vector<TOp>{TOp::And, TOp::Or, TOp::AU, TOp::EU}
                               : std::vector<TOp>{TOp::And, TOp::Or, TOp::U};
    if (budget < 3 || uniform(2)) return Formula::make(un[uniform(int(un.size()))], {random_formula(ctl, budget - 1)});
    int left = 1 + uniform(budget - 2);
    return Formula::make(bin[uniform(int(bin.size()))], {random_formula(ctl, left), random_formula(ctl, budget - 1 - left)});
}

Line translator_bounds() {
    int ok = 0, total = 0;
    size_t biggest = 0;
    for (bool ctl : {false, true})
        for (int i = 0; i < kFormulasPerLogic; ++i) {
            Formula f = random_formula(ctl, 1 + uniform(int(kMaxFormulaSize)));
            biggest = std::max(biggest, f.size());
            Translation tr = ctl ? ctl_to_tbox(f) : pltl_to_tbox(f);
            ++total;
            bool good = f.size() <= kMaxFormulaSize && !validate_weakly_cyclic(tr.tbox) && tr.tbox.axioms.size() <= f.size();
            ok += good;
            if (i % 10 == 0 && f.size() <= kCorpusFormulaSize) corpus.push_back({f.str(), tr.tbox, Concept::name(tr.root, true)});
        }
    std::ostringstream os;
    os << ok << "/" << total << " translations weakly cyclic with at most size(φ) defined concepts (largest size "
       << biggest << ")";
    return {ok == total, os.str()};
}

Line algebra_kernel() {
    std::string why;
    for (AlgebraId a : {AlgebraId::RCC8, AlgebraId::CDA}) {
        int n = atom_count(a);
        Relation id = Relation::atom(a, identity_atom(a));
        for (int x = 0; x < n; ++x) {
            Relation rx = Relation::atom(a, x);
            if (converse(converse(rx)) != rx || compose(id, rx) != rx || compose(rx, id) != rx) why += " identity/converse";
            for (int y = 0; y < n; ++y) {
                Relation ry = Relation::atom(a, y);
                if (converse(compose(rx, ry)) != compose(converse(ry), converse(rx))) why += " converse-of-composition";
                for (int z = 0; z < n; ++z) {
                    Relation rz = Relation::atom(a, z);
                    if ((compose(rx, ry) & rz).is_empty() != (compose(converse(rx), rz) & ry).is_empty()) why += " peirce";
                }
            }
        }
    }
    if (atom_count(AlgebraId::CYCT) != 24) why += " cyct-atoms";

    int agree = 0, trials = 0, pc_agree = 0, pc_trials = 0;
    for (AlgebraId a : {AlgebraId::RCC8, AlgebraId::CDA}) {
        std::uniform_int_distribution<int> pick(0, atom_count(a) - 1);
        std::bernoulli_distribution perturb(0.25);
        for (int t = 0; t < kNetworksPerAlgebra; ++t) {
            int n = 4 + t % 2;
            oracle::AtomMatrix m;
            for (;;) {
                m.assign(size_t(n) * n, identity_atom(a));
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        m[size_t(i) * n + j] = pick(rng);
                        m[size_t(j) * n + i] = converse_atom(a, m[size_t(i) * n + j]);
                    }
                if (oracle::binary_realizable(a, n, m)) break;
            }
            Qsp q(a);
            for (int i = 0; i < n; ++i) q.var("v" + std::to_string(i));
            Qsp atomic = q;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    int base = perturb(rng) ? pick(rng) : m[size_t(i) * n + j];
                    q.constrain(i, j, random_superset(a, base, rng, 0.15));
                    atomic.constrain(i, j, Relation::atom(a, base));
                }
            ++trials;
            agree += bool(solve_scenario(q)) == oracle_has_scenario(q);
            ++pc_trials;
            pc_agree += bool(path_consistency(atomic)) == oracle_has_scenario(atomic);
        }
    }
    std::ostringstream os;
    os << "coherence " << (why.empty() ? "exact" : "broken:" + why) << ", cyct atoms " << atom_count(AlgebraId::CYCT)
       << ", solver/enumeration " << agree << "/" << trials << ", atomic PC/oracle " << pc_agree << "/" << pc_trials;
    return {why.empty() && agree == trials && pc_agree == pc_trials, os.str()};
}

std::string random_body(int depth, bool allow_self) {
    int k = uniform(depth <= 0 ? 4 : 9);
    switch (k) {
        case 0: return "A";
        case 1: return "(not A)";
        case 2: return uniform(2) ? "(pred {DC,EC} (g) (f g))" : "(pred {EQ} (g) (f g))";
        case 3: return allow_self ? "B" : "(not (pred {EQ} (g) (f g)))";
        case 4: return "(some f " + random_body(depth - 1, allow_self) + ")";
        case 5: return "(all f " + random_body(depth - 1, allow_self) + ")";
        case 6: return "(and " + random_body(depth - 1, allow_self) + " " + random_body(depth - 1, allow_self) + ")";
        case 7: return "(or " + random_body(depth - 1, allow_self) + " " + random_body(depth - 1, allow_self) + ")";
        default: return "(some r " + random_body(depth - 1, false) + ")";
    }
}

Line oracle_agreement() {
    int generated = 0, attempts = 0, bf_sat = 0, engine_sat = 0, violations = 0;
    while (generated < kTinyTBoxes && attempts < 50 * kTinyTBoxes) {
        ++attempts;
        // the self reference sits under f, the rest is random
        std::string def = "(" + std::string(uniform(2) ? "or " : "and ") + random_body(1, false) + " (some f " +
                          random_body(1, true) + "))";
        std::string text = "algebra rcc8\nrole r\nfeature f\ncfeature g\n" +
                           std::string(uniform(2) ? "define-ev" : "define") + " B := " + def + "\n";
        TBox t;
        try {
            t = parse_tbox(text);
        } catch (const SyntaxError&) {
            continue;
        }
        if (validate_weakly_cyclic(t)) continue;
        Concept c = parse_concept("B", t);
        ClosedTBox ct = close_tbox(t, c);
        if (ct.order.size() > 3) continue;
        BruteResult bf;
        try {
            bf = brute_force_sat(c, t, kBruteDepth, kBruteDomain);
        } catch (const std::invalid_argument&) {
            continue;
        }
        ++generated;
        corpus.push_back({text, t, c});
        Automaton a = build_automaton(ct);
        Verdict v = decide_tracked(a, Propagation::Lazy);
        bool sat = v.kind == Verdict::Sat;
        bf_sat += bf == BruteResult::Sat;
        engine_sat += sat;
        if (bf == BruteResult::Sat && !sat) {
            ++violations;
            std::cerr << "oracle found a model the search missed:\n" << text;
        }
        if (sat && (!v.witness || check_witness(a, *v.witness))) {
            ++violations;
            std::cerr << "witness rejected:\n" << text;
        }
    }
    std::ostringstream os;
    os << generated << " tiny TBoxes (|Q| <= 3), oracle SAT " << bf_sat << ", search SAT " << engine_sat
       << ", violations " << violations;
    return {generated >= 50 && violations == 0, os.str()};
}

Line modes() {
    int same = 0, total = 0;
    for (auto& c : corpus) {
        auto t0 = std::chrono::steady_clock::now();
        Automaton a = build_automaton(close_tbox(c.tbox, c.concept_));
        Verdict l = decide_tracked(a, Propagation::Lazy), e = decide_tracked(a, Propagation::Eager);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (getenv("STDL_TIMING") && secs > 0.5)
            std::cerr << secs << " s, " << l.stats.expansions << " expansions, |Q| " << a.states.size() << ": " << c.label << "\n";
        ++total;
        bool eq = l.kind == e.kind;
        if (eq && l.witness && e.witness) eq = witness_dot(a, *l.witness) == witness_dot(a, *e.witness);
        if (!eq) std::cerr << "modes differ on " << c.label << "\n";
        same += eq;
    }
    std::ostringstream os;
    os << same << "/" << total << " corpus entries give identical verdicts and witnesses";
    return {same == total, os.str()};
}

}  // namespace

int main() {
    std::vector<std::pair<int, Line>> lines;
    auto guarded = [&](int n, Line (*f)()) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            lines.push_back({n, f()});
            if (getenv("STDL_TIMING"))
                std::cerr << n << ": " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                          << " s\n";
        } catch (const std::exception& e) {
            lines.push_back({n, {false, std::string("exception: ") + e.what()}});
        }
    };
    guarded(1, worked_examples);
    guarded(2, eventualities);
    guarded(3, translator_bounds);
    guarded(4, algebra_kernel);
    guarded(5, oracle_agreement);
    guarded(7, modes);
    std::ostringstream os;
    os << "max unmarked/bound ratio " << worst_ratio << " over " << decisions << " searches";
    lines.push_back({6, {worst_ratio <= 1.0, os.str()}});
    std::sort(lines.begin(), lines.end(), [](auto& x, auto& y) { return x.first < y.first; });
    bool all = true;
    for (auto& [n, l] : lines) {
        print(n, l);
        all &= l.ok;
    }
    return all ? 0 : 1;
}
