#include <random>

#include "doctest.h"
#include "stdl/translate.hpp"

using namespace stdl;

namespace {

Concept P(const std::string& s) { return Concept::name(s, false); }
Concept D(const std::string& s) { return Concept::name(s, true); }

Formula random_formula(std::mt19937& rng, int depth, bool ctl) {
    std::uniform_int_distribution<int> pick(0, 9);
    int k = depth == 0 ? 0 : pick(rng);
    const char* atoms[] = {"p", "q", "r"};
    if (k <= 1) return Formula::prop(atoms[rng() % 3]);
    auto sub = [&] { return random_formula(rng, depth - 1, ctl); };
    switch (k) {
        case 2: return Formula::make(TOp::Not, {sub()});
        case 3: return Formula::make(TOp::And, {sub(), sub()});
        case 4: return Formula::make(TOp::Or, {sub(), sub()});
        default: break;
    }
    TOp path[] = {TOp::X, TOp::G, TOp::F, TOp::U};
    TOp op = path[k - 5 < 4 ? k - 5 : 3];
    if (ctl) op = TOp(int(op) - int(TOp::X) + int(rng() % 2 ? TOp::AX : TOp::EX));
    if (op == TOp::U || op == TOp::AU || op == TOp::EU) return Formula::make(op, {sub(), sub()});
    return Formula::make(op, {sub()});
}

}  // namespace

TEST_CASE("formula syntax") {
    CHECK(parse_formula("(A (X p))") == parse_formula("(AX p)"));
    CHECK(parse_formula("(E (U p q))").op == TOp::EU);
    CHECK(parse_formula("(and p q r)") == parse_formula("(and (and p q) r)"));
    Formula f = parse_formula("(U (not p) (G q))");
    CHECK(parse_formula(f.str()) == f);
    CHECK(f.size() == 5);
    CHECK_THROWS_AS(parse_formula("(Z p)"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(U p)"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(A (AX p))"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(X p"), SyntaxError);
    CHECK(f.is_pltl());
    CHECK_FALSE(f.is_ctl());
    CHECK(parse_formula("(EG (AF p))").is_ctl());
}

TEST_CASE("pltl rules") {
    auto t = pltl_to_tbox(parse_formula("(F p)"));
    CHECK(t.root == "B_Fp");
    CHECK(t.tbox.definition("B_Fp") == Concept::disj({D("B_p"), Concept::exists("f", true, D("B_Fp"))}));
    CHECK(t.tbox.definition("B_p") == P("A_p"));
    CHECK(t.tbox.is_eventuality("B_Fp"));
    CHECK(t.tbox.axioms.size() == 2);

    t = pltl_to_tbox(parse_formula("(G p)"));
    CHECK(t.tbox.definition("B_Gp") == Concept::conj({D("B_p"), Concept::exists("f", true, D("B_Gp"))}));
    CHECK(t.tbox.eventualities.empty());

    t = pltl_to_tbox(parse_formula("p"));
    CHECK(t.root == "B_p");
    CHECK(t.tbox.axioms.size() == 1);

    t = pltl_to_tbox(parse_formula("(U p q)"));
    CHECK(t.tbox.definition(t.root) ==
          Concept::disj({D("B_q"), Concept::conj({D("B_p"), Concept::exists("f", true, D(t.root))})}));
    CHECK(t.tbox.is_eventuality(t.root));

    t = pltl_to_tbox(parse_formula("(and true (not false))"));
    CHECK(t.tbox.definition("B_true") == Concept::top());
    CHECK(t.tbox.definition("B_false") == Concept::bottom());
    CHECK(t.tbox.definition("B_notfalse") == Concept::neg(D("B_false")));

    CHECK_THROWS(pltl_to_tbox(parse_formula("(AX p)")));
}

TEST_CASE("ctl rules") {
    auto t = ctl_to_tbox(parse_formula("(EX p)"));
    CHECK(t.tbox.features == std::vector<std::string>{"f1"});
    CHECK(t.tbox.definition(t.root) == Concept::exists("f1", true, D("B_p")));

    t = ctl_to_tbox(parse_formula("(and (AG p) (EX q))"));
    CHECK(t.tbox.features.size() == 1);
    CHECK(t.tbox.definition("B_AGp") == Concept::conj({D("B_p"), Concept::forall("f1", true, D("B_AGp"))}));

    t = ctl_to_tbox(parse_formula("(and (AF p) (and (EX q) (EG r)))"));
    CHECK(t.tbox.features.size() == 2);
    CHECK(t.tbox.definition("B_AFp") ==
          Concept::disj({D("B_p"), Concept::conj({Concept::forall("f1", true, D("B_AFp")),
                                                  Concept::forall("f2", true, D("B_AFp"))})}));
    CHECK(t.tbox.is_eventuality("B_AFp"));
    CHECK_FALSE(t.tbox.is_eventuality("B_EGr"));

    // empty R: all over no feature is top
    t = ctl_to_tbox(parse_formula("(AX p)"));
    CHECK(t.tbox.features.empty());
    CHECK(t.tbox.definition(t.root) == Concept::top());

    // shared subformula, one axiom and one feature
    t = ctl_to_tbox(parse_formula("(or (EF p) (not (EF p)))"));
    CHECK(t.tbox.features.size() == 1);
    CHECK(t.tbox.axioms.size() == 4);
    CHECK(t.tbox.is_eventuality("B_EFp"));
}

TEST_CASE("subformulas") {
    CHECK(subformulas(parse_formula("p")) == std::set<Formula>{parse_formula("p")});
    CHECK(subformulas(parse_formula("(AX p)")) == std::set<Formula>{parse_formula("(AX p)"), parse_formula("p")});
    CHECK(subformulas(parse_formula("(not (and p q))")) ==
          std::set<Formula>{parse_formula("(not (and p q))"), parse_formula("(and p q)"), parse_formula("p"),
                            parse_formula("q")});
}

TEST_CASE("random translations are weakly cyclic and linear") {
    std::mt19937 rng(11);
    for (int i = 0; i < 400; ++i) {
        bool ctl = i % 2;
        Formula f = random_formula(rng, 5, ctl);
        CAPTURE(f.str());
        auto t = ctl ? ctl_to_tbox(f) : pltl_to_tbox(f);
        CHECK_FALSE(validate_weakly_cyclic(t.tbox));
        CHECK(t.tbox.axioms.size() <= f.size());
        CHECK(t.tbox.axioms.size() == subformulas(f).size());
        for (auto& s : subformulas(f)) {
            bool ev = s.op == TOp::F || s.op == TOp::U || s.op == TOp::AF || s.op == TOp::AU || s.op == TOp::EF ||
                      s.op == TOp::EU;
            if (ev) CHECK(t.tbox.eventualities.size() > 0);
        }
        size_t evs = 0;
        for (auto& s : subformulas(f))
            evs += s.op == TOp::F || s.op == TOp::U || s.op == TOp::AF || s.op == TOp::AU || s.op == TOp::EF ||
                   s.op == TOp::EU;
        CHECK(t.tbox.eventualities.size() == evs);
        auto back = parse_tbox(t.tbox.str());
        CHECK(back.axioms == t.tbox.axioms);
    }
}
