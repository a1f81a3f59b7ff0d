#include "doctest.h"
#include "stdl/tbox.hpp"

using namespace stdl;

namespace {

TBox decls(const char* alg) {
    return parse_tbox(std::string("algebra ") + alg + "\nrole r\nfeature f\ncfeature g1\ncfeature g2\ncfeature g3\n");
}

}  // namespace

TEST_CASE("concept parsing builds canonical terms") {
    TBox t = decls("rcc8");
    Concept c = parse_concept("(and A (or B (not A)))", t);
    REQUIRE(c.kind() == CKind::And);
    REQUIRE(c.args().size() == 2);
    CHECK(c.args()[0] == Concept::name("A", false));
    CHECK(c.args()[1] == Concept::disj({Concept::name("B", false), Concept::neg(Concept::name("A", false))}));
    CHECK(parse_concept("(and B A)", t) == parse_concept("(and A B A)", t));
    CHECK(parse_concept("(or A)", t) == parse_concept("A", t));
    CHECK(parse_concept("(not (not A))", t) == parse_concept("A", t));
    CHECK(parse_concept("(and A (and B C))", t) == parse_concept("(and C B A)", t));
    CHECK(parse_concept("(some f A)", t).functional());
    CHECK_FALSE(parse_concept("(all r A)", t).functional());
}

TEST_CASE("canonicalize is idempotent and preserves structure") {
    TBox t = decls("rcc8");
    for (const char* s : {"(and A (or B (not A)))", "(some f (and (all r B) (pred {EC,PO} (f g1) (g2))))", "top"}) {
        Concept c = parse_concept(s, t);
        CHECK(canonicalize(c) == c);
        CHECK(canonicalize(canonicalize(c)) == canonicalize(c));
    }
}

TEST_CASE("print and parse round trip") {
    TBox t = parse_tbox(R"(algebra cda
feature f
cfeature go
cfeature gl1
  ; comment line
define-ev B := (or A (some f B))
define C := (and (pred {NE} (go) (gl1)) (pred {No,So} (f go) (gl1)) (not B))
)");
    CHECK(t.axioms.size() == 2);
    CHECK(t.is_eventuality("B"));
    CHECK(t.definition("C").args().size() == 3);
    CHECK(parse_tbox(t.str()).str() == t.str());
    TBox u = parse_tbox(t.str());
    CHECK(u.axioms == t.axioms);
    CHECK(u.eventualities == t.eventualities);
    for (auto& [b, c] : t.axioms) CHECK(parse_concept(c.str(), t) == c);
}

TEST_CASE("forward references resolve to defined names") {
    TBox t = parse_tbox("feature f\ndefine B1 := (some f B2)\n   define B2 := A\n");
    CHECK(t.definition("B1").arg().is_defined());
    CHECK(parse_concept("A", t).is_primitive());
}

TEST_CASE("parse errors") {
    auto err = [](const char* text) {
        try {
            parse_tbox(text);
        } catch (const SyntaxError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(err("algebra cyct\nfeature f\ncfeature g1\ncfeature g2\ndefine B := (pred {NE,SW} (g1) (g2))\n")
              .find("unknown cyct atom") != std::string::npos);
    CHECK(err("algebra cyct\ncfeature g1\ncfeature g2\ndefine B := (pred {rrr} (g1) (g2))\n").find("arity") !=
          std::string::npos);
    CHECK(err("algebra cda\ncfeature g1\ndefine B := (pred {NE} (g1) (g1) (g1))\n").find("arity") != std::string::npos);
    CHECK(err("define B := (some r A)\n").find("undeclared role") != std::string::npos);
    CHECK(err("algebra cda\ncfeature g\ndefine B := (pred {NE} (h g) (g))\n").find("undeclared feature") !=
          std::string::npos);
    CHECK(err("define B := A\ndefine B := C\n").find("duplicate definition") != std::string::npos);
    CHECK(err("define B := (and A\n").find("2:1") != std::string::npos);
    CHECK(err("role r\nfeature r\n").find("declared twice") != std::string::npos);
    CHECK(err("define B := (foo A)\n").find("1:14") != std::string::npos);
    CHECK(err("algebra foo\n").find("unknown algebra") != std::string::npos);
}

TEST_CASE("weak cyclicity") {
    CHECK_FALSE(validate_weakly_cyclic(parse_tbox("feature f\ndefine B := (or A (some f B))\n")));
    auto v = validate_weakly_cyclic(parse_tbox("define B := (and A B)\n"));
    REQUIRE(v);
    CHECK(v->find("outside any quantifier") != std::string::npos);
    v = validate_weakly_cyclic(parse_tbox("feature f\ndefine B1 := (some f B2)\ndefine B2 := (some f B1)\n"));
    REQUIRE(v);
    CHECK(v->find("B1 B2") != std::string::npos);
    // negation does not shield a self-occurrence
    CHECK(validate_weakly_cyclic(parse_tbox("feature f\ndefine B := (or A (not B))\n")));
    CHECK_FALSE(validate_weakly_cyclic(parse_tbox("role r\ndefine B := (all r (not B))\n")));
    auto u = uses(parse_tbox("feature f\ndefine B1 := (some f B2)\ndefine B2 := (and B3 (some f B2))\ndefine B3 := A\n"));
    CHECK(u["B1"] == std::set<std::string>{"B2", "B3"});
    CHECK(u["B2"] == std::set<std::string>{"B2", "B3"});
    CHECK(u["B3"].empty());
}
