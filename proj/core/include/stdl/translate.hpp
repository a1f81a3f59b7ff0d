// PLTL and CTL formulas and their translation into weakly cyclic TBoxes.
#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stdl/tbox.hpp"

namespace stdl {

enum class TOp : uint8_t { True, False, Atom, Not, And, Or, X, G, F, U, AX, AG, AF, AU, EX, EG, EF, EU };

struct Formula {
    TOp op = TOp::True;
    std::string atom;
    std::vector<Formula> args;

    static Formula make(TOp op, std::vector<Formula> args) { return {op, "", std::move(args)}; }
    static Formula prop(std::string p) { return {TOp::Atom, std::move(p), {}}; }

    size_t size() const;      // symbol count, every operator and leaf counting one
    std::string str() const;  // prefix text accepted by parse_formula
    bool is_ctl() const;      // only A/E-quantified temporal operators
    bool is_pltl() const;     // no path quantifiers

    friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);
    friend bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }
};

// Prefix syntax: p | true | false | (not φ) | (and φ ψ ...) | (or φ ψ ...)
// | (X φ) | (G φ) | (F φ) | (U φ ψ) | (AX φ) ... (EU φ ψ) | (A (X φ)) | (E (U φ ψ)).
// n-ary and/or fold to the left. Throws SyntaxError.
Formula parse_formula(std::string_view text);

std::set<Formula> subformulas(const Formula& f);

struct Translation {
    TBox tbox;
    std::string root;
};

// One abstract feature `f`; F and U roots are eventualities.
Translation pltl_to_tbox(const Formula& f);
// Fresh features f1..fn for E-operators; AX/AG/AF/AU quantify over all of
// them, with an empty union giving top (all) and bottom (some).
Translation ctl_to_tbox(const Formula& f);

}  // namespace stdl
