#include "stdl/translate.hpp"

#include <cctype>
#include <map>
#include <stdexcept>

namespace stdl {

namespace {

struct OpInfo {
    TOp op;
    const char* name;
    int arity;  // -1: two or more, folded
};

constexpr OpInfo kOps[] = {
    {TOp::Not, "not", 1}, {TOp::And, "and", -1}, {TOp::Or, "or", -1}, {TOp::X, "X", 1},
    {TOp::G, "G", 1},     {TOp::F, "F", 1},      {TOp::U, "U", 2},    {TOp::AX, "AX", 1},
    {TOp::AG, "AG", 1},   {TOp::AF, "AF", 1},    {TOp::AU, "AU", 2},  {TOp::EX, "EX", 1},
    {TOp::EG, "EG", 1},   {TOp::EF, "EF", 1},    {TOp::EU, "EU", 2},
};

const OpInfo* op_by_name(const std::string& s) {
    for (auto& o : kOps)
        if (s == o.name) return &o;
    return nullptr;
}

const char* op_name(TOp op) {
    for (auto& o : kOps)
        if (o.op == op) return o.name;
    return "?";
}

bool is_path_op(TOp op) { return op == TOp::X || op == TOp::G || op == TOp::F || op == TOp::U; }
bool is_a_op(TOp op) { return op >= TOp::AX && op <= TOp::AU; }
bool is_e_op(TOp op) { return op >= TOp::EX && op <= TOp::EU; }

TOp quantify(char q, TOp path) {
    int off = int(path) - int(TOp::X);
    return TOp(int(q == 'A' ? TOp::AX : TOp::EX) + off);
}

class FormulaParser {
public:
    explicit FormulaParser(std::string_view s) : s_(s) {}

    Formula parse() {
        Formula f = formula();
        skip();
        if (pos_ < s_.size()) fail("trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(1, int(pos_) + 1, msg); }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string word() {
        skip();
        size_t b = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
               s_[pos_] != ')')
            ++pos_;
        if (b == pos_) fail("expected identifier");
        return std::string(s_.substr(b, pos_ - b));
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    Formula formula() {
        if (!peek('(')) {
            std::string w = word();
            if (w == "true") return Formula::make(TOp::True, {});
            if (w == "false") return Formula::make(TOp::False, {});
            if (op_by_name(w) || w == "A" || w == "E") fail("operator '" + w + "' needs parentheses");
            for (char c : w)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') fail("bad proposition '" + w + "'");
            return Formula::prop(w);
        }
        expect('(');
        std::string head = word();
        Formula out;
        if (head == "A" || head == "E") {
            expect('(');
            std::string path = word();
            auto* o = op_by_name(path);
            if (!o || !is_path_op(o->op)) fail("expected X, G, F or U after " + head);
            out = Formula::make(quantify(head[0], o->op), args(o->arity));
            expect(')');
        } else if (auto* o = op_by_name(head)) {
            auto as = args(o->arity);
            if (o->arity == -1) {
                out = as[0];
                for (size_t i = 1; i < as.size(); ++i) out = Formula::make(o->op, {out, as[i]});
            } else {
                out = Formula::make(o->op, std::move(as));
            }
        } else {
            fail("unknown operator '" + head + "'");
        }
        expect(')');
        return out;
    }

    std::vector<Formula> args(int arity) {
        std::vector<Formula> as;
        while (!peek(')')) {
            if (pos_ >= s_.size()) fail("unexpected end of input");
            as.push_back(formula());
        }
        if (arity == -1 ? as.size() < 2 : int(as.size()) != arity) fail("wrong number of arguments");
        return as;
    }

    std::string_view s_;
    size_t pos_ = 0;
};

// Name fragment in prefix order, e.g. AG p -> "AGp".
std::string polish(const Formula& f) {
    switch (f.op) {
        case TOp::True: return "true";
        case TOp::False: return "false";
        case TOp::Atom: return f.atom;
        default: break;
    }
    std::string s = op_name(f.op);
    for (auto& a : f.args) s += polish(a);
    return s;
}

class Translator {
public:
    explicit Translator(bool ctl) : ctl_(ctl) {
        if (!ctl) out_.tbox.declare_feature("f");
    }

    Translation run(const Formula& f) {
        if (ctl_) assign_features(f);
        out_.root = name_of(f);
        return std::move(out_);
    }

private:
    void assign_features(const Formula& f) {
        for (auto& a : f.args) assign_features(a);
        if (is_e_op(f.op) && !feature_.count(f)) {
            std::string id = "f" + std::to_string(feature_.size() + 1);
            feature_[f] = id;
            out_.tbox.declare_feature(id);
        }
    }

    Concept ref(const Formula& f) { return Concept::name(name_of(f), true); }

    Concept all_r(const Concept& c) {
        std::vector<Concept> cs;
        for (auto& id : out_.tbox.features) cs.push_back(Concept::forall(id, true, c));
        return Concept::conj(std::move(cs));
    }

    std::string fresh_name(const Formula& f) {
        std::string base = "B_" + polish(f), n = base;
        for (int i = 2; taken_.count(n); ++i) n = base + "_" + std::to_string(i);
        taken_.insert(n);
        return n;
    }

    std::string name_of(const Formula& f) {
        if (auto it = names_.find(f); it != names_.end()) return it->second;
        std::string b = fresh_name(f);
        names_[f] = b;
        Concept self = Concept::name(b, true);
        auto nx = [&](const Concept& c) {
            if (!ctl_) return Concept::exists("f", true, c);
            if (is_e_op(f.op)) return Concept::exists(feature_.at(f), true, c);
            return all_r(c);
        };
        Concept def;
        bool ev = false;
        switch (f.op) {
            case TOp::True: def = Concept::top(); break;
            case TOp::False: def = Concept::bottom(); break;
            case TOp::Atom: def = Concept::name("A_" + f.atom, false); break;
            case TOp::Not: def = Concept::neg(ref(f.args[0])); break;
            case TOp::And: def = Concept::conj({ref(f.args[0]), ref(f.args[1])}); break;
            case TOp::Or: def = Concept::disj({ref(f.args[0]), ref(f.args[1])}); break;
            case TOp::X:
            case TOp::AX:
            case TOp::EX: def = nx(ref(f.args[0])); break;
            case TOp::G:
            case TOp::AG:
            case TOp::EG: def = Concept::conj({ref(f.args[0]), nx(self)}); break;
            case TOp::F:
            case TOp::AF:
            case TOp::EF:
                def = Concept::disj({ref(f.args[0]), nx(self)});
                ev = true;
                break;
            case TOp::U:
            case TOp::AU:
            case TOp::EU:
                def = Concept::disj({ref(f.args[1]), Concept::conj({ref(f.args[0]), nx(self)})});
                ev = true;
                break;
        }
        out_.tbox.axioms.emplace(b, def);
        if (ev) out_.tbox.eventualities.insert(b);
        return b;
    }

    bool ctl_;
    Translation out_;
    std::map<Formula, std::string> names_;
    std::map<Formula, std::string> feature_;
    std::set<std::string> taken_;
};

}  // namespace

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (auto c = a.op <=> b.op; c != 0) return c;
    if (auto c = a.atom <=> b.atom; c != 0) return c;
    for (size_t i = 0; i < a.args.size() && i < b.args.size(); ++i)
        if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
    return a.args.size() <=> b.args.size();
}

size_t Formula::size() const {
    size_t n = 1;
    for (auto& a : args) n += a.size();
    return n;
}

std::string Formula::str() const {
    switch (op) {
        case TOp::True: return "true";
        case TOp::False: return "false";
        case TOp::Atom: return atom;
        default: break;
    }
    std::string s = std::string("(") + op_name(op);
    for (auto& a : args) s += " " + a.str();
    return s + ")";
}

bool Formula::is_ctl() const {
    if (is_path_op(op)) return false;
    for (auto& a : args)
        if (!a.is_ctl()) return false;
    return true;
}

bool Formula::is_pltl() const {
    if (is_a_op(op) || is_e_op(op)) return false;
    for (auto& a : args)
        if (!a.is_pltl()) return false;
    return true;
}

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::set<Formula> subformulas(const Formula& f) {
    std::set<Formula> out{f};
    for (auto& a : f.args) {
        auto s = subformulas(a);
        out.insert(s.begin(), s.end());
    }
    return out;
}

Translation pltl_to_tbox(const Formula& f) {
    if (!f.is_pltl()) throw std::invalid_argument("not a PLTL formula: " + f.str());
    return Translator(false).run(f);
}

Translation ctl_to_tbox(const Formula& f) {
    if (!f.is_ctl()) throw std::invalid_argument("not a CTL state formula: " + f.str());
    return Translator(true).run(f);
}

}  // namespace stdl
