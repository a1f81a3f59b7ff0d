#include "stdl/tbox.hpp"

#include <algorithm>
#include <functional>

namespace stdl {

SyntaxError::SyntaxError(int l, int c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

struct Token {
    enum Kind { LParen, RParen, LBrace, RBrace, Comma, Word, End } kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        skip();
        Token t{Token::End, "", line_, col_};
        if (pos_ >= s_.size()) return t;
        char c = s_[pos_];
        auto single = [&](Token::Kind k) {
            t.kind = k;
            t.text = std::string(1, c);
            advance();
            return t;
        };
        switch (c) {
            case '(': return single(Token::LParen);
            case ')': return single(Token::RParen);
            case '{': return single(Token::LBrace);
            case '}': return single(Token::RBrace);
            case ',': return single(Token::Comma);
            default: break;
        }
        t.kind = Token::Word;
        while (pos_ < s_.size() && !is_delim(s_[pos_])) {
            t.text += s_[pos_];
            advance();
        }
        return t;
    }

private:
    static bool is_delim(char c) {
        return c == '(' || c == ')' || c == '{' || c == '}' || c == ',' || c == ';' || c == ' ' || c == '\t' ||
               c == '\n' || c == '\r';
    }
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == ';') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(std::string_view text, TBox& t, const std::set<std::string>& defined)
        : lex_(text), tbox_(t), defined_(defined) {
        cur_ = lex_.next();
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) { throw SyntaxError(t.line, t.col, msg); }

    Token take() {
        Token t = cur_;
        cur_ = lex_.next();
        return t;
    }
    Token expect(Token::Kind k, const char* what) {
        if (cur_.kind != k) fail(cur_, std::string("expected ") + what + ", got '" + show(cur_) + "'");
        return take();
    }
    std::string word(const char* what) { return expect(Token::Word, what).text; }
    static std::string show(const Token& t) { return t.kind == Token::End ? "end of input" : t.text; }
    const Token& peek() const { return cur_; }
    bool at_end() const { return cur_.kind == Token::End; }

    Concept term() {
        Token t = take();
        if (t.kind == Token::Word) {
            if (t.text == "top") return Concept::top();
            if (t.text == "bot") return Concept::bottom();
            if (tbox_.is_declared(t.text)) fail(t, "'" + t.text + "' is a role or feature, not a concept");
            return Concept::name(t.text, defined_.count(t.text) > 0);
        }
        if (t.kind != Token::LParen) fail(t, "expected concept, got '" + show(t) + "'");
        Token head = expect(Token::Word, "operator");
        Concept out;
        if (head.text == "not") {
            out = Concept::neg(term());
        } else if (head.text == "and" || head.text == "or") {
            std::vector<Concept> args;
            while (peek().kind != Token::RParen) args.push_back(term());
            if (args.empty()) fail(head, "'" + head.text + "' needs at least one argument");
            out = head.text == "and" ? Concept::conj(std::move(args)) : Concept::disj(std::move(args));
        } else if (head.text == "some" || head.text == "all") {
            Token r = expect(Token::Word, "role");
            bool functional = tbox_.is_feature(r.text);
            if (!functional && !tbox_.is_role(r.text)) fail(r, "undeclared role '" + r.text + "'");
            Concept c = term();
            out = head.text == "some" ? Concept::exists(r.text, functional, c) : Concept::forall(r.text, functional, c);
        } else if (head.text == "pred") {
            out = pred(head);
        } else {
            fail(head, "unknown operator '" + head.text + "'");
        }
        expect(Token::RParen, "')'");
        return out;
    }

    Concept pred(const Token& head) {
        if (!tbox_.algebra) fail(head, "predicate used before 'algebra' declaration");
        AlgebraId a = *tbox_.algebra;
        Token lb = expect(Token::LBrace, "'{'");
        Relation r = Relation::empty(a);
        while (peek().kind != Token::RBrace) {
            Token at = expect(Token::Word, "atom");
            auto idx = atom_index(a, at.text);
            if (!idx) fail(at, "unknown " + std::string(algebra_name(a)) + " atom '" + at.text + "'");
            r = r | Relation::atom(a, *idx);
            if (peek().kind == Token::Comma) take();
        }
        take();
        std::vector<FeatureChain> chains;
        while (peek().kind == Token::LParen) {
            Token lp = take();
            std::vector<Token> ids;
            while (peek().kind == Token::Word) ids.push_back(take());
            expect(Token::RParen, "')' closing feature chain");
            if (ids.empty()) fail(lp, "empty feature chain");
            FeatureChain fc;
            for (size_t i = 0; i + 1 < ids.size(); ++i) {
                if (!tbox_.is_feature(ids[i].text)) fail(ids[i], "undeclared feature '" + ids[i].text + "'");
                fc.prefix.push_back(ids[i].text);
            }
            if (!tbox_.is_cfeature(ids.back().text))
                fail(ids.back(), "undeclared concrete feature '" + ids.back().text + "'");
            fc.tip = ids.back().text;
            chains.push_back(std::move(fc));
        }
        if (int(chains.size()) != arity(a))
            fail(lb, "predicate arity mismatch: " + std::string(algebra_name(a)) + " needs " + std::to_string(arity(a)) +
                         " feature chains, got " + std::to_string(chains.size()));
        return Concept::pred(r, std::move(chains));
    }

private:
    Lexer lex_;
    Token cur_;
    TBox& tbox_;
    const std::set<std::string>& defined_;
};

// First pass: collect the defined names so that forward references resolve.
std::set<std::string> defined_names(std::string_view text) {
    std::set<std::string> out;
    Lexer lex(text);
    int depth = 0;
    bool after_define = false;
    for (Token t = lex.next(); t.kind != Token::End; t = lex.next()) {
        if (t.kind == Token::LParen) ++depth;
        if (t.kind == Token::RParen) --depth;
        if (after_define && t.kind == Token::Word) out.insert(t.text);
        after_define = depth == 0 && t.kind == Token::Word && (t.text == "define" || t.text == "define-ev");
    }
    return out;
}

void tarjan(const std::map<std::string, std::set<std::string>>& g, std::vector<std::vector<std::string>>& sccs) {
    std::map<std::string, int> idx, low;
    std::set<std::string> on;
    std::vector<std::string> st;
    int counter = 0;
    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        idx[v] = low[v] = counter++;
        st.push_back(v);
        on.insert(v);
        auto it = g.find(v);
        if (it != g.end())
            for (auto& w : it->second) {
                if (!idx.count(w)) {
                    visit(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on.count(w)) {
                    low[v] = std::min(low[v], idx[w]);
                }
            }
        if (low[v] == idx[v]) {
            std::vector<std::string> comp;
            std::string w;
            do {
                w = st.back();
                st.pop_back();
                on.erase(w);
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            sccs.push_back(std::move(comp));
        }
    };
    for (auto& [v, _] : g)
        if (!idx.count(v)) visit(v);
}

// Occurrence of `name` in c that is not below a quantifier.
bool naked_occurrence(const Concept& c, const std::string& name) {
    if (c.is_defined()) return c.id() == name;
    if (c.is_quantifier()) return false;
    for (auto& a : c.args())
        if (naked_occurrence(a, name)) return true;
    return false;
}

}  // namespace

bool TBox::is_role(const std::string& id) const { return contains(roles, id); }
bool TBox::is_feature(const std::string& id) const { return contains(features, id); }
bool TBox::is_cfeature(const std::string& id) const { return contains(cfeatures, id); }
bool TBox::is_declared(const std::string& id) const { return is_role(id) || is_feature(id) || is_cfeature(id); }

void TBox::declare_role(const std::string& id) {
    if (is_declared(id)) throw std::invalid_argument("'" + id + "' declared twice");
    roles.push_back(id);
}
void TBox::declare_feature(const std::string& id) {
    if (is_declared(id)) throw std::invalid_argument("'" + id + "' declared twice");
    features.push_back(id);
}
void TBox::declare_cfeature(const std::string& id) {
    if (is_declared(id)) throw std::invalid_argument("'" + id + "' declared twice");
    cfeatures.push_back(id);
}

std::string TBox::str() const {
    std::string s;
    if (algebra) s += "algebra " + std::string(algebra_name(*algebra)) + "\n";
    for (auto& r : roles) s += "role " + r + "\n";
    for (auto& f : features) s += "feature " + f + "\n";
    for (auto& g : cfeatures) s += "cfeature " + g + "\n";
    for (auto& [b, c] : axioms) s += (is_eventuality(b) ? "define-ev " : "define ") + b + " := " + c.str() + "\n";
    return s;
}

TBox parse_tbox(std::string_view text) {
    TBox t;
    auto defined = defined_names(text);
    Parser p(text, t, defined);
    while (!p.at_end()) {
        Token kw = p.expect(Token::Word, "declaration");
        auto declare = [&](void (TBox::*fn)(const std::string&)) {
            Token id = p.expect(Token::Word, "identifier");
            if (defined.count(id.text)) p.fail(id, "'" + id.text + "' is already a concept name");
            try {
                (t.*fn)(id.text);
            } catch (const std::invalid_argument& e) {
                p.fail(id, e.what());
            }
        };
        if (kw.text == "algebra") {
            Token id = p.expect(Token::Word, "algebra name");
            if (t.algebra) p.fail(kw, "algebra declared twice");
            t.algebra = parse_algebra(id.text);
            if (!t.algebra) p.fail(id, "unknown algebra '" + id.text + "' (expected rcc8, cda or cyct)");
        } else if (kw.text == "role") {
            declare(&TBox::declare_role);
        } else if (kw.text == "feature") {
            declare(&TBox::declare_feature);
        } else if (kw.text == "cfeature") {
            declare(&TBox::declare_cfeature);
        } else if (kw.text == "define" || kw.text == "define-ev") {
            Token name = p.expect(Token::Word, "concept name");
            if (name.text == "top" || name.text == "bot") p.fail(name, "cannot define '" + name.text + "'");
            if (t.is_declared(name.text)) p.fail(name, "'" + name.text + "' is a role or feature");
            Token assign = p.expect(Token::Word, "':='");
            if (assign.text != ":=") p.fail(assign, "expected ':=', got '" + assign.text + "'");
            if (t.axioms.count(name.text)) p.fail(name, "duplicate definition of '" + name.text + "'");
            t.axioms.emplace(name.text, p.term());
            if (kw.text == "define-ev") t.eventualities.insert(name.text);
        } else {
            p.fail(kw, "unknown declaration '" + kw.text + "'");
        }
    }
    return t;
}

Concept parse_concept(std::string_view text, const TBox& t) {
    std::set<std::string> defined;
    for (auto& [b, _] : t.axioms) defined.insert(b);
    TBox copy = t;
    Parser p(text, copy, defined);
    Concept c = p.term();
    if (!p.at_end()) p.fail(p.peek(), "trailing input '" + p.peek().text + "'");
    return c;
}

std::map<std::string, std::set<std::string>> direct_uses(const TBox& t) {
    std::map<std::string, std::set<std::string>> g;
    for (auto& [b, c] : t.axioms) {
        std::vector<std::string> names;
        collect_defined(c, names);
        g[b].insert(names.begin(), names.end());
    }
    return g;
}

std::map<std::string, std::set<std::string>> uses(const TBox& t) {
    auto d = direct_uses(t);
    std::map<std::string, std::set<std::string>> out;
    for (auto& [b, _] : d) {
        std::set<std::string>& seen = out[b];
        std::vector<std::string> stack(d[b].begin(), d[b].end());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second) continue;
            for (auto& w : d[v]) stack.push_back(w);
        }
    }
    return out;
}

std::optional<std::string> validate_weakly_cyclic(const TBox& t) {
    for (auto& e : t.eventualities)
        if (!t.is_defined(e)) return "eventuality '" + e + "' has no definition";
    std::vector<std::vector<std::string>> sccs;
    tarjan(direct_uses(t), sccs);
    std::sort(sccs.begin(), sccs.end());
    for (auto& comp : sccs)
        if (comp.size() > 1) {
            std::string s = "mutual use between distinct names:";
            for (auto& n : comp) s += " " + n;
            return s;
        }
    for (auto& [b, c] : t.axioms)
        if (naked_occurrence(c, b)) return "'" + b + "' occurs in its own definition outside any quantifier";
    return std::nullopt;
}

}  // namespace stdl
