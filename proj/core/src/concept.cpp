#include "stdl/concept.hpp"

#include <algorithm>
#include <sstream>

namespace stdl {

namespace {

std::shared_ptr<const ConceptNode> make(ConceptNode n) {
    return std::make_shared<const ConceptNode>(std::move(n));
}

const Concept& top_value() {
    static const Concept t = Concept::top();
    return t;
}

template <class T>
std::strong_ordering cmp_vec(const std::vector<T>& a, const std::vector<T>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        auto c = compare(a[i], b[i]);
        if (c != 0) return c;
    }
    return a.size() <=> b.size();
}

std::vector<Concept> normalize_args(std::vector<Concept> cs, CKind kind) {
    std::vector<Concept> flat;
    for (auto& c : cs) {
        if (c.kind() == kind)
            flat.insert(flat.end(), c.args().begin(), c.args().end());
        else
            flat.push_back(c);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    return flat;
}

}  // namespace

std::string FeatureChain::str() const {
    std::string s = "(";
    for (auto& f : prefix) s += f + " ";
    return s + tip + ")";
}

Concept::Concept() : n_(top_value().n_ ? top_value().n_ : make({})) {}

Concept Concept::top() {
    static const std::shared_ptr<const ConceptNode> n = make({});
    return Concept(n);
}

Concept Concept::bottom() {
    static const std::shared_ptr<const ConceptNode> n = [] {
        ConceptNode b;
        b.kind = CKind::Bottom;
        return make(b);
    }();
    return Concept(n);
}

Concept Concept::name(std::string id, bool defined) {
    ConceptNode n;
    n.kind = CKind::Name;
    n.id = std::move(id);
    n.flag = defined;
    return Concept(make(std::move(n)));
}

Concept Concept::neg(const Concept& c) {
    if (c.kind() == CKind::Not) return c.arg();
    ConceptNode n;
    n.kind = CKind::Not;
    n.args = {c};
    return Concept(make(std::move(n)));
}

Concept Concept::conj(std::vector<Concept> cs) {
    auto flat = normalize_args(std::move(cs), CKind::And);
    if (flat.empty()) return top();
    if (flat.size() == 1) return flat.front();
    ConceptNode n;
    n.kind = CKind::And;
    n.args = std::move(flat);
    return Concept(make(std::move(n)));
}

Concept Concept::disj(std::vector<Concept> cs) {
    auto flat = normalize_args(std::move(cs), CKind::Or);
    if (flat.empty()) return bottom();
    if (flat.size() == 1) return flat.front();
    ConceptNode n;
    n.kind = CKind::Or;
    n.args = std::move(flat);
    return Concept(make(std::move(n)));
}

Concept Concept::exists(std::string role, bool functional, const Concept& c) {
    ConceptNode n;
    n.kind = CKind::Exists;
    n.id = std::move(role);
    n.flag = functional;
    n.args = {c};
    return Concept(make(std::move(n)));
}

Concept Concept::forall(std::string role, bool functional, const Concept& c) {
    ConceptNode n;
    n.kind = CKind::Forall;
    n.id = std::move(role);
    n.flag = functional;
    n.args = {c};
    return Concept(make(std::move(n)));
}

Concept Concept::pred(Relation r, std::vector<FeatureChain> chains) {
    if (int(chains.size()) != arity(r.alg))
        throw AlgebraError("predicate arity " + std::to_string(chains.size()) + " does not match " +
                           std::string(algebra_name(r.alg)));
    ConceptNode n;
    n.kind = CKind::Pred;
    n.rel = r;
    n.chains = std::move(chains);
    return Concept(make(std::move(n)));
}

bool Concept::is_literal() const {
    return is_primitive() || (kind() == CKind::Not && arg().is_primitive());
}

std::strong_ordering compare(const Concept& a, const Concept& b) {
    if (a.n_ == b.n_) return std::strong_ordering::equal;
    const ConceptNode& x = *a.n_;
    const ConceptNode& y = *b.n_;
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    if (auto c = x.id <=> y.id; c != 0) return c;
    if (auto c = x.flag <=> y.flag; c != 0) return c;
    if (auto c = cmp_vec(x.args, y.args); c != 0) return c;
    if (x.kind == CKind::Pred) {
        if (auto c = x.rel.alg <=> y.rel.alg; c != 0) return c;
        if (auto c = x.rel.bits <=> y.rel.bits; c != 0) return c;
        size_t n = std::min(x.chains.size(), y.chains.size());
        for (size_t i = 0; i < n; ++i)
            if (auto c = x.chains[i] <=> y.chains[i]; c != 0) return c;
        return x.chains.size() <=> y.chains.size();
    }
    return std::strong_ordering::equal;
}

std::string Concept::str() const {
    switch (kind()) {
        case CKind::Top: return "top";
        case CKind::Bottom: return "bot";
        case CKind::Name: return id();
        case CKind::Not: return "(not " + arg().str() + ")";
        case CKind::And:
        case CKind::Or: {
            std::string s = kind() == CKind::And ? "(and" : "(or";
            for (auto& a : args()) s += " " + a.str();
            return s + ")";
        }
        case CKind::Exists: return "(some " + id() + " " + arg().str() + ")";
        case CKind::Forall: return "(all " + id() + " " + arg().str() + ")";
        case CKind::Pred: {
            std::string s = "(pred " + rel().str();
            for (auto& c : chains()) s += " " + c.str();
            return s + ")";
        }
    }
    return "?";
}

size_t Concept::size() const {
    size_t n = 1;
    for (auto& a : args()) n += a.size();
    return n;
}

Concept canonicalize(const Concept& c) {
    std::vector<Concept> args;
    for (auto& a : c.args()) args.push_back(canonicalize(a));
    switch (c.kind()) {
        case CKind::Not: return Concept::neg(args[0]);
        case CKind::And: return Concept::conj(std::move(args));
        case CKind::Or: return Concept::disj(std::move(args));
        case CKind::Exists: return Concept::exists(c.id(), c.functional(), args[0]);
        case CKind::Forall: return Concept::forall(c.id(), c.functional(), args[0]);
        default: return c;
    }
}

void collect_defined(const Concept& c, std::vector<std::string>& out) {
    if (c.is_defined()) {
        if (std::find(out.begin(), out.end(), c.id()) == out.end()) out.push_back(c.id());
        return;
    }
    for (auto& a : c.args()) collect_defined(a, out);
}

}  // namespace stdl
