// Normal forms (dnf1, dnf2, S^f) and the closure of a TBox augmented with a
// query concept.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stdl/tbox.hpp"

namespace stdl {

// ∃R.D or ∀R.D inside a DNF element.
struct QuantItem {
    std::string role;
    bool functional = false;
    Concept body;

    Concept as_exists() const { return Concept::exists(role, functional, body); }
    Concept as_forall() const { return Concept::forall(role, functional, body); }
    friend std::strong_ordering operator<=>(const QuantItem& a, const QuantItem& b);
    friend bool operator==(const QuantItem& a, const QuantItem& b) { return (a <=> b) == 0; }
};

// One disjunct, kept as its pc∃∀ partition.
struct DnfElement {
    std::set<Concept> props;  // A or (not A), A primitive
    std::set<Concept> preds;
    std::set<QuantItem> exists;
    std::set<QuantItem> foralls;

    bool clashes() const;
    bool subset_of(const DnfElement& o) const;
    std::string str() const;
    friend std::strong_ordering operator<=>(const DnfElement& a, const DnfElement& b);
    friend bool operator==(const DnfElement& a, const DnfElement& b) { return (a <=> b) == 0; }
};
using Dnf = std::set<DnfElement>;

Dnf product(const Dnf& a, const Dnf& b);
// Throws std::logic_error when a defined name is unfolded inside its own
// unfolding (an unguarded cycle).
Dnf dnf1(const Concept& c, const TBox& t);
// Predicate chains first contribute ∃f1.∃f2…∃fk.⊤ (the chain must exist);
// then relational value restrictions distribute over ∃R, functional ones
// merge into one ∃f, and the rest are dropped. ⊤ bodies are omitted from a
// merged conjunction unless nothing else remains.
DnfElement sf_transform(const DnfElement& s);
Dnf dnf2(const Concept& c, const TBox& t);

// Trace structure of one closed element, used by the acceptance check. A
// state's terms are the conjuncts of its definition; an edge links a term
// of the state to a term of the successor state reached by one of the
// element's existentials, and is flagged when a least-fixpoint name was
// unfolded on the way.
struct TraceEdge {
    int move = 0;  // index into ClosedElement::moves
    int term = 0;  // index into the target state's terms
    bool lfp = false;
    auto operator<=>(const TraceEdge&) const = default;
};
using Justification = std::vector<TraceEdge>;

struct ClosedElement {
    DnfElement elem;                   // every existential body is a defined name
    std::vector<QuantItem> moves;      // = elem.exists in order
    std::vector<std::vector<Justification>> just;  // per term: minimal alternatives
};

struct ClosedTBox {
    TBox tbox;                        // original, initial and fresh axioms
    std::string init;                 // initial defined concept
    std::vector<std::string> order;   // closure order
    std::set<std::string> fresh;      // names created by the closure
    std::map<Concept, std::string> memo;
    std::map<std::string, std::vector<ClosedElement>> dnf;
    std::map<std::string, std::vector<Concept>> terms;

    // Names whose closed elements or definitions mention each name.
    std::map<std::string, std::set<std::string>> direct_uses() const;
    std::string str() const;  // TBox text of T* followed by the closed DNFs as comments
};

ClosedTBox close_tbox(const TBox& t, const Concept& c);

struct ClosureMetrics {
    std::set<std::string> cFeatures, aFeatures, pConcepts, dConcepts;
    std::set<Concept> eConcepts, feConcepts, reConcepts;
    size_t ncf = 0, naf = 0, fbf = 0, rbf = 0, bf = 0;
    std::vector<std::string> bt;  // relational existentials (concept text), then features
    std::string str() const;      // key: value lines
};
ClosureMetrics closure_metrics(const ClosedTBox& ct);

}  // namespace stdl
