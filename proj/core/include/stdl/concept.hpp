// Concept terms in canonical form. Construction always goes through the
// smart constructors below, so structurally equal concepts compare equal.
#pragma once

#include <compare>
#include <memory>
#include <string>
#include <vector>

#include "stdl/algebra.hpp"

namespace stdl {

struct FeatureChain {
    std::vector<std::string> prefix;  // abstract features, applied left to right
    std::string tip;                  // concrete feature

    std::string str() const;  // "(f f g)"
    auto operator<=>(const FeatureChain&) const = default;
    bool operator==(const FeatureChain&) const = default;
};

enum class CKind : uint8_t { Top, Bottom, Name, Not, And, Or, Exists, Forall, Pred };

class Concept;

struct ConceptNode {
    CKind kind = CKind::Top;
    std::string id;     // concept name or role id
    bool flag = false;  // Name: defined; Exists/Forall: functional role
    std::vector<Concept> args;
    Relation rel;
    std::vector<FeatureChain> chains;
};

class Concept {
public:
    Concept();  // top

    static Concept top();
    static Concept bottom();
    static Concept name(std::string id, bool defined);
    static Concept neg(const Concept& c);
    static Concept conj(std::vector<Concept> cs);
    static Concept disj(std::vector<Concept> cs);
    static Concept exists(std::string role, bool functional, const Concept& c);
    static Concept forall(std::string role, bool functional, const Concept& c);
    static Concept pred(Relation r, std::vector<FeatureChain> chains);

    CKind kind() const { return n_->kind; }
    const std::string& id() const { return n_->id; }
    bool is_defined() const { return n_->kind == CKind::Name && n_->flag; }
    bool is_primitive() const { return n_->kind == CKind::Name && !n_->flag; }
    bool functional() const { return n_->flag; }
    const std::vector<Concept>& args() const { return n_->args; }
    const Concept& arg() const { return n_->args.front(); }
    Relation rel() const { return n_->rel; }
    const std::vector<FeatureChain>& chains() const { return n_->chains; }
    bool is_literal() const;  // primitive name or its negation
    bool is_quantifier() const { return kind() == CKind::Exists || kind() == CKind::Forall; }

    std::string str() const;  // concept grammar of the TBox format
    size_t size() const;      // node count

    friend std::strong_ordering compare(const Concept& a, const Concept& b);
    friend bool operator==(const Concept& a, const Concept& b) { return compare(a, b) == 0; }
    friend bool operator<(const Concept& a, const Concept& b) { return compare(a, b) < 0; }

private:
    explicit Concept(std::shared_ptr<const ConceptNode> n) : n_(std::move(n)) {}
    std::shared_ptr<const ConceptNode> n_;
};

// Re-applies the smart constructors bottom-up; the identity on values built
// through this API.
Concept canonicalize(const Concept& c);

// Defined names occurring anywhere in c.
void collect_defined(const Concept& c, std::vector<std::string>& out);

}  // namespace stdl
