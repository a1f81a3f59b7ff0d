// TBoxes, their text format, and the weak cyclicity check.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stdl/concept.hpp"

namespace stdl {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(int line, int col, const std::string& msg);
    int line, col;
};

struct TBox {
    std::optional<AlgebraId> algebra;
    std::vector<std::string> roles;      // relational
    std::vector<std::string> features;   // abstract (functional)
    std::vector<std::string> cfeatures;  // concrete
    std::map<std::string, Concept> axioms;
    std::set<std::string> eventualities;

    bool is_role(const std::string& id) const;
    bool is_feature(const std::string& id) const;
    bool is_cfeature(const std::string& id) const;
    bool is_declared(const std::string& id) const;
    bool is_defined(const std::string& name) const { return axioms.count(name) > 0; }
    bool is_eventuality(const std::string& name) const { return eventualities.count(name) > 0; }
    const Concept& definition(const std::string& name) const { return axioms.at(name); }

    // Adds a declaration; throws std::invalid_argument on reuse of an id.
    void declare_role(const std::string& id);
    void declare_feature(const std::string& id);
    void declare_cfeature(const std::string& id);

    std::string str() const;  // round-trips through parse_tbox
};

TBox parse_tbox(std::string_view text);
// Names defined in `t` become defined concepts; other bare names are primitive.
Concept parse_concept(std::string_view text, const TBox& t);

// Directly-uses graph: defined names occurring in each definition.
std::map<std::string, std::set<std::string>> direct_uses(const TBox& t);
// Transitive closure of direct_uses.
std::map<std::string, std::set<std::string>> uses(const TBox& t);

// nullopt when weakly cyclic, otherwise a one-line description of the
// first violation found.
std::optional<std::string> validate_weakly_cyclic(const TBox& t);

}  // namespace stdl
