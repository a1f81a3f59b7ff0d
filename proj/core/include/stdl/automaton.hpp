// The CSP-augmented weak alternating automaton of a closed TBox.
#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stdl/normalize.hpp"

namespace stdl {

class AutomatonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Direction {
    bool functional = false;
    std::string id;  // feature id, or the text of the relational existential
    std::string str() const { return functional ? id : "<" + id + ">"; }
};

// Chain over directions, ending in a concrete feature.
struct GroundChain {
    std::vector<int> dirs;
    std::string tip;
    auto operator<=>(const GroundChain&) const = default;
};

struct GroundConstraint {
    Relation rel;
    std::vector<GroundChain> chains;
    friend std::strong_ordering operator<=>(const GroundConstraint& a, const GroundConstraint& b);
    friend bool operator==(const GroundConstraint& a, const GroundConstraint& b) { return (a <=> b) == 0; }
};

struct Move {
    int dir = 0;
    int state = 0;
    auto operator<=>(const Move&) const = default;
};

struct TransitionChoice {
    std::set<Concept> lits;
    std::vector<int> constraints;  // indices into Automaton::constraints
    std::vector<Move> moves;       // aligned with ClosedElement::moves
    std::vector<std::vector<Justification>> just;  // per term of the source state
};

struct Partition {
    std::vector<std::vector<int>> blocks;  // state indices
    std::vector<int> block_of;             // per state
    std::vector<std::vector<bool>> geq;    // geq[i][j]: block i >= block j
    std::vector<bool> accepting;           // per block: member of F
};

struct Automaton {
    std::optional<AlgebraId> algebra;
    std::vector<std::string> states;
    std::vector<bool> eventuality;
    std::vector<size_t> nterms;  // trace terms per state
    int q0 = 0;
    std::vector<Direction> dirs;
    std::vector<GroundConstraint> constraints;
    std::vector<std::vector<TransitionChoice>> delta;
    Partition partition;
    size_t longest_chain = 1;  // features plus the concrete tip

    int state(const std::string& name) const;  // -1 when absent
    std::string constraint_str(int c) const;
    std::string dump() const;  // "B : [lits | constraints | moves] ; ..." per state
};

// Blocks are the strongly connected parts of "uses" over the closed TBox.
Partition partition_states(const ClosedTBox& ct);
// Throws AutomatonError when a chain cannot be grounded or weakness fails.
Automaton build_automaton(const ClosedTBox& ct);

}  // namespace stdl
