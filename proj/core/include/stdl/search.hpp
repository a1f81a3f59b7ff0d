// Emptiness of the automaton by search for a finite f-run tree whose marked
// leaves loop back to internal nodes.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stdl/automaton.hpp"
#include "stdl/qsp.hpp"

namespace stdl {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Propagation { Lazy, Eager };

struct SearchOptions {
    Propagation propagation = Propagation::Lazy;
    size_t max_nodes = 0;  // cap on unmarked nodes, 0 = none
};

// Chain `side` of constraint `constraint`, emitted by an ancestor, has
// consumed n directions when it reaches the node.
struct BackEntry {
    int n = 0;
    int side = 0;
    int constraint = 0;
    auto operator<=>(const BackEntry&) const = default;
};

struct FRunNode {
    int parent = -1;
    int dir = -1;                  // direction from the parent
    std::vector<int> Y;            // sorted states
    std::vector<int> choice;       // per entry of Y, index into its delta
    std::set<Concept> L;
    std::vector<int> X;            // sorted constraint ids
    std::map<int, int> children;   // direction -> node
    std::vector<BackEntry> back;   // sorted
    bool expanded = false;
    bool marked = false;
    int back_node = -1;
};

struct FRunTree {
    std::vector<FRunNode> nodes;  // nodes[0] is the root

    // The node standing for u in the unfolded run.
    int resolve(int u) const { return nodes[u].marked ? nodes[u].back_node : u; }
    std::string address(const Automaton& a, int u) const;  // "ε" for the root
    int depth(int u) const;
};

struct TreeCsp {
    Qsp qsp{AlgebraId::RCC8};
    std::vector<std::pair<int, std::string>> vars;  // qsp index -> (node, cfeature)
};

// Per node, per entry of Y, per term: chosen justification (-1 = unused).
using Strategy = std::vector<std::vector<std::vector<int>>>;

struct Witness {
    FRunTree tree;
    TreeCsp csp;
    std::optional<Qsp> scenario;  // absent when the tree emits no constraint
    Strategy strategy;
};

struct SearchStats {
    size_t expansions = 0;
    size_t blocks = 0;
    size_t backtracks = 0;
    size_t max_unmarked = 0;
    double bound = 0;
};

struct Verdict {
    enum Kind { Sat, Unsat, Resource } kind = Unsat;
    std::optional<Witness> witness;
    SearchStats stats;
};

// 2^|Q| * longest chain * 2^(number of constraints).
double node_bound(const Automaton& a);

// Recomputed from the ancestors of u.
std::vector<BackEntry> back_set(const Automaton& a, const FRunTree& t, int u);

// Marks v as a repetition of u when both carry the same label and back set
// and the resulting loop keeps every least-fixpoint obligation finite.
// Unexpanded nodes count as able to satisfy whatever reaches them.
bool try_block(const Automaton& a, FRunTree& t, int u, int v);

// Chains that cross a marked leaf continue at its back node. Throws
// std::logic_error when a chain leaves the tree.
TreeCsp csp_of_tree(const Automaton& a, const FRunTree& t);

Verdict decide(const Automaton& a, const SearchOptions& opts = {});
// Throws ValidationError for TBoxes that are not weakly cyclic.
Verdict decide_sat(const TBox& t, const Concept& c, const SearchOptions& opts = {});

// Independent check of a witness; returns a description of the first defect.
std::optional<std::string> check_witness(const Automaton& a, const Witness& w);

std::string witness_dot(const Automaton& a, const Witness& w);
std::string scenario_text(const Automaton& a, const Witness& w);

// Finite interpretations with at most domain_size elements, unfolding
// defined names as fixpoints (least for eventualities). Negated predicates
// hold when their chains are defined and the complement relation holds.
// Every element must lie within depth_bound steps of the query element.
// SAT is sound, NoModelFound is inconclusive. Throws std::invalid_argument
// when a bound is out of range, the search space is too large, or a name
// occurs negatively in its own definition.
enum class BruteResult { Sat, NoModelFound };
BruteResult brute_force_sat(const Concept& c, const TBox& t, int depth_bound, int domain_size);

}  // namespace stdl
