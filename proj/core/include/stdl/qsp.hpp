// Qualitative constraint networks and their solvers.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stdl/algebra.hpp"

namespace stdl {

// Dense network over n variables. Binary algebras keep the full matrix
// (R(j,i) is the converse of R(i,j)); CYC_t keeps one relation per sorted
// triple i<j<k and permutes on access.
class Qsp {
public:
    explicit Qsp(AlgebraId a) : alg_(a) {}

    AlgebraId algebra() const { return alg_; }
    int size() const { return int(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    int find(std::string_view name) const;
    // Returns the index of `name`, adding it when new.
    int var(std::string_view name);

    // Intersects the stored relation. Repeated variables are projected:
    // R(x,x) needs the identity atom; ternary tuples with a repeated
    // variable become a condition on the remaining pair.
    void constrain(int i, int j, Relation r);
    void constrain(int i, int j, int k, Relation r);

    Relation get(int i, int j) const;
    Relation get(int i, int j, int k) const;

    // A constraint projected to the empty relation was inserted.
    bool trivially_inconsistent() const { return dead_; }
    bool any_empty() const;
    bool is_atomic() const;
    bool operator==(const Qsp& o) const;

    // Raw storage for solvers.
    Relation& raw2(int i, int j) { return bin_[size_t(i) * size() + j]; }
    Relation raw2(int i, int j) const { return bin_[size_t(i) * size() + j]; }
    Relation& raw3(int i, int j, int k) { return ter_[(size_t(i) * size() + j) * size() + k]; }
    Relation raw3(int i, int j, int k) const { return ter_[(size_t(i) * size() + j) * size() + k]; }
    void set2(int i, int j, Relation r);

    std::string str() const;  // QSP text format, non-universal constraints only

private:
    void grow();
    void restrict_pair(int u, int v, uint8_t cycb_mask);  // b(v,u) in mask

    AlgebraId alg_;
    std::vector<std::string> names_;
    std::vector<Relation> bin_;
    std::vector<Relation> ter_;
    bool dead_ = false;
};

// Greatest fixpoint of R(i,j) <- R(i,j) & R(i,k);R(k,j). nullopt = INCONSISTENT.
std::optional<Qsp> path_consistency(const Qsp& p);
// Quadruple-wise tightening against the realizable 4-configurations.
std::optional<Qsp> four_consistency(const Qsp& p);
// path_consistency or four_consistency depending on arity.
std::optional<Qsp> propagate(const Qsp& p);

// Backtracking over atomic refinements with propagation as forward filter.
// Independent connected components are solved separately; relations
// between components stay universal in the returned scenario.
std::optional<Qsp> solve_scenario(const Qsp& p);

class QspParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
Qsp parse_qsp(std::string_view text);

}  // namespace stdl
