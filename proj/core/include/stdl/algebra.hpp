// Qualitative calculi: RCC8, cardinal directions (CDA) and cyclic orderings
// of 2D orientations (CYC_t). Relations are bitsets over the atom list.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stdl {

enum class AlgebraId : uint8_t { RCC8, CDA, CYCT };

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int atom_count(AlgebraId a);
int arity(AlgebraId a);
std::string_view algebra_name(AlgebraId a);
std::optional<AlgebraId> parse_algebra(std::string_view name);

const std::vector<std::string>& atom_names(AlgebraId a);
std::optional<int> atom_index(AlgebraId a, std::string_view name);
// Identity atom of a binary algebra (EQ / Eq).
int identity_atom(AlgebraId a);

struct Relation {
    AlgebraId alg = AlgebraId::RCC8;
    uint32_t bits = 0;

    static Relation universal(AlgebraId a);
    static Relation empty(AlgebraId a) { return {a, 0}; }
    static Relation atom(AlgebraId a, int idx) { return {a, uint32_t{1} << idx}; }
    static Relation parse(AlgebraId a, std::string_view text);  // "{TPP,NTPP}"

    bool is_empty() const { return bits == 0; }
    bool has(int idx) const { return (bits >> idx) & 1u; }
    int size() const;
    int first() const;  // lowest atom index, -1 when empty
    bool is_atomic() const { return size() == 1; }
    Relation complement() const;
    std::vector<int> atoms() const;
    std::string str() const;

    Relation operator&(Relation o) const { return {alg, bits & o.bits}; }
    Relation operator|(Relation o) const { return {alg, bits | o.bits}; }
    bool operator==(const Relation& o) const = default;
    auto operator<=>(const Relation& o) const = default;
};

// Binary algebras.
Relation converse(Relation r);
Relation compose(Relation r1, Relation r2);
int converse_atom(AlgebraId a, int atom);

// CYC_t. Atom b1b2b3 on (x,y,z) means b1(y,x), b2(z,y), b3(z,x) over CYC_b.
enum class CycB : uint8_t { e, l, o, r };
char cycb_char(CycB b);
CycB cycb_converse(CycB b);
std::array<CycB, 3> cyct_components(int atom);
std::optional<int> cyct_atom_from(CycB b1, CycB b2, CycB b3);

// Position permutation: result[i] is the source position of argument i.
// Returns the relation holding on (v[p0], v[p1], v[p2]) when r holds on v.
using Perm3 = std::array<int, 3>;
Relation permute(Relation r, Perm3 p);

// Realizable atom 4-tuples over the triples (0,1,2),(0,1,3),(0,2,3),(1,2,3).
const std::vector<std::array<uint8_t, 4>>& cyct_quadruples();

// Conceptual neighborhoods (each atom is its own neighbor).
Relation neighbors(AlgebraId a, int atom);
std::vector<CycB> cycb_neighbors(CycB b);
struct Rational {
    int num = 0;
    int den = 1;
    bool operator==(const Rational&) const = default;
    double value() const { return double(num) / double(den); }
};
Rational transition_prob(AlgebraId a, int r, int r_next);

// Text of the shipped table files, keyed by file name.
struct TableFile {
    std::string name;
    std::string text;
};
const std::vector<TableFile>& shipped_tables();

}  // namespace stdl
