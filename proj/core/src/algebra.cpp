#include "stdl/algebra.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace stdl {

namespace {

const std::vector<std::string> kRcc8Names{"DC", "EC", "TPP", "PO", "EQ", "NTPP", "TPPi", "NTPPi"};
const std::vector<std::string> kCdaNames{"No", "NE", "Ea", "SE", "So", "SW", "We", "NW", "Eq"};

struct BinaryTables {
    std::vector<int> conv;
    std::vector<std::vector<uint32_t>> comp;
};

struct CyctTables {
    std::vector<std::string> names;
    std::vector<std::array<CycB, 3>> comps;
    std::vector<std::array<int, 5>> perm;
    std::vector<std::array<uint8_t, 4>> quads;
};

const std::string& table_text(const std::string& name) {
    for (auto& t : shipped_tables())
        if (t.name == name) return t.text;
    throw AlgebraError("missing table file " + name);
}

std::vector<std::vector<std::string>> table_lines(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (!toks.empty()) out.push_back(std::move(toks));
    }
    return out;
}

int must_index(const std::vector<std::string>& names, const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw AlgebraError("table: unknown atom " + n);
    return int(it - names.begin());
}

BinaryTables load_binary(const std::string& file, const std::vector<std::string>& names) {
    BinaryTables t;
    int n = int(names.size());
    t.conv.assign(n, -1);
    t.comp.assign(n, std::vector<uint32_t>(n, 0));
    for (auto& toks : table_lines(table_text(file))) {
        if (toks[0] == "atoms") {
            if (std::vector<std::string>(toks.begin() + 1, toks.end()) != names)
                throw AlgebraError(file + ": atom order differs from the contract");
        } else if (toks[0] == "converse" && toks.size() == 3) {
            t.conv[must_index(names, toks[1])] = must_index(names, toks[2]);
        } else if (toks[0] == "compose" && toks.size() >= 4 && toks[3] == ":") {
            uint32_t bits = 0;
            for (size_t k = 4; k < toks.size(); ++k) bits |= 1u << must_index(names, toks[k]);
            t.comp[must_index(names, toks[1])][must_index(names, toks[2])] = bits;
        } else {
            throw AlgebraError(file + ": malformed line");
        }
    }
    for (int c : t.conv)
        if (c < 0) throw AlgebraError(file + ": incomplete converse table");
    return t;
}

CycB cycb_from_char(char c) {
    switch (c) {
        case 'e': return CycB::e;
        case 'l': return CycB::l;
        case 'o': return CycB::o;
        case 'r': return CycB::r;
    }
    throw AlgebraError(std::string("bad CYC_b letter ") + c);
}

CyctTables load_cyct() {
    CyctTables t;
    for (auto& toks : table_lines(table_text("cyct.tbl"))) {
        if (toks[0] == "atoms") {
            t.names.assign(toks.begin() + 1, toks.end());
            for (auto& n : t.names) {
                if (n.size() != 3) throw AlgebraError("cyct.tbl: bad atom " + n);
                t.comps.push_back({cycb_from_char(n[0]), cycb_from_char(n[1]), cycb_from_char(n[2])});
            }
            t.perm.assign(t.names.size(), {-1, -1, -1, -1, -1});
        } else if (toks[0] == "permute" && toks.size() == 8) {
            auto& row = t.perm[must_index(t.names, toks[1])];
            for (int p = 0; p < 5; ++p) row[p] = must_index(t.names, toks[3 + p]);
        } else if (toks[0] == "quad" && toks.size() == 5) {
            std::array<uint8_t, 4> q{};
            for (int k = 0; k < 4; ++k) q[k] = uint8_t(must_index(t.names, toks[1 + k]));
            t.quads.push_back(q);
        } else {
            throw AlgebraError("cyct.tbl: malformed line");
        }
    }
    if (t.names.empty()) throw AlgebraError("cyct.tbl: no atoms");
    return t;
}

const BinaryTables& binary_tables(AlgebraId a) {
    static const BinaryTables rcc8 = load_binary("rcc8.tbl", kRcc8Names);
    static const BinaryTables cda = load_binary("cda.tbl", kCdaNames);
    if (a == AlgebraId::RCC8) return rcc8;
    if (a == AlgebraId::CDA) return cda;
    throw AlgebraError("binary operation on a ternary algebra");
}

const CyctTables& cyct_tables() {
    static const CyctTables t = load_cyct();
    return t;
}

}  // namespace

int atom_count(AlgebraId a) {
    switch (a) {
        case AlgebraId::RCC8: return 8;
        case AlgebraId::CDA: return 9;
        case AlgebraId::CYCT: return 24;
    }
    return 0;
}

int arity(AlgebraId a) { return a == AlgebraId::CYCT ? 3 : 2; }

std::string_view algebra_name(AlgebraId a) {
    switch (a) {
        case AlgebraId::RCC8: return "rcc8";
        case AlgebraId::CDA: return "cda";
        case AlgebraId::CYCT: return "cyct";
    }
    return "?";
}

std::optional<AlgebraId> parse_algebra(std::string_view name) {
    if (name == "rcc8") return AlgebraId::RCC8;
    if (name == "cda") return AlgebraId::CDA;
    if (name == "cyct") return AlgebraId::CYCT;
    return std::nullopt;
}

const std::vector<std::string>& atom_names(AlgebraId a) {
    switch (a) {
        case AlgebraId::RCC8: return kRcc8Names;
        case AlgebraId::CDA: return kCdaNames;
        case AlgebraId::CYCT: return cyct_tables().names;
    }
    return kRcc8Names;
}

std::optional<int> atom_index(AlgebraId a, std::string_view name) {
    auto& names = atom_names(a);
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return int(i);
    return std::nullopt;
}

int identity_atom(AlgebraId a) {
    if (a == AlgebraId::RCC8) return 4;
    if (a == AlgebraId::CDA) return 8;
    throw AlgebraError("identity_atom: ternary algebra");
}

Relation Relation::universal(AlgebraId a) {
    int n = atom_count(a);
    return {a, n == 32 ? ~uint32_t{0} : ((uint32_t{1} << n) - 1)};
}

Relation Relation::parse(AlgebraId a, std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s += c;
    if (!s.empty() && s.front() == '{') {
        if (s.back() != '}') throw AlgebraError("relation: missing '}' in " + std::string(text));
        s = s.substr(1, s.size() - 2);
    }
    Relation r = empty(a);
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        std::string name = s.substr(pos, comma - pos);
        auto idx = atom_index(a, name);
        if (!idx) throw AlgebraError("unknown " + std::string(algebra_name(a)) + " atom '" + name + "'");
        r.bits |= uint32_t{1} << *idx;
        pos = comma + 1;
    }
    return r;
}

int Relation::size() const { return std::popcount(bits); }

int Relation::first() const { return bits ? std::countr_zero(bits) : -1; }

Relation Relation::complement() const { return {alg, universal(alg).bits & ~bits}; }

std::vector<int> Relation::atoms() const {
    std::vector<int> out;
    for (uint32_t b = bits; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
}

std::string Relation::str() const {
    std::string out = "{";
    bool first_atom = true;
    for (int a : atoms()) {
        if (!first_atom) out += ',';
        out += atom_names(alg)[a];
        first_atom = false;
    }
    return out + "}";
}

int converse_atom(AlgebraId a, int atom) { return binary_tables(a).conv[atom]; }

Relation converse(Relation r) {
    if (arity(r.alg) != 2) throw AlgebraError("converse: ternary algebra");
    auto& t = binary_tables(r.alg);
    Relation out = Relation::empty(r.alg);
    for (int a : r.atoms()) out.bits |= uint32_t{1} << t.conv[a];
    return out;
}

Relation compose(Relation r1, Relation r2) {
    if (r1.alg != r2.alg) throw AlgebraError("compose: algebra mismatch");
    if (arity(r1.alg) != 2) throw AlgebraError("compose: ternary algebra");
    auto& t = binary_tables(r1.alg);
    Relation out = Relation::empty(r1.alg);
    for (uint32_t b1 = r1.bits; b1; b1 &= b1 - 1) {
        auto& row = t.comp[std::countr_zero(b1)];
        for (uint32_t b2 = r2.bits; b2; b2 &= b2 - 1) out.bits |= row[std::countr_zero(b2)];
    }
    return out;
}

char cycb_char(CycB b) { return "elor"[int(b)]; }

CycB cycb_converse(CycB b) {
    switch (b) {
        case CycB::l: return CycB::r;
        case CycB::r: return CycB::l;
        default: return b;
    }
}

std::array<CycB, 3> cyct_components(int atom) { return cyct_tables().comps.at(atom); }

std::optional<int> cyct_atom_from(CycB b1, CycB b2, CycB b3) {
    auto& c = cyct_tables().comps;
    std::array<CycB, 3> t{b1, b2, b3};
    auto it = std::find(c.begin(), c.end(), t);
    if (it == c.end()) return std::nullopt;
    return int(it - c.begin());
}

Relation permute(Relation r, Perm3 p) {
    if (r.alg != AlgebraId::CYCT) throw AlgebraError("permute: not a ternary relation");
    static const Perm3 listed[5] = {{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    if (p == Perm3{0, 1, 2}) return r;
    int idx = -1;
    for (int k = 0; k < 5; ++k)
        if (listed[k] == p) idx = k;
    if (idx < 0) throw AlgebraError("permute: not a permutation");
    auto& perm = cyct_tables().perm;
    Relation out = Relation::empty(r.alg);
    for (int a : r.atoms()) out.bits |= uint32_t{1} << perm[a][idx];
    return out;
}

const std::vector<std::array<uint8_t, 4>>& cyct_quadruples() { return cyct_tables().quads; }

std::vector<CycB> cycb_neighbors(CycB b) {
    switch (b) {
        case CycB::e: return {CycB::e, CycB::l, CycB::r};
        case CycB::l: return {CycB::e, CycB::l, CycB::o};
        case CycB::o: return {CycB::l, CycB::o, CycB::r};
        case CycB::r: return {CycB::e, CycB::o, CycB::r};
    }
    return {};
}

Relation neighbors(AlgebraId a, int atom) {
    Relation out = Relation::empty(a);
    auto add = [&](int x) { out.bits |= uint32_t{1} << x; };
    switch (a) {
        case AlgebraId::RCC8: {
            enum { DC, EC, TPP, PO, EQ, NTPP, TPPi, NTPPi };
            static const int edges[][2] = {{DC, EC},   {EC, PO},   {PO, TPP},    {PO, TPPi},
                                           {TPP, NTPP}, {TPP, EQ}, {TPPi, NTPPi}, {TPPi, EQ}};
            add(atom);
            for (auto& e : edges) {
                if (e[0] == atom) add(e[1]);
                if (e[1] == atom) add(e[0]);
            }
            break;
        }
        case AlgebraId::CDA: {
            // Continuous motion changes a coordinate sign only through 0.
            static const int sgn[9][2] = {{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1},
                                          {-1, -1}, {-1, 0}, {-1, 1}, {0, 0}};
            auto near = [](int s, int t) { return s == t || s == 0 || t == 0; };
            for (int b = 0; b < 9; ++b)
                if (near(sgn[atom][0], sgn[b][0]) && near(sgn[atom][1], sgn[b][1])) add(b);
            break;
        }
        case AlgebraId::CYCT: {
            auto c = cyct_components(atom);
            for (CycB b1 : cycb_neighbors(c[0]))
                for (CycB b2 : cycb_neighbors(c[1]))
                    for (CycB b3 : cycb_neighbors(c[2]))
                        if (auto x = cyct_atom_from(b1, b2, b3)) add(*x);
            break;
        }
    }
    return out;
}

Rational transition_prob(AlgebraId a, int r, int r_next) {
    Relation n = neighbors(a, r);
    if (!n.has(r_next)) return {0, 1};
    return {1, n.size()};
}

}  // namespace stdl
