#include "stdl/oracles.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace stdl::oracle {

namespace {

// RCC8 atom indices in file order.
enum { DC, EC, TPP, PO, EQ, NTPP, TPPi, NTPPi };

const char* const kRcc8[] = {"DC", "EC", "TPP", "PO", "EQ", "NTPP", "TPPi", "NTPPi"};
const char* const kCda[] = {"No", "NE", "Ea", "SE", "So", "SW", "We", "NW", "Eq"};
// (sign dx, sign dy) of the first point relative to the second.
const int kCdaSign[9][2] = {{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 0}};

int sign(int v) { return (v > 0) - (v < 0); }


}  // namespace

bool rcc8_realizable(int n, const AtomMatrix& rel) {
    if (n > 12) throw AlgebraError("rcc8 oracle: too many variables");
    // sub[i]: variables that must contain every point of i.
    std::vector<uint32_t> sub(n, 0), apart(n, 0);
    for (int i = 0; i < n; ++i) sub[i] |= 1u << i;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int a = rel[i * n + j];
            if (a == EQ || a == TPP || a == NTPP) sub[i] |= 1u << j;
            if (a == EQ || a == TPPi || a == NTPPi) sub[j] |= 1u << i;
            if (a == DC || a == EC) apart[i] |= 1u << j, apart[j] |= 1u << i;
        }
    auto admissible = [&](uint32_t s) {
        for (int i = 0; i < n; ++i) {
            if (!((s >> i) & 1u)) continue;
            if ((s & sub[i]) != sub[i]) return false;
            if (s & apart[i]) return false;
        }
        return true;
    };
    std::vector<uint32_t> types;
    for (uint32_t s = 0; s < (1u << n); ++s)
        if (admissible(s)) types.push_back(s);

    auto edge_ok = [&](uint32_t s, uint32_t t) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                int a = rel[i * n + j];
                bool si = (s >> i) & 1u, ti = (t >> i) & 1u;
                bool sj = (s >> j) & 1u, tj = (t >> j) & 1u;
                if (a == DC && ((si && tj) || (ti && sj))) return false;
                if (a == NTPP && ((si && !tj) || (ti && !sj))) return false;
                if (a == NTPPi && ((sj && !ti) || (tj && !si))) return false;
            }
        return true;
    };
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (size_t x = 0; x < types.size(); ++x)
        for (size_t y = x + 1; y < types.size(); ++y)
            if (edge_ok(types[x], types[y])) edges.emplace_back(types[x], types[y]);

    auto has_type = [&](auto pred) {
        return std::any_of(types.begin(), types.end(), pred);
    };
    auto has_edge = [&](auto pred) {
        for (auto [s, t] : edges)
            if (pred(s, t) || pred(t, s)) return true;
        return false;
    };
    auto in = [](uint32_t s, int i) { return ((s >> i) & 1u) != 0; };

    for (int i = 0; i < n; ++i)
        if (!has_type([&](uint32_t s) { return in(s, i); })) return false;
    // Inverse atoms must agree with the atom stored in the other direction.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int a = rel[i * n + j], b = rel[j * n + i];
            if (a == TPPi && b != TPP) return false;
            if (a == NTPPi && b != NTPP) return false;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int a = rel[i * n + j];
            if (a == TPPi || a == NTPPi) continue;  // checked from the other side
            switch (a) {
                case EC:
                    if (!has_edge([&](uint32_t s, uint32_t t) { return in(s, i) && in(t, j); })) return false;
                    break;
                case PO:
                    if (!has_type([&](uint32_t s) { return in(s, i) && in(s, j); })) return false;
                    if (!has_type([&](uint32_t s) { return in(s, i) && !in(s, j); })) return false;
                    if (!has_type([&](uint32_t s) { return in(s, j) && !in(s, i); })) return false;
                    break;
                case TPP:
                    if (!has_type([&](uint32_t s) { return in(s, j) && !in(s, i); })) return false;
                    if (!has_edge([&](uint32_t s, uint32_t t) { return in(s, i) && !in(t, j); })) return false;
                    break;
                case NTPP:
                    if (!has_type([&](uint32_t s) { return in(s, j) && !in(s, i); })) return false;
                    break;
                default:
                    break;
            }
        }
    return true;
}

bool cda_realizable(int n, const AtomMatrix& rel) {
    // Coordinates 0..n-1 on each axis realize every weak order of n points.
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<int> c(n, 0);
        bool found = false;
        while (true) {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j)
                    if (i != j && sign(c[i] - c[j]) != kCdaSign[rel[i * n + j]][axis]) ok = false;
            if (ok) {
                found = true;
                break;
            }
            int k = 0;
            while (k < n && ++c[k] == n) c[k++] = 0;
            if (k == n) break;
        }
        if (!found) return false;
    }
    return true;
}

bool binary_realizable(AlgebraId a, int n, const AtomMatrix& rel) {
    switch (a) {
        case AlgebraId::RCC8: return rcc8_realizable(n, rel);
        case AlgebraId::CDA: return cda_realizable(n, rel);
        default: throw AlgebraError("binary_realizable: ternary algebra");
    }
}

CycB cycb_of_angles(int theta_x, int theta_y, int units) {
    int d = ((theta_y - theta_x) % units + units) % units;
    if (d == 0) return CycB::e;
    if (2 * d == units) return CycB::o;
    return 2 * d < units ? CycB::l : CycB::r;
}

namespace {

// Valid CYC_t triples in lexicographic e<l<o<r order, found by enumeration.
const std::vector<std::array<CycB, 3>>& oracle_cyct_atoms() {
    static const std::vector<std::array<CycB, 3>> atoms = [] {
        std::set<std::array<int, 3>> seen;
        for (int y = 0; y < 24; ++y)
            for (int z = 0; z < 24; ++z)
                seen.insert({int(cycb_of_angles(0, y, 24)), int(cycb_of_angles(y, z, 24)),
                             int(cycb_of_angles(0, z, 24))});
        std::vector<std::array<CycB, 3>> out;
        for (auto& t : seen) out.push_back({CycB(t[0]), CycB(t[1]), CycB(t[2])});
        return out;
    }();
    return atoms;
}

std::string cyct_name(const std::array<CycB, 3>& t) {
    return {cycb_char(t[0]), cycb_char(t[1]), cycb_char(t[2])};
}

}  // namespace

int cyct_atom_of_angles(int tx, int ty, int tz, int units) {
    std::array<CycB, 3> t{cycb_of_angles(tx, ty, units), cycb_of_angles(ty, tz, units),
                          cycb_of_angles(tx, tz, units)};
    auto& atoms = oracle_cyct_atoms();
    auto it = std::find(atoms.begin(), atoms.end(), t);
    return int(it - atoms.begin());
}

bool cyct_realizable(int n, const std::vector<int>& atom) {
    if (n > 12) throw AlgebraError("cyct oracle: too many variables");
    if (n <= 0) return true;
    std::vector<int> th(n, 0);
    // Depth-first placement; the first orientation is fixed by rotation.
    auto rec = [&](auto&& self, int k) -> bool {
        if (k == n) return true;
        for (int t = 0; t < 24; ++t) {
            if (k == 0 && t > 0) break;
            th[k] = t;
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                for (int j = i + 1; j < k && ok; ++j)
                    if (cyct_atom_of_angles(th[i], th[j], th[k], 24) != atom[(i * n + j) * n + k]) ok = false;
            if (ok && self(self, k + 1)) return true;
        }
        return false;
    };
    return rec(rec, 0);
}

namespace {

void binary_table(std::ostringstream& os, AlgebraId alg, const char* const* names, int count) {
    auto ok = [&](int n, const AtomMatrix& m) { return binary_realizable(alg, n, m); };
    os << "atoms";
    for (int a = 0; a < count; ++a) os << ' ' << names[a];
    os << '\n';
    std::vector<int> conv(count, -1);
    for (int a = 0; a < count; ++a) {
        for (int b = 0; b < count; ++b)
            if (ok(2, {0, a, b, 0})) conv[a] = b;
        os << "converse " << names[a] << ' ' << names[conv[a]] << '\n';
    }
    for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b) {
            os << "compose " << names[a] << ' ' << names[b] << " :";
            for (int c = 0; c < count; ++c) {
                // x=0, y=1, z=2 with a(x,y), b(y,z), c(x,z).
                AtomMatrix m{0, a, c, conv[a], 0, b, conv[c], conv[b], 0};
                if (ok(3, m)) os << ' ' << names[c];
            }
            os << '\n';
        }
}

}  // namespace

std::vector<TableFile> generate_tables() {
    std::vector<TableFile> out;
    {
        std::ostringstream os;
        os << "# RCC8 converse and composition, derived from the adjacency-space model oracle.\n";
        binary_table(os, AlgebraId::RCC8, kRcc8, 8);
        out.push_back({"rcc8.tbl", os.str()});
    }
    {
        std::ostringstream os;
        os << "# CDA converse and composition, derived from points on an integer grid.\n";
        binary_table(os, AlgebraId::CDA, kCda, 9);
        out.push_back({"cda.tbl", os.str()});
    }
    {
        auto& atoms = oracle_cyct_atoms();
        std::ostringstream os;
        os << "# CYC_t atoms, permutations and realizable quadruples, derived from\n"
              "# orientations on a 24-step angle grid. Reconstructed tables.\n";
        os << "atoms";
        for (auto& t : atoms) os << ' ' << cyct_name(t);
        os << '\n';
        // Permutations listed as (x,z,y) (y,x,z) (y,z,x) (z,x,y) (z,y,x).
        const int perms[5][3] = {{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        std::vector<std::array<int, 5>> perm(atoms.size());
        std::vector<bool> done(atoms.size(), false);
        for (int y = 0; y < 24; ++y)
            for (int z = 0; z < 24; ++z) {
                int th[3] = {0, y, z};
                int a = cyct_atom_of_angles(th[0], th[1], th[2], 24);
                if (done[a]) continue;
                done[a] = true;
                for (int p = 0; p < 5; ++p)
                    perm[a][p] = cyct_atom_of_angles(th[perms[p][0]], th[perms[p][1]], th[perms[p][2]], 24);
            }
        for (size_t a = 0; a < atoms.size(); ++a) {
            os << "permute " << cyct_name(atoms[a]) << " :";
            for (int p = 0; p < 5; ++p) os << ' ' << cyct_name(atoms[perm[a][p]]);
            os << '\n';
        }
        std::set<std::array<int, 4>> quads;
        for (int b = 0; b < 24; ++b)
            for (int c = 0; c < 24; ++c)
                for (int d = 0; d < 24; ++d)
                    quads.insert({cyct_atom_of_angles(0, b, c, 24), cyct_atom_of_angles(0, b, d, 24),
                                  cyct_atom_of_angles(0, c, d, 24), cyct_atom_of_angles(b, c, d, 24)});
        for (auto& q : quads)
            os << "quad " << cyct_name(atoms[q[0]]) << ' ' << cyct_name(atoms[q[1]]) << ' '
               << cyct_name(atoms[q[2]]) << ' ' << cyct_name(atoms[q[3]]) << '\n';
        out.push_back({"cyct.tbl", os.str()});
    }
    return out;
}

}  // namespace stdl::oracle
