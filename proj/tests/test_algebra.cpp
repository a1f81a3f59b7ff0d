#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "stdl/algebra.hpp"
#include "stdl/oracles.hpp"
#include "stdl/qsp.hpp"
#include "support.hpp"

using namespace stdl;
using namespace stdl::testing;

namespace {

const std::string& shipped(const std::string& name) {
    for (auto& t : shipped_tables())
        if (t.name == name) return t.text;
    FAIL("missing table " << name);
    static std::string none;
    return none;
}

Relation rel(AlgebraId a, const char* s) { return Relation::parse(a, s); }

}  // namespace

TEST_CASE("atom inventories") {
    CHECK(atom_count(AlgebraId::RCC8) == 8);
    CHECK(atom_count(AlgebraId::CDA) == 9);
    CHECK(atom_count(AlgebraId::CYCT) == 24);
    CHECK(atom_names(AlgebraId::RCC8).front() == "DC");
    CHECK(atom_names(AlgebraId::CDA).back() == "Eq");
    CHECK(arity(AlgebraId::CYCT) == 3);
    CHECK(Relation::parse(AlgebraId::RCC8, "{TPP,NTPP}").size() == 2);
    CHECK_THROWS_AS(Relation::parse(AlgebraId::RCC8, "{TPP,XX}"), AlgebraError);
}

TEST_CASE("shipped tables regenerate from the model oracles") {
    for (auto& t : oracle::generate_tables()) {
        CAPTURE(t.name);
        CHECK(t.text == shipped(t.name));
    }
}

TEST_CASE("rcc8 table agrees with the published table") {
    std::istringstream in(shipped("rcc8_published.tbl"));
    std::string line;
    int entries = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kw, a, b, colon, at;
        ls >> kw >> a >> b >> colon;
        REQUIRE(kw == "compose");
        Relation expect = Relation::empty(AlgebraId::RCC8);
        while (ls >> at)
            expect = at == "*" ? Relation::universal(AlgebraId::RCC8)
                               : expect | Relation::atom(AlgebraId::RCC8, *atom_index(AlgebraId::RCC8, at));
        auto ia = *atom_index(AlgebraId::RCC8, a), ib = *atom_index(AlgebraId::RCC8, b);
        CAPTURE(line);
        CHECK(compose(Relation::atom(AlgebraId::RCC8, ia), Relation::atom(AlgebraId::RCC8, ib)) == expect);
        ++entries;
    }
    CHECK(entries == 64);
}

TEST_CASE("binary algebras are coherent") {
    for (AlgebraId a : {AlgebraId::RCC8, AlgebraId::CDA}) {
        int n = atom_count(a);
        Relation id = Relation::atom(a, identity_atom(a));
        for (int x = 0; x < n; ++x) {
            Relation rx = Relation::atom(a, x);
            CHECK(converse(converse(rx)) == rx);
            CHECK(compose(id, rx) == rx);
            CHECK(compose(rx, id) == rx);
            for (int y = 0; y < n; ++y) {
                Relation ry = Relation::atom(a, y);
                CHECK(converse(compose(rx, ry)) == compose(converse(ry), converse(rx)));
                for (int z = 0; z < n; ++z) {
                    Relation rz = Relation::atom(a, z);
                    bool lhs = !(compose(rx, ry) & rz).is_empty();
                    bool rhs = !(compose(converse(rx), rz) & ry).is_empty();
                    CHECK(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("composition entries") {
    auto R = AlgebraId::RCC8;
    CHECK(compose(rel(R, "{NTPP}"), rel(R, "{NTPP}")) == rel(R, "{NTPP}"));
    CHECK(compose(rel(R, "{EQ}"), rel(R, "{EQ}")) == rel(R, "{EQ}"));
    auto C = AlgebraId::CDA;
    CHECK(compose(rel(C, "{No}"), rel(C, "{Ea}")) == rel(C, "{NE}"));
    CHECK(converse(rel(C, "{No}")) == rel(C, "{So}"));
    CHECK(converse(rel(R, "{TPP,NTPP}")) == rel(R, "{TPPi,NTPPi}"));
}

TEST_CASE("cyct permutations agree with the angle model") {
    const int U = 24;
    const std::array<Perm3, 5> perms{{{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    std::set<int> seen;
    for (int x = 0; x < U; ++x)
        for (int y = 0; y < U; ++y)
            for (int z = 0; z < U; ++z) {
                std::array<int, 3> v{x, y, z};
                int at = oracle::cyct_atom_of_angles(x, y, z, U);
                seen.insert(at);
                for (auto p : perms) {
                    int expect = oracle::cyct_atom_of_angles(v[p[0]], v[p[1]], v[p[2]], U);
                    CHECK(permute(Relation::atom(AlgebraId::CYCT, at), p) == Relation::atom(AlgebraId::CYCT, expect));
                }
            }
    CHECK(seen.size() == 24);
    auto comps = cyct_components(*atom_index(AlgebraId::CYCT, "lrl"));
    CHECK(cycb_char(comps[0]) == 'l');
    CHECK(cycb_char(comps[1]) == 'r');
    CHECK(cycb_char(comps[2]) == 'l');
}

TEST_CASE("neighborhoods and transition probabilities") {
    auto R = AlgebraId::RCC8;
    int TPP = *atom_index(R, "TPP");
    CHECK(neighbors(R, TPP) == rel(R, "{TPP,PO,NTPP,EQ}"));
    CHECK(transition_prob(R, TPP, *atom_index(R, "NTPP")) == Rational{1, 4});
    CHECK(transition_prob(R, TPP, *atom_index(R, "DC")).num == 0);
    CHECK(neighbors(R, *atom_index(R, "DC")) == rel(R, "{DC,EC}"));
    for (AlgebraId a : {AlgebraId::RCC8, AlgebraId::CDA, AlgebraId::CYCT})
        for (int x = 0; x < atom_count(a); ++x) {
            CHECK(neighbors(a, x).has(x));
            int total = 0, den = 0;
            for (int y = 0; y < atom_count(a); ++y) {
                // symmetric neighborhood
                CHECK(neighbors(a, x).has(y) == neighbors(a, y).has(x));
                auto p = transition_prob(a, x, y);
                if (p.num) {
                    den = p.den;
                    total += p.num;
                }
            }
            CHECK(total == den);
        }
}

TEST_CASE("path consistency examples") {
    auto R = AlgebraId::RCC8;
    Qsp q(R);
    int x = q.var("x"), y = q.var("y"), z = q.var("z");
    q.constrain(x, y, rel(R, "{TPP,NTPP}"));
    q.constrain(y, z, rel(R, "{EQ}"));
    q.constrain(x, z, rel(R, "{TPP,EC}"));
    auto pc = path_consistency(q);
    REQUIRE(pc);
    CHECK(pc->get(x, y) == rel(R, "{TPP}"));
    CHECK(pc->get(x, z) == rel(R, "{TPP}"));

    Qsp bad(R);
    x = bad.var("x"), y = bad.var("y"), z = bad.var("z");
    bad.constrain(x, y, rel(R, "{DC}"));
    bad.constrain(y, z, rel(R, "{EQ}"));
    bad.constrain(x, z, rel(R, "{EC}"));
    CHECK_FALSE(path_consistency(bad));
    CHECK_FALSE(solve_scenario(bad));
}

TEST_CASE("qsp text format round trip") {
    auto q = parse_qsp("algebra rcc8\na {TPP,NTPP} b\nb EQ c\n");
    CHECK(q.size() == 3);
    CHECK(parse_qsp(q.str()) == q);
    CHECK_THROWS_AS(parse_qsp("algebra rcc8\na {XX} b\n"), QspParseError);
    CHECK_THROWS_AS(parse_qsp("algebra FOO\n"), QspParseError);
}

TEST_CASE("binary solver agrees with the model oracle on random networks") {
    std::mt19937 rng(20261016);
    for (AlgebraId a : {AlgebraId::RCC8, AlgebraId::CDA}) {
        int agree = 0, sat = 0;
        const int trials = 300;
        for (int t = 0; t < trials; ++t) {
            int n = 3 + t % 3;
            // seed from a realizable scenario, found by random oracle search
            oracle::AtomMatrix m;
            for (;;) {
                m.assign(size_t(n) * n, identity_atom(a));
                std::uniform_int_distribution<int> pick(0, atom_count(a) - 1);
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        m[size_t(i) * n + j] = pick(rng);
                        m[size_t(j) * n + i] = converse_atom(a, m[size_t(i) * n + j]);
                    }
                if (oracle::binary_realizable(a, n, m)) break;
            }
            Qsp q(a);
            for (int i = 0; i < n; ++i) q.var("v" + std::to_string(i));
            std::uniform_int_distribution<int> pick(0, atom_count(a) - 1);
            std::bernoulli_distribution perturb(0.25);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    int base = perturb(rng) ? pick(rng) : m[size_t(i) * n + j];
                    q.constrain(i, j, random_superset(a, base, rng, 0.15));
                }
            bool expect = oracle_has_scenario(q);
            auto s = solve_scenario(q);
            CAPTURE(q.str());
            CHECK(bool(s) == expect);
            if (s) {
                CHECK(s->is_atomic());
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) CHECK((s->get(i, j) & q.get(i, j)) == s->get(i, j));
                oracle::AtomMatrix sm(size_t(n) * n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) sm[size_t(i) * n + j] = s->get(i, j).first();
                CHECK(oracle::binary_realizable(a, n, sm));
                ++sat;
            }
            agree += bool(s) == expect;
        }
        MESSAGE(algebra_name(a) << ": " << agree << "/" << trials << " agree, " << sat << " sat");
        CHECK(sat > 0);
        CHECK(sat < trials);
    }
}

TEST_CASE("cyct four-consistency matches the angle oracle on atomic networks") {
    std::mt19937 rng(7);
    const int U = 24;
    int n = 5, trials = 400, consistent = 0;
    for (int t = 0; t < trials; ++t) {
        std::uniform_int_distribution<int> ang(0, U - 1);
        std::vector<int> th(n);
        for (auto& x : th) x = ang(rng);
        std::vector<int> at(size_t(n) * n * n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) at[(size_t(i) * n + j) * n + k] = oracle::cyct_atom_of_angles(th[i], th[j], th[k], U);
        // perturb one or two triples in most trials
        std::uniform_int_distribution<int> pick(0, 23), var(0, n - 1);
        int flips = t % 4 == 0 ? 0 : 1 + t % 2;
        for (int f = 0; f < flips; ++f) {
            int i = var(rng), j = var(rng), k = var(rng);
            if (i == j || j == k || i == k) continue;
            std::array<int, 3> s{i, j, k};
            std::sort(s.begin(), s.end());
            at[(size_t(s[0]) * n + s[1]) * n + s[2]] = pick(rng);
        }
        Qsp q(AlgebraId::CYCT);
        for (int i = 0; i < n; ++i) q.var("v" + std::to_string(i));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) q.constrain(i, j, k, Relation::atom(AlgebraId::CYCT, at[(size_t(i) * n + j) * n + k]));
        bool expect = oracle::cyct_realizable(n, at);
        CAPTURE(q.str());
        CHECK(bool(four_consistency(q)) == expect);
        CHECK(bool(solve_scenario(q)) == expect);
        consistent += expect;
    }
    MESSAGE("cyct 5-variable atomic networks: " << consistent << "/" << trials << " realizable");
    CHECK(consistent > 0);
}

TEST_CASE("cyct spot examples") {
    auto T = AlgebraId::CYCT;
    Qsp q(T);
    int x = q.var("x"), y = q.var("y"), z = q.var("z");
    q.constrain(x, y, z, rel(T, "{rrr}"));
    auto f = four_consistency(q);
    REQUIRE(f);
    CHECK(*f == q);

    Qsp d(T);
    x = d.var("x");
    d.constrain(x, x, x, rel(T, "{eee}"));
    CHECK(four_consistency(d));
    Qsp e(T);
    x = e.var("x");
    e.constrain(x, x, x, rel(T, "{lll}"));
    CHECK_FALSE(four_consistency(e));
}
