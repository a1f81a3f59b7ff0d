#include "stdl/qsp.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace stdl {

namespace {

// b(s_to, s_from) for positions of a sorted triple.
CycB triple_pair(const std::array<CycB, 3>& c, int from, int to) {
    auto direct = [&](int a, int b) {
        if (a == 0 && b == 1) return c[0];
        if (a == 1 && b == 2) return c[1];
        return c[2];
    };
    return from < to ? direct(from, to) : cycb_converse(direct(to, from));
}

std::array<int, 3> sort3(int i, int j, int k, Perm3& q) {
    std::array<int, 3> t{i, j, k};
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return t[a] < t[b]; });
    q = {idx[0], idx[1], idx[2]};
    return {t[idx[0]], t[idx[1]], t[idx[2]]};
}

}  // namespace

int Qsp::find(std::string_view name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return int(i);
    return -1;
}

int Qsp::var(std::string_view name) {
    int f = find(name);
    if (f >= 0) return f;
    names_.emplace_back(name);
    grow();
    return size() - 1;
}

void Qsp::grow() {
    int n = size(), m = n - 1;
    if (arity(alg_) == 2) {
        std::vector<Relation> b(size_t(n) * n, Relation::universal(alg_));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) b[size_t(i) * n + j] = bin_[size_t(i) * m + j];
        b[size_t(m) * n + m] = Relation::atom(alg_, identity_atom(alg_));
        bin_ = std::move(b);
    } else {
        std::vector<Relation> t(size_t(n) * n * n, Relation::universal(alg_));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) t[(size_t(i) * n + j) * n + k] = ter_[(size_t(i) * m + j) * m + k];
        ter_ = std::move(t);
    }
}

void Qsp::set2(int i, int j, Relation r) {
    raw2(i, j) = r;
    raw2(j, i) = converse(r);
}

void Qsp::constrain(int i, int j, Relation r) {
    if (arity(alg_) != 2) throw AlgebraError("binary constraint in a ternary network");
    if (r.alg != alg_) throw AlgebraError("constraint algebra mismatch");
    if (i == j) {
        if (!r.has(identity_atom(alg_))) dead_ = true;
        return;
    }
    set2(i, j, raw2(i, j) & r);
}

void Qsp::restrict_pair(int u, int v, uint8_t mask) {
    if (mask == 0) {
        dead_ = true;
        return;
    }
    int w = -1;
    for (int x = 0; x < size() && w < 0; ++x)
        if (x != u && x != v) w = x;
    if (w < 0) w = var("_aux" + std::to_string(size()));
    Perm3 q;
    auto s = sort3(u, v, w, q);
    int pu = int(std::find(s.begin(), s.end(), u) - s.begin());
    int pv = int(std::find(s.begin(), s.end(), v) - s.begin());
    Relation& r = raw3(s[0], s[1], s[2]);
    Relation keep = Relation::empty(alg_);
    for (int a : r.atoms())
        if ((mask >> int(triple_pair(cyct_components(a), pu, pv))) & 1u) keep.bits |= uint32_t{1} << a;
    r = keep;
}

void Qsp::constrain(int i, int j, int k, Relation r) {
    if (arity(alg_) != 3) throw AlgebraError("ternary constraint in a binary network");
    if (r.alg != alg_) throw AlgebraError("constraint algebra mismatch");
    auto has = [&](CycB a, CycB b, CycB c) {
        auto x = cyct_atom_from(a, b, c);
        return x && r.has(*x);
    };
    const CycB all[4] = {CycB::e, CycB::l, CycB::o, CycB::r};
    if (i == j && j == k) {
        if (!has(CycB::e, CycB::e, CycB::e)) dead_ = true;
        return;
    }
    uint8_t mask = 0;
    if (i == j) {  // b1 = e, b2 = b3 = b(z,x)
        for (CycB b : all)
            if (has(CycB::e, b, b)) mask |= uint8_t(1u << int(b));
        restrict_pair(i, k, mask);
        return;
    }
    if (i == k) {  // (x,y,x): b(y,x), its converse, e
        for (CycB b : all)
            if (has(b, cycb_converse(b), CycB::e)) mask |= uint8_t(1u << int(b));
        restrict_pair(i, j, mask);
        return;
    }
    if (j == k) {  // (x,y,y): b(y,x), e, b(y,x)
        for (CycB b : all)
            if (has(b, CycB::e, b)) mask |= uint8_t(1u << int(b));
        restrict_pair(i, j, mask);
        return;
    }
    Perm3 q;
    auto s = sort3(i, j, k, q);
    Relation& slot = raw3(s[0], s[1], s[2]);
    slot = slot & permute(r, q);
}

Relation Qsp::get(int i, int j) const {
    if (i == j) return Relation::atom(alg_, identity_atom(alg_));
    return raw2(i, j);
}

Relation Qsp::get(int i, int j, int k) const {
    if (i != j && j != k && i != k) {
        Perm3 q;
        auto s = sort3(i, j, k, q);
        // Input position m holds s[inv[m]].
        Perm3 inv{};
        for (int m = 0; m < 3; ++m) inv[q[m]] = m;
        return permute(raw3(s[0], s[1], s[2]), inv);
    }
    // Degenerate tuples: atoms compatible with the stored pair relation.
    uint8_t pair = 0xF;
    int u = i, v = (i == j) ? k : j;
    if (u != v) {
        int w = -1;
        for (int x = 0; x < size() && w < 0; ++x)
            if (x != u && x != v) w = x;
        if (w >= 0) {
            Perm3 q;
            auto s = sort3(u, v, w, q);
            int pu = int(std::find(s.begin(), s.end(), u) - s.begin());
            int pv = int(std::find(s.begin(), s.end(), v) - s.begin());
            pair = 0;
            for (int a : raw3(s[0], s[1], s[2]).atoms())
                pair |= uint8_t(1u << int(triple_pair(cyct_components(a), pu, pv)));
        }
    }
    Relation out = Relation::empty(alg_);
    const CycB all[4] = {CycB::e, CycB::l, CycB::o, CycB::r};
    for (CycB b : all) {
        if (!((pair >> int(b)) & 1u)) continue;
        std::optional<int> a;
        if (i == j && j == k) a = cyct_atom_from(CycB::e, CycB::e, CycB::e);
        else if (i == j) a = cyct_atom_from(CycB::e, b, b);
        else if (i == k) a = cyct_atom_from(b, cycb_converse(b), CycB::e);
        else a = cyct_atom_from(b, CycB::e, b);
        if (a) out.bits |= uint32_t{1} << *a;
    }
    return out;
}

bool Qsp::any_empty() const {
    if (dead_) return true;
    int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (arity(alg_) == 2) {
                if (raw2(i, j).is_empty()) return true;
            } else {
                for (int k = j + 1; k < n; ++k)
                    if (raw3(i, j, k).is_empty()) return true;
            }
        }
    return false;
}

bool Qsp::is_atomic() const {
    int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (arity(alg_) == 2) {
                if (!raw2(i, j).is_atomic()) return false;
            } else {
                for (int k = j + 1; k < n; ++k)
                    if (!raw3(i, j, k).is_atomic()) return false;
            }
        }
    return true;
}

bool Qsp::operator==(const Qsp& o) const {
    return alg_ == o.alg_ && names_ == o.names_ && bin_ == o.bin_ && ter_ == o.ter_ && dead_ == o.dead_;
}

std::string Qsp::str() const {
    std::ostringstream os;
    os << "algebra " << algebra_name(alg_) << '\n';
    int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (arity(alg_) == 2) {
                if (raw2(i, j) != Relation::universal(alg_))
                    os << names_[i] << ' ' << raw2(i, j).str() << ' ' << names_[j] << '\n';
            } else {
                for (int k = j + 1; k < n; ++k)
                    if (raw3(i, j, k) != Relation::universal(alg_))
                        os << raw3(i, j, k).str() << ' ' << names_[i] << ' ' << names_[j] << ' ' << names_[k]
                           << '\n';
            }
        }
    return os.str();
}

std::optional<Qsp> path_consistency(const Qsp& p0) {
    if (arity(p0.algebra()) != 2) throw AlgebraError("path_consistency: ternary algebra");
    if (p0.any_empty()) return std::nullopt;
    Qsp p = p0;
    int n = p.size();
    std::deque<std::pair<int, int>> queue;
    std::vector<char> queued(size_t(n) * n, 0);
    auto push = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        if (!queued[size_t(i) * n + j]) {
            queued[size_t(i) * n + j] = 1;
            queue.emplace_back(i, j);
        }
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) push(i, j);
    auto revise = [&](int a, int b, Relation with) {
        Relation cur = p.raw2(a, b);
        Relation nr = cur & with;
        if (nr == cur) return true;
        p.set2(a, b, nr);
        if (nr.is_empty()) return false;
        push(a, b);
        return true;
    };
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        queued[size_t(i) * n + j] = 0;
        for (int k = 0; k < n; ++k) {
            if (k == i || k == j) continue;
            if (!revise(i, k, compose(p.raw2(i, j), p.raw2(j, k)))) return std::nullopt;
            if (!revise(k, j, compose(p.raw2(k, i), p.raw2(i, j)))) return std::nullopt;
        }
    }
    return p;
}

std::optional<Qsp> four_consistency(const Qsp& p0) {
    if (arity(p0.algebra()) != 3) throw AlgebraError("four_consistency: binary algebra");
    if (p0.any_empty()) return std::nullopt;
    Qsp p = p0;
    int n = p.size();
    if (n < 4) return p;
    auto& quads = cyct_quadruples();
    auto key = [&](int a, int b, int c, int d) { return ((size_t(a) * n + b) * n + c) * n + d; };
    std::vector<char> queued(size_t(n) * n * n * n, 0);
    std::deque<std::array<int, 4>> queue;
    auto push = [&](std::array<int, 4> q) {
        std::sort(q.begin(), q.end());
        size_t k = key(q[0], q[1], q[2], q[3]);
        if (!queued[k]) {
            queued[k] = 1;
            queue.push_back(q);
        }
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) push({a, b, c, d});
    while (!queue.empty()) {
        auto q = queue.front();
        queue.pop_front();
        queued[key(q[0], q[1], q[2], q[3])] = 0;
        const std::array<std::array<int, 3>, 4> tri{{{q[0], q[1], q[2]},
                                                     {q[0], q[1], q[3]},
                                                     {q[0], q[2], q[3]},
                                                     {q[1], q[2], q[3]}}};
        std::array<Relation, 4> r;
        for (int t = 0; t < 4; ++t) r[t] = p.raw3(tri[t][0], tri[t][1], tri[t][2]);
        std::array<uint32_t, 4> sup{0, 0, 0, 0};
        for (auto& c : quads)
            if (r[0].has(c[0]) && r[1].has(c[1]) && r[2].has(c[2]) && r[3].has(c[3]))
                for (int t = 0; t < 4; ++t) sup[t] |= uint32_t{1} << c[t];
        for (int t = 0; t < 4; ++t) {
            uint32_t nb = r[t].bits & sup[t];
            if (nb == r[t].bits) continue;
            if (nb == 0) return std::nullopt;
            p.raw3(tri[t][0], tri[t][1], tri[t][2]).bits = nb;
            for (int e = 0; e < n; ++e)
                if (e != tri[t][0] && e != tri[t][1] && e != tri[t][2]) push({tri[t][0], tri[t][1], tri[t][2], e});
        }
    }
    return p;
}

std::optional<Qsp> propagate(const Qsp& p) {
    return arity(p.algebra()) == 2 ? path_consistency(p) : four_consistency(p);
}

namespace {

std::optional<Qsp> backtrack(const Qsp& q) {
    auto r = propagate(q);
    if (!r) return std::nullopt;
    int n = r->size();
    bool bin = arity(r->algebra()) == 2;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (bin) {
                Relation cur = r->raw2(i, j);
                if (cur.is_atomic()) continue;
                for (int a : cur.atoms()) {
                    Qsp c = *r;
                    c.set2(i, j, Relation::atom(c.algebra(), a));
                    if (auto s = backtrack(c)) return s;
                }
                return std::nullopt;
            }
            for (int k = j + 1; k < n; ++k) {
                Relation cur = r->raw3(i, j, k);
                if (cur.is_atomic()) continue;
                for (int a : cur.atoms()) {
                    Qsp c = *r;
                    c.raw3(i, j, k) = Relation::atom(c.algebra(), a);
                    if (auto s = backtrack(c)) return s;
                }
                return std::nullopt;
            }
        }
    return r;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::optional<Qsp> solve_scenario(const Qsp& p) {
    if (p.any_empty()) return std::nullopt;
    AlgebraId alg = p.algebra();
    bool bin = arity(alg) == 2;
    int n = p.size();
    Relation top = Relation::universal(alg);
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (bin) {
                if (p.raw2(i, j) != top) uf.unite(i, j);
            } else {
                for (int k = j + 1; k < n; ++k)
                    if (p.raw3(i, j, k) != top) uf.unite(i, j), uf.unite(j, k);
            }
        }
    Qsp out = p;
    std::vector<char> done(n, 0);
    for (int root = 0; root < n; ++root) {
        int rep = uf.find(root);
        if (done[rep]) continue;
        done[rep] = 1;
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (uf.find(v) == rep) members.push_back(v);
        if (int(members.size()) < arity(alg)) continue;
        Qsp sub(alg);
        for (int v : members) sub.var(p.names()[v]);
        int m = int(members.size());
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                if (bin) {
                    sub.set2(a, b, p.raw2(members[a], members[b]));
                } else {
                    for (int c = b + 1; c < m; ++c)
                        sub.raw3(a, b, c) = p.raw3(members[a], members[b], members[c]);
                }
            }
        auto s = backtrack(sub);
        if (!s) return std::nullopt;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                if (bin) {
                    out.set2(members[a], members[b], s->raw2(a, b));
                } else {
                    for (int c = b + 1; c < m; ++c)
                        out.raw3(members[a], members[b], members[c]) = s->raw3(a, b, c);
                }
            }
    }
    return out;
}

Qsp parse_qsp(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<Qsp> q;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw QspParseError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        std::string rel;
        auto lb = line.find('{');
        std::vector<std::string> before, after;
        auto split = [](const std::string& s) {
            std::istringstream ss(s);
            std::vector<std::string> toks;
            std::string t;
            while (ss >> t) toks.push_back(t);
            return toks;
        };
        if (lb != std::string::npos) {
            auto rb = line.find('}', lb);
            if (rb == std::string::npos) fail("missing '}'");
            rel = line.substr(lb, rb - lb + 1);
            before = split(line.substr(0, lb));
            after = split(line.substr(rb + 1));
        } else {
            before = split(line);
        }
        if (before.empty() && after.empty() && rel.empty()) continue;
        if (!q) {
            if (before.size() != 2 || before[0] != "algebra" || !rel.empty()) fail("expected 'algebra <name>'");
            auto a = parse_algebra(before[1]);
            if (!a) fail("unknown algebra '" + before[1] + "'");
            q.emplace(*a);
            continue;
        }
        try {
            if (arity(q->algebra()) == 2) {
                if (rel.empty()) {
                    if (before.size() != 3) fail("expected 'x {atoms} y'");
                    rel = before[1];
                    after = {before[2]};
                    before = {before[0]};
                }
                if (before.size() != 1 || after.size() != 1) fail("expected 'x {atoms} y'");
                Relation r = Relation::parse(q->algebra(), rel);
                int i = q->var(before[0]);
                int j = q->var(after[0]);
                q->constrain(i, j, r);
            } else {
                if (rel.empty() || !before.empty() || after.size() != 3) fail("expected '{atoms} x y z'");
                Relation r = Relation::parse(q->algebra(), rel);
                int i = q->var(after[0]);
                int j = q->var(after[1]);
                int k = q->var(after[2]);
                q->constrain(i, j, k, r);
            }
        } catch (const AlgebraError& e) {
            fail(e.what());
        }
    }
    if (!q) throw QspParseError("empty input: missing 'algebra' header");
    return *q;
}

}  // namespace stdl
