#include "stdl/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace stdl {

std::string FRunTree::address(const Automaton& a, int u) const {
    std::vector<std::string> parts;
    for (int v = u; nodes[v].parent >= 0; v = nodes[v].parent) parts.push_back(a.dirs[nodes[v].dir].str());
    if (parts.empty()) return "ε";
    std::string s;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) s += (s.empty() ? "" : ".") + *it;
    return s;
}

int FRunTree::depth(int u) const {
    int d = 0;
    for (; nodes[u].parent >= 0; u = nodes[u].parent) ++d;
    return d;
}

double node_bound(const Automaton& a) {
    return std::pow(2.0, double(a.states.size())) * double(a.longest_chain) *
           std::pow(2.0, double(a.constraints.size()));
}

std::vector<BackEntry> back_set(const Automaton& a, const FRunTree& t, int u) {
    std::vector<int> path;  // directions from the root down to u
    std::vector<int> anc;   // ancestors, root first
    for (int v = u; t.nodes[v].parent >= 0; v = t.nodes[v].parent) {
        path.push_back(t.nodes[v].dir);
        anc.push_back(t.nodes[v].parent);
    }
    std::reverse(path.begin(), path.end());
    std::reverse(anc.begin(), anc.end());
    std::vector<BackEntry> out;
    for (size_t i = 0; i < anc.size(); ++i) {
        size_t k = path.size() - i;  // steps from anc[i] to u
        for (int c : t.nodes[anc[i]].X) {
            const auto& chains = a.constraints[c].chains;
            for (size_t s = 0; s < chains.size(); ++s) {
                const auto& d = chains[s].dirs;
                if (d.size() < k) continue;
                if (std::equal(d.begin(), d.begin() + k, path.begin() + i))
                    out.push_back({int(k), int(s), c});
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct UserCap {};

bool clashes(const std::set<Concept>& lits) {
    for (auto& l : lits)
        if (l.kind() == CKind::Not && lits.count(l.arg())) return true;
    return false;
}

int y_index(const FRunNode& n, int q) {
    auto it = std::lower_bound(n.Y.begin(), n.Y.end(), q);
    return it != n.Y.end() && *it == q ? int(it - n.Y.begin()) : -1;
}

// Co-Büchi trace game over (node, state, term). A vertex wins when some
// justification keeps every play from taking deferring edges forever.
struct Game {
    bool ok = true;
    Strategy strategy;
};

Game solve_game(const Automaton& a, const FRunTree& t) {
    const auto& N = t.nodes;
    std::vector<std::vector<int>> off(N.size());
    std::vector<std::array<int, 3>> vinfo;  // node, y index, term
    for (size_t u = 0; u < N.size(); ++u) {
        if (!N[u].expanded || N[u].marked) continue;
        for (size_t i = 0; i < N[u].Y.size(); ++i) {
            off[u].push_back(int(vinfo.size()));
            for (size_t k = 0; k < a.nterms[N[u].Y[i]]; ++k) vinfo.push_back({int(u), int(i), int(k)});
        }
    }
    size_t V = vinfo.size();
    using Alt = std::vector<std::pair<int, bool>>;  // target (-1 = open node), deferring
    std::vector<std::vector<Alt>> alts(V);
    for (size_t v = 0; v < V; ++v) {
        auto [u, i, k] = vinfo[v];
        const auto& tc = a.delta[N[u].Y[i]][N[u].choice[i]];
        for (const auto& j : tc.just[k]) {
            Alt alt;
            for (const auto& e : j) {
                const Move& mv = tc.moves[e.move];
                int r = t.resolve(N[u].children.at(mv.dir));
                if (!N[r].expanded) {
                    alt.push_back({-1, e.lfp});
                    continue;
                }
                int yi = y_index(N[r], mv.state);
                if (yi < 0) throw std::logic_error("move target missing from successor label");
                alt.push_back({off[r][yi] + e.term, e.lfp});
            }
            alts[v].push_back(std::move(alt));
        }
    }

    std::vector<char> inX(V, 0);
    std::vector<int> pick(V, -1);
    auto satisfied = [&](const Alt& alt, const std::vector<char>& inY) {
        for (auto [tg, lfp] : alt)
            if (tg >= 0 && !inX[tg] && (lfp || !inY[tg])) return false;
        return true;
    };
    for (;;) {
        std::vector<char> inY(V, 1);
        for (bool changed = true; changed;) {
            changed = false;
            for (size_t v = 0; v < V; ++v) {
                if (!inY[v] || inX[v]) continue;
                bool any = false;
                for (auto& alt : alts[v])
                    if (satisfied(alt, inY)) {
                        any = true;
                        break;
                    }
                if (!any) inY[v] = 0, changed = true;
            }
        }
        std::vector<size_t> fresh;
        for (size_t v = 0; v < V; ++v)
            if (inY[v] && !inX[v]) {
                for (size_t j = 0; j < alts[v].size(); ++j)
                    if (satisfied(alts[v][j], inY)) {
                        pick[v] = int(j);
                        break;
                    }
                fresh.push_back(v);
            }
        if (fresh.empty()) break;
        for (auto v : fresh) inX[v] = 1;
    }

    Game g;
    g.strategy.resize(N.size());
    for (size_t u = 0; u < N.size(); ++u)
        for (size_t i = 0; i < off[u].size(); ++i)
            g.strategy[u].push_back(std::vector<int>(a.nterms[N[u].Y[i]], -1));
    for (size_t v = 0; v < V; ++v) g.strategy[vinfo[v][0]][vinfo[v][1]][vinfo[v][2]] = pick[v];
    if (!N.empty() && N[0].expanded && !N[0].marked)
        for (size_t i = 0; i < off[0].size(); ++i)
            for (size_t k = 0; k < a.nterms[N[0].Y[i]]; ++k)
                if (!inX[off[0][i] + k]) g.ok = false;
    return g;
}

// Endpoint of a chain from u, following marked leaves to their back node.
// With `partial`, nullopt when the chain runs into an unexpanded node.
std::optional<int> walk(const FRunTree& t, int u, const GroundChain& ch, bool partial) {
    int cur = u;
    for (int d : ch.dirs) {
        if (!t.nodes[cur].expanded) {
            if (partial) return std::nullopt;
            throw std::logic_error("chain runs into an unexpanded node");
        }
        auto it = t.nodes[cur].children.find(d);
        if (it == t.nodes[cur].children.end()) {
            if (partial) return std::nullopt;
            throw std::logic_error("chain leaves the tree");
        }
        cur = t.resolve(it->second);
    }
    if (partial && !t.nodes[cur].expanded) return std::nullopt;
    return cur;
}

std::string var_name(int node, const std::string& g) { return "n" + std::to_string(node) + "." + g; }

TreeCsp build_csp(const Automaton& a, const FRunTree& t, bool partial) {
    TreeCsp out;
    out.qsp = Qsp(a.algebra.value_or(AlgebraId::RCC8));
    for (size_t u = 0; u < t.nodes.size(); ++u) {
        const auto& n = t.nodes[u];
        if (!n.expanded || n.marked) continue;
        for (int c : n.X) {
            const auto& gc = a.constraints[c];
            std::vector<int> vs;
            for (auto& ch : gc.chains) {
                auto end = walk(t, int(u), ch, partial);
                if (!end) break;
                std::string nm = var_name(*end, ch.tip);
                int before = out.qsp.size();
                int idx = out.qsp.var(nm);
                if (idx == before) out.vars.push_back({*end, ch.tip});
                vs.push_back(idx);
            }
            if (vs.size() != gc.chains.size()) continue;
            if (vs.size() == 2)
                out.qsp.constrain(vs[0], vs[1], gc.rel);
            else if (vs.size() == 3)
                out.qsp.constrain(vs[0], vs[1], vs[2], gc.rel);
            else
                throw std::logic_error("constraint arity does not match the algebra");
        }
    }
    return out;
}

bool consistent_so_far(const Automaton& a, const FRunTree& t) {
    if (a.constraints.empty()) return true;
    TreeCsp c = build_csp(a, t, true);
    if (c.qsp.trivially_inconsistent() || c.qsp.any_empty()) return false;
    return propagate(c.qsp).has_value();
}

using Key = std::pair<std::vector<int>, std::vector<BackEntry>>;

class Search {
public:
    Search(const Automaton& a, const SearchOptions& o) : a_(a), o_(o) {}

    Verdict run() {
        v_.stats.bound = node_bound(a_);
        FRunNode root;
        root.Y = {a_.q0};
        t_.nodes.push_back(root);
        pending_.push_back(0);
        try {
            v_.kind = solve() ? Verdict::Sat : Verdict::Unsat;
        } catch (const UserCap&) {
            v_.kind = Verdict::Resource;
            v_.witness.reset();
        }
        return v_;
    }

private:
    bool eager_ok() { return o_.propagation == Propagation::Lazy || consistent_so_far(a_, t_); }

    bool finish() {
        Game g = solve_game(a_, t_);
        if (!g.ok) return false;
        Witness w;
        w.tree = t_;
        w.csp = csp_of_tree(a_, t_);
        if (w.csp.qsp.size() > 0) {
            w.scenario = solve_scenario(w.csp.qsp);
            if (!w.scenario || w.csp.qsp.trivially_inconsistent()) return false;
        }
        w.strategy = std::move(g.strategy);
        v_.witness = std::move(w);
        return true;
    }

    bool solve() {
        if (pending_.empty()) return finish();
        int u = pending_.back();
        pending_.pop_back();
        bool ok = false;
        auto it = expanded_.find(Key{t_.nodes[u].Y, t_.nodes[u].back});
        if (it != expanded_.end()) {
            if (try_block(a_, t_, it->second, u)) {
                ++v_.stats.blocks;
                ok = eager_ok() && solve();
                if (!ok) {
                    t_.nodes[u].marked = false;
                    t_.nodes[u].back_node = -1;
                }
            }
        } else {
            ok = expand(u);
        }
        if (!ok) {
            pending_.push_back(u);
            ++v_.stats.backtracks;
        }
        return ok;
    }

    bool expand(int u) {
        const std::vector<int> Y = t_.nodes[u].Y;
        for (int q : Y)
            if (a_.delta[q].empty()) return false;
        std::vector<int> choice(Y.size(), 0);
        for (;;) {
            if (try_combo(u, choice)) return true;
            size_t i = Y.size();
            while (i > 0) {
                --i;
                if (++choice[i] < int(a_.delta[Y[i]].size())) break;
                choice[i] = 0;
                if (i == 0) return false;
            }
            if (Y.empty()) return false;
        }
    }

    bool try_combo(int u, const std::vector<int>& choice) {
        FRunNode& n = t_.nodes[u];
        std::set<Concept> L;
        std::set<int> X;
        std::map<int, std::set<int>> targets;
        std::map<int, std::vector<BackEntry>> cback;
        for (size_t i = 0; i < n.Y.size(); ++i) {
            const auto& tc = a_.delta[n.Y[i]][choice[i]];
            L.insert(tc.lits.begin(), tc.lits.end());
            X.insert(tc.constraints.begin(), tc.constraints.end());
            for (auto& mv : tc.moves) targets[mv.dir].insert(mv.state);
        }
        if (clashes(L)) return false;
        for (auto& e : n.back) {
            const auto& d = a_.constraints[e.constraint].chains[e.side].dirs;
            if (e.n < int(d.size())) cback[d[e.n]].push_back({e.n + 1, e.side, e.constraint});
        }
        for (int c : X) {
            const auto& chains = a_.constraints[c].chains;
            for (size_t s = 0; s < chains.size(); ++s)
                if (!chains[s].dirs.empty()) cback[chains[s].dirs[0]].push_back({1, int(s), c});
        }
        std::set<int> dirs;
        for (auto& [d, _] : targets) dirs.insert(d);
        for (auto& [d, _] : cback) dirs.insert(d);

        n.choice = choice;
        n.L = std::move(L);
        n.X.assign(X.begin(), X.end());
        n.expanded = true;
        size_t mark = t_.nodes.size();
        for (int d : dirs) {
            FRunNode c;
            c.parent = u;
            c.dir = d;
            auto& ts = targets[d];
            c.Y.assign(ts.begin(), ts.end());
            c.back = cback[d];
            std::sort(c.back.begin(), c.back.end());
            c.back.erase(std::unique(c.back.begin(), c.back.end()), c.back.end());
            t_.nodes[u].children[d] = int(t_.nodes.size());
            t_.nodes.push_back(std::move(c));
        }
        for (size_t c = t_.nodes.size(); c > mark; --c) pending_.push_back(int(c - 1));
        expanded_[Key{t_.nodes[u].Y, t_.nodes[u].back}] = u;
        ++v_.stats.expansions;
        v_.stats.max_unmarked = std::max(v_.stats.max_unmarked, expanded_.size());
        if (double(expanded_.size()) > v_.stats.bound)
            throw std::logic_error("unmarked node count exceeds the theoretical bound");
        if (o_.max_nodes && expanded_.size() > o_.max_nodes) throw UserCap{};

        bool ok = eager_ok() && solve();
        if (ok) return true;
        pending_.resize(pending_.size() - (t_.nodes.size() - mark));
        t_.nodes.resize(mark);
        FRunNode& m = t_.nodes[u];
        expanded_.erase(Key{m.Y, m.back});
        m.children.clear();
        m.choice.clear();
        m.L.clear();
        m.X.clear();
        m.expanded = false;
        return false;
    }

    const Automaton& a_;
    SearchOptions o_;
    FRunTree t_;
    std::vector<int> pending_;
    std::map<Key, int> expanded_;
    Verdict v_;
};

}  // namespace

bool try_block(const Automaton& a, FRunTree& t, int u, int v) {
    FRunNode& nv = t.nodes[v];
    const FRunNode& nu = t.nodes[u];
    if (!nu.expanded || nu.marked || nv.expanded || nv.marked) return false;
    if (nu.Y != nv.Y || nu.back != nv.back) return false;
    nv.marked = true;
    nv.back_node = u;
    if (solve_game(a, t).ok) return true;
    nv.marked = false;
    nv.back_node = -1;
    return false;
}

TreeCsp csp_of_tree(const Automaton& a, const FRunTree& t) { return build_csp(a, t, false); }

Verdict decide(const Automaton& a, const SearchOptions& opts) { return Search(a, opts).run(); }

Verdict decide_sat(const TBox& t, const Concept& c, const SearchOptions& opts) {
    if (auto bad = validate_weakly_cyclic(t)) throw ValidationError(*bad);
    return decide(build_automaton(close_tbox(t, c)), opts);
}

std::optional<std::string> check_witness(const Automaton& a, const Witness& w) {
    const auto& N = w.tree.nodes;
    if (N.empty()) return "empty tree";
    if (N[0].Y != std::vector<int>{a.q0}) return "root label is not the initial state";
    auto here = [&](int u) { return "node " + w.tree.address(a, u) + ": "; };

    for (size_t u = 0; u < N.size(); ++u) {
        const auto& n = N[u];
        std::vector<BackEntry> back = back_set(a, w.tree, int(u));
        if (n.marked) {
            if (!n.children.empty()) return here(u) + "marked node has children";
            int b = n.back_node;
            if (b < 0 || b >= int(N.size()) || N[b].marked || !N[b].expanded) return here(u) + "bad back node";
            if (N[b].Y != n.Y) return here(u) + "label differs from its back node";
            if (back_set(a, w.tree, b) != back) return here(u) + "back set differs from its back node";
            continue;
        }
        if (!n.expanded) return here(u) + "open node";
        if (n.choice.size() != n.Y.size()) return here(u) + "choice count";
        std::set<Concept> L;
        std::set<int> X;
        std::map<int, std::set<int>> need;
        for (size_t i = 0; i < n.Y.size(); ++i) {
            int q = n.Y[i];
            if (n.choice[i] < 0 || n.choice[i] >= int(a.delta[q].size())) return here(u) + "invalid choice";
            const auto& tc = a.delta[q][n.choice[i]];
            L.insert(tc.lits.begin(), tc.lits.end());
            X.insert(tc.constraints.begin(), tc.constraints.end());
            for (auto& mv : tc.moves) need[mv.dir].insert(mv.state);
        }
        if (L != n.L) return here(u) + "literals do not match the choices";
        for (auto& l : L)
            if (l.kind() == CKind::Not && L.count(l.arg())) return here(u) + "clashing literals";
        if (std::vector<int>(X.begin(), X.end()) != n.X) return here(u) + "constraints do not match the choices";
        for (int c : X)
            for (auto& ch : a.constraints[c].chains)
                if (!ch.dirs.empty()) need[ch.dirs[0]];
        for (auto& e : back) {
            const auto& d = a.constraints[e.constraint].chains[e.side].dirs;
            if (e.n < int(d.size())) need[d[e.n]];
        }
        if (need.size() != n.children.size()) return here(u) + "children do not match the required directions";
        for (auto& [d, ys] : need) {
            auto it = n.children.find(d);
            if (it == n.children.end()) return here(u) + "missing successor " + a.dirs[d].str();
            const auto& c = N[it->second];
            if (c.parent != int(u) || c.dir != d) return here(u) + "broken parent link";
            if (c.Y != std::vector<int>(ys.begin(), ys.end())) return here(u) + "successor label is not the move targets";
        }
    }

    // Strategy graph: no deferring edge may sit on a reachable cycle.
    std::map<std::array<int, 3>, int> id;
    std::vector<std::array<int, 3>> verts;
    std::vector<std::vector<std::pair<int, bool>>> adj;
    auto vid = [&](std::array<int, 3> v) {
        auto [it, fresh] = id.emplace(v, int(verts.size()));
        if (fresh) {
            verts.push_back(v);
            adj.emplace_back();
        }
        return it->second;
    };
    std::vector<int> todo;
    for (size_t k = 0; k < a.nterms[a.q0]; ++k) todo.push_back(vid({0, 0, int(k)}));
    std::vector<char> done;
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        if (int(done.size()) <= v) done.resize(v + 1, 0);
        if (done[v]) continue;
        done[v] = 1;
        auto [u, i, k] = verts[v];
        if (u >= int(w.strategy.size()) || i >= int(w.strategy[u].size()) || k >= int(w.strategy[u][i].size()))
            return here(u) + "strategy missing";
        const auto& tc = a.delta[N[u].Y[i]][N[u].choice[i]];
        int j = w.strategy[u][i][k];
        if (j < 0 || j >= int(tc.just[k].size())) return here(u) + "strategy picks no justification";
        for (auto& e : tc.just[k][j]) {
            const Move& mv = tc.moves[e.move];
            int c = N[u].children.at(mv.dir);
            int r = N[c].marked ? N[c].back_node : c;
            auto yi = std::find(N[r].Y.begin(), N[r].Y.end(), mv.state) - N[r].Y.begin();
            if (yi == int(N[r].Y.size())) return here(r) + "trace target missing";
            int t = vid({r, int(yi), e.term});
            adj[v].push_back({t, e.lfp});
            todo.push_back(t);
        }
    }
    // Tarjan
    int V = int(verts.size()), counter = 0, ncomp = 0;
    std::vector<int> index(V, -1), low(V, 0), comp(V, -1), stack;
    std::vector<char> on(V, 0);
    std::function<void(int)> dfs = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on[v] = 1;
        for (auto [t, _] : adj[v]) {
            if (index[t] < 0) {
                dfs(t);
                low[v] = std::min(low[v], low[t]);
            } else if (on[t]) {
                low[v] = std::min(low[v], index[t]);
            }
        }
        if (low[v] == index[v]) {
            for (;;) {
                int x = stack.back();
                stack.pop_back();
                on[x] = 0;
                comp[x] = ncomp;
                if (x == v) break;
            }
            ++ncomp;
        }
    };
    for (int v = 0; v < V; ++v)
        if (index[v] < 0) dfs(v);
    for (int v = 0; v < V; ++v)
        for (auto [t, lfp] : adj[v])
            if (lfp && comp[t] == comp[v]) return here(verts[v][0]) + "eventuality deferred forever";

    // Every constraint, re-resolved here, holds in the scenario.
    bool any = false;
    for (size_t u = 0; u < N.size(); ++u) {
        if (N[u].marked) continue;
        for (int c : N[u].X) {
            any = true;
            if (!w.scenario) return "constraints without a scenario";
            const auto& gc = a.constraints[c];
            std::vector<int> vs;
            for (auto& ch : gc.chains) {
                int cur = int(u);
                for (int d : ch.dirs) {
                    auto it = N[cur].children.find(d);
                    if (it == N[cur].children.end()) return here(u) + "chain leaves the tree";
                    cur = it->second;
                    if (N[cur].marked) cur = N[cur].back_node;
                }
                int idx = w.scenario->find("n" + std::to_string(cur) + "." + ch.tip);
                if (idx < 0) return here(u) + "scenario lacks a variable";
                vs.push_back(idx);
            }
            Relation r = vs.size() == 2 ? w.scenario->get(vs[0], vs[1]) : w.scenario->get(vs[0], vs[1], vs[2]);
            bool same = vs.size() == 2 ? vs[0] == vs[1] : (vs[0] == vs[1] || vs[1] == vs[2] || vs[0] == vs[2]);
            if (!same && !r.is_atomic()) return here(u) + "scenario is not atomic on " + a.constraint_str(c);
            if (!same && (r.bits & ~gc.rel.bits)) return here(u) + "scenario violates " + a.constraint_str(c);
            if (same) {
                Qsp probe = *w.scenario;
                if (vs.size() == 2)
                    probe.constrain(vs[0], vs[1], gc.rel);
                else
                    probe.constrain(vs[0], vs[1], vs[2], gc.rel);
                if (probe.trivially_inconsistent() || probe.any_empty()) return here(u) + "violates " + a.constraint_str(c);
            }
        }
    }
    if (any && !propagate(*w.scenario)) return "scenario is inconsistent";
    return std::nullopt;
}

namespace {

std::string join_states(const Automaton& a, const std::vector<int>& Y) {
    std::string s;
    for (int q : Y) s += (s.empty() ? "" : ",") + a.states[q];
    return s;
}

std::string dot_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    return o;
}

}  // namespace

std::string witness_dot(const Automaton& a, const Witness& w) {
    const auto& N = w.tree.nodes;
    std::ostringstream os;
    os << "digraph witness {\n  node [shape=box, fontname=monospace];\n";
    for (size_t u = 0; u < N.size(); ++u) {
        const auto& n = N[u];
        std::string label = w.tree.address(a, int(u)) + "\\nY={" + join_states(a, n.Y) + "}";
        if (!n.marked) {
            std::string l, x;
            for (auto& c : n.L) l += (l.empty() ? "" : " ") + c.str();
            for (int c : n.X) x += (x.empty() ? "" : " ") + a.constraint_str(c);
            label += "\\nL={" + l + "}\\nX={" + x + "}";
        }
        os << "  n" << u << " [label=\"" << dot_escape(label) << "\"" << (n.marked ? ", style=dashed" : "") << "];\n";
        for (auto& [d, c] : n.children) os << "  n" << u << " -> n" << c << " [label=\"" << dot_escape(a.dirs[d].str()) << "\"];\n";
        if (n.marked) os << "  n" << u << " -> n" << n.back_node << " [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

std::string scenario_text(const Automaton& a, const Witness& w) {
    if (!w.scenario) return "";
    const Qsp& s = *w.scenario;
    std::vector<std::string> nm;
    for (int i = 0; i < s.size(); ++i) {
        auto& [node, g] = w.csp.vars.at(i);
        nm.push_back("⟨" + w.tree.address(a, node) + "," + g + "⟩");
    }
    std::string out;
    int n = s.size();
    bool bin = arity(s.algebra()) == 2;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (bin) {
                Relation r = s.get(i, j);
                if (r.is_atomic()) out += nm[i] + " " + atom_names(s.algebra())[r.first()] + " " + nm[j] + "\n";
                continue;
            }
            for (int k = j + 1; k < n; ++k) {
                Relation r = s.get(i, j, k);
                if (r.is_atomic())
                    out += nm[i] + " " + nm[j] + " " + nm[k] + " " + atom_names(s.algebra())[r.first()] + "\n";
            }
        }
    return out;
}

}  // namespace stdl
