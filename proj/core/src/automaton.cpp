#include "stdl/automaton.hpp"

#include <algorithm>
#include <map>

namespace stdl {

std::strong_ordering operator<=>(const GroundConstraint& a, const GroundConstraint& b) {
    if (auto c = a.rel.alg <=> b.rel.alg; c != 0) return c;
    if (auto c = a.rel.bits <=> b.rel.bits; c != 0) return c;
    return a.chains <=> b.chains;
}

namespace {

std::map<std::string, std::set<std::string>> closed_uses(const ClosedTBox& ct) {
    auto d = ct.direct_uses();
    std::map<std::string, std::set<std::string>> out;
    for (auto& [b, _] : d) {
        auto& seen = out[b];
        std::vector<std::string> stack(d[b].begin(), d[b].end());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second) continue;
            for (auto& w : d[v]) stack.push_back(w);
        }
    }
    return out;
}

}  // namespace

Partition partition_states(const ClosedTBox& ct) {
    auto u = closed_uses(ct);
    const auto& names = ct.order;
    std::map<std::string, int> idx;
    for (size_t i = 0; i < names.size(); ++i) idx[names[i]] = int(i);

    Partition p;
    p.block_of.assign(names.size(), -1);
    for (size_t i = 0; i < names.size(); ++i) {
        if (p.block_of[i] >= 0) continue;
        const std::string& b1 = names[i];
        std::vector<int> block{int(i)};
        if (u[b1].count(b1))
            for (size_t j = 0; j < names.size(); ++j)
                if (j != i && u[names[j]].count(b1) && u[b1].count(names[j])) block.push_back(int(j));
        std::sort(block.begin(), block.end());
        for (int s : block) p.block_of[s] = int(p.blocks.size());
        p.blocks.push_back(block);
    }
    size_t n = p.blocks.size();
    p.geq.assign(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i) {
        p.geq[i][i] = true;
        for (int s : p.blocks[i])
            for (auto& used : u[names[s]])
                if (idx.count(used)) p.geq[i][p.block_of[idx[used]]] = true;
    }
    for (auto& blk : p.blocks) {
        bool acc = true;
        for (int s : blk)
            if (ct.tbox.is_eventuality(names[s])) acc = false;
        p.accepting.push_back(acc);
    }
    return p;
}

int Automaton::state(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    return it == states.end() ? -1 : int(it - states.begin());
}

std::string Automaton::constraint_str(int ci) const {
    const GroundConstraint& c = constraints[ci];
    std::string s = c.rel.str();
    for (auto& ch : c.chains) {
        s += "(";
        for (int d : ch.dirs) s += dirs[d].str() + " ";
        s += ch.tip + ")";
    }
    return s;
}

std::string Automaton::dump() const {
    std::string out;
    for (size_t q = 0; q < states.size(); ++q) {
        out += states[q] + " :";
        if (delta[q].empty()) out += " (none)";
        for (size_t i = 0; i < delta[q].size(); ++i) {
            const auto& tc = delta[q][i];
            out += i ? " ; [" : " [";
            std::string part;
            for (auto& l : tc.lits) part += (part.empty() ? "" : " ") + l.str();
            out += part + " | ";
            part.clear();
            for (int c : tc.constraints) part += (part.empty() ? "" : " ") + constraint_str(c);
            out += part + " | ";
            part.clear();
            for (auto& m : tc.moves) part += (part.empty() ? "" : " ") + dirs[m.dir].str() + "->" + states[m.state];
            out += part + "]";
        }
        out += "\n";
    }
    return out;
}

Automaton build_automaton(const ClosedTBox& ct) {
    Automaton a;
    a.algebra = ct.tbox.algebra;
    a.states = ct.order;
    for (auto& s : a.states) {
        a.eventuality.push_back(ct.tbox.is_eventuality(s));
        a.nterms.push_back(ct.terms.at(s).size());
    }
    a.q0 = a.state(ct.init);

    ClosureMetrics m = closure_metrics(ct);
    std::map<std::string, int> rel_dir, fun_dir;
    for (auto& r : m.reConcepts) {
        rel_dir[r.str()] = int(a.dirs.size());
        a.dirs.push_back({false, r.str()});
    }
    for (auto& f : m.aFeatures) {
        fun_dir[f] = int(a.dirs.size());
        a.dirs.push_back({true, f});
    }

    std::map<GroundConstraint, int> cidx;
    a.delta.resize(a.states.size());
    for (size_t q = 0; q < a.states.size(); ++q) {
        for (auto& ce : ct.dnf.at(a.states[q])) {
            TransitionChoice tc;
            tc.lits = ce.elem.props;
            for (auto& p : ce.elem.preds) {
                GroundConstraint g{p.rel(), {}};
                for (auto& ch : p.chains()) {
                    GroundChain gc{{}, ch.tip};
                    for (auto& f : ch.prefix) {
                        auto it = fun_dir.find(f);
                        if (it == fun_dir.end())
                            throw AutomatonError("feature '" + f + "' in chain " + ch.str() +
                                                 " is not a direction of the automaton");
                        gc.dirs.push_back(it->second);
                    }
                    a.longest_chain = std::max(a.longest_chain, gc.dirs.size() + 1);
                    g.chains.push_back(std::move(gc));
                }
                auto [it, fresh] = cidx.emplace(g, int(a.constraints.size()));
                if (fresh) a.constraints.push_back(g);
                tc.constraints.push_back(it->second);
            }
            for (auto& mv : ce.moves) {
                int d = mv.functional ? fun_dir.at(mv.role) : rel_dir.at(mv.as_exists().str());
                tc.moves.push_back({d, a.state(mv.body.id())});
            }
            tc.just = ce.just;
            a.delta[q].push_back(std::move(tc));
        }
    }

    a.partition = partition_states(ct);
    for (size_t q = 0; q < a.states.size(); ++q)
        for (auto& tc : a.delta[q])
            for (auto& mv : tc.moves)
                if (!a.partition.geq[a.partition.block_of[q]][a.partition.block_of[mv.state]])
                    throw AutomatonError("transition from " + a.states[q] + " to " + a.states[mv.state] +
                                         " climbs the partial order");
    return a;
}

}  // namespace stdl
