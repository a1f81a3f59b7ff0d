#include "stdl/normalize.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace stdl {

namespace {

template <class T>
std::strong_ordering cmp_sets(const std::set<T>& a, const std::set<T>& b) {
    auto i = a.begin(), j = b.begin();
    for (; i != a.end() && j != b.end(); ++i, ++j) {
        std::strong_ordering c = std::strong_ordering::equal;
        if constexpr (std::is_same_v<T, Concept>)
            c = compare(*i, *j);
        else
            c = *i <=> *j;
        if (c != 0) return c;
    }
    return a.size() <=> b.size();
}

std::vector<Concept> conjuncts(const Concept& c) {
    if (c.kind() == CKind::And) return c.args();
    return {c};
}

// Conjunction that leaves out ⊤ unless nothing else is there.
Concept conj_nt(const std::vector<Concept>& cs) {
    std::vector<Concept> keep;
    for (auto& c : cs)
        if (c.kind() != CKind::Top) keep.push_back(c);
    return Concept::conj(std::move(keep));
}

Concept chain_existence(const std::vector<std::string>& prefix) {
    Concept c = Concept::top();
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) c = Concept::exists(*it, true, c);
    return c;
}

// A DNF element whose quantifier items remember whether a least-fixpoint
// name was unfolded on the way to them.
struct TElem {
    DnfElement e;
    std::map<std::pair<bool, QuantItem>, bool> lfp;  // (is exists, item) -> flag
    auto operator<=>(const TElem& o) const {
        if (auto c = e <=> o.e; c != 0) return c;
        if (lfp == o.lfp) return std::strong_ordering::equal;
        return lfp < o.lfp ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    bool operator==(const TElem& o) const { return (*this <=> o) == 0; }
};
using TDnf = std::set<TElem>;

TDnf tproduct(const TDnf& a, const TDnf& b) {
    TDnf out;
    for (auto& x : a)
        for (auto& y : b) {
            TElem z = x;
            z.e.props.insert(y.e.props.begin(), y.e.props.end());
            if (z.e.clashes()) continue;
            z.e.preds.insert(y.e.preds.begin(), y.e.preds.end());
            z.e.exists.insert(y.e.exists.begin(), y.e.exists.end());
            z.e.foralls.insert(y.e.foralls.begin(), y.e.foralls.end());
            for (auto& [k, f] : y.lfp) z.lfp[k] = z.lfp[k] || f;
            out.insert(std::move(z));
        }
    return out;
}

class Dnf1 {
public:
    explicit Dnf1(const TBox& t) : t_(t) {}

    TDnf run(const Concept& c, bool neg) {
        switch (c.kind()) {
            case CKind::Top: return neg ? TDnf{} : TDnf{TElem{}};
            case CKind::Bottom: return neg ? TDnf{TElem{}} : TDnf{};
            case CKind::Not: return run(c.arg(), !neg);
            case CKind::Name: {
                if (c.is_primitive()) {
                    TElem e;
                    e.e.props.insert(neg ? Concept::neg(c) : c);
                    return {e};
                }
                for (auto& [n, _] : stack_)
                    if (n == c.id())
                        throw std::logic_error("unguarded cycle through '" + c.id() + "' during dnf1");
                if (stack_.size() > t_.axioms.size()) throw std::logic_error("dnf1 recursion depth exceeded");
                stack_.emplace_back(c.id(), neg);
                TDnf r = run(t_.definition(c.id()), neg);
                stack_.pop_back();
                return r;
            }
            case CKind::And:
            case CKind::Or: {
                bool prod = (c.kind() == CKind::And) != neg;
                TDnf acc;
                if (prod) acc.insert(TElem{});
                for (auto& a : c.args()) {
                    TDnf d = run(a, neg);
                    if (prod) {
                        acc = tproduct(acc, d);
                        if (acc.empty()) break;
                    } else {
                        acc.insert(d.begin(), d.end());
                    }
                }
                return acc;
            }
            case CKind::Exists:
            case CKind::Forall: {
                bool ex = (c.kind() == CKind::Exists) != neg;
                QuantItem q{c.id(), c.functional(), neg ? Concept::neg(c.arg()) : c.arg()};
                TElem e;
                (ex ? e.e.exists : e.e.foralls).insert(q);
                e.lfp[{ex, q}] = lfp_on_stack();
                return {e};
            }
            case CKind::Pred: {
                TElem e;
                e.e.preds.insert(neg ? Concept::pred(c.rel().complement(), c.chains()) : c);
                return {e};
            }
        }
        return {};
    }

private:
    bool lfp_on_stack() const {
        for (auto& [n, neg] : stack_)
            if (t_.is_eventuality(n) != neg) return true;
        return false;
    }

    const TBox& t_;
    std::vector<std::pair<std::string, bool>> stack_;
};

Dnf strip(const TDnf& d) {
    Dnf out;
    for (auto& e : d) out.insert(e.e);
    return out;
}

// S^f, remembering which output existentials each input quantifier feeds.
struct Flow {
    DnfElement out;
    std::map<std::pair<bool, QuantItem>, std::vector<QuantItem>> into;
};

Flow sf_flow(const DnfElement& s) {
    Flow fl;
    fl.out.props = s.props;
    fl.out.preds = s.preds;
    std::vector<QuantItem> exists(s.exists.begin(), s.exists.end());
    for (auto& p : s.preds)
        for (auto& ch : p.chains())
            if (!ch.prefix.empty()) {
                std::vector<std::string> rest(ch.prefix.begin() + 1, ch.prefix.end());
                exists.push_back({ch.prefix.front(), true, chain_existence(rest)});
            }
    // relational
    for (auto& q : s.exists) {
        if (q.functional) continue;
        std::vector<Concept> body{q.body};
        for (auto& a : s.foralls)
            if (!a.functional && a.role == q.role) body.push_back(a.body);
        QuantItem out{q.role, false, conj_nt(body)};
        fl.out.exists.insert(out);
        fl.into[{true, q}].push_back(out);
        for (auto& a : s.foralls)
            if (!a.functional && a.role == q.role) fl.into[{false, a}].push_back(out);
    }
    // functional
    std::map<std::string, std::vector<Concept>> bodies;
    for (auto& q : exists)
        if (q.functional) bodies[q.role].push_back(q.body);
    for (auto& [f, bs] : bodies) {
        std::vector<Concept> all = bs;
        for (auto& a : s.foralls)
            if (a.functional && a.role == f) all.push_back(a.body);
        QuantItem out{f, true, conj_nt(all)};
        fl.out.exists.insert(out);
        for (auto& q : s.exists)
            if (q.functional && q.role == f) fl.into[{true, q}].push_back(out);
        for (auto& a : s.foralls)
            if (a.functional && a.role == f) fl.into[{false, a}].push_back(out);
    }
    return fl;
}

bool dominates(const Justification& a, const Justification& b) {
    // a is at least as good as b
    for (auto& e : a) {
        bool covered = false;
        for (auto& f : b)
            if (f.move == e.move && f.term == e.term && (f.lfp || !e.lfp)) covered = true;
        if (!covered) return false;
    }
    return true;
}

void minimize(std::vector<Justification>& js) {
    std::sort(js.begin(), js.end());
    js.erase(std::unique(js.begin(), js.end()), js.end());
    std::vector<Justification> keep;
    for (size_t i = 0; i < js.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < js.size() && !dominated; ++j)
            if (i != j && dominates(js[j], js[i]) && !(dominates(js[i], js[j]) && j > i)) dominated = true;
        if (!dominated) keep.push_back(js[i]);
    }
    js = std::move(keep);
}

class Closer {
public:
    Closer(const TBox& t, const Concept& c) : dnf1_(ct_.tbox) {
        ct_.tbox = t;
        std::string init = "B_init";
        for (int i = 2; t.is_defined(init) || t.is_declared(init); ++i) init = "B_init_" + std::to_string(i);
        ct_.init = init;
        ct_.tbox.axioms.emplace(init, c);
        for (auto& [b, e] : t.axioms) ct_.memo.emplace(e, b);
        ct_.memo.emplace(c, init);
        for (auto& [b, _] : t.axioms) queue_.push_back(b);
        queue_.push_back(init);
    }

    ClosedTBox run() {
        for (size_t i = 0; i < queue_.size(); ++i) {
            std::string b = queue_[i];
            ct_.order.push_back(b);
            close(b);
        }
        propagate_eventualities();
        return std::move(ct_);
    }

private:
    std::string name_for(const Concept& d) {
        if (d.is_defined()) return d.id();
        if (auto it = ct_.memo.find(d); it != ct_.memo.end()) return it->second;
        std::string n;
        do n = "_G" + std::to_string(counter_++);
        while (ct_.tbox.is_defined(n) || ct_.tbox.is_declared(n));
        ct_.tbox.axioms.emplace(n, d);
        ct_.memo.emplace(d, n);
        ct_.fresh.insert(n);
        queue_.push_back(n);
        return n;
    }

    const std::vector<Concept>& terms_of(const std::string& b) {
        auto it = ct_.terms.find(b);
        if (it == ct_.terms.end()) it = ct_.terms.emplace(b, conjuncts(ct_.tbox.definition(b))).first;
        return it->second;
    }

    const TDnf& tdnf(const Concept& c) {
        auto it = tcache_.find(c);
        if (it == tcache_.end()) it = tcache_.emplace(c, dnf1_.run(c, false)).first;
        return it->second;
    }

    // The definition's DNF as the product of its terms' DNFs, remembering
    // for every element which element of each term contributed to it.
    using Sources = std::vector<std::set<int>>;  // per term, indices into tdnf(term)
    std::map<DnfElement, Sources> product_of_terms(const std::vector<Concept>& terms) {
        std::map<DnfElement, Sources> acc{{DnfElement{}, {}}};
        for (auto& term : terms) {
            const TDnf& d = tdnf(term);
            std::map<DnfElement, Sources> next;
            for (auto& [x, src] : acc) {
                int k = 0;
                for (auto it = d.begin(); it != d.end(); ++it, ++k) {
                    DnfElement z = x;
                    z.props.insert(it->e.props.begin(), it->e.props.end());
                    if (z.clashes()) continue;
                    z.preds.insert(it->e.preds.begin(), it->e.preds.end());
                    z.exists.insert(it->e.exists.begin(), it->e.exists.end());
                    z.foralls.insert(it->e.foralls.begin(), it->e.foralls.end());
                    auto [pos, fresh] = next.emplace(std::move(z), src);
                    if (fresh) {
                        pos->second.emplace_back();
                    } else {
                        for (size_t t = 0; t < src.size(); ++t) pos->second[t].insert(src[t].begin(), src[t].end());
                    }
                    pos->second.back().insert(k);
                }
            }
            acc = std::move(next);
            if (acc.empty()) break;
        }
        return acc;
    }

    void close(const std::string& b) {
        const std::vector<Concept> terms = terms_of(b);
        std::map<DnfElement, Sources> pre = product_of_terms(terms);
        std::vector<std::vector<const TElem*>> telems;
        for (auto& term : terms) {
            telems.emplace_back();
            for (auto& j : tdnf(term)) telems.back().push_back(&j);
        }

        std::map<DnfElement, ClosedElement> out;
        for (auto& [s, src] : pre) {
            Flow fl = sf_flow(s);
            ClosedElement ce;
            ce.elem.props = fl.out.props;
            ce.elem.preds = fl.out.preds;
            std::map<QuantItem, QuantItem> closed_of;
            for (auto& q : fl.out.exists) {
                QuantItem cq{q.role, q.functional, Concept::name(name_for(q.body), true)};
                closed_of.emplace(q, cq);
                ce.elem.exists.insert(cq);
            }
            ce.moves.assign(ce.elem.exists.begin(), ce.elem.exists.end());
            auto move_index = [&](const QuantItem& q) {
                return int(std::find(ce.moves.begin(), ce.moves.end(), closed_of.at(q)) - ce.moves.begin());
            };

            ce.just.resize(terms.size());
            for (size_t ti = 0; ti < terms.size(); ++ti) {
                for (int ji : src[ti]) {
                    const TElem& j = *telems[ti][ji];
                    Justification edges;
                    for (auto& [key, lfp] : j.lfp) {
                        auto it = fl.into.find(key);
                        if (it == fl.into.end()) continue;
                        for (auto& target : it->second) {
                            int m = move_index(target);
                            const std::string& q2 = ce.moves[m].body.id();
                            const auto& t2 = terms_of(q2);
                            for (auto& x : conjuncts(key.second.body)) {
                                if (x.kind() == CKind::Top) continue;
                                if (target.body.is_defined()) {
                                    bool l = lfp || ct_.tbox.is_eventuality(q2);
                                    for (size_t k = 0; k < t2.size(); ++k) edges.push_back({m, int(k), l});
                                    continue;
                                }
                                auto pos = std::find(t2.begin(), t2.end(), x);
                                if (pos == t2.end()) throw std::logic_error("trace target missing in " + q2);
                                edges.push_back({m, int(pos - t2.begin()), lfp});
                            }
                        }
                    }
                    std::sort(edges.begin(), edges.end());
                    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
                    ce.just[ti].push_back(std::move(edges));
                }
                if (ce.just[ti].empty()) throw std::logic_error("no justification for a term of " + b);
            }

            auto [it, fresh] = out.emplace(ce.elem, ce);
            if (!fresh)
                for (size_t ti = 0; ti < terms.size(); ++ti)
                    it->second.just[ti].insert(it->second.just[ti].end(), ce.just[ti].begin(), ce.just[ti].end());
        }
        auto& dst = ct_.dnf[b];
        for (auto& [_, ce] : out) {
            for (auto& js : ce.just) minimize(js);
            dst.push_back(ce);
        }
    }

    // Fresh names and the initial name inherit the eventuality mark when
    // their definition holds a self-using name in least-fixpoint polarity
    // outside any quantifier.
    void propagate_eventualities() {
        auto u = uses(base_());
        std::map<std::pair<std::string, bool>, bool> memo;
        std::function<bool(const Concept&, bool)> occurs = [&](const Concept& c, bool neg) -> bool {
            switch (c.kind()) {
                case CKind::Not: return occurs(c.arg(), !neg);
                case CKind::And:
                case CKind::Or:
                    for (auto& a : c.args())
                        if (occurs(a, neg)) return true;
                    return false;
                case CKind::Name: {
                    if (!c.is_defined()) return false;
                    if (u[c.id()].count(c.id())) return ct_.tbox.is_eventuality(c.id()) != neg;
                    auto key = std::make_pair(c.id(), neg);
                    if (auto it = memo.find(key); it != memo.end()) return it->second;
                    return memo[key] = occurs(ct_.tbox.definition(c.id()), neg);
                }
                default: return false;
            }
        };
        std::vector<std::string> targets(ct_.fresh.begin(), ct_.fresh.end());
        targets.push_back(ct_.init);
        for (auto& n : targets)
            if (occurs(ct_.tbox.definition(n), false)) ct_.tbox.eventualities.insert(n);
    }

    TBox base_() const {
        TBox t = ct_.tbox;
        for (auto& f : ct_.fresh) t.axioms.erase(f);
        t.axioms.erase(ct_.init);
        return t;
    }

    ClosedTBox ct_;
    Dnf1 dnf1_;
    std::vector<std::string> queue_;
    std::map<Concept, TDnf> tcache_;
    int counter_ = 0;
};

}  // namespace

std::strong_ordering operator<=>(const QuantItem& a, const QuantItem& b) {
    if (auto c = a.role <=> b.role; c != 0) return c;
    if (auto c = a.functional <=> b.functional; c != 0) return c;
    return compare(a.body, b.body);
}

std::strong_ordering operator<=>(const DnfElement& a, const DnfElement& b) {
    if (auto c = cmp_sets(a.props, b.props); c != 0) return c;
    if (auto c = cmp_sets(a.preds, b.preds); c != 0) return c;
    if (auto c = cmp_sets(a.exists, b.exists); c != 0) return c;
    return cmp_sets(a.foralls, b.foralls);
}

bool DnfElement::clashes() const {
    for (auto& p : props)
        if (p.kind() == CKind::Not && props.count(p.arg())) return true;
    return false;
}

bool DnfElement::subset_of(const DnfElement& o) const {
    return std::includes(o.props.begin(), o.props.end(), props.begin(), props.end()) &&
           std::includes(o.preds.begin(), o.preds.end(), preds.begin(), preds.end()) &&
           std::includes(o.exists.begin(), o.exists.end(), exists.begin(), exists.end()) &&
           std::includes(o.foralls.begin(), o.foralls.end(), foralls.begin(), foralls.end());
}

std::string DnfElement::str() const {
    std::vector<std::string> parts;
    for (auto& p : props) parts.push_back(p.str());
    for (auto& p : preds) parts.push_back(p.str());
    for (auto& q : exists) parts.push_back(q.as_exists().str());
    for (auto& q : foralls) parts.push_back(q.as_forall().str());
    std::string s = "{";
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return s + "}";
}

Dnf product(const Dnf& a, const Dnf& b) {
    Dnf out;
    for (auto& x : a)
        for (auto& y : b) {
            DnfElement z = x;
            z.props.insert(y.props.begin(), y.props.end());
            if (z.clashes()) continue;
            z.preds.insert(y.preds.begin(), y.preds.end());
            z.exists.insert(y.exists.begin(), y.exists.end());
            z.foralls.insert(y.foralls.begin(), y.foralls.end());
            out.insert(std::move(z));
        }
    return out;
}

Dnf dnf1(const Concept& c, const TBox& t) { return strip(Dnf1(t).run(c, false)); }

DnfElement sf_transform(const DnfElement& s) { return sf_flow(s).out; }

Dnf dnf2(const Concept& c, const TBox& t) {
    Dnf out;
    for (auto& s : dnf1(c, t)) out.insert(sf_transform(s));
    return out;
}

ClosedTBox close_tbox(const TBox& t, const Concept& c) { return Closer(t, c).run(); }

std::map<std::string, std::set<std::string>> ClosedTBox::direct_uses() const {
    std::map<std::string, std::set<std::string>> g;
    for (auto& [b, def] : tbox.axioms) {
        auto& s = g[b];
        std::vector<std::string> names;
        collect_defined(def, names);
        s.insert(names.begin(), names.end());
        if (auto it = dnf.find(b); it != dnf.end())
            for (auto& ce : it->second)
                for (auto& q : ce.elem.exists) s.insert(q.body.id());
    }
    return g;
}

std::string ClosedTBox::str() const {
    std::string s = tbox.str();
    s += "; initial " + init + "\n";
    for (auto& b : order) {
        s += "; " + b + " =";
        auto& es = dnf.at(b);
        if (es.empty()) s += " (none)";
        for (size_t i = 0; i < es.size(); ++i) s += (i ? " | " : " ") + es[i].elem.str();
        s += "\n";
    }
    return s;
}

ClosureMetrics closure_metrics(const ClosedTBox& ct) {
    ClosureMetrics m;
    for (auto& [b, es] : ct.dnf) {
        m.dConcepts.insert(b);
        for (auto& ce : es) {
            for (auto& p : ce.elem.props) m.pConcepts.insert(p.kind() == CKind::Not ? p.arg().id() : p.id());
            for (auto& p : ce.elem.preds)
                for (auto& ch : p.chains()) m.cFeatures.insert(ch.tip);
            for (auto& q : ce.elem.exists) {
                Concept e = q.as_exists();
                m.eConcepts.insert(e);
                if (q.functional) {
                    m.feConcepts.insert(e);
                    m.aFeatures.insert(q.role);
                } else {
                    m.reConcepts.insert(e);
                }
            }
        }
    }
    m.ncf = m.cFeatures.size();
    m.naf = m.fbf = m.aFeatures.size();
    m.rbf = m.reConcepts.size();
    m.bf = m.fbf + m.rbf;
    for (auto& r : m.reConcepts) m.bt.push_back(r.str());
    for (auto& f : m.aFeatures) m.bt.push_back(f);
    return m;
}

std::string ClosureMetrics::str() const {
    auto join = [](const auto& xs) {
        std::string s;
        for (auto& x : xs) {
            if (!s.empty()) s += " ";
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Concept>)
                s += x.str();
            else
                s += x;
        }
        return s;
    };
    std::string s;
    s += "cFeatures: " + join(cFeatures) + "\n";
    s += "ncf: " + std::to_string(ncf) + "\n";
    s += "aFeatures: " + join(aFeatures) + "\n";
    s += "naf: " + std::to_string(naf) + "\n";
    s += "pConcepts: " + join(pConcepts) + "\n";
    s += "dConcepts: " + join(dConcepts) + "\n";
    s += "eConcepts: " + join(eConcepts) + "\n";
    s += "feConcepts: " + join(feConcepts) + "\n";
    s += "reConcepts: " + join(reConcepts) + "\n";
    s += "fbf: " + std::to_string(fbf) + "\n";
    s += "rbf: " + std::to_string(rbf) + "\n";
    s += "bf: " + std::to_string(bf) + "\n";
    s += "bt: " + join(bt) + "\n";
    return s;
}

}  // namespace stdl
