// Bounded model enumeration, used only as a test oracle.
#include <map>
#include <stdexcept>

#include "stdl/search.hpp"

namespace stdl {

namespace {

constexpr double kMaxCandidates = double(1 << 22);

void collect(const Concept& c, std::set<std::string>& prims, std::set<std::string>& feats,
             std::set<std::string>& roles, std::set<Concept>& preds, std::set<std::string>& names) {
    switch (c.kind()) {
        case CKind::Name:
            (c.is_defined() ? names : prims).insert(c.id());
            return;
        case CKind::Exists:
        case CKind::Forall:
            (c.functional() ? feats : roles).insert(c.id());
            break;
        case CKind::Pred:
            preds.insert(c);
            for (auto& ch : c.chains()) feats.insert(ch.prefix.begin(), ch.prefix.end());
            return;
        default:
            break;
    }
    for (auto& a : c.args()) collect(a, prims, feats, roles, preds, names);
}

// Throws when `self` occurs under an odd number of negations.
void check_polarity(const Concept& c, const std::string& self, bool neg) {
    if (c.kind() == CKind::Name && c.id() == self && neg)
        throw std::invalid_argument("defined name " + self + " occurs negatively in its own definition");
    bool flip = c.kind() == CKind::Not;
    for (auto& a : c.args()) check_polarity(a, self, neg != flip);
}

class Brute {
public:
    Brute(const TBox& t, int n, std::vector<std::string> feats, std::vector<std::string> roles,
          std::vector<std::string> prims, std::vector<Concept> preds)
        : t_(t), n_(n), all_(uint8_t((1u << n) - 1)), feats_(std::move(feats)), roles_(std::move(roles)),
          prims_(std::move(prims)), preds_(std::move(preds)), uses_(uses(t)) {
        for (size_t i = 0; i < preds_.size(); ++i) pidx_[preds_[i]] = int(i);
    }

    // Mixed-radix digits: features, roles, primitives, predicate bits.
    std::vector<int> radices() const {
        std::vector<int> r;
        for (size_t i = 0; i < feats_.size() * n_; ++i) r.push_back(n_ + 1);
        for (size_t i = 0; i < roles_.size() * n_; ++i) r.push_back(1 << n_);
        for (size_t i = 0; i < prims_.size(); ++i) r.push_back(1 << n_);
        for (size_t i = 0; i < preds_.size(); ++i) r.push_back(1 << n_);
        return r;
    }

    void load(const std::vector<int>& d) {
        size_t k = 0;
        feat_.assign(feats_.size(), std::vector<int>(n_));
        for (auto& f : feat_)
            for (int e = 0; e < n_; ++e) f[e] = d[k++] - 1;
        role_.assign(roles_.size(), std::vector<uint8_t>(n_));
        for (auto& r : role_)
            for (int e = 0; e < n_; ++e) r[e] = uint8_t(d[k++]);
        prim_.clear();
        for (auto& p : prims_) prim_[p] = uint8_t(d[k++]);
        bits_.assign(preds_.size(), 0);
        for (auto& b : bits_) b = uint8_t(d[k++]);
        memo_.clear();
        iter_.clear();
    }

    // Every element within `depth` steps of element 0.
    bool reachable(int depth) const {
        uint8_t seen = 1, frontier = 1;
        for (int s = 0; s < depth && frontier; ++s) {
            uint8_t next = 0;
            for (int e = 0; e < n_; ++e) {
                if (!(frontier >> e & 1)) continue;
                for (auto& f : feat_)
                    if (f[e] >= 0) next |= uint8_t(1u << f[e]);
                for (auto& r : role_) next |= r[e];
            }
            frontier = next & ~seen;
            seen |= next;
        }
        return seen == all_;
    }

    uint8_t eval(const Concept& c, bool neg) {
        switch (c.kind()) {
            case CKind::Top:
                return neg ? 0 : all_;
            case CKind::Bottom:
                return neg ? all_ : 0;
            case CKind::Name: {
                uint8_t m = c.is_defined() ? name_value(c.id()) : prim_.at(c.id());
                return neg ? uint8_t(~m & all_) : m;
            }
            case CKind::Not:
                return eval(c.arg(), !neg);
            case CKind::And:
            case CKind::Or: {
                bool meet = (c.kind() == CKind::And) != neg;
                uint8_t m = meet ? all_ : 0;
                for (auto& a : c.args()) m = meet ? uint8_t(m & eval(a, neg)) : uint8_t(m | eval(a, neg));
                return m;
            }
            case CKind::Exists:
            case CKind::Forall: {
                bool some = (c.kind() == CKind::Exists) != neg;
                uint8_t body = eval(c.arg(), neg), m = 0;
                for (int e = 0; e < n_; ++e) {
                    uint8_t succ = successors(c.id(), c.functional(), e);
                    bool ok = some ? (succ & body) != 0 : (succ & ~body) == 0;
                    if (ok) m |= uint8_t(1u << e);
                }
                return m;
            }
            case CKind::Pred: {
                int p = pidx_.at(c);
                uint8_t m = 0;
                for (int e = 0; e < n_; ++e) {
                    if (!defined(c, e)) continue;
                    if (bool(bits_[p] >> e & 1) != neg) m |= uint8_t(1u << e);
                }
                return m;
            }
        }
        return 0;
    }

    // Valuation of the concrete features realizing the guessed predicate bits.
    bool csp_ok() const {
        if (preds_.empty()) return true;
        if (!t_.algebra) throw std::invalid_argument("predicates without an algebra");
        Qsp q(*t_.algebra);
        for (size_t p = 0; p < preds_.size(); ++p)
            for (int e = 0; e < n_; ++e) {
                if (!defined(preds_[p], e)) continue;
                std::vector<int> vs;
                for (auto& ch : preds_[p].chains())
                    vs.push_back(q.var(std::to_string(end_of(ch, e)) + "." + ch.tip));
                Relation r = (bits_[p] >> e & 1) ? preds_[p].rel() : preds_[p].rel().complement();
                if (vs.size() == 2)
                    q.constrain(vs[0], vs[1], r);
                else
                    q.constrain(vs[0], vs[1], vs[2], r);
            }
        if (q.trivially_inconsistent()) return false;
        return solve_scenario(q).has_value();
    }

private:
    uint8_t successors(const std::string& id, bool functional, int e) const {
        if (functional) {
            for (size_t i = 0; i < feats_.size(); ++i)
                if (feats_[i] == id) return feat_[i][e] >= 0 ? uint8_t(1u << feat_[i][e]) : 0;
            return 0;
        }
        for (size_t i = 0; i < roles_.size(); ++i)
            if (roles_[i] == id) return role_[i][e];
        return 0;
    }

    int end_of(const FeatureChain& ch, int e) const {
        for (auto& f : ch.prefix) {
            if (e < 0) return -1;
            uint8_t s = successors(f, true, e);
            e = s ? __builtin_ctz(s) : -1;
        }
        return e;
    }

    bool defined(const Concept& p, int e) const {
        for (auto& ch : p.chains())
            if (end_of(ch, e) < 0) return false;
        return true;
    }

    uint8_t name_value(const std::string& b) {
        if (auto it = iter_.find(b); it != iter_.end()) return it->second;
        if (auto it = memo_.find(b); it != memo_.end()) return it->second;
        const Concept& def = t_.definition(b);
        auto u = uses_.find(b);
        bool cyclic = u != uses_.end() && u->second.count(b);
        uint8_t cur;
        if (!cyclic) {
            cur = eval(def, false);
        } else {
            cur = t_.is_eventuality(b) ? 0 : all_;
            for (int guard = 0; guard <= (1 << n_) + 1; ++guard) {
                iter_[b] = cur;
                uint8_t next = eval(def, false);
                if (next == cur) break;
                cur = next;
            }
            iter_.erase(b);
        }
        memo_[b] = cur;
        return cur;
    }

    const TBox& t_;
    int n_;
    uint8_t all_;
    std::vector<std::string> feats_, roles_, prims_;
    std::vector<Concept> preds_;
    std::map<Concept, int> pidx_;
    std::map<std::string, std::set<std::string>> uses_;
    std::vector<std::vector<int>> feat_;
    std::vector<std::vector<uint8_t>> role_;
    std::map<std::string, uint8_t> prim_;
    std::vector<uint8_t> bits_;
    std::map<std::string, uint8_t> memo_, iter_;
};

}  // namespace

BruteResult brute_force_sat(const Concept& c, const TBox& t, int depth_bound, int domain_size) {
    if (domain_size < 1 || domain_size > 4) throw std::invalid_argument("domain size must be in 1..4");
    if (depth_bound < 0 || depth_bound > 4) throw std::invalid_argument("depth bound must be in 0..4");
    std::set<std::string> prims, feats, roles, names, seen;
    std::set<Concept> preds;
    collect(c, prims, feats, roles, preds, names);
    std::vector<std::string> todo(names.begin(), names.end());
    while (!todo.empty()) {
        std::string b = todo.back();
        todo.pop_back();
        if (!seen.insert(b).second) continue;
        if (!t.is_defined(b)) throw std::invalid_argument("undefined name " + b);
        check_polarity(t.definition(b), b, false);
        std::set<std::string> more;
        collect(t.definition(b), prims, feats, roles, preds, more);
        todo.insert(todo.end(), more.begin(), more.end());
    }

    for (int n = 1; n <= domain_size; ++n) {
        Brute br(t, n, {feats.begin(), feats.end()}, {roles.begin(), roles.end()}, {prims.begin(), prims.end()},
                 {preds.begin(), preds.end()});
        std::vector<int> rad = br.radices();
        double total = 1;
        for (int r : rad) total *= r;
        if (total > kMaxCandidates) throw std::invalid_argument("brute force search space too large");
        std::vector<int> d(rad.size(), 0);
        for (;;) {
            br.load(d);
            if (br.reachable(depth_bound) && (br.eval(c, false) & 1) && br.csp_ok()) return BruteResult::Sat;
            size_t i = 0;
            while (i < d.size() && ++d[i] == rad[i]) d[i++] = 0;
            if (i == d.size()) break;
        }
    }
    return BruteResult::NoModelFound;
}

}  // namespace stdl
