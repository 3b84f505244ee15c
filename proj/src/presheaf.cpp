#include "finitopos/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace finitopos {

int Presheaf::total_size() const {
    int n = 0;
    for (const auto& s : at) n += s.size();
    return n;
}

bool same_base(const Presheaf& a, const Presheaf& b) {
    return a.base == b.base || (a.base && b.base && *a.base == *b.base);
}

std::vector<Violation> validate_presheaf(const Presheaf& p) {
    std::vector<Violation> vs;
    if (!p.base) {
        vs.push_back({ViolationKind::Malformed, "presheaf without base", {}});
        return vs;
    }
    const auto& c = *p.base;
    if (static_cast<int>(p.at.size()) != c.num_objects() || static_cast<int>(p.act.size()) != c.num_morphisms()) {
        vs.push_back({ViolationKind::Malformed, "presheaf tables do not cover the base", {}});
        return vs;
    }
    for (int o = 0; o < c.num_objects(); ++o)
        if (p.at[o].has_duplicates())
            vs.push_back({ViolationKind::Malformed, "carrier at " + c.object_name(o) + " has duplicate elements",
                          {c.object_name(o)}});
    for (int m = 0; m < c.num_morphisms(); ++m) {
        const auto& f = p.act[m];
        if (f.dom_size() != p.size(c.cod(m)) || f.cod_size != p.size(c.dom(m)) || !f.valid())
            vs.push_back({ViolationKind::Malformed, "action of " + c.morphism_name(m) + " is ill-typed", {c.morphism_name(m)}});
    }
    if (!vs.empty()) return vs;
    for (int o = 0; o < c.num_objects(); ++o)
        if (!(p.act[c.identity(o)] == FinFn::identity(p.size(o))))
            vs.push_back({ViolationKind::BrokenFunctoriality, "identity of " + c.object_name(o) + " does not act trivially",
                          {c.object_name(o)}});
    for (int g = 0; g < c.num_morphisms(); ++g)
        for (int f = 0; f < c.num_morphisms(); ++f) {
            int h = c.compose(g, f);
            if (h >= 0 && !(p.act[h] == compose(p.act[f], p.act[g])))
                vs.push_back({ViolationKind::BrokenFunctoriality,
                              "action of " + c.morphism_name(g) + "." + c.morphism_name(f) + " is not the composite action",
                              {c.morphism_name(g), c.morphism_name(f)}});
        }
    return vs;
}

void require_valid(const Presheaf& p, const char* what) {
    auto vs = validate_presheaf(p);
    if (!vs.empty()) throw InvalidData(std::string(what) + " is not a presheaf: " + vs.front().message);
}

bool is_natural(const Components& t, const Presheaf& source, const Presheaf& target) {
    const auto& c = *source.base;
    if (static_cast<int>(t.size()) != c.num_objects()) return false;
    for (int o = 0; o < c.num_objects(); ++o)
        if (t[o].dom_size() != source.size(o) || t[o].cod_size != target.size(o) || !t[o].valid()) return false;
    for (int m = 0; m < c.num_morphisms(); ++m) {
        int a = c.dom(m), b = c.cod(m);
        for (int x = 0; x < source.size(b); ++x)
            if (t[a](source.act[m](x)) != target.act[m](t[b](x))) return false;
    }
    return true;
}

void complete_actions(Presheaf& p, std::vector<char> known) {
    const auto& c = *p.base;
    p.act.resize(c.num_morphisms());
    known.resize(c.num_morphisms(), 0);
    for (int o = 0; o < c.num_objects(); ++o)
        if (!known[c.identity(o)]) {
            p.act[c.identity(o)] = FinFn::identity(p.size(o));
            known[c.identity(o)] = 1;
        }
    bool progress = true;
    while (progress) {
        progress = false;
        for (int g = 0; g < c.num_morphisms(); ++g) {
            if (!known[g]) continue;
            for (int f = 0; f < c.num_morphisms(); ++f) {
                if (!known[f]) continue;
                int h = c.compose(g, f);
                if (h < 0 || known[h]) continue;
                p.act[h] = compose(p.act[f], p.act[g]);
                known[h] = 1;
                progress = true;
            }
        }
    }
    for (int m = 0; m < c.num_morphisms(); ++m)
        if (!known[m]) throw InvalidData("no action given or derivable for " + c.morphism_name(m));
}

Presheaf terminal_presheaf(CategoryPtr base) {
    Presheaf p{base, {}, {}};
    p.at.assign(base->num_objects(), FinSet{{"*"}});
    p.act.assign(base->num_morphisms(), FinFn::identity(1));
    return p;
}

Presheaf empty_presheaf(CategoryPtr base) {
    Presheaf p{base, {}, {}};
    p.at.assign(base->num_objects(), FinSet{});
    p.act.assign(base->num_morphisms(), FinFn::identity(0));
    return p;
}

Presheaf yoneda(CategoryPtr base, int c) {
    const auto& k = *base;
    Presheaf p{base, {}, {}};
    std::vector<int> pos(k.num_morphisms(), -1);
    for (int d = 0; d < k.num_objects(); ++d) {
        FinSet s;
        const auto& h = k.hom(d, c);
        for (std::size_t i = 0; i < h.size(); ++i) {
            s.elements.push_back(k.morphism_name(h[i]));
            pos[h[i]] = static_cast<int>(i);
        }
        p.at.push_back(std::move(s));
    }
    for (int f = 0; f < k.num_morphisms(); ++f) {
        FinFn fn;
        fn.cod_size = p.size(k.dom(f));
        for (int h : k.hom(k.cod(f), c)) fn.map.push_back(pos[k.compose(h, f)]);
        p.act.push_back(std::move(fn));
    }
    return p;
}

Components identity_map(const Presheaf& p) {
    Components t;
    for (const auto& s : p.at) t.push_back(FinFn::identity(s.size()));
    return t;
}

Components compose(const Components& g, const Components& f) {
    if (g.size() != f.size()) throw ShapeMismatch("maps over different bases");
    Components h;
    for (std::size_t i = 0; i < f.size(); ++i) h.push_back(compose(g[i], f[i]));
    return h;
}

bool is_isomorphism(const Components& t) {
    return std::all_of(t.begin(), t.end(), [](const FinFn& f) { return f.dom_size() == f.cod_size && f.injective(); });
}

ProductResult product(const Presheaf& x, const Presheaf& y) {
    if (!same_base(x, y)) throw ShapeMismatch("product of presheaves on different bases");
    const auto& c = *x.base;
    ProductResult r;
    r.object.base = x.base;
    for (int o = 0; o < c.num_objects(); ++o) {
        FinSet s;
        FinFn p1, p2;
        p1.cod_size = x.size(o);
        p2.cod_size = y.size(o);
        std::vector<int> idx;
        for (int i = 0; i < x.size(o); ++i)
            for (int j = 0; j < y.size(o); ++j) {
                idx.push_back(s.size());
                s.elements.push_back(tuple_name({x.at[o].elements[i], y.at[o].elements[j]}));
                p1.map.push_back(i);
                p2.map.push_back(j);
            }
        r.object.at.push_back(std::move(s));
        r.first.push_back(std::move(p1));
        r.second.push_back(std::move(p2));
        r.index.push_back(std::move(idx));
    }
    for (int m = 0; m < c.num_morphisms(); ++m) {
        int a = c.dom(m), b = c.cod(m);
        FinFn fn;
        fn.cod_size = r.object.size(a);
        for (int e = 0; e < r.object.size(b); ++e)
            fn.map.push_back(r.index[a][x.act[m](r.first[b](e)) * y.size(a) + y.act[m](r.second[b](e))]);
        r.object.act.push_back(std::move(fn));
    }
    return r;
}

ProductResult pullback(const Presheaf& x, const Presheaf& y, const Components& f, const Components& g) {
    if (!same_base(x, y)) throw ShapeMismatch("pullback of presheaves on different bases");
    const auto& c = *x.base;
    ProductResult r;
    r.object.base = x.base;
    for (int o = 0; o < c.num_objects(); ++o) {
        FinSet s;
        FinFn p1, p2;
        p1.cod_size = x.size(o);
        p2.cod_size = y.size(o);
        std::vector<int> idx(static_cast<std::size_t>(x.size(o)) * y.size(o), -1);
        for (int i = 0; i < x.size(o); ++i)
            for (int j = 0; j < y.size(o); ++j) {
                if (f[o](i) != g[o](j)) continue;
                idx[static_cast<std::size_t>(i) * y.size(o) + j] = s.size();
                s.elements.push_back(tuple_name({x.at[o].elements[i], y.at[o].elements[j]}));
                p1.map.push_back(i);
                p2.map.push_back(j);
            }
        r.object.at.push_back(std::move(s));
        r.first.push_back(std::move(p1));
        r.second.push_back(std::move(p2));
        r.index.push_back(std::move(idx));
    }
    for (int m = 0; m < c.num_morphisms(); ++m) {
        int a = c.dom(m), b = c.cod(m);
        FinFn fn;
        fn.cod_size = r.object.size(a);
        for (int e = 0; e < r.object.size(b); ++e)
            fn.map.push_back(r.index[a][x.act[m](r.first[b](e)) * y.size(a) + y.act[m](r.second[b](e))]);
        r.object.act.push_back(std::move(fn));
    }
    return r;
}

Components pair_maps(const Presheaf& w, const ProductResult& prod, const Presheaf& x, const Presheaf& y,
                     const Components& f, const Components& g) {
    (void)x;
    Components t;
    for (int o = 0; o < static_cast<int>(w.at.size()); ++o) {
        FinFn fn;
        fn.cod_size = prod.object.size(o);
        for (int e = 0; e < w.size(o); ++e) {
            int k = prod.index[o][static_cast<std::size_t>(f[o](e)) * y.size(o) + g[o](e)];
            if (k < 0) throw InvalidData("paired maps do not land in the pullback");
            fn.map.push_back(k);
        }
        t.push_back(std::move(fn));
    }
    return t;
}

// --- natural transformations ----------------------------------------------------

namespace {

class NatSearch {
public:
    NatSearch(const Presheaf& x, const Presheaf& y, Budget& budget, bool bijective, const Components* over_p,
              const Components* over_q)
        : x_(x), y_(y), c_(*x.base), budget_(budget), bijective_(bijective), over_p_(over_p), over_q_(over_q) {
        const int n = c_.num_objects();
        val_.resize(n);
        owner_.resize(n);
        incoming_.resize(n);
        for (int o = 0; o < n; ++o) {
            val_[o].assign(x.size(o), -1);
            owner_[o].assign(y.size(o), -1);
        }
        std::vector<int> weight(n, 0);
        for (int m = 0; m < c_.num_morphisms(); ++m) {
            weight[c_.cod(m)]++;
            if (!c_.is_identity(m)) incoming_[c_.cod(m)].push_back(m);
        }
        std::vector<int> objs(n);
        std::iota(objs.begin(), objs.end(), 0);
        std::stable_sort(objs.begin(), objs.end(), [&](int a, int b) { return weight[a] > weight[b]; });
        for (int o : objs)
            for (int e = 0; e < x.size(o); ++e) vars_.emplace_back(o, e);
    }

    bool feasible() const {
        for (int o = 0; o < c_.num_objects(); ++o) {
            if (x_.size(o) > 0 && y_.size(o) == 0) return false;
            if (bijective_ && x_.size(o) != y_.size(o)) return false;
        }
        return true;
    }

    /// Calls `emit` for every solution; stops when it returns false.
    void run(const std::function<bool(const std::vector<std::vector<int>>&)>& emit) {
        if (!feasible()) return;
        emit_ = &emit;
        stop_ = false;
        recurse(0);
    }

private:
    bool allowed(int o, int e, int v) const {
        if (over_p_ && (*over_q_)[o](v) != (*over_p_)[o](e)) return false;
        return true;
    }

    bool assign(int o, int e, int v) {
        std::vector<std::tuple<int, int, int>> queue{{o, e, v}};
        while (!queue.empty()) {
            auto [a, x, y] = queue.back();
            queue.pop_back();
            if (val_[a][x] == y) continue;
            if (val_[a][x] != -1) return false;
            if (bijective_ && owner_[a][y] != -1) return false;
            if (!allowed(a, x, y)) return false;
            val_[a][x] = y;
            if (bijective_) owner_[a][y] = x;
            trail_.emplace_back(a, x);
            for (int m : incoming_[a]) queue.emplace_back(c_.dom(m), x_.act[m](x), y_.act[m](y));
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [a, x] = trail_.back();
            trail_.pop_back();
            if (bijective_) owner_[a][val_[a][x]] = -1;
            val_[a][x] = -1;
        }
    }

    void recurse(std::size_t i) {
        if (stop_) return;
        budget_.charge();
        while (i < vars_.size() && val_[vars_[i].first][vars_[i].second] != -1) ++i;
        if (i == vars_.size()) {
            if (!(*emit_)(val_)) stop_ = true;
            return;
        }
        auto [o, e] = vars_[i];
        for (int v = 0; v < y_.size(o) && !stop_; ++v) {
            std::size_t mark = trail_.size();
            if (assign(o, e, v)) recurse(i + 1);
            undo(mark);
        }
    }

    const Presheaf& x_;
    const Presheaf& y_;
    const FinCategory& c_;
    Budget& budget_;
    bool bijective_;
    const Components* over_p_;
    const Components* over_q_;
    std::vector<std::vector<int>> val_, owner_;
    std::vector<std::vector<int>> incoming_;
    std::vector<std::pair<int, int>> vars_;
    std::vector<std::pair<int, int>> trail_;
    const std::function<bool(const std::vector<std::vector<int>>&)>* emit_ = nullptr;
    bool stop_ = false;
};

Components to_components(const std::vector<std::vector<int>>& val, const Presheaf& y) {
    Components t;
    for (std::size_t o = 0; o < val.size(); ++o) t.push_back(FinFn{val[o], y.size(static_cast<int>(o))});
    return t;
}

bool components_less(const Components& a, const Components& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].map != b[i].map) return a[i].map < b[i].map;
    }
    return false;
}

void require_same_base(const Presheaf& x, const Presheaf& y) {
    if (!same_base(x, y)) throw ShapeMismatch("presheaves live on different bases");
}

}  // namespace

std::vector<Components> nat_components(const Presheaf& x, const Presheaf& y, Budget& budget, bool bijective_only) {
    require_same_base(x, y);
    std::vector<Components> out;
    NatSearch s(x, y, budget, bijective_only, nullptr, nullptr);
    s.run([&](const auto& val) {
        out.push_back(to_components(val, y));
        return true;
    });
    std::sort(out.begin(), out.end(), components_less);
    return out;
}

std::vector<Components> nat_components(const Presheaf& x, const Presheaf& y) {
    Budget b;
    return nat_components(x, y, b);
}

std::vector<PresheafMap> nat_transformations(const Presheaf& x, const Presheaf& y) {
    auto px = std::make_shared<const Presheaf>(x);
    auto py = std::make_shared<const Presheaf>(y);
    std::vector<PresheafMap> out;
    for (auto& t : nat_components(x, y)) out.push_back({px, py, std::move(t)});
    return out;
}

std::size_t count_nat(const Presheaf& x, const Presheaf& y, Budget& budget) {
    require_same_base(x, y);
    std::size_t n = 0;
    NatSearch s(x, y, budget, false, nullptr, nullptr);
    s.run([&](const auto&) {
        ++n;
        return true;
    });
    return n;
}

std::optional<Components> find_isomorphism(const Presheaf& x, const Presheaf& y) {
    require_same_base(x, y);
    Budget budget;
    std::optional<Components> out;
    NatSearch s(x, y, budget, true, nullptr, nullptr);
    s.run([&](const auto& val) {
        out = to_components(val, y);
        return false;
    });
    return out;
}

std::optional<Components> find_isomorphism_over(const Presheaf& x, const Presheaf& y, const Components& p,
                                                const Components& q) {
    require_same_base(x, y);
    Budget budget;
    std::optional<Components> out;
    NatSearch s(x, y, budget, true, &p, &q);
    s.run([&](const auto& val) {
        out = to_components(val, y);
        return false;
    });
    return out;
}

std::vector<Components> nat_over(const Presheaf& w, const Presheaf& v, const Components& p, const Components& q,
                                 Budget& budget) {
    require_same_base(w, v);
    std::vector<Components> out;
    NatSearch s(w, v, budget, false, &p, &q);
    s.run([&](const auto& val) {
        out.push_back(to_components(val, v));
        return true;
    });
    std::sort(out.begin(), out.end(), components_less);
    return out;
}

// --- exponentials ----------------------------------------------------------------

namespace {

std::vector<int> flatten(const Components& t) {
    std::vector<int> out;
    for (const auto& f : t) {
        out.push_back(-1);
        out.insert(out.end(), f.map.begin(), f.map.end());
    }
    return out;
}

/// Position of each morphism inside its hom-set list.
std::vector<int> hom_positions(const FinCategory& c) {
    std::vector<int> pos(c.num_morphisms(), -1);
    for (int a = 0; a < c.num_objects(); ++a)
        for (int b = 0; b < c.num_objects(); ++b) {
            const auto& h = c.hom(a, b);
            for (std::size_t i = 0; i < h.size(); ++i) pos[h[i]] = static_cast<int>(i);
        }
    return pos;
}

std::string family_name(const Components& t, const Presheaf& y) {
    std::string s = "{";
    for (std::size_t o = 0; o < t.size(); ++o) {
        if (o) s += ";";
        for (std::size_t i = 0; i < t[o].map.size(); ++i) {
            if (i) s += ",";
            s += y.at[o].elements[t[o].map[i]];
        }
    }
    return s + "}";
}

}  // namespace

ExponentialResult exponential(const Presheaf& x, const Presheaf& y) {
    Budget b;
    return exponential(x, y, b);
}

ExponentialResult exponential(const Presheaf& x, const Presheaf& y, Budget& budget) {
    require_same_base(x, y);
    const auto& c = *x.base;
    const int n = c.num_objects();
    const auto pos = hom_positions(c);
    ExponentialResult r;
    r.object.base = x.base;
    std::vector<std::map<std::vector<int>, int>> lookup(n);
    for (int o = 0; o < n; ++o) {
        auto prod = product(yoneda(x.base, o), x);
        r.families.push_back(nat_components(prod.object, y, budget));
        FinSet s;
        for (std::size_t i = 0; i < r.families[o].size(); ++i) {
            lookup[o].emplace(flatten(r.families[o][i]), static_cast<int>(i));
            s.elements.push_back(family_name(r.families[o][i], y));
        }
        r.object.at.push_back(std::move(s));
    }
    // f : a -> b acts (Y^X)(b) -> (Y^X)(a) by t ↦ t∘(y_f × id)
    for (int f = 0; f < c.num_morphisms(); ++f) {
        int a = c.dom(f), b = c.cod(f);
        FinFn fn;
        fn.cod_size = r.object.size(a);
        for (const auto& t : r.families[b]) {
            Components s(n);
            for (int e = 0; e < n; ++e) {
                s[e].cod_size = y.size(e);
                for (int h : c.hom(e, a))
                    for (int xe = 0; xe < x.size(e); ++xe)
                        s[e].map.push_back(t[e](pos[c.compose(f, h)] * x.size(e) + xe));
            }
            fn.map.push_back(lookup[a].at(flatten(s)));
        }
        r.object.act.push_back(std::move(fn));
    }
    auto ev = product(r.object, x);
    r.eval_domain = ev.object;
    for (int o = 0; o < n; ++o) {
        FinFn fn;
        fn.cod_size = y.size(o);
        for (int e = 0; e < ev.object.size(o); ++e) {
            int t = ev.first[o](e), xe = ev.second[o](e);
            fn.map.push_back(r.families[o][t][o](pos[c.identity(o)] * x.size(o) + xe));
        }
        r.eval.push_back(std::move(fn));
    }
    return r;
}

Components curry(const Presheaf& w, const Presheaf& x, const ExponentialResult& e, const Components& t) {
    const auto& c = *x.base;
    const int n = c.num_objects();
    const auto pos = hom_positions(c);
    Components s(n);
    for (int o = 0; o < n; ++o) {
        s[o].cod_size = e.object.size(o);
        for (int we = 0; we < w.size(o); ++we) {
            Components fam(n);
            for (int d = 0; d < n; ++d) {
                fam[d].cod_size = t[d].cod_size;
                for (int h : c.hom(d, o))
                    for (int xe = 0; xe < x.size(d); ++xe) fam[d].map.push_back(t[d](w.act[h](we) * x.size(d) + xe));
            }
            (void)pos;
            auto it = std::find_if(e.families[o].begin(), e.families[o].end(),
                                   [&](const Components& f) { return flatten(f) == flatten(fam); });
            if (it == e.families[o].end()) throw InvalidData("curried family is not natural");
            s[o].map.push_back(static_cast<int>(it - e.families[o].begin()));
        }
    }
    return s;
}

Components uncurry(const Presheaf& w, const Presheaf& x, const ExponentialResult& e, const Components& s) {
    const auto& c = *x.base;
    const auto pos = hom_positions(c);
    Components t;
    for (int o = 0; o < c.num_objects(); ++o) {
        FinFn fn;
        fn.cod_size = e.eval.empty() ? 0 : e.eval[o].cod_size;
        for (int we = 0; we < w.size(o); ++we)
            for (int xe = 0; xe < x.size(o); ++xe)
                fn.map.push_back(e.families[o][s[o](we)][o](pos[c.identity(o)] * x.size(o) + xe));
        t.push_back(std::move(fn));
    }
    return t;
}

// --- sieves ------------------------------------------------------------------------

bool is_sieve(const Sieve& s) {
    const auto& c = *s.base;
    std::set<int> mem(s.members.begin(), s.members.end());
    for (int u : s.members) {
        if (c.cod(u) != s.on) return false;
        for (int v = 0; v < c.num_morphisms(); ++v)
            if (c.cod(v) == c.dom(u) && !mem.count(c.compose(u, v))) return false;
    }
    return true;
}

std::vector<Sieve> sieves_on(CategoryPtr base, int c) {
    const auto& k = *base;
    std::vector<int> into;
    for (int m = 0; m < k.num_morphisms(); ++m)
        if (k.cod(m) == c) into.push_back(m);
    if (into.size() > 24) throw BudgetExceeded("sieve enumeration", 24);
    std::vector<Sieve> out;
    for (std::uint32_t mask = 0; mask < (1u << into.size()); ++mask) {
        Sieve s{base, c, {}};
        for (std::size_t i = 0; i < into.size(); ++i)
            if (mask & (1u << i)) s.members.push_back(into[i]);
        if (is_sieve(s)) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const Sieve& a, const Sieve& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.members < b.members;
    });
    return out;
}

// --- category of elements ------------------------------------------------------------

Elements category_of_elements(const Presheaf& p) {
    const auto& c = *p.base;
    Elements el;
    std::vector<std::string> names;
    std::vector<std::vector<int>> idx(c.num_objects());
    std::vector<std::pair<int, int>> objs;
    for (int o = 0; o < c.num_objects(); ++o)
        for (int x = 0; x < p.size(o); ++x) {
            idx[o].push_back(static_cast<int>(names.size()));
            names.push_back("(" + c.object_name(o) + "," + p.at[o].elements[x] + ")");
            objs.emplace_back(o, x);
        }
    std::vector<MorphismInfo> mors;
    std::vector<std::pair<int, int>> mor_of;
    std::vector<std::vector<int>> lookup(c.num_morphisms());
    std::vector<int> ids(names.size(), -1);
    for (int f = 0; f < c.num_morphisms(); ++f) {
        int a = c.dom(f), b = c.cod(f);
        for (int y = 0; y < p.size(b); ++y) {
            int src = idx[a][p.act[f](y)];
            int tgt = idx[b][y];
            lookup[f].push_back(static_cast<int>(mors.size()));
            if (c.is_identity(f)) ids[tgt] = static_cast<int>(mors.size());
            mors.push_back({"(" + c.morphism_name(f) + "," + p.at[b].elements[y] + ")", src, tgt});
            mor_of.emplace_back(f, y);
        }
    }
    const int m = static_cast<int>(mors.size());
    std::vector<int> table(static_cast<std::size_t>(m) * m, -1);
    for (int g = 0; g < m; ++g)
        for (int f = 0; f < m; ++f) {
            if (mors[f].cod != mors[g].dom) continue;
            // (f, y) then (g, z) with y = P(g) z composes to (g∘f, z)
            int gf = c.compose(mor_of[g].first, mor_of[f].first);
            table[static_cast<std::size_t>(g) * m + f] = lookup[gf][mor_of[g].second];
        }
    auto built = FinCategory::from_tables(names, mors, ids, std::move(table), false);
    if (!built.ok()) throw InvalidData("category of elements failed validation: " + built.violations.front().message);
    el.category = share(std::move(*built.value));
    const auto& e = *el.category;
    el.object_of.resize(names.size());
    el.index.assign(c.num_objects(), {});
    for (int o = 0; o < c.num_objects(); ++o) el.index[o].resize(p.size(o));
    for (std::size_t i = 0; i < names.size(); ++i) {
        int k = e.object_index(names[i]);
        el.object_of[k] = objs[i];
        el.index[objs[i].first][objs[i].second] = k;
    }
    el.morphism_of.resize(mors.size());
    for (std::size_t i = 0; i < mors.size(); ++i) el.morphism_of[e.morphism_index(mors[i].name)] = mor_of[i];
    el.projection = FinFunctor{el.category, p.base, {}, {}};
    for (const auto& [o, x] : el.object_of) el.projection.obj_map.push_back(o);
    for (const auto& [f, y] : el.morphism_of) el.projection.mor_map.push_back(f);
    return el;
}

Presheaf fibers_over(const Elements& el_y, const Presheaf& w, const Components& p) {
    const auto& e = *el_y.category;
    Presheaf q{el_y.category, {}, {}};
    // fiber listing and position of each element of W inside its fiber
    std::vector<std::vector<int>> fiber_pos(w.at.size());
    for (std::size_t o = 0; o < w.at.size(); ++o) fiber_pos[o].assign(w.size(static_cast<int>(o)), -1);
    for (int k = 0; k < e.num_objects(); ++k) {
        auto [o, y] = el_y.object_of[k];
        FinSet s;
        for (int x = 0; x < w.size(o); ++x)
            if (p[o](x) == y) {
                fiber_pos[o][x] = s.size();
                s.elements.push_back(w.at[o].elements[x]);
            }
        q.at.push_back(std::move(s));
    }
    for (int m = 0; m < e.num_morphisms(); ++m) {
        auto [f, y] = el_y.morphism_of[m];
        int a = w.base->dom(f), b = w.base->cod(f);
        FinFn fn;
        fn.cod_size = q.size(e.dom(m));
        for (int x = 0; x < w.size(b); ++x)
            if (p[b](x) == y) fn.map.push_back(fiber_pos[a][w.act[f](x)]);
        q.act.push_back(std::move(fn));
    }
    return q;
}

// --- corpus --------------------------------------------------------------------------

std::vector<int> canonical_encoding(const Presheaf& p, std::size_t max_perms) {
    const auto& c = *p.base;
    const int n = c.num_objects();
    auto encode = [&](const std::vector<std::vector<int>>& perm) {
        std::vector<int> out;
        for (int o = 0; o < n; ++o) out.push_back(p.size(o));
        for (int m = 0; m < c.num_morphisms(); ++m) {
            if (c.is_identity(m)) continue;
            const auto& f = p.act[m];
            std::vector<int> relabeled(f.dom_size());
            for (int y = 0; y < f.dom_size(); ++y) relabeled[perm[c.cod(m)][y]] = perm[c.dom(m)][f(y)];
            out.insert(out.end(), relabeled.begin(), relabeled.end());
        }
        return out;
    };
    std::vector<std::vector<int>> perm(n);
    std::size_t count = 1;
    for (int o = 0; o < n; ++o) {
        perm[o].resize(p.size(o));
        std::iota(perm[o].begin(), perm[o].end(), 0);
        for (int k = 2; k <= p.size(o) && count <= max_perms; ++k) count *= k;
    }
    auto best = encode(perm);
    if (count > max_perms) return best;
    // odometer over per-object permutations
    while (true) {
        int o = 0;
        while (o < n && !std::next_permutation(perm[o].begin(), perm[o].end())) ++o;
        if (o == n) break;
        auto enc = encode(perm);
        if (enc < best) best = std::move(enc);
    }
    return best;
}

std::vector<Presheaf> presheaf_corpus(CategoryPtr base, int carrier_bound, bool with_representables) {
    const auto& c = *base;
    const int n = c.num_objects();
    std::vector<int> order;
    for (int m = 0; m < c.num_morphisms(); ++m)
        if (!c.is_identity(m)) order.push_back(m);
    // composites relevant once each morphism is assigned
    std::vector<std::vector<std::tuple<int, int, int>>> triples(c.num_morphisms());
    for (int g = 0; g < c.num_morphisms(); ++g)
        for (int f = 0; f < c.num_morphisms(); ++f) {
            int h = c.compose(g, f);
            if (h < 0) continue;
            triples[g].emplace_back(g, f, h);
            triples[f].emplace_back(g, f, h);
            triples[h].emplace_back(g, f, h);
        }

    std::map<std::vector<int>, Presheaf> found;
    std::vector<int> sizes(n, 0);
    while (true) {
        Presheaf p{base, {}, {}};
        for (int o = 0; o < n; ++o) p.at.push_back(FinSet::range(sizes[o]));
        p.act.resize(c.num_morphisms());
        std::vector<char> assigned(c.num_morphisms(), 0);
        for (int o = 0; o < n; ++o) {
            p.act[c.identity(o)] = FinFn::identity(sizes[o]);
            assigned[c.identity(o)] = 1;
        }
        auto consistent = [&](int m) {
            for (auto [g, f, h] : triples[m])
                if (assigned[g] && assigned[f] && assigned[h] && !(p.act[h] == compose(p.act[f], p.act[g])))
                    return false;
            return true;
        };
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == order.size()) {
                auto enc = canonical_encoding(p);
                found.emplace(std::move(enc), p);
                return;
            }
            int m = order[i];
            int dom = sizes[c.cod(m)], cod = sizes[c.dom(m)];
            if (dom > 0 && cod == 0) return;
            FinFn fn;
            fn.cod_size = cod;
            fn.map.assign(dom, 0);
            assigned[m] = 1;
            while (true) {
                p.act[m] = fn;
                if (consistent(m)) rec(i + 1);
                int k = 0;
                while (k < dom && ++fn.map[k] == cod) fn.map[k++] = 0;
                if (k == dom) break;
            }
            assigned[m] = 0;
        };
        rec(0);
        int o = 0;
        while (o < n && ++sizes[o] > carrier_bound) sizes[o++] = 0;
        if (o == n) break;
    }
    std::vector<std::pair<std::vector<int>, Presheaf>> items(found.begin(), found.end());
    if (with_representables)
        for (int o = 0; o < n; ++o) {
            auto y = yoneda(base, o);
            auto enc = canonical_encoding(y);
            bool present = std::any_of(items.begin(), items.end(), [&](const auto& it) { return it.first == enc; });
            if (!present) items.emplace_back(std::move(enc), std::move(y));
        }
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        int ta = a.second.total_size(), tb = b.second.total_size();
        if (ta != tb) return ta < tb;
        return a.first < b.first;
    });
    std::vector<Presheaf> out;
    for (auto& it : items) out.push_back(std::move(it.second));
    return out;
}

}  // namespace finitopos
