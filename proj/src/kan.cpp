#include "finitopos/kan.hpp"

#include <algorithm>
#include <map>

namespace finitopos {

namespace {

void require_base(const FinCategory& expected, const Presheaf& p, const char* what) {
    if (!p.base || !(*p.base == expected)) throw ShapeMismatch(std::string(what) + " lives on the wrong base");
}

int position_in(const std::vector<int>& hom, int m) {
    auto it = std::find(hom.begin(), hom.end(), m);
    return it == hom.end() ? -1 : static_cast<int>(it - hom.begin());
}

}  // namespace

int KanResult::find_family(int a, const std::vector<int>& t) const {
    const auto& fs = families[a];
    auto it = std::lower_bound(fs.begin(), fs.end(), t);
    return it != fs.end() && *it == t ? static_cast<int>(it - fs.begin()) : -1;
}

Presheaf restrict(const FinFunctor& l, const Presheaf& y) {
    require_base(*l.target, y, "restricted presheaf");
    const auto& b = *l.source;
    Presheaf out{l.source, {}, {}};
    for (int o = 0; o < b.num_objects(); ++o) out.at.push_back(y.at[l.obj(o)]);
    for (int m = 0; m < b.num_morphisms(); ++m) out.act.push_back(y.act[l.mor(m)]);
    return out;
}

Components restrict_map(const FinFunctor& l, const Components& t) {
    Components out;
    for (int o = 0; o < l.source->num_objects(); ++o) out.push_back(t[l.obj(o)]);
    return out;
}

KanResult lan(const FinFunctor& l, const Presheaf& x) {
    require_base(*l.source, x, "extended presheaf");
    const auto& A = *l.target;
    KanResult r{l, x, Presheaf{l.target, {}, {}}, {}, {}, {}, {}, {}};
    std::vector<std::map<std::pair<int, int>, int>> comma_index(A.num_objects());
    for (int a = 0; a < A.num_objects(); ++a) {
        auto comma = comma_under(a, l);
        const auto& k = *comma.category;
        auto op = opposite(k);
        SetDiagram d{op, {}, std::vector<FinFn>(op->num_morphisms())};
        for (int o = 0; o < k.num_objects(); ++o) {
            d.on_objects.push_back(x.at[comma.origin[o]]);
            comma_index[a][{comma.origin[o], comma.arrow[o]}] = o;
        }
        for (int m = 0; m < k.num_morphisms(); ++m)
            d.on_morphisms[op->morphism_index(k.morphism_name(m))] = x.act[comma.mor_origin[m]];
        auto col = colimit(d);
        std::vector<std::pair<int, int>> rep(col.set.size(), {-1, -1});
        for (int o = 0; o < k.num_objects(); ++o)
            for (int e = 0; e < x.size(comma.origin[o]); ++e) {
                auto& slot = rep[col.injections[o](e)];
                if (slot.first < 0) slot = {o, e};
            }
        r.output.at.push_back(std::move(col.set));
        r.injections.push_back(std::move(col.injections));
        r.representative.push_back(std::move(rep));
        r.commas.push_back(std::move(comma));
    }
    // g : a' -> a sends [(b, φ), x] to [(b, φ∘g), x]
    for (int g = 0; g < A.num_morphisms(); ++g) {
        int a2 = A.dom(g), a = A.cod(g);
        FinFn fn;
        fn.cod_size = r.output.size(a2);
        for (auto [o, e] : r.representative[a]) {
            int b = r.commas[a].origin[o];
            int phi = A.compose(r.commas[a].arrow[o], g);
            fn.map.push_back(r.injections[a2][comma_index[a2].at({b, phi})](e));
        }
        r.output.act.push_back(std::move(fn));
    }
    return r;
}

KanResult ran(const FinFunctor& l, const Presheaf& x) {
    Budget b;
    return ran(l, x, b);
}

KanResult ran(const FinFunctor& l, const Presheaf& x, Budget& budget) {
    require_base(*l.source, x, "extended presheaf");
    const auto& A = *l.target;
    const auto& B = *l.source;
    KanResult r{l, x, Presheaf{l.target, {}, {}}, {}, {}, {}, {}, {}};
    for (int a = 0; a < A.num_objects(); ++a) {
        auto el = category_of_elements(restrict(l, yoneda(l.target, a)));
        const auto& e = *el.category;
        auto op = opposite(e);
        SetDiagram d{op, {}, std::vector<FinFn>(op->num_morphisms())};
        for (int o = 0; o < e.num_objects(); ++o) d.on_objects.push_back(x.at[el.object_of[o].first]);
        for (int m = 0; m < e.num_morphisms(); ++m)
            d.on_morphisms[op->morphism_index(e.morphism_name(m))] = x.act[el.morphism_of[m].first];
        auto lim = limit(d, budget);
        r.output.at.push_back(std::move(lim.set));
        r.families.push_back(std::move(lim.tuples));
        r.elements.push_back(std::move(el));
    }
    // g : a' -> a sends a family t to (b, ψ') ↦ t(b, g∘ψ')
    for (int g = 0; g < A.num_morphisms(); ++g) {
        int a2 = A.dom(g), a = A.cod(g);
        const auto& el2 = r.elements[a2];
        std::vector<int> source_of(el2.category->num_objects());
        for (int j = 0; j < el2.category->num_objects(); ++j) {
            auto [b, pos] = el2.object_of[j];
            int psi = A.hom(l.obj(b), a2)[pos];
            source_of[j] = r.elements[a].index[b][position_in(A.hom(l.obj(b), a), A.compose(g, psi))];
        }
        FinFn fn;
        fn.cod_size = r.output.size(a2);
        for (const auto& t : r.families[a]) {
            std::vector<int> t2(source_of.size());
            for (std::size_t j = 0; j < source_of.size(); ++j) t2[j] = t[source_of[j]];
            fn.map.push_back(r.find_family(a2, t2));
        }
        r.output.act.push_back(std::move(fn));
    }
    (void)B;
    return r;
}

Components lan_map(const KanResult& lx, const KanResult& lx2, const Components& t) {
    Components out;
    for (std::size_t a = 0; a < lx.representative.size(); ++a) {
        FinFn fn;
        fn.cod_size = lx2.output.size(static_cast<int>(a));
        for (auto [o, e] : lx.representative[a]) {
            int b = lx.commas[a].origin[o];
            fn.map.push_back(lx2.injections[a][o](t[b](e)));
        }
        out.push_back(std::move(fn));
    }
    return out;
}

Components ran_map(const KanResult& rx, const KanResult& rx2, const Components& t) {
    Components out;
    for (std::size_t a = 0; a < rx.families.size(); ++a) {
        const auto& el = rx.elements[a];
        FinFn fn;
        fn.cod_size = rx2.output.size(static_cast<int>(a));
        for (const auto& fam : rx.families[a]) {
            std::vector<int> img(fam.size());
            for (std::size_t j = 0; j < fam.size(); ++j) img[j] = t[el.object_of[j].first](fam[j]);
            fn.map.push_back(rx2.find_family(static_cast<int>(a), img));
        }
        out.push_back(std::move(fn));
    }
    return out;
}

Components lan_unit(const KanResult& lx) {
    const auto& l = lx.functor;
    const auto& A = *l.target;
    Components out;
    for (int b = 0; b < l.source->num_objects(); ++b) {
        int a = l.obj(b);
        const auto& comma = lx.commas[a];
        int k = -1;
        for (std::size_t o = 0; o < comma.origin.size(); ++o)
            if (comma.origin[o] == b && comma.arrow[o] == A.identity(a)) k = static_cast<int>(o);
        out.push_back(lx.injections[a][k]);
    }
    return out;
}

Components lan_counit(const KanResult& ly, const Presheaf& y) {
    Components out;
    for (std::size_t a = 0; a < ly.representative.size(); ++a) {
        FinFn fn;
        fn.cod_size = y.size(static_cast<int>(a));
        for (auto [o, e] : ly.representative[a]) fn.map.push_back(y.act[ly.commas[a].arrow[o]](e));
        out.push_back(std::move(fn));
    }
    return out;
}

Components ran_unit(const KanResult& ry, const Presheaf& y) {
    const auto& l = ry.functor;
    const auto& A = *l.target;
    Components out;
    for (int a = 0; a < A.num_objects(); ++a) {
        const auto& el = ry.elements[a];
        FinFn fn;
        fn.cod_size = ry.output.size(a);
        for (int v = 0; v < y.size(a); ++v) {
            std::vector<int> fam;
            for (auto [b, pos] : el.object_of) fam.push_back(y.act[A.hom(l.obj(b), a)[pos]](v));
            fn.map.push_back(ry.find_family(a, fam));
        }
        out.push_back(std::move(fn));
    }
    return out;
}

Components ran_counit(const KanResult& rx) {
    const auto& l = rx.functor;
    const auto& A = *l.target;
    Components out;
    for (int b = 0; b < l.source->num_objects(); ++b) {
        int a = l.obj(b);
        int j = rx.elements[a].index[b][position_in(A.hom(a, a), A.identity(a))];
        FinFn fn;
        fn.cod_size = rx.input.size(b);
        for (const auto& fam : rx.families[a]) fn.map.push_back(fam[j]);
        out.push_back(std::move(fn));
    }
    return out;
}

ThetaResult theta(const Reflection& r, const Presheaf& x) {
    const auto& l = r.left;
    auto lx = lan(l, x);
    auto rx = ran(l, x);
    auto c = compose(lan_unit(lx), ran_counit(rx));
    const auto& A = *l.target;
    ThetaResult out{rx.output, lx.output, {}, {}};
    for (int a = 0; a < A.num_objects(); ++a) {
        std::optional<FinFn> chosen;
        for (int b = 0; b < l.source->num_objects(); ++b) {
            if (l.obj(b) != a) continue;
            if (!chosen) chosen = c[b];
            else if (!(*chosen == c[b]))
                throw NonUnique("restriction of theta disagrees over the fiber of " + A.object_name(a));
        }
        if (!chosen) {
            if (out.source.size(a) != 0) throw NonUnique("theta is not determined at " + A.object_name(a));
            chosen = FinFn{{}, out.target.size(a)};
        }
        out.map.push_back(*chosen);
    }
    if (!is_natural(out.map, out.source, out.target)) throw NonUnique("the candidate theta is not natural");

    out.epi.property = "theta-epi";
    out.epi.bounds = {{"exhaustive", true}};
    for (int a = 0; a < A.num_objects(); ++a) {
        const auto& f = out.map[a];
        std::vector<char> hit(f.cod_size, 0);
        for (int v : f.map) hit[v] = 1;
        auto missed = std::find(hit.begin(), hit.end(), 0);
        if (missed != hit.end()) {
            out.epi.status = Status::Fail;
            out.epi.witness = json{{"object", A.object_name(a)},
                                   {"missed", out.target.at[a].elements[missed - hit.begin()]}};
            out.epi.note = "NOT-EPI";
            break;
        }
    }
    return out;
}

namespace {

bool all_distinct(std::vector<Components> v) {
    std::sort(v.begin(), v.end(), [](const Components& a, const Components& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].map != b[i].map) return a[i].map < b[i].map;
        return false;
    });
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

}  // namespace

Verdict verify_essential_local(const Reflection& r, const EssentialLocalOptions& opts) {
    Verdict v;
    v.property = "essential-local";
    v.bounds = {{"carrier_bound", opts.carrier_bound}, {"budget", opts.budget}};
    auto adj = check_adjunction(r);
    if (adj.failed()) {
        v.status = Status::Fail;
        v.witness = json{{"stage", "adjunction"}, {"detail", *adj.witness}};
        v.note = adj.note;
        return v;
    }
    const auto& l = r.left;
    const auto& f = r.right;
    auto fail = [&](const char* stage, std::size_t i, std::size_t j, std::size_t lhs, std::size_t rhs) {
        v.status = Status::Fail;
        v.witness = json{{"stage", stage}, {"first", i}, {"second", j}, {"lhs", lhs}, {"rhs", rhs}};
        return v;
    };
    try {
        Budget budget(opts.budget, "essential-local corpus");
        auto corpus_b = presheaf_corpus(r.big(), opts.carrier_bound);
        auto corpus_a = presheaf_corpus(r.small(), opts.carrier_bound);
        v.stats["corpus_b"] = static_cast<std::int64_t>(corpus_b.size());
        v.stats["corpus_a"] = static_cast<std::int64_t>(corpus_a.size());

        std::vector<KanResult> lans, rans, rans_of_restricted;
        std::vector<Presheaf> restricted;
        for (const auto& x : corpus_b) {
            lans.push_back(lan(l, x));
            rans.push_back(ran(l, x, budget));
        }
        for (const auto& y : corpus_a) {
            restricted.push_back(restrict(l, y));
            rans_of_restricted.push_back(ran(l, restricted.back(), budget));
        }

        std::int64_t checked = 0;
        // Nat(L! X, Y) ≅ Nat(X, L* Y) by α ↦ L*α ∘ unit
        for (std::size_t i = 0; i < corpus_b.size(); ++i) {
            auto unit = lan_unit(lans[i]);
            for (std::size_t j = 0; j < corpus_a.size(); ++j) {
                auto lhs = nat_components(lans[i].output, corpus_a[j], budget);
                auto rhs_count = count_nat(corpus_b[i], restricted[j], budget);
                std::vector<Components> images;
                for (const auto& alpha : lhs) {
                    auto img = compose(restrict_map(l, alpha), unit);
                    if (!is_natural(img, corpus_b[i], restricted[j])) return fail("lan-transpose", i, j, lhs.size(), rhs_count);
                    images.push_back(std::move(img));
                }
                if (lhs.size() != rhs_count || !all_distinct(images)) return fail("lan-adjunction", i, j, lhs.size(), rhs_count);
                ++checked;
            }
        }
        v.stats["lan_pairs"] = checked;

        checked = 0;
        // Nat(L* Y, X) ≅ Nat(Y, L_* X) by β ↦ L_*β ∘ unit
        for (std::size_t j = 0; j < corpus_a.size(); ++j) {
            auto unit = ran_unit(rans_of_restricted[j], corpus_a[j]);
            for (std::size_t i = 0; i < corpus_b.size(); ++i) {
                auto lhs = nat_components(restricted[j], corpus_b[i], budget);
                auto rhs_count = count_nat(corpus_a[j], rans[i].output, budget);
                std::vector<Components> images;
                for (const auto& beta : lhs) {
                    auto img = compose(ran_map(rans_of_restricted[j], rans[i], beta), unit);
                    if (!is_natural(img, corpus_a[j], rans[i].output)) return fail("ran-transpose", j, i, lhs.size(), rhs_count);
                    images.push_back(std::move(img));
                }
                if (lhs.size() != rhs_count || !all_distinct(images)) return fail("ran-adjunction", j, i, lhs.size(), rhs_count);
                ++checked;
            }
        }
        v.stats["ran_pairs"] = checked;

        checked = 0;
        // L* full and faithful
        for (std::size_t i = 0; i < corpus_a.size(); ++i)
            for (std::size_t j = 0; j < corpus_a.size(); ++j) {
                auto maps = nat_components(corpus_a[i], corpus_a[j], budget);
                auto restricted_count = count_nat(restricted[i], restricted[j], budget);
                std::vector<Components> images;
                for (const auto& t : maps) images.push_back(restrict_map(l, t));
                if (maps.size() != restricted_count || !all_distinct(images))
                    return fail("restriction-full-faithful", i, j, restricted_count, maps.size());
                ++checked;
            }
        v.stats["restriction_pairs"] = checked;

        checked = 0;
        // L* ≅ F!
        for (std::size_t j = 0; j < corpus_a.size(); ++j) {
            auto fy = lan(f, corpus_a[j]);
            if (!find_isomorphism(restricted[j], fy.output))
                return fail("restriction-vs-lan-of-right-adjoint", j, j, restricted[j].total_size(),
                            fy.output.total_size());
            ++checked;
        }
        v.stats["iso_checks"] = checked;
        v.stats["candidates"] = static_cast<std::int64_t>(budget.used());
    } catch (const BudgetExceeded& e) {
        v.status = Status::Inconclusive;
        v.note = e.what();
        return v;
    }
    v.status = Status::Pass;
    return v;
}

}  // namespace finitopos
