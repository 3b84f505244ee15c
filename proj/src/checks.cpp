#include "finitopos/checks.hpp"

#include <algorithm>

#include "finitopos/dsl.hpp"

namespace finitopos {

std::string to_string(Mediators m) {
    switch (m) {
        case Mediators::None: return "none";
        case Mediators::Unique: return "unique";
        case Mediators::Many: return "many";
    }
    return "?";
}

Mediators mediators_from_string(const std::string& s) {
    if (s == "none") return Mediators::None;
    if (s == "unique") return Mediators::Unique;
    if (s == "many") return Mediators::Many;
    throw InvalidData("unknown mediator kind '" + s + "'");
}

// --- limits inside a finite category ------------------------------------------------

MediatorAnalysis analyze_cone(const FinCategory& c, const Cone& k, int x, int y, int f, int g) {
    for (int w = 0; w < c.num_objects(); ++w)
        for (int a : c.hom(w, x))
            for (int b : c.hom(w, y)) {
                if (f >= 0 && c.compose(f, a) != c.compose(g, b)) continue;
                int count = 0;
                for (int h : c.hom(w, k.apex))
                    if (c.compose(k.left, h) == a && c.compose(k.right, h) == b) ++count;
                if (count != 1) return {count == 0 ? Mediators::None : Mediators::Many, Cone{w, a, b}, count};
            }
    return {};
}

std::optional<Cone> find_product(const FinCategory& c, int x, int y) {
    for (int p = 0; p < c.num_objects(); ++p)
        for (int l : c.hom(p, x))
            for (int r : c.hom(p, y)) {
                Cone k{p, l, r};
                if (analyze_cone(c, k, x, y, -1, -1).kind == Mediators::Unique) return k;
            }
    return std::nullopt;
}

std::optional<Cone> find_pullback(const FinCategory& c, int f, int g) {
    if (c.cod(f) != c.cod(g)) throw ShapeMismatch("pullback of a non-cospan");
    int x = c.dom(f), y = c.dom(g);
    for (int p = 0; p < c.num_objects(); ++p)
        for (int l : c.hom(p, x))
            for (int r : c.hom(p, y)) {
                if (c.compose(f, l) != c.compose(g, r)) continue;
                Cone k{p, l, r};
                if (analyze_cone(c, k, x, y, f, g).kind == Mediators::Unique) return k;
            }
    return std::nullopt;
}

std::optional<int> find_terminal(const FinCategory& c) {
    for (int t = 0; t < c.num_objects(); ++t) {
        bool ok = true;
        for (int w = 0; w < c.num_objects() && ok; ++w) ok = c.hom(w, t).size() == 1;
        if (ok) return t;
    }
    return std::nullopt;
}

bool is_isomorphism(const FinCategory& c, int m) {
    for (int n : c.hom(c.cod(m), c.dom(m)))
        if (c.compose(n, m) == c.identity(c.dom(m)) && c.compose(m, n) == c.identity(c.cod(m))) return true;
    return false;
}

namespace {

/// The unique h : apex -> k.apex with k.left∘h = a and k.right∘h = b, or -1.
int mediator(const FinCategory& c, const Cone& k, int apex, int a, int b) {
    int found = -1;
    for (int h : c.hom(apex, k.apex))
        if (c.compose(k.left, h) == a && c.compose(k.right, h) == b) {
            if (found >= 0) return -1;
            found = h;
        }
    return found;
}

}  // namespace

std::optional<ExponentialCone> find_exponential(const FinCategory& c, int b, int target, bool* missing_product) {
    std::vector<Cone> times_b(c.num_objects());
    for (int w = 0; w < c.num_objects(); ++w) {
        auto p = find_product(c, w, b);
        if (!p) {
            if (missing_product) *missing_product = true;
            return std::nullopt;
        }
        times_b[w] = *p;
    }
    for (int e = 0; e < c.num_objects(); ++e) {
        const auto& pe = times_b[e];
        for (int ev : c.hom(pe.apex, target)) {
            bool universal = true;
            for (int w = 0; w < c.num_objects() && universal; ++w) {
                const auto& pw = times_b[w];
                for (int g : c.hom(pw.apex, target)) {
                    int count = 0;
                    for (int h : c.hom(w, e)) {
                        int hb = mediator(c, pe, pw.apex, c.compose(h, pw.left), pw.right);
                        if (hb >= 0 && c.compose(ev, hb) == g) ++count;
                    }
                    if (count != 1) {
                        universal = false;
                        break;
                    }
                }
            }
            if (universal) return ExponentialCone{e, pe, ev};
        }
    }
    return std::nullopt;
}

// --- witness squares ----------------------------------------------------------------

json to_json(const WitnessSquare& w) {
    return json{{"level", w.level}, {"data", w.data}, {"leg", w.leg}, {"mediators", to_string(w.mediators)}, {"cone", w.cone}};
}

WitnessSquare witness_square_from_json(const json& j) {
    WitnessSquare w;
    w.level = j.at("level").get<std::string>();
    w.data = j.at("data");
    w.leg = j.at("leg").get<std::string>();
    w.mediators = mediators_from_string(j.at("mediators").get<std::string>());
    w.cone = j.value("cone", json());
    return w;
}

namespace {

void require_reflection(const Reflection& r) {
    auto v = check_adjunction(r);
    if (!v.passed()) throw ShapeMismatch("not a reflection: " + v.note);
}

json cone_json(const FinCategory& c, const Cone& k) {
    return json{{"apex", c.object_name(k.apex)}, {"left", c.morphism_name(k.left)}, {"right", c.morphism_name(k.right)}};
}

json category_bounds(const Reflection& r) {
    return json{{"objects_b", r.big()->num_objects()},
                {"morphisms_b", r.big()->num_morphisms()},
                {"objects_a", r.small()->num_objects()},
                {"exhaustive", true}};
}

/// Tests whether L sends the pullback of (f, g) in B to a pullback in A.
/// Returns a witness when it does not; sets `missing` if B lacks the pullback.
std::optional<WitnessSquare> test_cospan(const Reflection& r, int f, int g, const std::string& leg,
                                         const std::string& property, bool& missing) {
    const auto& B = *r.big();
    const auto& A = *r.small();
    auto p = find_pullback(B, f, g);
    if (!p) {
        missing = true;
        return std::nullopt;
    }
    const auto& L = r.left;
    Cone image{L.obj(p->apex), L.mor(p->left), L.mor(p->right)};
    int lf = L.mor(f), lg = L.mor(g);
    auto m = analyze_cone(A, image, A.dom(lf), A.dom(lg), lf, lg);
    if (m.kind == Mediators::Unique) return std::nullopt;
    WitnessSquare w;
    w.level = "category";
    w.leg = leg;
    w.mediators = m.kind;
    w.cone = cone_json(A, *m.cone);
    w.data = json{{"property", property},
                  {"reflection", write_reflection(r)},
                  {"f", B.morphism_name(f)},
                  {"g", B.morphism_name(g)},
                  {"pullback", cone_json(B, *p)},
                  {"image", {{"f", A.morphism_name(lf)}, {"g", A.morphism_name(lg)}, {"square", cone_json(A, image)}}}};
    return w;
}

}  // namespace

std::optional<WitnessSquare> test_pullback_square(const Reflection& r, int f, int g, const std::string& leg,
                                                  const std::string& property) {
    bool missing = false;
    auto w = test_cospan(r, f, g, leg, property, missing);
    if (missing) throw InvalidData("no pullback of " + r.big()->morphism_name(f) + ", " + r.big()->morphism_name(g));
    return w;
}

// --- Frobenius ------------------------------------------------------------------------

Verdict check_frobenius(const Reflection& r, int i, int a) {
    const auto& B = *r.big();
    const auto& A = *r.small();
    const auto& L = r.left;
    Verdict v;
    v.property = "frobenius";
    v.bounds = json{{"I", A.object_name(i)}, {"A", B.object_name(a)}};
    int fi = r.right.obj(i);
    auto p = find_product(B, fi, a);
    auto q = find_product(A, i, L.obj(a));
    if (!p || !q) {
        v.status = Status::Inconclusive;
        v.note = std::string("missing product ") + (!p ? "F(" + A.object_name(i) + ") x " + B.object_name(a)
                                                        : A.object_name(i) + " x L(" + B.object_name(a) + ")");
        return v;
    }
    auto counit = reflection_counit(r);
    int first = A.compose(counit[i], L.mor(p->left));
    int second = L.mor(p->right);
    int m = mediator(A, *q, L.obj(p->apex), first, second);
    if (m < 0 || !is_isomorphism(A, m)) {
        v.status = Status::Fail;
        v.witness = json{{"I", A.object_name(i)},
                         {"A", B.object_name(a)},
                         {"product_b", cone_json(B, *p)},
                         {"product_a", cone_json(A, *q)},
                         {"comparison", m < 0 ? json(nullptr) : json(A.morphism_name(m))}};
        v.note = "canonical map is not an isomorphism";
    }
    return v;
}

Verdict check_frobenius(const Reflection& r) {
    require_reflection(r);
    std::vector<Verdict> parts;
    std::int64_t inconclusive = 0;
    for (int i = 0; i < r.small()->num_objects(); ++i)
        for (int a = 0; a < r.big()->num_objects(); ++a) {
            parts.push_back(check_frobenius(r, i, a));
            inconclusive += parts.back().status == Status::Inconclusive;
        }
    Verdict out;
    out.property = "frobenius";
    out.bounds = category_bounds(r);
    out.stats["pairs"] = static_cast<std::int64_t>(parts.size());
    out.stats["missing_products"] = inconclusive;
    for (const auto& p : parts)
        if (p.failed()) {
            out.status = Status::Fail;
            out.witness = p.witness;
            out.note = p.note;
            return out;
        }
    if (inconclusive) {
        out.status = Status::Inconclusive;
        out.note = "some products are missing";
    }
    return out;
}

// --- semi-left-exactness and stable units ---------------------------------------------

Verdict check_semi_left_exact(const Reflection& r) {
    require_reflection(r);
    const auto& B = *r.big();
    const auto& A = *r.small();
    Verdict v;
    v.property = "semi-left-exact";
    v.bounds = category_bounds(r);
    std::int64_t cospans = 0, missing = 0;
    for (int a = 0; a < A.num_objects(); ++a)
        for (int a2 = 0; a2 < A.num_objects(); ++a2)
            for (int u : A.hom(a2, a)) {
                int fu = r.right.mor(u);
                for (int x = 0; x < B.num_objects(); ++x)
                    for (int f : B.hom(x, r.right.obj(a))) {
                        ++cospans;
                        bool miss = false;
                        auto w = test_cospan(r, f, fu, "right", v.property, miss);
                        missing += miss;
                        if (w) {
                            v.status = Status::Fail;
                            v.witness = to_json(*w);
                            v.note = "pullback not preserved";
                            v.stats["cospans"] = cospans;
                            return v;
                        }
                    }
            }
    v.stats["cospans"] = cospans;
    v.stats["missing_pullbacks"] = missing;
    if (missing) {
        v.status = Status::Inconclusive;
        v.note = "some pullbacks are missing in B";
    }
    return v;
}

Verdict check_stable_units(const Reflection& r) {
    require_reflection(r);
    const auto& B = *r.big();
    const auto& A = *r.small();
    Verdict v;
    v.property = "stable-units";
    v.bounds = category_bounds(r);
    std::int64_t cospans = 0, missing = 0;
    for (int a = 0; a < A.num_objects(); ++a) {
        int fa = r.right.obj(a);
        for (int x = 0; x < B.num_objects(); ++x)
            for (int f : B.hom(x, fa))
                for (int y = 0; y < B.num_objects(); ++y)
                    for (int g : B.hom(y, fa)) {
                        ++cospans;
                        bool miss = false;
                        auto w = test_cospan(r, f, g, "none", v.property, miss);
                        missing += miss;
                        if (w) {
                            v.status = Status::Fail;
                            v.witness = to_json(*w);
                            v.note = "pullback not preserved";
                            v.stats["cospans"] = cospans;
                            return v;
                        }
                    }
    }
    v.stats["cospans"] = cospans;
    v.stats["missing_pullbacks"] = missing;
    if (missing) {
        v.status = Status::Inconclusive;
        v.note = "some pullbacks are missing in B";
    }
    return v;
}

// --- exponential ideal ------------------------------------------------------------------

Verdict ExponentialIdealResult::combined() const { return combine("exp-ideal", {products, exponentials}); }

ExponentialIdealResult check_exponential_ideal(const Reflection& r) {
    require_reflection(r);
    const auto& B = *r.big();
    const auto& A = *r.small();
    const auto& L = r.left;
    ExponentialIdealResult out;
    auto& pv = out.products;
    pv.property = "product-preservation";
    pv.bounds = category_bounds(r);
    std::int64_t pairs = 0, missing = 0;

    auto tb = find_terminal(B);
    auto ta = find_terminal(A);
    if (!tb || !ta) {
        ++missing;
        pv.note = "missing terminal object";
    } else if (A.hom(L.obj(*tb), *ta).empty() || !is_isomorphism(A, A.hom(L.obj(*tb), *ta).front())) {
        pv.status = Status::Fail;
        pv.witness = json{{"terminal", B.object_name(*tb)}};
        pv.note = "terminal object not preserved";
    }
    for (int x = 0; x < B.num_objects() && !pv.failed(); ++x)
        for (int y = 0; y < B.num_objects() && !pv.failed(); ++y) {
            ++pairs;
            auto p = find_product(B, x, y);
            auto q = find_product(A, L.obj(x), L.obj(y));
            if (!p || !q) {
                if (!missing) pv.note = "missing product " + (!p ? B.object_name(x) + " x " + B.object_name(y)
                                                              : "L" + B.object_name(x) + " x L" + B.object_name(y));
                ++missing;
                continue;
            }
            int m = mediator(A, *q, L.obj(p->apex), L.mor(p->left), L.mor(p->right));
            if (m < 0 || !is_isomorphism(A, m)) {
                pv.status = Status::Fail;
                pv.witness = json{{"x", B.object_name(x)}, {"y", B.object_name(y)}, {"product_b", cone_json(B, *p)},
                                  {"product_a", cone_json(A, *q)}};
                pv.note = "L(x*y) is not L x * L y";
            }
        }
    pv.stats["pairs"] = pairs;
    pv.stats["missing_products"] = missing;
    if (!pv.failed() && missing) pv.status = Status::Inconclusive;

    auto& ev = out.exponentials;
    ev.property = "exponential-closure";
    ev.bounds = category_bounds(r);
    std::int64_t exps = 0, missing_exp = 0;
    for (int a = 0; a < A.num_objects() && !ev.failed(); ++a)
        for (int b = 0; b < B.num_objects() && !ev.failed(); ++b) {
            ++exps;
            bool no_product = false;
            auto e = find_exponential(B, b, r.right.obj(a), &no_product);
            if (!e) {
                if (!missing_exp) ev.note = "missing exponential " + A.object_name(a) + "^" + B.object_name(b);
                ++missing_exp;
                continue;
            }
            bool in_image = false;
            for (int a2 = 0; a2 < A.num_objects() && !in_image; ++a2)
                for (int m : B.hom(e->object, r.right.obj(a2)))
                    if (is_isomorphism(B, m)) in_image = true;
            if (!in_image) {
                ev.status = Status::Fail;
                ev.witness = json{{"a", A.object_name(a)}, {"b", B.object_name(b)}, {"exponential", B.object_name(e->object)}};
                ev.note = "exponential outside the image of F";
            }
        }
    ev.stats["exponentials"] = exps;
    ev.stats["missing_exponentials"] = missing_exp;
    if (!ev.failed() && missing_exp) ev.status = Status::Inconclusive;
    return out;
}

// --- local connectedness ---------------------------------------------------------------

Verdict check_locally_connected(const FinFunctor& l, const LocallyConnectedOptions& opts) {
    Verdict v;
    v.property = "locally-connected";
    v.bounds = json{{"carrier_bound", opts.carrier_bound},
                    {"max_squares", opts.max_squares},
                    {"max_pi_checks", opts.max_pi_checks},
                    {"budget", opts.budget}};
    try {
        Budget budget(opts.budget, "locally-connected corpus");
        auto corpus_b = presheaf_corpus(l.source, opts.carrier_bound);
        auto corpus_a = presheaf_corpus(l.target, opts.carrier_bound);
        std::vector<KanResult> lan_b, lan_restricted;
        std::vector<Presheaf> restricted;
        std::vector<Components> counits;
        for (const auto& x : corpus_b) lan_b.push_back(lan(l, x));
        for (const auto& y : corpus_a) {
            restricted.push_back(restrict(l, y));
            lan_restricted.push_back(lan(l, restricted.back()));
            counits.push_back(lan_counit(lan_restricted.back(), y));
        }

        std::size_t squares = 0;
        bool truncated = false;
        for (std::size_t iy = 0; iy < corpus_a.size() && !truncated; ++iy)
            for (std::size_t iy2 = 0; iy2 < corpus_a.size() && !truncated; ++iy2) {
                auto us = nat_components(corpus_a[iy2], corpus_a[iy], budget);
                if (us.empty()) continue;
                for (std::size_t ix = 0; ix < corpus_b.size() && !truncated; ++ix) {
                    auto fs = nat_components(corpus_b[ix], restricted[iy], budget);
                    for (const auto& u : us) {
                        auto lu = restrict_map(l, u);
                        for (const auto& f : fs) {
                            if (squares == opts.max_squares) {
                                truncated = true;
                                break;
                            }
                            ++squares;
                            budget.charge();
                            auto pb = pullback(corpus_b[ix], restricted[iy2], f, lu);
                            auto lp = lan(l, pb.object);
                            auto lp1 = lan_map(lp, lan_b[ix], pb.first);
                            auto lp2 = compose(counits[iy2], lan_map(lp, lan_restricted[iy2], pb.second));
                            auto fflat = compose(counits[iy], lan_map(lan_b[ix], lan_restricted[iy], f));
                            auto target = pullback(lan_b[ix].output, corpus_a[iy2], fflat, u);
                            auto m = pair_maps(lp.output, target, lan_b[ix].output, corpus_a[iy2], lp1, lp2);
                            if (!is_isomorphism(m)) {
                                WitnessSquare w;
                                w.level = "presheaf";
                                w.leg = "right";
                                w.mediators = Mediators::None;
                                w.data = json{{"property", v.property},
                                              {"X", ix},
                                              {"Y", iy},
                                              {"Y2", iy2},
                                              {"pullback_size", pb.object.total_size()},
                                              {"image_size", lp.output.total_size()},
                                              {"target_size", target.object.total_size()}};
                                for (int a = 0; a < l.target->num_objects(); ++a)
                                    if (!m[a].injective()) w.mediators = Mediators::Many;
                                v.status = Status::Fail;
                                v.witness = to_json(w);
                                v.note = "left Kan extension does not preserve the pullback";
                                v.stats["squares"] = static_cast<std::int64_t>(squares);
                                return v;
                            }
                        }
                    }
                }
            }
        v.stats["squares"] = static_cast<std::int64_t>(squares);
        if (truncated) v.stats["truncated"] = 1;

        // restriction commutes with dependent products
        std::size_t pis = 0;
        for (std::size_t iy = 0; iy < corpus_a.size() && pis < opts.max_pi_checks; ++iy)
            for (std::size_t ix = 0; ix < corpus_a.size() && pis < opts.max_pi_checks; ++ix) {
                auto fs = nat_components(corpus_a[ix], corpus_a[iy], budget);
                for (std::size_t iz = 0; iz < corpus_a.size() && pis < opts.max_pi_checks; ++iz) {
                    auto gs = nat_components(corpus_a[iz], corpus_a[ix], budget);
                    if (fs.empty() || gs.empty()) continue;
                    const auto& f = fs.back();
                    const auto& g = gs.back();
                    ++pis;
                    auto pi = dependent_product(corpus_a[ix], corpus_a[iy], f, corpus_a[iz], g, budget);
                    auto pib = dependent_product(restricted[ix], restricted[iy], restrict_map(l, f), restricted[iz],
                                                 restrict_map(l, g), budget);
                    auto lpi = restrict(l, pi.object);
                    if (!find_isomorphism_over(lpi, pib.object, restrict_map(l, pi.projection), pib.projection)) {
                        v.status = Status::Fail;
                        v.witness = json{{"level", "presheaf"}, {"kind", "dependent-product"},
                                         {"X", ix}, {"Y", iy}, {"Z", iz}};
                        v.note = "restriction does not preserve a dependent product";
                        v.stats["pi_checks"] = static_cast<std::int64_t>(pis);
                        return v;
                    }
                }
            }
        v.stats["pi_checks"] = static_cast<std::int64_t>(pis);
        v.stats["corpus_b"] = static_cast<std::int64_t>(corpus_b.size());
        v.stats["corpus_a"] = static_cast<std::int64_t>(corpus_a.size());
    } catch (const BudgetExceeded& e) {
        v.status = Status::Inconclusive;
        v.note = e.what();
    }
    return v;
}

// --- local cartesian closure ------------------------------------------------------------

Verdict check_lcc(const FinCategory& c) {
    Verdict v;
    v.property = "lcc";
    v.bounds = json{{"objects", c.num_objects()}, {"morphisms", c.num_morphisms()}, {"exhaustive", true}};
    if (!find_terminal(c)) {
        v.status = Status::Inconclusive;
        v.note = "no terminal object";
        return v;
    }
    const int n = c.num_morphisms();
    // chosen pullback of every cospan
    std::vector<std::optional<Cone>> pb(static_cast<std::size_t>(n) * n);
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g) {
            if (c.cod(f) != c.cod(g)) continue;
            pb[static_cast<std::size_t>(f) * n + g] = find_pullback(c, f, g);
            if (!pb[static_cast<std::size_t>(f) * n + g]) {
                v.status = Status::Inconclusive;
                v.note = "missing pullback of " + c.morphism_name(f) + ", " + c.morphism_name(g);
                return v;
            }
        }
    auto along = [&](int f, int w) -> const Cone& { return *pb[static_cast<std::size_t>(f) * n + w]; };

    std::int64_t slices = 0;
    for (int f = 0; f < n; ++f) {
        int a = c.dom(f), top = c.cod(f);
        std::vector<int> into_top, into_a;
        for (int m = 0; m < n; ++m) {
            if (c.cod(m) == top) into_top.push_back(m);
            if (c.cod(m) == a) into_a.push_back(m);
        }
        for (int y : into_a) {
            ++slices;
            bool found = false;
            for (int pi : into_top) {
                const auto& ppi = along(f, pi);
                for (int e : c.hom(ppi.apex, c.dom(y))) {
                    if (c.compose(y, e) != ppi.left) continue;
                    bool universal = true;
                    for (int w : into_top) {
                        const auto& pw = along(f, w);
                        for (int h : c.hom(pw.apex, c.dom(y))) {
                            if (c.compose(y, h) != pw.left) continue;
                            int count = 0;
                            for (int k : c.hom(c.dom(w), c.dom(pi))) {
                                if (c.compose(pi, k) != w) continue;
                                int fk = mediator(c, ppi, pw.apex, pw.left, c.compose(k, pw.right));
                                if (fk >= 0 && c.compose(e, fk) == h) ++count;
                            }
                            if (count != 1) {
                                universal = false;
                                break;
                            }
                        }
                        if (!universal) break;
                    }
                    if (universal) {
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (!found) {
                v.status = Status::Fail;
                v.witness = json{{"category", write_category("C", c)}, {"f", c.morphism_name(f)}, {"y", c.morphism_name(y)}};
                v.note = "pullback along " + c.morphism_name(f) + " has no right adjoint at " + c.morphism_name(y);
                v.stats["slice_objects"] = slices;
                return v;
            }
        }
    }
    v.stats["slice_objects"] = slices;
    return v;
}

// --- replay -------------------------------------------------------------------------------

namespace {

/// Number of arrows h : w -> apex with left∘h = a and right∘h = b, by a scan
/// over the whole morphism list.
int count_factorizations(const FinCategory& c, int apex, int left, int right, int w, int a, int b) {
    int count = 0;
    for (int h = 0; h < c.num_morphisms(); ++h)
        if (c.dom(h) == w && c.cod(h) == apex && c.compose(left, h) == a && c.compose(right, h) == b) ++count;
    return count;
}

/// Whether (apex, left, right) is a pullback of (f, g), by a scan over all
/// pairs of morphisms with common domain.
bool scan_is_pullback(const FinCategory& c, int apex, int left, int right, int f, int g) {
    if (c.compose(f, left) != c.compose(g, right)) return false;
    for (int a = 0; a < c.num_morphisms(); ++a)
        for (int b = 0; b < c.num_morphisms(); ++b) {
            if (c.dom(a) != c.dom(b) || c.cod(a) != c.dom(f) || c.cod(b) != c.dom(g)) continue;
            if (c.compose(f, a) != c.compose(g, b)) continue;
            if (count_factorizations(c, apex, left, right, c.dom(a), a, b) != 1) return false;
        }
    return true;
}

}  // namespace

Verdict replay_category_square(const json& witness) {
    auto w = witness_square_from_json(witness);
    Verdict v;
    v.property = w.data.at("property").get<std::string>();
    v.bounds = json{{"replay", true}};
    auto r = read_reflection(w.data.at("reflection").get<std::string>());
    if (!check_adjunction(r).passed()) throw InvalidData("witness reflection is not a reflection");
    const auto& B = *r.big();
    const auto& A = *r.small();
    int f = B.morphism_index(w.data.at("f").get<std::string>());
    int g = B.morphism_index(w.data.at("g").get<std::string>());
    const auto& pbj = w.data.at("pullback");
    int apex = B.object_index(pbj.at("apex").get<std::string>());
    int left = B.morphism_index(pbj.at("left").get<std::string>());
    int right = B.morphism_index(pbj.at("right").get<std::string>());
    if (B.cod(f) != B.cod(g)) throw InvalidData("witness cospan does not share a codomain");
    if (!scan_is_pullback(B, apex, left, right, f, g)) throw InvalidData("witness square is not a pullback in B");

    bool over_image = false;
    for (int a = 0; a < A.num_objects(); ++a) over_image = over_image || r.right.obj(a) == B.cod(f);
    if (!over_image) throw InvalidData("witness cospan is not over an object F a");
    if (w.leg == "right") {
        bool is_image = false;
        for (int u = 0; u < A.num_morphisms(); ++u) is_image = is_image || r.right.mor(u) == g;
        if (!is_image) throw InvalidData("witness right leg is not an F-image");
    }

    const auto& L = r.left;
    int lf = L.mor(f), lg = L.mor(g);
    const auto& cone = w.cone;
    int cw = A.object_index(cone.at("apex").get<std::string>());
    int ca = A.morphism_index(cone.at("left").get<std::string>());
    int cb = A.morphism_index(cone.at("right").get<std::string>());
    if (A.dom(ca) != cw || A.dom(cb) != cw || A.compose(lf, ca) != A.compose(lg, cb))
        throw InvalidData("witness cone does not commute over the image cospan");
    int count = count_factorizations(A, L.obj(apex), L.mor(left), L.mor(right), cw, ca, cb);
    Mediators kind = count == 0 ? Mediators::None : count == 1 ? Mediators::Unique : Mediators::Many;
    v.stats["mediators"] = count;
    if (kind == Mediators::Unique) {
        v.status = Status::Pass;
        v.note = "stored cone factors uniquely";
    } else {
        v.status = kind == w.mediators ? Status::Fail : Status::Inconclusive;
        v.witness = witness;
        v.note = kind == w.mediators ? "image square is not a pullback" : "mediator count differs from the witness";
    }
    return v;
}

Verdict replay_lcc(const json& witness) {
    auto doc = read_document(witness.at("category").get<std::string>());
    if (doc.categories.size() != 1) throw InvalidData("lcc witness must declare exactly one category");
    const auto& c = *doc.categories.begin()->second;
    Verdict v;
    v.property = "lcc";
    v.bounds = json{{"replay", true}};
    if (!c.is_preorder()) {
        v.status = Status::Inconclusive;
        v.note = "replay refutes only preorder categories";
        return v;
    }
    int f = c.morphism_index(witness.at("f").get<std::string>());
    int y = c.morphism_index(witness.at("y").get<std::string>());
    int a = c.dom(f), top = c.cod(f), ybot = c.dom(y);
    if (c.cod(y) != a) throw InvalidData("witness object is not over the domain of f");
    const int n = c.num_objects();
    auto leq = [&](int p, int q) { return !c.hom(p, q).empty(); };
    // meets by brute force over lower bounds
    auto meet = [&](int p, int q) {
        int best = -1;
        for (int z = 0; z < n; ++z) {
            if (!leq(z, p) || !leq(z, q)) continue;
            bool greatest = true;
            for (int z2 = 0; z2 < n; ++z2)
                if (leq(z2, p) && leq(z2, q) && !leq(z2, z)) greatest = false;
            if (greatest) best = z;
        }
        return best;
    };
    // Π_f(y) must be the greatest x <= top with x ∧ a <= y
    std::vector<int> admissible;
    for (int x = 0; x < n; ++x) {
        if (!leq(x, top)) continue;
        int m = meet(x, a);
        if (m < 0) throw InvalidData("replay category lacks a meet");
        if (leq(m, ybot)) admissible.push_back(x);
    }
    bool has_greatest = false;
    for (int x : admissible) {
        bool greatest = true;
        for (int x2 : admissible) greatest = greatest && leq(x2, x);
        has_greatest = has_greatest || greatest;
    }
    v.stats["admissible"] = static_cast<std::int64_t>(admissible.size());
    if (has_greatest) {
        v.status = Status::Pass;
        v.note = "a right adjoint value exists";
    } else {
        v.status = Status::Fail;
        v.witness = witness;
        v.note = "no greatest object pulls back below the witness";
    }
    return v;
}

}  // namespace finitopos
