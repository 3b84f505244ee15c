#include "finitopos/fincat.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <numeric>
#include <set>

namespace finitopos {

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::MissingComposite: return "MissingComposite";
        case ViolationKind::BrokenIdentity: return "BrokenIdentity";
        case ViolationKind::BrokenAssociativity: return "BrokenAssociativity";
        case ViolationKind::DanglingReference: return "DanglingReference";
        case ViolationKind::Malformed: return "Malformed";
        case ViolationKind::BrokenFunctoriality: return "BrokenFunctoriality";
        case ViolationKind::BrokenNaturality: return "BrokenNaturality";
    }
    return "?";
}

namespace {

std::string first_violations(const std::vector<Violation>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size() && i < 5; ++i) {
        if (i) out += "; ";
        out += to_string(vs[i].kind) + ": " + vs[i].message;
    }
    if (vs.size() > 5) out += "; ...";
    return out;
}

}  // namespace

// --- FinCategory ---------------------------------------------------------------

void FinCategory::index() {
    const std::size_t n = objects_.size();
    hom_.assign(n * n, {});
    for (int m = 0; m < num_morphisms(); ++m)
        hom_[static_cast<std::size_t>(morphisms_[m].dom) * n + morphisms_[m].cod].push_back(m);
    object_lookup_.clear();
    morphism_lookup_.clear();
    for (int o = 0; o < num_objects(); ++o) object_lookup_.emplace(objects_[o], o);
    for (int m = 0; m < num_morphisms(); ++m) morphism_lookup_.emplace(morphisms_[m].name, m);
}

std::optional<int> FinCategory::find_object(std::string_view name) const {
    auto it = object_lookup_.find(name);
    if (it == object_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> FinCategory::find_morphism(std::string_view name) const {
    auto it = morphism_lookup_.find(name);
    if (it == morphism_lookup_.end()) return std::nullopt;
    return it->second;
}

int FinCategory::object_index(std::string_view name) const {
    if (auto o = find_object(name)) return *o;
    throw InvalidData("unknown object '" + std::string(name) + "'");
}

int FinCategory::morphism_index(std::string_view name) const {
    if (auto m = find_morphism(name)) return *m;
    throw InvalidData("unknown morphism '" + std::string(name) + "'");
}

bool FinCategory::is_preorder() const {
    return std::all_of(hom_.begin(), hom_.end(), [](const auto& h) { return h.size() <= 1; });
}

CategoryData FinCategory::to_data() const {
    CategoryData d;
    d.objects = objects_;
    for (const auto& m : morphisms_) d.morphisms.push_back({m.name, objects_[m.dom], objects_[m.cod]});
    for (int o = 0; o < num_objects(); ++o) d.identities[objects_[o]] = morphisms_[identity_[o]].name;
    for (int g = 0; g < num_morphisms(); ++g)
        for (int f = 0; f < num_morphisms(); ++f) {
            int h = compose(g, f);
            if (h >= 0 && !is_identity(g) && !is_identity(f))
                d.composites.push_back({morphisms_[g].name, morphisms_[f].name, morphisms_[h].name});
        }
    return d;
}

bool FinCategory::operator==(const FinCategory& other) const {
    if (objects_ != other.objects_ || identity_ != other.identity_ || compose_ != other.compose_) return false;
    if (morphisms_.size() != other.morphisms_.size()) return false;
    for (std::size_t i = 0; i < morphisms_.size(); ++i) {
        const auto &a = morphisms_[i], &b = other.morphisms_[i];
        if (a.name != b.name || a.dom != b.dom || a.cod != b.cod) return false;
    }
    return true;
}

Validated<FinCategory> FinCategory::from_tables(std::vector<std::string> objects, std::vector<MorphismInfo> morphisms,
                                                std::vector<int> identities, std::vector<int> compose,
                                                bool check_associativity) {
    Validated<FinCategory> out;
    auto& vs = out.violations;
    const int n_obj = static_cast<int>(objects.size());
    const int n_mor = static_cast<int>(morphisms.size());
    auto mname = [&](int m) { return morphisms[m].name; };

    {
        std::set<std::string> seen;
        for (const auto& o : objects)
            if (!seen.insert(o).second) vs.push_back({ViolationKind::Malformed, "duplicate object " + o, {o}});
        seen.clear();
        for (const auto& m : morphisms)
            if (!seen.insert(m.name).second)
                vs.push_back({ViolationKind::Malformed, "duplicate morphism " + m.name, {m.name}});
    }
    if (static_cast<int>(identities.size()) != n_obj || static_cast<std::size_t>(n_mor) * n_mor != compose.size()) {
        vs.push_back({ViolationKind::Malformed, "table sizes do not match", {}});
        return out;
    }
    for (const auto& m : morphisms)
        if (m.dom < 0 || m.dom >= n_obj || m.cod < 0 || m.cod >= n_obj) {
            vs.push_back({ViolationKind::DanglingReference, "morphism " + m.name + " has an undeclared endpoint", {m.name}});
            return out;
        }
    for (int o = 0; o < n_obj; ++o) {
        int i = identities[o];
        if (i < 0 || i >= n_mor || morphisms[i].dom != o || morphisms[i].cod != o) {
            vs.push_back({ViolationKind::BrokenIdentity, "identity of " + objects[o] + " is not an endomorphism of it",
                          {objects[o]}});
            return out;
        }
    }
    auto comp = [&](int g, int f) { return compose[static_cast<std::size_t>(g) * n_mor + f]; };

    // totality and typing
    for (int g = 0; g < n_mor; ++g)
        for (int f = 0; f < n_mor; ++f) {
            int h = comp(g, f);
            bool composable = morphisms[f].cod == morphisms[g].dom;
            if (!composable) {
                if (h >= 0)
                    vs.push_back({ViolationKind::Malformed,
                                  "composite given for non-composable pair " + mname(g) + "." + mname(f),
                                  {mname(g), mname(f)}});
                continue;
            }
            if (h < 0) {
                vs.push_back({ViolationKind::MissingComposite, "missing composite " + mname(g) + "." + mname(f),
                              {mname(g), mname(f)}});
            } else if (h >= n_mor || morphisms[h].dom != morphisms[f].dom || morphisms[h].cod != morphisms[g].cod) {
                vs.push_back({ViolationKind::Malformed,
                              "composite " + mname(g) + "." + mname(f) + " has the wrong domain or codomain",
                              {mname(g), mname(f)}});
            }
        }
    if (!vs.empty()) return out;

    // identity laws
    for (int f = 0; f < n_mor; ++f) {
        int left = comp(identities[morphisms[f].cod], f);
        int right = comp(f, identities[morphisms[f].dom]);
        if (left != f || right != f)
            vs.push_back({ViolationKind::BrokenIdentity, "identity law fails at " + mname(f), {mname(f)}});
    }

    if (check_associativity) {
        std::vector<std::vector<int>> out_of(n_obj);
        for (int m = 0; m < n_mor; ++m) out_of[morphisms[m].dom].push_back(m);
        for (int f = 0; f < n_mor; ++f)
            for (int g : out_of[morphisms[f].cod])
                for (int h : out_of[morphisms[g].cod]) {
                    if (comp(h, comp(g, f)) != comp(comp(h, g), f))
                        vs.push_back({ViolationKind::BrokenAssociativity,
                                      "associativity fails at " + mname(h) + "." + mname(g) + "." + mname(f),
                                      {mname(h), mname(g), mname(f)}});
                }
    }
    if (!vs.empty()) return out;

    // canonical (lexicographic) order
    std::vector<int> obj_perm(n_obj), mor_perm(n_mor);
    std::iota(obj_perm.begin(), obj_perm.end(), 0);
    std::iota(mor_perm.begin(), mor_perm.end(), 0);
    std::sort(obj_perm.begin(), obj_perm.end(), [&](int a, int b) { return objects[a] < objects[b]; });
    std::sort(mor_perm.begin(), mor_perm.end(), [&](int a, int b) { return morphisms[a].name < morphisms[b].name; });
    std::vector<int> obj_new(n_obj), mor_new(n_mor);
    for (int i = 0; i < n_obj; ++i) obj_new[obj_perm[i]] = i;
    for (int i = 0; i < n_mor; ++i) mor_new[mor_perm[i]] = i;

    FinCategory c;
    c.objects_.resize(n_obj);
    c.identity_.resize(n_obj);
    c.morphisms_.resize(n_mor);
    c.compose_.assign(static_cast<std::size_t>(n_mor) * n_mor, -1);
    for (int o = 0; o < n_obj; ++o) {
        c.objects_[obj_new[o]] = objects[o];
        c.identity_[obj_new[o]] = mor_new[identities[o]];
    }
    for (int m = 0; m < n_mor; ++m)
        c.morphisms_[mor_new[m]] = {morphisms[m].name, obj_new[morphisms[m].dom], obj_new[morphisms[m].cod]};
    for (int g = 0; g < n_mor; ++g)
        for (int f = 0; f < n_mor; ++f) {
            int h = comp(g, f);
            if (h >= 0) c.compose_[static_cast<std::size_t>(mor_new[g]) * n_mor + mor_new[f]] = mor_new[h];
        }
    c.index();
    out.value = std::move(c);
    return out;
}

Validated<FinCategory> validate_category(const CategoryData& data) {
    Validated<FinCategory> out;
    auto& vs = out.violations;
    if (data.objects.empty()) {
        vs.push_back({ViolationKind::Malformed, "category has no objects", {}});
        return out;
    }
    std::map<std::string, int> obj;
    for (const auto& o : data.objects) obj.emplace(o, static_cast<int>(obj.size()));

    std::vector<MorphismInfo> mors;
    std::map<std::string, int> mor;
    bool dangling = false;
    for (const auto& a : data.morphisms) {
        auto d = obj.find(a.dom), c = obj.find(a.cod);
        if (d == obj.end() || c == obj.end()) {
            vs.push_back({ViolationKind::DanglingReference,
                          "morphism " + a.name + " refers to undeclared object " + (d == obj.end() ? a.dom : a.cod),
                          {a.name}});
            dangling = true;
            continue;
        }
        if (mor.count(a.name)) {
            vs.push_back({ViolationKind::Malformed, "duplicate morphism " + a.name, {a.name}});
            continue;
        }
        mor.emplace(a.name, static_cast<int>(mors.size()));
        mors.push_back({a.name, d->second, c->second});
    }

    std::vector<int> ids(data.objects.size(), -1);
    for (const auto& [o, m] : data.identities) {
        auto oi = obj.find(o);
        auto mi = mor.find(m);
        if (oi == obj.end() || mi == mor.end()) {
            vs.push_back({ViolationKind::DanglingReference, "identity declaration " + o + " -> " + m + " is dangling", {o, m}});
            dangling = true;
            continue;
        }
        ids[oi->second] = mi->second;
    }
    for (std::size_t o = 0; o < data.objects.size(); ++o) {
        if (ids[o] >= 0) continue;
        std::string name = "id(" + data.objects[o] + ")";
        auto it = mor.find(name);
        if (it != mor.end()) {
            ids[o] = it->second;
        } else {
            ids[o] = static_cast<int>(mors.size());
            mor.emplace(name, ids[o]);
            mors.push_back({name, static_cast<int>(o), static_cast<int>(o)});
        }
    }
    for (std::size_t o = 0; o < data.objects.size(); ++o) {
        const auto& m = mors[ids[o]];
        if (m.dom != static_cast<int>(o) || m.cod != static_cast<int>(o)) {
            vs.push_back({ViolationKind::BrokenIdentity, "identity " + m.name + " of " + data.objects[o] +
                                                             " is not an endomorphism of it",
                          {data.objects[o], m.name}});
            dangling = true;
        }
    }
    if (dangling) return out;

    const std::size_t n = mors.size();
    std::vector<int> table(n * n, -1);
    std::vector<char> is_id(n, 0);
    for (int i : ids) is_id[i] = 1;
    for (const auto& c : data.composites) {
        auto g = mor.find(c.g), f = mor.find(c.f), h = mor.find(c.result);
        if (g == mor.end() || f == mor.end() || h == mor.end()) {
            vs.push_back({ViolationKind::DanglingReference,
                          "composite " + c.g + "." + c.f + " = " + c.result + " names an undeclared morphism",
                          {c.g, c.f, c.result}});
            continue;
        }
        auto& slot = table[static_cast<std::size_t>(g->second) * n + f->second];
        if (slot >= 0 && slot != h->second) {
            vs.push_back({ViolationKind::Malformed, "conflicting composites for " + c.g + "." + c.f, {c.g, c.f}});
            continue;
        }
        slot = h->second;
    }
    // identity composites are implicit unless given
    for (std::size_t f = 0; f < n; ++f) {
        auto& left = table[static_cast<std::size_t>(ids[mors[f].cod]) * n + f];
        auto& right = table[f * n + ids[mors[f].dom]];
        if (left < 0) left = static_cast<int>(f);
        if (right < 0) right = static_cast<int>(f);
    }
    if (!vs.empty()) return out;

    auto built = FinCategory::from_tables(data.objects, std::move(mors), std::move(ids), std::move(table), true);
    out.value = std::move(built.value);
    out.violations = std::move(built.violations);
    return out;
}

CategoryPtr make_category(const CategoryData& data) {
    auto v = validate_category(data);
    if (!v.ok()) throw InvalidData("invalid category: " + first_violations(v.violations));
    return std::make_shared<const FinCategory>(std::move(*v.value));
}

CategoryPtr share(FinCategory c) { return std::make_shared<const FinCategory>(std::move(c)); }

namespace {

CategoryPtr build_or_throw(std::vector<std::string> objects, std::vector<MorphismInfo> morphisms,
                           std::vector<int> identities, std::vector<int> compose, bool check_assoc = false) {
    auto v = FinCategory::from_tables(std::move(objects), std::move(morphisms), std::move(identities),
                                      std::move(compose), check_assoc);
    if (!v.ok()) throw InvalidData("derived category is invalid: " + first_violations(v.violations));
    return share(std::move(*v.value));
}

}  // namespace

// --- saturation ---------------------------------------------------------------

CategoryData saturate(const Presentation& p, int max_morphisms) {
    std::map<std::string, int> obj;
    for (const auto& o : p.objects) obj.emplace(o, static_cast<int>(obj.size()));
    const int n_gen = static_cast<int>(p.generators.size());
    std::vector<int> gdom(n_gen), gcod(n_gen);
    std::map<std::string, int> gen;
    for (int g = 0; g < n_gen; ++g) {
        const auto& a = p.generators[g];
        if (!obj.count(a.dom) || !obj.count(a.cod))
            throw InvalidData("generator " + a.name + " refers to an undeclared object");
        if (!gen.emplace(a.name, g).second) throw InvalidData("duplicate generator " + a.name);
        gdom[g] = obj.at(a.dom);
        gcod[g] = obj.at(a.cod);
    }
    // resolve relation words into application order
    struct Rel {
        int start;
        std::vector<int> lhs, rhs;
    };
    auto resolve = [&](const Word& w, int& start, int& end) {
        std::vector<int> seq;
        if (w.letters.empty()) {
            auto it = obj.find(w.identity_on);
            if (it == obj.end()) throw InvalidData("relation refers to undeclared object " + w.identity_on);
            start = end = it->second;
            return seq;
        }
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
            auto g = gen.find(*it);
            if (g == gen.end()) throw InvalidData("relation refers to undeclared generator " + *it);
            if (!seq.empty() && gdom[g->second] != gcod[seq.back()])
                throw InvalidData("relation word is not composable at " + *it);
            seq.push_back(g->second);
        }
        start = gdom[seq.front()];
        end = gcod[seq.back()];
        return seq;
    };
    std::vector<Rel> rels;
    for (const auto& [l, r] : p.relations) {
        int ls, le, rs, re;
        auto lw = resolve(l, ls, le);
        auto rw = resolve(r, rs, re);
        if (ls != rs || le != re) throw InvalidData("relation sides have different domain or codomain");
        rels.push_back({ls, std::move(lw), std::move(rw)});
    }

    // coset enumeration of hom(X, -) for each X, with left action by generators
    struct Table {
        std::vector<int> cod;
        std::vector<std::vector<int>> edge;  // node x generator -> node
        std::vector<int> parent;
    };
    std::vector<Table> tables(p.objects.size());
    int live_total = 0;

    for (int x = 0; x < static_cast<int>(p.objects.size()); ++x) {
        auto& t = tables[x];
        std::vector<int> cod;
        std::vector<std::vector<int>> edge;
        std::vector<int> parent;
        int live = 0;
        auto find = [&](int a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        auto define = [&](int c) {
            cod.push_back(c);
            edge.emplace_back(n_gen, -1);
            parent.push_back(static_cast<int>(parent.size()));
            ++live;
            if (live_total + live > max_morphisms)
                throw InvalidData("saturation exceeded the bound of " + std::to_string(max_morphisms) + " morphisms");
            return static_cast<int>(cod.size()) - 1;
        };
        auto coincide = [&](int a, int b) {
            std::vector<std::pair<int, int>> queue{{a, b}};
            while (!queue.empty()) {
                auto [u, v] = queue.back();
                queue.pop_back();
                u = find(u);
                v = find(v);
                if (u == v) continue;
                if (v < u) std::swap(u, v);
                parent[v] = u;
                --live;
                for (int g = 0; g < n_gen; ++g) {
                    if (edge[v][g] < 0) continue;
                    if (edge[u][g] < 0)
                        edge[u][g] = edge[v][g];
                    else
                        queue.emplace_back(edge[u][g], edge[v][g]);
                }
            }
        };
        auto step = [&](int node, int g) {
            node = find(node);
            if (edge[node][g] < 0) {
                int fresh = define(gcod[g]);
                edge[node][g] = fresh;
            }
            return find(edge[node][g]);
        };
        define(x);
        for (int i = 0; i < static_cast<int>(cod.size()); ++i) {
            if (find(i) != i) continue;
            for (const auto& r : rels) {
                if (find(i) != i) break;
                if (r.start != cod[i]) continue;
                int a = i, b = i;
                for (int g : r.lhs) a = step(a, g);
                for (int g : r.rhs) b = step(b, g);
                coincide(a, b);
            }
            if (find(i) != i) continue;
            for (int g = 0; g < n_gen; ++g)
                if (gdom[g] == cod[i]) step(i, g);
        }
        // compact
        for (auto& row : edge)
            for (auto& e : row)
                if (e >= 0) e = find(e);
        t.cod = std::move(cod);
        t.edge = std::move(edge);
        t.parent = std::move(parent);
        live_total += live;
    }

    // shortest words by BFS from the identity node, generators in name order
    std::vector<int> gen_order(n_gen);
    std::iota(gen_order.begin(), gen_order.end(), 0);
    std::sort(gen_order.begin(), gen_order.end(),
              [&](int a, int b) { return p.generators[a].name < p.generators[b].name; });

    CategoryData d;
    d.objects = p.objects;
    struct NodeName {
        std::string name;
        std::vector<int> word;  // application order
    };
    std::vector<std::map<int, NodeName>> names(p.objects.size());
    for (int x = 0; x < static_cast<int>(p.objects.size()); ++x) {
        auto& t = tables[x];
        auto& nm = names[x];
        std::vector<int> queue{0};
        nm[0] = {"id(" + p.objects[x] + ")", {}};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int node = queue[qi];
            for (int g : gen_order) {
                if (gdom[g] != t.cod[node]) continue;
                int next = t.edge[node][g];
                if (next < 0) throw InvalidData("saturation left an undefined composite");
                if (nm.count(next)) continue;
                auto word = nm[node].word;
                word.push_back(g);
                std::string s;
                for (auto it = word.rbegin(); it != word.rend(); ++it) {
                    if (!s.empty()) s += ".";
                    s += p.generators[*it].name;
                }
                nm[next] = {s, word};
                queue.push_back(next);
            }
        }
        for (const auto& [node, n] : nm) d.morphisms.push_back({n.name, p.objects[x], p.objects[t.cod[node]]});
        d.identities[p.objects[x]] = nm[0].name;
    }
    // composition: trace the word of g starting at node f
    for (int x = 0; x < static_cast<int>(p.objects.size()); ++x)
        for (const auto& [fnode, fname] : names[x]) {
            int y = tables[x].cod[fnode];
            for (const auto& [gnode, gname] : names[y]) {
                if (gname.word.empty() || fname.word.empty()) continue;
                int node = fnode;
                for (int g : gname.word) node = tables[x].edge[node][g];
                d.composites.push_back({gname.name, fname.name, names[x].at(node).name});
            }
        }
    return d;
}

// --- derived categories --------------------------------------------------------

CategoryPtr terminal_category(const std::string& object) {
    CategoryData d;
    d.objects = {object};
    return make_category(d);
}

CategoryPtr opposite(const FinCategory& c) {
    const int n = c.num_morphisms();
    std::vector<MorphismInfo> mors;
    for (const auto& m : c.morphisms()) mors.push_back({m.name, m.cod, m.dom});
    std::vector<int> ids(c.num_objects());
    for (int o = 0; o < c.num_objects(); ++o) ids[o] = c.identity(o);
    std::vector<int> table(static_cast<std::size_t>(n) * n, -1);
    for (int g = 0; g < n; ++g)
        for (int f = 0; f < n; ++f) table[static_cast<std::size_t>(g) * n + f] = c.compose(f, g);
    return build_or_throw(c.objects(), std::move(mors), std::move(ids), std::move(table));
}

CategoryPtr poset_category(const std::vector<std::string>& elements,
                           const std::vector<std::pair<std::string, std::string>>& order) {
    const int n = static_cast<int>(elements.size());
    std::map<std::string, int> idx;
    for (int i = 0; i < n; ++i) idx.emplace(elements[i], i);
    std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) leq[i][i] = 1;
    for (const auto& [a, b] : order) {
        if (!idx.count(a) || !idx.count(b)) throw InvalidData("order relation refers to an unknown element");
        leq[idx[a]][idx[b]] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (leq[i][k] && leq[k][j]) leq[i][j] = 1;
    std::vector<MorphismInfo> mors;
    std::vector<std::vector<int>> arrow(n, std::vector<int>(n, -1));
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (leq[i][j]) {
                arrow[i][j] = static_cast<int>(mors.size());
                mors.push_back({i == j ? "id(" + elements[i] + ")" : elements[i] + "<" + elements[j], i, j});
                if (i == j) ids[i] = arrow[i][j];
            }
    const int m = static_cast<int>(mors.size());
    std::vector<int> table(static_cast<std::size_t>(m) * m, -1);
    for (int g = 0; g < m; ++g)
        for (int f = 0; f < m; ++f)
            if (mors[f].cod == mors[g].dom) table[static_cast<std::size_t>(g) * m + f] = arrow[mors[f].dom][mors[g].cod];
    return build_or_throw(elements, std::move(mors), std::move(ids), std::move(table));
}

CategoryPtr slice(const FinCategory& c, int object) {
    std::vector<int> objs;  // morphisms into `object`
    for (int x = 0; x < c.num_objects(); ++x)
        for (int f : c.hom(x, object)) objs.push_back(f);
    std::map<int, int> obj_index;
    std::vector<std::string> names;
    for (int f : objs) {
        obj_index[f] = static_cast<int>(names.size());
        names.push_back(c.morphism_name(f));
    }
    std::vector<MorphismInfo> mors;
    std::vector<int> base;  // underlying morphism
    std::vector<int> ids(objs.size());
    for (int f : objs)
        for (int g : objs)
            for (int h : c.hom(c.dom(f), c.dom(g))) {
                if (c.compose(g, h) != f) continue;
                if (f == g && c.is_identity(h)) ids[obj_index[f]] = static_cast<int>(mors.size());
                mors.push_back({"[" + c.morphism_name(h) + ":" + c.morphism_name(f) + "->" + c.morphism_name(g) + "]",
                                obj_index[f], obj_index[g]});
                base.push_back(h);
            }
    const int m = static_cast<int>(mors.size());
    std::map<std::tuple<int, int, int>, int> lookup;  // (dom obj, cod obj, base) -> morphism
    for (int i = 0; i < m; ++i) lookup[{mors[i].dom, mors[i].cod, base[i]}] = i;
    std::vector<int> table(static_cast<std::size_t>(m) * m, -1);
    for (int g = 0; g < m; ++g)
        for (int f = 0; f < m; ++f)
            if (mors[f].cod == mors[g].dom)
                table[static_cast<std::size_t>(g) * m + f] = lookup.at({mors[f].dom, mors[g].cod, c.compose(base[g], base[f])});
    return build_or_throw(std::move(names), std::move(mors), std::move(ids), std::move(table));
}

CommaCategory comma_under(int a, const FinFunctor& l) {
    const auto& src = *l.source;
    const auto& tgt = *l.target;
    std::vector<std::string> names;
    std::vector<int> origin, arrow;
    std::map<std::pair<int, int>, int> obj_index;
    for (int b = 0; b < src.num_objects(); ++b)
        for (int phi : tgt.hom(a, l.obj(b))) {
            obj_index[{b, phi}] = static_cast<int>(names.size());
            names.push_back("(" + src.object_name(b) + "," + tgt.morphism_name(phi) + ")");
            origin.push_back(b);
            arrow.push_back(phi);
        }
    std::vector<MorphismInfo> mors;
    std::vector<int> mor_origin;
    std::vector<int> ids(names.size(), -1);
    for (int o = 0; o < static_cast<int>(names.size()); ++o)
        for (int b2 = 0; b2 < src.num_objects(); ++b2)
            for (int beta : src.hom(origin[o], b2)) {
                int phi2 = tgt.compose(l.mor(beta), arrow[o]);
                int target = obj_index.at({b2, phi2});
                if (beta == src.identity(origin[o])) ids[o] = static_cast<int>(mors.size());
                mors.push_back({src.morphism_name(beta) + "@" + names[o], o, target});
                mor_origin.push_back(beta);
            }
    const int m = static_cast<int>(mors.size());
    std::map<std::pair<int, int>, int> lookup;  // (dom obj, beta) -> morphism
    for (int i = 0; i < m; ++i) lookup[{mors[i].dom, mor_origin[i]}] = i;
    std::vector<int> table(static_cast<std::size_t>(m) * m, -1);
    for (int g = 0; g < m; ++g)
        for (int f = 0; f < m; ++f)
            if (mors[f].cod == mors[g].dom)
                table[static_cast<std::size_t>(g) * m + f] = lookup.at({mors[f].dom, src.compose(mor_origin[g], mor_origin[f])});

    // from_tables reorders; recover the permutation through the names
    auto cat = build_or_throw(names, mors, ids, std::move(table));
    CommaCategory out;
    out.category = cat;
    out.origin.resize(names.size());
    out.arrow.resize(names.size());
    for (std::size_t o = 0; o < names.size(); ++o) {
        int k = cat->object_index(names[o]);
        out.origin[k] = origin[o];
        out.arrow[k] = arrow[o];
    }
    out.mor_origin.resize(mors.size());
    for (std::size_t i = 0; i < mors.size(); ++i) out.mor_origin[cat->morphism_index(mors[i].name)] = mor_origin[i];
    return out;
}

// --- functors ------------------------------------------------------------------

std::vector<Violation> validate_functor(const FinFunctor& f) {
    std::vector<Violation> vs;
    if (!f.source || !f.target) {
        vs.push_back({ViolationKind::Malformed, "functor without source or target", {}});
        return vs;
    }
    const auto& s = *f.source;
    const auto& t = *f.target;
    if (static_cast<int>(f.obj_map.size()) != s.num_objects() || static_cast<int>(f.mor_map.size()) != s.num_morphisms()) {
        vs.push_back({ViolationKind::Malformed, "functor tables do not cover the source category", {}});
        return vs;
    }
    for (int o = 0; o < s.num_objects(); ++o)
        if (f.obj_map[o] < 0 || f.obj_map[o] >= t.num_objects()) {
            vs.push_back({ViolationKind::DanglingReference, "object " + s.object_name(o) + " has no image", {s.object_name(o)}});
            return vs;
        }
    for (int m = 0; m < s.num_morphisms(); ++m) {
        int im = f.mor_map[m];
        if (im < 0 || im >= t.num_morphisms()) {
            vs.push_back({ViolationKind::DanglingReference, "morphism " + s.morphism_name(m) + " has no image", {s.morphism_name(m)}});
            return vs;
        }
        if (t.dom(im) != f.obj(s.dom(m)) || t.cod(im) != f.obj(s.cod(m)))
            vs.push_back({ViolationKind::BrokenFunctoriality, "image of " + s.morphism_name(m) + " has wrong endpoints",
                          {s.morphism_name(m)}});
    }
    if (!vs.empty()) return vs;
    for (int o = 0; o < s.num_objects(); ++o)
        if (f.mor(s.identity(o)) != t.identity(f.obj(o)))
            vs.push_back({ViolationKind::BrokenFunctoriality, "identity of " + s.object_name(o) + " not preserved",
                          {s.object_name(o)}});
    for (int g = 0; g < s.num_morphisms(); ++g)
        for (int h = 0; h < s.num_morphisms(); ++h) {
            int c = s.compose(g, h);
            if (c < 0) continue;
            if (f.mor(c) != t.compose(f.mor(g), f.mor(h)))
                vs.push_back({ViolationKind::BrokenFunctoriality,
                              "composite " + s.morphism_name(g) + "." + s.morphism_name(h) + " not preserved",
                              {s.morphism_name(g), s.morphism_name(h)}});
        }
    return vs;
}

FinFunctor identity_functor(CategoryPtr c) {
    FinFunctor f{c, c, {}, {}};
    f.obj_map.resize(c->num_objects());
    f.mor_map.resize(c->num_morphisms());
    std::iota(f.obj_map.begin(), f.obj_map.end(), 0);
    std::iota(f.mor_map.begin(), f.mor_map.end(), 0);
    return f;
}

FinFunctor compose(const FinFunctor& g, const FinFunctor& f) {
    if (!(f.target == g.source || *f.target == *g.source)) throw ShapeMismatch("functors are not composable");
    FinFunctor h{f.source, g.target, {}, {}};
    for (int o : f.obj_map) h.obj_map.push_back(g.obj(o));
    for (int m : f.mor_map) h.mor_map.push_back(g.mor(m));
    return h;
}

FinFunctor to_terminal(CategoryPtr c) {
    auto t = terminal_category();
    return FinFunctor{c, t, std::vector<int>(c->num_objects(), 0), std::vector<int>(c->num_morphisms(), 0)};
}

bool is_full_and_faithful(const FinFunctor& f) {
    const auto& s = *f.source;
    const auto& t = *f.target;
    for (int a = 0; a < s.num_objects(); ++a)
        for (int b = 0; b < s.num_objects(); ++b) {
            const auto& src = s.hom(a, b);
            const auto& dst = t.hom(f.obj(a), f.obj(b));
            if (src.size() != dst.size()) return false;
            std::set<int> images;
            for (int m : src) images.insert(f.mor(m));
            if (images.size() != src.size()) return false;
        }
    return true;
}

std::optional<FinFunctor> find_isomorphism(CategoryPtr c, CategoryPtr d) {
    const int n = c->num_objects();
    if (n != d->num_objects() || c->num_morphisms() != d->num_morphisms()) return std::nullopt;
    auto profile = [](const FinCategory& k, int o) {
        std::vector<std::size_t> out_sizes, in_sizes;
        for (int x = 0; x < k.num_objects(); ++x) {
            out_sizes.push_back(k.hom(o, x).size());
            in_sizes.push_back(k.hom(x, o).size());
        }
        std::sort(out_sizes.begin(), out_sizes.end());
        std::sort(in_sizes.begin(), in_sizes.end());
        return std::make_tuple(k.hom(o, o).size(), out_sizes, in_sizes);
    };
    std::vector<decltype(profile(*c, 0))> pc, pd;
    for (int o = 0; o < n; ++o) {
        pc.push_back(profile(*c, o));
        pd.push_back(profile(*d, o));
    }
    std::vector<int> obj(n, -1);
    std::vector<char> used(n, 0);
    const int m = c->num_morphisms();
    std::vector<int> mor(m, -1);
    std::vector<char> mused(m, 0);

    // morphism assignment for a fixed object bijection
    std::vector<int> order;
    for (int f = 0; f < m; ++f)
        if (!c->is_identity(f)) order.push_back(f);
    auto consistent = [&](int f) {
        // check all composites involving f whose parts are assigned
        for (int g = 0; g < m; ++g) {
            if (mor[g] < 0) continue;
            int gf = c->compose(g, f);
            if (gf >= 0 && mor[gf] >= 0 && d->compose(mor[g], mor[f]) != mor[gf]) return false;
            int fg = c->compose(f, g);
            if (fg >= 0 && mor[fg] >= 0 && d->compose(mor[f], mor[g]) != mor[fg]) return false;
            // f may itself be a composite of assigned parts
            for (int h = 0; h < m; ++h) {
                if (mor[h] < 0) continue;
                if (c->compose(g, h) == f && d->compose(mor[g], mor[h]) != mor[f]) return false;
            }
        }
        return true;
    };
    std::function<bool(std::size_t)> assign_mor = [&](std::size_t i) -> bool {
        if (i == order.size()) return true;
        int f = order[i];
        for (int cand : d->hom(obj[c->dom(f)], obj[c->cod(f)])) {
            if (mused[cand] || d->is_identity(cand)) continue;
            mor[f] = cand;
            mused[cand] = 1;
            if (consistent(f) && assign_mor(i + 1)) return true;
            mused[cand] = 0;
            mor[f] = -1;
        }
        return false;
    };
    std::function<bool(int)> assign_obj = [&](int o) -> bool {
        if (o == n) {
            std::fill(mor.begin(), mor.end(), -1);
            std::fill(mused.begin(), mused.end(), 0);
            for (int x = 0; x < n; ++x) {
                mor[c->identity(x)] = d->identity(obj[x]);
                mused[d->identity(obj[x])] = 1;
            }
            return assign_mor(0);
        }
        for (int cand = 0; cand < n; ++cand) {
            if (used[cand] || pc[o] != pd[cand]) continue;
            bool ok = true;
            for (int x = 0; x < o && ok; ++x)
                ok = c->hom(o, x).size() == d->hom(cand, obj[x]).size() &&
                     c->hom(x, o).size() == d->hom(obj[x], cand).size();
            if (!ok) continue;
            obj[o] = cand;
            used[cand] = 1;
            if (assign_obj(o + 1)) return true;
            used[cand] = 0;
        }
        obj[o] = -1;
        return false;
    };
    if (!assign_obj(0)) return std::nullopt;
    FinFunctor f{c, d, obj, mor};
    if (!validate_functor(f).empty()) return std::nullopt;
    return f;
}

std::vector<Violation> validate_nat_trans(const FinNatTrans& t) {
    std::vector<Violation> vs;
    const auto& s = *t.source.source;
    const auto& tgt = *t.source.target;
    if (!(*t.source.source == *t.target.source) || !(*t.source.target == *t.target.target)) {
        vs.push_back({ViolationKind::Malformed, "functors are not parallel", {}});
        return vs;
    }
    if (static_cast<int>(t.components.size()) != s.num_objects()) {
        vs.push_back({ViolationKind::Malformed, "components do not cover the source category", {}});
        return vs;
    }
    for (int o = 0; o < s.num_objects(); ++o) {
        int c = t.components[o];
        if (c < 0 || c >= tgt.num_morphisms() || tgt.dom(c) != t.source.obj(o) || tgt.cod(c) != t.target.obj(o))
            vs.push_back({ViolationKind::Malformed, "component at " + s.object_name(o) + " is ill-typed", {s.object_name(o)}});
    }
    if (!vs.empty()) return vs;
    for (int m = 0; m < s.num_morphisms(); ++m) {
        int a = s.dom(m), b = s.cod(m);
        if (tgt.compose(t.target.mor(m), t.components[a]) != tgt.compose(t.components[b], t.source.mor(m)))
            vs.push_back({ViolationKind::BrokenNaturality, "naturality square fails at " + s.morphism_name(m),
                          {s.morphism_name(m)}});
    }
    return vs;
}

// --- reflections -----------------------------------------------------------------

Reflection identity_reflection(CategoryPtr c) {
    Reflection r{identity_functor(c), identity_functor(c), {}};
    for (int o = 0; o < c->num_objects(); ++o) r.unit.push_back(c->identity(o));
    return r;
}

namespace {

void require_shape(const Reflection& r) {
    if (!r.left.source || !r.left.target || !r.right.source || !r.right.target)
        throw ShapeMismatch("reflection functors are incomplete");
    if (!(*r.left.source == *r.right.target) || !(*r.left.target == *r.right.source))
        throw ShapeMismatch("L : B -> A and F : A -> B do not compose as stated");
    if (static_cast<int>(r.unit.size()) != r.left.source->num_objects())
        throw ShapeMismatch("unit does not have one component per object of B");
}

}  // namespace

std::optional<int> transpose(const Reflection& r, int b, int a, int u) {
    const auto& B = *r.big();
    const auto& A = *r.small();
    std::optional<int> found;
    for (int v : A.hom(r.left.obj(b), a)) {
        if (B.compose(r.right.mor(v), r.unit[b]) != u) continue;
        if (found) return std::nullopt;
        found = v;
    }
    return found;
}

std::vector<int> reflection_counit(const Reflection& r) {
    const auto& A = *r.small();
    const auto& B = *r.big();
    std::vector<int> out(A.num_objects(), -1);
    for (int a = 0; a < A.num_objects(); ++a) {
        int fa = r.right.obj(a);
        if (auto v = transpose(r, fa, a, B.identity(fa))) out[a] = *v;
    }
    return out;
}

Verdict check_adjunction(const Reflection& r) {
    require_shape(r);
    const auto& B = *r.big();
    const auto& A = *r.small();
    Verdict v;
    v.property = "adjunction";
    v.bounds = {{"exhaustive", true}};
    auto fail = [&](json w, std::string note) {
        v.status = Status::Fail;
        v.witness = std::move(w);
        v.note = std::move(note);
        return v;
    };
    for (const auto* f : {&r.left, &r.right}) {
        auto vs = validate_functor(*f);
        if (!vs.empty())
            return fail({{"kind", "functor"}, {"functor", f == &r.left ? "L" : "F"}, {"violation", vs.front().message}},
                        "functor invalid");
    }
    for (int b = 0; b < B.num_objects(); ++b) {
        int u = r.unit[b];
        int flb = r.right.obj(r.left.obj(b));
        if (u < 0 || u >= B.num_morphisms() || B.dom(u) != b || B.cod(u) != flb)
            return fail({{"kind", "unit-ill-typed"}, {"b", B.object_name(b)}}, "unit component is not a morphism b -> F L b");
    }
    for (int m = 0; m < B.num_morphisms(); ++m) {
        int b = B.dom(m), b2 = B.cod(m);
        if (B.compose(r.right.mor(r.left.mor(m)), r.unit[b]) != B.compose(r.unit[b2], m))
            return fail({{"kind", "unit-not-natural"}, {"b", B.object_name(b)}, {"morphism", B.morphism_name(m)}},
                        "unit is not natural");
    }
    if (!is_full_and_faithful(r.right))
        return fail({{"kind", "not-full-and-faithful"}}, "F is not full and faithful");

    std::int64_t pairs = 0, instances = 0;
    for (int b = 0; b < B.num_objects(); ++b)
        for (int a = 0; a < A.num_objects(); ++a) {
            ++pairs;
            for (int u : B.hom(b, r.right.obj(a))) {
                ++instances;
                int count = 0;
                for (int w : A.hom(r.left.obj(b), a))
                    if (B.compose(r.right.mor(w), r.unit[b]) == u) ++count;
                if (count != 1)
                    return fail({{"kind", "factorization"},
                                 {"b", B.object_name(b)},
                                 {"a", A.object_name(a)},
                                 {"u", B.morphism_name(u)},
                                 {"factorizations", count}},
                                count == 0 ? "no factorization" : "non-unique factorization");
            }
        }
    v.stats["hom_pairs"] = pairs;
    v.stats["factorizations"] = instances;
    return v;
}

}  // namespace finitopos
