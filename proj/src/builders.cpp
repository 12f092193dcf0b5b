#include "volchain/builders.hpp"

#include <algorithm>
#include <array>

namespace volchain {

ProductRegistry::ProductRegistry(DeltaComplex* target, const DeltaComplex* x,
                                 const DeltaComplex* y)
    : tgt_(target), x_(x), y_(y) {}

void ProductRegistry::remember(const PKey& k, CellId c) {
    made_.emplace(k, c);
    rev_.emplace(c, k);
}

CellId ProductRegistry::vertex(int xv, int yv) {
    PKey k{kVertex, 0, xv, yv, 0};
    auto it = made_.find(k);
    if (it != made_.end()) return it->second;
    int id = tgt_->add_vertex(x_->label(CellId{0, xv}) + "*" + y_->label(CellId{0, yv}));
    CellId c{0, id};
    remember(k, c);
    return c;
}

void ProductRegistry::preseed_vertex(int xv, int yv, CellId existing) {
    if (!tgt_->has(existing) || existing.dim != 0)
        throw std::invalid_argument("preseed_vertex: bad cell");
    remember(PKey{kVertex, 0, xv, yv, 0}, existing);
}

void ProductRegistry::preseed_slice(CellId xc, int yv, CellId existing) {
    if (xc.dim == 0) { preseed_vertex(xc.idx, yv, existing); return; }
    if (!tgt_->has(existing) || existing.dim != xc.dim)
        throw std::invalid_argument("preseed_slice: bad cell");
    remember(PKey{kSlice, xc.dim, xc.idx, yv, 0}, existing);
}

std::optional<ProductRegistry::PKey> ProductRegistry::reverse(CellId c) const {
    auto it = rev_.find(c);
    if (it == rev_.end()) return std::nullopt;
    return it->second;
}

CellId ProductRegistry::make(const PKey& k) {
    switch (k.kind) {
        case kVertex: return vertex(k.xidx, k.yidx);
        case kSlice: return slice(CellId{k.xdim, k.xidx}, k.yidx);
        case kTerm: return term(CellId{k.xdim, k.xidx}, CellId{1, k.yidx}, k.aux);
        case kGap: return gap(CellId{k.xdim, k.xidx}, CellId{1, k.yidx}, k.aux);
    }
    throw std::logic_error("ProductRegistry::make: bad kind");
}

CellId ProductRegistry::slice(CellId xc, int yv) {
    if (xc.dim == 0) return vertex(xc.idx, yv);
    PKey k{kSlice, xc.dim, xc.idx, yv, 0};
    auto it = made_.find(k);
    if (it != made_.end()) return it->second;
    auto xv = x_->verts(xc);
    auto xf = x_->faces(xc);
    std::vector<int> vs, fs;
    for (int i = 0; i <= xc.dim; ++i) vs.push_back(slice(CellId{0, xv[i]}, yv).idx);
    for (int i = 0; i <= xc.dim; ++i) fs.push_back(slice(CellId{xc.dim - 1, xf[i]}, yv).idx);
    CellId c{xc.dim, tgt_->add_cell(xc.dim, vs, fs)};
    remember(k, c);
    return c;
}

CellId ProductRegistry::term(CellId xc, CellId ye, int i) {
    const int p = xc.dim;
    if (i < 0 || i > p) throw std::out_of_range("ProductRegistry::term: bad shuffle index");
    PKey k{kTerm, xc.dim, xc.idx, ye.idx, i};
    auto it = made_.find(k);
    if (it != made_.end()) return it->second;

    auto yv = y_->verts(ye);
    const int ytail = yv[0], yhead = yv[1];
    auto xv = x_->verts(xc);

    std::vector<int> vs;  // path vertices
    for (int m = 0; m <= p + 1; ++m) {
        int xvert = (m <= i) ? xv[m] : xv[m - 1];
        int ylev = (m <= i) ? ytail : yhead;
        vs.push_back(vertex(xvert, ylev).idx);
    }
    auto gap_resolved = [&](CellId xcell, int j) -> CellId {
        if (j == 0) return slice(xcell, yhead);
        if (j == xcell.dim + 1) return slice(xcell, ytail);
        return gap(xcell, ye, j);
    };
    std::vector<int> fs;
    for (int m = 0; m <= p + 1; ++m) {
        CellId f;
        if (m < i) {
            f = term(CellId{p - 1, x_->faces(xc)[m]}, ye, i - 1);
        } else if (m == i) {
            f = gap_resolved(xc, i);
        } else if (m == i + 1) {
            f = gap_resolved(xc, i + 1);
        } else {
            f = term(CellId{p - 1, x_->faces(xc)[m - 1]}, ye, i);
        }
        fs.push_back(f.idx);
    }
    CellId c{p + 1, tgt_->add_cell(p + 1, vs, fs)};
    remember(k, c);
    return c;
}

CellId ProductRegistry::gap(CellId xc, CellId ye, int j) {
    const int p = xc.dim;
    if (j < 1 || j > p) throw std::out_of_range("ProductRegistry::gap: bad gap index");
    PKey k{kGap, xc.dim, xc.idx, ye.idx, j};
    auto it = made_.find(k);
    if (it != made_.end()) return it->second;

    auto yv = y_->verts(ye);
    const int ytail = yv[0], yhead = yv[1];
    auto xv = x_->verts(xc);

    std::vector<int> vs;
    for (int m = 0; m <= p; ++m)
        vs.push_back(vertex(xv[m], m < j ? ytail : yhead).idx);

    auto gap_resolved = [&](CellId xcell, int jj) -> CellId {
        if (jj == 0) return slice(xcell, yhead);
        if (jj == xcell.dim + 1) return slice(xcell, ytail);
        return gap(xcell, ye, jj);
    };
    std::vector<int> fs;
    for (int m = 0; m <= p; ++m) {
        CellId xf{p - 1, x_->faces(xc)[m]};
        fs.push_back((m < j ? gap_resolved(xf, j - 1) : gap_resolved(xf, j)).idx);
    }
    CellId c{p, tgt_->add_cell(p, vs, fs)};
    remember(k, c);
    return c;
}

Chain ProductRegistry::chain_product(const Chain& xc, const Chain& yc) {
    if (xc.complex() != x_ || yc.complex() != y_)
        throw WrongComplexError("chain_product: factors on wrong complexes");
    Chain r(tgt_);
    for (const auto& [ycell, yb] : yc) {
        if (ycell.dim == 0) {
            for (const auto& [xcell, xa] : xc) r.add(slice(xcell, ycell.idx), xa * yb);
        } else if (ycell.dim == 1) {
            for (const auto& [xcell, xa] : xc) {
                const int p = xcell.dim;
                for (int i = 0; i <= p; ++i) {
                    Dyadic s = xa * yb;
                    if ((p - i) % 2 == 1) s = -s;
                    r.add(term(xcell, ycell, i), s);
                }
            }
        } else {
            throw std::invalid_argument("chain_product: y factor must have dim <= 1");
        }
    }
    return r;
}

PrismResult prism_over(const DeltaComplex& y, const Chain& c) {
    if (c.complex() != &y) throw WrongComplexError("prism_over: chain not on given complex");
    PrismResult res;
    res.complex = std::make_shared<DeltaComplex>();
    static DeltaComplex interval = [] {
        DeltaComplex iv;
        int b = iv.add_vertex("0");
        int t = iv.add_vertex("1");
        iv.add_cell(1, std::array<int, 2>{b, t}, std::array<int, 2>{t, b}, "I");
        return iv;
    }();
    res.product = std::make_shared<ProductRegistry>(res.complex.get(), &y, &interval);
    Chain v0(&interval), v1(&interval), e(&interval);
    v0.add(CellId{0, 0}, Dyadic(1));
    v1.add(CellId{0, 1}, Dyadic(1));
    e.add(CellId{1, 0}, Dyadic(1));
    res.bottom = res.product->chain_product(c, v0);
    res.top = res.product->chain_product(c, v1);
    Chain u = res.product->chain_product(c, e);
    // orient so that the top copy appears with +1
    int p = c.top_dim();
    res.prism = (p % 2 == 0) ? u : -u;
    Chain su = res.product->chain_product(boundary(c), e);
    res.side = (p % 2 == 0) ? su : -su;
    return res;
}

SurfaceEditor::SurfaceEditor(DeltaComplex* cx, Chain initial_layer)
    : cx_(cx), layer_(std::move(initial_layer)), block_(cx) {
    if (layer_.complex() != cx_) throw WrongComplexError("SurfaceEditor: layer on wrong complex");
}

std::vector<SurfaceEditor::Slot> SurfaceEditor::slots_of(CellId e) const {
    std::vector<Slot> out;
    for (const auto& [cell, a] : layer_) {
        if (cell.dim != 2) continue;
        auto f = cx_->faces(cell);
        for (int s = 0; s < 3; ++s)
            if (f[s] == e.idx) out.push_back(Slot{cell, s, a});
    }
    return out;
}

namespace {

struct TriCandidate {
    std::array<int, 3> verts;
    std::array<CellId, 3> faces;  // face i spans verts minus i
};

}  // namespace

CellId SurfaceEditor::flip(CellId e, const FlipTargets& targets) {
    if (e.dim != 1) throw std::invalid_argument("flip: not an edge");
    auto slots = slots_of(e);
    if (slots.size() != 2)
        throw PreconditionError("flip: edge has " + std::to_string(slots.size()) +
                                " incident face slots, need 2");
    const Slot s1 = slots[0], s2 = slots[1];
    if (s1.coeff.abs() != Dyadic(1) || s2.coeff.abs() != Dyadic(1))
        throw PreconditionError("flip: incident triangles must have unit coefficients");

    auto analyse = [&](const Slot& s, int& off, CellId& tail_side, CellId& head_side) {
        auto v = cx_->verts(s.tri);
        auto f = cx_->faces(s.tri);
        off = v[s.slot];
        // positions of the e-tail/e-head vertices inside the triangle tuple
        std::array<int, 2> rest{};
        int k = 0;
        for (int i = 0; i < 3; ++i)
            if (i != s.slot) rest[k++] = i;
        // face at slot rest[1] omits the head-position vertex -> contains tail
        tail_side = CellId{1, f[rest[1]]};
        head_side = CellId{1, f[rest[0]]};
    };
    int off1, off2;
    CellId tail1, head1, tail2, head2;
    analyse(s1, off1, tail1, head1);
    analyse(s2, off2, tail2, head2);
    auto ev = cx_->verts(e);
    const int etail = ev[0], ehead = ev[1];

    const Chain old_pair = [&] {
        Chain r(cx_);
        r.add(s1.tri, s1.coeff);
        r.add(s2.tri, s2.coeff);
        return r;
    }();
    const Chain old_bd = boundary(old_pair);

    struct Plan {
        bool diag_fwd;  // diagonal directed off1 -> off2
        TriCandidate ta, tb;
        Dyadic ca, cb;
    };
    std::optional<Plan> plan;

    auto try_direction = [&](bool fwd, CellId existing_diag) {
        // The search is symbolic: candidate triangles reference the real side
        // cells and (possibly) a not-yet-created diagonal, represented by an
        // invalid CellId until the plan is materialized.
        CellId d = existing_diag;
        int dv0 = fwd ? off1 : off2;
        int dv1 = fwd ? off2 : off1;

        auto cand_for = [&](CellId side_a, CellId side_b, int /*shared*/)
            -> std::vector<TriCandidate> {
            // enumerate orderings using verts: diagonal treated specially
            std::vector<TriCandidate> out;
            struct E { int t, h; CellId c; bool is_diag; };
            std::array<E, 3> es{};
            auto va = cx_->verts(side_a);
            auto vb = cx_->verts(side_b);
            es[0] = {va[0], va[1], side_a, false};
            es[1] = {vb[0], vb[1], side_b, false};
            es[2] = {dv0, dv1, d, true};
            std::array<int, 3> perm{0, 1, 2};
            do {
                const E& f0 = es[perm[0]];
                const E& f1 = es[perm[1]];
                const E& f2 = es[perm[2]];
                int t0 = f1.t, t2 = f1.h;
                if (f2.t != t0) continue;
                int t1 = f2.h;
                if (f0.t != t1 || f0.h != t2) continue;
                out.push_back(TriCandidate{{t0, t1, t2}, {f0.c, f1.c, f2.c}});
            } while (std::next_permutation(perm.begin(), perm.end()));
            return out;
        };

        auto diag_chain_sign = [&](const TriCandidate& t) {
            // coefficient of the diagonal in the candidate boundary
            Dyadic s;
            const CellId key = d;
            if (t.faces[0] == key) s += Dyadic(1);
            if (t.faces[1] == key) s -= Dyadic(1);
            if (t.faces[2] == key) s += Dyadic(1);
            return s;
        };
        auto bd_without_diag = [&](const TriCandidate& t, const Dyadic& c) {
            Chain r(cx_);
            const CellId key = d;
            if (t.faces[0] != key) r.add(t.faces[0], c);
            if (t.faces[1] != key) r.add(t.faces[1], -c);
            if (t.faces[2] != key) r.add(t.faces[2], c);
            return r;
        };

        for (const auto& ta : cand_for(tail1, tail2, etail)) {
            for (const auto& tb : cand_for(head1, head2, ehead)) {
                for (int sa : {1, -1}) {
                    for (int sb : {1, -1}) {
                        Dyadic ca(sa), cb(sb);
                        // diagonal must cancel between the two triangles
                        if (!(diag_chain_sign(ta) * ca + diag_chain_sign(tb) * cb).is_zero())
                            continue;
                        Chain bd = bd_without_diag(ta, ca) + bd_without_diag(tb, cb);
                        if (bd == old_bd) {
                            plan = Plan{fwd, ta, tb, ca, cb};
                            return true;
                        }
                    }
                }
            }
        }
        return false;
    };

    if (targets.diagonal) {
        CellId d = *targets.diagonal;
        auto dv = cx_->verts(d);
        bool fwd = (dv[0] == off1 && dv[1] == off2);
        bool bwd = (dv[0] == off2 && dv[1] == off1);
        if (!fwd && !bwd) throw PreconditionError("flip: target diagonal endpoints mismatch");
        if (!try_direction(fwd, d) && !(off1 == off2 && try_direction(!fwd, d)))
            throw PreconditionError("flip: no legal retriangulation with target diagonal");
    } else {
        CellId none{};
        if (!try_direction(true, none)) {
            if (!try_direction(false, none))
                throw PreconditionError("flip: no legal retriangulation found");
        }
    }

    // materialize the cells
    CellId d;
    if (targets.diagonal) {
        d = *targets.diagonal;
    } else {
        int dv0 = plan->diag_fwd ? off1 : off2;
        int dv1 = plan->diag_fwd ? off2 : off1;
        d = CellId{1, cx_->add_cell(1, std::array<int, 2>{dv0, dv1},
                                    std::array<int, 2>{dv1, dv0})};
    }
    auto materialize = [&](TriCandidate t, const std::optional<CellId>& target) -> CellId {
        for (auto& f : t.faces)
            if (!f.valid()) f = d;
        if (target) {
            // verify the pre-created cell matches the plan
            auto fv = cx_->faces(*target);
            for (int i = 0; i < 3; ++i)
                if (fv[i] != t.faces[i].idx)
                    throw PreconditionError("flip: target triangle face mismatch");
            return *target;
        }
        std::array<int, 3> fs{t.faces[0].idx, t.faces[1].idx, t.faces[2].idx};
        return CellId{2, cx_->add_cell(2, t.verts, fs)};
    };
    // plan stored phantom diagonal as invalid id; patch it
    for (auto* t : {&plan->ta, &plan->tb})
        for (auto& f : t->faces)
            if (!f.valid()) f = d;
    CellId ta = materialize(plan->ta, targets.tri_a);
    CellId tb = materialize(plan->tb, targets.tri_b);

    Chain new_pair(cx_);
    new_pair.add(ta, plan->ca);
    new_pair.add(tb, plan->cb);

    // tetrahedron with faces {s1.tri, s2.tri, ta, tb}
    struct F { CellId c; std::array<int, 3> v; };
    std::array<F, 4> fcs{};
    auto fill = [&](int i, CellId c) {
        auto v = cx_->verts(c);
        fcs[i] = F{c, {v[0], v[1], v[2]}};
    };
    fill(0, s1.tri); fill(1, s2.tri); fill(2, ta); fill(3, tb);

    std::array<int, 4> base{};
    {
        // candidate vertex multiset
        std::vector<int> vs{off1, off2, etail, ehead};
        std::sort(vs.begin(), vs.end());
        std::copy(vs.begin(), vs.end(), base.begin());
    }
    std::optional<std::array<int, 4>> tet_verts;
    std::optional<std::array<int, 4>> tet_faces;
    std::optional<Dyadic> tet_coeff;
    const Chain want = new_pair - old_pair;
    std::array<int, 4> order = base;
    std::sort(order.begin(), order.end());
    do {
        // face slot i needs a triangle whose vertex tuple is order minus i;
        // backtrack over the bijection to the four candidate triangles
        std::array<std::vector<int>, 4> options;
        bool feasible = true;
        for (int i = 0; i < 4 && feasible; ++i) {
            std::array<int, 3> need{};
            int k = 0;
            for (int j = 0; j < 4; ++j)
                if (j != i) need[k++] = order[j];
            for (int f = 0; f < 4; ++f)
                if (fcs[f].v == need) options[i].push_back(f);
            feasible = !options[i].empty();
        }
        if (!feasible) continue;
        std::array<int, 4> assign{-1, -1, -1, -1};
        std::array<bool, 4> used{false, false, false, false};
        auto rec = [&](auto&& self, int i) -> bool {
            if (i == 4) {
                Chain bd(cx_);
                for (int m = 0; m < 4; ++m)
                    bd.add(fcs[assign[m]].c, Dyadic(m % 2 == 0 ? 1 : -1));
                if (bd == want) { tet_coeff = Dyadic(1); return true; }
                if (bd == -want) { tet_coeff = Dyadic(-1); return true; }
                return false;
            }
            for (int f : options[i]) {
                if (used[f]) continue;
                used[f] = true;
                assign[i] = f;
                if (self(self, i + 1)) return true;
                used[f] = false;
            }
            return false;
        };
        if (rec(rec, 0)) {
            tet_verts = order;
            tet_faces = {fcs[assign[0]].c.idx, fcs[assign[1]].c.idx, fcs[assign[2]].c.idx,
                         fcs[assign[3]].c.idx};
            break;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    if (!tet_verts) throw PreconditionError("flip: no orientable tetrahedron found");

    CellId tet{3, cx_->add_cell(3, *tet_verts, *tet_faces)};
    block_.add(tet, *tet_coeff);
    layer_ -= old_pair;
    layer_ += new_pair;
    ++moves_;
    return d;
}

int SurfaceEditor::insert_vertex(CellId t, const std::string& label) {
    Dyadic c = layer_.coeff(t);
    if (c.abs() != Dyadic(1))
        throw PreconditionError("insert_vertex: triangle not in layer with unit coefficient");
    auto v = cx_->verts(t);
    auto f = cx_->faces(t);
    int a = v[0], b = v[1], cc = v[2];
    int vn = cx_->add_vertex(label);
    auto mkedge = [&](int from) {
        return cx_->add_cell(1, std::array<int, 2>{from, vn}, std::array<int, 2>{vn, from});
    };
    int ea = mkedge(a), eb = mkedge(b), ec = mkedge(cc);
    int t_bc = cx_->add_cell(2, std::array<int, 3>{b, cc, vn}, std::array<int, 3>{ec, eb, f[0]});
    int t_ac = cx_->add_cell(2, std::array<int, 3>{a, cc, vn}, std::array<int, 3>{ec, ea, f[1]});
    int t_ab = cx_->add_cell(2, std::array<int, 3>{a, b, vn}, std::array<int, 3>{eb, ea, f[2]});
    int tet = cx_->add_cell(3, std::array<int, 4>{a, b, cc, vn},
                            std::array<int, 4>{t_bc, t_ac, t_ab, t.idx});
    Chain np(cx_);
    np.add(CellId{2, t_bc}, c);
    np.add(CellId{2, t_ac}, -c);
    np.add(CellId{2, t_ab}, c);
    layer_.add(t, -c);
    layer_ += np;
    block_.add(CellId{3, tet}, c);
    ++moves_;
    return vn;
}

CellId SurfaceEditor::remove_vertex(int vn) {
    // locate the three star triangles
    std::vector<std::pair<CellId, Dyadic>> star;
    for (const auto& [cell, a] : layer_) {
        if (cell.dim != 2) continue;
        auto v = cx_->verts(cell);
        if (v[0] == vn || v[1] == vn || v[2] == vn) star.push_back({cell, a});
    }
    if (star.size() != 3) throw PreconditionError("remove_vertex: star is not three triangles");
    for (auto& [cell, a] : star) {
        auto v = cx_->verts(cell);
        if (v[2] != vn || v[0] == vn || v[1] == vn)
            throw PreconditionError("remove_vertex: star not in insertion form");
    }
    // star triangles are (b,c,vn), (a,c,vn), (a,b,vn) for some a,b,c
    // identify by matching: find the assignment among the 6 orderings
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end());
    do {
        auto vbc = cx_->verts(star[order[0]].first);
        auto vac = cx_->verts(star[order[1]].first);
        auto vab = cx_->verts(star[order[2]].first);
        int b = vbc[0], c = vbc[1];
        int a = vac[0];
        if (vac[1] != c) continue;
        if (vab[0] != a || vab[1] != b) continue;
        Dyadic cf = star[order[0]].second;
        if (star[order[1]].second != -cf || star[order[2]].second != cf) continue;
        if (cf.abs() != Dyadic(1)) continue;
        auto fbc = cx_->faces(star[order[0]].first);
        auto fac = cx_->faces(star[order[1]].first);
        auto fab = cx_->faces(star[order[2]].first);
        // shared edges to vn must match pairwise: (c,vn), (b,vn), (a,vn)
        if (fbc[0] != fac[0] || fbc[1] != fab[0] || fac[1] != fab[1]) continue;
        int t_new = cx_->add_cell(2, std::array<int, 3>{a, b, c},
                                  std::array<int, 3>{fbc[2], fac[2], fab[2]});
        int tet = cx_->add_cell(
            3, std::array<int, 4>{a, b, c, vn},
            std::array<int, 4>{star[order[0]].first.idx, star[order[1]].first.idx,
                               star[order[2]].first.idx, t_new});
        for (auto& [cell, coeff] : star) layer_.add(cell, -coeff);
        layer_.add(CellId{2, t_new}, cf);
        block_.add(CellId{3, tet}, -cf);
        ++moves_;
        return CellId{2, t_new};
    } while (std::next_permutation(order.begin(), order.end()));
    throw PreconditionError("remove_vertex: star does not match an insertion pattern");
}

}  // namespace volchain
