#include "volchain/surf.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace volchain::surf {

PantsDecomposition::PantsDecomposition(int genus, std::vector<std::array<Slot, 3>> pants)
    : genus_(genus), pants_(std::move(pants)) {
    if (genus_ < 2) throw MalformedDecompositionError("genus must be at least 2");
    if (static_cast<int>(pants_.size()) != 2 * genus_ - 2)
        throw MalformedDecompositionError("need 2g-2 pants, got " +
                                          std::to_string(pants_.size()));
    std::map<std::string, std::array<int, 2>> side_count;
    for (const auto& p : pants_) {
        for (const auto& s : p) {
            if (s.side != 0 && s.side != 1)
                throw MalformedDecompositionError("slot side must be 0 or 1");
            side_count[s.curve][s.side]++;
        }
    }
    for (const auto& [c, n] : side_count) {
        if (n[0] + n[1] != 2)
            throw MalformedDecompositionError("curve " + c + " fills " +
                                              std::to_string(n[0] + n[1]) + " slots, need 2");
        if (n[0] != 1 || n[1] != 1)
            throw MalformedDecompositionError("curve " + c + " needs one slot on each side");
        curves_.push_back(c);
    }
    std::sort(curves_.begin(), curves_.end());
    if (static_cast<int>(curves_.size()) != 3 * genus_ - 3)
        throw MalformedDecompositionError("need 3g-3 curves, got " +
                                          std::to_string(curves_.size()));
    // connectivity of the gluing graph
    std::vector<int> seen(pants_.size(), 0);
    std::deque<int> work{0};
    seen[0] = 1;
    while (!work.empty()) {
        int p = work.front();
        work.pop_front();
        for (const auto& s : pants_[p]) {
            for (int q = 0; q < static_cast<int>(pants_.size()); ++q) {
                if (seen[q]) continue;
                for (const auto& t : pants_[q])
                    if (t.curve == s.curve) {
                        seen[q] = 1;
                        work.push_back(q);
                        break;
                    }
            }
        }
    }
    for (int q = 0; q < static_cast<int>(pants_.size()); ++q)
        if (!seen[q]) throw MalformedDecompositionError("gluing graph is disconnected");
}

PantsDecomposition PantsDecomposition::from_curve_lists(
    int genus, const std::vector<std::array<std::string, 3>>& pants) {
    std::map<std::string, int> used;
    std::vector<std::array<Slot, 3>> slots;
    for (const auto& p : pants) {
        std::array<Slot, 3> row;
        for (int i = 0; i < 3; ++i) row[i] = Slot{p[i], used[p[i]]++};
        slots.push_back(row);
    }
    return PantsDecomposition(genus, std::move(slots));
}

bool PantsDecomposition::has_curve(const std::string& c) const {
    return std::binary_search(curves_.begin(), curves_.end(), c);
}

std::array<PantsDecomposition::SlotRef, 2> PantsDecomposition::sides(
    const std::string& curve) const {
    std::array<SlotRef, 2> out;
    for (int p = 0; p < static_cast<int>(pants_.size()); ++p)
        for (int s = 0; s < 3; ++s)
            if (pants_[p][s].curve == curve) out[pants_[p][s].side] = SlotRef{p, s};
    if (out[0].pants < 0 || out[1].pants < 0)
        throw MalformedDecompositionError("unknown curve " + curve);
    return out;
}

bool PantsDecomposition::is_handle(const std::string& curve) const {
    auto s = sides(curve);
    return s[0].pants == s[1].pants;
}

Marking Marking::zero(const PantsDecomposition& p) {
    Marking m{p, {}};
    for (const auto& c : p.curves()) m.twists[c] = 0;
    return m;
}

std::string dual_label(const std::string& curve) {
    if (!curve.empty() && curve.back() == '\'') return curve.substr(0, curve.size() - 1);
    return curve + "'";
}

Marking apply_move(const Marking& m, const Move& mv) {
    if (!m.decomposition.has_curve(mv.curve))
        throw MarkingMismatchError("move references unknown curve " + mv.curve);
    if (mv.kind == Move::Kind::Twist) {
        if (mv.amount == 0) throw PreconditionError("Twist by 0 is not a move");
        Marking out = m;
        out.twists[mv.curve] += mv.amount;
        return out;
    }
    // flip
    bool handle = m.decomposition.is_handle(mv.curve);
    if ((mv.genus_flag == 1) != handle)
        throw MarkingMismatchError("flip genus flag does not match the subsurface of " +
                                   mv.curve);
    std::string fresh = dual_label(mv.curve);
    if (m.decomposition.has_curve(fresh))
        throw MarkingMismatchError("dual label " + fresh + " already in use");
    long t = m.twists.at(mv.curve);

    const auto& pants = m.decomposition.pants();
    std::vector<std::array<std::string, 3>> lists;
    if (handle) {
        for (const auto& p : pants) {
            std::array<std::string, 3> row;
            for (int i = 0; i < 3; ++i)
                row[i] = (p[i].curve == mv.curve) ? fresh : p[i].curve;
            lists.push_back(row);
        }
    } else {
        auto sr = m.decomposition.sides(mv.curve);
        int u = sr[0].pants, v = sr[1].pants;
        std::vector<std::string> uo, vo;  // the other boundary slots, in order
        for (const auto& s : pants[u])
            if (s.curve != mv.curve) uo.push_back(s.curve);
        for (const auto& s : pants[v])
            if (s.curve != mv.curve) vo.push_back(s.curve);
        for (int p = 0; p < static_cast<int>(pants.size()); ++p) {
            if (p == u) {
                lists.push_back({fresh, uo[0], vo[0]});
            } else if (p == v) {
                lists.push_back({fresh, uo[1], vo[1]});
            } else {
                lists.push_back({pants[p][0].curve, pants[p][1].curve, pants[p][2].curve});
            }
        }
    }
    Marking out{PantsDecomposition::from_curve_lists(m.decomposition.genus(), lists), {}};
    for (const auto& [c, tw] : m.twists)
        if (c != mv.curve) out.twists[c] = tw;
    out.twists[fresh] = -t;
    return out;
}

// --- standard triangulation ----------------------------------------------

namespace {

struct DirectedCell {
    int id = -1;
    int tail = -1, head = -1;
};

struct TriPlan {
    std::array<int, 3> verts;
    std::array<int, 3> faces;
    int arc = -1;   // the arc cell used
    int seam = -1;  // the seam cell used
};

// All triangles on the three directed edges {arc, seam, diag}, one face each.
void enumerate_triangles(const DirectedCell& arc, const DirectedCell& seam,
                         const DirectedCell& diag, std::vector<TriPlan>& out) {
    const DirectedCell* cells[3] = {&arc, &seam, &diag};
    int perm[3] = {0, 1, 2};
    std::sort(perm, perm + 3);
    do {
        const DirectedCell& f0 = *cells[perm[0]];
        const DirectedCell& f1 = *cells[perm[1]];
        const DirectedCell& f2 = *cells[perm[2]];
        int t0 = f1.tail;
        if (f2.tail != t0) continue;
        int t1 = f2.head;
        if (f0.tail != t1) continue;
        int t2 = f0.head;
        if (f1.head != t2) continue;
        TriPlan tp;
        tp.verts = {t0, t1, t2};
        tp.faces = {f0.id, f1.id, f2.id};
        tp.arc = arc.id;
        tp.seam = seam.id;
        out.push_back(tp);
    } while (std::next_permutation(perm, perm + 3));
}

int face_sign_of(const TriPlan& t, int cell) {
    int s = 0;
    if (t.faces[0] == cell) s += 1;
    if (t.faces[1] == cell) s -= 1;
    if (t.faces[2] == cell) s += 1;
    return s;
}

struct QuadRealization {
    int diag_option;  // index into the diagonal candidates
    TriPlan tri_a, tri_b;  // tri_a carries the slot-a side arc
    int ca = 1, cb = 1;
};

}  // namespace

PantsCells build_pants_pattern(DeltaComplex& cx, const std::array<const CurveCells*, 3>& cc,
                               const std::array<int, 3>& sigma, const std::string& tag,
                               Chain& fundamental) {
    static constexpr std::array<std::array<int, 2>, 3> kQuadPairs{{{0, 1}, {1, 2}, {2, 0}}};
    static constexpr std::array<std::array<int, 2>, 3> kSeamPairs{{{0, 1}, {1, 2}, {0, 2}}};
    PantsCells pc;

    for (int q = 0; q < 3; ++q) {
        auto [i, j] = kSeamPairs[q];
        pc.seam[q] = cx.add_cell(1, std::array{cc[i]->p, cc[j]->p},
                                 std::array{cc[j]->p, cc[i]->p},
                                 "s" + std::to_string(i) + std::to_string(j) + tag);
        pc.seam_bar[q] = cx.add_cell(1, std::array{cc[i]->pbar, cc[j]->pbar},
                                     std::array{cc[j]->pbar, cc[i]->pbar},
                                     "sb" + std::to_string(i) + std::to_string(j) + tag);
    }
    pc.delta1 = CellId{2, cx.add_cell(2, std::array{cc[0]->p, cc[1]->p, cc[2]->p},
                                      std::array{pc.seam[1], pc.seam[2], pc.seam[0]},
                                      "delta1" + tag)};
    pc.delta2 = CellId{2, cx.add_cell(2, std::array{cc[0]->pbar, cc[1]->pbar, cc[2]->pbar},
                                      std::array{pc.seam_bar[1], pc.seam_bar[2],
                                                 pc.seam_bar[0]},
                                      "delta2" + tag)};

    auto seam_idx = [&](int i, int j) {
        for (int q = 0; q < 3; ++q)
            if ((kSeamPairs[q][0] == std::min(i, j)) && (kSeamPairs[q][1] == std::max(i, j)))
                return q;
        throw std::logic_error("seam_idx");
    };

    struct QuadSetup {
        int a, b;
        DirectedCell s, sbar;
        std::array<DirectedCell, 4> diag;
        std::array<int, 4> diag_tail_slot{}, diag_head_slot{};
        std::array<DirectedCell, 4> arcs;
    };
    std::array<QuadSetup, 3> quads;
    for (int q = 0; q < 3; ++q) {
        auto [a, b] = kQuadPairs[q];
        QuadSetup& Q = quads[q];
        Q.a = a;
        Q.b = b;
        int si = seam_idx(a, b);
        int lo = kSeamPairs[si][0];
        Q.s = DirectedCell{pc.seam[si], cc[lo]->p, cc[kSeamPairs[si][1]]->p};
        Q.sbar = DirectedCell{pc.seam_bar[si], cc[lo]->pbar, cc[kSeamPairs[si][1]]->pbar};
        Q.arcs[0] = DirectedCell{cc[a]->e, cc[a]->p, cc[a]->pbar};
        Q.arcs[1] = DirectedCell{cc[a]->ebar, cc[a]->pbar, cc[a]->p};
        Q.arcs[2] = DirectedCell{cc[b]->e, cc[b]->p, cc[b]->pbar};
        Q.arcs[3] = DirectedCell{cc[b]->ebar, cc[b]->pbar, cc[b]->p};
        Q.diag[0] = DirectedCell{-1, cc[a]->p, cc[b]->pbar};
        Q.diag_tail_slot[0] = a; Q.diag_head_slot[0] = b;
        Q.diag[1] = DirectedCell{-1, cc[b]->pbar, cc[a]->p};
        Q.diag_tail_slot[1] = b; Q.diag_head_slot[1] = a;
        Q.diag[2] = DirectedCell{-1, cc[a]->pbar, cc[b]->p};
        Q.diag_tail_slot[2] = a; Q.diag_head_slot[2] = b;
        Q.diag[3] = DirectedCell{-1, cc[b]->p, cc[a]->pbar};
        Q.diag_tail_slot[3] = b; Q.diag_head_slot[3] = a;
    }

    auto delta1_seam_coeff = [&](int q) {
        if (q == 0) return 1;
        if (q == 1) return 1;
        return -1;
    };

    for (int d1 = 1; d1 >= -1; d1 -= 2) {
        for (int d2 = 1; d2 >= -1; d2 -= 2) {
            std::array<std::vector<QuadRealization>, 3> options;
            bool feasible = true;
            for (int q = 0; q < 3 && feasible; ++q) {
                QuadSetup& Q = quads[q];
                int si = seam_idx(Q.a, Q.b);
                int need_s = -d1 * delta1_seam_coeff(si);
                int need_sbar = -d2 * delta1_seam_coeff(si);
                for (int dopt = 0; dopt < 4; ++dopt) {
                    DirectedCell diag = Q.diag[dopt];
                    diag.id = -1000 - dopt;
                    std::vector<TriPlan> cands;
                    for (int ai = 0; ai < 4; ++ai) {
                        enumerate_triangles(Q.arcs[ai], Q.s, diag, cands);
                        enumerate_triangles(Q.arcs[ai], Q.sbar, diag, cands);
                    }
                    for (std::size_t x = 0; x < cands.size(); ++x) {
                        for (std::size_t y = 0; y < cands.size(); ++y) {
                            const TriPlan& A = cands[x];
                            const TriPlan& B = cands[y];
                            bool a_ok = A.arc == Q.arcs[0].id || A.arc == Q.arcs[1].id;
                            bool b_ok = B.arc == Q.arcs[2].id || B.arc == Q.arcs[3].id;
                            if (!a_ok || !b_ok || A.arc == B.arc) continue;
                            if (A.seam == B.seam) continue;
                            for (int sa = 1; sa >= -1; sa -= 2) {
                                for (int sb = 1; sb >= -1; sb -= 2) {
                                    if (sa * face_sign_of(A, diag.id) +
                                            sb * face_sign_of(B, diag.id) != 0)
                                        continue;
                                    int ssum = sa * face_sign_of(A, Q.s.id) +
                                               sb * face_sign_of(B, Q.s.id);
                                    int sbsum = sa * face_sign_of(A, Q.sbar.id) +
                                                sb * face_sign_of(B, Q.sbar.id);
                                    if (ssum != need_s || sbsum != need_sbar) continue;
                                    options[q].push_back(QuadRealization{dopt, A, B, sa, sb});
                                }
                            }
                        }
                    }
                }
                feasible = !options[q].empty();
            }
            if (!feasible) continue;
            std::map<int, int> target;
            for (int s = 0; s < 3; ++s) {
                target[cc[s]->e] += sigma[s];
                target[cc[s]->ebar] += sigma[s];
            }
            for (const auto& r0 : options[0]) {
                for (const auto& r1 : options[1]) {
                    for (const auto& r2 : options[2]) {
                        std::map<int, int> got;
                        for (const QuadRealization* r : {&r0, &r1, &r2}) {
                            got[r->tri_a.arc] += r->ca * face_sign_of(r->tri_a, r->tri_a.arc);
                            got[r->tri_b.arc] += r->cb * face_sign_of(r->tri_b, r->tri_b.arc);
                        }
                        bool ok = true;
                        for (const auto& [cell, want] : target)
                            if (got[cell] != want) ok = false;
                        for (const auto& [cell, have] : got)
                            if (target.find(cell) == target.end() && have != 0) ok = false;
                        if (!ok) continue;
                        pc.delta1_coeff = Dyadic(d1);
                        pc.delta2_coeff = Dyadic(d2);
                        fundamental.add(pc.delta1, Dyadic(d1));
                        fundamental.add(pc.delta2, Dyadic(d2));
                        const QuadRealization* rs[3] = {&r0, &r1, &r2};
                        for (int q = 0; q < 3; ++q) {
                            QuadSetup& Q = quads[q];
                            const QuadRealization& r = *rs[q];
                            DirectedCell dg = Q.diag[r.diag_option];
                            int placeholder = -1000 - r.diag_option;
                            dg.id = cx.add_cell(1, std::array{dg.tail, dg.head},
                                                std::array{dg.head, dg.tail},
                                                "diag" + std::to_string(q) + tag);
                            auto fix = [&](TriPlan t) {
                                for (auto& f : t.faces)
                                    if (f == placeholder) f = dg.id;
                                return t;
                            };
                            TriPlan A = fix(r.tri_a), B = fix(r.tri_b);
                            QuadCells qc;
                            qc.slots = {Q.a, Q.b};
                            qc.diagonal = CellId{1, dg.id};
                            qc.diag_tail_slot = Q.diag_tail_slot[r.diag_option];
                            qc.diag_head_slot = Q.diag_head_slot[r.diag_option];
                            qc.arc_a = A.arc;
                            qc.arc_b = B.arc;
                            qc.tri_arc_a =
                                CellId{2, cx.add_cell(2, A.verts, A.faces,
                                                      "q" + std::to_string(q) + "a" + tag)};
                            qc.tri_arc_b =
                                CellId{2, cx.add_cell(2, B.verts, B.faces,
                                                      "q" + std::to_string(q) + "b" + tag)};
                            qc.coeff_a = Dyadic(r.ca);
                            qc.coeff_b = Dyadic(r.cb);
                            fundamental.add(qc.tri_arc_a, qc.coeff_a);
                            fundamental.add(qc.tri_arc_b, qc.coeff_b);
                            pc.quad[q] = qc;
                        }
                        return pc;
                    }
                }
            }
        }
    }
    throw std::logic_error("build_pants_pattern: no pattern for the requested slot signs");
}

StandardTriangulation build_standard_into(std::shared_ptr<DeltaComplex> cxp,
                                          const PantsDecomposition& pd) {
    StandardTriangulation st{pd, std::move(cxp), Chain{}, {}, {}, {}, {}};
    DeltaComplex& cx = *st.complex;
    st.fundamental = Chain(&cx);

    for (const auto& c : pd.curves()) {
        CurveCells cc;
        cc.p = cx.add_vertex("p_" + c);
        cc.pbar = cx.add_vertex("pbar_" + c);
        cc.e = cx.add_cell(1, std::array{cc.p, cc.pbar}, std::array{cc.pbar, cc.p}, "e_" + c);
        cc.ebar = cx.add_cell(1, std::array{cc.pbar, cc.p}, std::array{cc.p, cc.pbar},
                              "ebar_" + c);
        st.curve_cells[c] = cc;
        st.twists[c] = 0;
    }

    static constexpr std::array<std::array<int, 2>, 3> kSeamPairs{{{0, 1}, {1, 2}, {0, 2}}};

    for (int pi = 0; pi < pd.pants_count(); ++pi) {
        const auto& slots = pd.pants()[pi];
        std::array<const CurveCells*, 3> cc{};
        std::array<int, 3> sigma{};
        for (int s = 0; s < 3; ++s) {
            cc[s] = &st.curve_cells.at(slots[s].curve);
            sigma[s] = slots[s].side == 0 ? 1 : -1;
        }
        st.pants_cells.push_back(build_pants_pattern(cx, cc, sigma,
                                                     "@P" + std::to_string(pi),
                                                     st.fundamental));
    }

    // canonical transversals
    for (const auto& c : pd.curves()) {
        auto sr = pd.sides(c);
        Transversal tv;
        if (pd.is_handle(c)) {
            const PantsCells& pc = st.pants_cells[sr[0].pants];
            int i = std::min(sr[0].slot, sr[1].slot);
            int j = std::max(sr[0].slot, sr[1].slot);
            int si = -1;
            for (int q = 0; q < 3; ++q)
                if (kSeamPairs[q][0] == i && kSeamPairs[q][1] == j) si = q;
            tv.path = {{CellId{1, pc.seam[si]}, true}};
            tv.crossings = 1;
        } else {
            const CurveCells& ccv = st.curve_cells.at(c);
            for (int side = 0; side < 2; ++side) {
                int pi = sr[side].pants;
                int slot = sr[side].slot;
                const PantsCells& pc = st.pants_cells[pi];
                int opp = (slot == 0) ? 1 : (slot == 1 ? 2 : 0);
                std::vector<CellId> edges;
                for (int q = 0; q < 3; ++q) {
                    edges.push_back(CellId{1, pc.seam[q]});
                    edges.push_back(CellId{1, pc.seam_bar[q]});
                }
                edges.push_back(pc.quad[opp].diagonal);
                int from = side == 0 ? ccv.p : ccv.pbar;
                int to = side == 0 ? ccv.pbar : ccv.p;
                std::map<int, std::pair<CellId, bool>> parent;
                std::deque<int> bfs{from};
                std::set<int> seen{from};
                while (!bfs.empty() && !seen.count(to)) {
                    int v = bfs.front();
                    bfs.pop_front();
                    for (CellId e : edges) {
                        auto vv = cx.verts(e);
                        int nxt = -1;
                        bool fwd = true;
                        if (vv[0] == v) { nxt = vv[1]; fwd = true; }
                        else if (vv[1] == v) { nxt = vv[0]; fwd = false; }
                        if (nxt < 0 || seen.count(nxt)) continue;
                        seen.insert(nxt);
                        parent[nxt] = {e, fwd};
                        bfs.push_back(nxt);
                    }
                }
                if (!seen.count(to))
                    throw std::logic_error("transversal path search failed for " + c);
                std::vector<std::pair<CellId, bool>> rev;
                int cur = to;
                while (cur != from) {
                    auto [e, fwd] = parent[cur];
                    rev.push_back({e, fwd});
                    auto vv = cx.verts(e);
                    cur = fwd ? vv[0] : vv[1];
                }
                for (auto it = rev.rbegin(); it != rev.rend(); ++it) tv.path.push_back(*it);
            }
            tv.crossings = 2;
        }
        st.transversals[c] = tv;
    }

    cx.validate();
    if (!boundary(st.fundamental).empty())
        throw std::logic_error("build_standard: fundamental chain is not a cycle");
    return st;
}

StandardTriangulation build_standard(const PantsDecomposition& pd) {
    return build_standard_into(std::make_shared<DeltaComplex>(), pd);
}

StandardTriangulation outfit(const StandardTriangulation& t, const Marking& m) {
    if (!(t.decomposition == m.decomposition))
        throw MarkingMismatchError("marking lives on a different pants decomposition");
    StandardTriangulation out = t;
    for (const auto& [c, tw] : m.twists) {
        if (!t.decomposition.has_curve(c))
            throw MarkingMismatchError("marking twists unknown curve " + c);
        out.twists[c] = tw;
    }
    return out;
}

StandardTriangulation twist(const StandardTriangulation& t, const std::string& curve, long n) {
    if (!t.decomposition.has_curve(curve))
        throw MarkingMismatchError("twist on unknown curve " + curve);
    StandardTriangulation out = t;
    out.twists[curve] += n;
    return out;
}

// --- adapted triangulation -------------------------------------------------

AdaptedTriangulation build_adapted(const PantsDecomposition& pd) {
    AdaptedTriangulation at{pd, std::make_shared<DeltaComplex>(), Chain{}, {}, {}, 0, 0, 0};
    DeltaComplex& cx = *at.complex;
    at.fundamental = Chain(&cx);

    for (const auto& c : pd.curves()) {
        int v = cx.add_vertex("v_" + c);
        at.curve_vertex[c] = v;
        at.curve_loop[c] = cx.add_cell(1, std::array{v, v}, std::array{v, v}, "loop_" + c);
    }

    // orient the gluing graph with every pants having in-degree 1 or 2: add a
    // phantom perfect matching on the pants, walk an Euler circuit of the
    // even-degree multigraph, and keep the directions of the real edges
    struct Edge {
        int u, v;
        bool phantom;
        std::string curve;
        int dir = 0;  // +1: u->v
    };
    std::vector<Edge> edges;
    for (const auto& c : pd.curves()) {
        auto sr = pd.sides(c);
        edges.push_back(Edge{sr[0].pants, sr[1].pants, false, c});
    }
    int np = pd.pants_count();
    for (int p = 0; p + 1 < np; p += 2) edges.push_back(Edge{p, p + 1, true, ""});
    // Hierholzer
    std::vector<std::vector<int>> inc(np);
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        inc[edges[e].u].push_back(e);
        if (edges[e].v != edges[e].u) inc[edges[e].v].push_back(e);
        else inc[edges[e].u].push_back(e);  // loop occupies two slots
    }
    std::vector<int> used(edges.size(), 0);
    std::vector<std::pair<int, int>> circuit;  // (edge, direction from current vertex)
    {
        std::vector<std::size_t> it(np, 0);
        std::vector<int> vstack{0};
        std::vector<std::pair<int, int>> path;
        while (!vstack.empty()) {
            int v = vstack.back();
            bool advanced = false;
            while (it[v] < inc[v].size()) {
                int e = inc[v][it[v]++];
                if (used[e]) continue;
                used[e] = 1;
                int w = edges[e].u == v ? edges[e].v : edges[e].u;
                int dir = edges[e].u == v ? 1 : -1;
                if (edges[e].u == edges[e].v) { w = v; dir = 1; }
                path.push_back({e, dir});
                vstack.push_back(w);
                advanced = true;
                break;
            }
            if (!advanced) {
                vstack.pop_back();
                if (!path.empty()) {
                    circuit.push_back(path.back());
                    path.pop_back();
                }
            }
        }
    }
    for (auto [e, dir] : circuit) edges[e].dir = dir;
    for (const auto& e : edges)
        if (e.dir == 0) throw std::logic_error("build_adapted: orientation walk missed an edge");

    // per-pants slot signs: tail slot +1, head slot -1; handles get one each
    std::vector<std::array<int, 3>> sigma(np, std::array<int, 3>{0, 0, 0});
    for (const auto& e : edges) {
        if (e.phantom) continue;
        auto sr = pd.sides(e.curve);
        int plus = e.dir > 0 ? 0 : 1;  // side index that acts as the tail
        sigma[sr[plus].pants][sr[plus].slot] = 1;
        sigma[sr[1 - plus].pants][sr[1 - plus].slot] = -1;
    }

    for (int pi = 0; pi < np; ++pi) {
        const auto& slots = pd.pants()[pi];
        int minus = 0;
        for (int s = 0; s < 3; ++s)
            if (sigma[pi][s] < 0) ++minus;
        if (minus < 1 || minus > 2)
            throw std::logic_error("build_adapted: bad slot signature at pants " +
                                   std::to_string(pi));
        int overall = minus == 1 ? 1 : -1;
        // the distinguished slot: the single minus (or the single plus)
        int u = -1;
        for (int s = 0; s < 3; ++s)
            if (sigma[pi][s] == -overall) u = s;
        std::array<int, 2> others{};
        int k = 0;
        for (int s = 0; s < 3; ++s)
            if (s != u) others[k++] = s;

        int U = at.curve_vertex.at(slots[u].curve);
        std::string tag = "@P" + std::to_string(pi);
        std::array<int, 2> mloops{};
        for (int a = 0; a < 2; ++a) {
            int s = others[a];
            int V = at.curve_vertex.at(slots[s].curve);
            int lv = at.curve_loop.at(slots[s].curve);
            int m = cx.add_cell(1, std::array{U, U}, std::array{U, U},
                                "m" + std::to_string(a) + tag);
            mloops[a] = m;
            int e1 = cx.add_cell(1, std::array{U, V}, std::array{V, U},
                                 "e1_" + std::to_string(a) + tag);
            int e2 = cx.add_cell(1, std::array{V, U}, std::array{U, V},
                                 "e2_" + std::to_string(a) + tag);
            int t1 = cx.add_cell(2, std::array{U, V, U}, std::array{e2, m, e1},
                                 "ann" + std::to_string(a) + "t1" + tag);
            int t2 = cx.add_cell(2, std::array{V, U, V}, std::array{e1, lv, e2},
                                 "ann" + std::to_string(a) + "t2" + tag);
            at.fundamental.add(CellId{2, t1}, Dyadic(overall));
            at.fundamental.add(CellId{2, t2}, Dyadic(-overall));
        }
        int lu = at.curve_loop.at(slots[u].curve);
        int center = cx.add_cell(2, std::array{U, U, U}, std::array{mloops[0], lu, mloops[1]},
                                 "center" + tag);
        at.fundamental.add(CellId{2, center}, Dyadic(overall));
    }

    at.vertex_count = cx.size(0);
    at.arc_count = cx.size(1);
    at.triangle_count = cx.size(2);
    cx.validate();
    if (!boundary(at.fundamental).empty())
        throw std::logic_error("build_adapted: fundamental chain is not a cycle");
    return at;
}

// --- hierarchy bookkeeping -------------------------------------------------

void HierarchyLedger::validate() const {
    for (const auto& e : entries) {
        if (e.xi < 2) throw PreconditionError("ledger: complexity must be >= 2");
        if (e.length < 0) throw PreconditionError("ledger: length must be >= 0");
        if (e.xi == 3 && e.length != 0)
            throw PreconditionError("ledger: a pants supports no geodesic (xi = 3 needs length 0)");
    }
}

HierarchySizes hierarchy_sizes(const HierarchyLedger& ledger) {
    ledger.validate();
    HierarchySizes out;
    for (const auto& e : ledger.entries) {
        out.size += e.length;
        if (e.xi != 2) out.nonannular += e.length;
        if (e.xi == 4) out.four += e.length;
    }
    return out;
}

}  // namespace volchain::surf
