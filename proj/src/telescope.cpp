#include "volchain/telescope.hpp"

#include <array>
#include <cmath>
#include <string>

namespace volchain {

int TelescopeBuild::min_levels(int n) {
    int k = 0;
    while ((1LL << (k + 1)) <= 4LL * n) ++k;  // floor(log2(4n))
    return k + 1;
}

TelescopeBuild::TelescopeBuild(int n, std::optional<int> K)
    : TelescopeBuild(std::make_shared<DeltaComplex>(), n, K, nullptr) {}

TelescopeBuild::TelescopeBuild(std::shared_ptr<DeltaComplex> cx, int n, std::optional<int> K,
                               const PreseedHook& hook)
    : n_(n), cx_(std::move(cx)) {
    if (n_ < 1) throw PreconditionError("telescope: twist count must be >= 1");
    K_ = K.value_or(min_levels(n_));
    if (K_ < min_levels(n_))
        throw PreconditionError("telescope: K = " + std::to_string(K_) + " below minimum " +
                                std::to_string(min_levels(n_)));
    init(hook ? &hook : nullptr);
}

void TelescopeBuild::init(const PreseedHook* hook) {
    radial_ = std::make_shared<DeltaComplex>();
    mu_ = std::make_shared<DeltaComplex>();

    // transverse factor: two vertices joined by n+1 parallel arcs
    mu_v_[0] = mu_->add_vertex("P");
    mu_v_[1] = mu_->add_vertex("Q");
    for (int k = 0; k <= n_; ++k)
        mu_arc_.push_back(mu_->add_cell(1, std::array{mu_v_[0], mu_v_[1]},
                                        std::array{mu_v_[1], mu_v_[0]}, "A" + std::to_string(k)));

    // radial factor: one circle per level, strips between consecutive levels
    for (int j = 0; j <= K_; ++j) {
        Circle c;
        c.v[0] = radial_->add_vertex("b0@" + std::to_string(j));
        c.v[1] = radial_->add_vertex("b1@" + std::to_string(j));
        c.arc[0] = radial_->add_cell(1, std::array{c.v[0], c.v[1]}, std::array{c.v[1], c.v[0]},
                                     "x0@" + std::to_string(j));
        c.arc[1] = radial_->add_cell(1, std::array{c.v[1], c.v[0]}, std::array{c.v[0], c.v[1]},
                                     "x1@" + std::to_string(j));
        circ_.push_back(c);
    }
    for (int j = 0; j < K_; ++j) {
        const Circle& lo = circ_[j];
        const Circle& hi = circ_[j + 1];
        Strip s;
        auto rung = [&](int from, int to, const char* name) {
            return radial_->add_cell(1, std::array{from, to}, std::array{to, from},
                                     std::string(name) + "@" + std::to_string(j));
        };
        // the bottom circle is traversed twice, the top circle once
        int ra = rung(lo.v[1], hi.v[1], "ra");
        int rb = rung(lo.v[0], hi.v[1], "rb");
        int rc = rung(lo.v[0], hi.v[0], "rc");
        int rd = rung(lo.v[0], hi.v[1], "rd");
        int re = rung(lo.v[1], hi.v[0], "re");
        int rf = rung(lo.v[0], hi.v[0], "rf");
        s.rung[0] = ra; s.rung[1] = rb; s.rung[2] = rc;
        s.rung[3] = rd; s.rung[4] = re; s.rung[5] = rf;
        auto tri = [&](std::array<int, 3> v, std::array<int, 3> f, const char* name) {
            return radial_->add_cell(2, v, f, std::string(name) + "@" + std::to_string(j));
        };
        s.tri[0] = tri({lo.v[0], lo.v[1], hi.v[1]}, {ra, rb, lo.arc[0]}, "t1");
        s.tri[1] = tri({lo.v[0], hi.v[0], hi.v[1]}, {hi.arc[0], rb, rc}, "t2");
        s.tri[2] = tri({lo.v[1], lo.v[0], hi.v[1]}, {rd, ra, lo.arc[1]}, "t3");
        s.tri[3] = tri({lo.v[0], lo.v[1], hi.v[0]}, {re, rf, lo.arc[0]}, "t4");
        s.tri[4] = tri({lo.v[0], hi.v[1], hi.v[0]}, {hi.arc[1], rf, rd}, "t5");
        s.tri[5] = tri({lo.v[1], lo.v[0], hi.v[0]}, {rc, re, lo.arc[1]}, "t6");
        strip_.push_back(s);
    }
    radial_->validate();

    prod_ = std::make_shared<ProductRegistry>(cx_.get(), radial_.get(), mu_.get());
    if (hook && *hook) (*hook)(*prod_, *radial_, *mu_);

    torus_cycle_ = level_cycle(0);
}

Chain TelescopeBuild::annulus(int level, int k) const {
    if (level < 0 || level > K_ || k < 0 || k > n_)
        throw std::out_of_range("annulus: bad level or twist index");
    Chain circle(radial_.get());
    circle.add(CellId{1, circ_[level].arc[0]}, Dyadic(1));
    circle.add(CellId{1, circ_[level].arc[1]}, Dyadic(1));
    Chain arc(mu_.get());
    arc.add(CellId{1, mu_arc_[k]}, Dyadic(1));
    return prod_->chain_product(circle, arc);
}

Chain TelescopeBuild::level_cycle(int level) const {
    return annulus(level, 0) - annulus(level, n_);
}

Chain TelescopeBuild::stack_block(int level, int k) {
    // One full right twist between annulus copies k-1 and k, realized by four
    // diagonal switches.  Cells follow the product pattern; the four
    // intermediate triangles are private to the block.
    const Circle& c = circ_[level];
    CellId x0{1, c.arc[0]}, x1{1, c.arc[1]};
    CellId b0{0, c.v[0]}, b1{0, c.v[1]};
    CellId Ap{1, mu_arc_[k - 1]}, Ak{1, mu_arc_[k]};
    auto& pr = *prod_;

    int P0 = pr.vertex(c.v[0], mu_v_[0]).idx;
    int P1 = pr.vertex(c.v[1], mu_v_[0]).idx;
    int Q0 = pr.vertex(c.v[0], mu_v_[1]).idx;
    int Q1 = pr.vertex(c.v[1], mu_v_[1]).idx;

    // rungs: s = verticals, d = quad diagonals, at twist parameters k-1 and k
    int s0p = pr.term(b0, Ap, 0).idx, s1p = pr.term(b1, Ap, 0).idx;
    int d0p = pr.gap(x0, Ap, 1).idx, d1p = pr.gap(x1, Ap, 1).idx;
    int s0k = pr.term(b0, Ak, 0).idx, s1k = pr.term(b1, Ak, 0).idx;
    int d0k = pr.gap(x0, Ak, 1).idx, d1k = pr.gap(x1, Ak, 1).idx;
    // Q-circle arcs
    int y0 = pr.slice(x0, mu_v_[1]).idx, y1 = pr.slice(x1, mu_v_[1]).idx;
    int x0b = pr.slice(x0, mu_v_[0]).idx, x1b = pr.slice(x1, mu_v_[0]).idx;

    // annulus triangles before/after
    int t1x0p = pr.term(x0, Ap, 1).idx, t0x0p = pr.term(x0, Ap, 0).idx;
    int t1x1p = pr.term(x1, Ap, 1).idx, t0x1p = pr.term(x1, Ap, 0).idx;
    int t1x0k = pr.term(x0, Ak, 1).idx, t0x0k = pr.term(x0, Ak, 0).idx;
    int t1x1k = pr.term(x1, Ak, 1).idx, t0x1k = pr.term(x1, Ak, 0).idx;

    DeltaComplex& cx = *cx_;
    std::string tag = "@L" + std::to_string(level) + "k" + std::to_string(k);
    // intermediate triangles of the four switches
    int i1a = cx.add_cell(2, std::array{P1, P0, Q1}, std::array{d0p, s1k, x1b}, "i1a" + tag);
    int i1b = cx.add_cell(2, std::array{P1, Q0, Q1}, std::array{y0, s1k, d1p}, "i1b" + tag);
    int i2a = cx.add_cell(2, std::array{P0, P1, Q0}, std::array{d1p, s0k, x0b}, "i2a" + tag);
    int i2b = cx.add_cell(2, std::array{P0, Q1, Q0}, std::array{y1, s0k, d0p}, "i2b" + tag);

    int tet1 = cx.add_cell(3, std::array{P1, P0, Q0, Q1}, std::array{t0x0p, i1b, i1a, t1x1p},
                           "sw1" + tag);
    int tet2 = cx.add_cell(3, std::array{P0, P1, Q1, Q0}, std::array{t0x1p, i2b, i2a, t1x0p},
                           "sw2" + tag);
    int tet3 = cx.add_cell(3, std::array{P1, P0, Q1, Q0}, std::array{i2b, t0x1k, t1x1k, i1a},
                           "sw3" + tag);
    int tet4 = cx.add_cell(3, std::array{P0, P1, Q0, Q1}, std::array{i1b, t0x0k, t1x0k, i2a},
                           "sw4" + tag);

    Chain block(cx_.get());
    for (int t : {tet1, tet2, tet3, tet4}) block.add(CellId{3, t}, Dyadic(1));
    return block;
}

const Chain& TelescopeBuild::stack(int level) {
    auto it = stack_cache_.find(level);
    if (it != stack_cache_.end()) return it->second;
    Chain sum(cx_.get());
    for (int k = 1; k <= n_; ++k) sum += stack_block(level, k);
    Chain s = -sum;  // boundary becomes annulus(level,0) - annulus(level,n)
    if (boundary(s) != level_cycle(level))
        throw std::logic_error("twist stack boundary mismatch");
    return stack_cache_.emplace(level, std::move(s)).first->second;
}

const Chain& TelescopeBuild::wrap(int j) {
    auto it = wrap_cache_.find(j);
    if (it != wrap_cache_.end()) return it->second;
    if (j < 0 || j >= K_) throw std::out_of_range("wrap: bad level");
    const Strip& s = strip_[j];
    Chain strip_chain(radial_.get());
    static constexpr int sign[6] = {1, -1, 1, 1, -1, 1};
    for (int i = 0; i < 6; ++i) strip_chain.add(CellId{2, s.tri[i]}, Dyadic(sign[i]));
    Chain mu_cycle(mu_.get());
    mu_cycle.add(CellId{1, mu_arc_[0]}, Dyadic(1));
    mu_cycle.add(CellId{1, mu_arc_[n_]}, Dyadic(-1));
    Chain c = prod_->chain_product(strip_chain, mu_cycle).scaled(Dyadic(1, 1));
    Chain want = level_cycle(j) - level_cycle(j + 1).scaled(Dyadic(1, 1));
    if (boundary(c) != want) throw std::logic_error("wrap chain boundary mismatch");
    return wrap_cache_.emplace(j, std::move(c)).first->second;
}

int TelescopeBuild::wrap_tet_count(int j) {
    const Chain& c = wrap(j);
    int count = 0;
    for (const auto& [cell, a] : c) {
        (void)a;
        if (cell.dim == 3) ++count;
    }
    return count;
}

Chain TelescopeBuild::dn() {
    Chain sum(cx_.get());
    for (int j = 0; j < K_; ++j) sum += wrap(j).scaled(Dyadic::half_pow(j));
    return sum;
}

Chain TelescopeBuild::telescope_chain() {
    return dn() + stack(K_).scaled(Dyadic::half_pow(K_));
}

SimplicialMap TelescopeBuild::level_shift(const Chain& support_chain, int from_level) const {
    if (from_level < 0 || from_level >= K_)
        throw std::out_of_range("level_shift: bad source level");
    SimplicialMap m(cx_.get(), cx_.get());
    // shift table on the radial factor
    auto shift_x = [&](int dim, int idx) -> int {
        if (dim == 0) {
            for (int j = 0; j < static_cast<int>(circ_.size()) - 1; ++j)
                for (int a = 0; a < 2; ++a)
                    if (circ_[j].v[a] == idx) return circ_[j + 1].v[a];
        } else if (dim == 1) {
            for (int j = 0; j < static_cast<int>(circ_.size()) - 1; ++j)
                for (int a = 0; a < 2; ++a)
                    if (circ_[j].arc[a] == idx) return circ_[j + 1].arc[a];
            for (int j = 0; j < static_cast<int>(strip_.size()) - 1; ++j)
                for (int a = 0; a < 6; ++a)
                    if (strip_[j].rung[a] == idx) return strip_[j + 1].rung[a];
        } else if (dim == 2) {
            for (int j = 0; j < static_cast<int>(strip_.size()) - 1; ++j)
                for (int a = 0; a < 6; ++a)
                    if (strip_[j].tri[a] == idx) return strip_[j + 1].tri[a];
        }
        return -1;
    };
    // assign images for the closure of the support
    auto assign = [&](auto&& self, CellId c) -> void {
        if (m.is_set(c)) return;
        auto key = prod_->reverse(c);
        if (!key) throw std::logic_error("level_shift: cell is not a product cell");
        ProductRegistry::PKey k = *key;
        int nx = shift_x(k.xdim, k.xidx);
        if (nx < 0) throw std::logic_error("level_shift: no shifted counterpart");
        k.xidx = nx;
        m.set(c, prod_->make(k));
        if (c.dim > 0) {
            auto f = cx_->faces(c);
            for (int i = 0; i <= c.dim; ++i) self(self, CellId{c.dim - 1, f[i]});
        }
    };
    for (const auto& [cell, a] : support_chain) {
        (void)a;
        assign(assign, cell);
    }
    (void)from_level;
    return m;
}

SimplicialMap TelescopeBuild::twist_map(const Chain& support_chain, int level) const {
    (void)level;
    SimplicialMap m(cx_.get(), cx_.get());
    auto assign = [&](auto&& self, CellId c) -> void {
        if (m.is_set(c)) return;
        auto key = prod_->reverse(c);
        if (!key) throw std::logic_error("twist_map: cell is not a product cell");
        ProductRegistry::PKey k = *key;
        if (k.kind == ProductRegistry::kTerm || k.kind == ProductRegistry::kGap) {
            int a = -1;
            for (int i = 0; i <= n_; ++i)
                if (mu_arc_[i] == k.yidx) a = i;
            if (a < 0 || a + 1 > n_)
                throw std::logic_error("twist_map: annulus index out of range");
            k.yidx = mu_arc_[a + 1];
        }
        m.set(c, prod_->make(k));
        if (c.dim > 0) {
            auto f = cx_->faces(c);
            for (int i = 0; i <= c.dim; ++i) self(self, CellId{c.dim - 1, f[i]});
        }
    };
    for (const auto& [cell, a] : support_chain) {
        (void)a;
        assign(assign, cell);
    }
    return m;
}

AnnulusPair annulus_pair(int n) {
    auto b = std::make_shared<TelescopeBuild>(n);
    AnnulusPair r;
    r.t_A = b->annulus(0, 0);
    r.t_A_twisted = b->annulus(0, n);
    r.torus_cycle = b->torus_cycle();
    r.switch_count = b->switches_per_twist();
    b->stack(0);  // realizes the switches so the count is backed by cells
    r.build = std::move(b);
    return r;
}

TwistStack twist_stack(int n) {
    auto b = std::make_shared<TelescopeBuild>(n);
    TwistStack r;
    r.chain = b->stack(0);
    r.build = std::move(b);
    return r;
}

WrapChain wrap_chain(int n) {
    auto b = std::make_shared<TelescopeBuild>(n);
    WrapChain r;
    r.chain = b->wrap(0);
    r.integral_tets = b->wrap_tet_count(0);
    r.target_boundary = b->level_cycle(0) - b->level_cycle(1).scaled(Dyadic(1, 1));
    r.build = std::move(b);
    return r;
}

TelescopeChain telescope(int n, std::optional<int> K) {
    auto b = std::make_shared<TelescopeBuild>(n, K);
    TelescopeChain r;
    r.chain = b->telescope_chain();
    r.target_boundary = b->torus_cycle();
    r.n = n;
    r.K = b->levels();
    if (boundary(r.chain) != r.target_boundary)
        throw std::logic_error("telescope: boundary identity failed");
    if (one_norm(r.chain) > Dyadic(37))
        throw std::logic_error("telescope: norm bound failed");
    r.build = std::move(b);
    return r;
}

}  // namespace volchain
