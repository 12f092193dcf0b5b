#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "volchain/builders.hpp"
#include "volchain/complex.hpp"

namespace volchain {

// Assembly for the solid-torus twist constructions: an n-fold twist stack of
// annuli, the level tori reached by iterating the degree-two wrap of the
// solid torus, the wrap slabs joining consecutive levels, and the bounded
// telescope chain obtained by summing the slabs geometrically.
//
// Everything lives in a single complex.  The boundary tori are products of a
// radial factor (one 2-vertex circle per wrap level, joined by 6-triangle
// double-cover strips) with a transverse factor (two vertices joined by the
// n+1 parallel annulus arcs A_0..A_n).  The slab between levels j and j+1
// carries 36 tetrahedra; with coefficient 1/2 its 1-norm is exactly 18.
class TelescopeBuild {
public:
    // K defaults to floor(log2(4n)) + 1 and may not be chosen smaller.
    explicit TelescopeBuild(int n, std::optional<int> K = std::nullopt);

    // Variant that builds into an existing complex whose level-0 torus cells
    // were preseeded by the caller (used by the twist block): the hook is
    // called with the registry and the radial/transverse factors right before
    // any product cell is created.
    using PreseedHook = std::function<void(ProductRegistry&, const DeltaComplex& radial,
                                           const DeltaComplex& mu)>;
    TelescopeBuild(std::shared_ptr<DeltaComplex> cx, int n, std::optional<int> K,
                   const PreseedHook& hook);

    static int min_levels(int n);

    int n() const { return n_; }
    int levels() const { return K_; }
    const std::shared_ptr<DeltaComplex>& complex() const { return cx_; }
    ProductRegistry& product() { return *prod_; }

    // Boundary-torus chains.  annulus(j,k) is the k-twisted annulus copy at
    // wrap level j; level_cycle(j) = annulus(j,0) - annulus(j,n) is the torus
    // fundamental cycle there; level 0 is the outermost torus.
    Chain annulus(int level, int k) const;
    Chain level_cycle(int level) const;
    const Chain& torus_cycle() const { return torus_cycle_; }

    // Twist stack S_alpha^n at a wrap level (4n tetrahedra, exact boundary
    // equal to level_cycle(level)); built once per level and cached.
    const Chain& stack(int level);
    int switches_per_twist() const { return 4; }

    // Wrap slab chain between levels j and j+1: half the 36-tetrahedron
    // integral chain; boundary is level_cycle(j) - (1/2) level_cycle(j+1).
    const Chain& wrap(int j);
    int wrap_tet_count(int j);

    // Geometric sum of wrap slabs; boundary telescopes to
    // level_cycle(0) - 2^-K level_cycle(K).
    Chain dn();
    // dn + 2^-K stack(K); boundary is exactly torus_cycle().
    Chain telescope_chain();

    // The wrap map from level j structures to level j+1 (levels shifted by
    // one), restricted to the closure of the given chain's support.
    SimplicialMap level_shift(const Chain& support_chain, int from_level) const;

    // The right Dehn twist on the boundary torus at a level: sends the
    // k-twisted annulus cells to the (k+1)-twisted ones.
    SimplicialMap twist_map(const Chain& support_chain, int level) const;

private:
    void init(const PreseedHook* hook);
    Chain stack_block(int level, int k);  // 4 flip tetrahedra, d = A(j,k) - A(j,k-1)

    int n_;
    int K_;
    std::shared_ptr<DeltaComplex> cx_;
    std::shared_ptr<DeltaComplex> radial_;
    std::shared_ptr<DeltaComplex> mu_;
    std::shared_ptr<ProductRegistry> prod_;

    // radial factor tables
    struct Circle { int v[2]; int arc[2]; };          // arc[0]: v0->v1, arc[1]: v1->v0
    struct Strip { int rung[6]; int tri[6]; };        // 6 rungs, 6 triangles
    std::vector<Circle> circ_;
    std::vector<Strip> strip_;
    std::vector<int> mu_arc_;  // edge ids A_0..A_n in the mu factor
    int mu_v_[2] = {-1, -1};

    Chain torus_cycle_;
    std::map<int, Chain> stack_cache_;
    std::map<int, Chain> wrap_cache_;
};

// Spec-facing operations ------------------------------------------------

struct AnnulusPair {
    std::shared_ptr<TelescopeBuild> build;
    Chain t_A;          // bottom annulus chain at level 0
    Chain t_A_twisted;  // image of t_A under n right twists
    Chain torus_cycle;  // T_alpha^n
    int switch_count;   // diagonal switches realizing one full twist
};
AnnulusPair annulus_pair(int n);

struct TwistStack {
    std::shared_ptr<TelescopeBuild> build;
    Chain chain;  // S_alpha^n, 1-norm exactly 4n
};
TwistStack twist_stack(int n);

struct WrapChain {
    std::shared_ptr<TelescopeBuild> build;
    Chain chain;          // c^n, 1-norm exactly 18
    int integral_tets;    // tetrahedra of the underlying integral chain (36)
    Chain target_boundary;  // torus_cycle - (1/2) wrapped cycle
};
WrapChain wrap_chain(int n);

struct TelescopeChain {
    std::shared_ptr<TelescopeBuild> build;
    Chain chain;            // the bounded chain with boundary T_alpha^n
    Chain target_boundary;  // T_alpha^n
    int n;
    int K;
};
TelescopeChain telescope(int n, std::optional<int> K = std::nullopt);

}  // namespace volchain
