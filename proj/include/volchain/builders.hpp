#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "volchain/complex.hpp"

namespace volchain {

// Lazy shuffle-product of two complexes inside a target complex.  X may have
// dimension up to 2, Y up to 1.  Cells are created on first request and shared
// afterwards, so overlapping products (a torus inside a larger assembly) reuse
// the same cells.
//
// For an x-cell s = [v0..vp] and a y-edge m = [tail -> head], the product
// carries p+1 "term" cells of dimension p+1 (term i jumps from the tail level
// to the head level after position i) and p-1 .. well, "gap" cells of
// dimension p (gap j: positions 0..j-1 at tail level, j..p at head level),
// the diagonals of the prism.  Faces follow the path-deletion rule.
class ProductRegistry {
public:
    enum Kind : int { kVertex = 0, kSlice = 1, kTerm = 2, kGap = 3 };
    struct PKey {
        int kind;  // Kind
        int xdim, xidx;
        int yidx;  // vertex id (kVertex/kSlice) or y-edge id (kTerm/kGap)
        int aux;   // shuffle/gap index
        friend auto operator<=>(const PKey&, const PKey&) = default;
    };

    ProductRegistry(DeltaComplex* target, const DeltaComplex* x, const DeltaComplex* y);

    DeltaComplex* target() const { return tgt_; }
    const DeltaComplex* x_factor() const { return x_; }
    const DeltaComplex* y_factor() const { return y_; }

    CellId vertex(int xv, int yv);
    CellId slice(CellId xc, int yv);              // copy of xc at level yv
    CellId term(CellId xc, CellId ye, int i);     // dim xc.dim+1, i in 0..dim
    CellId gap(CellId xc, CellId ye, int j);      // dim xc.dim, j in 1..dim
    CellId make(const PKey& k);

    // Registers an existing cell of the target as a product cell, so builders
    // can share boundary structure that was created elsewhere.
    void preseed_vertex(int xv, int yv, CellId existing);
    void preseed_slice(CellId xc, int yv, CellId existing);

    std::optional<PKey> reverse(CellId c) const;

    // Eilenberg-Zilber product of chains (xc of any supported dim, yc of dim
    // 0 or 1 parts).  Satisfies d(a x b) = da x b + (-1)^|a| a x db exactly.
    Chain chain_product(const Chain& xc, const Chain& yc);

private:
    void remember(const PKey& k, CellId c);

    DeltaComplex* tgt_;
    const DeltaComplex* x_;
    const DeltaComplex* y_;
    std::map<PKey, CellId> made_;
    std::map<CellId, PKey> rev_;
};

// Standard prism complex over a complex Y: builds Y x [0,1] into a fresh
// complex and returns the prism chain of a given chain of Y, with
// boundary(prism) == top - bottom + side exactly, where side is the prism
// over the boundary of the input (zero for cycles).
struct PrismResult {
    std::shared_ptr<DeltaComplex> complex;
    std::shared_ptr<ProductRegistry> product;
    Chain prism;     // (n+1)-chain
    Chain bottom;    // copy of the input chain at level 0
    Chain top;       // copy at level 1
    Chain side;      // signed prism over boundary(input)
};
PrismResult prism_over(const DeltaComplex& y, const Chain& c);

// Editor for surface 2-chains: performs diagonal flips and vertex
// insertions/deletions, recording one tetrahedron per move so that
// boundary(block) == layer_now - layer_initial holds exactly throughout.
class SurfaceEditor {
public:
    SurfaceEditor(DeltaComplex* cx, Chain initial_layer);

    const Chain& layer() const { return layer_; }
    const Chain& block() const { return block_; }
    DeltaComplex* complex() const { return cx_; }
    int move_count() const { return moves_; }

    struct FlipTargets {
        std::optional<CellId> diagonal;
        std::optional<CellId> tri_a;   // triangle on the first off-vertex side
        std::optional<CellId> tri_b;
    };

    // Flips the interior edge e (must have exactly two incident face slots in
    // the current layer).  Returns the new diagonal edge.
    CellId flip(CellId e, const FlipTargets& targets = {});

    // Splits triangle t (1->3) at a fresh vertex; returns the new vertex.
    int insert_vertex(CellId t, const std::string& label = {});

    // Inverse of insert_vertex: the star of v in the layer must be exactly
    // three triangles forming an insertion pattern.  Returns the new triangle.
    CellId remove_vertex(int v);

private:
    struct Slot { CellId tri; int slot; Dyadic coeff; };
    std::vector<Slot> slots_of(CellId e) const;

    DeltaComplex* cx_;
    Chain layer_;
    Chain block_;
    int moves_ = 0;
};

}  // namespace volchain
