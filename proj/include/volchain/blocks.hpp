#pragma once

#include <memory>
#include <string>
#include <vector>

#include "volchain/surf.hpp"
#include "volchain/telescope.hpp"

namespace volchain::blocks {

// One entry of the norm report produced by block_chain.
struct MoveReport {
    std::string kind;   // "twist-run" or "flip"
    std::string curve;
    long amount = 0;    // total twist of a run
    int integral_tets = 0;
    Dyadic norm;        // 1-norm contributed by this block
};

struct BlockChainResult {
    std::shared_ptr<DeltaComplex> complex;
    Chain chain;          // U
    Chain initial_layer;  // T_0 x {0}
    Chain final_layer;    // T_1 x {1}
    surf::Marking final_marking;
    Dyadic twist_norm;    // ||U_DT||
    Dyadic flip_norm;     // ||U_0||
    std::vector<MoveReport> report;
};

// Stacks one modified twist block per maximal run of twists about a common
// curve and one flip block per flip move.  boundary(chain) equals
// final_layer - initial_layer exactly.
BlockChainResult block_chain(const surf::StandardTriangulation& t0,
                             const surf::MoveSequence& moves);

struct TwistBlockResult {
    std::shared_ptr<DeltaComplex> complex;
    Chain chain;            // the modified block
    Chain bottom, top;      // surface copies; boundary(chain) == top - bottom
    int n0;                 // tetrahedra of the block triangulation around the cut
    Dyadic norm;
    long twists;
};

// Standalone modified twist block about a curve whose supporting subsurface
// is a one-holed torus (genus_flag 1) or four-holed sphere (genus_flag 0).
TwistBlockResult modified_twist_block(int genus_flag, long n);

// The block-triangulation size constant for each subsurface type.
int standard_block_size(int genus_flag);

// Per-flip block size constants, measured from the flip planner's scripts.
int flip_block_size(int genus_flag);

}  // namespace volchain::blocks
