#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "volchain/complex.hpp"

namespace volchain::surf {

// A pants decomposition of a closed genus-g surface: 3g-3 labelled curves and
// 2g-2 pants, each pants listing its three boundary slots.  Every curve fills
// exactly two slots (a curve glued to one pants on both sides fills two slots
// of that pants).
class PantsDecomposition {
public:
    struct Slot {
        std::string curve;
        int side;  // 0 or 1: the two sides of the curve
    };

    PantsDecomposition(int genus, std::vector<std::array<Slot, 3>> pants);

    // convenience: sides assigned by reading order (first occurrence = side 0)
    static PantsDecomposition from_curve_lists(
        int genus, const std::vector<std::array<std::string, 3>>& pants);

    int genus() const { return genus_; }
    int pants_count() const { return static_cast<int>(pants_.size()); }
    const std::vector<std::array<Slot, 3>>& pants() const { return pants_; }
    const std::vector<std::string>& curves() const { return curves_; }  // sorted
    bool has_curve(const std::string& c) const;

    struct SlotRef {
        int pants = -1;
        int slot = -1;
    };
    // the side-0 and side-1 slots of a curve
    std::array<SlotRef, 2> sides(const std::string& curve) const;
    // the curve bounds one pants on both sides
    bool is_handle(const std::string& curve) const;

    friend bool operator==(const PantsDecomposition& a, const PantsDecomposition& b) {
        return a.genus_ == b.genus_ && a.pants_ == b.pants_;
    }

private:
    int genus_;
    std::vector<std::array<Slot, 3>> pants_;
    std::vector<std::string> curves_;
};

inline bool operator==(const PantsDecomposition::Slot& a, const PantsDecomposition::Slot& b) {
    return a.curve == b.curve && a.side == b.side;
}

// Marking: pants decomposition plus an integer twist coordinate per curve,
// measured against the canonical transversals of the reference standard
// triangulation.
struct Marking {
    PantsDecomposition decomposition;
    std::map<std::string, long> twists;

    static Marking zero(const PantsDecomposition& p);
    friend bool operator==(const Marking&, const Marking&) = default;
};

struct Move {
    enum class Kind { Twist, Flip };
    Kind kind;
    std::string curve;
    long amount = 0;   // Twist only, nonzero
    int genus_flag = 0;  // Flip only: 1 when the supporting subsurface is a one-holed torus
};
using MoveSequence = std::vector<Move>;

// Twist adds to the twist coordinate; Flip exchanges the curve with its
// canonical transversal.  The flipped curve gets the dual label (an appended
// apostrophe, removed again by the inverse flip), its coordinate negates, and
// in the four-holed-sphere case the two adjacent pants re-pair: with pants
// (a, c1, c2) and (a, c3, c4) the flip yields (a', c1, c3) and (a', c2, c4).
// Flip then Flip on the same curve is the identity.
Marking apply_move(const Marking& m, const Move& mv);

std::string dual_label(const std::string& curve);

// --- triangulations -----------------------------------------------------

struct CurveCells {
    int p = -1, pbar = -1;  // the two vertices on the curve
    int e = -1, ebar = -1;  // arcs p->pbar and pbar->p
};

struct QuadCells {
    std::array<int, 2> slots{};   // the two pants slots the quad joins
    CellId tri_arc_a, tri_arc_b;  // triangle carrying the slot-a / slot-b arc
    Dyadic coeff_a, coeff_b;      // their coefficients in the fundamental chain
    CellId diagonal;
    int diag_tail_slot = -1, diag_head_slot = -1;  // which slot each diagonal end sits on
    int arc_a = -1, arc_b = -1;   // the arc cells used on each side
};

struct PantsCells {
    CellId delta1, delta2;
    Dyadic delta1_coeff, delta2_coeff;
    std::array<int, 3> seam{};     // seams of delta1 between slot pairs (0,1),(1,2),(0,2)
    std::array<int, 3> seam_bar{};
    std::array<QuadCells, 3> quad;  // quads (0,1), (1,2), (2,0)
};

// Combinatorial edge path; entries traverse the edge forward or backward.
struct Transversal {
    std::vector<std::pair<CellId, bool>> path;
    int crossings = 0;  // geometric intersections with its curve
};

struct StandardTriangulation {
    PantsDecomposition decomposition;
    std::shared_ptr<DeltaComplex> complex;
    Chain fundamental;  // 16(g-1) triangles with unit coefficients
    std::map<std::string, CurveCells> curve_cells;
    std::vector<PantsCells> pants_cells;
    std::map<std::string, Transversal> transversals;
    std::map<std::string, long> twists;  // outfitting coordinates

    int triangle_count() const { return static_cast<int>(fundamental.support_size()); }
    friend bool operator==(const StandardTriangulation& a, const StandardTriangulation& b) {
        return a.decomposition == b.decomposition && a.complex == b.complex &&
               a.fundamental == b.fundamental && a.twists == b.twists;
    }
};

StandardTriangulation build_standard(const PantsDecomposition& p);
StandardTriangulation build_standard_into(std::shared_ptr<DeltaComplex> cx,
                                          const PantsDecomposition& p);

// Builds one pants' standard pattern (two spanning triangles, three split
// quadrilaterals) on the given boundary-curve cells, with the requested slot
// orientation signs.  Adds the eight triangles to the accumulator chain.
PantsCells build_pants_pattern(DeltaComplex& cx, const std::array<const CurveCells*, 3>& cc,
                               const std::array<int, 3>& sigma, const std::string& tag,
                               Chain& fundamental);

// Re-labels the transversal coordinates to match the marking; the cell
// structure is untouched.
StandardTriangulation outfit(const StandardTriangulation& t, const Marking& m);

// Applies n Dehn twists about one curve: adds n to its transversal coordinate.
StandardTriangulation twist(const StandardTriangulation& t, const std::string& curve, long n);

struct AdaptedTriangulation {
    PantsDecomposition decomposition;
    std::shared_ptr<DeltaComplex> complex;
    Chain fundamental;  // 10(g-1) triangles
    std::map<std::string, int> curve_vertex;
    std::map<std::string, int> curve_loop;
    int vertex_count = 0, arc_count = 0, triangle_count = 0;
};

AdaptedTriangulation build_adapted(const PantsDecomposition& p);

// --- hierarchy bookkeeping -----------------------------------------------

struct HierarchyLedger {
    struct Entry {
        int xi;       // complexity of the supporting subsurface, >= 2
        long length;  // number of geodesic segments
    };
    std::vector<Entry> entries;
    void validate() const;
};

struct HierarchySizes {
    long size = 0;        // |H|
    long nonannular = 0;  // ||H||   (xi != 2)
    long four = 0;        // ||H||_4 (xi == 4)
};

HierarchySizes hierarchy_sizes(const HierarchyLedger& ledger);

}  // namespace volchain::surf
