#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volchain/dyadic.hpp"
#include "volchain/errors.hpp"

namespace volchain {

// Identifies a cell inside a DeltaComplex as (dimension, index).
struct CellId {
    std::int32_t dim = -1;
    std::int32_t idx = -1;
    friend bool operator==(const CellId&, const CellId&) = default;
    friend auto operator<=>(const CellId&, const CellId&) = default;
    bool valid() const { return dim >= 0 && idx >= 0; }
};

// A finite Delta-complex: cells of dimension 0..3 with ordered vertex tuples
// and explicit face assignments.  face i of a d-cell is the (d-1)-cell spanned
// by its vertex tuple with the i-th entry omitted.  Loops and multiple cells
// over the same vertex tuple are allowed; faces are resolved by id, never by
// vertex lookup.
class DeltaComplex {
public:
    int add_vertex(std::string label = {});
    // verts: d+1 vertex ids, faces: d+1 face cell indices (dimension d-1).
    int add_cell(int dim, std::span<const int> verts, std::span<const int> faces,
                 std::string label = {});

    int size(int dim) const { return static_cast<int>(cells_[check_dim(dim)].size()); }
    int total_cells() const;
    std::span<const std::int32_t> verts(CellId c) const;
    std::span<const std::int32_t> faces(CellId c) const;
    const std::string& label(CellId c) const;
    void set_label(CellId c, std::string label);
    bool has(CellId c) const {
        return c.dim >= 0 && c.dim <= 3 && c.idx >= 0 &&
               c.idx < static_cast<int>(cells_[c.dim].size());
    }

    // Checks the simplicial identities: for every cell, face_i(face_j) ==
    // face_{j-1}(face_i) for i < j, and vertex tuples of faces match.
    void validate() const;

private:
    static int check_dim(int d) {
        if (d < 0 || d > 3) throw std::out_of_range("DeltaComplex: bad dimension");
        return d;
    }
    struct Cell {
        std::array<std::int32_t, 4> v{{-1, -1, -1, -1}};
        std::array<std::int32_t, 4> f{{-1, -1, -1, -1}};
    };
    std::array<std::vector<Cell>, 4> cells_;
    std::array<std::vector<std::string>, 4> labels_;
};

// Formal sum of cells with dyadic-rational coefficients.  Zero coefficients
// are never stored.  All cells must belong to the declared complex.
class Chain {
public:
    Chain() : cx_(nullptr) {}
    explicit Chain(const DeltaComplex* cx) : cx_(cx) {}

    const DeltaComplex* complex() const { return cx_; }
    bool empty() const { return coeff_.empty(); }
    std::size_t support_size() const { return coeff_.size(); }

    void add(CellId c, const Dyadic& a);
    Dyadic coeff(CellId c) const;

    Chain& operator+=(const Chain& o);
    Chain& operator-=(const Chain& o);
    friend Chain operator+(Chain a, const Chain& b) { a += b; return a; }
    friend Chain operator-(Chain a, const Chain& b) { a -= b; return a; }
    Chain operator-() const;
    Chain scaled(const Dyadic& s) const;

    friend bool operator==(const Chain& a, const Chain& b) {
        return a.cx_ == b.cx_ && a.coeff_ == b.coeff_;
    }

    auto begin() const { return coeff_.begin(); }
    auto end() const { return coeff_.end(); }

    // Cells of a single dimension, e.g. the 2-dimensional part.
    Chain part(int dim) const;
    int top_dim() const;

private:
    void check_same(const Chain& o) const {
        if (cx_ != o.cx_) throw WrongComplexError("chain arithmetic across complexes");
    }
    const DeltaComplex* cx_;
    std::map<CellId, Dyadic> coeff_;
};

// Alternating-sign face sum, exact.
Chain boundary(const Chain& c);
// Sum of |coefficients|, exact.
Dyadic one_norm(const Chain& c);

// A simplicial map between complexes: per-cell assignment to a target cell or
// to "degenerate" (image collapses).  Pushforward drops degenerate cells; this
// is the induced map on normalized chains.
class SimplicialMap {
public:
    SimplicialMap(const DeltaComplex* src, const DeltaComplex* dst);

    const DeltaComplex* src() const { return src_; }
    const DeltaComplex* dst() const { return dst_; }

    void set(CellId from, CellId to);      // nondegenerate image
    void set_degenerate(CellId from);      // image collapses in its degree
    bool is_set(CellId c) const;
    bool is_degenerate(CellId c) const;
    CellId image(CellId c) const;          // invalid CellId if degenerate

    // Face compatibility on all assigned cells; throws on violation.
    void validate() const;

    Chain push(const Chain& c) const;

private:
    const DeltaComplex* src_;
    const DeltaComplex* dst_;
    // -2 unset, -1 degenerate, else target index.
    std::array<std::vector<std::int32_t>, 4> img_;
};

}  // namespace volchain
