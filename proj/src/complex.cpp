#include "volchain/complex.hpp"

#include <algorithm>

namespace volchain {

int DeltaComplex::add_vertex(std::string label) {
    Cell c;
    c.v[0] = static_cast<std::int32_t>(cells_[0].size());
    cells_[0].push_back(c);
    labels_[0].push_back(std::move(label));
    return static_cast<int>(cells_[0].size()) - 1;
}

int DeltaComplex::add_cell(int dim, std::span<const int> verts, std::span<const int> faces,
                           std::string label) {
    check_dim(dim);
    if (dim == 0) throw std::invalid_argument("add_cell: use add_vertex for dimension 0");
    if (static_cast<int>(verts.size()) != dim + 1 || static_cast<int>(faces.size()) != dim + 1)
        throw std::invalid_argument("add_cell: need dim+1 vertices and faces");
    Cell c;
    for (int i = 0; i <= dim; ++i) {
        int v = verts[i];
        if (v < 0 || v >= size(0)) throw std::invalid_argument("add_cell: bad vertex id");
        int f = faces[i];
        if (f < 0 || f >= size(dim - 1)) throw std::invalid_argument("add_cell: bad face id");
        c.v[i] = v;
        c.f[i] = f;
    }
    // face i must span the vertex tuple with entry i removed
    if (dim == 1) {
        if (c.f[0] != c.v[1] || c.f[1] != c.v[0])
            throw std::invalid_argument("add_cell: edge faces must be (head, tail)");
    } else {
        for (int i = 0; i <= dim; ++i) {
            CellId fid{dim - 1, c.f[i]};
            auto fv = this->verts(fid);
            int k = 0;
            for (int j = 0; j <= dim; ++j) {
                if (j == i) continue;
                if (fv[k++] != c.v[j])
                    throw std::invalid_argument("add_cell: face " + std::to_string(i) +
                                                " vertex tuple mismatch");
            }
        }
    }
    cells_[dim].push_back(c);
    labels_[dim].push_back(std::move(label));
    return static_cast<int>(cells_[dim].size()) - 1;
}

int DeltaComplex::total_cells() const {
    int n = 0;
    for (int d = 0; d <= 3; ++d) n += size(d);
    return n;
}

std::span<const std::int32_t> DeltaComplex::verts(CellId c) const {
    if (!has(c)) throw std::out_of_range("verts: no such cell");
    return {cells_[c.dim][c.idx].v.data(), static_cast<std::size_t>(c.dim + 1)};
}

std::span<const std::int32_t> DeltaComplex::faces(CellId c) const {
    if (!has(c)) throw std::out_of_range("faces: no such cell");
    if (c.dim == 0) return {cells_[c.dim][c.idx].f.data(), 0};
    return {cells_[c.dim][c.idx].f.data(), static_cast<std::size_t>(c.dim + 1)};
}

const std::string& DeltaComplex::label(CellId c) const {
    if (!has(c)) throw std::out_of_range("label: no such cell");
    return labels_[c.dim][c.idx];
}

void DeltaComplex::set_label(CellId c, std::string label) {
    if (!has(c)) throw std::out_of_range("set_label: no such cell");
    labels_[c.dim][c.idx] = std::move(label);
}

void DeltaComplex::validate() const {
    for (int d = 2; d <= 3; ++d) {
        for (int idx = 0; idx < size(d); ++idx) {
            CellId c{d, idx};
            auto f = faces(c);
            // d_i d_j = d_{j-1} d_i for i < j, at the level of cell ids
            for (int j = 1; j <= d; ++j) {
                for (int i = 0; i < j; ++i) {
                    CellId fj{d - 1, f[j]};
                    CellId fi{d - 1, f[i]};
                    int a = (d - 1 == 0) ? -1 : faces(fj)[i];
                    int b = (d - 1 == 0) ? -1 : faces(fi)[j - 1];
                    if (d - 1 == 0) continue;
                    if (a != b)
                        throw std::logic_error("validate: face-of-face mismatch at dim " +
                                               std::to_string(d) + " cell " + std::to_string(idx));
                }
            }
        }
    }
}

void Chain::add(CellId c, const Dyadic& a) {
    if (a.is_zero()) return;
    if (!cx_ || !cx_->has(c)) throw WrongComplexError("Chain::add: cell not in complex");
    auto it = coeff_.find(c);
    if (it == coeff_.end()) {
        coeff_.emplace(c, a);
    } else {
        it->second += a;
        if (it->second.is_zero()) coeff_.erase(it);
    }
}

Dyadic Chain::coeff(CellId c) const {
    auto it = coeff_.find(c);
    return it == coeff_.end() ? Dyadic() : it->second;
}

Chain& Chain::operator+=(const Chain& o) {
    if (o.empty()) return *this;
    if (!cx_) { *this = o; return *this; }
    check_same(o);
    for (const auto& [c, a] : o.coeff_) add(c, a);
    return *this;
}

Chain& Chain::operator-=(const Chain& o) {
    if (o.empty()) return *this;
    if (!cx_) { *this = -o; return *this; }
    check_same(o);
    for (const auto& [c, a] : o.coeff_) add(c, -a);
    return *this;
}

Chain Chain::operator-() const {
    Chain r(cx_);
    for (const auto& [c, a] : coeff_) r.coeff_.emplace(c, -a);
    return r;
}

Chain Chain::scaled(const Dyadic& s) const {
    Chain r(cx_);
    if (s.is_zero()) return r;
    for (const auto& [c, a] : coeff_) r.coeff_.emplace(c, a * s);
    return r;
}

Chain Chain::part(int dim) const {
    Chain r(cx_);
    for (const auto& [c, a] : coeff_)
        if (c.dim == dim) r.coeff_.emplace(c, a);
    return r;
}

int Chain::top_dim() const {
    int d = -1;
    for (const auto& [c, a] : coeff_) d = std::max(d, c.dim);
    return d;
}

Chain boundary(const Chain& c) {
    Chain r(c.complex());
    const DeltaComplex* cx = c.complex();
    for (const auto& [cell, a] : c) {
        if (cell.dim == 0) continue;
        auto f = cx->faces(cell);
        for (int i = 0; i <= cell.dim; ++i) {
            Dyadic s = (i % 2 == 0) ? a : -a;
            r.add(CellId{cell.dim - 1, f[i]}, s);
        }
    }
    return r;
}

Dyadic one_norm(const Chain& c) {
    Dyadic n;
    for (const auto& [cell, a] : c) n += a.abs();
    return n;
}

SimplicialMap::SimplicialMap(const DeltaComplex* src, const DeltaComplex* dst)
    : src_(src), dst_(dst) {
    for (int d = 0; d <= 3; ++d) img_[d].assign(src_->size(d), -2);
}

void SimplicialMap::set(CellId from, CellId to) {
    if (!src_->has(from)) throw std::out_of_range("SimplicialMap::set: bad source cell");
    if (!dst_->has(to) || to.dim != from.dim)
        throw std::out_of_range("SimplicialMap::set: bad target cell");
    if (static_cast<int>(img_[from.dim].size()) < src_->size(from.dim))
        img_[from.dim].resize(src_->size(from.dim), -2);
    img_[from.dim][from.idx] = to.idx;
}

void SimplicialMap::set_degenerate(CellId from) {
    if (!src_->has(from)) throw std::out_of_range("SimplicialMap::set_degenerate: bad cell");
    if (static_cast<int>(img_[from.dim].size()) < src_->size(from.dim))
        img_[from.dim].resize(src_->size(from.dim), -2);
    img_[from.dim][from.idx] = -1;
}

bool SimplicialMap::is_set(CellId c) const {
    return c.idx < static_cast<int>(img_[c.dim].size()) && img_[c.dim][c.idx] != -2;
}

bool SimplicialMap::is_degenerate(CellId c) const {
    return is_set(c) && img_[c.dim][c.idx] == -1;
}

CellId SimplicialMap::image(CellId c) const {
    if (!is_set(c)) throw std::logic_error("SimplicialMap::image: unset cell");
    std::int32_t t = img_[c.dim][c.idx];
    if (t == -1) return CellId{};
    return CellId{c.dim, t};
}

void SimplicialMap::validate() const {
    for (int d = 1; d <= 3; ++d) {
        for (int idx = 0; idx < static_cast<int>(img_[d].size()); ++idx) {
            if (img_[d][idx] == -2) continue;
            CellId c{d, idx};
            if (is_degenerate(c)) continue;
            CellId t = image(c);
            auto cf = src_->faces(c);
            auto tf = dst_->faces(t);
            for (int i = 0; i <= d; ++i) {
                CellId fc{d - 1, cf[i]};
                if (!is_set(fc))
                    throw std::logic_error("SimplicialMap::validate: face image unset");
                if (is_degenerate(fc))
                    throw std::logic_error(
                        "SimplicialMap::validate: nondegenerate cell with degenerate face");
                if (image(fc).idx != tf[i])
                    throw std::logic_error("SimplicialMap::validate: face incompatibility");
            }
        }
    }
}

Chain SimplicialMap::push(const Chain& c) const {
    if (c.complex() != src_) throw WrongComplexError("SimplicialMap::push: chain not on source");
    Chain r(dst_);
    for (const auto& [cell, a] : c) {
        if (!is_set(cell)) throw std::logic_error("SimplicialMap::push: unset cell in support");
        if (is_degenerate(cell)) continue;
        r.add(image(cell), a);
    }
    return r;
}

}  // namespace volchain
