// Dense exact linear algebra over a FieldSpec.
//
// Elimination is deterministic: pivots are chosen as the first nonzero
// entry in column order, scanning rows top down. Kernel bases therefore
// come out in a reproducible order, which the code builders rely on.
#pragma once

#include "gf.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcdagc {

class Matrix {
public:
    Matrix() : f_(nullptr), rows_(0), cols_(0) {}
    Matrix(const FieldSpec* f, size_t rows, size_t cols)
        : f_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static Matrix identity(const FieldSpec& f, size_t n) {
        Matrix m(&f, n, n);
        for (size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }
    static Matrix from_rows(const FieldSpec& f, const std::vector<std::vector<uint32_t>>& rows) {
        size_t r = rows.size();
        size_t c = r == 0 ? 0 : rows[0].size();
        Matrix m(&f, r, c);
        for (size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("ragged rows");
            for (size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
        }
        return m;
    }

    const FieldSpec& field() const {
        if (!f_) throw std::logic_error("matrix without field");
        return *f_;
    }
    const FieldSpec* field_ptr() const { return f_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    uint32_t get(size_t i, size_t j) const { return a_[i * cols_ + j]; }
    void set(size_t i, size_t j, uint32_t v) { a_[i * cols_ + j] = v; }
    FieldElement at(size_t i, size_t j) const { return FieldElement(f_, get(i, j)); }

    const std::vector<uint32_t>& data() const { return a_; }

    std::vector<uint32_t> row(size_t i) const {
        return std::vector<uint32_t>(a_.begin() + long(i * cols_), a_.begin() + long((i + 1) * cols_));
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Matrix transposed() const {
        Matrix t(f_, cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                t.set(j, i, get(i, j));
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        const FieldSpec& f = field();
        if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch in product");
        Matrix r(f_, rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                uint32_t v = get(i, k);
                if (v == 0) continue;
                for (size_t j = 0; j < o.cols_; ++j) {
                    uint32_t w = o.get(k, j);
                    if (w == 0) continue;
                    r.set(i, j, f.add_idx(r.get(i, j), f.mul_idx(v, w)));
                }
            }
        return r;
    }

    std::string to_text() const {
        std::ostringstream os;
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) {
                if (j) os << ',';
                os << get(i, j);
            }
            os << '\n';
        }
        return os.str();
    }

    static Matrix from_text(const FieldSpec& f, const std::string& text) {
        std::vector<std::vector<uint32_t>> rows;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::vector<uint32_t> row;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) {
                unsigned long v = std::stoul(cell);
                if (v >= (unsigned long)f.q()) throw std::invalid_argument("matrix entry outside field");
                row.push_back(uint32_t(v));
            }
            if (!rows.empty() && row.size() != rows.front().size())
                throw std::invalid_argument("ragged matrix text");
            rows.push_back(std::move(row));
        }
        return from_rows(f, rows);
    }

private:
    const FieldSpec* f_;
    size_t rows_, cols_;
    std::vector<uint32_t> a_;
};

struct RrefResult {
    Matrix reduced;
    size_t rank = 0;
    std::vector<size_t> pivot_cols;
};

inline RrefResult rref(Matrix m) {
    const FieldSpec& f = m.field();
    RrefResult res;
    size_t r = 0;
    for (size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
        size_t sel = r;
        while (sel < m.rows() && m.get(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != r)
            for (size_t j = 0; j < m.cols(); ++j) {
                uint32_t t = m.get(r, j);
                m.set(r, j, m.get(sel, j));
                m.set(sel, j, t);
            }
        uint32_t inv = f.inv_idx(m.get(r, col));
        for (size_t j = col; j < m.cols(); ++j)
            m.set(r, j, f.mul_idx(m.get(r, j), inv));
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            uint32_t factor = m.get(i, col);
            if (factor == 0) continue;
            for (size_t j = col; j < m.cols(); ++j)
                m.set(i, j, f.sub_idx(m.get(i, j), f.mul_idx(factor, m.get(r, j))));
        }
        res.pivot_cols.push_back(col);
        ++r;
    }
    res.rank = r;
    res.reduced = std::move(m);
    return res;
}

inline size_t rank(const Matrix& m) { return rref(m).rank; }

// rows span the right null space {v : m v^T = 0}; one row per free column,
// free columns in ascending order
inline Matrix kernel_basis(const Matrix& m) {
    const FieldSpec& f = m.field();
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : rr.pivot_cols) is_pivot[c] = true;
    size_t dim = m.cols() - rr.rank;
    Matrix ker(m.field_ptr(), dim, m.cols());
    size_t out = 0;
    for (size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        ker.set(out, free_col, 1);
        for (size_t pi = 0; pi < rr.pivot_cols.size(); ++pi)
            ker.set(out, rr.pivot_cols[pi], f.neg_idx(rr.reduced.get(pi, free_col)));
        ++out;
    }
    return ker;
}

inline FieldElement det(Matrix m) {
    const FieldSpec& f = m.field();
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    uint32_t d = 1;
    size_t n = m.rows();
    for (size_t col = 0; col < n; ++col) {
        size_t sel = col;
        while (sel < n && m.get(sel, col) == 0) ++sel;
        if (sel == n) return f.zero();
        if (sel != col) {
            for (size_t j = 0; j < n; ++j) {
                uint32_t t = m.get(col, j);
                m.set(col, j, m.get(sel, j));
                m.set(sel, j, t);
            }
            d = f.neg_idx(d);
        }
        uint32_t piv = m.get(col, col);
        d = f.mul_idx(d, piv);
        uint32_t inv = f.inv_idx(piv);
        for (size_t i = col + 1; i < n; ++i) {
            uint32_t factor = f.mul_idx(m.get(i, col), inv);
            if (factor == 0) continue;
            for (size_t j = col; j < n; ++j)
                m.set(i, j, f.sub_idx(m.get(i, j), f.mul_idx(factor, m.get(col, j))));
        }
    }
    return FieldElement(m.field_ptr(), d);
}

// det(G G^T); the Gram test behind the complementary-dual check.
// G must have full row rank.
inline FieldElement gram_det(const Matrix& g) {
    if (rank(g) != g.rows())
        throw std::invalid_argument("gram_det requires a full-row-rank generator");
    return det(g * g.transposed());
}

inline bool row_space_equal(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) return false;
    if (!a.field().same_structure(b.field())) return false;
    RrefResult ra = rref(a), rb = rref(b);
    if (ra.rank != rb.rank) return false;
    for (size_t i = 0; i < ra.rank; ++i)
        if (ra.reduced.row(i) != rb.reduced.row(i)) return false;
    return true;
}

inline Matrix stack(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("stack with unequal widths");
    Matrix r(a.field_ptr(), a.rows() + b.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.get(i, j));
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) r.set(a.rows() + i, j, b.get(i, j));
    return r;
}

} // namespace lcdagc
