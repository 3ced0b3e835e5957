#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "persheaf/rational.hpp"

namespace persheaf {

// One matrix row, kept sorted by column index; stored entries are nonzero.
using SparseRow = std::vector<std::pair<int, Rational>>;

class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
    }

    static SparseMatrix identity(int n);
    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, const Rational& v);
    void add_to(int r, int c, const Rational& v);
    Rational get(int r, int c) const;

    const SparseRow& row(int r) const { return row_[r]; }
    long nnz() const;
    bool is_zero() const;

    SparseMatrix transpose() const;
    SparseMatrix operator*(const SparseMatrix& other) const;
    SparseMatrix operator+(const SparseMatrix& other) const;
    SparseMatrix operator-(const SparseMatrix& other) const;
    SparseMatrix scaled(const Rational& s) const;
    bool operator==(const SparseMatrix& other) const;

    std::vector<Rational> apply(const std::vector<Rational>& x) const;
    std::vector<std::vector<Rational>> to_dense() const;

private:
    int rows_, cols_;
    std::vector<SparseRow> row_;
};

// Assembles a block matrix from placed sub-blocks.
class BlockBuilder {
public:
    BlockBuilder(int rows, int cols) : m_(rows, cols) {}
    void add_block(int r0, int c0, const SparseMatrix& b, const Rational& scale = 1);
    SparseMatrix take() { return std::move(m_); }

private:
    SparseMatrix m_;
};

// Reduced row echelon form together with the pivot columns.
struct Rref {
    SparseMatrix mat;
    std::vector<int> pivot_cols;
    int rank() const { return static_cast<int>(pivot_cols.size()); }
};

Rref rref(const SparseMatrix& m);

// Rank over the rationals.  rank() runs the OpenMP elimination kernel;
// rank_serial() is the plain reference kept for testing and benchmarks.
int rank(const SparseMatrix& m);
int rank_serial(const SparseMatrix& m);

// Exact basis of the null space; size == cols - rank.
std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m);

// Solves m x = b; returns nullopt when inconsistent.  When the system is
// underdetermined an arbitrary solution is returned.
std::optional<std::vector<Rational>> solve(const SparseMatrix& m, const std::vector<Rational>& b);

// Is every column of a inside the column span of b?
bool column_span_contained(const SparseMatrix& a, const SparseMatrix& b);

// Quotient of the ambient space by the column span of m: q has shape
// (n - r) x n, p is a section with q p = I and ker q = span(m).
struct QuotientMap {
    SparseMatrix q;
    SparseMatrix p;
};
QuotientMap quotient_map(const SparseMatrix& m);

// A cochain complex of finite dimensional spaces: degrees lo..hi with a
// degree-raising differential d(r): dim(r+1) x dim(r), d(r+1) d(r) = 0.
class GradedComplex {
public:
    GradedComplex() : lo_(0) {}
    GradedComplex(int lo, std::vector<int> dims) : lo_(lo), dim_(std::move(dims)) {}

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(dim_.size()) - 1; }
    int dim(int r) const {
        return (r < lo_ || r > hi()) ? 0 : dim_[r - lo_];
    }
    void set_differential(int r, SparseMatrix d);
    const SparseMatrix& differential(int r) const;  // zero-shaped when unset

    // Throws std::invalid_argument when shapes mismatch or d d != 0.
    void validate() const;

    std::map<int, int> homology() const;
    long euler_characteristic() const;

private:
    int lo_;
    std::vector<int> dim_;
    mutable std::map<int, SparseMatrix> d_;
};

}  // namespace persheaf
