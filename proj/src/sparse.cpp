#include "persheaf/sparse.hpp"

#include <algorithm>
#include <limits>

#include "persheaf/parallel.hpp"

namespace persheaf {

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& d) {
    int r = static_cast<int>(d.size());
    int c = r == 0 ? 0 : static_cast<int>(d[0].size());
    SparseMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(d[i].size()) != c) throw std::invalid_argument("ragged dense matrix");
        for (int j = 0; j < c; ++j)
            if (d[i][j] != 0) m.set(i, j, d[i][j]);
    }
    return m;
}

static SparseRow::iterator find_col(SparseRow& r, int c) {
    return std::lower_bound(r.begin(), r.end(), c,
                            [](const std::pair<int, Rational>& e, int col) { return e.first < col; });
}

void SparseMatrix::set(int r, int c, const Rational& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("sparse set");
    auto& row = row_[r];
    auto it = find_col(row, c);
    if (it != row.end() && it->first == c) {
        if (v == 0) row.erase(it); else it->second = v;
    } else if (v != 0) {
        row.insert(it, {c, v});
    }
}

void SparseMatrix::add_to(int r, int c, const Rational& v) {
    if (v == 0) return;
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("sparse add");
    auto& row = row_[r];
    auto it = find_col(row, c);
    if (it != row.end() && it->first == c) {
        it->second += v;
        if (it->second == 0) row.erase(it);
    } else {
        row.insert(it, {c, v});
    }
}

Rational SparseMatrix::get(int r, int c) const {
    const auto& row = row_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const std::pair<int, Rational>& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == c) return it->second;
    return 0;
}

long SparseMatrix::nnz() const {
    long n = 0;
    for (const auto& r : row_) n += static_cast<long>(r.size());
    return n;
}

bool SparseMatrix::is_zero() const {
    for (const auto& r : row_)
        if (!r.empty()) return false;
    return true;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) t.row_[j].push_back({i, v});
    return t;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix product shape mismatch");
    SparseMatrix out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i) {
        std::map<int, Rational> acc;
        for (const auto& [k, v] : row_[i])
            for (const auto& [j, w] : other.row_[k]) acc[j] += v * w;
        auto& r = out.row_[i];
        for (auto& [j, v] : acc)
            if (v != 0) r.push_back({j, v});
    }
    return out;
}

static SparseRow axpy(const SparseRow& x, const SparseRow& y, const Rational& a) {
    // y + a*x with both rows sorted.
    SparseRow out;
    out.reserve(x.size() + y.size());
    auto ix = x.begin(), iy = y.begin();
    while (ix != x.end() || iy != y.end()) {
        if (iy == y.end() || (ix != x.end() && ix->first < iy->first)) {
            Rational v = a * ix->second;
            if (v != 0) out.push_back({ix->first, std::move(v)});
            ++ix;
        } else if (ix == x.end() || iy->first < ix->first) {
            out.push_back(*iy);
            ++iy;
        } else {
            Rational v = iy->second + a * ix->second;
            if (v != 0) out.push_back({ix->first, std::move(v)});
            ++ix;
            ++iy;
        }
    }
    return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    SparseMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i) out.row_[i] = axpy(other.row_[i], row_[i], 1);
    return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix diff shape mismatch");
    SparseMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i) out.row_[i] = axpy(other.row_[i], row_[i], -1);
    return out;
}

SparseMatrix SparseMatrix::scaled(const Rational& s) const {
    SparseMatrix out(rows_, cols_);
    if (s == 0) return out;
    for (int i = 0; i < rows_; ++i) {
        out.row_[i] = row_[i];
        for (auto& e : out.row_[i]) e.second *= s;
    }
    return out;
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && row_ == other.row_;
}

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("apply shape mismatch");
    std::vector<Rational> y(rows_, Rational(0));
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) y[i] += v * x[j];
    return y;
}

std::vector<std::vector<Rational>> SparseMatrix::to_dense() const {
    std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols_, Rational(0)));
    for (int i = 0; i < rows_; ++i)
        for (const auto& [j, v] : row_[i]) d[i][j] = v;
    return d;
}

void BlockBuilder::add_block(int r0, int c0, const SparseMatrix& b, const Rational& scale) {
    if (scale == 0) return;
    for (int i = 0; i < b.rows(); ++i)
        for (const auto& [j, v] : b.row(i)) m_.add_to(r0 + i, c0 + j, v * scale);
}

namespace {

// Gaussian elimination working set: rows as sorted sparse vectors.
struct Elim {
    std::vector<SparseRow> rows;
    std::vector<int> colcount;
    std::vector<char> active;
    int cols;

    explicit Elim(const SparseMatrix& m) : colcount(m.cols(), 0), cols(m.cols()) {
        rows.reserve(m.rows());
        for (int i = 0; i < m.rows(); ++i) {
            rows.push_back(m.row(i));
            for (const auto& [c, v] : rows.back()) ++colcount[c];
        }
        active.assign(rows.size(), 1);
    }

    // Markowitz-style pivot: minimize (row fill - 1)*(col fill - 1).
    // Correctness does not depend on the choice; this keeps fill-in down.
    std::pair<int, int> choose_pivot() const {
        long best = std::numeric_limits<long>::max();
        int br = -1, bc = -1;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (!active[i] || rows[i].empty()) continue;
            long rw = static_cast<long>(rows[i].size()) - 1;
            for (const auto& [c, v] : rows[i]) {
                long score = rw * (colcount[c] - 1);
                if (score < best) {
                    best = score;
                    br = static_cast<int>(i);
                    bc = c;
                    if (best == 0) return {br, bc};
                }
            }
        }
        return {br, bc};
    }

    void count_remove(const SparseRow& r) {
        for (const auto& [c, v] : r) --colcount[c];
    }
    void count_add(const SparseRow& r) {
        for (const auto& [c, v] : r) ++colcount[c];
    }

    // Eliminates pivot column pc using row pr from every other active row.
    // Row updates are independent, so they parallelize; the column counts
    // are fixed up afterwards on the serial path through the diffs.
    int eliminate(bool parallel) {
        int rk = 0;
        while (true) {
            auto [pr, pc] = choose_pivot();
            if (pr < 0) break;
            ++rk;
            Rational pv;
            for (const auto& [c, v] : rows[pr])
                if (c == pc) { pv = v; break; }

            std::vector<int> targets;
            for (size_t i = 0; i < rows.size(); ++i) {
                if (!active[i] || static_cast<int>(i) == pr) continue;
                auto it = std::lower_bound(rows[i].begin(), rows[i].end(), pc,
                                           [](const std::pair<int, Rational>& e, int col) { return e.first < col; });
                if (it != rows[i].end() && it->first == pc) targets.push_back(static_cast<int>(i));
            }

            auto update = [&](long t) {
                int i = targets[t];
                Rational factor = -get_entry(rows[i], pc) / pv;
                rows[i] = axpy(rows[pr], rows[i], factor);
            };

            std::vector<SparseRow> before;
            before.reserve(targets.size());
            for (int i : targets) before.push_back(rows[i]);

            if (parallel && targets.size() > 8) {
                par::parallel_for(static_cast<long>(targets.size()), update);
            } else {
                for (long t = 0; t < static_cast<long>(targets.size()); ++t) update(t);
            }

            for (size_t t = 0; t < targets.size(); ++t) {
                count_remove(before[t]);
                count_add(rows[targets[t]]);
            }
            count_remove(rows[pr]);
            active[pr] = 0;
        }
        return rk;
    }

    static Rational get_entry(const SparseRow& r, int c) {
        auto it = std::lower_bound(r.begin(), r.end(), c,
                                   [](const std::pair<int, Rational>& e, int col) { return e.first < col; });
        return (it != r.end() && it->first == c) ? it->second : Rational(0);
    }
};

}  // namespace

int rank(const SparseMatrix& m) {
    Elim e(m);
    return e.eliminate(true);
}

int rank_serial(const SparseMatrix& m) {
    Elim e(m);
    return e.eliminate(false);
}

Rref rref(const SparseMatrix& m) {
    // Gauss-Jordan, scanning columns left to right; deterministic output.
    std::vector<SparseRow> rows;
    rows.reserve(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        if (!m.row(i).empty()) rows.push_back(m.row(i));

    std::vector<int> pivots;
    size_t done = 0;  // rows above `done` are settled pivot rows
    for (int c = 0; c < m.cols() && done < rows.size(); ++c) {
        // pick the sparsest row with leading entry in column c
        int pick = -1;
        for (size_t i = done; i < rows.size(); ++i) {
            if (!rows[i].empty() && rows[i].front().first == c &&
                (pick < 0 || rows[i].size() < rows[pick].size()))
                pick = static_cast<int>(i);
        }
        if (pick < 0) continue;
        std::swap(rows[done], rows[pick]);
        Rational inv = 1 / rows[done].front().second;
        for (auto& e : rows[done]) e.second *= inv;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == done) continue;
            Rational v = Elim::get_entry(rows[i], c);
            if (v != 0) rows[i] = axpy(rows[done], rows[i], -v);
        }
        pivots.push_back(c);
        ++done;
        // rows with smaller leading column cannot exist below; re-sort lazily
        std::stable_sort(rows.begin() + done, rows.end(),
                         [](const SparseRow& a, const SparseRow& b) {
                             int ca = a.empty() ? std::numeric_limits<int>::max() : a.front().first;
                             int cb = b.empty() ? std::numeric_limits<int>::max() : b.front().first;
                             return ca < cb;
                         });
        while (rows.size() > done && rows.back().empty()) rows.pop_back();
    }

    Rref out;
    out.mat = SparseMatrix(static_cast<int>(pivots.size()), m.cols());
    for (size_t i = 0; i < pivots.size(); ++i)
        for (const auto& [c, v] : rows[i]) out.mat.set(static_cast<int>(i), c, v);
    out.pivot_cols = std::move(pivots);
    return out;
}

std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m) {
    Rref r = rref(m);
    std::vector<char> is_pivot(m.cols(), 0);
    for (int c : r.pivot_cols) is_pivot[c] = 1;

    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols(), Rational(0));
        v[f] = 1;
        for (int i = 0; i < r.mat.rows(); ++i) {
            Rational coef = r.mat.get(i, f);
            if (coef != 0) v[r.pivot_cols[i]] = -coef;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve(const SparseMatrix& m, const std::vector<Rational>& b) {
    if (static_cast<int>(b.size()) != m.rows()) throw std::invalid_argument("solve shape mismatch");
    SparseMatrix aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (const auto& [j, v] : m.row(i)) aug.set(i, j, v);
        if (b[i] != 0) aug.set(i, m.cols(), b[i]);
    }
    Rref r = rref(aug);
    std::vector<Rational> x(m.cols(), Rational(0));
    for (int i = 0; i < r.mat.rows(); ++i) {
        int pc = r.pivot_cols[i];
        if (pc == m.cols()) return std::nullopt;  // 0 = 1 row
        x[pc] = r.mat.get(i, m.cols());
    }
    return x;
}

bool column_span_contained(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("span containment shape mismatch");
    SparseMatrix both(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < b.rows(); ++i)
        for (const auto& [j, v] : b.row(i)) both.set(i, j, v);
    for (int i = 0; i < a.rows(); ++i)
        for (const auto& [j, v] : a.row(i)) both.set(i, b.cols() + j, v);
    return rank(b) == rank(both);
}

QuotientMap quotient_map(const SparseMatrix& m) {
    const int n = m.rows();
    Rref r = rref(m.transpose());  // rows of r.mat span the column space of m
    std::vector<char> is_pivot(n, 0);
    for (int c : r.pivot_cols) is_pivot[c] = 1;

    std::vector<int> free_coords;
    for (int i = 0; i < n; ++i)
        if (!is_pivot[i]) free_coords.push_back(i);

    QuotientMap qm;
    qm.q = SparseMatrix(static_cast<int>(free_coords.size()), n);
    for (size_t k = 0; k < free_coords.size(); ++k) {
        int f = free_coords[k];
        qm.q.set(static_cast<int>(k), f, 1);
        for (int i = 0; i < r.mat.rows(); ++i) {
            Rational coef = r.mat.get(i, f);
            if (coef != 0) qm.q.add_to(static_cast<int>(k), r.pivot_cols[i], -coef);
        }
    }
    qm.p = SparseMatrix(n, static_cast<int>(free_coords.size()));
    for (size_t k = 0; k < free_coords.size(); ++k) qm.p.set(free_coords[k], static_cast<int>(k), 1);
    return qm;
}

void GradedComplex::set_differential(int r, SparseMatrix d) {
    if (d.rows() != dim(r + 1) || d.cols() != dim(r))
        throw std::invalid_argument("differential shape mismatch");
    d_[r] = std::move(d);
}

const SparseMatrix& GradedComplex::differential(int r) const {
    auto it = d_.find(r);
    if (it == d_.end()) {
        auto [jt, ok] = d_.emplace(r, SparseMatrix(dim(r + 1), dim(r)));
        return jt->second;
    }
    return it->second;
}

void GradedComplex::validate() const {
    for (int r = lo(); r < hi(); ++r) {
        const SparseMatrix prod = differential(r + 1) * differential(r);
        if (!prod.is_zero()) throw std::invalid_argument("complex violates d(d(x)) = 0");
    }
}

std::map<int, int> GradedComplex::homology() const {
    std::map<int, int> h;
    std::map<int, int> rk;
    for (int r = lo(); r <= hi(); ++r) rk[r] = dim(r) == 0 || dim(r + 1) == 0 ? 0 : rank(differential(r));
    for (int r = lo(); r <= hi(); ++r) {
        int below = (r == lo()) ? 0 : rk[r - 1];
        h[r] = dim(r) - rk[r] - below;
        if (h[r] < 0) throw std::logic_error("negative homology dimension: input was not a complex");
    }
    return h;
}

long GradedComplex::euler_characteristic() const {
    long chi = 0;
    for (int r = lo(); r <= hi(); ++r) chi += (r % 2 == 0 ? 1 : -1) * static_cast<long>(dim(r));
    return chi;
}

}  // namespace persheaf
