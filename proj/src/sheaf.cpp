#include "persheaf/sheaf.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace persheaf {

std::string Diagnostics::joined() const {
    std::ostringstream os;
    for (size_t i = 0; i < problems.size(); ++i) {
        if (i) os << "; ";
        os << problems[i];
    }
    return os.str();
}

CellularSheaf::CellularSheaf(ComplexPtr k, std::vector<int> stalks)
    : k_(std::move(k)), stalk_(std::move(stalks)) {
    if (static_cast<int>(stalk_.size()) != k_->size())
        throw std::invalid_argument("one stalk dimension per simplex required");
}

void CellularSheaf::set_restriction(int sid, int tid, SparseMatrix m) {
    if (k_->sdim(tid) != k_->sdim(sid) + 1 || !k_->face_leq(sid, tid))
        throw std::invalid_argument("restrictions are stored on codimension-one incidences only");
    if (m.rows() != stalk_[tid] || m.cols() != stalk_[sid])
        throw std::invalid_argument("restriction shape mismatch");
    if (m.is_zero()) rest_.erase({sid, tid});
    else rest_[{sid, tid}] = std::move(m);
}

SparseMatrix CellularSheaf::restriction1(int sid, int tid) const {
    auto it = rest_.find({sid, tid});
    if (it != rest_.end()) return it->second;
    return SparseMatrix(stalk_[tid], stalk_[sid]);
}

static std::vector<int> saturated_chain(const SimplicialComplex& k, int sid, int tid) {
    // sid <= tid; insert the missing vertices one at a time.
    Simplex cur = k.simplex(sid);
    const Simplex& top = k.simplex(tid);
    std::vector<int> chain{sid};
    for (int v : top) {
        if (std::binary_search(cur.begin(), cur.end(), v)) continue;
        cur.insert(std::upper_bound(cur.begin(), cur.end(), v), v);
        int id = k.id_of(cur);
        if (id < 0) throw std::logic_error("face of a simplex missing from complex");
        chain.push_back(id);
    }
    return chain;
}

SparseMatrix CellularSheaf::restriction(int sid, int tid) const {
    if (sid == tid) return SparseMatrix::identity(stalk_[sid]);
    if (!k_->face_leq(sid, tid)) throw std::invalid_argument("restriction requires a face pair");
    auto chain = saturated_chain(*k_, sid, tid);
    SparseMatrix m = restriction1(chain[0], chain[1]);
    for (size_t i = 2; i < chain.size(); ++i) m = restriction1(chain[i - 1], chain[i]) * m;
    return m;
}

Diagnostics CellularSheaf::validate() const {
    Diagnostics d;
    const SimplicialComplex& k = *k_;
    for (int w = 0; w < k.size(); ++w) {
        if (k.sdim(w) < 2) continue;
        for (int mid : k.facets(w)) {
            for (int s : k.facets(mid)) {
                SparseMatrix via_mid = restriction1(mid, w) * restriction1(s, mid);
                for (int mid2 : k.facets(w)) {
                    if (mid2 <= mid) continue;
                    if (!k.face_leq(s, mid2)) continue;
                    SparseMatrix via2 = restriction1(mid2, w) * restriction1(s, mid2);
                    if (!(via_mid == via2))
                        d.problems.push_back("restriction functoriality fails on " +
                                             simplex_key(k.simplex(s)) + " < " +
                                             simplex_key(k.simplex(w)));
                }
            }
        }
    }
    return d;
}

CellularCosheaf::CellularCosheaf(ComplexPtr k, std::vector<int> stalks)
    : k_(std::move(k)), stalk_(std::move(stalks)) {
    if (static_cast<int>(stalk_.size()) != k_->size())
        throw std::invalid_argument("one stalk dimension per simplex required");
}

void CellularCosheaf::set_corestriction(int tid, int sid, SparseMatrix m) {
    if (k_->sdim(tid) != k_->sdim(sid) + 1 || !k_->face_leq(sid, tid))
        throw std::invalid_argument("corestrictions are stored on codimension-one incidences only");
    if (m.rows() != stalk_[sid] || m.cols() != stalk_[tid])
        throw std::invalid_argument("corestriction shape mismatch");
    if (m.is_zero()) rest_.erase({tid, sid});
    else rest_[{tid, sid}] = std::move(m);
}

SparseMatrix CellularCosheaf::corestriction1(int tid, int sid) const {
    auto it = rest_.find({tid, sid});
    if (it != rest_.end()) return it->second;
    return SparseMatrix(stalk_[sid], stalk_[tid]);
}

SparseMatrix CellularCosheaf::corestriction(int tid, int sid) const {
    if (sid == tid) return SparseMatrix::identity(stalk_[sid]);
    if (!k_->face_leq(sid, tid)) throw std::invalid_argument("corestriction requires a face pair");
    auto chain = saturated_chain(*k_, sid, tid);
    SparseMatrix m = corestriction1(chain[chain.size() - 1], chain[chain.size() - 2]);
    for (int i = static_cast<int>(chain.size()) - 3; i >= 0; --i)
        m = corestriction1(chain[i + 1], chain[i]) * m;
    return m;
}

Diagnostics CellularCosheaf::validate() const {
    Diagnostics d;
    const SimplicialComplex& k = *k_;
    for (int w = 0; w < k.size(); ++w) {
        if (k.sdim(w) < 2) continue;
        for (int mid : k.facets(w)) {
            for (int s : k.facets(mid)) {
                SparseMatrix via_mid = corestriction1(mid, s) * corestriction1(w, mid);
                for (int mid2 : k.facets(w)) {
                    if (mid2 <= mid) continue;
                    if (!k.face_leq(s, mid2)) continue;
                    SparseMatrix via2 = corestriction1(mid2, s) * corestriction1(w, mid2);
                    if (!(via_mid == via2))
                        d.problems.push_back("corestriction functoriality fails on " +
                                             simplex_key(k.simplex(s)) + " < " +
                                             simplex_key(k.simplex(w)));
                }
            }
        }
    }
    return d;
}

namespace {

std::vector<int> stalk_offsets(const SimplicialComplex& k, const std::vector<int>& stalk, int r,
                               int* total) {
    std::vector<int> off(k.count(r), 0);
    int acc = 0;
    for (int i = 0; i < k.count(r); ++i) {
        off[i] = acc;
        acc += stalk[k.offset(r) + i];
    }
    *total = acc;
    return off;
}

}  // namespace

GradedComplex cochain_complex(const CellularSheaf& s) {
    const SimplicialComplex& k = s.base();
    int n = k.dim();
    std::vector<int> dims(n + 1, 0);
    std::vector<std::vector<int>> off(n + 1);
    for (int r = 0; r <= n; ++r) off[r] = stalk_offsets(k, s.stalks(), r, &dims[r]);

    GradedComplex c(0, dims);
    for (int r = 0; r < n; ++r) {
        BlockBuilder b(dims[r + 1], dims[r]);
        for (int t = 0; t < k.count(r + 1); ++t) {
            int tid = k.offset(r + 1) + t;
            for (int sid : k.facets(tid)) {
                int sign = incidence(k.simplex(tid), k.simplex(sid));
                b.add_block(off[r + 1][t], off[r][sid - k.offset(r)],
                            s.restriction1(sid, tid), sign);
            }
        }
        c.set_differential(r, b.take());
    }
    return c;
}

std::map<int, int> cochain_cohomology(const CellularSheaf& s) {
    Diagnostics d = s.validate();
    if (!d.ok()) throw std::invalid_argument("malformed sheaf: " + d.joined());
    return cochain_complex(s).homology();
}

GradedComplex chain_complex(const CellularCosheaf& s) {
    const SimplicialComplex& k = s.base();
    int n = k.dim();
    std::vector<int> stalks(k.size());
    for (int i = 0; i < k.size(); ++i) stalks[i] = s.stalk(i);
    std::vector<int> dims(n + 1, 0);
    std::vector<std::vector<int>> off(n + 1);
    for (int r = 0; r <= n; ++r) off[r] = stalk_offsets(k, stalks, r, &dims[r]);

    // homological grading: degree r lives at -r
    std::vector<int> rdims(n + 1);
    for (int r = 0; r <= n; ++r) rdims[r] = dims[n - r];
    GradedComplex c(-n, rdims);
    for (int r = 1; r <= n; ++r) {
        BlockBuilder b(dims[r - 1], dims[r]);
        for (int t = 0; t < k.count(r); ++t) {
            int tid = k.offset(r) + t;
            for (int sid : k.facets(tid)) {
                int sign = incidence(k.simplex(tid), k.simplex(sid));
                b.add_block(off[r - 1][sid - k.offset(r - 1)], off[r][t],
                            s.corestriction1(tid, sid), sign);
            }
        }
        c.set_differential(-r, b.take());
    }
    return c;
}

std::map<int, int> cosheaf_homology(const CellularCosheaf& s) {
    Diagnostics d = s.validate();
    if (!d.ok()) throw std::invalid_argument("malformed cosheaf: " + d.joined());
    std::map<int, int> out;
    for (auto [deg, h] : chain_complex(s).homology()) out[-deg] = h;
    return out;
}

CellularSheaf elementary_star(ComplexPtr k, const Simplex& sigma) {
    int sid = k->id_of(sigma);
    if (sid < 0) throw std::invalid_argument("elementary_star: simplex not in complex");
    std::vector<int> stalks(k->size(), 0);
    stalks[sid] = 1;
    for (int f : k->all_faces(sid)) stalks[f] = 1;
    CellularSheaf s(k, stalks);
    for (int id = 0; id < k->size(); ++id) {
        if (!stalks[id]) continue;
        for (int c : k->cofacets(id))
            if (stalks[c]) s.set_restriction(id, c, SparseMatrix::identity(1));
    }
    return s;
}

CellularSheaf elementary_shriek(ComplexPtr k, const Simplex& sigma) {
    int sid = k->id_of(sigma);
    if (sid < 0) throw std::invalid_argument("elementary_shriek: simplex not in complex");
    std::vector<int> stalks(k->size(), 0);
    stalks[sid] = 1;
    return CellularSheaf(k, stalks);
}

CellularSheaf constant_sheaf(ComplexPtr k, int dim) {
    std::vector<int> stalks(k->size(), dim);
    CellularSheaf s(k, stalks);
    for (int id = 0; id < k->size(); ++id)
        for (int c : k->cofacets(id)) s.set_restriction(id, c, SparseMatrix::identity(dim));
    return s;
}

CellularCosheaf constant_cosheaf(ComplexPtr k, int dim) {
    std::vector<int> stalks(k->size(), dim);
    CellularCosheaf s(k, stalks);
    for (int id = 0; id < k->size(); ++id)
        for (int c : k->cofacets(id)) s.set_corestriction(c, id, SparseMatrix::identity(dim));
    return s;
}

CellularSheaf direct_sum(const std::vector<CellularSheaf>& parts) {
    if (parts.empty()) throw std::invalid_argument("direct sum of nothing");
    ComplexPtr k = parts[0].base_ptr();
    std::vector<int> stalks(k->size(), 0);
    for (const auto& p : parts)
        for (int id = 0; id < k->size(); ++id) stalks[id] += p.stalk(id);
    CellularSheaf s(k, stalks);
    for (int id = 0; id < k->size(); ++id) {
        for (int c : k->cofacets(id)) {
            BlockBuilder b(stalks[c], stalks[id]);
            int ro = 0, co = 0;
            for (const auto& p : parts) {
                b.add_block(ro, co, p.restriction1(id, c));
                ro += p.stalk(c);
                co += p.stalk(id);
            }
            SparseMatrix m = b.take();
            if (!m.is_zero()) s.set_restriction(id, c, std::move(m));
        }
    }
    return s;
}

Diagnostics SheafMorphism::validate() const {
    Diagnostics d;
    const SimplicialComplex& k = source->base();
    if (static_cast<int>(block.size()) != k.size()) {
        d.problems.push_back("morphism must provide one block per simplex");
        return d;
    }
    for (int id = 0; id < k.size(); ++id) {
        if (block[id].rows() != target->stalk(id) || block[id].cols() != source->stalk(id))
            d.problems.push_back("block shape mismatch at " + simplex_key(k.simplex(id)));
    }
    if (!d.ok()) return d;
    for (int id = 0; id < k.size(); ++id) {
        for (int c : k.cofacets(id)) {
            SparseMatrix lhs = block[c] * source->restriction1(id, c);
            SparseMatrix rhs = target->restriction1(id, c) * block[id];
            if (!(lhs == rhs))
                d.problems.push_back("does not commute with restriction on " +
                                     simplex_key(k.simplex(id)) + " < " + simplex_key(k.simplex(c)));
        }
    }
    return d;
}

CellularSheaf sheaf_kernel(const SheafMorphism& f) {
    Diagnostics d = f.validate();
    if (!d.ok()) throw std::invalid_argument("malformed morphism: " + d.joined());
    const CellularSheaf& a = *f.source;
    const SimplicialComplex& k = a.base();

    std::vector<SparseMatrix> basis(k.size());
    std::vector<int> stalks(k.size());
    for (int id = 0; id < k.size(); ++id) {
        auto kb = kernel_basis(f.block[id]);
        SparseMatrix b(a.stalk(id), static_cast<int>(kb.size()));
        for (size_t j = 0; j < kb.size(); ++j)
            for (int i = 0; i < a.stalk(id); ++i)
                if (kb[j][i] != 0) b.set(i, static_cast<int>(j), kb[j][i]);
        basis[id] = std::move(b);
        stalks[id] = static_cast<int>(kb.size());
    }

    CellularSheaf ker(a.base_ptr(), stalks);
    for (int id = 0; id < k.size(); ++id) {
        for (int c : k.cofacets(id)) {
            SparseMatrix rhs = a.restriction1(id, c) * basis[id];
            SparseMatrix x(stalks[c], stalks[id]);
            for (int col = 0; col < stalks[id]; ++col) {
                std::vector<Rational> b(a.stalk(c), Rational(0));
                for (int r = 0; r < rhs.rows(); ++r) b[r] = rhs.get(r, col);
                auto sol = solve(basis[c], b);
                if (!sol) throw std::logic_error("kernel is not preserved by restriction");
                for (int r = 0; r < stalks[c]; ++r)
                    if ((*sol)[r] != 0) x.set(r, col, (*sol)[r]);
            }
            if (!x.is_zero()) ker.set_restriction(id, c, std::move(x));
        }
    }
    return ker;
}

int ElementaryComplex::term_dim(int i) const {
    int d = 0;
    for (const auto& s : terms[i]) d += s.cdim;
    return d;
}

namespace {

std::vector<int> summand_offsets(const std::vector<ElSummand>& t, int* total) {
    std::vector<int> off(t.size(), 0);
    int acc = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        off[i] = acc;
        acc += t[i].cdim;
    }
    *total = acc;
    return off;
}

}  // namespace

GradedComplex ElementaryComplex::stalk_complex(int cell) const {
    const SimplicialComplex& kk = *k;
    int nt = static_cast<int>(terms.size());
    std::vector<std::vector<int>> off(nt);
    std::vector<std::vector<char>> live(nt);
    std::vector<int> dims(nt, 0);
    for (int i = 0; i < nt; ++i) {
        live[i].assign(terms[i].size(), 0);
        off[i].assign(terms[i].size(), 0);
        int acc = 0;
        for (size_t j = 0; j < terms[i].size(); ++j) {
            bool sup = (terms[i][j].bot == cell) || kk.face_leq(cell, terms[i][j].bot);
            live[i][j] = sup;
            off[i][j] = acc;
            if (sup) acc += terms[i][j].cdim;
        }
        dims[i] = acc;
    }
    GradedComplex c(lo, dims);
    for (int i = 0; i + 1 < nt; ++i) {
        BlockBuilder b(dims[i + 1], dims[i]);
        for (const auto& [pair, m] : diff[i]) {
            auto [src, dst] = pair;
            if (live[i][src] && live[i + 1][dst]) b.add_block(off[i + 1][dst], off[i][src], m);
        }
        c.set_differential(lo + i, b.take());
    }
    return c;
}

GradedComplex ElementaryComplex::global_sections_complex() const {
    int nt = static_cast<int>(terms.size());
    std::vector<std::vector<int>> off(nt);
    std::vector<int> dims(nt, 0);
    for (int i = 0; i < nt; ++i) off[i] = summand_offsets(terms[i], &dims[i]);
    GradedComplex c(lo, dims);
    for (int i = 0; i + 1 < nt; ++i) {
        BlockBuilder b(dims[i + 1], dims[i]);
        for (const auto& [pair, m] : diff[i]) b.add_block(off[i + 1][pair.second], off[i][pair.first], m);
        c.set_differential(lo + i, b.take());
    }
    return c;
}

GradedComplex ElementaryComplex::supported_sections_complex(const std::vector<char>& in_u,
                                                            const std::vector<char>& in_c) const {
    const SimplicialComplex& kk = *k;
    int nt = static_cast<int>(terms.size());

    // Sections of Q_{b*} over (closure of b) cap U are locally constant
    // functions there; components of a union of open cells are components
    // of the comparability graph.  A section lies in Gamma_C exactly when
    // every component it charges sits inside C.
    struct SummandSections {
        std::vector<std::vector<int>> comps;
        std::vector<int> offset;
    };
    std::vector<std::vector<SummandSections>> sec(nt);
    std::vector<int> dims(nt, 0);

    for (int i = 0; i < nt; ++i) {
        sec[i].resize(terms[i].size());
        int acc = 0;
        for (size_t j = 0; j < terms[i].size(); ++j) {
            int b = terms[i][j].bot;
            std::vector<int> cells;
            if (in_u[b]) cells.push_back(b);
            for (int f : kk.all_faces(b))
                if (in_u[f]) cells.push_back(f);
            std::vector<int> parent(cells.size());
            for (size_t x = 0; x < cells.size(); ++x) parent[x] = static_cast<int>(x);
            auto find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (size_t x = 0; x < cells.size(); ++x)
                for (size_t y = x + 1; y < cells.size(); ++y)
                    if (kk.face_leq(cells[x], cells[y]) || kk.face_leq(cells[y], cells[x])) {
                        int rx = find(static_cast<int>(x)), ry = find(static_cast<int>(y));
                        if (rx != ry) parent[rx] = ry;
                    }
            std::map<int, std::vector<int>> groups;
            for (size_t x = 0; x < cells.size(); ++x)
                groups[find(static_cast<int>(x))].push_back(cells[x]);
            for (auto& [root, cl] : groups) {
                bool inside = true;
                for (int cell : cl)
                    if (!in_c[cell]) { inside = false; break; }
                if (inside) {
                    sec[i][j].offset.push_back(acc);
                    sec[i][j].comps.push_back(cl);
                    acc += terms[i][j].cdim;
                }
            }
        }
        dims[i] = acc;
    }

    GradedComplex c(lo, dims);
    for (int i = 0; i + 1 < nt; ++i) {
        BlockBuilder b(dims[i + 1], dims[i]);
        for (const auto& [pair, m] : diff[i]) {
            auto [src, dst] = pair;
            const auto& ssec = sec[i][src];
            const auto& dsec = sec[i + 1][dst];
            for (size_t sc = 0; sc < ssec.comps.size(); ++sc) {
                for (size_t dc = 0; dc < dsec.comps.size(); ++dc) {
                    int probe = dsec.comps[dc][0];
                    bool inside = std::find(ssec.comps[sc].begin(), ssec.comps[sc].end(), probe) !=
                                  ssec.comps[sc].end();
                    if (inside) b.add_block(dsec.offset[dc], ssec.offset[sc], m);
                }
            }
        }
        c.set_differential(lo + i, b.take());
    }
    return c;
}

std::map<int, int> ElementaryComplex::hypercohomology() const {
    return global_sections_complex().homology();
}

Diagnostics SheafComplex::validate() const {
    Diagnostics out;
    const SimplicialComplex& kk = *k;
    for (size_t i = 0; i + 1 < terms.size(); ++i) {
        for (int cell = 0; cell < kk.size(); ++cell) {
            for (int c : kk.cofacets(cell)) {
                SparseMatrix lhs = d[i][c] * terms[i].restriction1(cell, c);
                SparseMatrix rhs = terms[i + 1].restriction1(cell, c) * d[i][cell];
                if (!(lhs == rhs))
                    out.problems.push_back("differential is not a sheaf morphism at degree " +
                                           std::to_string(lo + static_cast<int>(i)));
            }
            if (i + 2 < terms.size()) {
                if (!(d[i + 1][cell] * d[i][cell]).is_zero())
                    out.problems.push_back("d d != 0 stalkwise at degree " +
                                           std::to_string(lo + static_cast<int>(i)));
            }
        }
        if (!out.ok()) return out;
    }
    return out;
}

SheafComplex to_sheaf_complex(const ElementaryComplex& e) {
    SheafComplex sc;
    sc.k = e.k;
    sc.lo = e.lo;
    const SimplicialComplex& kk = *e.k;
    int nt = static_cast<int>(e.terms.size());

    std::vector<std::vector<std::vector<int>>> off(nt);
    for (int i = 0; i < nt; ++i) {
        std::vector<int> stalks(kk.size(), 0);
        off[i].assign(kk.size(), {});
        for (int cell = 0; cell < kk.size(); ++cell) {
            off[i][cell].assign(e.terms[i].size(), -1);
            for (size_t j = 0; j < e.terms[i].size(); ++j) {
                int b = e.terms[i][j].bot;
                if (b == cell || kk.face_leq(cell, b)) {
                    off[i][cell][j] = stalks[cell];
                    stalks[cell] += e.terms[i][j].cdim;
                }
            }
        }
        CellularSheaf t(e.k, stalks);
        for (int cell = 0; cell < kk.size(); ++cell) {
            for (int c : kk.cofacets(cell)) {
                BlockBuilder b(t.stalk(c), t.stalk(cell));
                for (size_t j = 0; j < e.terms[i].size(); ++j)
                    if (off[i][cell][j] >= 0 && off[i][c][j] >= 0)
                        b.add_block(off[i][c][j], off[i][cell][j],
                                    SparseMatrix::identity(e.terms[i][j].cdim));
                SparseMatrix m = b.take();
                if (!m.is_zero()) t.set_restriction(cell, c, std::move(m));
            }
        }
        sc.terms.push_back(std::move(t));
    }

    for (int i = 0; i + 1 < nt; ++i) {
        std::vector<SparseMatrix> dd(kk.size());
        for (int cell = 0; cell < kk.size(); ++cell) {
            BlockBuilder b(sc.terms[i + 1].stalk(cell), sc.terms[i].stalk(cell));
            for (const auto& [pair, m] : e.diff[i]) {
                auto [src, dst] = pair;
                if (off[i][cell][src] >= 0 && off[i + 1][cell][dst] >= 0)
                    b.add_block(off[i + 1][cell][dst], off[i][cell][src], m);
            }
            dd[cell] = b.take();
        }
        sc.d.push_back(std::move(dd));
    }
    return sc;
}

InjectiveResolution canonical_injective_resolution(const CellularSheaf& a) {
    ComplexPtr k = a.base_ptr();
    const SimplicialComplex& kk = *k;

    // Strict flags (ascending chains of simplex ids) whose top stalk is
    // nonzero; the flag tau_k < ... < tau_0 indexes A(tau_0) tensor
    // Q_{tau_k *}.
    std::vector<std::vector<Simplex>> flags;
    {
        std::vector<Simplex> singles;
        for (int id = 0; id < kk.size(); ++id)
            if (a.stalk(id) > 0) singles.push_back({id});
        flags.push_back(std::move(singles));
        while (true) {
            std::vector<Simplex> next;
            for (const Simplex& f : flags.back()) {
                for (int cand : kk.all_faces(f[0])) {
                    Simplex g;
                    g.push_back(cand);
                    g.insert(g.end(), f.begin(), f.end());
                    next.push_back(std::move(g));
                }
            }
            if (next.empty()) break;
            flags.push_back(std::move(next));
        }
    }

    InjectiveResolution res;
    res.a = a;
    res.flags = flags;
    res.cx.k = k;
    res.cx.lo = 0;
    res.cx.terms.resize(flags.size());
    res.cx.diff.resize(flags.size() > 0 ? flags.size() - 1 : 0);

    std::vector<std::map<Simplex, int>> index(flags.size());
    for (size_t i = 0; i < flags.size(); ++i) {
        for (size_t j = 0; j < flags[i].size(); ++j) {
            const Simplex& f = flags[i][j];
            res.cx.terms[i].push_back({f.front(), a.stalk(f.back()), f.back()});
            index[i][f] = static_cast<int>(j);
        }
    }

    // d inserts one simplex into the flag; the sign is the parity of the
    // insertion position in ascending order (simplicial cochain convention
    // on the subdivision).  Exactness is certified by the stalk tests.
    for (size_t i = 0; i + 1 < flags.size(); ++i) {
        for (size_t j2 = 0; j2 < flags[i + 1].size(); ++j2) {
            const Simplex& g = flags[i + 1][j2];
            for (size_t drop = 0; drop < g.size(); ++drop) {
                Simplex f;
                for (size_t t = 0; t < g.size(); ++t)
                    if (t != drop) f.push_back(g[t]);
                auto it = index[i].find(f);
                if (it == index[i].end()) continue;
                int sign = (drop % 2 == 0) ? 1 : -1;
                SparseMatrix coeff;
                if (drop + 1 == g.size()) {
                    coeff = a.restriction(f.back(), g.back()).scaled(sign);
                } else {
                    coeff = SparseMatrix::identity(a.stalk(g.back())).scaled(sign);
                }
                if (!coeff.is_zero()) {
                    auto key = std::make_pair(it->second, static_cast<int>(j2));
                    auto found = res.cx.diff[i].find(key);
                    if (found == res.cx.diff[i].end()) res.cx.diff[i][key] = std::move(coeff);
                    else found->second = found->second + coeff;
                }
            }
        }
    }
    return res;
}

GradedComplex InjectiveResolution::augmented_stalk_complex(int cell) const {
    GradedComplex bare = cx.stalk_complex(cell);
    int n = bare.hi() - bare.lo() + 1;
    std::vector<int> dims(n + 1);
    dims[0] = a.stalk(cell);
    for (int i = 0; i < n; ++i) dims[i + 1] = bare.dim(bare.lo() + i);
    GradedComplex out(-1, dims);
    const SimplicialComplex& kk = a.base();
    BlockBuilder b(dims[1], dims[0]);
    int off = 0;
    for (size_t j = 0; j < flags[0].size(); ++j) {
        int top = flags[0][j].back();
        if (top == cell || kk.face_leq(cell, top)) {
            b.add_block(off, 0, a.restriction(cell, top));
            off += a.stalk(top);
        }
    }
    out.set_differential(-1, b.take());
    for (int i = 0; i + 1 < n; ++i) out.set_differential(i, bare.differential(bare.lo() + i));
    return out;
}

std::map<int, int> ext_groups(const CellularSheaf& a, const CellularSheaf& b) {
    const SimplicialComplex& k = a.base();
    if (k.size() != b.base().size())
        throw std::invalid_argument("ext_groups requires a common base complex");
    InjectiveResolution res = canonical_injective_resolution(b);
    int levels = static_cast<int>(res.cx.terms.size());

    struct HomSpace {
        std::vector<std::vector<Rational>> basis;
        std::vector<int> var_off;
        int total_vars = 0;
    };
    std::vector<HomSpace> hom(levels);
    std::vector<std::vector<int>> idim(levels, std::vector<int>(k.size(), 0));
    std::vector<std::vector<std::vector<int>>> ioff(levels);

    for (int lev = 0; lev < levels; ++lev) {
        ioff[lev].assign(k.size(), {});
        for (int cell = 0; cell < k.size(); ++cell) {
            ioff[lev][cell].assign(res.cx.terms[lev].size(), -1);
            int acc = 0;
            for (size_t j = 0; j < res.cx.terms[lev].size(); ++j) {
                int bot = res.cx.terms[lev][j].bot;
                if (bot == cell || k.face_leq(cell, bot)) {
                    ioff[lev][cell][j] = acc;
                    acc += res.cx.terms[lev][j].cdim;
                }
            }
            idim[lev][cell] = acc;
        }

        HomSpace& h = hom[lev];
        h.var_off.assign(k.size(), 0);
        for (int cell = 0; cell < k.size(); ++cell) {
            h.var_off[cell] = h.total_vars;
            h.total_vars += a.stalk(cell) * idim[lev][cell];
        }

        long rows = 0;
        std::vector<std::pair<int, int>> pairs;
        for (int s = 0; s < k.size(); ++s)
            for (int t : k.cofacets(s)) {
                pairs.push_back({s, t});
                rows += static_cast<long>(idim[lev][t]) * a.stalk(s);
            }
        SparseMatrix constraints(static_cast<int>(rows), h.total_vars);
        long row0 = 0;
        for (auto [s, t] : pairs) {
            SparseMatrix ra = a.restriction1(s, t);
            for (size_t j = 0; j < res.cx.terms[lev].size(); ++j) {
                int s_off = ioff[lev][s][j];
                int t_off = ioff[lev][t][j];
                int cd = res.cx.terms[lev][j].cdim;
                if (s_off >= 0 && t_off >= 0) {
                    for (int r = 0; r < cd; ++r)
                        for (int ca = 0; ca < a.stalk(s); ++ca)
                            constraints.add_to(static_cast<int>(row0 + (t_off + r) * a.stalk(s) + ca),
                                               h.var_off[s] + (s_off + r) * a.stalk(s) + ca, 1);
                }
            }
            for (int r = 0; r < idim[lev][t]; ++r)
                for (int ca = 0; ca < a.stalk(s); ++ca)
                    for (int cb = 0; cb < a.stalk(t); ++cb) {
                        Rational v = ra.get(cb, ca);
                        if (v != 0)
                            constraints.add_to(static_cast<int>(row0 + r * a.stalk(s) + ca),
                                               h.var_off[t] + r * a.stalk(t) + cb, -v);
                    }
            row0 += static_cast<long>(idim[lev][t]) * a.stalk(s);
        }
        h.basis = kernel_basis(constraints);
    }

    std::vector<int> dims(levels);
    for (int lev = 0; lev < levels; ++lev) dims[lev] = static_cast<int>(hom[lev].basis.size());
    GradedComplex c(0, dims);
    for (int lev = 0; lev + 1 < levels; ++lev) {
        SparseMatrix bmat(hom[lev + 1].total_vars, dims[lev + 1]);
        for (int j = 0; j < dims[lev + 1]; ++j)
            for (int i = 0; i < hom[lev + 1].total_vars; ++i)
                if (hom[lev + 1].basis[j][i] != 0) bmat.set(i, j, hom[lev + 1].basis[j][i]);

        SparseMatrix dmat(dims[lev + 1], dims[lev]);
        for (int j = 0; j < dims[lev]; ++j) {
            std::vector<Rational> img(hom[lev + 1].total_vars, Rational(0));
            for (const auto& [pair, m] : res.cx.diff[lev]) {
                auto [src, dst] = pair;
                for (int cell = 0; cell < k.size(); ++cell) {
                    int so = ioff[lev][cell][src];
                    int dofs = ioff[lev + 1][cell][dst];
                    if (so < 0 || dofs < 0) continue;
                    for (int r = 0; r < m.rows(); ++r)
                        for (const auto& [cc, v] : m.row(r))
                            for (int ca = 0; ca < a.stalk(cell); ++ca) {
                                const Rational& x =
                                    hom[lev].basis[j][hom[lev].var_off[cell] + (so + cc) * a.stalk(cell) + ca];
                                if (x != 0)
                                    img[hom[lev + 1].var_off[cell] + (dofs + r) * a.stalk(cell) + ca] += v * x;
                            }
                }
            }
            auto coords = solve(bmat, img);
            if (!coords) throw std::logic_error("image of a morphism is not a morphism");
            for (int i = 0; i < dims[lev + 1]; ++i)
                if ((*coords)[i] != 0) dmat.set(i, j, (*coords)[i]);
        }
        c.set_differential(lev, dmat);
    }
    return c.homology();
}

ElementaryComplex dualizing_complex(ComplexPtr k) {
    const SimplicialComplex& kk = *k;
    int n = kk.dim();
    ElementaryComplex e;
    e.k = k;
    e.lo = -n;
    e.terms.resize(n + 1);
    e.diff.resize(n);
    std::vector<std::map<int, int>> pos(n + 1);
    for (int i = 0; i <= n; ++i) {
        int j = n - i;  // degree -j at term index i
        for (int t = 0; t < kk.count(j); ++t) {
            int id = kk.offset(j) + t;
            pos[i][id] = static_cast<int>(e.terms[i].size());
            e.terms[i].push_back({id, 1, id});
        }
    }
    for (int i = 0; i < n; ++i) {
        int j = n - i;
        for (int t = 0; t < kk.count(j); ++t) {
            int tid = kk.offset(j) + t;
            for (int sid : kk.facets(tid)) {
                int sign = incidence(kk.simplex(tid), kk.simplex(sid));
                SparseMatrix m(1, 1);
                m.set(0, 0, sign);
                e.diff[i][{pos[i][tid], pos[i + 1][sid]}] = std::move(m);
            }
        }
    }
    return e;
}

CellularSheaf subdivide_sheaf(const CellularSheaf& a, const BarycentricSubdivision& bs,
                              ComplexPtr subdivided) {
    const SimplicialComplex& kp = *subdivided;
    std::vector<int> stalks(kp.size());
    for (int id = 0; id < kp.size(); ++id) stalks[id] = a.stalk(bs.carrier_top(id));
    CellularSheaf s(subdivided, stalks);
    for (int id = 0; id < kp.size(); ++id) {
        for (int c : kp.cofacets(id)) {
            int t0 = bs.carrier_top(id), t1 = bs.carrier_top(c);
            SparseMatrix m = (t0 == t1) ? SparseMatrix::identity(stalks[id]) : a.restriction(t0, t1);
            if (!m.is_zero()) s.set_restriction(id, c, std::move(m));
        }
    }
    return s;
}

}  // namespace persheaf
