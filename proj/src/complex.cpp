#include "persheaf/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace persheaf {

std::string simplex_key(const Simplex& s) {
    std::ostringstream os;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) os << ",";
        os << s[i];
    }
    return os.str();
}

Simplex parse_simplex_key(const std::string& key) {
    Simplex s;
    std::istringstream is(key);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (!tok.empty()) s.push_back(std::stoi(tok));
    }
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
        throw std::invalid_argument("simplex key is not strictly increasing: " + key);
    return s;
}

static void check_simplex(const Simplex& s, int vertex_count) {
    if (s.empty()) throw std::invalid_argument("empty simplex");
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= vertex_count) throw std::invalid_argument("vertex id out of range");
        if (i > 0 && s[i] <= s[i - 1])
            throw std::invalid_argument("simplex vertices must be strictly increasing");
    }
}

SimplicialComplex SimplicialComplex::from_maximal(int vertex_count, const std::vector<Simplex>& maximal) {
    std::set<Simplex> all;
    for (Simplex s : maximal) {
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("duplicate vertices within a simplex");
        check_simplex(s, vertex_count);
        // enumerate nonempty subsets
        int k = static_cast<int>(s.size());
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            Simplex f;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) f.push_back(s[i]);
            all.insert(std::move(f));
        }
    }
    return from_simplices(vertex_count, std::vector<Simplex>(all.begin(), all.end()));
}

SimplicialComplex SimplicialComplex::from_simplices(int vertex_count, std::vector<Simplex> simplices) {
    SimplicialComplex k;
    k.vertex_count_ = vertex_count;
    for (const Simplex& s : simplices) check_simplex(s, vertex_count);
    std::sort(simplices.begin(), simplices.end(), [](const Simplex& a, const Simplex& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    simplices.erase(std::unique(simplices.begin(), simplices.end()), simplices.end());
    k.simplices_ = std::move(simplices);
    k.build_index();
    // face closure check
    for (int id = 0; id < k.size(); ++id) {
        const Simplex& s = k.simplices_[id];
        if (s.size() == 1) continue;
        for (size_t i = 0; i < s.size(); ++i) {
            Simplex f;
            for (size_t j = 0; j < s.size(); ++j)
                if (j != i) f.push_back(s[j]);
            if (k.id_of(f) < 0) throw std::invalid_argument("simplex list is not face closed");
        }
    }
    return k;
}

void SimplicialComplex::build_index() {
    index_.clear();
    int maxdim = -1;
    for (const auto& s : simplices_) maxdim = std::max(maxdim, static_cast<int>(s.size()) - 1);
    count_.assign(maxdim + 1, 0);
    offset_.assign(maxdim + 2, 0);
    for (int id = 0; id < size(); ++id) {
        index_[simplices_[id]] = id;
        ++count_[simplices_[id].size() - 1];
    }
    for (int d = 0; d <= maxdim; ++d) offset_[d + 1] = offset_[d] + count_[d];

    facets_.assign(size(), {});
    cofacets_.assign(size(), {});
    for (int id = 0; id < size(); ++id) {
        const Simplex& s = simplices_[id];
        if (s.size() == 1) continue;
        for (size_t i = 0; i < s.size(); ++i) {
            Simplex f;
            for (size_t j = 0; j < s.size(); ++j)
                if (j != i) f.push_back(s[j]);
            int fid = id_of(f);
            if (fid >= 0) {
                facets_[id].push_back(fid);
                cofacets_[fid].push_back(id);
            }
        }
    }
    for (auto& v : facets_) std::sort(v.begin(), v.end());
    for (auto& v : cofacets_) std::sort(v.begin(), v.end());
}

int SimplicialComplex::id_of(const Simplex& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
}

bool SimplicialComplex::face_leq(int a, int b) const {
    const Simplex& fa = simplices_[a];
    const Simplex& fb = simplices_[b];
    return std::includes(fb.begin(), fb.end(), fa.begin(), fa.end());
}

std::vector<int> SimplicialComplex::all_cofaces(int id) const {
    std::vector<int> out;
    for (int other = id + 1; other < size(); ++other) {
        if (simplices_[other].size() > simplices_[id].size() && face_leq(id, other))
            out.push_back(other);
    }
    return out;
}

std::vector<int> SimplicialComplex::all_faces(int id) const {
    const Simplex& s = simplices_[id];
    std::vector<int> out;
    int k = static_cast<int>(s.size());
    for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
        Simplex f;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) f.push_back(s[i]);
        int fid = id_of(f);
        if (fid >= 0 && static_cast<int>(f.size()) < k) out.push_back(fid);
    }
    std::sort(out.begin(), out.end());
    return out;
}

long SimplicialComplex::euler_characteristic() const {
    long chi = 0;
    for (int d = 0; d <= dim(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(count(d));
    return chi;
}

std::vector<Simplex> SimplicialComplex::maximal_simplices() const {
    std::vector<Simplex> out;
    for (int id = 0; id < size(); ++id)
        if (cofacets_[id].empty()) out.push_back(simplices_[id]);
    return out;
}

int incidence(const Simplex& tau, const Simplex& sigma) {
    if (tau.size() != sigma.size() + 1) return 0;
    int omitted = -1;
    size_t j = 0;
    for (size_t i = 0; i < tau.size(); ++i) {
        if (j < sigma.size() && tau[i] == sigma[j]) {
            ++j;
        } else if (omitted < 0) {
            omitted = static_cast<int>(i);
        } else {
            return 0;
        }
    }
    if (j != sigma.size() || omitted < 0) return 0;
    return omitted % 2 == 0 ? 1 : -1;
}

SparseMatrix boundary_matrix(const SimplicialComplex& k, int r) {
    SparseMatrix m(k.count(r - 1), k.count(r));
    if (r < 1 || r > k.dim()) return m;
    int coff = k.offset(r), roff = k.offset(r - 1);
    for (int c = 0; c < k.count(r); ++c) {
        int id = coff + c;
        for (int fid : k.facets(id)) {
            int sign = incidence(k.simplex(id), k.simplex(fid));
            m.set(fid - roff, c, sign);
        }
    }
    return m;
}

std::map<int, int> simplicial_homology(const SimplicialComplex& k) {
    // Chain complex in homological grading; reuse GradedComplex by negating
    // degrees so the differential raises.
    int n = k.dim();
    std::vector<int> dims(n + 1);
    for (int d = 0; d <= n; ++d) dims[d] = k.count(n - d);
    GradedComplex c(-n, dims);
    for (int r = 1; r <= n; ++r) c.set_differential(-r, boundary_matrix(k, r));
    std::map<int, int> h;
    for (auto [deg, v] : c.homology()) h[-deg] = v;
    return h;
}

SimplicialComplex simplex_complex(int n) {
    Simplex top(n + 1);
    for (int i = 0; i <= n; ++i) top[i] = i;
    return SimplicialComplex::from_maximal(n + 1, {top});
}

SimplicialComplex sphere_complex(int n) {
    std::vector<Simplex> faces;
    for (int omit = 0; omit <= n + 1; ++omit) {
        Simplex f;
        for (int i = 0; i <= n + 1; ++i)
            if (i != omit) f.push_back(i);
        faces.push_back(f);
    }
    return SimplicialComplex::from_maximal(n + 2, faces);
}

SimplicialComplex circle_complex(int m) {
    if (m < 3) throw std::invalid_argument("circle needs at least 3 vertices");
    std::vector<Simplex> edges;
    for (int i = 0; i < m; ++i) {
        int a = i, b = (i + 1) % m;
        edges.push_back({std::min(a, b), std::max(a, b)});
    }
    return SimplicialComplex::from_maximal(m, edges);
}

SimplicialComplex join(const SimplicialComplex& k, const SimplicialComplex& l) {
    int n = k.vertex_count();
    std::vector<Simplex> all;
    for (int i = 0; i < k.size(); ++i) all.push_back(k.simplex(i));
    for (int j = 0; j < l.size(); ++j) {
        Simplex t = l.simplex(j);
        for (int& v : t) v += n;
        all.push_back(t);
        for (int i = 0; i < k.size(); ++i) {
            Simplex u = k.simplex(i);
            u.insert(u.end(), t.begin(), t.end());
            all.push_back(std::move(u));
        }
    }
    return SimplicialComplex::from_simplices(n + l.vertex_count(), std::move(all));
}

SimplicialComplex cone(const SimplicialComplex& k) {
    return join(k, simplex_complex(0));
}

SimplicialComplex suspension(const SimplicialComplex& k) {
    SimplicialComplex two_points = SimplicialComplex::from_simplices(2, {{0}, {1}});
    return join(k, two_points);
}

namespace {

void staircases(const Simplex& s, const Simplex& t, size_t i, size_t j, int lvc,
                Simplex& path, std::vector<Simplex>& out) {
    path.push_back(s[i] * lvc + t[j]);
    if (i + 1 == s.size() && j + 1 == t.size()) {
        out.push_back(path);
    } else {
        if (i + 1 < s.size()) staircases(s, t, i + 1, j, lvc, path, out);
        if (j + 1 < t.size()) staircases(s, t, i, j + 1, lvc, path, out);
    }
    path.pop_back();
}

}  // namespace

SimplicialComplex product(const SimplicialComplex& k, const SimplicialComplex& l) {
    int lvc = l.vertex_count();
    std::vector<Simplex> maximal;
    Simplex path;
    for (const Simplex& s : k.maximal_simplices())
        for (const Simplex& t : l.maximal_simplices())
            staircases(s, t, 0, 0, lvc, path, maximal);
    return SimplicialComplex::from_maximal(k.vertex_count() * lvc, maximal);
}

SimplicialComplex torus(int n) {
    if (n < 1) throw std::invalid_argument("torus dimension must be positive");
    SimplicialComplex t = circle_complex(3);
    for (int i = 1; i < n; ++i) t = product(t, circle_complex(3));
    return t;
}

SimplicialComplex subcomplex(const SimplicialComplex& k, const std::vector<int>& ids) {
    std::vector<Simplex> list;
    list.reserve(ids.size());
    for (int id : ids) list.push_back(k.simplex(id));
    return SimplicialComplex::from_simplices(k.vertex_count(), std::move(list));
}

std::vector<int> open_star(const SimplicialComplex& k, const Simplex& sigma) {
    int sid = k.id_of(sigma);
    if (sid < 0) throw std::invalid_argument("simplex not in complex");
    std::vector<int> out{sid};
    auto up = k.all_cofaces(sid);
    out.insert(out.end(), up.begin(), up.end());
    std::sort(out.begin(), out.end());
    return out;
}

SimplicialComplex closed_star(const SimplicialComplex& k, const Simplex& sigma) {
    std::set<int> cl;
    for (int id : open_star(k, sigma)) {
        cl.insert(id);
        for (int f : k.all_faces(id)) cl.insert(f);
    }
    return subcomplex(k, std::vector<int>(cl.begin(), cl.end()));
}

SimplicialComplex link(const SimplicialComplex& k, const Simplex& sigma) {
    std::set<int> cl;
    for (int id : open_star(k, sigma)) {
        cl.insert(id);
        for (int f : k.all_faces(id)) cl.insert(f);
    }
    std::vector<int> keep;
    for (int id : cl) {
        const Simplex& s = k.simplex(id);
        bool meets = false;
        for (int v : sigma)
            if (std::binary_search(s.begin(), s.end(), v)) { meets = true; break; }
        if (!meets) keep.push_back(id);
    }
    return subcomplex(k, keep);
}

BarycentricSubdivision barycentric(const SimplicialComplex& k) {
    // Chains of the face poset; a subflag of a chain is again a chain, so
    // the list is face closed by construction.
    std::vector<std::vector<int>> up(k.size());
    for (int id = 0; id < k.size(); ++id) up[id] = k.all_cofaces(id);

    std::vector<Simplex> chains;
    std::vector<int> cur;
    auto dfs = [&](auto&& self, int last) -> void {
        chains.push_back(Simplex(cur.begin(), cur.end()));
        for (int next : up[last]) {
            cur.push_back(next);
            self(self, next);
            cur.pop_back();
        }
    };
    for (int id = 0; id < k.size(); ++id) {
        cur.assign(1, id);
        dfs(dfs, id);
    }

    BarycentricSubdivision bs;
    bs.base = k;
    bs.subdivided = SimplicialComplex::from_simplices(k.size(), std::move(chains));
    return bs;
}

std::vector<int> dual_cell(const BarycentricSubdivision& bs, const Simplex& sigma) {
    int sid = bs.base.id_of(sigma);
    if (sid < 0) throw std::invalid_argument("dual_cell: simplex not in base complex");
    std::vector<int> out;
    for (int id = 0; id < bs.subdivided.size(); ++id) {
        const Simplex& flag = bs.subdivided.simplex(id);
        bool ok = true;
        for (int entry : flag) {
            if (!(entry == sid || (bs.base.sdim(entry) > bs.base.sdim(sid) && bs.base.face_leq(sid, entry)))) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(id);
    }
    return out;
}

SimplicialMap::SimplicialMap(const SimplicialComplex& s, const SimplicialComplex& t, std::vector<int> vm)
    : source(&s), target(&t), vertex_map(std::move(vm)) {
    if (static_cast<int>(vertex_map.size()) != s.vertex_count())
        throw std::invalid_argument("vertex map must cover every source vertex");
    for (int v : vertex_map)
        if (v < 0 || v >= t.vertex_count()) throw std::invalid_argument("vertex map image out of range");
    for (int id = 0; id < s.size(); ++id) {
        if (!t.contains(image(s.simplex(id))))
            throw std::invalid_argument("image of a simplex is not a simplex of the target");
    }
}

Simplex SimplicialMap::image(const Simplex& s) const {
    Simplex img;
    for (int v : s) img.push_back(vertex_map[v]);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    return img;
}

}  // namespace persheaf
