#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "persheaf/sparse.hpp"

namespace persheaf {

// A simplex is its strictly increasing list of vertex ids.
using Simplex = std::vector<int>;

struct SimplexHash {
    size_t operator()(const Simplex& s) const {
        size_t h = 1469598103934665603ull;
        for (int v : s) {
            h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

std::string simplex_key(const Simplex& s);     // "0,2,5"
Simplex parse_simplex_key(const std::string&);

// Finite abstract simplicial complex.  Simplices get contiguous ids ordered
// by (dimension, lexicographic), so the id order refines the face order.
class SimplicialComplex {
public:
    SimplicialComplex() : vertex_count_(0) {}

    // Face closure of the given simplices.  Throws on malformed input.
    static SimplicialComplex from_maximal(int vertex_count, const std::vector<Simplex>& maximal);
    // The list must already be closed under faces (verified).
    static SimplicialComplex from_simplices(int vertex_count, std::vector<Simplex> simplices);

    int vertex_count() const { return vertex_count_; }
    int size() const { return static_cast<int>(simplices_.size()); }
    int dim() const { return static_cast<int>(count_.size()) - 1; }
    int count(int d) const {
        return (d < 0 || d > dim()) ? 0 : count_[d];
    }
    int offset(int d) const { return offset_[d]; }

    const Simplex& simplex(int id) const { return simplices_[id]; }
    int sdim(int id) const { return static_cast<int>(simplices_[id].size()) - 1; }
    int id_of(const Simplex& s) const;    // -1 when absent
    bool contains(const Simplex& s) const { return id_of(s) >= 0; }

    const std::vector<int>& facets(int id) const { return facets_[id]; }      // codim-1 faces
    const std::vector<int>& cofacets(int id) const { return cofacets_[id]; }  // codim-1 cofaces
    std::vector<int> all_cofaces(int id) const;   // every strict coface
    std::vector<int> all_faces(int id) const;     // every strict face
    bool face_leq(int a, int b) const;            // simplex a <= simplex b

    long euler_characteristic() const;

    std::vector<Simplex> maximal_simplices() const;

private:
    int vertex_count_;
    std::vector<Simplex> simplices_;
    std::vector<int> count_, offset_;
    std::unordered_map<Simplex, int, SimplexHash> index_;
    std::vector<std::vector<int>> facets_, cofacets_;

    void build_index();
};

// Incidence number [tau:sigma]: (-1)^i when sigma omits the i-th vertex of
// tau (ascending order), 0 unless sigma is a codimension-one face of tau.
int incidence(const Simplex& tau, const Simplex& sigma);

// Matrix of the boundary map C_r -> C_{r-1} in the lexicographic bases.
SparseMatrix boundary_matrix(const SimplicialComplex& k, int r);

// Simplicial homology over the rationals, by degree.
std::map<int, int> simplicial_homology(const SimplicialComplex& k);

// Builders.
SimplicialComplex simplex_complex(int n);                 // full n-simplex
SimplicialComplex sphere_complex(int n);                  // boundary of the (n+1)-simplex
SimplicialComplex circle_complex(int m);                  // m >= 3 vertices
SimplicialComplex cone(const SimplicialComplex& k);       // one new vertex
SimplicialComplex suspension(const SimplicialComplex& k); // two new vertices
SimplicialComplex join(const SimplicialComplex& k, const SimplicialComplex& l);
SimplicialComplex product(const SimplicialComplex& k, const SimplicialComplex& l);  // staircase
SimplicialComplex torus(int n);                           // n-fold product of circle_complex(3)

// Sub complex spanned by the given simplex ids (must be face closed).
SimplicialComplex subcomplex(const SimplicialComplex& k, const std::vector<int>& ids);

// Open star {tau >= sigma} as ids, closed star and link as subcomplexes.
std::vector<int> open_star(const SimplicialComplex& k, const Simplex& sigma);
SimplicialComplex closed_star(const SimplicialComplex& k, const Simplex& sigma);
SimplicialComplex link(const SimplicialComplex& k, const Simplex& sigma);

// First barycentric subdivision.  Vertex i of the subdivision is the
// barycenter of the base simplex with id i; a subdivided simplex is a strict
// flag of base simplices, which doubles as its own carrier.
struct BarycentricSubdivision {
    SimplicialComplex base;
    SimplicialComplex subdivided;

    // The carrier flag of a subdivided simplex: base ids in increasing face
    // order (the vertex list itself, since ids refine the face order).
    const Simplex& carrier(int sub_id) const { return subdivided.simplex(sub_id); }
    int carrier_top(int sub_id) const { return subdivided.simplex(sub_id).back(); }
};

BarycentricSubdivision barycentric(const SimplicialComplex& k);

// Dual cell D(sigma): subdivided simplices whose carrier flags stay >= sigma.
std::vector<int> dual_cell(const BarycentricSubdivision& bs, const Simplex& sigma);

// Simplicial map given by a total vertex assignment.
struct SimplicialMap {
    const SimplicialComplex* source;
    const SimplicialComplex* target;
    std::vector<int> vertex_map;

    SimplicialMap(const SimplicialComplex& s, const SimplicialComplex& t, std::vector<int> vm);
    Simplex image(const Simplex& s) const;  // deduplicated, sorted
};

}  // namespace persheaf
