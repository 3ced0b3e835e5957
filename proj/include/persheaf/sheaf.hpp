#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "persheaf/complex.hpp"
#include "persheaf/sparse.hpp"

namespace persheaf {

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

inline ComplexPtr share(SimplicialComplex k) {
    return std::make_shared<const SimplicialComplex>(std::move(k));
}

struct Diagnostics {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
    std::string joined() const;
};

// Simplicial sheaf: a stalk dimension per cell and a restriction map along
// every codimension-one incidence sigma < tau.  Longer restrictions are the
// composites, well defined once validate() passes.
class CellularSheaf {
public:
    CellularSheaf() = default;
    CellularSheaf(ComplexPtr k, std::vector<int> stalks);

    const SimplicialComplex& base() const { return *k_; }
    const ComplexPtr& base_ptr() const { return k_; }
    int stalk(int id) const { return stalk_[id]; }
    const std::vector<int>& stalks() const { return stalk_; }

    void set_restriction(int sid, int tid, SparseMatrix m);
    SparseMatrix restriction1(int sid, int tid) const;   // codim one
    SparseMatrix restriction(int sid, int tid) const;    // any sid <= tid

    Diagnostics validate() const;

private:
    ComplexPtr k_;
    std::vector<int> stalk_;
    std::map<std::pair<int, int>, SparseMatrix> rest_;
};

// Simplicial cosheaf: corestriction maps tau -> sigma along codim-one pairs.
class CellularCosheaf {
public:
    CellularCosheaf() = default;
    CellularCosheaf(ComplexPtr k, std::vector<int> stalks);

    const SimplicialComplex& base() const { return *k_; }
    const ComplexPtr& base_ptr() const { return k_; }
    int stalk(int id) const { return stalk_[id]; }

    void set_corestriction(int tid, int sid, SparseMatrix m);
    SparseMatrix corestriction1(int tid, int sid) const;
    SparseMatrix corestriction(int tid, int sid) const;  // any sid <= tid

    Diagnostics validate() const;

private:
    ComplexPtr k_;
    std::vector<int> stalk_;
    std::map<std::pair<int, int>, SparseMatrix> rest_;
};

// C^r(K;S) with the signed cochain differential.
GradedComplex cochain_complex(const CellularSheaf& s);
std::map<int, int> cochain_cohomology(const CellularSheaf& s);

// Homological mirror for cosheaves; keys are homological degrees.
GradedComplex chain_complex(const CellularCosheaf& r);
std::map<int, int> cosheaf_homology(const CellularCosheaf& r);

// Elementary sheaves: the injective Q_{sigma*} (constant on the closed
// simplex) and the extension by zero Q_{sigma!} (stalk on sigma only).
CellularSheaf elementary_star(ComplexPtr k, const Simplex& sigma);
CellularSheaf elementary_shriek(ComplexPtr k, const Simplex& sigma);

CellularSheaf constant_sheaf(ComplexPtr k, int dim = 1);
CellularCosheaf constant_cosheaf(ComplexPtr k, int dim = 1);

CellularSheaf direct_sum(const std::vector<CellularSheaf>& parts);

// Morphism of sheaves: one block per cell, commuting with restrictions.
struct SheafMorphism {
    const CellularSheaf* source;
    const CellularSheaf* target;
    std::vector<SparseMatrix> block;  // per cell: target.stalk x source.stalk

    Diagnostics validate() const;
};

CellularSheaf sheaf_kernel(const SheafMorphism& f);

// A complex of sheaves whose terms are sums of "coefficient space tensor
// Q_{bot*}" summands.  This covers the canonical injective resolution and
// the dualizing complex, and supports the three section functors we need:
// stalks, global sections, and sections supported in a locally closed set.
struct ElSummand {
    int bot;    // support simplex id: the summand sheaf is constant on its closure
    int cdim;   // coefficient dimension
    int top;    // bookkeeping: top of the indexing flag (== bot when unused)
};

struct ElementaryComplex {
    ComplexPtr k;
    int lo = 0;
    std::vector<std::vector<ElSummand>> terms;
    // diff[i][(src,dst)]: coefficient block of the map term i -> term i+1,
    // shape cdim(dst) x cdim(src); signs folded into the blocks.
    std::vector<std::map<std::pair<int, int>, SparseMatrix>> diff;

    int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
    int term_dim(int i) const;

    GradedComplex stalk_complex(int cell) const;
    GradedComplex global_sections_complex() const;

    // Sections over the open set U (cells flagged in_u) supported in the
    // subset C (cells flagged in_c), C closed in U.  Exact on these terms,
    // so the cohomology of the result is H^*_C(U; -).
    GradedComplex supported_sections_complex(const std::vector<char>& in_u,
                                             const std::vector<char>& in_c) const;

    std::map<int, int> hypercohomology() const;
};

// Complex of sheaves with stalkwise differentials (the spec-facing shape).
struct SheafComplex {
    ComplexPtr k;
    int lo = 0;
    std::vector<CellularSheaf> terms;
    std::vector<std::vector<SparseMatrix>> d;  // d[i][cell]

    int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
    Diagnostics validate() const;
};

SheafComplex to_sheaf_complex(const ElementaryComplex& e);

// Canonical injective resolution A -> I^0 -> I^1 -> ...  Terms are indexed
// by strict flags tau_k < ... < tau_0 of simplices with A(tau_0) != 0; the
// summand for such a flag is A(tau_0) tensor Q_{tau_k*}.
struct InjectiveResolution {
    CellularSheaf a;
    ElementaryComplex cx;                     // degrees 0..len
    std::vector<std::vector<Simplex>> flags;  // flags[i][j]: ascending simplex ids

    // Stalkwise augmented complex A(c) -> I^0(c) -> ...; exact for every c.
    GradedComplex augmented_stalk_complex(int cell) const;
};

InjectiveResolution canonical_injective_resolution(const CellularSheaf& a);

// Ext^i(A, B) computed by injectively resolving the second argument.
std::map<int, int> ext_groups(const CellularSheaf& a, const CellularSheaf& b);

// Dualizing complex in degrees -dim(K)..0.
ElementaryComplex dualizing_complex(ComplexPtr k);

// Sheaf induced on the barycentric subdivision: the value on a flag cell is
// the value at the top of its carrier.
CellularSheaf subdivide_sheaf(const CellularSheaf& a, const BarycentricSubdivision& bs,
                              ComplexPtr subdivided);

}  // namespace persheaf
