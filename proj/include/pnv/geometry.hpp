#pragma once

#include <string>

#include "pnv/grid.hpp"

namespace pnv {

// Metric over the grid axes with cached pointwise inverse. Both the metric
// and its inverse are stored symmetric-packed.
struct MetricField {
    bool lorentzian = false;
    Field g;     // valence (2,0)
    Field ginv;  // valence (0,2)
};

MetricField make_metric(Field g, bool lorentzian = false);

// Dense d x d view of a packed symmetric rank-2 field at one point.
void unpack_sym(const Field& f, std::int64_t p, double* dense);
// Inverse of a dense symmetric matrix; throws naming `where` when singular.
void invert_dense_sym(int d, const double* a, double* inv,
                      const std::string& where);

// Christoffel symbols of the second kind; component order (a; b, c) with the
// contravariant slot first, stored full (no packing).
Field christoffel(const MetricField& m);

struct CurvatureBundle {
    Field riemann;   // R_{abcd}, valence (4,0)
    Field ricci;     // valence (2,0), packed
    Field scal;      // scalar
    Field einstein;  // Ric - (scal/2) g, valence (2,0), packed
};

// Curvature from nested finite differences of the Christoffel field.
// Convention: R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
//            + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb},
// R_{abcd} = g_{ae} R^e_{bcd}, Ric_{bd} = R^a_{bad}.
CurvatureBundle curvature(const MetricField& m);

// Covariant derivative; the new derivative slot becomes the first covariant
// index (component order: contravariant slots, then m, then the original
// covariant slots). Pass a precomputed Christoffel field to avoid recompute.
Field covariant_derivative(const Field& t, const MetricField& m,
                           const Field* gamma = nullptr);

// Divergence with the paper's sign: (delta B)_{b...} = -g^{ac} grad_a B_{cb...}
// for covariant B; for a purely contravariant tensor the first slot is
// contracted directly, delta V = -grad_a V^a.
Field divergence(const Field& t, const MetricField& m,
                 const Field* gamma = nullptr);

// Curvature of the fiber metric family h_s = g restricted to axes >= 1,
// differentiating along fiber axes only. Returned fields keep the full
// component dimension; entries touching index 0 are zero.
CurvatureBundle fiber_curvature(const MetricField& m);

struct EmbeddingData {
    const Field* lapse = nullptr;  // lambda of the Gaussian-adapted spacetime
    const Field* u = nullptr;      // normal-form factor, unit normal u d_s
};

struct GaussCodazziResidual {
    Field res_hamiltonian;  // scalar
    Field res_momentum;     // 1-form
    Field res_gauss;        // valence (4,0), fiber indices
    Field res_codazzi;      // valence (3,0), fiber indices (X, Y, Z)
};

// Hypersurface identities on a Gaussian-adapted slice. `ambient` carries the
// spacetime curvature evaluated on the slice (spacetime component fields);
// the fiber rows compare the slice's own curvature with the fiber family
// through the Weingarten block of W.
GaussCodazziResidual gauss_codazzi_residual(const MetricField& g, const Field& W,
                                            const CurvatureBundle& ambient,
                                            const EmbeddingData& emb);

}  // namespace pnv
