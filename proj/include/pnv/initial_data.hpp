#pragma once

#include <array>
#include <string>

#include "pnv/geometry.hpp"

namespace pnv {

// Fixed background h = -lambda^2 dt^2 + g, frozen in time.
struct BackgroundMetric {
    MetricField h;  // spacetime components
    Field lambda;   // positive scalar on the slice
};

BackgroundMetric background_metric(const Field& lambda, const MetricField& g);

// Christoffels of a t-independent spacetime metric: time derivatives vanish,
// spatial derivatives fall to the grid axes. Component order (a; b, c), full
// storage over spacetime indices.
Field christoffel_static(const MetricField& m);

// Evolved state: the first-order unknowns plus the form and Z blocks.
struct CauchyState {
    double t = 0.0;
    MetricField gbar;            // spacetime metric
    std::array<Field, 3> dgbar;  // dgbar[i] carries gbar_{mu nu, i}
    Field k;                     // dt gbar, spacetime packed symmetric
    Field alpha;                 // multivector coefficients, 2^{dim+1} per point
    Field Z;                     // spatial packed symmetric
};

// Z demanded by a parallel null extension: the U-row is u(d trW + delta W)
// and the U-perp block is the curvature expression
// Ric - R(.,N,N,.) - W^2 + trW W + W(.,N)W(.,N) - W(N,N) W.
Field initial_Z(const MetricField& g, const Field& U, const Field& W,
                const CurvatureBundle& curv);

// Full state at t = 0 from constraint data and the background lapse; a null
// lambda_dot means an exactly static lapse.
CauchyState assemble_state(const MetricField& g, const Field& U, const Field& W,
                           const Field& lambda,
                           const Field* lambda_dot = nullptr);

void write_state(const CauchyState& st, const std::string& path);
CauchyState read_state(const std::string& path);

}  // namespace pnv
