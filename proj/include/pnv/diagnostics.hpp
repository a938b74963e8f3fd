#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "pnv/evolver.hpp"

namespace pnv {

// Time derivatives entering the diagnostic spacetime jets on a slice. The
// metric's own time derivative is always the state's k; these supply the
// second time level (dt k) and the transport rows (the degree-one part of
// dt alpha, and dt Z).
struct SliceSources {
    Field dt_k;       // spacetime symmetric
    Field dt_alpha1;  // spacetime one-form
    Field dt_Z;       // spatial symmetric
};

// Sources taken from the evolution right-hand side (the production route).
SliceSources evolution_sources(const CauchyState& st, const BackgroundData& bg);

// Pointwise residual fields of one slice. nabla_V stores nabla_m V^n at
// component (n contravariant, m covariant); ricci_bar and ricci_res are
// dense rank-2 so that the raw, unsymmetrised Ricci assembly is visible.
struct DiagnosticFields {
    Field E;             // gauge one-form
    Field nabla_V;       // nabla V, mixed rank (1,1)
    Field null_V;        // scalar alpha(V) = gbar(V, V)
    Field ricci_bar;     // Ricci of the slice jets
    Field sym_nabla_E;   // Sym(nabla E), symmetric
    Field z_pr;          // Z o pr, symmetric
    Field ricci_res;     // ricci_bar - z_pr + sym_nabla_E
    Field ZV;            // (Z o pr)(V, .), zero by the projector algebra
    Field dVZ;           // nabla_V (Z o pr), symmetric
    Field delta_L;       // divergence one-form of Z o pr - (1/2) tr(Z o pr) gbar
    Field alpha_purity;  // scalar norm of the non-degree-one part of alpha
};

DiagnosticFields diagnostic_fields(const CauchyState& st,
                                   const BackgroundData& bg,
                                   const SliceSources& src);

// One row of the diagnostic history. When u drops below threshold the
// V-dependent entries are reported absent (NaN) and v_valid clears; E and
// alpha_purity stay available. Otherwise every entry is finite.
struct DiagnosticsReport {
    double t = 0.0;
    FieldNorms E;
    FieldNorms nabla_V;
    FieldNorms null_V;
    FieldNorms ricci_res;
    FieldNorms ZV;
    FieldNorms dVZ;
    FieldNorms delta_L;
    FieldNorms alpha_purity;
    double dt = 0.0;
    double c_max = 0.0;
    double min_eig_A0 = 0.0;
    bool v_valid = true;
};

// Full residual suite over one slice with sources from the evolution
// right-hand side. Metric admissibility failures throw; a u below threshold
// degrades to a report with the V-dependent entries absent.
DiagnosticsReport residual_suite(const CauchyState& st, const BackgroundData& bg,
                                 double dt = 0.0);

// Divergence one-form of L = (Z o pr) - (1/2) tr_gbar(Z o pr) gbar, with the
// slice time derivatives of alpha and Z taken from their transport
// right-hand sides.
Field delta_L(const CauchyState& st);

// Projection split (lamt, u, V, N, pr) at one grid point.
ProjectionData split_V(const CauchyState& st, std::int64_t p);

// Least-squares slope of log(value) against log(spacing). Requires at least
// two pairs and strictly positive inputs; exact zeros are rejected as below
// the measurable floor.
double convergence_order(const std::vector<double>& values,
                         const std::vector<double>& spacings);

// CSV sink for diagnostic rows. Column order is fixed: t, then the linf and
// l2 pairs in report order, then dt, c_max, min_eig_A0. The header row is
// always written first.
class DiagnosticsCsv {
public:
    explicit DiagnosticsCsv(const std::string& path);
    void append(const DiagnosticsReport& rep);
    static std::string header();
    static std::string format_row(const DiagnosticsReport& rep);

private:
    std::ofstream out_;
};

}  // namespace pnv
