#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pnv/initial_data.hpp"

namespace pnv {

// Frozen background pieces shared by every right-hand-side evaluation. The
// grid derivatives of h are kept so that difference tensors against the
// evolved connection can be formed through the same pointwise kernel, which
// makes the gauge residual vanish identically when gbar equals h.
struct BackgroundData {
    BackgroundMetric metric;
    std::array<Field, 3> dh;  // partial_derivative(h.g, axis)
};
BackgroundData make_background_data(BackgroundMetric m);

// Pointwise split read off the state: V is the degree-1 part of alpha raised
// with gbar, u = -gbar(V, T) for the unit coordinate-time direction T,
// N = -V_spatial/u on the slice, and pr the projector onto the slice tangent
// along V, pr(X) = X + gbar(T, X) V / u.
struct ProjectionData {
    double lamt = 0.0;  // sqrt(-gbar_00)
    double u = 0.0;
    std::array<double, 4> V{};    // spacetime components
    std::array<double, 3> N{};    // slice components
    std::array<double, 16> pr{};  // pr^rho_mu, row-major over spacetime indices
};
ProjectionData projection_data(const MetricField& gbar, const Field& alpha,
                               std::int64_t p);

// Gauge one-forms: F contracts the background Christoffels with the evolved
// metric, E contracts the difference tensor between the evolved and the
// background connection (and vanishes exactly at gbar = h).
struct GaugeSource {
    Field F;
    Field E;
};
GaugeSource gauge_source(const CauchyState& st, const BackgroundData& bg);

// Time derivatives of the five state blocks.
struct StateTangent {
    Field dt_gbar;
    std::array<Field, 3> dt_dgbar;
    Field dt_k;
    Field dt_alpha;
    Field dt_Z;
};
StateTangent make_tangent(const CauchyState& st);

// Thresholds delimiting the admissible metric neighbourhood: -gbar_00,
// -gbar^00 and the eigenvalues of the spatial block of gbar must all exceed
// metric_margin, and u must exceed u_min.
struct Admissibility {
    double metric_margin = 1e-6;
    double u_min = 1e-8;
};

// Evolution right-hand side. Throws std::domain_error naming the violated
// condition and its grid point when the state leaves the admissible
// neighbourhood or u falls below threshold.
void rhs_into(const CauchyState& st, const BackgroundData& bg, StateTangent& out);
StateTangent rhs(const CauchyState& st, const BackgroundData& bg);

// Verification channels of the second-order equation, assembled with the
// same kernels as the rhs: the quadratic Christoffel term, the symmetrised
// covariant derivative of F, and Z pulled back through the projector. All
// spacetime packed symmetric.
struct ReducedRicciFields {
    Field H;
    Field sym_nabla_F;
    Field z_pr;
};
ReducedRicciFields reduced_ricci_fields(const CauchyState& st,
                                        const BackgroundData& bg);

// Dense per-point principal symbol, block diagonal over the three
// subsystems. Row order: gbar components, then gbar_{,i} (axis-major), then
// k, then the alpha coefficients, then Z. The alpha blocks are expressed in
// the pseudo-orthonormal frame, where the Clifford factors are the constant
// matrices of the standard Minkowski product and symmetry is manifest.
struct SymbolMatrices {
    int size = 0;
    std::vector<double> A0;                 // row-major size x size
    std::array<std::vector<double>, 3> Ai;  // one per grid axis
    double symmetry_defect = 0.0;           // max entry of |M - M^T| over all blocks
    double min_eig_A0 = 0.0;
};
SymbolMatrices symbol_matrices(const CauchyState& st, std::int64_t p);

// One-pass grid scan: admissibility, the CFL speed bound
// 2 max(lamt) (1 + max specrad gbar^{ij})^{1/2}, and the closed-form minimum
// eigenvalue of A0 (blockwise minimum of 1, eig gbar^{ij}, -gbar^{00} and
// 1/lamt - |zeta^0|).
struct StateScan {
    bool admissible = false;
    std::string reason;  // empty when admissible
    double c_max = 0.0;
    double min_eig_A0 = 0.0;
};
StateScan scan_state(const CauchyState& st, const Admissibility& adm = {});
void require_admissible(const CauchyState& st, const Admissibility& adm = {});

struct EvolveOptions {
    double t_end = 1.0;
    double cfl = 0.4;             // must lie in (0,1)
    int diag_every = 1;
    int checkpoint_every = 0;     // 0 disables checkpoint callbacks
    int symbol_check_stride = 0;  // 0 disables in-run symbol assertions
    int max_steps = 0;            // 0 means no step cap
    double ko_sigma = 0.0;        // Kreiss-Oliger dissipation strength
    Admissibility adm{};
};

struct StepRecord {
    int step = 0;
    double t = 0.0;
    double dt = 0.0;
    double c_max = 0.0;
    double min_eig_A0 = 0.0;
};

struct EvolveReport {
    bool completed = false;
    std::string abort_reason;  // set when the trajectory was truncated
    int steps = 0;
    double t_final = 0.0;
    std::vector<StepRecord> records;  // one per diagnostics emission
};

using StepCallback = std::function<void(const CauchyState&, const StepRecord&)>;

// Classic RK4 on rhs with dt = cfl min(dx)/c_max, mutating st to the final
// state. on_diag fires on every diag_every-th step and once at the end;
// on_checkpoint fires on every checkpoint_every-th completed step. On
// admissibility loss the trajectory is truncated and the report flagged.
EvolveReport evolve(CauchyState& st, const BackgroundData& bg,
                    const EvolveOptions& opt, const StepCallback& on_diag = {},
                    const StepCallback& on_checkpoint = {});

}  // namespace pnv
