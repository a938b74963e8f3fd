#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pnv/geometry.hpp"

namespace pnv {

// s-parametrized family of fiber metrics h_s, supplied as closed-form
// evaluators of (s, fiber point). h writes the packed symmetric components in
// fiber dimension fd; hdot writes the s-derivative. When hdot is empty the
// builder falls back to grid finite differences in s, which is only sound for
// s-periodic families.
struct MetricFamily {
    std::string name;
    int fiber_dim = 2;
    bool s_periodic = true;
    bool fiber_compact = true;
    double sup_u = 0.0;  // declared bound for default_u over the base, 0 if none
    std::function<void(double s, const double* x, int fd, double* h)> h;
    std::function<void(double s, const double* x, int fd, double* hdot)> hdot;
    std::function<double(double s, const double* x)> default_u;
};

// Riemannian data g = u^{-2} ds^2 + h_s with U = u^2 d_s on a grid whose
// axis 0 is s.
struct NormalFormData {
    Grid grid;
    MetricField g;
    Field u;  // scalar, positive
    Field U;  // vector
    Field W;  // symmetric valence (2,0)
};

const std::vector<MetricFamily>& family_registry();
// Registry lookup; fiber_dim == 0 keeps the entry's default dimension.
// Throws std::invalid_argument for unknown names.
MetricFamily find_family(const std::string& name, int fiber_dim = 0);

// Samples the family's default u on the grid.
Field sample_family_u(const MetricFamily& fam, const Grid& grid);

NormalFormData build_normal_form(const Field& u, const MetricFamily& fam,
                                 const Grid& grid);

// Defect grad_m U_a + u W_{ma} with u = sqrt(g(U,U)); full valence (2,0).
Field constraint_residual(const MetricField& g, const Field& U, const Field& W);

struct ConstraintIdentityResiduals {
    Field res_du;  // grad_i u + u N^k W_{ik}
    Field res_dN;  // grad_i N_j - N^k W_{ki} N_j + W_{ij}
};
ConstraintIdentityResiduals constraint_identities(const NormalFormData& data);

struct IntervalDescriptor {
    bool circle = true;          // base is S^1; false declares the real line
    double sup_u_witness = 0.0;  // declared bound over the full base, 0 if none
};

enum class CompletenessVerdict { complete, inconclusive };
const char* to_string(CompletenessVerdict v);

// One-directional completeness criterion: a compact fiber together with a
// bounded positive u yields a complete metric. Anything else is reported as
// inconclusive, never as incomplete.
CompletenessVerdict completeness_check(const Field& u, bool fiber_compact,
                                       const IntervalDescriptor& interval);

}  // namespace pnv
