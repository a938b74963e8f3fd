#pragma once

#include <array>
#include <functional>
#include <vector>

#include "pnv/constraint.hpp"
#include "pnv/geometry.hpp"

namespace pnv {

// Dense tensor at a fiber point: valence (rank_con, rank_cov), contravariant
// slots first, row-major.
struct FiberTensor {
    int dim = 0;
    int rank_con = 0;
    int rank_cov = 0;
    std::vector<double> c;

    int rank() const { return rank_con + rank_cov; }
    int idx(std::initializer_list<int> is) const {
        int o = 0;
        for (int i : is) o = o * dim + i;
        return o;
    }
};

FiberTensor make_fiber_tensor(int dim, int rank_con, int rank_cov);
double fiber_linf(const FiberTensor& t);

// Derivation action of an endomorphism: +A composed onto each contravariant
// slot, -A precomposed on each covariant slot. A is a (1,1) tensor of the
// same dimension (A^i_j at A.c[i*dim+j]).
FiberTensor endo_action(const FiberTensor& A, const FiberTensor& eta);

// Alternating-form helpers on the euclidean fiber R^dim. add_form_term adds
// coeff * e^{i1} ^ ... ^ e^{ik} (all permutations with sign) to a dense
// (0,k) tensor; euclidean_hodge maps k-forms to (dim-k)-forms with the
// standard orientation; interior_product contracts a vector into the first
// slot.
void add_form_term(FiberTensor& form, const std::vector<int>& is, double coeff);
FiberTensor euclidean_hodge(const FiberTensor& beta);
FiberTensor interior_product(const double* v, const FiberTensor& beta);

// Euclidean volume form (epsilon symbol) of the dim-torus fiber.
FiberTensor volume_form(int dim);

// s-dependent family of fiber tensors. Closed-form families carry component
// evaluators of (s, fiber point); integrated families store the trajectory
// at the integrator nodes, per fiber grid point (a single point at the
// origin when no grid backs the family).
struct TensorFamily {
    int dim = 0;
    int rank_con = 0;
    int rank_cov = 0;

    std::function<void(double s, const double* x, double* c)> eval;
    std::function<void(double s, const double* x, double* c)> eval_dot;

    std::vector<double> s_nodes;
    std::vector<std::vector<double>> node_data;  // [point][node * ncomp + c]
    Grid grid;
    bool gridded = false;

    int ncomp() const;
    bool closed_form() const { return static_cast<bool>(eval); }
    FiberTensor value(double s, const double* x) const;
    FiberTensor dot(double s, const double* x) const;
    // Node-route accessors; s must match a stored node.
    FiberTensor node_value(double s, std::int64_t q) const;
};

TensorFamily make_closed_family(
    int dim, int rank_con, int rank_cov,
    std::function<void(double s, const double* x, double* c)> eval,
    std::function<void(double s, const double* x, double* c)> eval_dot = {});

// -1/2 (h_s^{-1} dh_s/ds) . eta at the fiber point x. Throws
// std::domain_error when h_s is not positive definite there.
FiberTensor flow_rhs(const MetricFamily& fam, double s, const double* x,
                     const FiberTensor& eta);

// Classic fixed-step RK4 for the pointwise linear flow ODE on [s0, s1]. With
// a fiber grid the trajectory is carried at every grid point (x-dependent
// families); without one the single fiber point x = 0 is used.
TensorFamily integrate_flow(const MetricFamily& fam, const FiberTensor& eta0,
                            double s0, double s1, int steps,
                            const Grid* fiber_grid = nullptr);

// Covariant derivative of the stored eta_s in the Levi-Civita connection of
// h_s, sampled on the family's fiber grid; rank (rank_cov + 1, rank_con).
Field parallel_residual(const MetricFamily& fam, const TensorFamily& tf,
                        double s);

// J-invariant / J-anti-invariant split of an antisymmetric 2-form:
// b11 = (beta + beta(J., J.))/2 and bminus = (beta - beta(J., J.))/2.
struct TypeDecomposition2Form {
    FiberTensor b11;
    FiberTensor bminus;
};

TypeDecomposition2Form type_decompose_2form(const FiberTensor& beta,
                                            const FiberTensor& J);

// Pointwise Kaehler flow check on dense dim x dim component matrices:
// compatibility h(X, Y) = omega(JX, Y) and J^2 = -Id are preconditions
// (violations beyond comp_tol throw), then the two flow residuals, the type
// split of omega_dot and the biconditional verdict (residuals below res_tol
// exactly when the anti-invariant mass is) are reported.
struct KaehlerPointReport {
    double flow_res_J = 0.0;
    double flow_res_omega = 0.0;
    TypeDecomposition2Form type_dec;
    double b11_linf = 0.0;
    double bminus_linf = 0.0;
    bool lemma_verdict = false;
};

KaehlerPointReport kaehler_point_check(int dim, const double* h,
                                       const double* hdot, const double* J,
                                       const double* Jdot, const double* omega,
                                       const double* omegadot,
                                       double comp_tol = 1e-10,
                                       double res_tol = 1e-10);

// Grid-backed Kaehler checks of the metric family against closed-form J and
// omega families at parameter s: linf flow residuals over the grid, the type
// split at the point attaining the anti-invariant linf, the divergence
// residual of hdot and the trace defect of the special-unitary condition
// (W defaults to zero when absent).
struct KaehlerChecksReport {
    double flow_res_J = 0.0;
    double flow_res_omega = 0.0;
    TypeDecomposition2Form type_dec;
    double b11_linf = 0.0;
    double bminus_linf = 0.0;
    bool lemma_verdict = false;
    double su_div_res = 0.0;
    double su_trace_res = 0.0;
};

KaehlerChecksReport kaehler_checks(const MetricFamily& fam,
                                   const TensorFamily& Jf,
                                   const TensorFamily& omf, double s,
                                   const Grid& fiber_grid,
                                   const Field* W = nullptr);

// Coordinates of a 3-form on R^7 against the standard G2 structure phi0:
// beta = r phi0 + S_sharp . phi0 + X contracted into the Hodge dual of phi0,
// with S symmetric traceless.
struct G2Coordinates {
    double r = 0.0;
    std::array<double, 49> S{};
    std::array<double, 7> X{};
};

const FiberTensor& g2_phi0();
const FiberTensor& g2_star_phi0();
G2Coordinates g2_decompose(const FiberTensor& beta);
FiberTensor g2_reconstruct(const G2Coordinates& co);
// A 3-form velocity satisfies the G2 flow at phi0 exactly when its R^7
// coordinate vanishes.
bool g2_flow_compatible(const FiberTensor& phidot, double tol = 1e-10);

}  // namespace pnv
