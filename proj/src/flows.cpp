#include "pnv/flows.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pnv {

namespace {

int pow_int(int base, int exp) {
    int v = 1;
    for (int r = 0; r < exp; ++r) v *= base;
    return v;
}

int permutation_sign(const std::vector<int>& is) {
    int inv = 0;
    for (std::size_t a = 0; a < is.size(); ++a)
        for (std::size_t b = a + 1; b < is.size(); ++b)
            if (is[a] > is[b]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

void check_form(const FiberTensor& t, const char* who) {
    if (t.rank_con != 0)
        throw std::invalid_argument(std::string(who) +
                                    ": expected a purely covariant form");
    if (t.dim < 1 || t.rank_cov > t.dim)
        throw std::invalid_argument(std::string(who) +
                                    ": form degree exceeds the dimension");
}

// -1/2 (h^{-1} hdot) as a dense endomorphism at (s, x); throws when h fails
// the Cholesky positivity test.
void half_flow_endo(const MetricFamily& fam, double s, const double* x,
                    Eigen::MatrixXd& A) {
    const int fd = fam.fiber_dim;
    std::vector<double> hp(sym_count(fd)), hdp(sym_count(fd));
    fam.h(s, x, fd, hp.data());
    fam.hdot(s, x, fd, hdp.data());
    Eigen::MatrixXd H(fd, fd), Hd(fd, fd);
    for (int i = 0; i < fd; ++i)
        for (int j = 0; j < fd; ++j) {
            H(i, j) = hp[sym_index(i, j, fd)];
            Hd(i, j) = hdp[sym_index(i, j, fd)];
        }
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("flow: h_s is not positive definite at s = " +
                                std::to_string(s));
    A = -0.5 * llt.solve(Hd);
}

void endo_action_into(int d, int rank_con, int rank, const double* A,
                      const std::vector<double>& eta, std::vector<double>& out) {
    const int nc = static_cast<int>(eta.size());
    std::vector<int> idx(rank, 0);
    for (int c = 0; c < nc; ++c) {
        int rem = c;
        for (int s = rank - 1; s >= 0; --s) {
            idx[s] = rem % d;
            rem /= d;
        }
        double v = 0.0;
        int stride = nc / (d > 0 ? d : 1);
        for (int s = 0; s < rank; ++s) {
            const int base = c - idx[s] * stride;
            double acc = 0.0;
            if (s < rank_con) {
                for (int m = 0; m < d; ++m)
                    acc += A[idx[s] * d + m] * eta[base + m * stride];
            } else {
                for (int m = 0; m < d; ++m)
                    acc -= eta[base + m * stride] * A[m * d + idx[s]];
            }
            v += acc;
            stride /= d;
        }
        out[c] = v;
    }
}

void rhs_into(const Eigen::MatrixXd& A, int d, int rank_con, int rank,
              const std::vector<double>& eta, std::vector<double>& out) {
    std::vector<double> Ad(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Ad[i * d + j] = A(i, j);
    endo_action_into(d, rank_con, rank, Ad.data(), eta, out);
}

std::int64_t locate_node(const std::vector<double>& nodes, double s,
                         const char* who) {
    for (std::size_t n = 0; n < nodes.size(); ++n)
        if (std::abs(nodes[n] - s) <= 1e-9 * std::max(1.0, std::abs(nodes[n])))
            return static_cast<std::int64_t>(n);
    throw std::invalid_argument(std::string(who) + ": s = " + std::to_string(s) +
                                " is not a stored flow node");
}

double dense_linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

void require_square(int dim, const FiberTensor& t, int rc, int rl,
                    const char* who) {
    if (t.dim != dim || t.rank_con != rc || t.rank_cov != rl)
        throw std::invalid_argument(std::string(who) + ": valence mismatch");
}

}  // namespace

FiberTensor make_fiber_tensor(int dim, int rank_con, int rank_cov) {
    if (dim < 1) throw std::invalid_argument("make_fiber_tensor: dim must be positive");
    if (rank_con < 0 || rank_cov < 0)
        throw std::invalid_argument("make_fiber_tensor: negative rank");
    FiberTensor t;
    t.dim = dim;
    t.rank_con = rank_con;
    t.rank_cov = rank_cov;
    t.c.assign(pow_int(dim, rank_con + rank_cov), 0.0);
    return t;
}

double fiber_linf(const FiberTensor& t) { return dense_linf(t.c); }

FiberTensor endo_action(const FiberTensor& A, const FiberTensor& eta) {
    if (A.rank_con != 1 || A.rank_cov != 1)
        throw std::invalid_argument("endo_action: A must be a (1,1) tensor");
    if (A.dim != eta.dim)
        throw std::invalid_argument("endo_action: dimension mismatch");
    FiberTensor out = make_fiber_tensor(eta.dim, eta.rank_con, eta.rank_cov);
    endo_action_into(eta.dim, eta.rank_con, eta.rank(), A.c.data(), eta.c, out.c);
    return out;
}

void add_form_term(FiberTensor& form, const std::vector<int>& is, double coeff) {
    check_form(form, "add_form_term");
    if (static_cast<int>(is.size()) != form.rank_cov)
        throw std::invalid_argument("add_form_term: index count mismatch");
    for (int i : is)
        if (i < 0 || i >= form.dim)
            throw std::invalid_argument("add_form_term: index out of range");
    std::vector<int> sorted = is;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return;
    const int base_sign = permutation_sign(is);
    std::vector<int> perm = sorted;
    do {
        int o = 0;
        for (int i : perm) o = o * form.dim + i;
        form.c[o] += base_sign * permutation_sign(perm) * coeff;
    } while (std::next_permutation(perm.begin(), perm.end()));
}

FiberTensor euclidean_hodge(const FiberTensor& beta) {
    check_form(beta, "euclidean_hodge");
    const int n = beta.dim, k = beta.rank_cov;
    FiberTensor out = make_fiber_tensor(n, 0, n - k);
    std::vector<int> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    // Iterate over the strictly increasing k-subsets I; *e^I = sign(I, I^c) e^{I^c}.
    while (true) {
        int o = 0;
        for (int i : subset) o = o * n + i;
        const double b = k == 0 ? beta.c[0] : beta.c[o];
        if (b != 0.0) {
            std::vector<int> comp;
            std::vector<bool> used(n, false);
            for (int i : subset) used[i] = true;
            for (int i = 0; i < n; ++i)
                if (!used[i]) comp.push_back(i);
            std::vector<int> concat = subset;
            concat.insert(concat.end(), comp.begin(), comp.end());
            add_form_term(out, comp, permutation_sign(concat) * b);
        }
        // next k-subset in lexicographic order
        int t = k - 1;
        while (t >= 0 && subset[t] == n - k + t) --t;
        if (t < 0) break;
        ++subset[t];
        for (int q = t + 1; q < k; ++q) subset[q] = subset[q - 1] + 1;
    }
    return out;
}

FiberTensor interior_product(const double* v, const FiberTensor& beta) {
    check_form(beta, "interior_product");
    if (beta.rank_cov < 1)
        throw std::invalid_argument("interior_product: needs a form of degree >= 1");
    const int n = beta.dim;
    FiberTensor out = make_fiber_tensor(n, 0, beta.rank_cov - 1);
    const int rest = static_cast<int>(out.c.size());
    for (int c = 0; c < rest; ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += v[i] * beta.c[i * rest + c];
        out.c[c] = s;
    }
    return out;
}

FiberTensor volume_form(int dim) {
    FiberTensor vol = make_fiber_tensor(dim, 0, dim);
    std::vector<int> is(dim);
    std::iota(is.begin(), is.end(), 0);
    add_form_term(vol, is, 1.0);
    return vol;
}

int TensorFamily::ncomp() const { return pow_int(dim, rank_con + rank_cov); }

FiberTensor TensorFamily::value(double s, const double* x) const {
    if (!eval)
        throw std::invalid_argument("TensorFamily: no closed-form evaluator");
    FiberTensor t = make_fiber_tensor(dim, rank_con, rank_cov);
    eval(s, x, t.c.data());
    return t;
}

FiberTensor TensorFamily::dot(double s, const double* x) const {
    if (!eval_dot)
        throw std::invalid_argument("TensorFamily: no closed-form s-derivative");
    FiberTensor t = make_fiber_tensor(dim, rank_con, rank_cov);
    eval_dot(s, x, t.c.data());
    return t;
}

FiberTensor TensorFamily::node_value(double s, std::int64_t q) const {
    if (node_data.empty())
        throw std::invalid_argument("TensorFamily: no stored flow nodes");
    if (q < 0 || q >= static_cast<std::int64_t>(node_data.size()))
        throw std::invalid_argument("TensorFamily: point index out of range");
    const std::int64_t n = locate_node(s_nodes, s, "TensorFamily");
    FiberTensor t = make_fiber_tensor(dim, rank_con, rank_cov);
    const int nc = ncomp();
    const double* src = node_data[q].data() + n * nc;
    std::copy(src, src + nc, t.c.begin());
    return t;
}

TensorFamily make_closed_family(
    int dim, int rank_con, int rank_cov,
    std::function<void(double s, const double* x, double* c)> eval,
    std::function<void(double s, const double* x, double* c)> eval_dot) {
    if (!eval)
        throw std::invalid_argument("make_closed_family: evaluator required");
    TensorFamily f;
    f.dim = dim;
    f.rank_con = rank_con;
    f.rank_cov = rank_cov;
    f.eval = std::move(eval);
    f.eval_dot = std::move(eval_dot);
    return f;
}

FiberTensor flow_rhs(const MetricFamily& fam, double s, const double* x,
                     const FiberTensor& eta) {
    if (eta.dim != fam.fiber_dim)
        throw std::invalid_argument(
            "flow_rhs: tensor dimension does not match the family fiber");
    Eigen::MatrixXd A;
    half_flow_endo(fam, s, x, A);
    FiberTensor out = make_fiber_tensor(eta.dim, eta.rank_con, eta.rank_cov);
    rhs_into(A, eta.dim, eta.rank_con, eta.rank(), eta.c, out.c);
    return out;
}

TensorFamily integrate_flow(const MetricFamily& fam, const FiberTensor& eta0,
                            double s0, double s1, int steps,
                            const Grid* fiber_grid) {
    if (steps < 1)
        throw std::invalid_argument("integrate_flow: steps must be positive");
    if (eta0.dim != fam.fiber_dim)
        throw std::invalid_argument(
            "integrate_flow: tensor dimension does not match the family fiber");
    if (!fam.h || !fam.hdot)
        throw std::invalid_argument(
            "integrate_flow: family needs closed-form h and hdot");
    if (fiber_grid && fiber_grid->dim != fam.fiber_dim)
        throw std::invalid_argument(
            "integrate_flow: fiber grid dimension mismatch");

    TensorFamily out;
    out.dim = eta0.dim;
    out.rank_con = eta0.rank_con;
    out.rank_cov = eta0.rank_cov;
    const int nc = out.ncomp();
    const double ds = (s1 - s0) / steps;
    out.s_nodes.resize(steps + 1);
    for (int n = 0; n <= steps; ++n) out.s_nodes[n] = s0 + n * ds;

    std::vector<std::array<double, 3>> pts;
    if (fiber_grid) {
        out.grid = *fiber_grid;
        out.gridded = true;
        pts.resize(fiber_grid->npts());
        for (std::int64_t p = 0; p < fiber_grid->npts(); ++p) {
            const auto ix = fiber_grid->unflatten(p);
            for (int a = 0; a < fiber_grid->dim; ++a)
                pts[p][a] = fiber_grid->coord(ix, a);
        }
    } else {
        pts.push_back({0.0, 0.0, 0.0});
    }

    out.node_data.assign(pts.size(),
                         std::vector<double>((steps + 1) * static_cast<std::size_t>(nc)));
    const int d = out.dim, rc = out.rank_con, rank = eta0.rank();
    Eigen::MatrixXd A;
    std::vector<double> eta(nc), k1(nc), k2(nc), k3(nc), k4(nc), tmp(nc);
    for (std::size_t q = 0; q < pts.size(); ++q) {
        const double* x = pts[q].data();
        eta = eta0.c;
        std::copy(eta.begin(), eta.end(), out.node_data[q].begin());
        for (int n = 0; n < steps; ++n) {
            const double s = out.s_nodes[n];
            half_flow_endo(fam, s, x, A);
            rhs_into(A, d, rc, rank, eta, k1);
            half_flow_endo(fam, s + 0.5 * ds, x, A);
            for (int c = 0; c < nc; ++c) tmp[c] = eta[c] + 0.5 * ds * k1[c];
            rhs_into(A, d, rc, rank, tmp, k2);
            for (int c = 0; c < nc; ++c) tmp[c] = eta[c] + 0.5 * ds * k2[c];
            rhs_into(A, d, rc, rank, tmp, k3);
            half_flow_endo(fam, s + ds, x, A);
            for (int c = 0; c < nc; ++c) tmp[c] = eta[c] + ds * k3[c];
            rhs_into(A, d, rc, rank, tmp, k4);
            for (int c = 0; c < nc; ++c)
                eta[c] += ds / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            for (double v : eta)
                if (!std::isfinite(v))
                    throw std::domain_error(
                        "integrate_flow: non-finite components at s = " +
                        std::to_string(s + ds));
            std::copy(eta.begin(), eta.end(),
                      out.node_data[q].begin() + (n + 1) * static_cast<std::size_t>(nc));
        }
    }
    return out;
}

Field parallel_residual(const MetricFamily& fam, const TensorFamily& tf,
                        double s) {
    if (!tf.gridded)
        throw std::invalid_argument("parallel_residual: needs a grid-backed family");
    if (tf.dim != fam.fiber_dim)
        throw std::invalid_argument("parallel_residual: fiber dimension mismatch");
    const Grid& grid = tf.grid;
    const int fd = fam.fiber_dim, nc = tf.ncomp();
    Field hf = make_field(grid, 2, 0, false, true);
    Field eta = make_field(grid, tf.rank_cov, tf.rank_con);
    const std::int64_t node = locate_node(tf.s_nodes, s, "parallel_residual");
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        const auto ix = grid.unflatten(p);
        double x[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < grid.dim; ++a) x[a] = grid.coord(ix, a);
        fam.h(s, x, fd, hf.pt(p));
        const double* src = tf.node_data[p].data() + node * nc;
        std::copy(src, src + nc, eta.pt(p));
    }
    const MetricField h = make_metric(std::move(hf));
    return covariant_derivative(eta, h);
}

TypeDecomposition2Form type_decompose_2form(const FiberTensor& beta,
                                            const FiberTensor& J) {
    if (beta.rank_con != 0 || beta.rank_cov != 2)
        throw std::invalid_argument("type_decompose_2form: beta must be a 2-form");
    if (J.rank_con != 1 || J.rank_cov != 1)
        throw std::invalid_argument("type_decompose_2form: J must be a (1,1) tensor");
    if (beta.dim != J.dim)
        throw std::invalid_argument("type_decompose_2form: dimension mismatch");
    const int d = beta.dim;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = i == j ? 1.0 : 0.0;
            for (int m = 0; m < d; ++m) s += J.c[i * d + m] * J.c[m * d + j];
            if (std::abs(s) > 1e-8)
                throw std::domain_error(
                    "type_decompose_2form: J does not square to -Id");
        }
    TypeDecomposition2Form out;
    out.b11 = make_fiber_tensor(d, 0, 2);
    out.bminus = make_fiber_tensor(d, 0, 2);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double bjj = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    bjj += J.c[k * d + i] * J.c[l * d + j] * beta.c[k * d + l];
            const double b = beta.c[i * d + j];
            out.b11.c[i * d + j] = 0.5 * b + 0.5 * bjj;
            out.bminus.c[i * d + j] = b - out.b11.c[i * d + j];
        }
    return out;
}

KaehlerPointReport kaehler_point_check(int dim, const double* h,
                                       const double* hdot, const double* J,
                                       const double* Jdot, const double* omega,
                                       const double* omegadot, double comp_tol,
                                       double res_tol) {
    const int d = dim;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double jj = i == j ? 1.0 : 0.0;
            double om = 0.0;
            for (int k = 0; k < d; ++k) {
                jj += J[i * d + k] * J[k * d + j];
                om += J[k * d + i] * omega[k * d + j];
            }
            if (std::abs(jj) > comp_tol)
                throw std::domain_error("kaehler_checks: J does not square to -Id");
            if (std::abs(h[i * d + j] - om) > comp_tol)
                throw std::domain_error(
                    "kaehler_checks: h and omega(J., .) disagree beyond tolerance");
        }

    Eigen::MatrixXd H(d, d), Hd(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            H(i, j) = h[i * d + j];
            Hd(i, j) = hdot[i * d + j];
        }
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("kaehler_checks: h is not positive definite");
    const Eigen::MatrixXd A = llt.solve(Hd);

    KaehlerPointReport rep;
    FiberTensor Jt = make_fiber_tensor(d, 1, 1);
    std::copy(J, J + d * d, Jt.c.begin());
    FiberTensor om = make_fiber_tensor(d, 0, 2);
    std::copy(omega, omega + d * d, om.c.begin());
    std::vector<double> Ad(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Ad[i * d + j] = A(i, j);
    std::vector<double> actJ(d * d), actOm(d * d);
    endo_action_into(d, 1, 2, Ad.data(), Jt.c, actJ);
    endo_action_into(d, 0, 2, Ad.data(), om.c, actOm);
    double rj = 0.0, ro = 0.0;
    FiberTensor omdot = make_fiber_tensor(d, 0, 2);
    for (int c = 0; c < d * d; ++c) {
        rj = std::max(rj, std::abs(Jdot[c] + 0.5 * actJ[c]));
        ro = std::max(ro, std::abs(omegadot[c] + 0.5 * actOm[c]));
        omdot.c[c] = omegadot[c];
    }
    rep.flow_res_J = rj;
    rep.flow_res_omega = ro;
    rep.type_dec = type_decompose_2form(omdot, Jt);
    rep.b11_linf = fiber_linf(rep.type_dec.b11);
    rep.bminus_linf = fiber_linf(rep.type_dec.bminus);
    rep.lemma_verdict =
        (std::max(rj, ro) < res_tol) == (rep.bminus_linf < res_tol);
    return rep;
}

KaehlerChecksReport kaehler_checks(const MetricFamily& fam,
                                   const TensorFamily& Jf,
                                   const TensorFamily& omf, double s,
                                   const Grid& fiber_grid, const Field* W) {
    const int fd = fam.fiber_dim;
    if (fiber_grid.dim != fd)
        throw std::invalid_argument("kaehler_checks: fiber grid dimension mismatch");
    if (Jf.dim != fd || Jf.rank_con != 1 || Jf.rank_cov != 1)
        throw std::invalid_argument("kaehler_checks: J family must be (1,1) on the fiber");
    if (omf.dim != fd || omf.rank_con != 0 || omf.rank_cov != 2)
        throw std::invalid_argument("kaehler_checks: omega family must be a 2-form");
    if (!Jf.closed_form() || !Jf.eval_dot || !omf.closed_form() || !omf.eval_dot)
        throw std::invalid_argument(
            "kaehler_checks: J and omega need closed-form values and s-derivatives");
    if (W && (!(W->grid == fiber_grid) || W->ncomp != sym_count(fd)))
        throw std::invalid_argument("kaehler_checks: W shape mismatch");

    Field hf = make_field(fiber_grid, 2, 0, false, true);
    Field hdf = make_field(fiber_grid, 2, 0, false, true);
    const std::int64_t np = fiber_grid.npts();
    std::vector<std::array<double, 3>> pts(np);
    for (std::int64_t p = 0; p < np; ++p) {
        const auto ix = fiber_grid.unflatten(p);
        for (int a = 0; a < fd; ++a) pts[p][a] = fiber_grid.coord(ix, a);
        fam.h(s, pts[p].data(), fd, hf.pt(p));
        fam.hdot(s, pts[p].data(), fd, hdf.pt(p));
    }
    const MetricField h = make_metric(hf);

    KaehlerChecksReport rep;
    std::vector<double> hd(fd * fd), hdd(fd * fd);
    for (std::int64_t p = 0; p < np; ++p) {
        const double* x = pts[p].data();
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) {
                hd[i * fd + j] = hf.at(p, sym_index(i, j, fd));
                hdd[i * fd + j] = hdf.at(p, sym_index(i, j, fd));
            }
        const FiberTensor J = Jf.value(s, x), Jd = Jf.dot(s, x);
        const FiberTensor om = omf.value(s, x), omd = omf.dot(s, x);
        const KaehlerPointReport pr = kaehler_point_check(
            fd, hd.data(), hdd.data(), J.c.data(), Jd.c.data(), om.c.data(),
            omd.c.data());
        rep.flow_res_J = std::max(rep.flow_res_J, pr.flow_res_J);
        rep.flow_res_omega = std::max(rep.flow_res_omega, pr.flow_res_omega);
        rep.b11_linf = std::max(rep.b11_linf, pr.b11_linf);
        if (pr.bminus_linf >= rep.bminus_linf) {
            rep.bminus_linf = pr.bminus_linf;
            rep.type_dec = pr.type_dec;
        }
    }
    rep.lemma_verdict = (std::max(rep.flow_res_J, rep.flow_res_omega) < 1e-10) ==
                        (rep.bminus_linf < 1e-10);

    rep.su_div_res = field_norms(divergence(hdf, h)).linf;

    const CurvatureBundle cb = curvature(h);
    double tr_res = 0.0;
    std::vector<double> hi(fd * fd), wd(fd * fd, 0.0);
    for (std::int64_t p = 0; p < np; ++p) {
        const double* x = pts[p].data();
        const FiberTensor J = Jf.value(s, x);
        unpack_sym(h.ginv, p, hi.data());
        if (W)
            for (int i = 0; i < fd; ++i)
                for (int j = 0; j < fd; ++j)
                    wd[i * fd + j] = W->at(p, sym_index(i, j, fd));
        const double* R = cb.riemann.pt(p);
        for (int xx = 0; xx < fd; ++xx)
            for (int yy = 0; yy < fd; ++yy) {
                // paper-slot curvature P(x,y,z,l) = R_low[l][z][x][y], with the
                // Weingarten completion of the Gauss equation
                double tr = 0.0;
                for (int z = 0; z < fd; ++z)
                    for (int m = 0; m < fd; ++m)
                        for (int l = 0; l < fd; ++l) {
                            const double P =
                                R[((l * fd + z) * fd + xx) * fd + yy] +
                                wd[xx * fd + z] * wd[yy * fd + l] -
                                wd[xx * fd + l] * wd[yy * fd + z];
                            tr += J.c[z * fd + m] * hi[m * fd + l] * P;
                        }
                double wterm = 0.0;
                for (int cc = 0; cc < fd; ++cc)
                    for (int a = 0; a < fd; ++a)
                        for (int b = 0; b < fd; ++b)
                            wterm += (wd[yy * fd + cc] * wd[b * fd + xx] -
                                      wd[xx * fd + cc] * wd[b * fd + yy]) *
                                     J.c[cc * fd + a] * hi[a * fd + b];
                tr_res = std::max(tr_res, std::abs(tr + wterm));
            }
    }
    rep.su_trace_res = tr_res;
    return rep;
}

namespace {

FiberTensor build_phi0() {
    FiberTensor phi = make_fiber_tensor(7, 0, 3);
    add_form_term(phi, {0, 1, 2}, 1.0);
    add_form_term(phi, {0, 3, 4}, 1.0);
    add_form_term(phi, {0, 5, 6}, 1.0);
    add_form_term(phi, {1, 3, 5}, 1.0);
    add_form_term(phi, {1, 4, 6}, -1.0);
    add_form_term(phi, {2, 3, 6}, -1.0);
    add_form_term(phi, {2, 4, 5}, -1.0);
    return phi;
}

// Lexicographic triples i<j<k packing Lambda^3 R^7 into R^35.
std::vector<std::array<int, 3>> lambda3_triples() {
    std::vector<std::array<int, 3>> t;
    for (int i = 0; i < 7; ++i)
        for (int j = i + 1; j < 7; ++j)
            for (int k = j + 1; k < 7; ++k) t.push_back({i, j, k});
    return t;
}

Eigen::VectorXd pack_3form(const FiberTensor& b,
                           const std::vector<std::array<int, 3>>& tri) {
    Eigen::VectorXd v(tri.size());
    for (std::size_t q = 0; q < tri.size(); ++q)
        v[q] = b.c[(tri[q][0] * 7 + tri[q][1]) * 7 + tri[q][2]];
    return v;
}

// Basis of traceless symmetric 7x7 matrices: 21 off-diagonal pads then 6
// diagonal differences.
std::vector<FiberTensor> sym0_basis() {
    std::vector<FiberTensor> basis;
    for (int a = 0; a < 7; ++a)
        for (int b = a + 1; b < 7; ++b) {
            FiberTensor S = make_fiber_tensor(7, 1, 1);
            S.c[a * 7 + b] = 1.0;
            S.c[b * 7 + a] = 1.0;
            basis.push_back(S);
        }
    for (int a = 0; a < 6; ++a) {
        FiberTensor S = make_fiber_tensor(7, 1, 1);
        S.c[a * 7 + a] = 1.0;
        S.c[(a + 1) * 7 + (a + 1)] = -1.0;
        basis.push_back(S);
    }
    return basis;
}

struct G2System {
    FiberTensor phi0;
    FiberTensor star_phi0;
    std::vector<std::array<int, 3>> tri;
    std::vector<FiberTensor> sbasis;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;

    G2System() : phi0(build_phi0()), star_phi0(euclidean_hodge(phi0)),
                 tri(lambda3_triples()), sbasis(sym0_basis()) {
        Eigen::MatrixXd M(35, 35);
        M.col(0) = pack_3form(phi0, tri);
        for (int q = 0; q < 27; ++q)
            M.col(1 + q) = pack_3form(endo_action(sbasis[q], phi0), tri);
        for (int a = 0; a < 7; ++a) {
            double e[7] = {};
            e[a] = 1.0;
            M.col(28 + a) = pack_3form(interior_product(e, star_phi0), tri);
        }
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        const double cond = svd.singularValues()(0) /
                            svd.singularValues()(svd.singularValues().size() - 1);
        if (!(cond < 1e6))
            throw std::logic_error(
                "g2_decompose: basis-image system is ill conditioned");
        lu = Eigen::PartialPivLU<Eigen::MatrixXd>(M);
    }
};

const G2System& g2_system() {
    static const G2System sys;
    return sys;
}

}  // namespace

const FiberTensor& g2_phi0() { return g2_system().phi0; }

const FiberTensor& g2_star_phi0() { return g2_system().star_phi0; }

G2Coordinates g2_decompose(const FiberTensor& beta) {
    if (beta.dim != 7 || beta.rank_con != 0 || beta.rank_cov != 3)
        throw std::invalid_argument("g2_decompose: expected a 3-form on R^7");
    const G2System& sys = g2_system();
    const Eigen::VectorXd coef = sys.lu.solve(pack_3form(beta, sys.tri));
    G2Coordinates out;
    out.r = coef[0];
    for (int q = 0; q < 27; ++q)
        for (int c = 0; c < 49; ++c) out.S[c] += coef[1 + q] * sys.sbasis[q].c[c];
    for (int a = 0; a < 7; ++a) out.X[a] = coef[28 + a];
    return out;
}

FiberTensor g2_reconstruct(const G2Coordinates& co) {
    const G2System& sys = g2_system();
    FiberTensor S = make_fiber_tensor(7, 1, 1);
    std::copy(co.S.begin(), co.S.end(), S.c.begin());
    FiberTensor out = endo_action(S, sys.phi0);
    const FiberTensor xpart = interior_product(co.X.data(), sys.star_phi0);
    for (int c = 0; c < 343; ++c)
        out.c[c] += co.r * sys.phi0.c[c] + xpart.c[c];
    return out;
}

bool g2_flow_compatible(const FiberTensor& phidot, double tol) {
    const G2Coordinates co = g2_decompose(phidot);
    double m = 0.0;
    for (double v : co.X) m = std::max(m, std::abs(v));
    return m <= tol;
}

}  // namespace pnv
