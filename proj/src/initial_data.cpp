#include "pnv/initial_data.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "pnv/field_io.hpp"

namespace pnv {

BackgroundMetric background_metric(const Field& lambda, const MetricField& g) {
    const Grid& grid = g.g.grid;
    const int d = grid.dim;
    const int sd = d + 1;
    if (lambda.rank() != 0 || lambda.grid.npts() != grid.npts())
        throw std::invalid_argument("background_metric: lambda must be a grid scalar");
    if (g.g.spacetime || g.lorentzian)
        throw std::invalid_argument("background_metric: g must be Riemannian slice data");

    Field h = make_field(grid, 2, 0, true, true);
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        const double lam = lambda.at(p, 0);
        if (!(lam > 0.0))
            throw std::domain_error("background_metric: lambda must be positive");
        h.at(p, sym_index(0, 0, sd)) = -lam * lam;
        for (int i = 0; i < d; ++i) {
            h.at(p, sym_index(0, i + 1, sd)) = 0.0;
            for (int j = i; j < d; ++j)
                h.at(p, sym_index(i + 1, j + 1, sd)) = g.g.at(p, sym_index(i, j, d));
        }
    }
    BackgroundMetric bg;
    bg.h = make_metric(std::move(h), true);
    bg.lambda = lambda;
    return bg;
}

Field christoffel_static(const MetricField& m) {
    const Grid& grid = m.g.grid;
    const int sd = m.g.adim();
    if (!m.g.spacetime)
        throw std::invalid_argument("christoffel_static: expected a spacetime metric");

    std::vector<Field> dg(sd);
    for (int i = 0; i < grid.dim; ++i) dg[i + 1] = partial_derivative(m.g, i);

    Field gamma = make_field(grid, 2, 1, true);
    const std::int64_t np = grid.npts();
    double ginv[16];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(m.ginv, p, ginv);
        for (int a = 0; a < sd; ++a)
            for (int b = 0; b < sd; ++b)
                for (int c = b; c < sd; ++c) {
                    double s = 0.0;
                    for (int e = 0; e < sd; ++e) {
                        double t = 0.0;
                        if (b > 0) t += dg[b].at(p, sym_index(e, c, sd));
                        if (c > 0) t += dg[c].at(p, sym_index(e, b, sd));
                        if (e > 0) t -= dg[e].at(p, sym_index(b, c, sd));
                        s += ginv[a * sd + e] * t;
                    }
                    s *= 0.5;
                    gamma.at(p, (a * sd + b) * sd + c) = s;
                    gamma.at(p, (a * sd + c) * sd + b) = s;
                }
    }
    return gamma;
}

Field initial_Z(const MetricField& g, const Field& U, const Field& W,
                const CurvatureBundle& curv) {
    const Grid& grid = g.g.grid;
    const int d = grid.dim;
    const std::int64_t np = grid.npts();

    // trW as a grid scalar so its differential comes from the same stencils
    // as every other derivative.
    Field trW = make_scalar(grid);
    double ginv[9], Wd[9];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(g.ginv, p, ginv);
        unpack_sym(W, p, Wd);
        double tr = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) tr += ginv[i * d + j] * Wd[i * d + j];
        trW.at(p, 0) = tr;
    }
    std::array<Field, 3> dtrW;
    for (int i = 0; i < d; ++i) dtrW[i] = partial_derivative(trW, i);
    const Field deltaW = divergence(W, g);

    Field Z = make_field(grid, 2, 0, false, true);
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(g.ginv, p, ginv);
        unpack_sym(W, p, Wd);

        double norm2 = 0.0, Nup[3], Nlow[3];
        for (int a = 0; a < d; ++a) {
            double low = 0.0;
            for (int b = 0; b < d; ++b)
                low += g.g.at(p, sym_index(a, b, d)) * U.at(p, b);
            norm2 += low * U.at(p, a);
            Nlow[a] = low;
        }
        if (!(norm2 > 1e-16))
            throw std::domain_error("initial_Z: U degenerate at a point");
        const double uu = std::sqrt(norm2);
        for (int a = 0; a < d; ++a) {
            Nup[a] = U.at(p, a) / uu;
            Nlow[a] /= uu;
        }

        double rho[3];
        for (int i = 0; i < d; ++i)
            rho[i] = dtrW[i].at(p, 0) + deltaW.at(p, i);

        const double tr = trW.at(p, 0);
        const double* Rs = curv.riemann.pt(p);
        double Q[9];
        double WN[3] = {}, WNN = 0.0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) WN[a] += Wd[a * d + b] * Nup[b];
        for (int a = 0; a < d; ++a) WNN += Nup[a] * WN[a];
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double w2 = 0.0;
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e)
                        w2 += Wd[a * d + c] * ginv[c * d + e] * Wd[e * d + b];
                double rxnny = 0.0;
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e)
                        rxnny += Nup[c] * Nup[e] *
                                 Rs[((b * d + c) * d + a) * d + e];
                Q[a * d + b] = curv.ricci.at(p, sym_index(a, b, d)) - rxnny -
                               w2 + tr * Wd[a * d + b] + WN[a] * WN[b] -
                               WNN * Wd[a * d + b];
            }
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                const double s = 0.5 * (Q[a * d + b] + Q[b * d + a]);
                Q[a * d + b] = Q[b * d + a] = s;
            }

        double rhoN = 0.0;
        for (int a = 0; a < d; ++a) rhoN += rho[a] * Nup[a];
        double Prho[3];
        for (int a = 0; a < d; ++a) Prho[a] = rho[a] - rhoN * Nlow[a];

        // P^a_b = delta - N^a N_b; the perp block is P^T Q P.
        double P[9];
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                P[a * d + b] = (a == b ? 1.0 : 0.0) - Nup[a] * Nlow[b];
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) {
                double perp = 0.0;
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e)
                        perp += P[c * d + a] * Q[c * d + e] * P[e * d + b];
                Z.at(p, sym_index(a, b, d)) = rhoN * Nlow[a] * Nlow[b] +
                                              Nlow[a] * Prho[b] +
                                              Prho[a] * Nlow[b] + perp;
            }
    }
    return Z;
}

CauchyState assemble_state(const MetricField& g, const Field& U, const Field& W,
                           const Field& lambda, const Field* lambda_dot) {
    const Grid& grid = g.g.grid;
    const int d = grid.dim;
    const int sd = d + 1;
    const std::int64_t np = grid.npts();

    BackgroundMetric bg = background_metric(lambda, g);

    CauchyState st;
    st.t = 0.0;
    st.k = make_field(grid, 2, 0, true, true);
    st.alpha = make_bundle(grid, 1 << sd);
    double ginv[9], Wd[9];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(g.ginv, p, ginv);
        unpack_sym(W, p, Wd);
        const double lam = lambda.at(p, 0);
        const double lamdot = lambda_dot ? lambda_dot->at(p, 0) : 0.0;

        double norm2 = 0.0, Ulow[3];
        for (int a = 0; a < d; ++a) {
            double low = 0.0;
            for (int b = 0; b < d; ++b)
                low += g.g.at(p, sym_index(a, b, d)) * U.at(p, b);
            Ulow[a] = low;
            norm2 += low * U.at(p, a);
        }
        if (!(norm2 > 0.0))
            throw std::domain_error("assemble_state: U vanishes at a point");
        const double uu = std::sqrt(norm2);

        double tr = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) tr += ginv[i * d + j] * Wd[i * d + j];

        st.k.at(p, sym_index(0, 0, sd)) =
            -2.0 * lam * lam * lamdot + 2.0 * lam * lam * lam * tr;
        for (int i = 0; i < d; ++i) {
            st.k.at(p, sym_index(0, i + 1, sd)) = 0.0;
            for (int j = i; j < d; ++j)
                st.k.at(p, sym_index(i + 1, j + 1, sd)) =
                    -2.0 * lam * Wd[i * d + j];
        }

        st.alpha.at(p, 1 << 0) = -lam * uu;
        for (int i = 0; i < d; ++i) st.alpha.at(p, 1 << (i + 1)) = -Ulow[i];
    }

    for (int i = 0; i < d; ++i) st.dgbar[i] = partial_derivative(bg.h.g, i);
    st.Z = initial_Z(g, U, W, curvature(g));
    st.gbar = std::move(bg.h);
    return st;
}

namespace {
constexpr char kStateMagic[8] = {'P', 'N', 'V', 'S', 'T', 'T', '0', '1'};
}

void write_state(const CauchyState& st, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_state: cannot open " + path);
    nlohmann::json manifest;
    manifest["t"] = st.t;
    manifest["dim"] = st.gbar.g.grid.dim;
    manifest["fields"] = {"gbar", "dgbar", "k", "alpha", "Z"};
    const std::string mtext = manifest.dump();
    out.write(kStateMagic, sizeof(kStateMagic));
    const std::uint64_t mlen = mtext.size();
    out.write(reinterpret_cast<const char*>(&mlen), sizeof(mlen));
    out.write(mtext.data(), static_cast<std::streamsize>(mlen));
    write_field(st.gbar.g, out);
    for (int i = 0; i < st.gbar.g.grid.dim; ++i) write_field(st.dgbar[i], out);
    write_field(st.k, out);
    write_field(st.alpha, out);
    write_field(st.Z, out);
    if (!out) throw std::runtime_error("write_state: short write to " + path);
}

CauchyState read_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_state: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kStateMagic, sizeof(kStateMagic)) != 0)
        throw std::runtime_error("read_state: bad magic in " + path);
    std::uint64_t mlen = 0;
    in.read(reinterpret_cast<char*>(&mlen), sizeof(mlen));
    if (!in || mlen > (1u << 20))
        throw std::runtime_error("read_state: implausible manifest in " + path);
    std::string mtext(mlen, '\0');
    in.read(mtext.data(), static_cast<std::streamsize>(mlen));
    if (!in) throw std::runtime_error("read_state: truncated manifest in " + path);
    const auto manifest = nlohmann::json::parse(mtext);

    CauchyState st;
    st.t = manifest.at("t").get<double>();
    const int dim = manifest.at("dim").get<int>();
    st.gbar = make_metric(read_field(in), true);
    for (int i = 0; i < dim; ++i) st.dgbar[i] = read_field(in);
    st.k = read_field(in);
    st.alpha = read_field(in);
    st.Z = read_field(in);
    return st;
}

}  // namespace pnv
