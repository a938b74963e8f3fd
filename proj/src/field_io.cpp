#include "pnv/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace pnv {

static_assert(std::endian::native == std::endian::little,
              "field serialization assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'P', 'N', 'V', 'F', 'L', 'D', '0', '1'};
}

void write_field(const Field& f, std::ostream& out) {
    nlohmann::json header;
    header["dim"] = f.grid.dim;
    header["sizes"] = std::vector<int>(f.grid.n.begin(), f.grid.n.begin() + f.grid.dim);
    header["lengths"] =
        std::vector<double>(f.grid.length.begin(), f.grid.length.begin() + f.grid.dim);
    header["valence"] = {f.rank_cov, f.rank_con};
    header["spacetime"] = f.spacetime;
    header["symmetric"] = f.sym;
    header["ncomp"] = f.ncomp;
    const std::string htext = header.dump();

    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(htext.data(), static_cast<std::streamsize>(hlen));
    out.write(reinterpret_cast<const char*>(f.data.data()),
              static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_field: short write");
}

void write_field(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    write_field(f, out);
    if (!out) throw std::runtime_error("write_field: short write to " + path);
}

Field read_field(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("read_field: bad magic");
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!in || hlen > (1u << 20))
        throw std::runtime_error("read_field: implausible header length");
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw std::runtime_error("read_field: truncated header");
    const auto header = nlohmann::json::parse(htext);

    const int dim = header.at("dim").get<int>();
    std::array<int, 3> sizes{1, 1, 1};
    std::array<double, 3> lengths{0.0, 0.0, 0.0};
    const auto hs = header.at("sizes").get<std::vector<int>>();
    const auto hl = header.at("lengths").get<std::vector<double>>();
    for (int a = 0; a < dim; ++a) {
        sizes[a] = hs.at(a);
        lengths[a] = hl.at(a);
    }
    const Grid g = make_grid(dim, sizes, lengths);
    const auto valence = header.at("valence").get<std::vector<int>>();
    const int ncomp = header.at("ncomp").get<int>();
    Field f = (valence.at(0) == 0 && valence.at(1) == 0 && ncomp > 1)
                  ? make_bundle(g, ncomp)
                  : make_field(g, valence.at(0), valence.at(1),
                               header.at("spacetime").get<bool>(),
                               header.at("symmetric").get<bool>());
    if (f.ncomp != ncomp)
        throw std::runtime_error("read_field: inconsistent component count");
    in.read(reinterpret_cast<char*>(f.data.data()),
            static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_field: truncated data");
    return f;
}

Field read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    try {
        return read_field(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " in " + path);
    }
}

}  // namespace pnv
