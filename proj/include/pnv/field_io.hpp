#pragma once

#include <iosfwd>
#include <string>

#include "pnv/grid.hpp"

namespace pnv {

// Binary field format: 8-byte magic "PNVFLD01", a little-endian u64 header
// length, a JSON header (grid sizes and lengths, valence, spacetime and
// symmetry flags), then the samples as little-endian f64, point-major then
// component-major.
void write_field(const Field& f, const std::string& path);
Field read_field(const std::string& path);

// Stream forms for embedding fields inside larger records.
void write_field(const Field& f, std::ostream& out);
Field read_field(std::istream& in);

}  // namespace pnv
