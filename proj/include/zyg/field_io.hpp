#pragma once

#include <iosfwd>
#include <string>

#include "zyg/field.hpp"

namespace zyg {

// Flat binary layout: magic "ZYGF", u32 version, three i64 counts, three f64
// extents, three f64 origins, then n1*n2*n3 little-endian f64 samples in
// row-major order.
void write_field(const ScalarField3& f, const std::string& path);
ScalarField3 read_field(const std::string& path);

// CSV for small grids: header line, then one "i1,i2,i3,x1,x2,x3,value" row
// per node.
void write_field_csv(const ScalarField3& f, const std::string& path);

// Lattice dump: j,k,N,corner1,corner2,corner3,lI,lJ,lS.
void write_lattice_csv(const struct ZygLattice& lat, const std::string& path);

}  // namespace zyg
