#include "zyg/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "zyg/errors.hpp"
#include "zyg/geometry.hpp"

namespace zyg {
namespace {

constexpr char kMagic[4] = {'Z', 'Y', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

// The build targets little-endian hosts; the format is defined little-endian.
template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_field(const ScalarField3& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw zyg_error("write_field: cannot open " + path);
  os.write(kMagic, 4);
  put(os, kVersion);
  for (int a = 0; a < 3; ++a) put(os, std::int64_t(f.grid().count(a)));
  for (int a = 0; a < 3; ++a) put(os, f.grid().extent(a));
  for (int a = 0; a < 3; ++a) put(os, f.grid().origin()[a]);
  os.write(reinterpret_cast<const char*>(f.values().data()),
           std::streamsize(f.values().size() * sizeof(double)));
  if (!os) throw zyg_error("write_field: short write to " + path);
}

ScalarField3 read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw zyg_error("read_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw zyg_error("read_field: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw zyg_error("read_field: bad version");
  index3 n;
  point3 L, o;
  for (int a = 0; a < 3; ++a) n[a] = get<std::int64_t>(is);
  for (int a = 0; a < 3; ++a) L[a] = get<double>(is);
  for (int a = 0; a < 3; ++a) o[a] = get<double>(is);
  Grid3 grid(L, n, o);
  std::vector<double> v(grid.size());
  is.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
  if (!is) throw zyg_error("read_field: truncated file " + path);
  return ScalarField3(grid, std::move(v));
}

void write_field_csv(const ScalarField3& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw zyg_error("write_field_csv: cannot open " + path);
  os << "i1,i2,i3,x1,x2,x3,value\n";
  os.precision(17);
  const auto n = f.grid().counts();
  for (std::int64_t i1 = 0; i1 < n[0]; ++i1)
    for (std::int64_t i2 = 0; i2 < n[1]; ++i2)
      for (std::int64_t i3 = 0; i3 < n[2]; ++i3) {
        auto x = f.grid().node({i1, i2, i3});
        os << i1 << ',' << i2 << ',' << i3 << ',' << x[0] << ',' << x[1] << ',' << x[2]
           << ',' << f.at({i1, i2, i3}) << '\n';
      }
}

void write_lattice_csv(const ZygLattice& lat, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw zyg_error("write_lattice_csv: cannot open " + path);
  os << "j,k,N,corner1,corner2,corner3,lI,lJ,lS\n";
  os.precision(17);
  for (const auto& c : lat.cells)
    os << lat.j << ',' << lat.k << ',' << lat.refinement << ',' << c.corner[0] << ','
       << c.corner[1] << ',' << c.corner[2] << ',' << c.sides[0] << ',' << c.sides[1] << ','
       << c.sides[2] << '\n';
}

}  // namespace zyg
