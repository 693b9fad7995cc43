#include "mfg/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mfg {

namespace {
constexpr char kMagic[4] = {'M', 'F', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_csv(const Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out.precision(17);
  const TorusGrid& g = f.grid;
  if (f.kind == FieldKind::FaceVector) {
    out << "axis,index,x,y,value\n";
    for (int a = 0; a < g.dim; ++a)
      for (std::ptrdiff_t c = 0; c < g.cells(); ++c) {
        Point p = g.face_center(a, c);
        out << a << ',' << c << ',' << p[0] << ',' << p[1] << ',' << f.at_face(a, c) << '\n';
      }
  } else {
    out << "index,x,y,value\n";
    for (std::ptrdiff_t c = 0; c < f.size(); ++c) {
      Point p = g.cell_center(c);
      out << c << ',' << p[0] << ',' << p[1] << ',' << f[c] << '\n';
    }
  }
}

void write_dump(const Field& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_dump: cannot open " + path);
  out.write(kMagic, 4);
  const std::uint32_t ver = kVersion;
  const std::uint8_t kind = std::uint8_t(f.kind);
  const std::uint8_t dim = std::uint8_t(f.grid.dim);
  const std::uint32_t n = std::uint32_t(f.grid.n);
  out.write(reinterpret_cast<const char*>(&ver), 4);
  out.write(reinterpret_cast<const char*>(&kind), 1);
  out.write(reinterpret_cast<const char*>(&dim), 1);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
}

Field read_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_dump: cannot open " + path);
  char magic[4];
  std::uint32_t ver = 0, n = 0;
  std::uint8_t kind = 0, dim = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&ver), 4);
  in.read(reinterpret_cast<char*>(&kind), 1);
  in.read(reinterpret_cast<char*>(&dim), 1);
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_dump: bad header in " + path);
  if (ver != kVersion) throw std::runtime_error("read_dump: unsupported version");
  if (kind > 2) throw std::runtime_error("read_dump: bad field kind");
  const TorusGrid grid{int(dim), int(n)};
  Field f(FieldKind(kind), grid);
  in.read(reinterpret_cast<char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_dump: truncated payload in " + path);
  return f;
}

}  // namespace mfg
