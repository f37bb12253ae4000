#include "carleman/io/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "carleman/error.hpp"

namespace carleman::io {

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
  char b[8];
  std::memcpy(b, &v, 8);
  out.append(b, 8);
}

std::uint64_t get_u64(const std::string& in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw Error(ErrorKind::Io, "truncated field file");
  std::uint64_t v;
  std::memcpy(&v, in.data() + pos, 8);
  pos += 8;
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
  return v;
}

void put_f64(std::string& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }
double get_f64(const std::string& in, std::size_t& pos) { return std::bit_cast<double>(get_u64(in, pos)); }

std::filesystem::path sidecar_path(const std::filesystem::path& p) {
  auto s = p;
  s += ".json";
  return s;
}

}  // namespace

std::string encode_field(const lattice::LatticeField& u) {
  std::string out;
  out.reserve(16 + 16 * u.values().size());
  put_u64(out, static_cast<std::uint64_t>(u.window().dimension()));
  put_u64(out, static_cast<std::uint64_t>(u.window().half_width()));
  for (const auto& v : u.values()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  return out;
}

lattice::LatticeField decode_field(const std::string& bytes) {
  std::size_t pos = 0;
  const auto d = get_u64(bytes, pos);
  const auto M = get_u64(bytes, pos);
  if (d < 1 || d > lattice::kMaxDimension || M < 2 || M > (1u << 20))
    throw Error(ErrorKind::Io, "field header out of range");
  const lattice::LatticeWindow w(static_cast<int>(d), static_cast<int>(M));
  if (bytes.size() != 16 + 16 * w.site_count()) throw Error(ErrorKind::Io, "field size does not match header");
  std::vector<lattice::Complex> values(w.site_count());
  for (auto& v : values) {
    const double re = get_f64(bytes, pos);
    const double im = get_f64(bytes, pos);
    v = {re, im};
  }
  return lattice::LatticeField(w, std::move(values));
}

std::filesystem::path write_field(const std::filesystem::path& path, const lattice::LatticeField& u,
                                  const nlohmann::json& metadata) {
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
    const std::string bytes = encode_field(u);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  nlohmann::json side = {{"format", kFieldFormat},
                         {"byte_order", "little-endian"},
                         {"dimension", u.window().dimension()},
                         {"half_width", u.window().half_width()},
                         {"sites", u.window().site_count()},
                         {"value_type", "complex128 (re, im)"},
                         {"metadata", metadata}};
  const auto side_path = sidecar_path(path);
  std::ofstream s(side_path);
  if (!s) throw Error(ErrorKind::Io, "cannot write " + side_path.string());
  s << side.dump(2) << '\n';
  return side_path;
}

lattice::LatticeField read_field(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return decode_field(ss.str());
}

}  // namespace carleman::io
