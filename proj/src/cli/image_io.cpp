#include "jpdsr/image_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

constexpr std::size_t kHeader = 32;
constexpr std::uint16_t kVersion = 1;

void put_le(std::vector<std::uint8_t>& buf, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open image: " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void dump(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

}  // namespace

void write_raw_image(const std::filesystem::path& path, const RawImage& raw) {
  const Image& im = raw.image;
  require(raw.mask.empty() || raw.mask.size() == im.dims().area(), ErrorKind::Shape, "mask size does not match image");
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), {'B', 'P', 'S', 'I'});
  put_le(buf, kVersion, 2);
  put_le(buf, static_cast<std::uint16_t>(raw.kind), 2);
  put_le(buf, static_cast<std::uint32_t>(im.width()), 4);
  put_le(buf, static_cast<std::uint32_t>(im.height()), 4);
  put_le(buf, static_cast<std::uint32_t>(raw.samples_per_pixel), 4);
  put_le(buf, raw.mask.empty() ? 0u : 1u, 4);
  buf.resize(kHeader, 0);
  for (double v : im.values()) put_le(buf, std::bit_cast<std::uint64_t>(v), 8);
  buf.insert(buf.end(), raw.mask.begin(), raw.mask.end());
  dump(path, buf);
}

RawImage read_raw_image(const std::filesystem::path& path) {
  const auto buf = slurp(path);
  require(buf.size() >= kHeader && std::memcmp(buf.data(), "BPSI", 4) == 0, ErrorKind::Format,
          "not an f64 image dump: " + path.string());
  require(get_le(buf.data() + 4, 2) == kVersion, ErrorKind::Format, "unsupported image dump version");
  RawImage raw;
  const auto kind = get_le(buf.data() + 6, 2);
  require(kind <= 3, ErrorKind::Format, "unknown image kind");
  raw.kind = static_cast<RawImageKind>(kind);
  const int w = static_cast<int>(get_le(buf.data() + 8, 4));
  const int h = static_cast<int>(get_le(buf.data() + 12, 4));
  raw.samples_per_pixel = static_cast<int>(get_le(buf.data() + 16, 4));
  const bool has_mask = get_le(buf.data() + 20, 4) != 0;
  require(w > 0 && h > 0 && raw.samples_per_pixel >= 1, ErrorKind::Format, "bad image dump header");
  const std::size_t n = static_cast<std::size_t>(w) * h;
  require(buf.size() == kHeader + 8 * n + (has_mask ? n : 0), ErrorKind::Format,
          "image dump size does not match header: " + path.string());
  raw.image = Image(w, h);
  auto values = raw.image.values();
  for (std::size_t i = 0; i < n; ++i) values[i] = std::bit_cast<double>(get_le(buf.data() + kHeader + 8 * i, 8));
  if (has_mask) raw.mask.assign(buf.begin() + static_cast<long>(kHeader + 8 * n), buf.end());
  return raw;
}

void write_pgm16(const std::filesystem::path& path, const Image& image, std::optional<std::pair<double, double>> range) {
  require(!image.empty(), ErrorKind::Shape, "cannot write an empty image");
  const auto [lo, hi] = range.value_or(std::pair{image.min(), image.max()});
  const double span = hi > lo ? hi - lo : 1.0;
  std::ostringstream header;
  header << "P5\n" << image.width() << ' ' << image.height() << "\n65535\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> buf(h.begin(), h.end());
  for (double v : image.values()) {
    const double scaled = std::isfinite(v) ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
    const auto q = static_cast<std::uint16_t>(std::lround(scaled * 65535.0));
    buf.push_back(static_cast<std::uint8_t>(q >> 8));
    buf.push_back(static_cast<std::uint8_t>(q & 0xFF));
  }
  dump(path, buf);
}

Image read_pgm(const std::filesystem::path& path) {
  const auto buf = slurp(path);
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < buf.size()) {
      if (buf[pos] == '#') {
        while (pos < buf.size() && buf[pos] != '\n') ++pos;
      } else if (std::isspace(buf[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string t;
    while (pos < buf.size() && !std::isspace(buf[pos])) t.push_back(static_cast<char>(buf[pos++]));
    return t;
  };
  require(token() == "P5", ErrorKind::Format, "not a binary PGM: " + path.string());
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    fail(ErrorKind::Format, "malformed PGM header: " + path.string());
  }
  require(w > 0 && h > 0 && maxval > 0 && maxval <= 65535, ErrorKind::Format, "bad PGM header: " + path.string());
  ++pos;  // single whitespace before the raster
  const int bytes = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  require(buf.size() >= pos + n * bytes, ErrorKind::Format, "truncated PGM raster: " + path.string());
  Image image(w, h);
  auto values = image.values();
  for (std::size_t i = 0; i < n; ++i)
    values[i] = bytes == 2 ? (buf[pos + 2 * i] << 8) | buf[pos + 2 * i + 1] : buf[pos + i];
  return image;
}

}  // namespace jpdsr
