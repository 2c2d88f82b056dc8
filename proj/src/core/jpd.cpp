#include "jpdsr/jpd.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "jpdsr/error.hpp"

namespace jpdsr {

Jpd::Jpd(Geometry geometry, Dims dims, int band_radius, std::optional<Pixel> center)
    : geometry_(geometry), dims_(dims), band_(band_radius) {
  require(dims.width > 0 && dims.height > 0, ErrorKind::Shape, "JPD dimensions must be positive");
  require(band_radius >= 0, ErrorKind::Config, "band radius must be non-negative");
  if (geometry == Geometry::FarField) {
    require(center.has_value(), ErrorKind::Config, "far-field JPD requires a centre");
    center_ = *center;
  }
  planes_.resize(static_cast<std::size_t>(plane_count()));
  for (int p = 0; p < plane_count(); ++p) {
    Plane& plane = planes_[p];
    const Pixel offset = plane_offset(p);
    plane.values.assign(dims.area(), 0.0);
    plane.states.resize(dims.area());
    for (int y = 0; y < dims.height; ++y)
      for (int x = 0; x < dims.width; ++x)
        plane.states[dims.index({x, y})] =
            dims.contains(partner(offset, {x, y})) ? EntryState::Valid : EntryState::OutOfSensor;
  }
}

bool Jpd::in_band(Pixel offset) const {
  return std::abs(offset.x) <= band_ && std::abs(offset.y) <= band_;
}

int Jpd::plane_index(Pixel offset) const {
  require(in_band(offset), ErrorKind::Shape, "plane offset outside the band");
  return (offset.y + band_) * side() + (offset.x + band_);
}

Pixel Jpd::plane_offset(int index) const { return {index % side() - band_, index / side() - band_}; }

std::optional<JpdLocation> Jpd::locate(Pixel r1, Pixel r2) const {
  if (!dims_.contains(r1) || !dims_.contains(r2)) return std::nullopt;
  const Pixel offset = geometry_ == Geometry::NearField ? r2 - r1 : r1 + r2 - center_;
  if (!in_band(offset)) return std::nullopt;
  return JpdLocation{offset, r1};
}

std::optional<double> Jpd::at(Pixel r1, Pixel r2) const {
  const auto loc = locate(r1, r2);
  if (!loc) return std::nullopt;
  return value(loc->offset, loc->pixel);
}

void Jpd::remove_plane(Pixel offset) {
  Plane& plane = planes_[plane_index(offset)];
  plane.present = false;
  std::fill(plane.values.begin(), plane.values.end(), 0.0);
}

std::vector<Pixel> Jpd::present_offsets() const {
  std::vector<Pixel> out;
  for (int p = 0; p < plane_count(); ++p)
    if (planes_[p].present) out.push_back(plane_offset(p));
  return out;
}

bool Jpd::has_pending() const {
  for (const Plane& plane : planes_) {
    if (!plane.present) continue;
    for (EntryState s : plane.states)
      if (s == EntryState::Pending) return true;
  }
  return false;
}

std::size_t Jpd::valid_count(Pixel offset) const {
  std::size_t n = 0;
  for (EntryState s : states(offset)) n += s == EntryState::Valid;
  return n;
}

double Jpd::plane_mass(Pixel offset) const {
  const Plane& plane = planes_[plane_index(offset)];
  if (!plane.present) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < plane.values.size(); ++i)
    if (plane.states[i] == EntryState::Valid) sum += plane.values[i];
  return sum;
}

double Jpd::plane_mean(Pixel offset) const {
  const std::size_t n = valid_count(offset);
  return n == 0 ? 0.0 : plane_mass(offset) / static_cast<double>(n);
}

double Jpd::total_mass() const {
  double sum = 0.0;
  for (int p = 0; p < plane_count(); ++p) sum += plane_mass(plane_offset(p));
  return sum;
}

namespace {

constexpr std::size_t kSnapshotHeader = 32;
constexpr std::uint16_t kSnapshotVersion = 1;

template <typename T>
void put(std::vector<std::uint8_t>& buf, T v) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  const U u = std::bit_cast<U>(v);
  for (std::size_t i = 0; i < sizeof(U); ++i) buf.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

template <typename T>
T get(const std::uint8_t*& p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) u |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  p += sizeof(U);
  return std::bit_cast<T>(u);
}

}  // namespace

void write_jpd_snapshot(const Jpd& jpd, const std::filesystem::path& path) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), {'B', 'P', 'S', 'J'});
  put<std::uint16_t>(buf, kSnapshotVersion);
  put<std::uint16_t>(buf, jpd.geometry() == Geometry::NearField ? 0 : 1);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(jpd.dims().width));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(jpd.dims().height));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(jpd.band_radius()));
  put<std::int32_t>(buf, jpd.center().x);
  put<std::int32_t>(buf, jpd.center().y);
  buf.resize(kSnapshotHeader, 0);
  for (int p = 0; p < jpd.plane_count(); ++p) {
    const Pixel o = jpd.plane_offset(p);
    put<std::int32_t>(buf, o.x);
    put<std::int32_t>(buf, o.y);
    put<std::uint32_t>(buf, jpd.present(o) ? 1u : 0u);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(jpd.valid_count(o)));
  }
  for (int p = 0; p < jpd.plane_count(); ++p) {
    const Pixel o = jpd.plane_offset(p);
    for (double v : jpd.plane(o)) put<double>(buf, v);
    for (EntryState s : jpd.states(o)) buf.push_back(static_cast<std::uint8_t>(s));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

Jpd read_jpd_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open JPD snapshot: " + path.string());
  const std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(buf.size() >= kSnapshotHeader && std::memcmp(buf.data(), "BPSJ", 4) == 0, ErrorKind::Format,
          "not a JPD snapshot: " + path.string());
  const std::uint8_t* p = buf.data() + 4;
  require(get<std::uint16_t>(p) == kSnapshotVersion, ErrorKind::Format, "unsupported JPD snapshot version");
  const Geometry geometry = get<std::uint16_t>(p) == 0 ? Geometry::NearField : Geometry::FarField;
  const int width = static_cast<int>(get<std::uint32_t>(p));
  const int height = static_cast<int>(get<std::uint32_t>(p));
  const int band = static_cast<int>(get<std::uint32_t>(p));
  const Pixel center{get<std::int32_t>(p), get<std::int32_t>(p)};
  Jpd jpd(geometry, {width, height}, band, center);

  const std::size_t planes = static_cast<std::size_t>(jpd.plane_count());
  const std::size_t area = jpd.dims().area();
  require(buf.size() == kSnapshotHeader + planes * 16 + planes * area * 9, ErrorKind::Format,
          "JPD snapshot size does not match header");
  p = buf.data() + kSnapshotHeader;
  std::vector<bool> present(planes);
  for (std::size_t i = 0; i < planes; ++i) {
    const Pixel o{get<std::int32_t>(p), get<std::int32_t>(p)};
    require(o == jpd.plane_offset(static_cast<int>(i)), ErrorKind::Format, "JPD snapshot plane table out of order");
    present[i] = get<std::uint32_t>(p) != 0;
    get<std::uint32_t>(p);
  }
  for (std::size_t i = 0; i < planes; ++i) {
    const Pixel o = jpd.plane_offset(static_cast<int>(i));
    auto values = jpd.plane(o);
    for (double& v : values) v = get<double>(p);
    auto states = jpd.states(o);
    for (EntryState& s : states) {
      require(*p <= 3, ErrorKind::Format, "bad entry state in JPD snapshot");
      s = static_cast<EntryState>(*p++);
    }
    if (!present[i]) jpd.remove_plane(o);
  }
  return jpd;
}

}  // namespace jpdsr
