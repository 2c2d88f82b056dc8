#include "jpdsr/frames.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint32_t f32_bits(float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, sizeof u);
  return u;
}

float bits_f32(std::uint32_t u) {
  float f;
  std::memcpy(&f, &u, sizeof f);
  return f;
}

std::size_t row_bytes_u1(int width) { return (static_cast<std::size_t>(width) + 7) / 8; }

}  // namespace

FrameStack::FrameStack(Dims dims, PixelType type) : dims_(dims), type_(type) {
  require(dims.width > 0 && dims.height > 0, ErrorKind::Shape, "frame dimensions must be positive");
  require(type == PixelType::U16 || type == PixelType::F32 || type == PixelType::U1, ErrorKind::Format,
          "unknown pixel type");
}

std::size_t FrameStack::frame_bytes() const {
  switch (type_) {
    case PixelType::U16: return dims_.area() * 2;
    case PixelType::F32: return dims_.area() * 4;
    case PixelType::U1: return row_bytes_u1(dims_.width) * static_cast<std::size_t>(dims_.height);
  }
  return 0;
}

void FrameStack::reserve(std::size_t frames) { bytes_.reserve(frames * frame_bytes()); }

void FrameStack::push_back(std::span<const double> frame) {
  require(frame.size() == dims_.area(), ErrorKind::Shape, "frame size does not match stack dimensions");
  const std::size_t offset = bytes_.size();
  bytes_.resize(offset + frame_bytes(), 0);
  std::uint8_t* out = bytes_.data() + offset;
  switch (type_) {
    case PixelType::U16:
      for (std::size_t i = 0; i < frame.size(); ++i) {
        const double v = frame[i];
        if (!(v >= 0.0 && v <= 65535.0 && v == std::floor(v))) {
          bytes_.resize(offset);
          fail(ErrorKind::Format, "u16 frame value out of range or not an integer");
        }
        put_u16(out + 2 * i, static_cast<std::uint16_t>(v));
      }
      break;
    case PixelType::F32:
      for (std::size_t i = 0; i < frame.size(); ++i) put_u32(out + 4 * i, f32_bits(static_cast<float>(frame[i])));
      break;
    case PixelType::U1: {
      const std::size_t stride = row_bytes_u1(dims_.width);
      for (int y = 0; y < dims_.height; ++y) {
        for (int x = 0; x < dims_.width; ++x) {
          const double v = frame[dims_.index({x, y})];
          if (v != 0.0 && v != 1.0) {
            bytes_.resize(offset);
            fail(ErrorKind::Format, "binary frame contains a value other than 0 or 1");
          }
          if (v == 1.0) out[y * stride + x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
        }
      }
      break;
    }
  }
  ++count_;
}

void FrameStack::read(std::size_t index, std::span<double> out) const {
  require(index < count_, ErrorKind::Shape, "frame index out of range");
  require(out.size() == dims_.area(), ErrorKind::Shape, "output buffer size does not match frame");
  const std::uint8_t* in = bytes_.data() + index * frame_bytes();
  switch (type_) {
    case PixelType::U16:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = get_u16(in + 2 * i);
      break;
    case PixelType::F32:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = bits_f32(get_u32(in + 4 * i));
      break;
    case PixelType::U1: {
      const std::size_t stride = row_bytes_u1(dims_.width);
      for (int y = 0; y < dims_.height; ++y)
        for (int x = 0; x < dims_.width; ++x)
          out[dims_.index({x, y})] = (in[y * stride + x / 8] >> (7 - x % 8)) & 1u;
      break;
    }
  }
}

FrameStack FrameStack::from_raw(Dims dims, PixelType type, std::size_t count, std::vector<std::uint8_t> bytes) {
  FrameStack stack(dims, type);
  require(bytes.size() == count * stack.frame_bytes(), ErrorKind::Format, "frame data size does not match header");
  stack.bytes_ = std::move(bytes);
  stack.count_ = count;
  return stack;
}

FrameStack materialize(const FrameSource& source, PixelType type) {
  FrameStack stack(source.dims(), type);
  stack.reserve(source.count());
  std::vector<double> buffer(source.dims().area());
  for (std::size_t i = 0; i < source.count(); ++i) {
    source.read(i, buffer);
    stack.push_back(buffer);
  }
  return stack;
}

void write_frame_stack(const FrameStack& stack, const std::filesystem::path& path) {
  std::array<std::uint8_t, kFrameHeaderBytes> header{};
  std::memcpy(header.data(), "BPSR", 4);
  put_u16(header.data() + 4, kFrameFormatVersion);
  put_u16(header.data() + 6, static_cast<std::uint16_t>(stack.type()));
  put_u32(header.data() + 8, static_cast<std::uint32_t>(stack.dims().width));
  put_u32(header.data() + 12, static_cast<std::uint32_t>(stack.dims().height));
  put_u32(header.data() + 16, static_cast<std::uint32_t>(stack.count()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  out.write(reinterpret_cast<const char*>(stack.raw().data()), static_cast<std::streamsize>(stack.raw().size()));
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

FrameStack read_frame_stack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open frame file: " + path.string());
  std::array<std::uint8_t, kFrameHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  require(in.gcount() == static_cast<std::streamsize>(header.size()), ErrorKind::Format,
          "truncated frame header: " + path.string());
  require(std::memcmp(header.data(), "BPSR", 4) == 0, ErrorKind::Format, "bad frame file magic: " + path.string());
  require(get_u16(header.data() + 4) == kFrameFormatVersion, ErrorKind::Format, "unsupported frame file version");
  const auto type = static_cast<PixelType>(get_u16(header.data() + 6));
  require(get_u16(header.data() + 6) <= 2, ErrorKind::Format, "unknown dtype code");
  const Dims dims{static_cast<int>(get_u32(header.data() + 8)), static_cast<int>(get_u32(header.data() + 12))};
  const std::size_t count = get_u32(header.data() + 16);
  require(dims.width > 0 && dims.height > 0, ErrorKind::Format, "frame file has empty dimensions");

  FrameStack probe(dims, type);
  std::vector<std::uint8_t> bytes(count * probe.frame_bytes());
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(in.gcount() == static_cast<std::streamsize>(bytes.size()), ErrorKind::Format,
          "truncated frame data: " + path.string());
  return FrameStack::from_raw(dims, type, count, std::move(bytes));
}

Image mean_frame(const FrameSource& source, std::size_t frames) {
  const std::size_t n = frames == 0 ? source.count() : std::min(frames, source.count());
  require(n > 0, ErrorKind::InsufficientData, "no frames to average");
  Image mean(source.dims());
  std::vector<double> buffer(source.dims().area());
  for (std::size_t l = 0; l < n; ++l) {
    source.read(l, buffer);
    for (std::size_t i = 0; i < buffer.size(); ++i) mean.values()[i] += buffer[i];
  }
  for (double& v : mean.values()) v /= static_cast<double>(n);
  return mean;
}

}  // namespace jpdsr
