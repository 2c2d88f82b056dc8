#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "jpdsr/image.hpp"

namespace jpdsr {

/// Pixel encoding of a frame stack; the numeric values are the on-disk dtype codes.
enum class PixelType : std::uint16_t {
  U16 = 0,  ///< photon counts or quantized analog output
  F32 = 1,  ///< analog values
  U1 = 2,   ///< binary detections, packed 8 pixels per byte
};

/// Random-access sequence of equally sized frames in acquisition order.
///
/// read() must be safe to call concurrently from several threads; the estimator
/// hands disjoint frame ranges to worker threads.
class FrameSource {
public:
  virtual ~FrameSource() = default;

  virtual Dims dims() const = 0;
  virtual std::size_t count() const = 0;
  virtual void read(std::size_t index, std::span<double> out) const = 0;
};

/// In-memory frame stack stored in its native pixel encoding.
class FrameStack final : public FrameSource {
public:
  FrameStack(Dims dims, PixelType type);

  /// Appends one frame. Values must fit the pixel type: integers in [0, 65535]
  /// for U16, exactly 0 or 1 for U1.
  void push_back(std::span<const double> frame);
  void reserve(std::size_t frames);

  PixelType type() const { return type_; }
  Dims dims() const override { return dims_; }
  std::size_t count() const override { return count_; }
  void read(std::size_t index, std::span<double> out) const override;

  /// Bytes of one frame in the on-disk layout (u1 rows padded to a byte boundary).
  std::size_t frame_bytes() const;
  std::span<const std::uint8_t> raw() const { return bytes_; }

  static FrameStack from_raw(Dims dims, PixelType type, std::size_t count, std::vector<std::uint8_t> bytes);

private:
  Dims dims_;
  PixelType type_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> bytes_;
};

inline constexpr std::size_t kFrameHeaderBytes = 32;
inline constexpr std::uint16_t kFrameFormatVersion = 1;

/// Copies any frame source into a stack of the given pixel type.
FrameStack materialize(const FrameSource& source, PixelType type);

void write_frame_stack(const FrameStack& stack, const std::filesystem::path& path);
FrameStack read_frame_stack(const std::filesystem::path& path);

/// Mean frame over the first `frames` frames (all frames when 0).
Image mean_frame(const FrameSource& source, std::size_t frames = 0);

}  // namespace jpdsr
