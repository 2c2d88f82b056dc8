#include <gtest/gtest.h>

#include <array>
#include <fstream>
#include <iterator>

#include "jpdsr/error.hpp"
#include "jpdsr/frames.hpp"
#include "support.hpp"

using namespace jpdsr;

namespace {

std::vector<std::uint8_t> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::State;
}

}  // namespace

TEST(FrameStack, U16RoundTripThroughFile) {
  const auto dir = test::scratch_dir("frames_u16");
  FrameStack stack({3, 2}, PixelType::U16);
  stack.push_back(std::vector<double>{0, 1, 2, 3, 4, 65535});
  stack.push_back(std::vector<double>{7, 0, 0, 0, 0, 9});
  write_frame_stack(stack, dir / "a.bpsr");

  const FrameStack back = read_frame_stack(dir / "a.bpsr");
  EXPECT_EQ(back.dims(), (Dims{3, 2}));
  ASSERT_EQ(back.count(), 2u);
  std::vector<double> f(6);
  back.read(0, f);
  EXPECT_EQ(f, (std::vector<double>{0, 1, 2, 3, 4, 65535}));
  back.read(1, f);
  EXPECT_EQ(f, (std::vector<double>{7, 0, 0, 0, 0, 9}));
}

TEST(FrameStack, HeaderLayout) {
  const auto dir = test::scratch_dir("frames_header");
  FrameStack stack({5, 4}, PixelType::U16);
  for (int i = 0; i < 3; ++i) stack.push_back(std::vector<double>(20, i));
  write_frame_stack(stack, dir / "h.bpsr");
  const auto bytes = file_bytes(dir / "h.bpsr");
  ASSERT_EQ(bytes.size(), 32u + 3 * 20 * 2);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "BPSR");
  EXPECT_EQ(bytes[4] | bytes[5] << 8, 1);   // version
  EXPECT_EQ(bytes[6] | bytes[7] << 8, 0);   // u16
  EXPECT_EQ(bytes[8], 5);
  EXPECT_EQ(bytes[12], 4);
  EXPECT_EQ(bytes[16], 3);
  for (int i = 20; i < 32; ++i) EXPECT_EQ(bytes[i], 0) << i;
  // Second frame, first pixel, little-endian.
  EXPECT_EQ(bytes[32 + 40], 1);
  EXPECT_EQ(bytes[32 + 41], 0);
}

TEST(FrameStack, BinaryFramesPackMsbFirstWithRowPadding) {
  FrameStack stack({10, 2}, PixelType::U1);
  std::vector<double> f(20, 0.0);
  f[0] = 1;      // row 0, bit 7 of byte 0
  f[9] = 1;      // row 0, bit 6 of byte 1
  f[10 + 7] = 1; // row 1, bit 0 of byte 2
  stack.push_back(f);
  EXPECT_EQ(stack.frame_bytes(), 4u);
  const auto raw = stack.raw();
  EXPECT_EQ(raw[0], 0x80);
  EXPECT_EQ(raw[1], 0x40);
  EXPECT_EQ(raw[2], 0x01);
  EXPECT_EQ(raw[3], 0x00);
  std::vector<double> back(20);
  stack.read(0, back);
  EXPECT_EQ(back, f);

  const auto dir = test::scratch_dir("frames_u1");
  write_frame_stack(stack, dir / "b.bpsr");
  const FrameStack read = read_frame_stack(dir / "b.bpsr");
  EXPECT_EQ(read.type(), PixelType::U1);
  read.read(0, back);
  EXPECT_EQ(back, f);
}

TEST(FrameStack, F32KeepsFractions) {
  FrameStack stack({2, 1}, PixelType::F32);
  stack.push_back(std::vector<double>{0.5, -3.25});
  std::vector<double> f(2);
  stack.read(0, f);
  EXPECT_EQ(f, (std::vector<double>{0.5, -3.25}));
}

TEST(FrameStack, RejectsValuesOutsideTheEncoding) {
  FrameStack u16({1, 1}, PixelType::U16);
  EXPECT_EQ(kind_of([&] { u16.push_back(std::vector<double>{-1}); }), ErrorKind::Format);
  EXPECT_EQ(kind_of([&] { u16.push_back(std::vector<double>{1.5}); }), ErrorKind::Format);
  EXPECT_EQ(kind_of([&] { u16.push_back(std::vector<double>{70000}); }), ErrorKind::Format);
  FrameStack u1({1, 1}, PixelType::U1);
  EXPECT_EQ(kind_of([&] { u1.push_back(std::vector<double>{2}); }), ErrorKind::Format);
  EXPECT_EQ(kind_of([&] { u1.push_back(std::vector<double>{1, 0}); }), ErrorKind::Shape);
}

TEST(FrameStack, CorruptFilesAreFormatErrors) {
  const auto dir = test::scratch_dir("frames_corrupt");
  FrameStack stack({4, 4}, PixelType::U16);
  stack.push_back(std::vector<double>(16, 1.0));
  write_frame_stack(stack, dir / "ok.bpsr");
  auto bytes = file_bytes(dir / "ok.bpsr");

  auto write = [&](const std::string& name, const std::vector<std::uint8_t>& b) {
    std::ofstream out(dir / name, std::ios::binary);
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    return dir / name;
  };
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { read_frame_stack(write("magic.bpsr", bad_magic)); }), ErrorKind::Format);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 3);
  EXPECT_EQ(kind_of([&] { read_frame_stack(write("short.bpsr", truncated)); }), ErrorKind::Format);
  auto header_only = bytes;
  header_only.resize(10);
  EXPECT_EQ(kind_of([&] { read_frame_stack(write("header.bpsr", header_only)); }), ErrorKind::Format);
  auto version = bytes;
  version[4] = 9;
  EXPECT_EQ(kind_of([&] { read_frame_stack(write("version.bpsr", version)); }), ErrorKind::Format);
  EXPECT_EQ(kind_of([&] { read_frame_stack(dir / "missing.bpsr"); }), ErrorKind::Io);
}

TEST(FrameStack, MaterializeAndMeanFrame) {
  const auto src = test::random_frames({4, 3}, 6, 11);
  const FrameStack stack = materialize(src, PixelType::U16);
  ASSERT_EQ(stack.count(), 6u);
  std::vector<double> a(12);
  for (std::size_t l = 0; l < 6; ++l) {
    stack.read(l, a);
    EXPECT_EQ(a, src.frame(l));
  }
  const Image mean = mean_frame(src);
  double expect = 0.0;
  for (std::size_t l = 0; l < 6; ++l) expect += src.frame(l)[5];
  EXPECT_DOUBLE_EQ(mean.values()[5], expect / 6);
}
