#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "windex/core.hpp"

namespace windex {

namespace detail {

// Little-endian primitive writer/reader for the index file formats.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void magic(std::string_view m) { out_.write(m.data(), static_cast<std::streamsize>(m.size())); }
  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) {
    u64(b.size());
    out_.write(reinterpret_cast<const char*>(b.data()),
               static_cast<std::streamsize>(b.size()));
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void u32s(std::span<const std::uint32_t> v) {
    u64(v.size());
    for (auto x : v) u32(x);
  }

 private:
  void put(std::uint64_t v, int width) {
    char buf[8];
    for (int i = 0; i < width; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(buf, width);
  }
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  void expect_magic(std::string_view m) {
    std::string got(m.size(), '\0');
    read(got.data(), got.size());
    if (got != m) throw LoadError("bad magic: expected " + std::string(m));
  }
  std::uint8_t u8() {
    char c;
    read(&c, 1);
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::vector<std::uint8_t> bytes(std::uint64_t limit) {
    const auto n = u64();
    if (n > limit) throw LoadError("byte array length out of range");
    std::vector<std::uint8_t> out(n);
    read(reinterpret_cast<char*>(out.data()), n);
    return out;
  }
  std::string str(std::uint32_t limit) {
    const auto n = u32();
    if (n > limit) throw LoadError("string length out of range");
    std::string out(n, '\0');
    read(out.data(), n);
    return out;
  }
  std::vector<std::uint32_t> u32s(std::uint64_t limit) {
    const auto n = u64();
    if (n > limit) throw LoadError("array length out of range");
    std::vector<std::uint32_t> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(u32());
    return out;
  }

 private:
  std::uint64_t get(int width) {
    unsigned char buf[8];
    read(reinterpret_cast<char*>(buf), static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }
  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw LoadError("truncated input");
  }
  std::istream& in_;
};

}  // namespace detail
}  // namespace windex
