#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "popdiff/errors.hpp"
#include "popdiff/f2n.hpp"

namespace popdiff {

// F2SET v1:
//   line 1: "F2SET v1 n=<n>"
//   line 2: ceil(2^n / 4) lowercase hex digits; digit k holds indices 4k..4k+3,
//           least-significant bit first. For n = 1 the unused high bits of the
//           single digit must be zero.

inline std::size_t hex_length(GroupDim dim) {
  return static_cast<std::size_t>((dim.order() + 3) / 4);
}

inline std::string to_hex(const DenseSet& s) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(hex_length(s.dim()), '0');
  const auto words = s.words();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::uint64_t nibble = (words[k >> 4] >> ((k & 15) * 4)) & 0xf;
    out[k] = kDigits[nibble];
  }
  return out;
}

inline DenseSet from_hex(GroupDim dim, std::string_view hex) {
  if (hex.size() != hex_length(dim))
    throw FormatError("expected " + std::to_string(hex_length(dim)) + " hex digits for n=" +
                      std::to_string(dim.n()) + ", got " + std::to_string(hex.size()));
  std::vector<std::uint64_t> words(dim.n() >= 6 ? dim.order() >> 6 : 1, 0);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const char ch = hex[k];
    std::uint64_t nibble;
    if (ch >= '0' && ch <= '9')
      nibble = static_cast<std::uint64_t>(ch - '0');
    else if (ch >= 'a' && ch <= 'f')
      nibble = static_cast<std::uint64_t>(ch - 'a' + 10);
    else
      throw FormatError("bad hex character at offset " + std::to_string(k));
    words[k >> 4] |= nibble << ((k & 15) * 4);
  }
  if (dim.order() < 4 && (words[0] >> dim.order()) != 0)
    throw FormatError("padding bits set beyond 2^n");
  DenseSet s(dim);
  s.assign_words(std::move(words));
  return s;
}

inline void write_f2set(std::ostream& out, const DenseSet& s) {
  out << "F2SET v1 n=" << s.dim().n() << '\n' << to_hex(s) << '\n';
}

inline std::string format_f2set(const DenseSet& s) {
  std::ostringstream out;
  write_f2set(out, s);
  return out.str();
}

inline DenseSet read_f2set(std::istream& in) {
  std::string header, body;
  if (!std::getline(in, header)) throw FormatError("missing F2SET header");
  constexpr std::string_view kPrefix = "F2SET v1 n=";
  if (header.rfind(kPrefix, 0) != 0) throw FormatError("bad F2SET header '" + header + "'");
  const std::string n_text = header.substr(kPrefix.size());
  if (n_text.empty() || n_text.size() > 2 || n_text.find_first_not_of("0123456789") != std::string::npos)
    throw FormatError("bad dimension in header '" + header + "'");
  const GroupDim dim(std::stoi(n_text));
  if (!std::getline(in, body)) throw FormatError("missing F2SET body");
  std::string rest;
  while (std::getline(in, rest))
    if (!rest.empty()) throw FormatError("trailing data after F2SET body");
  return from_hex(dim, body);
}

inline DenseSet parse_f2set(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_f2set(in);
}

inline DenseSet load_f2set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_f2set(in);
}

inline void save_f2set(const std::string& path, const DenseSet& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  write_f2set(out, s);
}

// 64-bit FNV-1a, used to fingerprint set blobs inside certificates.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace popdiff
