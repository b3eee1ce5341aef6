#pragma once

// EMBP binary matrix container.
//
// Layout (little-endian):
//   "EMBP" | version u16 = 1 | dtype u8 | reserved u8 = 0 | N u64 | d u64 |
//   N*d values row-major | id count u32 | id count x (u32 length, UTF-8 bytes)
//
// dtype 1 is f32 and is what embedding files use. dtype 2 (f64) is accepted
// for fitted-model sidecars that must round-trip without rounding.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "embgeo/types.hpp"

namespace embgeo {

enum class EmbpDtype : std::uint8_t { F32 = 1, F64 = 2 };

struct EmbpContents {
  RowMatrix data;
  std::vector<std::string> ids;  // empty when the file carried no ids
  EmbpDtype dtype = EmbpDtype::F32;
};

std::string encode_embp(const RowMatrix& data, const std::vector<std::string>& ids,
                        EmbpDtype dtype = EmbpDtype::F32);

/// Throws FormatError on bad magic, version, dtype, or any size that does not
/// match the byte count.
EmbpContents decode_embp(std::string_view bytes);

EmbpContents read_embp(const std::filesystem::path& path);
void write_embp(const std::filesystem::path& path, const RowMatrix& data,
                const std::vector<std::string>& ids, EmbpDtype dtype = EmbpDtype::F32);

/// Reads a whole file; FileNotFound / IoError on failure.
std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames it over `path`, so readers
/// never observe a partially written target.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);
void atomic_write(const std::filesystem::path& path, std::string_view contents);

}  // namespace embgeo
