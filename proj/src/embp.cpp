#include "embgeo/embp.hpp"

#include <unistd.h>

#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "embgeo/error.hpp"

namespace embgeo {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', 'P'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 2 + 1 + 1 + 8 + 8;

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw Error(ErrorCode::FormatError, std::string("truncated EMBP data while reading ") + what);
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_embp(const RowMatrix& data, const std::vector<std::string>& ids,
                        EmbpDtype dtype) {
  if (!ids.empty() && ids.size() != static_cast<std::size_t>(data.rows())) {
    throw Error(ErrorCode::LengthMismatch, "id count does not match row count");
  }
  const std::size_t width = dtype == EmbpDtype::F32 ? 4 : 8;
  std::string out;
  out.reserve(kHeaderBytes + static_cast<std::size_t>(data.size()) * width);
  out.append(kMagic, 4);
  put_le<std::uint16_t>(out, kVersion);
  out.push_back(static_cast<char>(dtype));
  out.push_back(0);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(data.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(data.cols()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (dtype == EmbpDtype::F32) {
        put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(data(i, j))));
      } else {
        put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(data(i, j)));
      }
    }
  }
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ids.size()));
  for (const auto& id : ids) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.append(id);
  }
  return out;
}

EmbpContents decode_embp(std::string_view bytes) {
  Reader in(bytes);
  if (in.remaining() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::FormatError, "not an EMBP file (bad magic)");
  }
  in.take(4, "magic");
  const auto version = in.get<std::uint16_t>("version");
  if (version != kVersion) {
    throw Error(ErrorCode::FormatError, "unsupported EMBP version " + std::to_string(version));
  }
  const auto dtype = in.get<std::uint8_t>("dtype");
  if (dtype != 1 && dtype != 2) {
    throw Error(ErrorCode::FormatError, "unsupported EMBP dtype " + std::to_string(dtype));
  }
  if (in.get<std::uint8_t>("reserved") != 0) {
    throw Error(ErrorCode::FormatError, "EMBP reserved byte must be 0");
  }
  const auto n = in.get<std::uint64_t>("row count");
  const auto d = in.get<std::uint64_t>("dim count");
  const std::uint64_t width = dtype == 1 ? 4 : 8;
  const auto max_index = static_cast<std::uint64_t>(std::numeric_limits<Eigen::Index>::max());
  if (n > max_index || d > max_index || (d != 0 && n > in.remaining() / d / width)) {
    throw Error(ErrorCode::FormatError, "declared shape " + std::to_string(n) + "x" +
                                            std::to_string(d) + " exceeds file size");
  }

  EmbpContents out;
  out.dtype = static_cast<EmbpDtype>(dtype);
  out.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < d; ++j) {
      double v;
      if (dtype == 1) {
        v = std::bit_cast<float>(in.get<std::uint32_t>("values"));
      } else {
        v = std::bit_cast<double>(in.get<std::uint64_t>("values"));
      }
      out.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }

  const auto count = in.get<std::uint32_t>("id count");
  if (count != 0 && count != n) {
    throw Error(ErrorCode::FormatError, "id count " + std::to_string(count) +
                                            " does not match row count " + std::to_string(n));
  }
  out.ids.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = in.get<std::uint32_t>("id length");
    out.ids.emplace_back(in.take(len, "id bytes"));
  }
  if (in.remaining() != 0) {
    throw Error(ErrorCode::FormatError, "trailing bytes after EMBP id block");
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + path.string());
  return std::move(ss).str();
}

EmbpContents read_embp(const std::filesystem::path& path) {
  return decode_embp(read_file(path));
}

void write_embp(const std::filesystem::path& path, const RowMatrix& data,
                const std::vector<std::string>& ids, EmbpDtype dtype) {
  atomic_write(path, encode_embp(data, ids, dtype));
}

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer) {
  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp-" +
                              std::to_string(::getpid()) + "-" + std::to_string(counter++));
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorCode::IoError, "cannot create " + tmp.string());
      writer(out);
      out.flush();
      if (!out) throw Error(ErrorCode::IoError, "write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
  } catch (...) {
    fs::remove(tmp, ec);
    throw;
  }
}

void atomic_write(const std::filesystem::path& path, std::string_view contents) {
  atomic_write(path, [&](std::ostream& out) { out.write(contents.data(), static_cast<std::streamsize>(contents.size())); });
}

}  // namespace embgeo
