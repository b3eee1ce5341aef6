#include <doctest.h>

#include <cstring>
#include <fstream>

#include "embgeo/embp.hpp"
#include "embgeo/serialize.hpp"
#include "embgeo/types.hpp"
#include "helpers.hpp"

using namespace embgeo;
using testutil::error_code;

namespace {

RowMatrix small(std::initializer_list<std::initializer_list<double>> rows) {
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("embedding matrix validation") {
  EmbeddingMatrix ok(small({{1, 0}, {0, 1}}));
  CHECK(ok.rows() == 2);
  CHECK(ok.dims() == 2);
  CHECK(ok.ids() == std::vector<std::string>{"0", "1"});

  CHECK(error_code([] { EmbeddingMatrix(RowMatrix(0, 4)); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { EmbeddingMatrix(small({{1}, {2}})); }) == ErrorCode::InvalidParameter);
  CHECK(error_code([] { EmbeddingMatrix(small({{1, 0}, {0, 0}})); }) == ErrorCode::ZeroNormRow);
  CHECK(error_code([] { EmbeddingMatrix(small({{1, 0}}), {"a", "b"}); }) == ErrorCode::LengthMismatch);
  CHECK(error_code([] { EmbeddingMatrix(small({{1, 0}, {0, 1}}), {"a", "a"}); }) == ErrorCode::DuplicateId);

  try {
    EmbeddingMatrix(small({{1, 0}, {0, std::nan("")}}));
    FAIL("expected NonFiniteValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteValue);
    CHECK(e.row() == 1u);
    CHECK(e.col() == 1u);
  }
  CHECK(error_code([] { EmbeddingMatrix(small({{1, INFINITY}})); }) == ErrorCode::NonFiniteValue);
}

TEST_CASE("paired validation") {
  const auto q = small({{1, 0}, {0, 1}, {1, 1}});
  CHECK(error_code([&] { validate_paired(q, small({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}})); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(error_code([&] { validate_paired(q, small({{1, 0}, {0, 1}})); }) == ErrorCode::PairCountMismatch);
  // Dimension is checked before count.
  CHECK(error_code([&] { validate_paired(q, small({{1, 0, 0}})); }) == ErrorCode::DimensionMismatch);

  const auto p = validate_paired(q, small({{2, 0}, {0, 2}, {2, 2}}), {"ds", "m", true});
  CHECK(p.size() == 3);
  CHECK(p.dims() == 2);
  CHECK(p.labels().prompted);
  const auto s = p.swapped();
  CHECK(s.queries().data() == p.targets().data());
  CHECK(s.targets().data() == p.queries().data());
}

TEST_CASE("run manifest validation and json round trip") {
  RunManifest m{{"ds", "model", false}, ProbeKind::Ica, {{"d_ica", "32"}, {"seed", "0"}}, "x.json", 1700000000};
  CHECK_NOTHROW(m.validate());
  const auto back = manifest_from_json(to_json(m));
  CHECK(back.labels.dataset_name == "ds");
  CHECK(back.labels.model_name == "model");
  CHECK(back.probe == ProbeKind::Ica);
  CHECK(back.parameters == m.parameters);
  CHECK(back.created_utc == 1700000000);

  m.parameters.erase("seed");
  CHECK(error_code([&] { m.validate(); }) == ErrorCode::InvalidParameter);
  RunManifest r{{}, ProbeKind::Retention, {{"k", "10"}}, "", 0};
  CHECK(error_code([&] { r.validate(); }) == ErrorCode::InvalidParameter);
  r.parameters["metric"] = "cosine";
  CHECK_NOTHROW(r.validate());
  CHECK(probe_kind_from_string(to_string(ProbeKind::Shuffle)) == ProbeKind::Shuffle);
  CHECK(error_code([] { probe_kind_from_string("nope"); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("EMBP round trip is bit exact") {
  RowMatrix m = testutil::gaussian(7, 5, 3).cast<float>().cast<double>();
  const std::vector<std::string> ids{"a", "b", "c", "", "é", "f,g", "7"};
  const auto bytes = encode_embp(m, ids);
  CHECK(bytes.substr(0, 4) == "EMBP");
  CHECK(bytes.size() == 4 + 2 + 1 + 1 + 8 + 8 + 7 * 5 * 4 + 4 + (7 * 4 + 1 + 1 + 1 + 0 + 2 + 3 + 1));
  const auto back = decode_embp(bytes);
  CHECK(back.data == m);
  CHECK(back.ids == ids);
  CHECK(encode_embp(back.data, back.ids) == bytes);

  const auto no_ids = decode_embp(encode_embp(m, {}));
  CHECK(no_ids.ids.empty());

  RowMatrix fine = testutil::gaussian(3, 4, 9);
  const auto f64 = decode_embp(encode_embp(fine, {}, EmbpDtype::F64));
  CHECK(f64.dtype == EmbpDtype::F64);
  CHECK(f64.data == fine);
}

TEST_CASE("EMBP rejects corrupted input") {
  const RowMatrix m = testutil::gaussian(4, 3, 1).cast<float>().cast<double>();
  const auto bytes = encode_embp(m, {"a", "b", "c", "d"});

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(error_code([&] { decode_embp(bad_magic); }) == ErrorCode::FormatError);

  auto bad_version = bytes;
  bad_version[4] = 9;
  CHECK(error_code([&] { decode_embp(bad_version); }) == ErrorCode::FormatError);

  auto bad_dtype = bytes;
  bad_dtype[6] = 7;
  CHECK(error_code([&] { decode_embp(bad_dtype); }) == ErrorCode::FormatError);

  for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
    CAPTURE(cut);
    CHECK(error_code([&] { decode_embp(std::string_view(bytes).substr(0, cut)); }) == ErrorCode::FormatError);
  }
  CHECK(error_code([&] { decode_embp(bytes + "x"); }) == ErrorCode::FormatError);

  // A huge declared shape must not allocate before the size check.
  auto huge = bytes;
  const std::uint64_t n = 1ull << 60;
  std::memcpy(huge.data() + 8, &n, 8);
  CHECK(error_code([&] { decode_embp(huge); }) == ErrorCode::FormatError);
}

TEST_CASE("file helpers") {
  testutil::TempDir dir;
  CHECK(error_code([&] { read_file(dir / "missing.embp"); }) == ErrorCode::FileNotFound);

  const RowMatrix m = testutil::gaussian(3, 2, 5).cast<float>().cast<double>();
  write_embp(dir / "m.embp", m, {"x", "y", "z"});
  const auto back = read_embp(dir / "m.embp");
  CHECK(back.data == m);

  atomic_write(dir / "t.txt", "first");
  atomic_write(dir / "t.txt", "second");
  CHECK(read_file(dir / "t.txt") == "second");

  CHECK_THROWS(atomic_write(dir / "boom.txt", [](std::ostream& os) {
    os << "partial";
    throw std::runtime_error("writer failed");
  }));
  CHECK_FALSE(std::filesystem::exists(dir / "boom.txt"));
  std::size_t leftovers = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    if (e.path().filename().string().front() == '.') ++leftovers;
  }
  CHECK(leftovers == 0);
}
