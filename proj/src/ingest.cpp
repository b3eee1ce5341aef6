#include "embgeo/ingest.hpp"

#include <charconv>
#include <cmath>

#include "embgeo/embp.hpp"
#include "embgeo/error.hpp"

namespace embgeo {

namespace {

// Splits text into lines, dropping a trailing '\r' from each and ignoring a
// final empty line produced by a terminating newline.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto end = line.find(',', start);
    if (end == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
  return value;
}

}  // namespace

EmbeddingFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? EmbeddingFormat::Csv : EmbeddingFormat::Binary;
}

EmbeddingMatrix parse_embeddings_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "empty CSV: missing header");
  const auto header = split_cells(lines[0]);
  if (header.size() < 2 || trim(header[0]) != "id") {
    throw Error(ErrorCode::FormatError, "CSV header must be `id,v0,v1,...`");
  }
  const std::size_t d = header.size() - 1;

  std::vector<std::string> ids;
  std::vector<float> values;
  std::size_t row = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    ++row;
    const auto cells = split_cells(lines[li]);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::FormatError,
                  "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(header.size()),
                  row);
    }
    ids.emplace_back(trim(cells[0]));
    for (std::size_t j = 0; j < d; ++j) {
      auto v = parse_number<float>(cells[j + 1]);
      if (!v) {
        throw Error(ErrorCode::ParseError,
                    "non-numeric cell at row " + std::to_string(row) + ", col " +
                        std::string(trim(header[j + 1])),
                    row, j);
      }
      values.push_back(*v);
    }
  }
  if (row == 0) throw Error(ErrorCode::FormatError, "CSV has no data rows");

  RowMatrix data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < row; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * d + j];
    }
  }
  return EmbeddingMatrix(std::move(data), std::move(ids));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  if (format == EmbeddingFormat::Csv) return parse_embeddings_csv(read_file(path));
  auto contents = read_embp(path);
  if (contents.dtype != EmbpDtype::F32) {
    throw Error(ErrorCode::FormatError, "embedding files must use the f32 dtype: " + path.string());
  }
  return EmbeddingMatrix(std::move(contents.data), std::move(contents.ids));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  return load_embeddings(path, format_for_path(path));
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  write_embp(path, m.data(), m.ids(), EmbpDtype::F32);
}

void ScoreTable::add(ScoreEntry entry) {
  if (find(entry.model, entry.dataset)) {
    throw Error(ErrorCode::DuplicateKey,
                "duplicate score for model '" + entry.model + "' on '" + entry.dataset + "'");
  }
  if (!std::isfinite(entry.score)) {
    throw Error(ErrorCode::ParseError, "non-finite score for '" + entry.model + "'");
  }
  entries_.push_back(std::move(entry));
}

std::optional<double> ScoreTable::find(const std::string& model, const std::string& dataset) const {
  for (const auto& e : entries_) {
    if (e.model == model && e.dataset == dataset) return e.score;
  }
  return std::nullopt;
}

ScoreTable parse_scores_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "empty score file");
  const auto header = split_cells(lines[0]);
  if (header.size() != 3 || trim(header[0]) != "model" || trim(header[1]) != "dataset" ||
      trim(header[2]) != "score") {
    throw Error(ErrorCode::FormatError, "score header must be `model,dataset,score`");
  }
  ScoreTable table;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto cells = split_cells(lines[li]);
    if (cells.size() != 3) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(li + 1) + ": expected 3 cells",
                  li + 1);
    }
    auto score = parse_number<double>(cells[2]);
    if (!score || !std::isfinite(*score)) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(li + 1) + ": score '" + std::string(trim(cells[2])) +
                      "' is not a number",
                  li + 1, 2);
    }
    table.add({std::string(trim(cells[0])), std::string(trim(cells[1])), *score});
  }
  return table;
}

ScoreTable load_scores(const std::filesystem::path& path) {
  return parse_scores_csv(read_file(path));
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += len;
  }
  return true;
}

Vocabulary parse_vocabulary(std::string_view text) {
  Vocabulary vocab;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) {
      throw Error(ErrorCode::EmptyLine, "blank line " + std::to_string(i + 1) + " in vocabulary",
                  i + 1);
    }
    if (!is_valid_utf8(lines[i])) {
      throw Error(ErrorCode::Utf8Error, "invalid UTF-8 on line " + std::to_string(i + 1), i + 1);
    }
    vocab.words.emplace_back(lines[i]);
  }
  return vocab;
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  return parse_vocabulary(read_file(path));
}

}  // namespace embgeo
