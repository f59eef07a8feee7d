#include "landbayes/raster.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

#include "landbayes/format.hpp"

namespace landbayes {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

void check_same_shape(const GridInfo& a, const GridInfo& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(
        "grid shape mismatch: " + std::to_string(a.rows) + "x" +
        std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
        std::to_string(b.cols));
  }
}

}  // namespace

Grid::Grid(GridInfo info, std::vector<double> values)
    : info_(info), values_(std::move(values)) {
  if (info_.rows == 0 || info_.cols == 0) {
    throw std::invalid_argument("grid must have at least one row and column");
  }
  if (values_.size() != info_.size()) {
    throw std::invalid_argument("grid value count does not match rows*cols");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!is_nodata(i) && !std::isfinite(values_[i])) {
      throw std::invalid_argument("non-finite value at cell " +
                                  std::to_string(i));
    }
  }
}

std::size_t Grid::nodata_count() const {
  return static_cast<std::size_t>(
      std::count(values_.begin(), values_.end(), info_.nodata));
}

BinaryGrid::BinaryGrid(GridInfo info, std::vector<Cell> cells)
    : info_(info), cells_(std::move(cells)) {
  if (info_.rows == 0 || info_.cols == 0 || cells_.size() != info_.size()) {
    throw std::invalid_argument("binary grid shape does not match its cells");
  }
}

std::size_t BinaryGrid::count(Cell value) const {
  return static_cast<std::size_t>(
      std::count(cells_.begin(), cells_.end(), value));
}

ScoreGrid::ScoreGrid(const Grid& grid)
    : info_(grid.info()), scores_(grid.size()), excluded_(grid.size()) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_nodata(i)) {
      excluded_[i] = true;
      scores_[i] = 0.0;
      continue;
    }
    const double v = grid.values()[i];
    if (v < 0.0 || v > 1.0) {
      throw std::invalid_argument("score " + format_real(v) + " at cell " +
                                  std::to_string(i) + " outside [0,1]");
    }
    scores_[i] = v;
  }
}

ScoreGrid::ScoreGrid(GridInfo info, std::vector<double> scores,
                     std::vector<bool> excluded)
    : info_(info), scores_(std::move(scores)), excluded_(std::move(excluded)) {
  if (info_.rows == 0 || info_.cols == 0 || scores_.size() != info_.size() ||
      excluded_.size() != info_.size()) {
    throw std::invalid_argument("score grid shape does not match its values");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!excluded_[i] && !(scores_[i] >= 0.0 && scores_[i] <= 1.0)) {
      throw std::invalid_argument("score at cell " + std::to_string(i) +
                                  " outside [0,1]");
    }
  }
}

std::size_t ScoreGrid::included_count() const {
  return static_cast<std::size_t>(
      std::count(excluded_.begin(), excluded_.end(), false));
}

Grid parse_grid(std::istream& in) {
  static constexpr std::array<std::string_view, 6> kKeys = {
      "ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value"};
  std::array<double, 6> header{};
  std::string line;
  std::size_t line_no = 0;

  for (std::size_t k = 0; k < kKeys.size(); ++k) {
    if (!std::getline(in, line)) {
      throw ParseError(line_no + 1, "missing header line '" +
                                        std::string(kKeys[k]) + "'");
    }
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.size() != 2 || !iequals(tokens[0], kKeys[k])) {
      throw ParseError(line_no, "expected '" + std::string(kKeys[k]) +
                                    " <value>', got '" + line + "'");
    }
    const auto value = parse_real(tokens[1]);
    if (!value || !std::isfinite(*value)) {
      throw ParseError(line_no, "non-numeric header value '" +
                                    std::string(tokens[1]) + "'");
    }
    header[k] = *value;
  }

  for (std::size_t k = 0; k < 2; ++k) {
    if (header[k] < 1 || header[k] != std::floor(header[k])) {
      throw ParseError(k + 1, std::string(kKeys[k]) +
                                  " must be a positive integer");
    }
  }
  GridInfo info;
  info.cols = static_cast<std::size_t>(header[0]);
  info.rows = static_cast<std::size_t>(header[1]);
  info.xll = header[2];
  info.yll = header[3];
  info.cell_size = header[4];
  info.nodata = header[5];

  std::vector<double> values;
  values.reserve(info.size());
  std::size_t rows_read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (rows_read == info.rows) {
      throw ParseError(line_no, "more than nrows=" +
                                    std::to_string(info.rows) + " data rows");
    }
    if (tokens.size() != info.cols) {
      throw ParseError(line_no, "expected " + std::to_string(info.cols) +
                                    " values, found " +
                                    std::to_string(tokens.size()));
    }
    for (const auto token : tokens) {
      const auto value = parse_real(token);
      if (!value || (*value != info.nodata && !std::isfinite(*value))) {
        throw ParseError(line_no,
                         "non-numeric token '" + std::string(token) + "'");
      }
      values.push_back(*value);
    }
    ++rows_read;
  }
  if (rows_read != info.rows) {
    throw ParseError(line_no, "expected " + std::to_string(info.rows) +
                                  " data rows, found " +
                                  std::to_string(rows_read));
  }
  return Grid(info, std::move(values));
}

Grid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open grid file " + path.string());
  }
  try {
    return parse_grid(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

void write_grid(const Grid& grid, std::ostream& out) {
  const GridInfo& info = grid.info();
  out << "ncols " << info.cols << '\n'
      << "nrows " << info.rows << '\n'
      << "xllcorner " << format_real(info.xll) << '\n'
      << "yllcorner " << format_real(info.yll) << '\n'
      << "cellsize " << format_real(info.cell_size) << '\n'
      << "NODATA_value " << format_real(info.nodata) << '\n';
  for (std::size_t r = 0; r < info.rows; ++r) {
    for (std::size_t c = 0; c < info.cols; ++c) {
      if (c > 0) out << ' ';
      out << format_real(grid.at(r, c));
    }
    out << '\n';
  }
}

void write_grid(const Grid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write grid file " + path.string());
  }
  write_grid(grid, out);
}

Grid to_grid(const BinaryGrid& grid) {
  std::vector<double> values(grid.size());
  const auto cells = grid.cells();
  for (std::size_t i = 0; i < values.size(); ++i) {
    switch (cells[i]) {
      case Cell::kZero: values[i] = 0.0; break;
      case Cell::kOne: values[i] = 1.0; break;
      case Cell::kExcluded: values[i] = grid.info().nodata; break;
    }
  }
  return Grid(grid.info(), std::move(values));
}

Grid to_grid(const ScoreGrid& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = grid.is_excluded(i) ? grid.info().nodata : grid.score(i);
  }
  return Grid(grid.info(), std::move(values));
}

namespace {

BinaryGrid classify(const Grid& grid, double one_value, double zero_value,
                    const Grid* exclusion) {
  std::vector<Cell> cells(grid.size());
  const auto values = grid.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (exclusion != nullptr &&
        (exclusion->is_nodata(i) || exclusion->values()[i] != 0.0)) {
      cells[i] = Cell::kExcluded;
    } else if (grid.is_nodata(i)) {
      cells[i] = Cell::kExcluded;
    } else if (values[i] == one_value) {
      cells[i] = Cell::kOne;
    } else if (values[i] == zero_value) {
      cells[i] = Cell::kZero;
    } else {
      throw std::invalid_argument("unexpected value " + format_real(values[i]) +
                                  " at cell " + std::to_string(i));
    }
  }
  return BinaryGrid(grid.info(), std::move(cells));
}

}  // namespace

BinaryGrid to_binary(const Grid& grid, double one_value, double zero_value) {
  return classify(grid, one_value, zero_value, nullptr);
}

BinaryGrid to_binary(const Grid& grid, double one_value, double zero_value,
                     const Grid& exclusion) {
  check_same_shape(grid.info(), exclusion.info());
  return classify(grid, one_value, zero_value, &exclusion);
}

BinaryGrid threshold_scores(const ScoreGrid& scores, const ThresholdMode& mode) {
  std::vector<Cell> cells(scores.size(), Cell::kZero);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores.is_excluded(i)) cells[i] = Cell::kExcluded;
  }

  if (const auto* value = std::get_if<ThresholdValue>(&mode)) {
    if (!(value->threshold >= 0.0 && value->threshold <= 1.0)) {
      throw std::invalid_argument("threshold must lie in [0,1]");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!scores.is_excluded(i) && scores.score(i) >= value->threshold) {
        cells[i] = Cell::kOne;
      }
    }
    return BinaryGrid(scores.info(), std::move(cells));
  }

  const std::size_t n = std::get<ThresholdQuantity>(mode).count;
  std::vector<std::size_t> order;
  order.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores.is_excluded(i)) order.push_back(i);
  }
  if (n > order.size()) {
    throw std::invalid_argument(
        "quantity " + std::to_string(n) + " exceeds the " +
        std::to_string(order.size()) + " non-excluded cells");
  }
  const auto higher = [&scores](std::size_t a, std::size_t b) {
    const double sa = scores.score(a);
    const double sb = scores.score(b);
    return sa != sb ? sa > sb : a < b;
  };
  if (n < order.size()) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
                     order.end(), higher);
  }
  for (std::size_t k = 0; k < n; ++k) cells[order[k]] = Cell::kOne;
  return BinaryGrid(scores.info(), std::move(cells));
}

}  // namespace landbayes
