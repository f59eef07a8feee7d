#ifndef LANDBAYES_RASTER_HPP_
#define LANDBAYES_RASTER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace landbayes {

// Raised by the ASCII grid reader; the message carries the 1-based line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Shape and georeferencing. The coordinates and cell size are carried for
// round-tripping only; no metric uses them.
struct GridInfo {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double xll = 0.0;
  double yll = 0.0;
  double cell_size = 1.0;
  double nodata = -9999.0;

  std::size_t size() const { return rows * cols; }
  bool same_shape(const GridInfo& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

// Row-major raster of reals with a nodata sentinel.
class Grid {
 public:
  Grid(GridInfo info, std::vector<double> values);

  const GridInfo& info() const { return info_; }
  std::size_t rows() const { return info_.rows; }
  std::size_t cols() const { return info_.cols; }
  std::size_t size() const { return values_.size(); }

  double at(std::size_t row, std::size_t col) const {
    return values_[row * info_.cols + col];
  }
  std::span<const double> values() const { return values_; }
  bool is_nodata(std::size_t index) const {
    return values_[index] == info_.nodata;
  }
  std::size_t nodata_count() const;

 private:
  GridInfo info_;
  std::vector<double> values_;
};

enum class Cell : std::uint8_t { kZero = 0, kOne = 1, kExcluded = 2 };

// A 0/1 map with an exclusion mask folded in. Excluded cells never enter
// any count.
class BinaryGrid {
 public:
  BinaryGrid(GridInfo info, std::vector<Cell> cells);

  const GridInfo& info() const { return info_; }
  std::size_t rows() const { return info_.rows; }
  std::size_t cols() const { return info_.cols; }
  std::size_t size() const { return cells_.size(); }

  Cell at(std::size_t row, std::size_t col) const {
    return cells_[row * info_.cols + col];
  }
  std::span<const Cell> cells() const { return cells_; }
  std::size_t count(Cell value) const;

 private:
  GridInfo info_;
  std::vector<Cell> cells_;
};

// Continuous suitability scores in [0, 1]; nodata cells are excluded.
class ScoreGrid {
 public:
  // Throws std::invalid_argument if a non-nodata value lies outside [0, 1].
  explicit ScoreGrid(const Grid& grid);
  ScoreGrid(GridInfo info, std::vector<double> scores,
            std::vector<bool> excluded);

  const GridInfo& info() const { return info_; }
  std::size_t rows() const { return info_.rows; }
  std::size_t cols() const { return info_.cols; }
  std::size_t size() const { return scores_.size(); }

  double score(std::size_t index) const { return scores_[index]; }
  bool is_excluded(std::size_t index) const { return excluded_[index]; }
  std::size_t included_count() const;

 private:
  GridInfo info_;
  std::vector<double> scores_;
  std::vector<bool> excluded_;
};

Grid parse_grid(std::istream& in);
Grid load_grid(const std::filesystem::path& path);

// Canonical writer: the six header lines, then rows of "%.6g" values
// separated by single spaces, '\n' line endings.
void write_grid(const Grid& grid, std::ostream& out);
void write_grid(const Grid& grid, const std::filesystem::path& path);

// Excluded cells become nodata; ones and zeros map to 1 and 0.
Grid to_grid(const BinaryGrid& grid);
Grid to_grid(const ScoreGrid& grid);

// Classifies cells equal to one_value / zero_value. Nodata cells, and cells
// that are nonzero or nodata in `exclusion`, become excluded. Any other value
// raises std::invalid_argument naming the value and the first cell index.
BinaryGrid to_binary(const Grid& grid, double one_value, double zero_value);
BinaryGrid to_binary(const Grid& grid, double one_value, double zero_value,
                     const Grid& exclusion);

// Cell = 1 iff score >= threshold.
struct ThresholdValue {
  double threshold;
};
// Exactly `count` cells set to 1: the highest scores, ties broken by lower
// row-major index.
struct ThresholdQuantity {
  std::size_t count;
};
using ThresholdMode = std::variant<ThresholdValue, ThresholdQuantity>;

BinaryGrid threshold_scores(const ScoreGrid& scores, const ThresholdMode& mode);

}  // namespace landbayes

#endif  // LANDBAYES_RASTER_HPP_
