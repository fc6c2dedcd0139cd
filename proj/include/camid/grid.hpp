// 2-D lattice of Bernoulli parameters and its CSV / JSON serialization.
//
// Each cell holds the parameter p in [0,1] of a Bernoulli measure; the grid
// is stored row-major. All update rules in this project act on these
// parameters directly, so the grid doubles as the full automaton state.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace camid {

inline bool is_bernoulli_param(double p) { return p >= 0.0 && p <= 1.0; }

class Configuration {
 public:
  Configuration() = default;

  // Constant-filled grid.
  Configuration(int height, int width, double fill = 0.0);

  // Takes ownership of row-major cell values; validates dimensions and range.
  Configuration(int height, int width, std::vector<double> cells);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return cells_.size(); }

  double at(int row, int col) const { return cells_[index(row, col)]; }
  void set(int row, int col, double p);

  // Toroidal accessor: any integer coordinates are wrapped into range.
  double at_wrapped(int row, int col) const;

  const std::vector<double>& cells() const { return cells_; }
  double* data() { return cells_.data(); }
  const double* data() const { return cells_.data(); }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  bool same_shape(const Configuration& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  bool operator==(const Configuration& other) const = default;

  // CSV: one line per lattice row, comma-separated, 17 significant digits
  // so that a write/read round trip is bit-exact. LF line endings.
  std::string to_csv() const;
  static Configuration from_csv(std::istream& in);
  static Configuration from_csv_string(const std::string& text);

  // JSON envelope {"height":H,"width":W,"cells":[...]} with the same
  // 17-significant-digit contract.
  std::string to_json() const;
  static Configuration from_json(const std::string& text);

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> cells_;
};

// Grid filled with i.i.d. uniform [0,1) draws; consumes height*width draws.
Configuration random_configuration(int height, int width, std::uint64_t seed);

}  // namespace camid
