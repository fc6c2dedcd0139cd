#include "camid/grid.hpp"

#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "camid/rng.hpp"
#include "json.hpp"

namespace camid {

namespace {

void check_dims(int height, int width) {
  if (height <= 0 || width <= 0)
    throw std::invalid_argument("configuration dimensions must be positive");
}

void check_param(double p) {
  if (!is_bernoulli_param(p))
    throw std::invalid_argument("cell value outside [0,1]");
}

// %.17g guarantees an exact double round trip and uses '.' as the decimal
// separator under the default C locale.
void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

Configuration::Configuration(int height, int width, double fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  check_param(fill);
  cells_.assign(static_cast<std::size_t>(height) * width, fill);
}

Configuration::Configuration(int height, int width, std::vector<double> cells)
    : height_(height), width_(width), cells_(std::move(cells)) {
  check_dims(height, width);
  if (cells_.size() != static_cast<std::size_t>(height) * width)
    throw std::invalid_argument("cell count does not match dimensions");
  for (double p : cells_) check_param(p);
}

void Configuration::set(int row, int col, double p) {
  check_param(p);
  cells_[index(row, col)] = p;
}

double Configuration::at_wrapped(int row, int col) const {
  const int r = ((row % height_) + height_) % height_;
  const int c = ((col % width_) + width_) % width_;
  return cells_[index(r, c)];
}

std::string Configuration::to_csv() const {
  std::string out;
  out.reserve(cells_.size() * 20);
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      if (c) out += ',';
      append_double(out, at(r, c));
    }
    out += '\n';
  }
  return out;
}

Configuration Configuration::from_csv(std::istream& in) {
  std::vector<double> cells;
  int width = -1;
  int height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int cols = 0;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) {
      cells.push_back(std::stod(field));
      ++cols;
    }
    if (width < 0)
      width = cols;
    else if (cols != width)
      throw std::invalid_argument("ragged CSV grid");
    ++height;
  }
  if (height == 0) throw std::invalid_argument("empty CSV grid");
  return Configuration(height, width, std::move(cells));
}

Configuration Configuration::from_csv_string(const std::string& text) {
  std::istringstream in(text);
  return from_csv(in);
}

std::string Configuration::to_json() const {
  std::string out = "{\"height\":" + std::to_string(height_) +
                    ",\"width\":" + std::to_string(width_) + ",\"cells\":[";
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (i) out += ',';
    append_double(out, cells_[i]);
  }
  out += "]}";
  return out;
}

Configuration Configuration::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return Configuration(j.at("height").get<int>(), j.at("width").get<int>(),
                       j.at("cells").get<std::vector<double>>());
}

Configuration random_configuration(int height, int width, std::uint64_t seed) {
  check_dims(height, width);
  Rng rng(seed);
  std::vector<double> cells(static_cast<std::size_t>(height) * width);
  for (double& p : cells) p = draw::u01(rng);
  return Configuration(height, width, std::move(cells));
}

}  // namespace camid
