#pragma once

#include <array>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dslogistic/sample.hpp"

namespace dslogistic {

/// Difference in flood stage between two stations on the Fox River,
/// Wisconsin (n = 33).
inline constexpr std::array<double, 33> kFoxRiver = {
    1.96,  1.96,  3.60,  3.80,  4.79,  5.66,  5.76,  5.78,  6.27,
    6.30,  6.76,  7.65,  7.84,  7.99,  8.51,  9.18,  10.13, 10.24,
    10.25, 10.43, 11.45, 11.48, 11.75, 11.81, 12.34, 12.78, 13.06,
    13.29, 13.98, 14.18, 14.40, 16.22, 17.06};

/// Mode of the Fox River data, subtracted before flooring.
inline constexpr double kFoxRiverShift = 11.5;

enum class TransformOrder { subtract_then_floor, floor_then_subtract };

/// Real-to-integer preprocessing: floor(x - shift) by default, or
/// floor(x) - shift (shift must then be integral) when reordered.
struct Transform {
  double shift = 0.0;
  TransformOrder order = TransformOrder::subtract_then_floor;

  std::string describe() const {
    std::ostringstream os;
    if (order == TransformOrder::subtract_then_floor) {
      os << "floor(x - " << shift << ")";
    } else {
      os << "floor(x) - " << shift;
    }
    return os.str();
  }
};

struct Dataset {
  std::string name;
  std::vector<double> raw;

  IntSample transformed(const Transform& t) const {
    std::vector<integer> out;
    out.reserve(raw.size());
    if (t.order == TransformOrder::floor_then_subtract &&
        t.shift != std::floor(t.shift)) {
      throw std::invalid_argument(
          "floor-then-subtract needs an integral shift");
    }
    for (double x : raw) {
      const double v = t.order == TransformOrder::subtract_then_floor
                           ? std::floor(x - t.shift)
                           : std::floor(x) - t.shift;
      out.push_back(static_cast<integer>(v));
    }
    return IntSample(std::move(out));
  }
};

inline Dataset fox_river() {
  return {"fox-river", std::vector<double>(kFoxRiver.begin(), kFoxRiver.end())};
}

/// One real per line; blank lines and text after '#' are ignored.
inline std::vector<double> read_reals(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": not a real number: '" + token + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace dslogistic
