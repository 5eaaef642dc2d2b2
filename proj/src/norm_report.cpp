#include "dzak/norm_report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace dzak {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double NormReport::reaggregate() const {
  switch (aggregation) {
    case Aggregation::Sum: {
      double s = 0.0;
      for (const auto& b : blocks) s += b.contribution;
      return s;
    }
    case Aggregation::L2: {
      double s = 0.0;
      for (const auto& b : blocks) s += b.contribution * b.contribution;
      return std::sqrt(s);
    }
    case Aggregation::Min: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& b : blocks) m = std::min(m, b.contribution);
      return blocks.empty() ? 0.0 : m;
    }
    case Aggregation::L2OverLp: {
      std::map<std::pair<double, double>, double> inner;
      for (const auto& b : blocks) {
        auto& acc = inner[{b.N, b.M}];
        if (std::isinf(p))
          acc = std::max(acc, b.contribution);
        else
          acc += std::pow(b.contribution, p);
      }
      double s = 0.0;
      for (auto& [k, v] : inner) {
        const double lp = std::isinf(p) ? v : std::pow(v, 1.0 / p);
        s += lp * lp;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

std::string NormReport::to_csv(bool header) const {
  std::string out;
  if (header) out += "kind,N,M,L,contribution,total\n";
  for (const auto& b : blocks) {
    out += b.kind + "," + format_double(b.N) + "," + format_double(b.M) + "," + format_double(b.L) + "," +
           format_double(b.contribution) + "," + format_double(total) + "\n";
  }
  return out;
}

}  // namespace dzak
