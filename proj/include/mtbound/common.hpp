#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mtbound {

// Time queried outside a trajectory's parameterized span.
struct OutOfHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file content; `field` names the offending key when known.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& field, const std::string& detail = "")
      : std::runtime_error("parse error: " + field + (detail.empty() ? "" : " (" + detail + ")")),
        field(field) {}
  std::string field;
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct GenerationFailed : std::runtime_error {
  explicit GenerationFailed(int redraws)
      : std::runtime_error("instance generation failed after " + std::to_string(redraws) +
                           " trajectory redraws"),
        redraws(redraws) {}
  int redraws;
};

struct VariantUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooManyClusters : std::runtime_error {
  explicit TooManyClusters(int n)
      : std::runtime_error("exact GTSP refused: " + std::to_string(n) +
                           " clusters exceeds the subset-DP limit of 16; reduce the "
                           "discretization or use the heuristic solver"),
        clusters(n) {}
  int clusters;
};

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mt19937_64 output is pinned by the standard, and the mappings below avoid
// std::uniform_*_distribution, whose streams differ across standard libraries.
// Identical seeds therefore give identical draws on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive on both ends.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin() { return (gen_() & 1u) != 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mtbound
