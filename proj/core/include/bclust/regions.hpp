#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bclust/metric.hpp"

namespace bclust {

/// Relative slack for containment tests. Candidate radii are themselves
/// table entries, so a distance equal to the radius must count as inside.
inline constexpr double kContainmentSlack = 1e-12;

inline bool within_radius(double distance, double radius) noexcept {
  return distance <= radius * (1.0 + kContainmentSlack);
}

/// Bit j is set iff the point lies in ball j.
using CoverageSignature = std::uint64_t;

inline constexpr std::size_t kMaxCoverageBalls = 64;

/// Ring index of a point with respect to each center. A point sitting on
/// center j (distance exactly 0) has level 0 and bit j of `at_center` set;
/// such points cost nothing in the assignment LP.
struct LevelVector {
  std::vector<std::uint32_t> levels;
  std::uint64_t at_center = 0;

  bool operator==(const LevelVector&) const = default;
};

struct LevelVectorHash {
  std::size_t operator()(const LevelVector& v) const noexcept;
};

template <class Signature>
struct Region {
  Signature signature{};
  std::vector<std::size_t> members;

  std::size_t count() const noexcept { return members.size(); }
};

/// Nonempty regions in order of first appearance (by lowest member index).
template <class Signature>
class RegionTable {
 public:
  using RegionType = Region<Signature>;

  const std::vector<RegionType>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const RegionType& operator[](std::size_t i) const noexcept { return entries_[i]; }

  std::size_t total_count() const noexcept {
    std::size_t total = 0;
    for (const auto& r : entries_) total += r.count();
    return total;
  }

  template <class Hash = std::hash<Signature>>
  static RegionTable build(std::size_t n,
                           const std::function<Signature(std::size_t)>& signature_of) {
    RegionTable table;
    std::unordered_map<Signature, std::size_t, Hash> index;
    for (std::size_t i = 0; i < n; ++i) {
      Signature sig = signature_of(i);
      auto [it, inserted] = index.try_emplace(sig, table.entries_.size());
      if (inserted) table.entries_.push_back(RegionType{std::move(sig), {}});
      table.entries_[it->second].members.push_back(i);
    }
    return table;
  }

 private:
  std::vector<RegionType> entries_;
};

using CoverageRegions = RegionTable<CoverageSignature>;
using LevelRegions = RegionTable<LevelVector>;

CoverageSignature coverage_signature(std::span<const double> row, double radius);

/// std::nullopt when some point lies outside every ball.
std::optional<CoverageRegions> build_coverage_regions(const DistanceTable& table,
                                                      double radius);

/// Concentric ring radii alpha_t = (1 + eps)^t * r_min for t = 0..T, with T
/// the smallest integer such that alpha_T covers r_max.
class LevelSchedule {
 public:
  LevelSchedule(double r_min, double r_max, double epsilon);

  const std::vector<double>& alphas() const noexcept { return alphas_; }
  double alpha(std::size_t t) const noexcept { return alphas_[t]; }
  double epsilon() const noexcept { return epsilon_; }
  /// T, the index of the outermost ring.
  std::size_t levels() const noexcept { return alphas_.size() - 1; }

  /// Smallest t with distance <= alpha_t (closed outer boundary).
  /// Distance 0 maps to 0. Throws InvariantError beyond alpha_T.
  std::uint32_t level_of(double distance) const;
  /// Same, with std::log(distance) precomputed by the caller.
  std::uint32_t level_of(double distance, double log_distance) const;

 private:
  std::vector<double> alphas_;
  double epsilon_ = 1;
  double log_r_min_ = 0;
  double log_growth_ = 0;
};

LevelSchedule build_level_schedule(double r_min, double r_max, double epsilon);

LevelVector level_vector(std::span<const double> row, const LevelSchedule& schedule);

LevelRegions build_level_regions(const DistanceTable& table,
                                 const LevelSchedule& schedule);

}  // namespace bclust
