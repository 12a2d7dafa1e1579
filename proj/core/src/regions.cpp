#include "bclust/regions.hpp"

#include <cmath>
#include <sstream>

#include "bclust/errors.hpp"

namespace bclust {

std::size_t LevelVectorHash::operator()(const LevelVector& v) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.at_center;
  for (auto l : v.levels) h = (h ^ l) * 0x100000001b3ull + (h >> 29);
  return static_cast<std::size_t>(h);
}

CoverageSignature coverage_signature(std::span<const double> row, double radius) {
  CoverageSignature mask = 0;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (within_radius(row[j], radius)) mask |= CoverageSignature{1} << j;
  return mask;
}

std::optional<CoverageRegions> build_coverage_regions(const DistanceTable& table,
                                                      double radius) {
  if (!(radius >= 0)) throw InputError("coverage radius must be >= 0");
  if (table.cols() > kMaxCoverageBalls)
    throw InputError("coverage regions support at most 64 balls");
  for (std::size_t i = 0; i < table.rows(); ++i)
    if (coverage_signature(table.row(i), radius) == 0) return std::nullopt;
  return CoverageRegions::build(table.rows(), [&](std::size_t i) {
    return coverage_signature(table.row(i), radius);
  });
}

LevelSchedule::LevelSchedule(double r_min, double r_max, double epsilon)
    : epsilon_(epsilon) {
  if (!(r_min > 0) || !(r_max >= r_min) || !std::isfinite(r_max))
    throw InputError("level schedule needs 0 < r_min <= r_max");
  if (!(epsilon > 0) || !std::isfinite(epsilon))
    throw InputError("level schedule needs epsilon > 0");
  log_r_min_ = std::log(r_min);
  log_growth_ = std::log1p(epsilon);
  alphas_.push_back(r_min);
  // Ring radii are built by repeated multiplication so that alpha_t is exactly
  // the value every comparison uses.
  while (!within_radius(r_max, alphas_.back()))
    alphas_.push_back(alphas_.back() * (1.0 + epsilon));
}

std::uint32_t LevelSchedule::level_of(double distance) const {
  return level_of(distance, distance > 0 ? std::log(distance) : 0.0);
}

std::uint32_t LevelSchedule::level_of(double distance, double log_distance) const {
  if (distance <= 0) return 0;
  const std::size_t top = levels();
  if (!within_radius(distance, alphas_[top])) {
    std::ostringstream msg;
    msg << "distance " << distance << " lies beyond the outermost ring "
        << alphas_[top];
    throw InvariantError(msg.str());
  }
  const double guess = std::ceil((log_distance - log_r_min_) / log_growth_);
  std::size_t t = guess <= 0 ? 0 : std::min(top, static_cast<std::size_t>(guess));
  while (t > 0 && within_radius(distance, alphas_[t - 1])) --t;
  while (!within_radius(distance, alphas_[t])) ++t;
  return static_cast<std::uint32_t>(t);
}

LevelSchedule build_level_schedule(double r_min, double r_max, double epsilon) {
  return LevelSchedule(r_min, r_max, epsilon);
}

LevelVector level_vector(std::span<const double> row, const LevelSchedule& schedule) {
  LevelVector v;
  v.levels.resize(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    v.levels[j] = schedule.level_of(row[j]);
    if (row[j] == 0) v.at_center |= std::uint64_t{1} << j;
  }
  return v;
}

LevelRegions build_level_regions(const DistanceTable& table,
                                 const LevelSchedule& schedule) {
  if (table.cols() > 64) throw InputError("level regions support at most 64 centers");
  return LevelRegions::build<LevelVectorHash>(table.rows(), [&](std::size_t i) {
    return level_vector(table.row(i), schedule);
  });
}

}  // namespace bclust
