#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bclust/metric.hpp"

namespace bclust {

inline constexpr std::uint64_t kDefaultTupleCap = 10'000'000;

/// Lexicographic enumeration of the |C|^k Cartesian product of a candidate
/// list with itself (repeats allowed). Tuples are addressable by index so
/// ranges can be consumed in parallel.
class TupleSpace {
 public:
  /// Throws InputError if |C|^k exceeds `cap`.
  TupleSpace(std::size_t candidates, std::size_t k, std::uint64_t cap = kDefaultTupleCap);

  std::size_t candidates() const noexcept { return candidates_; }
  std::size_t k() const noexcept { return k_; }
  std::uint64_t size() const noexcept { return size_; }

  std::vector<std::size_t> operator[](std::uint64_t index) const;

 private:
  std::size_t candidates_ = 0;
  std::size_t k_ = 0;
  std::uint64_t size_ = 0;
};

TupleSpace enumerate_tuples(std::size_t candidates, std::size_t k,
                            std::uint64_t cap = kDefaultTupleCap);

/// Source of candidate k-tuples of centers. Tuples index into candidates().
class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;

  virtual const std::vector<CenterRef>& candidates() const = 0;
  virtual std::size_t k() const = 0;
  virtual std::uint64_t tuple_count() const = 0;
  virtual std::vector<std::size_t> tuple(std::uint64_t index) const = 0;
  virtual std::uint64_t seed() const = 0;
};

/// Generator over the full product C^k of a fixed candidate list.
class ProductGenerator : public CandidateGenerator {
 public:
  ProductGenerator(std::vector<CenterRef> candidates, std::size_t k, std::uint64_t seed,
                   std::uint64_t cap = kDefaultTupleCap);

  const std::vector<CenterRef>& candidates() const override { return candidates_; }
  std::size_t k() const override { return space_.k(); }
  std::uint64_t tuple_count() const override { return space_.size(); }
  std::vector<std::size_t> tuple(std::uint64_t index) const override { return space_[index]; }
  std::uint64_t seed() const override { return seed_; }

 private:
  std::vector<CenterRef> candidates_;
  TupleSpace space_;
  std::uint64_t seed_ = 0;
};

/// S^k over the farthest-point traversal seeds.
ProductGenerator gonzalez_generator(const DistanceOracle& oracle, std::size_t k,
                                    std::size_t first_index,
                                    std::uint64_t cap = kDefaultTupleCap);

struct BicriteriaCenters {
  std::vector<CenterRef> centers;
  /// Unconstrained cost of assigning every point to its nearest center.
  double cost = 0;
};

/// Distance-proportional sequential oversampling: the first center uniform,
/// each further one drawn with probability proportional to the current
/// nearest-center distance (squared for means), until factor * k draws or
/// every point is a center. Short lists are padded with unused points to k.
/// For Euclidean means a final sweep moves each center to the centroid of its
/// nearest-point cell. Deterministic for a fixed seed (std::mt19937_64).
BicriteriaCenters bicriteria_centers(const DistanceOracle& oracle, std::size_t k,
                                     std::uint64_t seed, Objective objective,
                                     std::size_t factor = 8);

ProductGenerator bicriteria_generator(const DistanceOracle& oracle, std::size_t k,
                                      std::uint64_t seed, Objective objective,
                                      std::size_t factor = 8,
                                      std::uint64_t cap = kDefaultTupleCap);

/// Unconstrained clustering cost of a center set (nearest-center assignment).
double unconstrained_cost(const DistanceOracle& oracle, std::span<const CenterRef> centers,
                          Objective objective);

}  // namespace bclust
