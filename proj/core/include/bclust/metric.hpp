#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bclust {

enum class Objective { center, median, means };

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

/// n points in R^d, stored row-major. Immutable once built.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> coords);

  static PointSet from_rows(std::span<const std::vector<double>> rows);

  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }

  const std::vector<double>& coordinates() const noexcept { return coords_; }

 private:
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

double squared_euclidean(std::span<const double> a, std::span<const double> b);
double euclidean(std::span<const double> a, std::span<const double> b);

/// A cluster center: either an input point (by index) or an explicit
/// coordinate vector. Coordinate centers require a Euclidean oracle.
using CenterRef = std::variant<std::size_t, std::vector<double>>;

/// Distance access to the input. Euclidean oracles own coordinates; matrix
/// oracles hold a full symmetric n x n table; callback oracles compute
/// distances on demand. Copies share the underlying data.
class DistanceOracle {
 public:
  enum class Kind { euclidean, matrix, callback };
  using Callback = std::function<double(std::size_t, std::size_t)>;

  static DistanceOracle euclidean(PointSet points);
  /// Row-major n x n entries. Symmetry, zero diagonal and nonnegativity are
  /// enforced; the triangle inequality is not.
  static DistanceOracle matrix(std::size_t n, std::vector<double> entries);
  static DistanceOracle callback(std::size_t n, Callback fn);

  Kind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return size_; }

  /// Null unless kind() == euclidean.
  const PointSet* points() const noexcept { return points_.get(); }

  double distance(std::size_t i, std::size_t j) const;
  /// Avoids the square root for Euclidean inputs.
  double squared_distance(std::size_t i, std::size_t j) const;

  double distance_to(std::size_t i, const CenterRef& center) const;
  double squared_distance_to(std::size_t i, const CenterRef& center) const;

  /// Throws InputError if the center cannot be used with this oracle.
  void check_center(const CenterRef& center) const;

 private:
  Kind kind_ = Kind::euclidean;
  std::size_t size_ = 0;
  std::shared_ptr<const PointSet> points_;
  std::shared_ptr<const std::vector<double>> matrix_;
  Callback callback_;
};

/// Dense row-major matrix of point-to-center distances (n rows, one column
/// per center).
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::size_t rows, std::size_t cols);
  DistanceTable(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return values_[i * cols_ + j];
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }

  /// A new table made of the given columns, in order (repeats allowed).
  DistanceTable select_columns(std::span<const std::size_t> columns) const;

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

DistanceTable distance_table(const DistanceOracle& oracle,
                             std::span<const CenterRef> centers,
                             std::size_t threads = 1);

struct DistanceRange {
  double r_min = 0;  // smallest strictly positive entry
  double r_max = 0;
};

/// std::nullopt marks the degenerate case where every entry is zero.
std::optional<DistanceRange> extreme_distances(const DistanceTable& table);

struct BalanceBounds {
  std::size_t lower = 1;
  std::size_t upper = 1;

  /// Enforces 1 <= L <= floor(n/k) <= ceil(n/k) <= U <= n.
  /// k == 0 or k > n is an InputError; a broken bound chain is an
  /// InfeasibleBoundsError.
  void validate(std::size_t n, std::size_t k) const;

  bool admits(std::size_t size) const noexcept {
    return lower <= size && size <= upper;
  }
};

class BalancedAssignment {
 public:
  BalancedAssignment() = default;
  BalancedAssignment(std::vector<std::size_t> labels, std::size_t k);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t k() const noexcept { return sizes_.size(); }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

  bool within(const BalanceBounds& bounds) const noexcept;
  /// Throws InvariantError naming the first cluster out of bounds.
  void check_within(const BalanceBounds& bounds) const;

  /// Labels i -> i mod k; sizes differ by at most one.
  static BalancedAssignment round_robin(std::size_t n, std::size_t k);

 private:
  std::vector<std::size_t> labels_;
  std::vector<std::size_t> sizes_;
};

/// max / sum / sum of squares of point-to-assigned-center distances.
double evaluate_objective(const BalancedAssignment& assignment,
                          std::span<const CenterRef> centers,
                          const DistanceOracle& oracle, Objective objective);

/// Same, reading distances from a table whose column j belongs to cluster j.
double evaluate_objective(const BalancedAssignment& assignment,
                          const DistanceTable& table, Objective objective);

std::string describe(const CenterRef& center);

}  // namespace bclust
