#include "bclust/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bclust/errors.hpp"
#include "bclust/parallel.hpp"

namespace bclust {

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::center: return "center";
    case Objective::median: return "median";
    case Objective::means: return "means";
  }
  return "unknown";
}

Objective parse_objective(std::string_view name) {
  if (name == "center") return Objective::center;
  if (name == "median") return Objective::median;
  if (name == "means") return Objective::means;
  throw InputError("objective: expected one of center|median|means, got '" +
                   std::string(name) + "'");
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InputError("point set: dimension must be >= 1");
  if (coords_.empty() || coords_.size() % dim_ != 0)
    throw InputError("point set: coordinate count is not a positive multiple of the dimension");
  size_ = coords_.size() / dim_;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      std::ostringstream msg;
      msg << "point set: point " << i / dim_ << " coordinate " << i % dim_
          << " is not finite";
      throw InputError(msg.str());
    }
  }
}

PointSet PointSet::from_rows(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw InputError("point set: no points");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      std::ostringstream msg;
      msg << "point set: point " << i << " has " << rows[i].size()
          << " coordinates, expected " << dim;
      throw InputError(msg.str());
    }
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return PointSet(dim, std::move(coords));
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_euclidean(a, b));
}

DistanceOracle DistanceOracle::euclidean(PointSet points) {
  DistanceOracle oracle;
  oracle.kind_ = Kind::euclidean;
  oracle.size_ = points.size();
  oracle.points_ = std::make_shared<const PointSet>(std::move(points));
  return oracle;
}

DistanceOracle DistanceOracle::matrix(std::size_t n, std::vector<double> entries) {
  if (n == 0) throw InputError("distance matrix: empty");
  if (entries.size() != n * n) {
    std::ostringstream msg;
    msg << "distance matrix: expected " << n * n << " entries, got "
        << entries.size();
    throw InputError(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = entries[i * n + j];
      std::ostringstream where;
      where << "distance matrix: row " << i + 1 << ", column " << j + 1;
      if (!std::isfinite(v) || v < 0)
        throw InputError(where.str() + ": entry must be finite and >= 0");
      if (i == j && v != 0) throw InputError(where.str() + ": diagonal must be 0");
      if (j > i && v != entries[j * n + i])
        throw InputError(where.str() + ": matrix is not symmetric");
    }
  }
  DistanceOracle oracle;
  oracle.kind_ = Kind::matrix;
  oracle.size_ = n;
  oracle.matrix_ = std::make_shared<const std::vector<double>>(std::move(entries));
  return oracle;
}

DistanceOracle DistanceOracle::callback(std::size_t n, Callback fn) {
  if (n == 0) throw InputError("callback oracle: n must be >= 1");
  if (!fn) throw InputError("callback oracle: empty callback");
  DistanceOracle oracle;
  oracle.kind_ = Kind::callback;
  oracle.size_ = n;
  oracle.callback_ = std::move(fn);
  return oracle;
}

double DistanceOracle::distance(std::size_t i, std::size_t j) const {
  switch (kind_) {
    case Kind::euclidean: return bclust::euclidean((*points_)[i], (*points_)[j]);
    case Kind::matrix: return (*matrix_)[i * size_ + j];
    case Kind::callback: return i == j ? 0.0 : callback_(i, j);
  }
  return 0;
}

double DistanceOracle::squared_distance(std::size_t i, std::size_t j) const {
  if (kind_ == Kind::euclidean)
    return squared_euclidean((*points_)[i], (*points_)[j]);
  const double d = distance(i, j);
  return d * d;
}

void DistanceOracle::check_center(const CenterRef& center) const {
  if (const auto* index = std::get_if<std::size_t>(&center)) {
    if (*index >= size_) {
      std::ostringstream msg;
      msg << "center index " << *index << " out of range (n = " << size_ << ")";
      throw InputError(msg.str());
    }
    return;
  }
  const auto& coords = std::get<std::vector<double>>(center);
  if (kind_ != Kind::euclidean)
    throw InputError("coordinate centers need a Euclidean point set");
  if (coords.size() != points_->dim()) {
    std::ostringstream msg;
    msg << "center has dimension " << coords.size() << ", points have "
        << points_->dim();
    throw InputError(msg.str());
  }
}

double DistanceOracle::distance_to(std::size_t i, const CenterRef& center) const {
  if (const auto* index = std::get_if<std::size_t>(&center)) return distance(i, *index);
  return bclust::euclidean((*points_)[i], std::get<std::vector<double>>(center));
}

double DistanceOracle::squared_distance_to(std::size_t i,
                                           const CenterRef& center) const {
  if (const auto* index = std::get_if<std::size_t>(&center))
    return squared_distance(i, *index);
  return squared_euclidean((*points_)[i], std::get<std::vector<double>>(center));
}

DistanceTable::DistanceTable(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DistanceTable::DistanceTable(std::size_t rows, std::size_t cols,
                             std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_)
    throw InputError("distance table: value count does not match shape");
}

DistanceTable DistanceTable::select_columns(std::span<const std::size_t> columns) const {
  DistanceTable out(rows_, columns.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < columns.size(); ++j)
      out(i, j) = (*this)(i, columns[j]);
  return out;
}

DistanceTable distance_table(const DistanceOracle& oracle,
                             std::span<const CenterRef> centers,
                             std::size_t threads) {
  if (centers.empty()) throw InputError("distance table: no centers");
  for (const auto& c : centers) oracle.check_center(c);
  DistanceTable table(oracle.size(), centers.size());
  parallel_chunks(oracle.size(), threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i)
                      for (std::size_t j = 0; j < centers.size(); ++j)
                        table(i, j) = oracle.distance_to(i, centers[j]);
                  });
  return table;
}

std::optional<DistanceRange> extreme_distances(const DistanceTable& table) {
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0;
  for (double v : table.values()) {
    r_max = std::max(r_max, v);
    if (v > 0) r_min = std::min(r_min, v);
  }
  if (r_max == 0) return std::nullopt;
  return DistanceRange{r_min, r_max};
}

void BalanceBounds::validate(std::size_t n, std::size_t k) const {
  if (k == 0) throw InputError("k must be >= 1");
  if (k > n) {
    std::ostringstream msg;
    msg << "k = " << k << " exceeds the number of points n = " << n;
    throw InputError(msg.str());
  }
  const std::size_t floor_nk = n / k;
  const std::size_t ceil_nk = (n + k - 1) / k;
  if (lower < 1 || lower > floor_nk || upper < ceil_nk || upper > n) {
    std::ostringstream msg;
    msg << "bounds violate 1 <= L <= floor(n/k) <= ceil(n/k) <= U <= n: L = "
        << lower << ", U = " << upper << ", n = " << n << ", k = " << k
        << " (floor(n/k) = " << floor_nk << ", ceil(n/k) = " << ceil_nk << ")";
    throw InfeasibleBoundsError(msg.str());
  }
}

BalancedAssignment::BalancedAssignment(std::vector<std::size_t> labels, std::size_t k)
    : labels_(std::move(labels)), sizes_(k, 0) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= k) {
      std::ostringstream msg;
      msg << "assignment: point " << i << " has label " << labels_[i]
          << " outside [0, " << k << ")";
      throw InvariantError(msg.str());
    }
    ++sizes_[labels_[i]];
  }
}

bool BalancedAssignment::within(const BalanceBounds& bounds) const noexcept {
  return std::all_of(sizes_.begin(), sizes_.end(),
                     [&](std::size_t s) { return bounds.admits(s); });
}

void BalancedAssignment::check_within(const BalanceBounds& bounds) const {
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    if (!bounds.admits(sizes_[j])) {
      std::ostringstream msg;
      msg << "assignment: cluster " << j << " has " << sizes_[j]
          << " points, outside [" << bounds.lower << ", " << bounds.upper << "]";
      throw InvariantError(msg.str());
    }
  }
}

BalancedAssignment BalancedAssignment::round_robin(std::size_t n, std::size_t k) {
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % k;
  return BalancedAssignment(std::move(labels), k);
}

namespace {

double accumulate_objective(std::size_t n, Objective objective, auto&& dist_of) {
  double value = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dist_of(i);
    switch (objective) {
      case Objective::center: value = std::max(value, d); break;
      case Objective::median:
      case Objective::means: value += d; break;
    }
  }
  return value;
}

}  // namespace

double evaluate_objective(const BalancedAssignment& assignment,
                          std::span<const CenterRef> centers,
                          const DistanceOracle& oracle, Objective objective) {
  if (centers.size() != assignment.k())
    throw InputError("evaluate_objective: center count does not match k");
  if (assignment.size() != oracle.size())
    throw InputError("evaluate_objective: assignment size does not match n");
  for (const auto& c : centers) oracle.check_center(c);
  const auto& labels = assignment.labels();
  return accumulate_objective(assignment.size(), objective, [&](std::size_t i) {
    const auto& c = centers[labels[i]];
    return objective == Objective::means ? oracle.squared_distance_to(i, c)
                                         : oracle.distance_to(i, c);
  });
}

double evaluate_objective(const BalancedAssignment& assignment,
                          const DistanceTable& table, Objective objective) {
  if (table.cols() != assignment.k() || table.rows() != assignment.size())
    throw InputError("evaluate_objective: table shape does not match assignment");
  const auto& labels = assignment.labels();
  return accumulate_objective(assignment.size(), objective, [&](std::size_t i) {
    const double d = table(i, labels[i]);
    return objective == Objective::means ? d * d : d;
  });
}

std::string describe(const CenterRef& center) {
  std::ostringstream out;
  if (const auto* index = std::get_if<std::size_t>(&center)) {
    out << "#" << *index;
  } else {
    out << "(";
    const auto& c = std::get<std::vector<double>>(center);
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? ", " : "") << c[i];
    out << ")";
  }
  return out.str();
}

}  // namespace bclust
