#include "deocc/maskcomp/template_bank.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "deocc/core/errors.hpp"
#include "deocc/core/rng.hpp"

namespace deocc::maskcomp {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

double assign(const Points& points, const Points& centers, std::vector<int>& assignment) {
  double objective = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = squared_distance(points[i], centers[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    assignment[i] = best;
    objective += best_d;
  }
  return objective;
}

void update_centers(const Points& points, const std::vector<int>& assignment, Points& centers) {
  const std::size_t dim = points.front().size();
  Points sums(centers.size(), std::vector<double>(dim, 0.0));
  std::vector<int> counts(centers.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& s = sums[assignment[i]];
    for (std::size_t d = 0; d < dim; ++d) s[d] += points[i][d];
    ++counts[assignment[i]];
  }
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / counts[c];
  }
}

void check_input(const Points& points, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (static_cast<std::size_t>(k) > points.size()) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the number of points (" +
                          std::to_string(points.size()) + ")");
  }
  for (const auto& p : points) {
    if (p.size() != points.front().size()) throw ValidationError("points differ in dimension");
  }
}

}  // namespace

Points kmeans_plus_plus_seeds(const Points& points, int k, std::uint64_t seed) {
  check_input(points, k);
  Rng rng(seed);
  Points centers;
  centers.push_back(points[uniform_int(rng, 0, static_cast<int>(points.size()) - 1)]);
  std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points[i], centers.back()));
      total += nearest[i];
    }
    std::size_t pick = 0;
    if (total > 0) {
      double u = uniform(rng, 0.0, total);
      for (pick = 0; pick + 1 < points.size(); ++pick) {
        if (u < nearest[pick]) break;
        u -= nearest[pick];
      }
      // Rounding can leave u on a zero-weight point; step to a positive one.
      while (nearest[pick] == 0 && pick > 0) --pick;
    } else {
      pick = uniform_int(rng, 0, static_cast<int>(points.size()) - 1);
    }
    centers.push_back(points[pick]);
  }
  return centers;
}

KMeansResult lloyd(const Points& points, Points initial, int max_iterations, double relative_tolerance) {
  check_input(points, static_cast<int>(initial.size()));
  KMeansResult r;
  r.centers = std::move(initial);
  r.assignment.assign(points.size(), -1);
  std::vector<int> previous;
  for (int it = 0; it < max_iterations; ++it) {
    previous = r.assignment;
    const double j = assign(points, r.centers, r.assignment);
    r.objective_history.push_back(j);
    r.iterations = it + 1;
    if (it > 0) {
      const double prev = r.objective_history[it - 1];
      const bool stable = previous == r.assignment;
      if (stable || prev - j <= relative_tolerance * prev) break;
    }
    update_centers(points, r.assignment, r.centers);
  }
  update_centers(points, r.assignment, r.centers);
  r.objective = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    r.objective += squared_distance(points[i], r.centers[r.assignment[i]]);
  }
  return r;
}

KMeansResult kmeans(const Points& points, int k, std::uint64_t seed, int max_iterations,
                    double relative_tolerance) {
  return lloyd(points, kmeans_plus_plus_seeds(points, k, seed), max_iterations, relative_tolerance);
}

void TemplateBank::validate() const {
  if (count < 1) throw ValidationError("template bank is empty");
  if (templates.size() != static_cast<std::size_t>(count) * resolution.area()) {
    throw ValidationError("template buffer does not match count x resolution");
  }
  for (float v : templates) {
    if (!(v >= 0.0f && v <= 1.0f)) throw ValidationError("template value outside [0,1]");
  }
}

TemplateBank build_template_bank(const std::vector<BinaryMask>& masks, int k, std::uint64_t seed,
                                 Size2 resolution) {
  if (static_cast<std::size_t>(std::max(k, 1)) > masks.size()) {
    throw ValidationError("template count k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(masks.size()) + " available masks");
  }
  Points points;
  points.reserve(masks.size());
  for (const auto& m : masks) {
    const BinaryMask r = resize_nearest(m, resolution);
    points.emplace_back(r.data().begin(), r.data().end());
  }
  const KMeansResult result = kmeans(points, k, seed);
  TemplateBank bank;
  bank.count = k;
  bank.resolution = resolution;
  bank.templates.reserve(static_cast<std::size_t>(k) * resolution.area());
  for (const auto& c : result.centers) {
    for (double v : c) bank.templates.push_back(static_cast<float>(v));
  }
  return bank;
}

}  // namespace deocc::maskcomp
