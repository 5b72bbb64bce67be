#include "himap/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "himap/error.hpp"
#include "himap/parallel.hpp"

namespace himap {
namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

void check_same_dim(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != b.dim()) {
    throw DomainError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
  }
  if (a.empty() || b.empty()) throw DomainError("transport between empty clouds");
}

// Stable log(sum exp(x_k)).
double log_sum_exp(const double* x, std::size_t n) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) hi = std::max(hi, x[k]);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += std::exp(x[k] - hi);
  return hi + std::log(acc);
}

}  // namespace

CostMatrix squared_distances(const PointCloud& a, const PointCloud& b) {
  check_same_dim(a, b);
  CostMatrix c;
  c.rows = a.size();
  c.cols = b.size();
  c.values.resize(c.rows * c.cols);
  const std::size_t d = a.dim();
  parallel_for(c.rows, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto ai = a.row(i);
      for (std::size_t j = 0; j < c.cols; ++j) {
        const auto bj = b.row(j);
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = ai[k] - bj[k];
          s += diff * diff;
        }
        c.values[i * c.cols + j] = s;
      }
    }
  }, 128);
  return c;
}

Assignment solve_assignment(const CostMatrix& cost) {
  if (cost.rows != cost.cols) throw DomainError("assignment needs a square cost matrix");
  const std::size_t n = cost.rows;
  Assignment result;
  if (n == 0) return result;

  std::vector<std::size_t> row_sol(n, kUnassigned);
  std::vector<std::size_t> col_sol(n, kUnassigned);
  std::vector<double> v(n);  // column prices

  // Column reduction: each column goes to its cheapest row if still free.
  for (std::size_t j = n; j-- > 0;) {
    std::size_t imin = 0;
    double best = cost(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      if (cost(i, j) < best) {
        best = cost(i, j);
        imin = i;
      }
    }
    v[j] = best;
    if (row_sol[imin] == kUnassigned) {
      row_sol[imin] = j;
      col_sol[j] = imin;
    }
  }

  // Reduction transfer from assigned rows; collect free rows.
  std::vector<std::size_t> free_rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (row_sol[i] == kUnassigned) {
      free_rows.push_back(i);
      continue;
    }
    const std::size_t j1 = row_sol[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != j1) best = std::min(best, cost(i, j) - v[j]);
    }
    if (std::isfinite(best)) v[j1] -= best;
  }

  // Shortest augmenting path (Dijkstra on reduced costs) from each free row.
  std::vector<double> dist(n);
  std::vector<std::size_t> pred(n);
  std::vector<char> ready(n);
  std::vector<std::size_t> scanned;
  scanned.reserve(n);
  for (const std::size_t start : free_rows) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[j] = cost(start, j) - v[j];
      pred[j] = start;
      ready[j] = 0;
    }
    scanned.clear();
    std::size_t sink = kUnassigned;
    double mu = 0.0;
    while (sink == kUnassigned) {
      std::size_t jmin = kUnassigned;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (!ready[j] && (jmin == kUnassigned || dist[j] < best)) {
          best = dist[j];
          jmin = j;
        }
      }
      mu = best;
      if (col_sol[jmin] == kUnassigned) {
        sink = jmin;
        break;
      }
      ready[jmin] = 1;
      scanned.push_back(jmin);
      const std::size_t i = col_sol[jmin];
      const double offset = mu - (cost(i, jmin) - v[jmin]);
      for (std::size_t j = 0; j < n; ++j) {
        if (ready[j]) continue;
        const double alt = offset + cost(i, j) - v[j];
        if (alt < dist[j]) {
          dist[j] = alt;
          pred[j] = i;
        }
      }
    }
    for (const std::size_t j : scanned) v[j] += dist[j] - mu;
    // Flip the alternating path back to the free row.
    std::size_t j = sink;
    while (true) {
      const std::size_t i = pred[j];
      col_sol[j] = i;
      const std::size_t previous = row_sol[i];
      row_sol[i] = j;
      if (i == start) break;
      j = previous;
    }
  }

  result.row_to_col = std::move(row_sol);
  for (std::size_t i = 0; i < n; ++i) result.total_cost += cost(i, result.row_to_col[i]);
  return result;
}

double w2_exact_assignment(const PointCloud& a, const PointCloud& b) {
  check_same_dim(a, b);
  if (a.size() != b.size()) {
    throw DomainError("exact assignment needs equal sizes, got " + std::to_string(a.size()) +
                      " and " + std::to_string(b.size()));
  }
  if (a.size() > kMaxAssignmentSize) {
    throw ResourceError("assignment size " + std::to_string(a.size()) + " exceeds cap " +
                        std::to_string(kMaxAssignmentSize));
  }
  const Assignment m = solve_assignment(squared_distances(a, b));
  return std::sqrt(std::max(0.0, m.total_cost) / static_cast<double>(a.size()));
}

double w2_exact_1d(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != 1 || b.dim() != 1) throw DomainError("w2_exact_1d needs one-dimensional clouds");
  if (a.size() != b.size()) throw DomainError("w2_exact_1d needs equal sizes");
  auto x = a.column(0);
  auto y = b.column(0);
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s / static_cast<double>(x.size()));
}

SinkhornResult sinkhorn_cost(const PointCloud& a, const PointCloud& b, const SinkhornOptions& options) {
  check_same_dim(a, b);
  const CostMatrix c = squared_distances(a, b);
  const std::size_t n = c.rows;
  const std::size_t m = c.cols;

  SinkhornResult result;
  double eps = options.epsilon;
  if (!(eps > 0.0)) {
    double mean = 0.0;
    for (double v : c.values) mean += v;
    mean /= static_cast<double>(c.values.size());
    eps = 0.01 * mean;
  }
  result.epsilon = eps;
  if (!(eps > 0.0)) {
    // All points coincide: every coupling has zero cost.
    result.converged = true;
    return result;
  }

  const double log_a = -std::log(static_cast<double>(n));
  const double log_b = -std::log(static_cast<double>(m));
  std::vector<double> f(n, 0.0);
  std::vector<double> g(m, 0.0);
  std::vector<double> scratch(std::max(n, m));

  auto update_f = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) scratch[j] = (g[j] - c(i, j)) / eps;
      f[i] = eps * (log_a - log_sum_exp(scratch.data(), m));
    }
  };
  auto update_g = [&] {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) scratch[i] = (f[i] - c(i, j)) / eps;
      g[j] = eps * (log_b - log_sum_exp(scratch.data(), n));
    }
  };
  // After a g-update columns are exact; the row marginal carries the error.
  auto row_violation = [&] {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) row += std::exp((f[i] + g[j] - c(i, j)) / eps);
      v += std::abs(row - std::exp(log_a));
    }
    return v;
  };

  result.marginal_violation = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= std::max(1, options.max_iterations); ++it) {
    update_f();
    update_g();
    result.iterations = it;
    if (it % 10 == 0 || it == options.max_iterations) {
      result.marginal_violation = row_violation();
      if (result.marginal_violation < options.tolerance) {
        result.converged = true;
        break;
      }
    }
  }

  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) cost += std::exp((f[i] + g[j] - c(i, j)) / eps) * c(i, j);
  }
  result.cost = cost;
  return result;
}

SinkhornResult sinkhorn_cost(const PointCloud& a, const PointCloud& b, double epsilon) {
  SinkhornOptions opts;
  opts.epsilon = epsilon;
  return sinkhorn_cost(a, b, opts);
}

}  // namespace himap
