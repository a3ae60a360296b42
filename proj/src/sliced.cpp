#include "rwot/sliced.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "rwot/parallel.hpp"

namespace rwot {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t frame_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

// Thin QR by modified Gram-Schmidt; the column norms (R's diagonal) are
// positive by construction, which is the sign convention making the factor
// Haar for a Gaussian input.
ProjectionFrame orthonormalize(std::size_t d, std::size_t k, std::vector<double> a) {
  ProjectionFrame f;
  f.d = d;
  f.k = k;
  f.u = std::move(a);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double dot = 0.0;
      for (std::size_t r = 0; r < d; ++r) dot += f.u[r * k + c] * f.u[r * k + prev];
      for (std::size_t r = 0; r < d; ++r) f.u[r * k + c] -= dot * f.u[r * k + prev];
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < d; ++r) norm += f.u[r * k + c] * f.u[r * k + c];
    norm = std::sqrt(norm);
    if (norm < 1e-12)
      throw NumericalFailure("rank-deficient matrix in frame orthonormalization");
    for (std::size_t r = 0; r < d; ++r) f.u[r * k + c] /= norm;
  }
  return f;
}

Point apply_frame(const ProjectionFrame& f, const Point& x) {
  Point y(f.k, 0.0);
  for (std::size_t c = 0; c < f.k; ++c)
    for (std::size_t r = 0; r < f.d; ++r) y[c] += f.u[r * f.k + c] * x[r];
  return y;
}

double robust_value_p(const DiscreteMeasure& pm, const DiscreteMeasure& pn, double p,
                      double eps) {
  return augmented_solve(pm, pn, GroundCost(p), eps, eps, false).value_p;
}

// Projection that remembers one representative original atom per merged
// projected atom, for the Danskin gradient of the max-sliced ascent.
struct ProjectedWithReps {
  DiscreteMeasure measure;
  std::vector<std::size_t> rep;  // merged index -> original index
};

ProjectedWithReps project_with_reps(const DiscreteMeasure& m, const ProjectionFrame& f) {
  ProjectedWithReps out;
  std::vector<Point> proj(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) proj[i] = apply_frame(f, m.point(i));
  out.measure = DiscreteMeasure(proj, m.weights());
  std::map<Point, std::size_t> first_original;
  for (std::size_t i = 0; i < m.size(); ++i)
    first_original.emplace(proj[i], i);
  out.rep.resize(out.measure.size());
  for (std::size_t a = 0; a < out.measure.size(); ++a)
    out.rep[a] = first_original.at(out.measure.point(a));
  return out;
}

}  // namespace

ProjectionFrame sample_frame(std::size_t d, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > d) throw InvalidDimensions("sample_frame needs 1 <= k <= d");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> a(d * k);
  for (double& v : a) v = gauss(rng);
  return orthonormalize(d, k, std::move(a));
}

DiscreteMeasure project(const DiscreteMeasure& measure, const ProjectionFrame& frame) {
  if (measure.dim() != frame.d) throw InvalidDimensions("project: dimension mismatch");
  std::vector<Point> pts(measure.size());
  for (std::size_t i = 0; i < measure.size(); ++i)
    pts[i] = apply_frame(frame, measure.point(i));
  return DiscreteMeasure(std::move(pts), measure.weights());
}

namespace {

SlicedEstimate sliced_average(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              double p, std::size_t k, double eps,
                              const SlicedConfig& config) {
  const std::size_t count = config.num_projections;
  if (count == 0) throw BadInput("average mode needs num_projections >= 1");
  std::vector<double> vp(count);
  parallel_for(count, config.threads, [&](std::size_t t) {
    const ProjectionFrame f = sample_frame(mu.dim(), k, frame_seed(config.seed, t));
    vp[t] = robust_value_p(project(mu, f), project(nu, f), p, eps);
  });
  double mean = 0.0;
  for (double v : vp) mean += v;
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (double v : vp) var += (v - mean) * (v - mean);
  var = count > 1 ? var / static_cast<double>(count - 1) : 0.0;
  const double se_vp = std::sqrt(var / static_cast<double>(count));

  SlicedEstimate est;
  est.num_projections = count;
  est.seed = config.seed;
  est.value = mean <= 0.0 ? 0.0 : std::pow(mean, 1.0 / p);
  // First-order delta method: d/dm m^(1/p) = m^(1/p-1)/p.
  est.std_error = mean > 0.0 ? se_vp * std::pow(mean, 1.0 / p - 1.0) / p : se_vp;
  return est;
}

SlicedEstimate sliced_max(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                          std::size_t k, double eps, const SlicedConfig& config) {
  const std::size_t d = mu.dim();
  const int restarts = std::max(1, config.restarts);

  struct RestartResult {
    double vp = -1.0;
    ProjectionFrame frame;
  };
  std::vector<RestartResult> results(restarts);

  parallel_for(static_cast<std::size_t>(restarts), config.threads, [&](std::size_t r) {
    ProjectionFrame u = sample_frame(d, k, frame_seed(config.seed, 1000003 + r));
    auto value_at = [&](const ProjectionFrame& f) {
      return robust_value_p(project(mu, f), project(nu, f), p, eps);
    };
    double val = value_at(u);
    double step = config.step0;
    for (int t = 0; t < config.steps && step > 1e-8; ++t) {
      // Danskin direction from the current optimal plan.
      const auto pm = project_with_reps(mu, u);
      const auto pn = project_with_reps(nu, u);
      const TransportSolution sol = augmented_solve(pm.measure, pn.measure,
                                                    GroundCost(p), eps, eps, false);
      std::vector<double> grad(d * k, 0.0);
      for (const PlanEntry& e : sol.plan) {
        const Point& x = mu.point(pm.rep[e.i]);
        const Point& y = nu.point(pn.rep[e.j]);
        Point h(k, 0.0);
        double nh2 = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          for (std::size_t rr = 0; rr < d; ++rr)
            h[c] += u.u[rr * k + c] * (x[rr] - y[rr]);
          nh2 += h[c] * h[c];
        }
        const double nh = std::sqrt(nh2);
        if (nh <= 1e-300) continue;
        const double coef = e.mass * p * std::pow(nh, p - 2.0);
        for (std::size_t rr = 0; rr < d; ++rr)
          for (std::size_t c = 0; c < k; ++c)
            grad[rr * k + c] += coef * (x[rr] - y[rr]) * h[c];
      }
      std::vector<double> trial(u.u);
      for (std::size_t idx = 0; idx < d * k; ++idx) trial[idx] += step * grad[idx];
      ProjectionFrame next;
      try {
        next = orthonormalize(d, k, std::move(trial));
      } catch (const NumericalFailure&) {
        step *= 0.5;
        continue;
      }
      const double next_val = value_at(next);
      if (next_val > val) {
        u = std::move(next);
        val = next_val;
      } else {
        step *= 0.5;
      }
    }
    results[r].vp = val;
    results[r].frame = std::move(u);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].vp > results[best].vp) best = r;

  SlicedEstimate est;
  est.num_projections = restarts;
  est.seed = config.seed;
  est.value = results[best].vp <= 0.0 ? 0.0 : std::pow(results[best].vp, 1.0 / p);
  est.frames.push_back(std::move(results[best].frame));
  return est;
}

}  // namespace

SlicedEstimate sliced_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               double p, std::size_t k, double eps, SlicedMode mode,
                               const SlicedConfig& config) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidRadius("radius must lie in [0,1)");
  if (mu.dim() != nu.dim()) throw InvalidDimensions("sliced_distance: dimension mismatch");
  if (k == 0 || k > mu.dim()) throw InvalidDimensions("sliced_distance needs 1 <= k <= d");
  return mode == SlicedMode::Average ? sliced_average(mu, nu, p, k, eps, config)
                                     : sliced_max(mu, nu, p, k, eps, config);
}

SlicedTriangleReport sliced_triangle_check(const DiscreteMeasure& mu,
                                           const DiscreteMeasure& kappa,
                                           const DiscreteMeasure& nu, double p,
                                           std::size_t k, double eps1, double eps2,
                                           const SlicedConfig& config) {
  const std::size_t count = std::max<std::size_t>(1, config.num_projections);
  std::vector<double> lhs(count), a(count), b(count);
  parallel_for(count, config.threads, [&](std::size_t t) {
    const ProjectionFrame f = sample_frame(mu.dim(), k, frame_seed(config.seed, t));
    const DiscreteMeasure pm = project(mu, f), pk = project(kappa, f), pn = project(nu, f);
    lhs[t] = robust_value_p(pm, pn, p, eps1 + eps2);
    a[t] = robust_value_p(pm, pk, p, eps1);
    b[t] = robust_value_p(pk, pn, p, eps2);
  });
  auto mean_root = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    s /= static_cast<double>(v.size());
    return s <= 0.0 ? 0.0 : std::pow(s, 1.0 / p);
  };
  auto max_root = [&](const std::vector<double>& v) {
    const double s = *std::max_element(v.begin(), v.end());
    return s <= 0.0 ? 0.0 : std::pow(s, 1.0 / p);
  };
  SlicedTriangleReport rep;
  rep.avg_lhs = mean_root(lhs);
  rep.avg_rhs = mean_root(a) + mean_root(b);
  rep.max_lhs = max_root(lhs);
  rep.max_rhs = max_root(a) + max_root(b);
  return rep;
}

}  // namespace rwot
