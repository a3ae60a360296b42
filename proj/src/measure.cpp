#include "rwot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rwot {

namespace {

void check_finite_point(const Point& x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw BadInput("non-finite coordinate in point");
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, std::vector<double> weights) {
  if (points.size() != weights.size())
    throw BadInput("points/weights length mismatch");
  if (points.empty()) throw EmptyInput("measure needs at least one atom");
  const std::size_t d = points[0].size();
  if (d == 0) throw BadInput("zero-dimensional points");

  // Merge duplicates by exact coordinate equality, preserving first-seen order.
  std::map<Point, std::size_t> seen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw InvalidDimensions("inconsistent point dimensions");
    check_finite_point(points[i]);
    if (!std::isfinite(weights[i]) || weights[i] < 0.0)
      throw BadInput("weights must be finite and nonnegative");
    auto it = seen.find(points[i]);
    if (it == seen.end()) {
      seen.emplace(points[i], points_.size());
      points_.push_back(std::move(points[i]));
      weights_.push_back(weights[i]);
    } else {
      weights_[it->second] += weights[i];
    }
  }
  mass_ = 0.0;
  for (double w : weights_) mass_ += w;
}

bool DiscreteMeasure::is_probability() const { return std::abs(mass_ - 1.0) <= 1e-9; }

DiscreteMeasure DiscreteMeasure::scaled(double a) const {
  if (a < 0.0) throw BadInput("negative scale");
  std::vector<double> w(weights_);
  for (double& x : w) x *= a;
  return DiscreteMeasure(points_, w);
}

double GroundCost::distance(const Point& x, const Point& y) const {
  if (x.size() != y.size()) throw InvalidDimensions("point dimension mismatch");
  if (metric == Metric::Euclidean) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - y[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  // ProductMax: max of the Euclidean distances of the two blocks.
  if (split == 0 || split >= x.size())
    throw InvalidDimensions("bad product split dimension");
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < split; ++i) {
    const double d = x[i] - y[i];
    s1 += d * d;
  }
  for (std::size_t i = split; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s2 += d * d;
  }
  return std::sqrt(std::max(s1, s2));
}

double GroundCost::operator()(const Point& x, const Point& y) const {
  if (p < 1.0) throw BadInput("exponent p must be >= 1");
  return std::pow(distance(x, y), p);
}

DiscreteMeasure empirical(const std::vector<Point>& samples) {
  if (samples.empty()) throw EmptyInput("empirical: no samples");
  const double w = 1.0 / static_cast<double>(samples.size());
  return DiscreteMeasure(samples, std::vector<double>(samples.size(), w));
}

namespace {

// Union-support weight table: for each distinct point, (weight in mu, weight in nu).
std::map<Point, std::pair<double, double>> union_weights(const DiscreteMeasure& mu,
                                                         const DiscreteMeasure& nu) {
  std::map<Point, std::pair<double, double>> tab;
  for (std::size_t i = 0; i < mu.size(); ++i) tab[mu.point(i)].first += mu.weight(i);
  for (std::size_t j = 0; j < nu.size(); ++j) tab[nu.point(j)].second += nu.weight(j);
  return tab;
}

}  // namespace

double tv_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (std::abs(mu.mass() - nu.mass()) > 1e-9)
    throw MassMismatch("tv_distance requires equal masses");
  double s = 0.0;
  for (const auto& [pt, w] : union_weights(mu, nu)) s += std::abs(w.first - w.second);
  return 0.5 * s;
}

DiscreteMeasure measure_min(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<Point> pts;
  std::vector<double> w;
  for (const auto& [pt, ww] : union_weights(mu, nu)) {
    const double m = std::min(ww.first, ww.second);
    if (m > 0.0) {
      pts.push_back(pt);
      w.push_back(m);
    }
  }
  if (pts.empty()) return DiscreteMeasure();  // zero measure: no shared mass
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure measure_sub(const DiscreteMeasure& mu, const DiscreteMeasure& kappa) {
  auto tab = union_weights(mu, kappa);
  std::vector<Point> pts;
  std::vector<double> w;
  for (const auto& [pt, ww] : tab) {
    const double r = ww.first - ww.second;
    if (r < -1e-12) throw BadInput("measure_sub: subtrahend not dominated");
    if (r > 1e-15) {
      pts.push_back(pt);
      w.push_back(r);
    }
  }
  if (pts.empty()) return DiscreteMeasure();
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure measure_mix(const DiscreteMeasure& mu, double a,
                            const DiscreteMeasure& nu, double b) {
  std::vector<Point> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    pts.push_back(mu.point(i));
    w.push_back(a * mu.weight(i));
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    pts.push_back(nu.point(j));
    w.push_back(b * nu.weight(j));
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

// --- File IO ---------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DiscreteMeasure read_measure_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw BadInput(path + ": " + e.what());
  }
  if (!j.contains("points") || !j.contains("weights"))
    throw BadInput(path + ": expected keys 'points' and 'weights'");
  std::vector<Point> pts;
  for (const auto& row : j.at("points")) {
    Point x;
    for (const auto& v : row) {
      if (!v.is_number()) throw BadInput(path + ": non-numeric coordinate");
      x.push_back(v.get<double>());
    }
    check_finite_point(x);
    pts.push_back(std::move(x));
  }
  std::vector<double> w;
  for (const auto& v : j.at("weights")) {
    if (!v.is_number()) throw BadInput(path + ": non-numeric weight");
    const double wi = v.get<double>();
    if (!std::isfinite(wi)) throw BadInput(path + ": non-finite weight");
    w.push_back(wi);
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure read_measure_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open " + path);
  std::vector<Point> pts;
  std::vector<double> w;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        // allow trailing whitespace only
        for (std::size_t k = used; k < cell.size(); ++k)
          if (!std::isspace(static_cast<unsigned char>(cell[k])))
            throw std::invalid_argument("trailing junk");
        if (!std::isfinite(v))
          throw BadInput(path + ":" + std::to_string(lineno) + ":" + std::to_string(col) +
                         ": non-finite value");
        vals.push_back(v);
      } catch (const std::logic_error&) {
        throw BadInput(path + ":" + std::to_string(lineno) + ":" + std::to_string(col) +
                       ": not a number: '" + cell + "'");
      }
    }
    if (vals.size() < 2)
      throw BadInput(path + ":" + std::to_string(lineno) + ": need w,x1,...,xd");
    w.push_back(vals[0]);
    pts.emplace_back(vals.begin() + 1, vals.end());
  }
  if (pts.empty()) throw EmptyInput(path + ": no rows");
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure read_measure_auto(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "csv") return read_measure_csv(path);
  return read_measure_json(path);
}

void write_measure_json(const DiscreteMeasure& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw BadInput("cannot open " + path + " for writing");
  out << "{\"points\": [";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out << ", ";
    out << "[";
    const Point& x = m.point(i);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k) out << ", ";
      out << format_double(x[k]);
    }
    out << "]";
  }
  out << "], \"weights\": [";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out << ", ";
    out << format_double(m.weight(i));
  }
  out << "]}\n";
}

}  // namespace rwot
