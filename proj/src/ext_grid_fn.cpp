#include "tkray/ext_grid_fn.hpp"

#include <vector>

namespace tkray {

double convexity_defect(const ExtGridFn& f) {
  double worst = 0.0;
  for (int i = f.first_finite + 1; i < f.last_finite; ++i) {
    double second = f.v[i - 1] - 2.0 * f.v[i] + f.v[i + 1];
    if (-second > worst) worst = -second;
  }
  return worst;
}

Array lower_hull(const Grid1D& grid, const Array& vals) {
  require(static_cast<int>(vals.size()) == grid.nodes(), "lower_hull: size mismatch");
  std::vector<int> finite;
  finite.reserve(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    require(!std::isnan(vals[i]) && vals[i] != -kInf, "lower_hull: bad value");
    if (vals[i] < kInf) finite.push_back(i);
  }
  require(!finite.empty(), "lower_hull: no finite values");

  // Monotone chain over (index, value); uniform spacing lets the turn test
  // run in index space.  Collinear middles are dropped, which makes the hull
  // (and the interpolated fill) reproducible under re-application.
  std::vector<int> hull;
  hull.reserve(finite.size());
  for (int i : finite) {
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], m = hull[hull.size() - 1];
      // pop m unless slope(a,m) < slope(m,i)
      double lhs = (vals[m] - vals[a]) * static_cast<double>(i - m);
      double rhs = (vals[i] - vals[m]) * static_cast<double>(m - a);
      if (lhs < rhs) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }

  Array out = Array::Constant(vals.size(), kInf);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    int a = hull[k], b = hull[k + 1];
    out[a] = vals[a];
    double dv = vals[b] - vals[a];
    for (int j = a + 1; j < b; ++j)
      out[j] = vals[a] + dv * (static_cast<double>(j - a) / static_cast<double>(b - a));
  }
  out[hull.back()] = vals[hull.back()];
  return out;
}

ExtGridFn convex_envelope(const ExtGridFn& f) {
  return ExtGridFn(f.grid, lower_hull(f.grid, f.v));
}

Array min_raw(const Array& a, const Array& b) {
  require(a.size() == b.size(), "min_raw: size mismatch");
  return a.min(b);
}

ExtGridFn shifted_fn(const ExtGridFn& f, double c) {
  Array out = f.v;
  for (int i = f.first_finite; i <= f.last_finite; ++i) out[i] += c;
  return ExtGridFn(f.grid, std::move(out));
}

}  // namespace tkray
