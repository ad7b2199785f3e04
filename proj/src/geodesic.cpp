#include "tkray/geodesic.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>

namespace tkray {

std::vector<double> uniform_samples(double a, double b, int count) {
  require(count >= 2 && a < b, "uniform_samples: bad range");
  std::vector<double> ts(count);
  for (int k = 0; k < count; ++k)
    ts[k] = a + (b - a) * (static_cast<double>(k) / (count - 1));
  return ts;
}

GeodesicPath assemble_path(std::shared_ptr<const ToricGeometry> geom, const Grid1D& window,
                           std::vector<double> ts, std::vector<ExtGridFn> duals) {
  require(ts.size() == duals.size() && ts.size() >= 2, "assemble_path: sample mismatch");
  GeodesicPath path{std::move(geom), window, std::move(ts), std::move(duals), {}, 0, 0};
  path.primals.reserve(path.duals.size());
  for (const ExtGridFn& g : path.duals)
    path.primals.push_back(legendre_inv(g, window));
  DiffQuotients q = diff_quotients(path, path.ts.front(), path.ts.back());
  path.m = q.inf;
  path.M = q.sup;
  return path;
}

GeodesicPath segment(const ToricPotential& phi0, const ToricPotential& phi1,
                     const std::vector<double>& ts, const Grid1D& window) {
  require(phi0.geom == phi1.geom, "segment: same geometry required");
  require(phi0.bounded() && phi1.bounded(), "segment: bounded endpoints required");
  std::vector<ExtGridFn> duals;
  duals.reserve(ts.size());
  const Array& g0 = phi0.dual.v;
  const Array& g1 = phi1.dual.v;
  for (double t : ts) {
    require(t >= -1e-12 && t <= 1.0 + 1e-12, "segment: samples must lie in [0,1]");
    Array g = (1.0 - t) * g0 + t * g1;
    duals.emplace_back(phi0.dual.grid, std::move(g));
  }
  return assemble_path(phi0.geom, window, ts, std::move(duals));
}

DiffQuotients diff_quotients(const GeodesicPath& path, double a, double b) {
  require(a != b, "diff_quotients: a != b required");
  auto find = [&](double t) -> int {
    for (std::size_t k = 0; k < path.ts.size(); ++k)
      if (std::abs(path.ts[k] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return k;
    throw std::invalid_argument("diff_quotients: t is not a sample point");
  };
  int ia = find(a), ib = find(b);
  const PrimalFunction& fa = path.primals[ia];
  const PrimalFunction& fb = path.primals[ib];
  double inv = 1.0 / (a - b);
  Array q = (fa.v - fb.v) * inv;
  double lo = q.minCoeff();
  double hi = q.maxCoeff();

  const ExtGridFn& ga = path.duals[ia];
  const ExtGridFn& gb = path.duals[ib];
  auto tail = [&](bool left) {
    int na = left ? ga.first_finite : ga.last_finite;
    int nb = left ? gb.first_finite : gb.last_finite;
    if (na == nb) return -(ga.v[na] - gb.v[nb]) * inv;
    // slope mismatch: the quotient diverges along this tail
    double slope_diff = (ga.grid.node(na) - gb.grid.node(nb)) * inv;
    return left ? (slope_diff > 0 ? -kInf : kInf) : (slope_diff > 0 ? kInf : -kInf);
  };
  for (bool left : {true, false}) {
    double tl = tail(left);
    lo = std::min(lo, tl);
    hi = std::max(hi, tl);
  }
  return DiffQuotients{lo, hi};
}

bool is_constant_path(const GeodesicPath& path) {
  double thresh = kConstancyFactor * path.window.h();
  const PrimalFunction& f0 = path.primals.front();
  for (const PrimalFunction& f : path.primals)
    if ((f.v - f0.v).abs().maxCoeff() > thresh) return false;
  return true;
}

GeodesicPath normalize(const GeodesicPath& path) {
  if (is_constant_path(path)) return path;
  double res = kConstancyFactor * path.window.h();
  double M = path.M, m = path.m;
  double alpha = path.ts.front();
  if (M - m <= res) {
    // linear non-constant: pure time rescale to slope of unit size
    require(std::abs(m) > res,
            "normalize: quotient spread below resolution on a non-constant path");
    double scale = std::abs(m);
    std::vector<double> ts(path.ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k)
      ts[k] = alpha + (path.ts[k] - alpha) * scale;
    return assemble_path(path.geom, path.window, std::move(ts),
                         std::vector<ExtGridFn>(path.duals));
  }
  // u~_s = u_{alpha + (s-alpha)/(M-m)} - M (s-alpha)/(M-m); at the sample
  // points s_k = alpha + (t_k-alpha)(M-m) this is u_{t_k} - M (t_k - alpha).
  std::vector<double> ts(path.ts.size());
  std::vector<ExtGridFn> duals;
  duals.reserve(path.duals.size());
  for (std::size_t k = 0; k < path.ts.size(); ++k) {
    double dt = path.ts[k] - alpha;
    ts[k] = alpha + dt * (M - m);
    duals.push_back(shifted_fn(path.duals[k], M * dt));  // potential - M dt
  }
  return assemble_path(path.geom, path.window, std::move(ts), std::move(duals));
}

ToricPotential subgeodesic_gamma(const ToricPotential& phi, const ToricPotential& psi,
                                 double t) {
  require(leq(psi, phi), "subgeodesic_gamma: psi <= phi required");
  return toric_max(shifted(phi, -t), psi);
}

std::vector<double> energy_profile(const GeodesicPath& path) {
  std::vector<double> out;
  out.reserve(path.duals.size());
  for (const ExtGridFn& g : path.duals)
    out.push_back(am(ToricPotential(path.geom, g)));
  return out;
}

double max_chord_deviation(const std::vector<double>& ts, const std::vector<double>& am) {
  require(ts.size() == am.size() && ts.size() >= 2, "max_chord_deviation: bad input");
  double t0 = ts.front(), t1 = ts.back();
  double a0 = am.front(), a1 = am.back();
  double worst = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double lam = (ts[k] - t0) / (t1 - t0);
    worst = std::max(worst, std::abs(am[k] - ((1.0 - lam) * a0 + lam * a1)));
  }
  return worst;
}

// --- hcma oracle ---------------------------------------------------------------

namespace {

// Lower hull along an index-parametrized line with the same conventions as
// lower_hull(); operates on gathered values in place.
void hull_inplace(std::vector<double>& val) {
  const int n = static_cast<int>(val.size());
  if (n < 3) return;
  std::vector<int> hull;
  hull.reserve(n);
  for (int i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], mdx = hull[hull.size() - 1];
      double lhs = (val[mdx] - val[a]) * static_cast<double>(i - mdx);
      double rhs = (val[i] - val[mdx]) * static_cast<double>(mdx - a);
      if (lhs < rhs) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out(val.size());
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    int a = hull[k], b = hull[k + 1];
    out[a] = val[a];
    for (int j = a + 1; j < b; ++j) {
      double lam = static_cast<double>(j - a) / static_cast<double>(b - a);
      out[j] = (1.0 - lam) * val[a] + lam * val[b];
    }
  }
  out[hull.back()] = val[hull.back()];
  val = std::move(out);
}

}  // namespace

HcmaResult hcma_oracle(const ToricPotential& phi0, const ToricPotential& phi1, int t_count,
                       const Grid1D& window) {
  require(phi0.geom == phi1.geom && phi0.geom->dim == 1, "hcma_oracle: dim-1 pair");
  require(phi0.bounded() && phi1.bounded(), "hcma_oracle: bounded endpoints");
  require(t_count >= 3, "hcma_oracle: need at least 3 t-levels");

  PrimalFunction F0 = to_primal(phi0, window, TailPolicy::strict);
  PrimalFunction F1 = to_primal(phi1, window, TailPolicy::strict);
  const int K = t_count;            // t-levels
  const int M = window.nodes();     // x-nodes
  const double dt = 1.0 / (K - 1);

  // chord interpolant start; lateral edges and the two boundary slices stay
  // fixed during the sweeps
  Eigen::ArrayXXd F(K, M);
  for (int k = 0; k < K; ++k) {
    double t = k * dt;
    for (int j = 0; j < M; ++j) F(k, j) = (1.0 - t) * F0.v[j] + t * F1.v[j];
  }

  // stencil: rational directions (q t-steps, m x-steps).  The slope range
  // must cover the subgradient displacement between the endpoint symbols
  // (which bounds every active mixing segment), and the slope *resolution*
  // must refine with the grid or the directional-convexity gap saturates at
  // a resolution-independent floor.
  double disp = 0.0;
  {
    const Array& a = phi0.dual.v;
    const Array& b = phi1.dual.v;
    double hp = phi0.dual.grid.h();
    for (int i = 0; i + 1 < a.size(); ++i) {
      double d = std::abs((b[i + 1] - b[i]) - (a[i + 1] - a[i])) / hp;
      disp = std::max(disp, d);
    }
  }
  int kdiag = std::max(2, static_cast<int>(std::ceil(2.0 * disp * dt / window.h())) + 1);
  int qmax = static_cast<int>(std::ceil(M / 64.0)) + 1;

  struct Dir {
    int q;  // t-steps
    int m;  // x-steps
  };
  std::vector<Dir> dirs;
  dirs.push_back({1, 0});
  for (int q = 1; q <= qmax; ++q)
    for (int m = 1; m <= kdiag * q; ++m) {
      if (std::gcd(m, q) != 1) continue;
      dirs.push_back({q, m});
      dirs.push_back({q, -m});
    }

  const double tol = 1e-9;
  const int cap = 200;
  double residual = kInf;
  int sweep = 0;
  std::vector<double> line;
  std::vector<std::pair<int, int>> cells;
  for (; sweep < cap && residual > tol; ++sweep) {
    residual = 0.0;
    // x-direction hull per interior t-slice
    for (int k = 1; k + 1 < K; ++k) {
      line.assign(M, 0.0);
      for (int j = 0; j < M; ++j) line[j] = F(k, j);
      hull_inplace(line);
      for (int j = 0; j < M; ++j) {
        residual = std::max(residual, F(k, j) - line[j]);
        F(k, j) = line[j];
      }
    }
    // lattice-line hulls per direction; every cell lies on exactly one line
    // of each direction, and boundary cells are never written
    auto sweep_line = [&](int k0, int j0, int q, int m) {
      cells.clear();
      line.clear();
      int k = k0, j = j0;
      while (k < K && j >= 0 && j < M) {
        cells.push_back({k, j});
        line.push_back(F(k, j));
        k += q;
        j += m;
      }
      if (line.size() < 3) return;
      hull_inplace(line);
      for (std::size_t idx = 1; idx + 1 < cells.size(); ++idx) {
        auto [ck, cj] = cells[idx];
        if (ck == 0 || ck == K - 1 || cj == 0 || cj == M - 1) continue;
        if (line[idx] < F(ck, cj)) {
          residual = std::max(residual, F(ck, cj) - line[idx]);
          F(ck, cj) = line[idx];
        }
      }
    };
    for (const Dir& d : dirs) {
      // starts whose backward step in t leaves the grid
      for (int k0 = 0; k0 < std::min(d.q, K); ++k0)
        for (int j0 = 0; j0 < M; ++j0) sweep_line(k0, j0, d.q, d.m);
      // starts entering through a lateral edge
      if (d.m > 0) {
        for (int k0 = d.q; k0 < K; ++k0)
          for (int j0 = 0; j0 < std::min(d.m, M); ++j0) sweep_line(k0, j0, d.q, d.m);
      } else if (d.m < 0) {
        for (int k0 = d.q; k0 < K; ++k0)
          for (int j0 = std::max(0, M + d.m); j0 < M; ++j0)
            sweep_line(k0, j0, d.q, d.m);
      }
    }
  }

  // package slices as a path (duals via exact conjugation of each slice)
  std::vector<double> ts(K);
  std::vector<ExtGridFn> duals;
  duals.reserve(K);
  const Grid1D& P = phi0.geom->polytope;
  for (int k = 0; k < K; ++k) {
    double t = k * dt;
    ts[k] = t;
    Array slice(M);
    for (int j = 0; j < M; ++j) slice[j] = F(k, j);
    double sl = (1.0 - t) * F0.tails.left + t * F1.tails.left;
    double sr = (1.0 - t) * F0.tails.right + t * F1.tails.right;
    Array hulled = lower_hull(window, slice);
    PrimalFunction fs(window, std::move(hulled), SlopeData{sl, sr});
    duals.push_back(legendre(fs, P));
  }
  GeodesicPath path = assemble_path(phi0.geom, window, std::move(ts), std::move(duals));
  return HcmaResult{std::move(path), residual <= tol, residual, sweep};
}

}  // namespace tkray
