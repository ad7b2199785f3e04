#include "tkray/convex2d.hpp"

#include <vector>

namespace tkray {

namespace {

// Lower hull along one line of lattice points (indices into a scratch list of
// (arc position, value)); non-finite entries split the line.
void hull_line(std::vector<double>& pos, std::vector<double>& val, std::vector<double*>& slot) {
  const std::size_t n = pos.size();
  if (n < 3) return;
  std::vector<int> hull;
  hull.reserve(n);
  for (int i = 0; i < static_cast<int>(n); ++i) {
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], m = hull[hull.size() - 1];
      double lhs = (val[m] - val[a]) * (pos[i] - pos[m]);
      double rhs = (val[i] - val[m]) * (pos[m] - pos[a]);
      if (lhs < rhs) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    int a = hull[k], b = hull[k + 1];
    for (int j = a + 1; j < b; ++j) {
      double lam = (pos[j] - pos[a]) / (pos[b] - pos[a]);
      double nv = (1.0 - lam) * val[a] + lam * val[b];
      if (nv < *slot[j]) *slot[j] = nv;
    }
  }
}

}  // namespace

Envelope2DResult convex_envelope_2d(const ExtGridFn2& f) {
  Eigen::ArrayXXd w = f.v;
  const int nx = static_cast<int>(w.rows()), ny = static_cast<int>(w.cols());
  const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  const int cap = 10 * std::max(nx, ny);
  const double tol = 1e-10;

  double residual = kInf;
  int sweep = 0;
  std::vector<double> pos, val;
  std::vector<double*> slot;
  for (; sweep < cap && residual > tol; ++sweep) {
    Eigen::ArrayXXd before = w;
    for (auto& d : dirs) {
      int dx = d[0], dy = d[1];
      // enumerate line starts on the boundary opposite to (dx, dy)
      std::vector<std::pair<int, int>> starts;
      if (dx == 1 && dy == 0)
        for (int j = 0; j < ny; ++j) starts.push_back({0, j});
      else if (dx == 0 && dy == 1)
        for (int i = 0; i < nx; ++i) starts.push_back({i, 0});
      else if (dy == 1) {
        for (int i = 0; i < nx; ++i) starts.push_back({i, 0});
        for (int j = 1; j < ny; ++j) starts.push_back({0, j});
      } else {
        for (int i = 0; i < nx; ++i) starts.push_back({i, ny - 1});
        for (int j = ny - 2; j >= 0; --j) starts.push_back({0, j});
      }
      for (auto [si, sj] : starts) {
        pos.clear();
        val.clear();
        slot.clear();
        int i = si, j = sj, step = 0;
        for (; i >= 0 && i < nx && j >= 0 && j < ny; i += dx, j += dy, ++step) {
          double& cell = w(i, j);
          if (cell < kInf && f.grid.in_mask(i, j)) {
            pos.push_back(static_cast<double>(step));
            val.push_back(cell);
            slot.push_back(&cell);
          } else if (!pos.empty()) {
            hull_line(pos, val, slot);
            pos.clear();
            val.clear();
            slot.clear();
          }
        }
        if (!pos.empty()) hull_line(pos, val, slot);
      }
    }
    residual = (before - w).abs().maxCoeff();
    if (!std::isfinite(residual)) {
      // inf - inf on never-touched nodes: compare finite part only
      residual = 0.0;
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
          if (before(i, j) < kInf && w(i, j) < kInf)
            residual = std::max(residual, std::abs(before(i, j) - w(i, j)));
    }
  }
  return Envelope2DResult{ExtGridFn2(f.grid, std::move(w)), sweep, residual <= tol, residual};
}

double convexity_defect_2d(const ExtGridFn2& f) {
  double worst = 0.0;
  const int nx = static_cast<int>(f.v.rows()), ny = static_cast<int>(f.v.cols());
  auto fin = [&](int i, int j) { return f.v(i, j) < kInf; };
  for (int i = 0; i < nx; ++i)
    for (int j = 1; j + 1 < ny; ++j)
      if (fin(i, j - 1) && fin(i, j) && fin(i, j + 1))
        worst = std::max(worst, -(f.v(i, j - 1) - 2 * f.v(i, j) + f.v(i, j + 1)));
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i + 1 < nx; ++i)
      if (fin(i - 1, j) && fin(i, j) && fin(i + 1, j))
        worst = std::max(worst, -(f.v(i - 1, j) - 2 * f.v(i, j) + f.v(i + 1, j)));
  return worst;
}

double finite_domain_area(const ExtGridFn2& f) {
  const int nx = static_cast<int>(f.v.rows()), ny = static_cast<int>(f.v.cols());
  double hx = f.grid.gx.h(), hy = f.grid.gy.h();
  double area = 0.0;
  for (int i = 0; i + 1 < nx; ++i)
    for (int j = 0; j + 1 < ny; ++j) {
      int corners = 0;
      corners += f.v(i, j) < kInf;
      corners += f.v(i + 1, j) < kInf;
      corners += f.v(i, j + 1) < kInf;
      corners += f.v(i + 1, j + 1) < kInf;
      if (corners == 4)
        area += hx * hy;
      else if (corners == 3)
        area += 0.5 * hx * hy;
    }
  return area;
}

}  // namespace tkray
