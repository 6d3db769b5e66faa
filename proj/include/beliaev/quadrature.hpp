#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

#include "beliaev/parallel.hpp"

// Adaptive Gauss-Kronrod quadrature, 1-D intervals and 2-D tensor-product
// cells.  Each cell is evaluated with the embedded (G7, K15) pair; the error
// estimate is the conservative |K15 - G7|.  The worst cell (largest estimate,
// ties broken by creation index) is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |integral|) or the cell budget runs out.  The final
// value re-sums all leaves in creation order, so results are bit-identical
// across runs and across thread counts; worker threads only evaluate cell
// batches, they never touch the accumulation order.

namespace beliaev::quad {

struct Tol {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_cells = 20000;
  int threads = 1;
};

template <class V>
struct Result {
  V value{};
  double error = 0.0;
  long evals = 0;
  int cells = 0;
  bool converged = false;
};

namespace detail {

// (G7, K15) nodes and weights on [-1, 1]; K15 node set contains the G7 set.
inline constexpr int kn = 15;
inline constexpr double kx[kn] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
inline constexpr double kw[kn] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
// Gauss weight attached to every odd K15 index (the embedded G7 points).
inline constexpr double gw[kn] = {
    0.0, 0.129484966168869693270611432679082,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082,
    0.0};

inline double mag(double v) { return std::fabs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }

template <class V>
struct Cell1 {
  double a, b;
  V val{};
  double err = 0.0;
  long id = 0;
};

template <class V>
struct Cell2 {
  double ax, bx, ay, by;
  V val{};
  double err = 0.0;
  int split_dim = 0;
  long id = 0;
};

template <class F, class V>
void eval_cell(const F& f, Cell1<V>& c) {
  const double mid = 0.5 * (c.a + c.b);
  const double h = 0.5 * (c.b - c.a);
  V ik{}, ig{};
  for (int i = 0; i < kn; ++i) {
    const V fv = f(mid + h * kx[i]);
    ik += kw[i] * fv;
    ig += gw[i] * fv;
  }
  c.val = h * ik;
  c.err = mag(h * (ik - ig));
}

template <class F, class V>
void eval_cell(const F& f, Cell2<V>& c) {
  const double mx = 0.5 * (c.ax + c.bx), hx = 0.5 * (c.bx - c.ax);
  const double my = 0.5 * (c.ay + c.by), hy = 0.5 * (c.by - c.ay);
  V ikk{}, igg{}, ikg{}, igk{};
  for (int i = 0; i < kn; ++i) {
    const double x = mx + hx * kx[i];
    V rowk{}, rowg{};
    for (int j = 0; j < kn; ++j) {
      const V fv = f(x, my + hy * kx[j]);
      rowk += kw[j] * fv;
      rowg += gw[j] * fv;
    }
    ikk += kw[i] * rowk;
    ikg += kw[i] * rowg;
    igk += gw[i] * rowk;
    igg += gw[i] * rowg;
  }
  const double scale = hx * hy;
  c.val = scale * ikk;
  c.err = mag(scale * (ikk - igg));
  // Split along the direction with the larger embedded-rule defect.
  const double dx = mag(scale * (ikk - igk));
  const double dy = mag(scale * (ikk - ikg));
  c.split_dim = (dx >= dy) ? 0 : 1;
}

template <class Cell>
struct WorseError {
  bool operator()(const std::pair<double, long>& a,
                  const std::pair<double, long>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;  // older cell wins ties
  }
};

template <class V, class Cell, class Eval, class Split>
Result<V> run_adaptive(const Eval& eval, const Split& split,
                       std::vector<Cell> initial, const Tol& tol,
                       long evals_per_cell) {
  std::vector<Cell> cells;
  std::vector<char> leaf;
  std::priority_queue<std::pair<double, long>,
                      std::vector<std::pair<double, long>>, WorseError<Cell>>
      heap;

  V total{};
  double total_err = 0.0;
  parallel_for(initial.size(), tol.threads,
               [&](std::size_t i) { eval(initial[i]); });
  for (Cell& c : initial) {
    c.id = static_cast<long>(cells.size());
    cells.push_back(c);
    leaf.push_back(1);
    heap.push({c.err, c.id});
    total += c.val;
    total_err += c.err;
  }
  auto done = [&]() {
    return total_err <= std::max(tol.abs_tol, tol.rel_tol * mag(total));
  };

  // Fixed batch width: the refinement tree, and therefore every output bit,
  // must not depend on the worker count.  Threads only share the evaluation
  // of one batch.
  const int batch = 4;
  while (!done() && static_cast<int>(cells.size()) < tol.max_cells &&
         !heap.empty()) {
    // Pop up to `batch` worst cells, bisect each, evaluate children (possibly
    // in parallel), then push results back in deterministic order.
    std::vector<long> popped;
    while (static_cast<int>(popped.size()) < batch && !heap.empty()) {
      auto [err, id] = heap.top();
      heap.pop();
      if (!leaf[id]) continue;
      popped.push_back(id);
      if (err <= 0.0) break;  // nothing left worth splitting
    }
    if (popped.empty()) break;

    std::vector<Cell> children;
    children.reserve(2 * popped.size());
    for (long id : popped) {
      auto hs = split(cells[id]);
      children.push_back(hs.first);
      children.push_back(hs.second);
    }
    parallel_for(children.size(), tol.threads,
                 [&](std::size_t i) { eval(children[i]); });

    for (std::size_t i = 0; i < popped.size(); ++i) {
      const long id = popped[i];
      leaf[id] = 0;
      total -= cells[id].val;
      total_err -= cells[id].err;
      for (int c = 0; c < 2; ++c) {
        Cell& ch = children[2 * i + c];
        ch.id = static_cast<long>(cells.size());
        cells.push_back(ch);
        leaf.push_back(1);
        heap.push({ch.err, ch.id});
        total += ch.val;
        total_err += ch.err;
      }
    }
  }

  // Re-sum leaves in creation order: removes incremental drift and pins the
  // reduction order independently of the heap history.
  V value{};
  double err = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (leaf[i]) {
      value += cells[i].val;
      err += cells[i].err;
    }
  }

  Result<V> out;
  out.value = value;
  out.error = err;
  out.cells = static_cast<int>(cells.size());
  out.evals = evals_per_cell * static_cast<long>(cells.size());
  out.converged = err <= std::max(tol.abs_tol, tol.rel_tol * mag(value));
  return out;
}

}  // namespace detail

// 1-D adaptive integral of f over [a, b].  V deduced from f's return type.
// The domain starts pre-split: a single embedded-rule estimate on the whole
// interval can be deceptively small before the rule resolves the integrand.
template <class F>
auto integrate_1d(const F& f, double a, double b, const Tol& tol = {}) {
  using V = decltype(f(a));
  std::vector<detail::Cell1<V>> initial;
  const int n0 = 4;
  for (int i = 0; i < n0; ++i) {
    initial.push_back({a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0});
  }
  auto eval = [&](detail::Cell1<V>& c) { detail::eval_cell<F, V>(f, c); };
  auto split = [](const detail::Cell1<V>& c) {
    const double m = 0.5 * (c.a + c.b);
    return std::make_pair(detail::Cell1<V>{c.a, m},
                          detail::Cell1<V>{m, c.b});
  };
  return detail::run_adaptive<V>(eval, split, std::move(initial), tol,
                                 detail::kn);
}

// 2-D adaptive tensor-product integral of f(x, y) over a rectangle.
template <class F>
auto integrate_2d(const F& f, double ax, double bx, double ay, double by,
                  const Tol& tol = {}) {
  using V = decltype(f(ax, ay));
  std::vector<detail::Cell2<V>> initial;
  const int n0 = 3;
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n0; ++j) {
      initial.push_back({ax + (bx - ax) * i / n0, ax + (bx - ax) * (i + 1) / n0,
                         ay + (by - ay) * j / n0,
                         ay + (by - ay) * (j + 1) / n0});
    }
  }
  auto eval = [&](detail::Cell2<V>& c) { detail::eval_cell<F, V>(f, c); };
  auto split = [](const detail::Cell2<V>& c) {
    if (c.split_dim == 0) {
      const double m = 0.5 * (c.ax + c.bx);
      return std::make_pair(detail::Cell2<V>{c.ax, m, c.ay, c.by},
                            detail::Cell2<V>{m, c.bx, c.ay, c.by});
    }
    const double m = 0.5 * (c.ay + c.by);
    return std::make_pair(detail::Cell2<V>{c.ax, c.bx, c.ay, m},
                          detail::Cell2<V>{c.ax, c.bx, m, c.by});
  };
  return detail::run_adaptive<V>(eval, split, std::move(initial), tol,
                                 static_cast<long>(detail::kn) * detail::kn);
}

}  // namespace beliaev::quad
