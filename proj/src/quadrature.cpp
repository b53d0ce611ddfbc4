#include "hetnet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate gk15(const Integrand& f, double a, double b, long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }
  fv[7] = f(c);
  evals += 15;
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
  }
  const double value = resk * h;
  const double err = std::fabs((resk - resg) * h);
  return {value, err};
}

struct Segment {
  double a, b, value, error;
};

QuadResult adapt(const Integrand& f, double a, double b, const QuadConfig& cfg,
                 const char* where, int initial_splits) {
  long evals = 0;
  std::vector<Segment> segs;
  const double w = (b - a) / initial_splits;
  for (int i = 0; i < initial_splits; ++i) {
    const double lo = a + i * w;
    const double hi = (i == initial_splits - 1) ? b : a + (i + 1) * w;
    auto e = gk15(f, lo, hi, evals);
    segs.push_back({lo, hi, e.value, e.error});
  }
  for (int iter = 0; iter < cfg.max_subdivisions; ++iter) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    const double tol = std::max(cfg.rel_tol * std::fabs(total), cfg.abs_tol);
    if (err <= tol) return {total, err, evals};
    Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    auto left = gk15(f, s.a, mid, evals);
    auto right = gk15(f, mid, s.b, evals);
    segs[worst] = {s.a, mid, left.value, left.error};
    segs.push_back({mid, s.b, right.value, right.error});
  }
  double total = 0.0, err = 0.0;
  for (const auto& s : segs) {
    total += s.value;
    err += s.error;
  }
  const double tol = std::max(cfg.rel_tol * std::fabs(total), cfg.abs_tol);
  if (err > tol) throw non_convergence(where, err, tol);
  return {total, err, evals};
}

}  // namespace

QuadResult integrate_semi_infinite(const Integrand& f, const QuadConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
    throw invalid_params("QuadConfig tolerances must be > 0");
  // x = v/(1-v) maps (0,1) -> (0,inf), dx = dv/(1-v)^2.
  auto g = [&f](double v) {
    const double omv = 1.0 - v;
    if (omv <= 0.0) return 0.0;
    const double x = v / omv;
    return f(x) / (omv * omv);
  };
  return adapt(g, 0.0, 1.0, cfg, "integrate_semi_infinite", 8);
}

QuadResult integrate_semi_infinite_doubling(const Integrand& f, const QuadConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
    throw invalid_params("QuadConfig tolerances must be > 0");
  QuadResult total;
  double lo = 0.0, hi = 1.0;
  int stagnant = 0;
  for (int panel = 0; panel < 120; ++panel) {
    QuadConfig panel_cfg = cfg;
    panel_cfg.abs_tol = std::max(cfg.abs_tol, 0.01 * cfg.rel_tol * std::fabs(total.value));
    auto r = adapt(f, lo, hi, panel_cfg, "integrate_semi_infinite_doubling", 4);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
    const double tol = std::max(cfg.rel_tol * std::fabs(total.value), cfg.abs_tol);
    stagnant = (std::fabs(r.value) <= 0.05 * tol) ? stagnant + 1 : 0;
    if (stagnant >= 3) return total;
    lo = hi;
    hi *= 2.0;
  }
  const double tol = std::max(cfg.rel_tol * std::fabs(total.value), cfg.abs_tol);
  throw non_convergence("integrate_semi_infinite_doubling: tail did not settle",
                        total.error_estimate, tol);
}

QuadResult integrate_interval(const Integrand& f, double a, double b, const QuadConfig& cfg) {
  if (!(b >= a)) throw invalid_params("integrate_interval: b must be >= a");
  if (a == b) return {0.0, 0.0, 0};
  return adapt(f, a, b, cfg, "integrate_interval", 4);
}

QuadResult integrate_double(const Integrand2& f, const QuadConfig& cfg_outer,
                            const QuadConfig& cfg_inner) {
  long inner_evals = 0;
  bool inner_failed = false;
  auto outer = [&](double z) {
    try {
      auto r = integrate_semi_infinite([&](double t) { return f(z, t); }, cfg_inner);
      inner_evals += r.evaluations;
      return r.value;
    } catch (const non_convergence&) {
      inner_failed = true;
      throw;
    }
  };
  try {
    auto r = integrate_semi_infinite(outer, cfg_outer);
    r.evaluations += inner_evals;
    return r;
  } catch (const non_convergence& e) {
    if (inner_failed)
      throw non_convergence("integrate_double (inner level): " + std::string(e.where()),
                            e.estimate(), e.tolerance());
    throw non_convergence("integrate_double (outer level)", e.estimate(), e.tolerance());
  }
}

}  // namespace hetnet
