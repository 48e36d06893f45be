#include "cqmorph/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cqmorph/format.hpp"
#include "cqmorph/parallel.hpp"
#include "cqmorph/sampling.hpp"

namespace cqmorph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPoleTol = 1e-14;
constexpr double kHexagonSlack = 1e-12;
constexpr int kBisectionSteps = 200;

// g_t restricted to the line b = 1 - 2a, i.e. the point (a, b, a).
double line_constraint(double b, const CurveTag& tag, const TriplePoint& triple) {
  return g_t(0.5 * (1.0 - b), b, tag, triple);
}

double cross(std::pair<double, double> o, std::pair<double, double> a, std::pair<double, double> b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

// Matrix function on a PSD operator with roundoff-negative eigenvalues
// clipped to zero.
Matrix psd_function(const ConvexFn& f, const Matrix& m) {
  const SpectralDecomp s = eigh_unchecked(m);
  const auto n = s.eigenvectors.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double v = f(std::max(s.eigenvalues[static_cast<std::size_t>(k)], 0.0));
    if (!std::isfinite(v)) throw DomainError("jensen: " + f.label() + " not finite on spectrum");
    const auto col = s.eigenvectors.col(k);
    out.noalias() += v * (col * col.adjoint());
  }
  return out;
}

}  // namespace

TriplePoint::TriplePoint(double a0, double b0, double c0) : v_{a0, b0, c0} {
  if (!(a0 > 0.0 && a0 < b0 && b0 < c0)) {
    throw ValidationError("TriplePoint: need 0 < a0 < b0 < c0");
  }
  if (std::abs(a0 + b0 + c0 - 1.0) > 1e-12) {
    throw ValidationError("TriplePoint: a0 + b0 + c0 must equal 1");
  }
}

double TriplePoint::sum_squares() const {
  return v_[0] * v_[0] + v_[1] * v_[1] + v_[2] * v_[2];
}

std::string CurveTag::label() const {
  switch (kind) {
    case Kind::Resolvent:
      return "resolvent:" + format_real(t);
    case Kind::Square:
      return "square";
    case Kind::Limit:
      return "limit";
  }
  return "unknown";
}

double g_t(double a, double b, const CurveTag& tag, const TriplePoint& triple) {
  std::array<double, 3> u{a, b, 1.0 - a - b};
  std::sort(u.begin(), u.end());
  const auto& x = triple.values();
  switch (tag.kind) {
    case CurveTag::Kind::Square: {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += (u[i] - x[i]) * (u[i] + x[i]);
      return s;
    }
    case CurveTag::Kind::Resolvent: {
      const double t = tag.t;
      if (!(t >= 0.0)) throw ValidationError("g_t: t must be >= 0");
      // Pairwise differences 1/(u+t) - 1/(x+t) avoid cancellation at large t.
      double s = 0.0;
      for (int i = 0; i < 3; ++i) {
        if (u[i] + t < kPoleTol) return kInf;
        s += (x[i] - u[i]) / ((u[i] + t) * (x[i] + t));
      }
      return s;
    }
    case CurveTag::Kind::Limit:
      break;
  }
  throw ValidationError("g_t: the limit tag has no constraint function");
}

bool hexagon_contains(double a, double b, const TriplePoint& triple) {
  std::array<double, 3> u{a, b, 1.0 - a - b};
  std::sort(u.begin(), u.end(), std::greater<>());
  const double c0 = triple.c0();
  const double b0 = triple.b0();
  return u[2] >= -kHexagonSlack && u[0] <= c0 + kHexagonSlack &&
         u[0] + u[1] <= c0 + b0 + kHexagonSlack;
}

std::array<std::pair<double, double>, 6> hexagon_vertices(const TriplePoint& triple) {
  const double a0 = triple.a0();
  const double b0 = triple.b0();
  const double c0 = triple.c0();
  return {{{a0, c0}, {b0, c0}, {c0, b0}, {c0, a0}, {b0, a0}, {a0, b0}}};
}

bool hexagon_contains_geometric(double a, double b, const TriplePoint& triple) {
  // Monotone-chain hull of the six vertices, then a same-side test.
  auto pts = hexagon_vertices(triple);
  std::vector<std::pair<double, double>> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end());
  std::vector<std::pair<double, double>> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const auto& q : p) {
      while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), q) <= 0.0) {
        hull.pop_back();
      }
      hull.push_back(q);
    }
    hull.pop_back();
    std::reverse(p.begin(), p.end());
  }
  const std::pair<double, double> q{a, b};
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& e0 = hull[i];
    const auto& e1 = hull[(i + 1) % hull.size()];
    const double len = std::hypot(e1.first - e0.first, e1.second - e0.second);
    if (cross(e0, e1, q) < -kHexagonSlack * len) return false;
  }
  return true;
}

double e_t(const TriplePoint& triple, double t) {
  if (!(t > 0.0)) throw ValidationError("e_t: t must be > 0");
  double s = 0.0;
  for (double x : triple.values()) s += x * x / (x + t);
  return t * s;
}

double b_t_closed_form(const TriplePoint& triple, double t) {
  if (!(t > 0.0)) throw ValidationError("b_t_closed_form: t must be > 0");
  const long double e = e_t(triple, t);
  const long double tt = t;
  const long double disc = (24 * e - 8) * tt * tt * tt * tt + 8 * e * tt * tt * tt +
                           (9 * e * e - 6 * e + 1) * tt * tt + (6 * e * e - 2 * e) * tt + e * e;
  const long double num = 2 * tt * tt + (e - 1) * tt + e + std::sqrt(std::max(disc, 0.0L));
  return static_cast<double>(num / (2 * (3 * tt * tt - tt + e)));
}

double b_infinity(const TriplePoint& triple) {
  const double disc = 6.0 * triple.sum_squares() - 2.0;
  if (disc < 0.0) throw ValidationError("b_infinity: negative discriminant");
  return (1.0 + std::sqrt(disc)) / 3.0;
}

CurveSample b_t_root(const TriplePoint& triple, const CurveTag& tag) {
  CurveSample out;
  out.tag = tag;
  const double c0 = triple.c0();
  if (tag.kind == CurveTag::Kind::Square || tag.kind == CurveTag::Kind::Limit) {
    // 3 b^2 - 2 b + 1 - 2 sum x^2 = 0 on the line; the + root is also the
    // t -> inf limit of the resolvent roots.
    const double b = b_infinity(triple);
    if (!(b > c0)) throw NoUpperRootError("no upper root above c0 for " + tag.label());
    out.b_t = b;
    out.a_t = 0.5 * (1.0 - b);
    out.closed_form = b;
    out.residual = std::abs(line_constraint(b, CurveTag::square(), triple));
    return out;
  }

  double lo = c0;
  double hi = 1.0;
  const double f_lo = line_constraint(lo, tag, triple);
  const double f_hi = line_constraint(hi, tag, triple);
  if (!(f_lo < 0.0) || !(f_hi > 0.0)) {
    throw NoUpperRootError("no sign change on (c0, 1) for " + tag.label());
  }
  for (int i = 0; i < kBisectionSteps && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (line_constraint(mid, tag, triple) < 0.0 ? lo : hi) = mid;
  }
  const double b = 0.5 * (lo + hi);
  out.b_t = b;
  out.a_t = 0.5 * (1.0 - b);
  out.residual = std::abs(line_constraint(b, tag, triple));
  if (tag.t > 0.0) out.closed_form = b_t_closed_form(triple, tag.t);
  return out;
}

std::vector<double> default_counterexample_grid() {
  std::vector<double> g{0.0};
  const auto tail = log_grid(1e-3, 1e4, 96);
  g.insert(g.end(), tail.begin(), tail.end());
  return g;
}

BStarResult b_star(const TriplePoint& triple, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw ValidationError("b_star: empty grid");
  BStarResult out;
  out.samples.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    out.samples[i] = b_t_root(triple, CurveTag::resolvent(t_grid[i]));
  });
  out.samples.push_back(b_t_root(triple, CurveTag::square()));

  out.b_star = kInf;
  for (const auto& s : out.samples) {
    if (s.b_t < out.b_star) {
      out.b_star = s.b_t;
      out.argmin = s.tag;
    }
  }
  const double limit = b_infinity(triple);
  if (limit < out.b_star) {
    out.b_star = limit;
    out.argmin = CurveTag::limit();
  }
  out.margin = out.b_star - triple.c0();
  return out;
}

SeparatingPoint find_separating_point(const TriplePoint& triple, const std::vector<double>& t_grid,
                                      double tol) {
  SeparatingPoint out;
  out.sweep = b_star(triple, t_grid);
  if (!(out.sweep.margin > 0.0)) {
    throw SearchFailure("b_star " + format_real(out.sweep.b_star) + " does not exceed c0; tightest " +
                        out.sweep.argmin.label());
  }
  out.b = 0.5 * (triple.c0() + out.sweep.b_star);
  out.a = 0.5 * (1.0 - out.b);

  out.max_g = -kInf;
  for (const auto& s : out.sweep.samples) {
    const double g = g_t(out.a, out.b, s.tag, triple);
    if (g > out.max_g) {
      out.max_g = g;
      out.tightest = s.tag.label();
    }
  }
  if (out.max_g > tol) {
    throw SearchFailure("constraint " + out.tightest + " violated at the candidate point: g = " +
                        format_real(out.max_g));
  }

  out.in_hexagon = hexagon_contains(out.a, out.b, triple);
  const auto& x = triple.values();
  const ProbVector p0(std::vector<double>(x.begin(), x.end()));
  const ProbVector target(std::vector<double>{out.a, out.b, 1.0 - out.a - out.b});
  const ProbVector uniform = ProbVector::uniform(3);
  out.majorization = majorization_feasible(p0, target);
  const ClassicalPair from(p0, uniform);
  const ClassicalPair to(target, uniform);
  out.lp = classical_feasible(from, to);
  out.scan = necessary_scan(from, QuantumPair::diagonal(to));
  return out;
}

double jensen_gap(const ConvexFn& f, const Matrix& isometry, const Matrix& d_prime) {
  const Matrix compressed = isometry.adjoint() * d_prime * isometry;
  const Matrix lhs = isometry.adjoint() * psd_function(f, d_prime) * isometry;
  const Matrix rhs = psd_function(f, 0.5 * (compressed + compressed.adjoint()));
  return eigh_unchecked(lhs - rhs).eigenvalues.front();
}

JensenSearchResult jensen_violation_search(const ConvexFn& f, int dim_in, int dim_out,
                                           std::size_t trials, std::uint64_t seed,
                                           double threshold) {
  if (trials < 1) throw ValidationError("jensen_violation_search: trials must be >= 1");
  if (dim_in < 1 || dim_out < dim_in) {
    throw ValidationError("jensen_violation_search: need 1 <= dim_in <= dim_out");
  }
  JensenSearchResult out;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, i);
    const Matrix v = random_isometry(rng, dim_out, dim_in);
    const Matrix g = random_ginibre(rng, dim_out, dim_out);
    const Matrix d = (g * g.adjoint()) / static_cast<double>(dim_out);
    const double gap = jensen_gap(f, v, d);
    out.min_gap_seen = std::min(out.min_gap_seen, gap);
    out.trials_run = i + 1;
    if (gap < -threshold) {
      JensenViolation viol;
      viol.trial = i;
      viol.isometry = v;
      viol.d_prime = d;
      viol.spectrum = eigh_unchecked(d).eigenvalues;
      viol.min_gap = gap;
      out.violation = std::move(viol);
      break;
    }
  }
  return out;
}

}  // namespace cqmorph
