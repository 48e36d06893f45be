#include "cqmorph/convexfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cqmorph/format.hpp"

namespace cqmorph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_number(std::string_view text, std::string_view spec) {
  const std::string s(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad numeric parameter in function spec '" + std::string(spec) + "'");
  }
}

}  // namespace

ConvexFn::ConvexFn(std::string label, Eval eval, double slope_at_infinity, bool operator_convex)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      slope_(slope_at_infinity),
      operator_convex_(operator_convex) {}

ConvexFn power_family(double s) {
  if (!(s > 0.0 && s <= 1.0)) throw ValidationError("power_family: s must lie in (0, 1]");
  return ConvexFn(
      "power:" + format_real(s),
      [s](double x) {
        if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return -std::pow(x, s);
      },
      s < 1.0 ? 0.0 : -1.0, true);
}

ConvexFn resolvent_family(double t) {
  if (!(t >= 0.0)) throw ValidationError("resolvent_family: t must be >= 0");
  return ConvexFn(
      "resolvent:" + format_real(t),
      [t](double x) {
        if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
        const double d = t + x;
        return d == 0.0 ? kInf : 1.0 / d;
      },
      0.0, true);
}

ConvexFn square_fn() {
  return ConvexFn("square", [](double x) { return x * x; }, kInf, true);
}

ConvexFn monomial_fn(double p) {
  if (!(p >= 1.0)) throw ValidationError("monomial_fn: p must be >= 1");
  return ConvexFn(
      "monomial:" + format_real(p),
      [p](double x) {
        if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::pow(x, p);
      },
      p > 1.0 ? kInf : 1.0, p <= 2.0);
}

ConvexFn xlogx_fn() {
  return ConvexFn(
      "xlogx",
      [](double x) {
        if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return x == 0.0 ? 0.0 : x * std::log(x);
      },
      kInf, true);
}

ConvexFn from_lowner(const LownerRep& rep) {
  if (!(rep.beta >= 0.0)) throw ValidationError("from_lowner: beta must be >= 0");
  for (std::size_t i = 0; i < rep.measure.size(); ++i) {
    const auto& a = rep.measure[i];
    if (!(a.t > 0.0) || !(a.w >= 0.0)) {
      throw ValidationError("from_lowner: atoms need t > 0 and w >= 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (rep.measure[j].t == a.t) throw ValidationError("from_lowner: duplicate atom location");
    }
  }
  double slope = kInf;
  if (rep.beta == 0.0) {
    slope = rep.alpha;
    for (const auto& a : rep.measure) slope += a.w / (1.0 + a.t);
  }
  std::ostringstream label;
  label << "lowner(f0=" << format_real(rep.f0) << ",alpha=" << format_real(rep.alpha)
        << ",beta=" << format_real(rep.beta) << ",atoms=" << rep.measure.size() << ")";
  return ConvexFn(
      label.str(),
      [rep](double x) {
        if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
        double v = rep.f0 + rep.alpha * x + rep.beta * x * x;
        for (const auto& a : rep.measure) v += a.w * (x / (1.0 + a.t) - x / (x + a.t));
        return v;
      },
      slope, true);
}

ConvexFn witness_fn(const HermitianOp& w0, const HermitianOp& w1) {
  if (w0.dim() != w1.dim()) throw ValidationError("witness_fn: dimension mismatch");
  const Matrix a = w0.matrix();
  const Matrix b = w1.matrix();
  return ConvexFn(
      "witness",
      [a, b](double x) { return eigh_unchecked(x * a + b).eigenvalues.back(); },
      max_eigenvalue(w0), false);
}

std::vector<double> cauchy_interpolate(const std::vector<double>& nodes,
                                       const std::vector<double>& poles,
                                       const std::vector<double>& values) {
  const std::size_t n = nodes.size();
  if (poles.size() != n || values.size() != n) {
    throw ValidationError("cauchy_interpolate: nodes, poles and values must have equal length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(nodes[i] >= 0.0)) throw ValidationError("cauchy_interpolate: nodes must be >= 0");
    if (!(poles[i] > 0.0)) throw ValidationError("cauchy_interpolate: poles must be > 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes[i] == nodes[j]) throw ValidationError("cauchy_interpolate: duplicate node");
      if (poles[i] == poles[j]) throw ValidationError("cauchy_interpolate: duplicate pole");
    }
  }
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd c(m, m);
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    v(i) = values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      c(i, j) = 1.0 / (nodes[static_cast<std::size_t>(i)] + poles[static_cast<std::size_t>(j)]);
    }
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(c);
  if (!lu.isInvertible()) throw ValidationError("cauchy_interpolate: singular Cauchy system");
  const Eigen::VectorXd x = lu.solve(v);
  const double residual = (c * x - v).lpNorm<Eigen::Infinity>();
  if (!(residual < 1e-8)) {
    throw ValidationError("cauchy_interpolate: residual " + format_real(residual) +
                          " exceeds 1e-8");
  }
  return {x.data(), x.data() + x.size()};
}

ConvexFn parse_fn_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;

  if (head == "square" && !has_arg) return square_fn();
  if (head == "power4" && !has_arg) return monomial_fn(4.0);
  if (head == "xlogx" && !has_arg) return xlogx_fn();
  if (head == "power" && has_arg) return power_family(parse_number(arg, spec));
  if (head == "resolvent" && has_arg) return resolvent_family(parse_number(arg, spec));
  if (head == "monomial" && has_arg) return monomial_fn(parse_number(arg, spec));
  if (head == "lowner" && has_arg) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(arg);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("lowner spec: ") + e.what());
    }
    LownerRep rep;
    try {
      rep.f0 = j.value("f0", 0.0);
      rep.alpha = j.value("alpha", 0.0);
      rep.beta = j.value("beta", 0.0);
      if (j.contains("measure")) {
        for (const auto& atom : j.at("measure")) {
          rep.measure.push_back({atom.at(0).get<double>(), atom.at(1).get<double>()});
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("lowner spec: ") + e.what());
    }
    return from_lowner(rep);
  }
  throw ValidationError("unknown function spec '" + std::string(spec) + "'");
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw ValidationError("log_grid: need n >= 1, 0 < lo <= hi");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  if (n == 1) return {lo};
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) g.push_back(std::exp(a + (b - a) * i / (n - 1)));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1 || !(hi >= lo)) throw ValidationError("linear_grid: need n >= 1, lo <= hi");
  if (n == 1) return {lo};
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  g.back() = hi;
  return g;
}

std::vector<double> default_t_grid() { return log_grid(1e-3, 1e3, 64); }
std::vector<double> default_s_grid() { return linear_grid(0.5, 0.999, 32); }

}  // namespace cqmorph
