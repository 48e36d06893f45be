#include "cqmorph/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqmorph/format.hpp"

namespace cqmorph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCommuteTol = 1e-10;
// Irrational-ish mixing weight so that sigma0 + w sigma1 separates the joint
// eigenspaces of a commuting pair.
constexpr double kMixWeight = 0.6180339887498949;

// Simultaneous eigenbasis of a commuting pair, or empty when the pair does not
// commute (or the mixing weight hits an accidental degeneracy).
std::optional<Matrix> joint_eigenbasis(const QuantumPair& to) {
  const Matrix& a = to.sigma0.matrix();
  const Matrix& b = to.sigma1.matrix();
  if ((a * b - b * a).norm() > kCommuteTol) return std::nullopt;
  const SpectralDecomp s = eigh_unchecked(a + kMixWeight * b);
  const Matrix& u = s.eigenvectors;
  for (const Matrix* m : {&a, &b}) {
    Matrix d = u.adjoint() * (*m) * u;
    d.diagonal().setZero();
    if (d.norm() > 1e-9) return std::nullopt;
  }
  return u;
}

ProbVector diagonal_in(const Matrix& u, const DensityOp& rho) {
  const Matrix d = u.adjoint() * rho.matrix() * u;
  std::vector<double> w(static_cast<std::size_t>(d.rows()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    w[static_cast<std::size_t>(i)] = std::max(d(i, i).real(), 0.0);
    sum += w[static_cast<std::size_t>(i)];
  }
  for (double& v : w) v /= sum;
  return ProbVector(std::move(w));
}

bool all_uniform(const ProbVector& p) {
  const double u = 1.0 / static_cast<double>(p.size());
  return std::all_of(p.vec().begin(), p.vec().end(),
                     [u](double v) { return std::abs(v - u) <= 1e-12; });
}

}  // namespace

double ScanEntry::gap() const {
  if (std::isinf(lhs) && std::isinf(rhs)) return 0.0;
  if (std::isinf(lhs)) return kInf;
  if (std::isinf(rhs)) return -kInf;
  return lhs - rhs;
}

std::size_t ScanResult::violation_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const ScanEntry& e) { return e.violated; }));
}

const ScanEntry* ScanResult::worst_violation() const {
  const ScanEntry* worst = nullptr;
  for (const auto& e : entries) {
    if (e.violated && (worst == nullptr || e.gap() < worst->gap())) worst = &e;
  }
  return worst;
}

std::vector<ConvexFn> scan_functions(const ScanGrids& grids) {
  std::vector<ConvexFn> fns;
  fns.reserve(grids.t.size() + grids.s.size() + 3);
  fns.push_back(resolvent_family(0.0));
  for (double t : grids.t) {
    if (t != 0.0) fns.push_back(resolvent_family(t));
  }
  for (double s : grids.s) {
    if (s != 1.0) fns.push_back(power_family(s));
  }
  fns.push_back(power_family(1.0));
  fns.push_back(square_fn());
  return fns;
}

bool is_violation(double lhs, double rhs, double tol) {
  if (std::isinf(lhs)) return false;
  if (std::isinf(rhs)) return true;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return lhs < rhs - tol * scale;
}

ScanResult necessary_scan(const ClassicalPair& from, const QuantumPair& to,
                          const ScanGrids& grids, double tol) {
  const WeightedSpectrum classical = classical_spectrum(from);
  const WeightedSpectrum quantum = relative_spectrum(to);
  ScanResult result;
  for (const ConvexFn& f : scan_functions(grids)) {
    ScanEntry e;
    e.label = f.label();
    e.lhs = evaluate(f, classical);
    e.rhs = evaluate(f, quantum);
    e.violated = is_violation(e.lhs, e.rhs, tol);
    result.worst_gap = std::min(result.worst_gap, e.gap());
    result.entries.push_back(std::move(e));
  }
  return result;
}

bool sufficient_equality(const ClassicalPair& from, const QuantumPair& to,
                         const ScanGrids& grids, double tol) {
  const WeightedSpectrum classical = classical_spectrum(from);
  const WeightedSpectrum quantum = relative_spectrum(to);
  std::vector<ConvexFn> fns;
  fns.push_back(resolvent_family(0.0));
  for (double t : grids.t) {
    if (t != 0.0) fns.push_back(resolvent_family(t));
  }
  for (double s : grids.s) {
    if (s < 1.0) fns.push_back(power_family(s));
  }
  return std::all_of(fns.begin(), fns.end(), [&](const ConvexFn& f) {
    return extended_distance(evaluate(f, classical), evaluate(f, quantum)) <= tol;
  });
}

FeasibilityReport sufficient_via_reverse_test(const ClassicalPair& from, const QuantumPair& to,
                                              double tol) {
  const ReverseTest rt = reverse_test(to);
  FeasibilityReport lp = classical_feasible(from, rt.q, tol);
  FeasibilityReport report;
  report.stage = "reverse-test";
  report.iterations = lp.iterations;
  report.lp_objective = lp.lp_objective;
  if (lp.status != Verdict::Feasible) {
    report.status = Verdict::Undetermined;
    report.note = "no transition matrix onto the reverse-test pair (" +
                  std::string(to_string(lp.status)) + "); not a proof of infeasibility";
    return report;
  }
  CQChannel channel = compose(*lp.transition, rt.channel);
  report.residual = reproduction_residual(channel, from, to);
  if (report.residual <= 10.0 * tol) {
    report.status = Verdict::Feasible;
    report.channel = std::move(channel);
    report.transition = std::move(lp.transition);
  } else {
    report.status = Verdict::Undetermined;
    report.note = "composed channel residual " + format_real(report.residual) + " above tolerance";
  }
  return report;
}

FeasibilityReport oracle_feasible(const ClassicalPair& from, const QuantumPair& to,
                                  const DecideConfig& config) {
  if (const auto basis = joint_eigenbasis(to)) {
    // Commuting targets: dephasing in the joint basis is a channel fixing
    // both states, so the problem is exactly classical.
    const ClassicalPair target(diagonal_in(*basis, to.sigma0), diagonal_in(*basis, to.sigma1));
    FeasibilityReport lp = classical_feasible(from, target, config.tol);
    FeasibilityReport report;
    report.stage = "oracle";
    report.iterations = lp.iterations;
    report.lp_objective = lp.lp_objective;
    report.certificate = lp.certificate;
    if (lp.status == Verdict::Feasible) {
      const auto d = basis->rows();
      std::vector<DensityOp> basis_states;
      for (Eigen::Index y = 0; y < d; ++y) {
        basis_states.push_back(DensityOp::pure(basis->col(y)));
      }
      CQChannel channel = compose(*lp.transition, CQChannel(std::move(basis_states)));
      report.residual = reproduction_residual(channel, from, to);
      report.status = report.residual <= 10.0 * config.tol ? Verdict::Feasible : Verdict::Undetermined;
      report.channel = std::move(channel);
      report.transition = std::move(lp.transition);
      return report;
    }
    report.status = lp.status;
    if (lp.status == Verdict::Infeasible && target.size() == from.size() && all_uniform(from.p1) &&
        all_uniform(target.p1)) {
      const FeasibilityReport maj = majorization_feasible(from.p0, target.p0);
      if (maj.status == Verdict::Infeasible) {
        report.certificate = *report.certificate + "; majorization fails at " + *maj.certificate;
      } else {
        report.note = "LP and majorization disagree";
        report.status = Verdict::Undetermined;
      }
    }
    return report;
  }
  FeasibilityReport report = cq_feasible(from, to, config.tol, config.max_iter, config.grids);
  report.stage = "oracle";
  return report;
}

FeasibilityReport decide(const ClassicalPair& from, const QuantumPair& to,
                         const DecideConfig& config) {
  if (numerical_rank(to.sigma1.op()) == 1) {
    FeasibilityReport report = pure_target_feasible(from, to, config.tol);
    report.stage = "pure-target";
    return report;
  }

  const ScanResult scan = necessary_scan(from, to, config.grids, config.scan_tol);
  if (const ScanEntry* v = scan.worst_violation()) {
    FeasibilityReport report;
    report.status = Verdict::Infeasible;
    report.stage = "scan";
    report.violation = Violation{v->label, v->lhs, v->rhs};
    return report;
  }

  FeasibilityReport rt = sufficient_via_reverse_test(from, to, config.tol);
  if (rt.status == Verdict::Feasible) return rt;

  return oracle_feasible(from, to, config);
}

}  // namespace cqmorph
