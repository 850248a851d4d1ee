#include "martinet/moser.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "martinet/exterior.hpp"
#include "martinet/normal_form.hpp"

namespace martinet {

namespace {

std::vector<std::vector<long>> pascal(int n) {
  std::vector<std::vector<long>> c(n + 1, std::vector<long>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0);
  }
  return c;
}

Idx complement_of(int var, int dim) {
  Idx out;
  out.reserve(static_cast<size_t>(dim - 1));
  for (int j = 0; j < dim; ++j)
    if (j != var) out.push_back(j);
  return out;
}

}  // namespace

MoserField moser_field(const DiffForm& omega0, const DiffForm& omega1, const DiffForm& lambda,
                       const TruncatedPoly& divisor, const TruncatedPoly& locus) {
  require_same_chart(omega0.chart(), omega1.chart(), "moser_field");
  require_same_chart(omega0.chart(), lambda.chart(), "moser_field");
  require_same_chart(omega0.chart(), divisor.chart(), "moser_field");
  require_same_chart(omega0.chart(), locus.chart(), "moser_field");
  const Chart& c = omega0.chart();
  const int dim = c.dim();
  if (dim < 2 || dim % 2 != 0) throw DomainError("moser_field: even-dimensional chart required");
  if (omega0.degree() != 2 || omega1.degree() != 2 || lambda.degree() != 1)
    throw DomainError("moser_field: expected 2-form endpoints and a 1-form primitive");
  if (!ext_d(omega0).is_zero() || !ext_d(omega1).is_zero())
    throw DomainError("moser_field: closed forms required");
  if (divisor.is_zero()) throw DomainError("moser_field: zero divisor");
  const int n = dim / 2;
  const DiffForm delta = omega1 - omega0;
  if (!(ext_d(lambda) == delta))
    throw DomainError("moser_field: lambda is not a primitive of the difference");

  const auto choose = pascal(n);
  std::vector<DiffForm> w0pow(static_cast<size_t>(n) + 1), dpow(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    w0pow[static_cast<size_t>(k)] = wedge_power(omega0, k);
    dpow[static_cast<size_t>(k)] = wedge_power(delta, k);
  }

  MoserField out;
  out.chart = c;
  out.divisor = divisor;
  out.locus = locus;
  out.omega0 = omega0;
  out.omega1 = omega1;

  out.den.resize(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const DiffForm top = wedge(w0pow[static_cast<size_t>(n - k)], dpow[static_cast<size_t>(k)]);
    const TruncatedPoly fk = Rational(choose[n][k]) * top_coefficient(top);
    auto q = divide_exact(fk, divisor);
    if (!q)
      throw DomainError("moser_field: path volume density is not divisible by the factor");
    out.den[static_cast<size_t>(k)] = *q;
  }

  out.num.assign(static_cast<size_t>(dim),
                 std::vector<TruncatedPoly>(static_cast<size_t>(n),
                                            TruncatedPoly::zero(c, kExactJet)));
  for (int k = 0; k < n; ++k) {
    const DiffForm nk =
        Rational(-static_cast<long>(n) * choose[n - 1][k]) *
        wedge(lambda, wedge(w0pow[static_cast<size_t>(n - 1 - k)], dpow[static_cast<size_t>(k)]));
    for (int i = 0; i < dim; ++i) {
      TruncatedPoly ci = nk.coeff(complement_of(i, dim));
      if (i % 2 != 0) ci = -ci;
      auto q = divide_exact(ci, divisor);
      if (!q) throw DomainError("moser_field: field numerator is not divisible by the factor");
      out.num[static_cast<size_t>(i)][static_cast<size_t>(k)] = *q;
    }
  }
  return out;
}

MoserField moser_collar_field(const DiffForm& omega0, const DiffForm& omega1, int pivot) {
  const Chart& c = omega0.chart();
  const int dim = c.dim();
  if (dim < 2 || dim % 2 != 0)
    throw DomainError("moser_collar_field: even-dimensional chart required");
  const int n = dim / 2;
  const DiffForm beta = relative_primitive_p1(omega1 - omega0, pivot);
  const TruncatedPoly p = TruncatedPoly::variable(c, pivot, kExactJet);
  const DiffForm lambda = (p * p) * beta;
  // the density of a degenerate path carries the collar variable; for a
  // nondegenerate path nothing is divided out
  const TruncatedPoly f0 = top_coefficient(wedge_power(omega0, n));
  const TruncatedPoly divisor =
      divide_exact(f0, p).has_value() ? p : TruncatedPoly::constant(c, 1, kExactJet);
  return moser_field(omega0, omega1, lambda, divisor, p);
}

MoserField moser_frame_field(const DiffForm& omega0, const DiffForm& omega1) {
  const Decomposition d0 = decompose(omega0);
  const Decomposition d1 = decompose(omega1);
  if (d0.pivot != d1.pivot) throw DomainError("moser_frame_field: collar variables differ");
  if (!(d0.martinet.omega_flat == omega0) || !(d1.martinet.omega_flat == omega1))
    throw DomainError("moser_frame_field: straighten the degeneracy loci first");
  if (!(d0.sigma == d1.sigma)) throw DomainError("moser_frame_field: restrictions differ");
  if (!(d0.theta == d1.theta))
    throw DomainError("moser_frame_field: remove the quadratic collar difference first");
  const Chart& c = omega0.chart();
  const TruncatedPoly p = TruncatedPoly::variable(c, d0.pivot, kExactJet);
  const DiffForm lambda = p * lift_from_hyperplane(d1.alpha - d0.alpha, c, d0.pivot);
  return moser_field(omega0, omega1, lambda, p, p);
}

MoserField moser_volume_field(const DiffForm& omega0, const DiffForm& omega1) {
  const Chart& c = omega0.chart();
  const int dim = c.dim();
  if (dim < 2 || dim % 2 != 0)
    throw DomainError("moser_volume_field: even-dimensional chart required");
  const int n = dim / 2;
  const TruncatedPoly f = top_coefficient(wedge_power(omega0, n));
  if (f.is_zero()) throw DomainError("moser_volume_field: zero volume density");
  const HomotopyPrimitive hp = homotopy_primitive(omega1 - omega0, f);
  return moser_field(omega0, omega1, hp.gamma, f, f);
}

namespace {

// Plain double view of an exact polynomial, for the inner integration loop.
struct CompiledPoly {
  struct Term {
    Multi exps;
    double c = 0.0;
  };
  std::vector<Term> terms;

  double eval(const double* x) const {
    double s = 0.0;
    for (const Term& t : terms) {
      double m = t.c;
      for (size_t j = 0; j < t.exps.size(); ++j)
        for (int e = 0; e < t.exps[j]; ++e) m *= x[j];
      s += m;
    }
    return s;
  }
};

CompiledPoly compile(const TruncatedPoly& p) {
  CompiledPoly out;
  out.terms.reserve(p.terms().size());
  for (const auto& [m, c] : p.terms()) out.terms.push_back({m, to_double(c)});
  return out;
}

struct CompiledField {
  int dim = 0;
  std::vector<std::vector<CompiledPoly>> num;                // [i][k]
  std::vector<CompiledPoly> den;                             // [k]
  std::vector<std::vector<std::vector<CompiledPoly>>> dnum;  // [i][j][k]
  std::vector<std::vector<CompiledPoly>> dden;               // [j][k]

  explicit CompiledField(const MoserField& f) : dim(f.chart.dim()) {
    const size_t d = static_cast<size_t>(dim);
    num.resize(d);
    dnum.assign(d, std::vector<std::vector<CompiledPoly>>(d));
    for (size_t i = 0; i < d; ++i) {
      for (const TruncatedPoly& p : f.num[i]) num[i].push_back(compile(p));
      for (size_t j = 0; j < d; ++j)
        for (const TruncatedPoly& p : f.num[i])
          dnum[i][j].push_back(compile(partial(p, static_cast<int>(j))));
    }
    for (const TruncatedPoly& p : f.den) den.push_back(compile(p));
    dden.resize(d);
    for (size_t j = 0; j < d; ++j)
      for (const TruncatedPoly& p : f.den) dden[j].push_back(compile(partial(p, static_cast<int>(j))));
  }

  static double horner(const std::vector<CompiledPoly>& coeffs, const double* x, double t) {
    double s = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) s = s * t + coeffs[k].eval(x);
    return s;
  }

  // V and its spatial Jacobian at (x, t); false when the denominator is
  // smaller than the floor.
  bool eval(const double* x, double t, double den_floor, double* v, double* dv) const {
    const double q = horner(den, x, t);
    if (std::abs(q) < den_floor) return false;
    for (int i = 0; i < dim; ++i) {
      const size_t ii = static_cast<size_t>(i);
      const double p = horner(num[ii], x, t);
      v[i] = p / q;
      for (int j = 0; j < dim; ++j) {
        const double dp = horner(dnum[ii][static_cast<size_t>(j)], x, t);
        const double dq = horner(dden[static_cast<size_t>(j)], x, t);
        dv[i * dim + j] = (dp * q - p * dq) / (q * q);
      }
    }
    return true;
  }
};

// State layout: x (dim), then the frame J (dim*dim, row-major), J' = DV J.
bool flow_rhs(const CompiledField& f, double t, const std::vector<double>& s, double den_floor,
              std::vector<double>& out) {
  const int d = f.dim;
  std::vector<double> v(static_cast<size_t>(d)), dv(static_cast<size_t>(d * d));
  if (!f.eval(s.data(), t, den_floor, v.data(), dv.data())) return false;
  for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int m = 0; m < d; ++m)
        acc += dv[static_cast<size_t>(i * d + m)] * s[static_cast<size_t>(d + m * d + j)];
      out[static_cast<size_t>(d + i * d + j)] = acc;
    }
  return true;
}

bool rk4_to_time_one(const CompiledField& f, std::vector<double>& s, int steps,
                     double den_floor) {
  const double h = 1.0 / steps;
  const size_t len = s.size();
  std::vector<double> k1(len), k2(len), k3(len), k4(len), tmp(len);
  for (int step = 0; step < steps; ++step) {
    const double t = step * h;
    if (!flow_rhs(f, t, s, den_floor, k1)) return false;
    for (size_t i = 0; i < len; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
    if (!flow_rhs(f, t + 0.5 * h, tmp, den_floor, k2)) return false;
    for (size_t i = 0; i < len; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
    if (!flow_rhs(f, t + 0.5 * h, tmp, den_floor, k3)) return false;
    for (size_t i = 0; i < len; ++i) tmp[i] = s[i] + h * k3[i];
    if (!flow_rhs(f, t + h, tmp, den_floor, k4)) return false;
    for (size_t i = 0; i < len; ++i)
      s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  for (double x : s)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

FlowReport verify_flow(const MoserField& field, const FlowOptions& opt) {
  const int dim = field.chart.dim();
  if (opt.grid < 1 || opt.steps < 1 || opt.box <= 0.0)
    throw DomainError("verify_flow: invalid options");
  double budget = 1.0;
  for (int j = 0; j < dim; ++j) budget *= opt.grid;
  if (budget > 2e5) throw DomainError("verify_flow: grid too large for this dimension");

  const CompiledField compiled(field);
  const CompiledPoly locus = compile(field.locus);

  // coordinates the locus actually depends on stay put under jitter so that
  // on-locus samples remain on it
  std::vector<bool> locus_var(static_cast<size_t>(dim), false);
  for (int j = 0; j < dim; ++j)
    if (!partial(field.locus, j).is_zero()) locus_var[static_cast<size_t>(j)] = true;

  std::vector<double> ticks(static_cast<size_t>(opt.grid), 0.0);
  for (int i = 0; i < opt.grid; ++i)
    ticks[static_cast<size_t>(i)] =
        opt.grid == 1 ? 0.0 : -opt.box + 2.0 * opt.box * i / (opt.grid - 1);
  const double cell = opt.grid > 1 ? 2.0 * opt.box / (opt.grid - 1) : opt.box;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4);

  FlowReport rep;
  std::vector<int> digit(static_cast<size_t>(dim), 0);
  while (true) {
    std::vector<double> start(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) start[static_cast<size_t>(j)] = ticks[static_cast<size_t>(digit[static_cast<size_t>(j)])];
    const bool on_locus_pre = std::abs(locus.eval(start.data())) < 1e-13;
    if (opt.seed != 0) {
      for (int j = 0; j < dim; ++j) {
        const double off = jitter(rng) * cell;
        if (on_locus_pre && locus_var[static_cast<size_t>(j)]) continue;
        start[static_cast<size_t>(j)] =
            std::clamp(start[static_cast<size_t>(j)] + off, -opt.box, opt.box);
      }
    }
    const bool on_locus = std::abs(locus.eval(start.data())) < 1e-13;

    FlowPoint pt;
    pt.start = start;
    std::vector<double> state(static_cast<size_t>(dim + dim * dim), 0.0);
    for (int j = 0; j < dim; ++j) state[static_cast<size_t>(j)] = start[static_cast<size_t>(j)];
    for (int j = 0; j < dim; ++j) state[static_cast<size_t>(dim + j * dim + j)] = 1.0;

    if (rk4_to_time_one(compiled, state, opt.steps, opt.den_floor)) {
      pt.end.assign(state.begin(), state.begin() + dim);
      Eigen::MatrixXd jac(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) jac(i, j) = state[static_cast<size_t>(dim + i * dim + j)];
      const Eigen::MatrixXd m1 = form_matrix_at(field.omega1, pt.end);
      const Eigen::MatrixXd m0 = form_matrix_at(field.omega0, pt.start);
      pt.residual = (jac.transpose() * m1 * jac - m0).cwiseAbs().maxCoeff();
      if (on_locus) {
        pt.locus_drift = std::abs(locus.eval(pt.end.data()));
        rep.locus_points += 1;
        rep.max_locus_drift = std::max(rep.max_locus_drift, pt.locus_drift);
      }
      if (!std::isfinite(pt.residual)) pt.failed = true;
    } else {
      pt.failed = true;
    }

    if (pt.failed) {
      rep.failures += 1;
      if (rep.failures == 1) rep.worst = pt;  // surface the first failure
    } else {
      rep.max_residual = std::max(rep.max_residual, pt.residual);
      if (rep.failures == 0 && (rep.points == 0 || pt.residual >= rep.worst.residual))
        rep.worst = pt;
    }
    rep.points += 1;

    int j = 0;
    for (; j < dim; ++j) {
      digit[static_cast<size_t>(j)] += 1;
      if (digit[static_cast<size_t>(j)] < opt.grid) break;
      digit[static_cast<size_t>(j)] = 0;
    }
    if (j == dim) break;
  }

  rep.verified = rep.failures == 0 && rep.max_residual <= opt.tol &&
                 rep.max_locus_drift <= opt.locus_tol;
  return rep;
}

}  // namespace martinet
