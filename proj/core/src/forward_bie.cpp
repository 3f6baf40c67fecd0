#include "dsm/forward_bie.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "dsm/specfun.hpp"

namespace dsm {
namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

constexpr double kEuler = 0.57721566490153286061;

// Weights R_j(t) of the product rule for int ln(4 sin^2((t - s)/2)) f(s) ds on
// 2n equispaced nodes, as a function of the offset t - t_j.
double log_weight(int n, double offset) {
  double s = 0.0;
  for (int m = 1; m < n; ++m) s += std::cos(m * offset) / m;
  return -2.0 * kPi / n * s - kPi / (static_cast<double>(n) * n) * std::cos(n * offset);
}

// Kernel pieces between a target parameter and one source node, split as
// K(t, s) = K1(t, s) ln(4 sin^2((t - s)/2)) + K2(t, s).
//   L:  2 dPhi/dnu(y) |x'(s)|        M:  2 Phi |x'(s)|
//   Lp: 2 dPhi/dnu(x) |x'(s)|        Mn: 2 Phi nu(t).nu(s) |x'(s)|
struct KernelParts {
  double l1, m1, lp1, mn1;
  Complex l2, m2, lp2, mn2;
};

struct Target {
  double t;
  Vec2 x, dx, ddx, nu;
  double jac;
};

Target make_target(const ParametricBoundary &b, double t) {
  const Vec2 dx = b.tangent(t);
  return {t, b.point(t), dx, b.second_derivative(t), b.normal(t), norm(dx)};
}

KernelParts kernel_parts(double k, const Target &a, const Target &s) {
  KernelParts p{};
  const double offset = a.t - s.t;
  const double sin_half = std::sin(0.5 * offset);
  if (std::abs(sin_half) < 1e-13) {
    const double c = (s.dx.y * s.ddx.x - s.dx.x * s.ddx.y) / (2.0 * kPi * s.jac * s.jac);
    p.l1 = 0.0;
    p.lp1 = 0.0;
    p.l2 = c;
    p.lp2 = c;
    p.m1 = -s.jac / (2.0 * kPi);
    p.mn1 = p.m1;
    p.m2 = (0.5 * kI - kEuler / kPi - std::log(0.5 * k * s.jac) / kPi) * s.jac;
    p.mn2 = p.m2;
    return p;
  }
  const Vec2 diff = a.x - s.x;
  const double r = norm(diff);
  const specfun::BesselJY01 h = specfun::bessel_jy01(k * r);
  const double lg = std::log(4.0 * sin_half * sin_half);
  const double g = s.dx.y * diff.x - s.dx.x * diff.y;  // n(s) . (x(t) - x(s))
  const double gp = -dot(a.nu, diff) * s.jac;
  const double nn = dot(a.nu, s.nu);

  const Complex lfull = 0.5 * kI * k * g * h.h1() / r;
  const Complex lpfull = 0.5 * kI * k * gp * h.h1() / r;
  const Complex mfull = 0.5 * kI * h.h0() * s.jac;
  p.l1 = -k / (2.0 * kPi) * g * h.j1 / r;
  p.lp1 = -k / (2.0 * kPi) * gp * h.j1 / r;
  p.m1 = -h.j0 * s.jac / (2.0 * kPi);
  p.mn1 = p.m1 * nn;
  p.l2 = lfull - p.l1 * lg;
  p.lp2 = lpfull - p.lp1 * lg;
  p.m2 = mfull - p.m1 * lg;
  p.mn2 = mfull * nn - p.mn1 * lg;
  return p;
}

// Discrete boundary operators on the nodes, each acting on nodal values:
//   S v = int Phi v ds, K v = int dPhi/dnu(y) v ds, Kp v = int dPhi/dnu(x) v ds
//   Sn v = k^2 int Phi nu(x).nu(y) v ds
//   W v = int Phi(x(t), x(s)) v(s) ds (no Jacobian)
struct Operators {
  MatrixXcd s, kd, kp, sn, w;
  MatrixXd d;  // trigonometric differentiation in t
  Eigen::VectorXd jac;
};

Operators assemble(const std::vector<Target> &nodes, double k) {
  const int size = static_cast<int>(nodes.size());
  const int n = size / 2;
  const double w = kPi / n;
  std::vector<double> rweight(static_cast<std::size_t>(size));
  for (int m = 0; m < size; ++m) rweight[static_cast<std::size_t>(m)] = log_weight(n, kPi * m / n);

  Operators op;
  op.s.resize(size, size);
  op.kd.resize(size, size);
  op.kp.resize(size, size);
  op.sn.resize(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const KernelParts p = kernel_parts(k, nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
      const double rw = rweight[static_cast<std::size_t>(std::abs(i - j))];
      op.s(i, j) = 0.5 * (rw * p.m1 + w * p.m2);
      op.kd(i, j) = 0.5 * (rw * p.l1 + w * p.l2);
      op.kp(i, j) = 0.5 * (rw * p.lp1 + w * p.lp2);
      op.sn(i, j) = 0.5 * k * k * (rw * p.mn1 + w * p.mn2);
    }
  }
  op.jac.resize(size);
  for (int j = 0; j < size; ++j) op.jac(j) = nodes[static_cast<std::size_t>(j)].jac;
  op.w = op.s * op.jac.cwiseInverse().asDiagonal();

  op.d = MatrixXd::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (i == j) continue;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      op.d(i, j) = 0.5 * sign / std::tan(0.5 * kPi * (i - j) / n);
    }
  }
  return op;
}

// Normal derivative of the double layer applied to the columns of v:
//   T v = (1/|x'|) d/dt W (dv/dt) + Sn v
MatrixXcd apply_hypersingular(const Operators &op, const MatrixXcd &v) {
  const MatrixXcd dv = op.d.cast<Complex>() * v;
  const MatrixXcd wdv = op.w * dv;
  MatrixXcd out = op.d.cast<Complex>() * wdv;
  out = op.jac.cwiseInverse().asDiagonal() * out;
  out += op.sn * v;
  return out;
}

double reciprocal_condition(const Eigen::PartialPivLU<MatrixXcd> &lu) { return lu.rcond(); }

}  // namespace

BoundaryCondition BoundaryCondition::impedance(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("impedance lambda must be positive");
  return {BoundaryKind::impedance, lambda};
}

double BoundaryCondition::gamma_d() const {
  switch (kind) {
    case BoundaryKind::soft:
      return -2.0;
    case BoundaryKind::hard:
      return 2.0;
    case BoundaryKind::impedance:
      break;
  }
  throw DomainError("gamma_D is defined for soft and hard boundaries only");
}

int minimum_boundary_nodes(const ParametricBoundary &b, double k) {
  const double length = b.with_nodes(std::max(b.node_count(), 512)).perimeter();
  return static_cast<int>(std::ceil(10.0 * k * length / (2.0 * kPi) - 1e-9));
}

BoundarySolution solve_obstacle(const ParametricBoundary &b, const BoundaryCondition &bc, double k, Vec2 theta) {
  const Vec2 one[] = {theta};
  return std::move(solve_obstacle(b, bc, k, one).front());
}

std::vector<BoundarySolution> solve_obstacle(const ParametricBoundary &b, const BoundaryCondition &bc, double k,
                                             std::span<const Vec2> thetas) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  if (bc.kind == BoundaryKind::impedance && !(bc.lambda > 0.0)) {
    throw DomainError("impedance lambda must be positive");
  }
  const int size = b.node_count();
  const int needed = minimum_boundary_nodes(b, k);
  if (size < needed) {
    throw SolverError("solve_obstacle: " + std::to_string(size) + " boundary nodes under-resolve k = " +
                      std::to_string(k) + " (need at least " + std::to_string(needed) + ")");
  }

  const std::vector<BoundaryNode> nodes = boundary_sample(b);
  std::vector<Target> targets;
  targets.reserve(nodes.size());
  for (const BoundaryNode &nd : nodes) targets.push_back(make_target(b, nd.t));
  const Operators op = assemble(targets, k);

  const auto m = static_cast<Eigen::Index>(thetas.size());
  MatrixXcd uin(size, m);
  MatrixXcd dudn_in(size, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Vec2 th = thetas[static_cast<std::size_t>(c)];
    for (int i = 0; i < size; ++i) {
      const BoundaryNode &nd = nodes[static_cast<std::size_t>(i)];
      const Complex e = cis(k * dot(nd.point, th));
      uin(i, c) = e;
      dudn_in(i, c) = kI * k * dot(nd.normal, th) * e;
    }
  }

  const MatrixXcd id = MatrixXcd::Identity(size, size);
  MatrixXcd a;
  MatrixXcd rhs;
  Complex beta = 0.0;
  const Complex alpha = kI / k;
  const double eta = k;
  if (bc.kind == BoundaryKind::soft) {
    a = id + 2.0 * (op.kd - kI * eta * op.s);
    rhs = -2.0 * uin;
  } else {
    if (bc.kind == BoundaryKind::impedance) beta = -kI * bc.lambda;
    const MatrixXcd t = apply_hypersingular(op, id);
    a = 0.5 * (1.0 + alpha * beta) * id - op.kd + beta * op.s + alpha * (beta * op.kp - t);
    rhs = uin + alpha * dudn_in;
  }

  const Eigen::PartialPivLU<MatrixXcd> lu(a);
  const double rc = reciprocal_condition(lu);
  if (!(rc > 1e-13)) {
    throw SolverError("solve_obstacle: near-singular system at k = " + std::to_string(k) +
                      ", reciprocal condition estimate " + std::to_string(rc));
  }
  const MatrixXcd x = lu.solve(rhs);

  MatrixXcd u;
  MatrixXcd dudn;
  if (bc.kind == BoundaryKind::soft) {
    u = uin + 0.5 * x + op.kd * x - kI * eta * (op.s * x);
    dudn = dudn_in + apply_hypersingular(op, x) - kI * eta * (op.kp * x - 0.5 * x);
  } else {
    u = x;
    dudn = beta * x;
  }

  std::vector<BoundarySolution> out;
  out.reserve(thetas.size());
  for (Eigen::Index c = 0; c < m; ++c) {
    BoundarySolution s{b, bc, k, thetas[static_cast<std::size_t>(c)], nodes, {}, {}, {}, 0.0, rc};
    const VectorXcd col = x.col(c);
    s.density.assign(col.data(), col.data() + size);
    s.u.assign(u.col(c).data(), u.col(c).data() + size);
    s.dudn.assign(dudn.col(c).data(), dudn.col(c).data() + size);
    s.equation_residual = (a * col - rhs.col(c)).norm() / rhs.col(c).norm();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TransmissionSolution> solve_transmission(const ParametricBoundary &b, double q, double k,
                                                     std::span<const Vec2> thetas) {
  if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
  if (!(q > 0.0)) throw DomainError("refractive index must be positive");
  const double k1 = k * std::sqrt(q);
  const int size = b.node_count();
  const int needed = minimum_boundary_nodes(b, std::max(k, k1));
  if (size < needed) {
    throw SolverError("solve_transmission: " + std::to_string(size) + " boundary nodes under-resolve k = " +
                      std::to_string(k) + " with q = " + std::to_string(q) + " (need at least " +
                      std::to_string(needed) + ")");
  }

  const std::vector<BoundaryNode> nodes = boundary_sample(b);
  std::vector<Target> targets;
  targets.reserve(nodes.size());
  for (const BoundaryNode &nd : nodes) targets.push_back(make_target(b, nd.t));
  const Operators outer = assemble(targets, k);
  const Operators inner = assemble(targets, k1);

  const MatrixXcd id = MatrixXcd::Identity(size, size);
  MatrixXcd a(2 * size, 2 * size);
  a.topLeftCorner(size, size) = id - outer.kd + inner.kd;
  a.topRightCorner(size, size) = outer.s - inner.s;
  a.bottomLeftCorner(size, size) = apply_hypersingular(inner, id) - apply_hypersingular(outer, id);
  a.bottomRightCorner(size, size) = id + outer.kp - inner.kp;

  const auto m = static_cast<Eigen::Index>(thetas.size());
  MatrixXcd rhs(2 * size, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Vec2 th = thetas[static_cast<std::size_t>(c)];
    for (int i = 0; i < size; ++i) {
      const BoundaryNode &nd = nodes[static_cast<std::size_t>(i)];
      const Complex e = cis(k * dot(nd.point, th));
      rhs(i, c) = e;
      rhs(size + i, c) = kI * k * dot(nd.normal, th) * e;
    }
  }

  const Eigen::PartialPivLU<MatrixXcd> lu(a);
  const double rc = reciprocal_condition(lu);
  if (!(rc > 1e-13)) {
    throw SolverError("solve_transmission: near-singular system at k = " + std::to_string(k) +
                      ", reciprocal condition estimate " + std::to_string(rc));
  }
  const MatrixXcd x = lu.solve(rhs);

  std::vector<TransmissionSolution> out;
  out.reserve(thetas.size());
  for (Eigen::Index c = 0; c < m; ++c) {
    TransmissionSolution s{b, q, k, thetas[static_cast<std::size_t>(c)], nodes, {}, {}, 0.0, rc};
    const VectorXcd col = x.col(c);
    s.u.assign(col.data(), col.data() + size);
    s.dudn.assign(col.data() + size, col.data() + 2 * size);
    s.equation_residual = (a * col - rhs.col(c)).norm() / rhs.col(c).norm();
    out.push_back(std::move(s));
  }
  return out;
}

Complex far_field_from_traces(std::span<const BoundaryNode> nodes, std::span<const Complex> u,
                              std::span<const Complex> dudn, double k, Vec2 xhat) {
  if (u.size() != nodes.size() || dudn.size() != nodes.size()) {
    throw DomainError("trace arrays do not match the node count");
  }
  Complex sum = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const BoundaryNode &nd = nodes[j];
    const Complex e = cis(-k * dot(xhat, nd.point));
    sum += (-kI * k * dot(xhat, nd.normal) * u[j] - dudn[j]) * e * nd.jacobian;
  }
  return sum * (2.0 * kPi / static_cast<double>(nodes.size()));
}

Complex far_field_from_traces(const BoundarySolution &sol, Vec2 xhat) {
  return far_field_from_traces(sol.nodes, sol.u, sol.dudn, sol.k, xhat);
}

Complex far_field_from_traces(const TransmissionSolution &sol, Vec2 xhat) {
  return far_field_from_traces(sol.nodes, sol.u, sol.dudn, sol.k, xhat);
}

Complex soft_boundary_field(const BoundarySolution &sol, double t) {
  if (sol.condition.kind != BoundaryKind::soft) throw DomainError("soft_boundary_field needs a soft solution");
  const int size = static_cast<int>(sol.nodes.size());
  const int n = size / 2;
  const double k = sol.k;
  const Target a = make_target(sol.boundary, t);

  Complex psi_t = 0.0;
  Complex layer = 0.0;
  for (int j = 0; j < size; ++j) {
    const BoundaryNode &nd = sol.nodes[static_cast<std::size_t>(j)];
    const double offset = t - nd.t;
    const double sh = std::sin(0.5 * offset);
    // Trigonometric cardinal function for an even number of nodes.
    const double card =
        std::abs(sh) < 1e-14 ? 1.0 : std::sin(0.5 * size * offset) * std::cos(0.5 * offset) / (size * sh);
    psi_t += card * sol.density[static_cast<std::size_t>(j)];

    const KernelParts p = kernel_parts(k, a, make_target(sol.boundary, nd.t));
    const double rw = log_weight(n, offset);
    const Complex kernel1 = p.l1 - kI * k * p.m1;
    const Complex kernel2 = p.l2 - kI * k * p.m2;
    layer += 0.5 * (rw * kernel1 + kPi / n * kernel2) * sol.density[static_cast<std::size_t>(j)];
  }
  const Complex uin = cis(k * dot(a.x, sol.theta));
  return uin + 0.5 * psi_t + layer;
}

}  // namespace dsm
