#include "nslab/linear.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "nslab/kernels.hpp"

namespace nslab {

namespace {

using Eigen::Matrix3cd;
using Eigen::MatrixXcd;
using Eigen::Vector3cd;
using kernels::for_each_index;

constexpr cplx kI{0.0, 1.0};

// Pade(13) scaling-and-squaring coefficients.
constexpr double kPadeB[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
constexpr double kPadeTheta = 5.371920351148152;

MatrixXcd expm_pade(const MatrixXcd& A) {
  const auto n = A.rows();
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kPadeTheta) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kPadeTheta)));
  const MatrixXcd As = A / std::pow(2.0, squarings);
  const MatrixXcd I = MatrixXcd::Identity(n, n);
  const MatrixXcd A2 = As * As;
  const MatrixXcd A4 = A2 * A2;
  const MatrixXcd A6 = A2 * A4;
  const MatrixXcd U =
      As * (A6 * (kPadeB[13] * A6 + kPadeB[11] * A4 + kPadeB[9] * A2) + kPadeB[7] * A6 +
            kPadeB[5] * A4 + kPadeB[3] * A2 + kPadeB[1] * I);
  const MatrixXcd V = A6 * (kPadeB[12] * A6 + kPadeB[10] * A4 + kPadeB[8] * A2) + kPadeB[6] * A6 +
                      kPadeB[4] * A4 + kPadeB[2] * A2 + kPadeB[0] * I;
  MatrixXcd F = (V - U).partialPivLu().solve(V + U);
  for (int s = 0; s < squarings; ++s) F = F * F;
  return F;
}

}  // namespace

MatrixXcd expm(const MatrixXcd& A) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(A);
  if (es.info() == Eigen::Success) {
    const MatrixXcd& V = es.eigenvectors();
    Eigen::JacobiSVD<MatrixXcd> svd(V);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin > 0.0 && sv(0) / smin < 1e4) {
      MatrixXcd D = es.eigenvalues().array().exp().matrix().asDiagonal();
      return V * D * V.inverse();
    }
  }
  // near-defective eigenbasis (acoustic/diffusive branch collision)
  return expm_pade(A);
}

void expm_phi12(const MatrixXcd& A, MatrixXcd& E, MatrixXcd& P1, MatrixXcd& P2) {
  const auto n = A.rows();
  MatrixXcd B = MatrixXcd::Zero(3 * n, 3 * n);
  B.topLeftCorner(n, n) = A;
  B.block(0, n, n, n) = MatrixXcd::Identity(n, n);
  B.block(n, 2 * n, n, n) = MatrixXcd::Identity(n, n);
  const MatrixXcd F = expm_pade(B);
  E = F.topLeftCorner(n, n);
  P1 = F.block(0, n, n, n);
  P2 = F.block(0, 2 * n, n, n);
}

MatrixXcd assemble_symbol(const std::array<double, 3>& xi, int dim, const DerivedConstants& c) {
  const int n = dim + 2;
  MatrixXcd M = MatrixXcd::Zero(n, n);
  double rho2 = 0.0;
  for (int a = 0; a < dim; ++a) rho2 += xi[static_cast<std::size_t>(a)] * xi[static_cast<std::size_t>(a)];
  for (int a = 0; a < dim; ++a) {
    const double xa = xi[static_cast<std::size_t>(a)];
    M(0, 1 + a) = -kI * xa;
    M(1 + a, 0) = -kI * xa;
    M(1 + a, dim + 1) = -kI * c.gamma * xa;
    M(dim + 1, 1 + a) = -kI * c.gamma * xa;
    for (int b = 0; b < dim; ++b) {
      const double xb = xi[static_cast<std::size_t>(b)];
      M(1 + a, 1 + b) += -c.lam_mu_tilde * xa * xb;
    }
    M(1 + a, 1 + a) += -c.mu_tilde * rho2;
  }
  M(dim + 1, dim + 1) = -c.beta * rho2;
  return M;
}

Matrix3cd radial_symbol(double rho, const DerivedConstants& c) {
  Matrix3cd M = Matrix3cd::Zero();
  const double nu_t = c.mu_tilde + c.lam_mu_tilde;  // equals 1 after rescaling
  M(0, 1) = -kI * rho;
  M(1, 0) = -kI * rho;
  M(1, 1) = -nu_t * rho * rho;
  M(1, 2) = -kI * c.gamma * rho;
  M(2, 1) = -kI * c.gamma * rho;
  M(2, 2) = -c.beta * rho * rho;
  return M;
}

double transverse_rate(double rho, const DerivedConstants& c) { return -c.mu_tilde * rho * rho; }

SemigroupTable build_semigroup_table(const Grid& g, double dt, const DerivedConstants& c, bool with_phis) {
  SemigroupTable table;
  table.dt = dt;
  table.with_phis = with_phis;

  std::vector<long long> keys;
  {
    std::map<long long, int> seen;
    for (std::size_t i = 0; i < g.size(); ++i) seen.emplace(g.m2(i), 0);
    for (const auto& [k, v] : seen) keys.push_back(k);
  }
  const double unit = g.fundamental();

  std::vector<Matrix3cd> E(keys.size()), P1(keys.size()), P2(keys.size());
  std::vector<double> Et(keys.size()), P1t(keys.size()), P2t(keys.size());
  for_each_index(keys.size(), [&](std::size_t k) {
    const double rho = unit * std::sqrt(static_cast<double>(keys[k]));
    const Matrix3cd A = dt * radial_symbol(rho, c);
    const double at = dt * transverse_rate(rho, c);
    if (with_phis) {
      MatrixXcd e, p1, p2;
      expm_phi12(A, e, p1, p2);
      E[k] = e;
      P1[k] = p1;
      P2[k] = p2;
      Et[k] = std::exp(at);
      P1t[k] = at == 0.0 ? 1.0 : std::expm1(at) / at;
      P2t[k] = at == 0.0 ? 0.5 : (std::expm1(at) - at) / (at * at);
    } else {
      E[k] = expm(A);
      Et[k] = std::exp(at);
    }
  });
  for (std::size_t k = 0; k < keys.size(); ++k) {
    table.E.emplace(keys[k], E[k]);
    table.Et.emplace(keys[k], Et[k]);
    if (with_phis) {
      table.P1.emplace(keys[k], P1[k]);
      table.P2.emplace(keys[k], P2[k]);
      table.P1t.emplace(keys[k], P1t[k]);
      table.P2t.emplace(keys[k], P2t[k]);
    }
  }
  return table;
}

namespace {

State apply_tables(const std::map<long long, Matrix3cd>& M3, const std::map<long long, double>& Ms,
                   const State& u) {
  const Grid& g = u.grid();
  const int d = g.dim();
  State out(g);
  out.time = u.time;
  auto& oa = out.a.coeffs();
  auto& ot = out.theta.coeffs();
  for_each_index(g.size(), [&](std::size_t i) {
    const double rho2 = g.xi2(i);
    const auto it3 = M3.find(g.m2(i));
    const auto its = Ms.find(g.m2(i));
    const Matrix3cd& E = it3->second;
    const double Et = its->second;
    const auto xi = g.xi(i);
    std::array<double, 3> xihat{0.0, 0.0, 0.0};
    if (rho2 > 0.0) {
      const double inv = 1.0 / std::sqrt(rho2);
      for (int a = 0; a < d; ++a) xihat[static_cast<std::size_t>(a)] = xi[static_cast<std::size_t>(a)] * inv;
    }
    cplx s{0.0, 0.0};
    for (int a = 0; a < d; ++a) s += xihat[static_cast<std::size_t>(a)] * u.v.comp[static_cast<std::size_t>(a)].coeffs()[i];
    const Vector3cd in(u.a.coeffs()[i], s, u.theta.coeffs()[i]);
    const Vector3cd res = E * in;
    oa[i] = res(0);
    ot[i] = res(2);
    for (int a = 0; a < d; ++a) {
      const cplx vp = u.v.comp[static_cast<std::size_t>(a)].coeffs()[i] - xihat[static_cast<std::size_t>(a)] * s;
      out.v.comp[static_cast<std::size_t>(a)].coeffs()[i] = Et * vp + xihat[static_cast<std::size_t>(a)] * res(1);
    }
  });
  return out;
}

}  // namespace

State apply_semigroup_table(const SemigroupTable& table, const State& u) {
  return apply_tables(table.E, table.Et, u);
}

State apply_phi1(const SemigroupTable& table, const State& u) {
  if (!table.with_phis) throw std::logic_error("apply_phi1: table built without phi matrices");
  return apply_tables(table.P1, table.P1t, u);
}

State apply_phi2(const SemigroupTable& table, const State& u) {
  if (!table.with_phis) throw std::logic_error("apply_phi2: table built without phi matrices");
  return apply_tables(table.P2, table.P2t, u);
}

State semigroup_apply(const State& u0, double t, const DerivedConstants& c) {
  if (t < 0.0) throw std::invalid_argument("semigroup_apply: negative time");
  if (t == 0.0) return u0;
  const SemigroupTable table = build_semigroup_table(u0.grid(), t, c, false);
  State out = apply_semigroup_table(table, u0);
  out.time = u0.time + t;
  return out;
}

double max_spectral_abscissa(const Grid& g, const DerivedConstants& c) {
  std::map<long long, int> seen;
  for (std::size_t i = 0; i < g.size(); ++i) seen.emplace(g.m2(i), 0);
  const double unit = g.fundamental();
  double worst = -1e300;
  for (const auto& [key, v] : seen) {
    (void)v;
    if (key == 0) continue;
    const double rho = unit * std::sqrt(static_cast<double>(key));
    Eigen::ComplexEigenSolver<Matrix3cd> es(radial_symbol(rho, c), false);
    for (int k = 0; k < 3; ++k) worst = std::max(worst, es.eigenvalues()(k).real());
    worst = std::max(worst, transverse_rate(rho, c));
  }
  return worst;
}

std::vector<EigenSweepRow> symbol_eigen_sweep(const std::vector<double>& rhos, int dim,
                                              const DerivedConstants& c) {
  std::vector<EigenSweepRow> rows;
  rows.reserve(rhos.size());
  for (double rho : rhos) {
    EigenSweepRow row;
    row.rho = rho;
    Eigen::ComplexEigenSolver<Matrix3cd> es(radial_symbol(rho, c), false);
    for (int k = 0; k < 3; ++k) {
      row.re.push_back(es.eigenvalues()(k).real());
      row.im.push_back(es.eigenvalues()(k).imag());
    }
    for (int k = 0; k < dim - 1; ++k) {
      row.re.push_back(transverse_rate(rho, c));
      row.im.push_back(0.0);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double evolution_operator_norm(double rho, double t, int dim, const DerivedConstants& c) {
  const Matrix3cd E = expm((t * radial_symbol(rho, c)).eval());
  Eigen::JacobiSVD<Matrix3cd> svd(E);
  double nrm = svd.singularValues()(0);
  if (dim > 1) nrm = std::max(nrm, std::exp(t * transverse_rate(rho, c)));
  return nrm;
}

DecayBoundFit fit_semigroup_decay_bound(int j_lo, int j_hi, int j0, const DerivedConstants& c,
                                        double C_cap, int rho_samples, int t_samples) {
  if (j_hi > j0) throw std::invalid_argument("fit_semigroup_decay_bound: blocks above j0 not admitted");
  if (j_lo > j_hi) throw std::invalid_argument("fit_semigroup_decay_bound: empty block range");

  struct Sample {
    int j;
    double t;
    double lognorm;
  };
  std::vector<Sample> samples;
  const double log_cap = std::log(C_cap);

  for (int j = j_lo; j <= j_hi; ++j) {
    const double two_j = std::ldexp(1.0, j);
    const double rho_lo = 0.75 * two_j, rho_hi = (8.0 / 3.0) * two_j;
    const double t_hi = 100.0 / (two_j * two_j), t_lo = 1e-3 / (two_j * two_j);
    for (int it = 0; it < t_samples; ++it) {
      const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(it) / (t_samples - 1));
      double worst = 0.0;
      for (int ir = 0; ir < rho_samples; ++ir) {
        const double rho = rho_lo * std::pow(rho_hi / rho_lo, static_cast<double>(ir) / (rho_samples - 1));
        worst = std::max(worst, evolution_operator_norm(rho, t, 3, c));
      }
      samples.push_back({j, t, std::log(worst)});
    }
  }

  // Largest c with lognorm + c * 4^j t <= log(C_cap) at every sample,
  // backed off by a rounding guard so the realized constant stays below
  // the cap.
  double c0 = 1e300;
  for (const auto& s : samples) {
    const double denom = std::ldexp(1.0, 2 * s.j) * s.t;
    c0 = std::min(c0, (log_cap - s.lognorm) / denom);
  }
  c0 *= 1.0 - 1e-9;
  DecayBoundFit fit;
  fit.c0 = std::max(0.0, c0);
  for (const auto& s : samples) {
    const double ratio = std::exp(s.lognorm + fit.c0 * std::ldexp(1.0, 2 * s.j) * s.t);
    fit.C = std::max(fit.C, ratio);
    auto [it, fresh] = fit.per_j_C.emplace(s.j, ratio);
    if (!fresh) it->second = std::max(it->second, ratio);
  }
  return fit;
}

}  // namespace nslab
