#include "nslab/nonlinear.hpp"

#include <cmath>
#include <stdexcept>

#include "nslab/kernels.hpp"

namespace nslab {

namespace {

using kernels::for_each_index;

using Padded = PaddedPhysical;

std::vector<double> zeros_like(const Padded& p) { return std::vector<double>(p.values.size(), 0.0); }

void fma_into(std::vector<double>& acc, const Padded& x, const Padded& y, double scale = 1.0) {
  for_each_index(acc.size(), [&](std::size_t i) { acc[i] += scale * x.values[i] * y.values[i]; });
}

SpectralField analyze(const Grid& g, int np, const std::vector<double>& vals) {
  return from_padded_values(g, np, vals);
}

SpectralField product(const Grid& g, int np, const Padded& x, const Padded& y, double scale = 1.0) {
  std::vector<double> acc(x.values.size());
  for_each_index(acc.size(), [&](std::size_t i) { acc[i] = scale * x.values[i] * y.values[i]; });
  return analyze(g, np, acc);
}

void check_density(const State& s) {
  if (!(min_density(s) > 0.0))
    throw std::invalid_argument("nonlinear terms: density 1 + a must stay positive");
}

// Velocity gradient dv[i][j] = d_i v_j and derived tensors, all spectral.
struct VelocityJets {
  std::vector<std::vector<SpectralField>> dv;  // [i][j]
  SpectralField divv;
  std::vector<std::vector<SpectralField>> D;  // symmetrized
  VectorField Av;                             // mu_tilde lap v + lam_mu_tilde grad div v

  VelocityJets(const State& s, const DerivedConstants& c) {
    const Grid& g = s.grid();
    const int d = g.dim();
    dv.assign(static_cast<std::size_t>(d), {});
    for (int i = 0; i < d; ++i) dv[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(d), SpectralField(g));
    for (int j = 0; j < d; ++j) {
      const VectorField gj = grad(s.v.comp[static_cast<std::size_t>(j)]);
      for (int i = 0; i < d; ++i) dv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = gj.comp[static_cast<std::size_t>(i)];
    }
    divv = SpectralField(g);
    for (int i = 0; i < d; ++i) divv = divv + dv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    D.assign(static_cast<std::size_t>(d), {});
    for (int i = 0; i < d; ++i) {
      D[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(d), SpectralField(g));
      for (int j = 0; j < d; ++j)
        D[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            0.5 * (dv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + dv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    }
    const SpectralField gdiv_owner = divv;
    const VectorField gdiv = grad(divv);
    Av = VectorField(g);
    for (int j = 0; j < d; ++j)
      Av.comp[static_cast<std::size_t>(j)] =
          c.mu_tilde * laplacian(s.v.comp[static_cast<std::size_t>(j)]) + c.lam_mu_tilde * gdiv.comp[static_cast<std::size_t>(j)];
    (void)gdiv_owner;
  }
};

double dissipation_weight(const PhysicalModel& model, const DerivedConstants& c) {
  return 1.0 / (c.nu * c.chi0) * std::sqrt(1.0 / (model.T_inf * model.C_v));
}

}  // namespace

NonlinearTerms compute_fgk(const State& s, const PhysicalModel& model, const DerivedConstants& c) {
  check_density(s);
  const Grid& g = s.grid();
  const int d = g.dim();
  const int np = padded_points(g);
  const CoefficientSet cs = make_coefficients(model, c);
  const double inv_nu = 1.0 / c.nu;

  const VelocityJets jets(s, c);
  const VectorField grad_a = grad(s.a);
  const VectorField grad_th = grad(s.theta);
  const SpectralField lap_th = laplacian(s.theta);

  // pointwise coefficient fields
  const SpectralField Ia = compose(s.a, cs.I);
  const SpectralField K1a = compose(s.a, cs.K1);
  const SpectralField K2a = compose(s.a, cs.K2);
  const SpectralField K3a = compose(s.a, cs.K3);
  const SpectralField Kt1a = compose(s.a, cs.Kt1);
  const SpectralField Kt2a = compose(s.a, cs.Kt2);
  const SpectralField mu_ta = compose(s.a, cs.mu_t);
  const SpectralField lam_ta = compose(s.a, cs.lam_t);
  const SpectralField kap_ta = compose(s.a, cs.kap_t);
  const SpectralField inva = compose(s.a, [&](double a) { return inv_nu / (1.0 + a); });
  const SpectralField mu_over = compose(s.a, cs.mu_over);
  const SpectralField lam_over = compose(s.a, cs.lam_over);

  // padded representations of everything that enters a product
  const Padded pa = to_padded(s.a);
  const Padded pth = to_padded(s.theta);
  std::vector<Padded> pv, pga, pgth;
  for (int i = 0; i < d; ++i) {
    pv.push_back(to_padded(s.v.comp[static_cast<std::size_t>(i)]));
    pga.push_back(to_padded(grad_a.comp[static_cast<std::size_t>(i)]));
    pgth.push_back(to_padded(grad_th.comp[static_cast<std::size_t>(i)]));
  }
  std::vector<std::vector<Padded>> pdv(static_cast<std::size_t>(d)), pD(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      pdv[static_cast<std::size_t>(i)].push_back(to_padded(jets.dv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
      pD[static_cast<std::size_t>(i)].push_back(to_padded(jets.D[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    }
  const Padded pdivv = to_padded(jets.divv);
  const Padded plapth = to_padded(lap_th);
  const Padded pIa = to_padded(Ia);
  const Padded pK1 = to_padded(K1a);
  const Padded pK2 = to_padded(K2a);
  const Padded pKt1 = to_padded(Kt1a);
  const Padded pKt2 = to_padded(Kt2a);
  const Padded pmut = to_padded(mu_ta);
  const Padded plamt = to_padded(lam_ta);
  const Padded pkapt = to_padded(kap_ta);
  const Padded pinv = to_padded(inva);
  const Padded pmuo = to_padded(mu_over);
  const Padded plamo = to_padded(lam_over);

  NonlinearTerms out;

  // f = -div(a v)
  {
    VectorField av(g);
    for (int j = 0; j < d; ++j) av.comp[static_cast<std::size_t>(j)] = product(g, np, pa, pv[static_cast<std::size_t>(j)]);
    out.f = -1.0 * div(av);
  }

  // g
  {
    VectorField gv(g);
    const VectorField gK3 = grad(K3a);
    for (int j = 0; j < d; ++j) {
      // transport: -(v . grad) v_j, fused over i
      std::vector<double> acc = zeros_like(pa);
      for (int i = 0; i < d; ++i) fma_into(acc, pv[static_cast<std::size_t>(i)], pdv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], -1.0);
      SpectralField gj = analyze(g, np, acc);

      const Padded pAv = to_padded(jets.Av.comp[static_cast<std::size_t>(j)]);
      gj = gj - product(g, np, pIa, pAv);
      gj = gj - product(g, np, pK1, pga[static_cast<std::size_t>(j)]);
      gj = gj - product(g, np, pK2, pgth[static_cast<std::size_t>(j)]);
      gj = gj - dealiased_product(s.theta, gK3.comp[static_cast<std::size_t>(j)]);

      gv.comp[static_cast<std::size_t>(j)] = gj;
    }
    // viscous divergence in flux form: S_ij = 2 mu_t(a) D_ij + lam_t(a) div v delta_ij
    std::vector<std::vector<SpectralField>> S(static_cast<std::size_t>(d));
    const SpectralField lam_div = product(g, np, plamt, pdivv);
    for (int i = 0; i < d; ++i) {
      S[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(d), SpectralField(g));
      for (int j = 0; j < d; ++j) {
        SpectralField sij = product(g, np, pmut, pD[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 2.0);
        if (i == j) sij = sij + lam_div;
        S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sij;
      }
    }
    for (int j = 0; j < d; ++j) {
      VectorField col(g);
      for (int i = 0; i < d; ++i) col.comp[static_cast<std::size_t>(i)] = S[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const Padded pdivS = to_padded(div(col));
      gv.comp[static_cast<std::size_t>(j)] = gv.comp[static_cast<std::size_t>(j)] + product(g, np, pinv, pdivS);
    }
    out.g = gv;
  }

  // k
  {
    // transport fused over components
    std::vector<double> acc = zeros_like(pa);
    for (int i = 0; i < d; ++i) fma_into(acc, pv[static_cast<std::size_t>(i)], pgth[static_cast<std::size_t>(i)], -1.0);
    SpectralField kf = analyze(g, np, acc);

    kf = kf - c.beta * product(g, np, pIa, plapth);

    // -(Kt1(a) + Kt2(a) theta) div v
    const Padded pKt2th = to_padded(product(g, np, pKt2, pth));
    kf = kf - product(g, np, pKt1, pdivv) - product(g, np, pKt2th, pdivv);

    // conduction flux: (1/(nu(1+a))) div(kap_t(a) grad theta)
    VectorField flux(g);
    for (int i = 0; i < d; ++i) flux.comp[static_cast<std::size_t>(i)] = product(g, np, pkapt, pgth[static_cast<std::size_t>(i)]);
    const Padded pdivflux = to_padded(div(flux));
    kf = kf + product(g, np, pinv, pdivflux);

    // quadratic dissipation
    const double w = dissipation_weight(model, c);
    std::vector<double> dd = zeros_like(pa);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        fma_into(dd, pD[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], pD[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 2.0);
    const Padded pDD = to_padded(analyze(g, np, dd));
    const Padded pdiv2 = to_padded(product(g, np, pdivv, pdivv));
    kf = kf + product(g, np, pmuo, pDD, w) + product(g, np, plamo, pdiv2, w);

    out.k = kf;
  }

  return out;
}

SpectralField compute_f(const State& s) {
  check_density(s);
  const Grid& g = s.grid();
  VectorField av(g);
  for (int j = 0; j < g.dim(); ++j)
    av.comp[static_cast<std::size_t>(j)] = dealiased_product(s.a, s.v.comp[static_cast<std::size_t>(j)]);
  return -1.0 * div(av);
}

VectorField compute_g(const State& s, const PhysicalModel& model, const DerivedConstants& c) {
  return compute_fgk(s, model, c).g;
}

SpectralField compute_k(const State& s, const PhysicalModel& model, const DerivedConstants& c) {
  return compute_fgk(s, model, c).k;
}

VectorField assemble_g_expanded(const State& s, const PhysicalModel& model, const DerivedConstants& c) {
  check_density(s);
  const Grid& g = s.grid();
  const int d = g.dim();
  const int np = padded_points(g);
  const CoefficientSet cs = make_coefficients(model, c);

  const VelocityJets jets(s, c);
  const VectorField grad_a = grad(s.a);
  const VectorField grad_th = grad(s.theta);
  const SpectralField Ia = compose(s.a, cs.I);
  const SpectralField K1a = compose(s.a, cs.K1);
  const SpectralField K2a = compose(s.a, cs.K2);
  const SpectralField K3a = compose(s.a, cs.K3);
  const SpectralField mu_ta = compose(s.a, cs.mu_t);
  const SpectralField lam_ta = compose(s.a, cs.lam_t);
  const SpectralField inva = compose(s.a, [&](double a) { return 1.0 / (c.nu * (1.0 + a)); });

  // gradients of the sampled coefficient fields, taken spectrally so the
  // product-rule expansion matches the flux form on the retained band
  const VectorField gmu = grad(mu_ta);
  const VectorField glam = grad(lam_ta);
  const VectorField gK3 = grad(K3a);
  const VectorField gdivv = grad(jets.divv);

  const Padded pth = to_padded(s.theta);
  const Padded pIa = to_padded(Ia);
  const Padded pK1 = to_padded(K1a);
  const Padded pK2 = to_padded(K2a);
  const Padded pmut = to_padded(mu_ta);
  const Padded plamt = to_padded(lam_ta);
  const Padded pinv = to_padded(inva);
  const Padded pdivv = to_padded(jets.divv);
  std::vector<Padded> pv;
  for (int i = 0; i < d; ++i) pv.push_back(to_padded(s.v.comp[static_cast<std::size_t>(i)]));

  VectorField out(g);
  for (int j = 0; j < d; ++j) {
    const std::size_t ju = static_cast<std::size_t>(j);
    // transport
    std::vector<double> acc = zeros_like(pth);
    for (int i = 0; i < d; ++i) {
      const Padded pdvij = to_padded(jets.dv[static_cast<std::size_t>(i)][ju]);
      fma_into(acc, pv[static_cast<std::size_t>(i)], pdvij, -1.0);
    }
    SpectralField gj = analyze(g, np, acc);

    // pressure-slope term
    gj = gj - product(g, np, pK1, to_padded(grad_a.comp[ju]));

    // viscous: coefficient-times-second-derivative piece plus the
    // coefficient-gradient piece, then the common 1/((1+a) nu) factor
    const SpectralField divD_j = 0.5 * (laplacian(s.v.comp[ju]) + gdivv.comp[ju]);
    SpectralField second = product(g, np, pmut, to_padded(divD_j), 2.0) + product(g, np, plamt, to_padded(gdivv.comp[ju]));
    std::vector<double> gradpiece = zeros_like(pth);
    for (int i = 0; i < d; ++i) {
      const Padded pgmu = to_padded(gmu.comp[static_cast<std::size_t>(i)]);
      const Padded pDij = to_padded(jets.D[static_cast<std::size_t>(i)][ju]);
      fma_into(gradpiece, pgmu, pDij, 2.0);
    }
    fma_into(gradpiece, to_padded(glam.comp[ju]), pdivv, 1.0);
    gj = gj + product(g, np, pinv, to_padded(second + analyze(g, np, gradpiece)));
    gj = gj - product(g, np, pIa, to_padded(jets.Av.comp[ju]));

    // thermal coupling
    gj = gj - product(g, np, pK2, to_padded(grad_th.comp[ju]));
    gj = gj - product(g, np, pth, to_padded(gK3.comp[ju]));

    out.comp[ju] = gj;
  }
  return out;
}

SpectralField assemble_k_expanded(const State& s, const PhysicalModel& model, const DerivedConstants& c) {
  check_density(s);
  const Grid& g = s.grid();
  const int d = g.dim();
  const int np = padded_points(g);
  const CoefficientSet cs = make_coefficients(model, c);

  const VelocityJets jets(s, c);
  const VectorField grad_th = grad(s.theta);
  const SpectralField lap_th = laplacian(s.theta);
  const SpectralField Ia = compose(s.a, cs.I);
  const SpectralField Kt1a = compose(s.a, cs.Kt1);
  const SpectralField Kt2a = compose(s.a, cs.Kt2);
  const SpectralField kap_ta = compose(s.a, cs.kap_t);
  const SpectralField inva = compose(s.a, [&](double a) { return 1.0 / (c.nu * (1.0 + a)); });
  const SpectralField mu_over = compose(s.a, cs.mu_over);
  const SpectralField lam_over = compose(s.a, cs.lam_over);
  const VectorField gkap = grad(kap_ta);

  const Padded pth = to_padded(s.theta);
  const Padded pIa = to_padded(Ia);
  const Padded pKt1 = to_padded(Kt1a);
  const Padded pKt2 = to_padded(Kt2a);
  const Padded pkapt = to_padded(kap_ta);
  const Padded pinv = to_padded(inva);
  const Padded pmuo = to_padded(mu_over);
  const Padded plamo = to_padded(lam_over);
  const Padded pdivv = to_padded(jets.divv);
  const Padded plapth = to_padded(lap_th);
  std::vector<Padded> pv, pgth;
  for (int i = 0; i < d; ++i) {
    pv.push_back(to_padded(s.v.comp[static_cast<std::size_t>(i)]));
    pgth.push_back(to_padded(grad_th.comp[static_cast<std::size_t>(i)]));
  }

  // transport
  std::vector<double> acc = zeros_like(pth);
  for (int i = 0; i < d; ++i) fma_into(acc, pv[static_cast<std::size_t>(i)], pgth[static_cast<std::size_t>(i)], -1.0);
  SpectralField kf = analyze(g, np, acc);

  // conduction-minus-reference second-order piece
  kf = kf + product(g, np, pinv, to_padded(product(g, np, pkapt, plapth)));
  kf = kf - c.beta * product(g, np, pIa, plapth);

  // coefficient-gradient piece of the conduction flux
  std::vector<double> gk = zeros_like(pth);
  for (int i = 0; i < d; ++i) fma_into(gk, to_padded(gkap.comp[static_cast<std::size_t>(i)]), pgth[static_cast<std::size_t>(i)], 1.0);
  kf = kf + product(g, np, pinv, to_padded(analyze(g, np, gk)));

  // compression coupling
  const Padded pKt2th = to_padded(product(g, np, pKt2, pth));
  kf = kf - product(g, np, pKt1, pdivv) - product(g, np, pKt2th, pdivv);

  // dissipation on the raw gradient contractions: V:V + V:V^T
  const double w = dissipation_weight(model, c);
  std::vector<double> vv = zeros_like(pth);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Padded pij = to_padded(jets.dv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      const Padded pji = to_padded(jets.dv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
      fma_into(vv, pij, pij, 1.0);
      fma_into(vv, pij, pji, 1.0);
    }
  const Padded pVV = to_padded(analyze(g, np, vv));
  const Padded pdiv2 = to_padded(product(g, np, pdivv, pdivv));
  kf = kf + product(g, np, pmuo, pVV, w) + product(g, np, plamo, pdiv2, w);

  return kf;
}

VectorField effective_velocity(const State& s) {
  const Grid& g = s.grid();
  const SpectralField h = s.a - div(s.v);
  if (std::abs(h.mean()) > 1e-12 * (1.0 + l2_norm_spectral(h)))
    throw std::invalid_argument("effective_velocity: requires mean-zero a");
  VectorField w(g);
  for (int j = 0; j < g.dim(); ++j) {
    std::vector<cplx> cj(g.size(), cplx{0.0, 0.0});
    for_each_index(g.size(), [&](std::size_t i) {
      const double r2 = g.xi2(i);
      if (r2 == 0.0) return;
      cj[i] = cplx{0.0, g.xi(i)[static_cast<std::size_t>(j)] / r2} * h.coeffs()[i];
    });
    w.comp[static_cast<std::size_t>(j)] = SpectralField(g, std::move(cj));
  }
  return w;
}

State rescale_from_physical(const SpectralField& b, const VectorField& u, const SpectralField& E,
                            const PhysicalModel& model) {
  const DerivedConstants c = derive_constants(model);
  const Grid& gp = b.grid();
  const double dilation = c.nu_inf * c.chi0;
  const Grid gr = make_grid(gp.dim(), gp.n(), gp.length() / dilation);

  {
    const auto vals = to_physical(b);
    for (double v : vals)
      if (!(1.0 + v > 0.0)) throw std::invalid_argument("rescale_from_physical: density must stay positive");
  }

  State s(gr);
  s.a = SpectralField(gr, b.coeffs());
  for (int j = 0; j < gp.dim(); ++j)
    s.v.comp[static_cast<std::size_t>(j)] = SpectralField(gr, (c.chi0 * u.comp[static_cast<std::size_t>(j)]).coeffs());
  s.theta = SpectralField(gr, (c.chi0 * std::sqrt(model.C_v / model.T_inf) * E).coeffs());
  return s;
}

void physical_from_rescaled(const State& s, const PhysicalModel& model, SpectralField& b, VectorField& u,
                            SpectralField& E) {
  const DerivedConstants c = derive_constants(model);
  const Grid& gr = s.grid();
  const double dilation = c.nu_inf * c.chi0;
  const Grid gp = make_grid(gr.dim(), gr.n(), gr.length() * dilation);
  b = SpectralField(gp, s.a.coeffs());
  u = VectorField(gp);
  for (int j = 0; j < gr.dim(); ++j)
    u.comp[static_cast<std::size_t>(j)] = SpectralField(gp, ((1.0 / c.chi0) * s.v.comp[static_cast<std::size_t>(j)]).coeffs());
  E = SpectralField(gp, (std::sqrt(model.T_inf / model.C_v) / c.chi0 * s.theta).coeffs());
}

}  // namespace nslab
