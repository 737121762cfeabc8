#include "nslab/field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "nslab/fft.hpp"

namespace nslab {

namespace {

using kernels::Exec;
using kernels::for_each_index;
using kernels::max_indexed;
using kernels::sum_indexed;

std::size_t mirror_index(const Grid& g, std::size_t idx) {
  const auto c = g.unflatten(idx);
  std::array<int, 3> m{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a)
    m[static_cast<std::size_t>(a)] = (g.n() - c[static_cast<std::size_t>(a)]) % g.n();
  return g.flatten(m);
}

void check_same_grid(const Grid& a, const Grid& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

SpectralField::SpectralField(Grid g, std::vector<cplx> coeffs)
    : grid_(std::move(g)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw std::invalid_argument("SpectralField: coefficient count does not match grid");
}

std::vector<double> to_physical(const SpectralField& f) {
  fft::cvec buf = f.coeffs();
  fft::backward(buf, f.grid().dim(), f.grid().n());
  std::vector<double> out(buf.size());
  for_each_index(buf.size(), [&](std::size_t i) { out[i] = buf[i].real(); });
  return out;
}

SpectralField from_physical(const Grid& g, const std::vector<double>& values) {
  if (values.size() != g.size())
    throw std::invalid_argument("from_physical: value count does not match grid");
  fft::cvec buf(values.size());
  for_each_index(values.size(), [&](std::size_t i) { buf[i] = cplx{values[i], 0.0}; });
  fft::forward(buf, g.dim(), g.n());
  SpectralField f(g, std::move(buf));
  zero_nyquist(f);
  hermitize(f);
  return f;
}

std::array<double, 3> grid_point(const Grid& g, std::size_t idx) {
  const auto c = g.unflatten(idx);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a)
    x[static_cast<std::size_t>(a)] = g.dx() * c[static_cast<std::size_t>(a)];
  return x;
}

SpectralField from_function(const Grid& g, const std::function<double(const std::array<double, 3>&)>& fn) {
  std::vector<double> vals(g.size());
  for_each_index(g.size(), [&](std::size_t i) { vals[i] = fn(grid_point(g, i)); });
  return from_physical(g, vals);
}

SpectralField apply_multiplier(const SpectralField& f, const std::function<cplx(const std::array<double, 3>&)>& m) {
  const Grid& g = f.grid();
  std::vector<cplx> out(g.size());
  std::atomic<bool> bad{false};
  for_each_index(g.size(), [&](std::size_t i) {
    const cplx c = f.coeffs()[i];
    if (c == cplx{0.0, 0.0}) {
      out[i] = cplx{0.0, 0.0};
      return;
    }
    const cplx mv = m(g.xi(i));
    if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
      bad.store(true, std::memory_order_relaxed);
    out[i] = mv * c;
  });
  if (bad.load())
    throw std::invalid_argument("apply_multiplier: non-finite symbol value at a resolved mode with nonzero coefficient");
  return SpectralField(g, std::move(out));
}

SpectralField apply_radial_multiplier(const SpectralField& f, const std::function<double(double)>& m) {
  const Grid& g = f.grid();
  std::vector<cplx> out(g.size());
  for_each_index(g.size(), [&](std::size_t i) { out[i] = m(std::sqrt(g.xi2(i))) * f.coeffs()[i]; });
  return SpectralField(g, std::move(out));
}

SpectralField lambda_s(const SpectralField& f, double s) {
  if (s < 0.0 && std::abs(f.mean()) > 1e-14 * (1.0 + lp_norm(f, 2.0)))
    throw std::invalid_argument("lambda_s: negative order requires a mean-zero field");
  const Grid& g = f.grid();
  std::vector<cplx> out(g.size());
  for_each_index(g.size(), [&](std::size_t i) {
    const double r2 = g.xi2(i);
    out[i] = (r2 == 0.0) ? cplx{0.0, 0.0} : std::pow(r2, 0.5 * s) * f.coeffs()[i];
  });
  return SpectralField(g, std::move(out));
}

VectorField grad(const SpectralField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  for (int a = 0; a < g.dim(); ++a) {
    std::vector<cplx> c(g.size());
    for_each_index(g.size(), [&](std::size_t i) {
      c[i] = cplx{0.0, g.xi(i)[static_cast<std::size_t>(a)]} * f.coeffs()[i];
    });
    out.comp[static_cast<std::size_t>(a)] = SpectralField(g, std::move(c));
  }
  return out;
}

SpectralField div(const VectorField& v) {
  const Grid& g = v.grid();
  std::vector<cplx> c(g.size(), cplx{0.0, 0.0});
  for (int a = 0; a < v.dim(); ++a) {
    const auto& va = v.comp[static_cast<std::size_t>(a)].coeffs();
    for_each_index(g.size(), [&](std::size_t i) {
      c[i] += cplx{0.0, g.xi(i)[static_cast<std::size_t>(a)]} * va[i];
    });
  }
  return SpectralField(g, std::move(c));
}

SpectralField laplacian(const SpectralField& f) {
  const Grid& g = f.grid();
  std::vector<cplx> c(g.size());
  for_each_index(g.size(), [&](std::size_t i) { c[i] = -g.xi2(i) * f.coeffs()[i]; });
  return SpectralField(g, std::move(c));
}

VectorField laplacian(const VectorField& v) {
  VectorField out(v.grid());
  for (int a = 0; a < v.dim(); ++a) out.comp[static_cast<std::size_t>(a)] = laplacian(v.comp[static_cast<std::size_t>(a)]);
  return out;
}

std::pair<VectorField, VectorField> leray_split(const VectorField& v) {
  const Grid& g = v.grid();
  const int d = v.dim();
  VectorField solenoidal(g), potential(g);
  std::vector<std::vector<cplx>> pc(static_cast<std::size_t>(d), std::vector<cplx>(g.size()));
  std::vector<std::vector<cplx>> qc(static_cast<std::size_t>(d), std::vector<cplx>(g.size()));
  for_each_index(g.size(), [&](std::size_t i) {
    const auto xi = g.xi(i);
    const double r2 = g.xi2(i);
    cplx dot{0.0, 0.0};
    for (int a = 0; a < d; ++a) dot += xi[static_cast<std::size_t>(a)] * v.comp[static_cast<std::size_t>(a)].coeffs()[i];
    for (int a = 0; a < d; ++a) {
      const cplx va = v.comp[static_cast<std::size_t>(a)].coeffs()[i];
      const cplx q = (r2 == 0.0) ? cplx{0.0, 0.0} : (dot / r2) * xi[static_cast<std::size_t>(a)];
      qc[static_cast<std::size_t>(a)][i] = q;
      pc[static_cast<std::size_t>(a)][i] = va - q;
    }
  });
  for (int a = 0; a < d; ++a) {
    solenoidal.comp[static_cast<std::size_t>(a)] = SpectralField(g, std::move(pc[static_cast<std::size_t>(a)]));
    potential.comp[static_cast<std::size_t>(a)] = SpectralField(g, std::move(qc[static_cast<std::size_t>(a)]));
  }
  return {std::move(solenoidal), std::move(potential)};
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a.grid(), b.grid(), "operator+");
  std::vector<cplx> c(a.coeffs().size());
  for_each_index(c.size(), [&](std::size_t i) { c[i] = a.coeffs()[i] + b.coeffs()[i]; });
  return SpectralField(a.grid(), std::move(c));
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a.grid(), b.grid(), "operator-");
  std::vector<cplx> c(a.coeffs().size());
  for_each_index(c.size(), [&](std::size_t i) { c[i] = a.coeffs()[i] - b.coeffs()[i]; });
  return SpectralField(a.grid(), std::move(c));
}

SpectralField operator*(double s, const SpectralField& f) {
  std::vector<cplx> c(f.coeffs().size());
  for_each_index(c.size(), [&](std::size_t i) { c[i] = s * f.coeffs()[i]; });
  return SpectralField(f.grid(), std::move(c));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  VectorField out(a.grid());
  for (int c = 0; c < a.dim(); ++c) out.comp[static_cast<std::size_t>(c)] = a.comp[static_cast<std::size_t>(c)] + b.comp[static_cast<std::size_t>(c)];
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  VectorField out(a.grid());
  for (int c = 0; c < a.dim(); ++c) out.comp[static_cast<std::size_t>(c)] = a.comp[static_cast<std::size_t>(c)] - b.comp[static_cast<std::size_t>(c)];
  return out;
}

VectorField operator*(double s, const VectorField& v) {
  VectorField out(v.grid());
  for (int c = 0; c < v.dim(); ++c) out.comp[static_cast<std::size_t>(c)] = s * v.comp[static_cast<std::size_t>(c)];
  return out;
}

namespace {

int padded_size(int n) { return (3 * n + 1) / 2; }

// Scatter retained modes of the base grid into the padded cube.
fft::cvec pad_spectrum(const SpectralField& f, int np) {
  const Grid& g = f.grid();
  const int d = g.dim();
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(np);
  fft::cvec out(total, cplx{0.0, 0.0});
  for_each_index(g.size(), [&](std::size_t i) {
    const cplx c = f.coeffs()[i];
    if (c == cplx{0.0, 0.0}) return;
    const auto src = g.unflatten(i);
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) {
      const int m = g.mode(src[static_cast<std::size_t>(a)]);
      const int t = m >= 0 ? m : m + np;
      idx = idx * static_cast<std::size_t>(np) + static_cast<std::size_t>(t);
    }
    out[idx] = c;
  });
  return out;
}

}  // namespace

int padded_points(const Grid& g) { return padded_size(g.n()); }

PaddedPhysical to_padded(const SpectralField& f) {
  const Grid& g = f.grid();
  const int np = padded_size(g.n());
  fft::cvec buf = pad_spectrum(f, np);
  fft::backward(buf, g.dim(), np);
  PaddedPhysical out;
  out.base = g;
  out.np = np;
  out.values.resize(buf.size());
  for_each_index(buf.size(), [&](std::size_t i) { out.values[i] = buf[i].real(); });
  return out;
}

SpectralField from_padded_values(const Grid& base, int np, const std::vector<double>& values) {
  const int d = base.dim();
  fft::cvec buf(values.size());
  for_each_index(values.size(), [&](std::size_t i) { buf[i] = cplx{values[i], 0.0}; });
  fft::forward(buf, d, np);

  // gather retained band; unpaired Nyquist planes stay empty
  std::vector<cplx> out(base.size(), cplx{0.0, 0.0});
  const int half = base.n() / 2;
  for_each_index(base.size(), [&](std::size_t i) {
    const auto c = base.unflatten(i);
    std::size_t idx = 0;
    for (int ax = 0; ax < d; ++ax) {
      const int m = base.mode(c[static_cast<std::size_t>(ax)]);
      if (m <= -half) return;  // leave zero
      const int t = m >= 0 ? m : m + np;
      idx = idx * static_cast<std::size_t>(np) + static_cast<std::size_t>(t);
    }
    out[i] = buf[idx];
  });
  return SpectralField(base, std::move(out));
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a.grid(), b.grid(), "dealiased_product");
  const PaddedPhysical pa = to_padded(a);
  const PaddedPhysical pb = to_padded(b);
  std::vector<double> prod(pa.values.size());
  for_each_index(prod.size(), [&](std::size_t i) { prod[i] = pa.values[i] * pb.values[i]; });
  return from_padded_values(a.grid(), pa.np, prod);
}

SpectralField compose(const SpectralField& f, const std::function<double(double)>& fn) {
  std::vector<double> vals = to_physical(f);
  for_each_index(vals.size(), [&](std::size_t i) { vals[i] = fn(vals[i]); });
  return from_physical(f.grid(), vals);
}

double lp_norm(const SpectralField& f, double p) {
  const std::vector<double> vals = to_physical(f);
  if (std::isinf(p)) return max_indexed(vals.size(), [&](std::size_t i) { return std::abs(vals[i]); });
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double cell = f.grid().cell_volume();
  const double s = sum_indexed(vals.size(), [&](std::size_t i) { return std::pow(std::abs(vals[i]), p); });
  return std::pow(cell * s, 1.0 / p);
}

double lp_norm(const VectorField& v, double p) {
  std::vector<std::vector<double>> phys;
  phys.reserve(static_cast<std::size_t>(v.dim()));
  for (int a = 0; a < v.dim(); ++a) phys.push_back(to_physical(v.comp[static_cast<std::size_t>(a)]));
  const std::size_t nn = phys[0].size();
  auto mag = [&](std::size_t i) {
    double s = 0.0;
    for (const auto& c : phys) s += c[i] * c[i];
    return std::sqrt(s);
  };
  if (std::isinf(p)) return max_indexed(nn, mag);
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double cell = v.grid().cell_volume();
  const double s = sum_indexed(nn, [&](std::size_t i) { return std::pow(mag(i), p); });
  return std::pow(cell * s, 1.0 / p);
}

double l2_norm_spectral(const SpectralField& f) {
  const double s = sum_indexed(f.coeffs().size(), [&](std::size_t i) { return std::norm(f.coeffs()[i]); });
  return std::sqrt(s) * std::pow(f.grid().length(), 0.5 * f.grid().dim());
}

double l2_norm_spectral(const VectorField& v) {
  double s = 0.0;
  for (int a = 0; a < v.dim(); ++a) {
    const double c = l2_norm_spectral(v.comp[static_cast<std::size_t>(a)]);
    s += c * c;
  }
  return std::sqrt(s);
}

void hermitize(SpectralField& f) {
  const Grid& g = f.grid();
  auto& c = f.coeffs();
  for_each_index(g.size(), [&](std::size_t i) {
    const std::size_t m = mirror_index(g, i);
    if (m < i) return;
    if (m == i) {
      c[i] = cplx{c[i].real(), 0.0};
      return;
    }
    const cplx avg = 0.5 * (c[i] + std::conj(c[m]));
    c[i] = avg;
    c[m] = std::conj(avg);
  });
}

void zero_nyquist(SpectralField& f) {
  const Grid& g = f.grid();
  auto& c = f.coeffs();
  for_each_index(g.size(), [&](std::size_t i) {
    if (g.on_nyquist(i)) c[i] = cplx{0.0, 0.0};
  });
}

double hermitian_defect(const SpectralField& f) {
  const Grid& g = f.grid();
  return max_indexed(g.size(), [&](std::size_t i) {
    return std::abs(f.coeffs()[i] - std::conj(f.coeffs()[mirror_index(g, i)]));
  });
}

SpectralField dyadic_dilate(const SpectralField& f) {
  const Grid& g = f.grid();
  Grid half = make_grid(g.dim(), g.n(), 0.5 * g.length());
  return SpectralField(half, f.coeffs());
}

}  // namespace nslab
