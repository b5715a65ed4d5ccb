#include "chiral/circlefn.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

#include "chiral/pcwmob.hpp"
#include "chiral/simd.hpp"

namespace chiral::circlefn {

using mobius::kPi;
using mobius::kTwoPi;

FourierFunction::FourierFunction(int cutoff) : cutoff_(cutoff), coeffs_(2 * static_cast<std::size_t>(cutoff) + 1) {
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
}

FourierFunction::FourierFunction(int cutoff, std::vector<Complex> coeffs) : cutoff_(cutoff), coeffs_(std::move(coeffs)) {
  if (cutoff < 0 || coeffs_.size() != 2 * static_cast<std::size_t>(cutoff) + 1) {
    throw std::invalid_argument("coefficient count must be 2N+1");
  }
  for (const auto& z : coeffs_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::invalid_argument("non-finite coefficient");
}

Complex FourierFunction::coeff(int n) const {
  if (std::abs(n) > cutoff_) return 0.0;
  return coeffs_[static_cast<std::size_t>(n + cutoff_)];
}

void FourierFunction::set_coeff(int n, Complex value) {
  if (std::abs(n) > cutoff_) throw std::out_of_range("coefficient index beyond cutoff");
  coeffs_[static_cast<std::size_t>(n + cutoff_)] = value;
}

void FourierFunction::set_real_pair(int n, Complex value) {
  set_coeff(n, value);
  set_coeff(-n, n == 0 ? Complex(value.real(), 0.0) : std::conj(value));
}

namespace {

// cos/sin coefficient arrays for the kernel: f(θ) = a0 + Σ_k ca_k cos kθ + sa_k sin kθ.
void real_series(const FourierFunction& f, bool derivative, double& a0, std::vector<double>& ca,
                 std::vector<double>& sa) {
  const int n = f.cutoff();
  ca.assign(static_cast<std::size_t>(n), 0.0);
  sa.assign(static_cast<std::size_t>(n), 0.0);
  a0 = derivative ? 0.0 : f.coeff(0).real();
  for (int k = 1; k <= n; ++k) {
    // f̂_k e^{ikθ} + f̂_{−k} e^{−ikθ}, assuming reality
    const Complex z = f.coeff(k);
    if (derivative) {
      ca[k - 1] = -2.0 * k * z.imag();
      sa[k - 1] = -2.0 * k * z.real();
    } else {
      ca[k - 1] = 2.0 * z.real();
      sa[k - 1] = -2.0 * z.imag();
    }
  }
}

std::vector<double> run_series(const FourierFunction& f, bool derivative, const std::vector<double>& thetas) {
  double a0;
  std::vector<double> ca, sa;
  real_series(f, derivative, a0, ca, sa);
  std::vector<double> out(thetas.size());
  simd::kernels().trig_series(a0, ca.data(), sa.data(), ca.size(), thetas.data(), out.data(), thetas.size());
  return out;
}

std::vector<double> uniform_grid(int samples) {
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) t[i] = kTwoPi * i / samples;
  return t;
}

}  // namespace

double FourierFunction::operator()(double theta) const { return sample({theta})[0]; }

double FourierFunction::derivative(double theta) const { return sample_derivative({theta})[0]; }

std::vector<double> FourierFunction::sample(const std::vector<double>& thetas) const {
  return run_series(*this, false, thetas);
}

std::vector<double> FourierFunction::sample_derivative(const std::vector<double>& thetas) const {
  return run_series(*this, true, thetas);
}

double FourierFunction::reality_defect() const {
  double worst = 0.0;
  for (int n = 0; n <= cutoff_; ++n) worst = std::max(worst, std::abs(coeff(-n) - std::conj(coeff(n))));
  return worst;
}

FourierFunction FourierFunction::truncated(int cutoff) const {
  FourierFunction g(cutoff);
  for (int n = -cutoff; n <= cutoff; ++n) g.set_coeff(n, coeff(n));
  if (cutoff >= cutoff_) g.decay_ = decay_;
  return g;
}

FourierFunction FourierFunction::derivative_function() const {
  FourierFunction g(cutoff_);
  for (int n = -cutoff_; n <= cutoff_; ++n) g.set_coeff(n, Complex(0.0, n) * coeff(n));
  return g;
}

FourierFunction FourierFunction::rotated(double alpha) const {
  FourierFunction g(cutoff_);
  for (int n = -cutoff_; n <= cutoff_; ++n) g.set_coeff(n, coeff(n) * std::polar(1.0, -n * alpha));
  g.decay_ = decay_;
  return g;
}

FourierFunction FourierFunction::operator+(const FourierFunction& o) const {
  const int n = std::max(cutoff_, o.cutoff_);
  FourierFunction g(n);
  for (int k = -n; k <= n; ++k) g.set_coeff(k, coeff(k) + o.coeff(k));
  if (decay_ && o.decay_) g.decay_ = *decay_ + *o.decay_;
  return g;
}

FourierFunction FourierFunction::operator-(const FourierFunction& o) const { return *this + o * -1.0; }

FourierFunction FourierFunction::operator*(double s) const {
  FourierFunction g(cutoff_);
  for (int k = -cutoff_; k <= cutoff_; ++k) g.set_coeff(k, s * coeff(k));
  if (decay_) g.decay_ = std::abs(s) * *decay_;
  return g;
}

FourierFunction FourierFunction::from_mobius_field(const mobius::MobiusField& f) {
  FourierFunction g(1);
  g.set_coeff(0, f.c0);
  g.set_real_pair(1, Complex(f.c1 / 2.0, -f.c2 / 2.0));
  g.decay_ = 0.0;
  return g;
}

FourierFunction multiply(const FourierFunction& f, const FourierFunction& g) {
  const int n = f.cutoff() + g.cutoff();
  FourierFunction p(n);
  for (int a = -f.cutoff(); a <= f.cutoff(); ++a)
    for (int b = -g.cutoff(); b <= g.cutoff(); ++b) p.set_coeff(a + b, p.coeff(a + b) + f.coeff(a) * g.coeff(b));
  return p;
}

NormValue norm_three_half(const FourierFunction& f) {
  const std::size_t m = f.coeffs().size();
  std::vector<double> re(m), im(m), w(m);
  for (int n = -f.cutoff(); n <= f.cutoff(); ++n) {
    const std::size_t i = static_cast<std::size_t>(n + f.cutoff());
    re[i] = f.coeffs()[i].real();
    im[i] = f.coeffs()[i].imag();
    w[i] = 1.0 + std::pow(std::abs(n), 1.5);
  }
  NormValue v;
  v.partial = simd::kernels().weighted_abs_sum(re.data(), im.data(), w.data(), m);
  if (f.decay_constant()) {
    const double c = *f.decay_constant();
    const double n = std::max(f.cutoff(), 1);
    // Σ_{|k|>N} (C/|k|³)(1 + |k|^{3/2}) ≤ 2C(1/(2N²) + 2/√N)
    v.tail_bound = 2.0 * c * (1.0 / (2.0 * n * n) + 2.0 / std::sqrt(n));
  }
  return v;
}

double norm_c1(const FourierFunction& f, int samples) {
  const auto grid = uniform_grid(samples);
  const auto v = f.sample(grid);
  const auto d = f.sample_derivative(grid);
  double mv = 0.0, md = 0.0;
  for (double x : v) mv = std::max(mv, std::abs(x));
  for (double x : d) md = std::max(md, std::abs(x));
  return mv + md;
}

FourierFunction convolve_smooth(const FourierFunction& f, const FourierFunction& mollifier) {
  if (std::abs(mollifier.coeff(0) - 1.0) > 1e-9) throw std::invalid_argument("mollifier mean must be 1");
  const int n = std::min(f.cutoff(), mollifier.cutoff());
  FourierFunction g(n);
  for (int k = -n; k <= n; ++k) g.set_coeff(k, f.coeff(k) * mollifier.coeff(k));
  if (f.cutoff() <= mollifier.cutoff() && f.decay_constant()) g.set_decay_constant(f.decay_constant());
  return g;
}

double integrate_flow(const std::function<double(double)>& field, double theta, double t, double tol) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 1>;
  State x{theta};
  if (t == 0.0) return theta;
  auto rhs = [&](const State& s, State& dsdt, double) { dsdt[0] = field(s[0]); };
  auto stepper = ode::make_controlled(tol * 1e-2, tol * 1e-2, ode::runge_kutta_dopri5<State>());
  ode::integrate_adaptive(stepper, rhs, x, 0.0, t, t / 64.0);
  return x[0];
}

mobius::CirclePoint flow_exp(const FourierFunction& f, mobius::CirclePoint z, double t, double tol) {
  return mobius::CirclePoint(integrate_flow([&](double th) { return f(th); }, z.theta(), t, tol));
}

double gronwall_bound(const FourierFunction& f, const FourierFunction& g, int samples) {
  return norm_c1(f - g, samples) * std::exp(norm_c1(f, samples));
}

double TrigPiece::value(double theta, int derivative) const {
  double s = derivative == 0 && !a.empty() ? a[0] : 0.0;
  const double phase = derivative * kPi / 2.0;
  for (std::size_t k = 1; k < std::max(a.size(), b.size()); ++k) {
    const double kd = std::pow(static_cast<double>(k), derivative);
    if (k < a.size()) s += a[k] * kd * std::cos(k * theta + phase);
    if (k < b.size()) s += b[k] * kd * std::sin(k * theta + phase);
  }
  return s;
}

PiecewiseTrig::PiecewiseTrig(std::vector<double> breakpoints, std::vector<TrigPiece> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  const std::size_t need = breakpoints_.empty() ? 1 : breakpoints_.size();
  if (pieces_.size() != need) throw std::invalid_argument("piece count must match breakpoint count");
  for (auto& b : breakpoints_) b = mobius::normalize_angle(b);
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end())) {
    throw std::invalid_argument("breakpoints must be sorted");
  }
}

std::size_t PiecewiseTrig::piece_index(double theta) const {
  if (breakpoints_.empty()) return 0;
  theta = mobius::normalize_angle(theta);
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), theta);
  if (it == breakpoints_.begin()) return breakpoints_.size() - 1;
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

double PiecewiseTrig::value(double theta, int derivative) const {
  return pieces_[piece_index(theta)].value(theta, derivative);
}

std::pair<double, double> PiecewiseTrig::one_sided(std::size_t j, int derivative) const {
  const std::size_t m = breakpoints_.size();
  const double t = breakpoints_.at(j);
  return {pieces_[(j + m - 1) % m].value(t, derivative), pieces_[j].value(t, derivative)};
}

double PiecewiseTrig::c1_defect() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < breakpoints_.size(); ++j)
    for (int d : {0, 1}) {
      auto [l, r] = one_sided(j, d);
      worst = std::max(worst, std::abs(l - r));
    }
  return worst;
}

namespace {

// Arcs [start, end] with end > start (unwrapped), one per piece.
std::vector<std::pair<double, double>> arcs_of(const std::vector<double>& bps) {
  std::vector<std::pair<double, double>> arcs;
  if (bps.empty()) {
    arcs.emplace_back(0.0, kTwoPi);
    return arcs;
  }
  for (std::size_t j = 0; j < bps.size(); ++j) {
    const double a = bps[j];
    double b = j + 1 < bps.size() ? bps[j + 1] : bps[0] + kTwoPi;
    arcs.emplace_back(a, b);
  }
  return arcs;
}

double monotone_variation(const TrigPiece& p, double a, double b) {
  // Split at sign changes of f‴ (located on a fine grid, refined by bisection).
  const int grid = 2048;
  double total = 0.0;
  double seg_start = a;
  double prev_t = a;
  double prev_d = p.value(a, 3);
  for (int i = 1; i <= grid; ++i) {
    const double t = a + (b - a) * i / grid;
    const double d = p.value(t, 3);
    if ((prev_d < 0.0 && d > 0.0) || (prev_d > 0.0 && d < 0.0)) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double dm = p.value(mid, 3);
        if ((dm < 0.0) == (prev_d < 0.0)) lo = mid; else hi = mid;
      }
      const double root = 0.5 * (lo + hi);
      total += std::abs(p.value(root, 2) - p.value(seg_start, 2));
      seg_start = root;
    }
    prev_t = t;
    prev_d = d;
  }
  return total + std::abs(p.value(b, 2) - p.value(seg_start, 2));
}

}  // namespace

double PiecewiseTrig::second_derivative_variation() const {
  const auto arcs = arcs_of(breakpoints_);
  double total = 0.0;
  for (std::size_t j = 0; j < arcs.size(); ++j) total += monotone_variation(pieces_[j], arcs[j].first, arcs[j].second);
  for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
    auto [l, r] = one_sided(j, 2);
    total += std::abs(l - r);
  }
  return total;
}

FourierFunction PiecewiseTrig::fourier(int cutoff) const {
  FourierFunction f(cutoff);
  const auto arcs = arcs_of(breakpoints_);
  std::vector<Complex> acc(2 * static_cast<std::size_t>(cutoff) + 1);
  for (std::size_t j = 0; j < arcs.size(); ++j) {
    const auto [a, b] = arcs[j];
    const TrigPiece& p = pieces_[j];
    const int m = p.degree();
    // piece = Σ_k c_k e^{ikθ}
    std::vector<Complex> c(2 * static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
      const double ak = k < static_cast<int>(p.a.size()) ? p.a[k] : 0.0;
      const double bk = k < static_cast<int>(p.b.size()) && k > 0 ? p.b[k] : 0.0;
      if (k == 0) {
        c[m] = ak;
      } else {
        c[m + k] = Complex(ak / 2.0, -bk / 2.0);
        c[m - k] = Complex(ak / 2.0, bk / 2.0);
      }
    }
    for (int n = -cutoff; n <= cutoff; ++n) {
      Complex s = 0.0;
      for (int k = -m; k <= m; ++k) {
        const Complex ck = c[static_cast<std::size_t>(k + m)];
        if (ck == 0.0) continue;
        const int j2 = k - n;
        Complex integral;
        if (j2 == 0) {
          integral = b - a;
        } else {
          integral = (std::polar(1.0, j2 * b) - std::polar(1.0, j2 * a)) / Complex(0.0, j2);
        }
        s += ck * integral;
      }
      acc[static_cast<std::size_t>(n + cutoff)] += s / kTwoPi;
    }
  }
  for (int n = -cutoff; n <= cutoff; ++n) f.set_coeff(n, acc[static_cast<std::size_t>(n + cutoff)]);
  if (c1_defect() <= 1e-9) f.set_decay_constant(second_derivative_variation() / kTwoPi);
  return f;
}

PiecewiseTrig to_piecewise_trig(const pcwmob::PcwField& f) {
  std::vector<double> bps;
  std::vector<TrigPiece> pieces;
  for (const auto& b : f.breakpoints()) bps.push_back(b.theta());
  for (const auto& p : f.pieces()) pieces.push_back(TrigPiece{{p.c0, p.c1}, {0.0, p.c2}});
  return PiecewiseTrig(bps, pieces);
}

FourierFunction fourier_of_pcw_field(const pcwmob::PcwField& f, int cutoff) {
  return to_piecewise_trig(f).fourier(cutoff);
}

}  // namespace chiral::circlefn
