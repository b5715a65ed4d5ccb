#include "chiral/pcwmob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace chiral::pcwmob {

using mobius::angle_diff;
using mobius::kPi;
using mobius::kTwoPi;
using mobius::normalize_angle;

namespace {

constexpr double kMergeAngle = 1e-9;

template <class Piece>
void sort_pairs(std::vector<CirclePoint>& bps, std::vector<Piece>& pieces) {
  if (bps.empty()) {
    if (pieces.size() != 1) throw std::invalid_argument("a map without breakpoints needs exactly one piece");
    return;
  }
  if (bps.size() != pieces.size()) throw std::invalid_argument("breakpoint and piece counts differ");
  std::vector<std::size_t> order(bps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return bps[i].theta() < bps[j].theta(); });
  std::vector<CirclePoint> b;
  std::vector<Piece> p;
  for (auto i : order) {
    b.push_back(bps[i]);
    p.push_back(pieces[i]);
  }
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    if (b[i + 1].theta() - b[i].theta() < 1e-14) throw std::invalid_argument("repeated breakpoint");
  bps = std::move(b);
  pieces = std::move(p);
}

// Sorted, deduplicated union of breakpoint angles.
std::vector<CirclePoint> merge_points(std::vector<CirclePoint> pts) {
  std::sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.theta() < b.theta(); });
  std::vector<CirclePoint> out;
  for (const auto& p : pts) {
    if (!out.empty() && p.theta() - out.back().theta() < kMergeAngle) continue;
    out.push_back(p);
  }
  if (out.size() > 1 && out.front().theta() + kTwoPi - out.back().theta() < kMergeAngle) out.pop_back();
  return out;
}

// Midpoints of the arcs cut out by sorted breakpoints.
std::vector<double> arc_midpoints(const std::vector<CirclePoint>& bps) {
  std::vector<double> mids;
  if (bps.empty()) return {0.0};
  for (std::size_t k = 0; k < bps.size(); ++k) {
    const double a = bps[k].theta();
    const double b = k + 1 < bps.size() ? bps[k + 1].theta() : bps[0].theta() + kTwoPi;
    mids.push_back(normalize_angle(0.5 * (a + b)));
  }
  return mids;
}

template <class Piece, class Same>
void drop_redundant(std::vector<CirclePoint>& bps, std::vector<Piece>& pieces, Same same) {
  bool changed = true;
  while (changed && !bps.empty()) {
    changed = false;
    const std::size_t m = bps.size();
    for (std::size_t k = 0; k < m; ++k) {
      if (same(pieces[(k + m - 1) % m], pieces[k])) {
        bps.erase(bps.begin() + static_cast<long>(k));
        pieces.erase(pieces.begin() + static_cast<long>(k));
        changed = true;
        break;
      }
    }
  }
  if (bps.empty()) pieces.resize(1);
}

Interval arc(double a, double b) { return Interval(CirclePoint(a), CirclePoint(b)); }

}  // namespace

Smoothness classify_defect(double defect) {
  if (defect > kNonSmoothDefect) return Smoothness::nonsmooth;
  if (defect < kSmoothDefect) return Smoothness::smooth;
  return Smoothness::ambiguous;
}

std::size_t arc_index(const std::vector<CirclePoint>& breakpoints, double theta) {
  if (breakpoints.empty()) return 0;
  theta = normalize_angle(theta);
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), theta,
                             [](double t, const CirclePoint& p) { return t < p.theta(); });
  if (it == breakpoints.begin()) return breakpoints.size() - 1;
  return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

// ---- PcwMobius ----

PcwMobius::PcwMobius(std::vector<CirclePoint> breakpoints, std::vector<MobiusElement> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  sort_pairs(breakpoints_, pieces_);
}

const MobiusElement& PcwMobius::piece_at(CirclePoint p) const { return pieces_[arc_index(breakpoints_, p.theta())]; }

CirclePoint PcwMobius::apply(CirclePoint p) const { return piece_at(p).apply(p); }

double PcwMobius::derivative(CirclePoint p) const { return piece_at(p).derivative(p); }

PcwMobius PcwMobius::inverse() const {
  if (is_mobius()) return PcwMobius(pieces_[0].inverse());
  std::vector<CirclePoint> b;
  std::vector<MobiusElement> p;
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    b.push_back(pieces_[k].apply(breakpoints_[k]));
    p.push_back(pieces_[k].inverse());
  }
  return PcwMobius(b, p);
}

PcwMobius PcwMobius::simplified(double tol) const {
  auto b = breakpoints_;
  auto p = pieces_;
  drop_redundant(b, p, [tol](const MobiusElement& x, const MobiusElement& y) { return distance(x, y) <= tol; });
  if (b.empty()) return PcwMobius(p[0]);
  return PcwMobius(b, p);
}

PcwMobius compose(const PcwMobius& g, const PcwMobius& h) {
  std::vector<CirclePoint> pts = h.breakpoints();
  const PcwMobius hinv = h.inverse();
  for (const auto& b : g.breakpoints()) pts.push_back(hinv.apply(b));
  pts = merge_points(pts);
  if (pts.empty()) return PcwMobius(g.pieces()[0] * h.pieces()[0]);
  std::vector<MobiusElement> pieces;
  for (double m : arc_midpoints(pts)) {
    const CirclePoint z(m);
    pieces.push_back(g.piece_at(h.apply(z)) * h.piece_at(z));
  }
  return PcwMobius(pts, pieces).simplified();
}

double sup_distance(const PcwMobius& g, const PcwMobius& h, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const CirclePoint z(kTwoPi * (i + 0.5) / samples);
    worst = std::max(worst, mobius::circle_distance(g.apply(z), h.apply(z)));
  }
  return worst;
}

C1Report c1_check(const PcwMobius& g, double tol) {
  C1Report r;
  const std::size_t m = g.breakpoints().size();
  for (std::size_t k = 0; k < m; ++k) {
    const CirclePoint z = g.breakpoints()[k];
    const MobiusElement& l = g.pieces()[(k + m - 1) % m];
    const MobiusElement& rt = g.pieces()[k];
    BreakpointCheck c{z};
    c.value_gap = mobius::circle_distance(l.apply(z), rt.apply(z));
    const double scale = std::max({1.0, l.derivative(z), rt.derivative(z)});
    c.derivative_gap = std::abs(l.derivative(z) - rt.derivative(z)) / scale;
    c.second_derivative_gap = std::abs(l.second_derivative(z) - rt.second_derivative(z));
    if (c.value_gap > tol || c.derivative_gap > tol) r.ok = false;
    r.breakpoints.push_back(c);
  }
  return r;
}

std::vector<double> c2_defect(const PcwMobius& g) {
  std::vector<double> out;
  for (const auto& c : c1_check(g).breakpoints) out.push_back(c.second_derivative_gap);
  return out;
}

PcwMobius kappa(const Interval& i1, const Interval& i2, double s) {
  if (!mobius::distant(i1, i2)) throw std::invalid_argument("kappa needs distant intervals");
  const Interval k1(i1.end(), i2.start());
  const Interval k2(i2.end(), i1.start());
  return PcwMobius({i1.start(), i1.end(), i2.start(), i2.end()},
                   {mobius::interval_dilation(i1, s), mobius::interval_dilation(k1, -s),
                    mobius::interval_dilation(i2, s), mobius::interval_dilation(k2, -s)});
}

namespace {

// Start index of the four consecutive breakpoints whose smallest gap is largest.
std::pair<std::size_t, double> best_window(const std::vector<CirclePoint>& bps, std::size_t width) {
  const std::size_t m = bps.size();
  std::size_t best = 0;
  double best_gap = -1.0;
  for (std::size_t j = 0; j < m; ++j) {
    double gap = kTwoPi;
    for (std::size_t i = 0; i + 1 < width; ++i) {
      gap = std::min(gap, normalize_angle(bps[(j + i + 1) % m].theta() - bps[(j + i) % m].theta()));
    }
    if (gap > best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return {best, best_gap};
}

// Three anticlockwise points containing all breakpoints (for at most three).
std::array<CirclePoint, 3> three_points(const std::vector<CirclePoint>& bps) {
  std::vector<double> t;
  for (const auto& b : bps) t.push_back(b.theta());
  if (t.empty()) t.push_back(0.0);
  while (t.size() < 3) {
    // split the longest arc
    std::size_t arg = 0;
    double longest = -1.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double len = k + 1 < t.size() ? t[k + 1] - t[k] : t[0] + kTwoPi - t[k];
      if (len > longest) {
        longest = len;
        arg = k;
      }
    }
    t.insert(t.begin() + static_cast<long>(arg) + 1, t[arg] + longest / 2.0);
    std::sort(t.begin(), t.end());
  }
  return {CirclePoint(t[0]), CirclePoint(t[1]), CirclePoint(t[2])};
}

}  // namespace

Decomposition generator_decompose(const PcwMobius& g) {
  if (!c1_check(g, 1e-8).ok) throw std::invalid_argument("generator_decompose needs a C1 element");
  Decomposition d;
  PcwMobius gamma = g.simplified();
  const std::size_t max_steps = gamma.breakpoints().size() + 1;
  for (std::size_t step = 0; step <= max_steps; ++step) {
    if (gamma.is_mobius()) {
      d.factors.emplace_back(gamma.pieces()[0]);
      return d;
    }
    const auto& bps = gamma.breakpoints();
    if (bps.size() <= 3) {
      const auto z = three_points(bps);
      const MobiusElement psi = mobius::interp3({gamma.apply(z[0]), gamma.apply(z[1]), gamma.apply(z[2])}, z);
      const PcwMobius rest = (PcwMobius(psi) * gamma).simplified(1e-8);
      if (!rest.is_mobius()) throw std::runtime_error("remainder with at most three breakpoints is not Möbius");
      d.factors.emplace_back(psi.inverse() * rest.pieces()[0]);
      return d;
    }
    const auto [j, gap] = best_window(bps, 4);
    const std::size_t m = bps.size();
    const CirclePoint z1 = bps[j], z2 = bps[(j + 1) % m], z3 = bps[(j + 2) % m], z4 = bps[(j + 3) % m];
    const MobiusElement psi = mobius::interp3({gamma.apply(z1), gamma.apply(z2), gamma.apply(z3)}, {z1, z2, z3});
    const PcwMobius pg = PcwMobius(psi) * gamma;
    const double s = std::log(pg.pieces()[arc_index(pg.breakpoints(), z1.theta() + 1e-9)].derivative(z1));
    const CirclePoint w = pg.apply(z4);
    const Interval i1(z1, z2), i3(z3, w);
    d.min_separation = std::min({d.min_separation, gap, normalize_angle(w.theta() - z3.theta()),
                                 normalize_angle(z1.theta() - w.theta())});
    d.factors.emplace_back(psi.inverse());
    d.factors.emplace_back(KappaDescriptor{i1, i3, s});
    gamma = (kappa(i1, i3, -s) * pg).simplified(1e-9);
  }
  throw std::runtime_error("generator_decompose did not terminate");
}

PcwMobius recompose(const std::vector<Factor>& factors) {
  PcwMobius acc;
  for (const auto& f : factors) {
    if (const auto* e = std::get_if<MobiusElement>(&f)) {
      acc = acc * PcwMobius(*e);
    } else {
      const auto& k = std::get<KappaDescriptor>(f);
      acc = acc * kappa(k.i1, k.i2, k.s);
    }
  }
  return acc;
}

PcwMobius random_six_breakpoint(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double a = kTwoPi * u(rng);
    const double b = a + 2.6 + 0.8 * u(rng);
    const Interval i1 = arc(a, a + 0.5 + 1.0 * u(rng)), i2 = arc(b, b + 0.5 + 1.0 * u(rng));
    const Interval j1 = arc(a, a + 0.5 + 1.0 * u(rng)), j2 = arc(b, b + 0.5 + 1.0 * u(rng));
    const double s = 2.0 * u(rng) - 1.0, t = 2.0 * u(rng) - 1.0;
    if (std::abs(s) < 0.1 || std::abs(t) < 0.1) continue;
    PcwMobius g = (kappa(i1, i2, s) * kappa(j1, j2, t)).simplified(1e-9);
    if (g.breakpoints().size() == 6 && c1_check(g, 1e-8).ok) return g;
  }
}

namespace {

// β_s = κ^{I₁,J^c}_s ∘ δ^J_s with β_s(x) = y; identity off J.
PcwMobius move_one_point(const Interval& j, CirclePoint x, CirclePoint y) {
  const double ox = j.offset(x), oy = j.offset(y), len = j.length();
  const double lo = std::min(ox, oy), hi = std::max(ox, oy);
  const double a = j.start().theta() + lo / 2.0;
  const double b = j.start().theta() + hi + (len - hi) / 2.0;
  const Interval i1 = arc(a, b);
  const Interval jc = j.complement();
  auto beta = [&](double s) {
    const PcwMobius raw = kappa(i1, jc, s) * PcwMobius(mobius::interval_dilation(j, s));
    if (raw.is_mobius()) return raw;
    std::vector<MobiusElement> pieces = raw.pieces();
    const auto mids = arc_midpoints(raw.breakpoints());
    for (std::size_t k = 0; k < pieces.size(); ++k)
      if (!j.contains(CirclePoint(mids[k]), 0.0)) pieces[k] = MobiusElement::identity();
    return PcwMobius(raw.breakpoints(), pieces).simplified();
  };
  auto f = [&](double s) { return j.offset(beta(s).apply(x)) - oy; };
  if (std::abs(ox - oy) < 1e-15) return PcwMobius();
  const double dir = oy > ox ? 1.0 : -1.0;
  double s_lo = 0.0, s_hi = 0.0;
  bool found = false;
  for (int k = 0; k < 64; ++k) {
    const double s = dir * std::ldexp(1.0, k) / 8.0;
    if (f(s) * dir >= 0.0) {
      s_hi = s;
      found = true;
      break;
    }
    s_lo = s;
  }
  if (!found) throw std::runtime_error("one-point mover failed to bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    const double fm = f(mid);
    if (std::abs(fm) <= 1e-13 || mid == s_lo || mid == s_hi) {
      s_lo = s_hi = mid;
      break;
    }
    if (fm * dir < 0.0) s_lo = mid; else s_hi = mid;
  }
  return beta(0.5 * (s_lo + s_hi));
}

void check_order(const std::vector<CirclePoint>& pts, const char* what) {
  for (std::size_t k = 0; k + 2 < pts.size(); ++k)
    if (!mobius::anticlockwise(pts[k], pts[k + 1], pts[k + 2], 1e-13))
      throw std::invalid_argument(std::string(what) + " points are not distinct and anticlockwise");
  if (pts.size() >= 3 && !mobius::anticlockwise(pts[pts.size() - 2], pts.back(), pts.front(), 1e-13))
    throw std::invalid_argument(std::string(what) + " points are not distinct and anticlockwise");
  if (pts.size() == 2 && mobius::approx_equal(pts[0], pts[1], 1e-13))
    throw std::invalid_argument(std::string(what) + " points are not distinct");
}

PcwMobius localized(const std::vector<CirclePoint>& src, const std::vector<CirclePoint>& dst, const Interval& within) {
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (!within.contains(src[k]) || !within.contains(dst[k]))
      throw std::invalid_argument("points must lie inside the localization interval");
    if (k > 0 && (within.offset(src[k]) <= within.offset(src[k - 1]) || within.offset(dst[k]) <= within.offset(dst[k - 1])))
      throw std::invalid_argument("points must be ordered inside the localization interval");
  }
  // Each step moves one point inside the gap between its current neighbours, so placed points stay fixed.
  // The last point of a run moving right (or the first of a run moving left) always has its target in that gap.
  const std::size_t n = src.size();
  std::vector<CirclePoint> cur = src;
  const auto direction = [&](std::size_t k) {
    const double d = within.offset(dst[k]) - within.offset(cur[k]);
    return std::abs(d) < 1e-15 ? 0 : (d > 0.0 ? 1 : -1);
  };
  PcwMobius gamma;
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<std::size_t> pick;
    for (std::size_t k = 0; k < n && !pick; ++k) {
      if (direction(k) == 1 && (k + 1 == n || direction(k + 1) != 1)) pick = k;
      if (direction(k) == -1 && (k == 0 || direction(k - 1) != -1)) pick = k;
    }
    if (!pick) break;
    const std::size_t k = *pick;
    const Interval j(k == 0 ? within.start() : cur[k - 1], k + 1 == n ? within.end() : cur[k + 1]);
    gamma = (move_one_point(j, cur[k], dst[k]) * gamma).simplified();
    cur[k] = dst[k];
  }
  return gamma;
}

}  // namespace

PcwMobius interpolate_points(const std::vector<CirclePoint>& src, const std::vector<CirclePoint>& dst,
                             const std::optional<Interval>& within) {
  if (src.size() != dst.size()) throw std::invalid_argument("src and dst sizes differ");
  if (src.empty()) return PcwMobius();
  check_order(src, "source");
  check_order(dst, "target");
  PcwMobius out;
  if (within) {
    out = localized(src, dst, *within);
  } else {
    const std::size_t n = src.size();
    if (n == 1) {
      out = PcwMobius(MobiusElement::rotation(angle_diff(dst[0].theta(), src[0].theta())));
    } else {
      const auto tri = [](const std::vector<CirclePoint>& p) {
        const double a = p.back().theta();
        const double gap = normalize_angle(p.front().theta() - a);
        return std::array<CirclePoint, 3>{p.front(), p.back(), CirclePoint(a + gap / 2.0)};
      };
      std::array<CirclePoint, 3> s3, d3;
      if (n == 3) {
        s3 = {src[0], src[1], src[2]};
        d3 = {dst[0], dst[1], dst[2]};
      } else {
        s3 = tri(src);
        d3 = tri(dst);
      }
      const MobiusElement psi = mobius::interp3(s3, d3);
      out = PcwMobius(psi);
      if (n > 3) {
        std::vector<CirclePoint> s_mid, d_mid;
        for (std::size_t k = 1; k + 1 < n; ++k) {
          s_mid.push_back(psi.apply(src[k]));
          d_mid.push_back(dst[k]);
        }
        out = localized(s_mid, d_mid, Interval(dst.front(), dst.back())) * out;
      }
    }
  }
  for (std::size_t k = 0; k < src.size(); ++k)
    if (mobius::circle_distance(out.apply(src[k]), dst[k]) > 1e-9)
      throw std::runtime_error("interpolation missed a target point");
  return out;
}

// ---- PcwField ----

PcwField::PcwField(std::vector<CirclePoint> breakpoints, std::vector<MobiusField> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  sort_pairs(breakpoints_, pieces_);
}

const MobiusField& PcwField::piece_at(double theta) const { return pieces_[arc_index(breakpoints_, theta)]; }

PcwField PcwField::simplified(double tol) const {
  auto b = breakpoints_;
  auto p = pieces_;
  drop_redundant(b, p, [tol](const MobiusField& x, const MobiusField& y) { return x.max_abs_diff(y) <= tol; });
  if (b.empty()) return PcwField(p[0]);
  return PcwField(b, p);
}

double PcwField::mean() const {
  auto integral = [](const MobiusField& f, double a, double b) {
    return f.c0 * (b - a) + f.c1 * (std::sin(b) - std::sin(a)) - f.c2 * (std::cos(b) - std::cos(a));
  };
  if (is_mobius()) return pieces_[0].c0;
  double total = 0.0;
  const std::size_t m = breakpoints_.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double a = breakpoints_[k].theta();
    const double b = k + 1 < m ? breakpoints_[k + 1].theta() : breakpoints_[0].theta() + kTwoPi;
    total += integral(pieces_[k], a, b);
  }
  return total / kTwoPi;
}

PcwField PcwField::rotated(double alpha) const {
  const double c = std::cos(alpha), s = std::sin(alpha);
  std::vector<MobiusField> p;
  for (const auto& f : pieces_) p.push_back({f.c0, f.c1 * c - f.c2 * s, f.c1 * s + f.c2 * c});
  if (is_mobius()) return PcwField(p[0]);
  std::vector<CirclePoint> b;
  for (const auto& x : breakpoints_) b.push_back(CirclePoint(x.theta() + alpha));
  return PcwField(b, p);
}

namespace {

PcwField combine(const std::vector<const PcwField*>& fields, const std::vector<double>& weights) {
  std::vector<CirclePoint> pts;
  for (const auto* f : fields) pts.insert(pts.end(), f->breakpoints().begin(), f->breakpoints().end());
  pts = merge_points(pts);
  std::vector<MobiusField> pieces;
  for (double m : arc_midpoints(pts)) {
    MobiusField acc;
    for (std::size_t i = 0; i < fields.size(); ++i) acc = acc + fields[i]->piece_at(m) * weights[i];
    pieces.push_back(acc);
  }
  if (pts.empty()) return PcwField(pieces[0]);
  return PcwField(pts, pieces);
}

}  // namespace

PcwField PcwField::operator+(const PcwField& o) const { return combine({this, &o}, {1.0, 1.0}); }
PcwField PcwField::operator-(const PcwField& o) const { return combine({this, &o}, {1.0, -1.0}); }

PcwField PcwField::operator*(double s) const {
  std::vector<MobiusField> p;
  for (const auto& f : pieces_) p.push_back(f * s);
  if (is_mobius()) return PcwField(p[0]);
  return PcwField(breakpoints_, p);
}

C1Report c1_check(const PcwField& f, double tol) {
  C1Report r;
  const std::size_t m = f.breakpoints().size();
  for (std::size_t k = 0; k < m; ++k) {
    const double t = f.breakpoints()[k].theta();
    const MobiusField& l = f.pieces()[(k + m - 1) % m];
    const MobiusField& rt = f.pieces()[k];
    BreakpointCheck c{f.breakpoints()[k]};
    c.value_gap = std::abs(l(t) - rt(t));
    c.derivative_gap = std::abs(l.derivative(t) - rt.derivative(t));
    c.second_derivative_gap = std::abs(l.second_derivative(t) - rt.second_derivative(t));
    if (c.value_gap > tol || c.derivative_gap > tol) r.ok = false;
    r.breakpoints.push_back(c);
  }
  return r;
}

std::vector<double> c2_defect(const PcwField& f) {
  std::vector<double> out;
  for (const auto& c : c1_check(f).breakpoints) out.push_back(c.second_derivative_gap);
  return out;
}

double piecewise_distance(const PcwField& f, const PcwField& g) {
  std::vector<CirclePoint> pts = f.breakpoints();
  pts.insert(pts.end(), g.breakpoints().begin(), g.breakpoints().end());
  double worst = 0.0;
  for (double m : arc_midpoints(merge_points(pts))) worst = std::max(worst, f.piece_at(m).max_abs_diff(g.piece_at(m)));
  return worst;
}

PcwField kappa_field(const Interval& i1, const Interval& i2) {
  if (!mobius::distant(i1, i2)) throw std::invalid_argument("kappa_field needs distant intervals");
  const Interval k1(i1.end(), i2.start());
  const Interval k2(i2.end(), i1.start());
  return PcwField({i1.start(), i1.end(), i2.start(), i2.end()},
                  {mobius::interval_dilation_field(i1), -mobius::interval_dilation_field(k1),
                   mobius::interval_dilation_field(i2), -mobius::interval_dilation_field(k2)});
}

FieldDecomposition field_span_decompose(const PcwField& f) {
  FieldDecomposition d;
  PcwField rest = f.simplified();
  const std::size_t max_steps = rest.breakpoints().size() + 1;
  for (std::size_t step = 0; step <= max_steps; ++step) {
    if (rest.is_mobius()) {
      d.global = d.global + rest.pieces()[0];
      return d;
    }
    const auto& bps = rest.breakpoints();
    if (bps.size() <= 3) {
      const auto z = three_points(bps);
      const MobiusField g = mobius::field_through(z, {rest(z[0].theta()), rest(z[1].theta()), rest(z[2].theta())});
      const PcwField left = (rest - PcwField(g)).simplified(1e-9);
      if (!left.is_mobius() || left.pieces()[0].max_abs_diff({}) > 1e-8)
        throw std::runtime_error("field with at most three breakpoints is not Möbius");
      d.global = d.global + g;
      return d;
    }
    const auto [j, gap] = best_window(bps, 4);
    const std::size_t m = bps.size();
    const CirclePoint z1 = bps[j], z2 = bps[(j + 1) % m], z3 = bps[(j + 2) % m], z4 = bps[(j + 3) % m];
    const MobiusField g = mobius::field_through({z1, z2, z3}, {rest(z1.theta()), rest(z2.theta()), rest(z3.theta())});
    const PcwField shifted = rest - PcwField(g);
    const double lambda = shifted.pieces()[j].derivative(z1.theta());
    const Interval i1(z1, z2), i3(z3, z4);
    d.global = d.global + g;
    d.terms.push_back(FieldTerm{i1, i3, lambda});
    rest = (shifted - kappa_field(i1, i3) * lambda).simplified(1e-9);
  }
  throw std::runtime_error("field_span_decompose did not terminate");
}

PcwField reconstruct(const FieldDecomposition& d) {
  PcwField acc(d.global);
  for (const auto& t : d.terms) acc = acc + kappa_field(t.i1, t.i2) * t.lambda;
  return acc;
}

PcwField bump_field(const Interval& interval) {
  const double a = interval.start().theta();
  const double len = interval.length();
  const Interval j = arc(a + 0.1 * len, a + 0.9 * len);
  const Interval i1 = j.complement();
  const double ja = a + 0.1 * len, jl = 0.8 * len;
  const Interval i2 = arc(ja + jl / 3.0, ja + 2.0 * jl / 3.0);
  PcwField b = kappa_field(i1, i2) - PcwField(mobius::interval_dilation_field(i1));
  // exact zero on I₁
  std::vector<MobiusField> pieces = b.pieces();
  pieces[arc_index(b.breakpoints(), i1.midpoint().theta())] = MobiusField{};
  b = PcwField(b.breakpoints(), pieces);
  return b * (1.0 / b.mean());
}

std::vector<ApproxStep> approx_field(const circlefn::FourierFunction& f, int steps,
                                     const std::function<double(double)>& values,
                                     const std::optional<Interval>& support) {
  if (steps <= 0) throw std::invalid_argument("steps must be positive");
  if (f.reality_defect() > 1e-12) throw std::invalid_argument("approx_field needs a real function");
  std::vector<ApproxStep> out;
  const int cutoff = std::max(kApproxCutoff, f.cutoff());
  for (int step = 0; step < steps; ++step) {
    ApproxStep st;
    st.samples = 8 << step;
    const int n = st.samples;
    st.mollifier_width = 2.0 * std::pow(static_cast<double>(n), -0.25);
    const PcwField l = bump_field(arc(-st.mollifier_width, st.mollifier_width));
    std::vector<double> samples(static_cast<std::size_t>(n));
    std::vector<PcwField> shifted;
    std::vector<const PcwField*> ptrs;
    std::vector<double> weights;
    double mean_abs = 0.0;
    for (int k = 0; k < n; ++k) {
      const double th = kTwoPi * k / n;
      samples[k] = values ? values(th) : f(th);
      mean_abs += std::abs(samples[k]) / n;
      shifted.push_back(l.rotated(th));
    }
    for (int k = 0; k < n; ++k) {
      if (samples[k] == 0.0) continue;
      ptrs.push_back(&shifted[k]);
      weights.push_back(samples[k] / n);
    }
    st.field = ptrs.empty() ? PcwField() : combine(ptrs, weights).simplified(1e-14);

    // ĥ_n = l̂_n·(1/N)Σ f(θ_k)e^{−inθ_k}
    const circlefn::FourierFunction lhat = circlefn::fourier_of_pcw_field(l, cutoff);
    circlefn::FourierFunction diff(cutoff);
    for (int m = -cutoff; m <= cutoff; ++m) {
      circlefn::Complex dft = 0.0;
      for (int k = 0; k < n; ++k) dft += samples[k] * std::polar(1.0, -m * kTwoPi * k / n);
      diff.set_coeff(m, f.coeff(m) - lhat.coeff(m) * dft / static_cast<double>(n));
    }
    if (lhat.decay_constant()) {
      double c = *lhat.decay_constant() * mean_abs;
      if (f.cutoff() > cutoff || f.decay_constant()) c += f.decay_constant().value_or(0.0);
      if (f.cutoff() <= cutoff || f.decay_constant()) diff.set_decay_constant(c);
    }
    st.error = circlefn::norm_three_half(diff);

    if (support) {
      bool inside = true;
      const auto& bps = st.field.breakpoints();
      const auto mids = arc_midpoints(bps);
      for (std::size_t k = 0; k < mids.size() && inside; ++k) {
        const MobiusField& p = st.field.pieces()[k];
        if (p.max_abs_diff({}) <= 1e-14) continue;
        if (bps.empty()) {
          inside = false;
          break;
        }
        const CirclePoint lo = bps[k], hi = bps[(k + 1) % bps.size()];
        const bool lo_ok = support->contains(lo) || mobius::approx_equal(lo, support->start(), 1e-12);
        const bool hi_ok = support->contains(hi) || mobius::approx_equal(hi, support->end(), 1e-12);
        inside = support->contains(CirclePoint(mids[k])) && lo_ok && hi_ok;
      }
      st.supported_in = inside;
    }
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace chiral::pcwmob
