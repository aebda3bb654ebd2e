#include "spr/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spr/errors.hpp"

namespace spr {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Neumaier-compensated sum, used for the probability normalization checks.
double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double objective_norm(std::span<const cplx> f, std::span<const cplx> g, std::span<const double> w, double theta,
                      double p) {
  const double s = kernels::shifted_pow_sum(f, g, std::polar(1.0, theta), w, p);
  if (std::isinf(p)) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

// Golden-section refinement on [lo, hi]; returns the best evaluated point.
template <class F>
std::pair<double, double> golden_section(F&& objective, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  double best_x = fc <= fd ? c : d;
  double best_f = std::min(fc, fd);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
      if (fc < best_f) best_f = fc, best_x = c;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
      if (fd < best_f) best_f = fd, best_x = d;
    }
  }
  return {best_x, best_f};
}

}  // namespace

std::string to_string(Field field) { return field == Field::real ? "real" : "complex"; }

Field field_from_string(const std::string& name) {
  if (name == "real") return Field::real;
  if (name == "complex") return Field::complex;
  throw InvalidArgument("unknown field '" + name + "' (expected real|complex)");
}

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::interval_grid: return "interval-grid";
    case MeasureKind::square_grid: return "square-grid";
    case MeasureKind::product_space: return "product-space";
  }
  return "?";
}

MeasureKind measure_kind_from_string(const std::string& name) {
  if (name == "interval-grid") return MeasureKind::interval_grid;
  if (name == "square-grid") return MeasureKind::square_grid;
  if (name == "product-space") return MeasureKind::product_space;
  throw InvalidArgument("unknown measure kind '" + name + "'");
}

std::size_t DiscreteMeasure::ix(std::size_t atom) const {
  switch (kind_) {
    case MeasureKind::interval_grid: return atom;
    case MeasureKind::square_grid: return atom / static_cast<std::size_t>(grid_n_);
    default: throw InvalidArgument("ix() requires a grid measure");
  }
}

std::size_t DiscreteMeasure::iy(std::size_t atom) const {
  if (kind_ != MeasureKind::square_grid) throw InvalidArgument("iy() requires a square grid");
  return atom % static_cast<std::size_t>(grid_n_);
}

double DiscreteMeasure::x(std::size_t atom) const {
  return (static_cast<double>(ix(atom)) + 0.5) / grid_n_;
}

double DiscreteMeasure::y(std::size_t atom) const {
  return (static_cast<double>(iy(atom)) + 0.5) / grid_n_;
}

std::size_t DiscreteMeasure::support_index(std::size_t atom, int coord) const {
  if (kind_ != MeasureKind::product_space) throw InvalidArgument("support_index() requires a product space");
  if (coord < 0 || coord >= factors_) throw InvalidArgument("coordinate out of range");
  const std::size_t k = support_.size();
  for (int j = 0; j < coord; ++j) atom /= k;
  return atom % k;
}

bool DiscreteMeasure::same_as(const DiscreteMeasure& other) const {
  if (this == &other) return true;
  if (kind_ != other.kind_ || size() != other.size() || grid_n_ != other.grid_n_ || factors_ != other.factors_)
    return false;
  if (support_.size() != other.support_.size()) return false;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i].value != other.support_[i].value || support_[i].probability != other.support_[i].probability)
      return false;
  }
  return true;
}

MeasurePtr make_interval_grid(int n) {
  if (n < 2) throw InvalidArgument("interval grid needs n >= 2, got " + std::to_string(n));
  auto m = std::shared_ptr<DiscreteMeasure>(new DiscreteMeasure());
  m->kind_ = MeasureKind::interval_grid;
  m->grid_n_ = n;
  m->weights_.assign(static_cast<std::size_t>(n), 1.0 / n);
  return m;
}

MeasurePtr make_square_grid(int n) {
  if (n < 2) throw InvalidArgument("square grid needs n >= 2, got " + std::to_string(n));
  auto m = std::shared_ptr<DiscreteMeasure>(new DiscreteMeasure());
  m->kind_ = MeasureKind::square_grid;
  m->grid_n_ = n;
  const double w = 1.0 / (static_cast<double>(n) * n);
  m->weights_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), w);
  return m;
}

MeasurePtr make_product_space(std::vector<SupportPoint> support, int m, std::size_t atom_cap) {
  if (m < 1) throw InvalidArgument("product space needs m >= 1");
  if (support.empty()) throw InvalidArgument("product space needs a nonempty support");
  std::vector<double> probs;
  for (const auto& s : support) {
    if (!(s.probability > 0.0)) throw InvalidArgument("support probabilities must be strictly positive");
    probs.push_back(s.probability);
  }
  const double total = compensated_sum(probs);
  if (std::abs(total - 1.0) > 1e-14)
    throw InvalidArgument("support probabilities sum to " + std::to_string(total) + ", expected 1");

  std::size_t atoms = 1;
  for (int j = 0; j < m; ++j) {
    if (atoms > atom_cap / support.size())
      throw ResourceLimit("product space |support|^m exceeds the atom cap of " + std::to_string(atom_cap));
    atoms *= support.size();
  }
  if (atoms > atom_cap)
    throw ResourceLimit("product space |support|^m exceeds the atom cap of " + std::to_string(atom_cap));

  auto out = std::shared_ptr<DiscreteMeasure>(new DiscreteMeasure());
  out->kind_ = MeasureKind::product_space;
  out->factors_ = m;
  out->support_ = std::move(support);
  out->weights_.resize(atoms);
  const std::size_t k = out->support_.size();
  for (std::size_t a = 0; a < atoms; ++a) {
    double w = 1.0;
    std::size_t rest = a;
    for (int j = 0; j < m; ++j, rest /= k) w *= out->support_[rest % k].probability;
    out->weights_[a] = w;
  }
  if (std::abs(compensated_sum(out->weights_) - 1.0) > 1e-13)
    throw InvalidArgument("product weights do not sum to 1");
  return out;
}

cplx grid_character(std::int64_t freq, std::size_t index, int n) {
  // freq·(index + 1/2)/n = freq·(2·index + 1)/(2n); reduce mod 2n. Both factors
  // are below 2n < 2³², so the product fits in 64 unsigned bits.
  const std::uint64_t modulus = 2 * static_cast<std::uint64_t>(n);
  std::int64_t fr = freq % static_cast<std::int64_t>(modulus);
  if (fr < 0) fr += static_cast<std::int64_t>(modulus);
  const std::uint64_t num = static_cast<std::uint64_t>(fr) * ((2 * static_cast<std::uint64_t>(index) + 1) % modulus) % modulus;
  const double angle = std::numbers::pi * static_cast<double>(num) / n;
  return {std::cos(angle), std::sin(angle)};
}

SampledFunction::SampledFunction(MeasurePtr measure, std::vector<cplx> values)
    : measure_(std::move(measure)), values_(std::move(values)) {
  if (!measure_) throw InvalidArgument("sampled function needs a measure");
  if (values_.size() != measure_->size())
    throw InvalidArgument("sampled function has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(measure_->size()) + " atoms");
}

SampledFunction SampledFunction::zero(MeasurePtr measure) { return constant(std::move(measure), 0.0); }

SampledFunction SampledFunction::constant(MeasurePtr measure, cplx value) {
  const std::size_t n = measure->size();
  return SampledFunction(std::move(measure), std::vector<cplx>(n, value));
}

SampledFunction SampledFunction::modulus() const {
  std::vector<cplx> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](cplx z) { return cplx(std::abs(z), 0.0); });
  return SampledFunction(measure_, std::move(v));
}

SampledFunction SampledFunction::modulus_squared() const {
  std::vector<cplx> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](cplx z) { return cplx(std::norm(z), 0.0); });
  return SampledFunction(measure_, std::move(v));
}

SampledFunction SampledFunction::conjugate() const {
  std::vector<cplx> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), [](cplx z) { return std::conj(z); });
  return SampledFunction(measure_, std::move(v));
}

bool SampledFunction::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](cplx z) { return z.imag() == 0.0; });
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& other) {
  require_same_measure(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& other) {
  require_same_measure(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SampledFunction& SampledFunction::operator*=(cplx scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

SampledFunction operator*(const SampledFunction& a, const SampledFunction& b) {
  require_same_measure(a, b);
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
  return SampledFunction(a.measure_, std::move(v));
}

void require_same_measure(const SampledFunction& f, const SampledFunction& g) {
  if (f.measure_ptr() != g.measure_ptr() && !f.measure().same_as(g.measure()))
    throw InvalidArgument("functions are sampled on different measures");
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
  require_same_measure(f, g);
  return kernels::inner(f.values(), g.values(), f.measure().weights());
}

double norm_p(const SampledFunction& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("norm_p needs p >= 1");
  if (std::isinf(p)) return kernels::max_abs(f.values());
  const double s = kernels::abs_pow_sum(f.values(), f.measure().weights(), p);
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

double modulus_gap(const SampledFunction& f, const SampledFunction& g, double p) {
  require_same_measure(f, g);
  if (!(p >= 1.0)) throw InvalidArgument("modulus_gap needs p >= 1");
  const double s = kernels::modulus_gap_pow_sum(f.values(), g.values(), f.measure().weights(), p);
  if (std::isinf(p)) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

PhaseAlignment min_phase_dist(const SampledFunction& f, const SampledFunction& g, double p, Field field,
                              const PhaseSearchOptions& options) {
  require_same_measure(f, g);
  if (!(p >= 1.0)) throw InvalidArgument("min_phase_dist needs p >= 1");
  const auto fv = f.values();
  const auto gv = g.values();
  const auto w = f.measure().weights();

  PhaseAlignment out;
  out.field = field;

  if (field == Field::real) {
    const double plus = objective_norm(fv, gv, w, 0.0, p);
    const double minus = objective_norm(fv, gv, w, std::numbers::pi, p);
    out.theta = minus < plus ? std::numbers::pi : 0.0;
    out.distance = std::min(plus, minus);
    return out;
  }

  if (p == 2.0 && options.closed_form_p2) {
    const cplx c = kernels::inner(fv, gv, w);
    const double scale = std::sqrt(kernels::abs_pow_sum(fv, w, 2.0) * kernels::abs_pow_sum(gv, w, 2.0));
    if (std::abs(c) <= options.degenerate_rel * scale) {
      out.degenerate_phase = true;
      out.theta = 0.0;
    } else {
      out.theta = wrap_angle(std::arg(c));
    }
    // Evaluated directly rather than as sqrt(‖f‖²+‖g‖²−2|⟨f,g⟩|), which cancels when f ≈ zg.
    out.distance = objective_norm(fv, gv, w, out.theta, 2.0);
    return out;
  }

  if (p == 4.0 && options.polynomial_p4) {
    // Coarse scan on the expansion about z = 1, then refine on the expansion
    // re-centred at the coarse winner, where d = f − z₀g is as small as it gets.
    const int k = std::max(options.coarse_points, 3) * 4;
    const double step = kTwoPi / k;
    const auto global = kernels::quartic_moments(fv, gv, 1.0, w);
    int best = 0;
    double best_val = kInfinity;
    for (int i = 0; i < k; ++i) {
      const double v = global.eval(std::polar(1.0, i * step) - 1.0);
      if (v < best_val) best_val = v, best = i;
    }
    // Each pass re-centres at the refined angle so the local moments shrink
    // with d and the polynomial keeps its relative accuracy.
    double centre = best * step;
    double half = step;
    for (int pass = 0; pass < 4; ++pass) {
      const auto local = kernels::quartic_moments(fv, gv, std::polar(1.0, centre), w);
      auto poly = [&](double phi) {
        const double s = std::sin(0.5 * phi);
        return local.eval(cplx(-2.0 * s * s, std::sin(phi)));
      };
      auto [phi, val] = golden_section(poly, -half, half, options.theta_tol);
      if (local.dd2 <= val) break;
      centre += phi;
      half = std::max(8.0 * std::abs(phi), 64.0 * options.theta_tol);
      if (std::abs(phi) <= options.theta_tol) break;
    }
    out.theta = wrap_angle(centre);
    out.distance = objective_norm(fv, gv, w, out.theta, 4.0);
    return out;
  }

  const int k = std::max(options.coarse_points, 3);
  const double step = kTwoPi / k;
  int best = 0;
  double best_val = kInfinity;
  for (int i = 0; i < k; ++i) {
    const double v = objective_norm(fv, gv, w, i * step, p);
    if (v < best_val) best_val = v, best = i;
  }
  auto objective = [&](double theta) { return objective_norm(fv, gv, w, theta, p); };
  const double centre = best * step;
  auto [theta, val] = golden_section(objective, centre - step, centre + step, options.theta_tol);
  if (best_val <= val) theta = centre, val = best_val;
  out.theta = wrap_angle(theta);
  out.distance = val;
  return out;
}

}  // namespace spr
