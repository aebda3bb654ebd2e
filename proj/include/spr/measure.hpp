#pragma once

// Finite atomic probability spaces and the functions sampled on them.
//
// Every integral in the project is a weighted sum over the atoms of a
// DiscreteMeasure. Grids use the midpoint rule, which integrates a
// trigonometric polynomial exactly whenever all of its frequencies are below
// the grid size in modulus; product spaces realize finitely supported iid
// random variables exactly.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spr/kernels.hpp"

namespace spr {

using cplx = std::complex<double>;

enum class Field { real, complex };

std::string to_string(Field field);
Field field_from_string(const std::string& name);

enum class MeasureKind { interval_grid, square_grid, product_space };

std::string to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);

/// One point of a finitely supported distribution.
struct SupportPoint {
  cplx value;
  double probability = 0.0;
};

inline constexpr std::size_t kDefaultAtomCap = 1'000'000;

class DiscreteMeasure;
using MeasurePtr = std::shared_ptr<const DiscreteMeasure>;

class DiscreteMeasure {
 public:
  MeasureKind kind() const { return kind_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }

  /// Points per axis for grids; 0 for product spaces.
  int grid_n() const { return grid_n_; }
  /// Distribution of each coordinate for product spaces.
  const std::vector<SupportPoint>& support() const { return support_; }
  /// Number of independent coordinates for product spaces.
  int factors() const { return factors_; }

  /// Grid index along x (interval grid: the atom itself).
  std::size_t ix(std::size_t atom) const;
  /// Grid index along y (square grid only).
  std::size_t iy(std::size_t atom) const;
  double x(std::size_t atom) const;
  double y(std::size_t atom) const;

  /// Index into support() of coordinate `coord` (0-based) of a product-space atom.
  std::size_t support_index(std::size_t atom, int coord) const;

  /// Structural equality: same kind, parameters and atom count.
  bool same_as(const DiscreteMeasure& other) const;

  friend MeasurePtr make_interval_grid(int n);
  friend MeasurePtr make_square_grid(int n);
  friend MeasurePtr make_product_space(std::vector<SupportPoint> support, int m, std::size_t atom_cap);

 private:
  DiscreteMeasure() = default;

  MeasureKind kind_ = MeasureKind::interval_grid;
  int grid_n_ = 0;
  int factors_ = 0;
  std::vector<SupportPoint> support_;
  std::vector<double> weights_;
};

/// n midpoint atoms (k + 1/2)/n on [0,1], weight 1/n each.
MeasurePtr make_interval_grid(int n);
/// n² midpoint atoms on [0,1]², atom index = ix·n + iy, weight 1/n² each.
MeasurePtr make_square_grid(int n);
/// All m-tuples over `support`; coordinate j of atom a is digit j of a in base |support|.
MeasurePtr make_product_space(std::vector<SupportPoint> support, int m,
                              std::size_t atom_cap = kDefaultAtomCap);

/// e^{2πi·freq·x} at midpoint atom `index` of an n-point axis, with the phase
/// reduced exactly in integer arithmetic before the trigonometric call.
cplx grid_character(std::int64_t freq, std::size_t index, int n);

class SampledFunction {
 public:
  SampledFunction(MeasurePtr measure, std::vector<cplx> values);

  static SampledFunction zero(MeasurePtr measure);
  static SampledFunction constant(MeasurePtr measure, cplx value);

  /// Values from `at(atom)` for every atom.
  template <class F>
  static SampledFunction generate(MeasurePtr measure, F&& at) {
    std::vector<cplx> values(measure->size());
    for (std::size_t a = 0; a < values.size(); ++a) values[a] = at(a);
    return SampledFunction(std::move(measure), std::move(values));
  }

  const DiscreteMeasure& measure() const { return *measure_; }
  const MeasurePtr& measure_ptr() const { return measure_; }
  std::span<const cplx> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  cplx operator[](std::size_t atom) const { return values_[atom]; }

  SampledFunction modulus() const;
  SampledFunction modulus_squared() const;
  SampledFunction conjugate() const;
  /// True when every imaginary part is exactly zero.
  bool is_real() const;

  SampledFunction& operator+=(const SampledFunction& other);
  SampledFunction& operator-=(const SampledFunction& other);
  SampledFunction& operator*=(cplx scale);

  friend SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
  friend SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
  friend SampledFunction operator*(cplx s, SampledFunction f) { return f *= s; }
  /// Pointwise product.
  friend SampledFunction operator*(const SampledFunction& a, const SampledFunction& b);

 private:
  MeasurePtr measure_;
  std::vector<cplx> values_;
};

/// Throws InvalidArgument unless f and g live on the same measure.
void require_same_measure(const SampledFunction& f, const SampledFunction& g);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ⟨f,g⟩ = Σ f·conj(g)·weight.
cplx inner(const SampledFunction& f, const SampledFunction& g);

/// ‖f‖_p for p ∈ [1, ∞]; pass kInfinity for the sup norm.
double norm_p(const SampledFunction& f, double p);

/// ‖|f| − |g|‖_p.
double modulus_gap(const SampledFunction& f, const SampledFunction& g, double p);

struct PhaseSearchOptions {
  int coarse_points = 64;
  double theta_tol = 1e-12;
  /// Use ⟨f,g⟩/|⟨f,g⟩| for p = 2 instead of scan + golden section.
  bool closed_form_p2 = true;
  /// For p = 4, search on the explicit quartic polynomial in e^{iθ} (two passes
  /// over the atoms) instead of re-evaluating the norm at every trial angle.
  bool polynomial_p4 = true;
  /// |⟨f,g⟩| below this multiple of ‖f‖₂‖g‖₂ counts as a degenerate phase.
  double degenerate_rel = 1e-14;
};

struct PhaseAlignment {
  double theta = 0.0;  ///< radians in [0, 2π); 0 or π for the real field
  double distance = 0.0;
  Field field = Field::complex;
  bool degenerate_phase = false;  ///< every unimodular z attains the minimum
};

/// min over unimodular z (or z = ±1 for the real field) of ‖f − z g‖_p.
PhaseAlignment min_phase_dist(const SampledFunction& f, const SampledFunction& g, double p, Field field,
                              const PhaseSearchOptions& options = {});

}  // namespace spr
