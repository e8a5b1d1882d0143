#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gridflow {

// Spatial density on one edge interval [0, L], units mass/length.
// Supported shapes keep their integrals in closed form, so endpoint masses
// and conservation audits are exact up to rounding.
class DensityProfile {
  public:
    enum class Shape { Constant, Indicator, Gaussian, Samples };

    static DensityProfile constant(double value);
    // height * 1_{[a,b]}(x)
    static DensityProfile indicator(double a, double b, double height);
    // scale * exp(-(x-center)^2 / width^2)
    static DensityProfile gaussian(double center, double width, double scale);
    // values at equally spaced nodes spanning [0, L], linearly interpolated
    static DensityProfile samples(std::vector<double> values);

    // Rescales the profile so that its mass on [0, L] equals `target`.
    DensityProfile& normalize_mass(double target);

    Shape shape() const { return shape_; }
    double value(double x, double length) const;
    // Integral over [0, L], in closed form (Gaussian via erf, clipped to the
    // edge interval).
    double mass(double length) const;

    // Shape parameters (meaning depends on shape; used by serialization).
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    double param_c() const { return c_; }
    const std::vector<double>& sample_values() const { return values_; }
    std::optional<double> normalize_target() const { return normalize_; }

    // Empty string when well-formed, otherwise a description of the problem
    // (negative values, indicator bounds outside [0, L], ...).
    std::string check(double length) const;

  private:
    double scale_factor(double length) const;

    Shape shape_ = Shape::Constant;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;
    std::vector<double> values_;
    std::optional<double> normalize_;
};

// Scalar flux magnitude over time, |s^G|(t) or d^G(t) on [0, T]. Input files
// store magnitudes; the sign conventions (supply <= 0, demand >= 0) are
// applied where the equations need them.
class FluxProfile {
  public:
    enum class Shape { Zero, Constant, Linear };

    static FluxProfile zero();
    static FluxProfile constant(double value);
    static FluxProfile linear(double slope);

    Shape shape() const { return shape_; }
    double value(double t) const;
    double integral(double t0, double t1) const;

    double param() const { return param_; }

    std::string check(double horizon) const;

  private:
    Shape shape_ = Shape::Zero;
    double param_ = 0.0;
};

}  // namespace gridflow
