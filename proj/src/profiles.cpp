#include "gridflow/profiles.hpp"

#include <cmath>

#include "gridflow/errors.hpp"

namespace gridflow {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

DensityProfile DensityProfile::constant(double value) {
    DensityProfile p;
    p.shape_ = Shape::Constant;
    p.a_ = value;
    return p;
}

DensityProfile DensityProfile::indicator(double a, double b, double height) {
    DensityProfile p;
    p.shape_ = Shape::Indicator;
    p.a_ = a;
    p.b_ = b;
    p.c_ = height;
    return p;
}

DensityProfile DensityProfile::gaussian(double center, double width, double scale) {
    DensityProfile p;
    p.shape_ = Shape::Gaussian;
    p.a_ = center;
    p.b_ = width;
    p.c_ = scale;
    return p;
}

DensityProfile DensityProfile::samples(std::vector<double> values) {
    DensityProfile p;
    p.shape_ = Shape::Samples;
    p.values_ = std::move(values);
    return p;
}

DensityProfile& DensityProfile::normalize_mass(double target) {
    normalize_ = target;
    return *this;
}

double DensityProfile::scale_factor(double length) const {
    if (!normalize_) return 1.0;
    // Raw mass, i.e. mass() without the normalization applied.
    DensityProfile raw = *this;
    raw.normalize_.reset();
    const double m = raw.mass(length);
    if (*normalize_ == 0.0) return 0.0;
    if (m <= 0.0)
        throw Error(ErrorKind::Invariant,
                    "cannot normalize a zero-mass density profile to a positive mass");
    return *normalize_ / m;
}

double DensityProfile::value(double x, double length) const {
    const double s = scale_factor(length);
    switch (shape_) {
        case Shape::Constant:
            return s * a_;
        case Shape::Indicator: {
            // Closed interval with a relative guard so that nodes meant to sit
            // exactly on a jump are counted as inside.
            const double eps = 1e-12 * std::max(1.0, length);
            return (x >= a_ - eps && x <= b_ + eps) ? s * c_ : 0.0;
        }
        case Shape::Gaussian: {
            const double z = (x - a_) / b_;
            return s * c_ * std::exp(-z * z);
        }
        case Shape::Samples: {
            if (values_.empty()) return 0.0;
            if (values_.size() == 1) return s * values_[0];
            const double h = length / double(values_.size() - 1);
            double pos = x / h;
            if (pos <= 0.0) return s * values_.front();
            if (pos >= double(values_.size() - 1)) return s * values_.back();
            const std::size_t i = static_cast<std::size_t>(pos);
            const double frac = pos - double(i);
            return s * ((1.0 - frac) * values_[i] + frac * values_[i + 1]);
        }
    }
    return 0.0;
}

double DensityProfile::mass(double length) const {
    const double s = scale_factor(length);
    switch (shape_) {
        case Shape::Constant:
            return s * a_ * length;
        case Shape::Indicator: {
            const double lo = std::max(0.0, a_);
            const double hi = std::min(length, b_);
            return hi > lo ? s * c_ * (hi - lo) : 0.0;
        }
        case Shape::Gaussian: {
            // integral of c*exp(-((x-a)/b)^2) over [0, L]
            const double w = b_;
            return s * c_ * w * (kSqrtPi / 2.0) *
                   (std::erf((length - a_) / w) + std::erf(a_ / w));
        }
        case Shape::Samples: {
            if (values_.size() < 2) return values_.empty() ? 0.0 : s * values_[0] * length;
            const double h = length / double(values_.size() - 1);
            double acc = 0.5 * (values_.front() + values_.back());
            for (std::size_t i = 1; i + 1 < values_.size(); ++i) acc += values_[i];
            return s * acc * h;
        }
    }
    return 0.0;
}

std::string DensityProfile::check(double length) const {
    switch (shape_) {
        case Shape::Constant:
            if (a_ < 0.0) return "constant density is negative";
            break;
        case Shape::Indicator:
            if (c_ < 0.0) return "indicator height is negative";
            if (!(0.0 <= a_ && a_ < b_ && b_ <= length))
                return "indicator interval must satisfy 0 <= a < b <= edge length";
            break;
        case Shape::Gaussian:
            if (c_ < 0.0) return "gaussian scale is negative";
            if (!(b_ > 0.0)) return "gaussian width must be positive";
            break;
        case Shape::Samples:
            if (values_.empty()) return "samples profile has no values";
            for (double v : values_)
                if (v < 0.0) return "sample value is negative";
            break;
    }
    if (normalize_ && *normalize_ < 0.0) return "normalization target is negative";
    return "";
}

FluxProfile FluxProfile::zero() { return FluxProfile{}; }

FluxProfile FluxProfile::constant(double value) {
    FluxProfile p;
    p.shape_ = Shape::Constant;
    p.param_ = value;
    return p;
}

FluxProfile FluxProfile::linear(double slope) {
    FluxProfile p;
    p.shape_ = Shape::Linear;
    p.param_ = slope;
    return p;
}

double FluxProfile::value(double t) const {
    switch (shape_) {
        case Shape::Zero: return 0.0;
        case Shape::Constant: return param_;
        case Shape::Linear: return param_ * t;
    }
    return 0.0;
}

double FluxProfile::integral(double t0, double t1) const {
    switch (shape_) {
        case Shape::Zero: return 0.0;
        case Shape::Constant: return param_ * (t1 - t0);
        case Shape::Linear: return 0.5 * param_ * (t1 * t1 - t0 * t0);
    }
    return 0.0;
}

std::string FluxProfile::check(double horizon) const {
    // Stored values are magnitudes, so the profile must be nonnegative on
    // [0, horizon]; for the supported shapes that reduces to a sign check.
    (void)horizon;
    if (shape_ != Shape::Zero && param_ < 0.0)
        return "flux magnitudes must be nonnegative";
    return "";
}

}  // namespace gridflow
