#ifndef TSEM_CUTOFF_HPP
#define TSEM_CUTOFF_HPP

#include <array>
#include <cmath>

#include "tsem/errors.hpp"

namespace tsem {

/// C^2 cutoff chi : R -> [0,1] localizing the interface displacement to the
/// tubular band.  Properties:
///   (i)   chi = 1 on (-a1/3, a2/3)
///   (ii)  chi = 0 outside (-2*a1/3, 2*a2/3)
///   (iii) sign(r) * chi'(r) <= 0
///   (iv)  |chi'(r)| <= 4 / min(a1, a2)
///
/// Each transition is a monotone C^2 piecewise-quartic "plateau" profile: the
/// derivative ramps up over the first quarter of the transition, stays flat,
/// and ramps down over the last quarter.  Peak slope over a transition of
/// width w is exactly (4/3)/w = 4/a_i, which meets (iv) with equality when
/// a_i = a*.  (A single quintic smoothstep would peak at 5.625/a_i and break
/// (iv).)
template <class Scalar>
class Cutoff {
public:
    Cutoff(Scalar a1, Scalar a2) : a1_(a1), a2_(a2) {
        if (!(a1 > Scalar(0)) || !(a2 > Scalar(0)))
            throw ValidationError("Cutoff: tubular radii must be positive");
    }

    Scalar a1() const { return a1_; }
    Scalar a2() const { return a2_; }

    /// Breakpoints of the piecewise definition.
    std::array<Scalar, 4> knots() const {
        return {-2 * a1_ / 3, -a1_ / 3, a2_ / 3, 2 * a2_ / 3};
    }

    Scalar value(Scalar r) const {
        if (r <= -2 * a1_ / 3 || r >= 2 * a2_ / 3) return Scalar(0);
        if (r < -a1_ / 3) return profile((r + 2 * a1_ / 3) * 3 / a1_);
        if (r <= a2_ / 3) return Scalar(1);
        return profile((2 * a2_ / 3 - r) * 3 / a2_);
    }

    Scalar deriv(Scalar r) const {
        if (r <= -2 * a1_ / 3 || r >= 2 * a2_ / 3) return Scalar(0);
        if (r < -a1_ / 3) return profile_deriv((r + 2 * a1_ / 3) * 3 / a1_) * 3 / a1_;
        if (r <= a2_ / 3) return Scalar(0);
        return -profile_deriv((2 * a2_ / 3 - r) * 3 / a2_) * 3 / a2_;
    }

    Scalar second_deriv(Scalar r) const {
        if (r <= -2 * a1_ / 3 || r >= 2 * a2_ / 3) return Scalar(0);
        if (r < -a1_ / 3) return profile_second((r + 2 * a1_ / 3) * 3 / a1_) * 9 / (a1_ * a1_);
        if (r <= a2_ / 3) return Scalar(0);
        return profile_second((2 * a2_ / 3 - r) * 3 / a2_) * 9 / (a2_ * a2_);
    }

private:
    // Monotone C^2 profile on [0,1] with phi(0)=0, phi(1)=1 and vanishing
    // first and second derivatives at both ends.  phi' = p * B(u) with B a
    // C^1 bump that is 1 on [beta, 1-beta]; p = 1/(1-beta) normalizes.
    static constexpr double kBeta = 0.25;
    static constexpr double kPeak = 1.0 / (1.0 - kBeta); // = 4/3

    static Scalar profile(Scalar u) {
        const Scalar beta(kBeta), p(kPeak);
        if (u <= Scalar(0)) return Scalar(0);
        if (u >= Scalar(1)) return Scalar(1);
        if (u < beta) {
            Scalar t = u / beta;
            return p * beta * (t * t * t - t * t * t * t / 2);
        }
        if (u <= 1 - beta) return p * (beta / 2 + (u - beta));
        Scalar t = (1 - u) / beta;
        return 1 - p * beta * (t * t * t - t * t * t * t / 2);
    }

    static Scalar profile_deriv(Scalar u) {
        const Scalar beta(kBeta), p(kPeak);
        if (u <= Scalar(0) || u >= Scalar(1)) return Scalar(0);
        if (u < beta) {
            Scalar t = u / beta;
            return p * (3 * t * t - 2 * t * t * t);
        }
        if (u <= 1 - beta) return p;
        Scalar t = (1 - u) / beta;
        return p * (3 * t * t - 2 * t * t * t);
    }

    static Scalar profile_second(Scalar u) {
        const Scalar beta(kBeta), p(kPeak);
        if (u <= Scalar(0) || u >= Scalar(1)) return Scalar(0);
        if (u < beta) {
            Scalar t = u / beta;
            return p * (6 * t - 6 * t * t) / beta;
        }
        if (u <= 1 - beta) return Scalar(0);
        Scalar t = (1 - u) / beta;
        return -p * (6 * t - 6 * t * t) / beta;
    }

    Scalar a1_, a2_;
};

} // namespace tsem

#endif
