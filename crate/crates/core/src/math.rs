// Float helpers that are not available on `f64` without std.

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `base^exponent`; integral exponents use repeated squaring so that `x^2`
/// is bit-identical to `x * x`.
pub(crate) fn pow(base: f64, exponent: f64) -> f64 {
    if exponent == floor(exponent) && abs(exponent) <= 64.0 {
        let mut n = abs(exponent) as u32;
        let mut acc = 1.0;
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc *= b;
            }
            b *= b;
            n >>= 1;
        }
        if exponent < 0.0 {
            1.0 / acc
        } else {
            acc
        }
    } else {
        libm::pow(base, exponent)
    }
}

/// `|a - b| <= rel * max(1, |a|, |b|)`.
#[inline]
pub(crate) fn close(a: f64, b: f64, rel: f64) -> bool {
    abs(a - b) <= rel * abs(a).max(abs(b)).max(1.0)
}
