//! Float helpers backed by `libm` so results are identical with and without `std`.

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// `x · log2(1/x)` with the convention `0 · log 0 = 0`.
#[inline]
pub fn plogp_inv(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * log2(x)
    }
}

/// Modulus of a complex number.
pub fn cabs(z: nalgebra::Complex<f64>) -> f64 {
    libm::hypot(z.re, z.im)
}
