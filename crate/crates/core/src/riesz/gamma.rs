//! Complex gamma function (Lanczos approximation, Pugh's coefficients).

#![allow(clippy::excessive_precision)]

use std::f64::consts::{E, PI};

use num_complex::Complex64;

const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

const GAMMA_R: f64 = 10.900511;

const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// `Γ(z)` for complex `z`. Infinite (non-finite) at the poles `0, −1, −2, …`.
pub fn complex_gamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        // reflection
        let s = (z * PI).sin();
        Complex64::from(PI) / (s * lanczos(Complex64::new(1.0, 0.0) - z))
    } else {
        lanczos(z)
    }
}

fn lanczos(z: Complex64) -> Complex64 {
    let mut s = Complex64::from(GAMMA_DK[0]);
    for (k, dk) in GAMMA_DK.iter().enumerate().skip(1) {
        s += *dk / (z + (k as f64 - 1.0));
    }
    let base = (z - 0.5 + GAMMA_R) / E;
    s * TWO_SQRT_E_OVER_PI * ((z - 0.5) * base.ln()).exp()
}

/// Real `Γ(x)`.
pub fn gamma(x: f64) -> f64 {
    complex_gamma(Complex64::from(x)).re
}
