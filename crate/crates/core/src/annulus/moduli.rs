use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, One};

use super::AnnulusError;

/// A point `(x1, x2)` with `x1 x2 = 2t` and `x1^2 + x2^2 = t^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusSolution<F> {
    pub t: F,
    pub x1: F,
    pub x2: F,
    /// `|x1 x2 - 2t| / 2t`
    pub residual1: F,
    /// `|x1^2 + x2^2 - t^2| / t^2`
    pub residual2: F,
    /// relative error of `x1 x4 - x2 x3` against `(t + 1/t) / 2`
    pub casimir_residual: F,
}

/// Tolerance on the relative residuals.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Solves the modulus system for `t >= 4`.
///
/// `x1` is the larger root of `x^4 - t^2 x^2 + 4t^2 = 0`; `x2` is taken as
/// `2t / x1`, which equals the closed form but avoids cancellation in
/// `t^2 - t sqrt(t^2 - 16)` for large `t`.
pub fn solve_moduli<F: Float>(t: F) -> Result<ModulusSolution<F>, AnnulusError> {
    let c = |v: f64| F::from(v).unwrap();
    let four = c(4.0);
    if !(t >= four) {
        return Err(AnnulusError::DiscriminantNegative { t: t.to_f64().unwrap_or(f64::NAN) });
    }
    let two = c(2.0);
    let disc = (t * t - c(16.0)).max(F::zero()).sqrt();
    let x1 = ((t * t + t * disc) / two).sqrt();
    let x2 = two * t / x1;

    let residual1 = (x1 * x2 - two * t).abs() / (two * t);
    let residual2 = (x1 * x1 + x2 * x2 - t * t).abs() / (t * t);

    // numeric recurrence x_{i+1} = (x_i^2 + 1) / x_{i-1}
    let x3 = (x2 * x2 + F::one()) / x1;
    let x4 = (x3 * x3 + F::one()) / x2;
    let casimir = x1 * x4 - x2 * x3;
    let expected = (t + F::one() / t) / two;
    let casimir_residual = (casimir - expected).abs() / expected;

    let tol = c(RESIDUAL_TOLERANCE).max(F::epsilon() * c(64.0));
    for (what, value) in [
        ("residual1", residual1),
        ("residual2", residual2),
        ("casimir_residual", casimir_residual),
    ] {
        if !(value <= tol) {
            return Err(AnnulusError::ResidualTooLarge {
                what,
                value: value.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(ModulusSolution {
        t,
        x1,
        x2,
        residual1,
        residual2,
        casimir_residual,
    })
}

impl ModulusSolution<f64> {
    /// `{"t":..,"x1":..,"x2":..,"residual1":..,"residual2":..}` with 17 significant digits.
    pub fn to_json_row(&self) -> String {
        format!(
            "{{\"t\":{:.16e},\"x1\":{:.16e},\"x2\":{:.16e},\"residual1\":{:.16e},\"residual2\":{:.16e}}}",
            self.t, self.x1, self.x2, self.residual1, self.residual2
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeckeModulus {
    pub n: u32,
    /// `4 cos^2(π/n)`
    pub t: f64,
    /// `2 cos(π/n)`
    pub lambda: f64,
}

/// The continuum `[4, ∞)` and the discrete values `t_n = λ_n^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleModuli {
    pub continuous_from: f64,
    pub discrete: Vec<HeckeModulus>,
}

pub fn admissible_moduli(n_max: u32) -> Result<AdmissibleModuli, AnnulusError> {
    if n_max < 3 {
        return Err(AnnulusError::InvalidParameters(format!("n_max must be at least 3, got {n_max}")));
    }
    let discrete = (3..=n_max)
        .map(|n| {
            let lambda = 2.0 * (std::f64::consts::PI / n as f64).cos();
            HeckeModulus { n, t: lambda * lambda, lambda }
        })
        .collect();
    Ok(AdmissibleModuli {
        continuous_from: 4.0,
        discrete,
    })
}

fn primitive_root<F: Float + FloatConst>(n: u32) -> Complex<F> {
    Complex::from_polar(F::one(), F::TAU() / F::from(n).unwrap())
}

/// `|t^n + t^-n - 2|` at `t = e^{2πi/n}`.
pub fn roots_of_unity_residual<F: Float + FloatConst>(n: u32) -> F {
    let t = primitive_root::<F>(n);
    let two = F::one() + F::one();
    (t.powi(n as i32) + t.powi(-(n as i32)) - Complex::new(two, F::zero())).norm()
}

/// `i^4 + i^-4 = 2` in the Gaussian integers.
pub fn gaussian_unit_check() -> bool {
    let i = Complex::new(0i64, 1);
    let i_inv = Complex::new(0i64, -1); // i * (-i) = 1
    assert_eq!(i * i_inv, Complex::one());
    let p = |z: Complex<i64>| z * z * z * z;
    p(i) + p(i_inv) == Complex::new(2, 0)
}

/// Residuals of `t/(1+t)^2 = 1/(4 cos^2(π/n))`: first at the root of
/// unity `t = e^{2πi/n}`, then at the real Hecke value `t_n = 4 cos^2(π/n)`.
/// The identity holds for the former; for the latter it generally does not,
/// and the value is only reported.
pub fn tau_identity_residuals<F: Float + FloatConst>(n: u32) -> (F, F) {
    let cos = (F::PI() / F::from(n).unwrap()).cos();
    let four = F::from(4.0).unwrap();
    let target = F::one() / (four * cos * cos);
    let t = primitive_root::<F>(n);
    let one: Complex<F> = Complex::one();
    let complex_value = t / ((one + t) * (one + t));
    let complex_residual = (complex_value - Complex::new(target, F::zero())).norm();
    let tr = four * cos * cos;
    let real_residual = (tr / ((F::one() + tr) * (F::one() + tr)) - target).abs();
    (complex_residual, real_residual)
}

/// Exact check of `x1 x2 / (2 (x1^2 + x2^2 + x1 x2 + 1)) = t / (1+t)^2`
/// after substituting `x1 x2 = 2t`, `x1^2 + x2^2 = t^2`.
pub fn verify_trace_exchange(t: &BigRational) -> bool {
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let product = &two * t;
    let squares = t * t;
    let lhs = &product / (&two * (squares + &product + &one));
    let rhs = t / ((&one + t) * (&one + t));
    lhs == rhs
}
