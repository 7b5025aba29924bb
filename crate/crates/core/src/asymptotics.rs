//! Constants and main terms for the mean values of the edge lengths.
//!
//! Notation: for dimension `k` and edge index `1 <= j <= k`, `gamma = k + 1 - j`
//! and `alpha = 1 / (gamma + 1/2)`. `Q(v) = v log v - v + 1` and
//! `delta_k = Q((k - 1) / log k)`.
//!
//! `log_2 x` in the growth envelopes is the *iterated* logarithm
//! `log log x`, not the base-2 logarithm.

use libm::{log, pow};

use crate::{Error, Result};

/// Truncation point of the direct series in [`zeta`].
pub const ZETA_TERMS: u64 = 10_000;

/// Smallest argument accepted by envelopes that divide by `log log x`.
pub const ENVELOPE_MIN_X: f64 = 16.0;

/// An exact non-negative fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl core::fmt::Display for Rational {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `Q(v) = v log v - v + 1`.
pub fn q_of(v: f64) -> Result<f64> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::Domain("Q(v) needs v > 0"));
    }
    Ok(v * log(v) - v + 1.0)
}

/// `delta_k = Q((k - 1) / log k)`.
pub fn delta_k(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain("delta_k needs k >= 2"));
    }
    q_of(f64::from(k - 1) / log(f64::from(k)))
}

/// The two-dimensional exponent written directly as
/// `1 - (1 + log log 2) / log 2`; equals `delta_k(2)`.
pub fn delta_two_iterated() -> f64 {
    let ln2 = core::f64::consts::LN_2;
    1.0 - (1.0 + log(ln2)) / ln2
}

fn check_index(k: u32, j: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain("dimension k must be at least 2"));
    }
    if j < 1 || j > k {
        return Err(Error::Domain("edge index j must satisfy 1 <= j <= k"));
    }
    Ok(())
}

/// `(gamma, alpha)` with `gamma = k + 1 - j` and `alpha = 2 / (2 gamma + 1)`.
pub fn gamma_alpha(k: u32, j: u32) -> Result<(u32, Rational)> {
    check_index(k, j)?;
    let gamma = k + 1 - j;
    Ok((gamma, Rational { num: 2, den: 2 * u64::from(gamma) + 1 }))
}

/// Riemann zeta for real `s > 1`.
///
/// Direct sum over `n < M` plus the Euler-Maclaurin tail
/// `M^{1-s}/(s-1) + M^{-s}/2 + s M^{-s-1}/12`, with `M = ZETA_TERMS`.
/// The next omitted term is of order `s^3 M^{-s-3} / 720`.
pub fn zeta(s: f64) -> Result<f64> {
    if !s.is_finite() || s <= 1.0 {
        return Err(Error::Domain("zeta(s) needs real s > 1"));
    }
    let m = ZETA_TERMS as f64;
    let mut sum = 0.0;
    // smallest terms first
    for n in (1..ZETA_TERMS).rev() {
        sum += pow(n as f64, -s);
    }
    let tail = pow(m, 1.0 - s) / (s - 1.0) + 0.5 * pow(m, -s) + s * pow(m, -s - 1.0) / 12.0;
    Ok(sum + tail)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `gamma^{2 gamma} / (gamma + 1)!`, the coefficient of the `T_j` main term.
fn t_coefficient(gamma: u32) -> f64 {
    let g = f64::from(gamma);
    pow(g, 2.0 * g) / factorial(gamma + 1)
}

/// `C_{k,j} = gamma^{2 gamma} zeta(1 + 1/gamma) / (gamma + 1)!` for `2 <= j <= k`.
pub fn main_term_coefficient(k: u32, j: u32) -> Result<f64> {
    check_index(k, j)?;
    if j < 2 {
        return Err(Error::Domain("the main-term coefficient needs j >= 2"));
    }
    let gamma = k + 1 - j;
    Ok(t_coefficient(gamma) * zeta(1.0 + 1.0 / f64::from(gamma))?)
}

fn check_log_domain(x: f64) -> Result<()> {
    if !x.is_finite() || x < 2.0 {
        return Err(Error::Domain("main terms need x >= 2"));
    }
    Ok(())
}

fn check_envelope_domain(x: f64) -> Result<()> {
    if !x.is_finite() || x < ENVELOPE_MIN_X {
        return Err(Error::Domain("envelopes need x >= 16 so that log log x > 0"));
    }
    Ok(())
}

/// `C_{k,j} x^{1 + 1/gamma} / (log x)^gamma`, predicted value of
/// `sum_{n <= x} rho_j(n)` for `2 <= j <= k`.
pub fn main_term(k: u32, j: u32, x: f64) -> Result<f64> {
    let c = main_term_coefficient(k, j)?;
    check_log_domain(x)?;
    let g = f64::from(k + 1 - j);
    Ok(c * pow(x, 1.0 + 1.0 / g) / pow(log(x), g))
}

/// Constant-free growth order of `sum_{n <= x} rho_1(n)`:
/// `x^{1 + 1/k} / ((log x)^{delta_k} (log log x)^{3/2})`.
pub fn theorem1_envelope(k: u32, x: f64) -> Result<f64> {
    let d = delta_k(k)?;
    check_envelope_domain(x)?;
    let lx = log(x);
    Ok(pow(x, 1.0 + 1.0 / f64::from(k)) / (pow(lx, d) * pow(log(lx), 1.5)))
}

/// Main term of `T_j(y)`: `gamma^{2 gamma} y^{1 + 1/gamma} / ((gamma + 1)! (log y)^gamma)`.
pub fn t_main_term(k: u32, j: u32, y: f64) -> Result<f64> {
    check_index(k, j)?;
    if j < 2 {
        return Err(Error::Domain("T_j is defined for j >= 2"));
    }
    check_log_domain(y)?;
    let gamma = k + 1 - j;
    let g = f64::from(gamma);
    Ok(t_coefficient(gamma) * pow(y, 1.0 + 1.0 / g) / pow(log(y), g))
}

/// Exponent `Q(1 / log r)` with `r = (m + 1)^{1/m}` for `m` dyadic windows.
pub fn localized_exponent(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("at least one window is required"));
    }
    let m = f64::from(m);
    q_of(m / log(m + 1.0))
}

/// Order of magnitude `x / ((log x)^{Q(1/log r)} (log log x)^{3/2})` of the
/// number of `n <= x` with divisors in `m` prescribed dyadic windows.
pub fn localized_envelope(m: u32, x: f64) -> Result<f64> {
    let e = localized_exponent(m)?;
    check_envelope_domain(x)?;
    let lx = log(x);
    Ok(x / (pow(lx, e) * pow(log(lx), 1.5)))
}

/// Every constant attached to one `(k, j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub k: u32,
    pub j: u32,
    pub gamma: u32,
    pub alpha: Rational,
    pub delta_k: f64,
    /// `C_{k,j}`; `None` for `j = 1`, which only has a growth order.
    pub coefficient: Option<f64>,
}

impl Constants {
    pub fn new(k: u32, j: u32) -> Result<Self> {
        let (gamma, alpha) = gamma_alpha(k, j)?;
        let coefficient = if j >= 2 { Some(main_term_coefficient(k, j)?) } else { None };
        Ok(Constants { k, j, gamma, alpha, delta_k: delta_k(k)?, coefficient })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{E, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_of(1.0), Ok(0.0));
        assert!(close(q_of(1.0 / core::f64::consts::LN_2).unwrap(), 0.086071, 5e-6));
        // mpmath: Q(2/log 3) = 0.270169010137723622...
        assert!(close(q_of(2.0 / log(3.0)).unwrap(), 0.270_169_010_137_723_6, 1e-12));
        assert!(q_of(0.0).is_err());
        assert!(q_of(-1.0).is_err());
        assert!(q_of(f64::NAN).is_err());
    }

    #[test]
    fn q_is_nonnegative_with_single_zero() {
        for i in 1..=4000 {
            let v = f64::from(i) / 1000.0;
            let q = q_of(v).unwrap();
            if i == 1000 {
                assert_eq!(q, 0.0);
            } else {
                assert!(q > 0.0, "Q({v}) = {q}");
            }
        }
    }

    #[test]
    fn delta_examples() {
        let d2 = delta_k(2).unwrap();
        assert!(close(d2, 0.086071, 5e-6));
        assert!(close(d2, delta_two_iterated(), 1e-9));
        // mpmath values
        assert!(close(d2, 0.086_071_332_055_934_21, 1e-13));
        assert!(close(delta_k(3).unwrap(), 0.270_169_010_137_723_6, 1e-12));
        assert!(close(delta_k(4).unwrap(), 0.506_550_749_165_635_6, 1e-12));
        assert!(close(delta_k(5).unwrap(), 0.777_336_836_630_811_4, 1e-12));
        assert!(delta_k(1).is_err());
        // The base-2 reading of log_2 would give a different number.
        let base_two = 1.0 - (1.0 + libm::log2(2.0)) / core::f64::consts::LN_2;
        assert!(!close(d2, base_two, 1e-3));
    }

    #[test]
    fn gamma_alpha_examples() {
        assert_eq!(gamma_alpha(2, 2).unwrap(), (1, Rational { num: 2, den: 3 }));
        assert_eq!(gamma_alpha(3, 2).unwrap(), (2, Rational { num: 2, den: 5 }));
        assert_eq!(gamma_alpha(5, 5).unwrap(), (1, Rational { num: 2, den: 3 }));
        assert_eq!(gamma_alpha(4, 1).unwrap().1.to_string(), "2/9");
        assert!(gamma_alpha(3, 0).is_err());
        assert!(gamma_alpha(3, 4).is_err());
        assert!(gamma_alpha(1, 1).is_err());
    }

    #[test]
    fn zeta_values() {
        assert!(close(zeta(2.0).unwrap(), PI * PI / 6.0, 1e-10));
        assert!(close(zeta(4.0).unwrap(), PI.powi(4) / 90.0, 1e-10));
        // mpmath: zeta(3/2), zeta(4/3), zeta(5/4)
        assert!(close(zeta(1.5).unwrap(), 2.612_375_348_685_488, 1e-10));
        assert!(close(zeta(4.0 / 3.0).unwrap(), 3.600_937_750_458_862, 1e-10));
        assert!(close(zeta(1.25).unwrap(), 4.595_111_825_842_943_4, 1e-10));
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
    }

    #[test]
    fn zeta_is_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=60 {
            let z = zeta(1.0 + f64::from(i) / 10.0).unwrap();
            assert!(z < prev);
            prev = z;
        }
    }

    #[test]
    fn coefficients() {
        assert!(close(main_term_coefficient(2, 2).unwrap(), PI * PI / 12.0, 1e-10));
        // mpmath: 16 zeta(3/2) / 6
        assert!(close(main_term_coefficient(3, 2).unwrap(), 6.966_334_263_161_302, 1e-9));
        assert!(close(main_term_coefficient(3, 3).unwrap(), PI * PI / 12.0, 1e-10));
        assert!(main_term_coefficient(3, 1).is_err());
        for k in 3..=7 {
            for j in 3..=k {
                assert_eq!(main_term_coefficient(k, j), main_term_coefficient(k - 1, j - 1));
            }
        }
    }

    #[test]
    fn main_terms() {
        let c = PI * PI / 12.0;
        let v = main_term(2, 2, E * E).unwrap();
        assert!(close(v, c * E.powi(4) / 2.0, 1e-9));
        // mpmath: 59532149027.238...
        let v = main_term(2, 2, 1e6).unwrap();
        assert!((v / 59_532_149_027.238_29 - 1.0).abs() < 1e-12);
        let v = main_term(3, 2, 1e6).unwrap();
        assert!((v / 36_498_114.647_916_79 - 1.0).abs() < 1e-12);
        assert!(main_term(2, 2, 1.0).is_err());
        assert!(main_term(2, 1, 100.0).is_err());
    }

    #[test]
    fn envelopes() {
        // mpmath: 10^8 / ((log 10^6)^delta_3 (log log 10^6)^1.5)
        let v = theorem1_envelope(3, 1e6).unwrap();
        assert!((v / 11_561_594.488_324_69 - 1.0).abs() < 1e-12);
        assert!(theorem1_envelope(2, E.powf(E)).is_err());
        assert!(theorem1_envelope(2, 15.9).is_err());
        let x: f64 = 1e5;
        let ford = x.powf(1.5) / (x.ln().powf(0.086_071_332_055_934_21) * x.ln().ln().powf(1.5));
        assert!((theorem1_envelope(2, x).unwrap() / ford - 1.0).abs() < 1e-12);
        assert_eq!(localized_exponent(1), delta_k(2));
        assert!((localized_exponent(2).unwrap() - delta_k(3).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn t_main_terms() {
        for y in [16.0, 100.0, 1e4] {
            for k in 2..6 {
                let v = t_main_term(k, k, y).unwrap();
                assert!(close(v, y * y / (2.0 * log(y)), 1e-9 * v));
            }
        }
        // mpmath: 10^4 / (2 log 100)
        assert!(close(t_main_term(2, 2, 100.0).unwrap(), 1_085.736_204_758_129_6, 1e-9));
        // mpmath: 16/6 * 10^6 / (log 10^4)^2
        assert!(close(t_main_term(3, 2, 1e4).unwrap(), 31_435.282_835_268_99, 1e-8));
    }

    #[test]
    fn constants_bundle() {
        let c = Constants::new(2, 2).unwrap();
        assert_eq!((c.gamma, c.alpha), (1, Rational { num: 2, den: 3 }));
        assert!(close(c.coefficient.unwrap(), PI * PI / 12.0, 1e-10));
        let c = Constants::new(4, 1).unwrap();
        assert_eq!(c.coefficient, None);
        assert!(c.delta_k > 0.0 && c.alpha.to_f64() < 1.0);
        assert_eq!(Constants::new(4, 3), Constants::new(4, 3));
    }
}
