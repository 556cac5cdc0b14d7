//! Large-argument asymptotic expansions of Ai, Bi and derivatives, in scaled
//! (mantissa, exponent) form.
//!
//! With zeta = (2/3) z^{3/2} and the standard coefficient sequences
//!   u_0 = 1,  u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k)
//!   v_k = u_k (6k+1)/(1-6k)
//! the expansions are
//!   Ai(z)  ~  exp(-zeta) / (2 sqrt(pi) z^{1/4}) * sum (-1)^k u_k zeta^{-k}
//!   Ai'(z) ~ -exp(-zeta) z^{1/4} / (2 sqrt(pi)) * sum (-1)^k v_k zeta^{-k}
//!   Bi(z)  ~  exp(+zeta) / (sqrt(pi) z^{1/4})  * sum u_k zeta^{-k}
//!   Bi'(z) ~  exp(+zeta) z^{1/4} / sqrt(pi)    * sum v_k zeta^{-k}
//! The real part of +-zeta is returned as a separate exponent; the phase
//! exp(+-i Im zeta) stays in the mantissa. Sums are truncated at their
//! smallest term, so the attainable relative accuracy is ~exp(-2|zeta|):
//! about 2e-16 at |z| = 9 and 1.8e-11 at |z| = 7.

use num_complex::Complex64;

const MAX_TERMS: usize = 60;
const SQRT_PI: f64 = 1.772453850905516;

/// zeta = (2/3) z^{3/2} with the principal square root.
pub(crate) fn zeta(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    (2.0 / 3.0) * z * s
}

/// The four asymptotic sums with optimal truncation:
/// (sum (-1)^k u_k t^k, sum (-1)^k v_k t^k, sum u_k t^k, sum v_k t^k)
/// where t = 1/zeta.
fn sums(zeta: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let t = zeta.finv();
    let one = Complex64::new(1.0, 0.0);
    let mut s_au = one;
    let mut s_av = one;
    let mut s_bu = one;
    let mut s_bv = one;

    let mut u = 1.0f64;
    let mut pow = one; // t^k
    let mut prev_mag = f64::INFINITY;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = u * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
        pow *= t;
        let term_mag = u * pow.norm();
        if term_mag >= prev_mag {
            // divergence onset: stop at the smallest term
            break;
        }
        prev_mag = term_mag;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let up = u * pow;
        let vp = v * pow;
        s_au += sign * up;
        s_av += sign * vp;
        s_bu += up;
        s_bv += vp;
        if term_mag < 1e-18 {
            break;
        }
    }
    (s_au, s_av, s_bu, s_bv)
}

/// Scaled Ai family for |arg z| <= 2*pi/3:
/// returns (ai_mantissa, ai_prime_mantissa, exponent) with
/// Ai(z) = ai_mantissa * exp(exponent).
pub(crate) fn ai_direct(z: Complex64) -> (Complex64, Complex64, f64) {
    let ze = zeta(z);
    let (s_au, s_av, _, _) = sums(ze);
    let q = z.sqrt().sqrt(); // z^{1/4}, principal
    let phase = Complex64::new(0.0, -ze.im).exp();
    let ai = phase * s_au / (2.0 * SQRT_PI * q);
    let aip = -phase * s_av * q / (2.0 * SQRT_PI);
    (ai, aip, -ze.re)
}

/// Scaled Bi family from the dominant series alone, accurate in norm only
/// to the size exp(-2 Re zeta) of the omitted recessive piece, but with the
/// virtue that each component is accurate relative to itself: near the real
/// axis the tiny imaginary part is the phase rotation of the dominant
/// series, not polluted by an O(recessive) remainder. The dispatcher
/// prefers connection formulas for plain Bi values; the outgoing-wave
/// combination Bi + i Ai is built from this form so that the recessive
/// imaginary component survives.
pub(crate) fn bi_direct(z: Complex64) -> (Complex64, Complex64, f64) {
    let ze = zeta(z);
    let (_, _, s_bu, s_bv) = sums(ze);
    let q = z.sqrt().sqrt();
    let phase = Complex64::new(0.0, ze.im).exp();
    let bi = phase * s_bu / (SQRT_PI * q);
    let bip = phase * s_bv * q / SQRT_PI;
    (bi, bip, ze.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn scaled_values_on_positive_axis() {
        // 25-digit references: Ai(30) e^{+zeta} and Bi(30) e^{-zeta}.
        let (ai, _, e_ai) = ai_direct(Complex64::new(30.0, 0.0));
        let (bi, _, e_bi) = bi_direct(Complex64::new(30.0, 0.0));
        let z15 = 30f64.powf(1.5) * 2.0 / 3.0;
        assert_relative_eq!(e_ai, -z15, max_relative = 1e-15);
        assert_relative_eq!(e_bi, z15, max_relative = 1e-15);
        assert_relative_eq!(ai.re, 0.12045939663973668389, max_relative = 1e-13);
        assert_relative_eq!(bi.re, 0.24122445526882688622, max_relative = 1e-13);
        assert!(ai.im.abs() < 1e-18 && bi.im.abs() < 1e-18);
    }

    #[test]
    fn scaled_values_far_out() {
        let (ai, _, _) = ai_direct(Complex64::new(100.0, 0.0));
        let (bi, _, _) = bi_direct(Complex64::new(100.0, 0.0));
        assert_relative_eq!(ai.re, 0.089196920936330413175, max_relative = 1e-14);
        assert_relative_eq!(bi.re, 0.17843101117083541514, max_relative = 1e-14);
    }

    #[test]
    fn product_of_leading_asymptotics() {
        // Ai(z) Bi(z) -> 1/(2 pi sqrt(z)); exponents cancel exactly.
        let z = Complex64::new(30.0, 0.0);
        let (ai, _, e_ai) = ai_direct(z);
        let (bi, _, e_bi) = bi_direct(z);
        assert_eq!(e_ai + e_bi, 0.0);
        let product = (ai * bi).re;
        let leading = 1.0 / (2.0 * std::f64::consts::PI * 30f64.sqrt());
        assert_relative_eq!(product, leading, max_relative = 1e-4);
    }

    #[test]
    fn wronskian_from_scaled_parts() {
        // ai*bip - aip*bi = 1/pi; the exponents cancel since e_ai = -e_bi.
        for &x in &[9.0, 12.0, 20.0, 50.0, 200.0] {
            let z = Complex64::new(x, 0.0);
            let (ai, aip, _) = ai_direct(z);
            let (bi, bip, _) = bi_direct(z);
            let w = (ai * bip - aip * bi).re;
            assert_relative_eq!(w, std::f64::consts::FRAC_1_PI, max_relative = 1e-13);
        }
    }
}
