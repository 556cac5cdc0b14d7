//! Maclaurin-series evaluation of Ai, Bi and derivatives.
//!
//! The four power series
//!   f(z)  = 1 + z^3/6 + z^6/180 + ...
//!   g(z)  = z + z^4/12 + z^7/504 + ...
//! and their derivatives have rational coefficients with simple three-term
//! recurrences. The Airy functions are the combinations
//!   Ai = c1 f - c2 g,   Bi = sqrt(3) (c1 f + c2 g)
//! with c1 = Ai(0), c2 = -Ai'(0). Terms grow like exp(+|zeta|) while Ai
//! itself shrinks like exp(-|zeta|) on the positive axis, so the partial sums
//! cancel; double-double accumulation keeps ~32 digits, leaving well over ten
//! significant digits everywhere the dispatcher uses this path (|z| < 9) and
//! still ~1e-9 relative out to |z| ~ 12 for cross-validation.

use num_complex::Complex64;

use super::AiryQuad;
use crate::dd::{CDd, Dd};

// hi/lo splits of the series constants, accurate to ~1e-33.
const C1: Dd = Dd {
    hi: 0.3550280538878172,
    lo: 2.05233632436212e-17,
}; // Ai(0) = 3^{-2/3} / Gamma(2/3)
const C2: Dd = Dd {
    hi: 0.2588194037928068,
    lo: -2.522243111610832e-17,
}; // -Ai'(0) = 3^{-1/3} / Gamma(1/3)
const S3C1: Dd = Dd {
    hi: 0.6149266274460007,
    lo: 5.0899207794891416e-17,
}; // Bi(0)
const S3C2: Dd = Dd {
    hi: 0.4482883573538264,
    lo: -2.5363237774417305e-17,
}; // Bi'(0)

const MAX_TERMS: usize = 250;

/// Evaluate all four Airy functions at `z` by series summation.
///
/// Intended for |z| <= 12; beyond that the double-double headroom is eaten by
/// cancellation and accuracy degrades smoothly.
pub(crate) fn eval(z: Complex64) -> AiryQuad {
    let zd = CDd::from_c64(z);
    let z3 = zd.mul(zd).mul(zd);

    // Current terms of f, g, f', g'.
    let mut tf = CDd {
        re: Dd::from_f64(1.0),
        im: Dd::ZERO,
    };
    let mut tg = zd;
    let mut tfp = zd.mul(zd).div_f64(2.0);
    let mut tgp = CDd {
        re: Dd::from_f64(1.0),
        im: Dd::ZERO,
    };

    let mut f = CDd::ZERO;
    let mut g = CDd::ZERO;
    let mut fp = CDd::ZERO;
    let mut gp = CDd::ZERO;

    for k in 0..MAX_TERMS {
        f = f.add(tf);
        g = g.add(tg);
        fp = fp.add(tfp);
        gp = gp.add(tgp);

        let kf = k as f64;
        tf = tf.mul(z3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg = tg.mul(z3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        tfp = tfp.mul(z3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 5.0));
        tgp = tgp.mul(z3).div_f64((3.0 * kf + 1.0) * (3.0 * kf + 3.0));

        let term = tf.mag().max(tg.mag()).max(tfp.mag()).max(tgp.mag());
        let acc = f.mag().max(g.mag()).max(1.0);
        if term < 1e-35 * acc {
            break;
        }
    }

    let ai = f.mul_dd(C1).add(g.mul_dd(C2).mul_dd(Dd::from_f64(-1.0)));
    let aip = fp.mul_dd(C1).add(gp.mul_dd(C2).mul_dd(Dd::from_f64(-1.0)));
    let bi = f.mul_dd(S3C1).add(g.mul_dd(S3C2));
    let bip = fp.mul_dd(S3C1).add(gp.mul_dd(S3C2));

    AiryQuad {
        at: z,
        ai: ai.to_c64(),
        ai_prime: aip.to_c64(),
        bi: bi.to_c64(),
        bi_prime: bip.to_c64(),
    }
}
