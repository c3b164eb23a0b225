//! Lower bounds on overall A2 and E(s^2), and optimality certificates.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::criteria;
use crate::design::Design;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

fn r(v: i128) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn check_shape(n: usize, s: u32) -> Result<()> {
    if n < 2 || s < 2 {
        return Err(Error::OutOfRange(format!("N = {n}, s = {s}")));
    }
    if !n.is_multiple_of(s as usize) {
        return Err(Error::OutOfRange(format!(
            "N = {n} is not divisible by s = {s}"
        )));
    }
    Ok(())
}

/// Fractional part of `m(N - s) / ((N - 1) s)`.
pub fn eta(n: usize, m: usize, s: u32) -> Rational {
    let (n, m, s) = (n as i128, m as i128, i128::from(s));
    let x = Rational::new(BigInt::from(m * (n - s)), BigInt::from((n - 1) * s));
    &x - x.floor()
}

/// `m(s-1)(ms - m - N + 1) / (2(N-1))`.
pub fn lb_lemma2(n: usize, m: usize, s: u32) -> Result<Rational> {
    check_shape(n, s)?;
    let (nn, m, s) = (n as i128, m as i128, i128::from(s));
    Ok(Rational::new(
        BigInt::from(m * (s - 1) * (m * s - m - nn + 1)),
        BigInt::from(2 * (nn - 1)),
    ))
}

/// Lemma 2 plus `(N-1) s^2 eta (1 - eta) / (2N)`.
pub fn lb_theorem1(n: usize, m: usize, s: u32) -> Result<Rational> {
    let base = lb_lemma2(n, m, s)?;
    let e = eta(n, m, s);
    let (nn, ss) = (n as i128, i128::from(s));
    let extra = r((nn - 1) * ss * ss) * &e * (r(1) - &e) / r(2 * nn);
    Ok(base + extra)
}

/// `(sum s_k - m)(sum s_k - m - N + 1) / (2(N-1))` for a mixed-level profile.
pub fn lb_theorem10(n: usize, levels: &[u16]) -> Result<Rational> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("N = {n}")));
    }
    if let Some(&s) = levels
        .iter()
        .find(|&&s| s < 2 || !n.is_multiple_of(s as usize))
    {
        return Err(Error::OutOfRange(format!(
            "N = {n} is not divisible by s = {s}"
        )));
    }
    let df: i128 = levels.iter().map(|&s| i128::from(s) - 1).sum();
    let nn = n as i128;
    Ok(Rational::new(
        BigInt::from(df * (df - nn + 1)),
        BigInt::from(2 * (nn - 1)),
    ))
}

/// `N^2 (m - N + 1) / ((m - 1)(N - 1))` and whether `m > N - 1`.
///
/// Returns zero with the flag cleared when the design cannot be
/// supersaturated.
pub fn lb_es2(n: usize, m: usize) -> Result<(Rational, bool)> {
    if n < 2 || m < 2 {
        return Err(Error::OutOfRange(format!("N = {n}, m = {m}")));
    }
    if m < n {
        return Ok((Rational::zero(), false));
    }
    let (n, m) = (n as i128, m as i128);
    Ok((
        Rational::new(
            BigInt::from(n * n * (m - n + 1)),
            BigInt::from((m - 1) * (n - 1)),
        ),
        true,
    ))
}

/// Bound values for one design and whether it attains them.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub a2: Rational,
    /// Raw Theorem 1 value (equal-level designs only); may be negative.
    pub theorem1: Option<Rational>,
    pub lemma2: Option<Rational>,
    pub theorem10: Rational,
    /// Two-level designs only.
    pub eq1_es2: Option<Rational>,
    pub achieved_theorem1: bool,
    pub achieved_lemma2: bool,
    pub achieved_theorem10: bool,
    pub achieved_es2: bool,
    /// `max delta_ij - min delta_ij` over row pairs.
    pub coincidence_spread: u32,
    /// Same for the level-weighted coincidences.
    pub weighted_spread: u32,
}

fn clamp(v: &Rational) -> Rational {
    if v < &Rational::zero() {
        Rational::zero()
    } else {
        v.clone()
    }
}

/// Evaluates all applicable bounds; achievement is exact equality.
pub fn certify(d: &Design) -> Result<BoundReport> {
    d.ensure_balanced()?;
    let n = d.runs();
    let m = d.num_columns();
    let a2 = criteria::a2_overall(d)?;
    let (theorem1, lemma2) = match d.common_levels() {
        Some(s) => (
            Some(lb_theorem1(n, m, u32::from(s))?),
            Some(lb_lemma2(n, m, u32::from(s))?),
        ),
        None => (None, None),
    };
    let theorem10 = lb_theorem10(n, &d.levels())?;
    let mut eq1_es2 = None;
    let mut achieved_es2 = false;
    if d.common_levels() == Some(2) && m >= 2 {
        let (b, _) = lb_es2(n, m)?;
        achieved_es2 = criteria::e_s2(d)? == b;
        eq1_es2 = Some(b);
    }
    Ok(BoundReport {
        achieved_theorem1: theorem1.as_ref() == Some(&a2),
        achieved_lemma2: lemma2.as_ref() == Some(&a2),
        achieved_theorem10: theorem10 == a2,
        achieved_es2,
        coincidence_spread: d.coincidences().spread(),
        weighted_spread: d.weighted_coincidences().spread(),
        a2,
        theorem1,
        lemma2,
        theorem10,
        eq1_es2,
    })
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        let opt = |v: &Option<Rational>| v.as_ref().map_or(Value::Null, rational::to_json);
        let opt_clamped = |v: &Option<Rational>| {
            v.as_ref()
                .map_or(Value::Null, |x| rational::to_json(&clamp(x)))
        };
        json!({
            "theorem1": opt_clamped(&self.theorem1),
            "theorem1_raw": opt(&self.theorem1),
            "lemma2": opt_clamped(&self.lemma2),
            "lemma2_raw": opt(&self.lemma2),
            "theorem10": rational::to_json(&clamp(&self.theorem10)),
            "theorem10_raw": rational::to_json(&self.theorem10),
            "eq1_es2": opt(&self.eq1_es2),
            "achieved_theorem1": self.achieved_theorem1,
            "achieved_lemma2": self.achieved_lemma2,
            "achieved_theorem10": self.achieved_theorem10,
            "achieved_es2": self.achieved_es2,
            "coincidence_spread": self.coincidence_spread,
            "weighted_spread": self.weighted_spread,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mark = |b: bool| if b { "achieved" } else { "not achieved" };
        if let (Some(t1), Some(l2)) = (&self.theorem1, &self.lemma2) {
            out.push_str(&format!(
                "Theorem 1 bound = {} ({})\n",
                rational::display(&clamp(t1)),
                mark(self.achieved_theorem1)
            ));
            out.push_str(&format!(
                "Lemma 2 bound = {} ({})\n",
                rational::display(&clamp(l2)),
                mark(self.achieved_lemma2)
            ));
        }
        out.push_str(&format!(
            "Theorem 10 bound = {} ({})\n",
            rational::display(&clamp(&self.theorem10)),
            mark(self.achieved_theorem10)
        ));
        if let Some(b) = &self.eq1_es2 {
            out.push_str(&format!(
                "E(s2) bound = {} ({})\n",
                rational::display(b),
                mark(self.achieved_es2)
            ));
        }
        out.push_str(&format!(
            "coincidence spread = {}, weighted spread = {}\n",
            self.coincidence_spread, self.weighted_spread
        ));
        out
    }
}

/// Whether `(N - 1) s` divides `m (N - s)`, i.e. `eta` vanishes.
pub fn eta_is_zero(n: usize, m: usize, s: u32) -> bool {
    let (n, m, s) = (n as u128, m as u128, u128::from(s));
    (m * (n - s)) % ((n - 1) * s) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn theorem1_examples() {
        assert_eq!(lb_theorem1(9, 7, 3).unwrap(), int(6));
        assert_eq!(lb_theorem1(18, 12, 3).unwrap(), int(6));
        assert_eq!(lb_theorem1(9, 12, 3).unwrap(), int(24));
        assert_eq!(eta(18, 12, 3), rat(9, 17));
        assert!(lb_theorem1(10, 3, 3).is_err());
    }

    #[test]
    fn lemma2_examples() {
        assert_eq!(lb_lemma2(9, 8, 3).unwrap(), int(8));
        assert_eq!(lb_lemma2(9, 7, 3).unwrap(), rat(21, 4));
        assert_eq!(lb_lemma2(9, 4, 3).unwrap(), int(0));
    }

    #[test]
    fn theorem10_examples() {
        assert_eq!(lb_theorem10(9, &[3; 7]).unwrap(), rat(21, 4));
        assert_eq!(lb_theorem10(81, &[9; 100]).unwrap(), int(3600));
        let mut mixed = vec![9u16; 99];
        mixed.extend([3; 4]);
        assert_eq!(lb_theorem10(81, &mixed).unwrap(), int(3600));
    }

    #[test]
    fn es2_examples() {
        assert_eq!(lb_es2(8, 14).unwrap(), (rat(64, 13), true));
        assert_eq!(lb_es2(12, 22).unwrap(), (rat(48, 7), true));
        assert_eq!(lb_es2(8, 7).unwrap(), (int(0), false));
    }

    #[test]
    fn eta_zero_rule() {
        for n in (6..=30).step_by(3) {
            for m in 1..40 {
                assert_eq!(eta(n, m, 3).is_zero(), eta_is_zero(n, m, 3));
            }
        }
    }
}
