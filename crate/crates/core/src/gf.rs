//! Finite fields GF(p^r).
//!
//! Elements are encoded as integers `0..s` whose base-`p` digits (constant
//! term first) are the coefficients of a polynomial over GF(p) reduced by the
//! field modulus. Symbol `0` is the additive identity and symbol `1` the
//! multiplicative identity. The prime subfield GF(p) is exactly the symbols
//! `0..p`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A field element, interpreted through its field's encoding.
pub type FieldElement = u16;

/// Largest order for which full addition and multiplication tables are built.
const TABLE_LIMIT: u32 = 256;

/// Default moduli (Conway polynomials), coefficients constant term first.
const DEFAULT_MODULI: &[(u32, &[u16])] = &[
    (4, &[1, 1, 1]),
    (8, &[1, 1, 0, 1]),
    (9, &[2, 2, 1]),
    (16, &[1, 1, 0, 0, 1]),
    (25, &[2, 4, 1]),
];

#[derive(Clone)]
enum Arith {
    Tables {
        add: Vec<u16>,
        mul: Vec<u16>,
        neg: Vec<u16>,
        inv: Vec<u16>,
    },
    Poly,
}

/// The finite field of order `s = p^r`.
///
/// Immutable after construction.
#[derive(Clone)]
pub struct Field {
    p: u16,
    r: u32,
    s: u32,
    modulus: Vec<u16>,
    arith: Arith,
    trace: Vec<u16>,
    chi: Vec<Complex64>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// Splits `s` into `(p, r)` with `s = p^r`, or `None` if `s` is not a prime power.
pub fn prime_power(s: u32) -> Option<(u32, u32)> {
    if s < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= s {
        if s.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > s {
        return Some((s, 1));
    }
    let mut rest = s;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

impl Field {
    /// Builds GF(s) with the default modulus.
    pub fn new(s: u32) -> Result<Self> {
        Self::build(s, None)
    }

    /// Builds GF(s) over a caller-supplied monic modulus (constant term first).
    ///
    /// For prime `s` the modulus must be of degree one.
    pub fn with_modulus(s: u32, modulus: &[u16]) -> Result<Self> {
        Self::build(s, Some(modulus))
    }

    fn build(s: u32, modulus: Option<&[u16]>) -> Result<Self> {
        if !(2..=65536).contains(&s) {
            return Err(Error::UnsupportedOrder(s));
        }
        let (p, r) = prime_power(s).ok_or(Error::NotPrimePower(s))?;
        let modulus = match modulus {
            Some(m) => {
                let ok = m.len() == r as usize + 1
                    && m[r as usize] == 1
                    && m.iter().all(|&c| u32::from(c) < p);
                if !ok {
                    return Err(Error::BadModulus(m.to_vec()));
                }
                if !is_irreducible(m, p as u16) {
                    return Err(Error::ReducibleModulus(m.to_vec()));
                }
                m.to_vec()
            }
            None => default_modulus(p as u16, r),
        };
        let mut field = Field {
            p: p as u16,
            r,
            s,
            modulus,
            arith: Arith::Poly,
            trace: Vec::new(),
            chi: Vec::new(),
        };
        if s <= TABLE_LIMIT {
            field.arith = field.build_tables();
        }
        field.trace = (0..s).map(|x| field.trace_direct(x as u16)).collect();
        field.chi = field
            .trace
            .iter()
            .map(|&t| Complex64::from_polar(1.0, 2.0 * PI * f64::from(t) / f64::from(p)))
            .collect();
        Ok(field)
    }

    fn build_tables(&self) -> Arith {
        let s = self.s as usize;
        let mut add = vec![0u16; s * s];
        let mut mul = vec![0u16; s * s];
        for x in 0..s {
            for y in 0..s {
                add[x * s + y] = self.poly_add(x as u16, y as u16);
                mul[x * s + y] = self.poly_mul(x as u16, y as u16);
            }
        }
        let neg = (0..s).map(|x| self.poly_neg(x as u16)).collect();
        let mut inv = vec![0u16; s];
        for x in 1..s {
            inv[x] = (1..s)
                .find(|&y| mul[x * s + y] == 1)
                .expect("nonzero element of a field has an inverse") as u16;
        }
        Arith::Tables { add, mul, neg, inv }
    }

    /// Characteristic `p`.
    pub fn characteristic(&self) -> u32 {
        u32::from(self.p)
    }

    /// Extension degree `r`.
    pub fn degree(&self) -> u32 {
        self.r
    }

    /// Field order `s = p^r`.
    pub fn order(&self) -> u32 {
        self.s
    }

    /// Modulus coefficients, constant term first (monic, length `r + 1`).
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    /// Iterator over all elements in symbol order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        0..self.s as u16
    }

    /// Iterator over the nonzero elements.
    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> {
        1..self.s as u16
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match &self.arith {
            Arith::Tables { add, .. } => add[x as usize * self.s as usize + y as usize],
            Arith::Poly => self.poly_add(x, y),
        }
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        match &self.arith {
            Arith::Tables { neg, .. } => neg[x as usize],
            Arith::Poly => self.poly_neg(x),
        }
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match &self.arith {
            Arith::Tables { mul, .. } => mul[x as usize * self.s as usize + y as usize],
            Arith::Poly => self.poly_mul(x, y),
        }
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.arith {
            Arith::Tables { inv, .. } => inv[x as usize],
            // x^(s-2) = x^-1 in the multiplicative group of order s - 1
            Arith::Poly => self.pow(x, u64::from(self.s) - 2),
        })
    }

    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace into the prime subfield; the result lies in `0..p`.
    pub fn trace(&self, x: FieldElement) -> FieldElement {
        self.trace[x as usize]
    }

    /// The canonical additive character `exp(2 pi i Tr(x) / p)`.
    pub fn character(&self, x: FieldElement) -> Complex64 {
        self.chi[x as usize]
    }

    /// `chi_u(x) = chi(u x)`.
    pub fn character_u(&self, u: FieldElement, x: FieldElement) -> Complex64 {
        self.chi[self.mul(u, x) as usize]
    }

    /// All points of `F_s^n` in lexicographic symbol order, first coordinate
    /// slowest.
    pub fn enumerate_points(&self, n: usize) -> Vec<Vec<FieldElement>> {
        let total = (self.s as usize).pow(n as u32);
        let mut out = Vec::with_capacity(total);
        let mut point = vec![0u16; n];
        for _ in 0..total {
            out.push(point.clone());
            for i in (0..n).rev() {
                point[i] += 1;
                if u32::from(point[i]) < self.s {
                    break;
                }
                point[i] = 0;
            }
        }
        out
    }

    fn digits(&self, x: FieldElement) -> Vec<u16> {
        let mut v = Vec::with_capacity(self.r as usize);
        let mut x = x as u32;
        for _ in 0..self.r {
            v.push((x % u32::from(self.p)) as u16);
            x /= u32::from(self.p);
        }
        v
    }

    fn encode_digits(&self, d: &[u16]) -> FieldElement {
        d.iter()
            .rev()
            .fold(0u32, |acc, &c| acc * u32::from(self.p) + u32::from(c)) as u16
    }

    fn poly_add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let (a, b) = (self.digits(x), self.digits(y));
        let sum: Vec<u16> = a.iter().zip(&b).map(|(&u, &v)| (u + v) % self.p).collect();
        self.encode_digits(&sum)
    }

    fn poly_neg(&self, x: FieldElement) -> FieldElement {
        let d: Vec<u16> = self
            .digits(x)
            .iter()
            .map(|&c| (self.p - c) % self.p)
            .collect();
        self.encode_digits(&d)
    }

    fn poly_mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let r = self.r as usize;
        let p = u32::from(self.p);
        let (a, b) = (self.digits(x), self.digits(y));
        let mut prod = vec![0u32; 2 * r];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u32::from(ai) * u32::from(bj)) % p;
            }
        }
        // reduce with the monic modulus from the top degree down
        for deg in (r..2 * r).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (k, &mk) in self.modulus.iter().enumerate() {
                let idx = deg - r + k;
                prod[idx] = (prod[idx] + (p - c) * u32::from(mk)) % p;
            }
        }
        let d: Vec<u16> = prod[..r].iter().map(|&c| c as u16).collect();
        self.encode_digits(&d)
    }

    fn trace_direct(&self, x: FieldElement) -> FieldElement {
        let mut acc = 0;
        let mut term = x;
        for _ in 0..self.r {
            acc = self.poly_add(acc, term);
            term = self.pow_poly(term, u64::from(self.p));
        }
        debug_assert!(acc < self.p, "trace must land in the prime subfield");
        acc
    }

    fn pow_poly(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn default_modulus(p: u16, r: u32) -> Vec<u16> {
    let s = u32::from(p).pow(r);
    if let Some((_, m)) = DEFAULT_MODULI.iter().find(|(q, _)| *q == s) {
        return m.to_vec();
    }
    if r == 1 {
        return vec![0, 1];
    }
    // first monic irreducible in base-p counting order of the lower coefficients
    (0..s)
        .map(|low| {
            let mut m: Vec<u16> = (0..r)
                .map(|i| ((low / u32::from(p).pow(i)) % u32::from(p)) as u16)
                .collect();
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("an irreducible polynomial of every degree exists")
}

/// Remainder of `a` divided by monic `b` over GF(p); coefficients constant first.
fn poly_rem(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
    let p = u32::from(p);
    let mut rem: Vec<u32> = a.iter().map(|&c| u32::from(c)).collect();
    let db = b.len() - 1;
    while rem.len() > db {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - db;
        if lead != 0 {
            for (k, &bk) in b.iter().enumerate() {
                rem[shift + k] = (rem[shift + k] + (p - lead) * u32::from(bk)) % p;
            }
        }
        rem.pop();
    }
    rem.into_iter().map(|c| c as u16).collect()
}

/// Exhaustive check that a monic polynomial has no monic factor of degree
/// `1..=deg/2`.
pub fn is_irreducible(poly: &[u16], p: u16) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    let pu = u32::from(p);
    for d in 1..=deg / 2 {
        for low in 0..pu.pow(d as u32) {
            let mut divisor: Vec<u16> = (0..d)
                .map(|i| ((low / pu.pow(i as u32)) % pu) as u16)
                .collect();
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(3), Some((3, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(Field::new(12).unwrap_err(), Error::NotPrimePower(12));
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert_eq!(
            Field::with_modulus(4, &[1, 0, 1]).unwrap_err(),
            Error::ReducibleModulus(vec![1, 0, 1])
        );
        // x^2 + 2 has root 1 over GF(3)
        assert!(matches!(
            Field::with_modulus(9, &[2, 0, 1]),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            Field::with_modulus(9, &[2, 2]),
            Err(Error::BadModulus(_))
        ));
    }

    #[test]
    fn gf4_default_modulus_is_the_only_irreducible_quadratic() {
        let irreducible: Vec<Vec<u16>> = (0..4u16)
            .map(|low| vec![low % 2, low / 2, 1])
            .filter(|m| is_irreducible(m, 2))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(Field::new(4).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for &(s, m) in DEFAULT_MODULI {
            let (p, _) = prime_power(s).unwrap();
            assert!(is_irreducible(m, p as u16), "GF({s})");
        }
        for s in [
            27u32, 32, 49, 64, 81, 121, 125, 128, 243, 256, 343, 512, 729, 1024,
        ] {
            let f = Field::new(s).unwrap();
            assert!(is_irreducible(f.modulus(), f.characteristic() as u16));
        }
    }

    #[test]
    fn addition_examples() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.add(1, 2), 0);
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.add(2, 2), 0);
        let f9 = Field::new(9).unwrap();
        assert_eq!(f9.add(1, 1), 2);
        assert_eq!(f9.sub(1, 2), 2);
        assert_eq!(f9.neg(3), 6);
    }

    #[test]
    fn multiplication_examples() {
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.mul(2, 3), 1);
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert_eq!(f5.inv(0).unwrap_err(), Error::DivisionByZero);
        let f4 = Field::new(4).unwrap();
        // x * x = x + 1
        assert_eq!(f4.mul(2, 2), 3);
        let f9 = Field::new(9).unwrap();
        // x^2 = -2x - 2 = x + 1
        assert_eq!(f9.mul(3, 3), 4);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for s in [2u32, 3, 4, 5, 7, 8, 9, 16, 25] {
            let f = Field::new(s).unwrap();
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), 0);
                if x != 0 {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
                }
                for y in f.elements() {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for z in f.elements() {
                        assert_eq!(
                            f.mul(x, f.add(y, z)),
                            f.add(f.mul(x, y), f.mul(x, z)),
                            "GF({s}) distributivity"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn table_and_polynomial_routes_agree() {
        // GF(256) uses tables, so force the polynomial route by comparing
        // against the private helpers.
        for s in [4u32, 9, 25, 27, 256] {
            let f = Field::new(s).unwrap();
            for x in f.elements() {
                for y in f.elements().step_by(7) {
                    assert_eq!(f.add(x, y), f.poly_add(x, y));
                    assert_eq!(f.mul(x, y), f.poly_mul(x, y));
                }
            }
        }
        let big = Field::new(3u32.pow(6)).unwrap();
        for x in big.nonzero().step_by(37) {
            assert_eq!(big.mul(x, big.inv(x).unwrap()), 1);
        }
    }

    #[test]
    fn trace_examples() {
        let f3 = Field::new(3).unwrap();
        for x in f3.elements() {
            assert_eq!(f3.trace(x), x);
        }
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.trace(1), 0);
        assert_eq!(f4.trace(2), 1);
        let f9 = Field::new(9).unwrap();
        assert_eq!(f9.trace(1), 2);
    }

    #[test]
    fn trace_is_linear_over_prime_field() {
        for s in [4u32, 8, 9, 16, 25, 27] {
            let f = Field::new(s).unwrap();
            let p = f.characteristic() as u16;
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p);
                }
                for c in 0..p {
                    assert_eq!(f.trace(f.mul(c, x)), (c * f.trace(x)) % p);
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        let f2 = Field::new(2).unwrap();
        assert!(close(f2.character(0), Complex64::new(1.0, 0.0)));
        assert!(close(f2.character(1), Complex64::new(-1.0, 0.0)));
        let f3 = Field::new(3).unwrap();
        assert!(close(
            f3.character(1),
            Complex64::from_polar(1.0, 2.0 * PI / 3.0)
        ));
        let f4 = Field::new(4).unwrap();
        let total: Complex64 = f4.elements().map(|x| f4.character(x)).sum();
        assert!(total.norm() < 1e-9);
    }

    #[test]
    fn character_is_additive_homomorphism() {
        for s in [2u32, 3, 4, 5, 8, 9] {
            let f = Field::new(s).unwrap();
            assert!(close(f.character(0), Complex64::new(1.0, 0.0)));
            for x in f.elements() {
                assert!((f.character(x).norm() - 1.0).abs() < 1e-12);
                for y in f.elements() {
                    assert!(close(
                        f.character(f.add(x, y)),
                        f.character(x) * f.character(y)
                    ));
                }
            }
        }
    }

    #[test]
    fn enumerate_points_order() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.enumerate_points(1), vec![vec![0], vec![1]]);
        let f3 = Field::new(3).unwrap();
        let pts = f3.enumerate_points(2);
        assert_eq!(pts.len(), 9);
        assert_eq!(&pts[..4], &[vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0]]);
        assert_eq!(Field::new(4).unwrap().enumerate_points(3).len(), 64);
    }
}
