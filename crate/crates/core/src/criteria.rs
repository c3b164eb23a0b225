//! Optimality statistics: power moments, overall and projected A2, the
//! generalized wordlength pattern, and the chi-square / f / d^2 dependency
//! measures between column pairs.
//!
//! Every pairwise statistic is computed exactly from the pair's cell counts.
//! For a balanced pair with levels `s_i`, `s_j` and counts `n_ab`,
//!
//! ```text
//! chi2 = (s_i s_j sum n_ab^2 - N^2) / N,    projected A2 = chi2 / N.
//! ```
//!
//! The character-sum routes ([`projected_a2_char`], [`gwlp`]) are floating
//! point and serve as independent cross-checks.

use std::borrow::Cow;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::bounds::BoundReport;
use crate::design::Design;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::rational::{self, Rational};

/// Default cap on `sum_{j <= jmax} sum_{|S| = j} prod_{k in S} (s_k - 1)`.
pub const DEFAULT_GWLP_BUDGET: u128 = 10_000_000;

/// Default highest wordlength computed by reports.
pub const DEFAULT_GWLP_JMAX: usize = 3;

/// Field overrides used when realizing characters for each level count.
/// Level counts without an override use the default modulus.
#[derive(Debug, Clone, Default)]
pub struct FieldSet {
    overrides: Vec<Field>,
}

impl FieldSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, field: Field) -> Self {
        self.overrides.retain(|f| f.order() != field.order());
        self.overrides.push(field);
        self
    }

    pub fn get(&self, levels: u16) -> Result<Cow<'_, Field>> {
        if let Some(f) = self
            .overrides
            .iter()
            .find(|f| f.order() == u32::from(levels))
        {
            return Ok(Cow::Borrowed(f));
        }
        match Field::new(u32::from(levels)) {
            Ok(f) => Ok(Cow::Owned(f)),
            Err(_) => Err(Error::NoFieldRealization(levels)),
        }
    }
}

fn big(v: i128) -> BigInt {
    BigInt::from(v)
}

/// Exact projected A2 of a balanced pair from its cell counts.
pub fn projected_a2_from_counts(runs: usize, si: u16, sj: u16, counts: &[u32]) -> Rational {
    let sum_sq: i128 = counts.iter().map(|&c| i128::from(c) * i128::from(c)).sum();
    let n = runs as i128;
    let num = i128::from(si) * i128::from(sj) * sum_sq - n * n;
    Rational::new(big(num), big(n * n))
}

/// `K_t = C(N,2)^{-1} sum_{i<j} delta_ij^t`.
pub fn power_moment(d: &Design, t: u32) -> Rational {
    let n = d.runs();
    if n < 2 {
        return Rational::zero();
    }
    let c = d.coincidences();
    let total: BigInt = c.off_diagonal().map(|v| BigInt::from(v).pow(t)).sum();
    let pairs = (n * (n - 1) / 2) as i64;
    Rational::new(total, BigInt::from(pairs))
}

/// Exact projected A2 of columns `i` and `j` (counting route).
pub fn projected_a2(d: &Design, i: usize, j: usize) -> Rational {
    let counts = d.pair_counts(i, j);
    projected_a2_from_counts(
        d.runs(),
        d.column(i).levels(),
        d.column(j).levels(),
        &counts,
    )
}

/// Overall A2 of a balanced design.
///
/// Equal-level designs use the closed form through the second power moment;
/// mixed-level designs sum the projected values over all pairs.
pub fn a2_overall(d: &Design) -> Result<Rational> {
    d.ensure_balanced()?;
    match d.common_levels() {
        Some(s) => {
            let n = big(d.runs() as i128);
            let m = big(d.num_columns() as i128);
            let s = big(i128::from(s));
            let k2 = power_moment(d, 2);
            let rest =
                Rational::from_integer(&m * &m * &s * &s - &n * &m * (&m + &s - BigInt::one()));
            let num = Rational::from_integer((&n - BigInt::one()) * &s * &s) * k2 + rest;
            Ok(num / Rational::from_integer(BigInt::from(2) * n))
        }
        None => Ok(pairs(d).map(|(i, j)| projected_a2(d, i, j)).sum()),
    }
}

fn pairs(d: &Design) -> impl Iterator<Item = (usize, usize)> {
    let m = d.num_columns();
    (0..m).flat_map(move |i| ((i + 1)..m).map(move |j| (i, j)))
}

/// Projected A2 of an equal-level pair through additive characters:
/// `N^-2 sum_{u1,u2 != 0} |sum_r chi(u1 x_r + u2 y_r)|^2`.
pub fn projected_a2_char(d: &Design, i: usize, j: usize) -> Result<f64> {
    let s = d.column(i).levels();
    if d.column(j).levels() != s {
        return Err(Error::MixedLevels);
    }
    let field = Field::new(u32::from(s)).map_err(|_| Error::NoFieldRealization(s))?;
    projected_a2_char_with(d, i, j, &field)
}

/// [`projected_a2_char`] over a caller-supplied field.
pub fn projected_a2_char_with(d: &Design, i: usize, j: usize, field: &Field) -> Result<f64> {
    let (x, y) = (d.column(i), d.column(j));
    if u32::from(x.levels()) != field.order() || u32::from(y.levels()) != field.order() {
        return Err(Error::NoFieldRealization(x.levels()));
    }
    let mut total = 0.0;
    for u1 in field.nonzero() {
        for u2 in field.nonzero() {
            let sum: Complex64 = x
                .data()
                .iter()
                .zip(y.data())
                .map(|(&a, &b)| field.character(field.add(field.mul(u1, a), field.mul(u2, b))))
                .sum();
            total += sum.norm_sqr();
        }
    }
    let n = d.runs() as f64;
    Ok(total / (n * n))
}

/// `[A_1, ..., A_jmax]` with the default fields and budget.
pub fn gwlp(d: &Design, jmax: usize) -> Result<Vec<f64>> {
    gwlp_with(d, jmax, DEFAULT_GWLP_BUDGET, &FieldSet::new())
}

/// Work estimate `sum_{j<=jmax} e_j(s_1 - 1, ..., s_m - 1)`.
pub fn gwlp_work(levels: &[u16], jmax: usize) -> u128 {
    let mut e = vec![0u128; jmax + 1];
    e[0] = 1;
    for &s in levels {
        let w = u128::from(s.saturating_sub(1));
        for j in (1..=jmax).rev() {
            e[j] = e[j].saturating_add(e[j - 1].saturating_mul(w));
        }
    }
    e[1..].iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Generalized wordlength pattern through products of canonical additive
/// characters, one field per column level count.
pub fn gwlp_with(d: &Design, jmax: usize, budget: u128, fields: &FieldSet) -> Result<Vec<f64>> {
    let m = d.num_columns();
    let jmax = jmax.min(m);
    let needed = gwlp_work(&d.levels(), jmax);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let n = d.runs();
    // tables[c][(u - 1) * N + r] = chi(u * x_rc)
    let mut tables: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(m);
    for c in d.columns() {
        let f = fields.get(c.levels())?;
        let nu = f.order() as usize - 1;
        let mut t = Vec::with_capacity(nu * n);
        for u in f.nonzero() {
            t.extend(c.data().iter().map(|&x| f.character_u(u, x)));
        }
        tables.push((nu, t));
    }
    let mut out = vec![0.0; jmax];
    let mut buffers = vec![vec![Complex64::new(1.0, 0.0); n]; jmax + 1];
    gwlp_recurse(&tables, n, 0, 0, &mut buffers, &mut out);
    let nn = (n * n) as f64;
    Ok(out.into_iter().map(|v| v / nn).collect())
}

fn gwlp_recurse(
    tables: &[(usize, Vec<Complex64>)],
    n: usize,
    depth: usize,
    start: usize,
    buffers: &mut [Vec<Complex64>],
    out: &mut [f64],
) {
    let jmax = out.len();
    for (c, (nu, table)) in tables.iter().enumerate().skip(start) {
        for u in 0..*nu {
            let (head, tail) = buffers.split_at_mut(depth + 1);
            let acc = &head[depth];
            let next = &mut tail[0];
            let row = &table[u * n..(u + 1) * n];
            let mut sum = Complex64::new(0.0, 0.0);
            for r in 0..n {
                let v = acc[r] * row[r];
                next[r] = v;
                sum += v;
            }
            out[depth] += sum.norm_sqr();
            if depth + 1 < jmax {
                gwlp_recurse(tables, n, depth + 1, c + 1, buffers, out);
            }
        }
    }
}

/// Dependency measures of one column pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStats {
    pub chi2: Rational,
    pub f: Rational,
    /// Defined only for equal-level pairs.
    pub d2: Option<Rational>,
    pub a2: Rational,
}

fn stats_from_counts(runs: usize, si: u16, sj: u16, counts: &[u32]) -> PairStats {
    let n = runs as i128;
    let cells = i128::from(si) * i128::from(sj);
    let sum_sq: i128 = counts.iter().map(|&c| i128::from(c).pow(2)).sum();
    let chi2 = Rational::new(big(cells * sum_sq - n * n), big(n));
    let f_num: i128 = counts
        .iter()
        .map(|&c| (cells * i128::from(c) - n).abs())
        .sum();
    let f = Rational::new(big(f_num), big(cells));
    let d2 = (si == sj).then(|| {
        let d_num: i128 = counts
            .iter()
            .map(|&c| (cells * i128::from(c) - n).pow(2))
            .sum();
        Rational::new(big(d_num), big(cells * cells))
    });
    let a2 = Rational::new(big(cells * sum_sq - n * n), big(n * n));
    PairStats { chi2, f, d2, a2 }
}

/// Chi-square, f and d^2 of columns `i` and `j`.
pub fn pair_dependency_stats(d: &Design, i: usize, j: usize) -> PairStats {
    stats_from_counts(
        d.runs(),
        d.column(i).levels(),
        d.column(j).levels(),
        &d.pair_counts(i, j),
    )
}

/// Frequencies of projected A2 values over all column pairs (zero included).
pub fn projected_a2_histogram(d: &Design) -> BTreeMap<Rational, usize> {
    let mut h = BTreeMap::new();
    for (i, j) in pairs(d) {
        *h.entry(projected_a2(d, i, j)).or_insert(0) += 1;
    }
    h
}

/// `E(s^2)` of a balanced two-level design, `N^2 A2 / C(m,2)`.
pub fn e_s2(d: &Design) -> Result<Rational> {
    if d.common_levels() != Some(2) {
        return Err(Error::NotTwoLevel);
    }
    let m = d.num_columns();
    if m < 2 {
        return Err(Error::OutOfRange(
            "E(s^2) needs at least two columns".into(),
        ));
    }
    let a2 = a2_overall(d)?;
    let n = Rational::from_integer(big(d.runs() as i128));
    let pairs = Rational::from_integer(big((m * (m - 1) / 2) as i128));
    Ok(&n * &n * a2 / pairs)
}

/// Summary of every criterion for one design.
#[derive(Debug, Clone)]
pub struct CriteriaReport {
    pub runs: usize,
    pub m: usize,
    pub levels: Vec<u16>,
    pub k1: Rational,
    pub k2: Rational,
    pub a2: Rational,
    pub histogram: BTreeMap<Rational, usize>,
    pub ave_chi2: Rational,
    pub max_chi2: Rational,
    pub ave_f: Rational,
    pub max_f: Rational,
    /// Equal-level designs only.
    pub e_d2: Option<Rational>,
    pub max_d2: Option<Rational>,
    pub max_projected_a2: Rational,
    pub gwlp: Vec<f64>,
    /// Two-level designs only.
    pub e_s2: Option<Rational>,
}

/// Evaluates every criterion; `gwlp` is computed up to
/// [`DEFAULT_GWLP_JMAX`], dropping orders that exceed the default budget,
/// and left empty when some level count is not a prime power.
pub fn aggregate_stats(d: &Design) -> Result<CriteriaReport> {
    aggregate_stats_with(d, DEFAULT_GWLP_JMAX, DEFAULT_GWLP_BUDGET, &FieldSet::new())
}

pub fn aggregate_stats_with(
    d: &Design,
    jmax: usize,
    budget: u128,
    fields: &FieldSet,
) -> Result<CriteriaReport> {
    d.ensure_balanced()?;
    let m = d.num_columns();
    if m < 2 {
        return Err(Error::OutOfRange("need at least two columns".into()));
    }
    let equal = d.common_levels().is_some();
    let mut histogram = BTreeMap::new();
    let (mut sum_chi2, mut sum_f, mut sum_d2) =
        (Rational::zero(), Rational::zero(), Rational::zero());
    let (mut max_chi2, mut max_f, mut max_d2) =
        (Rational::zero(), Rational::zero(), Rational::zero());
    for (i, j) in pairs(d) {
        let st = pair_dependency_stats(d, i, j);
        *histogram.entry(st.a2.clone()).or_insert(0usize) += 1;
        if st.chi2 > max_chi2 {
            max_chi2 = st.chi2.clone();
        }
        if st.f > max_f {
            max_f = st.f.clone();
        }
        if let Some(d2) = &st.d2 {
            if *d2 > max_d2 {
                max_d2 = d2.clone();
            }
            sum_d2 += d2;
        }
        sum_chi2 += st.chi2;
        sum_f += st.f;
    }
    let npairs = Rational::from_integer(big((m * (m - 1) / 2) as i128));
    let a2: Rational = histogram
        .iter()
        .map(|(v, &c)| v * Rational::from_integer(BigInt::from(c)))
        .sum();
    let max_projected_a2 = histogram.keys().next_back().cloned().unwrap_or_default();
    let mut jmax_fit = jmax.min(m);
    while jmax_fit > 0 && gwlp_work(&d.levels(), jmax_fit) > budget {
        jmax_fit -= 1;
    }
    let gwlp = match gwlp_with(d, jmax_fit, budget, fields) {
        Ok(g) => g,
        Err(Error::NoFieldRealization(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(CriteriaReport {
        runs: d.runs(),
        m,
        levels: d.levels(),
        k1: power_moment(d, 1),
        k2: power_moment(d, 2),
        a2,
        histogram,
        ave_chi2: &sum_chi2 / &npairs,
        max_chi2,
        ave_f: &sum_f / &npairs,
        max_f,
        e_d2: equal.then(|| &sum_d2 / &npairs),
        max_d2: equal.then_some(max_d2),
        max_projected_a2,
        gwlp,
        e_s2: if d.common_levels() == Some(2) {
            e_s2(d).ok()
        } else {
            None
        },
    })
}

impl CriteriaReport {
    /// Machine-readable report; rationals are `{num, den}` pairs.
    pub fn to_json(&self, bounds: &BoundReport) -> Value {
        let opt = |r: &Option<Rational>| r.as_ref().map_or(Value::Null, rational::to_json);
        let hist: Vec<Value> = self
            .histogram
            .iter()
            .map(|(v, c)| json!({ "value": rational::to_json(v), "count": c }))
            .collect();
        json!({
            "N": self.runs,
            "m": self.m,
            "levels": self.levels,
            "K1": rational::to_json(&self.k1),
            "K2": rational::to_json(&self.k2),
            "A2": rational::to_json(&self.a2),
            "projected_A2_histogram": hist,
            "max_projected_A2": rational::to_json(&self.max_projected_a2),
            "ave_chi2": rational::to_json(&self.ave_chi2),
            "max_chi2": rational::to_json(&self.max_chi2),
            "ave_f": rational::to_json(&self.ave_f),
            "ave_f_rounded": rational::round_decimal(&self.ave_f, 2),
            "max_f": rational::to_json(&self.max_f),
            "E_d2": opt(&self.e_d2),
            "max_d2": opt(&self.max_d2),
            "E_s2": opt(&self.e_s2),
            "gwlp": self.gwlp,
            "bounds": bounds.to_json(),
            "achieves_theorem1": bounds.achieved_theorem1,
        })
    }

    /// Human-readable summary in `value: frequency` form.
    pub fn to_text(&self, bounds: &BoundReport) -> String {
        let mut out = String::new();
        let level_text = match self.levels.first() {
            Some(&s) if self.levels.iter().all(|&x| x == s) => format!("{s}^{}", self.m),
            _ => {
                let mut counts: BTreeMap<u16, usize> = BTreeMap::new();
                for &s in &self.levels {
                    *counts.entry(s).or_insert(0) += 1;
                }
                counts
                    .iter()
                    .rev()
                    .map(|(s, c)| format!("{s}^{c}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        };
        out.push_str(&format!("SSD({}, {})\n", self.runs, level_text));
        out.push_str(&format!("overall A2 = {}\n", rational::display(&self.a2)));
        out.push_str("projected A2 frequencies:\n");
        for (v, c) in &self.histogram {
            out.push_str(&format!("  {:>8}: {c}\n", rational::display(v)));
        }
        out.push_str(&format!(
            "ave(chi2) = {}  max(chi2) = {}\n",
            rational::round_decimal(&self.ave_chi2, 2),
            rational::display(&self.max_chi2)
        ));
        out.push_str(&format!(
            "ave(f) = {}  max(f) = {}\n",
            rational::round_decimal(&self.ave_f, 2),
            rational::display(&self.max_f)
        ));
        if let (Some(e), Some(mx)) = (&self.e_d2, &self.max_d2) {
            out.push_str(&format!(
                "E(d2) = {}  max(d2) = {}\n",
                rational::round_decimal(e, 2),
                rational::display(mx)
            ));
        }
        if let Some(e) = &self.e_s2 {
            out.push_str(&format!("E(s2) = {}\n", rational::display(e)));
        }
        let g: Vec<String> = self.gwlp.iter().map(|v| format!("{v:.6}")).collect();
        out.push_str(&format!("GWLP A1.. = [{}]\n", g.join(", ")));
        out.push_str(&bounds.to_text());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Column;
    use crate::poly_labels::{h_set, q1_star, ColumnLabel};
    use crate::rational::{int, rat};

    fn linear(f: &Field, n: usize) -> Vec<ColumnLabel> {
        h_set(f, n).into_iter().map(ColumnLabel::Linear).collect()
    }

    fn example1() -> Design {
        let f3 = Field::new(3).unwrap();
        let mut labels = linear(&f3, 2);
        labels.extend(q1_star(&f3, 2).unwrap());
        Design::realize(&f3, 2, &labels).unwrap()
    }

    #[test]
    fn power_moments() {
        let e = example1();
        assert_eq!(power_moment(&e, 1), rat(7, 4));
        let f3 = Field::new(3).unwrap();
        let oa = Design::realize(&f3, 2, &linear(&f3, 2)).unwrap();
        assert_eq!(power_moment(&oa, 1), int(1));
        assert_eq!(power_moment(&oa, 2), int(1));
        let one = Design::new(3, vec![Column::new(3, vec![0, 1, 2])]).unwrap();
        assert_eq!(power_moment(&one, 1), int(0));
    }

    #[test]
    fn overall_a2() {
        let e = example1();
        assert_eq!(a2_overall(&e).unwrap(), int(6));
        let f3 = Field::new(3).unwrap();
        let oa = Design::realize(&f3, 2, &linear(&f3, 2)).unwrap();
        assert_eq!(a2_overall(&oa).unwrap(), int(0));
        let unbalanced =
            Design::new_allow_unbalanced(3, vec![Column::new(3, vec![0, 0, 1])]).unwrap();
        assert_eq!(
            a2_overall(&unbalanced).unwrap_err(),
            Error::UnbalancedDesign(0)
        );
    }

    #[test]
    fn projected_values() {
        let f3 = Field::new(3).unwrap();
        let oa = Design::realize(&f3, 2, &linear(&f3, 2)).unwrap();
        let twice = Design::column_juxtapose(&[&oa, &oa]).unwrap();
        assert_eq!(projected_a2(&twice, 0, 4), int(2));
        assert_eq!(projected_a2(&twice, 0, 1), int(0));
        let e = example1();
        assert_eq!(projected_a2(&e, 1, 4), rat(2, 3));
        assert!((projected_a2_char(&e, 1, 4).unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!(projected_a2_char(&e, 0, 4).unwrap().abs() < 1e-9);
    }

    #[test]
    fn dependency_stats_examples() {
        let f3 = Field::new(3).unwrap();
        let oa = Design::realize(&f3, 2, &linear(&f3, 2)).unwrap();
        let twice = Design::column_juxtapose(&[&oa, &oa]).unwrap();
        let st = pair_dependency_stats(&twice, 0, 4);
        assert_eq!((st.chi2, st.f, st.d2), (int(18), int(12), Some(int(18))));
        let st = pair_dependency_stats(&twice, 0, 1);
        assert_eq!((st.chi2, st.f, st.d2), (int(0), int(0), Some(int(0))));
        let e = example1();
        assert_eq!(pair_dependency_stats(&e, 1, 4).chi2, int(6));
    }

    #[test]
    fn gwlp_examples() {
        let f3 = Field::new(3).unwrap();
        let oa = Design::realize(&f3, 2, &linear(&f3, 2)).unwrap();
        let g = gwlp(&oa, 2).unwrap();
        assert!(g[0].abs() < 1e-9 && g[1].abs() < 1e-9);
        let e = example1();
        assert!((gwlp(&e, 2).unwrap()[1] - 6.0).abs() < 1e-9);
        assert!(matches!(
            gwlp_with(&e, 3, 10, &FieldSet::new()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn gwlp_work_counts() {
        // C(4,1)*2 + C(4,2)*4 = 8 + 24
        assert_eq!(gwlp_work(&[3, 3, 3, 3], 2), 32);
        assert_eq!(gwlp_work(&[9, 3], 2), 8 + 2 + 16);
    }

    #[test]
    fn es2_examples() {
        let d = Design::new(
            4,
            vec![
                Column::new(2, vec![0, 0, 1, 1]),
                Column::new(2, vec![0, 0, 1, 1]),
            ],
        )
        .unwrap();
        assert_eq!(e_s2(&d).unwrap(), int(16));
        let f2 = Field::new(2).unwrap();
        let oa = Design::realize(&f2, 3, &linear(&f2, 3)).unwrap();
        assert_eq!(e_s2(&oa).unwrap(), int(0));
        assert_eq!(e_s2(&example1()).unwrap_err(), Error::NotTwoLevel);
    }

    #[test]
    fn aggregate_identities() {
        let e = example1();
        let r = aggregate_stats(&e).unwrap();
        assert_eq!(r.a2, int(6));
        assert_eq!(r.histogram.values().sum::<usize>(), 21);
        assert_eq!(r.histogram.get(&rat(2, 3)), Some(&9));
        // ave(chi2) * C(m,2) = N * A2
        assert_eq!(&r.ave_chi2 * int(21), int(9) * &r.a2);
        // E(d2) = N^2 A2 / (s^2 C(m,2))
        assert_eq!(r.e_d2.clone().unwrap(), int(81) * &r.a2 / int(9 * 21));
        assert_eq!(r.gwlp.len(), 3);
    }
}
