//! Turnkey constructions and the catalog of known optimal designs.

use std::fmt;
use std::str::FromStr;

use crate::bounds;
use crate::criteria;
use crate::design::Design;
use crate::error::{Error, Result};
use crate::gf::{prime_power, Field, FieldElement};
use crate::poly_labels::{h_set, q1, q1_star, qh, qh_star, ColumnLabel, LinearForm};
use crate::rational::{rat, Rational};

/// Number of members of `H(X_1..X_n)`.
pub fn h_count(s: u32, n: usize) -> usize {
    ((s as usize).pow(n as u32) - 1) / (s as usize - 1)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n, 2));
    }
    Ok(())
}

/// `H ∪ Q_1^*`.
pub fn construct_thm4(field: &Field, n: usize) -> Result<Design> {
    check_n(n)?;
    let mut labels: Vec<ColumnLabel> = h_set(field, n)
        .into_iter()
        .map(ColumnLabel::Linear)
        .collect();
    labels.extend(q1_star(field, n)?);
    Design::realize(field, n, &labels)
}

/// The first `k` members of `H` in canonical order.
pub fn default_hs(field: &Field, n: usize, k: usize) -> Result<Vec<LinearForm>> {
    let all = h_set(field, n);
    if k < 2 || k > all.len() {
        return Err(Error::OutOfRange(format!(
            "k = {k}, need 1 < k <= {}",
            all.len()
        )));
    }
    Ok(all.into_iter().take(k).collect())
}

fn check_hs(field: &Field, n: usize, hs: &[LinearForm]) -> Result<()> {
    let total = h_count(field.order(), n);
    if hs.len() < 2 || hs.len() > total {
        return Err(Error::OutOfRange(format!(
            "k = {}, need 1 < k <= {total}",
            hs.len()
        )));
    }
    for (i, h) in hs.iter().enumerate() {
        if hs[..i].contains(h) {
            return Err(Error::DuplicateH(h.to_string()));
        }
    }
    Ok(())
}

/// Juxtaposition of `Q_h` over `hs` (two forms give the `k = 2` case).
pub fn construct_thm6(field: &Field, n: usize, hs: &[LinearForm]) -> Result<Design> {
    check_n(n)?;
    check_hs(field, n, hs)?;
    let mut labels = Vec::new();
    for h in hs {
        labels.extend(qh(field, h, n)?);
    }
    Design::realize(field, n, &labels)
}

/// Juxtaposition of `Q_h^*` over `hs`; odd `s` only.
pub fn construct_thm7(field: &Field, n: usize, hs: &[LinearForm]) -> Result<Design> {
    if field.order().is_multiple_of(2) {
        return Err(Error::EvenS(field.order()));
    }
    check_n(n)?;
    check_hs(field, n, hs)?;
    let mut labels = Vec::new();
    for h in hs {
        labels.extend(qh_star(field, h, n)?);
    }
    Design::realize(field, n, &labels)
}

/// Fractions of the saturated array `H`, branching on `branch`.
pub fn construct_thm8(
    field: &Field,
    n: usize,
    branch: &LinearForm,
    levels: &[FieldElement],
) -> Result<Design> {
    let labels: Vec<ColumnLabel> = h_set(field, n)
        .into_iter()
        .map(ColumnLabel::Linear)
        .collect();
    if !branch.is_canonical() {
        return Err(Error::NotCanonical(branch.to_string()));
    }
    Design::branch_fraction(
        field,
        n,
        &labels,
        &ColumnLabel::Linear(branch.clone()),
        levels,
    )
}

/// `X_1^2 + X_2` as a label in `n` variables.
pub fn thm9_branch(n: usize) -> ColumnLabel {
    ColumnLabel::Quadratic {
        base: LinearForm::var(n, 0),
        a: 0,
        g: LinearForm::var(n, 1),
    }
}

/// Fractions of `Q_1`, branching on `X_1^2 + X_2`.
pub fn construct_thm9(field: &Field, n: usize, levels: &[FieldElement]) -> Result<Design> {
    check_n(n)?;
    Design::branch_fraction(field, n, &q1(field, n)?, &thm9_branch(n), levels)
}

/// Fractions of `Q_1` branching on any of its columns.
pub fn construct_example3(
    field: &Field,
    branch: &ColumnLabel,
    levels: &[FieldElement],
) -> Result<Design> {
    let n = branch.num_vars();
    check_n(n)?;
    Design::branch_fraction(field, n, &q1(field, n)?, branch, levels)
}

/// Branch class of a `Q_1(X_1, X_2, X_3)` column: 1 for `X_1`, 2 for
/// `X_1^2 + aX_1 + X_2`, 3 for `X_1^2 + aX_1 + bX_2 + X_3`.
pub fn example3_type(label: &ColumnLabel) -> Option<u8> {
    match label {
        ColumnLabel::Linear(l) if *l == LinearForm::var(l.num_vars(), 0) => Some(1),
        ColumnLabel::Quadratic { g, .. } => match g.last_nonzero() {
            Some(1) => Some(2),
            Some(2) => Some(3),
            _ => None,
        },
        _ => None,
    }
}

/// Theorem 6 with every `h`, then one column dropped from each fully
/// aliased pair.
pub fn construct_s4_dealias(field: &Field, n: usize) -> Result<Design> {
    let hs = h_set(field, n);
    Ok(construct_thm6(field, n, &hs)?.remove_fully_aliased())
}

/// A saturated strength-2 array with `s = p^r` runs over `GF(p)`, used as a
/// replacement table for an `s`-level column.
pub fn replacement_table(s: u32) -> Result<Design> {
    let (p, r) = prime_power(s).ok_or(Error::NotPrimePower(s))?;
    if r < 2 {
        return Err(Error::OutOfRange(format!(
            "{s} is prime; no proper replacement table"
        )));
    }
    let f = Field::new(p)?;
    let labels: Vec<ColumnLabel> = h_set(&f, r as usize)
        .into_iter()
        .map(ColumnLabel::Linear)
        .collect();
    Design::realize(&f, r as usize, &labels)
}

/// Outcome of building the all-`h` `Q_h^*` design in two variables.
#[derive(Debug, Clone)]
pub struct Corollary2Report {
    pub design: Design,
    pub a2: Rational,
    /// `(s+1)s(s-1)^2/2`.
    pub closed_form: Rational,
    /// `C(s+1, 2)(s^2 - 2s + 1)`.
    pub pair_sum_form: Rational,
    /// Orthogonal partners per column.
    pub orthogonal_degrees: Vec<usize>,
    /// Partners at `(s-1)^2/s^2` per column.
    pub partial_degrees: Vec<usize>,
}

pub fn corollary2_check(field: &Field) -> Result<Corollary2Report> {
    let s = field.order();
    if s.is_multiple_of(2) {
        return Err(Error::EvenS(s));
    }
    let hs = h_set(field, 2);
    let design = construct_thm7(field, 2, &hs)?;
    let a2 = criteria::a2_overall(&design)?;
    let si = i64::from(s);
    let closed_form = rat((si + 1) * si * (si - 1) * (si - 1), 2);
    let pair_sum_form = rat((si + 1) * si / 2 * (si * si - 2 * si + 1), 1);
    let partial = rat((si - 1) * (si - 1), si * si);
    let m = design.num_columns();
    let mut orthogonal_degrees = vec![0; m];
    let mut partial_degrees = vec![0; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let v = criteria::projected_a2(&design, i, j);
            if v == Rational::default() {
                orthogonal_degrees[i] += 1;
                orthogonal_degrees[j] += 1;
            } else if v == partial {
                partial_degrees[i] += 1;
                partial_degrees[j] += 1;
            }
        }
    }
    Ok(Corollary2Report {
        design,
        a2,
        closed_form,
        pair_sum_form,
        orthogonal_degrees,
        partial_degrees,
    })
}

/// Construction families understood by [`Recipe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    T4,
    /// `Q_{h_1} ∪ Q_{h_2}`.
    T5,
    T6,
    T7,
    T8,
    T9,
    S4Dealias,
    Example3,
    Corollary2,
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "4" => Theorem::T4,
            "5" => Theorem::T5,
            "6" => Theorem::T6,
            "7" => Theorem::T7,
            "8" => Theorem::T8,
            "9" => Theorem::T9,
            "s4-dealias" | "dealias" => Theorem::S4Dealias,
            "example3" | "ex3" => Theorem::Example3,
            "corollary2" | "cor2" => Theorem::Corollary2,
            other => return Err(Error::OutOfRange(format!("unknown theorem {other:?}"))),
        })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T4 => "Theorem 4",
            Theorem::T5 => "Theorem 5",
            Theorem::T6 => "Theorem 6",
            Theorem::T7 => "Theorem 7",
            Theorem::T8 => "Theorem 8",
            Theorem::T9 => "Theorem 9",
            Theorem::S4Dealias => "Theorem 6, de-aliased",
            Theorem::Example3 => "Example 3",
            Theorem::Corollary2 => "Corollary 2",
        })
    }
}

/// A construction with its parameters. Unset options take defaults: the
/// first `k` forms of `H` for `hs`, `X_1` as branch column, and
/// `{0, ..., k-1}` as the kept level set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub theorem: Theorem,
    pub s: u32,
    pub n: usize,
    pub k: Option<usize>,
    pub hs: Option<Vec<LinearForm>>,
    pub branch: Option<ColumnLabel>,
    pub levels: Option<Vec<FieldElement>>,
}

impl Recipe {
    pub fn new(theorem: Theorem, s: u32, n: usize) -> Self {
        Recipe {
            theorem,
            s,
            n,
            k: None,
            hs: None,
            branch: None,
            levels: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_branch(mut self, branch: ColumnLabel) -> Self {
        self.branch = Some(branch);
        self
    }

    pub fn with_levels(mut self, levels: Vec<FieldElement>) -> Self {
        self.levels = Some(levels);
        self
    }

    pub fn with_hs(mut self, hs: Vec<LinearForm>) -> Self {
        self.hs = Some(hs);
        self
    }

    fn hs_or_default(&self, field: &Field, k: Option<usize>) -> Result<Vec<LinearForm>> {
        match (&self.hs, k) {
            (Some(hs), Some(k)) if hs.len() != k => Err(Error::ShapeMismatch(format!(
                "{} forms given for k = {k}",
                hs.len()
            ))),
            (Some(hs), _) => Ok(hs.clone()),
            (None, Some(k)) => default_hs(field, self.n, k),
            (None, None) => Err(Error::OutOfRange("k is required".into())),
        }
    }

    fn levels_or_default(&self) -> Result<Vec<FieldElement>> {
        match (&self.levels, self.k) {
            (Some(g), Some(k)) if g.len() != k => Err(Error::BadFractionCount {
                k: g.len(),
                s: self.s,
            }),
            (Some(g), _) => Ok(g.clone()),
            (None, Some(k)) => {
                if k == 0 {
                    return Err(Error::EmptyFraction);
                }
                if k >= self.s as usize {
                    return Err(Error::BadFractionCount { k, s: self.s });
                }
                Ok((0..k as FieldElement).collect())
            }
            (None, None) => Err(Error::OutOfRange("k or a level set is required".into())),
        }
    }

    /// Builds the design over `field`, which must have order `s`.
    pub fn build_with(&self, field: &Field) -> Result<Design> {
        if field.order() != self.s {
            return Err(Error::ShapeMismatch(format!(
                "field of order {} for s = {}",
                field.order(),
                self.s
            )));
        }
        let n = self.n;
        match self.theorem {
            Theorem::T4 => construct_thm4(field, n),
            Theorem::T5 => construct_thm6(field, n, &self.hs_or_default(field, Some(2))?),
            Theorem::T6 => construct_thm6(field, n, &self.hs_or_default(field, self.k)?),
            Theorem::T7 => construct_thm7(field, n, &self.hs_or_default(field, self.k)?),
            Theorem::T8 => {
                let branch = match &self.branch {
                    None => LinearForm::var(n, 0),
                    Some(ColumnLabel::Linear(l)) => l.clone(),
                    Some(other) => return Err(Error::NotAColumn(other.to_string())),
                };
                construct_thm8(field, n, &branch, &self.levels_or_default()?)
            }
            Theorem::T9 => construct_thm9(field, n, &self.levels_or_default()?),
            Theorem::S4Dealias => construct_s4_dealias(field, n),
            Theorem::Example3 => {
                let branch = self.branch.clone().unwrap_or_else(|| thm9_branch(n));
                construct_example3(field, &branch, &self.levels_or_default()?)
            }
            Theorem::Corollary2 => Ok(corollary2_check(field)?.design),
        }
    }

    /// Builds over the default field of order `s`.
    pub fn build(&self) -> Result<Design> {
        self.build_with(&Field::new(self.s)?)
    }

    pub fn describe(&self) -> String {
        let mut out = format!("{}, s = {}, n = {}", self.theorem, self.s, self.n);
        if let Some(k) = self.k {
            out.push_str(&format!(", k = {k}"));
        }
        out
    }
}

/// One row of a projected-A2 frequency table.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    /// Table number (1, 2 or 3).
    pub table: u8,
    pub runs: usize,
    pub m: usize,
    pub recipe: Recipe,
    /// Nonzero projected A2 values and their frequencies.
    pub expected: Vec<(Rational, usize)>,
}

impl CatalogEntry {
    pub fn name(&self) -> String {
        format!(
            "Table {} row {}/{} ({})",
            self.table,
            self.runs,
            self.m,
            self.recipe.describe()
        )
    }
}

fn entry(
    table: u8,
    runs: usize,
    m: usize,
    recipe: Recipe,
    expected: &[((i64, i64), usize)],
) -> CatalogEntry {
    CatalogEntry {
        table,
        runs,
        m,
        recipe,
        expected: expected.iter().map(|&((a, b), c)| (rat(a, b), c)).collect(),
    }
}

/// The 31 rows of the three-, four- and five-level tables.
pub fn catalog() -> Vec<CatalogEntry> {
    use Theorem::*;
    let r = Recipe::new;
    vec![
        entry(1, 6, 3, r(T8, 3, 2).with_k(2), &[((1, 2), 3)]),
        entry(1, 9, 7, r(T4, 3, 2), &[((2, 3), 9)]),
        entry(1, 9, 12, r(T7, 3, 2).with_k(4), &[((4, 9), 54)]),
        entry(
            1,
            9,
            16,
            r(T6, 3, 2).with_k(4),
            &[((4, 9), 54), ((2, 3), 36)],
        ),
        entry(1, 18, 12, r(T8, 3, 3).with_k(2), &[((1, 2), 12)]),
        entry(
            1,
            18,
            12,
            r(T9, 3, 3).with_k(2),
            &[((1, 6), 27), ((1, 2), 3)],
        ),
        entry(1, 27, 25, r(T4, 3, 3), &[((2, 3), 36)]),
        entry(
            1,
            27,
            26,
            r(T6, 3, 3).with_k(2),
            &[((2, 9), 81), ((4, 9), 9), ((2, 3), 6)],
        ),
        entry(
            1,
            27,
            156,
            r(T7, 3, 3).with_k(13),
            &[((2, 9), 6318), ((4, 9), 702)],
        ),
        entry(
            1,
            27,
            169,
            r(T6, 3, 3).with_k(13),
            &[((2, 9), 6318), ((4, 9), 702), ((2, 3), 468)],
        ),
        entry(1, 54, 39, r(T8, 3, 4).with_k(2), &[((1, 2), 39)]),
        entry(
            1,
            54,
            39,
            r(T9, 3, 4).with_k(2),
            &[((1, 6), 108), ((1, 2), 3)],
        ),
        entry(2, 8, 4, r(T8, 4, 2).with_k(2), &[((1, 1), 6)]),
        entry(2, 12, 4, r(T8, 4, 2).with_k(3), &[((1, 3), 6)]),
        entry(2, 16, 9, r(T4, 4, 2), &[((1, 1), 12)]),
        entry(2, 16, 15, r(S4Dealias, 4, 2), &[((1, 1), 45)]),
        entry(2, 32, 20, r(T8, 4, 3).with_k(2), &[((1, 1), 30)]),
        entry(2, 48, 20, r(T8, 4, 3).with_k(3), &[((1, 3), 30)]),
        entry(
            2,
            48,
            20,
            r(T9, 4, 3).with_k(3),
            &[((1, 9), 72), ((1, 3), 6)],
        ),
        entry(2, 64, 41, r(T4, 4, 3), &[((1, 1), 60)]),
        entry(2, 64, 231, r(S4Dealias, 4, 3), &[((1, 1), 3465)]),
        entry(3, 10, 5, r(T8, 5, 2).with_k(2), &[((3, 2), 10)]),
        entry(3, 15, 5, r(T8, 5, 2).with_k(3), &[((2, 3), 10)]),
        entry(3, 20, 5, r(T8, 5, 2).with_k(4), &[((1, 4), 10)]),
        entry(3, 25, 11, r(T4, 5, 2), &[((4, 5), 25)]),
        entry(3, 25, 30, r(T7, 5, 2).with_k(6), &[((16, 25), 375)]),
        entry(
            3,
            25,
            36,
            r(T6, 5, 2).with_k(6),
            &[((16, 25), 375), ((4, 5), 150)],
        ),
        entry(3, 50, 30, r(T8, 5, 3).with_k(2), &[((3, 2), 60)]),
        entry(
            3,
            50,
            30,
            r(T9, 5, 3).with_k(2),
            &[((3, 10), 250), ((3, 2), 10)],
        ),
        entry(3, 75, 30, r(T8, 5, 3).with_k(3), &[((2, 3), 60)]),
        entry(
            3,
            75,
            30,
            r(T9, 5, 3).with_k(3),
            &[((2, 15), 250), ((2, 3), 10)],
        ),
    ]
}

/// Result of checking one catalog row.
#[derive(Debug, Clone)]
pub struct RowCheck {
    pub name: String,
    pub a2: Rational,
    pub achieved_theorem1: bool,
    pub coincidence_spread: u32,
    /// Empty when the row verifies.
    pub failures: Vec<String>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Nonzero part of a projected-A2 histogram.
pub fn nonzero_histogram(d: &Design) -> Vec<(Rational, usize)> {
    criteria::projected_a2_histogram(d)
        .into_iter()
        .filter(|(v, _)| *v != Rational::default())
        .collect()
}

/// Builds and checks one row over `field` (of order `s`): run count, width,
/// nonzero frequencies, A2 against the frequencies, and Theorem 1
/// attainment together with the coincidence-spread condition.
pub fn verify_entry_with(e: &CatalogEntry, field: &Field) -> Result<RowCheck> {
    let name = e.name();
    let d = e.recipe.build_with(field)?;
    let mut failures = Vec::new();
    if d.runs() != e.runs || d.num_columns() != e.m {
        failures.push(format!(
            "{name} shape mismatch: got {}x{}",
            d.runs(),
            d.num_columns()
        ));
    }
    let hist = nonzero_histogram(&d);
    if hist != e.expected {
        failures.push(format!(
            "{name} histogram mismatch: got {}",
            format_histogram(&hist)
        ));
    }
    let report = bounds::certify(&d)?;
    let from_hist: Rational = e
        .expected
        .iter()
        .map(|(v, c)| v * Rational::from_integer((*c).into()))
        .sum();
    if report.a2 != from_hist {
        failures.push(format!("{name} A2 mismatch: got {}", report.a2));
    }
    if !report.achieved_theorem1 {
        failures.push(format!("{name} does not attain the Theorem 1 bound"));
    }
    if report.achieved_theorem1 != (report.coincidence_spread <= 1) {
        failures.push(format!(
            "{name} bound attainment disagrees with coincidence spread {}",
            report.coincidence_spread
        ));
    }
    Ok(RowCheck {
        name,
        a2: report.a2,
        achieved_theorem1: report.achieved_theorem1,
        coincidence_spread: report.coincidence_spread,
        failures,
    })
}

pub fn verify_entry(e: &CatalogEntry) -> Result<RowCheck> {
    verify_entry_with(e, &Field::new(e.recipe.s)?)
}

/// Checks every catalog row with the default fields.
pub fn catalog_verify() -> Vec<RowCheck> {
    catalog()
        .iter()
        .map(|e| {
            verify_entry(e).unwrap_or_else(|err| RowCheck {
                name: e.name(),
                a2: Rational::default(),
                achieved_theorem1: false,
                coincidence_spread: 0,
                failures: vec![format!("{} failed to build: {err}", e.name())],
            })
        })
        .collect()
}

pub fn format_histogram(h: &[(Rational, usize)]) -> String {
    let parts: Vec<String> = h
        .iter()
        .map(|(v, c)| format!("{}: {c}", crate::rational::display(v)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// A row of the ave(f) / max(f) comparison tables for this construction.
#[derive(Debug, Clone)]
pub struct FRow {
    pub runs: usize,
    pub s: u32,
    pub m: usize,
    pub theorem: Theorem,
    pub ave_f: &'static str,
    pub max_f: u32,
    /// Full-width rows do not depend on a column order.
    pub hard: bool,
}

impl FRow {
    /// The design evaluated for this row: the smallest `k` reaching `m`
    /// columns (the de-aliased design for four levels), truncated to the
    /// first `m`.
    pub fn design(&self) -> Result<Design> {
        let mut n = 1usize;
        while (self.s as usize).pow(n as u32) < self.runs {
            n += 1;
        }
        let field = Field::new(self.s)?;
        let d = if self.s == 4 && self.theorem == Theorem::T6 {
            construct_s4_dealias(&field, n)?
        } else {
            let width = match self.theorem {
                Theorem::T7 => h_count(self.s, n) - 1,
                _ => h_count(self.s, n),
            };
            let k = self.m.div_ceil(width).max(2);
            Recipe::new(self.theorem, self.s, n)
                .with_k(k)
                .build_with(&field)?
        };
        let keep: Vec<usize> = (0..self.m.min(d.num_columns())).collect();
        d.select_columns(&keep)
    }
}

/// Rows for Theorems 6 and 7 in the ave(f) / max(f) comparison.
pub fn f_table() -> Vec<FRow> {
    use Theorem::*;
    let row = |runs, s, m, theorem, ave_f, max_f, hard| FRow {
        runs,
        s,
        m,
        theorem,
        ave_f,
        max_f,
        hard,
    };
    vec![
        row(9, 3, 8, T6, "2.57", 6, false),
        row(9, 3, 8, T7, "3.00", 4, false),
        row(9, 3, 12, T6, "3.27", 6, false),
        row(9, 3, 12, T7, "3.27", 4, true),
        row(9, 3, 16, T6, "3.60", 6, true),
        row(16, 4, 10, T6, "6.04", 16, false),
        row(16, 4, 15, T6, "6.86", 16, true),
        row(25, 5, 12, T6, "8.33", 20, false),
        row(25, 5, 12, T7, "9.55", 14, false),
        row(25, 5, 18, T6, "10.78", 20, false),
        row(25, 5, 18, T7, "10.98", 14, false),
        row(25, 5, 24, T6, "11.96", 20, false),
        row(25, 5, 24, T7, "11.67", 14, false),
        row(25, 5, 30, T6, "12.64", 20, false),
        row(25, 5, 30, T7, "12.07", 14, true),
        row(25, 5, 36, T6, "13.10", 20, true),
        row(27, 3, 26, T6, "3.66", 18, true),
        row(27, 3, 26, T7, "3.77", 12, false),
        row(27, 3, 39, T6, "4.81", 18, false),
        row(27, 3, 39, T7, "4.81", 12, false),
        row(27, 3, 52, T6, "5.38", 18, false),
        row(27, 3, 52, T7, "5.97", 12, false),
        row(27, 3, 65, T6, "5.71", 18, false),
        row(27, 3, 65, T7, "6.28", 12, false),
        row(27, 3, 156, T6, "6.49", 18, false),
        row(27, 3, 156, T7, "6.97", 12, true),
        row(27, 3, 169, T6, "6.53", 18, true),
    ]
}

/// ave(f) and max(f) over all pairs of a design.
pub fn f_stats(d: &Design) -> (Rational, Rational) {
    let m = d.num_columns();
    let mut sum = Rational::default();
    let mut max = Rational::default();
    for i in 0..m {
        for j in (i + 1)..m {
            let f = criteria::pair_dependency_stats(d, i, j).f;
            if f > max {
                max = f.clone();
            }
            sum += f;
        }
    }
    let pairs = Rational::from_integer(((m * (m - 1) / 2) as i64).into());
    (sum / pairs, max)
}

/// Bundled appendix designs in the text format.
pub const APPENDIX_TABLE6: &str = include_str!("../../../data/appendix_table6.ssd");
pub const APPENDIX_TABLE7: &str = include_str!("../../../data/appendix_table7.ssd");
pub const APPENDIX_TABLE8: &str = include_str!("../../../data/appendix_table8.ssd");

/// Parses bundled appendix table 6, 7 or 8.
pub fn appendix_table(number: u8) -> Result<Design> {
    let text = match number {
        6 => APPENDIX_TABLE6,
        7 => APPENDIX_TABLE7,
        8 => APPENDIX_TABLE8,
        other => return Err(Error::OutOfRange(format!("no appendix table {other}"))),
    };
    Design::from_text(text, false)
}

/// Expected nonzero and zero frequencies of an appendix design or one of
/// its sub-selections.
#[derive(Debug, Clone)]
pub struct AppendixCheck {
    pub table: u8,
    /// One-based columns removed before evaluation.
    pub removed: Vec<usize>,
    pub a2: Rational,
    pub histogram: Vec<(Rational, usize)>,
}

pub fn appendix_checks() -> Vec<AppendixCheck> {
    let c = |table, removed: &[usize], a2: Rational, hist: &[((i64, i64), usize)]| AppendixCheck {
        table,
        removed: removed.to_vec(),
        a2,
        histogram: hist.iter().map(|&((a, b), n)| (rat(a, b), n)).collect(),
    };
    vec![
        c(
            6,
            &[],
            rat(48, 1),
            &[((0, 1), 30), ((4, 9), 54), ((2, 3), 36)],
        ),
        c(6, &[1, 5, 9, 13], rat(24, 1), &[((0, 1), 12), ((4, 9), 54)]),
        c(7, &[], rat(45, 1), &[((0, 1), 60), ((1, 1), 45)]),
        c(
            8,
            &[],
            rat(360, 1),
            &[((0, 1), 105), ((16, 25), 375), ((4, 5), 150)],
        ),
        c(
            8,
            &[1, 7, 13, 19, 25, 31],
            rat(240, 1),
            &[((0, 1), 60), ((16, 25), 375)],
        ),
    ]
}

/// Full histogram (zero included) as a sorted list.
pub fn full_histogram(d: &Design) -> Vec<(Rational, usize)> {
    criteria::projected_a2_histogram(d).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn f(s: u32) -> Field {
        Field::new(s).unwrap()
    }

    #[test]
    fn thm4_small() {
        let d = construct_thm4(&f(3), 2).unwrap();
        assert_eq!(d.num_columns(), 7);
        assert_eq!(criteria::a2_overall(&d).unwrap(), int(6));
        for j in 1..7 {
            assert_eq!(criteria::projected_a2(&d, 0, j), int(0));
        }
        assert_eq!(
            construct_thm4(&f(3), 1).unwrap_err(),
            Error::DimensionTooSmall(1, 2)
        );
    }

    #[test]
    fn thm6_errors() {
        let field = f(3);
        let x1 = LinearForm::var(2, 0);
        assert_eq!(
            construct_thm6(&field, 2, &[x1.clone(), x1.clone()]).unwrap_err(),
            Error::DuplicateH("X1".into())
        );
        assert!(construct_thm6(&field, 2, &[x1]).is_err());
        let hs = default_hs(&f(4), 2, 2).unwrap();
        assert_eq!(construct_thm7(&f(4), 2, &hs).unwrap_err(), Error::EvenS(4));
    }

    #[test]
    fn thm6_s4_aliased_pairs() {
        let field = f(4);
        let d = construct_thm6(&field, 2, &h_set(&field, 2)).unwrap();
        let hist = criteria::projected_a2_histogram(&d);
        assert_eq!(hist.get(&int(3)), Some(&10));
        let dd = d.remove_fully_aliased();
        assert_eq!(dd.num_columns(), 15);
        assert_eq!(criteria::a2_overall(&dd).unwrap(), int(45));
    }

    #[test]
    fn branch_fractions() {
        let d = construct_thm8(&f(3), 2, &LinearForm::var(2, 0), &[0, 1]).unwrap();
        assert_eq!((d.runs(), d.num_columns()), (6, 3));
        assert!(matches!(
            construct_thm8(&f(3), 2, &LinearForm::var(2, 0), &[0, 1, 2]),
            Err(Error::BadFractionCount { .. })
        ));
        assert_eq!(
            construct_thm8(&f(3), 2, &LinearForm::var(2, 0), &[]).unwrap_err(),
            Error::EmptyFraction
        );
        let d = construct_thm9(&f(3), 3, &[0, 1]).unwrap();
        assert_eq!((d.runs(), d.num_columns()), (18, 12));
    }

    #[test]
    fn example3_classes() {
        let field = f(3);
        let labels = q1(&field, 3).unwrap();
        let types: Vec<u8> = labels.iter().map(|l| example3_type(l).unwrap()).collect();
        assert_eq!(types, [1, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3]);
        assert!(matches!(
            construct_example3(&field, &ColumnLabel::Linear(LinearForm::var(3, 1)), &[0, 1]),
            Err(Error::NotAColumn(_))
        ));
    }

    #[test]
    fn replacement_tables() {
        let t = replacement_table(9).unwrap();
        assert_eq!((t.runs(), t.num_columns()), (9, 4));
        assert_eq!(t.strength(), 2);
        let t = replacement_table(4).unwrap();
        assert_eq!((t.runs(), t.num_columns()), (4, 3));
        assert!(replacement_table(5).is_err());
    }

    #[test]
    fn corollary2_small() {
        let r = corollary2_check(&f(3)).unwrap();
        assert_eq!(r.a2, int(24));
        assert_eq!(r.closed_form, int(24));
        assert!(r.orthogonal_degrees.iter().all(|&d| d == 2));
        assert!(r.partial_degrees.iter().all(|&d| d == 9));
        assert!(corollary2_check(&f(4)).is_err());
    }

    #[test]
    fn theorem_names() {
        assert_eq!("6".parse::<Theorem>().unwrap(), Theorem::T6);
        assert_eq!("s4-dealias".parse::<Theorem>().unwrap(), Theorem::S4Dealias);
        assert!("11".parse::<Theorem>().is_err());
    }

    #[test]
    fn catalog_shape() {
        let c = catalog();
        assert_eq!(c.len(), 31);
        assert_eq!(c.iter().filter(|e| e.table == 1).count(), 12);
        assert_eq!(c.iter().filter(|e| e.table == 2).count(), 9);
        assert_eq!(c.iter().filter(|e| e.table == 3).count(), 10);
    }
}
