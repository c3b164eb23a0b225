//! Column labels: nonzero linear forms over `F_s^n` and the quadratic
//! Addelman–Kempthorne labels `l(X)^2 + a*l(X) + g(X)`.
//!
//! Text form (used by the CLI and round-trippable through [`parse_label`]):
//! linear forms are `+`-joined terms `c*Xi` with coefficient `1` omitted, and
//! quadratic labels are `B^2[+a*B][+g]` where `B` is `Xi` for a single
//! variable and `(linear)` otherwise. Coefficients are field symbols.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

/// `c_1 X_1 + ... + c_n X_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<FieldElement>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        LinearForm { coeffs }
    }

    /// The single variable `X_{index + 1}` in `n` variables.
    pub fn var(n: usize, index: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[index] = 1;
        LinearForm { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![0; n] }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Zero-based index of the last nonzero coefficient.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    /// Member of `H`: nonzero with last nonzero coefficient equal to one.
    pub fn is_canonical(&self) -> bool {
        self.last_nonzero().is_some_and(|k| self.coeffs[k] == 1)
    }

    /// Index of the variable if this form is exactly `X_i`.
    fn single_var(&self) -> Option<usize> {
        let k = self.last_nonzero()?;
        (self.coeffs[k] == 1 && self.coeffs[..k].iter().all(|&c| c == 0)).then_some(k)
    }

    pub fn eval(&self, field: &Field, point: &[FieldElement]) -> FieldElement {
        self.coeffs
            .iter()
            .zip(point)
            .fold(0, |acc, (&c, &x)| field.add(acc, field.mul(c, x)))
    }

    pub fn scale(&self, field: &Field, c: FieldElement) -> Self {
        LinearForm::new(self.coeffs.iter().map(|&x| field.mul(c, x)).collect())
    }

    pub fn plus(&self, field: &Field, other: &LinearForm) -> Self {
        LinearForm::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| field.add(x, y))
                .collect(),
        )
    }

    /// `self = c * other` for some nonzero `c`.
    pub fn is_dependent(&self, field: &Field, other: &LinearForm) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        field.nonzero().any(|c| other.scale(field, c) == *self)
    }

    /// Embeds a form in `m` variables as the variables `offset..offset + m` of
    /// an `n`-variable form.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[offset..offset + self.coeffs.len()].copy_from_slice(&self.coeffs);
        LinearForm { coeffs }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}*")?;
            }
            write!(f, "X{}", i + 1)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A design column given as a polynomial in `X_1..X_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ColumnLabel {
    Linear(LinearForm),
    /// `base^2 + a*base + g`.
    Quadratic {
        base: LinearForm,
        a: FieldElement,
        g: LinearForm,
    },
}

impl ColumnLabel {
    pub fn num_vars(&self) -> usize {
        match self {
            ColumnLabel::Linear(l) => l.num_vars(),
            ColumnLabel::Quadratic { base, .. } => base.num_vars(),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, ColumnLabel::Linear(_))
    }

    pub fn eval(&self, field: &Field, point: &[FieldElement]) -> FieldElement {
        match self {
            ColumnLabel::Linear(l) => l.eval(field, point),
            ColumnLabel::Quadratic { base, a, g } => {
                let y = base.eval(field, point);
                let quad = field.add(field.mul(y, y), field.mul(*a, y));
                field.add(quad, g.eval(field, point))
            }
        }
    }
}

fn base_text(base: &LinearForm) -> String {
    match base.single_var() {
        Some(i) => format!("X{}", i + 1),
        None => format!("({base})"),
    }
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnLabel::Linear(l) => write!(f, "{l}"),
            ColumnLabel::Quadratic { base, a, g } => {
                let b = base_text(base);
                write!(f, "{b}^2")?;
                match a {
                    0 => {}
                    1 => write!(f, "+{b}")?,
                    _ => write!(f, "+{a}*{b}")?,
                }
                if !g.is_zero() {
                    write!(f, "+{g}")?;
                }
                Ok(())
            }
        }
    }
}

/// Evaluates a label at a point of `F_s^n`.
pub fn eval_label(field: &Field, label: &ColumnLabel, point: &[FieldElement]) -> FieldElement {
    label.eval(field, point)
}

/// `H(X_1..X_n)`: nonzero forms whose last nonzero coefficient is one, in
/// lexicographic order of `(c_n, ..., c_1)`.
pub fn h_set(field: &Field, n: usize) -> Vec<LinearForm> {
    field
        .enumerate_points(n)
        .into_iter()
        .map(|mut t| {
            t.reverse();
            LinearForm::new(t)
        })
        .filter(LinearForm::is_canonical)
        .collect()
}

/// `Q_1^*`: `X_1^2 + a X_1 + g` with `g` in `H(X_2..X_n)`, grouped by `g`
/// (in `H` order) with `a` ascending inside each group.
pub fn q1_star(field: &Field, n: usize) -> Result<Vec<ColumnLabel>> {
    qh_star(field, &LinearForm::var(n, 0), n)
}

/// `Q_1 = {X_1} ∪ Q_1^*`.
pub fn q1(field: &Field, n: usize) -> Result<Vec<ColumnLabel>> {
    qh(field, &LinearForm::var(n, 0), n)
}

/// The change of basis `Y_1..Y_n` (in `X` coordinates) attached to `h`:
/// `Y_1 = h`, `Y_i = X_{i-1}` for `2 <= i <= k`, `Y_i = X_i` for `i > k`,
/// where `k` is the position of the last nonzero coefficient of `h`.
pub fn qh_substitution(field: &Field, h: &LinearForm, n: usize) -> Result<Vec<LinearForm>> {
    let _ = field;
    if h.num_vars() != n {
        return Err(Error::ShapeMismatch(format!(
            "form {h} has {} variables, expected {n}",
            h.num_vars()
        )));
    }
    if !h.is_canonical() {
        return Err(Error::NotCanonical(h.to_string()));
    }
    let k = h.last_nonzero().unwrap();
    let mut ys = Vec::with_capacity(n);
    ys.push(h.clone());
    for i in 1..n {
        if i <= k {
            ys.push(LinearForm::var(n, i - 1));
        } else {
            ys.push(LinearForm::var(n, i));
        }
    }
    Ok(ys)
}

/// `Q_h^* = Q_1^*(Y_1..Y_n)` with every `g` rewritten in `X` coordinates.
pub fn qh_star(field: &Field, h: &LinearForm, n: usize) -> Result<Vec<ColumnLabel>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n, 2));
    }
    let ys = qh_substitution(field, h, n)?;
    let mut out = Vec::new();
    for gy in h_set(field, n - 1) {
        let g = gy
            .coeffs()
            .iter()
            .zip(&ys[1..])
            .fold(LinearForm::zero(n), |acc, (&c, y)| {
                acc.plus(field, &y.scale(field, c))
            });
        for a in field.elements() {
            out.push(ColumnLabel::Quadratic {
                base: h.clone(),
                a,
                g: g.clone(),
            });
        }
    }
    Ok(out)
}

/// `Q_h = {h} ∪ Q_h^*`, a saturated orthogonal array when evaluated.
pub fn qh(field: &Field, h: &LinearForm, n: usize) -> Result<Vec<ColumnLabel>> {
    let mut out = vec![ColumnLabel::Linear(h.clone())];
    out.extend(qh_star(field, h, n)?);
    Ok(out)
}

// ---------------------------------------------------------------------------
// parsing

fn split_top_level(text: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::LabelParse(format!(
                "unbalanced parentheses in {text}"
            )));
        }
    }
    if depth != 0 {
        return Err(Error::LabelParse(format!(
            "unbalanced parentheses in {text}"
        )));
    }
    parts.push(&text[start..]);
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::LabelParse(format!("empty term in {text}")));
    }
    Ok(parts)
}

fn parse_coeff(text: &str, s: u32) -> Result<FieldElement> {
    let c: u32 = text
        .parse()
        .map_err(|_| Error::LabelParse(format!("bad coefficient {text}")))?;
    if c >= s {
        return Err(Error::LabelParse(format!(
            "coefficient {c} is not below {s}"
        )));
    }
    Ok(c as FieldElement)
}

/// Splits `c*atom` into `(c, atom)`, with `c = 1` when absent.
fn split_coeff(term: &str, s: u32) -> Result<(FieldElement, &str)> {
    match term.find('*') {
        Some(pos) if !term[..pos].contains('(') => {
            Ok((parse_coeff(&term[..pos], s)?, &term[pos + 1..]))
        }
        _ => Ok((1, term)),
    }
}

fn parse_var(atom: &str, n: usize) -> Result<usize> {
    let idx: usize = atom
        .strip_prefix('X')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::LabelParse(format!("expected a variable, got {atom}")))?;
    if idx == 0 || idx > n {
        return Err(Error::LabelParse(format!(
            "variable {atom} outside X1..X{n}"
        )));
    }
    Ok(idx - 1)
}

fn parse_linear(text: &str, s: u32, n: usize) -> Result<LinearForm> {
    let mut coeffs = vec![0; n];
    let mut seen = vec![false; n];
    for term in split_top_level(text)? {
        let (c, atom) = split_coeff(term, s)?;
        let i = parse_var(atom, n)?;
        if seen[i] {
            return Err(Error::LabelParse(format!("repeated variable in {text}")));
        }
        seen[i] = true;
        coeffs[i] = c;
    }
    Ok(LinearForm::new(coeffs))
}

fn parse_base(atom: &str, s: u32, n: usize) -> Result<LinearForm> {
    match atom.strip_prefix('(').and_then(|a| a.strip_suffix(')')) {
        Some(inner) => parse_linear(inner, s, n),
        None => Ok(LinearForm::var(n, parse_var(atom, n)?)),
    }
}

/// Parses the text form written by `Display` for a label over GF(s) in `n`
/// variables.
pub fn parse_label(text: &str, s: u32, n: usize) -> Result<ColumnLabel> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let terms = split_top_level(&text)?;
    let Some(base_src) = terms[0].strip_suffix("^2") else {
        let form = parse_linear(&text, s, n)?;
        if form.is_zero() {
            return Err(Error::LabelParse("zero linear form".into()));
        }
        return Ok(ColumnLabel::Linear(form));
    };
    let base = parse_base(base_src, s, n)?;
    if base.is_zero() {
        return Err(Error::LabelParse("zero base form".into()));
    }
    let mut a = None;
    let mut g = vec![0; n];
    let mut seen = vec![false; n];
    for term in &terms[1..] {
        let (c, atom) = split_coeff(term, s)?;
        if atom == base_src && a.is_none() {
            a = Some(c);
            continue;
        }
        let i = parse_var(atom, n)?;
        if seen[i] {
            return Err(Error::LabelParse(format!("repeated variable in {text}")));
        }
        seen[i] = true;
        g[i] = c;
    }
    Ok(ColumnLabel::Quadratic {
        base,
        a: a.unwrap_or(0),
        g: LinearForm::new(g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lf(c: &[u16]) -> LinearForm {
        LinearForm::new(c.to_vec())
    }

    fn strings(labels: &[ColumnLabel]) -> Vec<String> {
        labels.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn h_set_small() {
        let f3 = Field::new(3).unwrap();
        let h: Vec<String> = h_set(&f3, 2).iter().map(ToString::to_string).collect();
        assert_eq!(h, ["X1", "X2", "X1+X2", "2*X1+X2"]);
        assert_eq!(h_set(&f3, 3).len(), 13);
        let f4 = Field::new(4).unwrap();
        assert_eq!(h_set(&f4, 1), vec![lf(&[1])]);
        for s in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(s).unwrap();
            for n in 1..=3 {
                let expect = (s.pow(n as u32) - 1) / (s - 1);
                assert_eq!(h_set(&f, n).len() as u32, expect);
            }
        }
    }

    #[test]
    fn q1_star_examples() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(
            strings(&q1_star(&f3, 2).unwrap()),
            ["X1^2+X2", "X1^2+X1+X2", "X1^2+2*X1+X2"]
        );
        assert_eq!(q1_star(&f3, 3).unwrap().len(), 12);
        assert_eq!(q1_star(&Field::new(5).unwrap(), 2).unwrap().len(), 5);
        assert_eq!(q1_star(&f3, 1).unwrap_err(), Error::DimensionTooSmall(1, 2));
    }

    #[test]
    fn q1_n3_matches_listing_order() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(
            strings(&q1(&f3, 3).unwrap()),
            [
                "X1",
                "X1^2+X2",
                "X1^2+X1+X2",
                "X1^2+2*X1+X2",
                "X1^2+X3",
                "X1^2+X1+X3",
                "X1^2+2*X1+X3",
                "X1^2+X2+X3",
                "X1^2+X1+X2+X3",
                "X1^2+2*X1+X2+X3",
                "X1^2+2*X2+X3",
                "X1^2+X1+2*X2+X3",
                "X1^2+2*X1+2*X2+X3",
            ]
        );
    }

    #[test]
    fn substitution_examples() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(
            qh_substitution(&f3, &lf(&[1, 0]), 2).unwrap(),
            vec![lf(&[1, 0]), lf(&[0, 1])]
        );
        assert_eq!(
            qh_substitution(&f3, &lf(&[1, 1]), 2).unwrap(),
            vec![lf(&[1, 1]), lf(&[1, 0])]
        );
        assert_eq!(
            qh_substitution(&f3, &lf(&[0, 1, 0]), 3).unwrap(),
            vec![lf(&[0, 1, 0]), lf(&[1, 0, 0]), lf(&[0, 0, 1])]
        );
        assert!(matches!(
            qh_substitution(&f3, &lf(&[1, 2]), 2),
            Err(Error::NotCanonical(_))
        ));
    }

    #[test]
    fn qh_listings() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(
            strings(&qh(&f3, &lf(&[0, 1]), 2).unwrap()),
            ["X2", "X2^2+X1", "X2^2+X2+X1", "X2^2+2*X2+X1"]
        );
        let q = qh(&f3, &lf(&[2, 1]), 2).unwrap();
        assert_eq!(q.len(), 4);
        let gs: Vec<LinearForm> = q[1..]
            .iter()
            .map(|l| match l {
                ColumnLabel::Quadratic { a, g, base } => {
                    // fold the a*h term into g to compare with the expanded listing
                    g.plus(&f3, &base.scale(&f3, *a))
                }
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(gs, vec![lf(&[1, 0]), lf(&[0, 1]), lf(&[2, 2])]);
        assert_eq!(qh(&f3, &lf(&[1, 0, 0]), 3).unwrap(), q1(&f3, 3).unwrap());
    }

    #[test]
    fn eval_examples() {
        let f3 = Field::new(3).unwrap();
        let l = parse_label("X1^2+X2", 3, 2).unwrap();
        assert_eq!(eval_label(&f3, &l, &[1, 1]), 2);
        let l = parse_label("X1^2+2*X1+X2", 3, 2).unwrap();
        assert_eq!(eval_label(&f3, &l, &[2, 0]), 2);
        let f4 = Field::new(4).unwrap();
        let l = parse_label("X1^2+X2", 4, 2).unwrap();
        assert_eq!(eval_label(&f4, &l, &[2, 1]), 2);
    }

    #[test]
    fn display_and_parse_compound_base() {
        let label = ColumnLabel::Quadratic {
            base: lf(&[1, 1]),
            a: 2,
            g: lf(&[1, 0]),
        };
        assert_eq!(label.to_string(), "(X1+X2)^2+2*(X1+X2)+X1");
        assert_eq!(parse_label(&label.to_string(), 3, 2).unwrap(), label);
        assert!(parse_label("X1^2+X3", 3, 2).is_err());
        assert!(parse_label("X1+X1", 3, 2).is_err());
        assert!(parse_label("3*X1", 3, 2).is_err());
        assert!(parse_label("(X1+X2^2", 3, 2).is_err());
    }

    #[test]
    fn every_catalog_label_round_trips() {
        for s in [3u32, 4, 5, 9] {
            let f = Field::new(s).unwrap();
            for n in 2..=3 {
                if s == 9 && n == 3 {
                    continue;
                }
                for h in h_set(&f, n) {
                    for label in qh(&f, &h, n).unwrap() {
                        let text = label.to_string();
                        assert_eq!(parse_label(&text, s, n).unwrap(), label, "{text}");
                    }
                }
            }
        }
    }

    #[test]
    fn dependence() {
        let f3 = Field::new(3).unwrap();
        assert!(lf(&[2, 2]).is_dependent(&f3, &lf(&[1, 1])));
        assert!(!lf(&[2, 1]).is_dependent(&f3, &lf(&[1, 1])));
        assert!(!lf(&[0, 0]).is_dependent(&f3, &lf(&[0, 0])));
    }
}
