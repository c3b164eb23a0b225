//! The design matrix and its structural operations.
//!
//! A design is stored column-major: each [`Column`] holds its level count and
//! one symbol per run. Text format:
//!
//! ```text
//! # ssd v1
//! N m
//! s_1 s_2 ... s_m
//! x_11 x_12 ... x_1m
//! ...
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::criteria;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::poly_labels::ColumnLabel;
use crate::rational::Rational;

/// Size cap on runs and columns.
pub const MAX_RUNS: usize = 4096;
pub const MAX_COLUMNS: usize = 4096;

const HEADER: &str = "# ssd v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    levels: u16,
    data: Vec<u16>,
    label: Option<String>,
}

impl Column {
    pub fn new(levels: u16, data: Vec<u16>) -> Self {
        Column {
            levels,
            data,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn levels(&self) -> u16 {
        self.levels
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    /// Provenance (the generating label), when known.
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn is_balanced(&self) -> bool {
        let n = self.data.len();
        let s = self.levels as usize;
        if s == 0 || !n.is_multiple_of(s) {
            return false;
        }
        let mut counts = vec![0usize; s];
        for &x in &self.data {
            counts[x as usize] += 1;
        }
        counts.iter().all(|&c| c == n / s)
    }

    /// Relabels symbols in order of first appearance; two columns are fully
    /// aliased exactly when these forms agree.
    fn first_occurrence_form(&self) -> Vec<u16> {
        let mut map = vec![u16::MAX; self.levels as usize];
        let mut next = 0;
        self.data
            .iter()
            .map(|&x| {
                let slot = &mut map[x as usize];
                if *slot == u16::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect()
    }
}

/// Classification of a pair of equal-level columns by their cell counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairClass {
    Orthogonal,
    FullyAliased,
    SemiOrthogonal,
    /// Anything else, with its exact projected A2.
    Partial(Rational),
}

/// An `N x m` design with per-column level counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    runs: usize,
    columns: Vec<Column>,
}

/// Coincidence counts between rows, stored as a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct Coincidences {
    n: usize,
    data: Vec<u32>,
}

impl Coincidences {
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Values over `i < j`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| self.get(i, j)))
    }

    /// `max - min` over `i < j`, or zero for fewer than two rows.
    pub fn spread(&self) -> u32 {
        let (mut lo, mut hi) = (u32::MAX, 0);
        for v in self.off_diagonal() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo == u32::MAX {
            0
        } else {
            hi - lo
        }
    }
}

impl Design {
    /// Builds a design and checks that it is balanced.
    pub fn new(runs: usize, columns: Vec<Column>) -> Result<Self> {
        let d = Self::new_allow_unbalanced(runs, columns)?;
        if let Some(i) = d.columns.iter().position(|c| !c.is_balanced()) {
            return Err(Error::UnbalancedDesign(i));
        }
        Ok(d)
    }

    /// Builds a design checking only shape and symbol ranges.
    pub fn new_allow_unbalanced(runs: usize, columns: Vec<Column>) -> Result<Self> {
        if runs > MAX_RUNS || columns.len() > MAX_COLUMNS {
            return Err(Error::TooLarge(format!(
                "{runs} runs x {} columns",
                columns.len()
            )));
        }
        for (i, c) in columns.iter().enumerate() {
            if c.data.len() != runs {
                return Err(Error::ShapeMismatch(format!(
                    "column {i} has {} entries, expected {runs}",
                    c.data.len()
                )));
            }
            if c.levels < 1 {
                return Err(Error::ShapeMismatch(format!("column {i} has zero levels")));
            }
            if let Some(&symbol) = c.data.iter().find(|&&x| x >= c.levels) {
                return Err(Error::SymbolOutOfRange {
                    column: i,
                    symbol,
                    levels: c.levels,
                });
            }
        }
        Ok(Design { runs, columns })
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &Column {
        &self.columns[i]
    }

    pub fn levels(&self) -> Vec<u16> {
        self.columns.iter().map(|c| c.levels).collect()
    }

    /// The shared level count, if every column has the same one.
    pub fn common_levels(&self) -> Option<u16> {
        let first = self.columns.first()?.levels;
        self.columns
            .iter()
            .all(|c| c.levels == first)
            .then_some(first)
    }

    pub fn symbol(&self, run: usize, col: usize) -> u16 {
        self.columns[col].data[run]
    }

    pub fn row(&self, run: usize) -> Vec<u16> {
        self.columns.iter().map(|c| c.data[run]).collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.columns.iter().all(Column::is_balanced)
    }

    pub fn ensure_balanced(&self) -> Result<()> {
        match self.columns.iter().position(|c| !c.is_balanced()) {
            Some(i) => Err(Error::UnbalancedDesign(i)),
            None => Ok(()),
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Design> {
        let mut cols = Vec::with_capacity(indices.len());
        for &i in indices {
            let c = self
                .columns
                .get(i)
                .ok_or_else(|| Error::OutOfRange(format!("column index {i}")))?;
            cols.push(c.clone());
        }
        Ok(Design {
            runs: self.runs,
            columns: cols,
        })
    }

    /// Drops the listed columns.
    pub fn remove_columns(&self, indices: &[usize]) -> Result<Design> {
        if let Some(&i) = indices.iter().find(|&&i| i >= self.columns.len()) {
            return Err(Error::OutOfRange(format!("column index {i}")));
        }
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|i| !indices.contains(i))
            .collect();
        self.select_columns(&keep)
    }

    /// Evaluates each label at every point of `F_s^n` (points in
    /// lexicographic order).
    pub fn realize(field: &Field, n: usize, labels: &[ColumnLabel]) -> Result<Design> {
        if labels.is_empty() {
            return Err(Error::OutOfRange("no labels to realize".into()));
        }
        if let Some(l) = labels.iter().find(|l| l.num_vars() != n) {
            return Err(Error::ShapeMismatch(format!(
                "label {l} is not in {n} variables"
            )));
        }
        let points = field.enumerate_points(n);
        let s = field.order() as u16;
        let columns = labels
            .iter()
            .map(|l| {
                let data = points.iter().map(|p| l.eval(field, p)).collect();
                Column::new(s, data).with_label(l.to_string())
            })
            .collect();
        Design::new(points.len(), columns)
    }

    pub fn column_juxtapose(parts: &[&Design]) -> Result<Design> {
        let first = parts
            .first()
            .ok_or_else(|| Error::ShapeMismatch("nothing to juxtapose".into()))?;
        let mut columns = Vec::new();
        for d in parts {
            if d.runs != first.runs {
                return Err(Error::ShapeMismatch(format!(
                    "run counts {} and {} differ",
                    first.runs, d.runs
                )));
            }
            columns.extend(d.columns.iter().cloned());
        }
        Design::new_allow_unbalanced(first.runs, columns)
    }

    pub fn row_juxtapose(parts: &[&Design]) -> Result<Design> {
        let first = parts
            .first()
            .ok_or_else(|| Error::ShapeMismatch("nothing to juxtapose".into()))?;
        let profile = first.levels();
        let mut columns = first.columns.clone();
        let mut runs = first.runs;
        for d in &parts[1..] {
            if d.levels() != profile {
                return Err(Error::ShapeMismatch("column level profiles differ".into()));
            }
            for (c, other) in columns.iter_mut().zip(&d.columns) {
                c.data.extend_from_slice(&other.data);
            }
            runs += d.runs;
        }
        Design::new_allow_unbalanced(runs, columns)
    }

    /// Keeps the runs whose symbol in `col` lies in `levels` (grouped in
    /// ascending level order, original run order inside each group) and
    /// removes `col`. The result must be balanced.
    pub fn branch(&self, col: usize, levels: &[u16]) -> Result<Design> {
        let c = self
            .columns
            .get(col)
            .ok_or_else(|| Error::OutOfRange(format!("column index {col}")))?;
        let mut g: Vec<u16> = levels.to_vec();
        g.sort_unstable();
        g.dedup();
        if g.is_empty() {
            return Err(Error::EmptyFraction);
        }
        if g.len() != levels.len() || g.iter().any(|&x| x >= c.levels) {
            return Err(Error::OutOfRange(format!("level subset {levels:?}")));
        }
        if g.len() >= c.levels as usize {
            return Err(Error::BadFractionCount {
                k: g.len(),
                s: u32::from(c.levels),
            });
        }
        let rows: Vec<usize> = g
            .iter()
            .flat_map(|&v| (0..self.runs).filter(move |&r| c.data[r] == v))
            .collect();
        if rows.is_empty() {
            return Err(Error::EmptyFraction);
        }
        let columns = self
            .columns
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != col)
            .map(|(_, c)| Column {
                levels: c.levels,
                data: rows.iter().map(|&r| c.data[r]).collect(),
                label: c.label.clone(),
            })
            .collect();
        Design::new(rows.len(), columns)
    }

    /// Realizes `labels`, then branches on `branch_label` keeping the level
    /// set `levels`.
    pub fn branch_fraction(
        field: &Field,
        n: usize,
        labels: &[ColumnLabel],
        branch_label: &ColumnLabel,
        levels: &[u16],
    ) -> Result<Design> {
        let col = labels
            .iter()
            .position(|l| l == branch_label)
            .ok_or_else(|| Error::NotAColumn(branch_label.to_string()))?;
        Design::realize(field, n, labels)?.branch(col, levels)
    }

    /// Replaces column `col` by the columns of `table`: a run with old symbol
    /// `v` receives row `v` of the table.
    pub fn replace_column(&self, col: usize, table: &Design) -> Result<Design> {
        let old = self
            .columns
            .get(col)
            .ok_or_else(|| Error::OutOfRange(format!("column index {col}")))?;
        if table.runs != old.levels as usize {
            return Err(Error::ShapeMismatch(format!(
                "table has {} rows, column has {} levels",
                table.runs, old.levels
            )));
        }
        if let Some(i) = table.columns.iter().position(|c| !c.is_balanced()) {
            return Err(Error::UnbalancedTable(i));
        }
        let base = old.label.clone().unwrap_or_else(|| format!("c{}", col + 1));
        let new_cols = table.columns.iter().enumerate().map(|(k, t)| Column {
            levels: t.levels,
            data: old.data.iter().map(|&v| t.data[v as usize]).collect(),
            label: Some(format!("{base}[{}]", k + 1)),
        });
        let mut columns = Vec::with_capacity(self.columns.len() + table.columns.len() - 1);
        columns.extend(self.columns[..col].iter().cloned());
        columns.extend(new_cols);
        columns.extend(self.columns[col + 1..].iter().cloned());
        Design::new_allow_unbalanced(self.runs, columns)
    }

    /// Applies [`Design::replace_column`] to several original column indices.
    pub fn replace_columns(&self, cols: &[usize], table: &Design) -> Result<Design> {
        let mut sorted = cols.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut d = self.clone();
        for &c in sorted.iter().rev() {
            d = d.replace_column(c, table)?;
        }
        Ok(d)
    }

    /// Whether every `t`-column projection contains each level combination
    /// equally often.
    pub fn is_oa(&self, t: usize) -> bool {
        if t == 0 {
            return true;
        }
        let m = self.columns.len();
        if t > m {
            return false;
        }
        let mut combo: Vec<usize> = (0..t).collect();
        loop {
            if !self.equireplicated(&combo) {
                return false;
            }
            if !next_combination(&mut combo, m) {
                return true;
            }
        }
    }

    fn equireplicated(&self, cols: &[usize]) -> bool {
        let cells: usize = cols
            .iter()
            .map(|&c| self.columns[c].levels as usize)
            .product();
        if cells == 0 || !self.runs.is_multiple_of(cells) {
            return false;
        }
        let mut counts = vec![0usize; cells];
        for r in 0..self.runs {
            let idx = cols.iter().fold(0usize, |acc, &c| {
                acc * self.columns[c].levels as usize + self.columns[c].data[r] as usize
            });
            counts[idx] += 1;
        }
        counts.iter().all(|&x| x == self.runs / cells)
    }

    /// Largest `t` for which the design is an orthogonal array of strength
    /// `t` (zero when some column is unbalanced).
    pub fn strength(&self) -> usize {
        let mut t = 0;
        while t < self.columns.len() && self.is_oa(t + 1) {
            t += 1;
        }
        t
    }

    /// Row coincidence counts `delta_ij`.
    pub fn coincidences(&self) -> Coincidences {
        self.coincidences_impl(false)
    }

    /// Coincidences weighted by level count: `sum_k s_k [x_ik = x_jk]`.
    pub fn weighted_coincidences(&self) -> Coincidences {
        self.coincidences_impl(true)
    }

    fn coincidences_impl(&self, weighted: bool) -> Coincidences {
        let n = self.runs;
        let mut data = vec![0u32; n * n];
        for c in &self.columns {
            let w = if weighted { u32::from(c.levels) } else { 1 };
            for i in 0..n {
                let xi = c.data[i];
                for j in (i + 1)..n {
                    if c.data[j] == xi {
                        data[i * n + j] += w;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                data[j * n + i] = data[i * n + j];
            }
        }
        Coincidences { n, data }
    }

    /// `s_i x s_j` cell counts of a column pair, row-major.
    pub fn pair_counts(&self, i: usize, j: usize) -> Vec<u32> {
        let (ci, cj) = (&self.columns[i], &self.columns[j]);
        let sj = cj.levels as usize;
        let mut counts = vec![0u32; ci.levels as usize * sj];
        for (&a, &b) in ci.data.iter().zip(&cj.data) {
            counts[a as usize * sj + b as usize] += 1;
        }
        counts
    }

    pub fn classify_pair(&self, i: usize, j: usize) -> PairClass {
        let (si, sj) = (self.columns[i].levels, self.columns[j].levels);
        let counts = self.pair_counts(i, j);
        let a2 = criteria::projected_a2_from_counts(self.runs, si, sj, &counts);
        if num_traits::Zero::is_zero(&a2) {
            return PairClass::Orthogonal;
        }
        if si != sj {
            return PairClass::Partial(a2);
        }
        let s = si as usize;
        let n = self.runs;
        let mut nonzero: Vec<usize> = counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| c as usize)
            .collect();
        nonzero.sort_unstable();
        if nonzero.len() == s && nonzero.iter().all(|&c| c * s == n) {
            return PairClass::FullyAliased;
        }
        if n.is_multiple_of(s * s) {
            let unit = n / (s * s);
            let semi = if s % 2 == 1 {
                let singles = nonzero.iter().filter(|&&c| c == unit).count();
                let doubles = nonzero.iter().filter(|&&c| c == 2 * unit).count();
                nonzero.len() == (s + 1) * s / 2 && singles == s && doubles == s * (s - 1) / 2
            } else {
                nonzero.len() == s * s / 2 && nonzero.iter().all(|&c| c == 2 * unit)
            };
            if semi {
                return PairClass::SemiOrthogonal;
            }
        }
        PairClass::Partial(a2)
    }

    /// Drops the later column of every fully aliased pair, scanning left to
    /// right and keeping the first column of each alias class.
    pub fn remove_fully_aliased(&self) -> Design {
        let mut seen: HashSet<(u16, Vec<u16>)> = HashSet::new();
        let columns = self
            .columns
            .iter()
            .filter(|c| seen.insert((c.levels, c.first_occurrence_form())))
            .cloned()
            .collect();
        Design {
            runs: self.runs,
            columns,
        }
    }

    /// Renders the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        let _ = writeln!(out, "{} {}", self.runs, self.columns.len());
        let levels: Vec<String> = self.columns.iter().map(|c| c.levels.to_string()).collect();
        out.push_str(&levels.join(" "));
        out.push('\n');
        for r in 0..self.runs {
            let row: Vec<String> = self.columns.iter().map(|c| c.data[r].to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format; unbalanced columns are rejected unless
    /// `allow_unbalanced`.
    pub fn from_text(text: &str, allow_unbalanced: bool) -> Result<Design> {
        let mut lines = text.lines().enumerate();
        let parse_err = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        match lines.next() {
            Some((_, l)) if l.trim_end() == HEADER => {}
            Some((i, _)) => return Err(parse_err(i, "missing '# ssd v1' header")),
            None => return Err(parse_err(0, "empty input")),
        }
        let (i, dims) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing 'N m' line"))?;
        let dims: Vec<usize> = dims
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(i, "bad integer")))
            .collect::<Result<_>>()?;
        let [runs, m] = dims[..] else {
            return Err(parse_err(i, "expected 'N m'"));
        };
        if runs > MAX_RUNS || m > MAX_COLUMNS {
            return Err(Error::TooLarge(format!("{runs} runs x {m} columns")));
        }
        let (i, lv) = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing levels line"))?;
        let levels: Vec<u16> = lv
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(i, "bad level count")))
            .collect::<Result<_>>()?;
        if levels.len() != m {
            return Err(parse_err(i, "level count list does not match m"));
        }
        let mut data = vec![Vec::with_capacity(runs); m];
        let mut seen = 0;
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if seen == runs {
                return Err(parse_err(i, "more rows than N"));
            }
            let row: Vec<u16> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(i, "bad symbol")))
                .collect::<Result<_>>()?;
            if row.len() != m {
                return Err(parse_err(i, "row length does not match m"));
            }
            for (col, x) in data.iter_mut().zip(row) {
                col.push(x);
            }
            seen += 1;
        }
        if seen != runs {
            return Err(parse_err(seen + 3, "fewer rows than N"));
        }
        let columns = levels
            .into_iter()
            .zip(data)
            .map(|(s, d)| Column::new(s, d))
            .collect();
        if allow_unbalanced {
            Design::new_allow_unbalanced(runs, columns)
        } else {
            Design::new(runs, columns)
        }
    }
}

/// Advances `combo` (strictly increasing indices below `m`) to the next
/// combination in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let t = combo.len();
    let mut i = t;
    while i > 0 {
        i -= 1;
        if combo[i] < m - t + i {
            combo[i] += 1;
            for k in (i + 1)..t {
                combo[k] = combo[k - 1] + 1;
            }
            return true;
        }
    }
    false
}
