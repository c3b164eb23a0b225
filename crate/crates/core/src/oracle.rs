//! Brute-force verifiers that share no code with the fast paths in
//! [`crate::criteria`]: cell tables, exhaustive minimum-A2 search, and the
//! wordlength pattern through explicit orthonormal contrasts.

use num_bigint::BigInt;

use crate::bounds;
use crate::design::{Column, Design};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default number of candidate-column evaluations for the exhaustive search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

/// The `s_i x s_j` table of level-pair counts of columns `i` and `j`.
pub fn pair_table(d: &Design, i: usize, j: usize) -> Vec<Vec<u32>> {
    let (a, b) = (d.column(i), d.column(j));
    let mut t = vec![vec![0u32; b.levels() as usize]; a.levels() as usize];
    for r in 0..d.runs() {
        t[d.symbol(r, i) as usize][d.symbol(r, j) as usize] += 1;
    }
    t
}

/// Projected A2 as the chi-square statistic of the table over `N`.
pub fn projected_a2_from_table(table: &[Vec<u32>], runs: usize) -> Rational {
    let cells = (table.len() * table[0].len()) as i64;
    let n = runs as i64;
    // chi2 = sum (n_ab - N/c)^2 / (N/c) = sum (c n_ab - N)^2 / (c N)
    let num: i64 = table
        .iter()
        .flatten()
        .map(|&x| (cells * i64::from(x) - n).pow(2))
        .sum();
    Rational::new(BigInt::from(num), BigInt::from(cells * n * n))
}

/// Outcome of [`exhaustive_min_a2`].
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_a2: Rational,
    pub design: Design,
    /// True when the search space was exhausted or the lower bound reached.
    pub exhaustive: bool,
    pub evaluations: u64,
    pub budget: u64,
}

/// Balanced columns in first-occurrence form: symbol `v` appears only after
/// `v - 1` has appeared.
pub fn canonical_balanced_columns(runs: usize, s: u16) -> Vec<Vec<u16>> {
    fn rec(
        buf: &mut Vec<u16>,
        counts: &mut [usize],
        used: u16,
        runs: usize,
        per: usize,
        out: &mut Vec<Vec<u16>>,
    ) {
        if buf.len() == runs {
            out.push(buf.clone());
            return;
        }
        let s = counts.len() as u16;
        let limit = used.min(s - 1);
        for v in 0..=limit {
            if counts[v as usize] == per {
                continue;
            }
            counts[v as usize] += 1;
            buf.push(v);
            rec(buf, counts, used.max(v + 1), runs, per, out);
            buf.pop();
            counts[v as usize] -= 1;
        }
    }
    let mut out = Vec::new();
    if s == 0 || !runs.is_multiple_of(s as usize) {
        return out;
    }
    let mut counts = vec![0; s as usize];
    rec(
        &mut Vec::new(),
        &mut counts,
        0,
        runs,
        runs / s as usize,
        &mut out,
    );
    out
}

struct Search<'a> {
    m: usize,
    /// `N^2 *` projected A2 between candidates.
    pair: Vec<Vec<i64>>,
    /// `N^2 *` projected A2 between the fixed column and each candidate.
    first: Vec<i64>,
    target: i64,
    best: i64,
    best_choice: Vec<usize>,
    chosen: Vec<usize>,
    evaluations: u64,
    budget: u64,
    stopped: bool,
    order: &'a [usize],
}

impl Search<'_> {
    fn run(&mut self, start: usize, partial: i64) {
        if self.stopped || self.best == self.target {
            return;
        }
        if self.chosen.len() + 1 == self.m {
            if partial < self.best {
                self.best = partial;
                self.best_choice = self.chosen.clone();
            }
            return;
        }
        for pos in start..self.order.len() {
            let c = self.order[pos];
            self.evaluations += 1;
            if self.evaluations > self.budget {
                self.stopped = true;
                return;
            }
            let add = self.first[c] + self.chosen.iter().map(|&o| self.pair[o][c]).sum::<i64>();
            let next = partial + add;
            if next >= self.best {
                continue;
            }
            self.chosen.push(c);
            self.run(pos, next);
            self.chosen.pop();
            if self.stopped || self.best == self.target {
                return;
            }
        }
    }
}

fn scaled_a2(x: &[u16], y: &[u16], s: usize) -> i64 {
    let mut t = vec![0i64; s * s];
    for (&a, &b) in x.iter().zip(y) {
        t[a as usize * s + b as usize] += 1;
    }
    let n = x.len() as i64;
    let ss = (s * s) as i64;
    ss * t.iter().map(|v| v * v).sum::<i64>() - n * n
}

/// Minimum overall A2 over balanced `N`-run, `m`-column, `s`-level designs.
///
/// The first column is fixed to `0..0 1..1 ...` (row permutations), the
/// others run over first-occurrence columns (level permutations) in
/// nondecreasing order (column permutations). Branches are cut once their
/// partial A2 reaches the incumbent, and the search stops at the
/// Theorem 1 bound.
pub fn exhaustive_min_a2(runs: usize, s: u16, m: usize, budget: u64) -> Result<SearchResult> {
    if s < 2 || runs == 0 || !runs.is_multiple_of(s as usize) || m == 0 {
        return Err(Error::OutOfRange(format!("N = {runs}, s = {s}, m = {m}")));
    }
    let cands = canonical_balanced_columns(runs, s);
    let per = runs / s as usize;
    let fixed: Vec<u16> = (0..runs).map(|r| (r / per) as u16).collect();
    let su = s as usize;
    let first: Vec<i64> = cands.iter().map(|c| scaled_a2(&fixed, c, su)).collect();
    let pair: Vec<Vec<i64>> = cands
        .iter()
        .map(|a| cands.iter().map(|b| scaled_a2(a, b, su)).collect())
        .collect();
    let lb = bounds::lb_theorem1(runs, m, u32::from(s))?;
    let n2 = BigInt::from((runs * runs) as i64);
    // smallest integer N^2 * A2 not below the bound
    let scaled_lb = (&lb * Rational::from_integer(n2.clone()))
        .ceil()
        .to_integer();
    let target = i64::try_from(scaled_lb).unwrap_or(0).max(0);
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by_key(|&c| first[c]);
    let mut search = Search {
        m,
        pair,
        first,
        target,
        best: i64::MAX,
        best_choice: Vec::new(),
        chosen: Vec::new(),
        evaluations: 0,
        budget,
        stopped: false,
        order: &order,
    };
    search.run(0, 0);
    let mut columns = vec![Column::new(s, fixed)];
    columns.extend(
        search
            .best_choice
            .iter()
            .map(|&c| Column::new(s, cands[c].clone())),
    );
    let design = Design::new(runs, columns)?;
    let best_a2 = if search.best == i64::MAX {
        return Err(Error::BudgetExceeded {
            needed: u128::from(budget) + 1,
            budget: u128::from(budget),
        });
    } else {
        Rational::new(BigInt::from(search.best), n2)
    };
    Ok(SearchResult {
        best_a2,
        design,
        exhaustive: !search.stopped,
        evaluations: search.evaluations,
        budget,
    })
}

/// Orthonormal contrasts for `s` levels: rows are contrasts, columns
/// levels, with `sum_levels c^2 = s` and each contrast orthogonal to the
/// constant. Built by Gram-Schmidt on the monomials `1, x, x^2, ...`.
pub fn contrast_basis(s: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(s);
    for deg in 0..s {
        let mut v: Vec<f64> = (0..s).map(|x| (x as f64).powi(deg as i32)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum::<f64>() / s as f64;
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm = (v.iter().map(|x| x * x).sum::<f64>() / s as f64).sqrt();
        for x in &mut v {
            *x /= norm;
        }
        basis.push(v);
    }
    basis.remove(0);
    basis
}

/// `A_j` through explicit real contrasts; limited to `N <= 32`, `m <= 8`.
pub fn gwlp_bruteforce(d: &Design, j: usize) -> Result<f64> {
    if d.runs() > 32 || d.num_columns() > 8 {
        return Err(Error::TooLarge(format!(
            "{} runs, {} columns",
            d.runs(),
            d.num_columns()
        )));
    }
    let m = d.num_columns();
    if j == 0 || j > m {
        return Ok(0.0);
    }
    let bases: Vec<Vec<Vec<f64>>> = d
        .columns()
        .iter()
        .map(|c| contrast_basis(c.levels() as usize))
        .collect();
    let mut total = 0.0;
    for subset in subsets(m, j) {
        let dims: Vec<usize> = subset.iter().map(|&c| bases[c].len()).collect();
        let mut idx = vec![0usize; j];
        loop {
            let mut sum = 0.0;
            for r in 0..d.runs() {
                let mut prod = 1.0;
                for (k, &c) in subset.iter().enumerate() {
                    prod *= bases[c][idx[k]][d.symbol(r, c) as usize];
                }
                sum += prod;
            }
            total += sum * sum;
            let mut k = 0;
            while k < j {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == j {
                break;
            }
        }
    }
    let n = d.runs() as f64;
    Ok(total / (n * n))
}

fn subsets(m: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..j).collect();
    loop {
        out.push(combo.clone());
        if !crate::design::next_combination(&mut combo, m) {
            break;
        }
    }
    out
}

/// One line of [`periodicity_spot_check`].
#[derive(Debug, Clone)]
pub struct PeriodicityRow {
    pub m: usize,
    pub a2_m: Rational,
    pub a2_m_plus_t: Rational,
    /// `m (s - 1)`.
    pub expected_gap: Rational,
    pub holds: bool,
    pub exhaustive: bool,
}

/// Compares `a2(m + t)` with `a2(m) + m(s-1)` for each `m`, where `t` is
/// the width of a saturated array with `N` runs. Report only.
pub fn periodicity_spot_check(
    runs: usize,
    s: u16,
    t: usize,
    ms: &[usize],
    budget: u64,
) -> Result<Vec<PeriodicityRow>> {
    ms.iter()
        .map(|&m| {
            let lo = exhaustive_min_a2(runs, s, m, budget)?;
            let hi = exhaustive_min_a2(runs, s, m + t, budget)?;
            let expected_gap = Rational::from_integer(BigInt::from((m * (s as usize - 1)) as i64));
            Ok(PeriodicityRow {
                m,
                holds: &hi.best_a2 - &lo.best_a2 == expected_gap,
                a2_m: lo.best_a2,
                a2_m_plus_t: hi.best_a2,
                expected_gap,
                exhaustive: lo.exhaustive && hi.exhaustive,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn tables() {
        let d = Design::new(
            9,
            vec![
                Column::new(3, vec![0, 0, 0, 1, 1, 1, 2, 2, 2]),
                Column::new(3, vec![0, 1, 2, 0, 1, 2, 0, 1, 2]),
                Column::new(3, vec![0, 0, 0, 1, 1, 1, 2, 2, 2]),
            ],
        )
        .unwrap();
        assert_eq!(pair_table(&d, 0, 1), vec![vec![1; 3]; 3]);
        assert_eq!(
            pair_table(&d, 0, 2),
            vec![vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]
        );
        assert_eq!(projected_a2_from_table(&pair_table(&d, 0, 2), 9), int(2));
    }

    #[test]
    fn candidate_counts() {
        // 6!/(2!^3 3!) and 9!/(3!^4)
        assert_eq!(canonical_balanced_columns(6, 3).len(), 15);
        assert_eq!(canonical_balanced_columns(9, 3).len(), 280);
        assert_eq!(canonical_balanced_columns(4, 2).len(), 3);
    }

    #[test]
    fn small_searches() {
        let r = exhaustive_min_a2(6, 3, 2, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.best_a2, rat(1, 2));
        let r = exhaustive_min_a2(6, 3, 1, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.best_a2, int(0));
        let r = exhaustive_min_a2(4, 2, 3, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.best_a2, int(0));
    }

    #[test]
    fn contrasts_orthonormal() {
        for s in 2..6 {
            let b = contrast_basis(s);
            assert_eq!(b.len(), s - 1);
            for (u, x) in b.iter().enumerate() {
                assert!(x.iter().sum::<f64>().abs() < 1e-12);
                for (v, y) in b.iter().enumerate() {
                    let dot: f64 = x.iter().zip(y).map(|(a, c)| a * c).sum();
                    let want = if u == v { s as f64 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn too_large() {
        let d = Design::new(
            64,
            vec![Column::new(2, (0..64).map(|r| (r % 2) as u16).collect())],
        )
        .unwrap();
        assert!(matches!(gwlp_bruteforce(&d, 1), Err(Error::TooLarge(_))));
    }
}
