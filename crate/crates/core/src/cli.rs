//! The `ssd` command line.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds;
use crate::constructions::{self, Recipe, Theorem};
use crate::criteria::{self, FieldSet};
use crate::design::Design;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::oracle;
use crate::poly_labels::{parse_label, ColumnLabel, LinearForm};
use crate::rational::{self, Rational};

#[derive(Parser, Debug)]
#[command(
    name = "ssd",
    version,
    about = "Construct and certify multi-level supersaturated designs"
)]
struct Cli {
    /// Field modulus override `S=c0,c1,...,1` (constant term first, monic).
    #[arg(long, global = true, value_name = "S=COEFFS")]
    modulus: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a design from a construction recipe.
    Construct {
        #[command(flatten)]
        recipe: RecipeArgs,
        /// Output file (`-` for standard output).
        #[arg(long, default_value = "-")]
        out: PathBuf,
        /// Print the column labels to standard error.
        #[arg(long)]
        show_labels: bool,
    },
    /// Report every criterion and bound for a design file.
    Evaluate {
        file: PathBuf,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
        /// One-based columns to drop before evaluating.
        #[arg(long, value_delimiter = ',')]
        remove: Vec<usize>,
        /// Highest wordlength to compute.
        #[arg(long, default_value_t = criteria::DEFAULT_GWLP_JMAX)]
        jmax: usize,
        /// Work cap for the wordlength pattern.
        #[arg(long, default_value_t = criteria::DEFAULT_GWLP_BUDGET)]
        gwlp_budget: u128,
        #[arg(long)]
        allow_unbalanced: bool,
    },
    /// Print the lower bounds for a design shape.
    Bound {
        #[arg(long = "N")]
        runs: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        s: Option<u32>,
        /// Mixed-level profile, one entry per column.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u16>,
    },
    /// Keep the runs whose symbol in a column lies in a level set.
    Branch {
        file: PathBuf,
        /// One-based branching column.
        #[arg(long)]
        column: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<u16>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Replace columns by the rows of a smaller array.
    Replace {
        file: PathBuf,
        /// One-based columns to replace.
        #[arg(long, value_delimiter = ',', required = true)]
        columns: Vec<usize>,
        /// Replacement array file; defaults to the saturated array over the
        /// prime subfield.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Brute-force verifiers.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Rebuild and check every catalog design.
    VerifyCatalog {
        /// Also print the ave(f)/max(f) comparison rows.
        #[arg(long)]
        f_table: bool,
    },
    /// Write a bundled or constructed design in the text format.
    Export {
        /// Bundled appendix table (6, 7 or 8).
        #[arg(long, conflicts_with = "theorem")]
        appendix: Option<u8>,
        #[command(flatten)]
        recipe: OptionalRecipeArgs,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Exhaustive minimum overall A2 for tiny shapes.
    MinA2 {
        #[arg(long = "N")]
        runs: usize,
        #[arg(long)]
        s: u16,
        #[arg(long)]
        m: usize,
        /// Candidate-column evaluations; defaults to `SSD_BUDGET` or 1e8.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the best design found here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RecipeArgs {
    /// 4-9, s4-dealias, example3 or corollary2.
    #[arg(long)]
    theorem: String,
    #[command(flatten)]
    rest: RecipeParams,
}

#[derive(Args, Debug)]
struct OptionalRecipeArgs {
    #[arg(long)]
    theorem: Option<String>,
    #[command(flatten)]
    rest: RecipeParams,
}

#[derive(Args, Debug)]
struct RecipeParams {
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Branching column label, e.g. `X1^2+X2`.
    #[arg(long)]
    branch: Option<String>,
    /// Kept level set for branching constructions.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<u16>,
    /// Linear forms to juxtapose, separated by `;`.
    #[arg(long)]
    hs: Option<String>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::OutOfRange(msg.into())
}

fn parse_moduli(specs: &[String]) -> Result<FieldSet> {
    let mut set = FieldSet::new();
    for spec in specs {
        let (s, coeffs) = spec
            .split_once('=')
            .ok_or_else(|| usage(format!("bad --modulus {spec:?}, expected S=c0,c1,...")))?;
        let s: u32 = s
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad order in {spec:?}")))?;
        let coeffs: Vec<u16> = coeffs
            .split(',')
            .map(|c| {
                c.trim()
                    .parse()
                    .map_err(|_| usage(format!("bad coefficient in {spec:?}")))
            })
            .collect::<Result<_>>()?;
        set = set.with(Field::with_modulus(s, &coeffs)?);
    }
    Ok(set)
}

fn field_for(fields: &FieldSet, s: u32) -> Result<Field> {
    let levels = u16::try_from(s).map_err(|_| Error::UnsupportedOrder(s))?;
    match fields.get(levels) {
        Ok(f) => Ok(f.into_owned()),
        Err(_) => Field::new(s),
    }
}

fn build_recipe(theorem: &str, p: &RecipeParams) -> Result<Recipe> {
    let theorem: Theorem = theorem.parse()?;
    let s = p.s.ok_or_else(|| usage("--s is required"))?;
    let n = match (p.n, theorem) {
        (Some(n), _) => n,
        (None, Theorem::Corollary2) => 2,
        (None, _) => return Err(usage("--n is required")),
    };
    let mut r = Recipe::new(theorem, s, n);
    if let Some(k) = p.k {
        r = r.with_k(k);
    }
    if !p.levels.is_empty() {
        r = r.with_levels(p.levels.clone());
    }
    if let Some(b) = &p.branch {
        r = r.with_branch(parse_label(b, s, n)?);
    }
    if let Some(hs) = &p.hs {
        let forms = hs
            .split(';')
            .map(|t| match parse_label(t.trim(), s, n)? {
                ColumnLabel::Linear(l) => Ok(l),
                other => Err(Error::NotCanonical(other.to_string())),
            })
            .collect::<Result<Vec<LinearForm>>>()?;
        r = r.with_hs(forms);
    }
    Ok(r)
}

fn read_design(path: &Path, allow_unbalanced: bool) -> Result<Design> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Design::from_text(&text, allow_unbalanced)
}

fn write_output(path: &Path, text: &str, out: &mut dyn Write) -> Result<()> {
    if path.as_os_str() == "-" {
        out.write_all(text.as_bytes())
            .map_err(|e| usage(format!("write failed: {e}")))
    } else {
        std::fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
    }
}

fn one_based(cols: &[usize], m: usize) -> Result<Vec<usize>> {
    cols.iter()
        .map(|&c| {
            if c == 0 || c > m {
                Err(usage(format!("column {c} out of range 1..={m}")))
            } else {
                Ok(c - 1)
            }
        })
        .collect()
}

fn budget_from_env() -> u64 {
    std::env::var("SSD_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(oracle::DEFAULT_SEARCH_BUDGET)
}

/// Runs the CLI; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let fields = parse_moduli(&cli.modulus)?;
    let w = |out: &mut dyn Write, s: String| {
        out.write_all(s.as_bytes())
            .map_err(|e| usage(format!("write failed: {e}")))
    };
    match cli.command {
        Command::Construct {
            recipe,
            out: path,
            show_labels,
        } => {
            let r = build_recipe(&recipe.theorem, &recipe.rest)?;
            let d = r.build_with(&field_for(&fields, r.s)?)?;
            if show_labels {
                for (i, c) in d.columns().iter().enumerate() {
                    w(err, format!("{:>4} {}\n", i + 1, c.label().unwrap_or("")))?;
                }
            }
            write_output(&path, &d.to_text(), out)?;
            Ok(true)
        }
        Command::Evaluate {
            file,
            json,
            remove,
            jmax,
            gwlp_budget,
            allow_unbalanced,
        } => {
            let mut d = read_design(&file, allow_unbalanced)?;
            if !remove.is_empty() {
                d = d.remove_columns(&one_based(&remove, d.num_columns())?)?;
            }
            let report = criteria::aggregate_stats_with(&d, jmax, gwlp_budget, &fields)?;
            let b = bounds::certify(&d)?;
            match json {
                Some(path) => {
                    let mut text = serde_json::to_string_pretty(&report.to_json(&b))
                        .map_err(|e| usage(e.to_string()))?;
                    text.push('\n');
                    write_output(&path, &text, out)?;
                    if path.as_os_str() != "-" {
                        w(out, report.to_text(&b))?;
                    }
                }
                None => w(out, report.to_text(&b))?,
            }
            Ok(true)
        }
        Command::Bound { runs, m, s, levels } => {
            if !levels.is_empty() {
                let t10 = bounds::lb_theorem10(runs, &levels)?;
                w(out, format!("theorem10 = {}\n", rational::display(&t10)))?;
                return Ok(true);
            }
            let m = m.ok_or_else(|| usage("--m is required without --levels"))?;
            let s = s.ok_or_else(|| usage("--s is required without --levels"))?;
            let t1 = bounds::lb_theorem1(runs, m, s)?;
            let l2 = bounds::lb_lemma2(runs, m, s)?;
            let level = u16::try_from(s).map_err(|_| usage("s too large"))?;
            let t10 = bounds::lb_theorem10(runs, &vec![level; m])?;
            let zero = Rational::default();
            let clamp = |v: &Rational| if *v < zero { zero.clone() } else { v.clone() };
            let mut text = format!(
                "theorem1 = {}\nlemma2 = {}\ntheorem10 = {}\neta = {}\n",
                rational::display(&clamp(&t1)),
                rational::display(&clamp(&l2)),
                rational::display(&clamp(&t10)),
                rational::display(&bounds::eta(runs, m, s)),
            );
            if s == 2 && m >= 2 {
                let (es2, sup) = bounds::lb_es2(runs, m)?;
                text.push_str(&format!("es2 = {}", rational::display(&es2)));
                text.push_str(if sup { "\n" } else { " (not supersaturated)\n" });
            }
            w(out, text)?;
            Ok(true)
        }
        Command::Branch {
            file,
            column,
            levels,
            out: path,
        } => {
            let d = read_design(&file, false)?;
            let col = one_based(&[column], d.num_columns())?[0];
            write_output(&path, &d.branch(col, &levels)?.to_text(), out)?;
            Ok(true)
        }
        Command::Replace {
            file,
            columns,
            table,
            out: path,
        } => {
            let d = read_design(&file, false)?;
            let cols = one_based(&columns, d.num_columns())?;
            let table = match table {
                Some(t) => read_design(&t, false)?,
                None => {
                    let s = d.column(cols[0]).levels();
                    if cols.iter().any(|&c| d.column(c).levels() != s) {
                        return Err(usage("replaced columns must share a level count"));
                    }
                    constructions::replacement_table(u32::from(s))?
                }
            };
            write_output(&path, &d.replace_columns(&cols, &table)?.to_text(), out)?;
            Ok(true)
        }
        Command::Oracle {
            command:
                OracleCommand::MinA2 {
                    runs,
                    s,
                    m,
                    budget,
                    out: path,
                },
        } => {
            let budget = budget.unwrap_or_else(budget_from_env);
            let r = oracle::exhaustive_min_a2(runs, s, m, budget)?;
            let lb = bounds::lb_theorem1(runs, m, u32::from(s))?;
            w(
                out,
                format!(
                    "min A2 = {}\ntheorem1 = {}\nexhaustive = {}\nevaluations = {}\n",
                    rational::display(&r.best_a2),
                    rational::display(&lb),
                    r.exhaustive,
                    r.evaluations
                ),
            )?;
            if let Some(p) = path {
                write_output(&p, &r.design.to_text(), out)?;
            }
            Ok(r.exhaustive)
        }
        Command::VerifyCatalog { f_table } => verify_catalog(out, f_table),
        Command::Export {
            appendix,
            recipe,
            out: path,
        } => {
            let d = match (appendix, &recipe.theorem) {
                (Some(t), _) => constructions::appendix_table(t)?,
                (None, Some(th)) => {
                    let r = build_recipe(th, &recipe.rest)?;
                    r.build_with(&field_for(&fields, r.s)?)?
                }
                (None, None) => return Err(usage("export needs --appendix or --theorem")),
            };
            write_output(&path, &d.to_text(), out)?;
            Ok(true)
        }
    }
}

fn verify_catalog(out: &mut dyn Write, f_table: bool) -> Result<bool> {
    let mut lines = Vec::new();
    let mut ok = true;
    let rows = constructions::catalog_verify();
    for r in &rows {
        if r.passed() {
            lines.push(format!(
                "ok   {}: A2 = {}",
                r.name,
                rational::display(&r.a2)
            ));
        } else {
            ok = false;
            for f in &r.failures {
                lines.push(format!("FAIL {f}"));
            }
        }
    }
    for c in constructions::appendix_checks() {
        let name = if c.removed.is_empty() {
            format!("appendix table {}", c.table)
        } else {
            format!("appendix table {} without columns {:?}", c.table, c.removed)
        };
        let d = constructions::appendix_table(c.table)?;
        let removed: Vec<usize> = c.removed.iter().map(|x| x - 1).collect();
        let d = d.remove_columns(&removed)?;
        let a2 = criteria::a2_overall(&d)?;
        let hist = constructions::full_histogram(&d);
        if a2 == c.a2 && hist == c.histogram {
            lines.push(format!("ok   {name}: A2 = {}", rational::display(&a2)));
        } else {
            ok = false;
            lines.push(format!(
                "FAIL {name}: A2 = {}, histogram {}",
                rational::display(&a2),
                constructions::format_histogram(&hist)
            ));
        }
    }
    if f_table {
        for row in constructions::f_table() {
            let d = row.design()?;
            let (ave, max) = constructions::f_stats(&d);
            let got = rational::round_decimal(&ave, 2);
            let matches = got == row.ave_f && max == Rational::from_integer(row.max_f.into());
            let tag = match (row.hard, matches) {
                (true, true) => "ok  ",
                (true, false) => {
                    ok = false;
                    "FAIL"
                }
                (false, true) => "soft",
                (false, false) => "soft*",
            };
            lines.push(format!(
                "{tag} f-table {}/{} {}: ave(f) = {got} (printed {}), max(f) = {} (printed {})",
                row.runs,
                row.m,
                row.theorem,
                row.ave_f,
                rational::display(&max),
                row.max_f
            ));
        }
    }
    let passed = rows.iter().filter(|r| r.passed()).count();
    lines.push(format!("{passed}/{} catalog rows verified", rows.len()));
    let mut text = lines.join("\n");
    text.push('\n');
    out.write_all(text.as_bytes())
        .map_err(|e| usage(format!("write failed: {e}")))?;
    Ok(ok)
}
