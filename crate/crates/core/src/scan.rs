//! Parameter sweeps over state families and threshold bisection.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::criteria::{classify_selected, CriterionId, CriterionOptions};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::qstate::{FamilyKind, FamilySpec};
use crate::tol;

/// Closed, endpoint-inclusive, linearly spaced range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamRange {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl ParamRange {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, count: usize) -> Result<Self> {
        let r = Self {
            name: name.into(),
            lo,
            hi,
            count,
        };
        r.check()?;
        Ok(r)
    }

    fn check(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(Error::Grid(format!(
                "{}: need finite lo <= hi, got {}:{}",
                self.name, self.lo, self.hi
            )));
        }
        if self.count < 2 {
            return Err(Error::Grid(format!("{}: count must be at least 2", self.name)));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * k as f64 / (self.count - 1) as f64
    }

    /// Parses `name=lo:hi:count`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Grid(format!("expected name=lo:hi:count, got `{s}`"));
        let (name, rest) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(bad());
        };
        let lo = parse_number(lo).map_err(|_| bad())?;
        let hi = parse_number(hi).map_err(|_| bad())?;
        let count = count.trim().parse::<usize>().map_err(|_| bad())?;
        Self::new(name.trim(), lo, hi, count)
    }
}

/// Parses a float, also accepting `pi`, `pi/k` and `k*pi` forms.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let err = || Error::Parse(format!("cannot parse number `{s}`"));
    let pi = std::f64::consts::PI;
    let lower = s.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix("pi") {
        if rest.is_empty() {
            return Ok(pi);
        }
        if let Some(d) = rest.strip_prefix('/') {
            return Ok(pi / d.parse::<f64>().map_err(|_| err())?);
        }
        return Err(err());
    }
    if let Some(k) = lower.strip_suffix("*pi") {
        return Ok(k.parse::<f64>().map_err(|_| err())? * pi);
    }
    s.parse::<f64>().map_err(|_| err())
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GridSpec {
    pub ranges: Vec<ParamRange>,
    /// `(target, source)`: target takes the value of another parameter.
    pub aliases: Vec<(String, String)>,
    pub fixed: Vec<(String, f64)>,
    pub criteria: Vec<CriterionId>,
}

impl GridSpec {
    pub fn point_count(&self) -> u128 {
        self.ranges.iter().map(|r| r.count as u128).product()
    }
}

#[derive(Clone, Copy, Debug)]
enum Source {
    Range(usize),
    Alias(usize),
    Fixed(f64),
}

/// Maps each family parameter (canonical order) to where its value comes from.
fn resolve(kind: FamilyKind, grid: &GridSpec) -> Result<Vec<Source>> {
    if grid.criteria.is_empty() {
        return Err(Error::Grid("no criteria selected".into()));
    }
    if grid.ranges.is_empty() {
        return Err(Error::Grid("no ranges given".into()));
    }
    for r in &grid.ranges {
        r.check()?;
    }
    let n = grid.point_count();
    if n > tol::MAX_GRID_POINTS {
        return Err(Error::OversizeGrid(n));
    }

    let names = kind.param_names();
    let mut sources: Vec<Option<Source>> = vec![None; names.len()];
    let mut assign = |name: &str, src: Source| -> Result<()> {
        let i = kind.param_index(name)?;
        if sources[i].is_some() {
            return Err(Error::Grid(format!("parameter `{name}` bound more than once")));
        }
        sources[i] = Some(src);
        Ok(())
    };
    for (k, r) in grid.ranges.iter().enumerate() {
        assign(&r.name, Source::Range(k))?;
    }
    for (name, v) in &grid.fixed {
        assign(name, Source::Fixed(*v))?;
    }
    for (target, source) in &grid.aliases {
        let src = kind.param_index(source)?;
        assign(target, Source::Alias(src))?;
    }
    let mut out = Vec::with_capacity(names.len());
    for (i, s) in sources.iter().enumerate() {
        match s {
            Some(Source::Alias(j)) => match sources[*j] {
                Some(Source::Range(k)) => out.push(Source::Range(k)),
                Some(Source::Fixed(v)) => out.push(Source::Fixed(v)),
                _ => {
                    return Err(Error::Grid(format!(
                        "`{}` aliases `{}`, which is not a range or fixed value",
                        names[i], names[*j]
                    )))
                }
            },
            Some(s) => out.push(*s),
            None => return Err(Error::MissingParameter(names[i].to_string())),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionCell {
    pub criterion: CriterionId,
    pub statistic: f64,
    pub steerable: bool,
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    /// Lexicographic grid index, first range varying slowest.
    pub index: usize,
    /// Family parameters in canonical order.
    pub params: Vec<f64>,
    /// `None` marks an unphysical grid point.
    pub cells: Option<Vec<CriterionCell>>,
}

impl ScanRow {
    pub fn is_physical(&self) -> bool {
        self.cells.is_some()
    }

    pub fn steerable(&self, id: CriterionId) -> bool {
        self.cells
            .iter()
            .flatten()
            .any(|c| c.criterion == id && c.steerable)
    }
}

/// Evaluates `grid` over `kind`. Rows come back in grid order whatever the
/// execution strategy.
pub fn sweep(
    kind: FamilyKind,
    grid: &GridSpec,
    opts: &CriterionOptions,
    exec: Execution,
) -> Result<Vec<ScanRow>> {
    let sources = resolve(kind, grid)?;
    let total = grid.point_count() as usize;
    let counts: Vec<usize> = grid.ranges.iter().map(|r| r.count).collect();
    let mut criteria = grid.criteria.clone();
    criteria.sort();
    criteria.dedup();

    let rows = map_indexed(total, exec, |index| -> Result<ScanRow> {
        let mut digits = vec![0usize; counts.len()];
        let mut rem = index;
        for (d, &c) in digits.iter_mut().zip(&counts).rev() {
            *d = rem % c;
            rem /= c;
        }
        let params: Vec<f64> = sources
            .iter()
            .map(|s| match *s {
                Source::Range(k) => grid.ranges[k].value(digits[k]),
                Source::Fixed(v) => v,
                Source::Alias(_) => unreachable!("aliases resolved"),
            })
            .collect();
        let cells = match kind.spec(&params).build() {
            Ok(rho) => Some(
                classify_selected(&rho, &criteria, opts)?
                    .into_iter()
                    .map(|r| CriterionCell {
                        criterion: r.criterion,
                        statistic: r.statistic,
                        steerable: r.steerable,
                        applicable: r.applicable,
                    })
                    .collect(),
            ),
            Err(Error::Unphysical(_) | Error::ParameterOutOfRange { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(ScanRow {
            index,
            params,
            cells,
        })
    });
    rows.into_iter().collect()
}

/// Detection counts per criterion over physical rows.
pub fn detection_counts(rows: &[ScanRow]) -> BTreeMap<CriterionId, usize> {
    let mut counts = BTreeMap::new();
    for cell in rows.iter().filter_map(|r| r.cells.as_ref()).flatten() {
        *counts.entry(cell.criterion).or_insert(0) += usize::from(cell.steerable);
    }
    counts
}

/// Formats `x` rounded to `digits` significant digits, shortest form.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses");
    format!("{rounded}")
}

pub fn write_csv<W: Write>(out: &mut W, kind: FamilyKind, rows: &[ScanRow]) -> Result<()> {
    let criteria: Vec<CriterionId> = rows
        .iter()
        .find_map(|r| r.cells.as_ref())
        .map(|cells| cells.iter().map(|c| c.criterion).collect())
        .unwrap_or_default();
    let mut header: Vec<String> = vec!["idx".into()];
    header.extend(kind.param_names().iter().map(|s| s.to_string()));
    for c in &criteria {
        let n = c.name().to_ascii_lowercase();
        header.push(format!("{n}_stat"));
        header.push(format!("{n}_steerable"));
        header.push(format!("{n}_applicable"));
    }
    header.push("unphysical".into());
    writeln!(out, "{}", header.join(","))?;

    let mut line = String::new();
    for row in rows {
        line.clear();
        line.push_str(&row.index.to_string());
        for p in &row.params {
            line.push(',');
            line.push_str(&format_sig(*p, 12));
        }
        match &row.cells {
            Some(cells) => {
                for c in cells {
                    line.push(',');
                    line.push_str(&format_sig(c.statistic, 12));
                    line.push_str(if c.steerable { ",1" } else { ",0" });
                    line.push_str(if c.applicable { ",1" } else { ",0" });
                }
                line.push_str(",0");
            }
            None => {
                for _ in 0..criteria.len() * 3 {
                    line.push(',');
                }
                line.push_str(",1");
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// One-parameter slice of a family for threshold search.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdQuery {
    pub family: FamilyKind,
    pub vary: String,
    pub fixed: Vec<(String, f64)>,
    pub criterion: CriterionId,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl ThresholdQuery {
    pub fn new(family: FamilyKind, vary: &str, criterion: CriterionId, lo: f64, hi: f64) -> Self {
        Self {
            family,
            vary: vary.to_string(),
            fixed: Vec::new(),
            criterion,
            lo,
            hi,
            tol: tol::THRESHOLD,
        }
    }

    pub fn with_fixed(mut self, name: &str, value: f64) -> Self {
        self.fixed.push((name.to_string(), value));
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn spec_at(&self, value: f64) -> Result<FamilySpec> {
        let mut pairs = self.fixed.clone();
        pairs.push((self.vary.clone(), value));
        self.family.spec_from_pairs(&pairs)
    }
}

/// Bisects for the parameter value where the criterion's verdict flips.
/// Assumes a single flip between the endpoints.
pub fn find_threshold(query: &ThresholdQuery, opts: &CriterionOptions) -> Result<f64> {
    if !(query.tol > 0.0) {
        return Err(Error::Parse(format!("tolerance must be positive, got {}", query.tol)));
    }
    query.family.param_index(&query.vary)?;
    if query.fixed.iter().any(|(n, _)| *n == query.vary) {
        return Err(Error::Grid(format!("`{}` is both varied and fixed", query.vary)));
    }
    let verdict = |v: f64| -> Result<bool> {
        let rho = match query.spec_at(v)?.build() {
            Ok(rho) => rho,
            Err(Error::Unphysical(_) | Error::ParameterOutOfRange { .. }) => {
                return Err(Error::UnphysicalEndpoint {
                    name: query.vary.clone(),
                    value: v,
                })
            }
            Err(e) => return Err(e),
        };
        Ok(query.criterion.evaluate(&rho, opts)?.steerable)
    };
    let (mut a, mut b) = (query.lo, query.hi);
    let va = verdict(a)?;
    let vb = verdict(b)?;
    if va == vb {
        return Err(Error::NoSignChange { lo: a, hi: b });
    }
    // Bracket well below tol so printed digits are stable at the requested
    // accuracy; the iteration cap only matters for tol near machine epsilon.
    let width = query.tol / 1024.0;
    for _ in 0..200 {
        if (b - a).abs() <= width {
            break;
        }
        let mid = 0.5 * (a + b);
        if verdict(mid)? == va {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
