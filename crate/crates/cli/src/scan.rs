//! Grid sweeps over `(b, c)` with CSV and SVG output.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use sobolev_core::{decide_embedding, format_rational, parse_rational, Case, EmbeddingParams, ParamError, Q};

/// `lo:hi:n`, `n >= 2` evenly spaced exact points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRange {
    pub lo: Q,
    pub hi: Q,
    pub n: usize,
}

impl GridRange {
    pub fn points(&self) -> Vec<Q> {
        let steps = Q::from_integer((self.n - 1).into());
        (0..self.n)
            .map(|i| &self.lo + (&self.hi - &self.lo) * Q::from_integer(i.into()) / &steps)
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("range '{s}' must have the form lo:hi:n"));
        };
        let lo = parse_rational(lo).map_err(|e| e.to_string())?;
        let hi = parse_rational(hi).map_err(|e| e.to_string())?;
        let n: usize = n.trim().parse().map_err(|_| format!("bad point count in '{s}'"))?;
        if n < 2 {
            return Err(format!("range '{s}' needs at least 2 points"));
        }
        if hi <= lo {
            return Err(format!("range '{s}' must have lo < hi"));
        }
        Ok(Self { lo, hi, n })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanCell {
    pub b: Q,
    pub c: Q,
    pub holds: bool,
    pub case: Option<Case>,
    pub theta: Option<Q>,
}

/// Decides every grid point, row-major in `b` then `c`.
pub fn scan(
    base: &EmbeddingParams,
    b_range: &GridRange,
    c_range: &GridRange,
    threads: usize,
) -> Result<Vec<ScanCell>, ParamError> {
    base.validate()?;
    let bs = b_range.points();
    let cs = c_range.points();
    let run = || {
        bs.par_iter()
            .map(|b| {
                cs.iter()
                    .map(|c| {
                        let params = EmbeddingParams {
                            b: b.clone(),
                            c: c.clone(),
                            ..base.clone()
                        };
                        let v = decide_embedding(&params)?;
                        Ok(ScanCell {
                            b: b.clone(),
                            c: c.clone(),
                            holds: v.holds,
                            case: v.case_label,
                            theta: v.inequality.map(|i| i.theta),
                        })
                    })
                    .collect::<Result<Vec<_>, ParamError>>()
            })
            .collect::<Result<Vec<_>, ParamError>>()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let rows = pool.install(run)?;
    Ok(rows.into_iter().flatten().collect())
}

pub const CSV_HEADER: &str = "b,c,holds,case,theta";

pub fn to_csv(cells: &[ScanCell]) -> String {
    let mut out = String::with_capacity(cells.len() * 24);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for cell in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_rational(&cell.b),
            format_rational(&cell.c),
            cell.holds,
            cell.case.map(|c| c.roman()).unwrap_or(""),
            cell.theta.as_ref().map(format_rational).unwrap_or_default()
        );
    }
    out
}

const CELL: usize = 6;
const PALETTE: [(&str, &str); 5] = [
    ("case i", "#1b9e77"),
    ("case ii", "#d95f02"),
    ("case iii", "#7570b3"),
    ("case iv", "#e7298a"),
    ("fails", "#d9d9d9"),
];

fn color(cell: &ScanCell) -> &'static str {
    match cell.case {
        Some(c) => PALETTE[c.index()].1,
        None => PALETTE[4].1,
    }
}

/// Flat raster: `b` increases to the right, `c` upwards.
pub fn to_svg(cells: &[ScanCell], nb: usize, nc: usize) -> String {
    let width = nb * CELL;
    let height = nc * CELL;
    let legend_h = 22 * PALETTE.len() + 10;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        width.max(160),
        height + legend_h,
        width.max(160),
        height + legend_h
    );
    for (i, cell) in cells.iter().enumerate() {
        let (ib, ic) = (i / nc, i % nc);
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
            ib * CELL,
            (nc - 1 - ic) * CELL,
            color(cell)
        );
    }
    for (k, (label, fill)) in PALETTE.iter().enumerate() {
        let y = height + 10 + 22 * k;
        let _ = writeln!(out, r#"<rect x="4" y="{y}" width="16" height="16" fill="{fill}"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="26" y="{}" font-family="sans-serif" font-size="13">{label}</text>"#,
            y + 13
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Thread count from `SOBOLEV_ORACLE_THREADS`; 0 or unset means all cores.
pub fn threads_from_env() -> usize {
    std::env::var("SOBOLEV_ORACLE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}
