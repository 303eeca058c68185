//! Grid sweeps over `(a², y²)` for the built-in family, evaluated in
//! parallel and emitted in a fixed order.

use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use wshift_core::hyponormality::{expected_threshold, is_k_hyponormal};
use wshift_core::moments::MomentKey;
use wshift_core::shifts::family_figure2;
use wshift_core::{Mode, Scalar};

use crate::config::{parse_literal, Output, RunConfig};

pub const CSV_HEADER: &str = "a2,y2,k,verdict,witness_u,expected,agree";

/// Parses `lo:hi:n` (n evenly spaced points, both ends included) or a
/// comma-separated list. The result is sorted and deduplicated.
pub fn parse_grid(s: &str, mode: Mode) -> Result<Vec<Scalar>, String> {
    let lit = |t: &str| parse_literal(t, mode).map_err(|e| e.to_string());
    let mut out = match s.split(':').collect::<Vec<_>>().as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (lit(lo)?, lit(hi)?);
            let n: i64 = n.trim().parse().map_err(|_| format!("grid count `{}` is not an integer", n))?;
            if n < 1 {
                return Err(format!("grid count must be at least 1, got {}", n));
            }
            if n == 1 {
                vec![lo]
            } else {
                let step = (&hi - &lo) / Scalar::int(n - 1).in_mode(mode).map_err(|e| e.to_string())?;
                (0..n).map(|i| &lo + &(Scalar::int(i) * &step)).collect()
            }
        }
        [_] => s.split(',').map(lit).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("grid `{}` is neither `lo:hi:n` nor a comma list", s)),
    };
    if out.is_empty() {
        return Err("empty grid".to_string());
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    out.dedup();
    Ok(out)
}

/// Parses a comma list of positive integers, sorted and deduplicated.
pub fn parse_k_list(s: &str) -> Result<Vec<u32>, String> {
    let mut ks = s
        .split(',')
        .map(|t| match t.trim().parse::<u32>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(format!("`{}` is not a degree k >= 1", t.trim())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    ks.sort_unstable();
    ks.dedup();
    Ok(ks)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub a2: String,
    pub y2: String,
    pub k: u32,
    pub verdict: &'static str,
    /// First failing lattice point, written `(u1;u2)`.
    pub witness_u: Option<String>,
    pub expected: Option<&'static str>,
    pub agree: bool,
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

pub fn format_witness(u: MomentKey) -> String {
    format!("({};{})", u.k1, u.k2)
}

fn point_rows(a2: &Scalar, y2: &Scalar, ks: &[u32], cfg: &RunConfig) -> Result<Vec<SweepRow>, String> {
    let f = family_figure2(a2, y2).map_err(|e| format!("a2={} y2={}: {}", a2, y2, e))?;
    ks.iter()
        .map(|&k| {
            let v = is_k_hyponormal(&f, k, cfg.u_bound, cfg.mode, cfg.tol).map_err(|e| e.to_string())?;
            let expected = expected_threshold(a2, k).ok().map(|t| *y2 <= t);
            Ok(SweepRow {
                a2: a2.to_string(),
                y2: y2.to_string(),
                k,
                verdict: pass_fail(v.holds),
                witness_u: v.witness_u.map(format_witness),
                expected: expected.map(pass_fail),
                agree: expected.is_none_or(|e| e == v.holds),
            })
        })
        .collect()
}

/// One row per `(a², y², k)`, ordered by `a²`, then `y²`, then `k`,
/// independent of the thread count.
pub fn run_sweep(a2s: &[Scalar], y2s: &[Scalar], ks: &[u32], cfg: &RunConfig) -> Result<Vec<SweepRow>, String> {
    if a2s.is_empty() || y2s.is_empty() || ks.is_empty() {
        return Err("sweep needs nonempty a2, y2 and k lists".to_string());
    }
    let points: Vec<(&Scalar, &Scalar)> = a2s.iter().flat_map(|a| y2s.iter().map(move |y| (a, y))).collect();
    let chunks = cfg
        .install(|| {
            points
                .par_iter()
                .map(|(a2, y2)| point_rows(a2, y2, ks, cfg))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(|e| e.to_string())??;
    Ok(chunks.into_iter().flatten().collect())
}

pub fn write_rows<W: Write>(rows: &[SweepRow], output: Output, mut w: W) -> std::io::Result<()> {
    match output {
        Output::Csv => {
            writeln!(w, "{}", CSV_HEADER)?;
            let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
            for row in rows {
                csv.serialize(row)?;
            }
            csv.flush()
        }
        Output::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)
        }
        Output::Pretty => {
            writeln!(w, "{:>12} {:>12} {:>3} {:>7} {:>9} {:>8} {:>5}", "a2", "y2", "k", "verdict", "witness", "expected", "agree")?;
            for r in rows {
                writeln!(
                    w,
                    "{:>12} {:>12} {:>3} {:>7} {:>9} {:>8} {:>5}",
                    r.a2,
                    r.y2,
                    r.k,
                    r.verdict,
                    r.witness_u.as_deref().unwrap_or("-"),
                    r.expected.unwrap_or("-"),
                    r.agree
                )?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:5", Mode::Exact).unwrap(), vec![r(0, 1), r(1, 4), r(1, 2), r(3, 4), r(1, 1)]);
        assert_eq!(parse_grid("2/3, 1/2,2/3", Mode::Exact).unwrap(), vec![r(1, 2), r(2, 3)]);
        assert_eq!(parse_grid("0.5", Mode::Exact).unwrap(), vec![r(1, 2)]);
        assert_eq!(parse_grid("1/4:1/2:1", Mode::Exact).unwrap(), vec![r(1, 4)]);
        assert!(parse_grid("0:1:0", Mode::Exact).is_err());
        assert!(parse_grid("0:1", Mode::Exact).is_err());
        assert_eq!(parse_k_list("3,1,2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_k_list("0").is_err());
    }

    #[test]
    fn csv_rows() {
        let cfg = RunConfig {
            u_bound: 2,
            ..Default::default()
        };
        let rows = run_sweep(&[r(1, 2)], &[r(2, 3), r(7, 10)], &[1, 2], &cfg).unwrap();
        let mut buf = Vec::new();
        write_rows(&rows, Output::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "a2,y2,k,verdict,witness_u,expected,agree\n\
             1/2,2/3,1,pass,,pass,true\n\
             1/2,2/3,2,pass,,pass,true\n\
             1/2,7/10,1,pass,,pass,true\n\
             1/2,7/10,2,fail,(0;0),fail,true\n"
        );
    }
}
