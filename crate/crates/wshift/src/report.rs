//! Rendering for `classify` and `threshold`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use wshift_core::hyponormality::{bisect_threshold, closed_form, ClosedForm};
use wshift_core::shifts::family_figure2;
use wshift_core::Scalar;

use crate::config::{Output, RunConfig};
use crate::sweep::{run_sweep, write_rows, SweepRow};

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub a2: String,
    pub y2: String,
    pub u_bound: u32,
    /// `1/(2 − a²)`
    pub subnormal_bound: Option<String>,
    pub within_subnormal_bound: Option<bool>,
    pub outside_hypothesis: bool,
    pub rows: Vec<SweepRow>,
}

impl ClassifyReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

pub fn classify(a2: &Scalar, y2: &Scalar, cfg: &RunConfig) -> Result<ClassifyReport, String> {
    let f = family_figure2(a2, y2).map_err(|e| e.to_string())?;
    let ks: Vec<u32> = (1..=cfg.k_max).collect();
    let rows = run_sweep(std::slice::from_ref(a2), std::slice::from_ref(y2), &ks, cfg)?;
    let bound = closed_form(ClosedForm::Subnormal, a2, 0).ok();
    Ok(ClassifyReport {
        a2: a2.to_string(),
        y2: y2.to_string(),
        u_bound: cfg.u_bound,
        within_subnormal_bound: bound.as_ref().map(|b| y2 <= b),
        subnormal_bound: bound.map(|b| b.to_string()),
        outside_hypothesis: f.outside_hypothesis(),
        rows,
    })
}

pub fn write_classify<W: Write>(report: &ClassifyReport, output: Output, mut w: W) -> std::io::Result<()> {
    match output {
        Output::Csv => write_rows(&report.rows, Output::Csv, w),
        Output::Json => {
            serde_json::to_writer_pretty(&mut w, report)?;
            writeln!(w)
        }
        Output::Pretty => {
            writeln!(w, "a2 = {}, y2 = {} (checked u1, u2 <= {})", report.a2, report.y2, report.u_bound)?;
            for r in &report.rows {
                let witness = r.witness_u.as_ref().map(|u| format!(" at u={}", u)).unwrap_or_default();
                let agree = if r.agree { "agree" } else { "MISMATCH" };
                writeln!(
                    w,
                    "k={} {}{}  expected {}  {}",
                    r.k,
                    r.verdict,
                    witness,
                    r.expected.unwrap_or("n/a"),
                    agree
                )?;
            }
            match (&report.subnormal_bound, report.within_subnormal_bound) {
                (Some(b), Some(true)) => writeln!(w, "y2 ≤ subnormal bound {}", b),
                (Some(b), Some(false)) => writeln!(w, "y2 > subnormal bound {}", b),
                _ => writeln!(w, "subnormal bound undefined"),
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRow {
    pub a2: String,
    pub k: u32,
    pub closed_form_y2: String,
    pub closed_form_f64: f64,
    pub bisected_y2: f64,
    pub abs_gap: f64,
    pub lo: String,
    pub hi: String,
    pub iterations: u32,
    pub lo_confirmed: bool,
    pub hi_confirmed: bool,
    pub closed_form_holds: Option<bool>,
}

impl ThresholdRow {
    /// Both bracket ends confirmed exactly and the boundary point itself holds.
    pub fn confirmed(&self) -> bool {
        self.lo_confirmed && self.hi_confirmed && self.closed_form_holds != Some(false)
    }
}

pub fn thresholds(a2: &Scalar, ks: &[u32], cfg: &RunConfig) -> Result<Vec<ThresholdRow>, String> {
    let settings = cfg.settings();
    cfg.install(|| {
        ks.par_iter()
            .map(|&k| {
                let r = bisect_threshold(family_figure2, a2, k, cfg.tol, settings).map_err(|e| format!("k={}: {}", k, e))?;
                Ok(ThresholdRow {
                    a2: r.a2.to_string(),
                    k,
                    closed_form_f64: r.closed_form_y2.to_f64(),
                    closed_form_y2: r.closed_form_y2.to_string(),
                    bisected_y2: r.bisected_y2,
                    abs_gap: r.abs_gap,
                    lo: r.lo.to_string(),
                    hi: r.hi.to_string(),
                    iterations: r.iterations,
                    lo_confirmed: r.lo_confirmed,
                    hi_confirmed: r.hi_confirmed,
                    closed_form_holds: r.closed_form_holds,
                })
            })
            .collect()
    })
    .map_err(|e| e.to_string())?
}

pub fn write_thresholds<W: Write>(rows: &[ThresholdRow], output: Output, mut w: W) -> std::io::Result<()> {
    match output {
        Output::Csv => {
            let mut csv = csv::Writer::from_writer(w);
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
            for r in rows {
                writeln!(w, "a2 = {}, k = {}", r.a2, r.k)?;
                writeln!(w, "  closed form y2 = {} ≈ {:.12}", r.closed_form_y2, r.closed_form_f64)?;
                writeln!(w, "  bisected y2    ≈ {:.12} after {} steps", r.bisected_y2, r.iterations)?;
                writeln!(w, "  gap            = {:.3e}", r.abs_gap)?;
                writeln!(
                    w,
                    "  exact checks: lower end holds {}, upper end fails {}, boundary holds {}",
                    r.lo_confirmed,
                    r.hi_confirmed,
                    r.closed_form_holds.map_or("n/a".to_string(), |b| b.to_string())
                )?;
            }
            Ok(())
        }
    }
}
