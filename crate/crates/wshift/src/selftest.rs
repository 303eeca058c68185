//! Reduced-size runs of the property suites, for `wshift selftest`.

use rayon::prelude::*;
use wshift_core::berger::{backward_extension_check, mu_m, mu_x, restrict_measure, restricted_gamma, verify_berger};
use wshift_core::hyponormality::{
    closed_form, det_identities_check, dk_sq_at_half, expected_threshold, hk_matrix, is_k_hyponormal, ClosedForm,
};
use wshift_core::moments::{gamma_1d, gamma_2d, gamma_via_path, hypo_form_matrix, moment_matrix, MomentKey};
use wshift_core::positivity::{det_exact, psd_exact, psd_float, PsdStatus};
use wshift_core::scalar::DEFAULT_TOL;
use wshift_core::shifts::{builtin_1d_shift, family_figure2, tensor_field, x_sequence_sq, WeightField2D};
use wshift_core::{Mode, Scalar};

type Check = Result<(), String>;

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Check,
}

fn r(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: wshift_core::Error) -> String {
    e.to_string()
}

fn grid(n: i64, hi: Scalar) -> Vec<Scalar> {
    (1..=n).map(|i| Scalar::int(i) * &hi / Scalar::int(n)).collect()
}

fn psd_at(f: &WeightField2D, u: MomentKey, k: u32) -> Result<bool, String> {
    Ok(psd_exact(&moment_matrix(f, u, k).matrix).map_err(err)?.is_psd())
}

fn closed_forms() -> Check {
    let half = r(1, 2);
    let cases = [
        (ClosedForm::Dk, r(1, 2), 2, r(9, 13)),
        (ClosedForm::Dk, r(1, 2), 3, r(32, 47)),
        (ClosedForm::Dk, r(1, 4), 2, r(45, 76)),
        (ClosedForm::Hypo1, half.clone(), 1, r(20, 23)),
        (ClosedForm::Subnormal, half.clone(), 0, r(2, 3)),
        (ClosedForm::Ak, half.clone(), 2, r(1, 60)),
        (ClosedForm::DetAk, half, 2, r(1, 3840)),
    ];
    for (kind, a2, k, want) in cases {
        let got = closed_form(kind, &a2, k).map_err(err)?;
        ensure(got == want, || format!("{:?}(a2={}, k={}) = {}, expected {}", kind, a2, k, got, want))?;
    }
    Ok(())
}

fn boundary_inclusive() -> Check {
    let eps = r(1, 1_000_000);
    for (k, y2) in [(2, r(9, 13)), (1, r(20, 23))] {
        let at = family_figure2(&r(1, 2), &y2).map_err(err)?;
        ensure(psd_at(&at, MomentKey::ORIGIN, k)?, || format!("k={} not PSD at y2={}", k, y2))?;
        let above = family_figure2(&r(1, 2), &(&y2 + &eps)).map_err(err)?;
        ensure(!psd_at(&above, MomentKey::ORIGIN, k)?, || format!("k={} still PSD above {}", k, y2))?;
    }
    let h = hk_matrix(&r(1, 2), &r(9, 13), 2).map_err(err)?;
    ensure(det_exact(&h).map_err(err)?.is_zero(), || "det H_2 at 9/13 is not zero".to_string())?;
    let f = family_figure2(&r(1, 2), &r(20, 23)).map_err(err)?;
    let form = hypo_form_matrix(&f, MomentKey::ORIGIN, 1).map_err(err)?;
    ensure(det_exact(&form).map_err(err)?.is_zero(), || "2x2 form at 20/23 is not singular".to_string())
}

fn determinant_identities() -> Check {
    for a2 in [r(1, 4), r(1, 2)] {
        for (k, y2) in (2..=6).zip([r(1, 3), r(1, 2), r(2, 3), r(5, 7), r(9, 10)]) {
            ensure(det_identities_check(&a2, &y2, k).map_err(err)?, || format!("a2={} y2={} k={}", a2, y2, k))?;
        }
    }
    Ok(())
}

fn berger_moments() -> Check {
    for y2 in [r(1, 1), r(1, 2), r(1, 3)] {
        let w = x_sequence_sq(&y2).map_err(err)?;
        let mu = mu_x(&y2).map_err(err)?;
        ensure(verify_berger(&w, &mu, 100), || format!("moments differ for y2={}", y2))?;
        for h in 1..=3 {
            let rest = restrict_measure(&mu, h, &gamma_1d(&w, h)).map_err(err)?;
            ensure((0..=10).all(|k| rest.moment(k) == restricted_gamma(&w, h, k)), || format!("restriction h={}", h))?;
        }
    }
    Ok(())
}

/// Every monotone path from the origin to `(4, 3)`.
fn all_paths() -> Vec<Vec<MomentKey>> {
    fn go(cur: MomentKey, end: MomentKey, path: &mut Vec<MomentKey>, out: &mut Vec<Vec<MomentKey>>) {
        path.push(cur);
        if cur == end {
            out.push(path.clone());
        }
        if cur.k1 < end.k1 {
            go(MomentKey::new(cur.k1 + 1, cur.k2), end, path, out);
        }
        if cur.k2 < end.k2 {
            go(MomentKey::new(cur.k1, cur.k2 + 1), end, path, out);
        }
        path.pop();
    }
    let mut out = Vec::new();
    go(MomentKey::ORIGIN, MomentKey::new(4, 3), &mut Vec::new(), &mut out);
    out
}

fn path_independence() -> Check {
    let s = builtin_1d_shift("S_a", &[r(1, 3)]).map_err(err)?;
    let x = x_sequence_sq(&r(3, 5)).map_err(err)?;
    let fields = [family_figure2(&r(1, 3), &r(3, 5)).map_err(err)?, tensor_field(&x, &s)];
    for f in &fields {
        for p in all_paths() {
            let end = *p.last().unwrap();
            ensure(gamma_via_path(f, &p).map_err(err)? == gamma_2d(f, end), || format!("{} path {:?}", f.describe(), p))?;
        }
    }
    Ok(())
}

fn nesting_and_agreement() -> Check {
    let points: Vec<(Scalar, Scalar)> = [r(1, 8), r(1, 4), r(1, 2)]
        .into_iter()
        .flat_map(|a| grid(8, Scalar::one()).into_iter().map(move |y| (a.clone(), y)))
        .collect();
    points.par_iter().try_for_each(|(a2, y2)| {
        let f = family_figure2(a2, y2).map_err(err)?;
        let mut prev = true;
        for k in 1..=4 {
            let holds = is_k_hyponormal(&f, k, 3, Mode::Exact, DEFAULT_TOL).map_err(err)?.holds;
            ensure(prev || !holds, || format!("a2={} y2={}: k={} holds but k={} fails", a2, y2, k, k - 1))?;
            let expected = *y2 <= expected_threshold(a2, k).map_err(err)?;
            ensure(expected == holds, || format!("a2={} y2={} k={}: verdict {} expected {}", a2, y2, k, holds, expected))?;
            prev = holds;
        }
        Ok(())
    })
}

fn reduced_matrix_equivalence() -> Check {
    for a2 in grid(5, r(1, 2)) {
        for y2 in grid(6, Scalar::one()) {
            let f = family_figure2(&a2, &y2).map_err(err)?;
            for k in 2..=4 {
                let h = psd_exact(&hk_matrix(&a2, &y2, k).map_err(err)?).map_err(err)?.is_psd();
                ensure(psd_at(&f, MomentKey::ORIGIN, k)? == h, || format!("a2={} y2={} k={}", a2, y2, k))?;
            }
        }
    }
    Ok(())
}

fn origin_dominates() -> Check {
    for a2 in grid(4, r(1, 2)) {
        for y2 in grid(5, Scalar::one()) {
            let f = family_figure2(&a2, &y2).map_err(err)?;
            for k in 1..=3 {
                if psd_at(&f, MomentKey::ORIGIN, k)? {
                    let v = is_k_hyponormal(&f, k, 4, Mode::Exact, DEFAULT_TOL).map_err(err)?;
                    ensure(v.holds, || format!("a2={} y2={} k={} fails at {:?}", a2, y2, k, v.witness_u))?;
                }
            }
        }
    }
    Ok(())
}

fn float_agrees_with_exact() -> Check {
    for a2 in grid(3, r(1, 2)) {
        for y2 in grid(4, Scalar::one()) {
            let f = family_figure2(&a2, &y2).map_err(err)?;
            for k in 1..=3 {
                let m = moment_matrix(&f, MomentKey::new(1, 1), k).matrix;
                let exact = psd_exact(&m).map_err(err)?.status;
                let float = psd_float(&m, DEFAULT_TOL).map_err(err)?.status;
                ensure(float == PsdStatus::Borderline || float == exact, || format!("a2={} y2={} k={}", a2, y2, k))?;
            }
        }
    }
    Ok(())
}

fn backward_extension() -> Check {
    for a2 in grid(10, r(1, 2)) {
        let bound = closed_form(ClosedForm::Subnormal, &a2, 0).map_err(err)?;
        for y2 in grid(10, Scalar::one()) {
            let report = backward_extension_check(&mu_m(&a2).map_err(err)?, &mu_x(&y2).map_err(err)?, &y2).map_err(err)?;
            ensure(report.subnormal == (y2 <= bound), || format!("a2={} y2={}", a2, y2))?;
            if let Some(mu) = &report.constructed_mu {
                let f = family_figure2(&a2, &y2).map_err(err)?;
                for k1 in 0..=6 {
                    for k2 in 0..=6 {
                        let k = MomentKey::new(k1, k2);
                        ensure(mu.moment(k) == gamma_2d(&f, k), || format!("a2={} y2={} moment {}", a2, y2, k))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn thresholds_decrease() -> Check {
    for a2 in [r(1, 10), r(1, 4), r(1, 2)] {
        let sub = closed_form(ClosedForm::Subnormal, &a2, 0).map_err(err)?;
        let mut prev = closed_form(ClosedForm::Dk, &a2, 2).map_err(err)?;
        for k in 3..=50 {
            let d = closed_form(ClosedForm::Dk, &a2, k).map_err(err)?;
            ensure(d < prev && d > sub, || format!("a2={} k={}", a2, k))?;
            prev = d;
        }
    }
    let gap = (dk_sq_at_half(50) - r(2, 3)).to_f64();
    ensure(gap.abs() < 1e-3, || format!("D(50)^2 - 2/3 = {}", gap))
}

/// Runs every check; independent checks run in parallel, results keep the listed order.
pub fn run_all() -> Vec<CheckResult> {
    type Named = (&'static str, fn() -> Check);
    let checks: Vec<Named> = vec![
        ("closed-form values", closed_forms),
        ("boundary inclusivity", boundary_inclusive),
        ("determinant identities", determinant_identities),
        ("berger moments and restriction", berger_moments),
        ("path independence", path_independence),
        ("verdict nesting and closed-form agreement", nesting_and_agreement),
        ("reduced matrix equivalence", reduced_matrix_equivalence),
        ("origin dominates other u", origin_dominates),
        ("float verdicts agree with exact", float_agrees_with_exact),
        ("backward extension", backward_extension),
        ("thresholds decrease to the subnormal bound", thresholds_decrease),
    ];
    checks
        .into_par_iter()
        .map(|(name, f)| CheckResult { name, outcome: f() })
        .collect()
}
