use proptest::prelude::*;

use wshift_core::berger::{
    extremal_measure, mu_x, one_over_t_norm, restrict_measure, restricted_gamma, s_a_measure, Measure1D, Measure2D,
};
use wshift_core::hyponormality::{closed_form, hk_matrix, is_k_hyponormal, ClosedForm};
use wshift_core::moments::{gamma_1d, gamma_2d, gamma_via_path, hypo_form_matrix, moment_matrix, MomentKey};
use wshift_core::poly::{poly_nonneg_01, Poly};
use wshift_core::positivity::{det_exact, psd_exact, psd_float, PsdStatus};
use wshift_core::shifts::{builtin_1d_shift, family_figure2, tensor_field, x_sequence_sq, WeightField2D};
use wshift_core::scalar::DEFAULT_TOL;
use wshift_core::{Matrix, Mode, Scalar};

fn r(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

fn small_rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=6).prop_map(|(n, d)| r(n, d))
}

/// `a² ∈ (0, 1/2]`
fn a2_strategy() -> impl Strategy<Value = Scalar> {
    (1i64..=20).prop_map(|n| r(n, 40))
}

/// `y² ∈ (0, 1]`
fn y2_strategy() -> impl Strategy<Value = Scalar> {
    (1i64..=40).prop_map(|n| r(n, 40))
}

fn symmetric(n: usize, entries: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(n);
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i..n {
            let v = it.next().unwrap().clone();
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    m
}

/// `B Bᵀ` for an `n × rank` matrix `B`, PSD by construction.
fn gram(n: usize, rank: usize, entries: &[Scalar]) -> Matrix {
    let b: Vec<&Scalar> = entries.iter().cycle().take(n * rank).collect();
    Matrix::from_fn(n, |i, j| (0..rank).map(|l| b[i * rank + l] * b[j * rank + l]).sum())
}

fn matrix_strategy() -> impl Strategy<Value = (Matrix, bool)> {
    (1usize..=30, 1usize..=30, prop::collection::vec(small_rational(), 1..120), any::<bool>()).prop_map(
        |(n, rank, entries, use_gram)| {
            if use_gram {
                (gram(n, rank.min(n), &entries), true)
            } else {
                (symmetric(n, &entries), false)
            }
        },
    )
}

fn field_strategy() -> impl Strategy<Value = WeightField2D> {
    (a2_strategy(), y2_strategy(), any::<bool>()).prop_map(|(a2, y2, tensor)| {
        if tensor {
            let x = x_sequence_sq(&y2).unwrap();
            let s = builtin_1d_shift("S_a", &[a2]).unwrap();
            tensor_field(&x, &s)
        } else {
            family_figure2(&a2, &y2).unwrap()
        }
    })
}

fn path_from_steps(steps: &[bool]) -> Vec<MomentKey> {
    let mut p = vec![MomentKey::ORIGIN];
    for &east in steps {
        let last = *p.last().unwrap();
        p.push(if east {
            MomentKey::new(last.k1 + 1, last.k2)
        } else {
            MomentKey::new(last.k1, last.k2 + 1)
        });
    }
    p
}

/// `c · ∏ (t − rᵢ)^{mᵢ}` with rational roots of small denominator.
fn factored_poly() -> impl Strategy<Value = Poly> {
    let root = (-3i64..=15, 1i64..=12).prop_map(|(n, d)| r(n, d));
    (prop::collection::vec((root, 1usize..=2), 0..=4), prop_oneof![Just(1i64), Just(-1i64)], 1i64..=5).prop_map(
        |(roots, sign, c)| {
            let mut p = Poly::constant(Scalar::int(sign * c));
            for (root, mult) in roots {
                for _ in 0..mult {
                    p = p.mul(&Poly::new(vec![-root.clone(), Scalar::one()]));
                    if p.degree().unwrap_or(0) >= 6 {
                        return p;
                    }
                }
            }
            p
        },
    )
}

fn min_on_grid(p: &Poly, points: usize) -> Scalar {
    (0..=points)
        .map(|i| p.eval(&r(i as i64, points as i64)))
        .reduce(Scalar::min)
        .unwrap()
}

fn atoms_strategy() -> impl Strategy<Value = Measure1D> {
    prop::collection::vec(((0i64..=8).prop_map(|n| r(n, 8)), (1i64..=5).prop_map(|n| r(n, 5))), 1..4)
        .prop_map(|atoms| Measure1D::new(atoms, Poly::zero()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nonneg_matches_dense_sampling(p in factored_poly()) {
        let verdict = poly_nonneg_01(&p).unwrap();
        let sampled = !min_on_grid(&p, 10_000).is_negative();
        prop_assert_eq!(verdict, sampled, "{}", p);
    }

    #[test]
    fn nonneg_never_contradicts_a_sample(cs in prop::collection::vec(-8i64..=8, 1..=7)) {
        let p = Poly::new(cs.into_iter().map(Scalar::int).collect());
        if poly_nonneg_01(&p).unwrap() {
            prop_assert!(!min_on_grid(&p, 2_000).is_negative(), "{}", p);
        }
    }

    #[test]
    fn float_psd_agrees_with_exact((m, _) in matrix_strategy()) {
        let exact = psd_exact(&m).unwrap().status;
        match psd_float(&m, DEFAULT_TOL).unwrap().status {
            PsdStatus::Borderline => {}
            s => prop_assert_eq!(s, exact),
        }
    }

    #[test]
    fn gram_matrices_are_psd((m, is_gram) in matrix_strategy()) {
        if is_gram {
            prop_assert!(psd_exact(&m).unwrap().is_psd());
        }
    }

    #[test]
    fn psd_implies_nonnegative_minors((m, _) in matrix_strategy()) {
        if psd_exact(&m).unwrap().is_psd() {
            prop_assert!(!det_exact(&m).unwrap().is_negative());
            for len in 1..m.dim().min(6) {
                let idx: Vec<usize> = (0..len).collect();
                prop_assert!(!det_exact(&m.principal(&idx)).unwrap().is_negative());
            }
        }
    }

    #[test]
    fn paths_reproduce_canonical_moments(f in field_strategy(), steps in prop::collection::vec(any::<bool>(), 0..20)) {
        let path = path_from_steps(&steps);
        let end = *path.last().unwrap();
        prop_assert_eq!(gamma_via_path(&f, &path).unwrap(), gamma_2d(&f, end));
    }

    #[test]
    fn moment_matrix_psd_iff_hypo_form_psd(
        a2 in a2_strategy(), y2 in y2_strategy(), k in 1u32..=3, u1 in 0u32..4, u2 in 0u32..4,
    ) {
        let f = family_figure2(&a2, &y2).unwrap();
        let u = MomentKey::new(u1, u2);
        prop_assert!(gamma_2d(&f, u).is_positive());
        let m = psd_exact(&moment_matrix(&f, u, k).matrix).unwrap().is_psd();
        let h = psd_exact(&hypo_form_matrix(&f, u, k).unwrap()).unwrap().is_psd();
        prop_assert_eq!(m, h);
    }

    #[test]
    fn verdicts_nest(a2 in a2_strategy(), y2 in y2_strategy(), k in 1u32..=3) {
        let f = family_figure2(&a2, &y2).unwrap();
        let upper = is_k_hyponormal(&f, k + 1, 3, Mode::Exact, DEFAULT_TOL).unwrap();
        let lower = is_k_hyponormal(&f, k, 3, Mode::Exact, DEFAULT_TOL).unwrap();
        prop_assert!(!upper.holds || lower.holds);
    }

    #[test]
    fn thresholds_strictly_decrease(a2 in a2_strategy(), k in 2u32..50) {
        let d = closed_form(ClosedForm::Dk, &a2, k).unwrap();
        let next = closed_form(ClosedForm::Dk, &a2, k + 1).unwrap();
        prop_assert!(next < d);
        prop_assert!(next > closed_form(ClosedForm::Subnormal, &a2, 0).unwrap());
    }

    #[test]
    fn reduced_matrix_decides_origin(a2 in a2_strategy(), y2 in y2_strategy(), k in 2u32..=4) {
        let f = family_figure2(&a2, &y2).unwrap();
        let m = psd_exact(&moment_matrix(&f, MomentKey::ORIGIN, k).matrix).unwrap().is_psd();
        let h = psd_exact(&hk_matrix(&a2, &y2, k).unwrap()).unwrap().is_psd();
        prop_assert_eq!(m, h);
    }

    #[test]
    fn origin_dominates(a2 in a2_strategy(), y2 in y2_strategy(), k in 1u32..=3) {
        let f = family_figure2(&a2, &y2).unwrap();
        if psd_exact(&moment_matrix(&f, MomentKey::ORIGIN, k).matrix).unwrap().is_psd() {
            prop_assert!(is_k_hyponormal(&f, k, 4, Mode::Exact, DEFAULT_TOL).unwrap().holds);
        }
    }

    #[test]
    fn restriction_shifts_moments(y2 in y2_strategy(), a2 in a2_strategy(), h in 1u32..=5) {
        let x = x_sequence_sq(&y2).unwrap();
        let s = builtin_1d_shift("S_a", std::slice::from_ref(&a2)).unwrap();
        for (w, xi) in [(x, mu_x(&y2).unwrap()), (s, s_a_measure(&a2).unwrap())] {
            let restricted = restrict_measure(&xi, h, &gamma_1d(&w, h)).unwrap();
            prop_assert_eq!(restricted.total_mass(), Scalar::one());
            for k in 0..=10 {
                prop_assert_eq!(restricted.moment(k), restricted_gamma(&w, h, k));
            }
        }
    }

    #[test]
    fn extremal_reweighting_recovers_input(
        terms in prop::collection::vec((atoms_strategy(), atoms_strategy()), 1..3),
    ) {
        let mu = Measure2D::new(terms);
        prop_assume!(one_over_t_norm(&mu).is_ok());
        let norm = one_over_t_norm(&mu).unwrap();
        let back = extremal_measure(&mu).unwrap().weight_t().scale(&norm);
        let sliced = mu.without_t_zero_slice();
        for k1 in 0..4 {
            for k2 in 0..4 {
                let k = MomentKey::new(k1, k2);
                prop_assert_eq!(back.moment(k), sliced.moment(k));
            }
        }
    }
}
