use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use sphere_twobody::exact::to_c64;
use sphere_twobody::fuchsian::{coulomb_exponents, cross_ratio, oscillator_exponents, to_heun, Point};
use sphere_twobody::hyperfun::{gauss_2f1, GaussParams};
use sphere_twobody::ladder::{build_ladder_rep, operator_matrices, verify_structure_relations};
use sphere_twobody::liealg::{branch_b_to_d, branch_d_to_b, weyl_dim, AlgebraLabel, HighestWeight};
use sphere_twobody::oracle::{common_eigenvectors, eigenvalue_by_nodes, RadialProblem, ShootingConfig};
use sphere_twobody::radial::{radial_coefficients, PhysicalParams, PotentialKind};
use sphere_twobody::spectra::{expected_nodes, first_k, oracle_check, radial_eigenfunction, ORACLE_REL_TOL};

fn complex(bound: f64) -> impl Strategy<Value = C> {
    (-bound..bound, -bound..bound).prop_map(|(x, y)| C::new(x, y))
}

fn kind() -> impl Strategy<Value = PotentialKind> {
    prop_oneof![Just(PotentialKind::Coulomb), Just(PotentialKind::Oscillator)]
}

fn params() -> impl Strategy<Value = PhysicalParams> {
    (0.3..3.0f64, 0.5..2.5f64, 0.2..3.0f64).prop_map(|(m, r, g)| PhysicalParams::with_reduced_mass(m, r, g).unwrap())
}

/// Nondecreasing coefficients `0 <= m_1 <= ... <= m_k`.
fn b_weight(max_rank: usize) -> impl Strategy<Value = HighestWeight> {
    prop::collection::vec(0..3i64, 1..=max_rank).prop_map(|steps| {
        HighestWeight::new(
            steps
                .iter()
                .scan(0, |acc, s| {
                    *acc += s;
                    Some(*acc)
                })
                .collect(),
        )
    })
}

/// `|m_1| <= m_2 <= ... <= m_k`, rank at least 2.
fn d_weight(max_rank: usize) -> impl Strategy<Value = HighestWeight> {
    (b_weight(max_rank - 1), 0..3i64, any::<bool>()).prop_map(|(w, top, neg)| {
        let mut m = w.coeffs.clone();
        m.push(m.last().unwrap() + top);
        if neg {
            m[0] = -m[0];
        }
        HighestWeight::new(m)
    })
}

/// Weights `(0, ..., 0, m_{k-1}, m_k)` of `B_1..B_3` and `D_2..D_3`.
fn two_row() -> impl Strategy<Value = (AlgebraLabel, HighestWeight)> {
    (0..2usize, 1..=3usize, 0..5i64, 0..5i64, any::<bool>()).prop_map(|(series, rank, lo, gap, neg)| {
        if series == 0 {
            let alg = AlgebraLabel::b(rank);
            let w = if rank == 1 { HighestWeight::new(vec![lo + gap]) } else { HighestWeight::two_row(rank, lo + gap, lo) };
            (alg, w)
        } else {
            let rank = rank.max(2);
            let lo = if neg && rank == 2 { -lo } else { lo };
            (AlgebraLabel::d(rank), HighestWeight::two_row(rank, lo.abs() + gap, lo))
        }
    })
}

/// Reducible channels with the masses left free.
fn channel() -> impl Strategy<Value = (usize, u8, i64)> {
    prop_oneof![Just((2, 1, 0)), Just((2, 2, 1)), Just((2, 5, 2)), (3..=5usize, 0..=2i64).prop_map(|(n, mk)| (n, 1, mk)), (3..=5usize).prop_map(|n| (n, 4, 2))]
}

fn unitary(seed: Vec<(f64, f64)>, n: usize) -> DMatrix<C> {
    let z = DMatrix::from_iterator(n, n, seed.into_iter().map(|(x, y)| C::new(x, y)));
    z.qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cross_ratio_is_mobius_invariant(pts in prop::array::uniform4(complex(3.0)), a in complex(2.0), b in complex(2.0), c in complex(2.0), d in complex(2.0)) {
        prop_assume!((a * d - b * c).norm() > 0.1);
        let z = pts.map(Point::Finite);
        let Ok(before) = cross_ratio(z) else { return Ok(()) };
        prop_assume!(before.norm() < 1e4);
        let after = cross_ratio(z.map(|p| p.mobius(a, b, c, d))).unwrap();
        prop_assert!((after - before).norm() <= 1e-8 * (1.0 + before.norm()), "{} vs {}", after, before);
    }

    #[test]
    fn heun_constraint_and_fuchs_sums(kind in kind(), (n, case, mk) in channel(), p in params(), e in -5.0..8.0f64) {
        let co = radial_coefficients(n, case, mk).unwrap();
        prop_assert!(to_heun(kind, n, &co, &p, e).constraint_residual() <= 1e-12);
        let eq = match kind {
            PotentialKind::Coulomb => coulomb_exponents(n, &co, &p, e),
            PotentialKind::Oscillator => oscillator_exponents(n, &co, &p, e),
        };
        prop_assert!(eq.fuchs_defect() <= 1e-12, "{}", eq.fuchs_defect());
    }

    #[test]
    fn b_restriction_preserves_dimension(w in b_weight(4)) {
        let k = w.rank();
        let parts = branch_b_to_d(&w, k).unwrap();
        let total: num_bigint::BigInt = if k == 1 {
            (parts.len() as i64).into()
        } else {
            parts.iter().map(|mu| weyl_dim(AlgebraLabel::d(k), mu).unwrap()).sum()
        };
        prop_assert_eq!(total, weyl_dim(AlgebraLabel::b(k), &w).unwrap());
    }

    #[test]
    fn d_restriction_preserves_dimension(w in d_weight(4)) {
        let k = w.rank();
        let total: num_bigint::BigInt = branch_d_to_b(&w, k).unwrap().iter().map(|mu| weyl_dim(AlgebraLabel::b(k - 1), mu).unwrap()).sum();
        prop_assert_eq!(total, weyl_dim(AlgebraLabel::d(k), &w).unwrap());
    }

    #[test]
    fn structure_relations_hold((alg, w) in two_row()) {
        let rep = build_ladder_rep(alg, &w).unwrap();
        let rep_ok = verify_structure_relations(&rep).unwrap();
        prop_assert!(rep_ok.all_hold(), "{} {:?}: {:?}", alg, w, rep_ok.failures());
    }

    #[test]
    fn euler_and_pfaff_transformations(a in complex(2.0), b in complex(2.0), g in complex(2.0), z in complex(0.32)) {
        prop_assume!((g.re.round() - g.re).abs() > 0.05 || g.re > 0.5 || g.im.abs() > 0.05);
        let f = gauss_2f1(&GaussParams::new(a, b, g, z)).unwrap();
        let w = 1.0 - z;
        let euler = w.powc(g - a - b) * gauss_2f1(&GaussParams::new(g - a, g - b, g, z)).unwrap();
        let pfaff = w.powc(-a) * gauss_2f1(&GaussParams::new(a, g - b, g, z / (z - 1.0))).unwrap();
        let scale = 1.0 + f.norm();
        prop_assert!((euler - f).norm() <= 1e-9 * scale, "{} vs {}", euler, f);
        prop_assert!((pfaff - f).norm() <= 1e-9 * scale, "{} vs {}", pfaff, f);
    }

    #[test]
    fn joint_eigenvalues_survive_unitary_rebasing(w in b_weight(2), seed in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 400)) {
        let alg = AlgebraLabel::b(w.rank());
        let rep = build_ladder_rep(alg, &w).unwrap();
        let dim = rep.dim();
        prop_assume!(dim * dim <= seed.len());
        let ops = operator_matrices(&rep);
        let mats = vec![to_c64(&ops.d0_squared()), to_c64(&ops.d1), to_c64(&ops.d2)];
        let u = unitary(seed[..dim * dim].to_vec(), dim);
        let rebased: Vec<DMatrix<C>> = mats.iter().map(|m| u.adjoint() * m * &u).collect();
        let before = common_eigenvectors(&mats, 1e-10).unwrap();
        let after = common_eigenvectors(&rebased, 1e-10).unwrap();
        prop_assert_eq!(before.len(), after.len());
        for x in &before {
            let close = |y: &&sphere_twobody::oracle::JointSpace| x.values.iter().zip(&y.values).all(|(p, q)| (p - q).norm() <= 1e-10 * (1.0 + p.norm()));
            let hit = after.iter().find(close);
            prop_assert!(hit.is_some_and(|y| y.dim() == x.dim()), "{:?} missing from rebased spaces", x.values);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn eigenfunctions_solve_the_radial_equation(kind in kind(), (n, case, mk) in channel(), p in params(), dk in 0..3u32) {
        let co = radial_coefficients(n, case, mk).unwrap();
        let f = radial_eigenfunction(kind, first_k(kind) + dk, n, &co, &p).unwrap();
        let r = f.residual(&f.default_points(60)).unwrap();
        prop_assert!(r <= 1e-9, "{}", r);
    }

    #[test]
    fn shooting_finds_the_formula_level(kind in kind(), (n, case, mk) in channel(), p in params(), dk in 0..3u32) {
        let co = radial_coefficients(n, case, mk).unwrap();
        let k = first_k(kind) + dk;
        let chk = oracle_check(kind, k, n, &co, &p, &ShootingConfig::default()).unwrap();
        prop_assert!(chk.passes(ORACLE_REL_TOL), "{:?}", chk);
        prop_assert_eq!(chk.nodes, expected_nodes(kind, k));
    }

    #[test]
    fn halving_integrator_tolerances_is_harmless(kind in kind(), (n, case, mk) in channel(), p in params(), nodes in 0..3usize) {
        let co = radial_coefficients(n, case, mk).unwrap();
        let prob = RadialProblem::new(kind, n, &co, &p).unwrap();
        let cfg = ShootingConfig::default();
        let fine = ShootingConfig { rtol: cfg.rtol / 2.0, atol: cfg.atol / 2.0, ..cfg };
        let e1 = eigenvalue_by_nodes(&prob, nodes, &cfg).unwrap().energy;
        let e2 = eigenvalue_by_nodes(&prob, nodes, &fine).unwrap().energy;
        prop_assert!((e1 - e2).abs() <= 1e-8 * e1.abs().max(1.0), "{} vs {}", e1, e2);
    }
}

fn sample_report() -> sphere_twobody::cli::SpectrumReport {
    static REPORT: std::sync::OnceLock<sphere_twobody::cli::SpectrumReport> = std::sync::OnceLock::new();
    REPORT
        .get_or_init(|| {
            let p = PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).unwrap();
            let cfg = ShootingConfig::default();
            let s = sphere_twobody::spectra::spectrum(PotentialKind::Coulomb, 3, 1, 0, &p, 1..=2, &cfg).unwrap();
            sphere_twobody::cli::SpectrumReport::from_spectrum(&s, &cfg, Some(3)).unwrap()
        })
        .clone()
}

proptest! {
    #[test]
    fn report_json_round_trips(values in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 8)) {
        let mut report = sample_report();
        for (row, pair) in report.levels.iter_mut().zip(values.chunks(2)) {
            row.energy = pair[0];
            row.shooting = Some(pair[1]);
        }
        for (t, v) in report.eigenfunctions.as_mut().unwrap().iter_mut().zip(&values[4..]) {
            t.samples[0].value = *v;
        }
        let json = report.to_json().unwrap();
        let back = sphere_twobody::cli::SpectrumReport::from_json(&json).unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert_eq!(back.to_json().unwrap(), json);
    }
}
