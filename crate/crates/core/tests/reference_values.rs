use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64 as C;
use sphere_twobody::exact::to_c64;
use sphere_twobody::hyperfun::{gauss_2f1, gauss_2f1_diag, limit_near_one, GaussParams, Region};
use sphere_twobody::ladder::{build_ladder_rep, classify_common_eigenvectors, operator_matrices};
use sphere_twobody::liealg::{weyl_dim, AlgebraLabel, HighestWeight};
use sphere_twobody::oracle::{common_eigenvectors, joint_diagonalize, ShootingConfig};
use sphere_twobody::radial::{radial_coefficients, PhysicalParams, PotentialKind};
use sphere_twobody::spectra::{coulomb_energy_value, oscillator_energy, oscillator_energy_value, spectrum, LevelSource};
use sphere_twobody::verify::gauss_equation_residual;

fn unit() -> PhysicalParams {
    PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).unwrap()
}

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

#[test]
fn free_three_sphere_coulomb_levels() {
    let s = spectrum(PotentialKind::Coulomb, 3, 1, 0, &unit(), 1..=5, &ShootingConfig::default()).unwrap();
    assert_eq!(s.levels.len(), 5);
    for (i, l) in s.levels.iter().enumerate() {
        let k = (i + 1) as f64;
        assert!((l.level.energy - ((k * k - 1.0) / 2.0 - 1.0 / (2.0 * k * k))).abs() < 1e-12);
        assert!(l.verified, "k={k}: {:?}", l.oracle);
        assert_eq!(l.level.multiplicity, BigInt::from(1));
    }
}

#[test]
fn oscillator_levels_carry_the_weyl_dimension() {
    let s = spectrum(PotentialKind::Oscillator, 5, 4, 2, &unit(), 0..=3, &ShootingConfig::default()).unwrap();
    assert_eq!(s.levels.len(), 4);
    let dim = weyl_dim(AlgebraLabel::d(3), &HighestWeight::new(vec![0, 0, 2])).unwrap();
    assert!(s.levels.iter().all(|l| l.level.multiplicity == dim && l.verified));
}

#[test]
fn irreducible_channel_is_numeric_only() {
    let s = spectrum(PotentialKind::Coulomb, 4, 2, 1, &unit(), 1..=2, &ShootingConfig::default()).unwrap();
    assert!(!s.reducible);
    assert!(s.levels.iter().all(|l| l.level.source == LevelSource::NumericOnly && l.oracle.is_none()));
    assert!(s.levels[0].level.energy < s.levels[1].level.energy);
}

#[test]
fn coulomb_levels_grow_like_free_motion() {
    let p = PhysicalParams::with_reduced_mass(0.7, 1.4, 0.9).unwrap();
    let m = p.reduced_mass();
    let e = |k: u32| coulomb_energy_value(k, 4, 0.375, 0.75, &p);
    let ratio = |k: u32| e(k) * 2.0 * m * 1.4 * 1.4 / (k as f64 * k as f64);
    assert!((ratio(10_000) - 1.0).abs() < 1e-3);
    assert!((ratio(10_000) - 1.0).abs() < (ratio(1000) - 1.0).abs());
}

#[test]
fn oscillator_flat_limit() {
    // R → ∞ at fixed k and a = 0: E_k → ω(4k + n)/(2√m)
    let (m, w, n) = (0.8f64, 1.3, 4usize);
    let co = radial_coefficients(n, 1, 0).unwrap();
    for k in 0..3u32 {
        let want = w * (4.0 * k as f64 + 2.0 + (n as f64 - 2.0)) / (2.0 * m.sqrt());
        let at = |r: f64| oscillator_energy_value(k, n, co.a_f64(), co.b_f64(), &PhysicalParams::with_reduced_mass(m, r, w).unwrap());
        assert!((at(1e4) - want).abs() < 1e-3 * want, "{} vs {want}", at(1e4));
        assert!((at(1e4) - want).abs() < (at(1e2) - want).abs());
    }
}

#[test]
fn oscillator_spacing_increases() {
    let co = radial_coefficients(2, 1, 0).unwrap();
    let e: Vec<f64> = (0..8).map(|k| oscillator_energy(k, 2, &co, &unit()).unwrap().energy).collect();
    assert!((e[0] - (0.5 + 5f64.sqrt() / 2.0)).abs() < 1e-14);
    let gaps: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(gaps.windows(2).all(|g| g[1] > g[0]), "{gaps:?}");
}

#[test]
fn joint_eigenvectors_of_b2_one_two() {
    let rep = build_ladder_rep(AlgebraLabel::b(2), &HighestWeight::new(vec![1, 2])).unwrap();
    let ops = operator_matrices(&rep);
    let mats = vec![to_c64(&ops.d0_squared()), to_c64(&ops.d1), to_c64(&ops.d2)];
    let joint = joint_diagonalize(&mats, 1e-10).unwrap();
    let recs = classify_common_eigenvectors(&rep, 4).unwrap();
    assert_eq!(recs.iter().map(|r| r.case_id).collect::<Vec<_>>(), vec![2, 3]);
    assert_eq!(joint.len(), 2);
    for r in &recs {
        let want = [&r.delta0, &r.delta1, &r.delta2].map(sphere_twobody::exact::to_f64);
        let hit = joint.iter().find(|(_, vals)| vals.iter().zip(want).all(|(v, w)| (v - w).norm() < 1e-10));
        assert!(hit.is_some(), "case {} {want:?} missing from {joint:?}", r.case_id);
    }
}

#[test]
fn only_the_centre_vector_is_a_d3_eigenvector() {
    // n = 2, m = 1: three classified vectors, of which only χ0 survives D3
    let rep = build_ladder_rep(AlgebraLabel::b(1), &HighestWeight::new(vec![1])).unwrap();
    assert_eq!(classify_common_eigenvectors(&rep, 2).unwrap().len(), 3);
    let ops = operator_matrices(&rep);
    let mats = vec![to_c64(&ops.d0_squared()), to_c64(&ops.d1), to_c64(&ops.d2), to_c64(&ops.d3)];
    let spaces = common_eigenvectors(&mats, 1e-10).unwrap();
    assert_eq!(spaces.len(), 1);
    assert_eq!(spaces[0].dim(), 1);
    let centre = DVector::from_fn(3, |i, _| if i == 1 { c(1.0) } else { c(0.0) });
    assert!(spaces[0].distance(&centre) < 1e-12);
}

#[test]
fn second_canonical_solution_solves_the_gauss_equation() {
    let (a, b, g) = (C::new(0.35, 0.2), c(-0.8), c(0.3));
    for z in [C::new(0.2, 0.3), C::new(0.6, -0.2), C::new(-0.5, 0.4)] {
        let h = 1e-3;
        let f = |z: C| GaussParams::new(a, b, g, z).second_solution().unwrap();
        let v: Vec<C> = (-3..=3).map(|j| f(z + h * j as f64)).collect();
        let d1 = (v[6] - v[0] - 9.0 * (v[5] - v[1]) + 45.0 * (v[4] - v[2])) / (60.0 * h);
        let d2 = (2.0 * (v[6] + v[0]) - 27.0 * (v[5] + v[1]) + 270.0 * (v[4] + v[2]) - 490.0 * v[3]) / (180.0 * h * h);
        let (t1, t2, t3) = (z * (1.0 - z) * d2, (g - (a + b + 1.0) * z) * d1, a * b * v[3]);
        let res = (t1 + t2 - t3).norm() / (t1.norm() + t2.norm() + t3.norm());
        assert!(res < 1e-9, "{res} at {z}");
    }
    assert!(gauss_equation_residual(a, b, g, C::new(0.4, 0.1)).unwrap() < 1e-9);
}

#[test]
fn log_regimes_join_the_generic_formula() {
    // γ - α - β straddling 0, 2 and -1, evaluated beyond the series disc
    let z = C::new(0.92, 0.15);
    for (a, b, g0) in [(0.3, 0.45, 0.75), (0.3, 0.45, 2.75), (1.1, 0.4, 0.5)] {
        let at = |g: f64| gauss_2f1_diag(&GaussParams::real(a, b, g, z)).unwrap();
        let exact = at(g0);
        assert!(matches!(exact.region, Region::LogNonnegative { .. } | Region::LogNegative { .. }), "{:?}", exact.region);
        for d in [1e-6, -1e-6] {
            let near = at(g0 + d);
            assert!(matches!(near.region, Region::Connection), "{:?}", near.region);
            assert!((near.value - exact.value).norm() < 1e-4 * exact.value.norm(), "{} vs {}", near.value, exact.value);
        }
    }
}

#[test]
fn limit_near_one_examples() {
    let v = limit_near_one(c(1.0), c(1.0), c(0.5)).unwrap();
    assert!((v - c(std::f64::consts::FRAC_PI_2)).norm() < 1e-14);
    let (a, b, g) = (C::new(1.3, 0.2), c(0.9), c(0.6));
    assert!((limit_near_one(a, b, g).unwrap() - limit_near_one(b, a, g).unwrap()).norm() < 1e-14);
    // a nonpositive integer β̃ terminates the series and kills the limit
    assert_eq!(limit_near_one(c(2.5), c(-2.0), c(-0.25)).unwrap(), c(0.0));
    let poly = gauss_2f1(&GaussParams::real(-2.0, 1.5, 0.7, c(0.4))).unwrap();
    let direct = 1.0 + (-2.0 * 1.5 / 0.7) * 0.4 + (-2.0 * -1.0 * 1.5 * 2.5) / (0.7 * 1.7 * 2.0) * 0.16;
    assert!((poly - c(direct)).norm() < 1e-14);
}
