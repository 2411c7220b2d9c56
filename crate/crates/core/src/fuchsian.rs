//! Fuchsian equations of the radial problem: characteristic exponents, the
//! Heun form for both potentials, Maier's reducibility cases, and the
//! quadratic reduction `z = t(2 - t)` to the Gauss equation.

use crate::error::{invalid, Error, Result};
use crate::radial::{oscillator_zeta_form, spectral_ode, PhysicalParams, PotentialKind, RadialCoefficients};
use num_complex::Complex64;
use std::fmt;

type C = Complex64;

const I: C = C::new(0.0, 1.0);

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Finite(C),
    Infinity,
}

impl Point {
    pub fn real(x: f64) -> Self {
        Point::Finite(re(x))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    fn close_to(&self, other: &Point, tol: f64) -> bool {
        match (self, other) {
            (Point::Infinity, Point::Infinity) => true,
            (Point::Finite(a), Point::Finite(b)) => (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm())),
            _ => false,
        }
    }

    /// Image under `z ↦ (a z + b) / (c z + d)`.
    pub fn mobius(&self, a: C, b: C, c: C, d: C) -> Point {
        match self {
            Point::Infinity => {
                if c == C::new(0.0, 0.0) {
                    Point::Infinity
                } else {
                    Point::Finite(a / c)
                }
            }
            Point::Finite(z) => {
                let den = c * z + d;
                if den.norm() == 0.0 {
                    Point::Infinity
                } else {
                    Point::Finite((a * z + b) / den)
                }
            }
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "∞"),
            Point::Finite(z) => write!(f, "{}", fmt_c(*z)),
        }
    }
}

/// Short text form of a complex number, dropping negligible parts.
pub fn fmt_c(z: C) -> String {
    let clean = |x: f64| if x.abs() < 1e-13 { 0.0 } else { x };
    let (a, b) = (clean(z.re), clean(z.im));
    match (a == 0.0, b == 0.0) {
        (_, true) => format!("{a:.6}"),
        (true, false) => format!("{b:.6}i"),
        _ => format!("{a:.6}{}{:.6}i", if b < 0.0 { "-" } else { "+" }, b.abs()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub point: Point,
    /// `(ρ₊, ρ₋)`
    pub exponents: (C, C),
}

/// Second-order Fuchsian equation given by its singular points and exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianEq {
    pub variable: String,
    pub singular_points: Vec<SingularPoint>,
}

impl FuchsianEq {
    pub fn finite_count(&self) -> usize {
        self.singular_points.iter().filter(|s| !s.point.is_infinite()).count()
    }

    pub fn exponent_sum(&self) -> C {
        self.singular_points.iter().map(|s| s.exponents.0 + s.exponents.1).sum()
    }

    /// `½(m - 1) n (n - 1)` with order `n = 2` and `m` finite singular points.
    pub fn fuchs_expected(&self) -> f64 {
        self.finite_count() as f64 - 1.0
    }

    pub fn fuchs_defect(&self) -> f64 {
        (self.exponent_sum() - re(self.fuchs_expected())).norm()
    }

    pub fn exponents_at(&self, p: Point) -> Option<(C, C)> {
        self.singular_points.iter().find(|s| s.point.close_to(&p, 1e-12)).map(|s| s.exponents)
    }

    pub fn p_symbol(&self) -> String {
        let cols: Vec<[String; 3]> = self.singular_points.iter().map(|s| [s.point.to_string(), fmt_c(s.exponents.0), fmt_c(s.exponents.1)]).collect();
        p_symbol_text(&cols, &self.variable)
    }
}

fn p_symbol_text(cols: &[[String; 3]], var: &str) -> String {
    let widths: Vec<usize> = cols.iter().map(|c| c.iter().map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in 0..3 {
        out.push_str(if row == 0 { "P{ " } else { "   " });
        for (c, w) in cols.iter().zip(&widths) {
            let cell = &c[row];
            out.push_str(cell);
            out.push_str(&" ".repeat(w - cell.chars().count() + 2));
        }
        if row == 0 {
            out.push_str(&format!("; {var} }}"));
        }
        out = out.trim_end().to_string();
        out.push('\n');
    }
    out
}

fn sqrt_c(z: C) -> C {
    z.sqrt()
}

fn pair(mid: C, half_root: C) -> (C, C) {
    (mid + half_root, mid - half_root)
}

struct Inputs {
    n: f64,
    a: f64,
    b: f64,
    c: f64,
    m: f64,
    rr: f64,
    g: f64,
    e: f64,
}

fn inputs(n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, energy: f64) -> Inputs {
    Inputs { n: n as f64, a: coeffs.a_f64(), b: coeffs.b_f64(), c: coeffs.c_f64(), m: params.reduced_mass(), rr: params.radius, g: params.coupling, e: energy }
}

fn rho_zero(n: f64, a: f64) -> (C, C) {
    pair(re(1.0 - n / 2.0), 0.5 * sqrt_c(re((n - 2.0).powi(2) + 32.0 * a)))
}

/// Exponents in `r` at `0, i, -i, ∞` for the Coulomb equation.
pub fn coulomb_exponents(n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, energy: f64) -> FuchsianEq {
    let v = inputs(n, coeffs, params, energy);
    let base = (v.n - 1.0).powi(2) + 8.0 * (v.m * v.e * v.rr * v.rr + v.a - v.b + v.c);
    let shift = 8.0 * v.m * v.rr * v.g;
    let at_i = pair(re((v.n - 1.0) / 2.0), 0.5 * sqrt_c(C::new(base, -shift)));
    let at_minus_i = pair(re((v.n - 1.0) / 2.0), 0.5 * sqrt_c(C::new(base, shift)));
    FuchsianEq {
        variable: "r".into(),
        singular_points: vec![
            SingularPoint { point: Point::real(0.0), exponents: rho_zero(v.n, v.a) },
            SingularPoint { point: Point::Finite(I), exponents: at_i },
            SingularPoint { point: Point::Finite(-I), exponents: at_minus_i },
            SingularPoint { point: Point::Infinity, exponents: rho_zero(v.n, v.c) },
        ],
    }
}

/// Exponents in `r` at `0, 1, -1, i, -i, ∞` for the oscillator equation.
pub fn oscillator_exponents(n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, energy: f64) -> FuchsianEq {
    let v = inputs(n, coeffs, params, energy);
    let one = pair(re(0.5), 0.5 * sqrt_c(re(1.0 + 4.0 * v.rr.powi(4) * v.m * v.g * v.g)));
    let rad = (v.n - 1.0).powi(2) + 8.0 * v.m * v.e * v.rr * v.rr + 4.0 * v.m * v.rr.powi(4) * v.g * v.g + 8.0 * (v.a - v.b + v.c);
    let at_i = pair(re((v.n - 1.0) / 2.0), 0.5 * sqrt_c(re(rad)));
    FuchsianEq {
        variable: "r".into(),
        singular_points: vec![
            SingularPoint { point: Point::real(0.0), exponents: rho_zero(v.n, v.a) },
            SingularPoint { point: Point::real(1.0), exponents: one },
            SingularPoint { point: Point::real(-1.0), exponents: one },
            SingularPoint { point: Point::Finite(I), exponents: at_i },
            SingularPoint { point: Point::Finite(-I), exponents: at_i },
            SingularPoint { point: Point::Infinity, exponents: rho_zero(v.n, v.c) },
        ],
    }
}

/// `(z₁ - z₃)(z₂ - z₄) / ((z₁ - z₄)(z₂ - z₃))`; factors containing `∞` cancel.
pub fn cross_ratio(z: [Point; 4]) -> Result<C> {
    for i in 0..4 {
        for j in i + 1..4 {
            if z[i].close_to(&z[j], 1e-14) {
                return invalid(format!("cross-ratio needs distinct points, got {} twice", z[i]));
            }
        }
    }
    let diff = |a: Point, b: Point| match (a, b) {
        (Point::Finite(x), Point::Finite(y)) => Some(x - y),
        _ => None,
    };
    let mut num = re(1.0);
    let mut den = re(1.0);
    for f in [diff(z[0], z[2]), diff(z[1], z[3])].into_iter().flatten() {
        num *= f;
    }
    for f in [diff(z[0], z[3]), diff(z[1], z[2])].into_iter().flatten() {
        den *= f;
    }
    Ok(num / den)
}

/// The six values `s, 1-s, 1/s, 1/(1-s), s/(s-1), (s-1)/s`.
pub fn cross_ratio_orbit(s: C) -> [C; 6] {
    let one = re(1.0);
    [s, one - s, one / s, one / (one - s), s / (s - one), (s - one) / s]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadrupleKind {
    Harmonic,
    Equianharmonic,
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossRatioClass {
    pub ratio: C,
    /// Distinct orbit values (6, 3 or 2 of them).
    pub orbit: Vec<C>,
    pub kind: QuadrupleKind,
}

pub const ORBIT_TOL: f64 = 1e-9;

fn in_orbit(s: C, target: C) -> bool {
    cross_ratio_orbit(s).iter().any(|v| (v - target).norm() <= ORBIT_TOL * (1.0 + target.norm()))
}

pub fn cross_ratio_classify(z: [Point; 4]) -> Result<CrossRatioClass> {
    let s = cross_ratio(z)?;
    let mut orbit: Vec<C> = Vec::new();
    for v in cross_ratio_orbit(s) {
        if !orbit.iter().any(|u| (u - v).norm() <= ORBIT_TOL) {
            orbit.push(v);
        }
    }
    let kind = if in_orbit(s, re(-1.0)) {
        QuadrupleKind::Harmonic
    } else if in_orbit(s, C::new(0.5, 3f64.sqrt() / 2.0)) {
        QuadrupleKind::Equianharmonic
    } else {
        QuadrupleKind::Generic
    };
    Ok(CrossRatioClass { ratio: s, orbit, kind })
}

/// Parameters of `w'' + (γ/t + δ/(t-1) + ε/(t-d)) w' + (αβt - q)/(t(t-1)(t-d)) w = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeunParams {
    pub alpha: C,
    pub beta: C,
    pub gamma: C,
    pub delta: C,
    pub epsilon: C,
    pub d: C,
    pub q: C,
}

impl HeunParams {
    /// `|α + β - γ - δ - ε + 1|`
    pub fn constraint_residual(&self) -> f64 {
        (self.alpha + self.beta - self.gamma - self.delta - self.epsilon + 1.0).norm()
    }

    pub fn p(&self, t: C) -> C {
        self.gamma / t + self.delta / (t - 1.0) + self.epsilon / (t - self.d)
    }

    pub fn q_coeff(&self, t: C) -> C {
        (self.alpha * self.beta * t - self.q) / (t * (t - 1.0) * (t - self.d))
    }

    /// `t ↦ 1 - t`
    pub fn reflect(&self) -> HeunParams {
        HeunParams { gamma: self.delta, delta: self.gamma, d: 1.0 - self.d, q: self.alpha * self.beta - self.q, ..*self }
    }

    /// `t ↦ t / d`
    pub fn rescale(&self) -> HeunParams {
        HeunParams { delta: self.epsilon, epsilon: self.delta, d: 1.0 / self.d, q: self.q / self.d, ..*self }
    }

    pub fn p_symbol(&self) -> String {
        let one = re(1.0);
        let cols = [
            ["0".to_string(), "0".into(), fmt_c(one - self.gamma)],
            ["1".into(), "0".into(), fmt_c(one - self.delta)],
            [fmt_c(self.d), "0".into(), fmt_c(one - self.epsilon)],
            ["∞".into(), fmt_c(self.alpha), fmt_c(self.beta)],
        ];
        p_symbol_text(&cols, "t")
    }
}

fn validate_heun(h: &HeunParams) -> Result<()> {
    let vals = [h.alpha, h.beta, h.gamma, h.delta, h.epsilon, h.d, h.q];
    if vals.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return invalid("Heun parameters must be finite");
    }
    if h.d.norm() < 1e-12 || (h.d - 1.0).norm() < 1e-12 {
        return invalid("Heun parameter d must differ from 0 and 1");
    }
    Ok(())
}

/// Heun form of the radial equation.
///
/// Coulomb: `t = 2r/(r+i)`, `f = t^{ρ₀₊}(t-1)^{ρᵢ₊}(t-2)^{ρ∞₊} w`.
/// Oscillator: `ζ = r²`, `t = 2ζ/(ζ+1)`, `f = t^{ρ₀₊/2}(t-1)^{ρ₁₊}(t-2)^{ρ∞₊/2} w`.
pub fn to_heun(kind: PotentialKind, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, energy: f64) -> HeunParams {
    let v = inputs(n, coeffs, params, energy);
    match kind {
        PotentialKind::Coulomb => {
            let ex = coulomb_exponents(n, coeffs, params, energy);
            let (r0p, r0m) = ex.singular_points[0].exponents;
            let (rip, rim) = ex.singular_points[1].exponents;
            let (rmp, rmm) = ex.singular_points[2].exponents;
            let (rfp, rfm) = ex.singular_points[3].exponents;
            let base = r0p + rip + rfp;
            let q = 4.0 * r0p * rip + 2.0 * r0p * rfp - (v.n - 3.0) * r0p + (v.n - 1.0) * (2.0 * rip + rfp) - 4.0 * I * v.m * v.rr * v.g + 16.0 * v.a;
            HeunParams { alpha: base + rmp, beta: base + rmm, gamma: 1.0 + r0p - r0m, delta: 1.0 + rip - rim, epsilon: 1.0 + rfp - rfm, d: re(2.0), q }
        }
        PotentialKind::Oscillator => {
            let ex = oscillator_exponents(n, coeffs, params, energy);
            let (r0p, r0m) = ex.singular_points[0].exponents;
            let (r1p, r1m) = ex.singular_points[1].exponents;
            let (rip, rim) = ex.singular_points[3].exponents;
            let (rfp, rfm) = ex.singular_points[5].exponents;
            let base = 0.5 * r0p + r1p + 0.5 * rfp;
            let q = -2.0 * v.m * v.rr * v.rr * v.e + 2.0 * v.b + v.n * (r1p + 0.25 * rfp) + 2.0 * r0p * r1p + 0.5 * r0p * rfp + 0.25 * v.n * r0p;
            HeunParams {
                alpha: base + rip,
                beta: base + rim,
                gamma: 1.0 + 0.5 * (r0p - r0m),
                delta: 1.0 + r1p - r1m,
                epsilon: 1.0 + 0.5 * (rfp - rfm),
                d: re(2.0),
                q,
            }
        }
    }
}

/// Coefficients of `w` after substituting `x = x(t)` and `f = Π (t - tⱼ)^{hⱼ} w`
/// into `f'' + p f' + q f = 0`.
fn pulled_back(p: C, q: C, dx: C, d2x: C, t: C, shifts: &[(C, C)]) -> (C, C) {
    let a = p * dx - d2x / dx;
    let b = q * dx * dx;
    let l: C = shifts.iter().map(|(tj, h)| h / (t - tj)).sum();
    let lp: C = shifts.iter().map(|(tj, h)| -h / ((t - tj) * (t - tj))).sum();
    (2.0 * l + a, lp + l * l + a * l + b)
}

/// Largest relative mismatch between the transformed radial equation and the
/// Heun equation built by [`to_heun`], over points on `|t - 1| = ½`.
pub fn heun_construction_residual(kind: PotentialKind, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams, energy: f64) -> f64 {
    let h = to_heun(kind, n, coeffs, params, energy);
    let ex = match kind {
        PotentialKind::Coulomb => coulomb_exponents(n, coeffs, params, energy),
        PotentialKind::Oscillator => oscillator_exponents(n, coeffs, params, energy),
    };
    let plus = |i: usize| ex.singular_points[i].exponents.0;
    let mut worst: f64 = 0.0;
    for k in 0..30 {
        let t = 1.0 + 0.5 * C::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / 30.0);
        let two_minus = 2.0 - t;
        let (wp, wq) = match kind {
            PotentialKind::Coulomb => {
                let ode = spectral_ode(n, coeffs, params, kind, energy);
                let r = I * t / two_minus;
                let dr = 2.0 * I / (two_minus * two_minus);
                let d2r = 4.0 * I / (two_minus * two_minus * two_minus);
                let shifts = [(re(0.0), plus(0)), (re(1.0), plus(1)), (re(2.0), plus(3))];
                pulled_back(ode.p_c(r), ode.q_c(r), dr, d2r, t, &shifts)
            }
            PotentialKind::Oscillator => {
                let ode = oscillator_zeta_form(n, coeffs, params, energy);
                let z = t / two_minus;
                let dz = 2.0 / (two_minus * two_minus);
                let d2z = 4.0 / (two_minus * two_minus * two_minus);
                let shifts = [(re(0.0), 0.5 * plus(0)), (re(1.0), plus(1)), (re(2.0), 0.5 * plus(5))];
                pulled_back(ode.p_c(z), ode.q_c(z), dz, d2z, t, &shifts)
            }
        };
        let hp = h.p(t);
        let poly = t * (t - 1.0) * (t - 2.0);
        let target = h.alpha * h.beta * t - h.q;
        let e1 = (wp - hp).norm() / (hp.norm() + 1.0);
        let e2 = (wq * poly - target).norm() / ((h.alpha * h.beta * t).norm() + h.q.norm() + 1.0);
        worst = worst.max(e1).max(e2);
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MaierCase {
    One,
    Two,
    Three,
    Four,
    Five,
}

impl MaierCase {
    pub fn number(&self) -> u8 {
        match self {
            MaierCase::One => 1,
            MaierCase::Two => 2,
            MaierCase::Three => 3,
            MaierCase::Four => 4,
            MaierCase::Five => 5,
        }
    }

    pub const ALL: [MaierCase; 5] = [MaierCase::One, MaierCase::Two, MaierCase::Three, MaierCase::Four, MaierCase::Five];

    /// Canonical value of `d`.
    pub fn representative(&self) -> C {
        match self {
            MaierCase::One => re(2.0),
            MaierCase::Two => re(4.0),
            MaierCase::Three => C::new(0.5, 3f64.sqrt() / 2.0),
            MaierCase::Four => C::new(0.5, 5.0 * 2f64.sqrt() / 4.0),
            MaierCase::Five => C::new(0.5, 11.0 * 15f64.sqrt() / 90.0),
        }
    }

    /// Required value of `q/(αβ)` at the canonical `d`.
    pub fn accessory_ratio(&self) -> C {
        match self {
            MaierCase::One | MaierCase::Two => re(1.0),
            MaierCase::Three => C::new(0.5, 3f64.sqrt() / 6.0),
            MaierCase::Four => C::new(0.5, 2f64.sqrt() / 4.0),
            MaierCase::Five => C::new(0.5, 15f64.sqrt() / 18.0),
        }
    }
}

/// `s = scale·t + shift`, built from reflections and rescalings.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub scale: C,
    pub shift: C,
    pub steps: Vec<String>,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap { scale: re(1.0), shift: re(0.0), steps: vec![] }
    }

    pub fn apply(&self, t: C) -> C {
        self.scale * t + self.shift
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            write!(f, "s = t")
        } else {
            write!(f, "s = ({})·t + ({}) via {}", fmt_c(self.scale), fmt_c(self.shift), self.steps.join(", "))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub residual: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaierReport {
    pub case: Option<MaierCase>,
    /// Case whose orbit contains `d`, whether or not its constraints hold.
    pub orbit_case: Option<MaierCase>,
    /// Parameters after moving `d` to the canonical value.
    pub normalized: HeunParams,
    pub map: AffineMap,
    pub constraints: Vec<Constraint>,
    /// Coefficients of `P(t)` in the normalized variable, lowest degree first.
    pub polynomial: Vec<C>,
    /// Higher-degree substitution available under the extra condition.
    pub alternative: Option<Vec<C>>,
}

pub const MAIER_TOL: f64 = 1e-9;

fn close(a: C, b: C) -> (f64, bool) {
    let r = (a - b).norm();
    (r, r <= MAIER_TOL * (1.0 + a.norm().max(b.norm())))
}

fn constraint(name: &str, a: C, b: C) -> Constraint {
    let (residual, holds) = close(a, b);
    Constraint { name: name.into(), residual, holds }
}

fn poly_mul(a: &[C], b: &[C]) -> Vec<C> {
    let mut out = vec![re(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &[C], k: usize) -> Vec<C> {
    (0..k).fold(vec![re(1.0)], |acc, _| poly_mul(&acc, a))
}

fn poly_add_const(a: &[C], c: C) -> Vec<C> {
    let mut out = a.to_vec();
    out[0] += c;
    out
}

fn poly_scale(a: &[C], c: C) -> Vec<C> {
    a.iter().map(|x| x * c).collect()
}

/// Evaluates `Σ cⱼ tʲ` with its first two derivatives.
pub fn poly_eval(p: &[C], t: C) -> (C, C, C) {
    let (mut v, mut d1, mut d2) = (re(0.0), re(0.0), re(0.0));
    for c in p.iter().rev() {
        d2 = d2 * t + 2.0 * d1;
        d1 = d1 * t + v;
        v = v * t + c;
    }
    (v, d1, d2)
}

fn substitution(case: MaierCase) -> Vec<C> {
    let one = re(1.0);
    match case {
        MaierCase::One => vec![re(0.0), re(2.0), -one],
        MaierCase::Two => poly_mul(&poly_pow(&[-one, one], 2), &[one, re(-0.25)]),
        MaierCase::Three => poly_pow(&[one, -one / case.accessory_ratio()], 3),
        MaierCase::Four => poly_mul(&[one, -one / case.representative()], &poly_pow(&[one, -one / case.accessory_ratio()], 3)),
        MaierCase::Five => {
            let k = -I * 2025.0 * 15f64.sqrt() / 64.0;
            let base = poly_mul(&[re(0.0), -one], &[-one, one]);
            let base = poly_scale(&base, -one);
            poly_scale(&poly_mul(&base, &poly_pow(&[-case.accessory_ratio(), one], 3)), k)
        }
    }
}

fn alternative(case: MaierCase) -> Vec<C> {
    let p = substitution(case);
    let inner = poly_add_const(&p, re(-0.5));
    poly_scale(&poly_mul(&inner, &inner), re(4.0))
}

/// States reachable from `h` by `t ↦ 1 - t` and `t ↦ t/d`.
fn orbit_states(h: &HeunParams) -> Vec<(HeunParams, AffineMap)> {
    let mut states = vec![(*h, AffineMap::identity())];
    let mut i = 0;
    while i < states.len() && states.len() < 12 {
        let (cur, map) = states[i].clone();
        let refl = cur.reflect();
        let resc = cur.rescale();
        let m1 = AffineMap { scale: -map.scale, shift: 1.0 - map.shift, steps: [map.steps.clone(), vec!["t ↦ 1-t".into()]].concat() };
        let m2 =
            AffineMap { scale: map.scale / cur.d, shift: map.shift / cur.d, steps: [map.steps.clone(), vec![format!("t ↦ t/({})", fmt_c(cur.d))]].concat() };
        for (s, m) in [(refl, m1), (resc, m2)] {
            if !states.iter().any(|(x, _)| (x.d - s.d).norm() <= ORBIT_TOL * (1.0 + s.d.norm())) {
                states.push((s, m));
            }
        }
        i += 1;
    }
    states
}

/// Maier's test for a pullback of the Gauss equation by a polynomial.
pub fn maier_classify(h: &HeunParams) -> Result<MaierReport> {
    validate_heun(h)?;
    let ab = h.alpha * h.beta;
    if ab.norm() <= MAIER_TOL && h.q.norm() <= MAIER_TOL {
        return Err(Error::Validation("trivial Heun equation: αβ = 0 and q = 0".into()));
    }
    let mut report =
        MaierReport { case: None, orbit_case: None, normalized: *h, map: AffineMap::identity(), constraints: vec![], polynomial: vec![], alternative: None };
    let states = orbit_states(h);
    for case in MaierCase::ALL {
        let target = case.representative();
        let Some((norm, map)) = states.iter().find(|(s, _)| close(s.d, target).1) else {
            continue;
        };
        let ab = norm.alpha * norm.beta;
        let ratio = if ab.norm() <= MAIER_TOL { C::new(f64::INFINITY, 0.0) } else { norm.q / ab };
        let one = re(1.0);
        let half = re(0.5);
        let two3 = re(2.0 / 3.0);
        let mut cs = vec![constraint("q/(αβ)", ratio, case.accessory_ratio())];
        match case {
            MaierCase::One => cs.push(constraint("γ = ε", norm.gamma, norm.epsilon)),
            MaierCase::Two => {
                cs.push(constraint("1-δ = 2(1-ε)", one - norm.delta, 2.0 * (one - norm.epsilon)));
                cs.push(constraint("γ = 1/2", norm.gamma, half));
            }
            MaierCase::Three => {
                cs.push(constraint("γ = δ", norm.gamma, norm.delta));
                cs.push(constraint("δ = ε", norm.delta, norm.epsilon));
            }
            MaierCase::Four => {
                cs.push(constraint("ε = 2/3", norm.epsilon, two3));
                cs.push(constraint("γ = 1/2", norm.gamma, half));
                cs.push(constraint("δ = 1/2", norm.delta, half));
            }
            MaierCase::Five => {
                cs.push(constraint("ε = 1/2", norm.epsilon, half));
                cs.push(constraint("γ = 2/3", norm.gamma, two3));
                cs.push(constraint("δ = 2/3", norm.delta, two3));
            }
        }
        let holds = cs.iter().all(|c| c.holds);
        report.orbit_case = Some(case);
        report.normalized = *norm;
        report.map = map.clone();
        report.constraints = cs;
        if holds {
            report.case = Some(case);
            report.polynomial = substitution(case);
            report.alternative = match case {
                MaierCase::One if close(one - norm.delta, 2.0 * (one - norm.gamma)).1 => Some(alternative(case)),
                MaierCase::Three if close(norm.gamma, two3).1 => Some(alternative(case)),
                _ => None,
            };
        }
        break;
    }
    Ok(report)
}

/// Largest relative mismatch between the equation of `h` and the equation of
/// `normalized` pulled back along `map`.
pub fn normalization_residual(h: &HeunParams, normalized: &HeunParams, map: &AffineMap) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..30 {
        let t = h.d / 2.0 + (0.3 + 0.4 * h.d.norm()) * C::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / 30.0);
        let s = map.apply(t);
        let (p0, q0) = (h.p(t), h.q_coeff(t));
        let (p1, q1) = (normalized.p(s) * map.scale, normalized.q_coeff(s) * map.scale * map.scale);
        worst = worst.max((p0 - p1).norm() / (p0.norm() + 1.0)).max((q0 - q1).norm() / (q0.norm() + 1.0));
    }
    worst
}

/// Gauss parameters `(α̃, β̃, γ̃)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypergeomParams {
    pub alpha_t: C,
    pub beta_t: C,
    pub gamma_t: C,
}

/// Case-1 reduction: `z = t(2-t)` carries the Gauss equation with
/// `(α/2, β/2, γ)` onto the normalized Heun equation.
pub fn reduce_case1(h: &HeunParams) -> Result<HypergeomParams> {
    let rep = maier_classify(h)?;
    if rep.case != Some(MaierCase::One) {
        let why: Vec<String> = rep.constraints.iter().filter(|c| !c.holds).map(|c| format!("{} (off by {:.3e})", c.name, c.residual)).collect();
        return invalid(format!(
            "Heun equation is not in reduction case 1: {}",
            match rep.orbit_case {
                Some(MaierCase::One) => format!("violated {}", why.join(", ")),
                Some(c) => format!("d lies in the orbit of case {}", c.number()),
                None => format!("d = {} is not harmonic", fmt_c(h.d)),
            }
        ));
    }
    let norm = rep.normalized;
    Ok(HypergeomParams { alpha_t: norm.alpha / 2.0, beta_t: norm.beta / 2.0, gamma_t: norm.gamma })
}

/// Gauss equation pulled back by `z = P(t)`, compared with the Heun equation
/// `h`, on `|t - 1| = ½`.
pub fn pullback_residual(h: &HeunParams, g: &HypergeomParams, poly: &[C]) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..30 {
        let t = 1.0 + 0.5 * C::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 30.0);
        let (z, dz, d2z) = poly_eval(poly, t);
        let zz = z * (1.0 - z);
        let p = (g.gamma_t - (g.alpha_t + g.beta_t + 1.0) * z) * dz / zz - d2z / dz;
        let q = -g.alpha_t * g.beta_t * dz * dz / zz;
        let (hp, hq) = (h.p(t), h.q_coeff(t));
        worst = worst.max((p - hp).norm() / (hp.norm() + 1.0)).max((q - hq).norm() / (hq.norm() + 1.0));
    }
    worst
}
