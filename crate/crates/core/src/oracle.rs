//! Numerical cross-checks that share no algebra with the closed forms:
//! analytic ODE residuals, a shooting eigenvalue solver on the compactified
//! angle `θ = 2·arctan(r)`, norms by double-exponential quadrature, and brute
//! force common eigenvectors of operator families.

use crate::error::{invalid, Error, Result};
use crate::radial::{potential_c, PhysicalParams, PotentialKind, RadialCoefficients, SpectralOde};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use ode_solvers::{Dop853, OutputType, System, Vector3};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

type C = Complex64;

/// A value with its first two derivatives in one complex variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: C,
    pub d1: C,
    pub d2: C,
}

impl Jet {
    pub fn var(x: C) -> Self {
        Jet { v: x, d1: C::new(1.0, 0.0), d2: C::new(0.0, 0.0) }
    }

    pub fn var_real(x: f64) -> Self {
        Self::var(C::new(x, 0.0))
    }

    pub fn constant(c: C) -> Self {
        Jet { v: c, d1: C::new(0.0, 0.0), d2: C::new(0.0, 0.0) }
    }

    /// Principal-branch power.
    pub fn powc(self, s: C) -> Self {
        let g = self.v.powc(s);
        let r1 = self.d1 / self.v;
        let r2 = self.d2 / self.v;
        Jet { v: g, d1: g * s * r1, d2: g * s * ((s - 1.0) * r1 * r1 + r2) }
    }

    pub fn powi(self, k: i32) -> Self {
        self.powc(C::new(k as f64, 0.0))
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet { v: e, d1: e * self.d1, d2: e * (self.d2 + self.d1 * self.d1) }
    }

    pub fn ln(self) -> Self {
        let r = self.d1 / self.v;
        Jet { v: self.v.ln(), d1: r, d2: self.d2 / self.v - r * r }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet { v: self.v * o.v, d1: self.d1 * o.v + self.v * o.d1, d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2 }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let w = self.v / o.v;
        let w1 = (self.d1 - w * o.d1) / o.v;
        let w2 = (self.d2 - 2.0 * w1 * o.d1 - w * o.d2) / o.v;
        Jet { v: w, d1: w1, d2: w2 }
    }
}

impl Add<C> for Jet {
    type Output = Jet;
    fn add(self, c: C) -> Jet {
        Jet { v: self.v + c, ..self }
    }
}

impl Sub<C> for Jet {
    type Output = Jet;
    fn sub(self, c: C) -> Jet {
        Jet { v: self.v - c, ..self }
    }
}

impl Mul<C> for Jet {
    type Output = Jet;
    fn mul(self, c: C) -> Jet {
        Jet { v: self.v * c, d1: self.d1 * c, d2: self.d2 * c }
    }
}

impl Div<C> for Jet {
    type Output = Jet;
    fn div(self, c: C) -> Jet {
        Jet { v: self.v / c, d1: self.d1 / c, d2: self.d2 / c }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self * C::new(c, 0.0)
    }
}

/// Seven-point central differences, for functions without an analytic jet.
pub fn jet_from_samples<F: Fn(f64) -> Result<C>>(f: F, x: f64, h: f64) -> Result<Jet> {
    let mut v = [C::new(0.0, 0.0); 7];
    for (i, slot) in v.iter_mut().enumerate() {
        *slot = f(x + h * (i as f64 - 3.0))?;
    }
    let d1 = (v[6] - v[0] - 9.0 * (v[5] - v[1]) + 45.0 * (v[4] - v[2])) / (60.0 * h);
    let d2 = (2.0 * (v[6] + v[0]) - 27.0 * (v[5] + v[1]) + 270.0 * (v[4] + v[2]) - 490.0 * v[3]) / (180.0 * h * h);
    Ok(Jet { v: v[3], d1, d2 })
}

pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// `max |f'' + p f' + q f| / (|f''| + |p f'| + |q f| + floor)` over `points`.
pub fn ode_residual_with<F, P, Q>(f: F, p: P, q: Q, points: &[f64], floor: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Jet>,
    P: Fn(f64) -> C,
    Q: Fn(f64) -> C,
{
    if points.is_empty() {
        return invalid("residual needs at least one sample point");
    }
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &x in points {
        let (pv, qv) = (p(x), q(x));
        if !(pv.re.is_finite() && pv.im.is_finite() && qv.re.is_finite() && qv.im.is_finite()) {
            return Err(Error::Numeric(format!("sample point {x} is a singular point of the equation")));
        }
        let j = f(x)?;
        scale = scale.max(j.v.norm());
        let t = (j.d2.norm(), (pv * j.d1).norm(), (qv * j.v).norm());
        let res = (j.d2 + pv * j.d1 + qv * j.v).norm() / (t.0 + t.1 + t.2 + floor);
        if !res.is_finite() {
            return Err(Error::Numeric(format!("residual is not finite at {x}")));
        }
        worst = worst.max(res);
    }
    if scale == 0.0 {
        return invalid("the zero function is not a meaningful solution");
    }
    Ok(worst)
}

/// Residual of `f` in the radial equation, at real sample points.
pub fn ode_residual<F: Fn(f64) -> Result<Jet>>(f: F, ode: &SpectralOde, points: &[f64]) -> Result<f64> {
    for &x in points {
        if !(x > 0.0 && x < ode.r_max()) {
            return Err(Error::Numeric(format!("sample point r = {x} is outside the open interval (0, {})", ode.r_max())));
        }
    }
    ode_residual_with(f, |r| ode.p_c(C::new(r, 0.0)), |r| ode.q_c(C::new(r, 0.0)), points, RESIDUAL_FLOOR)
}

/// The radial equation without a fixed energy.
#[derive(Clone, Debug)]
pub struct RadialProblem {
    pub kind: PotentialKind,
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub params: PhysicalParams,
}

impl RadialProblem {
    pub fn new(kind: PotentialKind, n: usize, coeffs: &RadialCoefficients, params: &PhysicalParams) -> Result<Self> {
        coeffs.check_masses(params)?;
        Ok(RadialProblem { kind, n, a: coeffs.a_f64(), b: coeffs.b_f64(), c: coeffs.c_f64(), params: *params })
    }

    pub fn at(&self, energy: f64) -> SpectralOde {
        SpectralOde { kind: self.kind, n: self.n, a: self.a, b: self.b, c: self.c, params: self.params, energy }
    }

    /// Admissible exponent at `r = 0`.
    pub fn rho_inner(&self) -> f64 {
        let n = self.n as f64;
        0.5 * (2.0 - n + ((n - 2.0).powi(2) + 32.0 * self.a).sqrt())
    }

    /// Admissible exponent at the far end: `r = ∞` (Coulomb) or `r = 1` (oscillator).
    pub fn rho_outer(&self) -> f64 {
        let n = self.n as f64;
        match self.kind {
            PotentialKind::Coulomb => 0.5 * (2.0 - n + ((n - 2.0).powi(2) + 32.0 * self.c).sqrt()),
            PotentialKind::Oscillator => {
                let (m, rr, w) = (self.params.reduced_mass(), self.params.radius, self.params.coupling);
                0.5 * (1.0 + (1.0 + 4.0 * rr.powi(4) * m * w * w).sqrt())
            }
        }
    }

    pub fn theta_max(&self) -> f64 {
        match self.kind {
            PotentialKind::Coulomb => PI,
            PotentialKind::Oscillator => PI / 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShootingConfig {
    /// Local coordinate of the series start at `r = 0`.
    pub eps_in: f64,
    /// Local coordinate of the series start at the far end (`1/r` or `1 - r`).
    pub eps_out: f64,
    /// Matching angle; `None` selects the outermost classically allowed point.
    pub match_theta: Option<f64>,
    pub rtol: f64,
    pub atol: f64,
    /// Absolute tolerance on located energies.
    pub e_tol: f64,
    /// Wronskian samples across a bracket.
    pub scan_points: usize,
    pub series_terms: usize,
    /// Sample count for the Cauchy integrals giving local Taylor data.
    pub cauchy_samples: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            eps_in: 0.05,
            eps_out: 0.05,
            match_theta: None,
            rtol: 1e-11,
            atol: 1e-14,
            e_tol: 1e-13,
            scan_points: 24,
            series_terms: 40,
            cauchy_samples: 128,
        }
    }
}

impl ShootingConfig {
    /// Integration range in `θ` between the two series starts.
    pub fn theta_range(&self, prob: &RadialProblem) -> (f64, f64) {
        let end = match prob.kind {
            PotentialKind::Coulomb => 2.0 * (1.0 / self.eps_out).atan(),
            PotentialKind::Oscillator => 2.0 * (1.0 - self.eps_out).atan(),
        };
        (2.0 * self.eps_in.atan(), end)
    }

    /// Matching angle for energies up to `energy`.
    ///
    /// Without a fixed `match_theta` this is the largest `θ` with `g(θ) >= 0`,
    /// kept 5% away from either start. Matching there lets both legs integrate
    /// towards the region where the wanted solution grows.
    pub fn match_point(&self, prob: &RadialProblem, energy: f64) -> f64 {
        if let Some(t) = self.match_theta {
            return t;
        }
        let (t0, t1) = self.theta_range(prob);
        let margin = 0.05 * (t1 - t0);
        let (lo, hi) = (t0 + margin, t1 - margin);
        let ode = prob.at(energy);
        let steps = 400;
        (0..=steps).map(|i| hi - (hi - lo) * i as f64 / steps as f64).find(|&t| theta_g(&ode, t) >= 0.0).unwrap_or(lo)
    }

    fn validate(&self, prob: &RadialProblem) -> Result<()> {
        if !(self.eps_in > 0.0 && self.eps_in < 0.5 && self.eps_out > 0.0 && self.eps_out < 0.5) {
            return invalid("series offsets must lie in (0, 0.5)");
        }
        if let Some(tm) = self.match_theta {
            let (t0, t1) = self.theta_range(prob);
            if !(tm > t0 && tm < t1) {
                return invalid(format!("matching angle {tm} is outside the integration range"));
            }
        }
        if !(self.rtol > 0.0 && self.atol > 0.0 && self.e_tol > 0.0) || self.scan_points < 2 || self.series_terms < 2 {
            return invalid("tolerances must be positive and counts at least 2");
        }
        Ok(())
    }
}

/// Taylor coefficients of `g` at 0 from samples on a circle of radius `radius`.
fn taylor_coefficients(g: &dyn Fn(C) -> C, radius: f64, samples: usize, terms: usize) -> Vec<C> {
    let pts: Vec<C> = (0..samples).map(|k| g(C::from_polar(radius, 2.0 * PI * k as f64 / samples as f64))).collect();
    (0..terms)
        .map(|j| {
            let s: C = pts.iter().enumerate().map(|(k, v)| v * C::from_polar(1.0, -2.0 * PI * (j * k) as f64 / samples as f64)).sum();
            s / samples as f64 / radius.powi(j as i32)
        })
        .collect()
}

/// Local Frobenius solution `x^ρ Σ cⱼ xʲ` of `x² y'' + x P(x) y' + Q(x) y = 0`.
struct Frobenius {
    rho: f64,
    coeffs: Vec<f64>,
}

impl Frobenius {
    fn new(pf: &dyn Fn(C) -> C, qf: &dyn Fn(C) -> C, rho: f64, cfg: &ShootingConfig) -> Self {
        let terms = cfg.series_terms;
        let p = taylor_coefficients(pf, 0.5, cfg.cauchy_samples, terms);
        let q = taylor_coefficients(qf, 0.5, cfg.cauchy_samples, terms);
        let indicial = |s: f64| s * (s - 1.0) + p[0].re * s + q[0].re;
        let mut c = vec![1.0];
        for j in 1..terms {
            let mut acc = 0.0;
            for i in 1..=j {
                acc += c[j - i] * (p[i].re * (rho + (j - i) as f64) + q[i].re);
            }
            c.push(-acc / indicial(rho + j as f64));
        }
        Frobenius { rho, coeffs: c }
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let mut f = 0.0;
        let mut df = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = self.rho + j as f64;
            f += c * x.powf(e);
            df += c * e * x.powf(e - 1.0);
        }
        (f, df)
    }

    /// Sign changes on `(0, x]`; the series starts out positive.
    fn sign_changes(&self, x: f64) -> usize {
        let samples = 64;
        let mut prev = 1.0;
        let mut count = 0;
        for i in 1..=samples {
            let f = self.eval(x * i as f64 / samples as f64).0;
            if f != 0.0 {
                if f.signum() != prev {
                    count += 1;
                }
                prev = f.signum();
            }
        }
        count
    }

    /// Size of the first correction relative to the leading term.
    fn leading_ratio(&self, x: f64) -> f64 {
        (self.coeffs[1] * x).abs()
    }
}

/// Initial data on the `θ` axis from a series start.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesStart {
    pub theta: f64,
    pub f: f64,
    pub df: f64,
    pub leading_ratio: f64,
    /// Zeros of the series between the singular point and the start.
    pub nodes: usize,
}

fn normalized(theta: f64, f: f64, df: f64, leading_ratio: f64, nodes: usize) -> SeriesStart {
    let s = f.abs().max(df.abs());
    SeriesStart { theta, f: f / s, df: df / s, leading_ratio, nodes }
}

pub fn inner_start(prob: &RadialProblem, energy: f64, cfg: &ShootingConfig) -> SeriesStart {
    let ode = prob.at(energy);
    let pf = |x: C| x * ode.p_c(x);
    let qf = |x: C| x * x * ode.q_c(x);
    let fr = Frobenius::new(&pf, &qf, prob.rho_inner(), cfg);
    let r = cfg.eps_in;
    let (f, fr_d) = fr.eval(r);
    normalized(2.0 * r.atan(), f, fr_d * (1.0 + r * r) / 2.0, fr.leading_ratio(r), fr.sign_changes(r))
}

pub fn outer_start(prob: &RadialProblem, energy: f64, cfg: &ShootingConfig) -> SeriesStart {
    let ode = prob.at(energy);
    let x = cfg.eps_out;
    let one = C::new(1.0, 0.0);
    let (r, f, f_r, ratio, nodes) = match prob.kind {
        PotentialKind::Coulomb => {
            let pf = |u: C| 2.0 - ode.p_c(one / u) / u;
            let qf = |u: C| ode.q_c(one / u) / (u * u);
            let fr = Frobenius::new(&pf, &qf, prob.rho_outer(), cfg);
            let (g, dg) = fr.eval(x);
            (1.0 / x, g, -x * x * dg, fr.leading_ratio(x), fr.sign_changes(x))
        }
        PotentialKind::Oscillator => {
            let pf = |u: C| -u * ode.p_c(one - u);
            let qf = |u: C| u * u * ode.q_c(one - u);
            let fr = Frobenius::new(&pf, &qf, prob.rho_outer(), cfg);
            let (g, dg) = fr.eval(x);
            (1.0 - x, g, -dg, fr.leading_ratio(x), fr.sign_changes(x))
        }
    };
    normalized(2.0 * r.atan(), f, f_r * (1.0 + r * r) / 2.0, ratio, nodes)
}

/// `f_θθ + (n-1) cot θ f_θ + 2 (m R² (E - V) - a/r² - b - c r²) f = 0`, `r = tan(θ/2)`.
///
/// `θ` rides along as a third state component: the stepper evaluates its last
/// stage at the wrong abscissa, which only autonomous systems tolerate.
struct ThetaSystem {
    ode: SpectralOde,
}

fn theta_g(o: &SpectralOde, th: f64) -> f64 {
    let r = (th / 2.0).tan();
    let m = o.params.reduced_mass();
    let rr = o.params.radius;
    let v = potential_c(o.kind, &o.params, C::new(r, 0.0)).re;
    2.0 * (m * rr * rr * (o.energy - v) - o.a / (r * r) - o.b - o.c * r * r)
}

impl System<f64, Vector3<f64>> for ThetaSystem {
    fn system(&self, _x: f64, y: &Vector3<f64>, dy: &mut Vector3<f64>) {
        let o = &self.ode;
        let th = y[2];
        dy[0] = y[1];
        dy[1] = -(o.n as f64 - 1.0) / th.tan() * y[1] - theta_g(o, th) * y[0];
        dy[2] = 1.0;
    }
}

/// Integrates from `start` to `to`; returns the end state and the sign changes of `f`.
fn integrate_leg(prob: &RadialProblem, energy: f64, start: SeriesStart, to: f64, cfg: &ShootingConfig) -> Result<([f64; 2], usize)> {
    let sys = ThetaSystem { ode: prob.at(energy) };
    let y0 = Vector3::new(start.f, start.df, start.theta);
    let mut stepper = Dop853::new(sys, start.theta, to, 0.0, y0, cfg.rtol, cfg.atol);
    stepper.set_output(OutputType::Sparse);
    stepper.integrate().map_err(|e| Error::Numeric(format!("integration from θ={:.4} to θ={to:.4} at E={energy} failed: {e}", start.theta)))?;
    let (xs, ys) = (stepper.x_out(), stepper.y_out());
    let last = ys.last().ok_or_else(|| Error::Numeric("integrator returned no output".into()))?;
    if (xs.last().copied().unwrap_or(f64::NAN) - to).abs() > 1e-9 {
        return Err(Error::Numeric(format!("integration stopped short of θ={to}")));
    }
    let mut nodes = 0;
    let mut prev = start.f;
    for y in ys.iter() {
        if y[0] != 0.0 {
            if prev != 0.0 && y[0].signum() != prev.signum() {
                nodes += 1;
            }
            prev = y[0];
        }
    }
    Ok(([last[0], last[1]], nodes))
}

/// Matching data at a fixed energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matching {
    /// Normalized Wronskian of the two boundary-adapted solutions.
    pub wronskian: f64,
    pub nodes: usize,
    pub leading_ratio: f64,
}

pub fn matching(prob: &RadialProblem, energy: f64, cfg: &ShootingConfig) -> Result<Matching> {
    matching_at(prob, energy, cfg.match_point(prob, energy), cfg)
}

/// Matching data at a fixed energy and matching angle `tm`.
pub fn matching_at(prob: &RadialProblem, energy: f64, tm: f64, cfg: &ShootingConfig) -> Result<Matching> {
    cfg.validate(prob)?;
    let si = inner_start(prob, energy, cfg);
    let so = outer_start(prob, energy, cfg);
    let ([f1, d1], n1) = integrate_leg(prob, energy, si, tm, cfg)?;
    let ([f2, d2], n2) = integrate_leg(prob, energy, so, tm, cfg)?;
    let w = (f1 * d2 - d1 * f2) / (f1.hypot(d1) * f2.hypot(d2));
    Ok(Matching { wronskian: w, nodes: si.nodes + n1 + n2 + so.nodes, leading_ratio: si.leading_ratio.max(so.leading_ratio) })
}

pub fn matching_wronskian(prob: &RadialProblem, energy: f64, tm: f64, cfg: &ShootingConfig) -> Result<f64> {
    matching_at(prob, energy, tm, cfg).map(|m| m.wronskian)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShootingResult {
    pub energy: f64,
    /// Sign changes of the Wronskian seen while scanning the bracket.
    pub sign_changes: usize,
    /// Nodes of the matched eigenfunction on the open interval.
    pub nodes: usize,
    pub evaluations: usize,
    /// First series correction relative to the leading term at the starts.
    pub leading_ratio: f64,
}

fn refine_root(prob: &RadialProblem, lo: f64, hi: f64, tm: f64, cfg: &ShootingConfig, evals: &mut usize) -> Result<f64> {
    let failure = RefCell::new(None);
    let mut conv = roots::SimpleConvergency { eps: cfg.e_tol, max_iter: 200 };
    let root = roots::find_root_brent(
        lo,
        hi,
        |e| {
            *evals += 1;
            matching_wronskian(prob, e, tm, cfg).unwrap_or_else(|err| {
                failure.borrow_mut().get_or_insert(err);
                f64::NAN
            })
        },
        &mut conv,
    );
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    root.map_err(|e| Error::Numeric(format!("root refinement in [{lo}, {hi}] failed: {e:?}")))
}

/// First eigenvalue inside `bracket`, or `None` when the Wronskian keeps its sign there.
pub fn shooting_eigenvalue(prob: &RadialProblem, bracket: (f64, f64), cfg: &ShootingConfig) -> Result<Option<ShootingResult>> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return invalid(format!("bracket [{lo}, {hi}] must be finite and increasing"));
    }
    let k = cfg.scan_points;
    let tm = cfg.match_point(prob, hi);
    let es: Vec<f64> = (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect();
    let mut ws = Vec::with_capacity(es.len());
    for &e in &es {
        ws.push(matching_wronskian(prob, e, tm, cfg)?);
    }
    let mut evaluations = ws.len();
    // an exact zero on the grid is one root, not a sign change on both sides
    let mut cells: Vec<usize> = (0..k).filter(|&i| ws[i] == 0.0 || (ws[i + 1] != 0.0 && (ws[i] < 0.0) != (ws[i + 1] < 0.0))).collect();
    if ws[k] == 0.0 {
        cells.push(k);
    }
    let Some(&first) = cells.first() else {
        return Ok(None);
    };
    let energy = if ws[first] == 0.0 { es[first] } else { refine_root(prob, es[first], es[first + 1], tm, cfg, &mut evaluations)? };
    // nodes are read off with the matching angle suited to the root itself
    let m = matching(prob, energy, cfg)?;
    Ok(Some(ShootingResult { energy, sign_changes: cells.len(), nodes: m.nodes, evaluations: evaluations + 1, leading_ratio: m.leading_ratio }))
}

/// Sign changes of the solution regular at `r = 0` across the whole interval.
pub fn count_nodes(prob: &RadialProblem, energy: f64, cfg: &ShootingConfig) -> Result<usize> {
    let si = inner_start(prob, energy, cfg);
    let end = cfg.theta_range(prob).1;
    integrate_leg(prob, energy, si, end, cfg).map(|(_, n)| si.nodes + n)
}

/// The eigenvalue whose eigenfunction has exactly `nodes` interior zeros.
pub fn eigenvalue_by_nodes(prob: &RadialProblem, nodes: usize, cfg: &ShootingConfig) -> Result<ShootingResult> {
    cfg.validate(prob)?;
    let mut lo = -1.0;
    let mut guard = 0;
    while count_nodes(prob, lo, cfg)? > 0 {
        lo *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::Numeric("no energy without nodes found below the spectrum".into()));
        }
    }
    lo = 2.0 * lo - 1.0;
    let mut hi = lo.abs().max(1.0);
    guard = 0;
    while count_nodes(prob, hi, cfg)? < nodes + 2 {
        hi = 2.0 * hi + 1.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::Numeric(format!("could not bracket the level with {nodes} nodes")));
        }
    }
    // shrink the bracket while keeping the target level inside it; the count
    // may lag by one just above a level, so the bracket stays a level wide
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        let c = count_nodes(prob, mid, cfg)?;
        if c >= nodes + 2 {
            hi = mid;
        } else if nodes >= 1 && c < nodes {
            lo = mid;
        } else {
            break;
        }
    }
    let mut points = 64;
    let tm = cfg.match_point(prob, hi);
    for _ in 0..4 {
        let es: Vec<f64> = (0..=points).map(|i| lo + (hi - lo) * i as f64 / points as f64).collect();
        let mut ws = Vec::with_capacity(es.len());
        for &e in &es {
            ws.push(matching_wronskian(prob, e, tm, cfg)?);
        }
        let mut evaluations = ws.len();
        let mut changes = 0;
        for i in 0..points {
            if ws[i].signum() == ws[i + 1].signum() {
                continue;
            }
            changes += 1;
            let e = refine_root(prob, es[i], es[i + 1], tm, cfg, &mut evaluations)?;
            let m = matching(prob, e, cfg)?;
            if m.nodes == nodes {
                return Ok(ShootingResult { energy: e, sign_changes: changes, nodes, evaluations, leading_ratio: m.leading_ratio });
            }
        }
        points *= 2;
    }
    Err(Error::Numeric(format!("no eigenvalue with {nodes} nodes found in [{lo}, {hi}]")))
}

/// `∫ |f|² r^{n-1} / (1+r²)^n dr` over the physical interval, integrated in `θ`.
pub fn norm_squared<F: Fn(f64) -> Result<C>>(kind: PotentialKind, n: usize, f: F, tol: f64) -> Result<f64> {
    let failure = RefCell::new(None);
    let top = match kind {
        PotentialKind::Coulomb => PI,
        PotentialKind::Oscillator => PI / 2.0,
    };
    let integrand = |th: f64| {
        if th <= 0.0 || th >= top {
            return 0.0;
        }
        let r = (th / 2.0).tan();
        let s = 1.0 + r * r;
        match f(r) {
            Ok(v) => v.norm_sqr() * r.powi(n as i32 - 1) / s.powi(n as i32) * s / 2.0,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let out = quadrature::integrate(integrand, 0.0, top, tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !out.integral.is_finite() {
        return Err(Error::Numeric("norm integral is not finite".into()));
    }
    Ok(out.integral)
}

/// Norm at a coarse and a fine tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormCheck {
    pub coarse: f64,
    pub fine: f64,
    pub relative_change: f64,
}

pub fn norm_refinement<F: Fn(f64) -> Result<C> + Copy>(kind: PotentialKind, n: usize, f: F) -> Result<NormCheck> {
    let rough = norm_squared(kind, n, f, 1e-3)?;
    if rough <= 0.0 {
        return Err(Error::Numeric("norm vanishes".into()));
    }
    let coarse = norm_squared(kind, n, f, 1e-7 * rough)?;
    let fine = norm_squared(kind, n, f, 1e-12 * rough)?;
    Ok(NormCheck { coarse, fine, relative_change: (coarse - fine).abs() / fine })
}

/// Joint eigenspace of a family of matrices.
#[derive(Clone, Debug)]
pub struct JointSpace {
    /// One eigenvalue per matrix, in family order.
    pub values: Vec<C>,
    /// Orthonormal columns spanning the space.
    pub basis: DMatrix<C>,
}

impl JointSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Distance of `v` from the span, relative to `|v|`.
    pub fn distance(&self, v: &DVector<C>) -> f64 {
        let proj = &self.basis * (self.basis.adjoint() * v);
        (v - proj).norm() / v.norm()
    }
}

fn eigenvalues(m: &DMatrix<C>, tol: f64) -> Result<Vec<C>> {
    let n = m.nrows();
    let iters = 200 * n.max(1);
    // the unshifted QR iteration can cycle on matrices with ±λ symmetry; a
    // generic complex shift breaks the tie
    let shift = C::new(0.312_745_361, 0.283_914_027) * m.norm().max(1.0);
    let ev = match m.clone().try_schur(f64::EPSILON, iters) {
        Some(s) => s.eigenvalues(),
        None => (m + DMatrix::from_diagonal_element(n, n, shift)).try_schur(f64::EPSILON, iters).and_then(|s| s.eigenvalues()).map(|v| v.map(|x| x - shift)),
    }
    .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
    let mut vals: Vec<C> = ev.iter().copied().collect();
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<C> = Vec::new();
    for v in vals {
        if !out.iter().any(|u| (u - v).norm() <= tol) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Orthonormal basis of the numerical kernel of `m` (rows >= cols).
fn kernel(m: &DMatrix<C>, tol: f64) -> DMatrix<C> {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let picked: Vec<usize> = (0..cols).filter(|&i| svd.singular_values[i] <= tol).collect();
    let mut out = DMatrix::zeros(cols, picked.len());
    for (j, &i) in picked.iter().enumerate() {
        for r in 0..cols {
            out[(r, j)] = vt[(i, r)].conj();
        }
    }
    out
}

fn scale_of(mats: &[DMatrix<C>]) -> f64 {
    mats.iter().map(|m| m.norm()).fold(1.0, f64::max)
}

/// Common eigenvectors of an arbitrary family, grouped by eigenvalue tuple.
///
/// The family need not commute; spaces are sorted by their eigenvalue tuples.
pub fn common_eigenvectors(mats: &[DMatrix<C>], tol: f64) -> Result<Vec<JointSpace>> {
    let Some(first) = mats.first() else {
        return invalid("empty matrix family");
    };
    let n = first.nrows();
    if mats.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return invalid("matrices in a family must be square and of equal size");
    }
    let scale = scale_of(mats);
    let mut spaces = vec![JointSpace { values: vec![], basis: DMatrix::identity(n, n) }];
    for m in mats {
        let eigs = eigenvalues(m, 1e-6 * scale)?;
        let mut next = Vec::new();
        for sp in &spaces {
            for &lam in &eigs {
                let shifted = m - DMatrix::from_diagonal_element(n, n, lam);
                let k = kernel(&(shifted * &sp.basis), tol * scale);
                if k.ncols() == 0 {
                    continue;
                }
                let basis = &sp.basis * k;
                let mut values = sp.values.clone();
                values.push(lam);
                next.push(JointSpace { values, basis });
            }
        }
        spaces = next;
    }
    for sp in &mut spaces {
        // Rayleigh quotients sharpen the clustered eigenvalues
        for (i, m) in mats.iter().enumerate() {
            let proj = sp.basis.adjoint() * m * &sp.basis;
            sp.values[i] = proj.trace() / sp.dim() as f64;
        }
    }
    spaces.sort_by(|a, b| cmp_tuple(&a.values, &b.values));
    Ok(spaces)
}

fn cmp_tuple(a: &[C], b: &[C]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = round12(x.re).total_cmp(&round12(y.re)).then(round12(x.im).total_cmp(&round12(y.im)));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

fn round12(x: f64) -> f64 {
    (x * 1e8).round() / 1e8
}

/// Simultaneous eigenvectors of a commuting family.
///
/// Errors with the largest commutator norm when the family does not commute.
pub fn joint_diagonalize(mats: &[DMatrix<C>], tol: f64) -> Result<Vec<(DVector<C>, Vec<C>)>> {
    let scale = scale_of(mats);
    let mut worst: f64 = 0.0;
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            worst = worst.max((a * b - b * a).norm());
        }
    }
    if worst > tol * scale * scale {
        return Err(Error::Verification(format!("matrices do not commute: largest commutator norm {worst:.3e}")));
    }
    let spaces = common_eigenvectors(mats, tol)?;
    let mut out = Vec::new();
    for sp in spaces {
        for j in 0..sp.dim() {
            out.push((sp.basis.column(j).into_owned(), sp.values.clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::radial_coefficients;

    #[test]
    fn jet_arithmetic() {
        // f = x² e^x / (1 + x)
        let x = Jet::var_real(0.7);
        let f = x * x * x.exp() / (x + C::new(1.0, 0.0));
        let h = jet_from_samples(|t| Ok(C::new(t * t * t.exp() / (1.0 + t), 0.0)), 0.7, 1e-2).unwrap();
        assert!((f.d1 - h.d1).norm() < 1e-9);
        assert!((f.d2 - h.d2).norm() < 1e-8);
        let g = x.powc(C::new(0.5, 1.0)).ln();
        let gh = jet_from_samples(|t| Ok(C::new(t, 0.0).powc(C::new(0.5, 1.0)).ln()), 0.7, 1e-2).unwrap();
        assert!((g.d2 - gh.d2).norm() < 1e-8);
    }

    #[test]
    fn residual_detects_perturbation_and_zero() {
        // y = sin x solves y'' + y = 0
        let pts: Vec<f64> = (1..20).map(|i| i as f64 * 0.15).collect();
        let p = |_| C::new(0.0, 0.0);
        let q = |_| C::new(1.0, 0.0);
        let exact = |x: f64| Ok(Jet { v: C::new(x.sin(), 0.0), d1: C::new(x.cos(), 0.0), d2: C::new(-x.sin(), 0.0) });
        assert!(ode_residual_with(exact, p, q, &pts, RESIDUAL_FLOOR).unwrap() < 1e-15);
        let bent = |x: f64| Ok(exact(x)? + Jet::var_real(x) * 1e-3);
        assert!(ode_residual_with(bent, p, q, &pts, RESIDUAL_FLOOR).unwrap() > 1e-4);
        let zero = |_x: f64| Ok(Jet::constant(C::new(0.0, 0.0)));
        assert!(ode_residual_with(zero, p, q, &pts, RESIDUAL_FLOOR).is_err());
    }

    fn coulomb3() -> RadialProblem {
        let coeffs = radial_coefficients(3, 1, 0).unwrap();
        RadialProblem::new(PotentialKind::Coulomb, 3, &coeffs, &PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn coulomb_level_by_shooting() {
        let prob = coulomb3();
        let cfg = ShootingConfig::default();
        let r = shooting_eigenvalue(&prob, (1.3, 1.45), &cfg).unwrap().unwrap();
        assert!((r.energy - 1.375).abs() < 1e-8, "{}", r.energy);
        assert_eq!(r.sign_changes, 1);
        assert_eq!(r.nodes, 1);
        // below the ground level -0.5 nothing is found
        assert!(shooting_eigenvalue(&prob, (-3.0, -0.7), &cfg).unwrap().is_none());
    }

    #[test]
    fn root_on_a_scan_point_counts_once() {
        // free particle on S^5: ground level -1/8 sits at the bracket centre
        let coeffs = radial_coefficients(5, 1, 0).unwrap();
        let prob = RadialProblem::new(PotentialKind::Coulomb, 5, &coeffs, &PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).unwrap()).unwrap();
        let cfg = ShootingConfig { scan_points: 2, ..Default::default() };
        let r = shooting_eigenvalue(&prob, (-0.625, 0.375), &cfg).unwrap().unwrap();
        assert_eq!(r.sign_changes, 1);
        assert!((r.energy + 0.125).abs() < 1e-12, "{}", r.energy);
    }

    #[test]
    fn oscillator_ground_level_by_shooting() {
        let coeffs = radial_coefficients(2, 1, 0).unwrap();
        let prob = RadialProblem::new(PotentialKind::Oscillator, 2, &coeffs, &PhysicalParams::with_reduced_mass(1.0, 1.0, 1.0).unwrap()).unwrap();
        let want = 0.5 + 5f64.sqrt() / 2.0;
        let r = shooting_eigenvalue(&prob, (want - 0.1, want + 0.1), &ShootingConfig::default()).unwrap().unwrap();
        assert!((r.energy - want).abs() < 1e-8, "{}", r.energy);
        assert_eq!(r.nodes, 0);
    }

    #[test]
    fn strongly_bound_levels_keep_their_node_counts() {
        // the ground state has decayed by ~1e-8 at θ = π/2, and the k = 2 node sits at r ≈ 0.022
        let co = radial_coefficients(2, 1, 0).unwrap();
        let cfg = ShootingConfig::default();
        for (m, r, g, k) in [(2.941122491605326, 2.4265220711360036, 1.7916170206833129, 1u32), (5.816271265279747, 2.0532477812863994, 2.87683252908154, 2)] {
            let p = PhysicalParams::new(m, m, r, g).unwrap();
            let prob = RadialProblem::new(PotentialKind::Coulomb, 2, &co, &p).unwrap();
            let want = crate::spectra::coulomb_energy_value(k, 2, 0.0, 0.0, &p);
            let width = 0.1 * want.abs();
            let hit = shooting_eigenvalue(&prob, (want - width, want + width), &cfg).unwrap().unwrap();
            assert!((hit.energy - want).abs() < 1e-9 * want.abs(), "{} vs {want}", hit.energy);
            assert_eq!(hit.nodes, (k - 1) as usize);
            let by_nodes = eigenvalue_by_nodes(&prob, (k - 1) as usize, &cfg).unwrap();
            assert!((by_nodes.energy - want).abs() < 1e-9 * want.abs());
        }
    }

    #[test]
    fn levels_by_node_count() {
        let prob = coulomb3();
        let cfg = ShootingConfig::default();
        for (nodes, k) in [(0usize, 1.0f64), (2, 3.0)] {
            let want = (k * k - 1.0) / 2.0 - 1.0 / (2.0 * k * k);
            let r = eigenvalue_by_nodes(&prob, nodes, &cfg).unwrap();
            assert!((r.energy - want).abs() < 1e-8, "{} vs {want}", r.energy);
        }
    }

    #[test]
    fn diagonal_family_gives_standard_basis() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(3.0, 0.0)]));
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![C::new(5.0, 0.0), C::new(5.0, 0.0), C::new(-1.0, 0.0)]));
        let out = joint_diagonalize(&[a, b], 1e-10).unwrap();
        assert_eq!(out.len(), 3);
        for (i, (v, vals)) in out.iter().enumerate() {
            assert!((v[i].norm() - 1.0).abs() < 1e-12);
            assert!((vals[0].re - (i + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn non_commuting_family_is_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)]);
        let b = a.transpose();
        let err = joint_diagonalize(&[a, b], 1e-10).unwrap_err();
        assert!(err.to_string().contains("commutator"));
    }
}
