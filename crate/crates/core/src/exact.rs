//! Exact rational and Gaussian-rational scalars plus a small dense matrix type.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = BigRational;
/// Gaussian rational `re + i·im`.
pub type QC = Complex<BigRational>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qc(re: Q, im: Q) -> QC {
    Complex::new(re, im)
}

pub fn qc_real(re: Q) -> QC {
    Complex::new(re, Q::zero())
}

pub fn qc_i() -> QC {
    Complex::new(Q::zero(), Q::one())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Dense square matrix over any commutative ring of scalars.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    n: usize,
    data: Vec<T>,
}

impl<T> Mat<T>
where
    T: Clone + Zero + One + PartialEq,
{
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Mat<U> {
        Mat { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &T) -> Self
    where
        T: Mul<Output = T>,
    {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn apply(&self, v: &[T]) -> Vec<T>
    where
        T: Mul<Output = T> + Add<Output = T>,
    {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.n {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc + a.clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push((i, j, v.clone()));
                }
            }
        }
        out
    }
}

impl<T> Add for &Mat<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T>,
{
    type Output = Mat<T>;
    fn add(self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, o.n);
        Mat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect() }
    }
}

impl<T> Sub for &Mat<T>
where
    T: Clone + Zero + One + PartialEq + Sub<Output = T>,
{
    type Output = Mat<T>;
    fn sub(self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, o.n);
        Mat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect() }
    }
}

impl<T> Neg for &Mat<T>
where
    T: Clone + Zero + One + PartialEq + Neg<Output = T>,
{
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl<T> Mul for &Mat<T>
where
    T: Clone + Zero + One + PartialEq + Mul<Output = T> + Add<Output = T>,
{
    type Output = Mat<T>;
    fn mul(self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out: Mat<T> = Mat::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.data[i * n + j].clone();
                    out.data[i * n + j] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

pub fn commutator<T>(a: &Mat<T>, b: &Mat<T>) -> Mat<T>
where
    T: Clone + Zero + One + PartialEq + Mul<Output = T> + Add<Output = T> + Sub<Output = T>,
{
    &(a * b) - &(b * a)
}

pub fn anticommutator<T>(a: &Mat<T>, b: &Mat<T>) -> Mat<T>
where
    T: Clone + Zero + One + PartialEq + Mul<Output = T> + Add<Output = T>,
{
    &(a * b) + &(b * a)
}

pub fn complexify(m: &Mat<Q>) -> Mat<QC> {
    m.map(|x| qc_real(x.clone()))
}

pub fn to_c64(m: &Mat<QC>) -> nalgebra::DMatrix<num_complex::Complex64> {
    let n = m.size();
    nalgebra::DMatrix::from_fn(n, n, |i, j| {
        let z = m.get(i, j);
        num_complex::Complex64::new(to_f64(&z.re), to_f64(&z.im))
    })
}

impl fmt::Display for Mat<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn fmt_qc(z: &QC) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        _ => format!("{}{}{}i", z.re, if z.im.is_negative() { "" } else { "+" }, z.im),
    }
}
