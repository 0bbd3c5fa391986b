//! Dense univariate polynomials and bivariate `(t, λ)` coefficient tables.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{Rational, Scalar};

/// Polynomial in `t` with ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c · t^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_i64(k as i64))
            .collect();
        Self::new(coeffs)
    }

    /// Antiderivative vanishing at `t = 0`.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / T::from_i64(k as i64 + 1));
        }
        Self::new(coeffs)
    }

    /// Antiderivative vanishing at `t = t0`.
    pub fn integral_from(&self, t0: &T) -> Self {
        let p = self.integral();
        let c = p.eval(t0);
        p - Self::constant(c)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Taylor coefficients about `t0`, i.e. the polynomial `u ↦ p(t0 + u)`.
    pub fn shift(&self, t0: &T) -> Self {
        // repeated synthetic division
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let v = c[j + 1].clone() * t0.clone();
                c[j] = c[j].clone() + v;
            }
        }
        Self::new(c)
    }

    /// Order of vanishing at `t = 0`; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops the first `k` coefficients: `p / t^k` when `t^k` divides `p`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Keeps terms of degree `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(|c| c.to_f64())
    }
}

impl Poly<Rational> {
    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        Self::new(coeffs.to_vec())
    }

    /// Quotient and remainder of Euclidean division by a non-zero `d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::from_i64(0); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = rem[rem.len() - 1].clone() / lead.clone();
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - q.clone() * c.clone();
            }
            quot[k] = q;
            rem.pop();
            while rem.last().is_some_and(num_traits::Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.degree() {
            Some(d) => {
                let lead = a.coeffs[d].clone();
                a.map(|c| c.clone() / lead.clone())
            }
            None => a,
        }
    }

    /// The product of the distinct irreducible factors: same roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Vector of polynomials, one per ambient coordinate.
pub type PolyVec<T> = Vec<Poly<T>>;

pub fn polyvec_derivative<T: Scalar>(v: &[Poly<T>]) -> PolyVec<T> {
    v.iter().map(Poly::derivative).collect()
}

pub fn polyvec_eval<T: Scalar>(v: &[Poly<T>], t: &T) -> Vec<T> {
    v.iter().map(|p| p.eval(t)).collect()
}

/// Determinant of a square matrix of polynomials (cofactor expansion, small sizes only).
pub fn poly_det<T: Scalar>(m: &[Vec<Poly<T>>]) -> Poly<T> {
    let n = m.len();
    match n {
        0 => Poly::constant(T::one()),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly<T>>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &poly_det(&minor);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Polynomial in `(t, λ)`: `coeffs[i][j]` multiplies `t^i λ^j`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BiPoly {
    pub coeffs: Vec<Vec<Rational>>,
}

impl BiPoly {
    pub fn from_terms(terms: &[(usize, usize, Rational)]) -> Self {
        let mut coeffs: Vec<Vec<Rational>> = Vec::new();
        for (i, j, c) in terms {
            if coeffs.len() <= *i {
                coeffs.resize(i + 1, Vec::new());
            }
            let row = &mut coeffs[*i];
            if row.len() <= *j {
                row.resize(j + 1, Rational::from_integer(0.into()));
            }
            row[*j] = row[*j].clone() + c.clone();
        }
        Self { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms(&[(0, 0, c)])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Univariate polynomial in `t` at a fixed family parameter.
    pub fn at_lambda<T: Scalar>(&self, lambda: &T) -> Poly<T> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| {
                let mut acc = T::zero();
                for c in row.iter().rev() {
                    acc = acc * lambda.clone() + T::from_rational(c);
                }
                acc
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn eval_f64(&self, t: f64, lambda: f64) -> f64 {
        self.at_lambda(&lambda).eval(&t)
    }

    pub fn depends_on_lambda(&self) -> bool {
        self.coeffs
            .iter()
            .any(|row| row.iter().skip(1).any(|c| c != &Rational::from_integer(0.into())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_square_free() {
        use crate::scalar::rat;
        let p = |c: &[i64]| Poly::new(c.iter().map(|&v| rat(v, 1)).collect());
        // (t − 1)³ (t + 2)
        let f = &(&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-1, 1])) * &p(&[2, 1]);
        let (q, r) = f.div_rem(&p(&[2, 1]));
        assert!(r.is_zero());
        assert_eq!(q, &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-1, 1]));
        assert_eq!(f.square_free(), &p(&[-1, 1]) * &p(&[2, 1]));
        assert_eq!(p(&[4, 2]).gcd(&p(&[6, 3])), p(&[2, 1]));
    }
    use crate::scalar::rat;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn arithmetic_and_calculus() {
        let a = p(&[1, 2, 3]);
        let b = p(&[0, 1]);
        assert_eq!(&a * &b, p(&[0, 1, 2, 3]));
        assert_eq!(a.derivative(), p(&[2, 6]));
        assert_eq!(a.integral().derivative(), a);
        assert_eq!(a.eval(&rat(2, 1)), rat(17, 1));
        assert_eq!((a.clone() - a.clone()).degree(), None);
    }

    #[test]
    fn shift_is_taylor_expansion() {
        let a = p(&[1, 0, 0, 1]); // 1 + t^3
        let s = a.shift(&rat(1, 1));
        // 1 + (1+u)^3 = 2 + 3u + 3u^2 + u^3
        assert_eq!(s, p(&[2, 3, 3, 1]));
        assert_eq!(p(&[0, 0, 5]).valuation(), Some(2));
    }

    #[test]
    fn determinant_of_polynomial_matrix() {
        let t = p(&[0, 1]);
        let one = p(&[1]);
        let zero = Poly::zero();
        let m = vec![vec![t.clone(), one.clone()], vec![zero, t.clone()]];
        assert_eq!(poly_det(&m), p(&[0, 0, 1]));
    }

    #[test]
    fn bivariate_restriction() {
        // t^2 - λ
        let f = BiPoly::from_terms(&[(2, 0, rat(1, 1)), (0, 1, rat(-1, 1))]);
        assert_eq!(f.at_lambda(&rat(1, 4)), Poly::new(vec![rat(-1, 4), rat(0, 1), rat(1, 1)]));
        assert!(f.depends_on_lambda());
        assert!((f.eval_f64(0.5, 0.25)).abs() < 1e-15);
    }
}
