use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Polynomial in `d` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    d: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(d: usize) -> Self {
        Poly { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: Q) -> Self {
        let mut p = Poly::zero(d);
        p.add_term(vec![0; d], c);
        p
    }

    pub fn var(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        let mut p = Poly::zero(d);
        p.add_term(e, Q::one());
        p
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn univariate(coeffs: &[Q]) -> Self {
        let mut p = Poly::zero(1);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(vec![i as u32], c.clone());
        }
        p
    }

    pub fn from_terms(d: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut p = Poly::zero(d);
        for (e, c) in terms {
            assert_eq!(e.len(), d, "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Ascending coefficients of a univariate polynomial.
    pub fn coeffs_1d(&self) -> Vec<Q> {
        assert_eq!(self.d, 1);
        let n = self.degree() as usize;
        let mut v = vec![Q::zero(); n + 1];
        for (e, c) in &self.terms {
            v[e[0] as usize] = c.clone();
        }
        v
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.d);
        }
        Poly { d: self.d, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.d);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::constant(self.d, Q::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Univariate Horner evaluation.
    pub fn eval1(&self, x: &Q) -> Q {
        // Horner on unreduced numerator/denominator pairs; one reduction at the end.
        let c = self.coeffs_1d();
        let (xn, xd) = (x.numer(), x.denom());
        let mut n = num_bigint::BigInt::zero();
        let mut d = num_bigint::BigInt::one();
        for a in c.iter().rev() {
            let (an, ad) = (a.numer(), a.denom());
            n = &n * xn * ad + an * &d * xd;
            d = &d * xd * ad;
        }
        Q::new(n, d)
    }

    /// Replace variable `i` by the polynomial `r` (same arity).
    pub fn substitute(&self, i: usize, r: &Poly) -> Poly {
        let maxk = self.degree_in(i);
        let mut powers = vec![Poly::constant(self.d, Q::one())];
        for k in 1..=maxk as usize {
            let next = powers[k - 1].mul(r);
            powers.push(next);
        }
        let mut out = Poly::zero(self.d);
        for (e, c) in &self.terms {
            let mut e0 = e.clone();
            let k = e0[i] as usize;
            e0[i] = 0;
            let mono = Poly::from_terms(self.d, [(e0, c.clone())]);
            out = out.add(&mono.mul(&powers[k]));
        }
        out
    }

    /// `P(x + h)`.
    pub fn shift(&self, h: &[Q]) -> Poly {
        let mut p = self.clone();
        for (i, hi) in h.iter().enumerate() {
            if !hi.is_zero() {
                let r = Poly::var(self.d, i).add(&Poly::constant(self.d, hi.clone()));
                p = p.substitute(i, &r);
            }
        }
        p
    }

    /// `P` with `x_i` replaced by `s * x_i + t`.
    pub fn affine_arg(&self, i: usize, s: &Q, t: &Q) -> Poly {
        let r = Poly::var(self.d, i).scale(s).add(&Poly::constant(self.d, t.clone()));
        self.substitute(i, &r)
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.d);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * qi(e[i] as i64));
            }
        }
        r
    }

    /// Antiderivative in `x_i` vanishing at `x_i = 0`.
    pub fn antideriv(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.d);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            let k = e2[i];
            r.add_term(e2, c / qi(k as i64));
        }
        r
    }

    /// Fix `x_i = v`; the variable stays in the arity but no longer occurs.
    pub fn fix(&self, i: usize, v: &Q) -> Poly {
        self.substitute(i, &Poly::constant(self.d, v.clone()))
    }

    /// Exact integral over the box `prod [lo_i, hi_i]`.
    pub fn integrate_box(&self, lo: &[Q], hi: &[Q]) -> Q {
        let mut p = self.clone();
        for i in 0..self.d {
            let a = p.antideriv(i);
            p = a.fix(i, &hi[i]).sub(&a.fix(i, &lo[i]));
        }
        p.constant_value().expect("fully integrated polynomial is constant")
    }

    /// Drop variable `i` (which must not occur) reducing the arity.
    pub fn drop_var(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.d - 1);
        for (e, c) in &self.terms {
            assert_eq!(e[i], 0, "variable still occurs");
            let mut e2 = e.clone();
            e2.remove(i);
            r.add_term(e2, c.clone());
        }
        r
    }

    /// Embed into a higher arity, placing the existing variables at `slots`.
    pub fn embed(&self, d: usize, slots: &[usize]) -> Poly {
        let mut r = Poly::zero(d);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; d];
            for (k, &s) in slots.iter().enumerate() {
                e2[s] = e[k];
            }
            r.add_term(e2, c.clone());
        }
        r
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, "*x{i}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Univariate Bernstein coefficients of `p` on `[u, v]`.
pub fn bernstein(p: &Poly, u: &Q, v: &Q) -> Vec<Q> {
    let t = p.affine_arg(0, &(v - u), u);
    let a = t.coeffs_1d();
    let n = a.len() - 1;
    let binom = |n: usize, k: usize| -> Q {
        let mut r = Q::one();
        for j in 0..k {
            r = r * qi((n - j) as i64) / qi((j + 1) as i64);
        }
        r
    };
    (0..=n)
        .map(|j| (0..=j).fold(Q::zero(), |s, i| s + &a[i] * binom(j, i) / binom(n, i)))
        .collect()
}

/// Exact rational square root, if one exists.
pub fn rational_sqrt(r: &Q) -> Option<Q> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Q::new(n, d))
}

/// Real roots of a univariate polynomial of degree at most 2 when all are
/// rational; `None` if some root is irrational or the degree is higher.
pub fn rational_roots(p: &Poly) -> Option<Vec<Q>> {
    let c = p.coeffs_1d();
    match p.degree() {
        0 => Some(Vec::new()),
        1 => Some(vec![-&c[0] / &c[1]]),
        2 => {
            let (a, b, cc) = (&c[2], &c[1], &c[0]);
            let disc = b * b - qi(4) * a * cc;
            if disc.is_negative() {
                return Some(Vec::new());
            }
            let s = rational_sqrt(&disc)?;
            let two_a = qi(2) * a;
            let mut r = vec![(-b - &s) / &two_a, (-b + &s) / &two_a];
            r.sort();
            r.dedup();
            Some(r)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrate_and_shift() {
        let x = Poly::var(1, 0);
        assert_eq!(x.integrate_box(&[qi(0)], &[qi(1)]), q(1, 2));
        let s = x.mul(&x).shift(&[qi(1)]);
        assert_eq!(s.coeffs_1d(), vec![qi(1), qi(2), qi(1)]);
        let xy = Poly::var(2, 0).mul(&Poly::var(2, 1));
        assert_eq!(xy.integrate_box(&[qi(0), qi(0)], &[qi(1), qi(2)]), qi(1));
    }

    #[test]
    fn bernstein_of_linear() {
        let p = Poly::univariate(&[qi(-1), qi(2)]);
        assert_eq!(bernstein(&p, &qi(0), &qi(1)), vec![qi(-1), qi(1)]);
    }

    #[test]
    fn roots() {
        let p = Poly::univariate(&[q(-1, 4), qi(0), qi(1)]);
        assert_eq!(rational_roots(&p), Some(vec![q(-1, 2), q(1, 2)]));
        let p = Poly::univariate(&[qi(-2), qi(0), qi(1)]);
        assert_eq!(rational_roots(&p), None);
    }
}
