use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{q, qi, Poly, Q};
use super::pw::{Enclosure, Prefix1, Pw};
use super::spec::{FunctionSpec, RBox};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

pub fn pow2q(k: i64) -> Q {
    if k >= 0 {
        Q::from_integer(BigInt::one() << (k as u64))
    } else {
        Q::new(BigInt::one(), BigInt::one() << ((-k) as u64))
    }
}

/// A function with precomputed piecewise structure; the runtime form of a
/// [`FunctionSpec`].
#[derive(Clone, Debug)]
pub struct Func {
    domain: Vec<RBox>,
    pw: Pw,
    prefix: Option<Prefix1>,
}

impl Func {
    pub fn new(spec: &FunctionSpec) -> Result<Func> {
        Ok(Func::from_pw(spec.to_pw()?, spec.domain_boxes()))
    }

    pub fn from_pw(pw: Pw, domain: Vec<RBox>) -> Func {
        let prefix = (pw.dim() == 1).then(|| pw.prefix_1d());
        Func { domain, pw, prefix }
    }

    /// Function on `[0,1]^d`.
    pub fn on_unit(pw: Pw) -> Func {
        let d = pw.dim();
        Func::from_pw(pw, vec![(vec![qi(0); d], vec![qi(1); d])])
    }

    pub fn dim(&self) -> usize {
        self.pw.dim()
    }

    pub fn pw(&self) -> &Pw {
        &self.pw
    }

    pub fn domain(&self) -> &[RBox] {
        &self.domain
    }

    pub fn to_spec(&self) -> Result<FunctionSpec> {
        let dom = self
            .domain
            .iter()
            .map(|(lo, hi)| {
                lo.iter()
                    .zip(hi)
                    .map(|(a, b)| match (Dyadic::from_rational(a), Dyadic::from_rational(b)) {
                        (Some(a), Some(b)) => Ok([a, b]),
                        _ => Err(Error::Unsupported("non-dyadic domain".into())),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FunctionSpec::from_pw(&self.pw, Some(dom))
    }

    /// Lebesgue measure of the domain (boxes assumed disjoint).
    pub fn lambda(&self) -> Q {
        self.domain
            .iter()
            .map(|(lo, hi)| lo.iter().zip(hi).fold(Q::one(), |v, (a, b)| v * (b - a)))
            .fold(Q::zero(), |a, b| a + b)
    }

    pub fn bbox(&self) -> RBox {
        let d = self.dim();
        let lo = (0..d).map(|i| self.domain.iter().map(|b| b.0[i].clone()).min().unwrap()).collect();
        let hi = (0..d).map(|i| self.domain.iter().map(|b| b.1[i].clone()).max().unwrap()).collect();
        (lo, hi)
    }

    /// Longest side of the bounding box.
    pub fn diam(&self) -> Q {
        let (lo, hi) = self.bbox();
        lo.iter().zip(&hi).map(|(a, b)| b - a).max().unwrap_or_else(Q::zero)
    }

    /// `int_{[lo,hi]} f~`.
    pub fn integral_box(&self, lo: &[Q], hi: &[Q]) -> Q {
        match &self.prefix {
            Some(p) => p.integral(&lo[0], &hi[0]),
            None => self.pw.integrate_box(lo, hi),
        }
    }

    pub fn integral(&self) -> Q {
        self.pw.integral()
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.pw.eval(x)
    }

    pub fn lp_pow(&self, p: u32, tol: &Q) -> Result<Enclosure> {
        self.pw.lp_pow(p, tol)
    }

    pub fn lp_pow_exact(&self, p: u32) -> Result<Q> {
        self.pw.lp_pow_exact(p)
    }

    /// Decides `||f||_p < 2^e` exactly.
    pub fn lp_norm_lt_pow2(&self, p: u32, e: i64) -> Result<bool> {
        self.pw.lp_pow_lt(p, &pow2q(e * p as i64))
    }

    /// `f~ - tau_h f~`.
    pub fn shift_diff(&self, h: &[Q]) -> Pw {
        self.pw.sub(&self.pw.shift(h))
    }

    /// Enclosure of `||f~ - tau_h f~||_p^p`.
    pub fn shift_diff_norm(&self, h: &[Q], p: u32, tol: &Q) -> Result<Enclosure> {
        self.shift_diff(h).lp_pow(p, tol)
    }

    /// `2^{dm} int_{cell(x,m)} f~` with `cell(x,m) = x + [-2^{-m-1}, 2^{-m-1}]^d`.
    pub fn cell_average(&self, x: &[Q], m: u32) -> Q {
        let r = pow2q(-(m as i64) - 1);
        let lo: Vec<Q> = x.iter().map(|v| v - &r).collect();
        let hi: Vec<Q> = x.iter().map(|v| v + &r).collect();
        self.integral_box(&lo, &hi) * pow2q((self.dim() as i64) * m as i64)
    }

    /// The continuous approximation `f_m` as a piecewise polynomial (one dimension).
    pub fn continuous_approx(&self, m: u32) -> Result<Func> {
        let r = pow2q(-(m as i64) - 1);
        let kernel = Pw::from_1d(vec![-&r, r], vec![Poly::constant(1, pow2q(m as i64))]);
        Ok(Func::from_pw(self.pw.convolve_1d(&kernel)?, self.domain.clone()))
    }

    /// The differentiable approximation `f^D_m = g^D_m * f~` (one dimension).
    pub fn mollified(&self, m: u32) -> Result<Func> {
        if self.dim() != 1 {
            return Err(Error::Unsupported("mollifier convolution only in one dimension".into()));
        }
        Ok(Func::from_pw(self.pw.convolve_1d(&mollifier_1d(m))?, self.domain.clone()))
    }

    /// Weak derivative on the interior of the domain (one dimension).
    pub fn weak_derivative(&self) -> Result<Func> {
        let dom: Vec<(Q, Q)> = self.domain.iter().map(|(a, b)| (a[0].clone(), b[0].clone())).collect();
        Ok(Func::from_pw(self.pw.weak_derivative_1d(&merge_intervals(dom))?, self.domain.clone()))
    }

    /// True when `f~` itself is continuous on the whole line (so `f` vanishes on the boundary).
    pub fn extension_continuous(&self) -> bool {
        if self.dim() != 1 {
            return false;
        }
        let wide = vec![(pow2q(40).clone() * qi(-1), pow2q(40))];
        self.pw.weak_derivative_1d(&wide).is_ok()
    }

    pub fn sup_abs(&self, tol: &Q) -> Enclosure {
        self.pw.sup_abs_1d(tol)
    }

    pub fn marginal(&self, i: usize) -> Func {
        let (lo, hi) = self.bbox();
        Func::from_pw(self.pw.marginal(i), vec![(vec![lo[i].clone()], vec![hi[i].clone()])])
    }

    pub fn sub(&self, o: &Func) -> Func {
        Func::from_pw(self.pw.sub(&o.pw), self.domain.clone())
    }

    pub fn scale(&self, s: &Q) -> Func {
        Func::from_pw(self.pw.scale(s), self.domain.clone())
    }
}

fn merge_intervals(mut v: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    v.sort();
    let mut out: Vec<(Q, Q)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Scaling of the mollifier sequence `g^D_m(x) = c_m g^D_0(2^m x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MollifierScale {
    /// `c_m = (d+1) 2^{d(m-1)}`: unit mass.
    Normalized,
    /// `c_m = d 2^{d(m-1)}`: mass `d/(d+1)`.
    Literal,
}

pub fn mollifier_constant(d: u32, m: u32, scale: MollifierScale) -> Q {
    let k = match scale {
        MollifierScale::Normalized => d + 1,
        MollifierScale::Literal => d,
    };
    qi(k as i64) * pow2q(d as i64 * (m as i64 - 1))
}

/// Normalized `g^D_m` in one dimension.
pub fn mollifier_1d(m: u32) -> Pw {
    let c = mollifier_constant(1, m, MollifierScale::Normalized);
    let s = pow2q(m as i64);
    let r = pow2q(-(m as i64));
    Pw::from_1d(
        vec![-&r, qi(0), r],
        vec![Poly::univariate(&[c.clone(), &c * &s]), Poly::univariate(&[c.clone(), -(&c * &s)])],
    )
}

/// `int g^D_m`, summed over the `2d` pyramid faces `{|x|_inf = x_i = t}`.
pub fn mollifier_integral(d: u32, m: u32, scale: MollifierScale) -> Q {
    let c = mollifier_constant(d, m, scale);
    let face = Poly::univariate(&[c.clone(), -(&c * pow2q(m as i64))]).mul(&Poly::univariate(&[qi(0), qi(2)]).pow(d - 1));
    face.integrate_box(&[qi(0)], &[pow2q(-(m as i64))]) * qi(2 * d as i64)
}

/// `||grad g^D_m||_inf`: the largest slope of a face polynomial.
pub fn mollifier_grad_sup(d: u32, m: u32, scale: MollifierScale) -> Q {
    let c = mollifier_constant(d, m, scale);
    let face = Poly::univariate(&[c.clone(), -(&c * pow2q(m as i64))]);
    face.deriv(0).max_abs_coeff()
}

pub fn exact_integral(f: &Func, lo: &[Q], hi: &[Q]) -> Q {
    f.integral_box(lo, hi)
}

/// `int |f|^p` over the domain, exact when the sign pattern is rational.
pub fn exact_lp_norm(f: &Func, p: u32) -> Result<Enclosure> {
    f.lp_pow(p, &q(1, 1 << 30))
}

pub fn shift_diff_norm(f: &Func, h: &[Q], p: u32) -> Result<Enclosure> {
    f.shift_diff_norm(h, p, &q(1, 1 << 30))
}

pub fn cell_average(f: &Func, x: &[Q], m: u32) -> Q {
    f.cell_average(x, m)
}

pub fn convolve_mollifier(f: &Func, m: u32) -> Result<Func> {
    f.mollified(m)
}

pub fn weak_derivative(f: &Func) -> Result<Func> {
    f.weak_derivative()
}

#[cfg(test)]
mod tests {
    use super::super::corpus;
    use super::*;

    #[test]
    fn integral_examples() {
        let chi = corpus::chi_half();
        assert_eq!(exact_integral(&chi, &[qi(0)], &[qi(1)]), q(1, 2));
        assert_eq!(exact_integral(&chi, &[q(1, 4)], &[q(3, 4)]), q(1, 4));
        assert_eq!(exact_integral(&corpus::identity(), &[qi(0)], &[qi(1)]), q(1, 2));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(exact_lp_norm(&corpus::constant(qi(1)), 2).unwrap().lo, qi(1));
        assert_eq!(exact_lp_norm(&corpus::chi_half(), 2).unwrap(), Enclosure::exact(q(1, 2)));
        assert_eq!(exact_lp_norm(&corpus::hat(), 1).unwrap(), Enclosure::exact(q(1, 2)));
    }

    #[test]
    fn shift_examples() {
        let chi = corpus::chi_half();
        assert_eq!(shift_diff_norm(&chi, &[qi(0)], 1).unwrap(), Enclosure::zero());
        assert_eq!(shift_diff_norm(&chi, &[q(1, 8)], 1).unwrap(), Enclosure::exact(q(1, 4)));
        let one = corpus::constant(qi(1));
        assert_eq!(shift_diff_norm(&one, &[q(1, 4)], 2).unwrap(), Enclosure::exact(q(1, 2)));
    }

    #[test]
    fn cell_average_examples() {
        assert_eq!(cell_average(&corpus::constant(qi(1)), &[q(1, 2)], 2), qi(1));
        assert_eq!(cell_average(&corpus::chi_half(), &[q(1, 2)], 1), q(1, 2));
        assert_eq!(cell_average(&corpus::identity(), &[q(1, 2)], 3), q(1, 2));
        let fm = corpus::identity().continuous_approx(3).unwrap();
        assert_eq!(fm.eval(&[q(1, 2)]), q(1, 2));
    }

    #[test]
    fn mollifier_examples() {
        assert!(convolve_mollifier(&corpus::zero(), 3).unwrap().pw().is_zero());
        for m in 0..=5 {
            assert_eq!(mollifier_1d(m).integral(), qi(1));
            assert_eq!(mollifier_integral(1, m, MollifierScale::Normalized), qi(1));
            assert_eq!(mollifier_integral(2, m, MollifierScale::Normalized), qi(1));
            assert_eq!(mollifier_integral(1, m, MollifierScale::Literal), q(1, 2));
        }
        let g = convolve_mollifier(&corpus::chi_half(), 3).unwrap();
        for k in 1..=3 {
            assert_eq!(g.eval(&[q(k, 8)]), qi(1));
        }
        assert_eq!(g.eval(&[q(1, 16)]), q(7, 8));
    }

    #[test]
    fn derivative_examples() {
        let d = weak_derivative(&corpus::half_square()).unwrap();
        assert_eq!(d.eval(&[q(1, 3)]), q(1, 3));
        let h = weak_derivative(&corpus::hat()).unwrap();
        assert_eq!(h.eval(&[q(1, 4)]), qi(2));
        assert_eq!(h.eval(&[q(3, 4)]), qi(-2));
        assert!(weak_derivative(&corpus::chi_half()).is_err());
    }
}
