//! Test functions on `[0,1]` used across the library and its test suites.

use super::func::{pow2q, Func};
use super::poly::{q, qi, Poly, Q};
use super::pw::Pw;

fn uni(c: &[Q]) -> Poly {
    Poly::univariate(c)
}

pub fn zero() -> Func {
    Func::on_unit(Pw::zero(1))
}

pub fn constant(c: Q) -> Func {
    Func::on_unit(Pw::from_1d(vec![qi(0), qi(1)], vec![uni(&[c])]))
}

/// Indicator of `[0, 1/2]`.
pub fn chi_half() -> Func {
    Func::on_unit(Pw::from_1d(vec![qi(0), q(1, 2)], vec![uni(&[qi(1)])]))
}

pub fn identity() -> Func {
    Func::on_unit(Pw::from_1d(vec![qi(0), qi(1)], vec![uni(&[qi(0), qi(1)])]))
}

/// `x^2 / 2`.
pub fn half_square() -> Func {
    Func::on_unit(Pw::from_1d(vec![qi(0), qi(1)], vec![uni(&[qi(0), qi(0), q(1, 2)])]))
}

/// `max{0, 1 - 2|x - 1/2|}`.
pub fn hat() -> Func {
    hat_on(qi(0), qi(1), qi(1))
}

/// Tent supported on `[a, b]` with peak `h` at the midpoint.
pub fn hat_on(a: Q, b: Q, h: Q) -> Func {
    let m = (&a + &b) / qi(2);
    let s = &h / (&m - &a);
    let up = uni(&[-(&s * &a), s.clone()]);
    let down = uni(&[&s * &b, -s]);
    Func::on_unit(Pw::from_1d(vec![a, m, b], vec![up, down]))
}

/// `int_0^x (hat - 1/2)`: piecewise quadratic, vanishing at both ends.
pub fn hat_antiderivative() -> Func {
    Func::on_unit(Pw::from_1d(
        vec![qi(0), q(1, 2), qi(1)],
        vec![uni(&[qi(0), q(-1, 2), qi(1)]), uni(&[q(-1, 2), q(3, 2), qi(-1)])],
    ))
}

/// `int_0^x hat`, whose weak derivative is the hat itself.
pub fn hat_primitive() -> Func {
    Func::on_unit(Pw::from_1d(
        vec![qi(0), q(1, 2), qi(1)],
        vec![uni(&[qi(0), qi(0), qi(1)]), uni(&[q(-1, 2), qi(2), qi(-1)])],
    ))
}

/// `f_m(x) = (-1)^{min{k : k 2^{-m} >= x}}` on `[0,1]`.
pub fn oscillator(m: u32) -> Func {
    let n = 1usize << m;
    let w = pow2q(-(m as i64));
    let breaks: Vec<Q> = (0..=n).map(|k| qi(k as i64) * &w).collect();
    let polys = (1..=n).map(|k| uni(&[if k % 2 == 0 { qi(1) } else { qi(-1) }])).collect();
    Func::on_unit(Pw::from_1d(breaks, polys))
}

/// A named corpus member together with facts the suites need.
pub struct Entry {
    pub name: String,
    pub f: Func,
    /// Continuous on `[0,1]`.
    pub continuous: bool,
    /// `||f||_inf <= 2^sup_log`.
    pub sup_log: i64,
}

/// zero, constant, indicator, identity, `x^2/2`, hat, hat antiderivative, oscillators `m <= 6`.
pub fn corpus() -> Vec<Entry> {
    let mut v = vec![
        Entry { name: "zero".into(), f: zero(), continuous: true, sup_log: 0 },
        Entry { name: "one".into(), f: constant(qi(1)), continuous: true, sup_log: 0 },
        Entry { name: "chi_half".into(), f: chi_half(), continuous: false, sup_log: 0 },
        Entry { name: "identity".into(), f: identity(), continuous: true, sup_log: 0 },
        Entry { name: "half_square".into(), f: half_square(), continuous: true, sup_log: 0 },
        Entry { name: "hat".into(), f: hat(), continuous: true, sup_log: 0 },
        Entry { name: "hat_antiderivative".into(), f: hat_antiderivative(), continuous: true, sup_log: 0 },
    ];
    for m in 1..=6 {
        v.push(Entry { name: format!("oscillator_{m}"), f: oscillator(m), continuous: false, sup_log: 0 });
    }
    v
}
