use num_traits::{One, Signed, Zero};

use super::poly::{bernstein, qi, rational_roots, Poly, Q};
use crate::error::{Error, Result};

/// Certified two-sided bound `lo <= value <= hi`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Enclosure {
    pub lo: Q,
    pub hi: Q,
}

impl Enclosure {
    pub fn exact(v: Q) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Enclosure::exact(Q::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    /// `Some(true)` if certainly `< b`, `Some(false)` if certainly `>= b`.
    pub fn lt(&self, b: &Q) -> Option<bool> {
        if self.hi < *b {
            Some(true)
        } else if self.lo >= *b {
            Some(false)
        } else {
            None
        }
    }
}

/// Piecewise polynomial on a rectilinear grid, zero outside the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Pw {
    d: usize,
    breaks: Vec<Vec<Q>>,
    cells: Vec<Poly>,
}

fn merge_sorted(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut v: Vec<Q> = a.iter().chain(b).cloned().collect();
    v.sort();
    v.dedup();
    v
}

impl Pw {
    pub fn zero(d: usize) -> Self {
        Pw { d, breaks: vec![Vec::new(); d], cells: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn breaks(&self) -> &[Vec<Q>] {
        &self.breaks
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|c| c.is_zero())
    }

    fn shape(&self) -> Vec<usize> {
        self.breaks.iter().map(|b| b.len().saturating_sub(1)).collect()
    }

    pub fn cell_count(&self) -> usize {
        if self.breaks.iter().any(|b| b.len() < 2) {
            0
        } else {
            self.shape().iter().product()
        }
    }

    fn unflatten(&self, mut k: usize) -> Vec<usize> {
        let shape = self.shape();
        let mut idx = vec![0; self.d];
        for i in (0..self.d).rev() {
            idx[i] = k % shape[i];
            k /= shape[i];
        }
        idx
    }

    fn flatten(shape: &[usize], idx: &[usize]) -> usize {
        idx.iter().zip(shape).fold(0, |acc, (i, s)| acc * s + i)
    }

    /// Lower and upper corner of cell `k`.
    pub fn cell_box(&self, k: usize) -> (Vec<Q>, Vec<Q>) {
        let idx = self.unflatten(k);
        let lo = idx.iter().enumerate().map(|(i, &j)| self.breaks[i][j].clone()).collect();
        let hi = idx.iter().enumerate().map(|(i, &j)| self.breaks[i][j + 1].clone()).collect();
        (lo, hi)
    }

    pub fn cells(&self) -> impl Iterator<Item = (Vec<Q>, Vec<Q>, &Poly)> + '_ {
        (0..self.cell_count()).map(move |k| {
            let (lo, hi) = self.cell_box(k);
            (lo, hi, &self.cells[k])
        })
    }

    /// Builds from boxes with disjoint interiors.
    pub fn from_pieces(d: usize, pieces: &[(Vec<Q>, Vec<Q>, Poly)]) -> Result<Pw> {
        let mut breaks = vec![Vec::new(); d];
        for (lo, hi, _) in pieces {
            for i in 0..d {
                if lo[i] > hi[i] {
                    return Err(Error::Precondition("piece with lower > upper".into()));
                }
                breaks[i].push(lo[i].clone());
                breaks[i].push(hi[i].clone());
            }
        }
        for b in &mut breaks {
            b.sort();
            b.dedup();
        }
        let mut pw = Pw { d, breaks, cells: Vec::new() };
        let n = pw.cell_count();
        pw.cells = vec![Poly::zero(d); n];
        let mut filled = vec![false; n];
        let shape = pw.shape();
        for (lo, hi, p) in pieces {
            if (0..d).any(|i| lo[i] == hi[i]) {
                continue;
            }
            let ranges: Vec<(usize, usize)> = (0..d)
                .map(|i| {
                    let b = &pw.breaks[i];
                    (b.partition_point(|v| v < &lo[i]), b.partition_point(|v| v < &hi[i]))
                })
                .collect();
            let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
            'outer: loop {
                let k = Pw::flatten(&shape, &idx);
                if filled[k] {
                    return Err(Error::Precondition("overlapping pieces".into()));
                }
                filled[k] = true;
                pw.cells[k] = p.clone();
                for i in (0..d).rev() {
                    idx[i] += 1;
                    if idx[i] < ranges[i].1 {
                        continue 'outer;
                    }
                    idx[i] = ranges[i].0;
                }
                break;
            }
        }
        Ok(pw)
    }

    /// 1-D constructor from breakpoints and one polynomial per interval.
    pub fn from_1d(breaks: Vec<Q>, polys: Vec<Poly>) -> Pw {
        assert_eq!(breaks.len(), polys.len() + 1);
        Pw { d: 1, breaks: vec![breaks], cells: polys }
    }

    /// Same function on a finer grid containing the current breakpoints.
    pub fn refine(&self, nb: &[Vec<Q>]) -> Pw {
        let shape: Vec<usize> = nb.iter().map(|b| b.len().saturating_sub(1)).collect();
        let n: usize = if nb.iter().any(|b| b.len() < 2) { 0 } else { shape.iter().product() };
        let my_shape = self.shape();
        let has = self.cell_count() > 0;
        // Per-axis map from new interval to old interval index.
        let maps: Vec<Vec<Option<usize>>> = (0..self.d)
            .map(|i| {
                (0..shape[i])
                    .map(|j| {
                        if !has {
                            return None;
                        }
                        let lo = &nb[i][j];
                        let hi = &nb[i][j + 1];
                        let ob = &self.breaks[i];
                        if lo < &ob[0] || hi > ob.last().unwrap() {
                            return None;
                        }
                        let pos = ob.partition_point(|b| b <= lo);
                        Some(pos.saturating_sub(1).min(ob.len() - 2))
                    })
                    .collect()
            })
            .collect();
        let mut cells = Vec::with_capacity(n);
        let mut idx = vec![0usize; self.d];
        for k in 0..n {
            let mut rem = k;
            for i in (0..self.d).rev() {
                idx[i] = rem % shape[i];
                rem /= shape[i];
            }
            let old: Option<Vec<usize>> = (0..self.d).map(|i| maps[i][idx[i]]).collect();
            cells.push(match old {
                Some(o) => self.cells[Pw::flatten(&my_shape, &o)].clone(),
                None => Poly::zero(self.d),
            });
        }
        Pw { d: self.d, breaks: nb.to_vec(), cells }
    }

    fn common(&self, o: &Pw) -> (Pw, Pw) {
        let nb: Vec<Vec<Q>> = (0..self.d).map(|i| merge_sorted(&self.breaks[i], &o.breaks[i])).collect();
        (self.refine(&nb), o.refine(&nb))
    }

    pub fn combine(&self, o: &Pw, f: impl Fn(&Poly, &Poly) -> Poly) -> Pw {
        let (a, b) = self.common(o);
        let cells = a.cells.iter().zip(&b.cells).map(|(x, y)| f(x, y)).collect();
        Pw { d: self.d, breaks: a.breaks, cells }
    }

    pub fn add(&self, o: &Pw) -> Pw {
        self.combine(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Pw) -> Pw {
        self.combine(o, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Pw) -> Pw {
        self.combine(o, |a, b| a.mul(b))
    }

    pub fn scale(&self, s: &Q) -> Pw {
        self.map(|p| p.scale(s))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Pw {
        Pw { d: self.d, breaks: self.breaks.clone(), cells: self.cells.iter().map(f).collect() }
    }

    /// `tau_h f(x) = f(x + h)`.
    pub fn shift(&self, h: &[Q]) -> Pw {
        Pw {
            d: self.d,
            breaks: self.breaks.iter().zip(h).map(|(b, hi)| b.iter().map(|x| x - hi).collect()).collect(),
            cells: self.cells.iter().map(|p| p.shift(h)).collect(),
        }
    }

    /// Multiply by the indicator of the box `[lo, hi]`.
    pub fn restrict(&self, lo: &[Q], hi: &[Q]) -> Pw {
        let nb: Vec<Vec<Q>> = (0..self.d)
            .map(|i| merge_sorted(&self.breaks[i], &[lo[i].clone(), hi[i].clone()]))
            .collect();
        let mut r = self.refine(&nb);
        for k in 0..r.cell_count() {
            let (clo, chi) = r.cell_box(k);
            if (0..self.d).any(|i| clo[i] < lo[i] || chi[i] > hi[i]) {
                r.cells[k] = Poly::zero(self.d);
            }
        }
        r
    }

    /// Value at `x`, taken from the first cell whose closed box contains it.
    pub fn eval(&self, x: &[Q]) -> Q {
        if self.cell_count() == 0 {
            return Q::zero();
        }
        let mut idx = Vec::with_capacity(self.d);
        for i in 0..self.d {
            let b = &self.breaks[i];
            if x[i] < b[0] || x[i] > *b.last().unwrap() {
                return Q::zero();
            }
            let pos = b.partition_point(|v| v < &x[i]);
            idx.push(pos.saturating_sub(1).min(b.len() - 2));
        }
        let cell = &self.cells[Pw::flatten(&self.shape(), &idx)];
        if self.d == 1 {
            cell.eval1(&x[0])
        } else {
            cell.eval(x)
        }
    }

    pub fn integrate_box(&self, lo: &[Q], hi: &[Q]) -> Q {
        let mut s = Q::zero();
        for (clo, chi, p) in self.cells() {
            if p.is_zero() {
                continue;
            }
            let a: Vec<Q> = (0..self.d).map(|i| clo[i].clone().max(lo[i].clone())).collect();
            let b: Vec<Q> = (0..self.d).map(|i| chi[i].clone().min(hi[i].clone())).collect();
            if (0..self.d).any(|i| a[i] >= b[i]) {
                continue;
            }
            s += p.integrate_box(&a, &b);
        }
        s
    }

    pub fn integral(&self) -> Q {
        self.cells().fold(Q::zero(), |s, (lo, hi, p)| s + p.integrate_box(&lo, &hi))
    }

    /// Enclosure of `int |f|^p` with uncertified width about `tol` per sign change.
    pub fn lp_pow(&self, p: u32, tol: &Q) -> Result<Enclosure> {
        let mut acc = Enclosure::zero();
        for (lo, hi, poly) in self.cells() {
            if poly.is_zero() {
                continue;
            }
            let e = if p % 2 == 0 {
                Enclosure::exact(poly.pow(p).integrate_box(&lo, &hi))
            } else if let Some(c) = poly.constant_value() {
                let vol = (0..self.d).fold(Q::one(), |v, i| v * (&hi[i] - &lo[i]));
                Enclosure::exact(num_traits::pow(c.abs(), p as usize) * vol)
            } else if self.d == 1 {
                abs_pow_1d(poly, &lo[0], &hi[0], p, tol)
            } else {
                return Err(Error::Unsupported("odd p with non-constant piece in d > 1".into()));
            };
            acc = acc.add(&e);
        }
        Ok(acc)
    }

    /// Decides `int |f|^p < bound`, refining enclosures as needed.
    pub fn lp_pow_lt(&self, p: u32, bound: &Q) -> Result<bool> {
        let mut tol = Q::new(One::one(), num_bigint::BigInt::one() << 24u32);
        for _ in 0..12 {
            if let Some(b) = self.lp_pow(p, &tol)?.lt(bound) {
                return Ok(b);
            }
            tol = tol / Q::from_integer(num_bigint::BigInt::one() << 24u32);
        }
        Err(Error::Contract("could not separate Lp norm from bound".into()))
    }

    /// Exact `int |f|^p` when available.
    pub fn lp_pow_exact(&self, p: u32) -> Result<Q> {
        let tol = Q::new(One::one(), num_bigint::BigInt::one() << 40u32);
        let e = self.lp_pow(p, &tol)?;
        if e.is_exact() {
            Ok(e.lo)
        } else {
            Err(Error::Unsupported("norm has irrational breakpoints; use lp_pow".into()))
        }
    }

    /// Univariate convolution `(g * f)(x) = int g(y) f(x - y) dy`.
    pub fn convolve_1d(&self, g: &Pw) -> Result<Pw> {
        if self.d != 1 || g.d != 1 {
            return Err(Error::Unsupported("convolution only in one dimension".into()));
        }
        if self.cell_count() == 0 || g.cell_count() == 0 {
            return Ok(Pw::zero(1));
        }
        let fa = &self.breaks[0];
        let gc = &g.breaks[0];
        let mut nb: Vec<Q> = fa.iter().flat_map(|a| gc.iter().map(move |c| a + c)).collect();
        nb.sort();
        nb.dedup();
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let xmy = x.sub(&y);
        // Pre-embed f(x - y) and g(y) per cell.
        let fcells: Vec<Poly> = self.cells.iter().map(|p| p.embed(2, &[0]).substitute(0, &xmy)).collect();
        let gcells: Vec<Poly> = g.cells.iter().map(|p| p.embed(2, &[1])).collect();
        let mut out = Vec::with_capacity(nb.len() - 1);
        let two = qi(2);
        for w in nb.windows(2) {
            let (s, t) = (&w[0], &w[1]);
            let m = (s + t) / &two;
            let mut acc = Poly::zero(2);
            for (j, fp) in fcells.iter().enumerate() {
                if self.cells[j].is_zero() {
                    continue;
                }
                let (a0, a1) = (&fa[j], &fa[j + 1]);
                for (i, gp) in gcells.iter().enumerate() {
                    if g.cells[i].is_zero() {
                        continue;
                    }
                    let (c0, c1) = (&gc[i], &gc[i + 1]);
                    // y in [max(c0, x - a1), min(c1, x - a0)] evaluated at the midpoint.
                    let lo_is_c = *c0 >= &m - a1;
                    let hi_is_c = *c1 <= &m - a0;
                    let lo_m = if lo_is_c { c0.clone() } else { &m - a1 };
                    let hi_m = if hi_is_c { c1.clone() } else { &m - a0 };
                    if lo_m >= hi_m {
                        continue;
                    }
                    let k = gp.mul(fp).antideriv(1);
                    let bound = |is_c: bool, c: &Q, a: &Q| -> Poly {
                        if is_c {
                            Poly::constant(2, c.clone())
                        } else {
                            x.sub(&Poly::constant(2, a.clone()))
                        }
                    };
                    let up = k.substitute(1, &bound(hi_is_c, c1, a0));
                    let dn = k.substitute(1, &bound(lo_is_c, c0, a1));
                    acc = acc.add(&up.sub(&dn));
                }
            }
            out.push(acc.drop_var(1));
        }
        Ok(Pw::from_1d(nb, out))
    }

    /// Cellwise derivative in one dimension after checking continuity at
    /// every breakpoint strictly inside one of `domain`'s intervals.
    pub fn weak_derivative_1d(&self, domain: &[(Q, Q)]) -> Result<Pw> {
        if self.d != 1 {
            return Err(Error::Unsupported("weak derivative only in one dimension".into()));
        }
        let b = &self.breaks[0];
        let interior = |x: &Q| domain.iter().any(|(a, c)| a < x && x < c);
        for j in 0..b.len() {
            if !interior(&b[j]) {
                continue;
            }
            let left = if j > 0 { self.cells[j - 1].eval1(&b[j]) } else { Q::zero() };
            let right = if j + 1 < b.len() { self.cells[j].eval1(&b[j]) } else { Q::zero() };
            if left != right {
                return Err(Error::Precondition(format!("not weakly differentiable: jump at {}", b[j])));
            }
        }
        Ok(self.map(|p| p.deriv(0)))
    }

    /// Enclosure of the supremum of `|f|` (one dimension).
    pub fn sup_abs_1d(&self, tol: &Q) -> Enclosure {
        assert_eq!(self.d, 1);
        let mut lo = Q::zero();
        let mut hi = Q::zero();
        for (a, b, p) in self.cells() {
            let e = sup_abs_poly(p, &a[0], &b[0], tol);
            lo = lo.max(e.lo);
            hi = hi.max(e.hi);
        }
        Enclosure { lo, hi }
    }

    /// Integrate out every variable except `keep`.
    pub fn marginal(&self, keep: usize) -> Pw {
        let b = self.breaks[keep].clone();
        if b.len() < 2 {
            return Pw::zero(1);
        }
        let mut polys = vec![Poly::zero(1); b.len() - 1];
        for k in 0..self.cell_count() {
            let (lo, hi) = self.cell_box(k);
            let idx = self.unflatten(k);
            let mut p = self.cells[k].clone();
            for i in 0..self.d {
                if i != keep {
                    let a = p.antideriv(i);
                    p = a.fix(i, &hi[i]).sub(&a.fix(i, &lo[i]));
                }
            }
            let mut slots = p;
            for i in (0..self.d).rev() {
                if i != keep {
                    slots = slots.drop_var(i);
                }
            }
            polys[idx[keep]] = polys[idx[keep]].add(&slots);
        }
        Pw::from_1d(b, polys)
    }

    /// Prefix integrals for fast interval queries (one dimension).
    pub fn prefix_1d(&self) -> Prefix1 {
        assert_eq!(self.d, 1);
        let b = self.breaks[0].clone();
        let anti: Vec<Poly> = self.cells.iter().map(|p| p.antideriv(0)).collect();
        let mut cum = vec![Q::zero()];
        for j in 0..self.cells.len() {
            let v = anti[j].eval1(&b[j + 1]) - anti[j].eval1(&b[j]);
            let last = cum.last().unwrap().clone();
            cum.push(last + v);
        }
        Prefix1 { breaks: b, anti, cum }
    }
}

/// `F(x) = int_{-inf}^x f` for a univariate piecewise polynomial.
#[derive(Clone, Debug)]
pub struct Prefix1 {
    breaks: Vec<Q>,
    anti: Vec<Poly>,
    cum: Vec<Q>,
}

impl Prefix1 {
    pub fn at(&self, x: &Q) -> Q {
        if self.breaks.len() < 2 || *x <= self.breaks[0] {
            return Q::zero();
        }
        if x >= self.breaks.last().unwrap() {
            return self.cum.last().unwrap().clone();
        }
        let j = self.breaks.partition_point(|b| b <= x) - 1;
        &self.cum[j] + self.anti[j].eval1(x) - self.anti[j].eval1(&self.breaks[j])
    }

    pub fn integral(&self, a: &Q, b: &Q) -> Q {
        self.at(b) - self.at(a)
    }
}

fn sign_cert(b: &[Q]) -> Option<i8> {
    if b.iter().all(|c| !c.is_negative()) {
        Some(1)
    } else if b.iter().all(|c| !c.is_positive()) {
        Some(-1)
    } else {
        None
    }
}

/// `int_u^v |P|^p` for univariate `P` and odd `p`.
fn abs_pow_1d(poly: &Poly, u: &Q, v: &Q, p: u32, tol: &Q) -> Enclosure {
    let pp = poly.pow(p);
    let signed = |a: &Q, b: &Q, s: i8| {
        let v = pp.integrate_box(std::slice::from_ref(a), std::slice::from_ref(b));
        if s < 0 { -v } else { v }
    };
    if let Some(roots) = rational_roots(poly) {
        let mut pts = vec![u.clone()];
        pts.extend(roots.into_iter().filter(|r| r > u && r < v));
        pts.push(v.clone());
        let mut total = Q::zero();
        for w in pts.windows(2) {
            let m = (&w[0] + &w[1]) / qi(2);
            let s = if poly.eval1(&m).is_negative() { -1 } else { 1 };
            total += signed(&w[0], &w[1], s);
        }
        return Enclosure::exact(total);
    }
    let mut acc = Enclosure::zero();
    let mut stack = vec![(u.clone(), v.clone())];
    while let Some((a, b)) = stack.pop() {
        let bc = bernstein(poly, &a, &b);
        if let Some(s) = sign_cert(&bc) {
            acc = acc.add(&Enclosure::exact(signed(&a, &b, s)));
        } else if &b - &a <= *tol {
            let m = bc.iter().map(|c| c.abs()).max().unwrap();
            acc.hi += (&b - &a) * num_traits::pow(m, p as usize);
        } else {
            let mid = (&a + &b) / qi(2);
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
    }
    acc
}

fn sup_abs_poly(p: &Poly, a: &Q, b: &Q, tol: &Q) -> Enclosure {
    let ends = p.eval1(a).abs().max(p.eval1(b).abs());
    if p.degree() <= 1 {
        return Enclosure::exact(ends);
    }
    if let Some(crit) = rational_roots(&p.deriv(0)) {
        let m = crit
            .iter()
            .filter(|c| *c > a && *c < b)
            .map(|c| p.eval1(c).abs())
            .fold(ends, |x, y| x.max(y));
        return Enclosure::exact(m);
    }
    let mut lo = ends;
    let mut hi = Q::zero();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((u, v)) = stack.pop() {
        let bc = bernstein(p, &u, &v);
        let m = bc.iter().map(|c| c.abs()).max().unwrap();
        let mid = (&u + &v) / qi(2);
        lo = lo.max(p.eval1(&mid).abs());
        if m <= lo || &v - &u <= *tol {
            hi = hi.max(m);
        } else {
            stack.push((u, mid.clone()));
            stack.push((mid, v));
        }
    }
    Enclosure { hi: hi.max(lo.clone()), lo }
}

#[cfg(test)]
mod tests {
    use super::super::poly::q;
    use super::*;

    fn chi(a: Q, b: Q) -> Pw {
        Pw::from_1d(vec![a, b], vec![Poly::constant(1, qi(1))])
    }

    #[test]
    fn shift_difference_of_indicator() {
        let f = chi(qi(0), q(1, 2));
        let g = f.sub(&f.shift(&[q(1, 8)]));
        assert_eq!(g.lp_pow_exact(1).unwrap(), q(1, 4));
    }

    #[test]
    fn convolution_of_indicators_is_tent() {
        let f = chi(q(-1, 2), q(1, 2));
        let c = f.convolve_1d(&f).unwrap();
        assert_eq!(c.eval(&[qi(0)]), qi(1));
        assert_eq!(c.eval(&[q(1, 2)]), q(1, 2));
        assert_eq!(c.integral(), qi(1));
    }

    #[test]
    fn irrational_roots_are_enclosed() {
        // x^2 - 1/2 on [0, 1]: int |.| = 2 (sqrt(1/2))^3 * 2/3 - 1/2 + 1/3 ... checked against a bracket.
        let p = Poly::univariate(&[q(-1, 2), qi(0), qi(1)]);
        let f = Pw::from_1d(vec![qi(0), qi(1)], vec![p]);
        let e = f.lp_pow(1, &q(1, 1 << 20)).unwrap();
        assert!(!e.is_exact());
        // Exact value (2/3)*sqrt(2)/2*... = (2*sqrt(2) - 1)/6 ~ 0.304738
        let approx = q(304738, 1_000_000);
        assert!(e.lo < approx + q(1, 1_000_000) && e.hi > q(304737, 1_000_000));
        assert!(e.width() < q(1, 1 << 16));
    }

    #[test]
    fn marginal_of_square() {
        let p = Poly::var(2, 0).mul(&Poly::var(2, 1));
        let f = Pw::from_pieces(2, &[(vec![qi(0), qi(0)], vec![qi(1), qi(2)], p)]).unwrap();
        let m = f.marginal(0);
        assert_eq!(m.eval(&[q(1, 2)]), qi(1));
    }

    #[test]
    fn prefix_matches_box_integral() {
        let f = Pw::from_1d(vec![qi(0), q(1, 2), qi(1)], vec![Poly::univariate(&[qi(0), qi(2)]), Poly::univariate(&[qi(2), qi(-2)])]);
        let pre = f.prefix_1d();
        assert_eq!(pre.integral(&q(1, 4), &q(3, 4)), f.integrate_box(&[q(1, 4)], &[q(3, 4)]));
        assert_eq!(pre.integral(&qi(-1), &qi(2)), q(1, 2));
    }
}
