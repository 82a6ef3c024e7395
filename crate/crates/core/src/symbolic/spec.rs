use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::poly::{Poly, Q};
use super::pw::Pw;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Serializable piecewise-polynomial description of a function on a finite
/// union of dyadic boxes, extended by zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub d: usize,
    /// Boxes whose union is the domain; the unit cube when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<Vec<[Dyadic; 2]>>>,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(rename = "box")]
    pub bx: Vec<[Dyadic; 2]>,
    /// Terms `[coefficient, e_1, ..., e_d]`; missing exponents are 0.
    pub poly: Vec<Vec<Value>>,
}

pub fn parse_rational(s: &str) -> Result<Q> {
    if let Ok(d) = Dyadic::from_str(s) {
        return Ok(d.to_rational());
    }
    let bad = || Error::Parse(format!("rational literal {s:?}"));
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
    let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
    if b == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Q::new(a, b))
}

pub fn format_rational(r: &Q) -> String {
    match Dyadic::from_rational(r) {
        Some(d) => d.to_string(),
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

fn term_to_json(coef: &Q, e: &[u32]) -> Vec<Value> {
    let mut v = vec![Value::String(format_rational(coef))];
    v.extend(e.iter().map(|&k| Value::from(k)));
    v
}

impl Piece {
    pub fn new(bx: Vec<[Dyadic; 2]>, poly: &Poly) -> Piece {
        Piece { bx, poly: poly.terms().map(|(e, c)| term_to_json(c, e)).collect() }
    }

    pub fn to_poly(&self, d: usize) -> Result<Poly> {
        let mut p = Poly::zero(d);
        for t in &self.poly {
            let coef = match t.first() {
                Some(Value::String(s)) => parse_rational(s)?,
                Some(Value::Number(n)) => parse_rational(&n.to_string())?,
                _ => return Err(Error::Parse("term must start with a coefficient".into())),
            };
            if t.len() > d + 1 {
                return Err(Error::Parse("term has too many exponents".into()));
            }
            let mut e = vec![0u32; d];
            for (i, v) in t[1..].iter().enumerate() {
                e[i] = match v {
                    Value::Number(n) => n.as_u64().ok_or_else(|| Error::Parse("exponent".into()))? as u32,
                    Value::String(s) => s.parse().map_err(|_| Error::Parse("exponent".into()))?,
                    _ => return Err(Error::Parse("exponent".into())),
                };
            }
            p.add_term(e, coef);
        }
        Ok(p)
    }
}

pub type RBox = (Vec<Q>, Vec<Q>);

fn box_of(b: &[[Dyadic; 2]]) -> RBox {
    (b.iter().map(|c| c[0].to_rational()).collect(), b.iter().map(|c| c[1].to_rational()).collect())
}

impl FunctionSpec {
    pub fn from_json(s: &str) -> Result<FunctionSpec> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("function spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn domain_boxes(&self) -> Vec<RBox> {
        match &self.domain {
            Some(bs) => bs.iter().map(|b| box_of(b)).collect(),
            None => vec![(vec![Q::from_integer(0.into()); self.d], vec![Q::from_integer(1.into()); self.d])],
        }
    }

    pub fn to_pw(&self) -> Result<Pw> {
        if self.d == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        let dom = self.domain_boxes();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            if p.bx.len() != self.d {
                return Err(Error::Parse("piece box dimension".into()));
            }
            let (lo, hi) = box_of(&p.bx);
            let inside = dom.iter().any(|(a, b)| (0..self.d).all(|i| a[i] <= lo[i] && hi[i] <= b[i]));
            if !inside {
                return Err(Error::Precondition("piece box leaves the domain".into()));
            }
            pieces.push((lo, hi, p.to_poly(self.d)?));
        }
        Pw::from_pieces(self.d, &pieces)
    }

    /// Spec of the function represented by `pw`, with the given domain.
    pub fn from_pw(pw: &Pw, domain: Option<Vec<Vec<[Dyadic; 2]>>>) -> Result<FunctionSpec> {
        let mut pieces = Vec::new();
        for (lo, hi, p) in pw.cells() {
            if p.is_zero() {
                continue;
            }
            let mut bx = Vec::with_capacity(pw.dim());
            for i in 0..pw.dim() {
                let a = Dyadic::from_rational(&lo[i]);
                let b = Dyadic::from_rational(&hi[i]);
                match (a, b) {
                    (Some(a), Some(b)) => bx.push([a, b]),
                    _ => return Err(Error::Unsupported("non-dyadic breakpoint".into())),
                }
            }
            pieces.push(Piece::new(bx, p));
        }
        Ok(FunctionSpec { d: pw.dim(), domain, pieces })
    }
}
