use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::dyadic::{
    decode_dyadic, decode_nat, decode_vector, encode_dyadic, encode_nat, encode_vector, pair_many, unpair, BitString,
    DyBox, Dyadic,
};
use crate::error::{Error, Result};
use crate::symbolic::{Poly, Pw, Q};

/// Dyadic step function: boxes with disjoint interiors and their values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFunction {
    pub d: usize,
    pub entries: Vec<(DyBox, Dyadic)>,
}

impl StepFunction {
    pub fn zero(d: usize) -> Self {
        StepFunction { d, entries: Vec::new() }
    }

    pub fn new(d: usize, entries: Vec<(DyBox, Dyadic)>) -> Result<Self> {
        if entries.iter().any(|(b, _)| b.dim() != d) {
            return Err(Error::Precondition("step box dimension".into()));
        }
        let s = StepFunction { d, entries };
        s.to_pw()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Drops zero entries and merges neighbouring 1-D cells with equal values.
    pub fn simplify(&self) -> StepFunction {
        let mut entries: Vec<(DyBox, Dyadic)> = self.entries.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        if self.d == 1 {
            entries.sort_by(|a, b| a.0.lower[0].cmp(&b.0.lower[0]));
            let mut out: Vec<(DyBox, Dyadic)> = Vec::with_capacity(entries.len());
            for (b, v) in entries {
                if let Some((pb, pv)) = out.last_mut() {
                    if *pv == v && pb.upper[0] == b.lower[0] {
                        pb.upper[0] = b.upper[0].clone();
                        continue;
                    }
                }
                out.push((b, v));
            }
            entries = out;
        }
        StepFunction { d: self.d, entries }
    }

    pub fn to_pw(&self) -> Result<Pw> {
        let pieces: Vec<(Vec<Q>, Vec<Q>, Poly)> = self
            .entries
            .iter()
            .map(|(b, v)| {
                (
                    b.lower.iter().map(Dyadic::to_rational).collect(),
                    b.upper.iter().map(Dyadic::to_rational).collect(),
                    Poly::constant(self.d, v.to_rational()),
                )
            })
            .collect();
        Pw::from_pieces(self.d, &pieces)
    }

    /// Flat list `[count+1][entry_1]...[entry_k]`, each item written with
    /// doubled bits and closed by `01`; `entry = <lower, upper, value>`.
    pub fn encode(&self) -> BitString {
        let mut out = BitString::new();
        push_item(&mut out, &encode_nat(&BigUint::from(self.entries.len() + 1)).expect("positive"));
        for (b, v) in &self.entries {
            push_item(&mut out, &pair_many(&[encode_vector(&b.lower), encode_vector(&b.upper), encode_dyadic(v)]));
        }
        out
    }

    /// Inverse of [`StepFunction::encode`]; trailing zero padding is accepted.
    pub fn decode(c: &BitString, d: usize) -> Result<StepFunction> {
        let mut pos = 0;
        let head = read_item(c, &mut pos)?;
        let count = decode_nat(&head)?;
        let count: usize = usize::try_from(count).map_err(|_| Error::Parse("step count".into()))? - 1;
        let mut entries = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let e = read_item(c, &mut pos)?;
            let (lo, r2) = unpair(&e)?;
            let (hi, v) = unpair(&r2)?;
            let b = DyBox::new(decode_vector(&lo, d)?, decode_vector(&hi, d)?)?;
            entries.push((b, decode_dyadic(&v)?));
        }
        if c.0[pos..].iter().any(|&b| b) {
            return Err(Error::Parse("step list has trailing data".into()));
        }
        Ok(StepFunction { d, entries })
    }
}

fn push_item(out: &mut BitString, x: &BitString) {
    for &b in &x.0 {
        out.0.push(b);
        out.0.push(b);
    }
    out.0.push(false);
    out.0.push(true);
}

fn read_item(c: &BitString, pos: &mut usize) -> Result<BitString> {
    let s = &c.0;
    let mut v = Vec::new();
    loop {
        if *pos + 1 >= s.len() {
            return Err(Error::Parse("unterminated step item".into()));
        }
        let (a, b) = (s[*pos], s[*pos + 1]);
        *pos += 2;
        match (a, b) {
            (false, true) => return Ok(BitString(v)),
            (x, y) if x == y => v.push(x),
            _ => return Err(Error::Parse("malformed step item".into())),
        }
    }
}
