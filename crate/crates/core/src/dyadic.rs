//! Exact dyadic numbers, dyadic boxes, bit strings, and the wire encodings
//! used by every name: `nu_N`, `nu_Z`, the interleaved binary expansion,
//! and the pairing function.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `numerator / 2^exponent`, kept canonical (odd numerator or exponent 0).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut d = Dyadic { num: num.into(), exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let k = tz.min(self.exp as u64) as u32;
        if k > 0 {
            self.num >>= k;
            self.exp -= k;
        }
    }

    pub fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(z: impl Into<BigInt>) -> Self {
        Dyadic { num: z.into(), exp: 0 }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            Dyadic::from_int(BigInt::one() << (k as u64))
        } else {
            Dyadic { num: BigInt::one(), exp: (-k) as u32 }
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if k >= 0 {
            let k = k as u32;
            if k <= self.exp {
                Dyadic { num: self.num.clone(), exp: self.exp - k }
            } else {
                Dyadic::new(&self.num << ((k - self.exp) as u64), 0)
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + (-k) as u32)
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        if self <= other { self.clone() } else { other.clone() }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other { self.clone() } else { other.clone() }
    }

    pub fn to_rational(&self) -> BigRational {
        // Normalized: the numerator is odd whenever the exponent is positive.
        BigRational::new_raw(self.num.clone(), BigInt::one() << (self.exp as u64))
    }

    /// Exact conversion; fails unless the denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let den = r.denom().magnitude();
        if den.count_ones() != 1 {
            return None;
        }
        let e = den.trailing_zeros().unwrap_or(0) as u32;
        Some(Dyadic::new(r.numer().clone(), e))
    }

    /// `floor(r * 2^k) / 2^k`.
    pub fn floor_rational(r: &BigRational, k: u32) -> Self {
        let a: BigInt = r.numer() << (k as u64);
        Dyadic::new(a.div_floor(r.denom()), k)
    }

    /// Nearest point of `2^{-k} Z` to `r`, ties rounded down.
    pub fn round_rational(r: &BigRational, k: u32) -> Self {
        // ceil((2a + b) / 2b) - 1 with r 2^k = a / b, b > 0.
        let a: BigInt = r.numer() << (k as u64 + 1);
        let b2: BigInt = r.denom() << 1u32;
        let top = a + r.denom();
        let ceil = -((-top).div_floor(&b2));
        Dyadic::new(ceil - BigInt::one(), k)
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&(BigInt::one() << (self.exp as u64)))
    }

    pub fn ceil(&self) -> BigInt {
        -((-self).floor())
    }

    /// Truncation onto the grid `2^{-k} Z`, rounding toward minus infinity.
    pub fn floor_to(&self, k: u32) -> Self {
        if self.exp <= k {
            return self.clone();
        }
        Dyadic::new(self.num.clone() >> ((self.exp - k) as u64), k)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest integer `c` with `|self| <= 2^c`; `None` for zero.
    pub fn ceil_log2_abs(&self) -> Option<i64> {
        ceil_log2_rational(&self.abs().to_rational())
    }
}

/// Smallest integer `c` with `r <= 2^c`, for `r > 0`.
pub fn ceil_log2_rational(r: &BigRational) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let mut c = n.bits() as i64 - d.bits() as i64;
    // Adjust until 2^{c-1} < r <= 2^c.
    loop {
        if le_pow2(n, d, c) {
            if le_pow2(n, d, c - 1) {
                c -= 1;
            } else {
                return Some(c);
            }
        } else {
            c += 1;
        }
    }
}

fn le_pow2(n: &BigUint, d: &BigUint, c: i64) -> bool {
    if c >= 0 {
        *n <= d << (c as u64)
    } else {
        n << ((-c) as u64) <= *d
    }
}

/// Smallest integer `c` with `r < 2^c` for `r >= 0` (`r = 0` gives `None`).
pub fn strict_log2_bound(r: &BigRational) -> Option<i64> {
    let c = ceil_log2_rational(r)?;
    let p = Dyadic::pow2(c).to_rational();
    Some(if *r == p { c + 1 } else { c })
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << ((e - self.exp) as u64);
        let b = &other.num << ((e - other.exp) as u64);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.num << ((e - self.exp) as u64);
        let b = &rhs.num << ((e - rhs.exp) as u64);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

/// The `dyadic_arith` operations, for table-driven use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Min,
    Max,
}

pub fn dyadic_arith(op: ArithOp, x: &Dyadic, y: &Dyadic) -> Dyadic {
    match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Min => x.min(y),
        ArithOp::Max => x.max(y),
    }
}

/// Written as `m/D` with `D = 2^exponent`; `m/2^k` and bare integers also parse.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, BigInt::one() << (self.exp as u64))
    }
}

impl FromStr for Dyadic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("dyadic literal {s:?}"));
        let s = s.trim();
        let (m, den) = match s.split_once('/') {
            None => return Ok(Dyadic::from_int(BigInt::from_str(s).map_err(|_| bad())?)),
            Some(p) => p,
        };
        let m = BigInt::from_str(m.trim()).map_err(|_| bad())?;
        let den = den.trim();
        let exp = if let Some(k) = den.strip_prefix("2^") {
            k.parse::<u32>().map_err(|_| bad())?
        } else {
            let d = BigUint::from_str(den).map_err(|_| bad())?;
            if d.count_ones() != 1 {
                return Err(bad());
            }
            d.trailing_zeros().unwrap_or(0) as u32
        };
        Ok(Dyadic::new(m, exp))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Axis-parallel box `[lower, upper]` in `R^d` with dyadic corners.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DyBox {
    pub lower: Vec<Dyadic>,
    pub upper: Vec<Dyadic>,
}

impl DyBox {
    pub fn new(lower: Vec<Dyadic>, upper: Vec<Dyadic>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Precondition("box corner dimensions differ".into()));
        }
        if lower.iter().zip(&upper).any(|(a, b)| a > b) {
            return Err(Error::Precondition("box lower corner exceeds upper".into()));
        }
        Ok(DyBox { lower, upper })
    }

    pub fn interval(a: Dyadic, b: Dyadic) -> Result<Self> {
        DyBox::new(vec![a], vec![b])
    }

    pub fn unit(d: usize) -> Self {
        DyBox { lower: vec![Dyadic::zero(); d], upper: vec![Dyadic::one(); d] }
    }

    /// `center + [-r, r]^d`.
    pub fn cube(center: &[Dyadic], r: &Dyadic) -> Self {
        DyBox {
            lower: center.iter().map(|c| c - r).collect(),
            upper: center.iter().map(|c| c + r).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> Dyadic {
        self.lower
            .iter()
            .zip(&self.upper)
            .fold(Dyadic::one(), |acc, (a, b)| &acc * &(b - a))
    }

    pub fn intersect(&self, other: &DyBox) -> Option<DyBox> {
        let lower: Vec<Dyadic> = self.lower.iter().zip(&other.lower).map(|(a, b)| a.max(b)).collect();
        let upper: Vec<Dyadic> = self.upper.iter().zip(&other.upper).map(|(a, b)| a.min(b)).collect();
        if lower.iter().zip(&upper).any(|(a, b)| a > b) {
            None
        } else {
            Some(DyBox { lower, upper })
        }
    }

    pub fn translate(&self, y: &[Dyadic]) -> DyBox {
        DyBox {
            lower: self.lower.iter().zip(y).map(|(a, t)| a + t).collect(),
            upper: self.upper.iter().zip(y).map(|(a, t)| a + t).collect(),
        }
    }

    pub fn contains_point(&self, x: &[Dyadic]) -> bool {
        x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (a, b))| a <= v && v <= b)
    }

    pub fn contains_box(&self, other: &DyBox) -> bool {
        self.lower.iter().zip(&other.lower).all(|(a, b)| a <= b)
            && self.upper.iter().zip(&other.upper).all(|(a, b)| b <= a)
    }

    /// Longest side length.
    pub fn diameter_inf(&self) -> Dyadic {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| b - a)
            .max()
            .unwrap_or_else(Dyadic::zero)
    }
}

/// Finite word over `{0,1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn ones(n: usize) -> Self {
        BitString(vec![true; n])
    }

    pub fn zeros(n: usize) -> Self {
        BitString(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BitString(v)
    }

    /// Right-pad with zeros to length `n`; errors if already longer.
    pub fn padded(&self, n: usize) -> Result<BitString> {
        if self.len() > n {
            return Err(Error::Invariant(format!("answer length {} exceeds target {n}", self.len())));
        }
        let mut v = self.0.clone();
        v.resize(n, false);
        Ok(BitString(v))
    }

    /// All strings of length `n` in lexicographic order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = BitString> {
        (0u64..(1u64 << n)).map(move |i| BitString((0..n).map(|j| (i >> (n - 1 - j)) & 1 == 1).collect()))
    }

    pub fn to_hex(&self) -> String {
        let mut bytes = Vec::with_capacity(self.len().div_ceil(8) + 4);
        bytes.extend_from_slice(&(self.len() as u32).to_be_bytes());
        for chunk in self.0.chunks(8) {
            let mut b = 0u8;
            for (i, &bit) in chunk.iter().enumerate() {
                if bit {
                    b |= 0x80 >> i;
                }
            }
            bytes.push(b);
        }
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<BitString> {
        let bad = || Error::Parse(format!("hex bit string {s:?}"));
        if s.len() % 2 != 0 || s.len() < 8 {
            return Err(bad());
        }
        let bytes: Vec<u8> = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16))
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let n = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as usize;
        if bytes.len() - 4 != n.div_ceil(8) {
            return Err(bad());
        }
        Ok(BitString((0..n).map(|i| bytes[4 + i / 8] & (0x80 >> (i % 8)) != 0).collect()))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bit string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

/// Shorthand for string literals in tests and tables.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}

fn nat_bits(n: &BigUint) -> Vec<bool> {
    let len = n.bits();
    (0..len).rev().map(|i| n.bit(i)).collect()
}

fn read_nat(bits: &[bool]) -> BigUint {
    bits.iter().fold(BigUint::zero(), |acc, &b| (acc << 1u8) + if b { 1u8 } else { 0u8 })
}

pub fn encode_nat(n: &BigUint) -> Result<BitString> {
    if n.is_zero() {
        return Err(Error::Precondition("encode_nat needs n >= 1".into()));
    }
    Ok(BitString(nat_bits(n)))
}

pub fn decode_nat(a: &BitString) -> Result<BigUint> {
    let v = read_nat(&a.0);
    if v.is_zero() {
        Err(Error::NoPositiveValue)
    } else {
        Ok(v)
    }
}

/// Sign bit (1 positive, 0 negative) then binary magnitude; zero is the lone sign bit `"0"`.
pub fn encode_int(z: &BigInt) -> BitString {
    let mut v = vec![z.sign() != Sign::Minus && !z.is_zero()];
    v.extend(nat_bits(z.magnitude()));
    BitString(v)
}

/// Inverse of [`encode_int`]; an all-zero magnitude decodes to 0.
pub fn decode_int(a: &BitString) -> Result<BigInt> {
    let (&sign, rest) = a.0.split_first().ok_or_else(|| Error::Parse("empty integer code".into()))?;
    let mag = BigInt::from(read_nat(rest));
    Ok(if sign { mag } else { -mag })
}

/// Interleaved binary expansion with comma.
///
/// The digit string `a` (sign bit, integer digits, fraction digits) is written
/// with a marker after each symbol: `1` continues, the first `0` is the comma,
/// and after the comma a `0` or end of input stops.  Any further symbols must be
/// zeros.  The encoder omits the final stop marker; zero is `"00"`.
pub fn encode_dyadic(x: &Dyadic) -> BitString {
    if x.is_zero() {
        return bits("00");
    }
    let n = x.exponent() as usize;
    let mag = x.numerator().magnitude();
    let digits = nat_bits(mag);
    // Split into integer part (possibly empty) and exactly n fraction digits.
    let (int_part, frac): (Vec<bool>, Vec<bool>) = if digits.len() > n {
        let k = digits.len() - n;
        (digits[..k].to_vec(), digits[k..].to_vec())
    } else {
        let mut f = vec![false; n - digits.len()];
        f.extend(&digits);
        (Vec::new(), f)
    };
    let mut out = Vec::with_capacity(2 * (digits.len() + n + 1));
    let mut head = vec![!x.is_negative()];
    head.extend(int_part);
    for (i, &b) in head.iter().enumerate() {
        out.push(b);
        out.push(i + 1 < head.len());
    }
    for (i, &b) in frac.iter().enumerate() {
        out.push(b);
        if i + 1 < frac.len() {
            out.push(true);
        }
    }
    BitString(out)
}

/// Length of [`encode_dyadic`]`(x)`, without building it.
pub fn encoded_len(x: &Dyadic) -> usize {
    if x.is_zero() {
        return 2;
    }
    let n = x.exponent() as usize;
    let dl = x.numerator().magnitude().bits() as usize;
    let int_len = dl.saturating_sub(n);
    2 * (1 + int_len) + if n == 0 { 0 } else { 2 * n - 1 }
}

pub fn decode_dyadic(a: &BitString) -> Result<Dyadic> {
    let s = &a.0;
    if s.iter().all(|b| !b) {
        return Ok(Dyadic::zero());
    }
    let perr = |m: &str| Error::Parse(format!("bin code {a}: {m}"));
    let mut i = 0;
    let mut head = Vec::new();
    loop {
        if i + 1 >= s.len() {
            return Err(perr("missing comma"));
        }
        head.push(s[i]);
        let cont = s[i + 1];
        i += 2;
        if !cont {
            break;
        }
    }
    let mut frac = Vec::new();
    while i < s.len() {
        frac.push(s[i]);
        i += 1;
        if i >= s.len() || !s[i] {
            i += 1;
            break;
        }
        i += 1;
    }
    if s.get(i..).map(|r| r.iter().any(|&b| b)).unwrap_or(false) {
        return Err(perr("nonzero symbols after terminator"));
    }
    let sign = head[0];
    let mut digits = head[1..].to_vec();
    digits.extend(&frac);
    let mag = BigInt::from(read_nat(&digits));
    let num = if sign { mag } else { -mag };
    Ok(Dyadic::new(num, frac.len() as u32))
}

/// Doubled bits of `a`, separator `01`, then doubled bits of `b`.
pub fn pair(a: &BitString, b: &BitString) -> BitString {
    let mut v = Vec::with_capacity(2 * (a.len() + b.len() + 1));
    for &x in &a.0 {
        v.push(x);
        v.push(x);
    }
    v.push(false);
    v.push(true);
    for &x in &b.0 {
        v.push(x);
        v.push(x);
    }
    BitString(v)
}

fn undouble(s: &[bool]) -> Option<Vec<bool>> {
    if s.len() % 2 != 0 {
        return None;
    }
    s.chunks(2).map(|c| (c[0] == c[1]).then_some(c[0])).collect()
}

pub fn unpair(c: &BitString) -> Result<(BitString, BitString)> {
    let s = &c.0;
    let mut a = Vec::new();
    let mut i = 0;
    while i + 1 < s.len() {
        match (s[i], s[i + 1]) {
            (false, true) => {
                let b = undouble(&s[i + 2..]).ok_or_else(|| Error::Unpair(format!("{c}: bad second component")))?;
                return Ok((BitString(a), BitString(b)));
            }
            (x, y) if x == y => a.push(x),
            _ => return Err(Error::Unpair(format!("{c}: bad pair at {i}"))),
        }
        i += 2;
    }
    Err(Error::Unpair(format!("{c}: no separator")))
}

/// Right-nested pairing `<a1, <a2, ... <a_{k-1}, a_k>>>`.
pub fn pair_many(parts: &[BitString]) -> BitString {
    match parts {
        [] => BitString::new(),
        [x] => x.clone(),
        [x, rest @ ..] => pair(x, &pair_many(rest)),
    }
}

pub fn unpair_many(c: &BitString, k: usize) -> Result<Vec<BitString>> {
    let mut out = Vec::with_capacity(k);
    let mut cur = c.clone();
    for _ in 1..k {
        let (a, b) = unpair(&cur)?;
        out.push(a);
        cur = b;
    }
    out.push(cur);
    Ok(out)
}

/// `bin_d`: nested pairing of coordinate codes.
pub fn encode_vector(x: &[Dyadic]) -> BitString {
    let parts: Vec<BitString> = x.iter().map(encode_dyadic).collect();
    pair_many(&parts)
}

pub fn decode_vector(c: &BitString, d: usize) -> Result<Vec<Dyadic>> {
    unpair_many(c, d)?.iter().map(decode_dyadic).collect()
}

/// The standard integral query `<a, b, 1^n>`.
pub fn box_query(b: &DyBox, n: usize) -> BitString {
    pair_many(&[encode_vector(&b.lower), encode_vector(&b.upper), BitString::ones(n)])
}

/// Parses `<a, b, 1^n>`; `None` if the shape is wrong or `a > b` somewhere.
pub fn parse_box_query(q: &BitString, d: usize) -> Option<(DyBox, usize)> {
    let parts = unpair_many(q, 3).ok()?;
    let lower = decode_vector(&parts[0], d).ok()?;
    let upper = decode_vector(&parts[1], d).ok()?;
    if parts[2].0.iter().any(|b| !b) {
        return None;
    }
    Some((DyBox::new(lower, upper).ok()?, parts[2].len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn nat_examples() {
        assert_eq!(encode_nat(&BigUint::from(1u8)).unwrap(), bits("1"));
        assert_eq!(encode_nat(&BigUint::from(6u8)).unwrap(), bits("110"));
        assert_eq!(decode_nat(&bits("0011")).unwrap(), BigUint::from(3u8));
        assert_eq!(decode_nat(&bits("000")), Err(Error::NoPositiveValue));
    }

    #[test]
    fn int_examples() {
        assert_eq!(encode_int(&BigInt::from(3)), bits("111"));
        assert_eq!(encode_int(&BigInt::from(-1)), bits("01"));
        for z in (-8..=8).filter(|z| *z != 0) {
            assert_eq!(decode_int(&encode_int(&BigInt::from(z))).unwrap(), BigInt::from(z));
        }
    }

    #[test]
    fn dyadic_examples() {
        assert_eq!(decode_dyadic(&bits("1110")).unwrap(), Dyadic::one());
        assert_eq!(encode_dyadic(&dy("3/2")), bits("11101"));
        assert_eq!(decode_dyadic(&bits("111010000")).unwrap(), dy("3/2"));
        assert_eq!(decode_dyadic(&bits("")).unwrap(), Dyadic::zero());
        assert_eq!(encode_dyadic(&Dyadic::zero()), bits("00"));
        assert!(decode_dyadic(&bits("1111")).is_err());
        assert!(decode_dyadic(&bits("11100001")).is_err());
    }

    #[test]
    fn encoded_len_matches() {
        for s in ["1/1", "3/2", "-3/2", "1/4", "-5/8", "12/1", "0/1", "7/2^5"] {
            let x = dy(s);
            assert_eq!(encoded_len(&x), encode_dyadic(&x).len(), "{s}");
        }
    }

    #[test]
    fn pair_examples() {
        assert_eq!(pair(&bits("1"), &bits("0")), bits("110100"));
        assert_eq!(unpair(&bits("110100")).unwrap(), (bits("1"), bits("0")));
        assert!(unpair(&bits("10")).is_err());
        assert!(unpair(&bits("11")).is_err());
    }

    #[test]
    fn arith_examples() {
        assert_eq!(dyadic_arith(ArithOp::Add, &dy("1/2"), &dy("1/4")), dy("3/4"));
        assert_eq!(dyadic_arith(ArithOp::Mul, &dy("3/2"), &dy("1/2")), dy("3/4"));
        assert_eq!(dy("1/2").cmp(&dy("2/4")), Ordering::Equal);
        assert_eq!(dy("2/4"), dy("1/2"));
        assert_eq!(dy("3/2^3").to_string(), "3/8");
    }

    #[test]
    fn log2_bounds() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(ceil_log2_rational(&r(1, 1)), Some(0));
        assert_eq!(ceil_log2_rational(&r(3, 1)), Some(2));
        assert_eq!(ceil_log2_rational(&r(1, 3)), Some(-1));
        assert_eq!(ceil_log2_rational(&r(1, 4)), Some(-2));
        assert_eq!(strict_log2_bound(&r(1, 4)), Some(-1));
        assert_eq!(strict_log2_bound(&r(3, 1)), Some(2));
    }

    #[test]
    fn hex_round_trip() {
        for s in ["", "1", "10110", "111111111"] {
            let b = bits(s);
            assert_eq!(BitString::from_hex(&b.to_hex()).unwrap(), b);
        }
    }

    #[test]
    fn box_query_round_trip() {
        let b = DyBox::interval(dy("1/4"), dy("3/2")).unwrap();
        let q = box_query(&b, 5);
        assert_eq!(parse_box_query(&q, 1), Some((b, 5)));
    }
}
