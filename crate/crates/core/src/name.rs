//! Oracles ("names") with declared answer lengths, tracing and
//! second-order polynomial bounds.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::dyadic::{
    decode_dyadic, decode_vector, encode_dyadic, encode_vector, encoded_len, pair, pair_many, unpair,
    unpair_many, BitString, DyBox, Dyadic,
};
use crate::error::{Error, Result};
use crate::step::StepFunction;

pub type LenFn = Arc<dyn Fn(usize) -> usize + Send + Sync>;
pub type SemFn = Arc<dyn Fn(&Query) -> Result<Answer> + Send + Sync>;
pub type RawFn = Arc<dyn Fn(&BitString) -> BitString + Send + Sync>;

pub fn len_fn(f: impl Fn(usize) -> usize + Send + Sync + 'static) -> LenFn {
    Arc::new(f)
}

/// Query grammar understood by a name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryShape {
    /// `1^n`
    Real,
    /// `<bin_d(x), 1^n>`
    Point,
    /// `<bin_d(a), bin_d(b), 1^n>`
    Integral,
    /// `<bin_d(a), 1^k, 1^n>`
    Mollified,
    /// `1^n`, answered by a step function
    Index,
    /// Anything; no semantic parse.
    Raw,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Real { n: usize },
    Point { x: Vec<Dyadic>, n: usize },
    Integral { b: DyBox, n: usize },
    Mollified { x: Vec<Dyadic>, k: usize, n: usize },
    Index { n: usize },
}

fn pair_len(a: usize, b: usize) -> usize {
    2 * a + 2 + 2 * b
}

fn vector_len(x: &[Dyadic]) -> usize {
    match x.split_last() {
        None => 0,
        Some((last, init)) => init.iter().rev().fold(encoded_len(last), |acc, v| pair_len(encoded_len(v), acc)),
    }
}

impl Query {
    pub fn shape(&self) -> QueryShape {
        match self {
            Query::Real { .. } => QueryShape::Real,
            Query::Point { .. } => QueryShape::Point,
            Query::Integral { .. } => QueryShape::Integral,
            Query::Mollified { .. } => QueryShape::Mollified,
            Query::Index { .. } => QueryShape::Index,
        }
    }

    pub fn precision(&self) -> usize {
        match self {
            Query::Real { n }
            | Query::Point { n, .. }
            | Query::Integral { n, .. }
            | Query::Mollified { n, .. }
            | Query::Index { n } => *n,
        }
    }

    pub fn encode(&self) -> BitString {
        match self {
            Query::Real { n } | Query::Index { n } => BitString::ones(*n),
            Query::Point { x, n } => pair(&encode_vector(x), &BitString::ones(*n)),
            Query::Integral { b, n } => crate::dyadic::box_query(b, *n),
            Query::Mollified { x, k, n } => {
                pair_many(&[encode_vector(x), BitString::ones(*k), BitString::ones(*n)])
            }
        }
    }

    /// Length of [`Query::encode`] without building it.
    pub fn bit_len(&self) -> usize {
        match self {
            Query::Real { n } | Query::Index { n } => *n,
            Query::Point { x, n } => pair_len(vector_len(x), *n),
            Query::Integral { b, n } => pair_len(vector_len(&b.lower), pair_len(vector_len(&b.upper), *n)),
            Query::Mollified { x, k, n } => pair_len(vector_len(x), pair_len(*k, *n)),
        }
    }

    pub fn parse(shape: QueryShape, d: usize, a: &BitString) -> Option<Query> {
        let ones = |s: &BitString| s.0.iter().all(|&b| b);
        match shape {
            QueryShape::Real => ones(a).then(|| Query::Real { n: a.len() }),
            QueryShape::Index => ones(a).then(|| Query::Index { n: a.len() }),
            QueryShape::Point => {
                let (x, u) = unpair(a).ok()?;
                ones(&u).then_some(())?;
                Some(Query::Point { x: decode_vector(&x, d).ok()?, n: u.len() })
            }
            QueryShape::Integral => {
                let p = unpair_many(a, 3).ok()?;
                ones(&p[2]).then_some(())?;
                let x = decode_vector(&p[0], d).ok()?;
                let y = decode_vector(&p[1], d).ok()?;
                let lower = x.iter().zip(&y).map(|(u, v)| u.min(v)).collect();
                let upper = x.iter().zip(&y).map(|(u, v)| u.max(v)).collect();
                Some(Query::Integral { b: DyBox::new(lower, upper).ok()?, n: p[2].len() })
            }
            QueryShape::Mollified => {
                let p = unpair_many(a, 3).ok()?;
                (ones(&p[1]) && ones(&p[2])).then_some(())?;
                Some(Query::Mollified { x: decode_vector(&p[0], d).ok()?, k: p[1].len(), n: p[2].len() })
            }
            QueryShape::Raw => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Answer {
    Value(Dyadic),
    Step(StepFunction),
    Pair(Box<Answer>, Box<Answer>),
    Bits(BitString),
}

impl Answer {
    pub fn encode(&self) -> BitString {
        match self {
            Answer::Value(v) => encode_dyadic(v),
            Answer::Step(s) => s.encode(),
            Answer::Pair(a, b) => pair(&a.encode(), &b.encode()),
            Answer::Bits(b) => b.clone(),
        }
    }

    pub fn bit_len(&self) -> usize {
        match self {
            Answer::Value(v) => encoded_len(v),
            Answer::Pair(a, b) => pair_len(a.bit_len(), b.bit_len()),
            Answer::Bits(b) => b.len(),
            Answer::Step(s) => s.encode().len(),
        }
    }

    pub fn value(&self) -> Result<&Dyadic> {
        match self {
            Answer::Value(v) => Ok(v),
            _ => Err(Error::Invariant("expected a dyadic answer".into())),
        }
    }

    pub fn step(&self) -> Result<&StepFunction> {
        match self {
            Answer::Step(s) => Ok(s),
            _ => Err(Error::Invariant("expected a step-function answer".into())),
        }
    }
}

/// How bit answers decode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerKind {
    Value,
    Step(usize),
    Pair(Box<AnswerKind>, Box<AnswerKind>),
    Bits,
}

impl AnswerKind {
    pub fn decode(&self, a: &BitString) -> Result<Answer> {
        match self {
            AnswerKind::Value => Ok(Answer::Value(decode_dyadic(a)?)),
            AnswerKind::Step(d) => Ok(Answer::Step(StepFunction::decode(a, *d)?)),
            AnswerKind::Bits => Ok(Answer::Bits(a.clone())),
            AnswerKind::Pair(x, y) => {
                let (u, v) = unpair(a)?;
                Ok(Answer::Pair(Box::new(x.decode(&u)?), Box::new(y.decode(&v)?)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub query_len: usize,
    pub answer_len: usize,
    pub tag: String,
}

#[derive(Debug, Default)]
struct TraceLog {
    entries: Vec<TraceEntry>,
    queries: u64,
    bits: u64,
    dropped: u64,
    worst: Option<TraceEntry>,
    budget: Option<u64>,
    log_limit: Option<usize>,
}

pub const DEFAULT_LOG_LIMIT: usize = 1 << 16;

/// Shared, append-only query log. Clones refer to the same log; concurrent
/// callers are serialized by an internal lock.
#[derive(Clone, Debug, Default)]
pub struct Trace(Arc<Mutex<TraceLog>>);

impl Trace {
    /// Log capped at [`DEFAULT_LOG_LIMIT`] entries.
    pub fn new() -> Self {
        Trace::default().limit_log(DEFAULT_LOG_LIMIT)
    }

    /// Queries beyond `budget` fail with [`Error::Budget`].
    pub fn with_budget(budget: u64) -> Self {
        let t = Trace::new();
        t.0.lock().unwrap().budget = Some(budget);
        t
    }

    /// Keep at most `limit` entries; the counters stay exact.
    pub fn limit_log(self, limit: usize) -> Self {
        self.0.lock().unwrap().log_limit = Some(limit);
        self
    }

    pub fn record(&self, query_len: usize, answer_len: usize, tag: &str) -> Result<()> {
        let mut g = self.0.lock().unwrap();
        if let Some(b) = g.budget {
            if g.queries >= b {
                return Err(Error::Budget { used: g.queries + 1, budget: b });
            }
        }
        g.queries += 1;
        g.bits += answer_len as u64;
        let entry = || TraceEntry { query_len, answer_len, tag: tag.to_string() };
        if g.worst.as_ref().map_or(true, |w| answer_len > w.answer_len) {
            g.worst = Some(entry());
        }
        if g.log_limit.map_or(true, |l| g.entries.len() < l) {
            g.entries.push(entry());
        } else {
            g.dropped += 1;
        }
        Ok(())
    }

    pub fn queries(&self) -> u64 {
        self.0.lock().unwrap().queries
    }

    pub fn bits(&self) -> u64 {
        self.0.lock().unwrap().bits
    }

    pub fn dropped(&self) -> u64 {
        self.0.lock().unwrap().dropped
    }

    pub fn entries(&self) -> Vec<TraceEntry> {
        self.0.lock().unwrap().entries.clone()
    }

    pub fn worst(&self) -> Option<TraceEntry> {
        self.0.lock().unwrap().worst.clone()
    }

    pub fn to_json_lines(&self) -> String {
        let g = self.0.lock().unwrap();
        let mut s = String::new();
        for e in &g.entries {
            s.push_str(&serde_json::to_string(e).expect("entry serializes"));
            s.push('\n');
        }
        s
    }
}

#[derive(Clone)]
enum Core {
    Semantic(SemFn),
    Raw(RawFn),
    Pair(Box<Name>, Box<Name>),
}

/// A total, length-monotone string function with a declared length.
#[derive(Clone)]
pub struct Name {
    shape: QueryShape,
    d: usize,
    kind: AnswerKind,
    core: Core,
    length: LenFn,
    trace: Option<Trace>,
    tag: Arc<str>,
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Name")
            .field("shape", &self.shape)
            .field("d", &self.d)
            .field("kind", &self.kind)
            .field("tag", &self.tag)
            .finish()
    }
}

impl Name {
    /// Name answering parsed queries through `f`; the bit interface encodes
    /// and pads its answers.
    pub fn semantic(shape: QueryShape, d: usize, kind: AnswerKind, length: LenFn, f: SemFn) -> Name {
        Name { shape, d, kind, core: Core::Semantic(f), length, trace: None, tag: Arc::from("name") }
    }

    pub fn raw(kind: AnswerKind, length: LenFn, f: RawFn) -> Name {
        Name { shape: QueryShape::Raw, d: 0, kind, core: Core::Raw(f), length, trace: None, tag: Arc::from("raw") }
    }

    pub fn shape(&self) -> QueryShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> &AnswerKind {
        &self.kind
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn with_tag(mut self, tag: &str) -> Name {
        self.tag = Arc::from(tag);
        self
    }

    /// Components of a paired name.
    pub fn components(&self) -> Option<(Name, Name)> {
        match &self.core {
            Core::Pair(x, y) => Some(((**x).clone(), (**y).clone())),
            _ => None,
        }
    }

    /// `|φ|(n)`; reading it is not a query.
    pub fn declared_length(&self, n: usize) -> usize {
        (self.length)(n)
    }

    pub fn length_fn(&self) -> LenFn {
        self.length.clone()
    }

    /// Same oracle recording into `trace`.
    pub fn traced(&self, trace: &Trace) -> Name {
        let mut n = self.clone();
        n.trace = Some(trace.clone());
        n
    }

    pub fn untraced(&self) -> Name {
        let mut n = self.clone();
        n.trace = None;
        n
    }

    /// Same answers, declared length replaced by `target`.
    pub fn with_length(&self, target: LenFn) -> Name {
        let mut n = self.clone();
        n.length = target;
        n
    }

    fn record(&self, query_len: usize) -> Result<()> {
        match &self.trace {
            Some(t) => t.record(query_len, self.declared_length(query_len), &self.tag),
            None => Ok(()),
        }
    }

    fn answer_bits(&self, a: &BitString) -> Result<BitString> {
        let target = self.declared_length(a.len());
        let bits = match &self.core {
            Core::Semantic(f) => match Query::parse(self.shape, self.d, a) {
                Some(q) => f(&q)?.encode(),
                None => BitString::new(),
            },
            Core::Raw(f) => f(a),
            Core::Pair(x, y) => pair(&x.answer_bits(a)?, &y.answer_bits(a)?),
        };
        bits.padded(target).map_err(|_| {
            Error::Invariant(format!("answer of length {} exceeds declared length {target}", bits.len()))
        })
    }

    /// Bit-level oracle call; the answer has exactly the declared length.
    pub fn query(&self, a: &BitString) -> Result<BitString> {
        let r = self.answer_bits(a)?;
        self.record(a.len())?;
        Ok(r)
    }

    fn answer_sem(&self, q: &Query) -> Result<Answer> {
        match &self.core {
            Core::Semantic(f) => {
                let ans = f(q)?;
                let target = self.declared_length(q.bit_len());
                let len = ans.bit_len();
                if len > target {
                    return Err(Error::Invariant(format!(
                        "answer of length {len} exceeds declared length {target}"
                    )));
                }
                Ok(ans)
            }
            Core::Raw(_) => self.kind.decode(&self.answer_bits(&q.encode())?),
            Core::Pair(x, y) => Ok(Answer::Pair(Box::new(x.answer_sem(q)?), Box::new(y.answer_sem(q)?))),
        }
    }

    /// Semantic oracle call; traced exactly like [`Name::query`] on the
    /// encoded query.
    pub fn ask(&self, q: &Query) -> Result<Answer> {
        let r = self.answer_sem(q)?;
        self.record(q.bit_len())?;
        Ok(r)
    }

    /// Convenience for names with dyadic answers.
    pub fn ask_value(&self, q: &Query) -> Result<Dyadic> {
        match self.ask(q)? {
            Answer::Value(v) => Ok(v),
            _ => Err(Error::Invariant("expected a dyadic answer".into())),
        }
    }
}

/// Pads the answers of a raw oracle to `target`.
pub fn pad_name(raw: RawFn, kind: AnswerKind, target: LenFn) -> Name {
    Name::raw(kind, target, raw)
}

/// `<φ, ψ>(a) = <φ(a), ψ(a)>`.
pub fn pair_names(x: &Name, y: &Name) -> Name {
    let (lx, ly) = (x.length.clone(), y.length.clone());
    Name {
        shape: if x.shape == y.shape { x.shape } else { QueryShape::Raw },
        d: x.d,
        kind: AnswerKind::Pair(Box::new(x.kind.clone()), Box::new(y.kind.clone())),
        core: Core::Pair(Box::new(x.untraced()), Box::new(y.untraced())),
        length: Arc::new(move |n| pair_len(lx(n), ly(n))),
        trace: None,
        tag: Arc::from(format!("<{},{}>", x.tag, y.tag)),
    }
}

/// Checks `|φ(a)| = |φ|(|a|)` on all strings up to `max_len` and that the
/// declared length is monotone there.
pub fn check_name_exhaustive(name: &Name, max_len: usize) -> Result<()> {
    let mut prev = 0;
    for l in 0..=max_len {
        let t = name.declared_length(l);
        if t < prev {
            return Err(Error::Invariant(format!("declared length decreases at {l}")));
        }
        prev = t;
        for a in BitString::all_of_len(l) {
            check_name_on(name, &a)?;
        }
    }
    Ok(())
}

pub fn check_name_on(name: &Name, a: &BitString) -> Result<()> {
    let r = name.untraced().query(a)?;
    if r.len() != name.declared_length(a.len()) {
        return Err(Error::Invariant(format!("answer length {} on query of length {}", r.len(), a.len())));
    }
    Ok(())
}

/// Second-order polynomial in a length function `l` and a number `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sop {
    /// Ascending coefficients of a polynomial in `n`.
    Poly(Vec<u64>),
    Add(Box<Sop>, Box<Sop>),
    Mul(Box<Sop>, Box<Sop>),
    App(Box<Sop>),
}

impl Sop {
    pub fn n() -> Sop {
        Sop::Poly(vec![0, 1])
    }

    pub fn constant(c: u64) -> Sop {
        Sop::Poly(vec![c])
    }

    pub fn add(self, o: Sop) -> Sop {
        Sop::Add(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Sop) -> Sop {
        Sop::Mul(Box::new(self), Box::new(o))
    }

    pub fn app(self) -> Sop {
        Sop::App(Box::new(self))
    }
}

impl fmt::Display for Sop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sop::Poly(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(i, &a)| match (i, a) {
                        (0, a) => a.to_string(),
                        (1, 1) => "n".into(),
                        (1, a) => format!("{a}n"),
                        (i, 1) => format!("n^{i}"),
                        (i, a) => format!("{a}n^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    f.write_str("0")
                } else {
                    f.write_str(&terms.join("+"))
                }
            }
            Sop::Add(a, b) => write!(f, "({a})+({b})"),
            Sop::Mul(a, b) => write!(f, "({a})*({b})"),
            Sop::App(a) => write!(f, "l({a})"),
        }
    }
}

/// Structural evaluation with saturating arithmetic.
pub fn eval_sop(p: &Sop, l: &dyn Fn(u64) -> u64, n: u64) -> u64 {
    match p {
        Sop::Poly(c) => c.iter().rev().fold(0u64, |acc, &a| acc.saturating_mul(n).saturating_add(a)),
        Sop::Add(a, b) => eval_sop(a, l, n).saturating_add(eval_sop(b, l, n)),
        Sop::Mul(a, b) => eval_sop(a, l, n).saturating_mul(eval_sop(b, l, n)),
        Sop::App(a) => l(eval_sop(a, l, n)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub holds: bool,
    pub queries: u64,
    pub bits: u64,
    pub bound: u64,
    pub worst: Option<TraceEntry>,
}

/// Query count and total answer bits against `P(l, n)`.
pub fn check_query_bound(trace: &Trace, p: &Sop, l: &dyn Fn(u64) -> u64, n: u64) -> BoundReport {
    let bound = eval_sop(p, l, n);
    let (queries, bits) = (trace.queries(), trace.bits());
    BoundReport { holds: queries <= bound && bits <= bound, queries, bits, bound, worst: trace.worst() }
}

/// `2^{A l(|a|+B) + C|a|}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpBound {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpReport {
    pub holds: bool,
    pub queries: u64,
    pub log2_bound: u64,
    pub constants: ExpBound,
}

pub fn check_exp_bound(trace: &Trace, e: ExpBound, l: &dyn Fn(u64) -> u64, input_len: u64) -> ExpReport {
    let log2_bound = e
        .a
        .saturating_mul(l(input_len.saturating_add(e.b)))
        .saturating_add(e.c.saturating_mul(input_len));
    let queries = trace.queries();
    let holds = log2_bound >= 64 || queries <= 1u64 << log2_bound;
    ExpReport { holds, queries, log2_bound, constants: e }
}
