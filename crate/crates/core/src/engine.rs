//! Exact evaluator for the generalized recursion
//!
//! ```text
//! M(x) = f(x)                                              x < 0
//! M(x) = g_1(-M(x - g_2(-M(x - ... g_k(-M(x - s(x))) ...))))  x ≥ 0
//! ```
//!
//! evaluated innermost first: `M_k(x) = g_k(-M(x - s(x)))`, then
//! `M_i(x) = g_i(-M(x - M_{i+1}(x)))`, and `M = M_1`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::numerics::Rational;
use crate::odf::{FuncDesc, OdfError, Positivity};

pub const DEFAULT_MAX_CALLS: u64 = 10_000_000;
pub const DEFAULT_MAX_DEPTH: usize = 100_000;
pub const DEFAULT_MAX_PIECES: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EvalStats {
    /// Requests for a value of `M`, memo hits included.
    pub total_calls: u64,
    /// Arguments first evaluated during this call.
    pub distinct_args: u64,
    pub max_depth: usize,
    pub budget_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("budget exhausted after {} calls at depth {}", stats.total_calls, stats.max_depth)]
    BudgetExhausted { stats: EvalStats },
    #[error("domain violation: {func} at {arg}: {detail}")]
    DomainViolation { func: String, arg: Rational, detail: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("symbolic evaluation needs Const or Affine descriptors; {0} is not")]
    NotAffine(String),
    #[error("piece budget of {0} exceeded")]
    PieceBudget(usize),
    #[error("symbolic piece disagrees with direct evaluation at {0}")]
    SelfCheck(Rational),
}

impl EvalError {
    fn domain(func: impl Into<String>, arg: &Rational, detail: impl Into<String>) -> Self {
        EvalError::DomainViolation { func: func.into(), arg: arg.clone(), detail: detail.into() }
    }

    fn from_odf(func: &str, e: OdfError) -> Self {
        match e {
            OdfError::OutOfDomain { x, .. } => EvalError::domain(func, &x, "argument outside declared domain"),
            OdfError::Invalid(msg) => EvalError::InvalidConfig(format!("{func}: {msg}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_calls: Option<u64>,
    pub max_depth: Option<usize>,
    pub memoize: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_calls: Some(DEFAULT_MAX_CALLS), max_depth: Some(DEFAULT_MAX_DEPTH), memoize: true }
    }
}

impl Budget {
    pub fn unbounded() -> Self {
        Budget { max_calls: None, max_depth: None, memoize: true }
    }

    pub fn without_memo(self) -> Self {
        Budget { memoize: false, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgoConfig {
    pub k: usize,
    pub f: FuncDesc,
    pub g: Vec<FuncDesc>,
    pub s: FuncDesc,
}

impl AlgoConfig {
    pub fn new(f: FuncDesc, g: Vec<FuncDesc>, s: FuncDesc) -> Result<Self, EvalError> {
        let cfg = AlgoConfig { k: g.len(), f, g, s };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `M(x) = M(x - M(x - 1)) / 2`.
    pub fn classic() -> Self {
        Self::m_n(2).expect("n = 2")
    }

    /// `g_1(x) = -x/n`, `g_i(x) = -x` for `i ≥ 2`, `s = 1`, `f(x) = -x`.
    pub fn m_n(n: usize) -> Result<Self, EvalError> {
        if n == 0 {
            return Err(EvalError::InvalidConfig("m_n needs n >= 1".into()));
        }
        let neg = |b: Rational| FuncDesc::Affine { a: Rational::zero(), b };
        let mut g = vec![neg(Rational::ratio(1, n as i64))];
        g.extend((1..n).map(|_| neg(Rational::one())));
        Ok(AlgoConfig { k: n, f: neg(Rational::one()), g, s: FuncDesc::constant(Rational::one()) })
    }

    pub fn preset(name: &str, n: Option<usize>) -> Result<Self, EvalError> {
        match (name, n) {
            ("classic", None) => Ok(Self::classic()),
            ("m_n", Some(n)) => Self::m_n(n),
            ("m_n", None) => Err(EvalError::InvalidConfig("preset m_n needs n".into())),
            (other, _) => Err(EvalError::InvalidConfig(format!("unknown preset `{other}`"))),
        }
    }

    /// Shape checks plus positivity of `f`, `g_i` on `(-∞, 0)` and `s` on `[0, ∞)`.
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.k == 0 || self.g.len() != self.k {
            return Err(EvalError::InvalidConfig(format!("k = {} but {} inner functions", self.k, self.g.len())));
        }
        let zero = Rational::zero();
        let mut checks: Vec<(String, &FuncDesc, Option<&Rational>, Option<&Rational>)> =
            vec![("f".into(), &self.f, None, Some(&zero)), ("s".into(), &self.s, Some(&zero), None)];
        for (i, g) in self.g.iter().enumerate() {
            checks.push((format!("g_{}", i + 1), g, None, Some(&zero)));
        }
        for (name, d, lo, hi) in checks {
            d.validate().map_err(|e| EvalError::from_odf(&name, e))?;
            match d.check_positive_on(lo, hi).map_err(|e| EvalError::from_odf(&name, e))? {
                Positivity::Ok => {}
                Positivity::Counterexample(x) => return Err(EvalError::domain(name, &x, "value is not positive")),
            }
        }
        Ok(())
    }

    pub fn is_affine(&self) -> bool {
        self.f.is_affine() && self.s.is_affine() && self.g.iter().all(FuncDesc::is_affine)
    }

    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        serde_json::from_str(text).map_err(|e| EvalError::InvalidConfig(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawConfig {
    Preset { preset: String, n: Option<usize> },
    Explicit { k: usize, f: FuncDesc, g: Vec<FuncDesc>, s: FuncDesc },
}

impl<'de> Deserialize<'de> for AlgoConfig {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let cfg = match RawConfig::deserialize(de)? {
            RawConfig::Preset { preset, n } => AlgoConfig::preset(&preset, n),
            RawConfig::Explicit { k, f, g, s } => Ok(AlgoConfig { k, f, g, s }),
        };
        cfg.and_then(|c| c.validate().map(|_| c)).map_err(D::Error::custom)
    }
}

struct Frame {
    x: Rational,
    /// Index `i` (1-based) of the `M_i` whose inner `M` value is awaited.
    level: usize,
}

/// One evaluation context: configuration, budget and a memo shared across calls.
pub struct Evaluator {
    cfg: AlgoConfig,
    budget: Budget,
    memo: HashMap<Rational, Rational>,
}

impl Evaluator {
    pub fn new(cfg: AlgoConfig, budget: Budget) -> Self {
        Evaluator { cfg, budget, memo: HashMap::new() }
    }

    pub fn config(&self) -> &AlgoConfig {
        &self.cfg
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    /// `M(x)` and the statistics of this call.
    pub fn eval(&mut self, x: &Rational) -> Result<(Rational, EvalStats), EvalError> {
        let mut run = Run { stats: EvalStats::default(), seen: HashSet::new() };
        let out = self.eval_in(x, &mut run);
        if let Err(EvalError::BudgetExhausted { .. }) = out {
            run.stats.budget_hit = true;
            return Err(EvalError::BudgetExhausted { stats: run.stats });
        }
        out.map(|v| (v, run.stats))
    }

    pub fn value(&mut self, x: &Rational) -> Result<Rational, EvalError> {
        self.eval(x).map(|(v, _)| v)
    }

    /// `[M_1(x), ..., M_k(x)]` for `x ≥ 0`.
    pub fn levels(&mut self, x: &Rational) -> Result<Vec<Rational>, EvalError> {
        if x.is_negative() {
            return Err(EvalError::domain("M_i", x, "inner levels are defined for x >= 0"));
        }
        let k = self.cfg.k;
        let mut out = vec![Rational::zero(); k];
        let mut step = self.step_s(x)?;
        for i in (1..=k).rev() {
            let inner = self.value(&(x - &step))?;
            let mi = self.apply_g(i, &inner)?;
            out[i - 1] = mi.clone();
            step = mi;
        }
        Ok(out)
    }

    fn step_s(&self, x: &Rational) -> Result<Rational, EvalError> {
        let s = self.cfg.s.eval(x).map_err(|e| EvalError::from_odf("s", e))?;
        if !s.is_positive() {
            return Err(EvalError::domain("s", x, format!("step {s} is not positive")));
        }
        Ok(s)
    }

    /// `g_i(-m)` for an inner value `m`, which must be positive, with a positive result.
    fn apply_g(&self, i: usize, m: &Rational) -> Result<Rational, EvalError> {
        let name = format!("g_{i}");
        if !m.is_positive() {
            return Err(EvalError::domain(name, &-m, "argument is not negative"));
        }
        let arg = -m;
        let v = self.cfg.g[i - 1].eval(&arg).map_err(|e| EvalError::from_odf(&name, e))?;
        if !v.is_positive() {
            return Err(EvalError::domain(name, &arg, format!("value {v} is not positive")));
        }
        Ok(v)
    }

    fn eval_in(&mut self, x: &Rational, run: &mut Run) -> Result<Rational, EvalError> {
        let k = self.cfg.k;
        let mut stack: Vec<Frame> = Vec::new();
        let mut want = x.clone();
        loop {
            let mut got = match self.lookup(&want, run)? {
                Some(v) => v,
                None => {
                    if self.budget.max_depth.is_some_and(|d| stack.len() >= d) {
                        return Err(EvalError::BudgetExhausted { stats: run.stats.clone() });
                    }
                    let step = self.step_s(&want)?;
                    let inner = &want - &step;
                    stack.push(Frame { x: want, level: k });
                    run.stats.max_depth = run.stats.max_depth.max(stack.len());
                    want = inner;
                    continue;
                }
            };
            loop {
                let Some(top) = stack.last_mut() else { return Ok(got) };
                let mi = self.apply_g(top.level, &got)?;
                if top.level == 1 {
                    let frame = stack.pop().expect("non-empty");
                    self.store(frame.x, mi.clone(), run);
                    got = mi;
                } else {
                    top.level -= 1;
                    want = &top.x - &mi;
                    break;
                }
            }
        }
    }

    /// Counts the request; returns the value if it needs no recursion.
    fn lookup(&mut self, y: &Rational, run: &mut Run) -> Result<Option<Rational>, EvalError> {
        run.stats.total_calls += 1;
        if self.budget.max_calls.is_some_and(|c| run.stats.total_calls > c) {
            run.stats.total_calls -= 1;
            return Err(EvalError::BudgetExhausted { stats: run.stats.clone() });
        }
        if self.budget.memoize {
            if let Some(v) = self.memo.get(y) {
                return Ok(Some(v.clone()));
            }
        }
        if !y.is_negative() {
            return Ok(None);
        }
        let v = self.cfg.f.eval(y).map_err(|e| EvalError::from_odf("f", e))?;
        self.store(y.clone(), v.clone(), run);
        Ok(Some(v))
    }

    fn store(&mut self, x: Rational, v: Rational, run: &mut Run) {
        if self.budget.memoize {
            run.stats.distinct_args += 1;
            self.memo.insert(x, v);
        } else if run.seen.insert(x) {
            run.stats.distinct_args += 1;
        }
    }
}

struct Run {
    stats: EvalStats,
    seen: HashSet<Rational>,
}

pub fn eval_m(cfg: &AlgoConfig, x: &Rational, budget: Budget) -> Result<(Rational, EvalStats), EvalError> {
    Evaluator::new(cfg.clone(), budget).eval(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub x: Rational,
    pub value: Result<Rational, EvalError>,
}

/// `count` equally spaced points of `[lo, hi]`, endpoints included, sharing one memo.
pub fn sample_range(
    cfg: &AlgoConfig,
    lo: &Rational,
    hi: &Rational,
    count: usize,
    budget: Budget,
) -> Result<Vec<Sample>, EvalError> {
    if lo >= hi {
        return Err(EvalError::InvalidRange(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    if count < 2 {
        return Err(EvalError::InvalidRange(format!("need at least 2 samples, got {count}")));
    }
    let mut ev = Evaluator::new(cfg.clone(), budget);
    let step = (hi - lo) / Rational::from_integer(count as i64 - 1);
    Ok((0..count)
        .map(|i| {
            let x = if i + 1 == count { hi.clone() } else { lo + &step * Rational::from_integer(i as i64) };
            let value = ev.value(&x);
            Sample { x, value }
        })
        .collect())
}

/// `a - b·x` on `[left, right)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicPiece {
    pub left: Rational,
    pub right: Rational,
    pub a: Rational,
    pub b: Rational,
}

impl SymbolicPiece {
    pub fn eval(&self, x: &Rational) -> Rational {
        &self.a - &self.b * x
    }
}

/// Left-to-right construction of the affine pieces of every `M_i` on `[0, built)`.
///
/// On a new piece each inner argument `x - M_{i+1}(x)` (or `x - s(x)`) is an increasing
/// affine map landing either in the `f` branch or in an already built piece of `M`,
/// so every level composes to a single affine map until one of those arguments
/// crosses a known breakpoint.
pub struct SymbolicBuilder {
    f: (Rational, Rational),
    g: Vec<(Rational, Rational)>,
    s: (Rational, Rational),
    /// `levels[i - 1]` holds the merged pieces of `M_i`.
    levels: Vec<Vec<SymbolicPiece>>,
    built: Rational,
    raw_pieces: usize,
    max_pieces: usize,
}

impl SymbolicBuilder {
    pub fn new(cfg: &AlgoConfig, max_pieces: usize) -> Result<Self, EvalError> {
        let coeffs = |name: &str, d: &FuncDesc| d.affine_coeffs().ok_or_else(|| EvalError::NotAffine(format!("{name} = {d}")));
        let g = cfg
            .g
            .iter()
            .enumerate()
            .map(|(i, d)| coeffs(&format!("g_{}", i + 1), d))
            .collect::<Result<Vec<_>, _>>()?;
        if g.is_empty() {
            return Err(EvalError::InvalidConfig("k must be at least 1".into()));
        }
        Ok(SymbolicBuilder {
            f: coeffs("f", &cfg.f)?,
            s: coeffs("s", &cfg.s)?,
            levels: vec![Vec::new(); g.len()],
            g,
            built: Rational::zero(),
            raw_pieces: 0,
            max_pieces,
        })
    }

    pub fn built(&self) -> &Rational {
        &self.built
    }

    pub fn level(&self, i: usize) -> &[SymbolicPiece] {
        &self.levels[i - 1]
    }

    /// Extends the construction until it covers `[0, upto)`.
    pub fn extend_to(&mut self, upto: &Rational) -> Result<(), EvalError> {
        while self.built < *upto {
            self.step(Some(upto))?;
        }
        Ok(())
    }

    /// Adds one raw piece starting at `built`, truncated at `limit`.
    pub fn step(&mut self, limit: Option<&Rational>) -> Result<(), EvalError> {
        if self.raw_pieces >= self.max_pieces {
            return Err(EvalError::PieceBudget(self.max_pieces));
        }
        let cur = self.built.clone();
        let one = Rational::one();
        let mut right: Option<Rational> = limit.cloned();
        let mut new = vec![(Rational::zero(), Rational::zero()); self.g.len()];
        let mut step = self.s.clone();
        for i in (1..=self.g.len()).rev() {
            let (a_s, b_s) = &step;
            // arg(x) = (1 + b_s)·x - a_s
            let slope = &one + b_s;
            let arg_cur = &slope * &cur - a_s;
            if arg_cur >= cur {
                let func = if i == self.g.len() { "s".to_string() } else { format!("M_{}", i + 1) };
                return Err(EvalError::domain(func, &cur, "step is not positive"));
            }
            let (inner, bound) = if arg_cur.is_negative() {
                (self.f.clone(), Rational::zero())
            } else {
                let m = &self.levels[0];
                let idx = m.partition_point(|p| p.left <= arg_cur) - 1;
                (( m[idx].a.clone(), m[idx].b.clone()), m[idx].right.clone())
            };
            let reach = (&bound + a_s) / &slope;
            if right.as_ref().is_none_or(|r| reach < *r) {
                right = Some(reach);
            }
            // g_i(-(a' - b'·arg(x))) = a_g + b_g·a' + b_g·b'·a_s - b_g·b'·(1 + b_s)·x
            let (a_g, b_g) = &self.g[i - 1];
            let (a_in, b_in) = inner;
            let a = a_g + b_g * (&a_in + &b_in * a_s);
            let b = b_g * &b_in * &slope;
            new[i - 1] = (a.clone(), b.clone());
            step = (a, b);
        }
        let right = right.expect("bounded by some breakpoint");
        for (i, (a, b)) in new.into_iter().enumerate() {
            let pieces = &mut self.levels[i];
            match pieces.last_mut() {
                Some(last) if last.a == a && last.b == b && last.right == cur => last.right = right.clone(),
                _ => pieces.push(SymbolicPiece { left: cur.clone(), right: right.clone(), a, b }),
            }
        }
        self.built = right;
        self.raw_pieces += 1;
        Ok(())
    }
}

/// All levels `[M_1, ..., M_k]` as merged piece lists on `[0, upto)`, each piece
/// checked against direct evaluation at its midpoint.
pub fn symbolic_levels(cfg: &AlgoConfig, upto: &Rational, max_pieces: usize) -> Result<Vec<Vec<SymbolicPiece>>, EvalError> {
    let mut builder = SymbolicBuilder::new(cfg, max_pieces)?;
    builder.extend_to(upto)?;
    let mut ev = Evaluator::new(cfg.clone(), Budget::default());
    let mut levels = builder.levels;
    for pieces in levels.iter_mut() {
        if let Some(last) = pieces.last_mut() {
            last.right = upto.clone();
        }
    }
    for (i, pieces) in levels.iter().enumerate() {
        for p in pieces {
            let mid = (&p.left + &p.right) / Rational::from_integer(2);
            if ev.levels(&mid)?[i] != p.eval(&mid) {
                return Err(EvalError::SelfCheck(mid));
            }
        }
    }
    Ok(levels)
}

/// Affine pieces of `M` on `[0, upto)`.
pub fn symbolic_pieces(cfg: &AlgoConfig, upto: &Rational, max_pieces: usize) -> Result<Vec<SymbolicPiece>, EvalError> {
    Ok(symbolic_levels(cfg, upto, max_pieces)?.swap_remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn m(cfg: &AlgoConfig, x: &str) -> Rational {
        eval_m(cfg, &q(x), Budget::default()).unwrap().0
    }

    #[test]
    fn classic_values() {
        let c = AlgoConfig::classic();
        assert_eq!(m(&c, "-2"), q("2"));
        assert_eq!(m(&c, "0"), q("1/2"));
        assert_eq!(m(&c, "1/2"), q("1/4"));
        assert_eq!(m(&c, "1"), q("1/8"));
        assert_eq!(m(&c, "3/2"), q("1/32"));
        assert_eq!(m(&c, "2"), Rational::half_pow(10));
        assert_eq!(m(&c, "1/4"), q("1/4"));
        assert_eq!(m(&c, "3/4"), q("1/8"));
    }

    #[test]
    fn m_n_values() {
        let c = AlgoConfig::m_n(3).unwrap();
        assert_eq!(m(&c, "0"), q("1/3"));
        assert_eq!(m(&c, "1/4"), q("1/12"));
        assert_eq!(m(&c, "1/2"), q("1/18"));
        assert_eq!(m(&c, "3/4"), q("1/2916"));
        // M(x) = M(x - 1) chains to f
        let one = AlgoConfig::m_n(1).unwrap();
        assert_eq!(m(&one, "5/2"), q("1/2"));
        assert!(AlgoConfig::m_n(0).is_err());
    }

    #[test]
    fn stats_are_deterministic_and_consistent() {
        let c = AlgoConfig::classic();
        let (v1, s1) = eval_m(&c, &q("2"), Budget::default()).unwrap();
        let (v2, s2) = eval_m(&c, &q("2"), Budget::default()).unwrap();
        assert_eq!((v1, &s1), (v2, &s2));
        assert!(s1.distinct_args <= s1.total_calls);
        assert!(!s1.budget_hit);
    }

    #[test]
    fn memo_does_not_change_values() {
        let c = AlgoConfig::classic();
        for x in ["0", "1/3", "1", "5/4", "3/2", "7/4"] {
            let with = eval_m(&c, &q(x), Budget::default()).unwrap();
            let without = eval_m(&c, &q(x), Budget::default().without_memo()).unwrap();
            assert_eq!(with.0, without.0, "x = {x}");
            assert!(without.1.total_calls >= with.1.total_calls);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let c = AlgoConfig::classic();
        let tight = Budget { max_calls: Some(10), ..Budget::default() };
        let err = eval_m(&c, &q("2"), tight).unwrap_err();
        let EvalError::BudgetExhausted { stats } = err.clone() else { panic!("{err:?}") };
        assert!(stats.budget_hit);
        assert_eq!(stats.total_calls, 10);
        assert_eq!(eval_m(&c, &q("2"), tight).unwrap_err(), err);
        let shallow = Budget { max_depth: Some(2), ..Budget::default() };
        assert!(matches!(eval_m(&c, &q("2"), shallow), Err(EvalError::BudgetExhausted { .. })));
    }

    #[test]
    fn non_positive_step_is_a_domain_violation() {
        let mut c = AlgoConfig::classic();
        c.s = FuncDesc::constant(Rational::zero());
        assert!(matches!(c.validate(), Err(EvalError::DomainViolation { .. })));
        assert!(matches!(eval_m(&c, &q("1"), Budget::default()), Err(EvalError::DomainViolation { .. })));
        let mut c = AlgoConfig::classic();
        c.g[1] = FuncDesc::Affine { a: q("-1"), b: q("1") };
        assert!(matches!(c.validate(), Err(EvalError::DomainViolation { .. })));
        assert!(matches!(eval_m(&c, &q("1"), Budget::default()), Err(EvalError::DomainViolation { .. })));
    }

    #[test]
    fn config_json() {
        let c = AlgoConfig::from_json(r#"{"preset":"classic"}"#).unwrap();
        assert_eq!(c, AlgoConfig::classic());
        let c = AlgoConfig::from_json(r#"{"preset":"m_n","n":3}"#).unwrap();
        assert_eq!(c, AlgoConfig::m_n(3).unwrap());
        let text = AlgoConfig::classic().to_json();
        assert_eq!(AlgoConfig::from_json(&text).unwrap(), AlgoConfig::classic());
        let explicit = r#"{"k":2,"f":{"kind":"affine","a":"0","b":"1"},
            "g":[{"kind":"affine","a":"0","b":"1/2"},{"kind":"affine","a":"0","b":"1"}],
            "s":{"kind":"const","value":"1"}}"#;
        assert_eq!(AlgoConfig::from_json(explicit).unwrap(), AlgoConfig::classic());
        assert!(AlgoConfig::from_json(r#"{"k":3,"f":{"kind":"const","value":"1"},"g":[],"s":{"kind":"const","value":"1"}}"#).is_err());
        assert!(AlgoConfig::from_json(r#"{"preset":"m_n"}"#).is_err());
    }

    #[test]
    fn sampling() {
        let c = AlgoConfig::classic();
        let got: Vec<(Rational, Rational)> = sample_range(&c, &q("0"), &q("1/2"), 3, Budget::default())
            .unwrap()
            .into_iter()
            .map(|s| (s.x, s.value.unwrap()))
            .collect();
        assert_eq!(got, vec![(q("0"), q("1/2")), (q("1/4"), q("1/4")), (q("1/2"), q("1/4"))]);
        let got = sample_range(&c, &q("-1"), &q("0"), 2, Budget::default()).unwrap();
        assert_eq!(got[0].value, Ok(q("1")));
        assert_eq!(got[1].value, Ok(q("1/2")));
        assert!(sample_range(&c, &q("1"), &q("1"), 3, Budget::default()).is_err());
        assert!(sample_range(&c, &q("0"), &q("1"), 1, Budget::default()).is_err());
    }

    #[test]
    fn symbolic_examples() {
        let c = AlgoConfig::classic();
        let p = symbolic_pieces(&c, &q("3/4"), 100).unwrap();
        let want = vec![
            SymbolicPiece { left: q("0"), right: q("1/2"), a: q("1/2"), b: q("1") },
            SymbolicPiece { left: q("1/2"), right: q("3/4"), a: q("3/4"), b: q("1") },
        ];
        assert_eq!(p, want);
        assert_eq!(symbolic_pieces(&c, &q("1/2"), 100).unwrap(), want[..1].to_vec());
        let levels = symbolic_levels(&c, &q("3/4"), 100).unwrap();
        assert_eq!(levels[1], vec![SymbolicPiece { left: q("0"), right: q("3/4"), a: q("1"), b: q("1") }]);
        let one = AlgoConfig::m_n(1).unwrap();
        assert_eq!(
            symbolic_pieces(&one, &q("1"), 100).unwrap(),
            vec![SymbolicPiece { left: q("0"), right: q("1"), a: q("1"), b: q("1") }]
        );
    }

    #[test]
    fn symbolic_errors() {
        let mut c = AlgoConfig::classic();
        assert!(matches!(symbolic_pieces(&c, &q("1"), 50), Err(EvalError::PieceBudget(50))));
        c.f = "staircase:example2".parse().unwrap();
        assert!(matches!(SymbolicBuilder::new(&c, 10), Err(EvalError::NotAffine(_))));
    }

    #[test]
    fn symbolic_agrees_with_eval_beyond_one() {
        let c = AlgoConfig::classic();
        let mut b = SymbolicBuilder::new(&c, 2000).unwrap();
        b.extend_to(&q("15/16")).unwrap();
        let mut ev = Evaluator::new(c, Budget::default());
        for p in b.level(1) {
            for t in [q("0"), q("1/3"), q("5/7")] {
                let x = &p.left + &(&p.right - &p.left) * &t;
                assert_eq!(ev.value(&x).unwrap(), p.eval(&x), "x = {x}");
            }
        }
    }
}
