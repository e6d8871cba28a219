//! Bad sequences on finite grids.
//!
//! A grid lists points `(x, v)` with `x` strictly decreasing. A subsequence is bad
//! when its values strictly decrease as well. On a finite grid the height of the
//! tree of bad sequences is the length of the longest bad chain, so the transfinite
//! height bounds for compositions, splits and sums become integer inequalities:
//! `⊗` turns into a product and ordinary `+` into a sum.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numerics::Rational;
use crate::odf::{FuncDesc, OdfError, Piece};

/// Largest grid accepted by [`tree_height_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BadSeqError {
    #[error("grid x values must strictly decrease (index {0})")]
    NotDescending(usize),
    #[error("grid of {0} points exceeds the brute-force limit of {BRUTEFORCE_LIMIT}")]
    TooLarge(usize),
    #[error(transparent)]
    Domain(#[from] OdfError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Grid {
    points: Vec<(Rational, Rational)>,
}

impl Grid {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, BadSeqError> {
        if let Some(i) = points.windows(2).position(|w| w[0].0 <= w[1].0) {
            return Err(BadSeqError::NotDescending(i + 1));
        }
        Ok(Grid { points })
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.points.iter().map(|(_, v)| v)
    }

    /// Points with `x` in the given half-open range.
    pub fn restrict(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> Grid {
        let points = self
            .points
            .iter()
            .filter(|(x, _)| lo.is_none_or(|l| x >= l) && hi.is_none_or(|h| x < h))
            .cloned()
            .collect();
        Grid { points }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestBad {
    pub length: usize,
    /// Increasing grid indices of one longest bad chain.
    pub witness: Vec<usize>,
}

/// Longest bad chain by the quadratic dynamic program.
pub fn longest_bad(grid: &Grid) -> LongestBad {
    let v: Vec<&Rational> = grid.values().collect();
    let n = v.len();
    // best[i]: longest bad chain ending at i
    let mut best = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..i {
            if v[j] > v[i] && best[j] + 1 > best[i] {
                best[i] = best[j] + 1;
                prev[i] = j;
            }
        }
    }
    let Some((mut end, &length)) = best.iter().enumerate().max_by_key(|(i, l)| (**l, std::cmp::Reverse(*i)))
    else {
        return LongestBad { length: 0, witness: Vec::new() };
    };
    let mut witness = vec![end];
    while prev[end] != usize::MAX {
        end = prev[end];
        witness.push(end);
    }
    witness.reverse();
    LongestBad { length, witness }
}

/// Root height of the explicit tree of bad sequences, built by extension.
pub fn tree_height_bruteforce(grid: &Grid) -> Result<usize, BadSeqError> {
    if grid.len() > BRUTEFORCE_LIMIT {
        return Err(BadSeqError::TooLarge(grid.len()));
    }
    let v: Vec<&Rational> = grid.values().collect();

    // Height of the vertex for a bad sequence whose last element is `last`:
    // children extend it by any later index with a smaller value.
    fn height(v: &[&Rational], last: Option<usize>) -> usize {
        let start = last.map_or(0, |l| l + 1);
        (start..v.len())
            .filter(|&j| last.is_none_or(|l| v[j] < v[l]))
            .map(|j| height(v, Some(j)) + 1)
            .max()
            .unwrap_or(0)
    }

    Ok(height(&v, None))
}

/// Per-point heights `o(i) = max{o(j) + 1 : x_j < x_i, v_j < v_i}`, 0 when empty.
pub fn o_heights(grid: &Grid) -> Vec<usize> {
    let v: Vec<&Rational> = grid.values().collect();
    let n = v.len();
    let mut o = vec![0usize; n];
    for i in (0..n).rev() {
        o[i] = (i + 1..n).filter(|&j| v[j] < v[i]).map(|j| o[j] + 1).max().unwrap_or(0);
    }
    o
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    /// Longest bad chain of the combined function.
    pub lhs: usize,
    /// The integer bound it must not exceed.
    pub rhs: usize,
    /// Pairs `(i, j)`, `i < j`, where the quasi-embedding is not order reflecting.
    pub embedding_violations: Vec<(usize, usize)>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs && self.embedding_violations.is_empty()
    }
}

/// Pairs `i < j` (so `x_i > x_j`) with `E(i) ≤ E(j)` componentwise but `h_i > h_j`.
fn embedding_violations(e: &[(usize, usize)], h: &[Rational]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i].0 <= e[j].0 && e[i].1 <= e[j].1 && h[i] > h[j] {
                out.push((i, j));
            }
        }
    }
    out
}

fn sample(d: &FuncDesc, xs: &[Rational]) -> Result<Grid, BadSeqError> {
    let points = xs.iter().map(|x| Ok((x.clone(), d.eval(x)?))).collect::<Result<Vec<_>, OdfError>>()?;
    Grid::new(points)
}

/// Composition bound for `h(x) = f(-g(x))`: the longest `h`-bad chain is at most
/// the product of the longest `g`-bad chain and the longest `f`-bad chain on the
/// image points `-g(x)`. Also checks that `E(x) = (o_g(x), o_f(-g(x)))` reflects order.
pub fn check_composition_bound(
    gdesc: &FuncDesc,
    fdesc: &FuncDesc,
    grid_x: &[Rational],
) -> Result<BoundReport, BadSeqError> {
    let g_grid = sample(gdesc, grid_x)?;
    let image: Vec<Rational> = g_grid.values().map(|v| -v).collect();

    let distinct: BTreeSet<&Rational> = image.iter().collect();
    let f_xs: Vec<Rational> = distinct.into_iter().rev().cloned().collect();
    let f_grid = sample(fdesc, &f_xs)?;
    let f_heights = o_heights(&f_grid);
    let f_height_at = |y: &Rational| {
        let idx = f_xs.binary_search_by(|p| y.cmp(p)).expect("image point present");
        f_heights[idx]
    };

    let h_vals: Vec<Rational> = image.iter().map(|y| fdesc.eval(y)).collect::<Result<_, _>>()?;
    let h_grid = Grid::new(grid_x.iter().cloned().zip(h_vals.iter().cloned()).collect())?;

    let g_heights = o_heights(&g_grid);
    let e: Vec<(usize, usize)> = g_heights.iter().zip(&image).map(|(&og, y)| (og, f_height_at(y))).collect();

    Ok(BoundReport {
        lhs: longest_bad(&h_grid).length,
        rhs: longest_bad(&g_grid).length * longest_bad(&f_grid).length,
        embedding_violations: embedding_violations(&e, &h_vals),
    })
}

/// Split bound: cutting the grid at `cut` into `x < cut` and `x ≥ cut`, the whole
/// longest chain is at most the sum of the two parts.
pub fn check_split_bound(d: &FuncDesc, grid_x: &[Rational], cut: &Rational) -> Result<BoundReport, BadSeqError> {
    let whole = sample(d, grid_x)?;
    let left = whole.restrict(None, Some(cut));
    let right = whole.restrict(Some(cut), None);
    Ok(BoundReport {
        lhs: longest_bad(&whole).length,
        rhs: longest_bad(&left).length + longest_bad(&right).length,
        embedding_violations: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumReport {
    /// `h = f + g` against the product of the two chain lengths.
    pub product: BoundReport,
    /// `f(x) - x` against the chain length of `f`.
    pub shift: BoundReport,
}

impl SumReport {
    pub fn holds(&self) -> bool {
        self.product.holds() && self.shift.holds()
    }
}

/// Sum bound for `h = f + g` with quasi-embedding `(o_f, o_g)`, plus the shift
/// special case `f(x) - x`, whose bad chains are all `f`-bad.
pub fn check_sum_bound(f: &FuncDesc, g: &FuncDesc, grid_x: &[Rational]) -> Result<SumReport, BadSeqError> {
    let f_grid = sample(f, grid_x)?;
    let g_grid = sample(g, grid_x)?;
    let h_vals: Vec<Rational> = f_grid.values().zip(g_grid.values()).map(|(a, b)| a + b).collect();
    let h_grid = Grid::new(grid_x.iter().cloned().zip(h_vals.iter().cloned()).collect())?;
    let e: Vec<(usize, usize)> = o_heights(&f_grid).into_iter().zip(o_heights(&g_grid)).collect();
    let lf = longest_bad(&f_grid).length;

    let shift_vals: Vec<Rational> = f_grid.points().iter().map(|(x, v)| v - x).collect();
    let shift_grid = Grid::new(grid_x.iter().cloned().zip(shift_vals).collect())?;

    Ok(SumReport {
        product: BoundReport {
            lhs: longest_bad(&h_grid).length,
            rhs: lf * longest_bad(&g_grid).length,
            embedding_violations: embedding_violations(&e, &h_vals),
        },
        shift: BoundReport { lhs: longest_bad(&shift_grid).length, rhs: lf, embedding_violations: Vec::new() },
    })
}

/// Seeded generator for random grids and descriptors on a dyadic lattice.
pub struct InstanceGen {
    rng: ChaCha8Rng,
}

impl InstanceGen {
    pub fn new(seed: u64) -> Self {
        InstanceGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn dyadic(&mut self, lo: i64, hi: i64, denom_log: u32) -> Rational {
        let scale = 1i64 << denom_log;
        Rational::ratio(self.rng.random_range(lo * scale..hi * scale), scale)
    }

    /// `n` strictly descending lattice points in `[lo, hi)` with denominator `2^denom_log`.
    pub fn grid_x(&mut self, n: usize, lo: i64, hi: i64, denom_log: u32) -> Vec<Rational> {
        let scale = 1i64 << denom_log;
        let span = ((hi - lo) * scale) as usize;
        assert!(n <= span, "lattice too small for {n} points");
        let picks = rand::seq::index::sample(&mut self.rng, span, n);
        let mut ticks: Vec<i64> = picks.into_iter().map(|t| t as i64 + lo * scale).collect();
        ticks.sort_unstable_by(|a, b| b.cmp(a));
        ticks.into_iter().map(|t| Rational::ratio(t, scale)).collect()
    }

    /// A grid of `n` points whose values come from a small range so ties occur.
    pub fn value_grid(&mut self, n: usize) -> Grid {
        let xs = self.grid_x(n, -8, 8, 3);
        let points = xs.into_iter().map(|x| (x, Rational::from_integer(self.rng.random_range(0..6i64)))).collect();
        Grid::new(points).expect("descending by construction")
    }

    /// A random piecewise-affine nonincreasing profile over `[lo, +∞)`, with
    /// breakpoints inside `[lo, hi)`.
    pub fn piecewise(&mut self, lo: i64, hi: i64) -> FuncDesc {
        let cuts = self.rng.random_range(1..6usize);
        let mut breaks: Vec<Rational> = (0..cuts).map(|_| self.dyadic(lo, hi, 2)).collect();
        breaks.push(Rational::from_integer(lo));
        breaks.sort();
        breaks.dedup();
        let mut pieces = Vec::with_capacity(breaks.len());
        for (i, left) in breaks.iter().enumerate() {
            let right = breaks.get(i + 1).cloned();
            let a = self.dyadic(-4, 8, 2);
            let b = match self.rng.random_range(0..3) {
                0 => Rational::zero(),
                _ => self.dyadic(0, 2, 2),
            };
            pieces.push(Piece { left: left.clone(), right, a, b });
        }
        FuncDesc::piecewise(pieces).expect("valid by construction")
    }

    /// A random descriptor defined on all of `[lo, +∞)`.
    pub fn descriptor(&mut self, lo: i64, hi: i64) -> FuncDesc {
        match self.rng.random_range(0..4) {
            0 => FuncDesc::constant(self.dyadic(-2, 4, 2)),
            1 => FuncDesc::affine(self.dyadic(-2, 4, 2), self.dyadic(0, 2, 2)).expect("b >= 0"),
            _ => self.piecewise(lo, hi),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteSummary {
    pub instances: usize,
    pub composition_violations: usize,
    pub split_violations: usize,
    pub sum_violations: usize,
    pub embedding_violations: usize,
}

impl SuiteSummary {
    pub fn clean(&self) -> bool {
        self.composition_violations == 0
            && self.split_violations == 0
            && self.sum_violations == 0
            && self.embedding_violations == 0
    }
}

/// Runs the composition, split and sum checks on `instances` random cases each.
pub fn run_lemma_suite(seed: u64, instances: usize) -> Result<SuiteSummary, BadSeqError> {
    let mut gen = InstanceGen::new(seed);
    let mut summary = SuiteSummary { instances, ..Default::default() };
    for _ in 0..instances {
        let n = gen.rng().random_range(5..=50);
        let xs = gen.grid_x(n, -8, 8, 4);

        // g maps the grid anywhere; f must accept every -g(x), so give it a wide domain.
        let g = gen.descriptor(-8, 8);
        let f = gen.descriptor(-64, 64);
        let f = widen(f, -64);
        let comp = check_composition_bound(&g, &f, &xs)?;
        summary.composition_violations += usize::from(comp.lhs > comp.rhs);
        summary.embedding_violations += comp.embedding_violations.len();

        let d = gen.descriptor(-8, 8);
        let cut = xs[gen.rng().random_range(0..xs.len())].clone();
        let split = check_split_bound(&d, &xs, &cut)?;
        summary.split_violations += usize::from(!split.holds());

        let f = gen.descriptor(-8, 8);
        let g = gen.descriptor(-8, 8);
        let sum = check_sum_bound(&f, &g, &xs)?;
        summary.sum_violations += usize::from(sum.product.lhs > sum.product.rhs || !sum.shift.holds());
        summary.embedding_violations += sum.product.embedding_violations.len();
    }
    Ok(summary)
}

/// Extends a piecewise descriptor to the left with a constant piece so that it is
/// defined on all of `(-∞, ∞)` in practice (from `lo - 2^20`).
fn widen(d: FuncDesc, lo: i64) -> FuncDesc {
    match d {
        FuncDesc::Piecewise { mut pieces } => {
            let first_left = pieces[0].left.clone();
            let value = pieces[0].a.clone() - pieces[0].b.clone() * first_left.clone() + Rational::one();
            let far = Rational::from_integer(lo - (1 << 20));
            if far < first_left {
                pieces.insert(0, Piece { left: far, right: Some(first_left), a: value, b: Rational::zero() });
            }
            FuncDesc::piecewise(pieces).expect("still valid")
        }
        other => other,
    }
}
