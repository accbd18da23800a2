//! Sup-norm tessellations of `R^d`.
//!
//! A complete tessellation with base point `x'` and cell radius `R'` consists
//! of the cells `prod_i [x'_i + (2 m_i - 1) R', x'_i + (2 m_i + 1) R']` for
//! integer indices `m`. Sub-collections are stored as index blocks
//! `lo_i <= m_i <= hi_i`; a block is a tessellation of its bounding ball
//! exactly when all side counts agree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{ceil, floor, from_big, int, is_integer, ArithError, BallD, Interval, Rational};

/// Largest `R / R'` accepted by [`brute_force_blocks`] unless overridden.
pub const DEFAULT_BRUTE_FORCE_BOUND: u64 = 8;

/// Errors raised by tessellation geometry.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TessError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration too large: {0}")]
    Feasibility(String),
}

impl From<ArithError> for TessError {
    fn from(e: ArithError) -> Self {
        TessError::Domain(e.to_string())
    }
}

/// A complete tessellation of `R^d` by sup-norm cells of one radius.
#[derive(Clone)]
pub struct CompleteTess {
    base: Vec<Rational>,
    cell_radius: Rational,
}

impl CompleteTess {
    pub fn new(base: Vec<Rational>, cell_radius: Rational) -> Result<Self, TessError> {
        if base.is_empty() {
            return Err(TessError::Domain("a tessellation needs dimension >= 1".into()));
        }
        if !cell_radius.is_positive() {
            return Err(TessError::Domain(format!("cell radius must be positive, got {cell_radius}")));
        }
        Ok(Self { base, cell_radius })
    }

    /// The unique complete tessellation having `cell` as one of its cells.
    pub fn from_cell(cell: &BallD) -> Self {
        Self { base: cell.center().to_vec(), cell_radius: cell.radius().clone() }
    }

    /// The unique complete tessellation extending the `m`-tessellation of
    /// `ball`: based at the center for odd `m` and at `center - R/m` for even
    /// `m`.
    pub fn completion(ball: &BallD, m: u64) -> Result<Self, TessError> {
        if m == 0 {
            return Err(TessError::Domain("tessellation count must be at least 1".into()));
        }
        let cell_radius = ball.radius() / int(m as i64);
        let base = if m % 2 == 1 {
            ball.center().to_vec()
        } else {
            ball.center().iter().map(|c| c - &cell_radius).collect()
        };
        Self::new(base, cell_radius)
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn cell_radius(&self) -> &Rational {
        &self.cell_radius
    }

    /// Base point reduced into `[0, 2R')^d`; two tessellations are equal
    /// exactly when their reduced base points and radii agree.
    pub fn normalized_base(&self) -> Vec<Rational> {
        let period = self.period();
        self.base
            .iter()
            .map(|x| {
                let k = floor(&(x / &period));
                x - from_big(k) * &period
            })
            .collect()
    }

    fn period(&self) -> Rational {
        int(2) * &self.cell_radius
    }

    /// The cell with the given index.
    pub fn cell(&self, index: &[BigInt]) -> BallD {
        let center = self
            .base
            .iter()
            .zip(index)
            .map(|(x, m)| x + from_big(m * 2) * &self.cell_radius)
            .collect();
        BallD::new(center, self.cell_radius.clone()).expect("cell radius is positive")
    }

    /// Index of `cell` when it is a cell of this tessellation.
    pub fn index_of(&self, cell: &BallD) -> Option<Vec<BigInt>> {
        if cell.dim() != self.dim() || cell.radius() != &self.cell_radius {
            return None;
        }
        let period = self.period();
        cell.center()
            .iter()
            .zip(&self.base)
            .map(|(c, x)| {
                let m = (c - x) / &period;
                is_integer(&m).then(|| m.to_integer())
            })
            .collect()
    }

    /// The complete tessellation whose cells are the `n`-tessellations of
    /// this one's cells.
    pub fn refine(&self, n: u64) -> Result<Self, TessError> {
        Self::completion(&self.cell(&vec![BigInt::zero(); self.dim()]), n)
    }

    /// Index range, per axis, of the cells whose interiors meet the interior
    /// of `ball`.
    fn meeting_range(&self, ball: &BallD) -> Vec<(BigInt, BigInt)> {
        let period = self.period();
        (0..self.dim())
            .map(|i| {
                let axis = ball.axis(i);
                let x = &self.base[i];
                // (2m + 1) R' + x > lo  and  (2m - 1) R' + x < hi.
                let lo = floor(&((axis.lo() - x - &self.cell_radius) / &period)) + 1;
                let hi = ceil(&((axis.hi() - x + &self.cell_radius) / &period)) - 1;
                (lo, hi)
            })
            .collect()
    }
}

impl PartialEq for CompleteTess {
    fn eq(&self, other: &Self) -> bool {
        self.cell_radius == other.cell_radius && self.normalized_base() == other.normalized_base()
    }
}

impl Eq for CompleteTess {}

impl fmt::Debug for CompleteTess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.normalized_base().iter().map(|x| x.to_string()).collect();
        write!(f, "Tess(({}), {})", b.join(", "), self.cell_radius)
    }
}

/// The cells of a complete tessellation with `lo_i <= m_i <= hi_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct TessBlock {
    parent: CompleteTess,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
}

impl TessBlock {
    pub fn new(parent: CompleteTess, lo: Vec<BigInt>, hi: Vec<BigInt>) -> Result<Self, TessError> {
        if lo.len() != parent.dim() || hi.len() != parent.dim() {
            return Err(TessError::Domain("block index ranges must match the dimension".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(TessError::Domain("block index ranges must be non-empty".into()));
        }
        Ok(Self { parent, lo, hi })
    }

    pub fn parent(&self) -> &CompleteTess {
        &self.parent
    }

    pub fn lo(&self) -> &[BigInt] {
        &self.lo
    }

    pub fn hi(&self) -> &[BigInt] {
        &self.hi
    }

    /// Number of cells along each axis.
    pub fn side_counts(&self) -> Vec<BigInt> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a + 1).collect()
    }

    /// Whether all side counts agree, i.e. the block tessellates a ball.
    pub fn is_tessellation(&self) -> bool {
        let sides = self.side_counts();
        sides.iter().all(|s| s == &sides[0])
    }

    pub fn cardinality(&self) -> BigInt {
        self.side_counts().iter().product()
    }

    /// Per-axis extent of the union of the block's cells.
    pub fn union_box(&self) -> Vec<Interval> {
        let r = &self.parent.cell_radius;
        (0..self.parent.dim())
            .map(|i| {
                let x = &self.parent.base[i];
                let lo = x + from_big(&self.lo[i] * 2 - 1) * r;
                let hi = x + from_big(&self.hi[i] * 2 + 1) * r;
                Interval::from_endpoints(lo, hi).expect("lo <= hi")
            })
            .collect()
    }

    /// The ball the block tessellates, when all side counts agree.
    pub fn as_ball(&self) -> Option<BallD> {
        if !self.is_tessellation() {
            return None;
        }
        let boxes = self.union_box();
        let radius = boxes[0].radius().clone();
        BallD::new(boxes.into_iter().map(|b| b.center().clone()).collect(), radius).ok()
    }

    pub fn contains_index(&self, index: &[BigInt]) -> bool {
        index.len() == self.lo.len() && (0..index.len()).all(|i| self.lo[i] <= index[i] && index[i] <= self.hi[i])
    }

    /// Inclusion of cell sets for blocks of the same tessellation.
    pub fn contains_block(&self, other: &TessBlock) -> bool {
        self.parent == other.parent
            && (0..self.lo.len()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    /// Whether the union of the cells covers `ball`.
    pub fn covers(&self, ball: &BallD) -> bool {
        self.union_box().iter().enumerate().all(|(i, b)| b.contains(&ball.axis(i)))
    }

    /// Whether every cell lies inside `ball`.
    pub fn inside(&self, ball: &BallD) -> bool {
        self.union_box().iter().enumerate().all(|(i, b)| ball.axis(i).contains(b))
    }

    /// All cells, in lexicographic index order.
    pub fn cells(&self) -> Vec<BallD> {
        let ranges: Vec<Vec<BigInt>> = self.lo.iter().zip(&self.hi).map(|(a, b)| int_range(a, b)).collect();
        cartesian(&ranges).iter().map(|m| self.parent.cell(m)).collect()
    }
}

impl fmt::Debug for TessBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block(lo={:?}, hi={:?}, {:?})", self.lo, self.hi, self.parent)
    }
}

fn int_range(a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut m = a.clone();
    while &m <= b {
        out.push(m.clone());
        m += 1;
    }
    out
}

fn cartesian<T: Clone>(axes: &[Vec<T>]) -> Vec<Vec<T>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// The `m`-tessellation of `ball`: `m^d` cells of radius `R/m`, in
/// lexicographic order.
pub fn m_tessellation(ball: &BallD, m: u64) -> Result<Vec<BallD>, TessError> {
    let tess = CompleteTess::completion(ball, m)?;
    Ok(representation_block(ball, &tess, m).cells())
}

/// The `n`-tessellations of all the given cells, concatenated.
pub fn refine_cells(cells: &[BallD], n: u64) -> Result<Vec<BallD>, TessError> {
    let mut out = Vec::new();
    for cell in cells {
        out.extend(m_tessellation(cell, n)?);
    }
    Ok(out)
}

/// Block of `tess` forming the `m`-tessellation of `ball`, assuming it is one.
fn representation_block(ball: &BallD, tess: &CompleteTess, m: u64) -> TessBlock {
    let period = tess.period();
    let lo: Vec<BigInt> = (0..ball.dim())
        .map(|i| ((&ball.center()[i] - ball.radius() + &tess.cell_radius - &tess.base[i]) / &period).to_integer())
        .collect();
    let hi = lo.iter().map(|a| a + BigInt::from(m) - 1).collect();
    TessBlock { parent: tess.clone(), lo, hi }
}

fn check_dims(ball: &BallD, tess: &CompleteTess) -> Result<Rational, TessError> {
    if ball.dim() != tess.dim() {
        return Err(TessError::Domain(format!(
            "ball has dimension {} but the tessellation has dimension {}",
            ball.dim(),
            tess.dim()
        )));
    }
    Ok(ball.radius() / &tess.cell_radius)
}

fn require_ratio(ratio: &Rational, min: i64) -> Result<(), TessError> {
    if ratio < &int(min) {
        let what = if min == 1 { "R >= R'" } else { "R >= 2R'" };
        return Err(TessError::Precondition(format!("{what} is required, got R/R' = {ratio}")));
    }
    Ok(())
}

/// The block of `tess` whose union is exactly `ball`, when one exists:
/// `R/R'` must be an integer `M` and the cells of the `M`-tessellation of
/// `ball` must be cells of `tess`.
pub fn is_representable(ball: &BallD, tess: &CompleteTess) -> Result<Option<TessBlock>, TessError> {
    let ratio = check_dims(ball, tess)?;
    require_ratio(&ratio, 1)?;
    if !is_integer(&ratio) {
        return Ok(None);
    }
    let period = tess.period();
    let aligned = (0..ball.dim())
        .all(|i| is_integer(&((&ball.center()[i] - ball.radius() + &tess.cell_radius - &tess.base[i]) / &period)));
    if !aligned {
        return Ok(None);
    }
    let m = ratio.to_integer().to_u64().ok_or_else(|| TessError::Domain("ratio too large".into()))?;
    Ok(Some(representation_block(ball, tess, m)))
}

/// Per-axis index ranges `[a_i, b_i]` of the cells needed to cover `ball`.
fn cover_ranges(ball: &BallD, tess: &CompleteTess) -> Vec<(BigInt, BigInt)> {
    let period = tess.period();
    let r = &tess.cell_radius;
    (0..ball.dim())
        .map(|i| {
            let axis = ball.axis(i);
            let x = &tess.base[i];
            // Largest m with (2m - 1) R' + x <= lo; smallest m with (2m + 1) R' + x >= hi.
            let a = floor(&((axis.lo() - x + r) / &period));
            let b = ceil(&((axis.hi() - x - r) / &period));
            (a, b)
        })
        .collect()
}

/// Per-axis index ranges `[L_i, H_i]` of the cells contained in `ball`.
fn inner_ranges(ball: &BallD, tess: &CompleteTess) -> Vec<(BigInt, BigInt)> {
    let period = tess.period();
    let r = &tess.cell_radius;
    (0..ball.dim())
        .map(|i| {
            let axis = ball.axis(i);
            let x = &tess.base[i];
            let lo = ceil(&((axis.lo() - x + r) / &period));
            let hi = floor(&((axis.hi() - x - r) / &period));
            (lo, hi)
        })
        .collect()
}

/// Index windows of length `side` containing `[a, b]`.
fn windows_containing(range: &(BigInt, BigInt), side: &BigInt) -> Vec<(BigInt, BigInt)> {
    let (a, b) = range;
    int_range(&(b - side + 1), a).into_iter().map(|lo| (lo.clone(), lo + side - 1)).collect()
}

/// Index windows of length `side` inside `[a, b]`.
fn windows_inside(range: &(BigInt, BigInt), side: &BigInt) -> Vec<(BigInt, BigInt)> {
    let (a, b) = range;
    int_range(a, &(b - side + 1)).into_iter().map(|lo| (lo.clone(), lo + side - 1)).collect()
}

fn blocks_from_axes(tess: &CompleteTess, axes: &[Vec<(BigInt, BigInt)>]) -> Vec<TessBlock> {
    cartesian(axes)
        .into_iter()
        .map(|ranges| {
            let (lo, hi): (Vec<BigInt>, Vec<BigInt>) = ranges.into_iter().unzip();
            TessBlock { parent: tess.clone(), lo, hi }
        })
        .collect()
}

/// All minimal tessellations of `tess` covering `ball`, in lexicographic
/// order of their lower corners.
///
/// Along each axis a covering block must contain the index range of the
/// cells meeting the ball; the minimal blocks have side equal to the longest
/// of these ranges and may sit anywhere that still contains every range.
pub fn minimal_tessellations(ball: &BallD, tess: &CompleteTess) -> Result<Vec<TessBlock>, TessError> {
    let ratio = check_dims(ball, tess)?;
    require_ratio(&ratio, 1)?;
    let ranges = cover_ranges(ball, tess);
    let side = ranges.iter().map(|(a, b)| b - a + 1).max().expect("dimension >= 1");
    let axes: Vec<_> = ranges.iter().map(|r| windows_containing(r, &side)).collect();
    Ok(blocks_from_axes(tess, &axes))
}

/// All maximal tessellations of `tess` inside `ball`, in lexicographic order
/// of their lower corners. Requires `R >= 2R'`.
pub fn maximal_tessellations(ball: &BallD, tess: &CompleteTess) -> Result<Vec<TessBlock>, TessError> {
    let ratio = check_dims(ball, tess)?;
    require_ratio(&ratio, 2)?;
    let ranges = inner_ranges(ball, tess);
    let side = ranges.iter().map(|(a, b)| b - a + 1).min().expect("dimension >= 1");
    let axes: Vec<_> = ranges.iter().map(|r| windows_inside(r, &side)).collect();
    Ok(blocks_from_axes(tess, &axes))
}

/// The minimal covering tessellation with the smallest lower corner.
pub fn minimal_tessellation(ball: &BallD, tess: &CompleteTess) -> Result<TessBlock, TessError> {
    Ok(minimal_tessellations(ball, tess)?.remove(0))
}

/// The maximal inner tessellation with the smallest lower corner.
pub fn maximal_tessellation(ball: &BallD, tess: &CompleteTess) -> Result<TessBlock, TessError> {
    Ok(maximal_tessellations(ball, tess)?.remove(0))
}

/// Which family [`brute_force_blocks`] enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockMode {
    /// Inclusion-minimal tessellations covering the ball.
    Cover,
    /// Inclusion-maximal tessellations inside the ball.
    Packing,
}

/// Reference enumeration: every equal-sided block within two cells of the
/// ball is tested by endpoint comparison, and the inclusion-minimal covering
/// (or inclusion-maximal contained) ones are returned in lexicographic order
/// of their lower corners.
pub fn brute_force_blocks(
    ball: &BallD,
    tess: &CompleteTess,
    mode: BlockMode,
    bound: u64,
) -> Result<Vec<TessBlock>, TessError> {
    let ratio = check_dims(ball, tess)?;
    if ratio > int(bound as i64) {
        return Err(TessError::Feasibility(format!("R/R' = {ratio} exceeds the bound {bound}")));
    }
    let window: Vec<(BigInt, BigInt)> =
        tess.meeting_range(ball).into_iter().map(|(a, b)| (a - 2, b + 2)).collect();
    let max_side = window.iter().map(|(a, b)| b - a + 1).min().expect("dimension >= 1");
    let mut candidates = Vec::new();
    for side in int_range(&BigInt::one(), &max_side) {
        let axes: Vec<_> = window.iter().map(|r| windows_inside(r, &side)).collect();
        for block in blocks_from_axes(tess, &axes) {
            let keep = match mode {
                BlockMode::Cover => block.covers(ball),
                BlockMode::Packing => block.inside(ball),
            };
            if keep {
                candidates.push(block);
            }
        }
    }
    let mut out: Vec<TessBlock> = candidates
        .iter()
        .filter(|b| {
            !candidates.iter().any(|other| {
                other != *b
                    && match mode {
                        BlockMode::Cover => b.contains_block(other),
                        BlockMode::Packing => other.contains_block(b),
                    }
            })
        })
        .cloned()
        .collect();
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}
