//! Per-cell polynomial reconstruction.
//!
//! Three families are provided:
//!
//! * **GRPrec** builds the degree-`m` polynomial of cell `i` from the cell
//!   averages `q_{i-1}, q_i, q_{i+1}` and the interface states left behind by
//!   the previous step's Riemann interaction ("knots") at `x_{i-1/2}` and
//!   `x_{i+1/2}`. Degrees 2 and 4 are square interpolation problems; degrees 1
//!   and 3 minimise the squared mismatch of the over-determined conditions
//!   subject to exact conservation on cell `i`.
//! * **GRPrecNL** blends GRPrec with one-sided candidates using WENO weights.
//! * **WENO-DK** blends left, right and central cell-average stencils (two
//!   central stencils for odd degrees).
//!
//! Every condition is a linear functional of the modal coefficients, so each
//! candidate is a fixed matrix acting on the stencil data. The matrices are
//! built once on the reference cell (where they do not depend on `dx`).

use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Result, SolverError};
use crate::mesh::{FieldState, Grid, InterfaceLedger};
use crate::models::{Eigenbasis, PdeModel};
use crate::parallel::map_indices;
use crate::poly::{legendre_integrals, legendre_values, LegendrePoly, ReconstructionPolynomial, MAX_DEGREE, MAX_MODES};

/// Linear weight of the one-sided candidates.
pub const LAMBDA_SIDE: f64 = 1.0;
/// Linear weight of the central candidate(s).
pub const LAMBDA_CENTER: f64 = 1e9;
/// Exponent `r` of the nonlinear weights.
pub const WEIGHT_POWER: i32 = 4;
/// Regularisation `epsilon` of the nonlinear weights.
pub const WEIGHT_EPSILON: f64 = 1e-14;

/// Averages `q_{i-4} ..= q_{i+4}` are addressable by the operators.
pub const AVERAGE_REACH: isize = 4;
const NUM_AVERAGES: usize = 2 * AVERAGE_REACH as usize + 1;
const NUM_KNOTS: usize = 4;
/// Length of the per-cell data vector.
pub const DATA_LEN: usize = NUM_AVERAGES + NUM_KNOTS;

/// Interface positions relative to cell `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Knot {
    /// `x_{i-3/2}`
    FarLeft,
    /// `x_{i-1/2}`
    Left,
    /// `x_{i+1/2}`
    Right,
    /// `x_{i+3/2}`
    FarRight,
}

impl Knot {
    pub const ALL: [Knot; NUM_KNOTS] = [Knot::FarLeft, Knot::Left, Knot::Right, Knot::FarRight];

    /// Reference coordinate of the knot.
    pub fn xi(self) -> f64 {
        match self {
            Knot::FarLeft => -1.0,
            Knot::Left => 0.0,
            Knot::Right => 1.0,
            Knot::FarRight => 2.0,
        }
    }

    /// Interface index offset from cell `i` (interface `i` is `x_{i-1/2}`).
    pub fn interface_offset(self) -> isize {
        match self {
            Knot::FarLeft => -1,
            Knot::Left => 0,
            Knot::Right => 1,
            Knot::FarRight => 2,
        }
    }

    fn slot(self) -> usize {
        NUM_AVERAGES
            + match self {
                Knot::FarLeft => 0,
                Knot::Left => 1,
                Knot::Right => 2,
                Knot::FarRight => 3,
            }
    }
}

/// Scalar data around one cell: averages at offsets `-4 ..= 4` and the four knots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilData {
    pub values: [f64; DATA_LEN],
}

impl Default for StencilData {
    fn default() -> Self {
        StencilData {
            values: [0.0; DATA_LEN],
        }
    }
}

impl StencilData {
    fn average_slot(offset: isize) -> usize {
        debug_assert!(offset.abs() <= AVERAGE_REACH);
        (offset + AVERAGE_REACH) as usize
    }

    pub fn set_average(&mut self, offset: isize, value: f64) {
        self.values[Self::average_slot(offset)] = value;
    }

    pub fn average(&self, offset: isize) -> f64 {
        self.values[Self::average_slot(offset)]
    }

    pub fn set_knot(&mut self, knot: Knot, value: f64) {
        self.values[knot.slot()] = value;
    }

    pub fn knot(&self, knot: Knot) -> f64 {
        self.values[knot.slot()]
    }
}

/// A single linear condition on the cell polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    /// Mean over cell `i + offset` equals that cell's average.
    Mean(isize),
    /// Point value at the knot equals the knot value.
    Point(Knot),
}

impl Condition {
    fn row(&self, degree: usize) -> Vec<f64> {
        let full: [f64; MAX_MODES] = match *self {
            Condition::Mean(o) => {
                let a = o as f64;
                legendre_integrals(a, a + 1.0)
            }
            Condition::Point(k) => {
                let v = legendre_values(k.xi());
                let mut r = [0.0; MAX_MODES];
                r.copy_from_slice(&v[..MAX_MODES]);
                r
            }
        };
        full[..=degree].to_vec()
    }

    fn slot(&self) -> usize {
        match *self {
            Condition::Mean(o) => StencilData::average_slot(o),
            Condition::Point(k) => k.slot(),
        }
    }
}

/// Matrix mapping stencil data to modal coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    pub degree: usize,
    pub matrix: [[f64; DATA_LEN]; MAX_MODES],
}

impl LinearOperator {
    /// Polynomial satisfying `exact` conditions exactly and the
    /// `least_squares` conditions in the least-squares sense.
    ///
    /// With no least-squares rows the exact rows must form a square system.
    /// Otherwise the stationarity (KKT) system
    /// `[A^T A  C^T; C  0] [c; nu] = [A^T b; d]` is solved, which is the
    /// minimiser of `|A c - b|^2` subject to `C c = d`.
    pub fn build(degree: usize, exact: &[Condition], least_squares: &[Condition]) -> Result<Self> {
        let n = degree + 1;
        let ne = exact.len();
        let (system, rhs) = if least_squares.is_empty() {
            if ne != n {
                return Err(SolverError::InvalidArgument(format!(
                    "degree {degree} needs {n} exact conditions, got {ne}"
                )));
            }
            let mut a = DMatrix::zeros(n, n);
            let mut b = DMatrix::zeros(n, DATA_LEN);
            for (r, c) in exact.iter().enumerate() {
                for (k, v) in c.row(degree).into_iter().enumerate() {
                    a[(r, k)] = v;
                }
                b[(r, c.slot())] = 1.0;
            }
            (a, b)
        } else {
            let size = n + ne;
            let mut k_mat = DMatrix::zeros(size, size);
            let mut b = DMatrix::zeros(size, DATA_LEN);
            for c in least_squares {
                let row = c.row(degree);
                for i in 0..n {
                    for j in 0..n {
                        k_mat[(i, j)] += row[i] * row[j];
                    }
                    b[(i, c.slot())] += row[i];
                }
            }
            for (r, c) in exact.iter().enumerate() {
                let row = c.row(degree);
                for (j, &v) in row.iter().enumerate() {
                    k_mat[(n + r, j)] = v;
                    k_mat[(j, n + r)] = v;
                }
                b[(n + r, c.slot())] = 1.0;
            }
            (k_mat, b)
        };
        let lu = system.clone().lu();
        let det = lu.determinant();
        if !det.is_finite() || det.abs() < 1e-12 {
            return Err(SolverError::Singular(format!(
                "reconstruction conditions {exact:?} / {least_squares:?} at degree {degree}"
            )));
        }
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| SolverError::Singular(format!("degree {degree} reconstruction")))?;
        let mut matrix = [[0.0; DATA_LEN]; MAX_MODES];
        for k in 0..n {
            for s in 0..DATA_LEN {
                let v = sol[(k, s)];
                matrix[k][s] = if v.abs() < 1e-15 { 0.0 } else { v };
            }
        }
        Ok(LinearOperator { degree, matrix })
    }

    #[inline]
    pub fn apply(&self, data: &StencilData) -> LegendrePoly {
        let mut coeffs = [0.0; MAX_MODES];
        for (c, row) in coeffs.iter_mut().zip(&self.matrix).take(self.degree + 1) {
            *c = row.iter().zip(&data.values).map(|(a, b)| a * b).sum();
        }
        LegendrePoly::new(self.degree, coeffs)
    }
}

/// Left, central and right candidates of a nonlinear reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub left: LinearOperator,
    /// One central candidate, or two (left- and right-leaning) for odd
    /// WENO-DK degrees.
    pub centers: Vec<LinearOperator>,
    pub right: LinearOperator,
}

/// Precomputed operators for all degrees.
#[derive(Debug)]
pub struct ReconstructionTables {
    grprec: Vec<LinearOperator>,
    grprec_nl: Vec<CandidateSet>,
    weno: Vec<CandidateSet>,
    /// `oi[m-1]` is the quadratic form of the oscillation indicator (per unit dx).
    oi: Vec<[[f64; MAX_MODES]; MAX_MODES]>,
}

/// Condition sets of the linear GRPrec polynomial: `(exact, least_squares)`.
pub fn grprec_conditions(m: usize) -> (Vec<Condition>, Vec<Condition>) {
    use Condition::*;
    use Knot::*;
    match m {
        1 => (vec![Mean(0)], vec![Point(Left), Point(Right)]),
        2 => (vec![Mean(0), Point(Left), Point(Right)], vec![]),
        3 => (
            vec![Mean(0)],
            vec![Mean(-1), Mean(1), Point(Left), Point(Right)],
        ),
        4 => (
            vec![Mean(-1), Mean(0), Mean(1), Point(Left), Point(Right)],
            vec![],
        ),
        _ => unreachable!("degree checked by caller"),
    }
}

/// Exact condition sets of the one-sided GRPrecNL candidates `(left, right)`.
pub fn grprec_nl_side_conditions(m: usize) -> (Vec<Condition>, Vec<Condition>) {
    use Condition::*;
    use Knot::*;
    match m {
        1 => (vec![Mean(0), Point(Left)], vec![Mean(0), Point(Right)]),
        2 => (
            vec![Mean(-1), Mean(0), Point(Right)],
            vec![Mean(0), Mean(1), Point(Left)],
        ),
        3 => (
            vec![Mean(-1), Mean(0), Mean(1), Point(Left)],
            vec![Mean(-1), Mean(0), Mean(1), Point(Right)],
        ),
        4 => (
            vec![Mean(-1), Mean(0), Mean(1), Point(Left), Point(FarLeft)],
            vec![Mean(-1), Mean(0), Mean(1), Point(Right), Point(FarRight)],
        ),
        _ => unreachable!("degree checked by caller"),
    }
}

/// Cell-offset ranges of the WENO-DK stencils: left, the central ones, right.
///
/// Odd degrees have no centred stencil, so both the left- and the
/// right-leaning central stencils are used.
pub fn weno_stencils(m: usize) -> Vec<(isize, isize)> {
    let m = m as isize;
    let half_up = (m + 1) / 2;
    let mut out = vec![(-m, 0), (-half_up, m / 2)];
    if m % 2 == 1 {
        out.push((-(m / 2), half_up));
    }
    out.push((0, m));
    out
}

fn mean_conditions(range: (isize, isize)) -> Vec<Condition> {
    (range.0..=range.1).map(Condition::Mean).collect()
}

impl ReconstructionTables {
    fn build() -> Result<Self> {
        let mut grprec = Vec::new();
        let mut grprec_nl = Vec::new();
        let mut weno = Vec::new();
        let mut oi = Vec::new();
        for m in 1..=MAX_DEGREE {
            let (exact, ls) = grprec_conditions(m);
            let center = LinearOperator::build(m, &exact, &ls)?;
            let (l, r) = grprec_nl_side_conditions(m);
            grprec_nl.push(CandidateSet {
                left: LinearOperator::build(m, &l, &[])?,
                centers: vec![center.clone()],
                right: LinearOperator::build(m, &r, &[])?,
            });
            grprec.push(center);

            let stencils = weno_stencils(m);
            let ops = stencils
                .iter()
                .map(|&r| LinearOperator::build(m, &mean_conditions(r), &[]))
                .collect::<Result<Vec<_>>>()?;
            let k = ops.len();
            weno.push(CandidateSet {
                left: ops[0].clone(),
                centers: ops[1..k - 1].to_vec(),
                right: ops[k - 1].clone(),
            });

            oi.push(indicator_form(m));
        }
        Ok(ReconstructionTables {
            grprec,
            grprec_nl,
            weno,
            oi,
        })
    }

    pub fn grprec(&self, m: usize) -> &LinearOperator {
        &self.grprec[m - 1]
    }

    pub fn grprec_nl(&self, m: usize) -> &CandidateSet {
        &self.grprec_nl[m - 1]
    }

    pub fn weno(&self, m: usize) -> &CandidateSet {
        &self.weno[m - 1]
    }
}

/// `sum_l int_0^1 (d^l p / d xi^l)^2 dxi` as a quadratic form in the modes.
fn indicator_form(m: usize) -> [[f64; MAX_MODES]; MAX_MODES] {
    let mut form = [[0.0; MAX_MODES]; MAX_MODES];
    for a in 0..=m {
        for b in 0..=m {
            let mut ea = [0.0; MAX_MODES];
            ea[a] = 1.0;
            let mut eb = [0.0; MAX_MODES];
            eb[b] = 1.0;
            let pa = LegendrePoly::new(m, ea);
            let pb = LegendrePoly::new(m, eb);
            let mut s = 0.0;
            for l in 1..=m {
                let da = pa.derivative_ref(l);
                let db = pb.derivative_ref(l);
                for k in 0..=m {
                    s += da.coeffs[k] * db.coeffs[k] / (2.0 * k as f64 + 1.0);
                }
            }
            form[a][b] = s;
        }
    }
    form
}

/// Shared operator tables.
pub fn tables() -> &'static ReconstructionTables {
    static TABLES: OnceLock<ReconstructionTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        ReconstructionTables::build().expect("reconstruction condition sets are nonsingular")
    })
}

fn check_degree(m: usize) -> Result<()> {
    if !(1..=MAX_DEGREE).contains(&m) {
        return Err(SolverError::InvalidArgument(format!(
            "reconstruction degree must be in 1..={MAX_DEGREE}, got {m}"
        )));
    }
    Ok(())
}

/// `OI = sum_{l=1}^m int_cell (d^l p/dx^l)^2 dx^{2l} dx`.
///
/// In reference coordinates each term is `dx * int_0^1 (d^l p/dxi^l)^2 dxi`.
pub fn oscillation_indicator(p: &LegendrePoly, dx: f64) -> f64 {
    if p.degree == 0 {
        return 0.0;
    }
    let form = &tables().oi[p.degree - 1];
    let c = p.modes();
    let mut s = 0.0;
    for (a, ca) in c.iter().enumerate().skip(1) {
        for (b, cb) in c.iter().enumerate().skip(1) {
            s += form[a][b] * ca * cb;
        }
    }
    dx * s
}

/// Most candidates in any blend (left, two central, right).
const MAX_CANDIDATES: usize = 4;

/// Oscillation indicators and normalised weights of a left/central/right blend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearWeights {
    len: usize,
    indicators: [f64; MAX_CANDIDATES],
    weights: [f64; MAX_CANDIDATES],
}

impl NonlinearWeights {
    /// Weights from indicators ordered left, central..., right.
    pub fn from_indicators(indicators: &[f64]) -> Self {
        let len = indicators.len();
        assert!((3..=MAX_CANDIDATES).contains(&len), "{len} candidates");
        let mut out = NonlinearWeights {
            len,
            indicators: [0.0; MAX_CANDIDATES],
            weights: [0.0; MAX_CANDIDATES],
        };
        let mut total = 0.0;
        for (k, &oi) in indicators.iter().enumerate() {
            let lambda = if k == 0 || k == len - 1 { LAMBDA_SIDE } else { LAMBDA_CENTER };
            let w = lambda / (WEIGHT_EPSILON + oi).powi(WEIGHT_POWER);
            out.indicators[k] = oi;
            out.weights[k] = w;
            total += w;
        }
        for w in &mut out.weights[..len] {
            *w /= total;
        }
        out
    }

    /// `[OI_L, OI_C.., OI_R]`
    pub fn indicators(&self) -> &[f64] {
        &self.indicators[..self.len]
    }

    /// `[beta_L, beta_C.., beta_R]`
    pub fn weights(&self) -> &[f64] {
        &self.weights[..self.len]
    }
}

fn apply_set(set: &CandidateSet, data: &StencilData, dx: f64) -> (LegendrePoly, NonlinearWeights) {
    let mut cands = [LegendrePoly::new(0, [0.0; MAX_MODES]); MAX_CANDIDATES];
    let mut oi = [0.0; MAX_CANDIDATES];
    let ops = std::iter::once(&set.left)
        .chain(&set.centers)
        .chain(std::iter::once(&set.right));
    let mut n = 0;
    for op in ops {
        cands[n] = op.apply(data);
        oi[n] = oscillation_indicator(&cands[n], dx);
        n += 1;
    }
    let w = NonlinearWeights::from_indicators(&oi[..n]);
    let degree = cands[0].degree;
    let mut coeffs = [0.0; MAX_MODES];
    for (p, &beta) in cands[..n].iter().zip(w.weights()) {
        for (c, pc) in coeffs.iter_mut().zip(&p.coeffs).take(degree + 1) {
            *c += beta * pc;
        }
    }
    (LegendrePoly::new(degree, coeffs), w)
}


/// Linear GRPrec polynomial from `[q_{i-1}, q_i, q_{i+1}]` and the knots
/// `[q_{i-1/2}, q_{i+1/2}]`, in reference coordinates.
pub fn grprec(m: usize, averages: [f64; 3], knots: [f64; 2]) -> Result<LegendrePoly> {
    check_degree(m)?;
    let mut d = StencilData::default();
    for (o, v) in (-1..=1).zip(averages) {
        d.set_average(o, v);
    }
    d.set_knot(Knot::Left, knots[0]);
    d.set_knot(Knot::Right, knots[1]);
    Ok(tables().grprec(m).apply(&d))
}

/// Nonlinear GRPrec from `[q_{i-1}, q_i, q_{i+1}, q_{i+2}]` and knots
/// `[q_{i-3/2}, q_{i-1/2}, q_{i+1/2}, q_{i+3/2}]`.
pub fn grprec_nl(
    m: usize,
    averages: [f64; 4],
    knots: [f64; 4],
    dx: f64,
) -> Result<(LegendrePoly, NonlinearWeights)> {
    check_degree(m)?;
    let mut d = StencilData::default();
    for (o, v) in (-1..=2).zip(averages) {
        d.set_average(o, v);
    }
    for (k, v) in Knot::ALL.into_iter().zip(knots) {
        d.set_knot(k, v);
    }
    Ok(apply_set(tables().grprec_nl(m), &d, dx))
}

/// WENO-DK polynomial from the averages `q_{i-m} ..= q_{i+m}`.
pub fn weno_dk(m: usize, averages: &[f64], dx: f64) -> Result<(LegendrePoly, NonlinearWeights)> {
    check_degree(m)?;
    if averages.len() != 2 * m + 1 {
        return Err(SolverError::InvalidArgument(format!(
            "WENO-DK of degree {m} needs {} averages, got {}",
            2 * m + 1,
            averages.len()
        )));
    }
    let mut d = StencilData::default();
    for (o, &v) in (-(m as isize)..=m as isize).zip(averages) {
        d.set_average(o, v);
    }
    Ok(apply_set(tables().weno(m), &d, dx))
}

/// Available reconstruction operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReconstructionMethod {
    Grprec,
    GrprecNl,
    WenoDk,
    /// The linear central WENO-DK stencil alone (alternative first-step reconstruction).
    CentralLinear,
}

impl ReconstructionMethod {
    /// Whether the operator consumes interface knots from the previous step.
    pub fn needs_ledger(self) -> bool {
        matches!(self, ReconstructionMethod::Grprec | ReconstructionMethod::GrprecNl)
    }

    /// Same linear weights for every field, so the characteristic round trip is the identity.
    fn is_linear(self) -> bool {
        matches!(self, ReconstructionMethod::Grprec | ReconstructionMethod::CentralLinear)
    }

    fn average_reach(self, m: usize) -> isize {
        match self {
            ReconstructionMethod::Grprec | ReconstructionMethod::GrprecNl => 1,
            ReconstructionMethod::WenoDk => m as isize,
            ReconstructionMethod::CentralLinear => (m as isize + 1) / 2,
        }
    }

    /// Scalar reconstruction from assembled stencil data.
    pub fn apply(self, m: usize, data: &StencilData, dx: f64) -> LegendrePoly {
        let t = tables();
        match self {
            ReconstructionMethod::Grprec => t.grprec(m).apply(data),
            ReconstructionMethod::GrprecNl => apply_set(t.grprec_nl(m), data, dx).0,
            ReconstructionMethod::WenoDk => apply_set(t.weno(m), data, dx).0,
            ReconstructionMethod::CentralLinear => t.weno(m).centers[0].apply(data),
        }
    }
}

/// Reconstructs every cell of `state`.
///
/// For systems, the averages and knots around cell `i` are projected on the
/// characteristic variables of `Q_i`, each characteristic field is
/// reconstructed as a scalar, and the modes are projected back. Linear
/// operators skip the projection.
pub fn reconstruct_field<const N: usize, P: PdeModel<N>>(
    method: ReconstructionMethod,
    m: usize,
    model: &P,
    grid: &Grid,
    state: &FieldState<N>,
    ledger: Option<&InterfaceLedger<N>>,
    parallel: bool,
) -> Result<Vec<ReconstructionPolynomial<N>>> {
    check_degree(m)?;
    if state.num_cells() != grid.num_cells {
        return Err(SolverError::InvalidArgument(format!(
            "state has {} cells, grid {}",
            state.num_cells(),
            grid.num_cells
        )));
    }
    let ledger = if method.needs_ledger() {
        let l = ledger.ok_or_else(|| {
            SolverError::InvalidArgument(
                "GRP-based reconstruction needs interface states from a previous step".into(),
            )
        })?;
        l.check_fresh(state.step)?;
        if l.states.len() != grid.num_cells + 1 {
            return Err(SolverError::InvalidArgument(format!(
                "ledger holds {} interfaces, grid has {}",
                l.states.len(),
                grid.num_cells + 1
            )));
        }
        Some(l)
    } else {
        None
    };
    let reach = method.average_reach(m);
    let scalar = model.is_scalar() || method.is_linear();

    map_indices(grid.num_cells, parallel, |i| {
        let qi = state.averages[i];
        let basis = if scalar {
            Eigenbasis::identity()
        } else {
            model.eigenbasis(&qi).map_err(|_| SolverError::Inadmissible {
                cell: i,
                detail: model.describe_inadmissible(&qi),
            })?
        };
        let mut data = [StencilData::default(); N];
        for o in -reach..=reach {
            let q = state.averages[grid.cell_index(i as isize + o)];
            let w = if scalar { q } else { basis.project(&q) };
            for v in 0..N {
                data[v].set_average(o, w[v]);
            }
        }
        if let Some(l) = ledger {
            for k in Knot::ALL {
                let q = l.knot(grid, i as isize + k.interface_offset());
                let w = if scalar { q } else { basis.project(&q) };
                for v in 0..N {
                    data[v].set_knot(k, w[v]);
                }
            }
        }
        let mut char_coeffs = [[0.0; N]; MAX_MODES];
        for v in 0..N {
            let p = method.apply(m, &data[v], grid.dx);
            for k in 0..=m {
                char_coeffs[k][v] = p.coeffs[k];
            }
        }
        let mut out = ReconstructionPolynomial {
            degree: m,
            cell: i,
            dx: grid.dx,
            coeffs: [[0.0; N]; MAX_MODES],
        };
        for k in 0..=m {
            out.coeffs[k] = if scalar {
                char_coeffs[k]
            } else {
                basis.unproject(&char_coeffs[k])
            };
        }
        // Mode 0 is the cell average by construction; pin it to avoid
        // round-off from the characteristic round trip.
        out.coeffs[0] = qi;
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_condition_sets_are_nonsingular() {
        let t = tables();
        for m in 1..=MAX_DEGREE {
            assert_eq!(t.grprec(m).degree, m);
        }
    }

    #[test]
    fn constant_reproduction() {
        for m in 1..=4 {
            let p = grprec(m, [2.0; 3], [2.0; 2]).unwrap();
            assert!((p.coeffs[0] - 2.0).abs() < 1e-14);
            assert!(p.coeffs[1..].iter().all(|c| c.abs() < 1e-13));
            let (q, _) = grprec_nl(m, [2.0; 4], [2.0; 4], 0.1).unwrap();
            assert!(q.coeffs[1..].iter().all(|c| c.abs() < 1e-13));
            let (r, _) = weno_dk(m, &vec![2.0; 2 * m + 1], 0.1).unwrap();
            assert!((r.coeffs[0] - 2.0).abs() < 1e-14);
            assert!(r.coeffs[1..].iter().all(|c| c.abs() < 1e-13));
        }
    }

    #[test]
    fn quadratic_hand_solution() {
        // q_i = 1, knots 0.5 | 1.5  ->  p(xi) = 0.5 + xi = L_0 + 0.5 L_1
        let p = grprec(2, [0.0, 1.0, 0.0], [0.5, 1.5]).unwrap();
        assert!((p.coeffs[0] - 1.0).abs() < 1e-14);
        assert!((p.coeffs[1] - 0.5).abs() < 1e-14);
        assert!(p.coeffs[2].abs() < 1e-14);
    }

    #[test]
    fn linear_least_squares_closed_form() {
        // c0 = q_i, c1 = (q_R - q_L) / 2
        let p = grprec(1, [0.0, 0.7, 0.0], [0.1, 1.5]).unwrap();
        assert!((p.coeffs[0] - 0.7).abs() < 1e-15);
        assert!((p.coeffs[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(oscillation_indicator(&LegendrePoly::constant(3, 4.0), 0.1), 0.0);
        // p(x) = x on dx = 1 is 0.5 L_0 + 0.5 L_1
        let p = LegendrePoly::new(1, [0.5, 0.5, 0.0, 0.0, 0.0]);
        assert!((oscillation_indicator(&p, 1.0) - 1.0).abs() < 1e-15);
        let q = LegendrePoly::new(4, [0.3, -0.2, 0.5, 0.1, -0.05]);
        let mut q3 = q;
        q3.coeffs.iter_mut().for_each(|c| *c *= 3.0);
        let (a, b) = (oscillation_indicator(&q, 0.2), oscillation_indicator(&q3, 0.2));
        assert!((b - 9.0 * a).abs() < 1e-13 * b);
    }

    #[test]
    fn equal_indicators_favour_center() {
        let w = NonlinearWeights::from_indicators(&[0.3, 0.3, 0.3]);
        assert!((w.weights()[1] - 1e9 / (1e9 + 2.0)).abs() < 1e-15);
        let w = NonlinearWeights::from_indicators(&[0.3, 0.3, 0.3, 0.3]);
        assert!((w.weights()[2] - 1e9 / (2e9 + 2.0)).abs() < 1e-15);
        assert!((w.weights.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weno_stencil_offsets() {
        assert_eq!(weno_stencils(1), [(-1, 0), (-1, 0), (0, 1), (0, 1)]);
        assert_eq!(weno_stencils(2), [(-2, 0), (-1, 1), (0, 2)]);
        assert_eq!(weno_stencils(3), [(-3, 0), (-2, 1), (-1, 2), (0, 3)]);
        assert_eq!(weno_stencils(4), [(-4, 0), (-2, 2), (0, 4)]);
    }

    #[test]
    fn bad_degree_rejected() {
        assert!(grprec(0, [0.0; 3], [0.0; 2]).is_err());
        assert!(grprec(5, [0.0; 3], [0.0; 2]).is_err());
        assert!(weno_dk(2, &[1.0; 3], 0.1).is_err());
    }
}
