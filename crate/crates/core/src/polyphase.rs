//! Polyphase matrices over `N̂`, the K-channel filter bank, perfect
//! reconstruction, frame bounds, pair classification and dual design.
//!
//! Two conventions meet here. A filter bank is described by its analysis
//! filters `h_k`, whose polyphase matrix has entries `ĥ_{k,h_i}(γ)`. A system
//! of translates `{T_n f_k}` is described by its generators `f_k`; its
//! polyphase matrix is the analysis matrix of `h_k = f̃_k`, whose entries are
//! `conj(f̂_{k,h_i}(γ))`. Functions taking `generators` use the latter.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GElem, GroupSpec};
use crate::linalg::{hermitian_eigen, identity_deviation, max_abs, CMat, CVec};
use crate::signal::{random_values, GSignal, NSignal};
use crate::C64;

/// Numerical thresholds shared by the verdict-producing operations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Absolute tolerance on matrix entries for identity checks.
    pub pr: f64,
    /// `A_H` counts as positive when `A_H > frame · B_H`.
    pub frame: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pr: 1e-10,
            frame: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// `K × L`.
    Analysis,
    /// `L × K`.
    Synthesis,
    Other,
}

/// One complex matrix per character `γ ∈ N̂`.
#[derive(Clone, Debug)]
pub struct PolyphaseField {
    group: Arc<GroupSpec>,
    kind: FieldKind,
    rows: usize,
    cols: usize,
    matrices: Vec<CMat>,
}

impl PolyphaseField {
    pub fn new(
        group: Arc<GroupSpec>,
        kind: FieldKind,
        rows: usize,
        cols: usize,
        matrices: Vec<CMat>,
    ) -> Result<Self> {
        if matrices.len() != group.order_n() {
            return Err(Error::DimensionMismatch {
                what: "number of characters",
                expected: group.order_n(),
                found: matrices.len(),
            });
        }
        if let Some(bad) = matrices.iter().find(|m| m.shape() != (rows, cols)) {
            return Err(Error::DimensionMismatch {
                what: "polyphase matrix rows",
                expected: rows,
                found: bad.nrows(),
            });
        }
        Ok(Self {
            group,
            kind,
            rows,
            cols,
            matrices,
        })
    }

    pub fn zeros(group: &Arc<GroupSpec>, rows: usize, cols: usize) -> Self {
        Self {
            group: Arc::clone(group),
            kind: FieldKind::Other,
            rows,
            cols,
            matrices: vec![CMat::zeros(rows, cols); group.order_n()],
        }
    }

    /// Independent standard complex Gaussian entries at every character.
    pub fn random<R: Rng + ?Sized>(
        group: &Arc<GroupSpec>,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        let matrices = (0..group.order_n())
            .map(|_| CMat::from_vec(rows, cols, random_values(rows * cols, rng)))
            .collect();
        Self {
            group: Arc::clone(group),
            kind: FieldKind::Other,
            rows,
            cols,
            matrices,
        }
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn at(&self, gamma: usize) -> &CMat {
        &self.matrices[gamma]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    /// Pointwise product `self(γ) · other(γ)`.
    pub fn mul(&self, other: &PolyphaseField) -> Result<PolyphaseField> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                what: "inner polyphase dimension",
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self {
            group: Arc::clone(&self.group),
            kind: FieldKind::Other,
            rows: self.rows,
            cols: other.cols,
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn adjoint(&self) -> PolyphaseField {
        Self {
            group: Arc::clone(&self.group),
            kind: FieldKind::Other,
            rows: self.cols,
            cols: self.rows,
            matrices: self.matrices.iter().map(CMat::adjoint).collect(),
        }
    }

    /// Largest deviation from the identity over all characters, with the
    /// character and entry where it occurs.
    pub fn identity_deviation(&self) -> (f64, usize, (usize, usize)) {
        self.matrices
            .iter()
            .enumerate()
            .map(|(gamma, m)| {
                let (d, entry) = identity_deviation(m);
                (d, gamma, entry)
            })
            .fold((0.0, 0, (0, 0)), |acc, x| if x.0 > acc.0 { x } else { acc })
    }
}

fn common_group(filters: &[GSignal]) -> Result<Arc<GroupSpec>> {
    let first = filters.first().ok_or(Error::NoFilters)?;
    for f in &filters[1..] {
        f.ensure_same_group(first)?;
    }
    Ok(Arc::clone(first.group()))
}

/// `H(γ)_{k,i} = ĥ_{k,h_i}(γ)` with `h_{k,h}(n) = h_k[(−n, h)⁻¹]`.
pub fn analysis_matrix(filters: &[GSignal]) -> Result<PolyphaseField> {
    let group = common_group(filters)?;
    let l = group.order_h();
    let spectra: Vec<Vec<NSignal>> = filters
        .iter()
        .map(|f| (0..l).map(|i| f.analysis_component(i).fourier()).collect())
        .collect();
    let matrices = (0..group.order_n())
        .map(|gamma| CMat::from_fn(filters.len(), l, |k, i| spectra[k][i].values()[gamma]))
        .collect();
    PolyphaseField::new(group, FieldKind::Analysis, filters.len(), l, matrices)
}

/// Polyphase matrix of the translates `{T_n f_k}`: `H(γ)_{k,i} = conj(f̂_{k,h_i}(γ))`.
/// Equals `analysis_matrix` of the involuted generators.
pub fn generator_matrix(generators: &[GSignal]) -> Result<PolyphaseField> {
    let group = common_group(generators)?;
    let l = group.order_h();
    let spectra: Vec<Vec<NSignal>> = generators
        .iter()
        .map(|f| (0..l).map(|i| f.slice(i).fourier()).collect())
        .collect();
    let matrices = (0..group.order_n())
        .map(|gamma| {
            CMat::from_fn(generators.len(), l, |k, i| {
                spectra[k][i].values()[gamma].conj()
            })
        })
        .collect();
    PolyphaseField::new(group, FieldKind::Analysis, generators.len(), l, matrices)
}

/// `G(γ)_{i,k} = ĝ_{h_i,k}(γ)` with `g_{h_i,k}(n) = g_k(n, h_i)`.
pub fn synthesis_matrix(filters: &[GSignal]) -> Result<PolyphaseField> {
    let group = common_group(filters)?;
    let l = group.order_h();
    let spectra: Vec<Vec<NSignal>> = filters
        .iter()
        .map(|g| (0..l).map(|i| g.slice(i).fourier()).collect())
        .collect();
    let matrices = (0..group.order_n())
        .map(|gamma| CMat::from_fn(l, filters.len(), |i, k| spectra[k][i].values()[gamma]))
        .collect();
    PolyphaseField::new(group, FieldKind::Synthesis, l, filters.len(), matrices)
}

fn entry_series(field: &PolyphaseField, r: usize, c: usize) -> Vec<C64> {
    let n = field.group.n();
    n.inverse_fourier(&field.matrices.iter().map(|m| m[(r, c)]).collect::<Vec<_>>())
}

/// Synthesis filters whose polyphase matrix is the given `L × K` field.
pub fn synthesis_filters(field: &PolyphaseField) -> Result<Vec<GSignal>> {
    let group = &field.group;
    if field.rows != group.order_h() {
        return Err(Error::DimensionMismatch {
            what: "synthesis field rows (|H|)",
            expected: group.order_h(),
            found: field.rows,
        });
    }
    Ok((0..field.cols)
        .map(|k| {
            let comps: Vec<Vec<C64>> = (0..field.rows).map(|i| entry_series(field, i, k)).collect();
            GSignal::from_fn(group, |x| comps[x.h][x.n])
        })
        .collect())
}

/// Analysis filters whose polyphase matrix is the given `K × L` field.
pub fn analysis_filters(field: &PolyphaseField) -> Result<Vec<GSignal>> {
    let group = &field.group;
    if field.cols != group.order_h() {
        return Err(Error::DimensionMismatch {
            what: "analysis field columns (|H|)",
            expected: group.order_h(),
            found: field.cols,
        });
    }
    let nn = group.n();
    Ok((0..field.rows)
        .map(|k| {
            let comps: Vec<Vec<C64>> = (0..field.cols).map(|i| entry_series(field, k, i)).collect();
            // h_k(g) = h_{k,h}(n) where (−n, h) = g⁻¹.
            GSignal::from_fn(group, |x| {
                let y = group.inv(x);
                comps[y.h][nn.neg(y.n)]
            })
        })
        .collect())
}

/// Subband signals and output of one pass through a filter bank.
#[derive(Clone, Debug)]
pub struct FilterBankRun {
    pub coefficients: Vec<NSignal>,
    pub output: GSignal,
}

fn check_bank(alpha: &GSignal, analysis: &[GSignal], synthesis: &[GSignal]) -> Result<()> {
    if analysis.len() != synthesis.len() {
        return Err(Error::DimensionMismatch {
            what: "number of synthesis filters",
            expected: analysis.len(),
            found: synthesis.len(),
        });
    }
    if analysis.is_empty() {
        return Err(Error::NoFilters);
    }
    for f in analysis.iter().chain(synthesis) {
        alpha.ensure_same_group(f)?;
    }
    Ok(())
}

/// `c_k = ↓_H(α ∗ h_k)`, `β = Σ_k (↑_H c_k) ∗ g_k`, evaluated on `G` directly.
pub fn run_filterbank(
    alpha: &GSignal,
    analysis: &[GSignal],
    synthesis: &[GSignal],
) -> Result<FilterBankRun> {
    check_bank(alpha, analysis, synthesis)?;
    let group = alpha.group();
    let coefficients = analysis
        .iter()
        .map(|h| Ok(alpha.convolve(h)?.decimate()))
        .collect::<Result<Vec<_>>>()?;
    let mut output = GSignal::zeros(group);
    for (c, g) in coefficients.iter().zip(synthesis) {
        output = output.add(&GSignal::expand(group, c)?.convolve(g)?)?;
    }
    Ok(FilterBankRun {
        coefficients,
        output,
    })
}

/// The same filter bank evaluated through `C(γ) = H(γ)A(γ)`, `B(γ) = G(γ)C(γ)`.
pub fn run_filterbank_polyphase(
    alpha: &GSignal,
    analysis: &[GSignal],
    synthesis: &[GSignal],
) -> Result<FilterBankRun> {
    check_bank(alpha, analysis, synthesis)?;
    let group = alpha.group();
    let nn = group.n();
    let h = analysis_matrix(analysis)?;
    let g = synthesis_matrix(synthesis)?;
    let a_spec: Vec<NSignal> = alpha.slices().iter().map(NSignal::fourier).collect();
    let k = analysis.len();
    let l = group.order_h();

    let mut c_spec = vec![vec![C64::new(0.0, 0.0); nn.order()]; k];
    let mut b_spec = vec![vec![C64::new(0.0, 0.0); nn.order()]; l];
    for gamma in nn.elements() {
        let a = CVec::from_iterator(l, a_spec.iter().map(|s| s.values()[gamma]));
        let c = h.at(gamma) * a;
        let b = g.at(gamma) * &c;
        for (kk, v) in c.iter().enumerate() {
            c_spec[kk][gamma] = *v;
        }
        for (ll, v) in b.iter().enumerate() {
            b_spec[ll][gamma] = *v;
        }
    }
    let coefficients = c_spec
        .iter()
        .map(|s| NSignal::new(nn.clone(), nn.inverse_fourier(s)))
        .collect::<Result<Vec<_>>>()?;
    let slices = b_spec
        .iter()
        .map(|s| NSignal::new(nn.clone(), nn.inverse_fourier(s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FilterBankRun {
        coefficients,
        output: GSignal::from_slices(group, &slices)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrVerdict {
    pub pr: bool,
    pub max_dev: f64,
    /// Coordinates of the character with the largest deviation.
    pub worst_gamma: Vec<usize>,
    /// `(row, col)` of the largest deviation in `G(γ)H(γ) − I`.
    pub worst_entry: (usize, usize),
    pub tolerance: f64,
}

/// Perfect reconstruction holds iff `G(γ)H(γ) = I_L` for every `γ`.
pub fn verify_pr(analysis: &[GSignal], synthesis: &[GSignal], tol: &Tolerances) -> Result<PrVerdict> {
    if analysis.len() != synthesis.len() {
        return Err(Error::DimensionMismatch {
            what: "number of synthesis filters",
            expected: analysis.len(),
            found: synthesis.len(),
        });
    }
    let h = analysis_matrix(analysis)?;
    let g = synthesis_matrix(synthesis)?;
    analysis[0].ensure_same_group(&synthesis[0])?;
    Ok(pr_verdict(&g.mul(&h)?, tol))
}

pub(crate) fn pr_verdict(product: &PolyphaseField, tol: &Tolerances) -> PrVerdict {
    let (max_dev, gamma, worst_entry) = product.identity_deviation();
    PrVerdict {
        pr: max_dev <= tol.pr,
        max_dev,
        worst_gamma: product.group().n().coords(gamma),
        worst_entry,
        tolerance: tol.pr,
    }
}

/// Per-character extreme eigenvalues of `H*(γ)H(γ)`.
fn gram_spectrum(h: &PolyphaseField) -> Vec<(f64, f64)> {
    h.matrices()
        .par_iter()
        .map(|m| {
            let vals = hermitian_eigen(&(m.adjoint() * m)).0;
            (vals[0], vals[vals.len() - 1])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bounds {
    pub a_h: f64,
    pub b_h: f64,
    pub worst_gamma: Vec<usize>,
    pub worst_lambda_min: f64,
}

/// `A_H = min_γ λ_min[H*H]`, `B_H = max_γ λ_max[H*H]`.
pub fn bounds(h: &PolyphaseField) -> Bounds {
    let spectrum = gram_spectrum(h);
    let (gamma, &(a_h, _)) = spectrum
        .iter()
        .enumerate()
        .min_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
        .expect("N is non-empty");
    let b_h = spectrum.iter().map(|s| s.1).fold(0.0, f64::max);
    Bounds {
        a_h: a_h.max(0.0),
        b_h,
        worst_gamma: h.group().n().coords(gamma),
        worst_lambda_min: a_h,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairClassification {
    pub dual_frames: bool,
    pub dual_deviation: f64,
    pub biorthogonal: bool,
    pub biorthogonal_deviation: f64,
    pub riesz_dual: bool,
    /// Orthonormal basis of translates (refers to the first family).
    pub onb: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameReport {
    pub channels: usize,
    pub order_h: usize,
    pub a_h: f64,
    pub b_h: f64,
    pub worst_gamma: Vec<usize>,
    pub bessel: bool,
    pub frame: bool,
    /// `Some(A)` when `H*(γ)H(γ) = A·I_L` for every `γ`.
    pub tight: Option<f64>,
    pub classification: Option<PairClassification>,
    pub tolerances: Tolerances,
}

impl FrameReport {
    fn from_matrix(h: &PolyphaseField, tol: &Tolerances) -> Self {
        let b = bounds(h);
        let bessel = b.b_h.is_finite();
        let frame = bessel && b.b_h > 0.0 && b.a_h > tol.frame * b.b_h;
        let tight = (frame && b.b_h - b.a_h <= tol.pr * b.b_h.max(1.0))
            .then_some(0.5 * (b.a_h + b.b_h));
        FrameReport {
            channels: h.shape().0,
            order_h: h.shape().1,
            a_h: b.a_h,
            b_h: b.b_h,
            worst_gamma: b.worst_gamma,
            bessel,
            frame,
            tight,
            classification: None,
            tolerances: *tol,
        }
    }
}

/// Bessel/frame/tightness of `{T_n f_k}` from its polyphase matrix.
pub fn frame_bounds(generators: &[GSignal], tol: &Tolerances) -> Result<FrameReport> {
    Ok(FrameReport::from_matrix(&generator_matrix(generators)?, tol))
}

/// Classifies the pair `{T_n f_k}`, `{T_n g_k}`: dual frames (`GH = I_L`),
/// biorthogonal (`HG = I_K`), dual Riesz bases, tightness and ONB.
pub fn classify_pair(f: &[GSignal], g: &[GSignal], tol: &Tolerances) -> Result<FrameReport> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            what: "number of partner generators",
            expected: f.len(),
            found: g.len(),
        });
    }
    let h = generator_matrix(f)?;
    let gm = synthesis_matrix(g)?;
    f[0].ensure_same_group(&g[0])?;
    let mut report = FrameReport::from_matrix(&h, tol);
    let square = f.len() == h.group().order_h();
    let (dual_deviation, _, _) = gm.mul(&h)?.identity_deviation();
    let (biorthogonal_deviation, _, _) = h.mul(&gm)?.identity_deviation();
    let (onb_deviation, _, _) = h.adjoint().mul(&h)?.identity_deviation();
    let dual_frames = dual_deviation <= tol.pr;
    let biorthogonal = biorthogonal_deviation <= tol.pr;
    report.classification = Some(PairClassification {
        dual_frames,
        dual_deviation,
        biorthogonal,
        biorthogonal_deviation,
        riesz_dual: square && dual_frames && biorthogonal,
        onb: square && onb_deviation <= tol.pr,
    });
    Ok(report)
}

/// `H†(γ) = [H*(γ)H(γ)]⁻¹ H*(γ)`, inverting through the Hermitian
/// eigendecomposition. Fails when `A_H ≤ tol.frame · B_H`.
pub fn pseudo_inverse_field(h: &PolyphaseField, tol: &Tolerances) -> Result<PolyphaseField> {
    let decomps: Vec<(Vec<f64>, CMat)> = h
        .matrices()
        .par_iter()
        .map(|m| hermitian_eigen(&(m.adjoint() * m)))
        .collect();
    let (worst, a_h) = decomps
        .iter()
        .enumerate()
        .map(|(gamma, (vals, _))| (gamma, vals[0]))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("N is non-empty");
    let b_h = decomps
        .iter()
        .map(|(vals, _)| vals[vals.len() - 1])
        .fold(0.0, f64::max);
    if !(b_h > 0.0 && a_h > tol.frame * b_h) {
        return Err(Error::SamplesInsufficient {
            gamma: h.group().n().coords(worst),
            lambda_min: a_h,
            a_h: a_h.max(0.0),
            b_h,
        });
    }
    let matrices = h
        .matrices()
        .iter()
        .zip(&decomps)
        .map(|(m, (vals, vecs))| {
            let inv = CVec::from_iterator(vals.len(), vals.iter().map(|&v| C64::new(1.0 / v, 0.0)));
            vecs * CMat::from_diagonal(&inv) * vecs.adjoint() * m.adjoint()
        })
        .collect();
    PolyphaseField::new(
        Arc::clone(h.group()),
        FieldKind::Synthesis,
        h.shape().1,
        h.shape().0,
        matrices,
    )
}

/// Synthesis filters from the Moore–Penrose pseudo-inverse of the analysis
/// polyphase matrix; the resulting bank has perfect reconstruction.
pub fn design_dual_pseudoinverse(analysis: &[GSignal], tol: &Tolerances) -> Result<Vec<GSignal>> {
    let h = analysis_matrix(analysis)?;
    synthesis_filters(&pseudo_inverse_field(&h, tol)?)
}

/// `G(γ) = H†(γ) + U(γ)[I_K − H(γ)H†(γ)]` for a free `L × K` field `U`.
pub fn dual_family_field(
    h: &PolyphaseField,
    u: &PolyphaseField,
    tol: &Tolerances,
) -> Result<PolyphaseField> {
    let (k, l) = h.shape();
    if u.shape() != (l, k) {
        return Err(Error::DimensionMismatch {
            what: "free parameter field rows",
            expected: l,
            found: u.shape().0,
        });
    }
    if u.group().n() != h.group().n() {
        return Err(Error::GroupMismatch);
    }
    let pinv = pseudo_inverse_field(h, tol)?;
    let identity = CMat::identity(k, k);
    let matrices = pinv
        .matrices()
        .iter()
        .zip(h.matrices())
        .zip(u.matrices())
        .map(|((p, hm), um)| p + um * (&identity - hm * p))
        .collect();
    PolyphaseField::new(Arc::clone(h.group()), FieldKind::Synthesis, l, k, matrices)
}

pub fn dual_family(
    analysis: &[GSignal],
    u: &PolyphaseField,
    tol: &Tolerances,
) -> Result<Vec<GSignal>> {
    let h = analysis_matrix(analysis)?;
    synthesis_filters(&dual_family_field(&h, u, tol)?)
}

/// `δ_{(0, h_k)}` for every `h_k ∈ H`: the identity bank.
pub fn delta_bank(group: &Arc<GroupSpec>) -> Vec<GSignal> {
    (0..group.order_h())
        .map(|h| GSignal::delta(group, GElem::new(0, h)))
        .collect()
}

/// Largest entrywise distance between two filter families.
pub fn max_filter_difference(a: &[GSignal], b: &[GSignal]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            what: "filter count",
            expected: a.len(),
            found: b.len(),
        });
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| x.max_abs_diff(y))
        .try_fold(0.0, |acc, d| Ok(f64::max(acc, d?)))
}

/// Largest entry modulus over all characters.
pub fn field_max_abs(field: &PolyphaseField) -> f64 {
    field.matrices().iter().map(max_abs).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d8() -> Arc<GroupSpec> {
        Arc::new(GroupSpec::dihedral(4).unwrap())
    }

    fn random_bank(g: &Arc<GroupSpec>, k: usize, rng: &mut ChaCha8Rng) -> Vec<GSignal> {
        (0..k).map(|_| GSignal::random(g, rng)).collect()
    }

    #[test]
    fn delta_bank_has_identity_polyphase() {
        let g = d8();
        let bank = delta_bank(&g);
        let h = analysis_matrix(&bank).unwrap();
        let s = synthesis_matrix(&bank).unwrap();
        for gamma in 0..4 {
            assert_eq!(identity_deviation(h.at(gamma)).0, 0.0);
            assert_eq!(identity_deviation(s.at(gamma)).0, 0.0);
        }
    }

    #[test]
    fn scaling_a_filter_scales_its_row() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bank = random_bank(&g, 3, &mut rng);
        let c = C64::new(0.5, -2.0);
        let mut scaled = bank.clone();
        scaled[1] = scaled[1].scale(c);
        let h = analysis_matrix(&bank).unwrap();
        let hs = analysis_matrix(&scaled).unwrap();
        for gamma in 0..4 {
            for i in 0..2 {
                assert!((hs.at(gamma)[(1, i)] - c * h.at(gamma)[(1, i)]).norm() < 1e-12);
                assert!((hs.at(gamma)[(0, i)] - h.at(gamma)[(0, i)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn generator_matrix_equals_analysis_matrix_of_involution() {
        let g = Arc::new(GroupSpec::dihedral(6).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_bank(&g, 3, &mut rng);
        let ft: Vec<GSignal> = f.iter().map(GSignal::involution).collect();
        let a = generator_matrix(&f).unwrap();
        let b = analysis_matrix(&ft).unwrap();
        for gamma in 0..6 {
            assert!(max_abs(&(a.at(gamma) - b.at(gamma))) < 1e-12);
        }
    }

    #[test]
    fn field_to_filter_round_trips() {
        let g = Arc::new(GroupSpec::dihedral(6).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bank = random_bank(&g, 3, &mut rng);
        let back = analysis_filters(&analysis_matrix(&bank).unwrap()).unwrap();
        assert!(max_filter_difference(&bank, &back).unwrap() < 1e-12);
        let back = synthesis_filters(&synthesis_matrix(&bank).unwrap()).unwrap();
        assert!(max_filter_difference(&bank, &back).unwrap() < 1e-12);
    }

    #[test]
    fn zero_synthesis_gives_zero_output() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = GSignal::random(&g, &mut rng);
        let h = random_bank(&g, 2, &mut rng);
        let zero = vec![GSignal::zeros(&g); 2];
        let run = run_filterbank(&a, &h, &zero).unwrap();
        assert_eq!(run.output.norm(), 0.0);
        let s = synthesis_matrix(&zero).unwrap();
        assert_eq!(field_max_abs(&s), 0.0);
    }

    #[test]
    fn delta_bank_reconstructs() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = GSignal::random(&g, &mut rng);
        let bank = delta_bank(&g);
        let run = run_filterbank(&a, &bank, &bank).unwrap();
        assert!(run.output.max_abs_diff(&a).unwrap() < 1e-14);
        let v = verify_pr(&bank, &bank, &Tolerances::default()).unwrap();
        assert!(v.pr);
        assert_eq!(v.max_dev, 0.0);
    }

    #[test]
    fn scaled_synthesis_breaks_pr_and_reports_location() {
        let g = d8();
        let bank = delta_bank(&g);
        let mut syn = bank.clone();
        syn[0] = syn[0].scale(C64::new(2.0, 0.0));
        let v = verify_pr(&bank, &syn, &Tolerances::default()).unwrap();
        assert!(!v.pr);
        assert!((v.max_dev - 1.0).abs() < 1e-12);
        assert_eq!(v.worst_entry, (0, 0));
    }

    #[test]
    fn mismatched_bank_sizes_are_rejected() {
        let g = d8();
        let bank = delta_bank(&g);
        assert!(verify_pr(&bank, &bank[..1], &Tolerances::default()).is_err());
        assert!(matches!(
            frame_bounds(&[], &Tolerances::default()),
            Err(Error::NoFilters)
        ));
    }

    #[test]
    fn polyphase_and_time_domain_paths_agree() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = GSignal::random(&g, &mut rng);
        let h = random_bank(&g, 3, &mut rng);
        let s = random_bank(&g, 3, &mut rng);
        let t = run_filterbank(&a, &h, &s).unwrap();
        let p = run_filterbank_polyphase(&a, &h, &s).unwrap();
        assert!(t.output.max_abs_diff(&p.output).unwrap() < 1e-11);
        for (x, y) in t.coefficients.iter().zip(&p.coefficients) {
            for (u, v) in x.values().iter().zip(y.values()) {
                assert!((u - v).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn delta_generators_are_an_orthonormal_basis() {
        let g = d8();
        let r = frame_bounds(&delta_bank(&g), &Tolerances::default()).unwrap();
        assert_eq!((r.a_h, r.b_h), (1.0, 1.0));
        assert!(r.frame && r.bessel);
        assert_eq!(r.tight, Some(1.0));

        let doubled: Vec<GSignal> = delta_bank(&g).into_iter().chain(delta_bank(&g)).collect();
        let r = frame_bounds(&doubled, &Tolerances::default()).unwrap();
        assert!((r.a_h - 2.0).abs() < 1e-12 && (r.b_h - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_scaled_orthogonal_columns() {
        // H(γ) has orthogonal columns of norm 2 ⇒ H† = H*/4.
        let g = d8();
        let mut bank = delta_bank(&g);
        bank.push(GSignal::zeros(&g));
        let bank: Vec<GSignal> = bank.iter().map(|f| f.scale(C64::new(2.0, 0.0))).collect();
        let h = analysis_matrix(&bank).unwrap();
        let p = pseudo_inverse_field(&h, &Tolerances::default()).unwrap();
        for gamma in 0..4 {
            let want = h.at(gamma).adjoint() * C64::new(0.25, 0.0);
            assert!(max_abs(&(p.at(gamma) - want)) < 1e-14);
        }
        let dual = design_dual_pseudoinverse(&bank, &Tolerances::default()).unwrap();
        let expect: Vec<GSignal> = delta_bank(&g)
            .into_iter()
            .chain([GSignal::zeros(&g)])
            .map(|f| f.scale(C64::new(0.5, 0.0)))
            .collect();
        assert!(max_filter_difference(&dual, &expect).unwrap() < 1e-14);
    }

    #[test]
    fn delta_bank_is_its_own_dual() {
        let g = d8();
        let dual = design_dual_pseudoinverse(&delta_bank(&g), &Tolerances::default()).unwrap();
        assert!(max_filter_difference(&dual, &delta_bank(&g)).unwrap() < 1e-14);
    }

    #[test]
    fn too_few_channels_cannot_be_inverted() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random_bank(&g, 1, &mut rng);
        let err = design_dual_pseudoinverse(&h, &Tolerances::default()).unwrap_err();
        assert!(err.is_rejection());
    }

    #[test]
    fn dual_family_with_zero_parameter_is_pseudo_inverse() {
        let g = Arc::new(GroupSpec::dihedral(6).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random_bank(&g, 3, &mut rng);
        let tol = Tolerances::default();
        let base = design_dual_pseudoinverse(&h, &tol).unwrap();
        let u0 = PolyphaseField::zeros(&g, 2, 3);
        let fam = dual_family(&h, &u0, &tol).unwrap();
        assert!(max_filter_difference(&base, &fam).unwrap() < 1e-14);

        let u = PolyphaseField::random(&g, 2, 3, &mut rng);
        let other = dual_family(&h, &u, &tol).unwrap();
        assert!(verify_pr(&h, &other, &tol).unwrap().pr);
        assert!(max_filter_difference(&base, &other).unwrap() > 1e-3);
        assert!(dual_family(&h, &PolyphaseField::zeros(&g, 3, 2), &tol).is_err());
    }

    #[test]
    fn classification_of_scaled_pair() {
        let g = d8();
        let tol = Tolerances::default();
        let f: Vec<GSignal> = delta_bank(&g).iter().map(|x| x.scale(C64::new(2.0, 0.0))).collect();
        let gg: Vec<GSignal> = delta_bank(&g).iter().map(|x| x.scale(C64::new(0.5, 0.0))).collect();
        let r = classify_pair(&f, &gg, &tol).unwrap();
        let c = r.classification.unwrap();
        assert!(c.dual_frames && c.biorthogonal && c.riesz_dual);
        assert!(!c.onb);
        assert_eq!(r.tight, Some(4.0));
    }
}
