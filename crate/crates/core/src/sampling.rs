//! Sampling in `U`-invariant subspaces `A_a = span{U(n,h)a}` of a finite
//! dimensional state space `ℂ^D`.
//!
//! For `x = Σ_g α(g) U(g)a` the samples are the output of an analysis filter
//! bank on `α`: `L_k x(m) = ↓_H(α ∗ h_k)(m)`. A perfect-reconstruction
//! synthesis bank `g_k` then yields `x = Σ_k Σ_n L_k x(n) U(n, 1_H) c_k` with
//! `c_k = Σ_g g_k(g) U(g)a`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GElem, GroupSpec};
use crate::linalg::{hermitian_eigen, max_abs, CMat, CVec};
use crate::polyphase::{
    analysis_matrix, bounds, dual_family_field, pr_verdict, pseudo_inverse_field,
    synthesis_filters, Bounds, PolyphaseField, PrVerdict, Tolerances,
};
use crate::signal::{GSignal, NSignal};
use crate::C64;

const UNITARY_TOL: f64 = 1e-10;

/// A unitary representation `g ↦ U(g)` of `G` on `ℂ^D`.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    group: Arc<GroupSpec>,
    dim: usize,
    matrices: Vec<CMat>,
    permutations: Option<Vec<Vec<usize>>>,
}

impl UnitaryRep {
    /// Dense matrices indexed like `G`-signals (`n`-major, `h`-minor).
    /// Unitarity and `U(g1)U(g2) = U(g1 g2)` are checked exhaustively.
    pub fn new(group: Arc<GroupSpec>, matrices: Vec<CMat>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidRepresentation(format!(
                "{} matrices given, |G| = {}",
                matrices.len(),
                group.order()
            )));
        }
        let dim = matrices[0].nrows();
        if matrices.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::InvalidRepresentation(
                "matrices must be square of a common size".into(),
            ));
        }
        let eye = CMat::identity(dim, dim);
        for (i, m) in matrices.iter().enumerate() {
            let dev = max_abs(&(m.adjoint() * m - &eye));
            if dev > UNITARY_TOL {
                return Err(Error::InvalidRepresentation(format!(
                    "U({:?}) is not unitary (deviation {dev:.3e})",
                    group.elem(i)
                )));
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let lhs = &matrices[group.index(a)] * &matrices[group.index(b)];
                let rhs = &matrices[group.index(group.mul(a, b))];
                let dev = max_abs(&(lhs - rhs));
                if dev > UNITARY_TOL {
                    return Err(Error::InvalidRepresentation(format!(
                        "U({a:?})U({b:?}) != U({a:?}·{b:?}) (deviation {dev:.3e})"
                    )));
                }
            }
        }
        Ok(Self {
            group,
            dim,
            matrices,
            permutations: None,
        })
    }

    /// `U(g) e_s = e_{perm_g[s]}`; the representation property is checked on
    /// the permutations themselves.
    pub fn from_permutations(group: Arc<GroupSpec>, perms: Vec<Vec<usize>>) -> Result<Self> {
        if perms.len() != group.order() {
            return Err(Error::InvalidRepresentation(format!(
                "{} permutations given, |G| = {}",
                perms.len(),
                group.order()
            )));
        }
        let dim = perms[0].len();
        for (i, p) in perms.iter().enumerate() {
            let mut seen = vec![false; dim];
            if p.len() != dim || p.iter().any(|&s| s >= dim || std::mem::replace(&mut seen[s], true)) {
                return Err(Error::InvalidRepresentation(format!(
                    "U({:?}) is not a permutation of {dim} points",
                    group.elem(i)
                )));
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let (pa, pb) = (&perms[group.index(a)], &perms[group.index(b)]);
                let pab = &perms[group.index(group.mul(a, b))];
                if (0..dim).any(|s| pa[pb[s]] != pab[s]) {
                    return Err(Error::InvalidRepresentation(format!(
                        "U({a:?})U({b:?}) != U({a:?}·{b:?})"
                    )));
                }
            }
        }
        let matrices = perms
            .iter()
            .map(|p| {
                let mut m = CMat::zeros(dim, dim);
                for (s, &t) in p.iter().enumerate() {
                    m[(t, s)] = C64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        Ok(Self {
            group,
            dim,
            matrices,
            permutations: Some(perms),
        })
    }

    /// Left regular representation on `ℓ²(G) ≅ ℂ^{|G|}`: `U(g) e_x = e_{gx}`.
    pub fn regular(group: Arc<GroupSpec>) -> Result<Self> {
        let perms = group
            .elements()
            .map(|g| group.elements().map(|x| group.index(group.mul(g, x))).collect())
            .collect();
        Self::from_permutations(group, perms)
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: GElem) -> &CMat {
        &self.matrices[self.group.index(g)]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.permutations.as_deref()
    }

    pub fn apply(&self, g: GElem, v: &CVec) -> CVec {
        match &self.permutations {
            Some(perms) => {
                let p = &perms[self.group.index(g)];
                let mut out = CVec::zeros(self.dim);
                for (s, &t) in p.iter().enumerate() {
                    out[t] = v[s];
                }
                out
            }
            None => self.matrix(g) * v,
        }
    }

    /// `U(m, 1_H)`.
    pub fn translation(&self, m: usize, v: &CVec) -> CVec {
        self.apply(GElem::new(m, self.group.h().identity()), v)
    }
}

/// How the samples are taken.
#[derive(Clone, Debug, PartialEq)]
pub enum Probes {
    /// `L_k x(m) = ⟨x, U(m, 1_H) b_k⟩`.
    Average(Vec<CVec>),
    /// `L_k x(m) = [U(−m, 1_H) x](t_k)`, `t_k` a state coordinate.
    Pointwise(Vec<usize>),
}

impl Probes {
    pub fn len(&self) -> usize {
        match self {
            Probes::Average(b) => b.len(),
            Probes::Pointwise(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> &'static str {
        match self {
            Probes::Average(_) => "average",
            Probes::Pointwise(_) => "pointwise",
        }
    }
}

/// Extreme eigenvalues of a Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GramBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

#[derive(Clone, Debug)]
pub struct SamplingProblem {
    rep: Arc<UnitaryRep>,
    generator: CVec,
    probes: Probes,
    /// Columns `U(g)a`, ordered like `G`-signals.
    orbit: CMat,
    riesz: GramBounds,
    filters: Vec<GSignal>,
}

impl SamplingProblem {
    pub fn new(rep: Arc<UnitaryRep>, generator: CVec, probes: Probes, tol: &Tolerances) -> Result<Self> {
        let dim = rep.dim();
        if generator.len() != dim {
            return Err(Error::DimensionMismatch {
                what: "generator length",
                expected: dim,
                found: generator.len(),
            });
        }
        if probes.is_empty() {
            return Err(Error::NoFilters);
        }
        match &probes {
            Probes::Average(bs) => {
                if let Some(b) = bs.iter().find(|b| b.len() != dim) {
                    return Err(Error::DimensionMismatch {
                        what: "probe vector length",
                        expected: dim,
                        found: b.len(),
                    });
                }
            }
            Probes::Pointwise(ts) => {
                if let Some(&t) = ts.iter().find(|&&t| t >= dim) {
                    return Err(Error::InvalidInput(format!(
                        "sample point {t} outside the state space of dimension {dim}"
                    )));
                }
            }
        }

        let group = Arc::clone(rep.group());
        let columns: Vec<CVec> = group.elements().map(|g| rep.apply(g, &generator)).collect();
        let orbit = CMat::from_columns(&columns);
        let gram_vals = hermitian_eigen(&(orbit.adjoint() * &orbit)).0;
        let riesz = GramBounds {
            lambda_min: gram_vals[0],
            lambda_max: gram_vals[gram_vals.len() - 1],
        };
        if !(riesz.lambda_max > 0.0 && riesz.lambda_min > tol.frame * riesz.lambda_max) {
            return Err(Error::DegenerateGenerator {
                lambda_min: riesz.lambda_min,
                lambda_max: riesz.lambda_max,
            });
        }

        let filters = match &probes {
            // h_k(g) = ⟨a, U(g) b_k⟩
            Probes::Average(bs) => bs
                .iter()
                .map(|b| {
                    GSignal::from_fn(&group, |g| {
                        let ub = rep.apply(g, b);
                        generator.dotc(&ub).conj()
                    })
                })
                .collect(),
            // h_k(g) = [U(g⁻¹) a](t_k)
            Probes::Pointwise(ts) => ts
                .iter()
                .map(|&t| GSignal::from_fn(&group, |g| columns[group.index(group.inv(g))][t]))
                .collect(),
        };

        Ok(Self {
            rep,
            generator,
            probes,
            orbit,
            riesz,
            filters,
        })
    }

    /// `b_k = U(0, h_k) b` for every `h_k ∈ H`, so `K = L`.
    pub fn with_fixed_probe(
        rep: Arc<UnitaryRep>,
        generator: CVec,
        probe: &CVec,
        tol: &Tolerances,
    ) -> Result<Self> {
        let probes = (0..rep.group().order_h())
            .map(|h| rep.apply(GElem::new(0, h), probe))
            .collect();
        Self::new(rep, generator, Probes::Average(probes), tol)
    }

    pub fn rep(&self) -> &Arc<UnitaryRep> {
        &self.rep
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        self.rep.group()
    }

    pub fn generator(&self) -> &CVec {
        &self.generator
    }

    pub fn probes(&self) -> &Probes {
        &self.probes
    }

    pub fn channels(&self) -> usize {
        self.probes.len()
    }

    /// Gram bounds of the orbit `{U(g)a}` (its Riesz bounds).
    pub fn riesz_bounds(&self) -> GramBounds {
        self.riesz
    }

    /// Analysis filters with `L_k x(m) = ↓_H(α ∗ h_k)(m)`.
    pub fn filters(&self) -> &[GSignal] {
        &self.filters
    }

    /// Generators `f_k = h̃_k` with `L_k x(n) = ⟨α, T_n f_k⟩`. In pointwise
    /// mode `f_k(g) = conj([U(g)a](t_k))`.
    pub fn translate_generators(&self) -> Vec<GSignal> {
        self.filters.iter().map(GSignal::involution).collect()
    }

    /// `T_{U,a} α = Σ_g α(g) U(g) a`.
    pub fn synthesize(&self, alpha: &GSignal) -> Result<CVec> {
        if !Arc::ptr_eq(alpha.group(), self.group()) && **alpha.group() != **self.group() {
            return Err(Error::GroupMismatch);
        }
        Ok(&self.orbit * CVec::from_column_slice(alpha.values()))
    }

    /// `‖T_{U,a}(T_m f) − U(m, 1_H) T_{U,a} f‖`.
    pub fn shifting_deviation(&self, f: &GSignal, m: usize) -> Result<f64> {
        let lhs = self.synthesize(&f.translate(m))?;
        let rhs = self.rep.translation(m, &self.synthesize(f)?);
        Ok((lhs - rhs).norm())
    }

    /// `K` sample sequences indexed by `N`.
    pub fn samples(&self, x: &CVec) -> Result<Vec<NSignal>> {
        if x.len() != self.rep.dim() {
            return Err(Error::DimensionMismatch {
                what: "state vector length",
                expected: self.rep.dim(),
                found: x.len(),
            });
        }
        let group = self.group();
        let nn = group.n();
        let values: Vec<Vec<C64>> = match &self.probes {
            Probes::Average(bs) => bs
                .iter()
                .map(|b| {
                    nn.elements()
                        .map(|m| self.rep.translation(m, b).dotc(x))
                        .collect()
                })
                .collect(),
            Probes::Pointwise(ts) => {
                let shifted: Vec<CVec> = nn
                    .elements()
                    .map(|m| self.rep.translation(nn.neg(m), x))
                    .collect();
                ts.iter()
                    .map(|&t| shifted.iter().map(|v| v[t]).collect())
                    .collect()
            }
        };
        values
            .into_iter()
            .map(|v| NSignal::new(nn.clone(), v))
            .collect()
    }

    /// Builds the reconstruction from the pseudo-inverse dual, or from the
    /// dual family member selected by `free` (an `L × K` field).
    pub fn build_reconstruction(
        &self,
        free: Option<&PolyphaseField>,
        tol: &Tolerances,
    ) -> Result<ReconstructionKit> {
        let h = analysis_matrix(&self.filters)?;
        let bounds = bounds(&h);
        let g_field = match free {
            Some(u) => dual_family_field(&h, u, tol)?,
            None => pseudo_inverse_field(&h, tol)?,
        };
        let synthesis = synthesis_filters(&g_field)?;
        let pr = pr_verdict(&g_field.mul(&h)?, tol);
        let vectors = synthesis
            .iter()
            .map(|g| self.synthesize(g))
            .collect::<Result<Vec<_>>>()?;
        let frame = self.system_frame_bounds(&vectors);
        Ok(ReconstructionKit {
            synthesis,
            vectors,
            bounds,
            frame,
            pr,
        })
    }

    /// Frame bounds of `{U(n, 1_H) c_k}` as a frame for `A_a`, computed on
    /// the orthonormal basis `orbit · V Λ^{-1/2}` of `A_a`.
    fn system_frame_bounds(&self, vectors: &[CVec]) -> GramBounds {
        let nn = self.group().n();
        let (vals, vecs) = hermitian_eigen(&(self.orbit.adjoint() * &self.orbit));
        let inv_sqrt = CVec::from_iterator(vals.len(), vals.iter().map(|&v| C64::new(v.sqrt().recip(), 0.0)));
        let basis = &self.orbit * vecs * CMat::from_diagonal(&inv_sqrt);
        let mut coeffs = Vec::with_capacity(vectors.len() * nn.order());
        for c in vectors {
            for n in nn.elements() {
                coeffs.push(basis.adjoint() * self.rep.translation(n, c));
            }
        }
        let system = CMat::from_columns(&coeffs);
        let s = hermitian_eigen(&(&system * system.adjoint())).0;
        GramBounds {
            lambda_min: s[0],
            lambda_max: s[s.len() - 1],
        }
    }

    /// `Σ_k Σ_n L_k x(n) U(n, 1_H) c_k`.
    pub fn reconstruct(&self, samples: &[NSignal], kit: &ReconstructionKit) -> Result<CVec> {
        if samples.len() != kit.vectors.len() {
            return Err(Error::DimensionMismatch {
                what: "number of sample channels",
                expected: kit.vectors.len(),
                found: samples.len(),
            });
        }
        let mut x = CVec::zeros(self.rep.dim());
        for (s, c) in samples.iter().zip(&kit.vectors) {
            for (n, &v) in s.values().iter().enumerate() {
                if v != C64::new(0.0, 0.0) {
                    x += self.rep.translation(n, c) * v;
                }
            }
        }
        Ok(x)
    }

    /// `max |L_k c_{k'}(n) − δ_{k,k'} δ_{n,0}|`.
    pub fn interpolation_deviation(&self, kit: &ReconstructionKit) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (kp, c) in kit.vectors.iter().enumerate() {
            for (k, s) in self.samples(c)?.iter().enumerate() {
                for (n, &v) in s.values().iter().enumerate() {
                    let target = if k == kp && n == 0 { 1.0 } else { 0.0 };
                    worst = worst.max((v - C64::new(target, 0.0)).norm());
                }
            }
        }
        Ok(worst)
    }
}

/// Synthesis filters `g_k`, reconstruction vectors `c_k = T_{U,a} g_k` and
/// the bounds describing the resulting sampling formula.
#[derive(Clone, Debug)]
pub struct ReconstructionKit {
    pub synthesis: Vec<GSignal>,
    pub vectors: Vec<CVec>,
    /// `A_H`, `B_H` of the analysis polyphase matrix.
    pub bounds: Bounds,
    /// Frame bounds of `{U(n, 1_H) c_k}` in `A_a`.
    pub frame: GramBounds,
    pub pr: PrVerdict,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyphase::{analysis_matrix, verify_pr};
    use crate::signal::random_values;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d8() -> Arc<GroupSpec> {
        Arc::new(GroupSpec::dihedral(4).unwrap())
    }

    fn random_vec(dim: usize, rng: &mut ChaCha8Rng) -> CVec {
        CVec::from_vec(random_values(dim, rng))
    }

    /// Regular representation of D_8 with `a = e_identity`: the orbit is the
    /// standard basis, so `A_a = ℂ^8`.
    fn regular_problem(probes: Probes) -> SamplingProblem {
        let g = d8();
        let rep = Arc::new(UnitaryRep::regular(Arc::clone(&g)).unwrap());
        let mut a = CVec::zeros(8);
        a[g.index(g.identity())] = C64::new(1.0, 0.0);
        SamplingProblem::new(rep, a, probes, &Tolerances::default()).unwrap()
    }

    #[test]
    fn regular_representation_is_valid() {
        let g = d8();
        let rep = UnitaryRep::regular(Arc::clone(&g)).unwrap();
        // the dense path must agree with the permutation path
        let dense = UnitaryRep::new(g, rep.matrices().to_vec()).unwrap();
        assert_eq!(dense.dim(), 8);
    }

    #[test]
    fn non_unitary_and_non_homomorphic_reps_are_rejected() {
        let g = d8();
        let mut mats = UnitaryRep::regular(Arc::clone(&g)).unwrap().matrices().to_vec();
        mats[3] *= C64::new(2.0, 0.0);
        assert!(UnitaryRep::new(Arc::clone(&g), mats).is_err());
        let mats = vec![CMat::identity(2, 2); 7];
        assert!(UnitaryRep::new(Arc::clone(&g), mats).is_err());
        let mut perms: Vec<Vec<usize>> = (0..8).map(|_| (0..8).collect()).collect();
        perms[1] = vec![1, 0, 2, 3, 4, 5, 6, 7];
        assert!(UnitaryRep::from_permutations(g, perms).is_err());
    }

    #[test]
    fn synthesis_of_deltas_gives_orbit_vectors() {
        let p = regular_problem(Probes::Pointwise(vec![0, 1]));
        let g = p.group().clone();
        let e = GSignal::delta(&g, g.identity());
        assert_eq!(p.synthesize(&e).unwrap(), *p.generator());
        for x in g.elements() {
            let v = p.synthesize(&GSignal::delta(&g, x)).unwrap();
            assert_eq!(v, p.rep().apply(x, p.generator()));
        }
    }

    #[test]
    fn degenerate_generator_is_rejected() {
        let g = d8();
        let rep = Arc::new(UnitaryRep::regular(g).unwrap());
        // constant vector is fixed by every permutation
        let a = CVec::from_element(8, C64::new(1.0, 0.0));
        let err = SamplingProblem::new(rep, a, Probes::Pointwise(vec![0]), &Tolerances::default());
        assert!(matches!(err, Err(Error::DegenerateGenerator { .. })));
    }

    #[test]
    fn zero_state_has_zero_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = regular_problem(Probes::Average(vec![random_vec(8, &mut rng)]));
        for s in p.samples(&CVec::zeros(8)).unwrap() {
            assert!(s.values().iter().all(|v| v.norm() == 0.0));
        }
    }

    #[test]
    fn sample_of_own_probe_is_its_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = random_vec(8, &mut rng);
        let p = regular_problem(Probes::Average(vec![b.clone()]));
        let m0 = 3;
        let x = p.rep().translation(m0, &b);
        let s = p.samples(&x).unwrap();
        assert!((s[0].values()[m0] - C64::new(b.norm_squared(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn samples_are_filter_bank_outputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for probes in [
            Probes::Average(vec![random_vec(8, &mut rng), random_vec(8, &mut rng)]),
            Probes::Pointwise(vec![2, 5, 7]),
        ] {
            let p = regular_problem(probes);
            let g = p.group().clone();
            let alpha = GSignal::random(&g, &mut rng);
            let x = p.synthesize(&alpha).unwrap();
            let s = p.samples(&x).unwrap();
            for (sk, hk) in s.iter().zip(p.filters()) {
                let c = alpha.convolve(hk).unwrap().decimate();
                for (u, v) in sk.values().iter().zip(c.values()) {
                    assert!((u - v).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pointwise_generators_are_conjugated_orbit_values() {
        let p = regular_problem(Probes::Pointwise(vec![1, 6]));
        let g = p.group().clone();
        for (f, &t) in p.translate_generators().iter().zip(&[1usize, 6]) {
            for x in g.elements() {
                let want = p.rep().apply(x, p.generator())[t].conj();
                assert!((f.at(x) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pointwise_equals_average_with_coordinate_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts = vec![0, 3];
        let p = regular_problem(Probes::Pointwise(pts.clone()));
        let e = |t: usize| {
            let mut v = CVec::zeros(8);
            v[t] = C64::new(1.0, 0.0);
            v
        };
        let q = regular_problem(Probes::Average(pts.iter().map(|&t| e(t)).collect()));
        let x = random_vec(8, &mut rng);
        for (a, b) in p.samples(&x).unwrap().iter().zip(q.samples(&x).unwrap()) {
            for (u, v) in a.values().iter().zip(b.values()) {
                assert!((u - v).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn shifting_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = regular_problem(Probes::Pointwise(vec![0]));
        let g = p.group().clone();
        assert_eq!(
            p.shifting_deviation(&GSignal::delta(&g, GElem::new(1, 1)), 2).unwrap(),
            0.0
        );
        let f = GSignal::random(&g, &mut rng);
        assert!(p.shifting_deviation(&f, 0).unwrap() < 1e-15);
        for m in 0..4 {
            assert!(p.shifting_deviation(&f, m).unwrap() < 1e-10);
        }
    }

    #[test]
    fn delta_like_problem_reconstructs_exactly() {
        // Regular rep, a = e_1, pointwise at the coordinates of (0, h): h_k are delta filters.
        let p = regular_problem(Probes::Pointwise(vec![0, 1]));
        let tol = Tolerances::default();
        let h = analysis_matrix(p.filters()).unwrap();
        assert!(crate::polyphase::field_max_abs(&h) > 0.0);
        let kit = p.build_reconstruction(None, &tol).unwrap();
        assert!(kit.pr.pr);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = random_vec(8, &mut rng);
        let xr = p.reconstruct(&p.samples(&x).unwrap(), &kit).unwrap();
        assert!((xr - &x).norm() < 1e-12 * x.norm());
        assert!(p.interpolation_deviation(&kit).unwrap() < 1e-12);
    }

    #[test]
    fn redundant_reconstruction_and_frame_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bs = (0..3).map(|_| random_vec(8, &mut rng)).collect();
        let p = regular_problem(Probes::Average(bs));
        let tol = Tolerances::default();
        let kit = p.build_reconstruction(None, &tol).unwrap();
        assert!(verify_pr(p.filters(), &kit.synthesis, &tol).unwrap().pr);
        assert!(kit.frame.lambda_min > 0.0 && kit.frame.lambda_max.is_finite());
        for _ in 0..10 {
            let alpha = GSignal::random(p.group(), &mut rng);
            let x = p.synthesize(&alpha).unwrap();
            let xr = p.reconstruct(&p.samples(&x).unwrap(), &kit).unwrap();
            assert!((xr - &x).norm() <= 1e-9 * x.norm());
        }
    }

    #[test]
    fn fixed_probe_expands_to_one_channel_per_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = d8();
        let rep = Arc::new(UnitaryRep::regular(Arc::clone(&g)).unwrap());
        let a = random_vec(8, &mut rng);
        let b = random_vec(8, &mut rng);
        let tol = Tolerances::default();
        let fixed = SamplingProblem::with_fixed_probe(Arc::clone(&rep), a.clone(), &b, &tol).unwrap();
        assert_eq!(fixed.channels(), 2);
        let explicit = SamplingProblem::new(
            rep.clone(),
            a,
            Probes::Average(vec![b.clone(), rep.apply(GElem::new(0, 1), &b)]),
            &tol,
        )
        .unwrap();
        for (x, y) in fixed.filters().iter().zip(explicit.filters()) {
            assert!(x.max_abs_diff(y).unwrap() < 1e-14);
        }
    }

    #[test]
    fn insufficient_probes_are_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = regular_problem(Probes::Average(vec![random_vec(8, &mut rng)]));
        let err = p.build_reconstruction(None, &Tolerances::default()).unwrap_err();
        assert!(err.is_rejection(), "{err}");
    }
}
