//! Finite models of crystallographic groups `C_{M,Γ} = M·Z^d ⋊ Γ` acting on
//! the periodic grid `Z_q^d`, their quasi-regular representations and the
//! sampling demos built on them.
//!
//! The translation part is `N = M·Z^d / q·Z^d`. Writing lattice points as
//! `M k`, `N ≅ Z^d / B Z^d` with `B = q M⁻¹`, which a Smith form `U B V = diag`
//! splits into cyclic factors. Grid points are indexed row-major with the
//! last coordinate fastest.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Automorphism, FiniteGroup, GElem, GroupSpec};
use crate::linalg::CVec;
use crate::polyphase::{Bounds, PolyphaseField, PrVerdict, Tolerances};
use crate::sampling::{GramBounds, Probes, SamplingProblem, UnitaryRep};
use crate::signal::GSignal;
use crate::C64;

type IMat = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalSpec {
    pub d: usize,
    pub q: usize,
    #[serde(rename = "M")]
    pub m: IMat,
    /// The point group Γ as integer matrices; must contain the identity.
    pub gamma: Vec<IMat>,
    /// Generator values on the grid as `[re, im]` pairs; a seeded bump if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<C64>>,
    /// Average-mode probe functions on the grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<Vec<Vec<C64>>>,
    /// Pointwise-mode sample points as grid coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<i64>>>,
    /// Grid points per unit length: functions live on `(Z/r)^d / qZ^d`,
    /// stored as `Z_{rq}^d`.
    #[serde(default = "default_refine")]
    pub refine: usize,
}

fn default_refine() -> usize {
    2
}

impl CrystalSpec {
    /// `D_∞ = 2Z ⋊ {±1}` on `Z_q`.
    pub fn dihedral(q: usize) -> Self {
        Self {
            d: 1,
            q,
            m: vec![vec![2]],
            gamma: vec![vec![vec![1]], vec![vec![-1]]],
            generator: None,
            probes: None,
            points: None,
            refine: default_refine(),
        }
    }

    /// `2Z² ⋊ C_4` (quarter turns) on `Z_q²`.
    pub fn square_rotations(q: usize) -> Self {
        let r = vec![vec![0, -1], vec![1, 0]];
        let r2 = mat_mul(&r, &r);
        let r3 = mat_mul(&r2, &r);
        Self {
            d: 2,
            q,
            m: vec![vec![2, 0], vec![0, 2]],
            gamma: vec![identity(2), r, r2, r3],
            generator: None,
            probes: None,
            points: None,
            refine: default_refine(),
        }
    }
}

fn identity(d: usize) -> IMat {
    (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    (0..r)
        .map(|i| (0..c).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn minor(a: &IMat, r: usize, c: usize) -> IMat {
    a.iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != c)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

fn det(a: &IMat) -> i64 {
    match a.len() {
        0 => 1,
        1 => a[0][0],
        n => (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * a[0][j] * det(&minor(a, 0, j))
            })
            .sum(),
    }
}

fn adjugate(a: &IMat) -> IMat {
    let n = a.len();
    if n == 1 {
        return vec![vec![1]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * det(&minor(a, j, i))
                })
                .collect()
        })
        .collect()
}

/// `a / s` if every entry is divisible by `s`.
fn exact_div(a: &IMat, s: i64) -> Option<IMat> {
    a.iter()
        .map(|row| {
            row.iter()
                .map(|&v| (v % s == 0).then_some(v / s))
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

/// Row transform of a Smith normal form: `U B V = diag(d)` with `U`, `V`
/// unimodular. Returns `(d, U, U⁻¹)`.
fn smith_rows(b: &IMat) -> (Vec<i64>, IMat, IMat) {
    let n = b.len();
    let mut a = b.clone();
    let mut u = identity(n);
    let mut uinv = identity(n);

    // row_i += k·row_j on a and u; the inverse gets col_j −= k·col_i.
    let add_row = |a: &mut IMat, u: &mut IMat, uinv: &mut IMat, i: usize, j: usize, k: i64| {
        for c in 0..n {
            a[i][c] += k * a[j][c];
            u[i][c] += k * u[j][c];
        }
        for row in uinv.iter_mut() {
            row[j] -= k * row[i];
        }
    };
    let swap_rows = |a: &mut IMat, u: &mut IMat, uinv: &mut IMat, i: usize, j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in uinv.iter_mut() {
            row.swap(i, j);
        }
    };

    for t in 0..n {
        loop {
            let pivot = (t..n)
                .flat_map(|r| (t..n).map(move |c| (r, c)))
                .filter(|&(r, c)| a[r][c] != 0)
                .min_by_key(|&(r, c)| a[r][c].abs());
            let Some((pr, pc)) = pivot else { break };
            swap_rows(&mut a, &mut u, &mut uinv, t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
            let mut clean = true;
            for r in t + 1..n {
                let k = a[r][t].div_euclid(a[t][t]);
                add_row(&mut a, &mut u, &mut uinv, r, t, -k);
                clean &= a[r][t] == 0;
            }
            for c in t + 1..n {
                let k = a[t][c].div_euclid(a[t][t]);
                for row in a.iter_mut() {
                    row[c] -= k * row[t];
                }
                clean &= a[t][c] == 0;
            }
            if clean {
                break;
            }
        }
        if a[t][t] < 0 {
            for c in 0..n {
                a[t][c] = -a[t][c];
                u[t][c] = -u[t][c];
            }
            for row in uinv.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), u, uinv)
}

/// A validated crystal model: `G = N ⋊ Γ` with `N = M·Z^d / q·Z^d`, and the
/// quasi-regular representation `U(n, A) e_s = e_{A s + r n}` on `ℓ²(Z_{rq}^d)`,
/// `r` the grid refinement.
#[derive(Clone, Debug)]
pub struct CrystalModel {
    spec: CrystalSpec,
    group: Arc<GroupSpec>,
    rep: Arc<UnitaryRep>,
    /// Grid point of each element of `N`.
    lattice: Vec<Vec<i64>>,
}

impl CrystalModel {
    pub fn new(spec: CrystalSpec) -> Result<Self> {
        let (d, q) = (spec.d, spec.q);
        let bad = |msg: String| Err(Error::IncompatibleCrystal(msg));
        if d == 0 || q == 0 {
            return bad("d and q must be positive".into());
        }
        let square = |a: &IMat| a.len() == d && a.iter().all(|r| r.len() == d);
        if !square(&spec.m) {
            return bad(format!("M must be {d}x{d}"));
        }
        if spec.gamma.is_empty() || !spec.gamma.iter().all(square) {
            return bad(format!("gamma must be a non-empty list of {d}x{d} matrices"));
        }
        let r = spec.refine;
        if r == 0 {
            return bad("refine must be positive".into());
        }
        let dim = (q * r)
            .checked_pow(d as u32)
            .filter(|&v| v <= 1 << 16)
            .ok_or_else(|| Error::IncompatibleCrystal(format!("grid Z_{}^{d} is too large", q * r)))?;

        let det_m = det(&spec.m);
        if det_m == 0 {
            return bad("M is singular".into());
        }
        let adj_m = adjugate(&spec.m);
        let qi = q as i64;
        let scaled: IMat = adj_m.iter().map(|r| r.iter().map(|v| v * qi).collect()).collect();
        let Some(b) = exact_div(&scaled, det_m) else {
            return bad(format!("q·M⁻¹ is not integral, so q·Z^{d} ⊄ M·Z^{d} (q = {q}, det M = {det_m})"));
        };

        let gl = spec.gamma.len();
        for (i, a) in spec.gamma.iter().enumerate() {
            if det(a).abs() != 1 {
                return bad(format!("gamma[{i}] = {a:?} has |det| != 1"));
            }
            if exact_div(&mat_mul(&mat_mul(&adj_m, a), &spec.m), det_m).is_none() {
                return bad(format!("gamma[{i}] = {a:?} does not preserve M·Z^{d}"));
            }
        }
        let find = |m: &IMat| spec.gamma.iter().position(|a| a == m);
        if find(&identity(d)).is_none() {
            return bad("gamma does not contain the identity".into());
        }
        let mut table = vec![vec![0; gl]; gl];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let p = mat_mul(&spec.gamma[i], &spec.gamma[j]);
                *cell = find(&p).ok_or_else(|| {
                    Error::IncompatibleCrystal(format!(
                        "gamma is not closed: gamma[{i}]·gamma[{j}] = {p:?}"
                    ))
                })?;
            }
        }
        let h = FiniteGroup::from_table(table)?;

        let (diag, _, uinv) = smith_rows(&b);
        let factors: Vec<usize> = (0..d).filter(|&i| diag[i] > 1).collect();
        let n = AbelianGroup::new(factors.iter().map(|&i| diag[i] as usize).collect())?;
        let lattice: Vec<Vec<i64>> = n
            .elements()
            .map(|e| {
                let mut c = vec![0i64; d];
                for (&i, &v) in factors.iter().zip(&n.coords(e)) {
                    c[i] = v as i64;
                }
                let k = mat_vec(&uinv, &c);
                mat_vec(&spec.m, &k).into_iter().map(|v| v.rem_euclid(qi)).collect()
            })
            .collect();

        let grid = Grid { d, q };
        let mut n_of_site = vec![usize::MAX; dim];
        for (e, p) in lattice.iter().enumerate() {
            let s = grid.index(p);
            if n_of_site[s] != usize::MAX {
                return bad(format!("lattice residue {p:?} is reached twice"));
            }
            n_of_site[s] = e;
        }

        let mut action = Vec::with_capacity(gl);
        for (i, a) in spec.gamma.iter().enumerate() {
            let mut map = Vec::with_capacity(n.order());
            for p in &lattice {
                let ap = grid.wrap(&mat_vec(a, p));
                match n_of_site[grid.index(&ap)] {
                    usize::MAX => {
                        return bad(format!(
                            "gamma[{i}] maps the lattice coset {p:?} + q·Z^{d} to {ap:?}, outside M·Z^{d} mod {q}"
                        ))
                    }
                    e => map.push(e),
                }
            }
            action.push(Automorphism::from_permutation(&n, map)?);
        }
        let group = Arc::new(GroupSpec::new(n, h, action)?);

        let fine = Grid { d, q: q * r };
        let site_maps: Vec<Vec<usize>> = spec
            .gamma
            .iter()
            .map(|a| {
                (0..dim)
                    .map(|s| fine.index(&fine.wrap(&mat_vec(a, &fine.point(s)))))
                    .collect()
            })
            .collect();
        let perms = group
            .elements()
            .map(|g| {
                let shift = &lattice[g.n];
                site_maps[g.h]
                    .iter()
                    .map(|&s| {
                        let p: Vec<i64> = fine
                            .point(s)
                            .iter()
                            .zip(shift)
                            .map(|(x, y)| x + r as i64 * y)
                            .collect();
                        fine.index(&fine.wrap(&p))
                    })
                    .collect()
            })
            .collect();
        let rep = Arc::new(UnitaryRep::from_permutations(Arc::clone(&group), perms)?);

        Ok(Self {
            spec,
            group,
            rep,
            lattice,
        })
    }

    pub fn spec(&self) -> &CrystalSpec {
        &self.spec
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn rep(&self) -> &Arc<UnitaryRep> {
        &self.rep
    }

    /// Point of `Z_q^d` of each element of `N`, in lattice units.
    pub fn lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    pub fn refine(&self) -> usize {
        self.spec.refine
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    fn grid(&self) -> Grid {
        Grid {
            d: self.spec.d,
            q: self.spec.q * self.spec.refine,
        }
    }

    pub fn site_index(&self, point: &[i64]) -> Result<usize> {
        if point.len() != self.spec.d {
            return Err(Error::DimensionMismatch {
                what: "grid point dimension",
                expected: self.spec.d,
                found: point.len(),
            });
        }
        let g = self.grid();
        Ok(g.index(&g.wrap(point)))
    }

    pub fn site_point(&self, index: usize) -> Vec<i64> {
        self.grid().point(index)
    }

    /// Periodic tensor cubic B-spline centred off-grid (so no element of Γ
    /// fixes it) plus a small seeded perturbation.
    pub fn default_generator(&self, seed: u64) -> CVec {
        let q = self.spec.q as f64;
        let r = self.spec.refine as f64;
        let width = (q / 8.0).max(1.0);
        let centre: Vec<f64> = (0..self.spec.d).map(|i| q / 4.0 + 0.3 + 0.17 * i as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CVec::from_iterator(
            self.dim(),
            (0..self.dim()).map(|s| {
                let bump: f64 = self
                    .site_point(s)
                    .iter()
                    .zip(&centre)
                    .map(|(&t, &c)| {
                        let x = (t as f64 / r - c + q / 2.0).rem_euclid(q) - q / 2.0;
                        cubic_bspline(x / width)
                    })
                    .product();
                let noise: f64 = rng.sample(StandardNormal);
                C64::new(bump + 0.05 * noise, 0.0)
            }),
        )
    }

    /// Indicator boxes of side one length unit (`r` sites) with corners at
    /// the default sample points.
    pub fn default_probes(&self, k: usize) -> Vec<CVec> {
        let r = self.spec.refine as i64;
        let side = (self.spec.q * self.spec.refine) as i64;
        self.default_points(k)
            .into_iter()
            .map(|corner| {
                let c = self.site_point(corner);
                CVec::from_iterator(
                    self.dim(),
                    (0..self.dim()).map(|s| {
                        let p = self.site_point(s);
                        let inside = p.iter().zip(&c).all(|(&t, &o)| (t - o).rem_euclid(side) < r);
                        C64::new(if inside { 1.0 } else { 0.0 }, 0.0)
                    }),
                )
            })
            .collect()
    }

    /// The sites `(1 + k, k, 0, …, 0)`; sites fixed by part of Γ give
    /// dependent rows in `H(γ)`, and these stay clear of them in 2D.
    pub fn default_points(&self, k: usize) -> Vec<usize> {
        (0..k)
            .map(|i| {
                let mut p = vec![0i64; self.spec.d];
                p[0] = 1 + i as i64;
                if self.spec.d > 1 {
                    p[1] = i as i64;
                }
                self.grid().index(&self.grid().wrap(&p))
            })
            .collect()
    }

    /// Probes `b_k` biorthogonal to the orbit, `⟨U(g)a, b_k⟩ = δ_{g,(0,h_k)}`,
    /// one per element of Γ. Their filters are deltas, so the design is a
    /// permutation and reconstruction is exact.
    pub fn dual_basis_probes(&self, generator: &CVec) -> Result<Vec<CVec>> {
        let g = &self.group;
        let cols: Vec<CVec> = g.elements().map(|x| self.rep.apply(x, generator)).collect();
        let orbit = crate::linalg::CMat::from_columns(&cols);
        let gram = orbit.adjoint() * &orbit;
        let inv = gram.try_inverse().ok_or(Error::DegenerateGenerator {
            lambda_min: 0.0,
            lambda_max: f64::NAN,
        })?;
        let dual = orbit * inv;
        Ok((0..g.order_h())
            .map(|h| dual.column(g.index(GElem::new(0, h))).into_owned())
            .collect())
    }

    /// `f(t_k + n)` read directly off the grid, `n` running over `N`.
    pub fn grid_samples(&self, f: &CVec, t: usize) -> Vec<C64> {
        let tp = self.site_point(t);
        let r = self.spec.refine as i64;
        self.lattice
            .iter()
            .map(|n| {
                let p: Vec<i64> = tp.iter().zip(n).map(|(a, b)| a + r * b).collect();
                f[self.site_index(&p).expect("dimension matches")]
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
struct Grid {
    d: usize,
    q: usize,
}

impl Grid {
    fn wrap(&self, p: &[i64]) -> Vec<i64> {
        p.iter().map(|v| v.rem_euclid(self.q as i64)).collect()
    }

    fn index(&self, p: &[i64]) -> usize {
        p.iter().fold(0, |acc, &v| acc * self.q + v as usize)
    }

    fn point(&self, mut s: usize) -> Vec<i64> {
        let mut p = vec![0i64; self.d];
        for i in (0..self.d).rev() {
            p[i] = (s % self.q) as i64;
            s /= self.q;
        }
        p
    }
}

fn cubic_bspline(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        2.0 / 3.0 - a * a + a * a * a / 2.0
    } else if a < 2.0 {
        (2.0 - a).powi(3) / 6.0
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemoMode {
    Average,
    Pointwise,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorStats {
    pub max: f64,
    pub mean: f64,
    pub per_trial: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub d: usize,
    pub q: usize,
    #[serde(rename = "M")]
    pub m: IMat,
    pub gamma: Vec<IMat>,
    pub refine: usize,
    pub moduli_n: Vec<usize>,
    pub order_n: usize,
    pub order_h: usize,
    pub order_g: usize,
    pub dim: usize,
}

/// Outcome of a sampling demo on a crystal model.
#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub mode: DemoMode,
    pub model: ModelSummary,
    pub channels: usize,
    pub trials: usize,
    pub seed: u64,
    pub riesz: GramBounds,
    pub bounds: Bounds,
    /// Frame bounds of `{U(n, 1) ψ_k}` in `A_a`.
    pub frame: GramBounds,
    pub pr: PrVerdict,
    /// Relative `ℓ²` reconstruction errors for random unit-norm coefficients.
    pub errors: ErrorStats,
    /// `max |L_k ψ_{k'}(n) − δδ|`, only for `K = L`.
    pub interpolation_deviation: Option<f64>,
    /// Pointwise mode: `max |L_k f(n) − f(t_k + n)|` over the trials.
    pub grid_sample_deviation: Option<f64>,
    pub points: Option<Vec<Vec<i64>>>,
    pub generator: Vec<C64>,
    pub analysis_filters: Vec<Vec<C64>>,
    pub synthesis_filters: Vec<Vec<C64>>,
    pub psi: Vec<Vec<C64>>,
}

impl CrystalModel {
    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            d: self.spec.d,
            q: self.spec.q,
            m: self.spec.m.clone(),
            gamma: self.spec.gamma.clone(),
            refine: self.spec.refine,
            moduli_n: self.group.n().moduli().to_vec(),
            order_n: self.group.order_n(),
            order_h: self.group.order_h(),
            order_g: self.group.order(),
            dim: self.dim(),
        }
    }

    /// Runs the sampling pipeline with the given generator and probes and
    /// measures reconstruction on `trials` random members of `A_a`.
    pub fn demo(
        &self,
        generator: CVec,
        probes: Probes,
        free: Option<&PolyphaseField>,
        trials: usize,
        seed: u64,
        tol: &Tolerances,
    ) -> Result<DemoReport> {
        let mode = match probes {
            Probes::Average(_) => DemoMode::Average,
            Probes::Pointwise(_) => DemoMode::Pointwise,
        };
        let points = match &probes {
            Probes::Pointwise(ts) => Some(ts.clone()),
            Probes::Average(_) => None,
        };
        let problem = SamplingProblem::new(Arc::clone(&self.rep), generator, probes, tol)?;
        let kit = problem.build_reconstruction(free, tol)?;

        let outcomes = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial as u64 + 1);
                let alpha = GSignal::random(&self.group, &mut rng);
                let alpha = alpha.scale(C64::new(alpha.norm().recip(), 0.0));
                let x = problem.synthesize(&alpha)?;
                let samples = problem.samples(&x)?;
                let xr = problem.reconstruct(&samples, &kit)?;
                let err = (xr - &x).norm() / x.norm();
                let grid_dev = match &points {
                    Some(ts) => ts
                        .iter()
                        .zip(&samples)
                        .flat_map(|(&t, s)| {
                            self.grid_samples(&x, t)
                                .into_iter()
                                .zip(s.values())
                                .map(|(a, b)| (a - b).norm())
                                .collect::<Vec<_>>()
                        })
                        .fold(0.0, f64::max),
                    None => 0.0,
                };
                Ok((err, grid_dev))
            })
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let per_trial: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
        let max = per_trial.iter().copied().fold(0.0, f64::max);
        let mean = if trials == 0 {
            0.0
        } else {
            per_trial.iter().sum::<f64>() / trials as f64
        };

        let interpolation_deviation = if problem.channels() == self.group.order_h() {
            Some(problem.interpolation_deviation(&kit)?)
        } else {
            None
        };

        Ok(DemoReport {
            mode,
            model: self.summary(),
            channels: problem.channels(),
            trials,
            seed,
            riesz: problem.riesz_bounds(),
            bounds: kit.bounds.clone(),
            frame: kit.frame,
            pr: kit.pr.clone(),
            errors: ErrorStats {
                max,
                mean,
                per_trial,
            },
            interpolation_deviation,
            grid_sample_deviation: points
                .as_ref()
                .map(|_| outcomes.iter().map(|o| o.1).fold(0.0, f64::max)),
            points: points.map(|ts| ts.iter().map(|&t| self.site_point(t)).collect()),
            generator: problem.generator().iter().copied().collect(),
            analysis_filters: problem.filters().iter().map(|f| f.values().to_vec()).collect(),
            synthesis_filters: kit.synthesis.iter().map(|f| f.values().to_vec()).collect(),
            psi: kit.vectors.iter().map(|c| c.iter().copied().collect()).collect(),
        })
    }

    /// Average-mode demo with the spec's probes, or `k` default windows.
    pub fn demo_average(&self, k: Option<usize>, trials: usize, seed: u64, tol: &Tolerances) -> Result<DemoReport> {
        let generator = self.spec_generator(seed)?;
        let probes = match &self.spec.probes {
            Some(bs) => bs
                .iter()
                .map(|b| self.grid_vector(b, "probe length"))
                .collect::<Result<Vec<_>>>()?,
            None => self.default_probes(k.unwrap_or(self.group.order_h())),
        };
        self.demo(generator, Probes::Average(probes), None, trials, seed, tol)
    }

    /// Pointwise-mode demo with the spec's points, or `k` default points.
    pub fn demo_pointwise(&self, k: Option<usize>, trials: usize, seed: u64, tol: &Tolerances) -> Result<DemoReport> {
        let generator = self.spec_generator(seed)?;
        let points = match &self.spec.points {
            Some(ps) => ps
                .iter()
                .map(|p| self.site_index(p))
                .collect::<Result<Vec<_>>>()?,
            None => self.default_points(k.unwrap_or(self.group.order_h())),
        };
        self.demo(generator, Probes::Pointwise(points), None, trials, seed, tol)
    }

    pub fn spec_generator(&self, seed: u64) -> Result<CVec> {
        match &self.spec.generator {
            Some(v) => self.grid_vector(v, "generator length"),
            None => Ok(self.default_generator(seed)),
        }
    }

    fn grid_vector(&self, v: &[C64], what: &'static str) -> Result<CVec> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(CVec::from_column_slice(v))
    }
}
