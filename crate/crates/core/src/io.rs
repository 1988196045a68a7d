//! JSON documents read by the command line tool and the Python bindings.
//!
//! Complex numbers are written `[re, im]`; a bare number is read as a real
//! value. `G`-signals are flat arrays of length `|G|`, ordered `n`-major and
//! `h`-minor.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::crystal::{CrystalModel, CrystalSpec};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Automorphism, FiniteGroup, GroupSpec};
use crate::linalg::{CMat, CVec};
use crate::polyphase::{FieldKind, PolyphaseField};
use crate::sampling::{Probes, SamplingProblem, UnitaryRep};
use crate::polyphase::Tolerances;
use crate::signal::GSignal;
use crate::C64;

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
pub enum Cx {
    Real(f64),
    Pair(f64, f64),
}

impl From<Cx> for C64 {
    fn from(c: Cx) -> Self {
        match c {
            Cx::Real(re) => C64::new(re, 0.0),
            Cx::Pair(re, im) => C64::new(re, im),
        }
    }
}

fn complex_vec(v: &[Cx]) -> Vec<C64> {
    v.iter().map(|&c| c.into()).collect()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ActionJson {
    Matrix(Vec<Vec<i64>>),
    Permutation(Vec<usize>),
}

/// An explicit `N ⋊_φ H`. `H` is given by a Cayley table or as cyclic of a
/// given order; `action` maps an element of `H` (as a string key) to an
/// integer matrix or a permutation of `N`. Only the identity may be omitted.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub moduli: Vec<usize>,
    #[serde(rename = "H_table", default)]
    pub h_table: Option<Vec<Vec<usize>>>,
    #[serde(rename = "H_cyclic", default)]
    pub h_cyclic: Option<usize>,
    #[serde(default)]
    pub action: BTreeMap<String, ActionJson>,
}

impl GroupJson {
    pub fn build(&self) -> Result<GroupSpec> {
        let n = AbelianGroup::new(self.moduli.clone())?;
        let h = match (&self.h_table, self.h_cyclic) {
            (Some(t), None) => FiniteGroup::from_table(t.clone())?,
            (None, Some(l)) => FiniteGroup::cyclic(l)?,
            _ => {
                return Err(Error::InvalidInput(
                    "exactly one of \"H_table\" and \"H_cyclic\" is required".into(),
                ))
            }
        };
        let mut action: Vec<Option<Automorphism>> = vec![None; h.order()];
        for (key, a) in &self.action {
            let idx: usize = key
                .parse()
                .ok()
                .filter(|&i| i < h.order())
                .ok_or_else(|| Error::InvalidInput(format!("action key \"{key}\" is not an element of H")))?;
            let aut = match a {
                ActionJson::Matrix(m) => Automorphism::from_matrix(&n, m.clone()),
                ActionJson::Permutation(p) => Automorphism::from_permutation(&n, p.clone()),
            }
            .map_err(|e| Error::InvalidAutomorphism {
                h: idx,
                reason: e.to_string(),
            })?;
            action[idx] = Some(aut);
        }
        let action = action
            .into_iter()
            .enumerate()
            .map(|(i, a)| match a {
                Some(a) => Ok(a),
                None if i == h.identity() => Ok(Automorphism::identity(&n)),
                None => Err(Error::InvalidInput(format!("action of h = {i} is missing"))),
            })
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(n, h, action)
    }
}

/// `{"crystal": {...}}` wraps a crystal specification wherever a group is
/// expected.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrystalWrapper {
    crystal: CrystalSpec,
}

/// A group read from JSON, with the crystal model when it came from one.
#[derive(Clone, Debug)]
pub struct GroupSource {
    pub group: Arc<GroupSpec>,
    pub crystal: Option<CrystalModel>,
}

fn has_key(text: &str, key: &str) -> Result<bool> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    Ok(v.as_object().is_some_and(|o| o.contains_key(key)))
}

pub fn parse_group(text: &str) -> Result<GroupSource> {
    if has_key(text, "crystal")? {
        let spec = serde_json::from_str::<CrystalWrapper>(text)?.crystal;
        let model = CrystalModel::new(spec)?;
        Ok(GroupSource {
            group: Arc::clone(model.group()),
            crystal: Some(model),
        })
    } else {
        let g: GroupJson = serde_json::from_str(text)?;
        Ok(GroupSource {
            group: Arc::new(g.build()?),
            crystal: None,
        })
    }
}

pub fn parse_crystal(text: &str) -> Result<CrystalSpec> {
    if has_key(text, "crystal")? {
        Ok(serde_json::from_str::<CrystalWrapper>(text)?.crystal)
    } else {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiltersJson {
    #[serde(default)]
    analysis: Option<Vec<Vec<Cx>>>,
    #[serde(default)]
    synthesis: Option<Vec<Vec<Cx>>>,
    #[serde(default)]
    generators: Option<Vec<Vec<Cx>>>,
    #[serde(default)]
    dual_param: Option<Vec<Vec<Vec<Cx>>>>,
}

#[derive(Clone, Debug, Default)]
pub struct FilterSet {
    pub analysis: Option<Vec<GSignal>>,
    pub synthesis: Option<Vec<GSignal>>,
    pub generators: Option<Vec<GSignal>>,
    /// `L × K` free parameter `U(γ)` of the dual family.
    pub dual_param: Option<PolyphaseField>,
}

fn signals(group: &Arc<GroupSpec>, list: &[Vec<Cx>]) -> Result<Vec<GSignal>> {
    list.iter()
        .map(|v| GSignal::new(Arc::clone(group), complex_vec(v)))
        .collect()
}

/// Per-character matrices given as nested rows.
pub fn field_from_rows(
    group: &Arc<GroupSpec>,
    rows: usize,
    cols: usize,
    mats: &[Vec<Vec<Cx>>],
) -> Result<PolyphaseField> {
    let matrices = mats
        .iter()
        .map(|m| {
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(Error::DimensionMismatch {
                    what: "dual parameter matrix shape",
                    expected: rows * cols,
                    found: m.iter().map(Vec::len).sum(),
                });
            }
            Ok(CMat::from_row_iterator(
                rows,
                cols,
                m.iter().flatten().map(|&c| C64::from(c)),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    PolyphaseField::new(Arc::clone(group), FieldKind::Other, rows, cols, matrices)
}

pub fn parse_filters(text: &str, group: &Arc<GroupSpec>) -> Result<FilterSet> {
    let f: FiltersJson = serde_json::from_str(text)?;
    let analysis = f.analysis.as_deref().map(|l| signals(group, l)).transpose()?;
    let synthesis = f.synthesis.as_deref().map(|l| signals(group, l)).transpose()?;
    let generators = f.generators.as_deref().map(|l| signals(group, l)).transpose()?;
    let dual_param = match &f.dual_param {
        Some(m) => {
            let k = analysis
                .as_ref()
                .or(generators.as_ref())
                .map(Vec::len)
                .ok_or_else(|| Error::InvalidInput("dual_param needs analysis filters".into()))?;
            Some(field_from_rows(group, group.order_h(), k, m)?)
        }
        None => None,
    };
    Ok(FilterSet {
        analysis,
        synthesis,
        generators,
        dual_param,
    })
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum RepJson {
    QuasiRegular(CrystalSpec),
    Explicit {
        group: GroupJson,
        #[serde(default)]
        matrices: Option<Vec<Vec<Vec<Cx>>>>,
        #[serde(default)]
        permutations: Option<Vec<Vec<usize>>>,
        #[serde(default)]
        regular: bool,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum PointJson {
    Index(usize),
    Coords(Vec<i64>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum ProbesJson {
    Vectors(Vec<Vec<Cx>>),
    Points(Vec<PointJson>),
    /// One probe `b`, expanded to `b_k = U(0, h_k) b`.
    Fixed(Vec<Cx>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplingJson {
    rep: RepJson,
    #[serde(default)]
    generator: Option<Vec<Cx>>,
    probes: ProbesJson,
    #[serde(default)]
    dual_param: Option<Vec<Vec<Vec<Cx>>>>,
}

pub struct SamplingInput {
    pub problem: SamplingProblem,
    pub dual_param: Option<PolyphaseField>,
    pub crystal: Option<CrystalModel>,
}

/// Reads a sampling problem. A quasi-regular representation without an
/// explicit generator uses the crystal's seeded default generator.
pub fn parse_sampling(text: &str, seed: u64, tol: &Tolerances) -> Result<SamplingInput> {
    let s: SamplingJson = serde_json::from_str(text)?;
    let (rep, crystal) = match s.rep {
        RepJson::QuasiRegular(spec) => {
            let model = CrystalModel::new(spec)?;
            (Arc::clone(model.rep()), Some(model))
        }
        RepJson::Explicit {
            group,
            matrices,
            permutations,
            regular,
        } => {
            let group = Arc::new(group.build()?);
            let rep = match (matrices, permutations, regular) {
                (Some(ms), None, false) => {
                    let dim = ms.first().map_or(0, Vec::len);
                    let mats = ms
                        .iter()
                        .map(|m| {
                            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                                return Err(Error::InvalidRepresentation(
                                    "matrices must be square of a common size".into(),
                                ));
                            }
                            Ok(CMat::from_row_iterator(dim, dim, m.iter().flatten().map(|&c| C64::from(c))))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    UnitaryRep::new(group, mats)?
                }
                (None, Some(ps), false) => UnitaryRep::from_permutations(group, ps)?,
                (None, None, true) => UnitaryRep::regular(group)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "rep needs exactly one of \"matrices\", \"permutations\", \"regular\": true".into(),
                    ))
                }
            };
            (Arc::new(rep), None)
        }
    };

    let generator = match (&s.generator, &crystal) {
        (Some(v), _) => CVec::from_vec(complex_vec(v)),
        (None, Some(m)) => m.spec_generator(seed)?,
        (None, None) => return Err(Error::InvalidInput("\"generator\" is required".into())),
    };
    let problem = match s.probes {
        ProbesJson::Vectors(bs) => {
            let bs = bs.iter().map(|b| CVec::from_vec(complex_vec(b))).collect();
            SamplingProblem::new(rep, generator, Probes::Average(bs), tol)?
        }
        ProbesJson::Fixed(b) => {
            SamplingProblem::with_fixed_probe(rep, generator, &CVec::from_vec(complex_vec(&b)), tol)?
        }
        ProbesJson::Points(ps) => {
            let pts = ps
                .iter()
                .map(|p| match (p, &crystal) {
                    (PointJson::Index(i), _) => Ok(*i),
                    (PointJson::Coords(c), Some(m)) => m.site_index(c),
                    (PointJson::Coords(_), None) => Err(Error::InvalidInput(
                        "grid coordinates need a quasi_regular rep; use state indices".into(),
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            SamplingProblem::new(rep, generator, Probes::Pointwise(pts), tol)?
        }
    };
    let dual_param = s
        .dual_param
        .as_deref()
        .map(|m| field_from_rows(problem.group(), problem.group().order_h(), problem.channels(), m))
        .transpose()?;
    Ok(SamplingInput {
        problem,
        dual_param,
        crystal,
    })
}

/// Plain description of a group for reports.
#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub moduli: Vec<usize>,
    pub order_n: usize,
    pub order_h: usize,
    pub order_g: usize,
    #[serde(rename = "H_table")]
    pub h_table: Vec<Vec<usize>>,
    /// `φ_h` as a permutation of the linear index of `N`.
    pub action: Vec<Vec<usize>>,
}

impl GroupSummary {
    pub fn of(g: &GroupSpec) -> Self {
        Self {
            moduli: g.n().moduli().to_vec(),
            order_n: g.order_n(),
            order_h: g.order_h(),
            order_g: g.order(),
            h_table: g.h().table(),
            action: (0..g.order_h()).map(|h| g.action(h).permutation().to_vec()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D8: &str = r#"{"moduli": [4], "H_cyclic": 2, "action": {"1": [[-1]]}}"#;

    #[test]
    fn group_from_matrix_and_permutation() {
        let a = parse_group(D8).unwrap().group;
        let b = parse_group(r#"{"moduli": [4], "H_table": [[0,1],[1,0]], "action": {"1": [0,3,2,1]}}"#)
            .unwrap()
            .group;
        assert_eq!(*a, *b);
        assert_eq!(*a, GroupSpec::dihedral(4).unwrap());
    }

    #[test]
    fn malformed_groups_are_reported() {
        let e = parse_group(r#"{"moduli": [4], "H_cyclic": 2}"#).unwrap_err();
        assert!(e.to_string().contains("missing"), "{e}");
        let e = parse_group(r#"{"moduli": [5], "H_cyclic": 2, "action": {"1": [[2]]}}"#).unwrap_err();
        assert!(matches!(e, Error::InvalidGroup(_)), "{e}");
        let e = parse_group(r#"{"moduli": [4], "H_cyclic": 2, "bogus": 1}"#).unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
        let e = parse_group("{\"moduli\": [4],\n \"H_cyclic\": }").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn crystal_group() {
        let g = parse_group(r#"{"crystal": {"d": 1, "q": 8, "M": [[2]], "gamma": [[[1]], [[-1]]]}}"#).unwrap();
        assert_eq!(*g.group, GroupSpec::dihedral(4).unwrap());
        assert_eq!(g.crystal.unwrap().dim(), 16);
    }

    #[test]
    fn filters_and_dual_param() {
        let g = Arc::new(GroupSpec::dihedral(4).unwrap());
        let mut delta0 = ["0"; 8];
        delta0[0] = "1";
        let mut delta1 = ["0"; 8];
        delta1[1] = "[1, 0]";
        let text = format!(
            r#"{{"analysis": [[{}], [{}]], "dual_param": [{}]}}"#,
            delta0.join(","),
            delta1.join(","),
            ["[[0,0],[0,0]]"; 4].join(",")
        );
        let f = parse_filters(&text, &g).unwrap();
        assert_eq!(f.analysis.unwrap().len(), 2);
        assert_eq!(f.dual_param.unwrap().shape(), (2, 2));
        assert!(parse_filters(r#"{"analysis": [[1, 2]]}"#, &g).is_err());
    }

    #[test]
    fn sampling_documents() {
        let tol = Tolerances::default();
        let text = r#"{"rep": {"quasi_regular": {"d": 1, "q": 8, "M": [[2]], "gamma": [[[1]], [[-1]]]}},
                       "probes": {"points": [[0], 1]}}"#;
        let s = parse_sampling(text, 7, &tol).unwrap();
        assert_eq!(s.problem.channels(), 2);
        let text = format!(
            r#"{{"rep": {{"explicit": {{"group": {D8}, "regular": true}}}},
                 "generator": [1, 0, 0, 0, 0, 0, 0, 0], "probes": {{"fixed": [0, 1, 0, 0, 0, 0, 0, 0]}}}}"#
        );
        let s = parse_sampling(&text, 7, &tol).unwrap();
        assert_eq!(s.problem.channels(), 2);
        let bad = r#"{"rep": {"explicit": {"group": {"moduli": [2], "H_cyclic": 1}, "permutations": [[0,1],[1,1]]}},
                      "generator": [1, 0], "probes": {"points": [0]}}"#;
        assert!(matches!(parse_sampling(bad, 7, &tol), Err(Error::InvalidRepresentation(_))));
    }
}
