//! Signals on `N` and on `G = N ⋊_φ H`, and the structural operators of the
//! filter-bank formalism.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GElem, GroupSpec};
use crate::C64;

/// A function `N → ℂ`.
#[derive(Clone, Debug, PartialEq)]
pub struct NSignal {
    group: AbelianGroup,
    values: Vec<C64>,
}

impl NSignal {
    pub fn new(group: AbelianGroup, values: Vec<C64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch {
                what: "N-signal length",
                expected: group.order(),
                found: values.len(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn zeros(group: &AbelianGroup) -> Self {
        Self {
            values: vec![C64::new(0.0, 0.0); group.order()],
            group: group.clone(),
        }
    }

    pub fn delta(group: &AbelianGroup, n: usize) -> Self {
        let mut s = Self::zeros(group);
        s.values[n] = C64::new(1.0, 0.0);
        s
    }

    pub fn random<R: Rng + ?Sized>(group: &AbelianGroup, rng: &mut R) -> Self {
        Self {
            values: random_values(group.order(), rng),
            group: group.clone(),
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn fourier(&self) -> NSignal {
        Self {
            values: self.group.fourier(&self.values),
            group: self.group.clone(),
        }
    }

    pub fn inverse_fourier(&self) -> NSignal {
        Self {
            values: self.group.inverse_fourier(&self.values),
            group: self.group.clone(),
        }
    }

    pub fn convolve(&self, other: &NSignal) -> Result<NSignal> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(Self {
            values: self.group.convolve(&self.values, &other.values),
            group: self.group.clone(),
        })
    }

    pub fn inner(&self, other: &NSignal) -> C64 {
        inner(&self.values, &other.values)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }
}

/// A function `G → ℂ`, stored densely with index `n·|H| + h`.
#[derive(Clone, Debug)]
pub struct GSignal {
    group: Arc<GroupSpec>,
    values: Vec<C64>,
}

impl PartialEq for GSignal {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.values == other.values
    }
}

fn same_group(a: &Arc<GroupSpec>, b: &Arc<GroupSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

pub(crate) fn random_values<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

impl GSignal {
    pub fn new(group: Arc<GroupSpec>, values: Vec<C64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch {
                what: "G-signal length",
                expected: group.order(),
                found: values.len(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn zeros(group: &Arc<GroupSpec>) -> Self {
        Self {
            values: vec![C64::new(0.0, 0.0); group.order()],
            group: Arc::clone(group),
        }
    }

    pub fn delta(group: &Arc<GroupSpec>, g: GElem) -> Self {
        let mut s = Self::zeros(group);
        s.values[group.index(g)] = C64::new(1.0, 0.0);
        s
    }

    /// Independent standard complex Gaussian entries.
    pub fn random<R: Rng + ?Sized>(group: &Arc<GroupSpec>, rng: &mut R) -> Self {
        Self {
            values: random_values(group.order(), rng),
            group: Arc::clone(group),
        }
    }

    pub fn from_fn(group: &Arc<GroupSpec>, f: impl Fn(GElem) -> C64) -> Self {
        Self {
            values: group.elements().map(f).collect(),
            group: Arc::clone(group),
        }
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    #[inline]
    pub fn at(&self, g: GElem) -> C64 {
        self.values[self.group.index(g)]
    }

    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }

    /// `⟨α, β⟩ = Σ α(g) conj(β(g))`.
    pub fn inner(&self, other: &GSignal) -> Result<C64> {
        self.ensure_same_group(other)?;
        Ok(inner(&self.values, &other.values))
    }

    pub fn scale(&self, c: C64) -> GSignal {
        self.map(|v| v * c)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> GSignal {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            group: Arc::clone(&self.group),
        }
    }

    pub fn add(&self, other: &GSignal) -> Result<GSignal> {
        self.ensure_same_group(other)?;
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            group: Arc::clone(&self.group),
        })
    }

    pub fn sub(&self, other: &GSignal) -> Result<GSignal> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &GSignal) -> Result<f64> {
        self.ensure_same_group(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn ensure_same_group(&self, other: &GSignal) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `(α ∗ f)(m, l) = Σ_{(n,h)} α(n, h) f(φ_{h⁻¹}(m − n), h⁻¹ l)`.
    pub fn convolve(&self, filter: &GSignal) -> Result<GSignal> {
        self.ensure_same_group(filter)?;
        let g = &*self.group;
        let (nn, hh) = (g.n(), g.h());
        let mut out = vec![C64::new(0.0, 0.0); g.order()];
        for (idx, &a) in self.values.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let src = g.elem(idx);
            let h_inv = hh.inv(src.h);
            let phi = g.action(h_inv);
            for m in nn.elements() {
                let n_arg = phi.apply(nn.sub(m, src.n));
                for l in 0..hh.order() {
                    let arg = GElem::new(n_arg, hh.mul(h_inv, l));
                    out[g.index(GElem::new(m, l))] += a * filter.values[g.index(arg)];
                }
            }
        }
        Ok(Self {
            values: out,
            group: Arc::clone(&self.group),
        })
    }

    /// `(↓_H α)(n) = α(n, 1_H)`.
    pub fn decimate(&self) -> NSignal {
        self.slice(self.group.h().identity())
    }

    /// `(↑_H c)(n, h) = c(n)` if `h = 1_H`, zero otherwise.
    pub fn expand(group: &Arc<GroupSpec>, c: &NSignal) -> Result<GSignal> {
        if c.group() != group.n() {
            return Err(Error::GroupMismatch);
        }
        let mut out = Self::zeros(group);
        let e = group.h().identity();
        for (n, &v) in c.values().iter().enumerate() {
            out.values[group.index(GElem::new(n, e))] = v;
        }
        Ok(out)
    }

    /// `T_m α(n, h) = α(n − m, h)`.
    pub fn translate(&self, m: usize) -> GSignal {
        let g = &*self.group;
        Self::from_fn(&self.group, |x| {
            self.at(GElem::new(g.n().sub(x.n, m), x.h))
        })
    }

    /// `α̃(g) = conj(α(g⁻¹))`.
    pub fn involution(&self) -> GSignal {
        let g = &*self.group;
        Self::from_fn(&self.group, |x| self.at(g.inv(x)).conj())
    }

    /// Polyphase component `α_h(n) = α(n, h)`.
    pub fn slice(&self, h: usize) -> NSignal {
        let g = &*self.group;
        NSignal {
            values: g
                .n()
                .elements()
                .map(|n| self.at(GElem::new(n, h)))
                .collect(),
            group: g.n().clone(),
        }
    }

    pub fn slices(&self) -> Vec<NSignal> {
        (0..self.group.order_h()).map(|h| self.slice(h)).collect()
    }

    /// Reassembles a signal from its `|H|` polyphase components.
    pub fn from_slices(group: &Arc<GroupSpec>, slices: &[NSignal]) -> Result<GSignal> {
        if slices.len() != group.order_h() {
            return Err(Error::DimensionMismatch {
                what: "number of polyphase slices",
                expected: group.order_h(),
                found: slices.len(),
            });
        }
        if slices.iter().any(|s| s.group() != group.n()) {
            return Err(Error::GroupMismatch);
        }
        Ok(Self::from_fn(group, |x| slices[x.h].values[x.n]))
    }

    /// Analysis polyphase component `f_h(n) = f[(−n, h)⁻¹] = f(φ_{h⁻¹}(n), h⁻¹)`.
    pub fn analysis_component(&self, h: usize) -> NSignal {
        let g = &*self.group;
        NSignal {
            values: g
                .n()
                .elements()
                .map(|n| self.at(g.inv(GElem::new(g.n().neg(n), h))))
                .collect(),
            group: g.n().clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d8() -> Arc<GroupSpec> {
        Arc::new(GroupSpec::dihedral(4).unwrap())
    }

    /// `Σ_g α(g) f(g⁻¹ x)` using only the group law.
    fn brute_convolve(a: &GSignal, f: &GSignal) -> GSignal {
        let g = a.group().clone();
        GSignal::from_fn(&g, |x| {
            g.elements()
                .map(|y| a.at(y) * f.at(g.mul(g.inv(y), x)))
                .sum()
        })
    }

    #[test]
    fn convolution_matches_group_algebra_oracle() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a = GSignal::random(&g, &mut rng);
            let f = GSignal::random(&g, &mut rng);
            let fast = a.convolve(&f).unwrap();
            let slow = brute_convolve(&a, &f);
            assert!(fast.max_abs_diff(&slow).unwrap() < 1e-11);
        }
    }

    #[test]
    fn convolution_identity_and_translation() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = GSignal::random(&g, &mut rng);
        let e = GSignal::delta(&g, g.identity());
        assert!(a.convolve(&e).unwrap().max_abs_diff(&a).unwrap() < 1e-14);
        for m in 0..4 {
            let dm = GSignal::delta(&g, GElem::new(m, 0));
            let lhs = dm.convolve(&a).unwrap();
            assert!(lhs.max_abs_diff(&a.translate(m)).unwrap() < 1e-14);
        }
    }

    #[test]
    fn convolution_is_associative() {
        let g = Arc::new(GroupSpec::dihedral(3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = GSignal::random(&g, &mut rng);
        let b = GSignal::random(&g, &mut rng);
        let c = GSignal::random(&g, &mut rng);
        let left = a.convolve(&b).unwrap().convolve(&c).unwrap();
        let right = a.convolve(&b.convolve(&c).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right).unwrap() < 1e-11);
    }

    #[test]
    fn decimation_and_expansion() {
        let g = d8();
        let d = GSignal::delta(&g, GElem::new(2, 0)).decimate();
        assert_eq!(d, NSignal::delta(g.n(), 2));
        let z = GSignal::delta(&g, GElem::new(2, 1)).decimate();
        assert_eq!(z, NSignal::zeros(g.n()));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = NSignal::random(g.n(), &mut rng);
        let up = GSignal::expand(&g, &c).unwrap();
        assert_eq!(up.decimate(), c);
        assert_eq!(up.slice(1), NSignal::zeros(g.n()));
        assert_eq!(
            GSignal::expand(&g, &NSignal::delta(g.n(), 0)).unwrap(),
            GSignal::delta(&g, g.identity())
        );
    }

    #[test]
    fn expanded_convolution_acts_slicewise() {
        let g = Arc::new(GroupSpec::dihedral(6).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = NSignal::random(g.n(), &mut rng);
        let f = GSignal::random(&g, &mut rng);
        let lhs = GSignal::expand(&g, &c).unwrap().convolve(&f).unwrap();
        for l in 0..2 {
            let rhs = c.convolve(&f.slice(l)).unwrap();
            let got = lhs.slice(l);
            for (a, b) in got.values().iter().zip(rhs.values()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn decimated_convolution_is_polyphase_sum() {
        let g = Arc::new(GroupSpec::dihedral(6).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let a = GSignal::random(&g, &mut rng);
            let f = GSignal::random(&g, &mut rng);
            let lhs = a.convolve(&f).unwrap().decimate();
            let mut rhs = vec![C64::new(0.0, 0.0); 6];
            for h in 0..2 {
                let part = a.slice(h).convolve(&f.analysis_component(h)).unwrap();
                for (r, p) in rhs.iter_mut().zip(part.values()) {
                    *r += p;
                }
            }
            for (x, y) in lhs.values().iter().zip(&rhs) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn translation_properties() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = GSignal::random(&g, &mut rng);
        assert_eq!(a.translate(0), a);
        assert!((a.translate(3).norm() - a.norm()).abs() < 1e-12);
        assert_eq!(a.translate(1).translate(2), a.translate(3));
        assert_eq!(
            GSignal::delta(&g, GElem::new(1, 1)).translate(2),
            GSignal::delta(&g, GElem::new(3, 1))
        );
    }

    #[test]
    fn involution_properties() {
        let g = d8();
        let e = GSignal::delta(&g, g.identity());
        assert_eq!(e.involution(), e);
        assert_eq!(
            GSignal::delta(&g, GElem::new(1, 0)).involution(),
            GSignal::delta(&g, GElem::new(3, 0))
        );
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = GSignal::random(&g, &mut rng);
        assert_eq!(a.involution().involution(), a);
    }

    #[test]
    fn polyphase_slices_partition_the_signal() {
        let g = d8();
        let d = GSignal::delta(&g, GElem::new(3, 1));
        assert_eq!(d.slice(1), NSignal::delta(g.n(), 3));
        assert_eq!(d.slice(0), NSignal::zeros(g.n()));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = GSignal::random(&g, &mut rng);
        let b = GSignal::random(&g, &mut rng);
        let energy: f64 = a.slices().iter().map(|s| s.norm().powi(2)).sum();
        assert!((energy - a.norm().powi(2)).abs() < 1e-12);
        assert_eq!(GSignal::from_slices(&g, &a.slices()).unwrap(), a);
        let split: C64 = a
            .slices()
            .iter()
            .zip(b.slices())
            .map(|(x, y)| x.inner(&y))
            .sum();
        assert!((split - a.inner(&b).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn analysis_component_of_identity_delta() {
        let g = d8();
        let e = GSignal::delta(&g, g.identity());
        assert_eq!(e.analysis_component(0), NSignal::delta(g.n(), 0));
        assert_eq!(e.analysis_component(1), NSignal::zeros(g.n()));
    }

    #[test]
    fn analysis_component_of_involution_is_reflected_conjugate() {
        // For h = f̃: h_h(n) = conj(f(−n, h)).
        let g = Arc::new(GroupSpec::dihedral(5).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = GSignal::random(&g, &mut rng);
        let h = f.involution();
        for hi in 0..2 {
            let comp = h.analysis_component(hi);
            for n in 0..5 {
                let want = f.at(GElem::new(g.n().neg(n), hi)).conj();
                assert!((comp.values()[n] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn decimated_convolution_is_inner_product_with_translated_involution() {
        let g = d8();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = GSignal::random(&g, &mut rng);
        let h = GSignal::random(&g, &mut rng);
        let c = a.convolve(&h).unwrap().decimate();
        let ht = h.involution();
        for m in 0..4 {
            let ip = a.inner(&ht.translate(m)).unwrap();
            assert!((c.values()[m] - ip).norm() < 1e-12);
        }
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let a = GSignal::zeros(&d8());
        let b = GSignal::zeros(&Arc::new(GroupSpec::dihedral(3).unwrap()));
        assert!(matches!(a.convolve(&b), Err(Error::GroupMismatch)));
        assert!(GSignal::new(d8(), vec![C64::new(0.0, 0.0); 3]).is_err());
    }
}
