//! Finite abelian groups `N`, finite groups `H`, actions `φ: H → Aut(N)` and
//! the semi-direct product `G = N ⋊_φ H`.
//!
//! `N` is always written additively. Elements of `N` are addressed by a
//! linear index over the moduli (row-major, last coordinate fastest); the
//! dual group `N̂` is identified with `N` through the product character
//! `⟨n, ξ⟩ = Π_i exp(2πi n_i ξ_i / s_i)`, so characters share the same index
//! space.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

/// `N = Z_{s_1} × … × Z_{s_d}`.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    moduli: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    /// lcm of the moduli; characters take values in the `period`-th roots of unity.
    period: usize,
    roots: Vec<C64>,
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.moduli == other.moduli
    }
}

impl Eq for AbelianGroup {}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl AbelianGroup {
    pub fn new(moduli: Vec<usize>) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::InvalidGroup(format!(
                "moduli must be positive, got {moduli:?}"
            )));
        }
        let mut order = 1usize;
        let mut period = 1usize;
        for &s in &moduli {
            order = order
                .checked_mul(s)
                .ok_or_else(|| Error::InvalidGroup("|N| overflows".into()))?;
            period = period / gcd(period, s) * s;
        }
        let mut strides = vec![1; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        let roots = (0..period)
            .map(|p| C64::from_polar(1.0, 2.0 * PI * p as f64 / period as f64))
            .collect();
        Ok(Self {
            moduli,
            strides,
            order,
            period,
            roots,
        })
    }

    pub fn cyclic(s: usize) -> Result<Self> {
        Self::new(vec![s])
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    fn digit(&self, n: usize, i: usize) -> usize {
        (n / self.strides[i]) % self.moduli[i]
    }

    pub fn coords(&self, n: usize) -> Vec<usize> {
        (0..self.rank()).map(|i| self.digit(n, i)).collect()
    }

    /// Linear index of a coordinate vector; components are reduced modulo
    /// their moduli, so negative entries are accepted.
    pub fn index_of(&self, coords: &[i64]) -> usize {
        debug_assert_eq!(coords.len(), self.rank());
        coords
            .iter()
            .zip(&self.moduli)
            .zip(&self.strides)
            .map(|((&c, &s), &st)| c.rem_euclid(s as i64) as usize * st)
            .sum()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for i in 0..self.rank() {
            let s = self.moduli[i];
            out += ((self.digit(a, i) + self.digit(b, i)) % s) * self.strides[i];
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        let mut out = 0;
        for i in 0..self.rank() {
            let s = self.moduli[i];
            out += ((s - self.digit(a, i)) % s) * self.strides[i];
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Phase index `p` with `⟨n, ξ⟩ = exp(2πi p / period)`.
    #[inline]
    fn pairing(&self, n: usize, xi: usize) -> usize {
        let mut p = 0;
        for i in 0..self.rank() {
            let s = self.moduli[i];
            let prod = (self.digit(n, i) * self.digit(xi, i)) % s;
            p = (p + prod * (self.period / s)) % self.period;
        }
        p
    }

    /// `⟨n, ξ⟩`.
    pub fn character(&self, n: usize, xi: usize) -> C64 {
        self.roots[self.pairing(n, xi)]
    }

    /// `X(ξ) = Σ_n x(n) conj⟨n, ξ⟩`, by direct summation.
    pub fn fourier(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.order, "signal length must equal |N|");
        (0..self.order)
            .map(|xi| {
                x.iter()
                    .enumerate()
                    .map(|(n, &v)| v * self.roots[(self.period - self.pairing(n, xi)) % self.period])
                    .sum()
            })
            .collect()
    }

    /// `x(n) = (1/|N|) Σ_ξ X(ξ) ⟨n, ξ⟩` (Haar measure on `N̂` of total mass one).
    pub fn inverse_fourier(&self, spectrum: &[C64]) -> Vec<C64> {
        assert_eq!(spectrum.len(), self.order, "spectrum length must equal |N|");
        let scale = 1.0 / self.order as f64;
        (0..self.order)
            .map(|n| {
                spectrum
                    .iter()
                    .enumerate()
                    .map(|(xi, &v)| v * self.roots[self.pairing(n, xi)])
                    .sum::<C64>()
                    * scale
            })
            .collect()
    }

    /// `(a ∗ b)(m) = Σ_n a(n) b(m − n)`.
    pub fn convolve(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        assert_eq!(a.len(), self.order);
        assert_eq!(b.len(), self.order);
        (0..self.order)
            .map(|m| {
                (0..self.order)
                    .map(|n| a[n] * b[self.sub(m, n)])
                    .sum()
            })
            .collect()
    }
}

/// An automorphism of `N`, stored as its permutation of element indices.
#[derive(Clone, Debug)]
pub struct Automorphism {
    map: Vec<usize>,
    matrix: Option<Vec<Vec<i64>>>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl Eq for Automorphism {}

impl Automorphism {
    pub fn identity(group: &AbelianGroup) -> Self {
        Self {
            map: group.elements().collect(),
            matrix: Some(
                (0..group.rank())
                    .map(|i| (0..group.rank()).map(|j| i64::from(i == j)).collect())
                    .collect(),
            ),
        }
    }

    /// Integer matrix acting on coordinates: `n'_i = Σ_j W_ij n_j mod s_i`.
    pub fn from_matrix(group: &AbelianGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let d = group.rank();
        if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidGroup(format!(
                "action matrix must be {d}x{d}"
            )));
        }
        let map = group
            .elements()
            .map(|n| {
                let c = group.coords(n);
                let image: Vec<i64> = matrix
                    .iter()
                    .map(|row| row.iter().zip(&c).map(|(&w, &x)| w * x as i64).sum())
                    .collect();
                group.index_of(&image)
            })
            .collect();
        let aut = Self {
            map,
            matrix: Some(matrix),
        };
        aut.validate(group).map_err(Error::InvalidGroup)?;
        Ok(aut)
    }

    pub fn from_permutation(group: &AbelianGroup, map: Vec<usize>) -> Result<Self> {
        let aut = Self { map, matrix: None };
        aut.validate(group).map_err(Error::InvalidGroup)?;
        Ok(aut)
    }

    /// Exhaustive bijectivity and additivity check.
    fn validate(&self, group: &AbelianGroup) -> std::result::Result<(), String> {
        let order = group.order();
        if self.map.len() != order {
            return Err(format!(
                "permutation has {} entries, |N| = {order}",
                self.map.len()
            ));
        }
        let mut seen = vec![false; order];
        for &m in &self.map {
            if m >= order || std::mem::replace(&mut seen[m], true) {
                return Err("map is not a bijection of N".into());
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                if self.map[group.add(a, b)] != group.add(self.map[a], self.map[b]) {
                    return Err(format!("not additive at ({a}, {b})"));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, n: usize) -> usize {
        self.map[n]
    }

    pub fn permutation(&self) -> &[usize] {
        &self.map
    }

    pub fn matrix(&self) -> Option<&Vec<Vec<i64>>> {
        self.matrix.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let l = table.len();
        if l == 0 {
            return Err(Error::InvalidGroup("H must be non-empty".into()));
        }
        if table.iter().any(|row| row.len() != l) {
            return Err(Error::InvalidGroup("H table must be square".into()));
        }
        if table.iter().flatten().any(|&x| x >= l) {
            return Err(Error::InvalidGroup("H table entry out of range".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * l + b];

        let identity = (0..l)
            .find(|&e| (0..l).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("H has no identity element".into()))?;
        let mut inverse = Vec::with_capacity(l);
        for x in 0..l {
            let inv = (0..l)
                .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} of H has no inverse")))?;
            inverse.push(inv);
        }
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "H is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            order: l,
            table: flat,
            identity,
            inverse,
        })
    }

    pub fn cyclic(l: usize) -> Result<Self> {
        Self::from_table(
            (0..l)
                .map(|i| (0..l).map(|j| (i + j) % l).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }
}

/// An element `(n, h)` of `G`, both components given as indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElem {
    pub n: usize,
    pub h: usize,
}

impl GElem {
    pub fn new(n: usize, h: usize) -> Self {
        Self { n, h }
    }
}

/// `G = N ⋊_φ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    n: AbelianGroup,
    h: FiniteGroup,
    action: Vec<Automorphism>,
}

/// Outcome of the exhaustive axiom checks on `G`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AxiomReport {
    pub order_n: usize,
    pub order_h: usize,
    pub order_g: usize,
    pub associativity_checks: usize,
    pub homomorphism_checks: usize,
}

impl GroupSpec {
    pub fn new(n: AbelianGroup, h: FiniteGroup, action: Vec<Automorphism>) -> Result<Self> {
        if action.len() != h.order() {
            return Err(Error::InvalidGroup(format!(
                "action has {} automorphisms, |H| = {}",
                action.len(),
                h.order()
            )));
        }
        for (idx, aut) in action.iter().enumerate() {
            aut.validate(&n)
                .map_err(|reason| Error::InvalidAutomorphism { h: idx, reason })?;
        }
        if !action[h.identity()].is_identity() {
            return Err(Error::InvalidAutomorphism {
                h: h.identity(),
                reason: "the identity of H must act trivially".into(),
            });
        }
        for h1 in 0..h.order() {
            for h2 in 0..h.order() {
                let composite = &action[h.mul(h1, h2)];
                for m in n.elements() {
                    if composite.apply(m) != action[h1].apply(action[h2].apply(m)) {
                        return Err(Error::InvalidGroup(format!(
                            "action is not a homomorphism: phi({h1}*{h2}) != phi({h1}) o phi({h2}) at n = {m}"
                        )));
                    }
                }
            }
        }
        Ok(Self { n, h, action })
    }

    /// Direct product `N × H` (trivial action).
    pub fn direct(n: AbelianGroup, h: FiniteGroup) -> Result<Self> {
        let action = (0..h.order()).map(|_| Automorphism::identity(&n)).collect();
        Self::new(n, h, action)
    }

    /// The dihedral group `Z_s ⋊ Z_2` of order `2s`, with `φ_1(n) = −n`.
    pub fn dihedral(s: usize) -> Result<Self> {
        let n = AbelianGroup::cyclic(s)?;
        let h = FiniteGroup::cyclic(2)?;
        let flip = Automorphism::from_matrix(&n, vec![vec![-1]])?;
        Self::new(n.clone(), h, vec![Automorphism::identity(&n), flip])
    }

    pub fn n(&self) -> &AbelianGroup {
        &self.n
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn action(&self, h: usize) -> &Automorphism {
        &self.action[h]
    }

    pub fn order_n(&self) -> usize {
        self.n.order()
    }

    pub fn order_h(&self) -> usize {
        self.h.order()
    }

    pub fn order(&self) -> usize {
        self.n.order() * self.h.order()
    }

    pub fn identity(&self) -> GElem {
        GElem::new(0, self.h.identity())
    }

    /// Dense index of `g`, `n`-major and `h`-minor.
    #[inline]
    pub fn index(&self, g: GElem) -> usize {
        g.n * self.h.order() + g.h
    }

    #[inline]
    pub fn elem(&self, index: usize) -> GElem {
        GElem::new(index / self.h.order(), index % self.h.order())
    }

    pub fn elements(&self) -> impl Iterator<Item = GElem> + '_ {
        (0..self.order()).map(|i| self.elem(i))
    }

    pub fn contains(&self, g: GElem) -> bool {
        g.n < self.n.order() && g.h < self.h.order()
    }

    fn check(&self, g: GElem) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                n: g.n,
                h: g.h,
                order_n: self.n.order(),
                order_h: self.h.order(),
            })
        }
    }

    /// `(n1, h1)·(n2, h2) = (n1 + φ_{h1}(n2), h1 h2)`.
    #[inline]
    pub fn mul(&self, a: GElem, b: GElem) -> GElem {
        GElem::new(
            self.n.add(a.n, self.action[a.h].apply(b.n)),
            self.h.mul(a.h, b.h),
        )
    }

    /// `(n, h)^{-1} = (φ_{h^{-1}}(−n), h^{-1})`.
    #[inline]
    pub fn inv(&self, g: GElem) -> GElem {
        let h_inv = self.h.inv(g.h);
        GElem::new(self.action[h_inv].apply(self.n.neg(g.n)), h_inv)
    }

    pub fn checked_mul(&self, a: GElem, b: GElem) -> Result<GElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn checked_inv(&self, g: GElem) -> Result<GElem> {
        self.check(g)?;
        Ok(self.inv(g))
    }

    /// Exhaustive group axioms on `G` plus the homomorphism property of `φ`.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        let elems: Vec<GElem> = self.elements().collect();
        let e = self.identity();
        let mut associativity_checks = 0;
        for &a in &elems {
            if self.mul(a, e) != a || self.mul(e, a) != a {
                return Err(Error::InvalidGroup(format!("identity fails at {a:?}")));
            }
            let ai = self.inv(a);
            if self.mul(a, ai) != e || self.mul(ai, a) != e {
                return Err(Error::InvalidGroup(format!("inverse fails at {a:?}")));
            }
            for &b in &elems {
                let ab = self.mul(a, b);
                for &c in &elems {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a:?}, {b:?}, {c:?})"
                        )));
                    }
                    associativity_checks += 1;
                }
            }
        }
        let mut homomorphism_checks = 0;
        for h1 in 0..self.order_h() {
            for h2 in 0..self.order_h() {
                for m in self.n.elements() {
                    if self.action[self.h.mul(h1, h2)].apply(m)
                        != self.action[h1].apply(self.action[h2].apply(m))
                    {
                        return Err(Error::InvalidGroup(format!(
                            "phi is not a homomorphism at ({h1}, {h2}, {m})"
                        )));
                    }
                    homomorphism_checks += 1;
                }
            }
        }
        Ok(AxiomReport {
            order_n: self.order_n(),
            order_h: self.order_h(),
            order_g: self.order(),
            associativity_checks,
            homomorphism_checks,
        })
    }
}
