//! Spectral calculus on round spheres `S^d(r)`.
//!
//! A [`SphereFunction`] is a finite sum of restricted spherical harmonics,
//! stored as Euclidean-harmonic homogeneous polynomials keyed by degree. The
//! Laplace–Beltrami operator acts on the degree-`k` component by
//! `k(k+d-1)/r²`. Integrals are returned as exact multiples of the sphere
//! volume `Vol(S^d(r)) = ω_d r^d`; the radius enters only through `r²`,
//! which keeps radii such as `√2` exact.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::omega;
use crate::poly::{harmonic_decompose, integrate_poly, HomPoly};
use crate::rational::{int, pow, to_f64, Rational};

/// The round sphere `S^d(r)`, stored through `r²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphereSpec {
    pub d: usize,
    #[serde(with = "rational_string")]
    pub r_sq: Rational,
}

impl SphereSpec {
    pub fn new(d: usize, r_sq: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("sphere dimension must be at least 1".into()));
        }
        if r_sq <= Rational::zero() {
            return Err(Error::InvalidArgument(format!("squared radius must be positive, got {r_sq}")));
        }
        Ok(SphereSpec { d, r_sq })
    }

    pub fn unit(d: usize) -> Self {
        SphereSpec { d, r_sq: int(1) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.d + 1
    }

    pub fn radius(&self) -> f64 {
        to_f64(&self.r_sq).sqrt()
    }

    /// Laplace–Beltrami eigenvalue of degree-`k` harmonics, `k(k+d-1)/r²`.
    pub fn eigenvalue(&self, k: u32) -> Rational {
        int(k as i64 * (k as i64 + self.d as i64 - 1)) / &self.r_sq
    }

    pub fn volume_f64(&self) -> f64 {
        omega(self.d).to_f64() * self.radius().powi(self.d as i32)
    }
}

/// Finite harmonic expansion of a function on a round sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereFunction {
    sphere: SphereSpec,
    components: BTreeMap<u32, HomPoly>,
}

impl SphereFunction {
    pub fn zero(sphere: &SphereSpec) -> Self {
        SphereFunction { sphere: sphere.clone(), components: BTreeMap::new() }
    }

    pub fn constant(sphere: &SphereSpec, c: Rational) -> Self {
        let mut f = SphereFunction::zero(sphere);
        f.accumulate(0, HomPoly::constant(sphere.ambient_dim(), c));
        f
    }

    /// Restriction of a homogeneous polynomial: `|x|^{2j}` becomes `r^{2j}`.
    pub fn restrict(p: &HomPoly, sphere: &SphereSpec) -> Result<Self> {
        if p.ambient_dim() != sphere.ambient_dim() {
            return Err(Error::DimensionMismatch { left: p.ambient_dim(), right: sphere.ambient_dim() });
        }
        let mut f = SphereFunction::zero(sphere);
        let dec = harmonic_decompose(p);
        for (j, h) in &dec.parts {
            f.accumulate(dec.degree() - 2 * j, h.scale(&pow(&sphere.r_sq, *j)));
        }
        Ok(f)
    }

    fn accumulate(&mut self, k: u32, h: HomPoly) {
        if h.is_zero() {
            return;
        }
        let sum = match self.components.remove(&k) {
            Some(old) => &old + &h,
            None => h,
        };
        if !sum.is_zero() {
            self.components.insert(k, sum);
        }
    }

    pub fn sphere(&self) -> &SphereSpec {
        &self.sphere
    }

    pub fn components(&self) -> impl Iterator<Item = (u32, &HomPoly)> {
        self.components.iter().map(|(k, h)| (*k, h))
    }

    pub fn component(&self, k: u32) -> Option<&HomPoly> {
        self.components.get(&k)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.components.keys().next_back().copied()
    }

    fn check_same(&self, other: &SphereFunction) -> Result<()> {
        if self.sphere != other.sphere {
            return Err(Error::SphereMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SphereFunction) -> Result<SphereFunction> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, h) in &other.components {
            out.accumulate(*k, h.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SphereFunction) -> Result<SphereFunction> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> SphereFunction {
        if c.is_zero() {
            return SphereFunction::zero(&self.sphere);
        }
        SphereFunction {
            sphere: self.sphere.clone(),
            components: self.components.iter().map(|(k, h)| (*k, h.scale(c))).collect(),
        }
    }

    /// Exact pointwise product, re-expanded into harmonic components.
    pub fn pointwise_multiply(&self, other: &SphereFunction) -> Result<SphereFunction> {
        self.check_same(other)?;
        let mut by_degree: BTreeMap<u32, HomPoly> = BTreeMap::new();
        for (k, a) in &self.components {
            for (l, b) in &other.components {
                let prod = a.mul(b);
                match by_degree.remove(&(k + l)) {
                    Some(old) => by_degree.insert(k + l, &old + &prod),
                    None => by_degree.insert(k + l, prod),
                };
            }
        }
        let mut out = SphereFunction::zero(&self.sphere);
        for p in by_degree.values() {
            out = out.add(&SphereFunction::restrict(p, &self.sphere)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<SphereFunction> {
        let mut acc = SphereFunction::constant(&self.sphere, int(1));
        for _ in 0..e {
            acc = acc.pointwise_multiply(self)?;
        }
        Ok(acc)
    }

    /// `∫ f` as a multiple of `Vol(S^d(r))`: the constant component.
    pub fn integral(&self) -> Rational {
        self.component(0).map(|c| c.constant_value()).unwrap_or_else(Rational::zero)
    }

    /// `∫ f g` as a multiple of `Vol(S^d(r))`.
    ///
    /// Distinct harmonic degrees are `L²`-orthogonal, so only matching
    /// components are integrated.
    pub fn l2_inner(&self, other: &SphereFunction) -> Result<Rational> {
        self.check_same(other)?;
        let mut total = Rational::zero();
        for (k, a) in &self.components {
            if let Some(b) = other.components.get(k) {
                total += integrate_poly(&a.mul(b), self.sphere.d, &self.sphere.r_sq)?;
            }
        }
        Ok(total)
    }

    /// `∫ ∇f·∇g + h f g` as a multiple of `Vol(S^d(r))`.
    pub fn h_inner(&self, other: &SphereFunction, h: &Rational) -> Result<Rational> {
        self.check_same(other)?;
        let mut total = Rational::zero();
        for (k, a) in &self.components {
            if let Some(b) = other.components.get(k) {
                let w = self.sphere.eigenvalue(*k) + h;
                total += w * integrate_poly(&a.mul(b), self.sphere.d, &self.sphere.r_sq)?;
            }
        }
        Ok(total)
    }

    pub fn project_component(&self, k: u32) -> SphereFunction {
        let mut out = SphereFunction::zero(&self.sphere);
        if let Some(h) = self.components.get(&k) {
            out.components.insert(k, h.clone());
        }
        out
    }

    /// Removes the degree-`k` component.
    pub fn without_component(&self, k: u32) -> SphereFunction {
        let mut out = self.clone();
        out.components.remove(&k);
        out
    }

    /// Laplace–Beltrami operator, applied componentwise.
    pub fn laplacian(&self) -> SphereFunction {
        let mut out = SphereFunction::zero(&self.sphere);
        for (k, h) in &self.components {
            out.accumulate(*k, h.scale(&self.sphere.eigenvalue(*k)));
        }
        out
    }

    /// `(Δ - λ)^{-1} f`, defined when `f` has no component in the
    /// `λ`-eigenspace.
    pub fn resolvent_shifted(&self, lambda: &Rational) -> Result<SphereFunction> {
        let mut out = SphereFunction::zero(&self.sphere);
        for (k, h) in &self.components {
            let gap = self.sphere.eigenvalue(*k) - lambda;
            if gap.is_zero() {
                return Err(Error::ResolventSingular { degree: *k, shift: lambda.to_string() });
            }
            out.accumulate(*k, h.scale(&(int(1) / gap)));
        }
        Ok(out)
    }

    /// Value at a point of `S^d(r)` (coordinates in the ambient space).
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.components.values().map(|h| h.eval_f64(x)).sum()
    }

    /// Tangential gradient at a point of `S^d(r)`: the ambient gradient of
    /// the representative minus its radial part. Euler's identity gives
    /// `x·∇h = k h` for a degree-`k` component.
    pub fn grad_f64(&self, x: &[f64]) -> Vec<f64> {
        let n = self.sphere.ambient_dim();
        let mut grad = vec![0.0; n];
        let mut radial = 0.0;
        for (k, h) in &self.components {
            for (i, g) in grad.iter_mut().enumerate() {
                *g += h.partial(i).eval_f64(x);
            }
            radial += *k as f64 * h.eval_f64(x);
        }
        let r_sq = to_f64(&self.sphere.r_sq);
        grad.iter().zip(x).map(|(g, xi)| g - radial * xi / r_sq).collect()
    }

    /// `|∇f|²` at a point of `S^d(r)`.
    pub fn grad_sq_f64(&self, x: &[f64]) -> f64 {
        self.grad_f64(x).iter().map(|g| g * g).sum()
    }
}

/// Floating-point snapshot of a [`SphereFunction`] for repeated pointwise
/// evaluation of values and tangential gradients.
#[derive(Clone, Debug)]
pub struct CompiledFunction {
    value: Vec<(Vec<u32>, f64)>,
    /// Terms of `x·∇f = Σ k f_k`.
    radial: Vec<(Vec<u32>, f64)>,
    partials: Vec<Vec<(Vec<u32>, f64)>>,
    r_sq: f64,
}

fn monomial_terms(p: &HomPoly) -> Vec<(Vec<u32>, f64)> {
    p.terms().map(|(e, c)| (e.clone(), to_f64(c))).collect()
}

fn eval_terms(terms: &[(Vec<u32>, f64)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(e, c)| c * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>())
        .sum()
}

impl CompiledFunction {
    pub fn new(f: &SphereFunction) -> Self {
        let n = f.sphere.ambient_dim();
        let mut value = Vec::new();
        let mut radial = Vec::new();
        let mut partials = vec![Vec::new(); n];
        for (k, h) in &f.components {
            value.extend(monomial_terms(h));
            radial.extend(monomial_terms(&h.scale(&int(*k as i64))));
            for (i, part) in partials.iter_mut().enumerate() {
                part.extend(monomial_terms(&h.partial(i)));
            }
        }
        CompiledFunction { value, radial, partials, r_sq: to_f64(&f.sphere.r_sq) }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        eval_terms(&self.value, x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let radial = eval_terms(&self.radial, x);
        self.partials.iter().zip(x).map(|(p, xi)| eval_terms(p, x) - radial * xi / self.r_sq).collect()
    }
}

mod rational_string {
    use crate::rational::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
