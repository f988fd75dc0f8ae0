//! Heisenberg and sphere models, rational CR maps between them, the Cayley
//! transform and the mapping-equation verifier.
//!
//! Maps are stored projectively: the numerators `P_1..P_N` and the shared
//! denominator `δ` form a homogeneous vector, so composing with a linear
//! fractional map on the target is a matrix product on that vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{identity, Matrix};
use crate::poly::{poly, Monomial, Poly, RatTuple, Var};
use crate::scalar::{FloatComplex, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// `Im w = ‖z‖²`
    Heisenberg,
    /// `Σ |z_k|² = 1`
    Sphere,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Heisenberg => "heisenberg",
            ModelKind::Sphere => "sphere",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Model {
    pub kind: ModelKind,
    pub complex_dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CayleyDirection {
    SphereToHeisenberg,
    HeisenbergToSphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Source,
    Target,
    Both,
}

/// A rational map from a 2-dimensional model into an N-dimensional one.
///
/// The source variables are `(z, w)`; for a sphere source they play the
/// role of `(z_1, z_2)`. For a Heisenberg target the last component is `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CRMap {
    pub source: ModelKind,
    pub target: ModelKind,
    pub body: RatTuple,
    /// Germ base point for sphere sources; `(0, 1)` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<[Scalar; 2]>,
}

impl CRMap {
    pub fn new(source: ModelKind, target: ModelKind, body: RatTuple) -> Result<Self> {
        if body.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "target dimension must be at least 2, got {}",
                body.len()
            )));
        }
        if body.denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        for p in body.numerators.iter().chain(std::iter::once(&body.denominator)) {
            if p.degree_in(Var::Chi) > 0 || p.degree_in(Var::Tau) > 0 {
                return Err(Error::DimensionMismatch(
                    "map components must be holomorphic in (z, w)".into(),
                ));
            }
        }
        Ok(CRMap {
            source,
            target,
            body,
            base_point: None,
        })
    }

    pub fn heisenberg(numerators: Vec<Poly>, denominator: Poly) -> Result<Self> {
        CRMap::new(
            ModelKind::Heisenberg,
            ModelKind::Heisenberg,
            RatTuple::new(numerators, denominator),
        )
    }

    pub fn sphere(numerators: Vec<Poly>, denominator: Poly) -> Result<Self> {
        CRMap::new(ModelKind::Sphere, ModelKind::Sphere, RatTuple::new(numerators, denominator))
    }

    /// `(z, 0, …, 0, w)` into `ℍ^{2N−1}`.
    pub fn linear_embedding(n: usize) -> Result<Self> {
        let mut comps = vec![Poly::zero(); n];
        comps[0] = poly("z");
        if let Some(last) = comps.last_mut() {
            *last = poly("w");
        }
        CRMap::heisenberg(comps, Poly::one())
    }

    /// The constant map to the origin of `ℍ^{2N−1}`.
    pub fn constant(n: usize) -> Result<Self> {
        CRMap::heisenberg(vec![Poly::zero(); n], Poly::one())
    }

    pub fn source_model(&self) -> Model {
        Model {
            kind: self.source,
            complex_dim: 2,
        }
    }

    pub fn target_model(&self) -> Model {
        Model {
            kind: self.target,
            complex_dim: self.target_dim(),
        }
    }

    pub fn target_dim(&self) -> usize {
        self.body.len()
    }

    pub fn numerators(&self) -> &[Poly] {
        &self.body.numerators
    }

    pub fn denominator(&self) -> &Poly {
        &self.body.denominator
    }

    pub fn degree(&self) -> u32 {
        self.body.degree()
    }

    /// Base point of the germ in source coordinates.
    pub fn source_base_point(&self) -> [Scalar; 2] {
        match (self.source, &self.base_point) {
            (_, Some(p)) => p.clone(),
            (ModelKind::Heisenberg, None) => [Scalar::zero(), Scalar::zero()],
            (ModelKind::Sphere, None) => [Scalar::zero(), Scalar::one()],
        }
    }

    pub fn with_base_point(mut self, p: [Scalar; 2]) -> Self {
        self.base_point = Some(p);
        self
    }

    pub fn eval(&self, z: &Scalar, w: &Scalar) -> Result<Vec<Scalar>> {
        self.body
            .eval(&[z.clone(), w.clone(), Scalar::zero(), Scalar::zero()])
    }

    pub fn eval_float(&self, z: FloatComplex, w: FloatComplex) -> Result<Vec<FloatComplex>> {
        let zero = FloatComplex::new(0.0, 0.0);
        self.body.eval_float(&[z, w, zero, zero])
    }

    /// Same models and equal as rational maps (cross-multiplication).
    pub fn cross_eq(&self, other: &CRMap) -> bool {
        self.source == other.source && self.target == other.target && self.body.cross_eq(&other.body)
    }

    fn check_base_point(&self) -> Result<()> {
        let [z, w] = self.source_base_point();
        let d = self
            .body
            .denominator
            .eval(&[z, w, Scalar::zero(), Scalar::zero()]);
        if d.is_zero() {
            Err(Error::PoleAtBasePoint)
        } else {
            Ok(())
        }
    }

    /// Projective action of an `(N+1)×(N+1)` matrix on `(P_1, …, P_N, δ)`.
    pub fn left_matrix(&self, m: &Matrix) -> Result<RatTuple> {
        let n = self.target_dim();
        if m.len() != n + 1 || m.iter().any(|r| r.len() != n + 1) {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}x{0} matrix, got {1} rows",
                n + 1,
                m.len()
            )));
        }
        let hom: Vec<&Poly> = self
            .body
            .numerators
            .iter()
            .chain(std::iter::once(&self.body.denominator))
            .collect();
        let mut out: Vec<Poly> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&hom)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, p)| p.scale(c))
                    .sum()
            })
            .collect();
        let den = out.pop().expect("nonempty");
        Ok(RatTuple::new(out, den))
    }

    /// Precompose with the linear fractional map of a `3×3` matrix acting
    /// on `(z, w, 1)`.
    pub fn right_matrix(&self, s: &Matrix) -> Result<RatTuple> {
        if s.len() != 3 || s.iter().any(|r| r.len() != 3) {
            return Err(Error::DimensionMismatch("source matrix must be 3x3".into()));
        }
        let lin: Vec<Poly> = s
            .iter()
            .map(|row| {
                &(&poly("z").scale(&row[0]) + &poly("w").scale(&row[1])) + &Poly::constant(row[2].clone())
            })
            .collect();
        let d = self.degree();
        let mut powers: Vec<Vec<Poly>> = lin.iter().map(|_| vec![Poly::one()]).collect();
        for (k, l) in lin.iter().enumerate() {
            for e in 1..=d as usize {
                let next = &powers[k][e - 1] * l;
                powers[k].push(next);
            }
        }
        let homogenize = |p: &Poly| -> Poly {
            let mut acc = Poly::zero();
            for (m, c) in p.terms() {
                let (i, j) = (m.exp(Var::Z) as usize, m.exp(Var::W) as usize);
                let rest = d as usize - i - j;
                let t = &(&powers[0][i] * &powers[1][j]) * &powers[2][rest];
                acc = &acc + &t.scale(c);
            }
            acc
        };
        Ok(RatTuple::new(
            self.body.numerators.iter().map(homogenize).collect(),
            homogenize(&self.body.denominator),
        ))
    }
}

impl fmt::Display for CRMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} -> {} (N = {})",
            self.source,
            self.target,
            self.target_dim()
        )?;
        for (k, p) in self.body.numerators.iter().enumerate() {
            writeln!(f, "  P{} = {}", k + 1, p)?;
        }
        write!(f, "  den = {}", self.body.denominator)
    }
}

/// Cleared mapping-equation residual restricted to the complexified source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub poly: Poly,
    pub is_zero: bool,
}

/// The complexified target identity, cleared of denominators, as a
/// polynomial in `(z, w, χ, τ)`.
pub fn target_form(h: &CRMap) -> Poly {
    let nums = h.numerators();
    let n = nums.len();
    let den = h.denominator();
    let den_bar = den.conjugate();
    match h.target {
        ModelKind::Heisenberg => {
            // g·δ̄ − ḡ·δ − 2i Σ P_k P̄_k
            let g = &nums[n - 1];
            let mut acc = &(g * &den_bar) - &(&g.conjugate() * den);
            let two_i = &Scalar::from_int(2) * &Scalar::i();
            for p in &nums[..n - 1] {
                if !p.is_zero() {
                    acc = &acc - &(p * &p.conjugate()).scale(&two_i);
                }
            }
            acc
        }
        ModelKind::Sphere => {
            let mut acc = -(den * &den_bar);
            for p in nums {
                if !p.is_zero() {
                    acc = &acc + &(p * &p.conjugate());
                }
            }
            acc
        }
    }
}

/// Restrict a polynomial in `(z, w, χ, τ)` to the complexified source.
///
/// Heisenberg: `τ ↦ w − 2izχ`. Sphere: `τ ↦ (1 − zχ)/w`, cleared by `w^D`
/// with `D` the τ-degree.
pub fn restrict_to_source(p: &Poly, source: ModelKind) -> Poly {
    match source {
        ModelKind::Heisenberg => p.subst(Var::Tau, &poly("w - 2 i z chi")),
        ModelKind::Sphere => {
            let d = p.degree_in(Var::Tau);
            let one_minus = poly("1 - z chi");
            let mut by_tau: Vec<Poly> = vec![Poly::zero(); d as usize + 1];
            for (m, c) in p.terms() {
                let mut rest = m.0;
                let e = rest[Var::Tau.index()];
                rest[Var::Tau.index()] = 0;
                by_tau[e as usize] = &by_tau[e as usize] + &Poly::term(Monomial(rest), c.clone());
            }
            let mut acc = Poly::zero();
            let mut pow = Poly::one();
            for (j, part) in by_tau.iter().enumerate() {
                if !part.is_zero() {
                    let wpow = Poly::term(Monomial([0, d - j as u32, 0, 0]), Scalar::one());
                    acc = &acc + &(&(part * &pow) * &wpow);
                }
                pow = &pow * &one_minus;
            }
            acc
        }
    }
}

pub fn mapping_residual(h: &CRMap) -> Result<Residual> {
    h.check_base_point()?;
    let r = restrict_to_source(&target_form(h), h.source);
    Ok(Residual {
        is_zero: r.is_zero(),
        poly: r,
    })
}

/// Cayley transform `S^{2n−1} → ℍ^{2n−1}` as a projective matrix:
/// `(z', z_n) ↦ (z'/(1+z_n), i(1−z_n)/(1+z_n))`.
pub fn cayley_sphere_to_heisenberg(n: usize) -> Matrix {
    let mut m = identity(n + 1);
    m[n - 1][n - 1] = -Scalar::i();
    m[n - 1][n] = Scalar::i();
    m[n][n - 1] = Scalar::one();
    m[n][n] = Scalar::one();
    m
}

/// Inverse transform `(z, w) ↦ (2iz/(i+w), (i−w)/(i+w))`.
pub fn cayley_heisenberg_to_sphere(n: usize) -> Matrix {
    let two_i = &Scalar::from_int(2) * &Scalar::i();
    let mut m = identity(n + 1);
    for (k, row) in m.iter_mut().enumerate().take(n - 1) {
        row[k] = two_i.clone();
    }
    m[n - 1][n - 1] = -Scalar::one();
    m[n - 1][n] = Scalar::i();
    m[n][n - 1] = Scalar::one();
    m[n][n] = Scalar::i();
    m
}

pub fn cayley(h: &CRMap, direction: CayleyDirection, side: Side) -> Result<CRMap> {
    let (from, to) = match direction {
        CayleyDirection::SphereToHeisenberg => (ModelKind::Sphere, ModelKind::Heisenberg),
        CayleyDirection::HeisenbergToSphere => (ModelKind::Heisenberg, ModelKind::Sphere),
    };
    let do_source = matches!(side, Side::Source | Side::Both);
    let do_target = matches!(side, Side::Target | Side::Both);
    if do_source && h.source != from {
        return Err(Error::ModelMismatch(format!("source model is {}, expected {from}", h.source)));
    }
    if do_target && h.target != from {
        return Err(Error::ModelMismatch(format!("target model is {}, expected {from}", h.target)));
    }
    let mut out = h.clone();
    if do_target {
        let m = match direction {
            CayleyDirection::SphereToHeisenberg => cayley_sphere_to_heisenberg(h.target_dim()),
            CayleyDirection::HeisenbergToSphere => cayley_heisenberg_to_sphere(h.target_dim()),
        };
        out.body = out.left_matrix(&m)?;
        out.target = to;
    }
    if do_source {
        // precompose with the transform going the other way
        let m = match direction {
            CayleyDirection::SphereToHeisenberg => cayley_heisenberg_to_sphere(2),
            CayleyDirection::HeisenbergToSphere => cayley_sphere_to_heisenberg(2),
        };
        let old_base = h.source_base_point();
        out.body = out.right_matrix(&m)?;
        out.source = to;
        out.base_point = match to {
            ModelKind::Heisenberg => {
                // image of the old base point; must be the origin to stay a germ at 0
                let img = cayley_point(&old_base, CayleyDirection::SphereToHeisenberg)?;
                (!(img[0].is_zero() && img[1].is_zero())).then(|| [img[0].clone(), img[1].clone()])
            }
            ModelKind::Sphere => {
                let img = cayley_point(&old_base, CayleyDirection::HeisenbergToSphere)?;
                (!(img[0].is_zero() && img[1].is_one())).then(|| [img[0].clone(), img[1].clone()])
            }
        };
    }
    if out.body.denominator.is_zero() {
        return Err(Error::PoleAtBasePoint);
    }
    out.check_base_point()?;
    Ok(out)
}

/// Image of a point of `ℂ^n` under the Cayley transform.
pub fn cayley_point(p: &[Scalar], direction: CayleyDirection) -> Result<Vec<Scalar>> {
    let n = p.len();
    let m = match direction {
        CayleyDirection::SphereToHeisenberg => cayley_sphere_to_heisenberg(n),
        CayleyDirection::HeisenbergToSphere => cayley_heisenberg_to_sphere(n),
    };
    let mut hom: Vec<Scalar> = p.to_vec();
    hom.push(Scalar::one());
    let img = crate::linalg::mat_vec(&m, &hom);
    let den = img[n].clone();
    if den.is_zero() {
        return Err(Error::PoleAtPoint(format!("{p:?}")));
    }
    let inv = den.inv()?;
    Ok(img[..n].iter().map(|x| x * &inv).collect())
}

/// `g^{(0,1)}` of a verified Heisenberg map; positive iff the map is
/// CR transversal at 0.
pub fn transversality_data(h: &CRMap) -> Result<Scalar> {
    if h.source != ModelKind::Heisenberg || h.target != ModelKind::Heisenberg {
        return Err(Error::ModelMismatch("transversality needs Heisenberg models".into()));
    }
    let r = mapping_residual(h)?;
    if !r.is_zero {
        return Err(Error::NotVerified(format!("{} residual terms", r.poly.len())));
    }
    h.body.jet(h.target_dim() - 1, 0, 1)
}

/// Whether `(z, w)` lies on `ℍ³`, i.e. `Im w = |z|²`.
pub fn on_heisenberg(z: &Scalar, w: &Scalar) -> bool {
    w.im() == z.norm_sqr()
}

pub const FLOAT_RESIDUAL_TOL: f64 = 1e-10;

/// Largest defect of the target equation, relative to the size of the
/// image, over `samples` seeded random points of the source.
///
/// Points closer than `1e−6` to a pole are skipped.
pub fn float_residual(h: &CRMap, samples: usize, seed: u64) -> Result<f64> {
    use rand::{Rng, SeedableRng};
    h.check_base_point()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let zero = FloatComplex::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut tries = 0;
    while taken < samples && tries < 20 * samples.max(1) {
        tries += 1;
        let (z, w) = match h.source {
            ModelKind::Heisenberg => {
                let z = FloatComplex::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                (z, FloatComplex::new(rng.random_range(-2.0..2.0), z.norm_sqr()))
            }
            ModelKind::Sphere => {
                let a: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
                let b: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let c: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                (FloatComplex::from_polar(a.cos(), b), FloatComplex::from_polar(a.sin(), c))
            }
        };
        let den = h.body.denominator.eval_float(&[z, w, zero, zero]);
        if den.norm() < 1e-6 {
            continue;
        }
        let v = match h.eval_float(z, w) {
            Ok(v) => v,
            Err(_) => continue,
        };
        taken += 1;
        let n = v.len();
        let (defect, scale) = match h.target {
            ModelKind::Heisenberg => {
                let s: f64 = v[..n - 1].iter().map(|x| x.norm_sqr()).sum();
                ((v[n - 1].im - s).abs(), 1.0 + s + v[n - 1].norm())
            }
            ModelKind::Sphere => {
                let s: f64 = v.iter().map(|x| x.norm_sqr()).sum();
                ((s - 1.0).abs(), 1.0 + s)
            }
        };
        worst = worst.max(defect / scale);
    }
    if taken == 0 {
        return Err(Error::PoleAtPoint("every sample point hits a pole".into()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_residual_separates() {
        let h = CRMap::linear_embedding(4).unwrap();
        assert!(float_residual(&h, 100, 0).unwrap() < FLOAT_RESIDUAL_TOL);
        let bad = CRMap::heisenberg(vec![poly("z"), poly("z^2"), poly("w")], Poly::one()).unwrap();
        assert!(float_residual(&bad, 100, 0).unwrap() > 1e-3);
    }

    #[test]
    fn linear_embedding_verifies() {
        for n in 2..6 {
            let h = CRMap::linear_embedding(n).unwrap();
            assert!(mapping_residual(&h).unwrap().is_zero);
            assert!(transversality_data(&h).unwrap().is_one());
        }
    }

    #[test]
    fn quadratic_perturbation_fails() {
        let h = CRMap::heisenberg(vec![poly("z"), poly("z^2"), poly("w")], Poly::one()).unwrap();
        let r = mapping_residual(&h).unwrap();
        assert!(!r.is_zero);
        assert_eq!(r.poly.coeff(&Monomial([2, 0, 2, 0])), "-2 i".parse().unwrap());
    }

    #[test]
    fn constant_map_is_not_transversal() {
        let h = CRMap::constant(3).unwrap();
        assert!(mapping_residual(&h).unwrap().is_zero);
        assert!(transversality_data(&h).unwrap().is_zero());
    }

    #[test]
    fn cayley_of_points() {
        let img = cayley_point(&[Scalar::one(), Scalar::zero()], CayleyDirection::SphereToHeisenberg).unwrap();
        assert_eq!(img, vec![Scalar::one(), Scalar::i()]);
        assert!(on_heisenberg(&img[0], &img[1]));
        let back = cayley_point(&img, CayleyDirection::HeisenbergToSphere).unwrap();
        assert_eq!(back, vec![Scalar::one(), Scalar::zero()]);
        let base = cayley_point(&[Scalar::zero(), Scalar::one()], CayleyDirection::SphereToHeisenberg).unwrap();
        assert!(base.iter().all(Scalar::is_zero));
    }

    #[test]
    fn cayley_round_trip_and_residual() {
        let h = CRMap::linear_embedding(3).unwrap();
        let s = cayley(&h, CayleyDirection::HeisenbergToSphere, Side::Both).unwrap();
        assert_eq!((s.source, s.target), (ModelKind::Sphere, ModelKind::Sphere));
        assert!(mapping_residual(&s).unwrap().is_zero);
        let back = cayley(&s, CayleyDirection::SphereToHeisenberg, Side::Both).unwrap();
        assert!(back.cross_eq(&h));
        assert!(cayley(&h, CayleyDirection::SphereToHeisenberg, Side::Target).is_err());
    }

    #[test]
    fn whitney_on_sphere() {
        let w = CRMap::sphere(vec![poly("z"), poly("z w"), poly("w^2")], Poly::one()).unwrap();
        assert!(mapping_residual(&w).unwrap().is_zero);
        let h = cayley(&w, CayleyDirection::SphereToHeisenberg, Side::Both).unwrap();
        assert!(mapping_residual(&h).unwrap().is_zero);
    }
}
