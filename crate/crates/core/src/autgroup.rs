//! Automorphisms of the Heisenberg hypersurface and the partial normal form
//! for maps with `LH(0)`, `L²H(0)` linearly independent.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::{CRMap, ModelKind};
use crate::linalg::{conj_transpose, identity, inverse, is_unitary, mat_mul, mat_vec, norm_sqr, Matrix};
use crate::poly::{taylor_jet, Poly, Var};
use crate::scalar::{rat, Scalar};

fn two_i() -> Scalar {
    &Scalar::from_int(2) * &Scalar::i()
}

/// `φ_{λ,U,c,r}(z, w) = (λU(z + cw), λ²w) / (1 − 2i⟨c̄, z⟩ + (r − i‖c‖²)w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityAut {
    pub lambda: Scalar,
    pub u: Matrix,
    pub c: Vec<Scalar>,
    pub r: Scalar,
}

impl StabilityAut {
    pub fn new(lambda: Scalar, u: Matrix, c: Vec<Scalar>, r: Scalar) -> Result<Self> {
        let a = StabilityAut { lambda, u, c, r };
        a.validate()?;
        Ok(a)
    }

    pub fn identity(n: usize) -> Self {
        StabilityAut {
            lambda: Scalar::one(),
            u: identity(n - 1),
            c: vec![Scalar::zero(); n - 1],
            r: Scalar::zero(),
        }
    }

    /// `(z, w) ↦ (λz, λ²w)`.
    pub fn scaling(n: usize, lambda: Scalar) -> Self {
        StabilityAut {
            lambda,
            ..StabilityAut::identity(n)
        }
    }

    pub fn unitary(u: Matrix) -> Self {
        let n = u.len() + 1;
        StabilityAut {
            u,
            ..StabilityAut::identity(n)
        }
    }

    pub fn with_c(c: Vec<Scalar>) -> Self {
        StabilityAut {
            c: c.clone(),
            ..StabilityAut::identity(c.len() + 1)
        }
    }

    pub fn with_r(n: usize, r: Scalar) -> Self {
        StabilityAut {
            r,
            ..StabilityAut::identity(n)
        }
    }

    /// Complex dimension of the hypersurface's ambient space.
    pub fn dim(&self) -> usize {
        self.c.len() + 1
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.c.len();
        if self.u.len() != m || self.u.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidAutomorphism(format!(
                "U must be {m}x{m} to match c"
            )));
        }
        if !self.lambda.is_positive() {
            return Err(Error::InvalidAutomorphism(format!("lambda = {} is not positive", self.lambda)));
        }
        if !self.r.is_real() {
            return Err(Error::InvalidAutomorphism(format!("r = {} is not real", self.r)));
        }
        if !is_unitary(&self.u) {
            return Err(Error::NonUnitaryU);
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        *self == StabilityAut::identity(self.dim())
    }

    /// Projective `(n+1)×(n+1)` matrix acting on `(z, w, 1)`.
    pub fn matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = vec![vec![Scalar::zero(); n + 1]; n + 1];
        let uc = mat_vec(&self.u, &self.c);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                m[i][j] = &self.lambda * &self.u[i][j];
            }
            m[i][n - 1] = &self.lambda * &uc[i];
        }
        m[n - 1][n - 1] = &self.lambda * &self.lambda;
        for j in 0..n - 1 {
            m[n][j] = -(&two_i() * &self.c[j].conj());
        }
        m[n][n - 1] = &self.r - &(&Scalar::i() * &norm_sqr(&self.c));
        m[n][n] = Scalar::one();
        m
    }

    /// Read the parameters back from a projective matrix of this shape.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let n = m.len() - 1;
        let corner = &m[n][n];
        if corner.is_zero() {
            return Err(Error::InvalidAutomorphism("matrix does not fix the origin".into()));
        }
        let k = corner.inv()?;
        let m: Matrix = m.iter().map(|row| row.iter().map(|x| x * &k).collect()).collect();
        let lambda = m[n - 1][n - 1].sqrt_real()?;
        let lambda_inv = lambda.inv()?;
        let u: Matrix = (0..n - 1)
            .map(|i| (0..n - 1).map(|j| &m[i][j] * &lambda_inv).collect())
            .collect();
        let col: Vec<Scalar> = (0..n - 1).map(|i| &m[i][n - 1] * &lambda_inv).collect();
        let c = mat_vec(&conj_transpose(&u), &col);
        let r = &m[n][n - 1] + &(&Scalar::i() * &norm_sqr(&c));
        let a = StabilityAut::new(lambda, u, c, r)?;
        if a.matrix() != m {
            return Err(Error::InvalidAutomorphism("matrix is not a stability automorphism".into()));
        }
        Ok(a)
    }

    pub fn inverse(&self) -> Result<Self> {
        StabilityAut::from_matrix(&inverse(&self.matrix())?)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &StabilityAut) -> Result<Self> {
        StabilityAut::from_matrix(&mat_mul(&self.matrix(), &other.matrix()))
    }
}

/// `t_{p₀}(z, w) = (z + z₀, w + u₀ + i‖z₀‖² + 2i⟨z̄₀, z⟩)`, sending 0 to
/// `p₀ = (z₀, u₀ + i‖z₀‖²)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Translation {
    pub z0: Vec<Scalar>,
    pub u0: Scalar,
}

impl Translation {
    pub fn new(z0: Vec<Scalar>, u0: Scalar) -> Result<Self> {
        if !u0.is_real() {
            return Err(Error::InvalidAutomorphism(format!("u0 = {u0} is not real")));
        }
        Ok(Translation { z0, u0 })
    }

    /// The translation sending 0 to a given point of the hypersurface.
    pub fn to_point(z0: Vec<Scalar>, w0: &Scalar) -> Result<Self> {
        if w0.im() != norm_sqr(&z0) {
            return Err(Error::NotOnHypersurface(format!("({z0:?}, {w0})")));
        }
        Translation::new(z0, w0.re())
    }

    pub fn dim(&self) -> usize {
        self.z0.len() + 1
    }

    pub fn matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = identity(n + 1);
        for (i, z) in self.z0.iter().enumerate() {
            m[i][n] = z.clone();
            m[n - 1][i] = &two_i() * &z.conj();
        }
        m[n - 1][n] = &self.u0 + &(&Scalar::i() * &norm_sqr(&self.z0));
        m
    }

    pub fn inverse(&self) -> Self {
        Translation {
            z0: self.z0.iter().map(|z| -z).collect(),
            u0: -&self.u0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Automorphism {
    Stability(StabilityAut),
    Translation(Translation),
}

impl Automorphism {
    pub fn matrix(&self) -> Matrix {
        match self {
            Automorphism::Stability(a) => a.matrix(),
            Automorphism::Translation(t) => t.matrix(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Automorphism::Stability(a) => a.dim(),
            Automorphism::Translation(t) => t.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Automorphism::Stability(a) => a.validate(),
            Automorphism::Translation(t) => Translation::new(t.z0.clone(), t.u0.clone()).map(|_| ()),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            Automorphism::Stability(a) => Automorphism::Stability(a.inverse()?),
            Automorphism::Translation(t) => Automorphism::Translation(t.inverse()),
        })
    }
}

impl From<StabilityAut> for Automorphism {
    fn from(a: StabilityAut) -> Self {
        Automorphism::Stability(a)
    }
}

impl From<Translation> for Automorphism {
    fn from(t: Translation) -> Self {
        Automorphism::Translation(t)
    }
}

/// The automorphism of `ℍ³` as a rational self-map.
pub fn aut_as_map(a: &Automorphism) -> Result<CRMap> {
    a.validate()?;
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "maps have a 2-dimensional source; automorphism acts on dimension {}",
            a.dim()
        )));
    }
    let m = a.matrix();
    let row = |r: &Vec<Scalar>| -> Poly {
        &(&Poly::var(Var::Z).scale(&r[0]) + &Poly::var(Var::W).scale(&r[1])) + &Poly::constant(r[2].clone())
    };
    CRMap::heisenberg(vec![row(&m[0]), row(&m[1])], row(&m[2]))
}

/// `left ∘ H ∘ right`, with denominators cleared.
pub fn compose(h: &CRMap, left: Option<&Automorphism>, right: Option<&Automorphism>) -> Result<CRMap> {
    let mut out = h.clone();
    if let Some(r) = right {
        if h.source != ModelKind::Heisenberg {
            return Err(Error::ModelMismatch("source automorphisms act on the Heisenberg model".into()));
        }
        r.validate()?;
        if r.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("source automorphism has dimension {}", r.dim())));
        }
        out.body = out.right_matrix(&r.matrix())?;
    }
    if let Some(l) = left {
        if h.target != ModelKind::Heisenberg {
            return Err(Error::ModelMismatch("target automorphisms act on the Heisenberg model".into()));
        }
        l.validate()?;
        out.body = out.left_matrix(&l.matrix())?;
    }
    if out.body.denominator.constant_term().is_zero() && h.source == ModelKind::Heisenberg {
        return Err(Error::PoleAtBasePoint);
    }
    Ok(out)
}

/// A unitary `U` with `U·v = ‖v‖·e₁`.
///
/// The entry of largest modulus is pivoted to the front, then a complex
/// Householder reflector in the `larfg` convention maps the pivoted vector to
/// `β·e₁` with `β` real; a final sign flip makes the image `‖v‖·e₁`.
pub fn unitary_completion(v: &[Scalar]) -> Result<Matrix> {
    let n = v.len();
    if v.iter().all(Scalar::is_zero) {
        return Err(Error::DegenerateJet("cannot complete the zero vector".into()));
    }
    let norm = norm_sqr(v).sqrt_real()?;
    let mut pivot = 0;
    let mut best: f64 = -1.0;
    for (k, x) in v.iter().enumerate() {
        let m = x.to_float().norm();
        if m > best + 1e-12 * best.abs() {
            best = m;
            pivot = k;
        }
    }
    let mut perm = identity(n);
    perm.swap(0, pivot);
    let vp = mat_vec(&perm, v);
    let alpha = vp[0].clone();
    if vp[1..].iter().all(Scalar::is_zero) {
        let mut d = identity(n);
        d[0][0] = alpha.conj().checked_div(&norm)?;
        return Ok(mat_mul(&d, &perm));
    }
    let sign = if alpha.re().signum()? < 0 { Scalar::one() } else { -Scalar::one() };
    let beta = &sign * &norm;
    let denom = (&alpha - &beta).inv()?;
    let mut u = vec![Scalar::one()];
    u.extend(vp[1..].iter().map(|x| x * &denom));
    let tau = (&beta - &alpha).checked_div(&beta)?;
    // H = I − τ u u*, and H* maps vp to β e₁
    let mut h = identity(n);
    for i in 0..n {
        for j in 0..n {
            h[i][j] = &h[i][j] - &(&(&tau * &u[i]) * &u[j].conj());
        }
    }
    let mut out = mat_mul(&conj_transpose(&h), &perm);
    if sign.is_one() {
        // β = ‖v‖ already
    } else {
        for x in out[0].iter_mut() {
            *x = -&*x;
        }
    }
    debug_assert!(is_unitary(&out));
    Ok(out)
}

/// Jets of the current map needed by the normalization steps.
struct Jets {
    series: Vec<Poly>,
}

impl Jets {
    fn of(h: &CRMap) -> Result<Self> {
        Ok(Jets {
            series: h.body.taylor(3)?,
        })
    }

    fn get(&self, comp: usize, k: u32, l: u32) -> Scalar {
        taylor_jet(&self.series[comp], k, l)
    }

    /// `f^{(k,l)}` as a vector over the first `N−1` components.
    fn f(&self, k: u32, l: u32) -> Vec<Scalar> {
        (0..self.series.len() - 1).map(|c| self.get(c, k, l)).collect()
    }

    fn g(&self, k: u32, l: u32) -> Scalar {
        self.get(self.series.len() - 1, k, l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationStep {
    pub name: String,
    /// Applied on the target: `left ∘ H`.
    pub left: StabilityAut,
    /// Applied on the source: `H ∘ right`.
    pub right: StabilityAut,
}

/// The twelve normal-form conditions. `xii` is `None` unless the map is
/// tangentially `(2, N−3)`-degenerate at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormConditions {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
    pub v: bool,
    pub vi: bool,
    pub vii: bool,
    pub viii: bool,
    pub ix: bool,
    pub x: bool,
    pub xi: bool,
    pub xii: Option<bool>,
}

impl NormalFormConditions {
    /// Conditions (i)–(vii).
    pub fn primary(&self) -> bool {
        self.i && self.ii && self.iii && self.iv && self.v && self.vi && self.vii
    }

    /// Conditions (viii)–(xi), plus (xii) when it applies.
    pub fn derived(&self) -> bool {
        self.viii && self.ix && self.x && self.xi && self.xii != Some(false)
    }

    pub fn all(&self) -> bool {
        self.primary() && self.derived()
    }

    pub fn as_vec(&self) -> Vec<Option<bool>> {
        [self.i, self.ii, self.iii, self.iv, self.v, self.vi, self.vii, self.viii, self.ix, self.x, self.xi]
            .into_iter()
            .map(Some)
            .chain(std::iter::once(self.xii))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormCertificate {
    pub normalized: CRMap,
    pub steps: Vec<NormalizationStep>,
    pub conditions: NormalFormConditions,
    /// Set when `f₁^{(0,2)} = 0` and the phase rotation was skipped.
    pub phase_step_skipped: bool,
}

impl NormalFormCertificate {
    pub fn left_auts(&self) -> Vec<&StabilityAut> {
        self.steps.iter().map(|s| &s.left).collect()
    }

    pub fn right_auts(&self) -> Vec<&StabilityAut> {
        self.steps.iter().map(|s| &s.right).collect()
    }

    /// Apply the recorded trail to `input`.
    pub fn replay(&self, input: &CRMap) -> Result<CRMap> {
        let mut h = input.clone();
        for s in &self.steps {
            h = apply_step(&h, s)?;
        }
        Ok(h)
    }

    /// True when every step is the identity.
    pub fn trail_is_trivial(&self) -> bool {
        self.steps.iter().all(|s| s.left.is_identity() && s.right.is_identity())
    }
}

fn apply_step(h: &CRMap, s: &NormalizationStep) -> Result<CRMap> {
    let left = (!s.left.is_identity()).then(|| Automorphism::Stability(s.left.clone()));
    let right = (!s.right.is_identity()).then(|| Automorphism::Stability(s.right.clone()));
    compose(h, left.as_ref(), right.as_ref())
}

fn block_diag_unitary(n_minus_1: usize, offset: usize, block: &Matrix) -> Matrix {
    let mut u = identity(n_minus_1);
    for (i, row) in block.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            u[offset + i][offset + j] = x.clone();
        }
    }
    u
}

/// Bring a map into the partial normal form, recording every automorphism.
pub fn normalize(h: &CRMap) -> Result<NormalFormCertificate> {
    if h.source != ModelKind::Heisenberg || h.target != ModelKind::Heisenberg {
        return Err(Error::ModelMismatch("normalization works on Heisenberg maps".into()));
    }
    let n = h.target_dim();
    if n < 3 {
        return Err(Error::DimensionMismatch("normal form needs N >= 3".into()));
    }
    let value0 = h.eval(&Scalar::zero(), &Scalar::zero()).map_err(|_| Error::PoleAtBasePoint)?;
    if value0.iter().any(|x| !x.is_zero()) {
        return Err(Error::NotCentered);
    }
    let mut steps: Vec<NormalizationStep> = Vec::new();
    let mut cur = h.clone();
    let mut push = |cur: &mut CRMap, name: &str, left: StabilityAut, right: StabilityAut| -> Result<()> {
        let s = NormalizationStep {
            name: name.to_string(),
            left,
            right,
        };
        *cur = apply_step(cur, &s)?;
        steps.push(s);
        Ok(())
    };
    let id_src = StabilityAut::identity(2);
    let id_tgt = StabilityAut::identity(n);

    // (1,0)-coefficients of f
    let jets = Jets::of(&cur)?;
    let f10 = jets.f(1, 0);
    if f10.iter().all(Scalar::is_zero) {
        return Err(Error::DegenerateJet("f^(1,0) = 0: the map is not transversal".into()));
    }
    let norm10 = norm_sqr(&f10).sqrt_real()?;
    let u1 = unitary_completion(&f10)?;
    push(&mut cur, "normalize f^(1,0)", StabilityAut::unitary(u1), id_src.clone())?;

    // (2,0)-coefficients of f
    let jets = Jets::of(&cur)?;
    let f20_tail: Vec<Scalar> = jets.f(2, 0)[1..].to_vec();
    if f20_tail.iter().all(Scalar::is_zero) {
        return Err(Error::DegenerateJet("f^(1,0) and f^(2,0) are linearly dependent".into()));
    }
    let norm20 = norm_sqr(&f20_tail).sqrt_real()?;
    let u2 = block_diag_unitary(n - 1, 1, &unitary_completion(&f20_tail)?);
    push(&mut cur, "normalize f^(2,0)", StabilityAut::unitary(u2), id_src.clone())?;

    // scaling
    let two = Scalar::from_int(2);
    let lambda = (&two * &norm10).checked_div(&norm20)?;
    let lambda_t = norm20.checked_div(&(&two * &(&norm10 * &norm10)))?;
    push(
        &mut cur,
        "scale f1^(1,0) and f2^(2,0)",
        StabilityAut::scaling(n, lambda_t),
        StabilityAut::scaling(2, lambda),
    )?;

    // (0,1)-coefficients of f
    let jets = Jets::of(&cur)?;
    let c_t: Vec<Scalar> = jets.f(0, 1).iter().map(|x| -x).collect();
    push(&mut cur, "normalize f^(0,1)", StabilityAut::with_c(c_t), id_src.clone())?;

    // f2^(1,1)
    let jets = Jets::of(&cur)?;
    let d = -&jets.get(1, 1, 1).scale(&rat(1, 2));
    let mut d_t = vec![Scalar::zero(); n - 1];
    d_t[0] = -&d;
    push(
        &mut cur,
        "normalize f2^(1,1)",
        StabilityAut::with_c(d_t),
        StabilityAut::with_c(vec![d]),
    )?;

    // f1^(0,2)
    let jets = Jets::of(&cur)?;
    let f1_02 = jets.get(0, 0, 2);
    let phase_step_skipped = f1_02.is_zero();
    let (left6, right6) = if phase_step_skipped {
        (id_tgt.clone(), id_src.clone())
    } else {
        let modulus = f1_02.norm_sqr().sqrt_real()?;
        let u_t = f1_02.conj().checked_div(&modulus)?;
        let mut ut = identity(n - 1);
        ut[0][0] = u_t.clone();
        ut[1][1] = &u_t * &u_t;
        (StabilityAut::unitary(ut), StabilityAut::unitary(vec![vec![u_t.conj()]]))
    };
    push(&mut cur, "normalize f1^(0,2)", left6, right6)?;

    // Re f2^(2,1) and Re g^(0,2)
    let jets = Jets::of(&cur)?;
    let re21 = jets.get(1, 2, 1).re();
    let g02 = jets.g(0, 2);
    let r = (&re21 - &g02).scale(&rat(1, 2));
    let r_t = (&(-&re21) + &(&two * &g02)).scale(&rat(1, 2));
    push(
        &mut cur,
        "normalize Re f2^(2,1) and Re g^(0,2)",
        StabilityAut::with_r(n, r_t),
        StabilityAut::with_r(2, r),
    )?;

    let conditions = check_conditions(&cur)?;
    Ok(NormalFormCertificate {
        normalized: cur,
        steps,
        conditions,
        phase_step_skipped,
    })
}

/// Evaluate conditions (i)–(xii) on a Heisenberg map.
pub fn check_conditions(h: &CRMap) -> Result<NormalFormConditions> {
    let n = h.target_dim();
    let jets = Jets::of(h)?;
    let e = |k: usize| -> Vec<Scalar> {
        (0..n).map(|j| if j == k { Scalar::one() } else { Scalar::zero() }).collect()
    };
    let full = |k: u32, l: u32| -> Vec<Scalar> { (0..n).map(|c| jets.get(c, k, l)).collect() };
    let two_e2: Vec<Scalar> = e(1).iter().map(|x| x.scale(&rat(2, 1))).collect();
    let f1_02 = jets.get(0, 0, 2);
    let g02 = jets.g(0, 2);

    let nums = h.numerators();
    let den = h.denominator();
    let on_w0 = |p: &Poly| p.subst(Var::W, &Poly::zero());
    let den0 = on_w0(den);
    let viii = on_w0(&nums[0]) == &Poly::var(Var::Z) * &den0;
    let g = &nums[n - 1];
    let gw = &(&g.diff(Var::W, 1) * den) - &(g * &den.diff(Var::W, 1));
    let ix = on_w0(&gw) == &den0 * &den0;

    let tangential = crate::degeneracy::tangential_degeneracy(h, &[Scalar::zero(), Scalar::zero()], 0)?;
    let xii = (tangential.k == 2 && tangential.tdeg + 3 == n)
        .then(|| nums[2..n - 1].iter().all(|p| on_w0(p).is_zero()));

    Ok(NormalFormConditions {
        i: full(1, 0) == e(0),
        ii: full(0, 1) == e(n - 1),
        iii: full(2, 0) == two_e2,
        iv: jets.get(1, 1, 1).is_zero(),
        v: g02.re().is_zero(),
        vi: jets.get(1, 2, 1).re().is_zero(),
        vii: f1_02.is_nonnegative(),
        viii,
        ix,
        x: g02.im().is_zero(),
        xi: jets.get(0, 1, 1) == Scalar::i().scale(&rat(1, 2)),
        xii,
    })
}

/// A random rational unitary: products of Pythagorean rotations, a
/// permutation and diagonal phases from `{±1, ±i}`.
pub fn random_rational_unitary<R: Rng>(m: usize, rng: &mut R) -> Matrix {
    const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];
    let phases = [Scalar::one(), Scalar::i(), -Scalar::one(), -Scalar::i()];
    let mut u = identity(m);
    if m >= 2 {
        for _ in 0..2 {
            let (a, b, c) = TRIPLES[rng.random_range(0..TRIPLES.len())];
            let i = rng.random_range(0..m);
            let mut j = rng.random_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            let mut g = identity(m);
            g[i][i] = Scalar::from_ratio(a, c);
            g[j][j] = Scalar::from_ratio(a, c);
            g[i][j] = Scalar::from_ratio(-b, c);
            g[j][i] = Scalar::from_ratio(b, c);
            u = mat_mul(&g, &u);
        }
    }
    let mut d = identity(m);
    for (k, row) in d.iter_mut().enumerate() {
        row[k] = phases[rng.random_range(0..4)].clone();
    }
    mat_mul(&d, &u)
}

/// A random stability automorphism with small rational parameters.
pub fn random_stability_aut<R: Rng>(n: usize, rng: &mut R) -> StabilityAut {
    const LAMBDAS: [(i64, i64); 5] = [(1, 2), (2, 3), (1, 1), (3, 2), (2, 1)];
    let (p, q) = LAMBDAS[rng.random_range(0..LAMBDAS.len())];
    let small = |rng: &mut R| Scalar::from_ratio(rng.random_range(-3..=3), rng.random_range(1..=4));
    let c = (0..n - 1)
        .map(|_| {
            let re = small(rng);
            let im = small(rng);
            &re + &(&im * &Scalar::i())
        })
        .collect();
    StabilityAut {
        lambda: Scalar::from_ratio(p, q),
        u: random_rational_unitary(n - 1, rng),
        c,
        r: small(rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::mapping_residual;
    use crate::poly::poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(lit: &str) -> Scalar {
        lit.parse().unwrap()
    }

    #[test]
    fn identity_and_scaling_maps() {
        let id = aut_as_map(&StabilityAut::identity(2).into()).unwrap();
        assert!(id.cross_eq(&CRMap::heisenberg(vec![poly("z"), poly("w")], Poly::one()).unwrap()));
        let sc = aut_as_map(&StabilityAut::scaling(2, Scalar::from_int(2)).into()).unwrap();
        assert_eq!(sc.body.numerators, vec![poly("2 z"), poly("4 w")]);
        assert_eq!(sc.body.denominator, Poly::one());
    }

    #[test]
    fn translation_map() {
        let t = Translation::to_point(vec![Scalar::one()], &s("1 + i")).unwrap();
        let m = aut_as_map(&t.into()).unwrap();
        assert_eq!(m.body.numerators, vec![poly("z + 1"), poly("w + 1 + i + 2 i z")]);
        assert!(mapping_residual(&m).unwrap().is_zero);
        assert!(Translation::to_point(vec![Scalar::one()], &s("1 + 2 i")).is_err());
    }

    #[test]
    fn scalings_cancel() {
        let h = CRMap::linear_embedding(4).unwrap();
        let out = compose(
            &h,
            Some(&StabilityAut::scaling(4, Scalar::from_ratio(1, 2)).into()),
            Some(&StabilityAut::scaling(2, Scalar::from_int(2)).into()),
        )
        .unwrap();
        assert!(out.cross_eq(&h));
    }

    #[test]
    fn group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 5] {
            let a = random_stability_aut(n, &mut rng);
            a.validate().unwrap();
            let prod = a.compose(&a.inverse().unwrap()).unwrap();
            assert!(prod.is_identity());
            if n == 2 {
                let m = aut_as_map(&a.clone().into()).unwrap();
                assert!(mapping_residual(&m).unwrap().is_zero);
            }
            let t = Translation::new(a.c.clone(), Scalar::from_ratio(2, 3)).unwrap();
            assert!(crate::linalg::is_identity(&mat_mul(&t.matrix(), &t.inverse().matrix())));
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        let mut a = StabilityAut::identity(3);
        a.u[0][1] = Scalar::one();
        assert_eq!(a.validate(), Err(Error::NonUnitaryU));
        let b = StabilityAut::scaling(2, -Scalar::one());
        assert!(matches!(b.validate(), Err(Error::InvalidAutomorphism(_))));
    }

    #[test]
    fn unitary_completion_examples() {
        let u = unitary_completion(&[s("0"), s("1")]).unwrap();
        assert_eq!(u, vec![vec![s("0"), s("1")], vec![s("1"), s("0")]]);
        let u = unitary_completion(&[s("3"), s("4")]).unwrap();
        assert!(is_unitary(&u));
        assert_eq!(mat_vec(&u, &[s("3"), s("4")]), vec![s("5"), s("0")]);
        let u = unitary_completion(&[s("1"), s("1")]).unwrap();
        assert!(is_unitary(&u));
        assert_eq!(mat_vec(&u, &[s("1"), s("1")]), vec![s("1 * sqrt(2)"), s("0")]);
        let v = [s("i"), s("-2"), s("2 + i")];
        let u = unitary_completion(&v).unwrap();
        assert!(is_unitary(&u));
        assert_eq!(mat_vec(&u, &v), vec![s("1 * sqrt(10)"), s("0"), s("0")]);
    }

    #[test]
    fn constant_map_is_degenerate() {
        let h = CRMap::constant(4).unwrap();
        assert!(matches!(normalize(&h), Err(Error::DegenerateJet(_))));
    }

    #[test]
    fn uncentered_map_is_rejected() {
        let h = CRMap::heisenberg(vec![poly("z + 1"), poly("z^2"), poly("w + 1 + i + 2 i z")], Poly::one()).unwrap();
        assert_eq!(normalize(&h), Err(Error::NotCentered));
    }

    mod props {
        use super::*;
        use crate::families::explicit_map;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            #[test]
            fn stability_auts_preserve_the_mapping_equation(seed in any::<u64>()) {
                let h = explicit_map("h24", 4).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let left = Automorphism::Stability(random_stability_aut(4, &mut rng));
                let right = Automorphism::Stability(random_stability_aut(2, &mut rng));
                let g = compose(&h, Some(&left), Some(&right)).unwrap();
                prop_assert!(mapping_residual(&g).unwrap().is_zero);
            }

            #[test]
            fn inverse_undoes(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_stability_aut(3, &mut rng);
                prop_assert!(a.compose(&a.inverse().unwrap()).unwrap().is_identity());
            }
        }
    }

}
