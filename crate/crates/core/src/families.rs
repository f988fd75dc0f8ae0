//! The degree-three families, the catalog of classical and explicit maps,
//! and the holomorphic functional equations satisfied by the families.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autgroup::check_conditions;
use crate::error::{Error, Result};
use crate::hypersurface::{cayley, mapping_residual, CRMap, CayleyDirection, ModelKind, Side};
use crate::poly::{Monomial, Poly, Var};
use crate::scalar::{Rational, Scalar};

fn q(lit: &str) -> Scalar {
    lit.parse().expect("valid literal")
}

fn build(src: &str, consts: &[(&str, Scalar)]) -> Poly {
    Poly::parse_with(src, consts).expect("family formula parses")
}

fn violation(constraint: &str, value: &Scalar) -> Error {
    Error::ConstraintViolation {
        constraint: constraint.to_string(),
        value: value.to_string(),
    }
}

fn require_real(name: &str, x: &Scalar) -> Result<()> {
    if x.is_real() {
        Ok(())
    } else {
        Err(violation(&format!("{name} is real"), x))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyIParams {
    pub mu: Scalar,
    pub lambda: Scalar,
    pub n: usize,
    pub a3: Scalar,
    pub b3: Scalar,
    /// Zero when `N = 4`.
    pub b4: Scalar,
}

impl FamilyIParams {
    pub fn new(mu: Rational, lambda: Scalar, n: usize) -> Result<Self> {
        let mu_s = Scalar::from_rational(mu.clone());
        if n < 4 {
            return Err(violation("N >= 4", &Scalar::from_int(n as i64)));
        }
        if mu_s.cmp_real(&q("1/6"))? != std::cmp::Ordering::Greater {
            return Err(violation("mu > 1/6", &mu_s));
        }
        require_real("lambda", &lambda)?;
        if !lambda.is_positive() {
            return Err(violation("lambda > 0", &lambda));
        }
        // λ ≤ √(μ(6μ−1)/3)  ⇔  λ² ≤ μ(6μ−1)/3 for λ > 0
        let six_mu_minus_one = &(&Scalar::from_int(6) * &mu_s) - &Scalar::one();
        let bound_sq = (&mu_s * &six_mu_minus_one).scale(&Rational::new(1.into(), 3.into()));
        let lam_sq = &lambda * &lambda;
        if lam_sq.cmp_real(&bound_sq)? == std::cmp::Ordering::Greater {
            return Err(violation("lambda <= sqrt(mu (6 mu - 1) / 3)", &lambda));
        }
        if n == 4 && lam_sq != bound_sq {
            return Err(violation("N = 4 requires lambda = sqrt(mu (6 mu - 1) / 3)", &lambda));
        }
        let a3 = six_mu_minus_one.sqrt_real()?.scale(&Rational::new(1.into(), 2.into()));
        let b3 = &(&lambda * &Scalar::i()) / &(&Scalar::from_int(4) * &a3);
        let b4 = if n >= 5 {
            let two_mu_sq = &Scalar::from_int(2) * &(&mu_s * &mu_s);
            let b4_sq = &(&two_mu_sq - &lam_sq).scale(&Rational::new(1.into(), 4.into())) - &b3.norm_sqr();
            if !b4_sq.is_nonnegative() {
                return Err(violation("|b4|^2 = (2 mu^2 - lambda^2)/4 - |b3|^2 >= 0", &b4_sq));
            }
            &b4_sq.sqrt_real()? * &Scalar::i()
        } else {
            Scalar::zero()
        };
        Ok(FamilyIParams {
            mu: mu_s,
            lambda,
            n,
            a3,
            b3,
            b4,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyIIParams {
    pub a: Scalar,
    pub lambda: Scalar,
    pub n: usize,
    pub a3: Scalar,
}

impl FamilyIIParams {
    pub fn new(a: Rational, lambda: Scalar, n: usize) -> Result<Self> {
        let a_s = Scalar::from_rational(a.clone());
        require_real("lambda", &lambda)?;
        if !lambda.is_nonnegative() {
            return Err(violation("lambda >= 0", &lambda));
        }
        if a_s.cmp_real(&q("-1/16"))? == std::cmp::Ordering::Greater {
            return Err(violation("a <= -1/16", &a_s));
        }
        if n < 3 || (n == 3 && a_s != q("-1/16")) {
            return Err(violation("N >= 4, or N = 3 with a = -1/16", &Scalar::from_int(n as i64)));
        }
        let radicand = -&(&Scalar::one() + &(&Scalar::from_int(16) * &a_s));
        let a3 = radicand.sqrt_real()?.scale(&Rational::new(1.into(), 2.into()));
        Ok(FamilyIIParams { a: a_s, lambda, n, a3 })
    }
}

pub fn family_i_parts(p: &FamilyIParams) -> (Poly, Poly, Poly, Poly) {
    let c = [("mu", p.mu.clone()), ("lam", p.lambda.clone())];
    let f = build("z - i/2 (2 mu - 1) w z + lam/2 w^2 + lam^2 w^2 z + i lam w z^2", &c);
    let phi = build("1 + 2 lam z", &c);
    let g = build("w (1 - i mu w)", &c);
    let d = build(
        "1 - i mu w - i lam w z - w^2 (2 lam^2 + mu/2) - 2 lam mu w^2 z + 2 i lam^2 mu w^3",
        &c,
    );
    (f, phi, g, d)
}

/// `(f, z²φ, w(a₃z + b₃w)φ, b₄w²φ, 0, …, 0, g)/δ`
pub fn family_thm_i(p: &FamilyIParams) -> Result<CRMap> {
    let (f, phi, g, d) = family_i_parts(p);
    let c = [("a3", p.a3.clone()), ("b3", p.b3.clone()), ("b4", p.b4.clone())];
    let mut comps = vec![f, &poly_z2() * &phi, &build("w (a3 z + b3 w)", &c) * &phi];
    if p.n >= 5 {
        comps.push(&build("b4 w^2", &c) * &phi);
    }
    comps.resize(p.n - 1, Poly::zero());
    comps.push(g);
    CRMap::heisenberg(comps, d)
}

fn poly_z2() -> Poly {
    Poly::var(Var::Z).pow(2)
}

pub fn family_ii_parts(p: &FamilyIIParams) -> (Poly, Poly, Poly, Poly) {
    let c = [("a", p.a.clone()), ("lam", p.lambda.clone())];
    let f = build(
        "2 z + i (4 a + 1) w z + lam w^2 - 8 a z^3 + 2 i (8 a + 1) lam w z^2 \
         - w^2 z (2 a^2 - 8 a lam^2 - a - 2 lam^2) - i a lam w^3",
        &c,
    );
    let phi = build("2 (1 + 2 lam z - i a w)", &c);
    let g = build("2 w (1 + 2 i a w - 4 a z^2 + 8 i a lam w z + a w^2 (4 lam^2 - a))", &c);
    let d = build(
        "2 + 4 i a w - 8 a z^2 + 2 i lam (8 a - 1) w z - 2 w^2 (a^2 - 4 a lam^2 - a + 2 lam^2) \
         - 4 i a w z^2 - 6 a lam w^2 z + 2 i a^2 w^3",
        &c,
    );
    (f, phi, g, d)
}

/// `(f, (z² + aw²)φ, a₃w(z − iλw)φ, 0, …, 0, g)/δ`; for `N = 3` the
/// vanishing third component is dropped.
pub fn family_thm_ii(p: &FamilyIIParams) -> Result<CRMap> {
    let (f, phi, g, d) = family_ii_parts(p);
    let c = [
        ("a", p.a.clone()),
        ("lam", p.lambda.clone()),
        ("a3", p.a3.clone()),
    ];
    let mut comps = vec![f, &build("z^2 + a w^2", &c) * &phi];
    if p.n >= 4 {
        comps.push(&build("a3 w (z - i lam w)", &c) * &phi);
    }
    comps.resize(p.n - 1, Poly::zero());
    comps.push(g);
    CRMap::heisenberg(comps, d)
}

/// Whether `a` and `b` agree up to a diagonal unitary on the first `N−1`
/// target components (cross-multiplied). Returns the phases `c_k` with
/// `a_k = c_k·b_k`.
pub fn phases_between(a: &CRMap, b: &CRMap) -> Option<Vec<Scalar>> {
    if a.target_dim() != b.target_dim() || a.source != b.source || a.target != b.target {
        return None;
    }
    let n = a.target_dim();
    let (da, db) = (a.denominator(), b.denominator());
    let mut phases = Vec::with_capacity(n - 1);
    for k in 0..n {
        let lhs = &a.numerators()[k] * db;
        let rhs = &b.numerators()[k] * da;
        let c = match (lhs.terms().next_back(), rhs.terms().next_back()) {
            (None, None) => Scalar::one(),
            (Some((m, x)), Some(_)) => {
                let y = rhs.coeff(m);
                if y.is_zero() {
                    return None;
                }
                x / &y
            }
            _ => return None,
        };
        if rhs.scale(&c) != lhs {
            return None;
        }
        if k == n - 1 {
            if !c.is_one() {
                return None;
            }
        } else {
            if !c.norm_sqr().is_one() {
                return None;
            }
            phases.push(c);
        }
    }
    Some(phases)
}

/// Lines `w = c·z + d` for restricting to one variable.
fn restrict_to_line(p: &Poly, c: &Scalar, d: &Scalar) -> Vec<Scalar> {
    let z = Poly::var(Var::Z);
    let line = &z.scale(c) + &Poly::constant(d.clone());
    let r = p.compose(&[z, line, Poly::var(Var::Chi), Poly::var(Var::Tau)]);
    let deg = r.degree_in(Var::Z) as usize;
    let mut out = vec![Scalar::zero(); deg + 1];
    for (m, x) in r.terms() {
        out[m.exp(Var::Z) as usize] = x.clone();
    }
    out
}

fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

/// Monic gcd of univariate polynomials (coefficient lists, low degree first).
fn uni_gcd(a: Vec<Scalar>, b: Vec<Scalar>) -> Vec<Scalar> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let lead_inv = b.last().expect("nonempty").inv().expect("nonzero lead");
        while a.len() >= b.len() {
            let f = a.last().expect("nonempty") * &lead_inv;
            let shift = a.len() - b.len();
            for (j, x) in b.iter().enumerate() {
                let v = &a[shift + j] - &(&f * x);
                a[shift + j] = v;
            }
            a.pop();
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(l) = a.last().cloned() {
        let inv = l.inv().expect("nonzero lead");
        a = a.iter().map(|x| x * &inv).collect();
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveDegree {
    /// Maximal total degree of the components as presented.
    pub degree: u32,
    /// Degree of the common factor detected on random lines.
    pub common_factor_degree: u32,
    pub effective: u32,
}

impl EffectiveDegree {
    pub fn reducible(&self) -> bool {
        self.common_factor_degree > 0
    }
}

/// Degree after cancelling common factors, estimated by restriction to three
/// random lines `w = cz + d` and univariate gcds.
pub fn effective_degree(h: &CRMap, seed: u64) -> EffectiveDegree {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = h.degree();
    let mut common = u32::MAX;
    for _ in 0..3 {
        let c = Scalar::from_ratio(rng.random_range(1..=97), rng.random_range(1..=97));
        let d = Scalar::from_ratio(rng.random_range(-97..=97), rng.random_range(1..=97));
        let mut g = restrict_to_line(h.denominator(), &c, &d);
        for p in h.numerators() {
            g = uni_gcd(g, restrict_to_line(p, &c, &d));
        }
        common = common.min(trim(g).len().saturating_sub(1) as u32);
    }
    EffectiveDegree {
        degree,
        common_factor_degree: common,
        effective: degree - common,
    }
}

/// Parameters entering the holomorphic functional equations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseIParams {
    pub lambda: Scalar,
    pub mu: Scalar,
    /// `f₂ = (z² + a w²) φ`
    pub a: Scalar,
    pub r: Scalar,
    pub b: Scalar,
}

impl CaseIParams {
    /// `a = 0`, `b = −iλ/4`, `r = (6μ−1)/4`.
    pub fn from_family_i(p: &FamilyIParams) -> Self {
        let mu = p.mu.clone();
        let quarter = Rational::new(1.into(), 4.into());
        CaseIParams {
            lambda: p.lambda.clone(),
            r: (&(&Scalar::from_int(6) * &mu) - &Scalar::one()).scale(&quarter),
            b: (&p.lambda * &Scalar::i()).scale(&-quarter),
            mu,
            a: Scalar::zero(),
        }
    }

    /// Only `λ` and `a` are meaningful; the first equation is the only one
    /// that applies.
    pub fn from_family_ii(p: &FamilyIIParams) -> Self {
        CaseIParams {
            lambda: p.lambda.clone(),
            mu: Scalar::zero(),
            a: p.a.clone(),
            r: Scalar::zero(),
            b: Scalar::zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    E1,
    E2,
    E3,
}

impl std::str::FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E1" => Ok(Equation::E1),
            "E2" => Ok(Equation::E2),
            "E3" => Ok(Equation::E3),
            _ => Err(Error::Parse(format!("unknown equation {s:?}"))),
        }
    }
}

/// `A·f + B·φ = C`, or for `E1` the identity `w f − z g − ½w²(λw + iz)φ = 0`
/// with `A = w`, `B = −½w²(λw + iz)` and the `g` term folded into `C = z g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEquation {
    pub which: Equation,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    /// Numerator of the identity after clearing `δ`.
    pub residual: Poly,
    pub verified: bool,
}

/// Numerators `(P_f, Φ, P_g, δ)` with `φ = Φ/δ`, `f₂ = (z² + a w²)φ`.
fn case_i_pieces(h: &CRMap, a: &Scalar) -> Result<(Poly, Poly, Poly, Poly)> {
    let n = h.target_dim();
    if h.source != ModelKind::Heisenberg || h.target != ModelKind::Heisenberg || n < 3 {
        return Err(Error::ShapeMismatch("a Heisenberg map with N >= 3 is required".into()));
    }
    let q2 = build("z^2 + a w^2", &[("a", a.clone())]);
    let phi = h.numerators()[1]
        .div_exact(&q2)
        .ok_or_else(|| Error::ShapeMismatch(format!("second component is not divisible by {q2}")))?;
    if phi.is_zero() {
        return Err(Error::ShapeMismatch("second component vanishes".into()));
    }
    Ok((
        h.numerators()[0].clone(),
        phi,
        h.numerators()[n - 1].clone(),
        h.denominator().clone(),
    ))
}

pub fn check_functional_equation(h: &CRMap, which: Equation, p: &CaseIParams) -> Result<FunctionalEquation> {
    let (f, phi, g, d) = case_i_pieces(h, &p.a)?;
    if which != Equation::E1 && !p.a.is_zero() {
        return Err(Error::ShapeMismatch("the second and third equations need a = 0".into()));
    }
    if which == Equation::E3 && p.lambda.is_zero() {
        return Err(Error::ShapeMismatch("the third equation needs lambda != 0".into()));
    }
    let c = [
        ("lam", p.lambda.clone()),
        ("mu", p.mu.clone()),
        ("r", p.r.clone()),
        ("b", p.b.clone()),
        ("bb", p.b.conj()),
    ];
    let (a, b, c, residual) = match which {
        Equation::E1 => {
            let a = Poly::var(Var::W);
            let b = build("-1/2 w^2 (lam w + i z)", &c);
            let cc = &Poly::var(Var::Z) * &g;
            let res = &(&(&a * &f) + &(&b * &phi)) - &cc;
            (a, b, cc, res)
        }
        Equation::E2 => {
            let a = build("2 (2 lam w^2 + i w z + 2 z)", &c);
            let b = build(
                "w (2 w z^2 (mu - 2 r) + i lam (4 mu - 3) w^2 z - 2 lam^2 w^3 - 4 i z^2 - 6 lam w z)",
                &c,
            );
            let cc = build("4 z^2", &c);
            let res = &(&(&a * &f) + &(&b * &phi)) - &(&cc * &d);
            (a, b, cc, res)
        }
        Equation::E3 => {
            let a = build(
                "-8 lam z^3 + 2 i w z^2 (12 lam^2 - 6 mu + 4 r + 1) \
                 + 4 w^2 z (3 lam mu - 4 i bb - 2 lam - 2 lam r) - 8 lam w^3 (2 bb - i lam) \
                 - 4 z^2 + 16 i lam w z",
                &c,
            );
            let b = build(
                "-16 b w z^4 \
                 - w^2 z^3 (-48 i b lam + 32 i bb lam - 96 lam^2 mu + 20 lam^2 - 12 mu^2 + 8 mu \
                            + 64 lam^2 r + 8 mu r - 4 r - 1) \
                 - 2 w^3 z^2 (16 bb lam^2 - 8 bb mu + 4 bb + 2 i lam^3 - 6 i lam mu^2 + 2 i lam mu \
                              - i lam + 4 i lam mu r + 2 i lam r) \
                 + 2 lam w^4 z (-8 i bb mu + 8 i bb - 7 lam mu + 4 lam + 2 lam r) \
                 + 4 lam^2 w^5 (2 bb - i lam) - 8 i w z^3 (r - mu) \
                 + 2 w^2 z^2 (8 i bb - 12 lam mu + 9 lam + 4 lam r) \
                 + 16 lam w^3 z (bb - i lam) + 4 z^3 - 12 i lam w z^2",
                &c,
            );
            let cc = build("4 i lam w z^2", &c);
            let res = &(&(&a * &f) + &(&b * &phi)) - &(&cc * &d);
            (a, b, cc, res)
        }
    };
    Ok(FunctionalEquation {
        which,
        a,
        b,
        c,
        verified: residual.is_zero(),
        residual,
    })
}

/// The factorization of components `2..N−1` detected in a normalized map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum FactoredForm {
    /// `f_k = q_k φ` with `q₂ = z² + a w²` and `q_k` quadratic in `(zw, w²)`.
    QuadraticFactor {
        a: Scalar,
        /// Numerator of `φ` (so `φ = phi / δ`).
        phi: Poly,
        q: Vec<Poly>,
        /// `φ(0)`, `φ^{(1,0)}`, `φ^{(0,1)}` after normalizing by `δ`.
        phi_jets: [Scalar; 3],
    },
    /// `N = 4`, `f₂ = (z − νw)ξ`, `f₃ = σwξ`.
    LinearFactor {
        nu: Scalar,
        sigma: Scalar,
        xi: Poly,
    },
    Neither,
}

fn jets_of_quotient(num: &Poly, den: &Poly) -> Result<[Scalar; 3]> {
    let t = crate::poly::RatTuple::new(vec![num.clone()], den.clone()).taylor(1)?;
    let s = &t[0];
    Ok([
        s.constant_term(),
        s.coeff(&Monomial([1, 0, 0, 0])),
        s.coeff(&Monomial([0, 1, 0, 0])),
    ])
}

pub fn lemma44_factored_form(h: &CRMap) -> Result<FactoredForm> {
    let n = h.target_dim();
    let mids = &h.numerators()[1..n - 1];
    if mids.iter().all(Poly::is_zero) {
        return Ok(FactoredForm::Neither);
    }
    let conds = check_conditions(h)?;
    if !conds.primary() {
        return Err(Error::NotNormalized(format!("conditions {:?}", conds.as_vec())));
    }
    let zz = Monomial([2, 0, 0, 0]);
    let zw = Monomial([1, 1, 0, 0]);
    let ww = Monomial([0, 2, 0, 0]);
    let quad = mids[0].homogeneous_part(2);
    let lowest_is_two = (0..2).all(|d| mids[0].homogeneous_part(d).is_zero());
    if lowest_is_two && !quad.coeff(&zz).is_zero() && quad.coeff(&zw).is_zero() {
        let a = &quad.coeff(&ww) / &quad.coeff(&zz);
        let q2 = build("z^2 + a w^2", &[("a", a.clone())]);
        if let Some(phi) = mids[0].div_exact(&q2) {
            let mut q = vec![q2];
            let mut ok = true;
            for p in &mids[1..] {
                match p.div_exact(&phi) {
                    Some(qk) if qk.terms().all(|(m, _)| *m == zw || *m == ww) => q.push(qk),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let phi_jets = jets_of_quotient(&phi, h.denominator())?;
                return Ok(FactoredForm::QuadraticFactor { a, phi, q, phi_jets });
            }
        }
    }
    if n == 4 {
        let w = Poly::var(Var::W);
        if let Some(sxi) = mids[1].div_exact(&w) {
            if let Some(lin) = mids[0].div_exact(&sxi) {
                let z_coeff = lin.coeff(&Monomial([1, 0, 0, 0]));
                let w_coeff = lin.coeff(&Monomial([0, 1, 0, 0]));
                if !z_coeff.is_zero() && lin.terms().all(|(m, _)| m.degree() == 1 && m.exp(Var::Chi) + m.exp(Var::Tau) == 0) {
                    // f₂ = (z − νw)ξ with ξ = z_coeff·σwξ/σ … normalize ξ^{(1,0)} = 1
                    let xi_raw = sxi.scale(&z_coeff);
                    let xi_jets = jets_of_quotient(&xi_raw, h.denominator())?;
                    if xi_jets[1].is_zero() {
                        return Ok(FactoredForm::Neither);
                    }
                    let norm = xi_jets[1].inv()?;
                    let xi = xi_raw.scale(&norm);
                    let nu = -&(&w_coeff / &z_coeff);
                    let sigma = &z_coeff / &norm;
                    return Ok(FactoredForm::LinearFactor { nu, sigma, xi });
                }
            }
        }
    }
    Ok(FactoredForm::Neither)
}

/// `(2z² + w²f₂^{(0,2)})·f_k − w(2z·f_k^{(1,1)} + w·f_k^{(0,2)})·f₂`, cleared
/// of `δ`, for each `k ≥ 3`.
pub fn dependence_residuals(h: &CRMap) -> Result<Vec<Poly>> {
    let n = h.target_dim();
    let taylor = h.body.taylor(2)?;
    let jet = |k: usize, m: Monomial| -> Scalar {
        // f^{(a,b)} = a!·b!·coefficient
        let fact: i64 = (1..=m.exp(Var::Z) as i64).product::<i64>() * (1..=m.exp(Var::W) as i64).product::<i64>();
        &taylor[k].coeff(&m) * &Scalar::from_int(fact)
    };
    let f2_02 = jet(1, Monomial([0, 2, 0, 0]));
    let left = build("2 z^2 + c w^2", &[("c", f2_02)]);
    let p2 = &h.numerators()[1];
    Ok((2..n - 1)
        .map(|k| {
            let consts = [
                ("a", jet(k, Monomial([1, 1, 0, 0]))),
                ("b", jet(k, Monomial([0, 2, 0, 0]))),
            ];
            let right = build("w (2 z a + w b)", &consts);
            &(&left * &h.numerators()[k]) - &(&right * p2)
        })
        .collect())
}

/// A named catalog entry.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub map: CRMap,
}

fn sphere_poly(src: &str, consts: &[(&str, Scalar)]) -> Poly {
    build(src, consts)
}

fn pad_before_last(mut comps: Vec<Poly>, n: usize) -> Vec<Poly> {
    let last = comps.pop().expect("nonempty");
    comps.resize(n - 1, Poly::zero());
    comps.push(last);
    comps
}

/// Whitney map `(z₁, z₁z₂, z₂²)` of `S³` into `S⁵`.
pub fn whitney() -> CRMap {
    CRMap::sphere(vec![sphere_poly("z", &[]), sphere_poly("z w", &[]), sphere_poly("w^2", &[])], Poly::one())
        .expect("valid")
}

/// `(z₁, √s z₂, √(1−s) z₁z₂, √(1−s) z₂²)` into `S⁷`, `0 ≤ s ≤ 1`.
pub fn dangelo(s: &Rational) -> Result<CRMap> {
    let s_s = Scalar::from_rational(s.clone());
    if !s_s.is_nonnegative() || (&Scalar::one() - &s_s).signum()? < 0 {
        return Err(violation("0 <= s <= 1", &s_s));
    }
    let c = [
        ("rs", s_s.sqrt_real()?),
        ("rt", (&Scalar::one() - &s_s).sqrt_real()?),
    ];
    CRMap::sphere(
        vec![
            sphere_poly("z", &c),
            sphere_poly("rs w", &c),
            sphere_poly("rt z w", &c),
            sphere_poly("rt w^2", &c),
        ],
        Poly::one(),
    )
}

/// `D^m_{s,t} = (√s z₁, √t z₂, √(1−s) z₁², √(2−s−t) z₁z₂, √(1−t) z₂², 0, …)`
/// with `0 ≤ s ≤ t ≤ 1`, `(s, t) ≠ (1, 1)`, `m ≥ 5`.
pub fn lebl(s: &Rational, t: &Rational, m: usize) -> Result<CRMap> {
    let (ss, ts) = (Scalar::from_rational(s.clone()), Scalar::from_rational(t.clone()));
    if !ss.is_nonnegative() || ss.cmp_real(&ts)? == std::cmp::Ordering::Greater || ts.cmp_real(&Scalar::one())? == std::cmp::Ordering::Greater {
        return Err(violation("0 <= s <= t <= 1", &(&ss - &ts)));
    }
    if ss.is_one() && ts.is_one() {
        return Err(violation("(s, t) != (1, 1)", &ss));
    }
    if m < 5 {
        return Err(violation("m >= 5", &Scalar::from_int(m as i64)));
    }
    let one = Scalar::one();
    let c = [
        ("a", ss.sqrt_real()?),
        ("b", ts.sqrt_real()?),
        ("c", (&one - &ss).sqrt_real()?),
        ("d", (&(&Scalar::from_int(2) - &ss) - &ts).sqrt_real()?),
        ("e", (&one - &ts).sqrt_real()?),
    ];
    let mut comps: Vec<Poly> = ["a z", "b w", "c z^2", "d z w", "e w^2"]
        .iter()
        .map(|src| sphere_poly(src, &c))
        .collect();
    comps.resize(m, Poly::zero());
    CRMap::sphere(comps, Poly::one())
}

/// Faran's four maps of `S³` into `S⁵`, indexed 1..=4. The second is
/// `(z₁, z₁z₂, z₂²)`; the variant `(z₁, z₁z₂, z₁²z₂)` is not a sphere map.
pub fn faran(which: usize) -> Result<CRMap> {
    let srcs: [&str; 3] = match which {
        1 => ["z^2", "sqrt(2) z w", "w^2"],
        2 => ["z", "z w", "w^2"],
        3 => ["z^3", "sqrt(3) z w", "w^3"],
        4 => ["z", "w", "0"],
        _ => return Err(Error::Parse(format!("Faran map index {which} is not in 1..=4"))),
    };
    CRMap::sphere(srcs.iter().map(|s| sphere_poly(s, &[])).collect(), Poly::one())
}

/// The explicit degree-three maps, corrected so that they satisfy the
/// mapping equation.
pub fn explicit_map(name: &str, n: usize) -> Result<CRMap> {
    let s15 = [("s15", Scalar::sqrt_int(15)), ("s5", Scalar::sqrt_int(5))];
    let p = |src: &str| build(src, &s15);
    let heis = |comps: Vec<Poly>, d: Poly| CRMap::heisenberg(pad_before_last(comps, n), d);
    let sph = |comps: Vec<Poly>, d: Poly| CRMap::sphere(pad_before_last(comps, n), d);
    let need = |min: usize| -> Result<()> {
        if n < min {
            Err(Error::DimensionMismatch(format!("{name} needs N >= {min}, got {n}")))
        } else {
            Ok(())
        }
    };
    match name {
        "h14" | "h14-verbatim" => {
            need(4)?;
            let g = if name == "h14" { "-18 i w (w + 3 i)" } else { "18 w (w + 3 i)" };
            heis(
                vec![
                    p("3 (w^2 (2 z + 3) + 3 i w z (2 z + 1) + 18 z)"),
                    p("18 z^2 (2 z + 3)"),
                    p("-3 w (2 z + 3) (w - 3 i z)"),
                    p(g),
                ],
                p("54 + 4 i w^3 - 3 w^2 (4 z + 7) - 18 i w (z + 1)"),
            )
        }
        "h24" | "h2n" | "h24-verbatim" => {
            need(4)?;
            let k = if name == "h24-verbatim" { "1" } else { "2" };
            heis(
                vec![
                    p("i z (3 w^2 + 3 i w - 8 z^2 - 2)"),
                    p(&format!("{k} (i - w) (w^2 - z^2)")),
                    p("s15 (w - i) z w"),
                    p(&format!("{k} i w (w^2 + 2 i w - 4 z^2 - 1)")),
                ],
                p("2 (w^3 + 2 i w^2 + 2 w (z^2 - 1) - i (4 z^2 + 1))"),
            )
        }
        "h1n" => {
            need(5)?;
            heis(
                vec![
                    p("s5 (w^2 (2 z + 1) + i z w (2 z - 1) + 2 z)"),
                    p("2 s5 z^2 (2 z + 1)"),
                    p("w (2 z + 1) (w - 5 i z)"),
                    p("2 i w^2 (2 z + 1)"),
                    p("2 s5 w (w + i)"),
                ],
                p("s5 (2 i - 4 w^3 - i w^2 (4 z + 5) + 2 w (z + 1))"),
            )
        }
        "f14" => {
            need(4)?;
            sph(
                vec![
                    p("6 ((19 w^2 + 40 w + 13) z + 6 (w - 1) z^2 - 3 (w + 1) (w - 1)^2)"),
                    p("36 z^2 (3 w + 2 z + 3)"),
                    p("-6 i (w - 1) (3 w + 2 z + 3) (w + 3 z - 1)"),
                    p("25 + 111 w - 6 (w^2 + 4 w - 5) z + 207 w^2 + 89 w^3"),
                ],
                p("169 + 183 w - 6 (w^2 + 4 w - 5) z + 63 w^2 + 17 w^3"),
            )
        }
        "f24" | "f2n" => {
            need(4)?;
            sph(
                vec![
                    p("z (w^2 - w + 4 z^2 + 4)"),
                    p("2 w ((w - 1)^2 + z^2)"),
                    p("s15 i (1 - w) z w"),
                    p("(5 w - 1) z^2 + (w + 1)^2"),
                ],
                p("5 - 2 w + w^2 + (w + 3) z^2"),
            )
        }
        "f1n" => {
            need(5)?;
            sph(
                vec![
                    p("2 s5 ((1 + 8 w - w^2) z + 2 (w - 1) z^2 - (w + 1) (w - 1)^2)"),
                    p("4 s5 z^2 (w + 2 z + 1)"),
                    p("2 i (1 - w) (w + 2 z + 1) (w + 5 z - 1)"),
                    p("-4 (w - 1)^2 (w + 2 z + 1)"),
                    p("s5 (9 - 9 w + 2 (w^2 - 4 w + 3) z + 15 w^2 + w^3)"),
                ],
                p("s5 (17 - 9 w + 2 (w^2 - 4 w + 3) z + 7 w^2 + w^3)"),
            )
        }
        _ => Err(Error::Parse(format!("unknown explicit map {name:?}"))),
    }
}

/// Names accepted by [`explicit_map`], with their smallest target dimension.
pub const EXPLICIT_MAPS: [(&str, usize); 8] = [
    ("h14", 4),
    ("h24", 4),
    ("h1n", 5),
    ("h2n", 5),
    ("f14", 4),
    ("f24", 4),
    ("f1n", 5),
    ("f2n", 5),
];

/// Every named map at its default size.
pub fn catalog() -> Vec<CatalogEntry> {
    let half = Rational::new(1.into(), 2.into());
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let mut out = vec![
        CatalogEntry {
            name: "linear".into(),
            description: "linear embedding into H^7".into(),
            map: CRMap::linear_embedding(4).expect("valid"),
        },
        CatalogEntry {
            name: "whitney".into(),
            description: "Whitney map of S^3 into S^5".into(),
            map: whitney(),
        },
        CatalogEntry {
            name: "dangelo".into(),
            description: "D'Angelo map F_s, s = 1/2".into(),
            map: dangelo(&half).expect("valid"),
        },
        CatalogEntry {
            name: "lebl".into(),
            description: "monomial map D^5_{0,1/2}".into(),
            map: lebl(&zero, &half, 5).expect("valid"),
        },
        CatalogEntry {
            name: "lebl-0-1".into(),
            description: "monomial map D^5_{0,1}".into(),
            map: lebl(&zero, &one, 5).expect("valid"),
        },
    ];
    for k in 1..=4 {
        out.push(CatalogEntry {
            name: format!("faran-{k}"),
            description: format!("Faran map {k} of S^3 into S^5"),
            map: faran(k).expect("valid"),
        });
    }
    for (name, n) in EXPLICIT_MAPS {
        out.push(CatalogEntry {
            name: name.into(),
            description: format!("explicit degree-three map, N = {n}"),
            map: explicit_map(name, n).expect("valid"),
        });
    }
    for name in ["h14-verbatim", "h24-verbatim"] {
        out.push(CatalogEntry {
            name: name.into(),
            description: "explicit map with coefficients as printed".into(),
            map: explicit_map(name, 4).expect("valid"),
        });
    }
    out
}

pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// A sphere map moved to Heisenberg coordinates on both sides.
pub fn to_heisenberg(h: &CRMap) -> Result<CRMap> {
    match (h.source, h.target) {
        (ModelKind::Heisenberg, ModelKind::Heisenberg) => Ok(h.clone()),
        (ModelKind::Sphere, ModelKind::Sphere) => cayley(h, CayleyDirection::SphereToHeisenberg, Side::Both),
        (ModelKind::Sphere, _) => cayley(h, CayleyDirection::SphereToHeisenberg, Side::Source),
        (_, ModelKind::Sphere) => cayley(h, CayleyDirection::SphereToHeisenberg, Side::Target),
    }
}

/// `mapping_residual` reduced to a flag.
pub fn verifies(h: &CRMap) -> Result<bool> {
    Ok(mapping_residual(h)?.is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::image_dimension;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn fam_i(mu: Rational, lam: &str, n: usize) -> CRMap {
        family_thm_i(&FamilyIParams::new(mu, q(lam), n).unwrap()).unwrap()
    }

    fn fam_ii(a: Rational, lam: &str, n: usize) -> CRMap {
        family_thm_ii(&FamilyIIParams::new(a, q(lam), n).unwrap()).unwrap()
    }

    #[test]
    fn family_i_grid_verifies() {
        for (mu, lam, n) in [(r(1, 3), "1/3", 4), (r(1, 3), "1/4", 5), (r(5, 6), "1", 5), (r(1, 1), "1", 5), (r(1, 1), "1", 6)] {
            let h = fam_i(mu.clone(), lam, n);
            assert!(verifies(&h).unwrap(), "mu={mu} lambda={lam} N={n}");
        }
    }

    #[test]
    fn family_ii_grid_verifies() {
        for (a, lam, n) in [(r(-1, 1), "0", 4), (r(-1, 16), "1/2", 4), (r(-1, 1), "1", 5), (r(-1, 16), "1/2", 3)] {
            assert!(verifies(&fam_ii(a.clone(), lam, n)).unwrap(), "a={a} lambda={lam} N={n}");
        }
    }

    #[test]
    fn constraint_violations() {
        let e = FamilyIParams::new(r(1, 6), q("1/10"), 5).unwrap_err();
        assert!(matches!(e, Error::ConstraintViolation { ref constraint, .. } if constraint.contains("mu > 1/6")));
        assert!(FamilyIParams::new(r(1, 3), q("1/4"), 4).is_err());
        assert!(FamilyIParams::new(r(1, 3), q("1/2"), 5).is_err());
        assert!(FamilyIParams::new(r(1, 3), q("0"), 5).is_err());
        let e = FamilyIIParams::new(r(-1, 32), q("0"), 4).unwrap_err();
        assert!(matches!(e, Error::ConstraintViolation { ref constraint, .. } if constraint.contains("a <= -1/16")));
        assert!(FamilyIIParams::new(r(-1, 1), q("-1"), 4).is_err());
        assert!(FamilyIIParams::new(r(-1, 1), q("0"), 3).is_err());
    }

    #[test]
    fn b4_phase_reproduces_explicit_map() {
        let p = FamilyIParams::new(r(1, 1), q("1"), 5).unwrap();
        assert_eq!(p.b4.norm_sqr(), q("1/5"));
        assert_eq!(p.b4, q("1/5 i * sqrt(5)"));
        let phases = phases_between(&family_thm_i(&p).unwrap(), &explicit_map("h1n", 5).unwrap()).unwrap();
        assert_eq!(phases, vec![q("i"), q("i"), q("-1"), q("i")]);
    }

    #[test]
    fn families_reproduce_explicit_maps() {
        let h14 = explicit_map("h14", 4).unwrap();
        let phases = phases_between(&fam_i(r(1, 3), "1/3", 4), &h14).unwrap();
        assert_eq!(phases, vec![q("1"), q("1"), q("-i")]);
        let h24 = explicit_map("h24", 4).unwrap();
        assert_eq!(phases_between(&fam_ii(r(-1, 1), "0", 4), &h24).unwrap(), vec![Scalar::one(); 3]);
        assert!(fam_ii(r(-1, 1), "0", 4).cross_eq(&h24));
    }

    #[test]
    fn explicit_maps_verify_and_printed_ones_do_not() {
        for (name, n) in EXPLICIT_MAPS {
            assert!(verifies(&explicit_map(name, n).unwrap()).unwrap(), "{name}");
        }
        assert!(!verifies(&explicit_map("h14-verbatim", 4).unwrap()).unwrap());
        assert!(!verifies(&explicit_map("h24-verbatim", 4).unwrap()).unwrap());
    }

    #[test]
    fn classical_maps_verify() {
        for e in catalog() {
            if e.name.ends_with("verbatim") {
                continue;
            }
            assert!(verifies(&e.map).unwrap(), "{}", e.name);
        }
        let d = lebl(&r(0, 1), &r(1, 1), 5).unwrap();
        assert_eq!(d.numerators()[0], Poly::zero());
        assert_eq!(d.numerators()[4], Poly::zero());
        let printed = CRMap::sphere(vec![build("z", &[]), build("w z", &[]), build("w z^2", &[])], Poly::one()).unwrap();
        assert!(!verifies(&printed).unwrap());
        assert!(lebl(&r(1, 1), &r(1, 1), 5).is_err());
        assert!(lebl(&r(1, 2), &r(1, 3), 5).is_err());
    }

    #[test]
    fn functional_equations() {
        for (mu, lam, n) in [(r(1, 3), "1/3", 4), (r(1, 3), "1/4", 5), (r(1, 1), "1", 5), (r(5, 6), "1/2", 6)] {
            let p = FamilyIParams::new(mu, q(lam), n).unwrap();
            let h = family_thm_i(&p).unwrap();
            let cp = CaseIParams::from_family_i(&p);
            for e in [Equation::E1, Equation::E2, Equation::E3] {
                assert!(check_functional_equation(&h, e, &cp).unwrap().verified, "{e:?} {lam}");
            }
        }
        let p = FamilyIIParams::new(r(-1, 1), q("0"), 4).unwrap();
        let h = family_thm_ii(&p).unwrap();
        let cp = CaseIParams::from_family_ii(&p);
        assert!(check_functional_equation(&h, Equation::E1, &cp).unwrap().verified);
        assert!(matches!(check_functional_equation(&h, Equation::E2, &cp), Err(Error::ShapeMismatch(_))));
        // wrong r breaks the second equation
        let p = FamilyIParams::new(r(1, 3), q("1/3"), 4).unwrap();
        let mut cp = CaseIParams::from_family_i(&p);
        cp.r = q("1/3");
        assert!(!check_functional_equation(&family_thm_i(&p).unwrap(), Equation::E2, &cp).unwrap().verified);
    }

    #[test]
    fn image_dimensions() {
        assert_eq!(image_dimension(&fam_i(r(1, 1), "1", 6)), 5);
        assert_eq!(image_dimension(&fam_i(r(1, 1), "1", 7)), 5);
        assert_eq!(image_dimension(&fam_ii(r(-1, 1), "1", 6)), 4);
        assert_eq!(image_dimension(&explicit_map("h2n", 6).unwrap()), 4);
    }

    #[test]
    fn effective_degrees() {
        let h = fam_i(r(1, 3), "1/3", 4);
        let e = effective_degree(&h, 0);
        assert_eq!((e.degree, e.effective), (3, 3));
        let padded = CRMap::heisenberg(
            h.numerators().iter().map(|p| p * &poly_z_plus_one()).collect(),
            h.denominator() * &poly_z_plus_one(),
        )
        .unwrap();
        let e = effective_degree(&padded, 0);
        assert_eq!((e.degree, e.common_factor_degree, e.effective), (4, 1, 3));
    }

    fn poly_z_plus_one() -> Poly {
        build("z + 1", &[])
    }

    #[test]
    fn factored_forms() {
        match lemma44_factored_form(&fam_i(r(1, 3), "1/3", 4)).unwrap() {
            FactoredForm::QuadraticFactor { a, phi_jets, .. } => {
                assert!(a.is_zero());
                assert!(phi_jets[0].is_one());
                assert_eq!(phi_jets[1], q("2/3"));
            }
            other => panic!("{other:?}"),
        }
        match lemma44_factored_form(&fam_ii(r(-1, 1), "1", 4)).unwrap() {
            FactoredForm::QuadraticFactor { a, .. } => assert_eq!(a, q("-1")),
            other => panic!("{other:?}"),
        }
        assert_eq!(lemma44_factored_form(&CRMap::linear_embedding(4).unwrap()).unwrap(), FactoredForm::Neither);
    }

    #[test]
    fn dependence_identity_on_families() {
        for h in [fam_i(r(1, 3), "1/3", 4), fam_i(r(1, 1), "1", 6), fam_ii(r(-1, 1), "1", 5)] {
            assert!(dependence_residuals(&h).unwrap().iter().all(Poly::is_zero));
        }
    }
}
