//! The CR field `L = ∂_χ − 2iz ∂_τ`, the spaces `E_k`, pointwise and
//! tangential degeneracy, and the image-dimension bound.
//!
//! `L^k f̄` at `(p, q̄)` is `k!` times the `t^k` coefficient of
//! `f̄(χ + t, τ − 2iz t)`, so every L-derivative comes from one truncated
//! series division instead of repeated symbolic differentiation.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::{on_heisenberg, CRMap, ModelKind};
use crate::linalg::{minors_vanish, rank_exact, rank_float, FloatRank};
use crate::poly::{Monomial, Poly, Var};
use crate::scalar::{Coeff, FloatComplex, Rational, Scalar};
use crate::series::Series;

/// Default relative singular-value threshold of the float backend.
pub const FLOAT_RANK_TOL: f64 = 1e-8;
/// Default tolerance for float points to count as lying on `ℍ³`.
pub const FLOAT_MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// A point of the source `(z, w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SourcePoint {
    Exact([Scalar; 2]),
    /// `[[Re z, Im z], [Re w, Im w]]`
    Float([[f64; 2]; 2]),
}

impl SourcePoint {
    pub fn exact(z: Scalar, w: Scalar) -> Self {
        SourcePoint::Exact([z, w])
    }

    pub fn to_float(&self) -> [FloatComplex; 2] {
        match self {
            SourcePoint::Exact([z, w]) => [z.to_float(), w.to_float()],
            SourcePoint::Float([z, w]) => [FloatComplex::new(z[0], z[1]), FloatComplex::new(w[0], w[1])],
        }
    }

    pub fn to_float_point(&self) -> SourcePoint {
        let [z, w] = self.to_float();
        SourcePoint::Float([[z.re, z.im], [w.re, w.im]])
    }
}

/// `k`-fold application of `L = ∂_χ − 2iz ∂_τ`.
pub fn l_apply(a: &Poly, k: u32) -> Poly {
    let two_i_z = Poly::var(Var::Z).scale(&(&Scalar::from_int(2) * &Scalar::i()));
    let mut cur = a.clone();
    for _ in 0..k {
        cur = &cur.diff(Var::Chi, 1) - &(&two_i_z * &cur.diff(Var::Tau, 1));
    }
    cur
}

/// Taylor coefficients in `t` of `f̄_j(χ₀ + t, τ₀ − 2iz₀t)` for the first
/// `N−1` components, up to `order`. Row `k` equals `L^k f̄ / k!` at `(p, p̄)`.
fn conj_series<C: Coeff>(
    h: &CRMap,
    z0: C,
    chi0: C,
    tau0: C,
    order: usize,
    lift: impl Fn(&Scalar) -> C + Copy,
) -> Result<Vec<Vec<C>>> {
    let n = h.target_dim();
    let minus_two_i = lift(&(&Scalar::from_int(-2) * &Scalar::i()));
    let args = [
        Series::zero(order),
        Series::zero(order),
        Series::linear(chi0, C::one(), order),
        Series::linear(tau0, minus_two_i.times(&z0), order),
    ];
    let den = h.denominator().conjugate().eval_series(&args, lift);
    if den.coeff(0).is_zero() {
        return Err(Error::PoleAtPoint("denominator vanishes".into()));
    }
    let cols: Vec<Vec<C>> = h.numerators()[..n - 1]
        .iter()
        .map(|p| {
            let s = p.conjugate().eval_series(&args, lift).div(&den)?;
            Ok(s.into_coeffs())
        })
        .collect::<Result<_>>()?;
    Ok((0..=order)
        .map(|k| cols.iter().map(|c| c[k].clone()).collect())
        .collect())
}

/// The vectors `v_0 = (f̄(p̄), i/2)` and `v_m = (L^m f̄(p), 0)`, `m ≤ k`,
/// spanning `E_k(p)` (each `v_m` is divided by `m!`).
pub fn ek_basis(h: &CRMap, p: &[Scalar; 2], k: usize) -> Result<Vec<Vec<Scalar>>> {
    check_heisenberg(h)?;
    let [z0, w0] = p;
    if !on_heisenberg(z0, w0) {
        return Err(Error::NotOnHypersurface(format!("({z0}, {w0})")));
    }
    let rows = conj_series(h, z0.clone(), z0.conj(), w0.conj(), k, |s| s.clone())
        .map_err(|_| Error::PoleAtPoint(format!("({z0}, {w0})")))?;
    Ok(with_last(rows, Scalar::i().scale(&Rational::new(1.into(), 2.into())), Scalar::zero()))
}

fn with_last<C: Clone>(rows: Vec<Vec<C>>, first: C, rest: C) -> Vec<Vec<C>> {
    rows.into_iter()
        .enumerate()
        .map(|(k, mut r)| {
            r.push(if k == 0 { first.clone() } else { rest.clone() });
            r
        })
        .collect()
}

fn check_heisenberg(h: &CRMap) -> Result<()> {
    if h.source != ModelKind::Heisenberg || h.target != ModelKind::Heisenberg {
        return Err(Error::ModelMismatch(
            "degeneracy is computed for Heisenberg maps; apply the Cayley transform first".into(),
        ));
    }
    Ok(())
}

/// Worst-case singular-value data over all `E_k` of a float report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatGap {
    /// Smallest kept singular value relative to the largest, over all k.
    pub min_kept: f64,
    /// Largest dropped singular value relative to the largest, over all k.
    pub max_dropped: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub point: SourcePoint,
    /// `dim E_k` for `k = 0, 1, 2, …`
    pub ranks: Vec<usize>,
    pub s: usize,
    pub k0: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<FloatGap>,
}

impl DegeneracyReport {
    /// `N = s + k₀ + 1`.
    pub fn satisfies_dimension_identity(&self, n: usize) -> bool {
        n == self.s + self.k0 + 1
    }
}

/// Iterate `k` until the ranks settle: at least to `N−1`, then onwards while
/// the rank still grows (capped at `2N`).
fn settle(n: usize, mut rank_at: impl FnMut(usize) -> usize) -> (Vec<usize>, usize, usize) {
    let mut ranks = Vec::new();
    for k in 0..=2 * n {
        let r = rank_at(k);
        ranks.push(r);
        let grew = k > 0 && ranks[k] > ranks[k - 1];
        if k + 1 >= n && (!grew || r == n) {
            break;
        }
    }
    let max = *ranks.iter().max().expect("nonempty");
    let k0 = ranks.iter().position(|r| *r == max).expect("present");
    (ranks, n - max, k0)
}

pub fn degeneracy_at(h: &CRMap, p: &SourcePoint) -> Result<DegeneracyReport> {
    match p {
        SourcePoint::Exact(pt) => degeneracy_exact(h, pt),
        SourcePoint::Float(_) => degeneracy_float(h, p, FLOAT_RANK_TOL, FLOAT_MEMBERSHIP_TOL),
    }
}

pub fn degeneracy_exact(h: &CRMap, p: &[Scalar; 2]) -> Result<DegeneracyReport> {
    let n = h.target_dim();
    let rows = ek_basis(h, p, 2 * n)?;
    let (ranks, s, k0) = settle(n, |k| rank_exact(&rows[..=k]));
    Ok(DegeneracyReport {
        point: SourcePoint::Exact(p.clone()),
        ranks,
        s,
        k0,
        mode: Mode::Exact,
        gap: None,
    })
}

pub fn degeneracy_float(h: &CRMap, p: &SourcePoint, rank_tol: f64, membership_tol: f64) -> Result<DegeneracyReport> {
    check_heisenberg(h)?;
    let n = h.target_dim();
    let [z0, w0] = p.to_float();
    if (w0.im - z0.norm_sqr()).abs() > membership_tol * w0.norm().max(1.0) {
        return Err(Error::NotOnHypersurface(format!("({z0}, {w0})")));
    }
    let rows = conj_series(h, z0, z0.conj(), w0.conj(), 2 * n, Scalar::to_float)
        .map_err(|_| Error::PoleAtPoint(format!("({z0}, {w0})")))?;
    let scale: Vec<Vec<FloatComplex>> = rows
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            // restore the k! so rows are the actual L^k f̄
            let f: f64 = (1..=k).map(|j| j as f64).product();
            r.into_iter().map(|x| x * f).collect()
        })
        .collect();
    let rows = with_last(scale, FloatComplex::new(0.0, 0.5), FloatComplex::new(0.0, 0.0));
    let mut min_kept = f64::INFINITY;
    let mut max_dropped: f64 = 0.0;
    let (ranks, s, k0) = settle(n, |k| {
        let fr: FloatRank = rank_float(&rows[..=k], rank_tol);
        if let Some(m) = fr.min_kept {
            min_kept = min_kept.min(m);
        }
        if let Some(d) = fr.max_dropped {
            max_dropped = max_dropped.max(d);
        }
        fr.rank
    });
    Ok(DegeneracyReport {
        point: p.to_float_point(),
        ranks,
        s,
        k0,
        mode: Mode::Float,
        gap: Some(FloatGap { min_kept, max_dropped }),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentialReport {
    pub q: [Scalar; 2],
    /// Generic `dim Ẽ_ℓ` along the Segre variety, `ℓ = 0, …, N−1`.
    pub generic_ranks: Vec<usize>,
    /// Smallest `ℓ` with `Ẽ_ℓ = Ẽ` generically.
    pub k: usize,
    /// `N − 1 − dim Ẽ`.
    pub tdeg: usize,
    /// Every reported rank `r` below full size was confirmed by the vanishing
    /// of all `(r+1)`-minors.
    pub certified: bool,
}

/// Rows `ℓ = 0..=order` of `L^ℓ f̄ / ℓ!` along `S_q`, as polynomials in the
/// free parameter `z` of `p = (z, τ_q + 2izχ_q)`.
pub fn segre_matrix(h: &CRMap, q: &[Scalar; 2], order: usize) -> Result<Vec<Vec<Poly>>> {
    check_heisenberg(h)?;
    let z = Poly::var(Var::Z);
    conj_series(
        h,
        z,
        Poly::constant(q[0].conj()),
        Poly::constant(q[1].conj()),
        order,
        |s| Poly::constant(s.clone()),
    )
    .map_err(|_| Error::PoleOnSegre)
}

fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Scalar {
    Scalar::from_ratio(rng.random_range(-bound..=bound), rng.random_range(1..=bound))
}

/// Generic rank of a polynomial matrix in `z`: random evaluation gives a
/// lower bound, vanishing minors certify it.
fn generic_rank<R: Rng>(m: &[Vec<Poly>], rng: &mut R) -> (usize, bool) {
    let full = m.len().min(m.first().map_or(0, Vec::len));
    let mut r = 0;
    for _ in 0..2 {
        let t = random_rational(rng, 97);
        let at = |p: &Poly| p.eval(&[t.clone(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
        let vals: Vec<Vec<Scalar>> = m.iter().map(|row| row.iter().map(at).collect()).collect();
        r = r.max(rank_exact(&vals));
    }
    while r < full && !minors_vanish(m, r + 1) {
        r += 1;
    }
    (r, true)
}

pub fn tangential_degeneracy(h: &CRMap, q: &[Scalar; 2], seed: u64) -> Result<TangentialReport> {
    let n = h.target_dim();
    let m = segre_matrix(h, q, n - 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generic_ranks = Vec::with_capacity(n);
    let mut certified = true;
    for l in 0..n {
        let (r, c) = generic_rank(&m[..=l], &mut rng);
        certified &= c;
        generic_ranks.push(r);
    }
    let top = *generic_ranks.iter().max().expect("nonempty");
    let k = generic_ranks.iter().position(|r| *r == top).expect("present");
    Ok(TangentialReport {
        q: q.clone(),
        generic_ranks,
        k,
        tdeg: n - 1 - top,
        certified,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusEntry {
    pub point: SourcePoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<DegeneracyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusReport {
    pub entries: Vec<LocusEntry>,
    /// Most frequent degeneracy among the sampled points.
    pub generic_s: Option<usize>,
    /// Indices of points where `s` exceeds the generic value.
    pub exceptional: Vec<usize>,
}

pub fn degeneracy_locus_sample(h: &CRMap, points: &[SourcePoint]) -> LocusReport {
    degeneracy_locus_sample_with(h, points, FLOAT_RANK_TOL)
}

/// As [`degeneracy_locus_sample`], with the float rank threshold given.
pub fn degeneracy_locus_sample_with(h: &CRMap, points: &[SourcePoint], rank_tol: f64) -> LocusReport {
    let entries: Vec<LocusEntry> = points
        .iter()
        .map(|p| {
            let r = match p {
                SourcePoint::Exact(pt) => degeneracy_exact(h, pt),
                SourcePoint::Float(_) => degeneracy_float(h, p, rank_tol, FLOAT_MEMBERSHIP_TOL),
            };
            (p, r)
        })
        .map(|(p, r)| match r {
            Ok(r) => LocusEntry {
                point: p.clone(),
                report: Some(r),
                error: None,
            },
            Err(e) => LocusEntry {
                point: p.clone(),
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &entries {
        if let Some(r) = &e.report {
            *counts.entry(r.s).or_default() += 1;
        }
    }
    let generic_s = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(s, _)| *s);
    let exceptional = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!((&e.report, generic_s), (Some(r), Some(g)) if r.s > g))
        .map(|(i, _)| i)
        .collect();
    LocusReport {
        entries,
        generic_s,
        exceptional,
    }
}

/// Dimension of the complex-linear span of the image: rank of the
/// coefficient matrix of the numerators.
pub fn image_dimension(h: &CRMap) -> usize {
    let monomials: Vec<Monomial> = {
        let mut set: Vec<Monomial> = h
            .numerators()
            .iter()
            .flat_map(|p| p.terms().map(|(m, _)| *m))
            .collect();
        set.sort();
        set.dedup();
        set
    };
    let rows: Vec<Vec<Scalar>> = h
        .numerators()
        .iter()
        .map(|p| monomials.iter().map(|m| p.coeff(m)).collect())
        .collect();
    rank_exact(&rows)
}

/// `C(k₀ + 2, 2)`
pub fn image_dimension_bound(k0: usize) -> usize {
    (k0 + 2) * (k0 + 1) / 2
}

/// A random point of `ℍ³` with small rational coordinates, away from 0.
pub fn random_heisenberg_point<R: Rng>(rng: &mut R, bound: i64) -> [Scalar; 2] {
    loop {
        let x = random_rational(rng, bound);
        let y = random_rational(rng, bound);
        let u = random_rational(rng, bound);
        let z = &x + &(&y * &Scalar::i());
        if z.is_zero() {
            continue;
        }
        let w = &u + &(&z.norm_sqr() * &Scalar::i());
        return [z, w];
    }
}

/// Random points of `ℍ³` avoiding the poles of `h`.
pub fn random_points(h: &CRMap, count: usize, seed: u64) -> Vec<[Scalar; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_heisenberg_point(&mut rng, 5);
        if h.eval(&p[0], &p[1]).is_ok() {
            out.push(p);
        }
    }
    out
}

/// Whether the map is constant: `P_k·δ(0) = P_k(0)·δ` for every component.
pub fn is_constant_map(h: &CRMap) -> bool {
    let d0 = Poly::constant(h.denominator().constant_term());
    h.numerators()
        .iter()
        .all(|p| (p * &d0) == (&Poly::constant(p.constant_term()) * h.denominator()))
}

/// Structural hints from the degeneracy results: a map of degeneracy `N−1`
/// must be constant, and a tangentially `(1, N−2)`-degenerate one is
/// expected to be equivalent to the linear embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detectors {
    pub constant: bool,
    pub maximally_degenerate_at_0: bool,
    pub tangentially_one_degenerate_at_0: bool,
    pub image_dimension: usize,
}

pub fn detectors(h: &CRMap) -> Result<Detectors> {
    let n = h.target_dim();
    let origin = [Scalar::zero(), Scalar::zero()];
    let d = degeneracy_exact(h, &origin)?;
    let t = tangential_degeneracy(h, &origin, 0)?;
    Ok(Detectors {
        constant: is_constant_map(h),
        maximally_degenerate_at_0: d.s == n - 1,
        tangentially_one_degenerate_at_0: t.k <= 1 && t.tdeg + 2 == n,
        image_dimension: image_dimension(h),
    })
}

/// Parse a grid over the chart `(Re z, Im z, Re w)` of `ℍ³`, with
/// `Im w = |z|²`. Axes are `x=a..b:n`, `y=…`, `u=…` separated by commas;
/// `t=a..b:n` is shorthand for real `z = t` and `Re w = 0`.
pub fn parse_grid(spec: &str) -> Result<Vec<[Scalar; 2]>> {
    let mut axes: BTreeMap<String, Vec<Scalar>> = BTreeMap::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, range) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("grid axis {part:?} needs name=a..b:n")))?;
        let (bounds, count) = range.rsplit_once(':').unwrap_or((range, "1"));
        let (a, b) = bounds.split_once("..").unwrap_or((bounds, bounds));
        let a: Scalar = a.trim().parse()?;
        let b: Scalar = b.trim().parse()?;
        if !a.is_rational() || !b.is_rational() {
            return Err(Error::Parse(format!("grid bounds must be rational in {part:?}")));
        }
        let n: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad point count in {part:?}")))?;
        if n == 0 {
            return Err(Error::Parse(format!("empty axis {part:?}")));
        }
        let vals = (0..n)
            .map(|j| {
                if n == 1 {
                    a.clone()
                } else {
                    &a + &(&b - &a).scale(&Rational::new((j as i64).into(), ((n - 1) as i64).into()))
                }
            })
            .collect();
        let name = name.trim().to_string();
        if !matches!(name.as_str(), "x" | "y" | "u" | "t") {
            return Err(Error::Parse(format!("unknown grid axis {name:?}")));
        }
        if axes.insert(name.clone(), vals).is_some() {
            return Err(Error::Parse(format!("axis {name:?} given twice")));
        }
    }
    if axes.contains_key("t") && axes.len() > 1 {
        return Err(Error::Parse("axis t cannot be combined with x, y, u".into()));
    }
    let zero = vec![Scalar::zero()];
    let mut out = Vec::new();
    if let Some(ts) = axes.get("t") {
        for t in ts {
            let w = &t.norm_sqr() * &Scalar::i();
            out.push([t.clone(), w]);
        }
        return Ok(out);
    }
    for x in axes.get("x").unwrap_or(&zero) {
        for y in axes.get("y").unwrap_or(&zero) {
            for u in axes.get("u").unwrap_or(&zero) {
                let z = x + &(y * &Scalar::i());
                let w = u + &(&z.norm_sqr() * &Scalar::i());
                out.push([z, w]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    #[test]
    fn l_on_coordinates() {
        assert_eq!(l_apply(&poly("chi"), 1), Poly::one());
        assert_eq!(l_apply(&poly("tau"), 1), poly("-2 i z"));
        assert!(l_apply(&poly("chi tau"), 3).is_zero());
    }

    #[test]
    fn series_rows_match_l_apply() {
        // f = (z + w^2 + z w, z^2 - i w) / (1 + z w)
        let h = CRMap::heisenberg(
            vec![poly("z + w^2 + z w"), poly("z^2 - i w"), poly("w")],
            poly("1 + 1/3 z w"),
        )
        .unwrap();
        let p = [Scalar::from_ratio(1, 2), "1/3 + 1/4 i".parse().unwrap()];
        let rows = ek_basis(&h, &p, 3).unwrap();
        // L^2 of a polynomial component: check via l_apply on the polynomial numerator
        let h2 = CRMap::heisenberg(vec![poly("z + w^2 + z w"), poly("z^2 - i w"), poly("w")], Poly::one()).unwrap();
        let rows2 = ek_basis(&h2, &p, 3).unwrap();
        let f1bar = poly("z + w^2 + z w").conjugate();
        let at = [p[0].clone(), p[1].clone(), p[0].conj(), p[1].conj()];
        assert_eq!(&l_apply(&f1bar, 2).eval(&at).scale(&Rational::new(1.into(), 2.into())), &rows2[2][0]);
        assert_eq!(rows[0].len(), 3);
    }

    #[test]
    fn linear_embedding_profile() {
        let h = CRMap::linear_embedding(4).unwrap();
        let r = degeneracy_exact(&h, &[Scalar::zero(), Scalar::zero()]).unwrap();
        assert_eq!(r.ranks[1..].iter().max(), Some(&2));
        assert_eq!((r.s, r.k0), (2, 1));
        let t = tangential_degeneracy(&h, &[Scalar::zero(), Scalar::zero()], 3).unwrap();
        assert_eq!(t.tdeg, 2);
        assert_eq!(image_dimension(&h), 2);
    }

    #[test]
    fn constant_map_profile() {
        let h = CRMap::constant(3).unwrap();
        let r = degeneracy_exact(&h, &[Scalar::zero(), Scalar::zero()]).unwrap();
        assert_eq!(r.s, 2);
        assert!(is_constant_map(&h));
        assert!(!is_constant_map(&CRMap::linear_embedding(3).unwrap()));
    }

    #[test]
    fn off_hypersurface_point_rejected() {
        let h = CRMap::linear_embedding(3).unwrap();
        let bad = [Scalar::one(), Scalar::zero()];
        assert!(matches!(degeneracy_exact(&h, &bad), Err(Error::NotOnHypersurface(_))));
        let fp = SourcePoint::Float([[1.0, 0.0], [0.0, 1.0 + 1e-6]]);
        assert!(degeneracy_at(&h, &fp).is_err());
    }

    #[test]
    fn pole_is_reported() {
        let h = CRMap::heisenberg(vec![poly("z"), poly("w")], poly("1 - w + i")).unwrap();
        let p = [Scalar::zero(), "1 + i".parse().unwrap()];
        // w = 1 + i is not on H^3 unless |z|^2 = 1; choose z = 1
        let p = [Scalar::one(), p[1].clone()];
        assert!(matches!(degeneracy_exact(&h, &p), Err(Error::PoleAtPoint(_))));
    }

    #[test]
    fn grids() {
        let pts = parse_grid("t=-2..2:9").unwrap();
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().all(|[z, w]| on_heisenberg(z, w)));
        assert_eq!(pts[4][0], Scalar::zero());
        let pts = parse_grid("x=0..1:2, y=1/2, u=-1..1:3").unwrap();
        assert_eq!(pts.len(), 6);
        assert!(parse_grid("q=0..1:2").is_err());
        assert!(parse_grid("t=0..1:2,x=1").is_err());
    }

    #[test]
    fn random_points_lie_on_heisenberg() {
        let h = CRMap::linear_embedding(3).unwrap();
        for [z, w] in random_points(&h, 5, 11) {
            assert!(on_heisenberg(&z, &w));
        }
    }
}
