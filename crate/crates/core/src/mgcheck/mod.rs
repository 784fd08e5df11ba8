//! Face-by-face testing of the Mikhailov–Gindikin (MG) condition.
//!
//! The MG condition says: for every face `D` of the Newton polytope, the face
//! polynomials `f_{i,D}` have no common zero with all coordinates nonzero. The
//! checker searches for such zeros numerically. It claims a violation only
//! when it can back the claim with exact arithmetic:
//!
//! * an exact rational point where every face polynomial vanishes, or
//! * for a single component, two rational points of one open orthant where the
//!   face polynomial has opposite signs (a zero lies between them).
//!
//! `Passed` means that no zero was found within the search budget. It is not a proof.
//!
//! The search works in log coordinates: `x_j = s_j exp(t_j)` with `t` in
//! `[-T, T]^n`, one sign pattern `s` at a time. It minimizes the scale-free
//! ratio `max_i |f_{i,D}(x)| / sum_{alpha in V(D)} |x^alpha|`.
//! Face polynomials are quasi-homogeneous. The ratio is therefore constant
//! along the face's normal directions, so zeros that escape to infinity
//! within a face are still seen at bounded `t`.

mod estimate;
mod probe;
mod search;

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::geom::{faces_all, newton_polytope, smallest_face_at, Face, GeomError, Polytope};
use crate::json::vector_to_json;
use crate::polynomial::{Monomial, PolyError, Polynomial, PolynomialMap};
use crate::scalar::{null_space, row_echelon};

pub use estimate::{estimate_constants, holdout_check, EstimateConfig, HoldoutReport, MgEstimate};
pub use probe::{integer_points, perturbation_probe, EpsilonChoice, PerturbationReport, ProbeConfig};

use search::{compass_search, halton, rational_point, CompiledSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MgError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("face does not belong to the given Newton polytope")]
    FaceMismatch,
    #[error("the map fails the MG check, so the probe does not apply")]
    NotMg,
    #[error("epsilon {epsilon} must be positive and below the smallest vertex coefficient {limit}")]
    EpsilonOutOfRange { epsilon: f64, limit: f64 },
    #[error("normalising sum vanished at a sample point")]
    ZeroNormaliser,
    #[error("rho = {rho} excludes the whole sampling box")]
    RhoTooLarge { rho: f64 },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// The face polynomials of a map on one face of its Newton polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSystem {
    pub face: Face<BigRational>,
    pub restricted: Vec<Polynomial>,
}

fn on_face(gamma: &Polytope<BigRational>, face: &Face<BigRational>, point: &[BigRational]) -> bool {
    face.tight_facets.iter().all(|&j| gamma.facets()[j].is_tight(point))
}

/// Keeps exactly the terms whose exponent lies on `face`.
pub fn face_restrict(
    f: &PolynomialMap,
    gamma: &Polytope<BigRational>,
    face: &Face<BigRational>,
) -> Result<FaceSystem, MgError> {
    let consistent = face.tight_facets.iter().all(|&j| j < gamma.facets().len())
        && face.vertex_indices.len() == face.vertices.len()
        && face
            .vertex_indices
            .iter()
            .zip(&face.vertices)
            .all(|(&i, v)| gamma.vertices().get(i) == Some(v))
        && face.vertices.iter().all(|v| on_face(gamma, face, v));
    if !consistent || gamma.dim() != f.dim() {
        return Err(MgError::FaceMismatch);
    }
    let restricted = f
        .components()
        .iter()
        .map(|p| p.filter_terms(|m| on_face(gamma, face, &m.as_rational_point())))
        .collect();
    Ok(FaceSystem {
        face: face.clone(),
        restricted,
    })
}

/// `F = sum_i f_i^2`, checking that `Γ(F) = 2 Γ(f)`.
pub fn square_sum_lift(f: &PolynomialMap) -> Result<Polynomial, MgError> {
    let mut total = Polynomial::zero(f.dim());
    for p in f.components() {
        total = total.checked_add(&p.checked_mul(p)?)?;
    }
    let gamma = newton_polytope(f)?;
    let lifted = newton_polytope(&PolynomialMap::new(vec![total.clone()])?)?;
    if lifted != gamma.scaled(&BigRational::from_integer(2.into()))? {
        return Err(MgError::Inconsistent("Γ(Σ f_i²) differs from 2Γ(f)".into()));
    }
    Ok(total)
}

/// Claim 3.5: the part of `F = sum f_i^2` on `2D` equals `sum (f_{i,D})^2`.
pub fn verify_claim_3_5(
    f: &PolynomialMap,
    gamma: &Polytope<BigRational>,
    face: &Face<BigRational>,
) -> Result<bool, MgError> {
    let system = face_restrict(f, gamma, face)?;
    let lifted = square_sum_lift(f)?;
    let lifted_map = PolynomialMap::new(vec![lifted])?;
    let lifted_gamma = newton_polytope(&lifted_map)?;
    // 2 * centroid of D lies in the relative interior of 2D
    let n = f.dim();
    let count = BigRational::from_integer(face.vertices.len().into());
    let two = BigRational::from_integer(2.into());
    let centre: Vec<BigRational> = (0..n)
        .map(|j| {
            let s = face
                .vertices
                .iter()
                .fold(BigRational::zero(), |acc, v| acc + v[j].clone());
            s * two.clone() / count.clone()
        })
        .collect();
    let doubled = smallest_face_at(&lifted_gamma, &centre)?;
    let mut expected: Vec<Vec<BigRational>> = face
        .vertices
        .iter()
        .map(|v| v.iter().map(|x| x.clone() * two.clone()).collect())
        .collect();
    expected.sort();
    if doubled.vertices != expected {
        return Err(MgError::Inconsistent("face of Γ(F) at 2D is not 2D".into()));
    }
    let lhs = &face_restrict(&lifted_map, &lifted_gamma, &doubled)?.restricted[0];
    let mut rhs = Polynomial::zero(n);
    for p in &system.restricted {
        rhs = rhs.checked_add(&p.checked_mul(p)?)?;
    }
    Ok(*lhs == rhs)
}

/// Search budget of the MG checker.
#[derive(Clone, Debug, PartialEq)]
pub struct MgConfig {
    /// Half-width of the log-coordinate box.
    pub t_max: f64,
    /// Number of quasi-random starts per orthant, in addition to `t = 0`.
    pub starts: u64,
    /// Evaluation cap for one local descent.
    pub max_evals_per_start: u64,
    /// A scale-free ratio below this counts as a numerical zero.
    pub threshold: f64,
    /// Seed of the quasi-homogeneity self-test.
    pub seed: u64,
}

impl Default for MgConfig {
    fn default() -> Self {
        MgConfig {
            t_max: 12.0,
            starts: 16,
            max_evals_per_start: 2_000,
            threshold: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MgStatus {
    Passed,
    ViolationSuspected,
    ViolationCertified,
}

impl MgStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            MgStatus::Passed => "PASSED",
            MgStatus::ViolationSuspected => "VIOLATION_SUSPECTED",
            MgStatus::ViolationCertified => "VIOLATION_CERTIFIED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Every face polynomial vanishes here exactly.
    ExactZero(Vec<BigRational>),
    /// One face polynomial, opposite exact signs at two points of one orthant.
    SignChange {
        positive: Vec<BigRational>,
        negative: Vec<BigRational>,
    },
    /// Numerical near-zero that could not be certified.
    Approximate(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MgVerdict {
    pub status: MgStatus,
    pub face: Face<BigRational>,
    pub witness: Option<Witness>,
    /// Smallest scale-free ratio found on this face.
    pub residual: f64,
    pub samples_used: u64,
}

impl MgVerdict {
    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            None => Value::Null,
            Some(Witness::ExactZero(x)) => json!({"kind": "exact_zero", "point": vector_to_json(x)}),
            Some(Witness::SignChange { positive, negative }) => json!({
                "kind": "sign_change",
                "positive": vector_to_json(positive),
                "negative": vector_to_json(negative),
            }),
            Some(Witness::Approximate(x)) => json!({"kind": "approximate", "point": x}),
        };
        json!({
            "status": self.status.as_str(),
            "face_dim": self.face.dim,
            "face_vertices": self.face.vertices.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
            "witness": witness,
            "residual": self.residual,
            "samples_used": self.samples_used,
        })
    }
}

fn exponent_vector(v: &[BigRational]) -> Vec<u32> {
    v.iter()
        .map(|x| x.to_integer().to_u32().expect("lattice exponent"))
        .collect()
}

fn signs_of(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| mask >> j & 1 == 1).collect()
}

fn point_at(negative: &[bool], t: &[f64]) -> Vec<f64> {
    t.iter()
        .zip(negative)
        .map(|(v, &neg)| if neg { -v.exp() } else { v.exp() })
        .collect()
}

/// Directions along which every face polynomial is quasi-homogeneous, in RREF.
fn normal_directions(face: &Face<BigRational>, n: usize) -> Vec<Vec<f64>> {
    let base = &face.vertices[0];
    let diffs: Vec<Vec<BigRational>> = face.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    row_echelon(null_space(&diffs, n))
        .into_iter()
        .map(|q| q.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect())
        .collect()
}

/// Shifts `t` along the normal directions so that pivot coordinates become 0.
fn normalise_along(t: &[f64], directions: &[Vec<f64>]) -> Vec<f64> {
    let mut t = t.to_vec();
    for q in directions {
        if let Some(p) = q.iter().position(|x| *x != 0.0) {
            let lambda = t[p] / q[p];
            for (tj, qj) in t.iter_mut().zip(q) {
                *tj -= lambda * qj;
            }
        }
    }
    t
}

const DENOMINATORS: [u64; 10] = [1, 2, 3, 4, 8, 10, 100, 1000, 10_000, 1_000_000];

fn exact_zero_near(system: &[Polynomial], x: &[f64]) -> Option<Vec<BigRational>> {
    DENOMINATORS.iter().find_map(|&den| {
        let p = rational_point(x, den)?;
        system
            .iter()
            .all(|poly| poly.evaluate(&p).map(|v| v.is_zero()).unwrap_or(false))
            .then_some(p)
    })
}

fn exact_sign(poly: &Polynomial, x: &[f64]) -> Option<(Ordering, Vec<BigRational>)> {
    let p = rational_point(x, 1000)?;
    let v = poly.evaluate(&p).ok()?;
    Some((v.cmp(&BigRational::zero()), p))
}

/// Residual of `p(tau^q x) = tau^d p(x)` relative to the term magnitudes.
fn quasi_homogeneity_residual(system: &[Polynomial], weights: &[f64], degree: f64, rng: &mut ChaCha8Rng) -> f64 {
    let n = weights.len();
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let x: Vec<f64> = (0..n)
            .map(|_| {
                let m = rng.gen_range(0.5..1.5);
                if rng.gen_bool(0.5) {
                    -m
                } else {
                    m
                }
            })
            .collect();
        let tau: f64 = rng.gen_range(0.5..2.0);
        let scaled: Vec<f64> = x.iter().zip(weights).map(|(v, w)| v * tau.powf(*w)).collect();
        for p in system {
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            let mut magnitude = 0.0;
            for (m, c) in p.terms() {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let mono =
                    |pt: &[f64]| -> f64 { m.exponents().iter().zip(pt).map(|(&e, v)| v.powi(e as i32)).product() };
                lhs += c * mono(&scaled);
                let base = c * mono(&x);
                rhs += base;
                magnitude += base.abs();
            }
            let scale = tau.powf(degree) * magnitude.max(f64::MIN_POSITIVE);
            worst = worst.max((lhs - tau.powf(degree) * rhs).abs() / scale);
        }
    }
    worst
}

struct OrthantResult {
    status: MgStatus,
    witness: Option<Witness>,
    residual: f64,
    evals: u64,
}

fn search_orthant(
    system: &FaceSystem,
    compiled: &CompiledSystem,
    negative: &[bool],
    directions: &[Vec<f64>],
    config: &MgConfig,
) -> OrthantResult {
    let n = negative.len();
    let objective = |t: &[f64]| compiled.ratio(negative, t);
    let single = system.restricted.len() == 1;
    let mut positive_seen: Option<Vec<BigRational>> = None;
    let mut negative_seen: Option<Vec<BigRational>> = None;
    let mut track_sign = |x: &[f64]| {
        if !single {
            return;
        }
        if let Some((ord, p)) = exact_sign(&system.restricted[0], x) {
            match ord {
                Ordering::Greater if positive_seen.is_none() => positive_seen = Some(p),
                Ordering::Less if negative_seen.is_none() => negative_seen = Some(p),
                _ => {}
            }
        }
    };

    let mut evals = 0u64;
    let mut best_value = f64::INFINITY;
    let mut best_t = vec![0.0; n];
    let mut zero_candidates: Vec<Vec<f64>> = Vec::new();
    for s in 0..=config.starts {
        let start: Vec<f64> = if s == 0 {
            vec![0.0; n]
        } else {
            halton(s, n)
                .into_iter()
                .map(|u| (2.0 * u - 1.0) * config.t_max)
                .collect()
        };
        track_sign(&point_at(negative, &start));
        let out = compass_search(
            &objective,
            &start,
            config.t_max,
            (config.t_max / 4.0, 1e-13),
            config.max_evals_per_start,
            0.0,
        );
        evals += out.evals;
        if out.value < config.threshold {
            zero_candidates.push(out.t.clone());
        }
        if out.value < best_value {
            best_value = out.value;
            best_t = out.t;
        }
    }

    for t in &zero_candidates {
        for cand in [normalise_along(t, directions), t.clone()] {
            let x = point_at(negative, &cand);
            if let Some(p) = exact_zero_near(&system.restricted, &x) {
                return OrthantResult {
                    status: MgStatus::ViolationCertified,
                    witness: Some(Witness::ExactZero(p)),
                    residual: best_value,
                    evals,
                };
            }
            // points on either side of a numerical zero often straddle it
            for j in 0..n {
                for h in [1e-3, -1e-3, 1e-1, -1e-1] {
                    let mut shifted = cand.clone();
                    shifted[j] += h;
                    track_sign(&point_at(negative, &shifted));
                }
            }
        }
    }
    if let (Some(positive), Some(negative)) = (positive_seen, negative_seen) {
        return OrthantResult {
            status: MgStatus::ViolationCertified,
            witness: Some(Witness::SignChange { positive, negative }),
            residual: best_value,
            evals,
        };
    }
    if best_value < config.threshold {
        return OrthantResult {
            status: MgStatus::ViolationSuspected,
            witness: Some(Witness::Approximate(point_at(negative, &best_t))),
            residual: best_value,
            evals,
        };
    }
    OrthantResult {
        status: MgStatus::Passed,
        witness: None,
        residual: best_value,
        evals,
    }
}

/// Checks one face system over every sign orthant.
pub fn check_face(
    gamma: &Polytope<BigRational>,
    system: &FaceSystem,
    config: &MgConfig,
    face_index: usize,
) -> Result<MgVerdict, MgError> {
    let n = gamma.dim();
    let face = &system.face;
    let normaliser: Vec<Vec<u32>> = face.vertices.iter().map(|v| exponent_vector(v)).collect();
    let compiled = CompiledSystem::new(&system.restricted, &normaliser);

    // self-test: the face polynomials are quasi-homogeneous for q = sum of tight normals
    let mut weights = vec![0.0; n];
    let mut degree = 0.0;
    for &j in &face.tight_facets {
        let h = &gamma.facets()[j];
        for (w, q) in weights.iter_mut().zip(&h.normal) {
            *w += q.to_f64().unwrap_or(f64::NAN);
        }
        degree += h.offset.to_f64().unwrap_or(f64::NAN);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(face_index as u64);
    let qh = quasi_homogeneity_residual(&system.restricted, &weights, degree, &mut rng);
    if !(qh <= 1e-8) {
        return Err(MgError::Inconsistent(format!(
            "face polynomial is not quasi-homogeneous (residual {qh:e})"
        )));
    }

    let directions = normal_directions(face, n);
    let results: Vec<OrthantResult> = (0..1u64 << n)
        .map(|mask| search_orthant(system, &compiled, &signs_of(mask, n), &directions, config))
        .collect();
    let evals = results.iter().map(|r| r.evals).sum();
    let residual = results.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min);
    let worst = results
        .into_iter()
        .reduce(|a, b| if b.status > a.status { b } else { a })
        .expect("at least one orthant");
    Ok(MgVerdict {
        status: worst.status,
        face: face.clone(),
        witness: worst.witness,
        residual,
        samples_used: evals,
    })
}

/// Runs the MG search on every face of `Γ(f)`, worst verdict first.
pub fn check_mg(f: &PolynomialMap, config: &MgConfig) -> Result<Vec<MgVerdict>, MgError> {
    let gamma = newton_polytope(f)?;
    let faces = faces_all(&gamma);
    let mut verdicts: Vec<MgVerdict> = faces
        .par_iter()
        .enumerate()
        .map(|(i, face)| {
            let system = face_restrict(f, &gamma, face)?;
            check_face(&gamma, &system, config, i)
        })
        .collect::<Result<_, _>>()?;
    verdicts.sort_by(|a, b| {
        b.status
            .cmp(&a.status)
            .then(a.residual.total_cmp(&b.residual))
            .then(a.face.dim.cmp(&b.face.dim))
            .then(a.face.vertex_indices.cmp(&b.face.vertex_indices))
    });
    Ok(verdicts)
}

/// True iff no face produced a (suspected or certified) violation.
pub fn all_passed(verdicts: &[MgVerdict]) -> bool {
    verdicts.iter().all(|v| v.status == MgStatus::Passed)
}

/// `N_f` exponents: the vertices of `Γ(f)` as monomials.
pub(crate) fn vertex_monomials(gamma: &Polytope<BigRational>) -> Vec<Vec<u32>> {
    gamma.vertices().iter().map(|v| exponent_vector(v)).collect()
}

/// Monomial at an integer lattice point of the exponent space.
pub(crate) fn monomial_at(point: &[BigRational]) -> Monomial {
    Monomial::new(exponent_vector(point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;

    fn map(text: &str, n: usize) -> PolynomialMap {
        PolynomialMap::parse(text, n).unwrap()
    }

    fn face_with_vertices(gamma: &Polytope<BigRational>, vertices: &[&[i64]]) -> Face<BigRational> {
        let want: Vec<Vec<BigRational>> = vertices.iter().map(|v| v.iter().map(|&x| big(x)).collect()).collect();
        faces_all(gamma)
            .into_iter()
            .find(|f| f.vertices == want)
            .expect("face exists")
    }

    #[test]
    fn restriction_examples() {
        let f = map("x1^2 + x2^2", 2);
        let g = newton_polytope(&f).unwrap();
        let face = face_with_vertices(&g, &[&[2, 0]]);
        assert_eq!(face_restrict(&f, &g, &face).unwrap().restricted[0].to_string(), "x1^2");

        let f = map("x1^2 - x2^2", 2);
        let g = newton_polytope(&f).unwrap();
        let face = face_with_vertices(&g, &[&[0, 2], &[2, 0]]);
        assert_eq!(face_restrict(&f, &g, &face).unwrap().restricted[0], f.components()[0]);

        let f = map("x1^6 + x1^3*x2^2 + x2^4", 2);
        let g = newton_polytope(&f).unwrap();
        let face = face_with_vertices(&g, &[&[0, 4]]);
        assert_eq!(face_restrict(&f, &g, &face).unwrap().restricted[0].to_string(), "x2^4");

        let other = newton_polytope(&map("x1^3 + x2", 2)).unwrap();
        assert_eq!(face_restrict(&f, &other, &face), Err(MgError::FaceMismatch));
    }

    #[test]
    fn lift_examples() {
        assert_eq!(square_sum_lift(&map("x1; x2", 2)).unwrap().to_string(), "x1^2 + x2^2");
        assert_eq!(
            square_sum_lift(&map("x1 + x2", 2)).unwrap().to_string(),
            "x1^2 + 2*x1*x2 + x2^2"
        );
        let lifted = square_sum_lift(&map("x1^2 + x2^2", 2)).unwrap();
        let g = newton_polytope(&PolynomialMap::new(vec![lifted]).unwrap()).unwrap();
        assert_eq!(g.vertices(), &[vec![big(0), big(4)], vec![big(4), big(0)]]);
    }

    #[test]
    fn claim_examples() {
        for (text, n) in [
            ("x1 + x2; x1 - x2", 2),
            ("x1^2 + x2^2", 2),
            ("x1^3 - 2*x1*x2 + x2^2 + 1; x2 - x1^2", 2),
        ] {
            let f = map(text, n);
            let g = newton_polytope(&f).unwrap();
            for face in faces_all(&g) {
                assert!(verify_claim_3_5(&f, &g, &face).unwrap(), "{text}");
            }
        }
    }

    #[test]
    fn positive_map_passes() {
        let v = check_mg(&map("x1^2 + x2^2", 2), &MgConfig::default()).unwrap();
        assert_eq!(v.len(), 3);
        assert!(all_passed(&v));
    }

    #[test]
    fn difference_of_squares_is_certified() {
        let v = check_mg(&map("x1^2 - x2^2", 2), &MgConfig::default()).unwrap();
        assert_eq!(v[0].status, MgStatus::ViolationCertified);
        assert_eq!(v[0].face.dim, 1);
        assert_eq!(v[0].witness, Some(Witness::ExactZero(vec![big(1), big(1)])));
    }

    #[test]
    fn linear_pair_passes() {
        let v = check_mg(&map("x1 - x2; x1 + x2", 2), &MgConfig::default()).unwrap();
        assert!(all_passed(&v));
    }

    #[test]
    fn irrational_zero_single_component_is_certified_by_sign_change() {
        let v = check_mg(&map("x1^2 - 2*x2^2", 2), &MgConfig::default()).unwrap();
        assert_eq!(v[0].status, MgStatus::ViolationCertified);
        assert!(matches!(v[0].witness, Some(Witness::SignChange { .. })));
    }

    #[test]
    fn irrational_common_zero_is_only_suspected() {
        let v = check_mg(&map("x1^2 - 2*x2^2; 3*x1^2 - 6*x2^2", 2), &MgConfig::default()).unwrap();
        assert_eq!(v[0].status, MgStatus::ViolationSuspected);
        let Some(Witness::Approximate(x)) = &v[0].witness else {
            panic!("expected approximate witness");
        };
        assert!((x[0].abs() / x[1].abs() - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn inner_face_zero_is_found() {
        // the edge polynomial x1^2 - x1*x2 vanishes at x1 = x2; the full
        // polynomial x1^2 - x1*x2 + 1 does not vanish there
        let v = check_mg(&map("x1^2 - x1*x2 + 1", 2), &MgConfig::default()).unwrap();
        assert_eq!(v[0].status, MgStatus::ViolationCertified);
        assert_eq!(v[0].face.dim, 1);
    }

    #[test]
    fn quasi_homogeneity_self_test() {
        let f = map("x1^6 + x1^3*x2^2 + x2^4", 2);
        let g = newton_polytope(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for face in faces_all(&g) {
            let system = face_restrict(&f, &g, &face).unwrap();
            let mut weights = vec![0.0; 2];
            let mut degree = 0.0;
            for &j in &face.tight_facets {
                let h = &g.facets()[j];
                for (w, q) in weights.iter_mut().zip(&h.normal) {
                    *w += q.to_f64().unwrap();
                }
                degree += h.offset.to_f64().unwrap();
            }
            assert!(quasi_homogeneity_residual(&system.restricted, &weights, degree, &mut rng) < 1e-10);
        }
        assert!(all_passed(&check_mg(&f, &MgConfig::default()).unwrap()));
    }
}
