//! Finiteness verdicts and growth exponents of sublevel-set volumes and
//! lattice counts, computed geometrically and cross-checked by LP.
//!
//! Geometric route: `theta = 1/d`, where `(d, ..., d)` is the farthest diagonal
//! point of the Newton polytope. `k` is the dimension of the smallest face
//! containing that point. The lattice exponents use the same construction on
//! the downward closure.
//!
//! LP route: maximize `x_1 + ... + x_n` subject to `<x, alpha> <= 1` over the
//! vertex exponents `alpha`. The variables are free for the volume problem and
//! `x >= 0` for the lattice problem. The optimal value must equal `theta`, and
//! the optimal face must have dimension `n - k - 1`.

use std::fmt::Display;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::Signed;
use serde_json::{json, Value};
use thiserror::Error;

use crate::geom::{
    cone_meets_open_orthant, cone_membership, convex_hull, diagonal_farthest, downward_closure, polar, GeomError,
    Halfspace, Polyhedron, Polytope,
};
use crate::json::{rational_to_json, vector_to_json};
use crate::lp::{solve, LinearProgram, LpError, LpStatus, Relation, Sense};
use crate::polynomial::PolynomialMap;
use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsymError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Exponents read off one diagonal point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exponents<T> {
    /// Coordinate `d` of the farthest diagonal point.
    pub d_value: T,
    /// Power exponent `1/d`.
    pub theta: T,
    /// Dimension of the smallest face containing the diagonal point.
    pub k: usize,
    /// Logarithm exponent `n - k - 1`.
    pub log_exponent: usize,
    /// Vertices of that face (sorted).
    pub face_vertices: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticProfile<T> {
    pub n: usize,
    /// The Newton polytope is `{0}` (constant map).
    pub degenerate: bool,
    pub volume_finite: bool,
    pub volume: Option<Exponents<T>>,
    pub lattice_finite: bool,
    pub lattice: Option<Exponents<T>>,
    /// The two diagonal faces coincide as vertex sets; `false` if either is undefined.
    pub faces_equal: bool,
}

impl<T: Field> AsymptoticProfile<T> {
    pub fn theta(&self) -> Option<&T> {
        self.volume.as_ref().map(|e| &e.theta)
    }

    pub fn k(&self) -> Option<usize> {
        self.volume.as_ref().map(|e| e.k)
    }

    pub fn log_exp_volume(&self) -> Option<usize> {
        self.volume.as_ref().map(|e| e.log_exponent)
    }

    pub fn theta_prime(&self) -> Option<&T> {
        self.lattice.as_ref().map(|e| &e.theta)
    }

    pub fn k_prime(&self) -> Option<usize> {
        self.lattice.as_ref().map(|e| e.k)
    }

    pub fn log_exp_lattice(&self) -> Option<usize> {
        self.lattice.as_ref().map(|e| e.log_exponent)
    }
}

/// Newton polytope and its downward closure, computed once.
#[derive(Clone, Debug)]
pub struct NewtonData<T> {
    pub gamma: Polytope<T>,
    pub closure: Polytope<T>,
}

impl<T: Field> NewtonData<T> {
    pub fn from_points(points: &[Vec<T>]) -> Result<Self, AsymError> {
        let gamma = convex_hull(points)?;
        let closure = downward_closure(&gamma)?;
        Ok(NewtonData { gamma, closure })
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// Vertex exponents `V(f)`.
    pub fn vertices(&self) -> &[Vec<T>] {
        self.gamma.vertices()
    }
}

pub fn newton_data(f: &PolynomialMap) -> Result<NewtonData<BigRational>, AsymError> {
    let points: Vec<Vec<BigRational>> = f.support().iter().map(|m| m.as_rational_point()).collect();
    NewtonData::from_points(&points)
}

fn exponents_at<T: Field>(p: &Polytope<T>) -> Result<Option<Exponents<T>>, AsymError> {
    let Some(diag) = diagonal_farthest(p)? else {
        return Ok(None);
    };
    if !diag.d_value.is_positive() {
        return Ok(None);
    }
    let n = p.dim();
    let k = diag.containing_face.dim;
    if k >= n {
        return Err(AsymError::Inconsistent(format!(
            "diagonal point lies in the interior (face dim {k} in dimension {n})"
        )));
    }
    Ok(Some(Exponents {
        theta: T::one() / diag.d_value.clone(),
        d_value: diag.d_value,
        k,
        log_exponent: n - k - 1,
        face_vertices: diag.containing_face.vertices,
    }))
}

fn ones<T: Field>(n: usize) -> Vec<T> {
    vec![T::one(); n]
}

/// Volume verdict and `(theta, k)`.
pub fn volume_exponents<T: Field>(data: &NewtonData<T>) -> Result<Option<Exponents<T>>, AsymError> {
    let finite = cone_membership(data.vertices(), &ones::<T>(data.dim()))?.is_interior();
    if !finite {
        return Ok(None);
    }
    let e = exponents_at(&data.gamma)?;
    if e.is_none() {
        return Err(AsymError::Inconsistent(
            "finite volume but the diagonal misses the Newton polytope".into(),
        ));
    }
    Ok(e)
}

/// Lattice verdict and `(theta', k')`.
pub fn lattice_exponents<T: Field>(data: &NewtonData<T>) -> Result<Option<Exponents<T>>, AsymError> {
    if !cone_meets_open_orthant(data.vertices())? {
        return Ok(None);
    }
    let e = exponents_at(&data.closure)?;
    if e.is_none() {
        return Err(AsymError::Inconsistent(
            "finite count but the diagonal misses the complete Newton polytope".into(),
        ));
    }
    Ok(e)
}

/// Both verdicts, the exponent pairs and the face comparison.
pub fn profile_of<T: Field>(data: &NewtonData<T>) -> Result<AsymptoticProfile<T>, AsymError> {
    let volume = volume_exponents(data)?;
    let lattice = lattice_exponents(data)?;
    let faces_equal = match (&volume, &lattice) {
        (Some(v), Some(l)) => v.face_vertices == l.face_vertices,
        _ => false,
    };
    if let (Some(v), Some(l)) = (&volume, &lattice) {
        if l.theta > v.theta {
            return Err(AsymError::Inconsistent(format!(
                "theta' = {} exceeds theta = {}",
                l.theta, v.theta
            )));
        }
    }
    Ok(AsymptoticProfile {
        n: data.dim(),
        degenerate: data.vertices().iter().all(|v| v.iter().all(|x| x.is_zero())),
        volume_finite: volume.is_some(),
        volume,
        lattice_finite: lattice.is_some(),
        lattice,
        faces_equal,
    })
}

pub fn asymptotic_profile(f: &PolynomialMap) -> Result<AsymptoticProfile<BigRational>, AsymError> {
    profile_of(&newton_data(f)?)
}

pub fn volume_profile(f: &PolynomialMap) -> Result<(bool, Option<Exponents<BigRational>>), AsymError> {
    let e = volume_exponents(&newton_data(f)?)?;
    Ok((e.is_some(), e))
}

pub fn lattice_profile(f: &PolynomialMap) -> Result<(bool, Option<Exponents<BigRational>>), AsymError> {
    let e = lattice_exponents(&newton_data(f)?)?;
    Ok((e.is_some(), e))
}

/// Returns `faces_equal` after checking it against equality of the exponent pairs.
pub fn compare_profiles<T: Field>(profile: &AsymptoticProfile<T>) -> Result<bool, AsymError> {
    if let (Some(v), Some(l)) = (&profile.volume, &profile.lattice) {
        let same_exponents = v.theta == l.theta && v.k == l.k;
        if same_exponents != profile.faces_equal {
            return Err(AsymError::Inconsistent(format!(
                "faces_equal = {} but exponent pairs ({}, {}) vs ({}, {})",
                profile.faces_equal, v.theta, v.k, l.theta, l.k
            )));
        }
    }
    Ok(profile.faces_equal)
}

/// One route comparison: geometric exponents against an LP solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteCheck<T> {
    pub lp_status: LpStatus,
    pub lp_value: Option<T>,
    pub lp_face_dim: Option<usize>,
    pub geometric_theta: Option<T>,
    /// `n - k - 1` from the geometric route.
    pub geometric_face_dim: Option<usize>,
    /// Vertex exponents whose constraint is tight on the whole optimal face.
    pub tight_vertices: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckReport<T> {
    pub volume: RouteCheck<T>,
    pub lattice: RouteCheck<T>,
    /// `P~* ∩ R^n_+` equals the complete Newton polytope (checked when the count is finite).
    pub polar_closure_matches: Option<bool>,
}

/// The LP of the volume (`nonneg = false`) or lattice (`nonneg = true`) problem.
pub fn exponent_lp<T: Field>(vertices: &[Vec<T>], n: usize, nonneg: bool) -> LinearProgram<T> {
    let mut lp = LinearProgram::new(Sense::Maximize, ones::<T>(n));
    for a in vertices {
        lp = lp.with_constraint(a.clone(), Relation::Le, T::one());
    }
    if nonneg {
        lp = lp.with_all_nonneg();
    }
    lp
}

fn route<T: Field>(
    data: &NewtonData<T>,
    nonneg: bool,
    geometric: Option<&Exponents<T>>,
) -> Result<RouteCheck<T>, AsymError> {
    let n = data.dim();
    let vertices = data.vertices();
    let sol = solve(&exponent_lp(vertices, n, nonneg))?;
    Ok(RouteCheck {
        lp_status: sol.status,
        lp_value: sol.value,
        lp_face_dim: sol.optimal_face_dim,
        geometric_theta: geometric.map(|e| e.theta.clone()),
        geometric_face_dim: geometric.map(|e| e.log_exponent),
        tight_vertices: sol.tight_set.iter().map(|&i| vertices[i].clone()).collect(),
    })
}

fn inconsistent<T: Display>(what: &str, geometric: T, lp: T) -> AsymError {
    AsymError::Inconsistent(format!("{what}: geometric {geometric} but LP {lp}"))
}

fn check_route<T: Field>(label: &str, r: &RouteCheck<T>) -> Result<(), AsymError> {
    if let (Some(theta), Some(dim)) = (&r.geometric_theta, r.geometric_face_dim) {
        let value = r
            .lp_value
            .as_ref()
            .ok_or_else(|| AsymError::Inconsistent(format!("{label}: finite but LP status {:?}", r.lp_status)))?;
        if value != theta {
            return Err(inconsistent(&format!("{label} exponent"), theta, value));
        }
        let lp_dim = r.lp_face_dim.expect("optimal solve has a face dimension");
        if lp_dim != dim {
            return Err(inconsistent(&format!("{label} face dimension"), dim, lp_dim));
        }
    }
    Ok(())
}

/// Polar route for the lattice problem: `P~ = {x >= 0 : <x, alpha> <= 1}`,
/// then `P~* ∩ R^n_+` must equal the downward closure.
fn polar_closure_matches<T: Field>(data: &NewtonData<T>) -> Result<bool, AsymError> {
    let n = data.dim();
    let mut hs: Vec<Halfspace<T>> = data
        .vertices()
        .iter()
        .map(|a| Halfspace::new(a.clone(), T::one()))
        .collect();
    hs.extend(orthant_bounds::<T>(n));
    let p_tilde = Polyhedron::new(n, hs)?.to_polytope()?;
    let mut dual = polar(&p_tilde).halfspaces().to_vec();
    dual.extend(orthant_bounds::<T>(n));
    let restricted = Polyhedron::new(n, dual)?.to_polytope()?;
    Ok(restricted == data.closure)
}

fn orthant_bounds<T: Field>(n: usize) -> Vec<Halfspace<T>> {
    (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = -T::one();
            Halfspace::new(e, T::zero())
        })
        .collect()
}

/// Solves both LPs and checks them against the geometric exponents.
///
/// The volume LP is unbounded exactly when `(1, ..., 1)` lies outside the
/// vertex cone. If it lies on the cone's boundary, the LP is bounded even
/// though the volume is infinite. The lattice LP is unbounded exactly when
/// the lattice count is infinite. Any mismatch is an `Inconsistent` error.
pub fn cross_check<T: Field>(
    data: &NewtonData<T>,
    profile: &AsymptoticProfile<T>,
) -> Result<CrossCheckReport<T>, AsymError> {
    let volume = route(data, false, profile.volume.as_ref())?;
    check_route("volume", &volume)?;
    let outside = !cone_membership(data.vertices(), &ones::<T>(data.dim()))?.is_member();
    if outside != (volume.lp_status == LpStatus::Unbounded) {
        return Err(AsymError::Inconsistent(format!(
            "volume LP status {:?} disagrees with cone membership",
            volume.lp_status
        )));
    }
    if let Some(e) = &profile.volume {
        if volume.tight_vertices != e.face_vertices {
            return Err(AsymError::Inconsistent(
                "volume LP tight constraints differ from the diagonal face".into(),
            ));
        }
    }

    let lattice = route(data, true, profile.lattice.as_ref())?;
    check_route("lattice", &lattice)?;
    if profile.lattice_finite == (lattice.lp_status == LpStatus::Unbounded) {
        return Err(AsymError::Inconsistent(format!(
            "lattice LP status {:?} disagrees with the orthant test",
            lattice.lp_status
        )));
    }

    let polar_closure_matches = if profile.lattice_finite {
        let ok = polar_closure_matches(data)?;
        if !ok {
            return Err(AsymError::Inconsistent(
                "polar of the lattice LP region does not reproduce the complete Newton polytope".into(),
            ));
        }
        Some(ok)
    } else {
        None
    };
    Ok(CrossCheckReport {
        volume,
        lattice,
        polar_closure_matches,
    })
}

pub fn lp_cross_check(f: &PolynomialMap) -> Result<CrossCheckReport<BigRational>, AsymError> {
    let data = newton_data(f)?;
    let profile = profile_of(&data)?;
    cross_check(&data, &profile)
}

fn opt_json<I>(q: Option<&Ratio<I>>) -> Value
where
    I: Integer + Clone + Display + Signed,
{
    q.map_or(Value::Null, rational_to_json)
}

impl<I> Exponents<Ratio<I>>
where
    I: Integer + Clone + Display + Signed,
{
    pub fn to_json(&self) -> Value {
        json!({
            "d": rational_to_json(&self.d_value),
            "theta": rational_to_json(&self.theta),
            "k": self.k,
            "log_exponent": self.log_exponent,
            "face_vertices": self.face_vertices.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
        })
    }
}

impl<I> AsymptoticProfile<Ratio<I>>
where
    I: Integer + Clone + Display + Signed + FromStr + std::hash::Hash + Send + Sync,
    Ratio<I>: Field,
{
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "degenerate": self.degenerate,
            "volume_finite": self.volume_finite,
            "theta": opt_json(self.theta()),
            "k": self.k(),
            "log_exp_volume": self.log_exp_volume(),
            "lattice_finite": self.lattice_finite,
            "theta_prime": opt_json(self.theta_prime()),
            "k_prime": self.k_prime(),
            "log_exp_lattice": self.log_exp_lattice(),
            "faces_equal": self.faces_equal,
            "volume_face": self.volume.as_ref().map(Exponents::to_json),
            "lattice_face": self.lattice.as_ref().map(Exponents::to_json),
        })
    }
}

impl<I> RouteCheck<Ratio<I>>
where
    I: Integer + Clone + Display + Signed,
{
    pub fn to_json(&self) -> Value {
        json!({
            "lp_status": format!("{:?}", self.lp_status).to_uppercase(),
            "lp_value": opt_json(self.lp_value.as_ref()),
            "lp_face_dim": self.lp_face_dim,
            "geometric_theta": opt_json(self.geometric_theta.as_ref()),
            "geometric_face_dim": self.geometric_face_dim,
        })
    }
}

impl<I> CrossCheckReport<Ratio<I>>
where
    I: Integer + Clone + Display + Signed,
{
    pub fn to_json(&self) -> Value {
        json!({
            "volume_lp": self.volume.to_json(),
            "lattice_lp": self.lattice.to_json(),
            "polar_closure_matches": self.polar_closure_matches,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{big, frac};

    fn profile(text: &str, n: usize) -> AsymptoticProfile<BigRational> {
        asymptotic_profile(&PolynomialMap::parse(text, n).unwrap()).unwrap()
    }

    #[test]
    fn volume_examples() {
        let p = profile("x1^2 + x2^2", 2);
        assert!(p.volume_finite);
        assert_eq!(p.theta(), Some(&big(1)));
        assert_eq!((p.k(), p.log_exp_volume()), (Some(1), Some(0)));

        let p = profile("x1^6 + x2^4", 2);
        assert_eq!(p.theta(), Some(&frac(5, 12)));
        assert_eq!((p.k(), p.log_exp_volume()), (Some(1), Some(0)));

        let p = profile("x1*x2", 2);
        assert!(!p.volume_finite);
        assert_eq!(p.theta(), None);
    }

    #[test]
    fn lattice_examples() {
        let p = profile("x1*x2", 2);
        assert!(p.lattice_finite);
        assert_eq!(p.theta_prime(), Some(&big(1)));
        assert_eq!((p.k_prime(), p.log_exp_lattice()), (Some(0), Some(1)));

        let p = profile("x1^2 + x2^2", 2);
        assert_eq!(p.theta_prime(), Some(&big(1)));
        assert_eq!((p.k_prime(), p.log_exp_lattice()), (Some(1), Some(0)));

        let p = profile("x1^2", 2);
        assert!(!p.lattice_finite);
        assert!(!p.volume_finite);
    }

    #[test]
    fn constant_map_is_degenerate() {
        let p = profile("5", 2);
        assert!(p.degenerate);
        assert!(!p.volume_finite && !p.lattice_finite);
    }

    #[test]
    fn cross_check_examples() {
        let f = PolynomialMap::parse("x1^2 + x2^2", 2).unwrap();
        let r = lp_cross_check(&f).unwrap();
        assert_eq!(r.volume.lp_value, Some(big(1)));
        assert_eq!(r.volume.lp_face_dim, Some(0));
        assert_eq!(r.polar_closure_matches, Some(true));

        let f = PolynomialMap::parse("x1^2*x2; x1*x2^2", 2).unwrap();
        let r = lp_cross_check(&f).unwrap();
        assert_eq!(r.volume.lp_value, Some(frac(2, 3)));
        assert_eq!(r.volume.lp_face_dim, Some(0));

        let f = PolynomialMap::parse("x1*x2", 2).unwrap();
        let r = lp_cross_check(&f).unwrap();
        assert_eq!(r.lattice.lp_value, Some(big(1)));
        assert_eq!(r.lattice.lp_face_dim, Some(1));
        // (1,1) is on the boundary of the ray cone: bounded LP, infinite volume
        assert_eq!(r.volume.lp_status, LpStatus::Optimal);

        let f = PolynomialMap::parse("x1^2", 2).unwrap();
        let r = lp_cross_check(&f).unwrap();
        assert_eq!(r.volume.lp_status, LpStatus::Unbounded);
        assert_eq!(r.lattice.lp_status, LpStatus::Unbounded);
    }

    #[test]
    fn compare_examples() {
        assert!(compare_profiles(&profile("x1^2 + x2^2", 2)).unwrap());
        assert!(!compare_profiles(&profile("x1*x2", 2)).unwrap());
        assert!(compare_profiles(&profile("x1^6 + x2^4", 2)).unwrap());
        // the biconditional also holds on a polytope with an interior support point
        let p = profile("x1^4 + x2^4 + x1^2*x2^2 + x1^3", 2);
        assert_eq!(compare_profiles(&p).unwrap(), p.faces_equal);
    }

    #[test]
    fn json_block() {
        let v = profile("x1^6 + x2^4", 2).to_json();
        assert_eq!(v["theta"], json!([5, 12]));
        assert_eq!(v["k"], json!(1));
        assert_eq!(v["faces_equal"], json!(true));
    }
}
