//! Exact convex geometry: hulls, faces, cones, diagonal points, downward
//! closures and polars.
//!
//! Everything is generic over an exact ordered [`Field`]. Polytopes keep both
//! representations. A polytope of affine dimension `k < n` stores the
//! equations of its affine hull as pairs of opposite inequalities, followed by
//! the facets of the `k`-dimensional hull.
//!
//! The hull is computed by the double-description method (see `dd`). It runs
//! on the cone of valid inequalities `{(a, b) : <a, p> <= b for all p}`,
//! working in the affine hull's pivot coordinates. Points are processed in
//! lexicographic order, so the output is deterministic.

mod dd;

use std::collections::BTreeSet;
use std::fmt::Display;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::Signed;
use serde_json::{json, Value};
use thiserror::Error;

use crate::json::{rational_from_json, rational_to_json, vector_from_json, vector_to_json};
use crate::lp::{solve_basic, LinearProgram, LpError, LpStatus, Relation, Sense};
use crate::polynomial::PolynomialMap;
use crate::scalar::{dot, normalize_direction, null_space, rank, row_echelon, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("point set is empty")]
    EmptyInput,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vertex {vertex} has a negative coordinate")]
    NegativeCoordinate { vertex: usize },
    #[error("point does not lie in the polytope")]
    NotMember,
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("halfspace system is infeasible")]
    Infeasible,
    #[error("origin is not an interior point of the halfspace system")]
    OriginNotInterior,
    #[error("malformed polytope JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("internal geometry failure: {0}")]
    Internal(String),
}

/// The inequality `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Field> Halfspace<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Self {
        Halfspace { normal, offset }
    }

    /// `offset - <normal, x>`; nonnegative exactly on the halfspace.
    pub fn slack(&self, x: &[T]) -> T {
        self.offset.clone() - dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &[T]) -> bool {
        self.slack(x).is_zero()
    }
}

/// A bounded, nonempty convex polytope with both V- and H-representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope<T> {
    dim: usize,
    vertices: Vec<Vec<T>>,
    facets: Vec<Halfspace<T>>,
    affine_dim: usize,
}

/// A nonempty face of a polytope, identified by indices into its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face<T> {
    /// Indices of the parent's facets that are tight on the whole face.
    pub tight_facets: Vec<usize>,
    /// Indices of the parent's vertices that lie on the face.
    pub vertex_indices: Vec<usize>,
    pub vertices: Vec<Vec<T>>,
    pub dim: usize,
}

/// The farthest point `(d, ..., d)` of a polytope on the diagonal ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalPoint<T> {
    pub d_value: T,
    pub point: Vec<T>,
    pub containing_face: Face<T>,
}

/// Position of a vector relative to a finitely generated cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeMembership<T> {
    /// Interior point; `v +- epsilon * e_j` lies in the cone for every `j`.
    Interior {
        epsilon: T,
    },
    Boundary,
    Outside,
}

impl<T> ConeMembership<T> {
    pub fn is_interior(&self) -> bool {
        matches!(self, ConeMembership::Interior { .. })
    }

    pub fn is_member(&self) -> bool {
        !matches!(self, ConeMembership::Outside)
    }
}

/// A polyhedron given only by inequalities; possibly unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron<T> {
    dim: usize,
    halfspaces: Vec<Halfspace<T>>,
}

fn sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn negated<T: Field>(a: &[T]) -> Vec<T> {
    a.iter().map(|x| -x.clone()).collect()
}

/// Affine dimension of a nonempty point set (`0` for an empty set).
pub fn affine_rank<T: Field>(points: &[Vec<T>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((base, rest)) => {
            let diffs: Vec<Vec<T>> = rest.iter().map(|p| sub(p, base)).collect();
            rank(&diffs)
        }
    }
}

fn check_dims<T>(points: &[Vec<T>], n: usize) -> Result<(), GeomError> {
    match points.iter().find(|p| p.len() != n) {
        Some(p) => Err(GeomError::DimensionMismatch {
            expected: n,
            got: p.len(),
        }),
        None => Ok(()),
    }
}

/// Convex hull of a finite point set, with minimal V-rep and irredundant H-rep.
pub fn convex_hull<T: Field>(points: &[Vec<T>]) -> Result<Polytope<T>, GeomError> {
    let n = points.first().ok_or(GeomError::EmptyInput)?.len();
    if n == 0 {
        return Err(GeomError::ZeroDimension);
    }
    check_dims(points, n)?;
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let base = pts[0].clone();

    let span = row_echelon(pts[1..].iter().map(|p| sub(p, &base)).collect());
    let k = span.len();
    let mut facets = Vec::new();
    for mut e in null_space(&span, n) {
        normalize_direction(&mut e);
        let offset = dot(&e, &base);
        facets.push(Halfspace::new(negated(&e), -offset.clone()));
        facets.push(Halfspace::new(e, offset));
    }
    if k == 0 {
        return Ok(Polytope {
            dim: n,
            vertices: vec![base],
            facets,
            affine_dim: 0,
        });
    }

    // In RREF the pivot coordinates identify points of the affine hull uniquely.
    let pivots: Vec<usize> = span
        .iter()
        .map(|r| r.iter().position(|v| !v.is_zero()).expect("nonzero RREF row"))
        .collect();
    let project = |p: &[T]| -> Vec<T> { pivots.iter().map(|&c| p[c].clone()).collect() };
    let rows: Vec<Vec<T>> = pts
        .iter()
        .map(|p| {
            let mut r = project(p);
            r.push(-T::one());
            r
        })
        .collect();
    let rays =
        dd::extreme_rays(&rows, k + 1).ok_or_else(|| GeomError::Internal("inequality cone is not pointed".into()))?;

    let mut reduced: Vec<(Vec<T>, T)> = Vec::with_capacity(rays.len());
    for mut ray in rays {
        let b = ray.pop().expect("ray has k+1 entries");
        reduced.push((ray, b));
    }
    let vertices: Vec<Vec<T>> = pts
        .iter()
        .filter(|p| {
            let q = project(p);
            let tight: Vec<Vec<T>> = reduced
                .iter()
                .filter(|(a, b)| dot(a, &q) == *b)
                .map(|(a, _)| a.clone())
                .collect();
            rank(&tight) == k
        })
        .cloned()
        .collect();
    for (a, b) in reduced {
        let mut normal = vec![T::zero(); n];
        for (i, &c) in pivots.iter().enumerate() {
            normal[c] = a[i].clone();
        }
        facets.push(Halfspace::new(normal, b));
    }
    Ok(Polytope {
        dim: n,
        vertices,
        facets,
        affine_dim: k,
    })
}

/// Newton polytope of a map: convex hull of the union of component supports.
pub fn newton_polytope(f: &PolynomialMap) -> Result<Polytope<BigRational>, GeomError> {
    let points: Vec<Vec<BigRational>> = f.support().iter().map(|m| m.as_rational_point()).collect();
    convex_hull(&points)
}

impl<T: Field> Polytope<T> {
    /// Bounded polytope from an inequality system.
    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace<T>]) -> Result<Self, GeomError> {
        Polyhedron::new(dim, halfspaces.to_vec())?.to_polytope()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace<T>] {
        &self.facets
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|h| h.contains(x))
    }

    /// Strict interior membership (relative to R^n).
    pub fn contains_in_interior(&self, x: &[T]) -> bool {
        self.is_full_dimensional() && x.len() == self.dim && self.facets.iter().all(|h| h.slack(x).is_positive())
    }

    pub fn as_polyhedron(&self) -> Polyhedron<T> {
        Polyhedron {
            dim: self.dim,
            halfspaces: self.facets.clone(),
        }
    }

    /// Every vertex of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Polytope<T>) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// Image under `x -> k x`.
    pub fn scaled(&self, k: &T) -> Result<Polytope<T>, GeomError> {
        let pts: Vec<Vec<T>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x.clone() * k.clone()).collect())
            .collect();
        convex_hull(&pts)
    }

    fn face_from_vertex_set(&self, vertex_indices: Vec<usize>) -> Face<T> {
        let vertices: Vec<Vec<T>> = vertex_indices.iter().map(|&i| self.vertices[i].clone()).collect();
        let tight_facets = (0..self.facets.len())
            .filter(|&j| vertices.iter().all(|v| self.facets[j].is_tight(v)))
            .collect();
        let dim = affine_rank(&vertices);
        Face {
            tight_facets,
            vertex_indices,
            vertices,
            dim,
        }
    }
}

/// Downward closure in the nonnegative orthant, by zeroing coordinate subsets
/// of every vertex.
pub fn downward_closure<T: Field>(p: &Polytope<T>) -> Result<Polytope<T>, GeomError> {
    if let Some(i) = p.vertices.iter().position(|v| v.iter().any(|x| x.is_negative())) {
        return Err(GeomError::NegativeCoordinate { vertex: i });
    }
    let n = p.dim;
    let mut candidates = BTreeSet::new();
    for v in &p.vertices {
        for mask in 0u64..(1u64 << n) {
            let w: Vec<T> = v
                .iter()
                .enumerate()
                .map(|(j, x)| if mask >> j & 1 == 1 { T::zero() } else { x.clone() })
                .collect();
            candidates.insert(w);
        }
    }
    convex_hull(&candidates.into_iter().collect::<Vec<_>>())
}

/// Largest `d >= 0` with `(d, ..., d)` in `p`, by exact LP; `None` if the
/// diagonal ray misses `p`.
pub fn diagonal_farthest<T: Field>(p: &Polytope<T>) -> Result<Option<DiagonalPoint<T>>, GeomError> {
    let mut lp = LinearProgram::new(Sense::Maximize, vec![T::one()]).with_all_nonneg();
    for h in &p.facets {
        let row_sum = h.normal.iter().fold(T::zero(), |acc, x| acc + x.clone());
        lp = lp.with_constraint(vec![row_sum], Relation::Le, h.offset.clone());
    }
    let sol = solve_basic(&lp)?;
    match sol.status {
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(GeomError::Internal("polytope is unbounded along the diagonal".into())),
        LpStatus::Optimal => {
            let d = sol.value.expect("optimal value");
            let point = vec![d.clone(); p.dim];
            let containing_face = smallest_face_at(p, &point)?;
            Ok(Some(DiagonalPoint {
                d_value: d,
                point,
                containing_face,
            }))
        }
    }
}

/// The face cut out by all facets tight at `x`; `x` is in its relative interior.
pub fn smallest_face_at<T: Field>(p: &Polytope<T>, x: &[T]) -> Result<Face<T>, GeomError> {
    if x.len() != p.dim {
        return Err(GeomError::DimensionMismatch {
            expected: p.dim,
            got: x.len(),
        });
    }
    if !p.contains(x) {
        return Err(GeomError::NotMember);
    }
    let tight: Vec<usize> = (0..p.facets.len()).filter(|&j| p.facets[j].is_tight(x)).collect();
    let vertex_indices: Vec<usize> = (0..p.vertices.len())
        .filter(|&i| tight.iter().all(|&j| p.facets[j].is_tight(&p.vertices[i])))
        .collect();
    Ok(p.face_from_vertex_set(vertex_indices))
}

/// All nonempty faces, sorted by dimension and then by vertex indices.
pub fn faces_all<T: Field>(p: &Polytope<T>) -> Vec<Face<T>> {
    let facet_sets: Vec<Vec<usize>> = p
        .facets
        .iter()
        .map(|h| (0..p.vertices.len()).filter(|&i| h.is_tight(&p.vertices[i])).collect())
        .collect();
    let whole: Vec<usize> = (0..p.vertices.len()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = vec![whole];
    while let Some(set) = queue.pop() {
        if set.is_empty() || !seen.insert(set.clone()) {
            continue;
        }
        for fs in &facet_sets {
            let meet: Vec<usize> = set.iter().copied().filter(|i| fs.contains(i)).collect();
            if !meet.is_empty() && !seen.contains(&meet) {
                queue.push(meet);
            }
        }
    }
    let mut faces: Vec<Face<T>> = seen.into_iter().map(|s| p.face_from_vertex_set(s)).collect();
    faces.sort_by(|a, b| (a.dim, &a.vertex_indices).cmp(&(b.dim, &b.vertex_indices)));
    faces
}

/// True iff `v` is a nonnegative combination of `generators`.
pub fn cone_contains<T: Field>(generators: &[Vec<T>], v: &[T]) -> Result<bool, GeomError> {
    let n = v.len();
    check_dims(generators, n)?;
    let gens: Vec<&Vec<T>> = generators.iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
    if gens.is_empty() {
        return Ok(v.iter().all(|x| x.is_zero()));
    }
    let mut lp = LinearProgram::new(Sense::Maximize, vec![T::zero(); gens.len()]).with_all_nonneg();
    for j in 0..n {
        let row = gens.iter().map(|g| g[j].clone()).collect();
        lp = lp.with_constraint(row, Relation::Eq, v[j].clone());
    }
    Ok(solve_basic(&lp)?.status == LpStatus::Optimal)
}

/// Classifies `v` against `cone(V) = {sum lambda_i alpha_i : lambda >= 0}`.
pub fn cone_membership<T: Field>(generators: &[Vec<T>], v: &[T]) -> Result<ConeMembership<T>, GeomError> {
    if generators.is_empty() {
        return Err(GeomError::EmptyInput);
    }
    let n = v.len();
    if !cone_contains(generators, v)? {
        return Ok(ConeMembership::Outside);
    }
    if rank(generators) < n {
        return Ok(ConeMembership::Boundary);
    }
    // Facet normals of cone(V) are the extreme rays of {y : <alpha, y> <= 0}.
    let normals =
        dd::extreme_rays(generators, n).ok_or_else(|| GeomError::Internal("polar cone is not pointed".into()))?;
    let mut epsilon: Option<T> = None;
    for y in &normals {
        let value = dot(y, v);
        if !value.is_negative() {
            return Ok(ConeMembership::Boundary);
        }
        let spread = y.iter().map(|c| c.abs()).max().expect("nonempty normal");
        let margin = -value / spread;
        epsilon = Some(match epsilon {
            Some(e) if e <= margin => e,
            _ => margin,
        });
    }
    Ok(ConeMembership::Interior {
        epsilon: epsilon.unwrap_or_else(T::one),
    })
}

/// True iff some convex combination of the generators has all coordinates > 0.
pub fn cone_meets_open_orthant<T: Field>(generators: &[Vec<T>]) -> Result<bool, GeomError> {
    let n = generators.first().ok_or(GeomError::EmptyInput)?.len();
    check_dims(generators, n)?;
    let s = generators.len();
    // variables: lambda_1..lambda_s >= 0, t free
    let mut objective = vec![T::zero(); s];
    objective.push(T::one());
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for flag in lp.nonneg.iter_mut().take(s) {
        *flag = true;
    }
    for j in 0..n {
        let mut row: Vec<T> = generators.iter().map(|g| g[j].clone()).collect();
        row.push(-T::one());
        lp = lp.with_constraint(row, Relation::Ge, T::zero());
    }
    let mut simplex = vec![T::one(); s];
    simplex.push(T::zero());
    lp = lp.with_constraint(simplex, Relation::Eq, T::one());
    let sol = solve_basic(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value.expect("optimal value").is_positive()),
        _ => Err(GeomError::Internal("orthant LP is not optimal".into())),
    }
}

/// Polar set `{y : <x, y> <= 1 for all x in p}` as an inequality system.
pub fn polar<T: Field>(p: &Polytope<T>) -> Polyhedron<T> {
    Polyhedron {
        dim: p.dim,
        halfspaces: p
            .vertices
            .iter()
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .map(|v| Halfspace::new(v.clone(), T::one()))
            .collect(),
    }
}

impl<T: Field> Polyhedron<T> {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace<T>>) -> Result<Self, GeomError> {
        if dim == 0 {
            return Err(GeomError::ZeroDimension);
        }
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                got: h.normal.len(),
            });
        }
        Ok(Polyhedron { dim, halfspaces })
    }

    /// `{x : <row, x> <= 1}` for each row.
    pub fn from_rows(dim: usize, rows: &[Vec<T>]) -> Result<Self, GeomError> {
        let hs = rows.iter().map(|r| Halfspace::new(r.clone(), T::one())).collect();
        Polyhedron::new(dim, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace<T>] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim && self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Vertex enumeration; fails if the system is empty or unbounded.
    pub fn to_polytope(&self) -> Result<Polytope<T>, GeomError> {
        let n = self.dim;
        let mut feas = LinearProgram::new(Sense::Maximize, vec![T::zero(); n]);
        for h in &self.halfspaces {
            feas = feas.with_constraint(h.normal.clone(), Relation::Le, h.offset.clone());
        }
        if self.halfspaces.is_empty() {
            return Err(GeomError::Unbounded);
        }
        if solve_basic(&feas)?.status == LpStatus::Infeasible {
            return Err(GeomError::Infeasible);
        }
        // homogenize: {(x, t) : <q, x> - d t <= 0, -t <= 0}
        let mut rows: Vec<Vec<T>> = self
            .halfspaces
            .iter()
            .map(|h| {
                let mut r = h.normal.clone();
                r.push(-h.offset.clone());
                r
            })
            .collect();
        let mut t_bound = vec![T::zero(); n];
        t_bound.push(-T::one());
        rows.push(t_bound);
        let rays = dd::extreme_rays(&rows, n + 1).ok_or(GeomError::Unbounded)?;
        let mut points = Vec::with_capacity(rays.len());
        for mut ray in rays {
            let t = ray.pop().expect("ray has n+1 entries");
            if t.is_zero() {
                return Err(GeomError::Unbounded);
            }
            points.push(ray.into_iter().map(|x| x / t.clone()).collect::<Vec<T>>());
        }
        convex_hull(&points)
    }

    /// Polar of `{<q_i, x> <= d_i}` with every `d_i > 0`: `conv{O, q_i / d_i}`.
    pub fn polar(&self) -> Result<Polytope<T>, GeomError> {
        let mut points = vec![vec![T::zero(); self.dim]];
        for h in &self.halfspaces {
            if h.normal.iter().all(|x| x.is_zero()) {
                if h.offset.is_negative() {
                    return Err(GeomError::Infeasible);
                }
                continue;
            }
            if !h.offset.is_positive() {
                return Err(GeomError::OriginNotInterior);
            }
            points.push(h.normal.iter().map(|x| x.clone() / h.offset.clone()).collect());
        }
        convex_hull(&points)
    }
}

impl<I> Polytope<Ratio<I>>
where
    I: Integer + Clone + Display + Signed + FromStr + std::hash::Hash + Send + Sync,
    Ratio<I>: Field,
{
    /// `{"n", "affine_dim", "vertices": [[[num,den],...],...], "facets": [{"normal", "offset"}]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.dim,
            "affine_dim": self.affine_dim,
            "vertices": self.vertices.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>(),
            "facets": self.facets.iter().map(|h| json!({
                "normal": vector_to_json(&h.normal),
                "offset": rational_to_json(&h.offset),
            })).collect::<Vec<_>>(),
        })
    }

    /// Rebuilds the polytope from its vertices; supplied facets must be valid.
    pub fn from_json(v: &Value) -> Result<Self, GeomError> {
        let bad = |m: &str| GeomError::Json(m.to_string());
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing \"n\""))? as usize;
        let vertices: Vec<Vec<Ratio<I>>> = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"vertices\""))?
            .iter()
            .map(|p| vector_from_json(p).ok_or_else(|| bad("malformed vertex")))
            .collect::<Result<_, _>>()?;
        check_dims(&vertices, n)?;
        let hull = convex_hull(&vertices)?;
        if let Some(facets) = v.get("facets").and_then(Value::as_array) {
            for f in facets {
                let normal: Vec<Ratio<I>> = f
                    .get("normal")
                    .and_then(vector_from_json)
                    .ok_or_else(|| bad("malformed facet normal"))?;
                let offset = f
                    .get("offset")
                    .and_then(rational_from_json)
                    .ok_or_else(|| bad("malformed facet offset"))?;
                check_dims(std::slice::from_ref(&normal), n)?;
                let h = Halfspace::new(normal, offset);
                if !hull.vertices.iter().all(|x| h.contains(x)) {
                    return Err(bad("facet violated by a vertex"));
                }
            }
        }
        Ok(hull)
    }
}
