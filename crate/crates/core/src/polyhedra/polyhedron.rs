use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::enumerate::{constraints_from_generators, generators_from_constraints};
use crate::lattice::rational::{
    self, canonical_basis, dot, format_rational, primitive_int, rank, reduce_mod_span, rref, QVector,
    Rational,
};
use crate::lattice::IntVector;

/// `normal · x ≥ offset` (or `=` when used as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub normal: IntVector,
    pub offset: Rational,
}

impl AffineForm {
    pub fn new(normal: IntVector, offset: Rational) -> Self {
        AffineForm { normal, offset }
    }

    pub fn linear(normal: IntVector) -> Self {
        AffineForm {
            normal,
            offset: Rational::zero(),
        }
    }

    /// `normal · x − offset`
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.normal.to_rational(), x) - &self.offset
    }

    pub fn eval_direction(&self, d: &[Rational]) -> Rational {
        dot(&self.normal.to_rational(), d)
    }

    pub fn negated(&self) -> Self {
        AffineForm {
            normal: -&self.normal,
            offset: -self.offset.clone(),
        }
    }

    fn from_rational(a: &[Rational], b: Rational) -> Option<Self> {
        let normal = primitive_int(a);
        if normal.is_zero() {
            return None;
        }
        // a = k · normal with k > 0; divide the offset by the same k.
        let i = a.iter().position(|x| !x.is_zero())?;
        let k = &a[i] / Rational::from_integer(normal[i].clone());
        Some(AffineForm { normal, offset: b / k })
    }
}

/// Minimal inequality description: the affine hull as equations plus one
/// inequality per facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpaces {
    pub equations: Vec<AffineForm>,
    pub inequalities: Vec<AffineForm>,
}

/// A nonempty rational polyhedron `conv(vertices) + cone(rays) + span(lineality)`.
///
/// The description is canonical: the lineality basis is in reduced echelon
/// form, and the vertices and extreme rays are those of the pointed slice
/// orthogonal to the lineality space. Equality, ordering and hashing compare
/// these sets, so two polyhedra are equal exactly when they are equal as
/// point sets.
#[derive(Clone)]
pub struct Polyhedron {
    ambient: usize,
    vertices: Vec<QVector>,
    rays: Vec<IntVector>,
    lineality: Vec<IntVector>,
    dim: usize,
    hrep: OnceLock<HalfSpaces>,
}

fn homogenize(a: &[Rational], b: &Rational) -> QVector {
    let mut v = a.to_vec();
    v.push(-b.clone());
    v
}

impl Polyhedron {
    /// `{x : eq.normal·x = eq.offset, ineq.normal·x ≥ ineq.offset}`, or `None`
    /// if that set is empty.
    pub fn from_constraints(ambient: usize, equations: &[AffineForm], inequalities: &[AffineForm]) -> Option<Self> {
        let eqs: Vec<QVector> = equations
            .iter()
            .map(|f| homogenize(&f.normal.to_rational(), &f.offset))
            .collect();
        let ineqs: Vec<QVector> = inequalities
            .iter()
            .map(|f| homogenize(&f.normal.to_rational(), &f.offset))
            .collect();
        Self::from_homogeneous(ambient, &eqs, &ineqs)
    }

    /// Same as [`Polyhedron::from_constraints`] with rational normals.
    pub fn from_rational_constraints(
        ambient: usize,
        equations: &[(QVector, Rational)],
        inequalities: &[(QVector, Rational)],
    ) -> Option<Self> {
        let eqs: Vec<QVector> = equations.iter().map(|(a, b)| homogenize(a, b)).collect();
        let ineqs: Vec<QVector> = inequalities.iter().map(|(a, b)| homogenize(a, b)).collect();
        Self::from_homogeneous(ambient, &eqs, &ineqs)
    }

    fn from_homogeneous(ambient: usize, eqs: &[QVector], ineqs: &[QVector]) -> Option<Self> {
        let d = ambient + 1;
        let mut ineqs = ineqs.to_vec();
        let mut t = rational::zeros(d);
        t[ambient] = Rational::one();
        ineqs.push(t);
        let gens = generators_from_constraints(d, eqs, &ineqs);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in gens.rays {
            let last = &r[ambient];
            if last.is_zero() {
                rays.push(IntVector(r.0[..ambient].to_vec()));
            } else {
                let scale = Rational::from_integer(last.clone());
                vertices.push(r.0[..ambient].iter().map(|c| Rational::from_integer(c.clone()) / &scale).collect());
            }
        }
        if vertices.is_empty() {
            return None;
        }
        let lineality = gens
            .lineality
            .into_iter()
            .map(|l| IntVector(l.0[..ambient].to_vec()))
            .collect();
        Some(Self::from_canonical_parts(ambient, vertices, rays, lineality))
    }

    /// `conv(points) + cone(rays) + span(lines)`; `None` if `points` is empty.
    pub fn from_generators(ambient: usize, points: &[QVector], rays: &[QVector], lines: &[QVector]) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        let gens: Vec<QVector> = points
            .iter()
            .map(|p| homogenize(p, &-Rational::one()))
            .chain(rays.iter().map(|r| homogenize(r, &Rational::zero())))
            .collect();
        let lines: Vec<QVector> = lines.iter().map(|l| homogenize(l, &Rational::zero())).collect();
        let (eqs, facets) = constraints_from_generators(ambient + 1, &gens, &lines);
        let eqs: Vec<QVector> = eqs.iter().map(IntVector::to_rational).collect();
        let facets: Vec<QVector> = facets.iter().map(IntVector::to_rational).collect();
        Self::from_homogeneous(ambient, &eqs, &facets)
    }

    /// The cone generated by integer rays, apex at the origin.
    pub fn cone(ambient: usize, rays: &[IntVector]) -> Self {
        let rays: Vec<QVector> = rays.iter().map(IntVector::to_rational).collect();
        Self::from_generators(ambient, &[rational::zeros(ambient)], &rays, &[]).expect("a cone contains its apex")
    }

    pub(crate) fn from_canonical_parts(
        ambient: usize,
        mut vertices: Vec<QVector>,
        mut rays: Vec<IntVector>,
        lineality: Vec<IntVector>,
    ) -> Self {
        vertices.sort();
        vertices.dedup();
        rays.sort();
        rays.dedup();
        let dirs = direction_rows(&vertices, &rays, &lineality);
        let dim = rank(&dirs, ambient);
        Polyhedron {
            ambient,
            vertices,
            rays,
            lineality,
            dim,
            hrep: OnceLock::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IntVector] {
        &self.lineality
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Whether this polyhedron is a cone with apex at the origin.
    pub fn is_cone(&self) -> bool {
        self.vertices.len() == 1 && rational::is_zero(&self.vertices[0])
    }

    pub fn hrep(&self) -> &HalfSpaces {
        self.hrep.get_or_init(|| self.compute_hrep())
    }

    pub fn equations(&self) -> &[AffineForm] {
        &self.hrep().equations
    }

    /// Facet inequalities.
    pub fn inequalities(&self) -> &[AffineForm] {
        &self.hrep().inequalities
    }

    fn compute_hrep(&self) -> HalfSpaces {
        let n = self.ambient;
        let gens: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| homogenize(v, &-Rational::one()))
            .chain(self.rays.iter().map(|r| homogenize(&r.to_rational(), &Rational::zero())))
            .collect();
        let lines: Vec<QVector> = self
            .lineality
            .iter()
            .map(|l| homogenize(&l.to_rational(), &Rational::zero()))
            .collect();
        let (eqs, facets) = constraints_from_generators(n + 1, &gens, &lines);
        let split = |h: &IntVector| {
            let q = h.to_rational();
            (q[..n].to_vec(), -q[n].clone())
        };
        let equations = eqs
            .iter()
            .filter_map(|h| {
                let (a, b) = split(h);
                AffineForm::from_rational(&a, b)
            })
            .collect();
        let inequalities = facets
            .iter()
            .filter_map(|h| {
                let (a, b) = split(h);
                let form = AffineForm::from_rational(&a, b)?;
                // The face at infinity of the homogenization touches no vertex.
                self.vertices.iter().any(|v| form.eval(v).is_zero()).then_some(form)
            })
            .collect();
        HalfSpaces {
            equations,
            inequalities,
        }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let h = self.hrep();
        h.equations.iter().all(|f| f.eval(x).is_zero()) && h.inequalities.iter().all(|f| !f.eval(x).is_negative())
    }

    /// Float membership with an absolute slack on every constraint.
    pub fn contains_f64(&self, x: &[f64], tol: f64) -> bool {
        let eval = |f: &AffineForm| {
            let off = num_traits::ToPrimitive::to_f64(&f.offset).unwrap_or(f64::NAN);
            f.normal.to_f64().iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - off
        };
        let h = self.hrep();
        h.equations.iter().all(|f| eval(f).abs() <= tol) && h.inequalities.iter().all(|f| eval(f) >= -tol)
    }

    /// Canonical basis of the linear space parallel to the affine hull.
    pub fn linear_span(&self) -> Vec<IntVector> {
        canonical_basis(&direction_rows(&self.vertices, &self.rays, &self.lineality), self.ambient)
    }

    /// Identifies the affine hull: two polyhedra have equal keys iff their
    /// affine hulls coincide.
    pub fn affine_span_key(&self) -> (Vec<IntVector>, QVector) {
        let dirs = direction_rows(&self.vertices, &self.rays, &self.lineality);
        let (rows, pivots) = rref(&dirs, self.ambient);
        let offset = reduce_mod_span(&self.vertices[0], &rows, &pivots);
        (rows.iter().map(|r| primitive_int(r)).collect(), offset)
    }

    /// A point in the relative interior: the vertex barycenter plus the sum
    /// of the extreme rays.
    pub fn relative_interior_point(&self) -> QVector {
        let k = Rational::from_integer(self.vertices.len().into());
        let mut p = rational::zeros(self.ambient);
        for v in &self.vertices {
            p = rational::add(&p, v);
        }
        p = rational::scale(&p, &k.recip());
        for r in &self.rays {
            p = rational::add(&p, &r.to_rational());
        }
        p
    }

    /// The face cut out by making `form` tight. `form` must be valid
    /// (nonnegative) on the polyhedron.
    pub fn face_where_tight(&self, form: &AffineForm) -> Option<Polyhedron> {
        let vertices: Vec<QVector> = self.vertices.iter().filter(|v| form.eval(v).is_zero()).cloned().collect();
        if vertices.is_empty() {
            return None;
        }
        let rays = self
            .rays
            .iter()
            .filter(|r| form.eval_direction(&r.to_rational()).is_zero())
            .cloned()
            .collect();
        Some(Self::from_canonical_parts(self.ambient, vertices, rays, self.lineality.clone()))
    }

    pub fn facets(&self) -> Vec<Polyhedron> {
        let mut out: Vec<Polyhedron> = self
            .inequalities()
            .iter()
            .filter_map(|f| self.face_where_tight(f))
            .filter(|f| f.dim + 1 == self.dim)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Every nonempty face, including the polyhedron itself, sorted.
    pub fn faces(&self) -> Vec<Polyhedron> {
        let mut seen: BTreeSet<Polyhedron> = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(p) = stack.pop() {
            if seen.contains(&p) {
                continue;
            }
            stack.extend(p.facets());
            seen.insert(p);
        }
        seen.into_iter().collect()
    }

    pub fn intersect(&self, other: &Polyhedron) -> Option<Polyhedron> {
        assert_eq!(self.ambient, other.ambient, "intersecting polyhedra of different ambient dimension");
        let (a, b) = (self.hrep(), other.hrep());
        let eqs: Vec<AffineForm> = a.equations.iter().chain(&b.equations).cloned().collect();
        let ineqs: Vec<AffineForm> = a.inequalities.iter().chain(&b.inequalities).cloned().collect();
        Polyhedron::from_constraints(self.ambient, &eqs, &ineqs)
    }

    pub fn intersect_halfspace(&self, form: &AffineForm) -> Option<Polyhedron> {
        let h = self.hrep();
        let mut ineqs = h.inequalities.clone();
        ineqs.push(form.clone());
        Polyhedron::from_constraints(self.ambient, &h.equations, &ineqs)
    }

    /// Whether the hyperplane `form = 0` passes through the relative
    /// interior, i.e. both open sides meet the polyhedron.
    pub fn is_split_by(&self, form: &AffineForm) -> bool {
        let mut pos = false;
        let mut neg = false;
        for v in &self.vertices {
            match rational::sign(&form.eval(v)) {
                1 => pos = true,
                -1 => neg = true,
                _ => {}
            }
        }
        for r in &self.rays {
            match rational::sign(&form.eval_direction(&r.to_rational())) {
                1 => pos = true,
                -1 => neg = true,
                _ => {}
            }
        }
        if self.lineality.iter().any(|l| !form.eval_direction(&l.to_rational()).is_zero()) {
            return true;
        }
        pos && neg
    }

    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        let h = other.hrep();
        let dir_ok = |d: &QVector, both_signs: bool| {
            h.equations.iter().all(|f| f.eval_direction(d).is_zero())
                && h.inequalities.iter().all(|f| {
                    let s = f.eval_direction(d);
                    if both_signs {
                        s.is_zero()
                    } else {
                        !s.is_negative()
                    }
                })
        };
        self.vertices.iter().all(|v| other.contains(v))
            && self.rays.iter().all(|r| dir_ok(&r.to_rational(), false))
            && self.lineality.iter().all(|l| dir_ok(&l.to_rational(), true))
    }

    /// Whether `self` is a (nonempty) face of `other`.
    pub fn is_face_of(&self, other: &Polyhedron) -> bool {
        if !self.is_subset_of(other) {
            return false;
        }
        let mut face = other.clone();
        for f in other.inequalities() {
            let tight = self.vertices.iter().all(|v| f.eval(v).is_zero())
                && self.rays.iter().all(|r| f.eval_direction(&r.to_rational()).is_zero());
            if tight {
                match face.face_where_tight(f) {
                    Some(next) => face = next,
                    None => return false,
                }
            }
        }
        face == *self
    }

    /// Intersection with the axis-parallel box `lo ≤ x ≤ hi`.
    pub fn clip_to_box(&self, lo: &[Rational], hi: &[Rational]) -> Option<Polyhedron> {
        let n = self.ambient;
        let h = self.hrep();
        let mut ineqs = h.inequalities.clone();
        for i in 0..n {
            ineqs.push(AffineForm::new(IntVector::unit(n, i), lo[i].clone()));
            ineqs.push(AffineForm::new(-&IntVector::unit(n, i), -hi[i].clone()));
        }
        Polyhedron::from_constraints(n, &h.equations, &ineqs)
    }

    fn key(&self) -> (usize, &[IntVector], &[QVector], &[IntVector]) {
        (self.ambient, &self.lineality, &self.vertices, &self.rays)
    }
}

fn direction_rows(vertices: &[QVector], rays: &[IntVector], lineality: &[IntVector]) -> Vec<QVector> {
    let mut dirs: Vec<QVector> = Vec::new();
    if let Some(v0) = vertices.first() {
        dirs.extend(vertices[1..].iter().map(|v| rational::sub(v, v0)));
    }
    dirs.extend(rays.iter().map(IntVector::to_rational));
    dirs.extend(lineality.iter().map(IntVector::to_rational));
    dirs
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Polyhedron {}

impl Hash for Polyhedron {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for Polyhedron {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polyhedron {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim, self.key()).cmp(&(other.dim, other.key()))
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(format_rational).collect())
            .collect();
        f.debug_struct("Polyhedron")
            .field("dim", &self.dim)
            .field("vertices", &verts)
            .field("rays", &self.rays.iter().map(ToString::to_string).collect::<Vec<_>>())
            .field("lineality", &self.lineality.iter().map(ToString::to_string).collect::<Vec<_>>())
            .finish()
    }
}
