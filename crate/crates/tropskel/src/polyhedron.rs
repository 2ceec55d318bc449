//! Exact rational polyhedra in H-representation: canonicalization, dimension,
//! recession cones, local cones, relative-interior points, linear images, and
//! union-support comparisons.
//!
//! Every `Polyhedron` value is canonical by construction: implicit equalities
//! are promoted, inequalities are reduced modulo the equality space and made
//! primitive-integer, redundant rows are dropped, and rows are sorted. Two
//! values describe the same set iff they compare equal.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exact::{
    dot, fm_project, primitive_integer, rank_of_rows, rref_of_rows, solve_feasibility, Constraint,
    Feasibility, LinearSystem, Mat, Rat, Rel,
};

/// One canonical constraint row `<a, x> (=|>=) b` with `a` primitive integer.
pub type Row = (Vec<Rat>, Rat);

/// An exact rational polyhedron in canonical H-representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    ambient: usize,
    empty: bool,
    eqs: Vec<Row>,
    ineqs: Vec<Row>,
    dim: i64,
}

impl std::fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.empty {
            return write!(f, "Polyhedron(R^{}, empty)", self.ambient);
        }
        write!(f, "Polyhedron(R^{}, dim {}", self.ambient, self.dim)?;
        for (a, b) in &self.eqs {
            write!(f, ", {a:?} = {b}")?;
        }
        for (a, b) in &self.ineqs {
            write!(f, ", {a:?} >= {b}")?;
        }
        write!(f, ")")
    }
}

fn row_cmp(x: &Row, y: &Row) -> Ordering {
    x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1))
}

/// Scale `(a, b)` so `a` is primitive integer; sign is preserved.
fn scale_row(a: &[Rat], b: &Rat) -> Row {
    let ints = primitive_integer(a);
    if ints.iter().all(num_traits::Zero::is_zero) {
        return (a.to_vec(), b.clone());
    }
    let k = a.iter().position(|v| !v.is_zero()).unwrap();
    let f = &Rat::from_big(ints[k].clone()) / &a[k];
    (ints.into_iter().map(Rat::from_big).collect(), b * &f)
}

/// Same, but also flips the sign so the first nonzero coefficient is positive
/// (only valid for equality rows).
fn scale_eq_row(a: &[Rat], b: &Rat) -> Row {
    let (mut a2, mut b2) = scale_row(a, b);
    if let Some(k) = a2.iter().position(|v| !v.is_zero()) {
        if a2[k].is_negative() {
            for v in a2.iter_mut() {
                *v = -&*v;
            }
            b2 = -b2;
        }
    }
    (a2, b2)
}

impl Polyhedron {
    /// Canonicalize raw H-data. This is the only constructor; everything the
    /// crate hands out is canonical.
    pub fn canonicalize(ambient: usize, eqs: Vec<Row>, ineqs: Vec<Row>) -> Result<Polyhedron> {
        for (a, _) in eqs.iter().chain(&ineqs) {
            if a.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: a.len(),
                    context: "polyhedron constraint".into(),
                });
            }
        }

        // Emptiness first.
        let mut sys = LinearSystem::new(ambient);
        for (a, b) in &eqs {
            sys.push(Constraint::eq(a.clone(), b.clone()));
        }
        for (a, b) in &ineqs {
            sys.push(Constraint::ge(a.clone(), b.clone()));
        }
        if !solve_feasibility(&sys)?.is_feasible() {
            return Ok(Polyhedron { ambient, empty: true, eqs: vec![], ineqs: vec![], dim: -1 });
        }

        let mut cur_eqs: Vec<Row> = eqs;
        let mut cur_ineqs: Vec<Row> = Vec::new();
        for (a, b) in ineqs {
            if a.iter().all(|v| v.is_zero()) {
                continue; // trivially true on a feasible system
            }
            cur_ineqs.push(scale_row(&a, &b));
        }
        cur_ineqs.sort_by(row_cmp);
        cur_ineqs.dedup();

        // Implicit equalities: an inequality tight on all of P becomes an
        // equality (test: system with that inequality strict is infeasible).
        let mut kept: Vec<Row> = Vec::new();
        let mut pending: Vec<Row> = cur_ineqs;
        while let Some((a, b)) = pending.first().cloned() {
            pending.remove(0);
            let mut sys = LinearSystem::new(ambient);
            for (ea, eb) in &cur_eqs {
                sys.push(Constraint::eq(ea.clone(), eb.clone()));
            }
            for (ia, ib) in kept.iter().chain(pending.iter()) {
                sys.push(Constraint::ge(ia.clone(), ib.clone()));
            }
            sys.push(Constraint::gt(a.clone(), b.clone()));
            if solve_feasibility(&sys)?.is_feasible() {
                kept.push((a, b));
            } else {
                cur_eqs.push((a, b));
            }
        }

        // Canonical equality basis: RREF over Q, scaled primitive, sorted.
        let aug: Vec<Vec<Rat>> = cur_eqs
            .iter()
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let rref = rref_of_rows(&aug);
        let mut canon_eqs: Vec<Row> = rref
            .into_iter()
            .map(|mut r| {
                let b = r.pop().unwrap();
                scale_eq_row(&r, &b)
            })
            .collect();
        canon_eqs.sort_by(row_cmp);

        // Reduce inequality rows modulo the equality space; augmented rows
        // keep the right-hand side in sync with the normal.
        let eq_aug: Vec<Vec<Rat>> = canon_eqs
            .iter()
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let eq_aug_rref = rref_of_rows(&eq_aug);
        let reduce_aug = |a: &[Rat], b: &Rat| -> Row {
            let mut row = a.to_vec();
            row.push(b.clone());
            for basis_row in &eq_aug_rref {
                let p = basis_row.iter().position(|v| !v.is_zero()).unwrap();
                if p >= a.len() {
                    continue; // cannot happen for a consistent system
                }
                if row[p].is_zero() {
                    continue;
                }
                let f = &row[p] / &basis_row[p];
                for j in 0..row.len() {
                    row[j] = &row[j] - &(&f * &basis_row[j]);
                }
            }
            let b2 = row.pop().unwrap();
            (row, b2)
        };

        let mut reduced: Vec<Row> = Vec::new();
        for (a, b) in kept {
            let (ra, rb) = reduce_aug(&a, &b);
            if ra.iter().all(|v| v.is_zero()) {
                continue; // inequality implied by equalities
            }
            reduced.push(scale_row(&ra, &rb));
        }
        reduced.sort_by(row_cmp);
        reduced.dedup();

        // Redundancy: drop inequalities implied by the rest.
        let mut final_ineqs: Vec<Row> = reduced;
        let mut i = 0;
        while i < final_ineqs.len() {
            let (a, b) = final_ineqs[i].clone();
            let mut sys = LinearSystem::new(ambient);
            for (ea, eb) in &canon_eqs {
                sys.push(Constraint::eq(ea.clone(), eb.clone()));
            }
            for (j, (ia, ib)) in final_ineqs.iter().enumerate() {
                if j != i {
                    sys.push(Constraint::ge(ia.clone(), ib.clone()));
                }
            }
            // Violation of row i: <a, x> < b, i.e. <-a, x> > -b.
            let neg: Vec<Rat> = a.iter().map(|v| -v).collect();
            sys.push(Constraint::gt(neg, -b));
            if solve_feasibility(&sys)?.is_feasible() {
                i += 1; // irredundant
            } else {
                final_ineqs.remove(i);
            }
        }

        let dim = ambient as i64 - rank_of_rows(&canon_eqs.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>()) as i64;
        Ok(Polyhedron { ambient, empty: false, eqs: canon_eqs, ineqs: final_ineqs, dim })
    }

    /// Convenience constructor from integer data.
    pub fn from_i64(ambient: usize, eqs: &[(&[i64], i64)], ineqs: &[(&[i64], i64)]) -> Polyhedron {
        let conv = |rows: &[(&[i64], i64)]| -> Vec<Row> {
            rows.iter()
                .map(|(a, b)| (a.iter().map(|&v| Rat::from_int(v)).collect(), Rat::from_int(*b)))
                .collect()
        };
        Polyhedron::canonicalize(ambient, conv(eqs), conv(ineqs)).expect("valid i64 polyhedron")
    }

    /// The whole space `R^n`.
    pub fn full_space(ambient: usize) -> Polyhedron {
        Polyhedron { ambient, empty: false, eqs: vec![], ineqs: vec![], dim: ambient as i64 }
    }

    /// The canonical empty polyhedron.
    pub fn empty(ambient: usize) -> Polyhedron {
        Polyhedron { ambient, empty: true, eqs: vec![], ineqs: vec![], dim: -1 }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Dimension of the affine hull; -1 for the empty polyhedron.
    pub fn dimension(&self) -> i64 {
        self.dim
    }

    pub fn equalities(&self) -> &[Row] {
        &self.eqs
    }

    pub fn inequalities(&self) -> &[Row] {
        &self.ineqs
    }

    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: x.len(),
                context: "point membership".into(),
            });
        }
        if self.empty {
            return Ok(false);
        }
        Ok(self.eqs.iter().all(|(a, b)| dot(a, x) == *b)
            && self.ineqs.iter().all(|(a, b)| dot(a, x) >= *b))
    }

    /// True iff `x` satisfies all equalities exactly and all inequalities
    /// strictly: membership in the relative interior.
    pub fn contains_in_relint(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: x.len(),
                context: "relint membership".into(),
            });
        }
        if self.empty {
            return Ok(false);
        }
        Ok(self.eqs.iter().all(|(a, b)| dot(a, x) == *b)
            && self.ineqs.iter().all(|(a, b)| dot(a, x) > *b))
    }

    /// Deterministic exact rational point in the relative interior.
    pub fn relint_point(&self) -> Result<Vec<Rat>> {
        if self.empty {
            return Err(Error::EmptyInput("relint_point of empty polyhedron".into()));
        }
        let mut sys = LinearSystem::new(self.ambient);
        for (a, b) in &self.eqs {
            sys.push(Constraint::eq(a.clone(), b.clone()));
        }
        for (a, b) in &self.ineqs {
            sys.push(Constraint::gt(a.clone(), b.clone()));
        }
        match solve_feasibility(&sys)? {
            Feasibility::Witness(w) => Ok(w),
            Feasibility::Infeasible => Err(Error::InternalConsistency(
                "canonical nonempty polyhedron has empty relative interior".into(),
            )),
        }
    }

    /// Recession cone `{ v : <a,v> = 0 for equalities, <a,v> >= 0 for inequalities }`.
    pub fn recession_cone(&self) -> Result<ConeP> {
        if self.empty {
            return Err(Error::EmptyInput("recession cone of empty polyhedron".into()));
        }
        let zero = Rat::zero();
        let eqs: Vec<Row> = self.eqs.iter().map(|(a, _)| (a.clone(), zero.clone())).collect();
        let ineqs: Vec<Row> = self.ineqs.iter().map(|(a, _)| (a.clone(), zero.clone())).collect();
        ConeP::from_hrep(self.ambient, eqs, ineqs)
    }

    /// Cone of feasible directions at `omega in P`: equalities kept
    /// homogeneous, tight inequalities homogenized, slack inequalities
    /// dropped.
    pub fn local_cone(&self, omega: &[Rat]) -> Result<ConeP> {
        if !self.contains(omega)? {
            return Err(Error::PointNotInPolyhedron);
        }
        let zero = Rat::zero();
        let eqs: Vec<Row> = self.eqs.iter().map(|(a, _)| (a.clone(), zero.clone())).collect();
        let mut ineqs: Vec<Row> = Vec::new();
        for (a, b) in &self.ineqs {
            if dot(a, omega) == *b {
                ineqs.push((a.clone(), zero.clone()));
            }
        }
        ConeP::from_hrep(self.ambient, eqs, ineqs)
    }

    /// Exact H-representation of the image `Q(P)` under a linear map given by
    /// a matrix with `ambient` columns.
    pub fn linear_image(&self, q: &Mat) -> Result<Polyhedron> {
        if q.cols() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: q.cols(),
                context: "linear_image matrix".into(),
            });
        }
        let m = q.rows();
        if self.empty {
            return Ok(Polyhedron::empty(m));
        }
        // Variables (y_0..y_{m-1}, x_0..x_{n-1}); eliminate x.
        let n = self.ambient;
        let total = m + n;
        let mut cs: Vec<Constraint> = Vec::new();
        for i in 0..m {
            let mut a = vec![Rat::zero(); total];
            a[i] = Rat::one();
            for j in 0..n {
                a[m + j] = -q.at(i, j);
            }
            cs.push(Constraint::eq(a, Rat::zero()));
        }
        for (a, b) in &self.eqs {
            let mut row = vec![Rat::zero(); total];
            row[m..].clone_from_slice(a);
            cs.push(Constraint::eq(row, b.clone()));
        }
        for (a, b) in &self.ineqs {
            let mut row = vec![Rat::zero(); total];
            row[m..].clone_from_slice(a);
            cs.push(Constraint::ge(row, b.clone()));
        }
        let keep: Vec<usize> = (0..m).collect();
        let projected = fm_project(total, &cs, &keep)?;
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for c in projected {
            match c.rel {
                Rel::Eq => eqs.push((c.a, c.b)),
                Rel::Ge => ineqs.push((c.a, c.b)),
                Rel::Gt => {
                    // Cannot arise: inputs are weak. Keep the closure anyway.
                    ineqs.push((c.a, c.b));
                }
            }
        }
        Polyhedron::canonicalize(m, eqs, ineqs)
    }

    /// Intersection of two polyhedra in the same ambient space.
    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
                context: "intersection".into(),
            });
        }
        if self.empty || other.empty {
            return Ok(Polyhedron::empty(self.ambient));
        }
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        Polyhedron::canonicalize(self.ambient, eqs, ineqs)
    }

    /// Set containment `self ⊆ other`, decided exactly by checking that every
    /// canonical constraint of `other` is valid on `self`.
    pub fn is_subset_of(&self, other: &Polyhedron) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
                context: "subset test".into(),
            });
        }
        if self.empty {
            return Ok(true);
        }
        if other.empty {
            return Ok(false);
        }
        for (a, b) in &other.ineqs {
            if !self.implies_ge(a, b)? {
                return Ok(false);
            }
        }
        for (a, b) in &other.eqs {
            if !self.implies_ge(a, b)? {
                return Ok(false);
            }
            let neg: Vec<Rat> = a.iter().map(|v| -v).collect();
            if !self.implies_ge(&neg, &-b.clone())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Is `<a, x> >= b` valid on all of `self`?
    fn implies_ge(&self, a: &[Rat], b: &Rat) -> Result<bool> {
        let mut sys = LinearSystem::new(self.ambient);
        for (ea, eb) in &self.eqs {
            sys.push(Constraint::eq(ea.clone(), eb.clone()));
        }
        for (ia, ib) in &self.ineqs {
            sys.push(Constraint::ge(ia.clone(), ib.clone()));
        }
        let neg: Vec<Rat> = a.iter().map(|v| -v).collect();
        sys.push(Constraint::gt(neg, -b.clone()));
        Ok(!solve_feasibility(&sys)?.is_feasible())
    }

    /// Enumerate the distinct nonempty faces obtained by making subsets of
    /// the canonical inequalities tight (includes the polyhedron itself).
    pub fn faces(&self) -> Result<Vec<Polyhedron>> {
        if self.empty {
            return Ok(vec![]);
        }
        let k = self.ineqs.len();
        if k > 20 {
            return Err(Error::InvalidInput(format!(
                "face enumeration over {k} inequalities exceeds the 2^20 subset bound"
            )));
        }
        let mut seen: Vec<Polyhedron> = Vec::new();
        for mask in 0..(1u32 << k) {
            let mut eqs = self.eqs.clone();
            let mut ineqs = Vec::new();
            for (i, row) in self.ineqs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    eqs.push(row.clone());
                } else {
                    ineqs.push(row.clone());
                }
            }
            let f = Polyhedron::canonicalize(self.ambient, eqs, ineqs)?;
            if !f.is_empty() && !seen.contains(&f) {
                seen.push(f);
            }
        }
        seen.sort_by(poly_cmp);
        Ok(seen)
    }

    /// Directions of the affine hull: basis rows of `{ v : eq normals . v = 0 }`.
    pub fn direction_space(&self) -> Vec<Vec<Rat>> {
        // Solve the homogeneous system by RREF; free columns give the basis.
        let normals: Vec<Vec<Rat>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        let rref = rref_of_rows(&normals);
        let pivots: Vec<usize> = rref
            .iter()
            .map(|r| r.iter().position(|v| !v.is_zero()).unwrap())
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.ambient {
            if pivots.contains(&free) {
                continue;
            }
            let mut d = vec![Rat::zero(); self.ambient];
            d[free] = Rat::one();
            for (row, &p) in rref.iter().zip(&pivots) {
                d[p] = -&(&row[free] / &row[p]);
            }
            basis.push(d);
        }
        basis
    }
}

/// Deterministic total order on canonical polyhedra.
pub fn poly_cmp(x: &Polyhedron, y: &Polyhedron) -> Ordering {
    x.ambient
        .cmp(&y.ambient)
        .then_with(|| x.empty.cmp(&y.empty))
        .then_with(|| x.eqs.cmp(&y.eqs))
        .then_with(|| x.ineqs.cmp(&y.ineqs))
}

/// A polyhedral cone: a polyhedron all of whose right-hand sides are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConeP {
    poly: Polyhedron,
    pointed: bool,
}

impl std::fmt::Debug for ConeP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cone({:?}, pointed: {})", self.poly, self.pointed)
    }
}

impl ConeP {
    /// Build a cone from homogeneous H-data (all right-hand sides must be 0).
    pub fn from_hrep(ambient: usize, eqs: Vec<Row>, ineqs: Vec<Row>) -> Result<ConeP> {
        for (_, b) in eqs.iter().chain(&ineqs) {
            if !b.is_zero() {
                return Err(Error::InvalidInput(
                    "cone H-representation with nonzero right-hand side".into(),
                ));
            }
        }
        let poly = Polyhedron::canonicalize(ambient, eqs, ineqs)?;
        debug_assert!(!poly.is_empty(), "cones contain the origin");
        let pointed = Self::compute_pointed(&poly);
        Ok(ConeP { poly, pointed })
    }

    /// Convert ray generators into H-representation by eliminating the ray
    /// coefficients from `x = sum lambda_i r_i, lambda >= 0`.
    pub fn from_rays(ambient: usize, rays: &[Vec<Rat>]) -> Result<ConeP> {
        for r in rays {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: r.len(),
                    context: "ray generator".into(),
                });
            }
        }
        let m = rays.len();
        if m == 0 {
            return Ok(ConeP::origin(ambient));
        }
        let total = ambient + m;
        let mut cs = Vec::new();
        for i in 0..ambient {
            let mut a = vec![Rat::zero(); total];
            a[i] = Rat::one();
            for (j, ray) in rays.iter().enumerate() {
                a[ambient + j] = -&ray[i];
            }
            cs.push(Constraint::eq(a, Rat::zero()));
        }
        for j in 0..m {
            let mut a = vec![Rat::zero(); total];
            a[ambient + j] = Rat::one();
            cs.push(Constraint::ge(a, Rat::zero()));
        }
        let keep: Vec<usize> = (0..ambient).collect();
        let projected = fm_project(total, &cs, &keep)?;
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for c in projected {
            match c.rel {
                Rel::Eq => eqs.push((c.a, Rat::zero())),
                _ => ineqs.push((c.a, Rat::zero())),
            }
        }
        // Right-hand sides are zero by homogeneity; enforce exactly.
        ConeP::from_hrep(ambient, eqs, ineqs)
    }

    pub fn from_rays_i64(ambient: usize, rays: &[&[i64]]) -> ConeP {
        let rs: Vec<Vec<Rat>> =
            rays.iter().map(|r| r.iter().map(|&v| Rat::from_int(v)).collect()).collect();
        ConeP::from_rays(ambient, &rs).expect("valid ray cone")
    }

    /// The zero cone `{0}`.
    pub fn origin(ambient: usize) -> ConeP {
        let eqs: Vec<Row> = (0..ambient)
            .map(|i| {
                let mut a = vec![Rat::zero(); ambient];
                a[i] = Rat::one();
                (a, Rat::zero())
            })
            .collect();
        ConeP::from_hrep(ambient, eqs, vec![]).expect("origin cone")
    }

    fn compute_pointed(poly: &Polyhedron) -> bool {
        // Lineality space: all constraints tight. Pointed iff it is {0}.
        let mut rows: Vec<Vec<Rat>> = poly.eqs.iter().map(|(a, _)| a.clone()).collect();
        rows.extend(poly.ineqs.iter().map(|(a, _)| a.clone()));
        rank_of_rows(&rows) == poly.ambient
    }

    pub fn poly(&self) -> &Polyhedron {
        &self.poly
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn ambient_rank(&self) -> usize {
        self.poly.ambient_rank()
    }

    pub fn dimension(&self) -> i64 {
        self.poly.dimension()
    }

    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        self.poly.contains(x)
    }

    /// All faces of the cone (as cones), including itself and `{0}` when pointed.
    pub fn faces(&self) -> Result<Vec<ConeP>> {
        let fs = self.poly.faces()?;
        fs.into_iter()
            .map(|p| {
                let pointed = Self::compute_pointed(&p);
                Ok(ConeP { poly: p, pointed })
            })
            .collect()
    }
}

/// Decides `union(A) ⊇ union(B)` exactly, by subdividing each B-cell along
/// the constraint hyperplanes of A (within the cell's affine hull) and testing
/// a relative-interior sample of every full-dimensional piece for membership
/// in some A-cell.
pub fn union_covers(a: &[Polyhedron], b: &[Polyhedron]) -> Result<bool> {
    let ambient = a
        .iter()
        .chain(b)
        .map(|p| p.ambient_rank())
        .next()
        .unwrap_or(0);
    for p in a.iter().chain(b) {
        if p.ambient_rank() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: p.ambient_rank(),
                context: "union_covers cells".into(),
            });
        }
    }
    // Collect the hyperplanes of A.
    let mut hyperplanes: Vec<Row> = Vec::new();
    for p in a {
        for (av, bv) in p.equalities().iter().chain(p.inequalities()) {
            let row = scale_eq_row(av, bv);
            if !hyperplanes.contains(&row) {
                hyperplanes.push(row);
            }
        }
    }
    hyperplanes.sort_by(row_cmp);

    for cell in b {
        if cell.is_empty() {
            continue;
        }
        let target_dim = cell.dimension();
        let mut pieces: Vec<Polyhedron> = vec![cell.clone()];
        for (h, c) in &hyperplanes {
            let mut next: Vec<Polyhedron> = Vec::new();
            for piece in pieces {
                let up = Polyhedron::canonicalize(
                    ambient,
                    piece.equalities().to_vec(),
                    {
                        let mut v = piece.inequalities().to_vec();
                        v.push((h.clone(), c.clone()));
                        v
                    },
                )?;
                let lo = Polyhedron::canonicalize(
                    ambient,
                    piece.equalities().to_vec(),
                    {
                        let mut v = piece.inequalities().to_vec();
                        v.push((h.iter().map(|x| -x).collect(), -c.clone()));
                        v
                    },
                )?;
                for q in [up, lo] {
                    if !q.is_empty() && q.dimension() == target_dim {
                        next.push(q);
                    }
                }
            }
            next.sort_by(poly_cmp);
            next.dedup();
            pieces = next;
        }
        for piece in &pieces {
            let w = piece.relint_point()?;
            let mut covered = false;
            for p in a {
                if p.contains(&w)? {
                    covered = true;
                    break;
                }
            }
            if !covered {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
