//! Pointed rational fans, face relations, orbit quotient lattices and
//! projections, star fans, and orbit-tagged points of the associated partial
//! compactification.
//!
//! Points of boundary strata never carry infinite coordinates: an
//! [`OrbitPoint`] names its stratum cone explicitly and stores coordinates in
//! the canonical chart of the quotient lattice.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{hnf, integer_kernel, primitive_integer, right_inverse, snf, IMat, Mat, Rat};
use crate::polyhedron::{poly_cmp, ConeP, Polyhedron, Row};

/// A cone of a fan together with its id.
#[derive(Clone, Debug)]
pub struct FanCone {
    pub id: String,
    pub cone: ConeP,
}

/// A pointed rational fan: face-closed, pairwise intersecting in common faces.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient: usize,
    cones: Vec<FanCone>,
    /// Pairs (i, j) with cone i a face of cone j (reflexive).
    face_rel: Vec<(usize, usize)>,
}

/// Raw cone data accepted by the fan constructor.
#[derive(Clone, Debug)]
pub enum ConeInput {
    Rays(Vec<Vec<Rat>>),
    HRep { eqs: Vec<Row>, ineqs: Vec<Row> },
}

impl Fan {
    /// Build a fan from cones given by generators or H-representation.
    ///
    /// Faces of the inputs are generated and added with deterministic ids
    /// `face(<id>,<k>)`; the zero cone gets id `0` unless supplied. Fan axioms
    /// are validated: every cone pointed, pairwise intersections common faces.
    pub fn from_cones(ambient: usize, inputs: Vec<(String, ConeInput)>) -> Result<Fan> {
        let mut cones: Vec<FanCone> = Vec::new();

        for (id, input) in inputs {
            let cone = match input {
                ConeInput::Rays(rays) => ConeP::from_rays(ambient, &rays)?,
                ConeInput::HRep { eqs, ineqs } => ConeP::from_hrep(ambient, eqs, ineqs)?,
            };
            if cone.ambient_rank() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: cone.ambient_rank(),
                    context: format!("cone {id}"),
                });
            }
            if !cone.is_pointed() {
                return Err(Error::NotPointed(id));
            }
            if cones.iter().any(|c| c.id == id) {
                return Err(Error::InvalidInput(format!("duplicate cone id {id}")));
            }
            if !cones.iter().any(|c| c.cone.poly() == cone.poly()) {
                cones.push(FanCone { id, cone });
            }
        }

        // Face closure with deterministic generated ids.
        let input_count = cones.len();
        for idx in 0..input_count {
            let parent_id = cones[idx].id.clone();
            let mut faces = cones[idx].cone.faces()?;
            faces.sort_by(|x, y| {
                x.dimension().cmp(&y.dimension()).then_with(|| poly_cmp(x.poly(), y.poly()))
            });
            let mut k = 0;
            for f in faces {
                if cones.iter().any(|c| c.cone.poly() == f.poly()) {
                    continue;
                }
                // The zero cone keeps the conventional id "0" when available.
                let id = if f.dimension() == 0 && !cones.iter().any(|c| c.id == "0") {
                    "0".into()
                } else {
                    let id = format!("face({parent_id},{k})");
                    k += 1;
                    id
                };
                cones.push(FanCone { id, cone: f });
            }
        }
        if !cones.iter().any(|c| c.cone.dimension() == 0) {
            cones.push(FanCone { id: "0".into(), cone: ConeP::origin(ambient) });
        }

        // Deterministic order: by dimension, then canonical form.
        cones.sort_by(|x, y| {
            x.cone
                .dimension()
                .cmp(&y.cone.dimension())
                .then_with(|| poly_cmp(x.cone.poly(), y.cone.poly()))
        });

        Self::assemble(ambient, cones)
    }

    /// Validate fan axioms on an explicit list of cones and compute the face
    /// relation. The list must already be face-closed.
    fn assemble(ambient: usize, cones: Vec<FanCone>) -> Result<Fan> {
        // Cache faces per cone; everything below is face tests.
        let mut all_faces: Vec<Vec<Polyhedron>> = Vec::with_capacity(cones.len());
        for c in &cones {
            all_faces.push(c.cone.faces()?.into_iter().map(|f| f.poly().clone()).collect());
        }
        // Face relation by membership in the face list.
        let mut face_rel = Vec::new();
        for (i, t) in cones.iter().enumerate() {
            for (j, _s) in cones.iter().enumerate() {
                if i == j {
                    face_rel.push((i, j));
                    continue;
                }
                if all_faces[j].iter().any(|f| f == t.cone.poly()) {
                    face_rel.push((i, j));
                }
            }
        }
        // Pairwise intersections must be common faces.
        for (i, t) in cones.iter().enumerate() {
            for (j, s) in cones.iter().enumerate() {
                if i >= j {
                    continue;
                }
                let w = t.cone.poly().intersect(s.cone.poly())?;
                let in_t = all_faces[i].iter().any(|f| f == &w);
                let in_s = all_faces[j].iter().any(|f| f == &w);
                if !in_t || !in_s {
                    return Err(Error::NotAFan(format!(
                        "intersection of {} and {} is not a common face",
                        t.id, s.id
                    )));
                }
            }
        }
        // Face closure sanity: every face of every member is a member.
        for (i, c) in cones.iter().enumerate() {
            for f in &all_faces[i] {
                if !cones.iter().any(|m| m.cone.poly() == f) {
                    return Err(Error::NotAFan(format!(
                        "face of cone {} is not a member of the fan",
                        c.id
                    )));
                }
            }
        }
        Ok(Fan { ambient, cones, face_rel })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn cones(&self) -> &[FanCone] {
        &self.cones
    }

    fn index_of(&self, id: &str) -> Result<usize> {
        self.cones
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCone(id.into()))
    }

    pub fn cone(&self, id: &str) -> Result<&ConeP> {
        Ok(&self.cones[self.index_of(id)?].cone)
    }

    /// Id of the zero cone.
    pub fn zero_cone_id(&self) -> &str {
        self.cones
            .iter()
            .find(|c| c.cone.dimension() == 0)
            .map(|c| c.id.as_str())
            .expect("fans contain the zero cone")
    }

    /// True iff `tau` is a face of `sigma` (reflexive).
    pub fn is_face(&self, tau: &str, sigma: &str) -> Result<bool> {
        let i = self.index_of(tau)?;
        let j = self.index_of(sigma)?;
        Ok(self.face_rel.contains(&(i, j)))
    }

    /// Ids of all cones having `tau` as a face (including `tau` itself).
    pub fn cones_above(&self, tau: &str) -> Result<Vec<&str>> {
        let i = self.index_of(tau)?;
        Ok(self
            .face_rel
            .iter()
            .filter(|(a, _)| *a == i)
            .map(|(_, b)| self.cones[*b].id.as_str())
            .collect())
    }

    /// The quotient presentation `pi_sigma : Z^n -> Z^(n-k)` for a cone.
    ///
    /// Canonical choice: the rows are the Hermite-normal-form basis of the
    /// saturated annihilator lattice of the cone's span, so the map is
    /// surjective (SNF diagonal all ones) and has kernel exactly the span.
    pub fn quotient_map(&self, sigma: &str) -> Result<QuotientMap> {
        let cone = self.cone(sigma)?;
        let q = quotient_of_span(cone)?;
        Ok(QuotientMap { source_rank: self.ambient, cone_id: sigma.to_string(), q })
    }

    /// The unique integer matrix `R` with `R * Q_tau = Q_sigma` for a face
    /// pair `tau` of `sigma`. This is the chart transition that makes quotient
    /// maps compose exactly through the star fan.
    pub fn induced_quotient(&self, tau: &str, sigma: &str) -> Result<IMat> {
        if !self.is_face(tau, sigma)? {
            return Err(Error::InvalidInput(format!("{tau} is not a face of {sigma}")));
        }
        let q_tau = self.quotient_map(tau)?;
        let q_sigma = self.quotient_map(sigma)?;
        let rinv = right_inverse(&q_tau.q)?;
        let r = q_sigma.q.mul(&rinv);
        if r.mul(&q_tau.q) != q_sigma.q {
            return Err(Error::InternalConsistency(
                "induced quotient does not factor the cone's quotient map".into(),
            ));
        }
        Ok(r)
    }

    /// The star fan `Delta_tau = { pi_tau(sigma) : tau a face of sigma }`,
    /// living in the quotient lattice of `tau`. Cone ids carry over from the
    /// originals; the returned map records the correspondence.
    pub fn star_fan(&self, tau: &str) -> Result<(Fan, BTreeMap<String, String>)> {
        let qm = self.quotient_map(tau)?;
        let qmat = Mat::from_imat(&qm.q);
        let mut cones = Vec::new();
        let mut book = BTreeMap::new();
        for id in self.cones_above(tau)? {
            let image = self.cone(id)?.poly().linear_image(&qmat)?;
            let cone = ConeP::from_hrep(
                image.ambient_rank(),
                image.equalities().to_vec(),
                image.inequalities().to_vec(),
            )?;
            if !cone.is_pointed() {
                return Err(Error::NotPointed(format!("star image of {id}")));
            }
            cones.push(FanCone { id: id.to_string(), cone });
            book.insert(id.to_string(), id.to_string());
        }
        cones.sort_by(|x, y| {
            x.cone
                .dimension()
                .cmp(&y.cone.dimension())
                .then_with(|| poly_cmp(x.cone.poly(), y.cone.poly()))
        });
        let fan = Fan::assemble(qm.target_rank(), cones)?;
        Ok((fan, book))
    }
}

/// Compute the canonical quotient matrix for a cone's span.
fn quotient_of_span(cone: &ConeP) -> Result<IMat> {
    let n = cone.ambient_rank();
    // Span of the cone = kernel of its canonical equality normals.
    let eq_rows: Vec<Vec<Rat>> =
        cone.poly().equalities().iter().map(|(a, _)| a.clone()).collect();
    if eq_rows.is_empty() {
        // Span is everything; the quotient has rank-zero target.
        return Ok(IMat::zero(0, n));
    }
    let int_rows: Vec<Vec<num_bigint::BigInt>> =
        eq_rows.iter().map(|r| primitive_integer(r)).collect();
    let e = IMat::from_rows(int_rows, n);
    let span_basis = integer_kernel(&e); // rows span the cone's span lattice
    if span_basis.rows() == 0 {
        // Zero cone: quotient is the identity.
        return Ok(IMat::identity(n));
    }
    let ann = integer_kernel(&span_basis);
    Ok(hnf(&ann))
}

/// The projection `N -> N(sigma)` realized as an integer matrix with kernel
/// the span of `sigma` and image all of the quotient lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    pub source_rank: usize,
    pub cone_id: String,
    pub q: IMat,
}

impl QuotientMap {
    pub fn target_rank(&self) -> usize {
        self.q.rows()
    }

    pub fn matrix(&self) -> Mat {
        Mat::from_imat(&self.q)
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.matrix().mul_vec(x)
    }

    /// Certificate that the map is onto: SNF diagonal all ones.
    pub fn is_surjective(&self) -> bool {
        if self.q.rows() == 0 {
            return true;
        }
        let s = snf(&self.q);
        s.rank() == self.q.rows() && s.diag().iter().all(num_traits::One::is_one)
    }
}

/// A point of the partial compactification: a stratum cone id plus exact
/// coordinates in the canonical chart of that stratum's quotient lattice.
/// The zero cone recovers ordinary points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub cone_id: String,
    pub coords: Vec<Rat>,
}

impl OrbitPoint {
    pub fn new(fan: &Fan, cone_id: &str, coords: Vec<Rat>) -> Result<OrbitPoint> {
        let cone = fan.cone(cone_id)?;
        let expected = fan.ambient_rank() - cone.dimension() as usize;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coords.len(),
                context: format!("orbit point in stratum {cone_id}"),
            });
        }
        Ok(OrbitPoint { cone_id: cone_id.to_string(), coords })
    }

    pub fn dense(coords: Vec<Rat>, fan: &Fan) -> Result<OrbitPoint> {
        OrbitPoint::new(fan, fan.zero_cone_id(), coords)
    }
}

/// Does the cone `c` intersect the relative interior of fan cone `sigma`?
/// Returns a witness point when it does.
///
/// A convex subset of the boundary of `sigma` lies in a single proper face,
/// so testing one relative-interior point of `c ∩ sigma` suffices.
pub fn relint_meets(c: &ConeP, fan: &Fan, sigma: &str) -> Result<Option<Vec<Rat>>> {
    let s = fan.cone(sigma)?;
    if c.ambient_rank() != fan.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: fan.ambient_rank(),
            got: c.ambient_rank(),
            context: "relint_meets cone".into(),
        });
    }
    let w = c.poly().intersect(s.poly())?;
    if w.is_empty() {
        return Ok(None);
    }
    let x = w.relint_point()?;
    if s.poly().contains_in_relint(&x)? {
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
pub(crate) mod test_fans {
    use super::*;

    fn rv(vs: &[i64]) -> Vec<Rat> {
        vs.iter().map(|&v| Rat::from_int(v)).collect()
    }

    pub fn octant_fan() -> Fan {
        Fan::from_cones(
            3,
            vec![(
                "sigma".into(),
                ConeInput::Rays(vec![rv(&[1, 0, 0]), rv(&[0, 1, 0]), rv(&[0, 0, 1])]),
            )],
        )
        .unwrap()
    }

    pub fn p2_fan() -> Fan {
        Fan::from_cones(
            2,
            vec![
                ("sigma12".into(), ConeInput::Rays(vec![rv(&[1, 0]), rv(&[0, 1])])),
                ("sigma23".into(), ConeInput::Rays(vec![rv(&[0, 1]), rv(&[-1, -1])])),
                ("sigma13".into(), ConeInput::Rays(vec![rv(&[1, 0]), rv(&[-1, -1])])),
            ],
        )
        .unwrap()
    }

    pub fn find_cone(f: &Fan, target: &ConeP) -> String {
        f.cones()
            .iter()
            .find(|c| c.cone.poly() == target.poly())
            .map(|c| c.id.clone())
            .expect("cone present in fan")
    }
}

#[cfg(test)]
mod tests {
    use super::test_fans::{find_cone, octant_fan, p2_fan};
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn rv(vs: &[i64]) -> Vec<Rat> {
        vs.iter().map(|&v| r(v)).collect()
    }

    #[test]
    fn octant_fan_has_eight_cones() {
        let f = octant_fan();
        assert_eq!(f.cones().len(), 8);
        let mut by_dim = [0usize; 4];
        for c in f.cones() {
            by_dim[c.cone.dimension() as usize] += 1;
        }
        assert_eq!(by_dim, [1, 3, 3, 1]);
    }

    #[test]
    fn p2_fan_has_seven_cones() {
        let f = p2_fan();
        assert_eq!(f.cones().len(), 7);
        let mut by_dim = [0usize; 3];
        for c in f.cones() {
            by_dim[c.cone.dimension() as usize] += 1;
        }
        assert_eq!(by_dim, [1, 3, 3]);
    }

    #[test]
    fn cone_with_line_is_rejected() {
        let err = Fan::from_cones(
            2,
            vec![("bad".into(), ConeInput::Rays(vec![rv(&[1, 0]), rv(&[-1, 0])]))],
        );
        assert!(matches!(err, Err(Error::NotPointed(_))));
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let err = Fan::from_cones(
            2,
            vec![
                ("a".into(), ConeInput::Rays(vec![rv(&[1, 0]), rv(&[0, 1])])),
                ("b".into(), ConeInput::Rays(vec![rv(&[1, 1]), rv(&[1, -1])])),
            ],
        );
        assert!(matches!(err, Err(Error::NotAFan(_))));
    }

    #[test]
    fn quotient_maps_match_expected_charts() {
        let f = octant_fan();
        let sigma23 = find_cone(&f, &ConeP::from_rays_i64(3, &[&[0, 1, 0], &[0, 0, 1]]));
        let q = f.quotient_map(&sigma23).unwrap();
        assert_eq!(q.q, IMat::from_i64(&[&[1, 0, 0]]));
        assert!(q.is_surjective());

        let zero = f.zero_cone_id().to_string();
        let q0 = f.quotient_map(&zero).unwrap();
        assert_eq!(q0.q, IMat::identity(3));

        let sigma1 = find_cone(&f, &ConeP::from_rays_i64(3, &[&[1, 0, 0]]));
        let q1 = f.quotient_map(&sigma1).unwrap();
        assert_eq!(q1.q, IMat::from_i64(&[&[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn surjectivity_certificates_hold_everywhere() {
        for fan in [octant_fan(), p2_fan()] {
            for c in fan.cones() {
                let q = fan.quotient_map(&c.id).unwrap();
                assert!(q.is_surjective(), "not surjective at {}", c.id);
                let cone_dim_rank = fan.ambient_rank() - q.target_rank();
                assert_eq!(cone_dim_rank, c.cone.dimension() as usize);
            }
        }
    }

    #[test]
    fn relint_meets_examples() {
        let f = octant_fan();
        let sigma23 = find_cone(&f, &ConeP::from_rays_i64(3, &[&[0, 1, 0], &[0, 0, 1]]));
        let sigma3 = find_cone(&f, &ConeP::from_rays_i64(3, &[&[0, 0, 1]]));
        // P1 = {w1 >= 0, w3 = w2} meets relint(sigma23); witness by substitution.
        let p1 = ConeP::from_hrep(
            3,
            vec![(rv(&[0, -1, 1]), r(0))],
            vec![(rv(&[1, 0, 0]), r(0))],
        )
        .unwrap();
        let w = relint_meets(&p1, &f, &sigma23).unwrap().unwrap();
        assert_eq!(w[0], r(0));
        assert!(w[1].is_positive() && w[2].is_positive());
        assert_eq!(w[1], w[2]);
        // rho(P1) = P1 does not meet relint(sigma3): it forces w2 = w3 = 0.
        assert!(relint_meets(&p1, &f, &sigma3).unwrap().is_none());
        // The zero cone never meets the relative interior of a nonzero cone.
        let zero = ConeP::origin(3);
        assert!(relint_meets(&zero, &f, &sigma23).unwrap().is_none());
        // Each nonzero cone meets its own relative interior.
        for c in f.cones() {
            if c.cone.dimension() > 0 {
                assert!(relint_meets(&c.cone, &f, &c.id).unwrap().is_some());
            }
        }
    }

    #[test]
    fn star_fan_of_octant_at_ray() {
        let f = octant_fan();
        let sigma3 = find_cone(&f, &ConeP::from_rays_i64(3, &[&[0, 0, 1]]));
        let (star, book) = f.star_fan(&sigma3).unwrap();
        assert_eq!(star.ambient_rank(), 2);
        assert_eq!(star.cones().len(), 4); // faces of the nonnegative quadrant
        assert_eq!(book.len(), 4);
        let mut by_dim = [0usize; 3];
        for c in star.cones() {
            by_dim[c.cone.dimension() as usize] += 1;
        }
        assert_eq!(by_dim, [1, 2, 1]);
    }

    #[test]
    fn star_fan_at_zero_is_identity() {
        let f = p2_fan();
        let zero = f.zero_cone_id().to_string();
        let (star, _) = f.star_fan(&zero).unwrap();
        assert_eq!(star.cones().len(), f.cones().len());
        for (a, b) in star.cones().iter().zip(f.cones()) {
            assert_eq!(a.cone.poly(), b.cone.poly());
        }
    }

    #[test]
    fn star_fan_of_p2_at_ray_is_p1() {
        let f = p2_fan();
        let ray_e1 = find_cone(&f, &ConeP::from_rays_i64(2, &[&[1, 0]]));
        let (star, _) = f.star_fan(&ray_e1).unwrap();
        assert_eq!(star.ambient_rank(), 1);
        assert_eq!(star.cones().len(), 3); // origin and two opposite rays
        let mut by_dim = [0usize; 2];
        for c in star.cones() {
            by_dim[c.cone.dimension() as usize] += 1;
        }
        assert_eq!(by_dim, [1, 2]);
    }

    #[test]
    fn induced_quotient_composes_exactly() {
        for fan in [octant_fan(), p2_fan()] {
            for t in fan.cones() {
                for s_id in fan.cones_above(&t.id).unwrap() {
                    let r = fan.induced_quotient(&t.id, s_id).unwrap();
                    let q_t = fan.quotient_map(&t.id).unwrap();
                    let q_s = fan.quotient_map(s_id).unwrap();
                    assert_eq!(r.mul(&q_t.q), q_s.q, "failed at {} < {}", t.id, s_id);
                    // Same row lattice as the star fan's intrinsic quotient:
                    // R is a valid chart for the image cone.
                    let (star, _) = fan.star_fan(&t.id).unwrap();
                    let intrinsic = star.quotient_map(s_id).unwrap();
                    if r.rows() > 0 {
                        assert_eq!(
                            hnf(&r),
                            hnf(&intrinsic.q),
                            "row lattices differ at {} < {}",
                            t.id,
                            s_id
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn star_of_star_composes() {
        let f = octant_fan();
        for t in f.cones() {
            let (star_t, _) = f.star_fan(&t.id).unwrap();
            for s_id in f.cones_above(&t.id).unwrap() {
                let (star_ts, _) = star_t.star_fan(s_id).unwrap();
                let (star_s, _) = f.star_fan(s_id).unwrap();
                let mut dims_a: Vec<i64> =
                    star_ts.cones().iter().map(|c| c.cone.dimension()).collect();
                let mut dims_b: Vec<i64> =
                    star_s.cones().iter().map(|c| c.cone.dimension()).collect();
                dims_a.sort();
                dims_b.sort();
                assert_eq!(dims_a, dims_b, "star composition at {} then {}", t.id, s_id);
            }
        }
    }

    #[test]
    fn orbit_point_validation() {
        let f = octant_fan();
        let sigma23 = find_cone(&f, &ConeP::from_rays_i64(3, &[&[0, 1, 0], &[0, 0, 1]]));
        assert!(OrbitPoint::new(&f, &sigma23, rv(&[5])).is_ok());
        assert!(OrbitPoint::new(&f, &sigma23, rv(&[5, 6])).is_err());
        assert!(OrbitPoint::new(&f, "nope", rv(&[5])).is_err());
        assert!(OrbitPoint::dense(rv(&[1, 2, 3]), &f).is_ok());
    }
}
