//! Orbit-stratified tropical complexes: hypersurface tropicalization, initial
//! forms, facet multiplicities, extension across orbit strata, local
//! dimension, and the trivial-valuation recession support.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, Rat};
use crate::polyhedron::{poly_cmp, ConeP, Polyhedron, Row};
use crate::toric::{relint_meets, Fan, OrbitPoint};

/// One term `a_u * x^u` of a Laurent polynomial, tracked by its exponent and
/// the valuation of its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exponent: Vec<i64>,
    pub valuation: Rat,
    pub residue: Option<String>,
}

/// A Laurent polynomial reduced to the data tropicalization sees: exponents
/// and coefficient valuations (plus an optional residue tag carried through).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    ambient: usize,
    terms: Vec<Term>,
}

impl LaurentPoly {
    pub fn new(ambient: usize, terms: Vec<Term>) -> Result<LaurentPoly> {
        for t in &terms {
            if t.exponent.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: t.exponent.len(),
                    context: "polynomial term exponent".into(),
                });
            }
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if terms[i].exponent == terms[j].exponent {
                    return Err(Error::InvalidInput(format!(
                        "duplicate exponent {:?}",
                        terms[i].exponent
                    )));
                }
            }
        }
        Ok(LaurentPoly { ambient, terms })
    }

    pub fn from_exponents(ambient: usize, data: &[(&[i64], Rat)]) -> LaurentPoly {
        LaurentPoly::new(
            ambient,
            data.iter()
                .map(|(e, v)| Term { exponent: e.to_vec(), valuation: v.clone(), residue: None })
                .collect(),
        )
        .expect("valid term list")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn value_at(&self, term: &Term, omega: &[Rat]) -> Rat {
        let exp: Vec<Rat> = term.exponent.iter().map(|&e| Rat::from_int(e)).collect();
        &term.valuation + &dot(&exp, omega)
    }
}

/// Known or deliberately unknown multiplicity of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mult {
    Known(u64),
    Unknown,
}

/// A polyhedral cell with a tropical multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCell {
    pub poly: Polyhedron,
    pub mult: Mult,
}

impl WeightedCell {
    pub fn new(poly: Polyhedron, mult: Mult) -> WeightedCell {
        if let Mult::Known(m) = mult {
            assert!(m >= 1, "multiplicities are positive");
        }
        WeightedCell { poly, mult }
    }
}

/// Sort cells canonically and drop exact duplicates.
pub fn sort_cells(cells: &mut Vec<WeightedCell>) {
    cells.sort_by(|x, y| poly_cmp(&x.poly, &y.poly).then_with(|| x.mult.cmp(&y.mult)));
    cells.dedup();
}

/// Where a stratum's cells came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Input,
    Derived,
}

/// An orbit-stratified weighted polyhedral complex over a fan: for each cone
/// id, the cells of the corresponding stratum in the canonical chart of its
/// quotient lattice.
#[derive(Clone, Debug)]
pub struct ExtendedTropicalComplex {
    pub fan: Fan,
    pub strata: BTreeMap<String, Vec<WeightedCell>>,
    pub provenance: BTreeMap<String, Provenance>,
}

impl ExtendedTropicalComplex {
    /// Assemble from per-stratum cell lists, validating ambient ranks.
    pub fn from_parts(
        fan: Fan,
        strata: BTreeMap<String, Vec<WeightedCell>>,
        provenance: BTreeMap<String, Provenance>,
    ) -> Result<ExtendedTropicalComplex> {
        let n = fan.ambient_rank();
        let mut canon: BTreeMap<String, Vec<WeightedCell>> = BTreeMap::new();
        for (id, mut cells) in strata {
            let cone = fan.cone(&id)?;
            let expected = n - cone.dimension() as usize;
            for c in &cells {
                if c.poly.ambient_rank() != expected {
                    return Err(Error::DimensionMismatch {
                        expected,
                        got: c.poly.ambient_rank(),
                        context: format!("cell of stratum {id}"),
                    });
                }
            }
            cells.retain(|c| !c.poly.is_empty());
            sort_cells(&mut cells);
            canon.insert(id, cells);
        }
        Ok(ExtendedTropicalComplex { fan, strata: canon, provenance })
    }

    pub fn stratum(&self, id: &str) -> &[WeightedCell] {
        self.strata.get(id).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn dense_stratum(&self) -> &[WeightedCell] {
        self.stratum(self.fan.zero_cone_id())
    }

    /// Name of cell `i` of a stratum in reports: `P<i+1>` in the dense
    /// stratum, `<sigma>.Q<i+1>` elsewhere.
    pub fn cell_name(&self, stratum: &str, i: usize) -> String {
        if stratum == self.fan.zero_cone_id() {
            format!("P{}", i + 1)
        } else {
            format!("{}.Q{}", stratum, i + 1)
        }
    }
}

/// Tropicalization of the hypersurface cut out by `f`: the locus where the
/// minimum of `val(a_u) + <u, omega>` is attained at least twice, as a pure
/// codimension-one complex with facet multiplicities.
///
/// Cells come from pairs of terms; duplicates are merged, cells of dimension
/// below `n - 1` (faces of facets) are pruned, and each facet's multiplicity
/// is the lattice length of its dual edge after aggregating all min-attaining
/// terms on the facet's relative interior.
pub fn trop_hypersurface(f: &LaurentPoly) -> Result<Vec<WeightedCell>> {
    let n = f.ambient_rank();
    if f.terms().len() < 2 {
        return Err(Error::TooFewTerms);
    }
    let terms = f.terms();
    let mut cells: Vec<Polyhedron> = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            // v_i + <u_i, w> = v_j + <u_j, w>  <=  v_k + <u_k, w> for all k.
            let ui = &terms[i].exponent;
            let uj = &terms[j].exponent;
            let eq: Row = (
                (0..n).map(|c| Rat::from_int(ui[c] - uj[c])).collect(),
                &terms[j].valuation - &terms[i].valuation,
            );
            let mut ineqs: Vec<Row> = Vec::new();
            for (k, tk) in terms.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                let a: Vec<Rat> = (0..n).map(|c| Rat::from_int(tk.exponent[c] - ui[c])).collect();
                let b = &terms[i].valuation - &tk.valuation;
                ineqs.push((a, b));
            }
            let p = Polyhedron::canonicalize(n, vec![eq], ineqs)?;
            if !p.is_empty() && !cells.contains(&p) {
                cells.push(p);
            }
        }
    }

    // Prune cells of dimension < n-1 contained in a facet cell.
    let facet_dim = n as i64 - 1;
    let facets: Vec<Polyhedron> =
        cells.iter().filter(|p| p.dimension() == facet_dim).cloned().collect();
    let mut kept: Vec<Polyhedron> = Vec::new();
    for p in cells {
        if p.dimension() == facet_dim {
            kept.push(p);
            continue;
        }
        let mut redundant = false;
        for fc in &facets {
            if p.is_subset_of(fc)? {
                redundant = true;
                break;
            }
        }
        if !redundant {
            kept.push(p);
        }
    }
    kept.sort_by(poly_cmp);

    // Facet multiplicities: lattice length of the dual edge.
    let mut out = Vec::new();
    for p in kept {
        let mult = if p.dimension() == facet_dim {
            let w = p.relint_point()?;
            let (initial, _) = initial_form(f, &w)?;
            let exps: Vec<&Vec<i64>> = initial.terms().iter().map(|t| &t.exponent).collect();
            Mult::Known(dual_edge_lattice_length(&exps)?)
        } else {
            Mult::Unknown
        };
        out.push(WeightedCell::new(p, mult));
    }
    Ok(out)
}

/// Lattice length of the segment spanned by a set of collinear integer
/// points: gcd of the coordinates of (max - min) along the segment.
fn dual_edge_lattice_length(exps: &[&Vec<i64>]) -> Result<u64> {
    assert!(exps.len() >= 2, "a dual edge needs at least two terms");
    let base = exps[0];
    let dir: Vec<i64> = exps
        .iter()
        .map(|e| e.iter().zip(base).map(|(a, b)| a - b).collect::<Vec<i64>>())
        .find(|d| d.iter().any(|&v| v != 0))
        .expect("distinct exponents");
    // The min-attaining terms on a facet's relative interior lie on one line
    // (the dual face of a codimension-one cell is one-dimensional).
    for e in exps {
        let diff: Vec<i64> = e.iter().zip(base).map(|(a, b)| a - b).collect();
        for i in 0..dir.len() {
            for j in i + 1..dir.len() {
                if dir[i] * diff[j] != dir[j] * diff[i] {
                    return Err(Error::InternalConsistency(
                        "non-collinear terms attain the minimum on a facet".into(),
                    ));
                }
            }
        }
    }
    let key = |e: &Vec<i64>| -> i64 { e.iter().zip(&dir).map(|(a, b)| a * b).sum() };
    let lo = exps.iter().min_by_key(|e| key(e)).unwrap();
    let hi = exps.iter().max_by_key(|e| key(e)).unwrap();
    let mut g = BigInt::zero();
    for (a, b) in hi.iter().zip(lo.iter()) {
        g = g.gcd(&BigInt::from(a - b));
    }
    Ok(u64::try_from(g.abs()).expect("desk-scale lattice length"))
}

/// The sub-sum of terms attaining `min(val(a_u) + <u, omega>)`, together with
/// the minimum value. Total on rational points of the dense stratum.
pub fn initial_form(f: &LaurentPoly, omega: &[Rat]) -> Result<(LaurentPoly, Rat)> {
    if omega.len() != f.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: f.ambient_rank(),
            got: omega.len(),
            context: "initial form evaluation point".into(),
        });
    }
    let values: Vec<Rat> = f.terms().iter().map(|t| f.value_at(t, omega)).collect();
    let min = values.iter().min().cloned().expect("nonempty term list");
    let terms: Vec<Term> = f
        .terms()
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v == min)
        .map(|(t, _)| t.clone())
        .collect();
    Ok((LaurentPoly { ambient: f.ambient_rank(), terms }, min))
}

/// Initial forms at proper orbit strata are refused: the orbit scheme's ideal
/// is not the naive restriction of `f`, so orbit-level data must be supplied
/// by the caller rather than derived here.
pub fn initial_form_at(
    f: &LaurentPoly,
    fan: &Fan,
    point: &OrbitPoint,
) -> Result<(LaurentPoly, Rat)> {
    if point.cone_id != fan.zero_cone_id() {
        return Err(Error::OrbitPointUnsupported(point.cone_id.clone()));
    }
    initial_form(f, &point.coords)
}

/// Extend dense-stratum cells across all orbit strata of a fan.
///
/// For each cone, the stratum consists of the projections of the dense cells
/// whose recession cone meets the cone's relative interior. Projected cells
/// get multiplicity `Unknown`; the zero-cone stratum keeps the input cells
/// and multiplicities unchanged.
pub fn extend_to_orbits(cells: &[WeightedCell], fan: &Fan) -> Result<ExtendedTropicalComplex> {
    let n = fan.ambient_rank();
    for c in cells {
        if c.poly.ambient_rank() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.poly.ambient_rank(),
                context: "dense-stratum cell".into(),
            });
        }
    }
    let mut strata: BTreeMap<String, Vec<WeightedCell>> = BTreeMap::new();
    let mut provenance: BTreeMap<String, Provenance> = BTreeMap::new();
    let zero_id = fan.zero_cone_id().to_string();
    for fc in fan.cones() {
        let id = fc.id.clone();
        if id == zero_id {
            let mut dense: Vec<WeightedCell> =
                cells.iter().filter(|c| !c.poly.is_empty()).cloned().collect();
            sort_cells(&mut dense);
            strata.insert(id.clone(), dense);
            provenance.insert(id, Provenance::Input);
            continue;
        }
        let qm = fan.quotient_map(&id)?;
        let qmat = qm.matrix();
        let mut projected: Vec<WeightedCell> = Vec::new();
        for c in cells {
            if c.poly.is_empty() {
                continue;
            }
            let rho = c.poly.recession_cone()?;
            if relint_meets(&rho, fan, &id)?.is_none() {
                continue;
            }
            let image = c.poly.linear_image(&qmat)?;
            projected.push(WeightedCell::new(image, Mult::Unknown));
        }
        sort_cells(&mut projected);
        strata.insert(id.clone(), projected);
        provenance.insert(id, Provenance::Derived);
    }
    ExtendedTropicalComplex::from_parts(fan.clone(), strata, provenance)
}

/// Local dimension of a stratum at a point: the maximum dimension of a cell
/// containing the point (which equals the dimension of that cell's local
/// cone there).
pub fn local_dimension(stratum: &[WeightedCell], omega: &[Rat]) -> Result<i64> {
    let mut best: Option<i64> = None;
    for c in stratum {
        if c.poly.contains(omega)? {
            best = Some(best.map_or(c.poly.dimension(), |b| b.max(c.poly.dimension())));
        }
    }
    best.ok_or(Error::PointNotInSupport)
}

/// Recession cones of all cells: the support of the trivial-valuation
/// tropicalization.
pub fn recession_fan_support(cells: &[WeightedCell]) -> Result<Vec<ConeP>> {
    cells.iter().map(|c| c.poly.recession_cone()).collect()
}

/// Weighted balancing around codimension-two cells of a hypersurface complex.
///
/// For each ridge (an (n-2)-dimensional intersection of two facets), the sum
/// of multiplicity-weighted primitive normal generators of the facets
/// containing it must lie in the ridge's direction space. Returns the number
/// of ridges checked; errors on the first violation.
pub fn check_balancing(cells: &[WeightedCell]) -> Result<usize> {
    let n = match cells.first() {
        Some(c) => c.poly.ambient_rank(),
        None => return Ok(0),
    };
    let facet_dim = n as i64 - 1;
    let ridge_dim = n as i64 - 2;
    if ridge_dim < 0 {
        return Ok(0);
    }
    let facets: Vec<&WeightedCell> =
        cells.iter().filter(|c| c.poly.dimension() == facet_dim).collect();
    let mut ridges: Vec<Polyhedron> = Vec::new();
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            let w = facets[i].poly.intersect(&facets[j].poly)?;
            if !w.is_empty() && w.dimension() == ridge_dim && !ridges.contains(&w) {
                ridges.push(w);
            }
        }
    }
    ridges.sort_by(poly_cmp);

    for ridge in &ridges {
        let x = ridge.relint_point()?;
        let ridge_dirs = ridge.direction_space();
        let ridge_lattice = integer_row_lattice(&ridge_dirs, n);
        let mut total = vec![Rat::zero(); n];
        for f in &facets {
            if !f.poly.contains(&x)? {
                continue;
            }
            let Mult::Known(m) = f.mult else {
                return Err(Error::InvalidInput(
                    "balancing requires known facet multiplicities".into(),
                ));
            };
            let g = primitive_normal_generator(&f.poly, &ridge_lattice, &x)?;
            for (t, gi) in total.iter_mut().zip(&g) {
                *t = &*t + &(&Rat::from_int(m as i64) * gi);
            }
        }
        // The weighted sum must lie in the ridge's direction space.
        let mut rows: Vec<Vec<Rat>> = ridge_dirs.clone();
        let before = crate::exact::rank_of_rows(&rows);
        rows.push(total.clone());
        let after = crate::exact::rank_of_rows(&rows);
        if after != before {
            return Err(Error::InternalConsistency(format!(
                "balancing fails at ridge {ridge:?}: weighted normal sum {total:?}"
            )));
        }
    }
    Ok(ridges.len())
}

/// HNF basis of the saturated integer lattice inside the span of the rows.
fn integer_row_lattice(rows: &[Vec<Rat>], ambient: usize) -> crate::exact::IMat {
    use crate::exact::{hnf, integer_kernel, primitive_integer, IMat};
    if rows.is_empty() {
        return IMat::zero(0, ambient);
    }
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive_integer(r)).collect();
    let m = IMat::from_rows(int_rows, ambient);
    let k = integer_kernel(&m);
    if k.rows() == 0 {
        return hnf(&IMat::identity(ambient));
    }
    hnf(&integer_kernel(&k))
}

/// A primitive lattice vector of the facet's direction space generating it
/// modulo the ridge's direction lattice, oriented to point from the ridge
/// into the facet.
fn primitive_normal_generator(
    facet: &Polyhedron,
    ridge_lattice: &crate::exact::IMat,
    x: &[Rat],
) -> Result<Vec<Rat>> {
    use crate::exact::{hnf, integer_kernel, right_inverse, solve_in_row_span, IMat};
    let n = facet.ambient_rank();
    let facet_lattice = integer_row_lattice(&facet.direction_space(), n);
    // Express the ridge lattice in the facet lattice's basis.
    let fl_rows: Vec<Vec<Rat>> = (0..facet_lattice.rows())
        .map(|r| facet_lattice.row(r).iter().map(|v| Rat::from_big(v.clone())).collect())
        .collect();
    let mut c_rows: Vec<Vec<BigInt>> = Vec::new();
    for r in 0..ridge_lattice.rows() {
        let target: Vec<Rat> =
            ridge_lattice.row(r).iter().map(|v| Rat::from_big(v.clone())).collect();
        let sol = solve_in_row_span(&fl_rows, &target).ok_or_else(|| {
            Error::InternalConsistency("ridge lattice not inside facet lattice".into())
        })?;
        let ints = sol
            .iter()
            .map(|v| {
                if v.is_integer() {
                    Ok(v.numer().clone())
                } else {
                    Err(Error::InternalConsistency("non-integer lattice coordinates".into()))
                }
            })
            .collect::<Result<Vec<BigInt>>>()?;
        c_rows.push(ints);
    }
    let k = facet_lattice.rows();
    let c = IMat::from_rows(c_rows, k);
    // Quotient Z^k / rowspace(C) has rank one; the surjection onto Z is the
    // annihilator of C's rows. Pull back a generator through a right inverse.
    let q = hnf(&integer_kernel(&c)); // 1 x k, surjective since C is saturated
    debug_assert_eq!(q.rows() + c.rows(), k);
    let rinv = right_inverse(&q)?;
    let coords: Vec<BigInt> = (0..k).map(|i| rinv.at(i, 0).clone()).collect();
    let gen_int: Vec<BigInt> = {
        let coords_mat = IMat::from_rows(vec![coords], k);
        coords_mat.mul(&facet_lattice).row(0).to_vec()
    };
    let mut g: Vec<Rat> = gen_int.into_iter().map(Rat::from_big).collect();
    // Orient: the generator must satisfy the facet's inequalities tight at x.
    for (a, b) in facet.inequalities() {
        if dot(a, x) == *b {
            let s = dot(a, &g);
            if s.is_negative() {
                for v in g.iter_mut() {
                    *v = -&*v;
                }
            }
            if !s.is_zero() {
                break;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
pub(crate) mod test_data {
    use super::*;

    pub fn golden_poly() -> LaurentPoly {
        // x1 x2 - x2 + x3 with trivial valuations.
        LaurentPoly::from_exponents(
            3,
            &[
                (&[1, 1, 0], Rat::zero()),
                (&[0, 1, 0], Rat::zero()),
                (&[0, 0, 1], Rat::zero()),
            ],
        )
    }

    pub fn line_poly() -> LaurentPoly {
        LaurentPoly::from_exponents(
            2,
            &[(&[1, 0], Rat::zero()), (&[0, 1], Rat::zero()), (&[0, 0], Rat::zero())],
        )
    }
}
