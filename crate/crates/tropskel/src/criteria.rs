//! Decision procedures for the polyhedral criteria: d-maximality, proper
//! orbit intersection, closedness of the tropical skeleton, continuity of the
//! section of tropicalization, limit-point hypotheses, and data-driven
//! relevance.
//!
//! Every check returns a [`Verdict`]. The criteria are sufficient conditions,
//! so a FAIL certifies only that the criterion fails, never that the
//! underlying property fails; verdict traces are worded accordingly.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::polyhedron::{union_covers, ConeP, Polyhedron};
use crate::toric::{relint_meets, OrbitPoint};
use crate::tropical::{local_dimension, ExtendedTropicalComplex, WeightedCell};

/// Outcome of a criterion check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
    InsufficientData,
}

/// One item of evidence: which cell of which stratum misbehaved where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub cone: String,
    pub cell: String,
    pub computed_dim: i64,
    pub required_dim: i64,
    pub point: Option<Vec<Rat>>,
}

/// The result of running one criterion: status, witnesses (every failing
/// check for FAIL, every performed check for PASS), and a readable trace.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub criterion: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub trace: Vec<String>,
}

impl Verdict {
    fn new(criterion: &str, status: Status) -> Verdict {
        Verdict { criterion: criterion.into(), status, witnesses: vec![], trace: vec![] }
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Vacuous)
    }

    fn sort_witnesses(&mut self) {
        self.witnesses.sort_by(|x, y| x.cone.cmp(&y.cone).then_with(|| x.cell.cmp(&y.cell)));
    }
}

/// Fan supports of the irreducible components of an initial degeneration at a
/// base point, supplied as data (the scheme theory is outside this crate).
#[derive(Clone, Debug)]
pub struct ComponentFanData {
    pub base_point: OrbitPoint,
    pub components: Vec<Component>,
}

/// One labeled component: its tropical support (a finite union of cones) and
/// an optional lattice basis, carried through for the Helm-Katz validators
/// when the same component data feeds both.
#[derive(Clone, Debug)]
pub struct Component {
    pub label: String,
    pub support: Vec<ConeP>,
    pub lattice: Option<crate::exact::IMat>,
}

impl Component {
    pub fn new(label: impl Into<String>, support: Vec<ConeP>) -> Component {
        Component { label: label.into(), support, lattice: None }
    }
}

/// Is `cell` d-maximal at `omega` within its stratum: does it contain the
/// point, with dimension equal to the stratum's local dimension there?
pub fn is_d_maximal(cell: &Polyhedron, omega: &[Rat], stratum: &[WeightedCell]) -> Result<bool> {
    let d = local_dimension(stratum, omega)?;
    Ok(cell.contains(omega)? && cell.dimension() == d)
}

/// Dimension data of a validated stratum: the common cell dimension.
///
/// Without an override, the stratum must be equidimensional as a support:
/// cells of lower dimension must lie inside the union of the maximal ones
/// (derived strata legitimately carry lower-dimensional projected cells).
/// An explicit override asserts the dimension and bypasses the purity
/// check, but still has to match the maximal cell dimension.
fn stratum_dim(
    complex: &ExtendedTropicalComplex,
    id: &str,
    overrides: Option<&BTreeMap<String, i64>>,
) -> Result<Option<i64>> {
    let cells = complex.stratum(id);
    if cells.is_empty() {
        return Ok(None);
    }
    let max = cells.iter().map(|c| c.poly.dimension()).max().unwrap();
    if let Some(d) = overrides.and_then(|m| m.get(id)) {
        if *d != max {
            return Err(Error::NotEquidimensional(format!(
                "stratum {id}: supplied dimension {d} but maximal cell dimension is {max}"
            )));
        }
        return Ok(Some(max));
    }
    let maximal: Vec<Polyhedron> = cells
        .iter()
        .filter(|c| c.poly.dimension() == max)
        .map(|c| c.poly.clone())
        .collect();
    let lower: Vec<Polyhedron> = cells
        .iter()
        .filter(|c| c.poly.dimension() < max)
        .map(|c| c.poly.clone())
        .collect();
    if !lower.is_empty() && !union_covers(&maximal, &lower)? {
        return Err(Error::NotEquidimensional(format!(
            "stratum {id}: lower-dimensional cells escape the union of {max}-dimensional cells"
        )));
    }
    Ok(Some(max))
}

/// Cells of the dense stratum whose recession cone meets the relative
/// interior of `sigma`, with their indices.
fn qualifying_cells<'a>(
    complex: &'a ExtendedTropicalComplex,
    sigma: &str,
) -> Result<Vec<(usize, &'a WeightedCell)>> {
    let mut out = Vec::new();
    for (i, c) in complex.dense_stratum().iter().enumerate() {
        let rho = c.poly.recession_cone()?;
        if relint_meets(&rho, &complex.fan, sigma)?.is_some() {
            out.push((i, c));
        }
    }
    Ok(out)
}

/// Proper-intersection criterion at one cone.
///
/// With `d` the pure dimension of the dense stratum and `sigma` a fan cone:
/// no qualifying cell means the closure misses the orbit (VACUOUS, "empty
/// intersection"); a qualifying cell with `dim sigma > d` makes properness
/// impossible (FAIL); otherwise both equivalent conditions are evaluated for
/// every qualifying cell P — `dim(rho(P) ∩ sigma) = dim sigma` and
/// `dim(pi_sigma(P)) = d - dim sigma` — and PASS requires both everywhere.
/// Disagreement between the two routes raises an internal-consistency error.
pub fn check_proper(complex: &ExtendedTropicalComplex, sigma: &str) -> Result<Verdict> {
    const NAME: &str = "proper-intersection";
    let fan = &complex.fan;
    let cone = fan.cone(sigma)?;
    let dense = complex.dense_stratum();
    if dense.is_empty() {
        let mut v = Verdict::new(NAME, Status::InsufficientData);
        v.trace.push("dense stratum has no cells".into());
        return Ok(v);
    }
    let d = dense.iter().map(|c| c.poly.dimension()).max().unwrap();
    if dense.iter().any(|c| c.poly.dimension() != d) {
        let mut v = Verdict::new(NAME, Status::InsufficientData);
        v.trace.push(format!(
            "dense stratum is not pure-dimensional (expected every cell of dimension {d})"
        ));
        return Ok(v);
    }
    let k = cone.dimension();
    let qualifying = qualifying_cells(complex, sigma)?;

    if qualifying.is_empty() {
        let mut v = Verdict::new(NAME, Status::Vacuous);
        v.trace.push(format!("empty intersection: no cell closure reaches stratum {sigma}"));
        return Ok(v);
    }
    if k > d {
        let mut v = Verdict::new(NAME, Status::Fail);
        for (i, c) in qualifying {
            v.witnesses.push(Witness {
                cone: sigma.into(),
                cell: complex.cell_name(fan.zero_cone_id(), i),
                computed_dim: c.poly.dimension(),
                required_dim: -1,
                point: None,
            });
        }
        v.trace.push(format!(
            "cone dimension {k} exceeds dense dimension {d} but the closure meets the orbit"
        ));
        v.sort_witnesses();
        return Ok(v);
    }

    let qm = fan.quotient_map(sigma)?;
    let qmat = qm.matrix();
    let mut verdict = Verdict::new(NAME, Status::Pass);
    for (i, c) in qualifying {
        let rho = c.poly.recession_cone()?;
        let meet = rho.poly().intersect(cone.poly())?;
        let cond_rec = meet.dimension() == k;

        let image = c.poly.linear_image(&qmat)?;
        let required = d - k;
        let cond_proj = image.dimension() == required;

        if cond_rec != cond_proj {
            return Err(Error::InternalConsistency(format!(
                "recession-cone and projection conditions disagree at cone {sigma}, cell {} \
                 (dim(rho∩sigma) = {} vs dim(pi(P)) = {})",
                complex.cell_name(fan.zero_cone_id(), i),
                meet.dimension(),
                image.dimension()
            )));
        }
        let name = complex.cell_name(fan.zero_cone_id(), i);
        let witness = Witness {
            cone: sigma.into(),
            cell: name.clone(),
            computed_dim: image.dimension(),
            required_dim: required,
            point: Some(c.poly.relint_point()?),
        };
        if !cond_proj {
            verdict.status = Status::Fail;
            verdict.trace.push(format!(
                "cell {name}: projection to stratum {sigma} has dimension {} (criterion requires {required})",
                image.dimension()
            ));
        }
        verdict.witnesses.push(witness);
    }
    if verdict.status == Status::Fail {
        verdict.witnesses.retain(|w| w.computed_dim != w.required_dim);
    }
    verdict.sort_witnesses();
    Ok(verdict)
}

/// Run the proper-intersection criterion on every cone of the fan.
pub fn check_proper_all(complex: &ExtendedTropicalComplex) -> Result<BTreeMap<String, Verdict>> {
    let mut out = BTreeMap::new();
    for fc in complex.fan.cones() {
        if fc.id == complex.fan.zero_cone_id() {
            continue;
        }
        out.insert(fc.id.clone(), check_proper(complex, &fc.id)?);
    }
    Ok(out)
}

/// Skeleton-closedness criterion.
///
/// For every face pair `tau < sigma` of the fan, every maximal-dimensional
/// cell of stratum `tau` whose recession cone meets the relative interior of
/// the image cone `pi_tau(sigma)` must project onto stratum `sigma` with the
/// stratum's dimension. PASS certifies closedness of the tropical skeleton;
/// FAIL certifies only that this sufficient criterion fails.
pub fn check_skeleton_closed(
    complex: &ExtendedTropicalComplex,
    overrides: Option<&BTreeMap<String, i64>>,
) -> Result<Verdict> {
    const NAME: &str = "skeleton-closed";
    let fan = &complex.fan;
    // Validate strata and collect dimensions.
    let mut dims: BTreeMap<String, i64> = BTreeMap::new();
    for fc in fan.cones() {
        if let Some(d) = stratum_dim(complex, &fc.id, overrides)? {
            dims.insert(fc.id.clone(), d);
        }
    }
    let mut verdict = Verdict::new(NAME, Status::Pass);
    let mut checks = 0usize;
    for tau in fan.cones() {
        let d_tau = match dims.get(&tau.id) {
            Some(d) => *d,
            None => continue, // empty stratum contributes no sequences
        };
        let (star, _) = fan.star_fan(&tau.id)?;
        for sigma_id in fan.cones_above(&tau.id)? {
            if sigma_id == tau.id {
                continue;
            }
            let q_star = star.quotient_map(sigma_id)?;
            let qmat = q_star.matrix();
            for (i, cell) in complex.stratum(&tau.id).iter().enumerate() {
                if cell.poly.dimension() != d_tau {
                    continue;
                }
                let rho = cell.poly.recession_cone()?;
                if relint_meets(&rho, &star, sigma_id)?.is_none() {
                    continue;
                }
                let d_sigma = match dims.get(sigma_id) {
                    Some(d) => *d,
                    None => return Err(Error::MissingStratumData(sigma_id.to_string())),
                };
                let image = cell.poly.linear_image(&qmat)?;
                checks += 1;
                let name = complex.cell_name(&tau.id, i);
                if image.dimension() != d_sigma {
                    verdict.status = Status::Fail;
                    verdict.witnesses.push(Witness {
                        cone: format!("{}->{}", tau.id, sigma_id),
                        cell: name.clone(),
                        computed_dim: image.dimension(),
                        required_dim: d_sigma,
                        point: Some(cell.poly.relint_point()?),
                    });
                    verdict.trace.push(format!(
                        "stratum {} cell {name}: projection into stratum {sigma_id} has dimension {} \
                         (criterion requires {d_sigma})",
                        tau.id,
                        image.dimension()
                    ));
                } else if verdict.status == Status::Pass {
                    verdict.witnesses.push(Witness {
                        cone: format!("{}->{}", tau.id, sigma_id),
                        cell: name,
                        computed_dim: image.dimension(),
                        required_dim: d_sigma,
                        point: None,
                    });
                }
            }
        }
    }
    if verdict.status == Status::Fail {
        verdict.witnesses.retain(|w| w.computed_dim != w.required_dim);
    } else if checks == 0 {
        verdict.status = Status::Vacuous;
        verdict.trace.push("no cell closure crosses into a smaller stratum".into());
    }
    verdict.sort_witnesses();
    Ok(verdict)
}

/// Continuity criterion for the section of tropicalization on the
/// multiplicity-one locus.
///
/// PASS iff every dense-stratum cell P and every nonzero cone sigma with
/// `rho(P) ∩ relint(sigma) != {}` satisfy `dim pi_sigma(P) = d_sigma`. The
/// trace also reports whether the stronger all-orbits-proper shortcut holds
/// (which implies PASS).
pub fn check_continuity(
    complex: &ExtendedTropicalComplex,
    overrides: Option<&BTreeMap<String, i64>>,
) -> Result<Verdict> {
    const NAME: &str = "section-continuity";
    let fan = &complex.fan;
    let zero = fan.zero_cone_id().to_string();
    let mut dims: BTreeMap<String, i64> = BTreeMap::new();
    for fc in fan.cones() {
        if let Some(d) = stratum_dim(complex, &fc.id, overrides)? {
            dims.insert(fc.id.clone(), d);
        }
    }
    if !dims.contains_key(&zero) {
        let mut v = Verdict::new(NAME, Status::InsufficientData);
        v.trace.push("dense stratum has no cells".into());
        return Ok(v);
    }

    let mut verdict = Verdict::new(NAME, Status::Pass);
    let mut checks = 0usize;
    for fc in fan.cones() {
        if fc.id == zero {
            continue;
        }
        let qm = fan.quotient_map(&fc.id)?;
        let qmat = qm.matrix();
        for (i, cell) in complex.dense_stratum().iter().enumerate() {
            let rho = cell.poly.recession_cone()?;
            if relint_meets(&rho, fan, &fc.id)?.is_none() {
                continue;
            }
            let d_sigma = match dims.get(&fc.id) {
                Some(d) => *d,
                None => return Err(Error::MissingStratumData(fc.id.clone())),
            };
            let image = cell.poly.linear_image(&qmat)?;
            checks += 1;
            let name = complex.cell_name(&zero, i);
            if image.dimension() != d_sigma {
                verdict.status = Status::Fail;
                verdict.witnesses.push(Witness {
                    cone: fc.id.clone(),
                    cell: name.clone(),
                    computed_dim: image.dimension(),
                    required_dim: d_sigma,
                    point: Some(cell.poly.relint_point()?),
                });
                verdict.trace.push(format!(
                    "cell {name}: projection into stratum {} has dimension {} (criterion requires {d_sigma})",
                    fc.id,
                    image.dimension()
                ));
            } else if verdict.status == Status::Pass {
                verdict.witnesses.push(Witness {
                    cone: fc.id.clone(),
                    cell: name,
                    computed_dim: image.dimension(),
                    required_dim: d_sigma,
                    point: None,
                });
            }
        }
    }
    if verdict.status == Status::Fail {
        verdict.witnesses.retain(|w| w.computed_dim != w.required_dim);
    } else if checks == 0 {
        verdict.trace.push("vacuous on orbit strata: no cell closure leaves the dense torus".into());
    }

    // The all-orbits-proper shortcut.
    let shortcut = check_proper_all(complex)?;
    let shortcut_passes = shortcut.values().all(|v| v.passed());
    verdict.trace.push(format!(
        "proper-intersection shortcut: {}",
        if shortcut_passes { "PASS" } else { "FAIL" }
    ));
    if shortcut_passes && verdict.status == Status::Fail {
        return Err(Error::InternalConsistency(
            "all orbits intersect properly yet the continuity criterion fails".into(),
        ));
    }
    verdict.sort_witnesses();
    Ok(verdict)
}

/// Limit-point hypothesis check for one dense cell and one cone.
///
/// Verifies that the cell's closure reaches the stratum, that the projected
/// cell is d-maximal at its relative-interior point, and reports
/// d-maximality at a sample point of every face of the projection. PASS
/// means the polyhedral hypotheses hold along the corresponding
/// degenerations; VACUOUS means the closure never reaches the stratum.
pub fn check_limit_hypothesis(
    complex: &ExtendedTropicalComplex,
    cell_index: usize,
    sigma: &str,
) -> Result<Verdict> {
    const NAME: &str = "limit-point";
    let fan = &complex.fan;
    fan.cone(sigma)?;
    let dense = complex.dense_stratum();
    let cell = dense.get(cell_index).ok_or_else(|| {
        Error::InvalidInput(format!("dense stratum has no cell index {cell_index}"))
    })?;
    let cell_name = complex.cell_name(fan.zero_cone_id(), cell_index);

    let rho = cell.poly.recession_cone()?;
    if relint_meets(&rho, fan, sigma)?.is_none() {
        let mut v = Verdict::new(NAME, Status::Vacuous);
        v.trace.push(format!(
            "cell {cell_name}: closure does not reach stratum {sigma}; no limit points to check"
        ));
        return Ok(v);
    }
    let stratum = complex.stratum(sigma);
    if stratum.is_empty() {
        return Err(Error::MissingStratumData(sigma.to_string()));
    }
    let qm = fan.quotient_map(sigma)?;
    let image = cell.poly.linear_image(&qm.matrix())?;

    let mut verdict = Verdict::new(NAME, Status::Pass);
    for face in image.faces()? {
        let x = face.relint_point()?;
        let dmax = is_d_maximal(&image, &x, stratum)?;
        let local = local_dimension(stratum, &x)?;
        verdict.witnesses.push(Witness {
            cone: sigma.into(),
            cell: cell_name.clone(),
            computed_dim: image.dimension(),
            required_dim: local,
            point: Some(x),
        });
        if !dmax {
            verdict.status = Status::Fail;
            verdict.trace.push(format!(
                "projection of {cell_name} has dimension {} but local dimension at a face sample is {local}",
                image.dimension()
            ));
        }
    }
    if verdict.status == Status::Fail {
        verdict.witnesses.retain(|w| w.computed_dim != w.required_dim);
    }
    verdict.sort_witnesses();
    Ok(verdict)
}

/// Data-driven relevance: for each supplied component Z, the cells P of the
/// stratum with `omega in P` and the local cone of P at omega contained in
/// the support of Trop(Z).
///
/// When exactly one component is supplied, multiplicity one forces every cell
/// containing omega to be relevant; a violation means the data is
/// inconsistent.
pub fn relevant_cells(
    stratum: &[WeightedCell],
    omega: &OrbitPoint,
    data: &ComponentFanData,
) -> Result<BTreeMap<String, Vec<usize>>> {
    if omega != &data.base_point {
        return Err(Error::BasePointMismatch);
    }
    let x = &omega.coords;
    let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut containing: Vec<usize> = Vec::new();
    for (i, c) in stratum.iter().enumerate() {
        if c.poly.contains(x)? {
            containing.push(i);
        }
    }
    for comp in &data.components {
        let support: Vec<Polyhedron> = comp.support.iter().map(|c| c.poly().clone()).collect();
        let mut rel = Vec::new();
        for &i in &containing {
            let lc = stratum[i].poly.local_cone(x)?;
            if union_covers(&support, &[lc.poly().clone()])? {
                rel.push(i);
            }
        }
        out.insert(comp.label.clone(), rel);
    }
    if data.components.len() == 1 {
        let only = out.values().next().unwrap();
        if only.len() != containing.len() {
            return Err(Error::DataInconsistent(
                "a single component must make every cell containing the base point relevant"
                    .into(),
            ));
        }
    }
    Ok(out)
}
