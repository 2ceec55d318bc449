//! The Helm-Katz parameterizing complex for schön data: cells are pairs
//! (P, C) of a polyhedral cell and a stratum component, boundary relations
//! are induced by component inclusions, and maximal cells are validated
//! against the skeletal multiplicity formula
//! `m(P) = sum_i [N_P : N_i]`, which forces every lattice index to one when
//! `m(P)` equals the number of components.
//!
//! Components of stratum closures are supplied as labels; this module
//! validates combinatorial coherence and the lattice arithmetic only.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::criteria::{Status, Verdict, Witness};
use crate::error::{Error, Result};
use crate::exact::{lattice_index, solve_in_row_span, IMat, Rat};

/// A component of a stratum closure over one cell, with an optional basis of
/// its skeleton-cell lattice (defaults to the cell's own lattice `N_P`).
#[derive(Clone, Debug)]
pub struct ComponentData {
    pub label: String,
    pub lattice: Option<IMat>,
}

/// One cell of the base complex `Sigma_1`, given abstractly: id, dimension,
/// components of the corresponding stratum closure, and an optional basis of
/// `N_P` (needed only when component lattices are supplied).
#[derive(Clone, Debug)]
pub struct Sigma1Cell {
    pub id: String,
    pub dim: usize,
    pub components: Vec<ComponentData>,
    pub lattice: Option<IMat>,
}

/// Input to [`build_hk`]: the base complex with its facet relation, plus the
/// component inclusion map keyed by (facet id, component label on the larger
/// cell) and the tropical multiplicities of maximal cells.
#[derive(Clone, Debug, Default)]
pub struct HkInput {
    pub cells: Vec<Sigma1Cell>,
    /// Pairs (facet, cell): the first is a codimension-one face of the second.
    pub faces: Vec<(String, String)>,
    /// (facet id, component label on the big cell) -> component label on the facet.
    pub inclusions: BTreeMap<(String, String), String>,
    pub mtrop: BTreeMap<String, u64>,
}

/// A node of the parameterizing complex: (cell of Sigma_1, component label).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HkCell {
    pub cell: String,
    pub component: String,
    pub dim: usize,
}

/// The assembled parameterizing complex.
#[derive(Clone, Debug)]
pub struct HkComplex {
    pub cells: Vec<HkCell>,
    /// (index of (P,C), index of (P',C')) with P' a facet of P.
    pub boundary: Vec<(usize, usize)>,
    pub input: HkInput,
}

impl HkComplex {
    /// Number of k-cells for k = 0..=max dim.
    pub fn f_vector(&self) -> Vec<usize> {
        let max = self.cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut f = vec![0usize; max + 1];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    /// Number of connected components of the complex.
    pub fn connected_components(&self) -> usize {
        let n = self.cells.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        for &(a, b) in &self.boundary {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// The natural map to Sigma_1 sends (P, C) to P.
    pub fn natural_map(&self) -> Vec<(&HkCell, &str)> {
        self.cells.iter().map(|c| (c, c.cell.as_str())).collect()
    }

    fn sigma1_cell(&self, id: &str) -> Result<&Sigma1Cell> {
        self.input
            .cells
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown cell id {id}")))
    }

    /// Ids of maximal cells: those that are not a facet of anything.
    pub fn maximal_cells(&self) -> Vec<&str> {
        self.input
            .cells
            .iter()
            .filter(|c| !self.input.faces.iter().any(|(f, _)| f == &c.id))
            .map(|c| c.id.as_str())
            .collect()
    }
}

/// Assemble and validate the parameterizing complex.
pub fn build_hk(input: HkInput) -> Result<HkComplex> {
    // Ids unique, components nonempty, labels unique per cell.
    for (i, c) in input.cells.iter().enumerate() {
        if input.cells[..i].iter().any(|d| d.id == c.id) {
            return Err(Error::InvalidInput(format!("duplicate cell id {}", c.id)));
        }
        if c.components.is_empty() {
            return Err(Error::InvalidInput(format!("cell {} has no components", c.id)));
        }
        for (j, comp) in c.components.iter().enumerate() {
            if c.components[..j].iter().any(|d| d.label == comp.label) {
                return Err(Error::InvalidInput(format!(
                    "cell {} lists component {} twice",
                    c.id, comp.label
                )));
            }
        }
    }
    let dim_of = |id: &str| -> Result<usize> {
        input
            .cells
            .iter()
            .find(|c| c.id == id)
            .map(|c| c.dim)
            .ok_or_else(|| Error::InvalidInput(format!("face relation references unknown cell {id}")))
    };
    // Grading: facets drop dimension by exactly one.
    for (facet, cell) in &input.faces {
        let df = dim_of(facet)?;
        let dc = dim_of(cell)?;
        if df + 1 != dc {
            return Err(Error::NotGraded { facet: facet.clone(), cell: cell.clone() });
        }
    }

    // Cells of the complex: one per (P, C).
    let mut cells: Vec<HkCell> = Vec::new();
    for c in &input.cells {
        for comp in &c.components {
            cells.push(HkCell { cell: c.id.clone(), component: comp.label.clone(), dim: c.dim });
        }
    }
    cells.sort();

    // Boundary: for each facet relation and each component of the big cell,
    // the inclusion map names the unique facet component containing it.
    let mut boundary = Vec::new();
    for (facet, cell) in &input.faces {
        let big = input.cells.iter().find(|c| &c.id == cell).unwrap();
        let small = input.cells.iter().find(|c| &c.id == facet).unwrap();
        for comp in &big.components {
            let key = (facet.clone(), comp.label.clone());
            let target = input.inclusions.get(&key).ok_or(Error::MissingInclusion {
                facet: facet.clone(),
                component: comp.label.clone(),
            })?;
            if !small.components.iter().any(|c| &c.label == target) {
                return Err(Error::InvalidInput(format!(
                    "inclusion target {target} is not a component of facet {facet}"
                )));
            }
            let a = cells
                .iter()
                .position(|h| &h.cell == cell && h.component == comp.label)
                .unwrap();
            let b = cells
                .iter()
                .position(|h| &h.cell == facet && &h.component == target)
                .unwrap();
            boundary.push((a, b));
        }
    }
    boundary.sort_unstable();
    boundary.dedup();
    Ok(HkComplex { cells, boundary, input })
}

/// Index `[N_P : N']` of a component lattice inside the cell lattice, via
/// Smith normal form of the coordinates of one basis in the other.
fn component_index(cell_lattice: &IMat, comp_lattice: &IMat) -> Result<BigInt> {
    let k = cell_lattice.rows();
    if comp_lattice.rows() < k {
        return Err(Error::IndexInfinite(format!(
            "component lattice has rank at most {} inside a rank-{k} cell lattice",
            comp_lattice.rows()
        )));
    }
    let basis: Vec<Vec<Rat>> = (0..k)
        .map(|r| cell_lattice.row(r).iter().map(|v| Rat::from_big(v.clone())).collect())
        .collect();
    let mut coord_rows: Vec<Vec<BigInt>> = Vec::new();
    for r in 0..comp_lattice.rows() {
        let target: Vec<Rat> =
            comp_lattice.row(r).iter().map(|v| Rat::from_big(v.clone())).collect();
        let sol = solve_in_row_span(&basis, &target).ok_or_else(|| {
            Error::IndexInfinite("component lattice is not inside the span of the cell lattice".into())
        })?;
        let ints = sol
            .iter()
            .map(|v| {
                if v.is_integer() {
                    Ok(v.numer().clone())
                } else {
                    Err(Error::IndexInfinite(
                        "component lattice is not a sublattice of the cell lattice".into(),
                    ))
                }
            })
            .collect::<Result<Vec<BigInt>>>()?;
        coord_rows.push(ints);
    }
    let c = IMat::from_rows(coord_rows, k);
    lattice_index(&c).ok_or_else(|| {
        Error::IndexInfinite("component lattice does not have full rank in the cell lattice".into())
    })
}

/// Lattice index of one component over a cell, with absent lattices
/// defaulting to the cell lattice itself (index one).
pub fn cell_component_index(cell: &Sigma1Cell, comp: &ComponentData) -> Result<BigInt> {
    match (&cell.lattice, &comp.lattice) {
        (_, None) => Ok(BigInt::one()),
        (None, Some(_)) => Err(Error::InvalidInput(format!(
            "component {} of cell {} has a lattice but the cell lattice N_P is missing",
            comp.label, cell.id
        ))),
        (Some(np), Some(nc)) => component_index(np, nc),
    }
}

/// Unimodularity of the tropicalization map on one skeleton cell:
/// `[N_P : N'] = 1`.
pub fn unimodular_check(complex: &HkComplex, cell_id: &str, component: &str) -> Result<bool> {
    let cell = complex.sigma1_cell(cell_id)?;
    let comp = cell
        .components
        .iter()
        .find(|c| c.label == component)
        .ok_or_else(|| {
            Error::InvalidInput(format!("cell {cell_id} has no component {component}"))
        })?;
    Ok(cell_component_index(cell, comp)?.is_one())
}

/// Validate the skeletal multiplicity formula at a maximal cell:
/// `m(P) = sum_i [N_P : N_i]`, with `m(P) >= r` asserted and, when
/// `m(P) = r`, every index forced to one.
pub fn validate_st_formula(complex: &HkComplex, cell_id: &str) -> Result<Verdict> {
    const NAME: &str = "skeletal-multiplicity";
    let cell = complex.sigma1_cell(cell_id)?;
    if !complex.maximal_cells().contains(&cell_id) {
        return Err(Error::InvalidInput(format!("cell {cell_id} is not maximal")));
    }
    let m = *complex
        .input
        .mtrop
        .get(cell_id)
        .ok_or_else(|| Error::InvalidInput(format!("no multiplicity supplied for {cell_id}")))?;
    let r = cell.components.len() as u64;

    let mut verdict = Verdict {
        criterion: NAME.into(),
        status: Status::Pass,
        witnesses: vec![],
        trace: vec![],
    };
    let mut total = BigInt::from(0u32);
    let mut indices = Vec::new();
    for comp in &cell.components {
        let idx = cell_component_index(cell, comp)?;
        verdict.witnesses.push(Witness {
            cone: cell_id.into(),
            cell: comp.label.clone(),
            computed_dim: i64::try_from(idx.clone()).unwrap_or(i64::MAX),
            required_dim: 1,
            point: None,
        });
        total += &idx;
        indices.push(idx);
    }
    if total != BigInt::from(m) {
        verdict.status = Status::Fail;
        verdict.trace.push(format!(
            "cell {cell_id}: sum of lattice indices is {total}, multiplicity is {m}"
        ));
    }
    if m < r {
        verdict.status = Status::Fail;
        verdict.trace.push(format!(
            "cell {cell_id}: multiplicity {m} is below the component count {r}"
        ));
    }
    if m == r && verdict.status == Status::Pass {
        // Multiplicity equal to the component count forces unimodularity.
        for (comp, idx) in cell.components.iter().zip(&indices) {
            if !idx.is_one() {
                verdict.status = Status::Fail;
                verdict.trace.push(format!(
                    "cell {cell_id}: multiplicity equals component count but component {} has index {idx}",
                    comp.label
                ));
            }
        }
    }
    Ok(verdict)
}

/// Cross-check that the asserted base complex covers the same support as a
/// supplied tropical complex (both directions).
pub fn support_matches(
    sigma1_cells: &[crate::polyhedron::Polyhedron],
    tropical_cells: &[crate::polyhedron::Polyhedron],
) -> Result<bool> {
    Ok(crate::polyhedron::union_covers(sigma1_cells, tropical_cells)?
        && crate::polyhedron::union_covers(tropical_cells, sigma1_cells)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(label: &str) -> ComponentData {
        ComponentData { label: label.into(), lattice: None }
    }

    /// The tropical line: one vertex, three rays, one component everywhere.
    fn tropical_line_input() -> HkInput {
        let mut inclusions = BTreeMap::new();
        for _ray in ["a", "b", "c"] {
            inclusions.insert(("v".to_string(), "C".to_string()), "C".to_string());
        }
        HkInput {
            cells: vec![
                Sigma1Cell { id: "v".into(), dim: 0, components: vec![comp("C")], lattice: None },
                Sigma1Cell { id: "a".into(), dim: 1, components: vec![comp("C")], lattice: None },
                Sigma1Cell { id: "b".into(), dim: 1, components: vec![comp("C")], lattice: None },
                Sigma1Cell { id: "c".into(), dim: 1, components: vec![comp("C")], lattice: None },
            ],
            faces: vec![
                ("v".into(), "a".into()),
                ("v".into(), "b".into()),
                ("v".into(), "c".into()),
            ],
            inclusions,
            mtrop: [("a", 1u64), ("b", 1), ("c", 1)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    #[test]
    fn tropical_line_complex() {
        let hk = build_hk(tropical_line_input()).unwrap();
        assert_eq!(hk.f_vector(), vec![1, 3]);
        assert_eq!(hk.connected_components(), 1);
        assert_eq!(hk.cells.len(), 4);
        // Natural map is surjective onto Sigma_1 and respects dimension.
        let map = hk.natural_map();
        for c in &hk.input.cells {
            assert!(map.iter().any(|(h, id)| *id == c.id && h.dim == c.dim));
        }
        // Every maximal cell passes the multiplicity formula.
        for id in ["a", "b", "c"] {
            let v = validate_st_formula(&hk, id).unwrap();
            assert_eq!(v.status, Status::Pass);
        }
    }

    #[test]
    fn segment_with_double_cover() {
        // One segment with two components, one on each vertex.
        let mut inclusions = BTreeMap::new();
        inclusions.insert(("v0".to_string(), "C1".to_string()), "D".to_string());
        inclusions.insert(("v0".to_string(), "C2".to_string()), "D".to_string());
        inclusions.insert(("v1".to_string(), "C1".to_string()), "E".to_string());
        inclusions.insert(("v1".to_string(), "C2".to_string()), "E".to_string());
        let input = HkInput {
            cells: vec![
                Sigma1Cell { id: "v0".into(), dim: 0, components: vec![comp("D")], lattice: None },
                Sigma1Cell { id: "v1".into(), dim: 0, components: vec![comp("E")], lattice: None },
                Sigma1Cell {
                    id: "s".into(),
                    dim: 1,
                    components: vec![comp("C1"), comp("C2")],
                    lattice: None,
                },
            ],
            faces: vec![("v0".into(), "s".into()), ("v1".into(), "s".into())],
            inclusions,
            mtrop: [("s".to_string(), 2u64)].into_iter().collect(),
        };
        let hk = build_hk(input).unwrap();
        assert_eq!(hk.f_vector(), vec![2, 2]);
        assert_eq!(hk.connected_components(), 1);
        let v = validate_st_formula(&hk, "s").unwrap();
        assert_eq!(v.status, Status::Pass);
        // f-vector counts match component counts per dimension.
        let total: usize = hk.input.cells.iter().map(|c| c.components.len()).sum();
        assert_eq!(hk.cells.len(), total);
    }

    #[test]
    fn isolated_points() {
        let input = HkInput {
            cells: vec![Sigma1Cell {
                id: "p".into(),
                dim: 0,
                components: vec![comp("A"), comp("B"), comp("C")],
                lattice: None,
            }],
            faces: vec![],
            inclusions: BTreeMap::new(),
            mtrop: BTreeMap::new(),
        };
        let hk = build_hk(input).unwrap();
        assert_eq!(hk.f_vector(), vec![3]);
        assert_eq!(hk.connected_components(), 3);
    }

    #[test]
    fn missing_inclusion_and_grading_errors() {
        let mut input = tropical_line_input();
        input.inclusions.clear();
        assert!(matches!(build_hk(input), Err(Error::MissingInclusion { .. })));

        let mut input = tropical_line_input();
        input.cells[1].dim = 2; // ray "a" claims dimension 2
        assert!(matches!(build_hk(input), Err(Error::NotGraded { .. })));
    }

    #[test]
    fn st_formula_rejects_wrong_multiplicity() {
        let mut input = tropical_line_input();
        input.mtrop.insert("a".into(), 2);
        let hk = build_hk(input).unwrap();
        let v = validate_st_formula(&hk, "a").unwrap();
        assert_eq!(v.status, Status::Fail);
    }

    #[test]
    fn st_formula_with_index_two_lattice() {
        // Segment in direction (1,1); N_P = Z(1,1); component lattice Z(2,2).
        let np = IMat::from_i64(&[&[1, 1]]);
        let n2 = IMat::from_i64(&[&[2, 2]]);
        let input = HkInput {
            cells: vec![Sigma1Cell {
                id: "s".into(),
                dim: 1,
                components: vec![ComponentData { label: "C".into(), lattice: Some(n2) }],
                lattice: Some(np),
            }],
            faces: vec![],
            inclusions: BTreeMap::new(),
            mtrop: [("s".to_string(), 2u64)].into_iter().collect(),
        };
        let hk = build_hk(input).unwrap();
        // Index is 2, multiplicity is 2: the formula holds with one component.
        let v = validate_st_formula(&hk, "s").unwrap();
        assert_eq!(v.status, Status::Pass);
        assert!(!unimodular_check(&hk, "s", "C").unwrap());
        // Multiplicity 1 with an index-2 lattice fails.
        let mut input2 = hk.input.clone();
        input2.mtrop.insert("s".into(), 1);
        let hk2 = build_hk(input2).unwrap();
        let v2 = validate_st_formula(&hk2, "s").unwrap();
        assert_eq!(v2.status, Status::Fail);
    }

    #[test]
    fn multiplicity_equals_component_count_forces_unimodularity() {
        // Two components, one with index 2: sum = 3. With m = 3 the formula
        // holds; with m = r = 2 it must fail.
        let np = IMat::from_i64(&[&[1, 0], &[0, 1]]);
        let sub = IMat::from_i64(&[&[2, 0], &[0, 1]]);
        let mk = |m: u64| HkInput {
            cells: vec![Sigma1Cell {
                id: "s".into(),
                dim: 2,
                components: vec![
                    ComponentData { label: "A".into(), lattice: Some(sub.clone()) },
                    ComponentData { label: "B".into(), lattice: None },
                ],
                lattice: Some(np.clone()),
            }],
            faces: vec![],
            inclusions: BTreeMap::new(),
            mtrop: [("s".to_string(), m)].into_iter().collect(),
        };
        let hk = build_hk(mk(3)).unwrap();
        assert_eq!(validate_st_formula(&hk, "s").unwrap().status, Status::Pass);
        let hk = build_hk(mk(2)).unwrap();
        assert_eq!(validate_st_formula(&hk, "s").unwrap().status, Status::Fail);
        // Default lattice is unimodular.
        assert!(unimodular_check(&hk, "s", "B").unwrap());
        assert!(!unimodular_check(&hk, "s", "A").unwrap());
    }

    #[test]
    fn unimodular_check_in_rank_one_span() {
        // N_P = Z(1,1) inside Z^2; component lattice Z(2,2): index 2.
        let np = IMat::from_i64(&[&[1, 1]]);
        let n2 = IMat::from_i64(&[&[2, 2]]);
        assert_eq!(component_index(&np, &n2).unwrap(), BigInt::from(2));
        // A lattice outside the span is infinite.
        let bad = IMat::from_i64(&[&[1, 0]]);
        assert!(matches!(component_index(&np, &bad), Err(Error::IndexInfinite(_))));
        // A non-sublattice (half-integral coordinates) is rejected.
        let half = IMat::from_i64(&[&[1, 1]]);
        let np2 = IMat::from_i64(&[&[2, 2]]);
        assert!(matches!(component_index(&np2, &half), Err(Error::IndexInfinite(_))));
    }

    #[test]
    fn support_cross_check() {
        use crate::polyhedron::Polyhedron;
        // A vertex-plus-rays decomposition against the corner locus it
        // asserts to cover: equality of supports both ways.
        let rays = vec![
            Polyhedron::from_i64(2, &[(&[1, -1], 0)], &[(&[-1, 0], 0)]),
            Polyhedron::from_i64(2, &[(&[1, 0], 0)], &[(&[0, 1], 0)]),
            Polyhedron::from_i64(2, &[(&[0, 1], 0)], &[(&[1, 0], 0)]),
        ];
        assert!(support_matches(&rays, &rays).unwrap());
        let bigger = vec![Polyhedron::from_i64(2, &[(&[1, 0], 0)], &[])];
        assert!(!support_matches(&rays, &bigger).unwrap());
    }

    #[test]
    fn validate_requires_maximal_cell_and_multiplicity() {
        let hk = build_hk(tropical_line_input()).unwrap();
        assert!(validate_st_formula(&hk, "v").is_err());
        let mut input = tropical_line_input();
        input.mtrop.remove("a");
        let hk = build_hk(input).unwrap();
        assert!(validate_st_formula(&hk, "a").is_err());
    }
}
