//! JSON file formats: polynomials, polyhedra, fans, stratified complexes,
//! Helm-Katz data, and verdict reports. All numbers are exact: integers or
//! `"p/q"` strings; floating-point literals are rejected by the [`Rat`]
//! deserializer.
//!
//! Serialization is deterministic: maps are ordered, cells are canonical and
//! sorted, so identical inputs produce byte-identical files.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::criteria::{Status, Verdict, Witness};
use crate::error::{Error, Result};
use crate::exact::{IMat, Rat};
use crate::hk::{ComponentData, HkInput, Sigma1Cell};
use crate::polyhedron::{Polyhedron, Row};
use crate::toric::{ConeInput, Fan};
use crate::tropical::{
    ExtendedTropicalComplex, LaurentPoly, Mult, Provenance, Term, WeightedCell,
};

fn to_rows(rows: &[Vec<Rat>]) -> Result<Vec<Row>> {
    rows.iter()
        .map(|r| {
            let mut r = r.clone();
            let b = r.pop().ok_or_else(|| Error::InvalidInput("empty constraint row".into()))?;
            Ok((r, b))
        })
        .collect()
}

fn from_rows(rows: &[Row]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(b.clone());
            r
        })
        .collect()
}

/// `{"ambient_rank": n, "eq": [[a...,b]...], "ineq": [[a...,b]...]}` with the
/// conventions `<a, x> = b` and `<a, x> >= b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub ambient_rank: usize,
    #[serde(default)]
    pub eq: Vec<Vec<Rat>>,
    #[serde(default)]
    pub ineq: Vec<Vec<Rat>>,
}

impl PolyhedronJson {
    pub fn to_polyhedron(&self) -> Result<Polyhedron> {
        Polyhedron::canonicalize(self.ambient_rank, to_rows(&self.eq)?, to_rows(&self.ineq)?)
    }

    pub fn from_polyhedron(p: &Polyhedron) -> PolyhedronJson {
        PolyhedronJson {
            ambient_rank: p.ambient_rank(),
            eq: from_rows(p.equalities()),
            ineq: from_rows(p.inequalities()),
        }
    }
}

/// One term: `{"exp": [1,1,0], "val": "0"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub val: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

/// `{"ambient_rank": n, "terms": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub ambient_rank: usize,
    pub terms: Vec<TermJson>,
}

impl PolynomialJson {
    pub fn to_poly(&self) -> Result<LaurentPoly> {
        LaurentPoly::new(
            self.ambient_rank,
            self.terms
                .iter()
                .map(|t| Term {
                    exponent: t.exp.clone(),
                    valuation: t.val.clone(),
                    residue: t.residue.clone(),
                })
                .collect(),
        )
    }
}

/// One fan cone: rays or H-representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanConeJson {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<Rat>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eq: Option<Vec<Vec<Rat>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ineq: Option<Vec<Vec<Rat>>>,
}

/// `{"ambient_rank": n, "cones": [{"id": ..., "rays": [[...]]}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanJson {
    pub ambient_rank: usize,
    pub cones: Vec<FanConeJson>,
}

impl FanJson {
    pub fn to_fan(&self) -> Result<Fan> {
        let mut inputs = Vec::new();
        for c in &self.cones {
            let input = match (&c.rays, &c.eq, &c.ineq) {
                (Some(rays), None, None) => ConeInput::Rays(rays.clone()),
                (None, eq, ineq) => ConeInput::HRep {
                    eqs: to_rows(eq.as_deref().unwrap_or(&[]))?,
                    ineqs: to_rows(ineq.as_deref().unwrap_or(&[]))?,
                },
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "cone {} mixes rays with an H-representation",
                        c.id
                    )))
                }
            };
            inputs.push((c.id.clone(), input));
        }
        Fan::from_cones(self.ambient_rank, inputs)
    }

    pub fn from_fan(fan: &Fan) -> FanJson {
        FanJson {
            ambient_rank: fan.ambient_rank(),
            cones: fan
                .cones()
                .iter()
                .map(|c| FanConeJson {
                    id: c.id.clone(),
                    rays: None,
                    eq: Some(from_rows(c.cone.poly().equalities())),
                    ineq: Some(from_rows(c.cone.poly().inequalities())),
                })
                .collect(),
        }
    }
}

/// Multiplicity field: a positive integer or the string `"unknown"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MultJson {
    Known(u64),
    Tag(String),
}

/// One weighted cell of a stratum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellJson {
    #[serde(default)]
    pub eq: Vec<Vec<Rat>>,
    #[serde(default)]
    pub ineq: Vec<Vec<Rat>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult: Option<MultJson>,
}

/// `{"ambient_rank": n, "strata": {"0": [cell...], "sigma23": [...]}}`.
/// Stratum keys are fan cone ids; cells live in the stratum's chart.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub ambient_rank: usize,
    pub strata: BTreeMap<String, Vec<CellJson>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

impl ComplexJson {
    fn cell_to_weighted(c: &CellJson, rank: usize) -> Result<WeightedCell> {
        let poly = Polyhedron::canonicalize(rank, to_rows(&c.eq)?, to_rows(&c.ineq)?)?;
        let mult = match &c.mult {
            None => Mult::Unknown,
            Some(MultJson::Known(0)) => {
                return Err(Error::InvalidInput("multiplicity must be positive".into()))
            }
            Some(MultJson::Known(m)) => Mult::Known(*m),
            Some(MultJson::Tag(t)) if t == "unknown" => Mult::Unknown,
            Some(MultJson::Tag(t)) => {
                return Err(Error::InvalidInput(format!("bad multiplicity tag {t:?}")))
            }
        };
        Ok(WeightedCell::new(poly, mult))
    }

    /// Interpret over a fan, producing the stratified complex.
    pub fn to_complex(&self, fan: &Fan) -> Result<ExtendedTropicalComplex> {
        if self.ambient_rank != fan.ambient_rank() {
            return Err(Error::DimensionMismatch {
                expected: fan.ambient_rank(),
                got: self.ambient_rank,
                context: "complex vs fan ambient rank".into(),
            });
        }
        let mut strata = BTreeMap::new();
        let mut provenance = BTreeMap::new();
        for (id, cells) in &self.strata {
            let cone = fan.cone(id)?;
            let rank = fan.ambient_rank() - cone.dimension() as usize;
            let ws = cells
                .iter()
                .map(|c| Self::cell_to_weighted(c, rank))
                .collect::<Result<Vec<WeightedCell>>>()?;
            strata.insert(id.clone(), ws);
            let prov = match self.provenance.get(id).map(String::as_str) {
                Some("derived") => Provenance::Derived,
                _ => Provenance::Input,
            };
            provenance.insert(id.clone(), prov);
        }
        ExtendedTropicalComplex::from_parts(fan.clone(), strata, provenance)
    }

    /// A dense-stratum-only complex (for `hypersurface` output).
    pub fn dense_only(ambient: usize, cells: &[WeightedCell]) -> ComplexJson {
        let mut strata = BTreeMap::new();
        strata.insert("0".to_string(), cells.iter().map(cell_to_json).collect());
        let mut provenance = BTreeMap::new();
        provenance.insert("0".to_string(), "input".to_string());
        ComplexJson { ambient_rank: ambient, strata, provenance }
    }

    pub fn from_complex(etc: &ExtendedTropicalComplex) -> ComplexJson {
        let mut strata = BTreeMap::new();
        let mut provenance = BTreeMap::new();
        for (id, cells) in &etc.strata {
            strata.insert(id.clone(), cells.iter().map(cell_to_json).collect());
            let prov = match etc.provenance.get(id) {
                Some(Provenance::Derived) => "derived",
                _ => "input",
            };
            provenance.insert(id.clone(), prov.to_string());
        }
        ComplexJson { ambient_rank: etc.fan.ambient_rank(), strata, provenance }
    }

    /// The dense stratum of a standalone complex file (key "0" by convention
    /// when no fan is given).
    pub fn dense_cells(&self) -> Result<Vec<WeightedCell>> {
        let cells = self
            .strata
            .get("0")
            .ok_or_else(|| Error::InvalidInput("complex file has no dense stratum \"0\"".into()))?;
        cells.iter().map(|c| Self::cell_to_weighted(c, self.ambient_rank)).collect()
    }
}

fn cell_to_json(c: &WeightedCell) -> CellJson {
    CellJson {
        eq: from_rows(c.poly.equalities()),
        ineq: from_rows(c.poly.inequalities()),
        mult: Some(match c.mult {
            Mult::Known(m) => MultJson::Known(m),
            Mult::Unknown => MultJson::Tag("unknown".into()),
        }),
    }
}

/// A component entry: either a bare label or `{"label": ..., "lattice": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HkComponentJson {
    Label(String),
    WithLattice {
        label: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        lattice: Option<Vec<Vec<i64>>>,
    },
}

/// One cell of the base complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HkCellJson {
    pub id: String,
    pub dim: usize,
    pub components: Vec<HkComponentJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<i64>>>,
}

/// One inclusion record: component `from` on the cell having facet `facet`
/// is contained in component `to` of the facet.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HkInclusionJson {
    pub facet: String,
    pub from: String,
    pub to: String,
}

/// The Helm-Katz input file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HkJson {
    pub cells: Vec<HkCellJson>,
    #[serde(default)]
    pub faces: Vec<(String, String)>,
    #[serde(default)]
    pub inclusions: Vec<HkInclusionJson>,
    #[serde(default)]
    pub mtrop: BTreeMap<String, u64>,
}

fn lattice_from_json(rows: &[Vec<i64>]) -> Result<IMat> {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    for r in rows {
        if r.len() != cols {
            return Err(Error::InvalidInput("ragged lattice matrix".into()));
        }
    }
    Ok(IMat::from_rows(
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
        cols,
    ))
}

impl HkJson {
    pub fn to_input(&self) -> Result<HkInput> {
        let mut cells = Vec::new();
        for c in &self.cells {
            let mut comps = Vec::new();
            for comp in &c.components {
                comps.push(match comp {
                    HkComponentJson::Label(l) => ComponentData { label: l.clone(), lattice: None },
                    HkComponentJson::WithLattice { label, lattice } => ComponentData {
                        label: label.clone(),
                        lattice: lattice.as_ref().map(|m| lattice_from_json(m)).transpose()?,
                    },
                });
            }
            cells.push(Sigma1Cell {
                id: c.id.clone(),
                dim: c.dim,
                components: comps,
                lattice: c.lattice.as_ref().map(|m| lattice_from_json(m)).transpose()?,
            });
        }
        let mut inclusions = BTreeMap::new();
        for inc in &self.inclusions {
            inclusions.insert((inc.facet.clone(), inc.from.clone()), inc.to.clone());
        }
        Ok(HkInput { cells, faces: self.faces.clone(), inclusions, mtrop: self.mtrop.clone() })
    }
}

/// Serializable form of a verdict:
/// `{"criterion": ..., "status": ..., "witnesses": [...]}`.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictJson {
    pub criterion: String,
    pub status: Status,
    pub witnesses: Vec<WitnessJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub cone: String,
    pub cell: String,
    pub computed_dim: i64,
    pub required_dim: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Rat>>,
}

impl VerdictJson {
    pub fn from_verdict(v: &Verdict) -> VerdictJson {
        VerdictJson {
            criterion: v.criterion.clone(),
            status: v.status,
            witnesses: v.witnesses.iter().map(WitnessJson::from_witness).collect(),
            trace: v.trace.clone(),
        }
    }
}

impl WitnessJson {
    fn from_witness(w: &Witness) -> WitnessJson {
        WitnessJson {
            cone: w.cone.clone(),
            cell: w.cell.clone(),
            computed_dim: w.computed_dim,
            required_dim: w.required_dim,
            point: w.point.clone(),
        }
    }
}
