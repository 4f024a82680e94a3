//! Algebra definition files: named rings and modules built from explicit
//! tables or from constructors referring to earlier entries.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use modtheory::module::{direct_sum_all, submodule_as_module};
use modtheory::ring::{ring_poly_quotient, ring_product, ring_upper_triangular};
use modtheory::{
    injective_hull, quotient, regular_module, ring_cyclic, ring_trivial_extension, submodule_generate, validate_module,
    validate_ring, Caps, FiniteModule, FiniteRing, ModuleTables, RingTables,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub rings: Vec<RingSpec>,
    pub modules: Vec<ModuleSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: RingKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingKind {
    Tables { tables: RingTables },
    Cyclic { n: usize },
    Product { left: String, right: String },
    TrivialExtension { base: String, rank: usize },
    UpperTriangular { base: String },
    PolyQuotient { n: usize, modulus: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: ModuleKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleKind {
    Tables { ring: String, tables: ModuleTables },
    Regular { ring: String },
    /// `module / <generators>`.
    Quotient { module: String, generators: Vec<usize> },
    /// The submodule of `module` generated by `generators`.
    Submodule { module: String, generators: Vec<usize> },
    DirectSum { summands: Vec<String> },
    InjectiveHull { module: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{object} fails validation: {message}")]
    Validation { object: String, message: String, witness: Vec<usize> },
    #[error("unresolved {what} `{name}` referenced by `{from}`")]
    Resolution { what: &'static str, name: String, from: String },
}

pub fn parse_spec(text: &str) -> Result<AlgebraSpec, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

/// Reads, parses and fully builds a spec file, so that every error surfaces
/// here.
pub fn load_spec(path: &Path, caps: &Caps) -> Result<(AlgebraSpec, Algebra), SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError::Io { path: path.display().to_string(), message: e.to_string() })?;
    let spec = parse_spec(&text)?;
    let algebra = Algebra::build(&spec, caps)?;
    Ok((spec, algebra))
}

/// Constructed objects of a spec, by name.
#[derive(Debug, Clone)]
pub struct Algebra {
    pub rings: BTreeMap<String, Arc<FiniteRing>>,
    pub modules: BTreeMap<String, FiniteModule>,
}

fn invalid(object: &str, e: modtheory::Error) -> SpecError {
    let witness = match &e {
        modtheory::Error::AxiomViolation { witness, .. } => witness.clone(),
        _ => vec![],
    };
    SpecError::Validation { object: object.to_string(), message: e.to_string(), witness }
}

impl Algebra {
    pub fn build(spec: &AlgebraSpec, caps: &Caps) -> Result<Self, SpecError> {
        let mut seen = HashSet::new();
        for name in spec.rings.iter().map(|r| &r.name).chain(spec.modules.iter().map(|m| &m.name)) {
            if !seen.insert(name.as_str()) {
                return Err(SpecError::Validation {
                    object: name.clone(),
                    message: "name is defined twice".into(),
                    witness: vec![],
                });
            }
        }
        let mut rings: BTreeMap<String, Arc<FiniteRing>> = BTreeMap::new();
        for r in &spec.rings {
            let get = |name: &str| {
                rings.get(name).cloned().ok_or_else(|| SpecError::Resolution {
                    what: "ring",
                    name: name.to_string(),
                    from: r.name.clone(),
                })
            };
            let built = match &r.kind {
                RingKind::Tables { tables } => validate_ring(tables, &r.name, caps).map_err(|e| invalid(&r.name, e))?,
                RingKind::Cyclic { n } if *n >= 1 => ring_cyclic(*n),
                RingKind::Cyclic { .. } => {
                    return Err(SpecError::Validation { object: r.name.clone(), message: "Z_n needs n >= 1".into(), witness: vec![] })
                }
                RingKind::Product { left, right } => ring_product(get(left)?.as_ref(), get(right)?.as_ref()),
                RingKind::TrivialExtension { base, rank } => ring_trivial_extension(get(base)?.as_ref(), *rank),
                RingKind::UpperTriangular { base } => ring_upper_triangular(get(base)?.as_ref()),
                RingKind::PolyQuotient { n, modulus } if *n >= 1 && !modulus.is_empty() => ring_poly_quotient(*n, modulus),
                RingKind::PolyQuotient { .. } => {
                    return Err(SpecError::Validation {
                        object: r.name.clone(),
                        message: "polynomial quotient needs n >= 1 and a nonempty modulus".into(),
                        witness: vec![],
                    })
                }
            };
            let mut built = validate_ring(&built.to_tables(), &r.name, caps).map_err(|e| invalid(&r.name, e))?;
            built.set_name(r.name.clone());
            rings.insert(r.name.clone(), Arc::new(built));
        }
        let mut modules: BTreeMap<String, FiniteModule> = BTreeMap::new();
        for m in &spec.modules {
            let ring = |name: &str| {
                rings.get(name).cloned().ok_or_else(|| SpecError::Resolution {
                    what: "ring",
                    name: name.to_string(),
                    from: m.name.clone(),
                })
            };
            let module = |name: &str| {
                modules.get(name).cloned().ok_or_else(|| SpecError::Resolution {
                    what: "module",
                    name: name.to_string(),
                    from: m.name.clone(),
                })
            };
            let check_elements = |parent: &FiniteModule, gens: &[usize]| match gens.iter().find(|&&g| g >= parent.order()) {
                Some(&g) => Err(SpecError::Validation {
                    object: m.name.clone(),
                    message: format!("generator {g} is not an element of {}", parent.name()),
                    witness: vec![g],
                }),
                None => Ok(()),
            };
            let built = match &m.kind {
                ModuleKind::Tables { ring: r, tables } => {
                    validate_module(ring(r)?, tables, &m.name, caps).map_err(|e| invalid(&m.name, e))?
                }
                ModuleKind::Regular { ring: r } => regular_module(&ring(r)?),
                ModuleKind::Quotient { module: parent, generators } => {
                    let parent = module(parent)?;
                    check_elements(&parent, generators)?;
                    quotient(&parent, &submodule_generate(&parent, generators.iter().copied())).0
                }
                ModuleKind::Submodule { module: parent, generators } => {
                    let parent = module(parent)?;
                    check_elements(&parent, generators)?;
                    submodule_as_module(&parent, &submodule_generate(&parent, generators.iter().copied()))
                }
                ModuleKind::DirectSum { summands } => {
                    let parts = summands.iter().map(|s| module(s)).collect::<Result<Vec<_>, _>>()?;
                    if parts.is_empty() {
                        return Err(SpecError::Validation {
                            object: m.name.clone(),
                            message: "direct sum needs at least one summand".into(),
                            witness: vec![],
                        });
                    }
                    direct_sum_all(&parts).map_err(|e| invalid(&m.name, e))?.0
                }
                ModuleKind::InjectiveHull { module: inner } => {
                    injective_hull(&module(inner)?, caps).map_err(|e| invalid(&m.name, e))?.ambient
                }
            };
            let built = validate_module(built.ring_arc().clone(), &built.to_tables(), &m.name, caps)
                .map_err(|e| invalid(&m.name, e))?;
            modules.insert(m.name.clone(), built);
        }
        Ok(Algebra { rings, modules })
    }

    pub fn module(&self, name: &str) -> Result<&FiniteModule, SpecError> {
        self.modules.get(name).ok_or_else(|| SpecError::Resolution {
            what: "module",
            name: name.to_string(),
            from: "command line".into(),
        })
    }
}

/// A self-contained spec holding just `m` and its ring as explicit tables.
pub fn explicit_spec(m: &FiniteModule) -> AlgebraSpec {
    let ring = m.ring().name().to_string();
    AlgebraSpec {
        rings: vec![RingSpec { name: ring.clone(), kind: RingKind::Tables { tables: m.ring().to_tables() } }],
        modules: vec![ModuleSpec { name: m.name().to_string(), kind: ModuleKind::Tables { ring, tables: m.to_tables() } }],
    }
}
