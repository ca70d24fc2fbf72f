//! Workspace files: one JSON document naming modules, submodules, morphisms,
//! flows, endomorphism families and preradical expressions.

use std::collections::BTreeMap;
use std::path::Path;

use entroflow_core::preradical::NameScope;
use entroflow_core::{
    parse_with, present_module, Flow, Matrix, ModuleObject, Morphism, Options, PreradicalExpr, RingSpec, ShiftTerm,
    Submodule,
};
use serde::Deserialize;

use crate::error::CliError;

pub const WORKSPACE_SCHEMA: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWorkspace {
    schema: u32,
    #[serde(default = "default_ring")]
    ring: String,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
    #[serde(default)]
    submodules: BTreeMap<String, RawSubmodule>,
    #[serde(default)]
    morphisms: BTreeMap<String, RawMorphism>,
    #[serde(default)]
    flows: BTreeMap<String, RawFlow>,
    #[serde(default)]
    families: BTreeMap<String, RawFamily>,
    #[serde(default)]
    preradicals: BTreeMap<String, String>,
    #[serde(default)]
    options: serde_json::Map<String, serde_json::Value>,
}

fn default_ring() -> String {
    "Z".into()
}

/// `[2, 4]` is a sum of cyclic modules; `{"relations": rows, "generators": k}`
/// presents `R^k / im(relations)`; `{"shift": block}` is `⊕_{i ∈ N} block`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawModule {
    Orders(Vec<i64>),
    Relations { relations: Vec<Vec<i64>>, generators: usize },
    Shift { shift: Box<RawModule> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubmodule {
    module: String,
    #[serde(default)]
    generators: Vec<Vec<i64>>,
    /// Generators span positions `0..window` of a shift module.
    window: Option<usize>,
    /// Generators are block coordinates repeated at every position.
    #[serde(default)]
    uniform: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShiftTerm {
    offset: i64,
    block_matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawMorphism {
    Matrix { dom: String, cod: String, matrix: Vec<Vec<i64>> },
    Shift { module: String, shift: Vec<RawShiftTerm> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlow {
    module: String,
    endo: String,
}

/// Members are morphism names, or `zero` / `id` of `module`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    module: String,
    members: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub ring: Option<RingSpec>,
    pub modules: BTreeMap<String, ModuleObject>,
    pub submodules: BTreeMap<String, Submodule>,
    pub morphisms: BTreeMap<String, Morphism>,
    pub flows: BTreeMap<String, Flow>,
    pub families: BTreeMap<String, Vec<Morphism>>,
    pub preradicals: BTreeMap<String, PreradicalExpr>,
    /// Option fields set by the file; the rest are left to lower layers.
    pub options: serde_json::Map<String, serde_json::Value>,
}

impl NameScope for Workspace {
    fn module(&self, name: &str) -> Option<&ModuleObject> {
        self.modules.get(name)
    }

    fn submodule(&self, name: &str) -> Option<&Submodule> {
        self.submodules.get(name)
    }
}

fn type_error(section: &str, name: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Type { location: format!("{section}.{name}"), message: err.to_string() }
}

fn matrix_of(rows: &[Vec<i64>], cols: usize, location: &str) -> Result<Matrix, CliError> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Type { location: location.into(), message: format!("every row needs {cols} entries") });
    }
    Ok(Matrix::from_rows(rows, cols))
}

fn build_module(ring: RingSpec, raw: &RawModule, name: &str) -> Result<ModuleObject, CliError> {
    match raw {
        RawModule::Orders(orders) => {
            ModuleObject::direct_sum_of_cyclics(ring, orders).map_err(|e| type_error("modules", name, e))
        }
        RawModule::Relations { relations, generators } => {
            let cols = relations.first().map_or(0, Vec::len);
            if relations.len() != *generators && !relations.is_empty() {
                return Err(type_error("modules", name, format!("relation matrix needs {generators} rows")));
            }
            let rows = if relations.is_empty() { vec![Vec::new(); *generators] } else { relations.clone() };
            let m = matrix_of(&rows, cols, &format!("modules.{name}"))?;
            Ok(present_module(ring, &m))
        }
        RawModule::Shift { shift } => {
            let block = build_module(ring, shift, name)?;
            ModuleObject::shift(block).map_err(|e| type_error("modules", name, e))
        }
    }
}

impl Workspace {
    /// Overlays the fields present in the file's `options` onto `base`.
    pub fn apply_options(&self, base: Options) -> Result<Options, CliError> {
        let mut merged = serde_json::to_value(base).map_err(|e| type_error("options", "*", e))?;
        if let serde_json::Value::Object(fields) = &mut merged {
            for (k, v) in &self.options {
                if !fields.contains_key(k) {
                    return Err(type_error("options", k, "unknown option"));
                }
                fields.insert(k.clone(), v.clone());
            }
        }
        serde_json::from_value(merged).map_err(|e| type_error("options", "*", e))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawWorkspace = serde_json::from_str(text)
            .map_err(|e| CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
        if raw.schema != WORKSPACE_SCHEMA {
            return Err(CliError::Schema(raw.schema));
        }
        let ring = RingSpec::parse(&raw.ring).map_err(|e| type_error("ring", &raw.ring, e))?;
        let mut ws = Workspace { ring: Some(ring), options: raw.options.clone(), ..Workspace::default() };

        for (name, m) in &raw.modules {
            ws.modules.insert(name.clone(), build_module(ring, m, name)?);
        }
        for (name, s) in &raw.submodules {
            let parent = ws.lookup_module("submodules", name, &s.module)?.clone();
            let sub = match (s.window, s.uniform) {
                (Some(_), true) => return Err(type_error("submodules", name, "`window` and `uniform` exclude each other")),
                (Some(w), false) => Submodule::in_window(&parent, w, &s.generators),
                (None, true) => match parent.block() {
                    Some(block) => Submodule::generated_by(block, &s.generators).and_then(|b| Submodule::uniform(&parent, &b)),
                    None => return Err(type_error("submodules", name, "`uniform` needs a shift module")),
                },
                (None, false) => Submodule::generated_by(&parent, &s.generators),
            };
            ws.submodules.insert(name.clone(), sub.map_err(|e| type_error("submodules", name, e))?);
        }
        for (name, f) in &raw.morphisms {
            let loc = format!("morphisms.{name}");
            let built = match f {
                RawMorphism::Matrix { dom, cod, matrix } => {
                    let d = ws.lookup_module("morphisms", name, dom)?;
                    let c = ws.lookup_module("morphisms", name, cod)?;
                    let a = matrix_of(matrix, d.generator_count(), &loc)?;
                    if a.rows() != c.generator_count() && !(matrix.is_empty() && c.generator_count() == 0) {
                        return Err(type_error("morphisms", name, format!("matrix needs {} rows", c.generator_count())));
                    }
                    let a = if matrix.is_empty() { Matrix::zeros(c.generator_count(), d.generator_count()) } else { a };
                    Morphism::from_matrix(d, c, &a)
                }
                RawMorphism::Shift { module, shift } => {
                    let m = ws.lookup_module("morphisms", name, module)?;
                    let k = m.block().map_or(0, ModuleObject::generator_count);
                    let mut terms = Vec::with_capacity(shift.len());
                    for t in shift {
                        terms.push(ShiftTerm { offset: t.offset, block: matrix_of(&t.block_matrix, k, &loc)? });
                    }
                    Morphism::shift_sum(m, terms)
                }
            };
            ws.morphisms.insert(name.clone(), built.map_err(|e| type_error("morphisms", name, e))?);
        }
        for (name, x) in &raw.flows {
            let m = ws.lookup_module("flows", name, &x.module)?;
            let endo = ws.lookup_morphism("flows", name, &x.endo)?;
            let flow = Flow::new(m, endo).map_err(|e| type_error("flows", name, e))?;
            ws.flows.insert(name.clone(), flow);
        }
        for (name, fam) in &raw.families {
            let m = ws.lookup_module("families", name, &fam.module)?.clone();
            let mut members = Vec::with_capacity(fam.members.len());
            for member in &fam.members {
                let f = match (member.as_str(), ws.morphisms.get(member)) {
                    (_, Some(f)) => f.clone(),
                    ("id", None) => Morphism::identity(&m),
                    ("zero", None) => Morphism::zero(&m, &m).map_err(|e| type_error("families", name, e))?,
                    _ => return Err(CliError::Name { location: format!("families.{name}"), name: member.clone() }),
                };
                if f.dom() != &m || !f.is_endomorphism() {
                    return Err(type_error("families", name, format!("`{member}` is not an endomorphism of `{}`", fam.module)));
                }
                members.push(f);
            }
            ws.families.insert(name.clone(), members);
        }
        for (name, text) in &raw.preradicals {
            let e = parse_with(text, &ws).map_err(|e| type_error("preradicals", name, e))?;
            ws.preradicals.insert(name.clone(), e);
        }
        Ok(ws)
    }

    fn lookup_module(&self, section: &str, name: &str, target: &str) -> Result<&ModuleObject, CliError> {
        self.modules
            .get(target)
            .ok_or_else(|| CliError::Name { location: format!("{section}.{name}"), name: target.into() })
    }

    fn lookup_morphism(&self, section: &str, name: &str, target: &str) -> Result<&Morphism, CliError> {
        self.morphisms
            .get(target)
            .ok_or_else(|| CliError::Name { location: format!("{section}.{name}"), name: target.into() })
    }

    pub fn module(&self, name: &str) -> Result<&ModuleObject, CliError> {
        self.lookup_module("argument", "module", name)
    }

    pub fn morphism(&self, name: &str) -> Result<&Morphism, CliError> {
        self.lookup_morphism("argument", "morphism", name)
    }

    pub fn flow(&self, name: &str) -> Result<&Flow, CliError> {
        self.flows
            .get(name)
            .ok_or_else(|| CliError::Name { location: "argument.flow".into(), name: name.into() })
    }

    pub fn family(&self, name: &str) -> Result<&[Morphism], CliError> {
        self.families
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| CliError::Name { location: "argument.family".into(), name: name.into() })
    }

    /// A named preradical, or else the text parsed as an expression.
    pub fn expression(&self, text: &str) -> Result<PreradicalExpr, CliError> {
        if let Some(e) = self.preradicals.get(text.trim()) {
            return Ok(e.clone());
        }
        parse_with(text, self).map_err(CliError::Core)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_workspace() {
        let ws = Workspace::from_json(r#"{"schema": 1, "ring": "Z", "modules": {"M": [2, 4]}}"#).unwrap();
        assert_eq!(ws.modules["M"].cardinality().finite(), Some(8));
        let empty = Workspace::from_json(r#"{"schema": 1, "modules": {}}"#).unwrap();
        assert!(empty.modules.is_empty());
    }

    #[test]
    fn relation_violations_name_the_morphism() {
        let text = r#"{"schema": 1, "modules": {"A": [2], "B": [4]},
            "morphisms": {"bad": {"dom": "A", "cod": "B", "matrix": [[1]]}}}"#;
        match Workspace::from_json(text) {
            Err(CliError::Type { location, .. }) => assert_eq!(location, "morphisms.bad"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_objects_and_families() {
        let text = r#"{"schema": 1,
            "modules": {"S": {"shift": [3]}, "Z9": [9], "P": {"relations": [[2, 0], [0, 3]], "generators": 2}},
            "submodules": {"W": {"module": "S", "generators": [[1]], "window": 1}},
            "morphisms": {"beta": {"module": "S", "shift": [{"offset": 1, "block_matrix": [[1]]}]}},
            "flows": {"X": {"module": "S", "endo": "beta"}},
            "families": {"F": {"module": "S", "members": ["zero", "id", "beta"]}},
            "preradicals": {"t3": "ptor(3) | tor"}}"#;
        let ws = Workspace::from_json(text).unwrap();
        assert_eq!(ws.family("F").unwrap().len(), 3);
        assert_eq!(ws.modules["P"].factors().unwrap(), &[6]);
        assert!(ws.flows.contains_key("X"));
        assert_eq!(ws.expression("t3").unwrap().to_string(), "ptor(3) | tor");
    }

    #[test]
    fn errors_carry_locations() {
        assert!(matches!(Workspace::from_json("{\"schema\": 1,\n \"modules\": [}"), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(Workspace::from_json(r#"{"schema": 9}"#), Err(CliError::Schema(9))));
        let unknown = r#"{"schema": 1, "flows": {"X": {"module": "Q", "endo": "f"}}}"#;
        match Workspace::from_json(unknown) {
            Err(CliError::Name { location, name }) => assert_eq!((location.as_str(), name.as_str()), ("flows.X", "Q")),
            other => panic!("{other:?}"),
        }
    }
}
