//! The `.vimod` module-definition format.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "k0",
//!   "q": 2,
//!   "coeff": "rational",
//!   "generators": [{ "degree": 0, "rep": "trivial" }],
//!   "relations": [{ "degree": 1, "rep": "trivial", "map": [[1]] }]
//! }
//! ```
//!
//! A `rep` is a builtin name or `{ "dim": k, "generators": [matrix, ...] }`
//! giving the images of the standard generators of `GL_d`. Matrix entries are
//! integers or strings such as `"3/7"`; floats are rejected. A relation `map`
//! has one row per element of the induced basis of `I(V)` in that degree and
//! one column per basis vector of `rep`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use vishift_core::exactmat::{CoeffMatrix, CoeffRing};
use vishift_core::vbmod::{BuiltinRep, GlRep, VBModule};
use vishift_core::vimod::PresentedViModule;
use vishift_core::ViContext;

use crate::error::{CliError, CliResult};

pub const SCHEMA: u32 = 1;

/// Largest window allowed for each supported `q`.
pub fn window_cap(q: u32) -> Option<usize> {
    match q {
        2 => Some(5),
        3 => Some(4),
        5 | 7 => Some(3),
        _ => None,
    }
}

pub fn default_window(q: u32) -> usize {
    window_cap(q).unwrap_or(3)
}

/// An exact matrix entry: an integer or a decimal string `"a"` / `"a/b"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry(pub String);

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct EntryVisitor;
        impl Visitor<'_> for EntryVisitor {
            type Value = Entry;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or an exact number string like \"3/7\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
                Ok(Entry(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
                Ok(Entry(v.to_string()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Entry, E> {
                Err(E::custom(format!(
                    "floating-point entry {v} is not allowed; write it as a string"
                )))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Entry, E> {
                Ok(Entry(v.trim().to_string()))
            }
        }
        d.deserialize_any(EntryVisitor)
    }
}

pub type Matrix = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum RepDef {
    Builtin(String),
    Explicit { dim: usize, generators: Vec<Matrix> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDef {
    pub degree: usize,
    pub rep: RepDef,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RelationDef {
    pub degree: usize,
    pub rep: RepDef,
    pub map: Matrix,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleDefinition {
    #[serde(default = "schema_one")]
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub q: u32,
    #[serde(default = "rational")]
    pub coeff: String,
    pub generators: Vec<GeneratorDef>,
    #[serde(default)]
    pub relations: Vec<RelationDef>,
}

fn schema_one() -> u32 {
    SCHEMA
}

fn rational() -> String {
    "rational".into()
}

pub fn parse_ring(s: &str) -> CliResult<CoeffRing> {
    let s = s.trim();
    if s == "rational" || s == "Q" {
        return Ok(CoeffRing::Rational);
    }
    let p = s
        .strip_prefix("mod")
        .or_else(|| s.strip_prefix("F_"))
        .map(str::trim)
        .and_then(|p| p.parse::<u32>().ok())
        .ok_or_else(|| {
            CliError::Parse(format!(
                "coefficient ring must be \"rational\" or \"mod <p>\", got {s:?}"
            ))
        })?;
    Ok(CoeffRing::Modular(p))
}

/// Modules shipped with the binary, addressable by name.
pub const BUNDLED: [(&str, &str); 5] = [
    ("A", include_str!("../modules/A.vimod")),
    ("k0", include_str!("../modules/k0.vimod")),
    ("itriv1", include_str!("../modules/itriv1.vimod")),
    ("itriv2", include_str!("../modules/itriv2.vimod")),
    ("itriv1_k0", include_str!("../modules/itriv1_k0.vimod")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".vimod").unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(n, _)| *n == stem)
        .map(|(_, text)| *text)
}

/// Reads `source` as a file path, falling back to a bundled module name.
pub fn read_source(source: &str) -> CliResult<String> {
    let path = Path::new(source);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{source}: {e}")));
    }
    bundled(source)
        .map(str::to_string)
        .ok_or_else(|| CliError::Io(format!("{source}: no such file or bundled module")))
}

impl ModuleDefinition {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let def: ModuleDefinition =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if def.schema != SCHEMA {
            return Err(CliError::Parse(format!(
                "unsupported schema version {}",
                def.schema
            )));
        }
        Ok(def)
    }

    pub fn load(source: &str) -> CliResult<Self> {
        Self::from_json(&read_source(source)?)
    }

    /// SHA-256 of the canonical re-serialization.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("definitions serialize");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "M".into())
    }

    pub fn ring(&self) -> CliResult<CoeffRing> {
        parse_ring(&self.coeff)
    }

    /// Builds and validates the presentation over `ctx`.
    pub fn build(&self, ctx: &ViContext) -> CliResult<PresentedViModule> {
        let reps = self
            .generators
            .iter()
            .map(|g| build_rep(ctx, g.degree, &g.rep))
            .collect::<CliResult<Vec<_>>>()?;
        let v = VBModule::new(ctx, reps)?;
        let mut by_degree: BTreeMap<usize, (Vec<GlRep>, Vec<CoeffMatrix>)> = BTreeMap::new();
        let induced = PresentedViModule::free(v.clone()).induced();
        for (i, r) in self.relations.iter().enumerate() {
            let rep = build_rep(ctx, r.degree, &r.rep)?;
            let rows = induced.dim(r.degree)?;
            let map = build_matrix(ctx.ring(), &r.map, rows, rep.dim())
                .map_err(|e| CliError::Parse(format!("relation {i}: {e}")))?;
            let slot = by_degree.entry(r.degree).or_default();
            slot.0.push(rep);
            slot.1.push(map);
        }
        let mut reps = Vec::new();
        let mut maps = BTreeMap::new();
        for (e, (rs, ms)) in by_degree {
            reps.extend(rs);
            let joined = ms
                .iter()
                .skip(1)
                .fold(ms[0].clone(), |acc, m| acc.hstack(m));
            if joined.cols() > 0 {
                maps.insert(e, joined);
            }
        }
        let w = VBModule::new(ctx, reps)?;
        Ok(PresentedViModule::new(v, w, maps)?.named(self.display_name()))
    }
}

fn build_rep(ctx: &ViContext, degree: usize, rep: &RepDef) -> CliResult<GlRep> {
    match rep {
        RepDef::Builtin(name) => {
            let kind = BuiltinRep::parse(name).ok_or_else(|| {
                CliError::Parse(format!("unknown builtin representation {name:?}"))
            })?;
            Ok(GlRep::builtin(ctx, kind, degree)?)
        }
        RepDef::Explicit { dim, generators } => {
            let images = generators
                .iter()
                .map(|m| build_matrix(ctx.ring(), m, *dim, *dim))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(GlRep::explicit(ctx, degree, *dim, images)?)
        }
    }
}

fn build_matrix(ring: CoeffRing, m: &Matrix, rows: usize, cols: usize) -> CliResult<CoeffMatrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::Parse(format!("expected a {rows}x{cols} matrix")));
    }
    let entries = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| ring.parse(&e.0))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoeffMatrix::from_rows(&entries, cols, ring))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_modules_parse() {
        for (name, text) in BUNDLED {
            let def = ModuleDefinition::from_json(text).unwrap();
            assert_eq!(def.display_name(), name);
            let ctx = ViContext::new(def.q, def.ring().unwrap()).unwrap();
            def.build(&ctx).unwrap();
        }
    }

    #[test]
    fn floats_are_rejected() {
        let text = r#"{"q":2,"generators":[{"degree":0,"rep":"trivial"}],
            "relations":[{"degree":1,"rep":"trivial","map":[[1.0]]}]}"#;
        let err = ModuleDefinition::from_json(text).unwrap_err();
        assert!(err.to_string().contains("floating-point"), "{err}");
    }

    #[test]
    fn rings() {
        assert_eq!(parse_ring("rational").unwrap(), CoeffRing::Rational);
        assert_eq!(parse_ring("mod 5").unwrap(), CoeffRing::Modular(5));
        assert!(parse_ring("reals").is_err());
    }

    #[test]
    fn string_entries_and_hash_stability() {
        let a = r#"{"q":3,"coeff":"rational","generators":[{"degree":1,"rep":"trivial"}],
            "relations":[{"degree":1,"rep":"trivial","map":[["3/3"]]}]}"#;
        let def = ModuleDefinition::from_json(a).unwrap();
        let ctx = ViContext::new(3, CoeffRing::Rational).unwrap();
        let m = def.build(&ctx).unwrap().truncate(2).unwrap();
        assert!(m.is_zero());
        let spaced = a.replace([' ', '\n'], "");
        assert_eq!(
            ModuleDefinition::from_json(&spaced).unwrap().hash(),
            def.hash()
        );
    }

    #[test]
    fn non_equivariant_map_is_reported() {
        // the regular rep of GL_1(F_3) mapped by a vector that is not invariant
        let text = r#"{"q":3,"generators":[{"degree":0,"rep":"trivial"}],
            "relations":[{"degree":1,"rep":"regular","map":[[1,0]]}]}"#;
        let def = ModuleDefinition::from_json(text).unwrap();
        let ctx = ViContext::new(3, CoeffRing::Rational).unwrap();
        let err = def.build(&ctx).unwrap_err();
        assert!(matches!(
            err,
            CliError::Core(vishift_core::Error::EquivarianceViolation {
                degree: 1,
                generator: 0
            })
        ));
    }

    #[test]
    fn coefficient_characteristic_equal_to_q() {
        let text = r#"{"q":3,"coeff":"mod 3","generators":[{"degree":0,"rep":"trivial"}]}"#;
        let def = ModuleDefinition::from_json(text).unwrap();
        let err = ViContext::new(def.q, def.ring().unwrap()).unwrap_err();
        assert!(matches!(err, vishift_core::Error::UnsupportedField(_)));
    }
}
