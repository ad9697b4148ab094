//! Workspace files: named groups, cochains, extensions, representation
//! groups and checks, resolved and validated on load.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::catalog;
use crate::coh::Cochain;
use crate::ext::{self, CentralExtension, GroupCocycle, RepresentationGroup};
use crate::grp::{self, AbelianGroup, FiniteGroup, GroupHom};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorkspaceError {
    #[error("cannot read workspace: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unresolved reference {name:?} at {pointer}")]
    UnresolvedRef { pointer: String, name: String },
    #[error("validation failed at {pointer}: {reason}")]
    ValidationFailed { pointer: String, reason: String },
}

impl WorkspaceError {
    pub fn kind(&self) -> &'static str {
        match self {
            WorkspaceError::Io(_) => "Io",
            WorkspaceError::Parse(_) => "ParseError",
            WorkspaceError::UnresolvedRef { .. } => "UnresolvedRef",
            WorkspaceError::ValidationFailed { .. } => "ValidationFailed",
        }
    }

    pub fn pointer(&self) -> Option<&str> {
        match self {
            WorkspaceError::UnresolvedRef { pointer, .. } | WorkspaceError::ValidationFailed { pointer, .. } => Some(pointer),
            _ => None,
        }
    }
}

fn invalid(pointer: &str, reason: impl std::fmt::Display) -> WorkspaceError {
    WorkspaceError::ValidationFailed { pointer: pointer.to_string(), reason: reason.to_string() }
}

/// JSON pointer escaping of one path segment.
fn seg(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

/// One entry of the `checks` list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSpec {
    pub id: String,
    pub kind: String,
    /// Named references (`cochain`, `extension`, `repgroup`, `L`, `N`, ...).
    pub refs: BTreeMap<String, String>,
}

pub const CHECK_KINDS: &[&str] =
    &["lem-pointwise", "prop-decom", "prop-decom1", "thm-pt", "thm-general", "cor-pt-group", "thm-groupex"];

fn required_refs(kind: &str) -> &'static [&'static str] {
    match kind {
        "lem-pointwise" => &["cochain"],
        "prop-decom" => &["L", "N", "cochain"],
        "prop-decom1" => &["L", "N", "u", "v"],
        "thm-pt" => &["cochain"],
        "thm-general" => &["cochain", "repgroup"],
        "cor-pt-group" => &["extension"],
        "thm-groupex" => &["extension", "repgroup"],
        _ => &[],
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub groups: BTreeMap<String, FiniteGroup>,
    pub cochains: BTreeMap<String, Cochain>,
    pub extensions: BTreeMap<String, CentralExtension>,
    pub repgroups: BTreeMap<String, RepresentationGroup>,
    pub checks: Vec<CheckSpec>,
    pub settings: Settings,
    /// Hex SHA-256 of the raw input bytes.
    pub sha256: String,
}

/// Built-in group names usable without a workspace entry: `trivial`, `klein`,
/// `s3`, `z<n>`, `d<n>`, `heis<p>` and products such as `z2xz4`.
pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    match name {
        "trivial" => return Some(FiniteGroup::trivial()),
        "klein" => return grp::make_abelian(&[2, 2]).ok(),
        "s3" => return Some(catalog::symmetric3()),
        _ => {}
    }
    if let Some(n) = name.strip_prefix('d').and_then(|s| s.parse::<usize>().ok()) {
        return (n >= 1).then(|| catalog::dihedral(n));
    }
    if let Some(p) = name.strip_prefix("heis").and_then(|s| s.parse::<usize>().ok()) {
        return (p >= 2).then(|| catalog::heisenberg(p));
    }
    let factors: Option<Vec<u64>> = name.split('x').map(|f| f.strip_prefix('z').and_then(|s| s.parse().ok())).collect();
    factors.and_then(|f| grp::make_abelian(&f).ok())
}

fn as_u64(v: &Value, pointer: &str) -> Result<u64, WorkspaceError> {
    v.as_u64().ok_or_else(|| invalid(pointer, "expected a non-negative integer"))
}

fn as_u64_list(v: &Value, pointer: &str) -> Result<Vec<u64>, WorkspaceError> {
    let arr = v.as_array().ok_or_else(|| invalid(pointer, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| as_u64(x, &format!("{pointer}/{i}"))).collect()
}

fn as_str<'a>(v: &'a Value, pointer: &str) -> Result<&'a str, WorkspaceError> {
    v.as_str().ok_or_else(|| invalid(pointer, "expected a string"))
}

fn field<'a>(obj: &'a Value, key: &str, pointer: &str) -> Result<&'a Value, WorkspaceError> {
    obj.get(key).ok_or_else(|| invalid(pointer, format!("missing field {key:?}")))
}

fn object<'a>(v: &'a Value, pointer: &str) -> Result<&'a serde_json::Map<String, Value>, WorkspaceError> {
    v.as_object().ok_or_else(|| invalid(pointer, "expected an object"))
}

impl Workspace {
    pub fn empty() -> Self {
        Workspace { sha256: hex::encode(Sha256::digest(b"")), ..Workspace::default() }
    }

    /// Parses and validates a workspace from raw bytes.
    pub fn from_bytes(bytes: &[u8], max_order: usize) -> Result<Self, WorkspaceError> {
        let text = std::str::from_utf8(bytes).map_err(|e| WorkspaceError::Parse(format!("input is not UTF-8: {e}")))?;
        let root: Value = serde_json::from_str(text).map_err(|e| WorkspaceError::Parse(e.to_string()))?;
        let top = object(&root, "")?;
        for key in top.keys() {
            if !["groups", "cochains", "extensions", "repgroups", "checks", "settings", "description"].contains(&key.as_str()) {
                return Err(invalid(&format!("/{}", seg(key)), "unknown top-level field"));
            }
        }
        let mut ws = Workspace { sha256: hex::encode(Sha256::digest(bytes)), ..Workspace::default() };
        let empty = Value::Object(Default::default());
        ws.load_groups(root.get("groups").unwrap_or(&empty), max_order)?;
        ws.load_cochains(root.get("cochains").unwrap_or(&empty))?;
        ws.load_extensions(root.get("extensions").unwrap_or(&empty), max_order)?;
        ws.load_repgroups(root.get("repgroups").unwrap_or(&empty))?;
        ws.load_checks(root.get("checks").unwrap_or(&Value::Array(Vec::new())))?;
        if let Some(s) = root.get("settings") {
            let obj = object(s, "/settings")?;
            if let Some(seed) = obj.get("seed") {
                ws.settings.seed = Some(as_u64(seed, "/settings/seed")?);
            }
            if let Some(tol) = obj.get("tol") {
                let t = tol.as_f64().filter(|t| *t > 0.0 && t.is_finite());
                ws.settings.tol = Some(t.ok_or_else(|| invalid("/settings/tol", "expected a positive number"))?);
            }
        }
        Ok(ws)
    }

    /// A workspace group, falling back to the built-in names.
    pub fn group(&self, name: &str, pointer: &str) -> Result<FiniteGroup, WorkspaceError> {
        self.groups
            .get(name)
            .cloned()
            .or_else(|| builtin_group(name))
            .ok_or_else(|| WorkspaceError::UnresolvedRef { pointer: pointer.into(), name: name.into() })
    }

    pub fn cochain(&self, name: &str, pointer: &str) -> Result<&Cochain, WorkspaceError> {
        self.cochains.get(name).ok_or_else(|| WorkspaceError::UnresolvedRef { pointer: pointer.into(), name: name.into() })
    }

    pub fn extension(&self, name: &str, pointer: &str) -> Result<&CentralExtension, WorkspaceError> {
        self.extensions.get(name).ok_or_else(|| WorkspaceError::UnresolvedRef { pointer: pointer.into(), name: name.into() })
    }

    pub fn repgroup(&self, name: &str, pointer: &str) -> Result<&RepresentationGroup, WorkspaceError> {
        self.repgroups.get(name).ok_or_else(|| WorkspaceError::UnresolvedRef { pointer: pointer.into(), name: name.into() })
    }

    fn load_groups(&mut self, v: &Value, max_order: usize) -> Result<(), WorkspaceError> {
        let specs = object(v, "/groups")?;
        let mut visiting = BTreeSet::new();
        for name in specs.keys() {
            self.resolve_group(name, specs, &mut visiting, max_order)?;
        }
        Ok(())
    }

    fn resolve_group(
        &mut self,
        name: &str,
        specs: &serde_json::Map<String, Value>,
        visiting: &mut BTreeSet<String>,
        max_order: usize,
    ) -> Result<FiniteGroup, WorkspaceError> {
        if let Some(g) = self.groups.get(name) {
            return Ok(g.clone());
        }
        let p = format!("/groups/{}", seg(name));
        if !visiting.insert(name.to_string()) {
            return Err(invalid(&p, "cyclic product definition"));
        }
        let spec = object(&specs[name], &p)?;
        let g = if let Some(f) = spec.get("abelian") {
            let factors = as_u64_list(f, &format!("{p}/abelian"))?;
            let order = factors.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128).filter(|&o| o <= max_order as u128));
            if order.is_none() {
                return Err(invalid(&format!("{p}/abelian"), format!("group order exceeds {max_order}")));
            }
            grp::make_abelian(&factors).map_err(|e| invalid(&format!("{p}/abelian"), e))?
        } else if let Some(t) = spec.get("table") {
            let rows = t.as_array().ok_or_else(|| invalid(&format!("{p}/table"), "expected an array of rows"))?;
            if rows.len() > max_order {
                return Err(invalid(&format!("{p}/table"), format!("group order exceeds {max_order}")));
            }
            let table = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    as_u64_list(r, &format!("{p}/table/{i}")).map(|r| r.into_iter().map(|x| x as usize).collect())
                })
                .collect::<Result<Vec<Vec<usize>>, _>>()?;
            grp::make_table(&table).map_err(|e| invalid(&format!("{p}/table"), e))?
        } else if let Some(pr) = spec.get("product") {
            let pp = format!("{p}/product");
            let parts = pr.as_array().filter(|a| a.len() == 2).ok_or_else(|| invalid(&pp, "expected two group names"))?;
            let mut gs = Vec::with_capacity(2);
            for (i, part) in parts.iter().enumerate() {
                let pn = as_str(part, &format!("{pp}/{i}"))?;
                let g = if specs.contains_key(pn) {
                    self.resolve_group(pn, specs, visiting, max_order)?
                } else {
                    builtin_group(pn).ok_or_else(|| WorkspaceError::UnresolvedRef { pointer: format!("{pp}/{i}"), name: pn.into() })?
                };
                gs.push(g);
            }
            grp::direct_product(&gs[0], &gs[1]).group
        } else if let Some(c) = spec.get("builtin") {
            let bn = as_str(c, &format!("{p}/builtin"))?;
            builtin_group(bn).ok_or_else(|| invalid(&format!("{p}/builtin"), format!("unknown built-in group {bn:?}")))?
        } else {
            return Err(invalid(&p, "expected one of \"abelian\", \"table\", \"product\", \"builtin\""));
        };
        g.check_order(max_order).map_err(|e| invalid(&p, e))?;
        visiting.remove(name);
        self.groups.insert(name.to_string(), g.clone());
        Ok(g)
    }

    fn load_cochains(&mut self, v: &Value) -> Result<(), WorkspaceError> {
        for (name, spec) in object(v, "/cochains")? {
            let p = format!("/cochains/{}", seg(name));
            object(spec, &p)?;
            let gname = as_str(field(spec, "group", &p)?, &format!("{p}/group"))?;
            let g = self.group(gname, &format!("{p}/group"))?;
            let degree = as_u64(field(spec, "degree", &p)?, &format!("{p}/degree"))? as usize;
            let base = match spec.get("base") {
                Some(b) => as_u64(b, &format!("{p}/base"))? as usize,
                None => 1,
            };
            if base == 0 {
                return Err(invalid(&format!("{p}/base"), "base must be non-empty"));
            }
            let modulus = as_u64(field(spec, "modulus", &p)?, &format!("{p}/modulus"))?;
            let values = as_u64_list(field(spec, "values", &p)?, &format!("{p}/values"))?;
            let c = Cochain::from_values(&g, degree, base, modulus, values).map_err(|e| invalid(&p, e))?;
            if degree == 2 {
                if let Some((x, r, s, t)) = c.cocycle_defect() {
                    return Err(invalid(&p, format!("cocycle identity fails at base point {x}, arguments ({r}, {s}, {t})")));
                }
                if !c.is_normalized() {
                    return Err(invalid(&p, "degree-2 cocycles must vanish when an argument is the identity"));
                }
            }
            self.cochains.insert(name.clone(), c);
        }
        Ok(())
    }

    fn load_extensions(&mut self, v: &Value, max_order: usize) -> Result<(), WorkspaceError> {
        for (name, spec) in object(v, "/extensions")? {
            let p = format!("/extensions/{}", seg(name));
            object(spec, &p)?;
            let n = AbelianGroup::new(&as_u64_list(field(spec, "N", &p)?, &format!("{p}/N"))?)
                .map_err(|e| invalid(&format!("{p}/N"), e))?;
            let gname = as_str(field(spec, "G", &p)?, &format!("{p}/G"))?;
            let g = self.group(gname, &format!("{p}/G"))?;
            if n.order() * g.order() > max_order {
                return Err(invalid(&p, format!("extension order exceeds {max_order}")));
            }
            let ext = if let Some(eta) = spec.get("eta") {
                let ep = format!("{p}/eta");
                let rows = eta.as_array().ok_or_else(|| invalid(&ep, "expected an array"))?;
                let gs = g.order();
                if rows.len() != gs * gs {
                    return Err(invalid(&ep, format!("expected {} entries, found {}", gs * gs, rows.len())));
                }
                let coords = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| match r {
                        Value::Array(_) => as_u64_list(r, &format!("{ep}/{i}")),
                        other => as_u64(other, &format!("{ep}/{i}")).map(|x| vec![x]),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if coords.iter().any(|c| c.len() != n.rank()) {
                    return Err(invalid(&ep, "entries must have one coordinate per factor of N"));
                }
                let eta = GroupCocycle::from_fn(&g, &n, |s, t| coords[s * gs + t].clone());
                ext::extension_from_cocycle(&eta).map_err(|e| invalid(&ep, e))?
            } else {
                let ename = as_str(field(spec, "E", &p)?, &format!("{p}/E"))?;
                let e = self.group(ename, &format!("{p}/E"))?;
                let to_usize = |v: Vec<u64>| v.into_iter().map(|x| x as usize).collect::<Vec<_>>();
                let iota = to_usize(as_u64_list(field(spec, "iota", &p)?, &format!("{p}/iota"))?);
                let proj = to_usize(as_u64_list(field(spec, "p", &p)?, &format!("{p}/p"))?);
                let iota = GroupHom::new(n.to_group(), e.clone(), iota).map_err(|err| invalid(&format!("{p}/iota"), err))?;
                let proj = GroupHom::new(e.clone(), g.clone(), proj).map_err(|err| invalid(&format!("{p}/p"), err))?;
                match spec.get("section") {
                    Some(s) => {
                        let section = to_usize(as_u64_list(s, &format!("{p}/section"))?);
                        CentralExtension::new(n, g, e, iota, proj, section)
                    }
                    None => CentralExtension::with_canonical_section(n, g, e, iota, proj),
                }
                .map_err(|err| invalid(&p, err))?
            };
            self.extensions.insert(name.clone(), ext);
        }
        Ok(())
    }

    fn load_repgroups(&mut self, v: &Value) -> Result<(), WorkspaceError> {
        for (name, spec) in object(v, "/repgroups")? {
            let p = format!("/repgroups/{}", seg(name));
            object(spec, &p)?;
            let r = if let Some(gv) = spec.get("group") {
                let g = self.group(as_str(gv, &format!("{p}/group"))?, &format!("{p}/group"))?;
                ext::representation_group_abelian(&g).map_err(|e| invalid(&p, e))?
            } else if let Some(ev) = spec.get("extension") {
                let ext = self.extension(as_str(ev, &format!("{p}/extension"))?, &format!("{p}/extension"))?.clone();
                RepresentationGroup::from_extension(ext).map_err(|e| invalid(&p, e))?
            } else {
                return Err(invalid(&p, "expected \"group\" or \"extension\""));
            };
            self.repgroups.insert(name.clone(), r);
        }
        Ok(())
    }

    fn load_checks(&mut self, v: &Value) -> Result<(), WorkspaceError> {
        let arr = v.as_array().ok_or_else(|| invalid("/checks", "expected an array"))?;
        let mut ids = BTreeSet::new();
        for (i, c) in arr.iter().enumerate() {
            let p = format!("/checks/{i}");
            let obj = object(c, &p)?;
            let id = as_str(field(c, "id", &p)?, &format!("{p}/id"))?.to_string();
            if !ids.insert(id.clone()) {
                return Err(invalid(&format!("{p}/id"), format!("duplicate check id {id:?}")));
            }
            let kind = as_str(field(c, "kind", &p)?, &format!("{p}/kind"))?.to_string();
            if !CHECK_KINDS.contains(&kind.as_str()) {
                return Err(invalid(&format!("{p}/kind"), format!("unknown check kind {kind:?}")));
            }
            let mut refs = BTreeMap::new();
            for (k, val) in obj {
                if k != "id" && k != "kind" {
                    refs.insert(k.clone(), as_str(val, &format!("{p}/{}", seg(k)))?.to_string());
                }
            }
            for &r in required_refs(&kind) {
                if !refs.contains_key(r) {
                    return Err(invalid(&p, format!("{kind} needs {r:?}")));
                }
            }
            // every reference must resolve now
            for (k, name) in &refs {
                let rp = format!("{p}/{}", seg(k));
                match k.as_str() {
                    "cochain" | "u" | "v" | "omega" => {
                        self.cochain(name, &rp)?;
                    }
                    "extension" => {
                        self.extension(name, &rp)?;
                    }
                    "repgroup" => {
                        self.repgroup(name, &rp)?;
                    }
                    "L" | "N" => {
                        self.group(name, &rp)?;
                    }
                    _ => return Err(invalid(&rp, format!("unknown field {k:?}"))),
                }
            }
            self.checks.push(CheckSpec { id, kind, refs });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_workspace() {
        let ws = Workspace::from_bytes(br#"{"groups":{"G":{"abelian":[2,2]}}}"#, 512).unwrap();
        assert_eq!(ws.groups.len(), 1);
        assert_eq!(ws.groups["G"].order(), 4);
    }

    #[test]
    fn dangling_group_reference() {
        let err = Workspace::from_bytes(
            br#"{"cochains":{"u":{"group":"nope","degree":1,"modulus":2,"values":[0]}}}"#,
            512,
        )
        .unwrap_err();
        assert_eq!(err, WorkspaceError::UnresolvedRef { pointer: "/cochains/u/group".into(), name: "nope".into() });
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let err = Workspace::from_bytes(
            br#"{"cochains":{"u":{"group":"z2","degree":2,"modulus":2,"values":[0,1,0,0]}}}"#,
            512,
        )
        .unwrap_err();
        assert!(matches!(err, WorkspaceError::ValidationFailed { ref pointer, .. } if pointer == "/cochains/u"));
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin_group("trivial").unwrap().order(), 1);
        assert_eq!(builtin_group("z2xz4").unwrap().order(), 8);
        assert_eq!(builtin_group("d4").unwrap().order(), 8);
        assert_eq!(builtin_group("heis3").unwrap().order(), 27);
        assert!(builtin_group("q8").is_none());
    }

    #[test]
    fn order_limit() {
        let err = Workspace::from_bytes(br#"{"groups":{"G":{"abelian":[1000]}}}"#, 512).unwrap_err();
        assert!(matches!(err, WorkspaceError::ValidationFailed { .. }));
    }

    #[test]
    fn product_cycle_detected() {
        let err =
            Workspace::from_bytes(br#"{"groups":{"A":{"product":["B","z2"]},"B":{"product":["A","z2"]}}}"#, 512).unwrap_err();
        assert!(matches!(err, WorkspaceError::ValidationFailed { .. }));
    }
}
