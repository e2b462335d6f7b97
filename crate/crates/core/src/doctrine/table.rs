use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Capabilities, Doctrine};
use crate::error::{Error, Result};
use crate::finbase::{BaseCat, FinMap, FinSet};

/// Interchange form of a finite doctrine.
///
/// `fibers` maps object sizes to element names (their position is the id);
/// `leq` lists strict comparisons `[size, lower, upper]` (reflexivity is
/// implicit); `reindex` maps a function written `dom->cod:[t0,t1,..]` to the
/// image in the domain fiber of each codomain element, in id order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub base_cap: usize,
    pub fibers: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub leq: Vec<(usize, String, String)>,
    #[serde(default)]
    pub reindex: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub flags: Capabilities,
}

/// Element of a table doctrine; compared by id.
#[derive(Debug, Clone)]
pub struct TableElem {
    pub id: usize,
    pub name: Arc<str>,
}

impl PartialEq for TableElem {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for TableElem {}

impl Hash for TableElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl PartialOrd for TableElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TableElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl fmt::Display for TableElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A doctrine given by explicit finite tables.
#[derive(Debug, Clone)]
pub struct TableDoctrine {
    name: String,
    base: BaseCat,
    flags: Capabilities,
    fibers: BTreeMap<usize, Vec<TableElem>>,
    leq: HashSet<(usize, usize, usize)>,
    reindex: HashMap<FinMap, Vec<usize>>,
}

impl TableDoctrine {
    pub fn from_json(text: &str) -> Result<TableDoctrine> {
        let spec: TableSpec =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("doctrine file: {e}")))?;
        TableDoctrine::from_spec(&spec)
    }

    pub fn from_spec(spec: &TableSpec) -> Result<TableDoctrine> {
        let mut fibers = BTreeMap::new();
        let mut ids: HashMap<usize, HashMap<&str, usize>> = HashMap::new();
        for (size, names) in &spec.fibers {
            let n: usize = size
                .parse()
                .map_err(|_| Error::Invalid(format!("fiber key `{size}` is not a size")))?;
            let mut index = HashMap::new();
            for (id, name) in names.iter().enumerate() {
                if index.insert(name.as_str(), id).is_some() {
                    return Err(Error::Invalid(format!("duplicate element `{name}` over {n}")));
                }
            }
            let elems = names
                .iter()
                .enumerate()
                .map(|(id, name)| TableElem { id, name: Arc::from(name.as_str()) })
                .collect();
            fibers.insert(n, elems);
            ids.insert(n, index);
        }
        let lookup = |n: usize, name: &str| -> Result<usize> {
            ids.get(&n)
                .and_then(|m| m.get(name).copied())
                .ok_or_else(|| Error::Invalid(format!("unknown element `{name}` over {n}")))
        };
        let mut leq = HashSet::new();
        for (n, a, b) in &spec.leq {
            leq.insert((*n, lookup(*n, a)?, lookup(*n, b)?));
        }
        let mut reindex = HashMap::new();
        for (key, images) in &spec.reindex {
            let f = parse_map(key)?;
            let cod_len = fibers.get(&f.cod().size()).map_or(0, Vec::len);
            if images.len() != cod_len {
                return Err(Error::Invalid(format!(
                    "reindex table for {key} has {} entries, fiber has {cod_len}",
                    images.len()
                )));
            }
            let table = images
                .iter()
                .map(|name| lookup(f.dom().size(), name))
                .collect::<Result<Vec<_>>>()?;
            reindex.insert(f, table);
        }
        Ok(TableDoctrine {
            name: spec.name.clone().unwrap_or_else(|| "table".into()),
            base: BaseCat::new(spec.base_cap),
            flags: spec.flags,
            fibers,
            leq,
            reindex,
        })
    }

    fn fiber_ref(&self, obj: FinSet) -> Result<&Vec<TableElem>> {
        self.fibers
            .get(&obj.size())
            .ok_or_else(|| Error::Invalid(format!("{} has no fiber over {obj}", self.name)))
    }
}

/// Parses `dom->cod:[t0,t1,..]`.
pub fn parse_map(key: &str) -> Result<FinMap> {
    let bad = || Error::Invalid(format!("map key `{key}` is not of the form dom->cod:[..]"));
    let (sizes, table) = key.split_once(':').ok_or_else(bad)?;
    let (dom, cod) = sizes.split_once("->").ok_or_else(bad)?;
    let dom: usize = dom.trim().parse().map_err(|_| bad())?;
    let cod: usize = cod.trim().parse().map_err(|_| bad())?;
    let inner = table.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
    let entries = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?
    };
    FinMap::new(FinSet(dom), FinSet(cod), entries)
}

impl Doctrine for TableDoctrine {
    type Elem = TableElem;

    fn name(&self) -> String {
        self.name.clone()
    }

    fn base(&self) -> &BaseCat {
        &self.base
    }

    fn capabilities(&self) -> Capabilities {
        self.flags
    }

    fn max_object(&self) -> Option<usize> {
        Some(self.fibers.keys().next_back().copied().unwrap_or(0).min(self.base.size_cap))
    }

    fn fiber(&self, obj: FinSet) -> Result<Vec<TableElem>> {
        self.fiber_ref(obj).cloned()
    }

    fn leq(&self, obj: FinSet, lhs: &TableElem, rhs: &TableElem) -> Result<bool> {
        Ok(lhs.id == rhs.id || self.leq.contains(&(obj.size(), lhs.id, rhs.id)))
    }

    fn reindex(&self, f: &FinMap, e: &TableElem) -> Result<TableElem> {
        if *f == FinMap::identity(f.dom()) {
            return Ok(e.clone());
        }
        let table = self
            .reindex
            .get(f)
            .ok_or_else(|| Error::Invalid(format!("{} has no reindexing along {f}", self.name)))?;
        let id = *table
            .get(e.id)
            .ok_or_else(|| Error::Invalid(format!("element {e} outside the fiber over {}", f.cod())))?;
        Ok(self.fiber_ref(f.dom())?[id].clone())
    }
}

/// Lists the window over `obj` of any doctrine with its order, in
/// interchange form.
pub fn fiber_listing<P: Doctrine + ?Sized>(p: &P, obj: FinSet) -> Result<TableSpec> {
    let elems = p.fiber(obj)?;
    let names: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    let mut leq = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            if i != j && p.leq(obj, a, b)? {
                leq.push((obj.size(), names[i].clone(), names[j].clone()));
            }
        }
    }
    Ok(TableSpec {
        name: Some(p.name()),
        base_cap: p.base().size_cap,
        fibers: BTreeMap::from([(obj.size().to_string(), names)]),
        leq,
        reindex: BTreeMap::new(),
        flags: p.capabilities(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_POINT: &str = r#"{
        "name": "sierpinski",
        "base_cap": 1,
        "fibers": { "0": ["*"], "1": ["f", "t"] },
        "leq": [[1, "f", "t"]],
        "reindex": {
            "0->1:[]": ["*", "*"]
        },
        "flags": { "has_heyting": true }
    }"#;

    #[test]
    fn loads_and_answers_queries() {
        let p = TableDoctrine::from_json(TWO_POINT).unwrap();
        let one = FinSet(1);
        let f = p.fiber(one).unwrap();
        assert!(p.leq(one, &f[0], &f[1]).unwrap());
        assert!(!p.leq(one, &f[1], &f[0]).unwrap());
        let to_one = parse_map("0->1:[]").unwrap();
        assert_eq!(p.reindex(&to_one, &f[1]).unwrap().to_string(), "*");
        assert_eq!(p.max_object(), Some(1));
    }

    #[test]
    fn rejects_bad_tables() {
        let broken = TWO_POINT.replace(r#"["*", "*"]"#, r#"["*"]"#);
        assert!(TableDoctrine::from_json(&broken).is_err());
        assert!(parse_map("2->1").is_err());
        assert_eq!(parse_map("2->2:[1,0]").unwrap().table(), &[1, 0]);
    }
}
