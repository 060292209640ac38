//! Quivers, dimension vectors and the named quiver families.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuiver")]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    framing_vertex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    framing_rank: Option<usize>,
}

#[derive(Deserialize)]
struct RawQuiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    #[serde(default)]
    framing_vertex: Option<String>,
    #[serde(default)]
    framing_rank: Option<usize>,
}

impl TryFrom<RawQuiver> for Quiver {
    type Error = Error;
    fn try_from(r: RawQuiver) -> Result<Self> {
        let framing = match (r.framing_vertex, r.framing_rank) {
            (Some(v), Some(k)) => Some((v, k)),
            (None, None) => None,
            _ => return Err(Error::Quiver("framing_vertex and framing_rank go together".into())),
        };
        Quiver::new(r.vertices, r.arrows, framing)
    }
}

impl Quiver {
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        framing: Option<(String, usize)>,
    ) -> Result<Self> {
        let vset: BTreeSet<&String> = vertices.iter().collect();
        if vset.len() != vertices.len() {
            return Err(Error::Quiver("duplicate vertex id".into()));
        }
        let mut seen = BTreeSet::new();
        for a in &arrows {
            if !seen.insert(&a.id) {
                return Err(Error::Quiver(format!("duplicate arrow id `{}`", a.id)));
            }
            for v in [&a.src, &a.tgt] {
                if !vset.contains(v) {
                    return Err(Error::UnknownVertex(v.clone()));
                }
            }
        }
        if let Some((v, _)) = &framing {
            if !vset.contains(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        let (framing_vertex, framing_rank) = framing.unzip();
        Ok(Quiver { vertices, arrows, framing_vertex, framing_rank })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: &str) -> Result<&Arrow> {
        self.arrows.iter().find(|a| a.id == id).ok_or_else(|| Error::UnknownArrow(id.into()))
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }

    pub fn framing(&self) -> Option<(&str, usize)> {
        self.framing_vertex.as_deref().zip(self.framing_rank)
    }

    /// Arrows from `src` to `tgt`, in declaration order.
    pub fn arrows_between(&self, src: &str, tgt: &str) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| a.src == src && a.tgt == tgt).collect()
    }

    /// Dimension vector with the framing vertex (if any) pinned to its rank
    /// and every other vertex set from `dims`.
    pub fn dim_vector(&self, dims: &[(&str, usize)]) -> Result<DimVector> {
        let mut map: BTreeMap<String, usize> = dims.iter().map(|(v, n)| (v.to_string(), *n)).collect();
        if let Some((f, k)) = self.framing() {
            map.entry(f.to_string()).or_insert(k);
        }
        DimVector::new(self, map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(BTreeMap<String, usize>);

impl DimVector {
    pub fn new(quiver: &Quiver, map: BTreeMap<String, usize>) -> Result<Self> {
        let dv = DimVector(map);
        dv.validate(quiver)?;
        Ok(dv)
    }

    pub fn validate(&self, quiver: &Quiver) -> Result<()> {
        for v in self.0.keys() {
            if !quiver.has_vertex(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        for v in quiver.vertices() {
            if !self.0.contains_key(v) {
                return Err(Error::Quiver(format!("no dimension for vertex `{v}`")));
            }
        }
        if let Some((f, k)) = quiver.framing() {
            if self.0[f] != k {
                return Err(Error::Quiver(format!(
                    "framing vertex `{f}` must have dimension {k}, got {}",
                    self.0[f]
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, v: &str) -> usize {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &usize)> {
        self.0.iter()
    }
}

/// The quiver families used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuiverKind {
    /// Two vertices `1`, `2`; arrows `a1, a2: 1 -> 2` and `b1, b2: 2 -> 1`.
    Conifold,
    /// The conifold quiver plus a framing vertex `inf` of rank `r` and `u: inf -> 1`.
    FramedConifold { r: usize },
    /// Framing vertex `inf` (rank 1) and vertex `2` carrying loops
    /// `a1''`, `a2''`, `b1''`; arrows `a1'i`, `a2'i: inf -> 2`, `b1'i: 2 -> inf`.
    Reduced { r: usize },
    /// Framing vertex `U` of rank `r`; `u: U -> V`, `v: V -> U`, loops `A`, `B`.
    Adhm { r: usize },
    /// Framing vertex `0` (rank 1), vertex `1` with loops `A`, `B`, `C`;
    /// paired arrows `u1..ua: 0 -> 1` and `v1..va: 1 -> 0`, extra `e1..er: 0 -> 1`.
    Dtpt { a: usize, r: usize },
    /// [`QuiverKind::Dtpt`] with loops `l1..lN` added at vertex `0`.
    DtptLoops { a: usize, r: usize, n: usize },
    /// Framing vertex `U` of rank `r`; `u1, u2: U -> V`, `v: V -> U`, loops `A`, `B`, `C`.
    /// The curve degree `m` only affects the potential.
    ExtendedAdhm { r: usize, m: usize },
    /// One vertex `1` with loops `A`, `B`, `C`.
    TripleLoop,
}

impl QuiverKind {
    /// Parses a kind name plus its integer parameters (negative values rejected).
    pub fn from_name(name: &str, params: &BTreeMap<&str, i64>) -> Result<Self> {
        let get = |k: &str, default: Option<i64>| -> Result<usize> {
            let v = params
                .get(k)
                .copied()
                .or(default)
                .ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs parameter `{k}`")))?;
            usize::try_from(v).map_err(|_| Error::InvalidParameter(format!("`{k}` = {v} is negative")))
        };
        Ok(match name {
            "conifold" => QuiverKind::Conifold,
            "framed_conifold" | "framed-conifold" => QuiverKind::FramedConifold { r: get("r", Some(1))? },
            "reduced" => QuiverKind::Reduced { r: get("r", None)? },
            "adhm" => QuiverKind::Adhm { r: get("r", None)? },
            "dtpt" => QuiverKind::Dtpt { a: get("a", None)?, r: get("r", None)? },
            "dtpt_loops" | "dtpt-loops" => {
                QuiverKind::DtptLoops { a: get("a", None)?, r: get("r", None)?, n: get("N", Some(0))? }
            }
            "extended_adhm" | "extended-adhm" => {
                QuiverKind::ExtendedAdhm { r: get("r", None)?, m: get("m", None)? }
            }
            "triple_loop" | "triple-loop" => QuiverKind::TripleLoop,
            other => return Err(Error::InvalidParameter(format!("unknown quiver kind `{other}`"))),
        })
    }
}

fn arrow(id: impl Into<String>, src: &str, tgt: &str) -> Arrow {
    Arrow { id: id.into(), src: src.into(), tgt: tgt.into() }
}

fn verts(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn need_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!("`{name}` must be at least 1")));
    }
    Ok(())
}

pub fn build_quiver(kind: QuiverKind) -> Result<Quiver> {
    match kind {
        QuiverKind::Conifold => Quiver::new(
            verts(&["1", "2"]),
            vec![arrow("a1", "1", "2"), arrow("a2", "1", "2"), arrow("b1", "2", "1"), arrow("b2", "2", "1")],
            None,
        ),
        QuiverKind::FramedConifold { r } => {
            need_positive("r", r)?;
            Quiver::new(
                verts(&["inf", "1", "2"]),
                vec![
                    arrow("u", "inf", "1"),
                    arrow("a1", "1", "2"),
                    arrow("a2", "1", "2"),
                    arrow("b1", "2", "1"),
                    arrow("b2", "2", "1"),
                ],
                Some(("inf".into(), r)),
            )
        }
        QuiverKind::Reduced { r } => {
            need_positive("r", r)?;
            let mut arrows =
                vec![arrow("a1''", "2", "2"), arrow("a2''", "2", "2"), arrow("b1''", "2", "2")];
            for i in 1..=r {
                arrows.push(arrow(format!("a1'{i}"), "inf", "2"));
                arrows.push(arrow(format!("a2'{i}"), "inf", "2"));
            }
            for i in 1..=r {
                arrows.push(arrow(format!("b1'{i}"), "2", "inf"));
            }
            Quiver::new(verts(&["inf", "2"]), arrows, Some(("inf".into(), 1)))
        }
        QuiverKind::Adhm { r } => {
            need_positive("r", r)?;
            Quiver::new(
                verts(&["U", "V"]),
                vec![arrow("u", "U", "V"), arrow("v", "V", "U"), arrow("A", "V", "V"), arrow("B", "V", "V")],
                Some(("U".into(), r)),
            )
        }
        QuiverKind::Dtpt { a, r } => {
            need_positive("r", r)?;
            let mut arrows = vec![arrow("A", "1", "1"), arrow("B", "1", "1"), arrow("C", "1", "1")];
            arrows.extend((1..=a).map(|i| arrow(format!("u{i}"), "0", "1")));
            arrows.extend((1..=r).map(|i| arrow(format!("e{i}"), "0", "1")));
            arrows.extend((1..=a).map(|i| arrow(format!("v{i}"), "1", "0")));
            Quiver::new(verts(&["0", "1"]), arrows, Some(("0".into(), 1)))
        }
        QuiverKind::DtptLoops { a, r, n } => {
            let base = build_quiver(QuiverKind::Dtpt { a, r })?;
            let mut arrows = base.arrows;
            arrows.extend((1..=n).map(|i| arrow(format!("l{i}"), "0", "0")));
            Quiver::new(base.vertices, arrows, Some(("0".into(), 1)))
        }
        QuiverKind::ExtendedAdhm { r, m } => {
            need_positive("r", r)?;
            need_positive("m", m)?;
            Quiver::new(
                verts(&["U", "V"]),
                vec![
                    arrow("u1", "U", "V"),
                    arrow("u2", "U", "V"),
                    arrow("v", "V", "U"),
                    arrow("A", "V", "V"),
                    arrow("B", "V", "V"),
                    arrow("C", "V", "V"),
                ],
                Some(("U".into(), r)),
            )
        }
        QuiverKind::TripleLoop => Quiver::new(
            verts(&["1"]),
            vec![arrow("A", "1", "1"), arrow("B", "1", "1"), arrow("C", "1", "1")],
            None,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(q: &Quiver, s: &str, t: &str) -> usize {
        q.arrows_between(s, t).len()
    }

    #[test]
    fn conifold_shape() {
        let q = build_quiver(QuiverKind::Conifold).unwrap();
        assert_eq!(q.vertices().len(), 2);
        let ids: Vec<_> = q.arrows().iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, ["a1", "a2", "b1", "b2"]);
        assert_eq!(count(&q, "1", "2"), 2);
        assert_eq!(count(&q, "2", "1"), 2);
    }

    #[test]
    fn dtpt_two_three() {
        let q = build_quiver(QuiverKind::Dtpt { a: 2, r: 3 }).unwrap();
        assert_eq!(count(&q, "1", "1"), 3);
        assert_eq!(count(&q, "0", "1"), 5);
        assert_eq!(count(&q, "1", "0"), 2);
    }

    #[test]
    fn dtpt_without_extra_loops_is_dtpt() {
        let a = build_quiver(QuiverKind::DtptLoops { a: 0, r: 1, n: 0 }).unwrap();
        let b = build_quiver(QuiverKind::Dtpt { a: 0, r: 1 }).unwrap();
        assert_eq!(a, b);
        let c = build_quiver(QuiverKind::DtptLoops { a: 1, r: 1, n: 2 }).unwrap();
        assert_eq!(count(&c, "0", "0"), 2);
    }

    #[test]
    fn reduced_counts() {
        let q = build_quiver(QuiverKind::Reduced { r: 2 }).unwrap();
        assert_eq!(count(&q, "2", "2"), 3);
        assert_eq!(count(&q, "inf", "2"), 4);
        assert_eq!(count(&q, "2", "inf"), 2);
        assert_eq!(q.framing(), Some(("inf", 1)));
    }

    #[test]
    fn parameter_errors() {
        assert!(build_quiver(QuiverKind::Reduced { r: 0 }).is_err());
        assert!(build_quiver(QuiverKind::ExtendedAdhm { r: 1, m: 0 }).is_err());
        let mut p = BTreeMap::new();
        p.insert("r", -1);
        assert!(matches!(QuiverKind::from_name("adhm", &p), Err(Error::InvalidParameter(_))));
        assert!(QuiverKind::from_name("pentagon", &p).is_err());
    }

    #[test]
    fn json_validates() {
        let bad = r#"{"vertices":["1"],"arrows":[{"id":"x","src":"1","tgt":"2"}]}"#;
        assert!(serde_json::from_str::<Quiver>(bad).is_err());
        let q = build_quiver(QuiverKind::FramedConifold { r: 2 }).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(serde_json::from_str::<Quiver>(&s).unwrap(), q);
    }
}
