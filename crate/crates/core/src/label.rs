//! Vertex labels.
//!
//! Original vertices carry atomic labels. Every vertex created by a
//! subdivision is named after the vertices it was built from: the
//! barycenter of `{a, b, c}` is `[a,b,c]`, the midpoint of the edge between
//! `[a,b]` and `c` is `[[a,b],c]`. Parsing a label recovers this history.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Arc<str>);

/// Parsed form of a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelTree {
    Atom(String),
    Node(Vec<LabelTree>),
}

fn is_atom_char(c: char) -> bool {
    !(c == '[' || c == ']' || c == ',' || c.is_whitespace())
}

impl VertexId {
    /// Builds a label, rejecting strings that do not parse.
    pub fn new(label: &str) -> Result<Self> {
        parse_tree(label)?;
        Ok(VertexId(Arc::from(label)))
    }

    /// Label for a vertex built from `parts` (sorted, deduplicated).
    /// A single part names itself.
    pub fn barycenter<'a, I>(parts: I) -> Self
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let mut parts: Vec<&VertexId> = parts.into_iter().collect();
        parts.sort();
        parts.dedup();
        if parts.len() == 1 {
            return parts[0].clone();
        }
        let inner: Vec<&str> = parts.iter().map(|p| p.as_str()).collect();
        VertexId(Arc::from(format!("[{}]", inner.join(","))))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_atom(&self) -> bool {
        !self.0.starts_with('[')
    }

    pub fn tree(&self) -> LabelTree {
        parse_tree(&self.0).expect("labels are validated on construction")
    }

    /// Atomic labels occurring anywhere inside this label.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        collect_atoms(&self.tree(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Appends a prime to every atom. Used to separate the vertex sets of
    /// join factors.
    pub fn primed(&self) -> Self {
        VertexId(Arc::from(render(&prime_tree(self.tree()))))
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s).unwrap_or_else(|e| panic!("bad vertex label {s:?}: {e}"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VertexId::new(&s).map_err(serde::de::Error::custom)
    }
}

fn collect_atoms(t: &LabelTree, out: &mut Vec<String>) {
    match t {
        LabelTree::Atom(a) => out.push(a.clone()),
        LabelTree::Node(children) => children.iter().for_each(|c| collect_atoms(c, out)),
    }
}

fn prime_tree(t: LabelTree) -> LabelTree {
    match t {
        LabelTree::Atom(a) => LabelTree::Atom(format!("{a}'")),
        LabelTree::Node(children) => LabelTree::Node(children.into_iter().map(prime_tree).collect()),
    }
}

fn render(t: &LabelTree) -> String {
    match t {
        LabelTree::Atom(a) => a.clone(),
        LabelTree::Node(children) => {
            let inner: Vec<String> = children.iter().map(render).collect();
            format!("[{}]", inner.join(","))
        }
    }
}

pub fn parse_tree(s: &str) -> Result<LabelTree> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let tree = parse_at(&chars, &mut pos).map_err(|m| Error::MalformedInput(format!("label {s:?}: {m}")))?;
    if pos != chars.len() {
        return Err(Error::MalformedInput(format!("label {s:?}: trailing characters")));
    }
    Ok(tree)
}

fn parse_at(chars: &[char], pos: &mut usize) -> std::result::Result<LabelTree, String> {
    if *pos < chars.len() && chars[*pos] == '[' {
        *pos += 1;
        let mut children = vec![parse_at(chars, pos)?];
        loop {
            match chars.get(*pos) {
                Some(',') => {
                    *pos += 1;
                    children.push(parse_at(chars, pos)?);
                }
                Some(']') => {
                    *pos += 1;
                    break;
                }
                _ => return Err("unterminated list".into()),
            }
        }
        if children.len() < 2 {
            return Err("a composite label needs at least two parts".into());
        }
        Ok(LabelTree::Node(children))
    } else {
        let start = *pos;
        while *pos < chars.len() && is_atom_char(chars[*pos]) {
            *pos += 1;
        }
        if start == *pos {
            return Err("empty atom".into());
        }
        Ok(LabelTree::Atom(chars[start..*pos].iter().collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barycenter_labels_round_trip() {
        let a = VertexId::from("a");
        let b = VertexId::from("b");
        let c = VertexId::from("c");
        let ab = VertexId::barycenter([&b, &a]);
        assert_eq!(ab.as_str(), "[a,b]");
        let abc = VertexId::barycenter([&c, &ab]);
        assert_eq!(abc.as_str(), "[[a,b],c]");
        assert_eq!(
            abc.tree(),
            LabelTree::Node(vec![
                LabelTree::Node(vec![LabelTree::Atom("a".into()), LabelTree::Atom("b".into())]),
                LabelTree::Atom("c".into()),
            ])
        );
        assert_eq!(abc.atoms(), vec!["a", "b", "c"]);
        assert_eq!(VertexId::barycenter([&a]), a);
    }

    #[test]
    fn rejects_malformed_labels() {
        for bad in ["", "[a]", "[a,b", "a b", "[a,,b]", "a]"] {
            assert!(VertexId::new(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn priming_touches_atoms_only() {
        assert_eq!(VertexId::from("[a,[b,c]]").primed().as_str(), "[a',[b',c']]");
    }
}
