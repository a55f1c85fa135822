//! JSON interchange documents and DOT rendering.
//!
//! ```text
//! space: {"points":["x","y"],"matrix":[["0","2"],["2","0"]]}
//! tree:  {"vertices":[{"name":"x","label":"0"}],"edges":[["x","y"]],"root":"x"}
//! ```
//!
//! Rationals are strings (`"3"`, `"3/2"`, `"1.5"`). JSON is the only format
//! read back; DOT is output only.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{ParseRatError, Rat};
use crate::represent::{Node, RepresentError, RootedLabeledTree};
use crate::space::{is_valid_point_name, SpaceError, UltraSpace};
use crate::tree::{LabeledTree, TreeError};
use crate::ugvl::ExtensionResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("bad rational {value:?}: {source}")]
    Rational { value: String, source: ParseRatError },
    #[error("invalid name {0:?}: names must be nonempty and contain no whitespace, comma or quote")]
    InvalidName(String),
    #[error("root {0:?} is not a vertex")]
    UnknownRoot(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Represent(#[from] RepresentError),
}

impl DocumentError {
    /// Syntax-level failure, as opposed to well-formed but invalid content.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, DocumentError::Json(_) | DocumentError::Rational { .. })
    }
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Json(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub points: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub name: String,
    pub label: String,
    /// Ball members of a representing-tree node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedPoint {
    pub name: String,
    pub for_ball: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDocument {
    pub extended: SpaceDocument,
    pub embedding: BTreeMap<String, String>,
    pub added: Vec<AddedPoint>,
}

/// A tree document is free without a root and rooted with one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeInput {
    Free(LabeledTree),
    Rooted(RootedLabeledTree),
}

fn parse_rat(value: &str) -> Result<Rat, DocumentError> {
    value.parse().map_err(|source| DocumentError::Rational { value: value.to_owned(), source })
}

impl SpaceDocument {
    pub fn from_space(space: &UltraSpace) -> Self {
        SpaceDocument {
            points: space.names().to_vec(),
            matrix: (0..space.len()).map(|i| space.row(i).iter().map(Rat::to_string).collect()).collect(),
        }
    }

    pub fn to_space(&self) -> Result<UltraSpace, DocumentError> {
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|v| parse_rat(v)).collect())
            .collect::<Result<Vec<Vec<Rat>>, _>>()?;
        Ok(UltraSpace::new(self.points.clone(), matrix)?)
    }
}

impl TreeDocument {
    pub fn from_labeled_tree(tree: &LabeledTree) -> Self {
        TreeDocument {
            vertices: tree
                .names()
                .iter()
                .zip(tree.labels())
                .map(|(name, label)| VertexEntry {
                    name: name.clone(),
                    label: label.to_string(),
                    members: None,
                })
                .collect(),
            edges: tree
                .edges()
                .iter()
                .map(|&(u, v)| (tree.names()[u].clone(), tree.names()[v].clone()))
                .collect(),
            root: None,
        }
    }

    /// Vertices in preorder, edges parent to child, payloads as `members`.
    pub fn from_rooted_tree(tree: &RootedLabeledTree) -> Self {
        let order = tree.preorder();
        let member_names = |node: &Node| {
            node.payload.as_ref().map(|p| p.iter().map(|&i| tree.points()[i].clone()).collect())
        };
        TreeDocument {
            vertices: order
                .iter()
                .map(|&v| VertexEntry {
                    name: tree.node_name(v),
                    label: tree.node(v).label.to_string(),
                    members: member_names(tree.node(v)),
                })
                .collect(),
            edges: order
                .iter()
                .flat_map(|&v| tree.node(v).children.iter().map(move |&c| (v, c)))
                .map(|(p, c)| (tree.node_name(p), tree.node_name(c)))
                .collect(),
            root: Some(tree.node_name(tree.root())),
        }
    }

    fn names_and_labels(&self) -> Result<(Vec<String>, Vec<Rat>), DocumentError> {
        let mut names = Vec::with_capacity(self.vertices.len());
        let mut labels = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            if !is_valid_point_name(&v.name) {
                return Err(DocumentError::InvalidName(v.name.clone()));
            }
            names.push(v.name.clone());
            labels.push(parse_rat(&v.label)?);
        }
        Ok((names, labels))
    }

    /// The free tree, ignoring any root.
    pub fn to_labeled_tree(&self) -> Result<LabeledTree, DocumentError> {
        let (names, labels) = self.names_and_labels()?;
        Ok(LabeledTree::from_named_edges(names, labels, &self.edges)?)
    }

    pub fn to_tree(&self) -> Result<TreeInput, DocumentError> {
        let free = self.to_labeled_tree()?;
        let Some(root_name) = &self.root else {
            return Ok(TreeInput::Free(free));
        };
        let root = free.index_of(root_name).ok_or_else(|| DocumentError::UnknownRoot(root_name.clone()))?;

        // payload point list in order of first mention
        let mut points: Vec<String> = Vec::new();
        let mut payloads = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            payloads.push(match &v.members {
                None => None,
                Some(ms) => {
                    let mut set = Vec::with_capacity(ms.len());
                    for m in ms {
                        if !is_valid_point_name(m) {
                            return Err(DocumentError::InvalidName(m.clone()));
                        }
                        let idx = match points.iter().position(|p| p == m) {
                            Some(i) => i,
                            None => {
                                points.push(m.clone());
                                points.len() - 1
                            }
                        };
                        set.push(idx);
                    }
                    set.sort_unstable();
                    set.dedup();
                    Some(set)
                }
            });
        }

        let mut nodes: Vec<Node> = (0..free.len())
            .map(|i| Node {
                label: free.label(i).clone(),
                children: Vec::new(),
                payload: payloads[i].take(),
                name: Some(free.names()[i].clone()),
            })
            .collect();
        let mut visited = vec![false; free.len()];
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in free.neighbors(v) {
                if !visited[w] {
                    visited[w] = true;
                    nodes[v].children.push(w);
                    queue.push_back(w);
                }
            }
        }
        Ok(TreeInput::Rooted(RootedLabeledTree::new(nodes, root, points)?))
    }
}

impl ExtensionDocument {
    pub fn from_extension(original: &UltraSpace, ext: &ExtensionResult) -> Self {
        let names = ext.extended.names();
        ExtensionDocument {
            extended: SpaceDocument::from_space(&ext.extended),
            embedding: ext
                .embedding
                .iter()
                .enumerate()
                .map(|(i, &j)| (original.name(i).to_owned(), names[j].clone()))
                .collect(),
            added: ext
                .added
                .iter()
                .map(|(p, ball)| AddedPoint {
                    name: names[*p].clone(),
                    for_ball: ball.members().iter().map(|&m| original.name(m).to_owned()).collect(),
                })
                .collect(),
        }
    }
}

pub fn parse_space_json(text: &str) -> Result<UltraSpace, DocumentError> {
    serde_json::from_str::<SpaceDocument>(text)?.to_space()
}

pub fn parse_tree_json(text: &str) -> Result<TreeInput, DocumentError> {
    serde_json::from_str::<TreeDocument>(text)?.to_tree()
}

pub fn parse_labeled_tree_json(text: &str) -> Result<LabeledTree, DocumentError> {
    serde_json::from_str::<TreeDocument>(text)?.to_labeled_tree()
}

/// Indented JSON that keeps flat arrays and flat objects on one line, so a
/// matrix prints one row per line.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out
}

fn is_flat(value: &serde_json::Value) -> bool {
    use serde_json::Value;
    match value {
        Value::Array(items) => items.iter().all(|v| !v.is_array() && !v.is_object()),
        Value::Object(map) => map.values().all(|v| !v.is_array() && !v.is_object()),
        _ => true,
    }
}

fn write_value(out: &mut String, value: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    if is_flat(value) {
        out.push_str(&serde_json::to_string(value).expect("values serialize"));
        return;
    }
    let pad = "  ".repeat(depth + 1);
    let (open, close) = if value.is_array() { ('[', ']') } else { ('{', '}') };
    out.push(open);
    let mut first = true;
    let mut item = |out: &mut String, key: Option<&str>, v: &Value| {
        out.push_str(if first { "\n" } else { ",\n" });
        first = false;
        out.push_str(&pad);
        if let Some(k) = key {
            out.push_str(&serde_json::to_string(k).expect("keys serialize"));
            out.push_str(": ");
        }
        write_value(out, v, depth + 1);
    };
    match value {
        Value::Array(items) => items.iter().for_each(|v| item(out, None, v)),
        Value::Object(map) => map.iter().for_each(|(k, v)| item(out, Some(k), v)),
        _ => unreachable!("scalars are flat"),
    }
    out.push('\n');
    out.push_str(&"  ".repeat(depth));
    out.push(close);
}

/// Undirected DOT, each vertex captioned with name and label.
pub fn labeled_tree_dot(tree: &LabeledTree) -> String {
    let mut out = String::from("graph labeled_tree {\n");
    for (name, label) in tree.names().iter().zip(tree.labels()) {
        let _ = writeln!(out, "  \"{name}\" [label=\"{name}: {label}\"];");
    }
    for &(u, v) in tree.edges() {
        let _ = writeln!(out, "  \"{}\" -- \"{}\";", tree.names()[u], tree.names()[v]);
    }
    out.push_str("}\n");
    out
}

/// Directed DOT, parent to child. Nodes with payloads are captioned
/// `label | {members}`.
pub fn rooted_tree_dot(tree: &RootedLabeledTree) -> String {
    let mut out = String::from("digraph rooted_tree {\n");
    let order = tree.preorder();
    for &v in &order {
        let node = tree.node(v);
        let caption = match &node.payload {
            Some(p) => {
                let members: Vec<&str> = p.iter().map(|&i| tree.points()[i].as_str()).collect();
                format!("{} | {{{}}}", node.label, members.join(","))
            }
            None => format!("{}: {}", tree.node_name(v), node.label),
        };
        let _ = writeln!(out, "  \"{}\" [label=\"{caption}\"];", tree.node_name(v));
    }
    for &v in &order {
        for &c in &tree.node(v).children {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", tree.node_name(v), tree.node_name(c));
        }
    }
    out.push_str("}\n");
    out
}
