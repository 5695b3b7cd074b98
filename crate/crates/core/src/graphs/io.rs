//! JSON graph files and DOT export.
//!
//! Schema:
//!
//! ```json
//! {"type": "constraint", "q": 3, "edges": [[0,1],[1,2]], "loops": [0,1,2],
//!  "labels": {"0": "green", "1": "yellow", "2": "red"}}
//! ```
//!
//! `edges` lists each undirected edge once. Instead of `edges`, a file may
//! give `adjacency` as one neighbour list per node; such lists must be
//! symmetric. Loops are only legal for constraint graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Board, ConstraintGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Constraint,
    Board,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(rename = "type")]
    pub kind: GraphKind,
    pub q: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<Vec<usize>>>,
}

impl GraphFile {
    /// Undirected edge list `(i, j)` with loops as `(i, i)`, after validating
    /// ranges and symmetry.
    fn edge_list(&self) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for &[a, b] in &self.edges {
            out.push((a, b));
        }
        for &l in &self.loops {
            out.push((l, l));
        }
        if let Some(adj) = &self.adjacency {
            if adj.len() != self.q {
                return Err(Error::LengthMismatch { expected: self.q, got: adj.len() });
            }
            for (a, list) in adj.iter().enumerate() {
                for &b in list {
                    if b >= self.q {
                        return Err(Error::IndexOutOfRange { index: b, len: self.q });
                    }
                    if !adj[b].contains(&a) {
                        return Err(Error::Asymmetric(a, b));
                    }
                    if a <= b {
                        out.push((a, b));
                    }
                }
            }
        }
        for &(a, b) in &out {
            for idx in [a, b] {
                if idx >= self.q {
                    return Err(Error::IndexOutOfRange { index: idx, len: self.q });
                }
            }
        }
        Ok(out)
    }

    pub fn into_constraint(self) -> Result<ConstraintGraph> {
        if self.kind != GraphKind::Constraint {
            return Err(Error::Malformed("expected \"type\": \"constraint\"".into()));
        }
        let g = ConstraintGraph::new(self.q, self.edge_list()?)?;
        if self.labels.is_empty() {
            return Ok(g);
        }
        let mut names: Vec<String> = (0..self.q).map(|i| i.to_string()).collect();
        for (k, v) in &self.labels {
            let i: usize = k.parse().map_err(|_| Error::Malformed(format!("label key `{k}` is not a node index")))?;
            if i >= self.q {
                return Err(Error::IndexOutOfRange { index: i, len: self.q });
            }
            names[i] = v.clone();
        }
        g.with_labels(names)
    }

    pub fn into_board(self) -> Result<Board> {
        if self.kind != GraphKind::Board {
            return Err(Error::Malformed("expected \"type\": \"board\"".into()));
        }
        if let Some(&l) = self.loops.first() {
            return Err(Error::BoardLoop(l));
        }
        Board::new(self.q, self.edge_list()?)
    }

    pub fn from_constraint(h: &ConstraintGraph) -> Self {
        let labels = h
            .labels()
            .map(|l| l.iter().enumerate().map(|(i, s)| (i.to_string(), s.clone())).collect())
            .unwrap_or_default();
        Self {
            kind: GraphKind::Constraint,
            q: h.q(),
            edges: h.edges().iter().filter(|(i, j)| i != j).map(|&(i, j)| [i, j]).collect(),
            loops: h.loops().collect(),
            labels,
            adjacency: None,
        }
    }

    pub fn from_board(g: &Board) -> Self {
        Self {
            kind: GraphKind::Board,
            q: g.n_sites(),
            edges: g.edges().iter().map(|&(a, b)| [a as usize, b as usize]).collect(),
            loops: Vec::new(),
            labels: BTreeMap::new(),
            adjacency: None,
        }
    }
}

pub fn constraint_from_json(text: &str) -> Result<ConstraintGraph> {
    serde_json::from_str::<GraphFile>(text)?.into_constraint()
}

pub fn board_from_json(text: &str) -> Result<Board> {
    serde_json::from_str::<GraphFile>(text)?.into_board()
}

pub fn constraint_to_json(h: &ConstraintGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_constraint(h)).expect("serializable")
}

pub fn board_to_json(g: &Board) -> String {
    serde_json::to_string_pretty(&GraphFile::from_board(g)).expect("serializable")
}

pub fn load_constraint(path: impl AsRef<Path>) -> Result<ConstraintGraph> {
    constraint_from_json(&std::fs::read_to_string(path)?)
}

pub fn load_board(path: impl AsRef<Path>) -> Result<Board> {
    board_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_constraint(h: &ConstraintGraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, constraint_to_json(h))?;
    Ok(())
}

pub fn save_board(g: &Board, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, board_to_json(g))?;
    Ok(())
}

/// Undirected DOT; loops are drawn as self-edges.
pub fn constraint_to_dot(h: &ConstraintGraph) -> String {
    let mut out = String::from("graph H {\n");
    for i in 0..h.q() {
        let _ = writeln!(out, "  {i} [label=\"{}\"];", h.label(i));
    }
    for &(i, j) in h.edges() {
        let _ = writeln!(out, "  {i} -- {j};");
    }
    out.push_str("}\n");
    out
}

/// Undirected DOT for a board, optionally labelling each site with a spin.
pub fn board_to_dot(g: &Board, spins: Option<&[u8]>) -> String {
    let mut out = String::from("graph G {\n");
    for s in 0..g.n_sites() {
        match spins {
            Some(sp) => {
                let _ = writeln!(out, "  {s} [label=\"{}\"];", sp[s]);
            }
            None => {
                let _ = writeln!(out, "  {s};");
            }
        }
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}
