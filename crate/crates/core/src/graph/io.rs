//! Text format: `v <id> [weight]` and `e <id> <u> <v>` lines, `#` comments.
//! Edge ids must run `1..=|E|` in file order.

use super::Graph;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;

impl Graph {
    pub fn parse(text: &str) -> Result<Graph> {
        let mut ids: HashMap<i64, usize> = HashMap::new();
        let mut weights = Vec::new();
        let mut raw_edges = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let int = |s: &str| s.parse::<i64>().map_err(|_| err(format!("expected an integer, found {s:?}")));
            match fields[0] {
                "v" => {
                    if !(2..=3).contains(&fields.len()) {
                        return Err(err("expected `v <id> [weight]`".into()));
                    }
                    let id = int(fields[1])?;
                    let w = if fields.len() == 3 { int(fields[2])? } else { 0 };
                    if w < 0 {
                        return Err(err("negative weight".into()));
                    }
                    if ids.insert(id, weights.len()).is_some() {
                        return Err(err(format!("duplicate vertex {id}")));
                    }
                    weights.push(u32::try_from(w).map_err(|_| err("weight too large".into()))?);
                }
                "e" => {
                    if fields.len() != 4 {
                        return Err(err("expected `e <id> <u> <v>`".into()));
                    }
                    let id = int(fields[1])?;
                    if id != raw_edges.len() as i64 + 1 {
                        return Err(err(format!("edge id {id} out of sequence")));
                    }
                    raw_edges.push((int(fields[2])?, int(fields[3])?, line_no));
                }
                other => return Err(err(format!("unknown declaration {other:?}"))),
            }
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (a, b, line) in raw_edges {
            let look = |x: i64| ids.get(&x).copied().ok_or(Error::Parse { line, msg: format!("undeclared vertex {x}") });
            edges.push((look(a)?, look(b)?));
        }
        Graph::with_weights(weights, &edges)
    }

    /// Renders the text format with vertices numbered from 1.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, &w) in self.weights().iter().enumerate() {
            if w == 0 {
                let _ = writeln!(s, "v {}", v + 1);
            } else {
                let _ = writeln!(s, "v {} {}", v + 1, w);
            }
        }
        for (i, &(a, b)) in self.edges().iter().enumerate() {
            let _ = writeln!(s, "e {} {} {}", i + 1, a + 1, b + 1);
        }
        s
    }
}
