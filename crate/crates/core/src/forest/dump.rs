//! Line-based text snapshot of a forest.
//!
//! ```text
//! # forest dump v1
//! tree <id> <init|target|local> <root id> <absorbed-into id | ->
//! node <id> <tree id> <parent id | -> <cost | -> <coord>...
//! bridge <init node> <target node>
//! best <init node> <target node> <cost>
//! sampler <coord>...
//! path <coord>...
//! ```
//!
//! `path` lines list the best solution's waypoints in order. Blank lines and
//! lines starting with `#` are ignored. Floats use Rust's shortest
//! round-trip formatting, so dumps parse back exactly.

use std::fmt::Write as _;

use super::TreeKind;

#[derive(Clone, Debug, PartialEq)]
pub struct DumpTree {
    pub id: usize,
    pub kind: TreeKind,
    pub root: usize,
    pub absorbed_into: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DumpNode {
    pub id: usize,
    pub tree: usize,
    pub parent: Option<usize>,
    pub cost: Option<f64>,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ForestDump {
    pub trees: Vec<DumpTree>,
    pub nodes: Vec<DumpNode>,
    pub bridges: Vec<(usize, usize)>,
    pub best: Option<(usize, usize, f64)>,
    pub samplers: Vec<Vec<f64>>,
    pub path: Vec<Vec<f64>>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("line {line}: {reason}")]
pub struct DumpError {
    pub line: usize,
    pub reason: String,
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn coords(out: &mut String, c: &[f64]) {
    for x in c {
        let _ = write!(out, " {x}");
    }
}

impl ForestDump {
    pub fn to_text(&self) -> String {
        let mut out = String::from("# forest dump v1\n");
        for t in &self.trees {
            let _ = writeln!(out, "tree {} {} {} {}", t.id, t.kind.as_str(), t.root, opt(t.absorbed_into));
        }
        for n in &self.nodes {
            let _ = write!(out, "node {} {} {} {}", n.id, n.tree, opt(n.parent), opt(n.cost));
            coords(&mut out, &n.coords);
            out.push('\n');
        }
        for (a, b) in &self.bridges {
            let _ = writeln!(out, "bridge {a} {b}");
        }
        if let Some((a, b, c)) = self.best {
            let _ = writeln!(out, "best {a} {b} {c}");
        }
        for s in &self.samplers {
            out.push_str("sampler");
            coords(&mut out, s);
            out.push('\n');
        }
        for p in &self.path {
            out.push_str("path");
            coords(&mut out, p);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, DumpError> {
        let mut dump = ForestDump::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| DumpError { line: i + 1, reason };
            let mut fields = line.split_whitespace();
            let tag = fields.next().unwrap_or_default();
            let rest: Vec<&str> = fields.collect();
            let int = |s: &str| s.parse::<usize>().map_err(|e| err(format!("bad integer {s:?}: {e}")));
            let float = |s: &str| s.parse::<f64>().map_err(|e| err(format!("bad number {s:?}: {e}")));
            let opt_int = |s: &str| if s == "-" { Ok(None) } else { int(s).map(Some) };
            let need = |n: usize| {
                if rest.len() < n {
                    Err(err(format!("{tag} needs at least {n} fields, got {}", rest.len())))
                } else {
                    Ok(())
                }
            };
            match tag {
                "tree" => {
                    need(4)?;
                    let kind = match rest[1] {
                        "init" => TreeKind::Init,
                        "target" => TreeKind::Target,
                        "local" => TreeKind::Local,
                        other => return Err(err(format!("unknown tree kind {other:?}"))),
                    };
                    dump.trees.push(DumpTree {
                        id: int(rest[0])?,
                        kind,
                        root: int(rest[2])?,
                        absorbed_into: opt_int(rest[3])?,
                    });
                }
                "node" => {
                    need(5)?;
                    dump.nodes.push(DumpNode {
                        id: int(rest[0])?,
                        tree: int(rest[1])?,
                        parent: opt_int(rest[2])?,
                        cost: if rest[3] == "-" { None } else { Some(float(rest[3])?) },
                        coords: rest[4..].iter().map(|s| float(s)).collect::<Result<_, _>>()?,
                    });
                }
                "bridge" => {
                    need(2)?;
                    dump.bridges.push((int(rest[0])?, int(rest[1])?));
                }
                "best" => {
                    need(3)?;
                    dump.best = Some((int(rest[0])?, int(rest[1])?, float(rest[2])?));
                }
                "sampler" | "path" => {
                    need(1)?;
                    let c = rest.iter().map(|s| float(s)).collect::<Result<_, _>>()?;
                    if tag == "sampler" {
                        dump.samplers.push(c);
                    } else {
                        dump.path.push(c);
                    }
                }
                other => return Err(err(format!("unknown record {other:?}"))),
            }
        }
        dump.validate()?;
        Ok(dump)
    }

    /// Cross-reference check: ids in range, parents known.
    fn validate(&self) -> Result<(), DumpError> {
        let err = |reason: String| Err(DumpError { line: 0, reason });
        let dims: Vec<usize> = self.nodes.iter().map(|n| n.coords.len()).collect();
        if dims.windows(2).any(|w| w[0] != w[1]) {
            return err("nodes disagree on dimension".into());
        }
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id != i {
                return err(format!("node ids must be 0..{n} in order, found {} at {i}", node.id));
            }
            if node.parent.is_some_and(|p| p >= n) {
                return err(format!("node {i} has unknown parent"));
            }
            if node.tree >= self.trees.len() {
                return err(format!("node {i} has unknown tree {}", node.tree));
            }
        }
        for &(a, b) in &self.bridges {
            if a >= n || b >= n {
                return err(format!("bridge {a}-{b} references unknown nodes"));
            }
        }
        Ok(())
    }
}
