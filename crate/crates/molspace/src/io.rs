//! Graph text formats: JSON `{"vertices":[...],"edges":[[a,b],...]}` and an
//! edge list with one `a b` pair per line, isolated points as `v a`.

use crate::error::{Error, Result};
use crate::graph::MolecularSpace;

pub fn to_json(g: &MolecularSpace) -> String {
    serde_json::to_string(g).expect("graphs serialize")
}

pub fn from_json(text: &str) -> Result<MolecularSpace> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_edgelist(g: &MolecularSpace) -> String {
    let mut out = String::new();
    for (i, v) in g.vertices().iter().enumerate() {
        if g.degree(i) == 0 {
            out.push_str(&format!("v {}\n", v.0));
        }
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("{} {}\n", a.0, b.0));
    }
    out
}

/// Blank lines and lines starting with `#` are skipped.
pub fn from_edgelist(text: &str) -> Result<MolecularSpace> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: {line:?}", n + 1));
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["v", a] => vertices.push(a.parse::<u32>().map_err(|_| bad())?),
            [a, b] => {
                let (a, b) = (a.parse::<u32>().map_err(|_| bad())?, b.parse::<u32>().map_err(|_| bad())?);
                vertices.extend([a, b]);
                edges.push((a, b));
            }
            _ => return Err(bad()),
        }
    }
    vertices.sort_unstable();
    vertices.dedup();
    MolecularSpace::new(vertices, edges)
}

/// JSON when the text starts with `{`, edge list otherwise. Text with no
/// content at all is an error rather than the empty graph.
pub fn parse_graph(text: &str) -> Result<MolecularSpace> {
    let t = text.trim_start();
    if t.is_empty() {
        return Err(Error::Parse("no graph in input".into()));
    }
    if t.starts_with('{') {
        from_json(t)
    } else {
        from_edgelist(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fixtures;

    #[test]
    fn round_trips() {
        for e in fixtures() {
            assert_eq!(from_json(&to_json(&e.space)).unwrap(), e.space, "{}", e.name);
            assert_eq!(from_edgelist(&to_edgelist(&e.space)).unwrap(), e.space, "{}", e.name);
        }
        let g = MolecularSpace::new([3, 7, 9], [(3, 9)]).unwrap();
        assert_eq!(to_edgelist(&g), "v 7\n3 9\n");
        assert_eq!(to_json(&g), r#"{"vertices":[3,7,9],"edges":[[3,9]]}"#);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_graph(""), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("1 2 3"), Err(Error::Parse(_))));
        assert!(matches!(parse_graph("{\"vertices\":[1]"), Err(Error::Parse(_))));
        assert!(parse_graph("# only a comment\n1 1").is_err());
        assert_eq!(parse_graph("# c\n\n1 2\n").unwrap().weight(), 1);
    }
}
