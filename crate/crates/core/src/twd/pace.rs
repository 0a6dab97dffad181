//! PACE `.gr` / `.td` text formats (1-based vertex and bag ids).

use thiserror::Error;

use super::{Graph, TreeDecomposition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PaceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
}

fn err(line: usize, msg: impl Into<String>) -> PaceError {
    PaceError::Parse { line: line + 1, msg: msg.into() }
}

fn nums(line_no: usize, toks: &[&str]) -> Result<Vec<usize>, PaceError> {
    toks.iter()
        .map(|t| t.parse::<usize>().map_err(|_| err(line_no, format!("bad number `{t}`"))))
        .collect()
}

pub fn write_gr(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.num_vertices(), g.num_edges());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

pub fn read_gr(text: &str) -> Result<Graph, PaceError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => continue,
            Some(&"p") => {
                if toks.len() != 4 || toks[1] != "tw" {
                    return Err(err(i, "expected `p tw <n> <m>`"));
                }
                n = Some(nums(i, &toks[2..3])?[0]);
            }
            Some(_) => {
                let n = n.ok_or(PaceError::MissingHeader)?;
                let e = nums(i, &toks)?;
                if e.len() != 2 || e.iter().any(|&x| x == 0 || x > n) {
                    return Err(err(i, "bad edge"));
                }
                edges.push((e[0] - 1, e[1] - 1));
            }
        }
    }
    Ok(Graph::from_edges(n.ok_or(PaceError::MissingHeader)?, edges))
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let max_bag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags().len(), max_bag, td.num_graph_vertices());
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for &v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

pub fn read_td(text: &str) -> Result<TreeDecomposition, PaceError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => continue,
            Some(&"s") => {
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(err(i, "expected `s td <bags> <width+1> <n>`"));
                }
                let h = nums(i, &toks[2..])?;
                header = Some((h[0], h[2]));
                bags = vec![None; h[0]];
            }
            Some(&"b") => {
                let (nb, n) = header.ok_or(PaceError::MissingHeader)?;
                let v = nums(i, &toks[1..])?;
                let id = *v.first().ok_or_else(|| err(i, "bag without id"))?;
                if id == 0 || id > nb {
                    return Err(err(i, "bag id out of range"));
                }
                if v[1..].iter().any(|&x| x == 0 || x > n) {
                    return Err(err(i, "bag vertex out of range"));
                }
                bags[id - 1] = Some(v[1..].iter().map(|x| x - 1).collect());
            }
            Some(_) => {
                let (nb, _) = header.ok_or(PaceError::MissingHeader)?;
                let e = nums(i, &toks)?;
                if e.len() != 2 || e.iter().any(|&x| x == 0 || x > nb) {
                    return Err(err(i, "bad tree edge"));
                }
                edges.push((e[0] - 1, e[1] - 1));
            }
        }
    }
    let (_, n) = header.ok_or(PaceError::MissingHeader)?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| PaceError::Parse { line: 0, msg: format!("bag {} missing", i + 1) }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TreeDecomposition::new(n, bags, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twd::{decompose, Heuristic};

    #[test]
    fn round_trip_is_exact() {
        let g = Graph::grid(3, 4);
        let gr = write_gr(&g);
        assert_eq!(read_gr(&gr).unwrap(), g);
        assert_eq!(write_gr(&read_gr(&gr).unwrap()), gr);
        let td = decompose(&g, Heuristic::MinFill);
        let text = write_td(&td);
        let back = read_td(&text).unwrap();
        assert_eq!(back, td);
        assert_eq!(write_td(&back), text);
    }

    #[test]
    fn handwritten_td() {
        let text = "c example\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let td = read_td(text).unwrap();
        assert_eq!(td.bags(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(write_td(&td), "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
        assert!(read_td("b 1 1\n").is_err());
        assert!(read_gr("p tw 2 1\n1 3\n").is_err());
    }
}
