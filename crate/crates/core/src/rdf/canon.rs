//! Label-independent ordering of blank nodes.
//!
//! Blank node labels carry no meaning, so anything that must be
//! byte-deterministic (serialization) orders blanks by their surroundings
//! instead. Colours start uniform and are refined from neighbour colours
//! until the partition stops splitting; the original label only breaks ties
//! between nodes the refinement cannot tell apart.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Graph, Term};

enum Dir {
    Out,
    In,
}

fn render(term: &Term, colors: &HashMap<&str, usize>) -> String {
    match term {
        Term::Blank(b) => format!("_{}", colors.get(b.as_str()).copied().unwrap_or(0)),
        other => other.to_string(),
    }
}

/// Rank of every blank node label, `0..n`.
pub fn blank_ranks(graph: &Graph) -> BTreeMap<String, usize> {
    let mut edges: HashMap<&str, Vec<(Dir, &str, &Term)>> = HashMap::new();
    for t in &graph.triples {
        if let Term::Blank(s) = &t.subject {
            edges.entry(s).or_default().push((Dir::Out, &t.predicate, &t.object));
        }
        if let Term::Blank(o) = &t.object {
            edges.entry(o).or_default().push((Dir::In, &t.predicate, &t.subject));
        }
    }
    let labels: BTreeSet<&str> = edges.keys().copied().collect();
    let mut colors: HashMap<&str, usize> = labels.iter().map(|l| (*l, 0)).collect();
    let mut classes = 1;
    for _ in 0..=labels.len() {
        let sigs: HashMap<&str, (usize, Vec<String>)> = labels
            .iter()
            .map(|l| {
                let mut sig: Vec<String> = edges[l]
                    .iter()
                    .map(|(dir, p, other)| {
                        let d = match dir {
                            Dir::Out => 'o',
                            Dir::In => 'i',
                        };
                        format!("{d} {p} {}", render(other, &colors))
                    })
                    .collect();
                sig.sort();
                (*l, (colors[l], sig))
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<String>)> = sigs.values().collect();
        let index: HashMap<&(usize, Vec<String>), usize> = distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: HashMap<&str, usize> = sigs.iter().map(|(l, s)| (*l, index[s])).collect();
        let stable = distinct.len() == classes;
        classes = distinct.len();
        colors = next;
        if stable {
            break;
        }
    }
    let mut order: Vec<&str> = labels.into_iter().collect();
    order.sort_by_key(|l| (colors[l], *l));
    order.into_iter().enumerate().map(|(i, l)| (l.to_string(), i)).collect()
}
