//! GraphViz rendering of a portrait: one node per point, an edge from each
//! point to its image, periodic points drawn as double circles.

use std::fmt::Write;

use preperiodic::portrait::Portrait;
use preperiodic::ProjPoint;

/// `a/b`, an integer, or `inf`; safe inside a quoted DOT ID.
pub fn label(p: &ProjPoint) -> String {
    p.to_string()
}

/// Nodes in `(y, x)` order, then edges in the order of their sources.
pub fn portrait_dot(name: &str, p: &Portrait) -> String {
    let points = p.points();
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", name.replace('\\', "\\\\").replace('"', "\\\"")).unwrap();
    out.push_str("  node [shape=circle];\n");
    for q in &points {
        let shape = if p.is_periodic(q) { ", shape=doublecircle" } else { "" };
        writeln!(out, "  \"{0}\" [label=\"{0}\"{shape}];", label(q)).unwrap();
    }
    for q in &points {
        let image = p.map.apply(q);
        writeln!(out, "  \"{}\" -> \"{}\";", label(q), label(&image)).unwrap();
    }
    out.push_str("}\n");
    out
}
